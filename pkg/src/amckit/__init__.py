"""amckit: semiring model counts and gradients on decision-DNNF circuits.

The library evaluates the weighted count of a compiled Boolean circuit in a
pluggable commutative semiring and, in one backward pass, the vector of
counts conditioned on every literal. On top of that single primitive it
provides EM conditionals, conditional entropies, max-gradient signals, an
unbiased sampled gradient estimator, and second-derivative rows, plus a
brute-force enumeration oracle against which everything is tested.
"""

from .backprop import (ForwardTape, backward_cancel, backward_dynamic,
                       backward_naive, backward_optimized, forward, grad_amc,
                       structural_gate, variable_gradient)
from .bench import (BenchRecord, CSV_HEADER, loglog_slope, measure,
                    records_to_csv, run_suite, star_circuit, uniform_labels)
from .circuits import (Circuit, CircuitBuilder, StructureReport,
                       circuit_to_formula, compile_to_mods, compute_scopes,
                       default_labels, models_to_circuit, parse_d4,
                       parse_weights, prune_unreachable, smooth, validate,
                       write_d4)
from .errors import (AmckitError, ConfigError, ParseError, ScaleError,
                     StructureError, UnsupportedOperationError)
from .formulas import (And, Bottom, Formula, Lit, Not, Or, Top, condition,
                       enumerate_models, evaluate, formula_variables,
                       oracle_amc, oracle_grad, oracle_hessian, read_dimacs)
from .learning import (BernoulliParams, SampleBatch, conditional_entropy,
                       em_conditionals, hessian_row, indecater_estimate,
                       matrix_to_circuit, matrix_vec_to_circuit, mpe_gradient)
from .literals import LiteralMap, literal_order, negate, var_of
from .semirings import (SEMIRING_NAMES, DualValue, Polynomial, Semiring,
                        logaddexp, make_semiring)

__version__ = "0.1.0"
