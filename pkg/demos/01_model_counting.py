"""Counting models of a compiled circuit in different semirings.

The same circuit file answers satisfiability, model counting, weighted
model counting, and their log/max variants, just by swapping the algebra.
"""

from pathlib import Path

from amckit import LiteralMap, forward, make_semiring, parse_d4, parse_weights, smooth

DATA = Path(__file__).resolve().parent.parent / "data"

# (x or y) and z, compiled as a small decision-DNNF file
circuit = parse_d4(DATA / "example2.nnf")
print(f"parsed: {circuit.node_count} nodes, {circuit.edge_count} edges, "
      f"{circuit.num_vars} variables")

# the raw file is not smooth (one branch of the sum never mentions y),
# so we normalize it once and evaluate everywhere
circuit = smooth(circuit)
print(f"smoothed: {circuit.node_count} nodes\n")

# Boolean semiring, all-true labels: satisfiability
boolean = make_semiring("bool")
sat = forward(circuit, LiteralMap(3, True), boolean).root_value
print(f"bool      SAT          -> {boolean.format_value(sat)}")

# counting semiring, unit labels: number of models
nat = make_semiring("nat")
count = forward(circuit, LiteralMap(3, 1), nat).root_value
print(f"nat       #models      -> {count}")

# probability semiring with Bernoulli weights: weighted model count
prob = make_semiring("prob")
weights = parse_weights(DATA / "example1.w", prob)
wmc = forward(circuit, weights, prob).root_value
print(f"prob      weighted     -> {wmc}")

# same weights in log space: numerically stable for long products
log = make_semiring("log")
log_weights = parse_weights(DATA / "example1.w", log)
log_wmc = forward(circuit, log_weights, log).root_value
print(f"log       log-weighted -> {log_wmc}")

# max-product: probability of the single most likely model
viterbi = make_semiring("viterbi")
weights_v = parse_weights(DATA / "example1.w", viterbi)
mpe = forward(circuit, weights_v, viterbi).root_value
print(f"viterbi   best model   -> {mpe}")
