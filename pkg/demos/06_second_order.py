"""Second-order information: Hessian rows and hard-instance embeddings.

Seeding the dual-number tangent at one literal turns the gradient pass
into a row of the Hessian of the weighted model count. The GF(2) embedding
shows why no shortcut to the full matrix exists: any bit matrix can be
planted as the Hessian of a well-structured circuit of quadratic size.
"""

from pathlib import Path

import numpy as np

from amckit import (BernoulliParams, LiteralMap, circuit_to_formula, forward,
                    hessian_row, make_semiring, matrix_to_circuit,
                    oracle_hessian, parse_d4, smooth, validate)

DATA = Path(__file__).resolve().parent.parent / "data"

circuit = smooth(parse_d4(DATA / "example2.nnf"))
params = BernoulliParams([0.5, 0.1, 0.8])
prob = make_semiring("prob")

print("Hessian row for y = x (second partials towards alpha(x)):")
row = hessian_row(circuit, params, 1)
for lit in row.literals():
    print(f"  d2/d(alpha({lit:>2}) d alpha(x)) = {row.get(lit):.6f}")
print("  the (x, z) entry is 1.0: conditioning on both leaves a tautology over y")

# finite-difference sanity check of one mixed partial
labels = params.prob_labels()
h = 1e-4
def count(dx, dz):
    lab = labels.copy()
    lab.set(1, labels.get(1) + dx)
    lab.set(3, labels.get(3) + dz)
    return forward(circuit, lab, prob).root_value
fd = (count(h, h) - count(h, -h) - count(-h, h) + count(-h, -h)) / (4 * h * h)
print(f"\nfinite-difference (x,z) entry: {fd:.6f} vs backward {row.get(3):.6f}")

# plant an arbitrary symmetric bit matrix as a GF(2) Hessian
gf2 = make_semiring("gf2")
m = np.array([[1, 0, 1, 1],
              [0, 1, 0, 1],
              [1, 0, 0, 0],
              [1, 1, 0, 1]])
planted = matrix_to_circuit(m)
report = validate(planted, budget=4)
print(f"\nplanted circuit: {planted.node_count} nodes, smooth={report.smooth}, "
      f"decomposable={report.decomposable}, deterministic={report.deterministic}")
recovered = np.array(oracle_hessian(circuit_to_formula(planted),
                                    LiteralMap(4, 1), gf2,
                                    variables={1, 2, 3, 4},
                                    positive_only=True))
print("recovered Hessian equals the matrix:", (recovered == m).all())
print(recovered)
