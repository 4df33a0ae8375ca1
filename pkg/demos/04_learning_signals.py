"""Learning signals from one gradient pass: EM, entropy, MPE.

Variables carry Bernoulli parameters. The log-semiring gradient yields the
conditional probabilities used by the expectation step of EM; dual numbers
yield the Shannon entropy and its conditioned values; max-product yields
the most-probable-explanation gradient.
"""

from pathlib import Path

from amckit import (BernoulliParams, conditional_entropy, em_conditionals,
                    mpe_gradient, parse_d4, smooth)

DATA = Path(__file__).resolve().parent.parent / "data"

circuit = smooth(parse_d4(DATA / "example2.nnf"))
params = BernoulliParams([0.5, 0.1, 0.8])

print("EM conditionals p(literal | formula):")
cond = em_conditionals(circuit, params)
for lit in cond.literals():
    print(f"  {lit:>2}: {cond.get(lit):.6f}")
print("  note p(z|phi) = 1: every model contains z")

H, per_literal = conditional_entropy(circuit, params)
print(f"\nShannon entropy of the model distribution: {H:.6f} nats")
print("conditioned entropies (information gain candidates):")
for lit in per_literal.literals():
    print(f"  {lit:>2}: {per_literal.get(lit):.6f}")

print("\nMPE gradient (probability of the best conditioned model):")
mpe = mpe_gradient(circuit, params)
for lit in mpe.literals():
    print(f"  {lit:>2}: {mpe.get(lit):.6f}")
log_mpe = mpe_gradient(circuit, params, logspace=True)
print(f"log-space entry for z: {log_mpe.get(3):.6f}")
