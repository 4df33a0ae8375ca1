"""Why the cumulative-product backward pass matters.

On a product with k children, recomputing each child's sibling product
costs k^2 multiplications; two cumulative products cost 2k. The gap turns
a quadratic pass into a linear one, visible already at modest arities.
"""

import time

from amckit import (LiteralMap, backward_dynamic, backward_naive,
                    backward_optimized, forward, loglog_slope, make_semiring,
                    star_circuit)

prob = make_semiring("prob")

print(f"{'arity':>6} | {'naive ms':>10} | {'dynamic ms':>10} | {'opt ms':>10} | speedup")
sizes = [64, 128, 256, 512, 1024, 2048]
naive_ms, dyn_ms = [], []
for k in sizes:
    circuit = star_circuit(k)
    labels = LiteralMap(k, 1.0)
    tape = forward(circuit, labels, prob)

    def best(fn, reps=3):
        times = []
        for _ in range(reps):
            t0 = time.perf_counter_ns()
            fn(circuit, tape, prob)
            times.append((time.perf_counter_ns() - t0) / 1e6)
        return min(times)

    n = best(backward_naive, reps=1 if k > 1024 else 3)
    d = best(backward_dynamic)
    o = best(backward_optimized)
    naive_ms.append(n)
    dyn_ms.append(d)
    print(f"{k:>6} | {n:>10.3f} | {d:>10.3f} | {o:>10.3f} | {n / d:>6.1f}x")

print(f"\nlog-log slope naive:   {loglog_slope(sizes, naive_ms):.2f}  (quadratic)")
print(f"log-log slope dynamic: {loglog_slope(sizes, dyn_ms):.2f}  (linear)")

print("""
The optimized variant additionally divides out cancellative children (here
every weight is nonzero, so it is pure division) and needs no cumulative
buffers at all; on semirings like fuzzy it falls back to a top-2 scan.
The `amckit bench` subcommand emits the same measurements as CSV.
""")
