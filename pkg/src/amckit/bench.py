"""Benchmark harness: per-variant forward/backward timings as CSV records.

Timing excludes parsing; forward and backward are timed separately, and all
variants of one repetition share the same forward tape. Peak auxiliary
memory comes from the engine's own buffer accounting (node-count slots plus
reused arity buffers at 8 bytes per slot), not process RSS, so the numbers
are deterministic.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass

from .backprop import VARIANTS, forward
from .circuits import Circuit, CircuitBuilder, default_labels
from .errors import AmckitError
from .literals import LiteralMap

CSV_HEADER = "circuit,n,e,semiring,variant,rep,forward_ms,backward_ms,peak_aux_bytes,error"


@dataclass
class BenchRecord:
    circuit_id: str
    n: int
    e: int
    semiring: str
    variant: str
    rep: int
    forward_ms: float
    backward_ms: float
    peak_aux_bytes: int
    error: str = ""

    def to_csv_row(self) -> str:
        return ",".join([
            self.circuit_id,
            str(self.n),
            str(self.e),
            self.semiring,
            self.variant,
            str(self.rep),
            f"{self.forward_ms:.6f}",
            f"{self.backward_ms:.6f}",
            str(self.peak_aux_bytes),
            self.error,
        ])


def records_to_csv(records) -> str:
    return "\n".join([CSV_HEADER] + [r.to_csv_row() for r in records]) + "\n"


def star_circuit(arity: int) -> Circuit:
    """Single product over `arity` distinct positive literals."""
    b = CircuitBuilder()
    root = b.product([b.literal(v) for v in range(1, arity + 1)])
    return b.build(root, num_vars=arity)


def uniform_labels(circuit: Circuit, semiring, seed: int) -> LiteralMap:
    """Benchmark weights: Bernoulli p drawn uniformly from [0.01, 0.99].

    Semirings that cannot encode fractional probabilities (nat, gf2, bool,
    sens) fall back to their default labeling.
    """
    rng = random.Random(seed)
    labels = default_labels(semiring, circuit.num_vars)
    if semiring.name in ("nat", "gf2", "bool", "sens"):
        return labels
    for v in range(1, circuit.num_vars + 1):
        pos, neg = semiring.encode_prob(rng.uniform(0.01, 0.99))
        labels.set(v, pos)
        labels.set(-v, neg)
    return labels


def measure(circuit_id: str, circuit: Circuit, labels, semiring, variants,
            repeat=10, warmup=1, trust_deterministic=False):
    """Time forward and each backward variant; one record per (variant, rep)."""
    records = []
    for _ in range(warmup):
        tape = forward(circuit, labels, semiring,
                       trust_deterministic=trust_deterministic)
        for name in variants:
            try:
                VARIANTS[name](circuit, tape, semiring)
            except AmckitError:
                pass
    for rep in range(repeat):
        t0 = time.perf_counter_ns()
        tape = forward(circuit, labels, semiring,
                       trust_deterministic=trust_deterministic)
        forward_ms = (time.perf_counter_ns() - t0) / 1e6
        for name in variants:
            stats = {}
            try:
                t0 = time.perf_counter_ns()
                VARIANTS[name](circuit, tape, semiring, stats=stats)
                backward_ms = (time.perf_counter_ns() - t0) / 1e6
            except AmckitError as exc:
                records.append(BenchRecord(
                    circuit_id, circuit.node_count, circuit.edge_count,
                    semiring.name, name, rep, forward_ms, 0.0, 0,
                    error=str(exc).replace(",", ";"),
                ))
                continue
            records.append(BenchRecord(
                circuit_id, circuit.node_count, circuit.edge_count,
                semiring.name, name, rep, forward_ms, backward_ms,
                stats.get("peak_aux_bytes", 0),
            ))
    return records


def run_suite(named_circuits, semiring, variants, repeat=10, warmup=1,
              seed=1234, trust_deterministic=False, parallel=False):
    """Benchmark a list of (id, circuit or exception) pairs.

    Failures become records with the error column set; the run continues.
    With ``parallel`` distinct circuits run on worker threads, each with
    private tapes (timings then reflect contended wall clock).
    """
    def one(item):
        circuit_id, circuit = item
        if isinstance(circuit, Exception):
            return [BenchRecord(circuit_id, 0, 0, semiring.name, "-", 0,
                                0.0, 0.0, 0,
                                error=str(circuit).replace(",", ";"))]
        try:
            labels = uniform_labels(circuit, semiring, seed)
            return measure(circuit_id, circuit, labels, semiring, variants,
                           repeat=repeat, warmup=warmup,
                           trust_deterministic=trust_deterministic)
        except AmckitError as exc:
            return [BenchRecord(circuit_id, circuit.node_count,
                                circuit.edge_count, semiring.name, "-", 0,
                                0.0, 0.0, 0,
                                error=str(exc).replace(",", ";"))]

    if parallel:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor() as pool:
            chunks = list(pool.map(one, named_circuits))
    else:
        chunks = [one(item) for item in named_circuits]
    return [rec for chunk in chunks for rec in chunk]


def best_backward_ms(records, variant: str) -> float:
    """Minimum backward time across repetitions for one variant."""
    times = [r.backward_ms for r in records
             if r.variant == variant and not r.error]
    if not times:
        raise ValueError(f"no successful records for variant {variant!r}")
    return min(times)


def loglog_slope(xs, ys) -> float:
    """Least-squares slope of log(y) against log(x)."""
    import numpy as np

    return float(np.polyfit(np.log(xs), np.log(ys), 1)[0])
