"""Learning signals built on circuit gradients.

Variables carry independent Bernoulli weights: alpha(v) = p(v) and
alpha(-v) = 1 - p(v). On top of one gradient pass this module derives EM
conditionals, conditional Shannon entropies, max-gradient (MPE) signals,
an unbiased sampled gradient estimator, and Hessian rows via dual numbers,
plus the GF(2) matrix-to-circuit embeddings used to stress-test second-order
quantities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .backprop import grad_amc, structural_gate
from .circuits import LIT, PROD, SUM, TRUE, Circuit, CircuitBuilder
from .errors import AmckitError
from .literals import LiteralMap
from .semirings import NEG_INF, DualValue, make_semiring

_BOOL = make_semiring("bool")
_LOG = make_semiring("log")
_GRAD = make_semiring("grad")
_VITERBI = make_semiring("viterbi")
_TROPICAL = make_semiring("tropical")


@dataclass
class BernoulliParams:
    """Per-variable success probabilities; index v-1 holds p(v)."""

    probs: list[float]

    def __post_init__(self):
        for p in self.probs:
            if not (0.0 <= p <= 1.0):
                raise ValueError(f"probability {p!r} outside [0, 1]")

    @classmethod
    def uniform(cls, num_vars: int, p: float) -> "BernoulliParams":
        return cls([p] * num_vars)

    @property
    def num_vars(self) -> int:
        return len(self.probs)

    def p(self, lit: int) -> float:
        v = lit if lit > 0 else -lit
        base = self.probs[v - 1]
        return base if lit > 0 else 1.0 - base

    def _labels(self, mapper) -> LiteralMap:
        n = self.num_vars
        out = LiteralMap(n, mapper(1.0))
        for v in range(1, n + 1):
            out.set(v, mapper(self.probs[v - 1]))
            out.set(-v, mapper(1.0 - self.probs[v - 1]))
        return out

    def prob_labels(self) -> LiteralMap:
        return self._labels(float)

    def log_labels(self) -> LiteralMap:
        return self._labels(lambda p: math.log(p) if p > 0.0 else NEG_INF)

    def entropy_labels(self) -> LiteralMap:
        # (p, -p ln p), with 0 ln 0 = 0 by continuity
        return self._labels(
            lambda p: DualValue(p, -p * math.log(p) if p > 0.0 else 0.0)
        )

    def seeded_dual_labels(self, seed_literal: int) -> LiteralMap:
        n = self.num_vars
        out = LiteralMap(n, DualValue(1.0, 0.0))
        for v in range(1, n + 1):
            for lit, p in ((v, self.probs[v - 1]), (-v, 1.0 - self.probs[v - 1])):
                out.set(lit, DualValue(p, 1.0 if lit == seed_literal else 0.0))
        return out


@dataclass
class SampleBatch:
    """Reproducible sampling plan: counter-based generator keyed by seed."""

    seed: int
    count: int
    chunk: int = 65536


def _require_params(circuit: Circuit, params: BernoulliParams):
    if params.num_vars < circuit.num_vars:
        raise ValueError(
            f"params cover {params.num_vars} variables, circuit mentions "
            f"{circuit.num_vars}"
        )


def em_conditionals(circuit: Circuit, params: BernoulliParams,
                    trust_deterministic=False) -> LiteralMap:
    """Conditional probabilities p(l | circuit) for every literal.

    One log-domain gradient pass: exp(grad_log[l] + log alpha(l) - amc_log),
    clamped to [0, 1] against round-off.
    """
    _require_params(circuit, params)
    labels = params.log_labels()
    amc_log, grads = grad_amc(circuit, labels, _LOG,
                              trust_deterministic=trust_deterministic)
    if amc_log == NEG_INF:
        raise AmckitError("conditionals undefined: the circuit has probability 0")
    out = LiteralMap(circuit.num_vars, 0.0)
    for lit in out.literals():
        val = math.exp(grads.get(lit) + labels.get(lit) - amc_log)
        out.set(lit, min(1.0, max(0.0, val)))
    return out


def conditional_entropy(circuit: Circuit, params: BernoulliParams,
                        trust_deterministic=False):
    """Shannon entropy of the model distribution and its conditioned values.

    Returns ``(H, per_literal)`` in nats, where H = -sum over models of
    p(I) ln p(I) and the entry for literal l is the same sum over the models
    of the circuit conditioned on l (unnormalized).
    """
    _require_params(circuit, params)
    amc, grads = grad_amc(circuit, params.entropy_labels(), _GRAD,
                          trust_deterministic=trust_deterministic)
    per_literal = LiteralMap(circuit.num_vars, 0.0)
    for lit in per_literal.literals():
        per_literal.set(lit, grads.get(lit).tangent)
    return amc.tangent, per_literal


def mpe_gradient(circuit: Circuit, params: BernoulliParams,
                 logspace=False) -> LiteralMap:
    """Maximum model probability (or its log) after conditioning on each literal."""
    _require_params(circuit, params)
    if logspace:
        _, grads = grad_amc(circuit, params.log_labels(), _TROPICAL)
    else:
        _, grads = grad_amc(circuit, params.prob_labels(), _VITERBI)
    return grads


def _bool_pass_counts(circuit: Circuit, sample_matrix):
    """Vectorized boolean forward+backward over a batch of sampled labelings.

    sample_matrix is (rows, num_vars) bool. Returns (root_sat_count,
    per-literal sat counts as two arrays pos/neg of length num_vars).
    """
    kinds, lits, children = circuit.kinds, circuit.lits, circuit.children
    n = circuit.node_count
    rows = sample_matrix.shape[0]
    values = [None] * n
    for i, k in enumerate(kinds):
        if k == LIT:
            l = lits[i]
            col = sample_matrix[:, (l if l > 0 else -l) - 1]
            values[i] = col if l > 0 else ~col
        elif k == SUM:
            acc = np.zeros(rows, dtype=bool)
            for c in children[i]:
                acc = acc | values[c]
            values[i] = acc
        elif k == PROD:
            acc = np.ones(rows, dtype=bool)
            for c in children[i]:
                acc = acc & values[c]
            values[i] = acc
        else:
            values[i] = (np.ones if k == TRUE else np.zeros)(rows, dtype=bool)

    adj = [None] * n
    zeros = np.zeros(rows, dtype=bool)
    adj[circuit.root] = np.ones(rows, dtype=bool)
    for i in range(n - 1, -1, -1):
        a = adj[i]
        if a is None:
            adj[i] = a = zeros
        k = kinds[i]
        if k == SUM:
            for c in children[i]:
                prev = adj[c]
                adj[c] = a if prev is None else (prev | a)
        elif k == PROD:
            ch = children[i]
            m = len(ch)
            prefixes = []
            acc = np.ones(rows, dtype=bool)
            for c in ch:
                prefixes.append(acc)
                acc = acc & values[c]
            acc = np.ones(rows, dtype=bool)
            for idx in range(m - 1, -1, -1):
                c = ch[idx]
                contrib = a & acc & prefixes[idx]
                prev = adj[c]
                adj[c] = contrib if prev is None else (prev | contrib)
                acc = acc & values[c]

    nv = circuit.num_vars
    pos = np.zeros(nv, dtype=np.int64)
    neg = np.zeros(nv, dtype=np.int64)
    seen = {}
    for i, k in enumerate(kinds):
        if k == LIT and adj[i] is not None:
            l = lits[i]
            prev = seen.get(l)
            seen[l] = adj[i] if prev is None else (prev | adj[i])
    for l, sat in seen.items():
        count = int(sat.sum())
        if l > 0:
            pos[l - 1] += count
        else:
            neg[-l - 1] += count
    return int(values[circuit.root].sum()), pos, neg


_SAMPLE_BLOCK = 4096


def _uniform_rows(seed: int, start: int, rows: int, nv: int):
    """Rows [start, start+rows) of the sample stream for a given seed.

    The stream is laid out in fixed blocks of ``_SAMPLE_BLOCK`` samples,
    each drawn from a counter-based generator keyed by (seed, block index),
    so any chunking of the same (seed, count) sees identical draws and
    blocks can be generated independently in parallel.
    """
    key_lo = seed & 0xFFFFFFFFFFFFFFFF
    parts = []
    first = start // _SAMPLE_BLOCK
    last = (start + rows - 1) // _SAMPLE_BLOCK
    for blk in range(first, last + 1):
        gen = np.random.Generator(
            np.random.Philox(key=np.array([key_lo, blk], dtype=np.uint64))
        )
        block = gen.random((_SAMPLE_BLOCK, nv))
        lo = max(start, blk * _SAMPLE_BLOCK) - blk * _SAMPLE_BLOCK
        hi = min(start + rows, (blk + 1) * _SAMPLE_BLOCK) - blk * _SAMPLE_BLOCK
        parts.append(block[lo:hi])
    return parts[0] if len(parts) == 1 else np.vstack(parts)


def indecater_estimate(circuit: Circuit, params: BernoulliParams,
                       batch: SampleBatch):
    """Unbiased sampled gradient via boolean passes on Bernoulli draws.

    For each sample the boolean gradient marks which conditioned circuits
    are satisfied; averaging over samples estimates the probability
    gradient. Returns ``(p_hat, g_hat, stderr)``; cost is linear in circuit
    size per sample. Fixed seeds give bit-identical results regardless of
    chunking.
    """
    if batch.count <= 0:
        raise ValueError("sample batch is empty")
    _require_params(circuit, params)
    structural_gate(circuit, _BOOL)
    nv = circuit.num_vars
    probs = np.asarray(params.probs[:nv], dtype=np.float64)
    total = batch.count
    pos = np.zeros(nv, dtype=np.int64)
    neg = np.zeros(nv, dtype=np.int64)
    root_count = 0
    start = 0
    while start < total:
        rows = min(batch.chunk, total - start)
        draws = _uniform_rows(batch.seed, start, rows, nv) < probs
        r, p, ng = _bool_pass_counts(circuit, draws)
        root_count += r
        pos += p
        neg += ng
        start += rows
    g_hat = LiteralMap(nv, 0.0)
    stderr = LiteralMap(nv, 0.0)
    for v in range(1, nv + 1):
        for lit, count in ((v, pos[v - 1]), (-v, neg[v - 1])):
            mean = count / total
            g_hat.set(lit, mean)
            stderr.set(lit, math.sqrt(mean * (1.0 - mean) / total))
    return root_count / total, g_hat, stderr


def hessian_row(circuit: Circuit, params: BernoulliParams, y: int,
                trust_deterministic=False) -> LiteralMap:
    """Row y of the second-derivative matrix of the weighted model count.

    One dual-number gradient pass with the tangent seeded at literal y;
    entry l is d^2 AMC / (d alpha(l) d alpha(y)). The count is multilinear,
    so the diagonal entry and the complementary-literal entry are 0.
    """
    _require_params(circuit, params)
    if y == 0 or abs(y) > circuit.num_vars:
        raise ValueError(f"literal {y} outside the circuit's variables")
    _, grads = grad_amc(circuit, params.seeded_dual_labels(y), _GRAD,
                        trust_deterministic=trust_deterministic)
    out = LiteralMap(circuit.num_vars, 0.0)
    for lit in out.literals():
        out.set(lit, grads.get(lit).tangent)
    return out


# --- GF(2) matrix embeddings -------------------------------------------------

def _as_bit_matrix(matrix):
    m = np.asarray(matrix, dtype=np.int64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("matrix must be square")
    if m.shape[0] < 2:
        raise ValueError("matrix must be at least 2x2")
    if not np.isin(m, (0, 1)).all():
        raise ValueError("matrix entries must be bits")
    return m


class _CubeFactory:
    """DNF cubes over n variables with shared negative-literal runs.

    run(a, b) is the conjunction of the negative literals of variables
    a..b, built as cumulative chains so total size stays quadratic.
    """

    def __init__(self, n: int):
        self.n = n
        self.b = CircuitBuilder()
        self._runs = {}

    def run(self, a: int, b: int):
        if a > b:
            return None
        key = (a, b)
        nid = self._runs.get(key)
        if nid is None:
            if a == b:
                nid = self.b.literal(-a)
            else:
                nid = self.b._append(
                    PROD, 0, (self.run(a, b - 1), self.b.literal(-b))
                )
            self._runs[key] = nid
        return nid

    def pair_cube(self, i: int, j: int):
        """Unique model with variables i < j positive, everything else negative."""
        parts = [self.b.literal(i), self.b.literal(j)]
        for lo, hi in ((1, i - 1), (i + 1, j - 1), (j + 1, self.n)):
            r = self.run(lo, hi)
            if r is not None:
                parts.append(r)
        return self.b._append(PROD, 0, tuple(parts))

    def single_cube(self, i: int):
        """Unique model with only variable i positive."""
        parts = [self.b.literal(i)]
        for lo, hi in ((1, i - 1), (i + 1, self.n)):
            r = self.run(lo, hi)
            if r is not None:
                parts.append(r)
        return self.b._append(PROD, 0, tuple(parts))

    def build(self, cubes):
        root = self.b.sum(cubes) if cubes else self.b.false()
        return self.b.build(root, num_vars=self.n,
                            deterministic_by_construction=True)


def matrix_to_circuit(matrix) -> Circuit:
    """Circuit whose GF(2) second-derivative matrix equals a symmetric bit matrix.

    One cube per set upper-triangle entry (i, j): the unique model with x_i
    and x_j positive. Conditioning on one literal twice is idempotent, so
    the diagonal entry (i, i) is the parity of all surviving cubes in row i;
    single-positive cubes correct it to M[i][i]. Circuit size is Theta(n^2);
    the result is smooth, deterministic, and decomposable.
    """
    m = _as_bit_matrix(matrix)
    if (m != m.T).any():
        raise ValueError("matrix must be symmetric: entry (i, j) and (j, i) "
                         "share their unique model")
    n = m.shape[0]
    fac = _CubeFactory(n)
    cubes = []
    for i in range(n):
        for j in range(i + 1, n):
            if m[i][j]:
                cubes.append(fac.pair_cube(i + 1, j + 1))
    for i in range(n):
        row_parity = int(m[i].sum() - m[i][i]) & 1
        if row_parity != int(m[i][i]):
            cubes.append(fac.single_cube(i + 1))
    return fac.build(cubes)


def matrix_vec_to_circuit(matrix, vector) -> Circuit:
    """Circuit with prescribed GF(2) off-diagonal Hessian and gradient.

    The off-diagonal of the positive-literal Hessian equals the symmetric
    bit matrix and the positive-literal gradient equals the bit vector. The
    Hessian diagonal necessarily equals the gradient (entry (i, i) is the
    count conditioned on x_i), so the matrix diagonal is ignored. Adds at
    most n single-positive correction cubes; size stays Theta(n^2).
    """
    m = _as_bit_matrix(matrix)
    if (m != m.T).any():
        raise ValueError("matrix must be symmetric")
    v = np.asarray(vector, dtype=np.int64)
    if v.ndim != 1 or v.shape[0] != m.shape[0]:
        raise ValueError("vector length must match the matrix size")
    if not np.isin(v, (0, 1)).all():
        raise ValueError("vector entries must be bits")
    n = m.shape[0]
    fac = _CubeFactory(n)
    cubes = []
    for i in range(n):
        for j in range(i + 1, n):
            if m[i][j]:
                cubes.append(fac.pair_cube(i + 1, j + 1))
    for i in range(n):
        row_parity = int(m[i].sum() - m[i][i]) & 1
        if row_parity != int(v[i]):
            cubes.append(fac.single_cube(i + 1))
    return fac.build(cubes)
