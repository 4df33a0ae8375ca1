"""Shared helpers: random formulas, labelings, and tolerance-aware compares."""

import math
import random

import pytest

from amckit import (And, Bottom, DualValue, Lit, LiteralMap, Not, Or,
                    Polynomial, Top, compile_to_mods, formula_variables,
                    make_semiring)

ALL_SEMIRINGS = ("bool", "nat", "prob", "log", "viterbi", "tropical", "fuzzy",
                 "grad", "gf2", "sens")

NEG_INF = float("-inf")


# --- random formulas ---------------------------------------------------------

def _random_tree(rng, num_vars, budget):
    if budget <= 1 or rng.random() < 0.25:
        r = rng.random()
        if r < 0.04:
            return Top()
        if r < 0.08:
            return Bottom()
        v = rng.randint(1, num_vars)
        return Lit(v if rng.random() < 0.5 else -v)
    r = rng.random()
    if r < 0.42:
        return And(_random_tree(rng, num_vars, budget // 2),
                   _random_tree(rng, num_vars, budget // 2))
    if r < 0.84:
        return Or(_random_tree(rng, num_vars, budget // 2),
                  _random_tree(rng, num_vars, budget // 2))
    return Not(_random_tree(rng, num_vars, budget - 1))


def _remap(phi, mapping):
    t = type(phi)
    if t is Lit:
        v = abs(phi.lit)
        new = mapping[v]
        return Lit(new if phi.lit > 0 else -new)
    if t is Not:
        return Not(_remap(phi.child, mapping))
    if t is And:
        return And(_remap(phi.left, mapping), _remap(phi.right, mapping))
    if t is Or:
        return Or(_remap(phi.left, mapping), _remap(phi.right, mapping))
    return phi


def random_formula(rng, max_vars, budget=None):
    """Random formula with a dense variable set 1..k, k >= 1."""
    budget = budget or max(6, 3 * max_vars)
    while True:
        phi = _random_tree(rng, max_vars, budget)
        vs = sorted(formula_variables(phi))
        if vs:
            mapping = {v: i + 1 for i, v in enumerate(vs)}
            return _remap(phi, mapping)


def formula_pool(seed, count, sizes):
    """Deterministic pool of (formula, num_vars) pairs."""
    rng = random.Random(seed)
    pool = []
    for _ in range(count):
        phi = random_formula(rng, rng.choice(sizes))
        pool.append((phi, max(formula_variables(phi))))
    return pool


# --- random labelings --------------------------------------------------------

def random_value(name, rng, zero_rate=0.0):
    if zero_rate and rng.random() < zero_rate:
        return make_semiring(name).zero
    if name == "bool":
        return rng.random() < 0.5
    if name == "nat":
        return rng.randint(1, 4)
    if name in ("prob", "viterbi"):
        return rng.uniform(0.05, 1.0)
    if name == "fuzzy":
        return rng.uniform(0.0, 1.0)
    if name in ("log", "tropical"):
        return math.log(rng.uniform(0.05, 1.0))
    if name == "grad":
        return DualValue(rng.uniform(0.05, 1.0), rng.uniform(-1.0, 1.0))
    if name == "gf2":
        return rng.randint(0, 1)
    if name == "sens":
        r = rng.random()
        if r < 0.4:
            return Polynomial.constant(rng.uniform(0.1, 1.0))
        v = rng.randint(1, 3)
        if r < 0.7:
            return Polynomial.indeterminate(v)
        return Polynomial.constant(1.0) + Polynomial({((v, 1),): -1.0})
    raise ValueError(name)


def random_labels(name, num_vars, rng, zero_rate=0.0):
    S = make_semiring(name)
    labels = LiteralMap(num_vars, S.one)
    for v in range(1, num_vars + 1):
        labels.set(v, random_value(name, rng, zero_rate))
        labels.set(-v, random_value(name, rng, zero_rate))
    return labels


# --- tolerance-aware comparisons ----------------------------------------------

def floats_close(a, b, rel=1e-9, abs_tol=1e-12):
    if a == b:
        return True
    if math.isinf(a) or math.isinf(b):
        return a == b
    return abs(a - b) <= max(abs_tol, rel * max(abs(a), abs(b)))


def values_close(name, a, b, *, log_abs=1e-7):
    """Engine-vs-oracle comparison at the per-semiring tolerance."""
    if name in ("bool", "nat", "gf2"):
        return a == b
    if name in ("prob", "viterbi", "fuzzy"):
        return floats_close(a, b)
    if name in ("log", "tropical"):
        if a == NEG_INF or b == NEG_INF:
            return a == b
        return abs(a - b) <= log_abs
    if name == "grad":
        return (floats_close(a.primal, b.primal)
                and floats_close(a.tangent, b.tangent))
    if name == "sens":
        keys = set(a.terms) | set(b.terms)
        return all(
            floats_close(a.terms.get(k, 0.0), b.terms.get(k, 0.0))
            for k in keys
        )
    raise ValueError(name)


def maps_close(name, m1, m2, **kw):
    if m1.num_vars != m2.num_vars:
        return False
    return all(
        values_close(name, m1.get(l), m2.get(l), **kw) for l in m1.literals()
    )


def mods(phi):
    return compile_to_mods(phi)


@pytest.fixture
def rng():
    return random.Random(20240811)
