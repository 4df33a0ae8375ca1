"""Forward evaluation and the four backward passes over a circuit.

All gradients are leaf adjoints folded per literal: on a smooth,
decomposable circuit (deterministic too when the semiring is not additively
idempotent) the entry for literal l equals the model count of the circuit
conditioned on l. Variants differ only in how product-node children recover
their leave-one-out sibling products:

* ``naive``     recomputes each sibling product from scratch, O(e * maxArity);
* ``cancel``    divides the node value by the child where cancellative;
* ``dynamic``   two cumulative products per node, O(e) time, O(n) memory;
* ``opt``       division where cancellative, a top-2 extremal scan where
                multiplication is fully ordered, cumulative products otherwise.

A single evaluation is sequential; distinct evaluations over the same
immutable circuit may run in parallel threads with private tapes.
"""

from __future__ import annotations

from dataclasses import dataclass

from .circuits import LIT, PROD, SUM, TRUE, Circuit, determinism_budget, validate
from .errors import ConfigError, StructureError, UnsupportedOperationError
from .literals import LiteralMap
from .semirings import LEFT


@dataclass
class ForwardTape:
    """Per-node values in forward order; the root value is the model count."""

    values: list
    root: int

    @property
    def root_value(self):
        return self.values[self.root]


def structural_gate(circuit: Circuit, semiring, trust_deterministic=False,
                    budget=None):
    """Refuse evaluation when structure cannot justify the semiring.

    Smoothness and decomposability are always required. Determinism is
    required for non-idempotent semirings unless verified within budget,
    attested by construction (d4 parses, DNF-of-models builders), or
    explicitly trusted.
    """
    problems = []
    if not circuit.is_smooth():
        problems.append("circuit is not smooth (apply smooth())")
    if not circuit.is_decomposable():
        problems.append("circuit is not decomposable")
    if semiring.needs_determinism and not circuit.deterministic_by_construction:
        status = circuit.determinism_status(budget)
        if status == "refuted":
            problems.append("circuit is not deterministic")
        elif status == "unverified" and not trust_deterministic:
            problems.append(
                f"determinism unverified within budget {determinism_budget(budget)}"
                " (pass trust_deterministic=True to proceed)"
            )
    if problems:
        raise StructureError("; ".join(problems), validate(circuit))


def forward(circuit: Circuit, labels: LiteralMap, semiring, *, check=True,
            trust_deterministic=False) -> ForwardTape:
    """Evaluate every node bottom-up; the root equals the model count."""
    if check:
        structural_gate(circuit, semiring, trust_deterministic)
    add, mul = semiring.add, semiring.mul
    zero, one = semiring.zero, semiring.one
    kinds, lits, children = circuit.kinds, circuit.lits, circuit.children
    values = [None] * circuit.node_count
    for i, k in enumerate(kinds):
        if k == LIT:
            values[i] = labels.get(lits[i])
        elif k == SUM:
            acc = zero
            for c in children[i]:
                acc = add(acc, values[c])
            values[i] = acc
        elif k == PROD:
            acc = one
            for c in children[i]:
                acc = mul(acc, values[c])
            values[i] = acc
        else:
            values[i] = one if k == TRUE else zero
    return ForwardTape(values, circuit.root)


def _init_adjoints(circuit, semiring):
    adj = [semiring.zero] * circuit.node_count
    adj[circuit.root] = semiring.one
    return adj


def _fold_leaves(circuit, adj, semiring) -> LiteralMap:
    # several leaves may carry the same literal; their adjoints accumulate
    grads = LiteralMap(circuit.num_vars, semiring.zero)
    add = semiring.add
    kinds, lits = circuit.kinds, circuit.lits
    for i, k in enumerate(kinds):
        if k == LIT:
            l = lits[i]
            grads.set(l, add(grads.get(l), adj[i]))
    return grads


def _note_stats(stats, circuit, extra_slots, **counts):
    if stats is None:
        return
    slots = circuit.node_count + extra_slots
    stats["aux_slots"] = slots
    stats["peak_aux_bytes"] = 8 * slots
    for key, val in counts.items():
        stats[key] = val


def backward_naive(circuit: Circuit, tape: ForwardTape, semiring,
                   stats=None) -> LiteralMap:
    """Leave-one-out products recomputed per child; the engine's own oracle."""
    add, mul = semiring.add, semiring.mul
    one = semiring.one
    values = tape.values
    kinds, children = circuit.kinds, circuit.children
    adj = _init_adjoints(circuit, semiring)
    for i in range(circuit.node_count - 1, -1, -1):
        k = kinds[i]
        if k == SUM:
            a = adj[i]
            for c in children[i]:
                adj[c] = add(adj[c], a)
        elif k == PROD:
            a = adj[i]
            ch = children[i]
            m = len(ch)
            for idx in range(m):
                loo = one
                for j in range(m):
                    if j != idx:
                        loo = mul(loo, values[ch[j]])
                c = ch[idx]
                adj[c] = add(adj[c], mul(a, loo))
    _note_stats(stats, circuit, 0)
    return _fold_leaves(circuit, adj, semiring)


def backward_cancel(circuit: Circuit, tape: ForwardTape, semiring,
                    stats=None) -> LiteralMap:
    """Divide the node value by each child where the child is cancellative.

    Falls back to a per-child recomputation for non-cancellative children
    (e.g. zero-valued children under prob); fallbacks are counted.
    """
    if not semiring.supports_division:
        raise UnsupportedOperationError(
            f"semiring '{semiring.name}' provides no division; "
            "use the dynamic or naive variant"
        )
    add, mul, div = semiring.add, semiring.mul, semiring.try_divide
    one = semiring.one
    values = tape.values
    kinds, children = circuit.kinds, circuit.children
    adj = _init_adjoints(circuit, semiring)
    fallbacks = 0
    for i in range(circuit.node_count - 1, -1, -1):
        k = kinds[i]
        if k == SUM:
            a = adj[i]
            for c in children[i]:
                adj[c] = add(adj[c], a)
        elif k == PROD:
            a = adj[i]
            ch = children[i]
            node_val = values[i]
            m = len(ch)
            for idx in range(m):
                c = ch[idx]
                loo = div(node_val, values[c])
                if loo is None:
                    fallbacks += 1
                    loo = one
                    for j in range(m):
                        if j != idx:
                            loo = mul(loo, values[ch[j]])
                adj[c] = add(adj[c], mul(a, loo))
    _note_stats(stats, circuit, 0, fallbacks=fallbacks)
    return _fold_leaves(circuit, adj, semiring)


def backward_dynamic(circuit: Circuit, tape: ForwardTape, semiring,
                     stats=None) -> LiteralMap:
    """Cumulative prefix/suffix products; O(e) time, O(n) auxiliary memory.

    The prefix buffer is sized once to the maximum product arity and reused
    across nodes.
    """
    add, mul = semiring.add, semiring.mul
    one = semiring.one
    values = tape.values
    kinds, children = circuit.kinds, circuit.children
    adj = _init_adjoints(circuit, semiring)
    prefix = [one] * circuit.max_arity
    for i in range(circuit.node_count - 1, -1, -1):
        k = kinds[i]
        if k == SUM:
            a = adj[i]
            for c in children[i]:
                adj[c] = add(adj[c], a)
        elif k == PROD:
            a = adj[i]
            ch = children[i]
            m = len(ch)
            t = one
            for idx in range(m):
                prefix[idx] = t
                t = mul(t, values[ch[idx]])
            t = one
            for idx in range(m - 1, -1, -1):
                c = ch[idx]
                adj[c] = add(adj[c], mul(a, mul(t, prefix[idx])))
                t = mul(t, values[c])
    _note_stats(stats, circuit, circuit.max_arity)
    return _fold_leaves(circuit, adj, semiring)


def _extremal_pair(semiring, values, ch):
    """(smallest value, its multiplicity, second smallest) in the mul order."""
    ordered = semiring.is_ordered_mul
    m1 = None
    m1_count = 0
    m2 = None
    for c in ch:
        v = values[c]
        if m1 is None:
            m1, m1_count = v, 1
        elif v == m1:
            m1_count += 1
        elif ordered(v, m1) == LEFT:
            m2 = m1
            m1, m1_count = v, 1
        elif m2 is None or ordered(v, m2) == LEFT:
            m2 = v
    return m1, m1_count, (semiring.one if m2 is None else m2)


def backward_optimized(circuit: Circuit, tape: ForwardTape, semiring,
                       stats=None) -> LiteralMap:
    """Cancellation and ordering where available, cumulative products otherwise.

    Per product child: (a) divide the node value by a cancellative child;
    (b) under fully ordered multiplication the node value itself is the
    leave-one-out product for every child except a unique extremal one,
    which takes the second extremal instead; (c) otherwise fill in from the
    node's cumulative prefix/suffix products, computed at most once.
    """
    add, mul = semiring.add, semiring.mul
    one = semiring.one
    has_div = semiring.supports_division
    div = semiring.try_divide
    fully_ordered = semiring.fully_ordered_mul
    values = tape.values
    kinds, children = circuit.kinds, circuit.children
    adj = _init_adjoints(circuit, semiring)
    prefix = [one] * circuit.max_arity
    suffix = [one] * circuit.max_arity
    divisions = 0
    ordered_hits = 0
    fallbacks = 0
    for i in range(circuit.node_count - 1, -1, -1):
        k = kinds[i]
        if k == SUM:
            a = adj[i]
            for c in children[i]:
                adj[c] = add(adj[c], a)
        elif k == PROD:
            a = adj[i]
            ch = children[i]
            node_val = values[i]
            m = len(ch)
            scan = None
            cumulative_ready = False
            for idx in range(m):
                c = ch[idx]
                cval = values[c]
                loo = div(node_val, cval) if has_div else None
                if loo is not None:
                    divisions += 1
                elif fully_ordered:
                    if scan is None:
                        scan = _extremal_pair(semiring, values, ch)
                    m1, m1_count, m2 = scan
                    loo = m2 if (cval == m1 and m1_count == 1) else node_val
                    ordered_hits += 1
                else:
                    if not cumulative_ready:
                        t = one
                        for j in range(m):
                            prefix[j] = t
                            t = mul(t, values[ch[j]])
                        t = one
                        for j in range(m - 1, -1, -1):
                            suffix[j] = t
                            t = mul(t, values[ch[j]])
                        cumulative_ready = True
                        fallbacks += 1
                    loo = mul(suffix[idx], prefix[idx])
                adj[c] = add(adj[c], mul(a, loo))
    _note_stats(stats, circuit, 2 * circuit.max_arity,
                divisions=divisions, ordered_hits=ordered_hits,
                fallbacks=fallbacks)
    return _fold_leaves(circuit, adj, semiring)


VARIANTS = {
    "naive": backward_naive,
    "cancel": backward_cancel,
    "dynamic": backward_dynamic,
    "opt": backward_optimized,
}


def grad_amc(circuit: Circuit, labels: LiteralMap, semiring, algo="opt", *,
             check=True, trust_deterministic=False, stats=None):
    """Model count and per-literal conditioned counts in one round trip.

    Returns ``(amc, gradient)``. Literals with no leaf in the circuit get
    the additive identity unless smoothing introduced their gadget.
    """
    try:
        backward = VARIANTS[algo]
    except KeyError:
        valid = ", ".join(sorted(VARIANTS))
        raise ConfigError(f"unknown variant {algo!r}; valid: {valid}") from None
    tape = forward(circuit, labels, semiring, check=check,
                   trust_deterministic=trust_deterministic)
    grads = backward(circuit, tape, semiring, stats=stats)
    return tape.root_value, grads


def variable_gradient(gradient: LiteralMap, semiring):
    """Per-variable gradient grad[v] + (-grad[-v]) for complementary labels.

    Only well defined with additive inverses; refused otherwise.
    """
    if not semiring.supports_negation:
        raise UnsupportedOperationError(
            f"variable gradients need additive inverses; semiring "
            f"'{semiring.name}' has none"
        )
    add, neg = semiring.add, semiring.negate
    return [
        add(gradient.get(v), neg(gradient.get(-v)))
        for v in range(1, gradient.num_vars + 1)
    ]
