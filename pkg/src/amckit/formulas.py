"""Propositional formulas and the brute-force model-space oracle.

The oracle evaluates the defining sum-over-models / product-over-literals
fold directly, with no circuit machinery, so that it stays an independent
ground truth for the circuit engine. Everything here is a pure function and
safe under parallel test execution; enumeration is capped at 24 variables.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ParseError, ScaleError
from .literals import LiteralMap, var_of

ORACLE_VAR_LIMIT = 24


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Bottom:
    pass


@dataclass(frozen=True)
class Lit:
    lit: int


@dataclass(frozen=True)
class Not:
    child: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


Formula = Top | Bottom | Lit | Not | And | Or


def formula_variables(phi) -> set[int]:
    t = type(phi)
    if t is Lit:
        return {var_of(phi.lit)}
    if t is Not:
        return formula_variables(phi.child)
    if t is And or t is Or:
        return formula_variables(phi.left) | formula_variables(phi.right)
    return set()


def evaluate(phi, mask: int) -> bool:
    """Truth of phi under the assignment mask (bit v-1 = variable v)."""
    t = type(phi)
    if t is Lit:
        lit = phi.lit
        bit = (mask >> (var_of(lit) - 1)) & 1
        return bool(bit) if lit > 0 else not bit
    if t is And:
        return evaluate(phi.left, mask) and evaluate(phi.right, mask)
    if t is Or:
        return evaluate(phi.left, mask) or evaluate(phi.right, mask)
    if t is Not:
        return not evaluate(phi.child, mask)
    return t is Top


def condition(phi, lit: int):
    """Substitute the literal with true and its negation with false.

    Pure substitution on literal leaves; no simplification is performed.
    """
    t = type(phi)
    if t is Lit:
        if phi.lit == lit:
            return Top()
        if phi.lit == -lit:
            return Bottom()
        return phi
    if t is Not:
        return Not(condition(phi.child, lit))
    if t is And:
        return And(condition(phi.left, lit), condition(phi.right, lit))
    if t is Or:
        return Or(condition(phi.left, lit), condition(phi.right, lit))
    return phi


def _check_budget(variables):
    if len(variables) > ORACLE_VAR_LIMIT:
        raise ScaleError(
            f"oracle limited to {ORACLE_VAR_LIMIT} variables, got {len(variables)}"
        )


def _mask_iter(variables):
    """Assignment masks over the given variables in lexicographic order.

    Lexicographic over the sorted variable tuple with false < true.
    """
    vs = sorted(variables)
    n = len(vs)
    shifts = [v - 1 for v in vs]
    for counter in range(1 << n):
        mask = 0
        for i in range(n):
            if (counter >> (n - 1 - i)) & 1:
                mask |= 1 << shifts[i]
        yield mask


def enumerate_models(phi, variables=None):
    """All satisfying total assignments as literal sets, lexicographic."""
    if variables is None:
        variables = formula_variables(phi)
    _check_budget(variables)
    vs = sorted(variables)
    out = []
    for mask in _mask_iter(vs):
        if evaluate(phi, mask):
            out.append(
                frozenset(v if (mask >> (v - 1)) & 1 else -v for v in vs)
            )
    return out


def oracle_amc(phi, labels: LiteralMap, semiring, variables=None):
    """Sum over models of the product of member-literal labels."""
    if variables is None:
        variables = formula_variables(phi)
    _check_budget(variables)
    vs = sorted(variables)
    add, mul = semiring.add, semiring.mul
    total = semiring.zero
    for mask in _mask_iter(vs):
        if not evaluate(phi, mask):
            continue
        term = semiring.one
        for v in vs:
            term = mul(term, labels.get(v if (mask >> (v - 1)) & 1 else -v))
        total = add(total, term)
    return total


def oracle_grad(phi, labels: LiteralMap, semiring, variables=None) -> LiteralMap:
    """Model count of phi conditioned on each literal.

    The conditioned count for literal l enumerates over the remaining
    variables only, matching the convention that conditioning removes the
    variable from scope. Literals of variables the formula never mentions
    get the additive identity.
    """
    if variables is None:
        variables = formula_variables(phi)
    _check_budget(variables)
    num_vars = max(variables, default=0)
    out = LiteralMap(num_vars, semiring.zero)
    for v in sorted(variables):
        rest = set(variables) - {v}
        for lit in (v, -v):
            out.set(lit, oracle_amc(condition(phi, lit), labels, semiring, rest))
    return out


def oracle_hessian(phi, labels: LiteralMap, semiring, variables=None,
                   positive_only=False):
    """Matrix of doubly conditioned model counts.

    Entry (i, j) conditions on literal i then literal j and enumerates over
    the remaining variables. Conditioning twice on the same literal is
    idempotent, so diagonal entries equal the corresponding gradient
    entries; conditioning on both polarities of one variable yields the
    additive identity.
    """
    if variables is None:
        variables = formula_variables(phi)
    _check_budget(variables)
    fvars = set(variables)
    num_vars = max(fvars, default=0)
    if positive_only:
        lits = list(range(1, num_vars + 1))
    else:
        lits = list(range(1, num_vars + 1)) + [-v for v in range(1, num_vars + 1)]
    zero = semiring.zero
    rows = []
    for li in lits:
        vi = var_of(li)
        if vi not in fvars:
            rows.append([zero] * len(lits))
            continue
        phi_i = condition(phi, li)
        rest_i = fvars - {vi}
        row = []
        for lj in lits:
            vj = var_of(lj)
            if vj not in fvars:
                row.append(zero)
            elif vj == vi:
                if lj == li:
                    row.append(oracle_amc(phi_i, labels, semiring, rest_i))
                else:
                    row.append(zero)
            else:
                row.append(
                    oracle_amc(condition(phi_i, lj), labels, semiring,
                               rest_i - {vj})
                )
        rows.append(row)
    return rows


def read_dimacs(path):
    """Read a DIMACS CNF file; returns (formula, header variable count)."""
    num_vars = None
    num_clauses = None
    clauses = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("c"):
                continue
            if line.startswith("p"):
                parts = line.split()
                if len(parts) != 4 or parts[1] != "cnf":
                    raise ParseError(path, lineno, "bad DIMACS header")
                num_vars, num_clauses = int(parts[2]), int(parts[3])
                continue
            if num_vars is None:
                raise ParseError(path, lineno, "clause before header")
            try:
                ints = [int(t) for t in line.split()]
            except ValueError:
                raise ParseError(path, lineno, "non-integer token") from None
            if not ints or ints[-1] != 0:
                raise ParseError(path, lineno, "clause not terminated by 0")
            lits = ints[:-1]
            if any(l == 0 or var_of(l) > num_vars for l in lits):
                raise ParseError(path, lineno, "literal out of range")
            clauses.append(lits)
    if num_vars is None:
        raise ParseError(path, 1, "missing DIMACS header")
    if num_clauses is not None and len(clauses) != num_clauses:
        raise ParseError(path, 1,
                         f"header declares {num_clauses} clauses, found {len(clauses)}")
    formula = Top()
    first = True
    for lits in clauses:
        clause = Bottom() if not lits else None
        for l in lits:
            clause = Lit(l) if clause is None else Or(clause, Lit(l))
        formula = clause if first else And(formula, clause)
        first = False
    return formula, num_vars
