"""Exact feasibility of systems of strict/weak linear sign constraints.

A system is a conjunction of homogeneous constraints f(x) > 0, f(x) <= 0 or
f(x) = 0 over rational coordinates.  Feasibility is decided by
Fourier-Motzkin elimination carrying one strictness bit per constraint:
equalities are substituted away first, then variables are eliminated from the
inequalities one at a time, and a witness is rebuilt by back-substitution
through interval midpoints.  Everything is exact; a returned witness always
satisfies the original system and `None` means genuinely empty.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import DimensionMismatch
from .linalg import QVector, primitive_tuple

REL_GT = ">0"
REL_LE = "<=0"
REL_EQ = "=0"

_RELS = (REL_GT, REL_LE, REL_EQ)


@dataclass(frozen=True)
class StrictSystem:
    """Homogeneous constraints (form, relation) in a fixed dimension.

    relation is one of ">0", "<=0", "=0"; the form is a coefficient vector
    read against the same coordinates as the sought witness.
    """

    dim: int
    constraints: tuple

    def __init__(self, dim: int, constraints: Sequence):
        object.__setattr__(self, "dim", dim)
        normed = []
        for form, rel in constraints:
            coeffs = tuple(Fraction(c) for c in form)
            if len(coeffs) != dim:
                raise DimensionMismatch(f"form length {len(coeffs)} vs dim {dim}")
            if rel not in _RELS:
                raise ValueError(f"unknown relation {rel!r}")
            normed.append((coeffs, rel))
        object.__setattr__(self, "constraints", tuple(normed))


def _dedup(rows):
    """rows: list of (coeffs tuple, strict bool) -> deduplicated list.

    Identical forms merge; strict wins (it implies the weak one).
    """
    best = {}
    order = []
    for coeffs, strict in rows:
        key = primitive_tuple(coeffs)
        if key in best:
            best[key] = best[key] or strict
        else:
            best[key] = strict
            order.append(key)
    return [(tuple(Fraction(v) for v in key), best[key]) for key in order]


def feasible_witness(system: StrictSystem) -> Optional[QVector]:
    """Exact witness of the system, or None when it is infeasible."""
    n = system.dim

    # Step 1: substitute equalities away.  subs records (var, coeff map)
    # with x_var = sum(coeff[k] * x_k) over the other variables.
    ineqs = []  # (coeffs, strict) meaning sum(c x) > 0 / >= 0
    eqs = []
    for coeffs, rel in system.constraints:
        if rel == REL_EQ:
            eqs.append(list(coeffs))
        elif rel == REL_GT:
            ineqs.append((list(coeffs), True))
        else:  # f <= 0  <=>  -f >= 0
            ineqs.append(([-c for c in coeffs], False))

    subs = []  # applied in order; undone in reverse
    alive = list(range(n))
    for eq in eqs:
        # re-express through earlier substitutions
        for var, rule in subs:
            if eq[var] != 0:
                f = eq[var]
                eq[var] = Fraction(0)
                for k, c in rule.items():
                    eq[k] += f * c
        j = None
        for k in alive:
            if eq[k] != 0:
                j = k
                break
        if j is None:
            continue  # 0 = 0
        rule = {k: -eq[k] / eq[j] for k in alive if k != j and eq[k] != 0}
        subs.append((j, rule))
        alive.remove(j)
        for coeffs, _s in ineqs:
            if coeffs[j] != 0:
                f = coeffs[j]
                coeffs[j] = Fraction(0)
                for k, c in rule.items():
                    coeffs[k] += f * c

    # Step 2: Fourier-Motzkin over the remaining variables, last to first.
    # levels[v] holds the system just before eliminating variable alive[v].
    rows = _dedup((tuple(c), s) for c, s in ineqs)
    levels = {}
    for pos in range(len(alive) - 1, -1, -1):
        v = alive[pos]
        levels[v] = rows
        lower, upper, passthrough = [], [], []
        for coeffs, strict in rows:
            cv = coeffs[v]
            if cv > 0:
                lower.append((coeffs, strict))
            elif cv < 0:
                upper.append((coeffs, strict))
            else:
                passthrough.append((coeffs, strict))
        new = list(passthrough)
        for lc, ls in lower:
            for uc, us in upper:
                comb = tuple(-uc[v] * a + lc[v] * b for a, b in zip(lc, uc))
                strict = ls or us
                if all(c == 0 for c in comb):
                    if strict:
                        return None  # 0 > 0
                    continue
                new.append((comb, strict))
        rows = _dedup(new)

    for coeffs, strict in rows:
        # only variable-free rows can remain; a strict one is 0 > 0
        if strict and all(c == 0 for c in coeffs):
            return None

    # Step 3: back-substitute, earliest surviving variable first.
    x = [Fraction(0)] * n
    for pos, v in enumerate(alive):
        lo = hi = None  # (value, strict)
        for coeffs, strict in levels.get(v, ()):
            cv = coeffs[v]
            if cv == 0:
                continue
            rest = sum((coeffs[k] * x[k] for k in alive[:pos]), Fraction(0))
            bound = -rest / cv
            if cv > 0:
                if lo is None or bound > lo[0] or (bound == lo[0] and strict):
                    lo = (bound, strict)
            else:
                if hi is None or bound < hi[0] or (bound == hi[0] and strict):
                    hi = (bound, strict)
        if lo is None and hi is None:
            x[v] = Fraction(0)
        elif hi is None:
            x[v] = lo[0] + 1
        elif lo is None:
            x[v] = hi[0] - 1
        elif lo[0] < hi[0]:
            x[v] = (lo[0] + hi[0]) / 2
        else:
            # elimination guarantees lo == hi with both bounds weak
            x[v] = lo[0]

    for j, rule in reversed(subs):
        x[j] = sum((c * x[k] for k, c in rule.items()), Fraction(0))

    witness = QVector(x)
    assert _satisfies(system, witness), "internal: witness fails substitution"
    return witness


def _satisfies(system: StrictSystem, point: QVector) -> bool:
    for coeffs, rel in system.constraints:
        val = sum((c * x for c, x in zip(coeffs, point)), Fraction(0))
        if rel == REL_GT and not val > 0:
            return False
        if rel == REL_LE and not val <= 0:
            return False
        if rel == REL_EQ and val != 0:
            return False
    return True
