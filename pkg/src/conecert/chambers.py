"""Chambers of central hyperplane arrangements, exactly.

The arrangement is given by integer covectors (forms).  A chamber is a
realizable all-strict sign vector; enumeration is incremental: cells carry
their extreme rays (integer tuples), and a new form either leaves a cell on
one side (all rays weakly one side) or splits it, in which case boundary
rays are combined pairwise along the new wall.  Ray signs give an exact
certificate in both directions, and the sum of a cell's rays is an exact
interior witness.

Arrangements that do not span the ambient space are quotiented to their
span first, so cones stay pointed throughout.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Optional, Sequence

from .errors import CellBudgetExceeded, SamplingExhausted
from .linalg import QVector, int_dot, primitive_tuple

MAX_FORMS = 40
MAX_CELLS = 500_000


@dataclass(frozen=True)
class FormSet:
    """Deduplicated nonzero primitive integer covectors in a fixed dimension.

    Forms differing by a positive scale collapse; a form and its negative
    stay distinct (their sign semantics differ).
    """

    dim: int
    forms: tuple[tuple[int, ...], ...]


def form_set(dim: int, covectors: Iterable[Sequence]) -> FormSet:
    seen = set()
    out = []
    for cov in covectors:
        key = primitive_tuple(cov)
        if len(key) != dim:
            raise ValueError(f"covector length {len(key)} vs dim {dim}")
        if all(c == 0 for c in key):
            raise ValueError("zero covector has no wall")
        if key not in seen:
            seen.add(key)
            out.append(key)
    return FormSet(dim, tuple(out))


@dataclass(frozen=True)
class Cell:
    """One chamber: its strict sign per form, plus an integer interior point."""

    signs: tuple[int, ...]
    witness: QVector


def _prim(v: Sequence[int]) -> tuple[int, ...]:
    g = 0
    for x in v:
        g = gcd(g, abs(x))
    if g > 1:
        return tuple(x // g for x in v)
    return tuple(v)


def _independent_subset(forms, dim):
    """Indices of a greedy maximal linearly independent subset, in order."""
    reduced = []  # (pivot column, reduced row)
    chosen = []
    for idx, f in enumerate(forms):
        v = [Fraction(c) for c in f]
        for p, row in reduced:
            if v[p] != 0:
                fct = v[p] / row[p]
                v = [a - fct * b for a, b in zip(v, row)]
        p = next((j for j, a in enumerate(v) if a != 0), None)
        if p is not None:
            reduced.append((p, v))
            chosen.append(idx)
            if len(chosen) == dim:
                break
    return chosen


def _invert_int(rows):
    """Exact inverse of a square integer matrix, as Fraction rows."""
    n = len(rows)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(rows)]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


class _Cone:
    __slots__ = ("signbits", "rays", "tights")

    def __init__(self, signbits, rays, tights):
        self.signbits = signbits
        self.rays = rays
        self.tights = tights


def enumerate_cells(
    fs: FormSet,
    max_forms: int = MAX_FORMS,
    max_cells: int = MAX_CELLS,
    validate: bool = False,
) -> list[Cell]:
    """Every chamber of the arrangement exactly once, sorted by sign vector.

    Raises CellBudgetExceeded beyond the form or cell budget.
    """
    m = len(fs.forms)
    if m > max_forms:
        raise CellBudgetExceeded(f"{m} forms exceed budget {max_forms}")
    if m == 0:
        return [Cell((), QVector([0] * fs.dim))]

    chosen = _independent_subset(fs.forms, fs.dim)
    k = len(chosen)
    span_basis = [fs.forms[i] for i in chosen]  # rows of B; x = B^T y

    proc_order = chosen + [i for i in range(m) if i not in set(chosen)]
    pos_of = {orig: t for t, orig in enumerate(proc_order)}
    mapped = [tuple(int_dot(fs.forms[i], b) for b in span_basis) for i in proc_order]

    # seed cells: the 2^k orthants of the first k (independent) mapped forms
    inv_cols = _invert_int(mapped[:k])
    base_rays = []
    for j in range(k):
        col = [inv_cols[r][j] for r in range(k)]
        base_rays.append(primitive_tuple(col))
    full_k = (1 << k) - 1
    cells: list[_Cone] = []
    for sbits in range(1 << k):
        rays = []
        tights = []
        for j in range(k):
            r = base_rays[j]
            if not (sbits >> j & 1):
                r = tuple(-x for x in r)
            rays.append(r)
            tights.append(full_k ^ (1 << j))
        cells.append(_Cone(sbits, rays, tights))

    for t in range(k, m):
        f = mapped[t]
        bit = 1 << t
        nxt: list[_Cone] = []
        for cone in cells:
            vals = [int_dot(f, r) for r in cone.rays]
            has_pos = any(v > 0 for v in vals)
            has_neg = any(v < 0 for v in vals)
            if not has_neg:
                tights = [tg | bit if v == 0 else tg for tg, v in zip(cone.tights, vals)]
                nxt.append(_Cone(cone.signbits | bit, cone.rays, tights))
            elif not has_pos:
                tights = [tg | bit if v == 0 else tg for tg, v in zip(cone.tights, vals)]
                nxt.append(_Cone(cone.signbits, cone.rays, tights))
            else:
                plus = [i for i, v in enumerate(vals) if v > 0]
                minus = [i for i, v in enumerate(vals) if v < 0]
                zero = [i for i, v in enumerate(vals) if v == 0]
                new_rays = []
                new_tights = []
                for ip in plus:
                    for im in minus:
                        tcommon = cone.tights[ip] & cone.tights[im]
                        adjacent = True
                        for q, tq in enumerate(cone.tights):
                            if q != ip and q != im and tq & tcommon == tcommon:
                                adjacent = False
                                break
                        if not adjacent:
                            continue
                        vp, vm = vals[ip], vals[im]
                        w = _prim([vp * b - vm * a for a, b in zip(cone.rays[ip], cone.rays[im])])
                        new_rays.append(w)
                        new_tights.append(tcommon | bit)
                shared_rays = [cone.rays[i] for i in zero] + new_rays
                shared_tights = [cone.tights[i] | bit for i in zero] + new_tights
                nxt.append(
                    _Cone(
                        cone.signbits | bit,
                        [cone.rays[i] for i in plus] + shared_rays,
                        [cone.tights[i] for i in plus] + shared_tights,
                    )
                )
                nxt.append(
                    _Cone(
                        cone.signbits,
                        [cone.rays[i] for i in minus] + shared_rays,
                        [cone.tights[i] for i in minus] + shared_tights,
                    )
                )
        cells = nxt
        if len(cells) > max_cells:
            raise CellBudgetExceeded(f"more than {max_cells} cells")

    d = fs.dim
    out = []
    for cone in cells:
        y = [0] * k
        for r in cone.rays:
            for j in range(k):
                y[j] += r[j]
        x = tuple(sum(y[j] * span_basis[j][i] for j in range(k)) for i in range(d))
        signs = tuple(1 if cone.signbits >> pos_of[i] & 1 else -1 for i in range(m))
        if validate:
            for i in range(m):
                assert signs[i] * int_dot(fs.forms[i], x) > 0, "witness not interior"
        out.append(Cell(signs, QVector(x)))
    out.sort(key=lambda c: c.signs)
    return out


def sample_regular(
    fs: FormSet,
    count: int,
    seed: int,
    bound: int = 9,
    max_rejects: int = 10_000,
) -> list[QVector]:
    """Seeded integer points in [-bound, bound]^dim avoiding every wall.

    Raises SamplingExhausted after max_rejects consecutive rejections.
    """
    if bound < 1:
        raise ValueError("bound must be at least 1")
    rng = random.Random(seed)
    out: list[QVector] = []
    rejects = 0
    while len(out) < count:
        x = tuple(rng.randint(-bound, bound) for _ in range(fs.dim))
        if all(int_dot(f, x) != 0 for f in fs.forms):
            out.append(QVector(x))
            rejects = 0
        else:
            rejects += 1
            if rejects >= max_rejects:
                raise SamplingExhausted(f"{max_rejects} consecutive rejections")
    return out


def wall_point(
    fs: FormSet,
    wall: int,
    seed: int,
    bound: int = 9,
    max_tries: int = 10_000,
) -> Optional[QVector]:
    """An integer point on exactly the given wall, avoiding all other walls.

    Returns None when the budget runs out (e.g. a second form is a negative
    multiple of the wall form, so every wall point is shared).
    """
    f = fs.forms[wall]
    d = fs.dim
    j = next(i for i, c in enumerate(f) if c != 0)
    kernel = []
    for i in range(d):
        if i == j:
            continue
        v = [0] * d
        v[i] = f[j]
        v[j] = -f[i]
        kernel.append(_prim(v))
    if not kernel:
        return None
    rng = random.Random(seed)
    for _ in range(max_tries):
        x = [0] * d
        for v in kernel:
            c = rng.randint(-bound, bound)
            for i in range(d):
                x[i] += c * v[i]
        if all(c == 0 for c in x):
            continue
        assert int_dot(f, x) == 0
        if all(int_dot(g, x) != 0 for t, g in enumerate(fs.forms) if t != wall):
            return QVector(x)
    return None
