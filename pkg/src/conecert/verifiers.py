"""The identity catalog: pointwise verification and chamber certification.

Each identity relates an indicator sum (over intermediate subsets or over
ordered partitions) to a closed form.  `verify` evaluates both sides
independently at one exact point pair and returns a Verdict whose two sides
must agree exactly.  `certify` fixes the direction parameters, enumerates
every chamber of the arrangement cut out by all linear forms the identity
reads, and evaluates the verdict at one exact interior witness per chamber.

Identity tokens (the `--identity` vocabulary) and what each one states:

  L31_THETA      flipped-sign indicator == alternating sum of positive-cone
                 indicators over subsets above the direction cut
  L31_THETA_HAT  dual version, summing dual-cone indicators below the cut
  L32            alternating tau / tau-hat products over a nested interval
                 telescope to a delta
  L33_EQ1        signed theta / theta-hat matrices multiply to the identity
                 in both orders (hypotheses: zero directions, or an obtuse
                 basis with the negated directions weakly dominant)
  L33_EQ2        alternating tau-hat / tau products telescope to a delta
  P34            mixed-direction product entry collapses to a signed delta
                 of the two direction cuts
  C35            equal directions: the signed matrices are mutual inverses
  C36            alternating theta-hat / tau sum computes the dominance
                 indicator of the direction
  STAR_RECURSION partition indicators factor through the first block
  STARSTAR_SIGNS the sign counts factor the same way
  P41            alternating phi sum over all ordered partitions equals the
                 signed dual flipped indicator
  BOULDER_21     alternating phi sum equals dominance plus alternating psi sum
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .chambers import MAX_CELLS, MAX_FORMS, Cell, enumerate_cells, form_set
from .errors import HypothesisViolated, MissingParam, NonRegularLambda, NotNested
from .geometry import EuclideanBasis, lambda_cut
from .indicators import (
    dominance,
    partition_indicators,
    sign_counts,
    tau_pair,
    theta_pair,
)
from .linalg import QVector, int_dot
from .partitions import OrderedPartition, build_frame, enumerate_ordered_partitions
from .subsets import full_mask, is_subset, iter_between, iter_submasks, popcount

IDENTITIES = (
    "L31_THETA",
    "L31_THETA_HAT",
    "L32",
    "L33_EQ1",
    "L33_EQ2",
    "P34",
    "C35",
    "C36",
    "STAR_RECURSION",
    "STARSTAR_SIGNS",
    "P41",
    "BOULDER_21",
)


def _sign(n: int) -> int:
    return -1 if n & 1 else 1


def _delta(a, b) -> int:
    return int(a == b)


@dataclass
class Verdict:
    """One exact check: lhs is the indicator sum, rhs the closed form."""

    identity: str
    lhs: int
    rhs: int
    params: dict = field(default_factory=dict)
    note: str = ""

    @property
    def ok(self) -> bool:
        return self.lhs == self.rhs


@dataclass(frozen=True)
class CellRecord:
    """Verdict values at one chamber's interior witness."""

    signs: tuple[int, ...]
    witness: QVector
    lhs: int
    rhs: int

    @property
    def ok(self) -> bool:
        return self.lhs == self.rhs


@dataclass
class CertificateReport:
    """Exhaustive per-chamber verdicts for fixed direction parameters."""

    identity: str
    params: dict
    num_forms: int
    num_lam_forms: int
    cells: list[CellRecord]

    @property
    def num_cells(self) -> int:
        return len(self.cells)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.cells)

    def failures(self) -> list[CellRecord]:
        return [c for c in self.cells if not c.ok]


class SubsetMatrix:
    """Integer matrix indexed by nested subset pairs of a fixed index set.

    Entries with P not inside Q are identically zero and not stored.
    """

    def __init__(self, rank: int, entries: Optional[dict] = None):
        self.rank = rank
        self.entries = dict(entries) if entries else {}

    def entry(self, p: int, q: int) -> int:
        return self.entries.get((p, q), 0)

    def set(self, p: int, q: int, value: int) -> None:
        if not is_subset(p, q):
            raise NotNested("entries live on nested pairs only")
        if value:
            self.entries[(p, q)] = value
        else:
            self.entries.pop((p, q), None)

    @classmethod
    def identity(cls, rank: int) -> "SubsetMatrix":
        m = cls(rank)
        for s in range(1 << rank):
            m.set(s, s, 1)
        return m

    def mul(self, other: "SubsetMatrix") -> "SubsetMatrix":
        if self.rank != other.rank:
            raise NotNested("ranks differ")
        out = SubsetMatrix(self.rank)
        for q in range(1 << self.rank):
            for p in iter_submasks(q):
                total = 0
                for s in iter_between(p, q):
                    a = self.entries.get((p, s))
                    if a:
                        b = other.entries.get((s, q))
                        if b:
                            total += a * b
                if total:
                    out.entries[(p, q)] = total
        return out

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SubsetMatrix)
            and self.rank == other.rank
            and self.entries == other.entries
        )

    def __repr__(self) -> str:
        return f"SubsetMatrix(rank={self.rank}, nonzero={len(self.entries)})"


def signed_matrices(basis: EuclideanBasis, lam: QVector, h: QVector):
    """The two signed indicator matrices at (lam, h).

    Entry (P, Q) of the first is (-1)^(|P| + b) * theta, of the second
    (-1)^(|P| + b-hat) * theta-hat, with counts taken on the (P, Q)
    projection at lam.  Diagonals are (-1)^|P|.
    """
    n = basis.rank
    th = SubsetMatrix(n)
    th_hat = SubsetMatrix(n)
    for q in range(1 << n):
        for p in iter_submasks(q):
            pb = basis.project(p, q)
            sc = sign_counts(pb, lam)
            t, t_hat = theta_pair(pb, lam, h)
            th.set(p, q, _sign(sc.eta) * t)
            th_hat.set(p, q, _sign(sc.eta_hat) * t_hat)
    return th, th_hat


def obtuse(basis: EuclideanBasis) -> bool:
    """All distinct basis vectors pair non-positively."""
    g = basis.gram
    return all(
        g.entry(i, j) <= 0 for i in range(basis.rank) for j in range(basis.rank) if i != j
    )


def hypothesis_ok(basis: EuclideanBasis, lam: Optional[QVector]) -> bool:
    """Zero direction, or obtuse basis with -lam weakly dominant."""
    if lam is None or lam.is_zero():
        return True
    if not obtuse(basis):
        return False
    full = basis.full_projection()
    return all(int_dot(full.elem_icov[i], lam.coords) <= 0 for i in full.indices)


def _need(value, name: str):
    if value is None:
        raise MissingParam(f"identity requires parameter {name!r}")
    return value


def _zero(basis: EuclideanBasis) -> QVector:
    return QVector([0] * basis.rank)


def _tail_partition(part: OrderedPartition):
    """(first block, tail partition or None) of a partition."""
    first = part.blocks[0]
    rest = part.ground & ~first
    if rest == 0:
        return first, None
    return first, OrderedPartition(rest, part.blocks[1:])


def _theta_products(basis, p, r, lam1, lam2, h):
    """Entries (P, R) of both signed products: (first*second-hat, second-hat*first)."""
    a_entry = 0
    b_entry = 0
    for q in iter_between(p, r):
        low = basis.project(p, q)
        high = basis.project(q, r)
        th_low = theta_pair(low, lam1, h)[0]
        th_hat_low = theta_pair(low, lam2, h)[1]
        th_high = theta_pair(high, lam1, h)[0]
        th_hat_high = theta_pair(high, lam2, h)[1]
        s_low1 = _sign(sign_counts(low, lam1).eta)
        s_low2 = _sign(sign_counts(low, lam2).eta_hat)
        s_high1 = _sign(sign_counts(high, lam1).eta)
        s_high2 = _sign(sign_counts(high, lam2).eta_hat)
        a_entry += (s_low1 * th_low) * (s_high2 * th_hat_high)
        b_entry += (s_low2 * th_hat_low) * (s_high1 * th_high)
    return a_entry, b_entry


def _phi_sum(basis, p, r, lam, h) -> int:
    """Alternating phi sum over every ordered partition of the (p, r) system."""
    if p == r:
        return 1
    pb = basis.project(p, r)
    total = 0
    for part in enumerate_ordered_partitions(r & ~p):
        pc = partition_indicators(build_frame(pb, part), lam, h)
        total += _sign(pc.alpha) * pc.phi
    return total


def _psi_side(basis, p, r, lam, h) -> int:
    """Dominance plus the alternating psi sum (zero partitions when p == r)."""
    pb = basis.project(p, r)
    total = dominance(pb, lam)
    if p == r:
        return total
    for part in enumerate_ordered_partitions(r & ~p):
        pc = partition_indicators(build_frame(pb, part), lam, h)
        total += _sign(pc.beta) * pc.psi
    return total


def verify(
    basis: EuclideanBasis,
    identity: str,
    *,
    p: Optional[int] = None,
    q: Optional[int] = None,
    r: Optional[int] = None,
    partition: Optional[OrderedPartition] = None,
    lam: Optional[QVector] = None,
    lam1: Optional[QVector] = None,
    lam2: Optional[QVector] = None,
    h: Optional[QVector] = None,
    strict: bool = True,
) -> Verdict:
    """Evaluate one identity at one exact parameter point.

    lhs is always the side computed by summation over subsets or ordered
    partitions; rhs is the closed form.  The verdict passes iff they agree
    exactly.  For the two-clause identities both clauses are packed into a
    single integer pair, documented below per identity.
    """
    if identity not in IDENTITIES:
        raise MissingParam(f"unknown identity {identity!r}")
    full = full_mask(basis.rank)
    note = ""

    if identity in ("L32", "L33_EQ1", "L33_EQ2", "P34", "C35", "C36"):
        # matrix-entry statements: entries at non-nested pairs are zero on
        # both sides, so the interval sum is empty and the check is trivial
        pp = _need(p, "p")
        rr = _need(r, "r")
        if not is_subset(pp, rr):
            params = dict(p=pp, r=rr)
            for key, val in (("lam", lam), ("lam1", lam1), ("lam2", lam2), ("h", h)):
                if val is not None:
                    params[key] = val
            return Verdict(identity, 0, 0, params, note="non-nested pair")

    if identity == "L31_THETA":
        p = _need(p, "p")
        q = _need(q, "q")
        lam = _need(lam, "lam")
        h = _need(h, "h")
        pb = basis.project(p, q)
        cut = lambda_cut(pb, lam)
        lhs = 0
        for s in iter_between(cut.p_lambda, q):
            lhs += _sign(popcount(s & ~cut.p_lambda)) * tau_pair(basis.project(p, s), h)[0]
        rhs = theta_pair(pb, lam, h)[0]
        params = dict(p=p, q=q, lam=lam, h=h)

    elif identity == "L31_THETA_HAT":
        p = _need(p, "p")
        q = _need(q, "q")
        lam = _need(lam, "lam")
        h = _need(h, "h")
        pb = basis.project(p, q)
        cut = lambda_cut(pb, lam)
        lhs = 0
        for s in iter_between(p, cut.q_lambda):
            lhs += _sign(popcount(cut.q_lambda & ~s)) * tau_pair(basis.project(s, q), h)[1]
        rhs = theta_pair(pb, lam, h)[1]
        params = dict(p=p, q=q, lam=lam, h=h)

    elif identity == "L32":
        p = _need(p, "p")
        r = _need(r, "r")
        h = _need(h, "h")
        lhs = 0
        for s in iter_between(p, r):
            tau = tau_pair(basis.project(p, s), h)[0]
            tau_hat = tau_pair(basis.project(s, r), h)[1]
            lhs += _sign(popcount(s & ~p)) * tau * tau_hat
        rhs = _delta(p, r)
        params = dict(p=p, r=r, h=h)

    elif identity in ("L33_EQ1", "C35"):
        # lhs packs both product orders as their total deviation from the
        # delta entry; rhs is 0.
        p = _need(p, "p")
        r = _need(r, "r")
        h = _need(h, "h")
        if identity == "C35":
            lam = _need(lam, "lam")
            lam1 = lam2 = lam
            params = dict(p=p, r=r, lam=lam, h=h)
        else:
            lam1 = lam1 if lam1 is not None else _zero(basis)
            lam2 = lam2 if lam2 is not None else _zero(basis)
            ok1 = hypothesis_ok(basis, lam1)
            ok2 = hypothesis_ok(basis, lam2)
            if not (ok1 and ok2):
                if strict:
                    raise HypothesisViolated(
                        "directions must be zero, or the basis obtuse with "
                        "their negations weakly dominant"
                    )
                note = "hypothesis_ok=False"
            params = dict(p=p, r=r, lam1=lam1, lam2=lam2, h=h)
        a_entry, b_entry = _theta_products(basis, p, r, lam1, lam2, h)
        d = _delta(p, r)
        lhs = abs(a_entry - d) + abs(b_entry - d)
        rhs = 0
        note = (note + " " if note else "") + f"entries=({a_entry},{b_entry})"

    elif identity == "L33_EQ2":
        p = _need(p, "p")
        r = _need(r, "r")
        h = _need(h, "h")
        if strict and not (hypothesis_ok(basis, lam1) and hypothesis_ok(basis, lam2)):
            raise HypothesisViolated(
                "directions must be zero, or the basis obtuse with "
                "their negations weakly dominant"
            )
        lhs = 0
        for s in iter_between(p, r):
            tau_hat = tau_pair(basis.project(p, s), h)[1]
            tau = tau_pair(basis.project(s, r), h)[0]
            lhs += _sign(popcount(s & ~p)) * tau_hat * tau
        rhs = _delta(p, r)
        params = dict(p=p, r=r, h=h)

    elif identity == "P34":
        p = _need(p, "p")
        r = _need(r, "r")
        lam1 = _need(lam1, "lam1")
        lam2 = _need(lam2, "lam2")
        h = _need(h, "h")
        _, lhs = _theta_products(basis, p, r, lam1, lam2, h)
        pb = basis.project(p, r)
        t1 = lambda_cut(pb, lam1).p_lambda
        t2 = lambda_cut(pb, lam2).q_lambda
        rhs = _sign(popcount(t1 & ~p)) * _delta(t1, t2)
        params = dict(p=p, r=r, lam1=lam1, lam2=lam2, h=h)

    elif identity == "C36":
        p = _need(p, "p")
        r = _need(r, "r")
        lam = _need(lam, "lam")
        h = _need(h, "h")
        lhs = 0
        for s in iter_between(p, r):
            low = basis.project(p, s)
            b_hat = sign_counts(low, lam).b_hat
            th_hat = theta_pair(low, lam, h)[1]
            tau = tau_pair(basis.project(s, r), h)[0]
            lhs += _sign(b_hat) * th_hat * tau
        rhs = dominance(basis.project(p, r), lam)
        params = dict(p=p, r=r, lam=lam, h=h)

    elif identity == "STAR_RECURSION":
        # lhs = 2*phi + psi of the partition; rhs = 2*theta*phi' + tau*phi'
        # through the first-block split (phi' is the tail partition's phi).
        p = _need(p, "p")
        r = _need(r, "r")
        partition = _need(partition, "partition")
        lam = _need(lam, "lam")
        h = _need(h, "h")
        pb = basis.project(p, r)
        pc = partition_indicators(build_frame(pb, partition), lam, h)
        first, tail = _tail_partition(partition)
        q_mid = r & ~first
        if tail is None:
            phi_tail = 1
        else:
            phi_tail = partition_indicators(
                build_frame(basis.project(p, q_mid), tail), lam, h
            ).phi
        high = basis.project(q_mid, r)
        theta = theta_pair(high, lam, h)[0]
        tau = tau_pair(high, h)[0]
        lhs = 2 * pc.phi + pc.psi
        rhs = 2 * theta * phi_tail + tau * phi_tail
        params = dict(p=p, r=r, partition=partition, lam=lam, h=h)

    elif identity == "STARSTAR_SIGNS":
        # lhs = 64*alpha + b of the partition; rhs rebuilds both through the
        # first-block split (64 > any count here, so the packing is faithful).
        p = _need(p, "p")
        r = _need(r, "r")
        partition = _need(partition, "partition")
        lam = _need(lam, "lam")
        pb = basis.project(p, r)
        zero = _zero(basis)
        pc = partition_indicators(build_frame(pb, partition), lam, zero)
        first, tail = _tail_partition(partition)
        q_mid = r & ~first
        if tail is None:
            alpha_tail = 0
            b_tail = 0
        else:
            tc = partition_indicators(build_frame(basis.project(p, q_mid), tail), lam, zero)
            alpha_tail = tc.alpha
            b_tail = tc.b
        b_high = sign_counts(basis.project(q_mid, r), lam).b
        a_first = popcount(first)
        lhs = 64 * pc.alpha + pc.b
        rhs = 64 * (alpha_tail + a_first + 1 + b_high) + (b_high + b_tail)
        params = dict(p=p, r=r, partition=partition, lam=lam)

    elif identity == "P41":
        p = _need(p, "p")
        r = _need(r, "r")
        lam = _need(lam, "lam")
        h = _need(h, "h")
        lhs = _phi_sum(basis, p, r, lam, h)
        pb = basis.project(p, r)
        rhs = _sign(sign_counts(pb, lam).b_hat) * theta_pair(pb, lam, h)[1]
        params = dict(p=p, r=r, lam=lam, h=h)

    elif identity == "BOULDER_21":
        lam = _need(lam, "lam")
        h = _need(h, "h")
        p = p if p is not None else 0
        r = r if r is not None else full
        lhs = _phi_sum(basis, p, r, lam, h)
        rhs = _psi_side(basis, p, r, lam, h)
        params = dict(p=p, r=r, lam=lam, h=h)

    else:  # pragma: no cover
        raise MissingParam(identity)

    return Verdict(identity=identity, lhs=lhs, rhs=rhs, params=params, note=note)


# ---------------------------------------------------------------------------
# form collection


def _pair_covs(basis, p, r):
    """(element covectors, lower-side dual covectors, upper-side dual and
    element covectors) shared by the interval-product identities."""
    elem_low = []
    dual_low = []
    elem_high = []
    dual_high = []
    for s in iter_between(p, r):
        low = basis.project(p, s)
        high = basis.project(s, r)
        elem_low += [low.elem_icov[i] for i in low.indices]
        dual_low += [low.dual_icov[i] for i in low.indices]
        elem_high += [high.elem_icov[i] for i in high.indices]
        dual_high += [high.dual_icov[i] for i in high.indices]
    return elem_low, dual_low, elem_high, dual_high


def collect_forms(
    basis: EuclideanBasis,
    identity: str,
    *,
    p: Optional[int] = None,
    q: Optional[int] = None,
    r: Optional[int] = None,
    partition: Optional[OrderedPartition] = None,
):
    """(h-side, lam-side) wall families an identity's indicators read.

    The h-side set generates the arrangement `certify` enumerates; the
    lam-side set is the regularity gate for direction parameters.
    """
    if identity not in IDENTITIES:
        raise MissingParam(f"unknown identity {identity!r}")
    n = basis.rank
    full = full_mask(n)

    if identity in ("L31_THETA", "L31_THETA_HAT"):
        p = _need(p, "p")
        q = _need(q, "q")
        pb = basis.project(p, q)
        elem = [pb.elem_icov[i] for i in pb.indices]
        if identity == "L31_THETA":
            h_covs = elem
            lam_covs = [pb.dual_icov[i] for i in pb.indices]
        else:
            h_covs = []
            for s in iter_between(p, q):
                up = basis.project(s, q)
                h_covs += [up.dual_icov[i] for i in up.indices]
            lam_covs = elem
        return form_set(n, h_covs), form_set(n, lam_covs)

    if identity == "BOULDER_21":
        p = p if p is not None else 0
        r = r if r is not None else full
    else:
        p = _need(p, "p")
        r = _need(r, "r")

    if identity in ("L32", "L33_EQ2"):
        el, dl, eh, dh = _pair_covs(basis, p, r)
        return form_set(n, el + dl + eh + dh), form_set(n, [])

    if identity in ("L33_EQ1", "C35", "P34"):
        el, dl, eh, dh = _pair_covs(basis, p, r)
        covs = el + dl + eh + dh
        return form_set(n, covs), form_set(n, covs)

    if identity == "C36":
        el, dl, eh, dh = _pair_covs(basis, p, r)
        return form_set(n, dl + eh), form_set(n, el)

    if identity in ("STAR_RECURSION", "STARSTAR_SIGNS"):
        partition = _need(partition, "partition")
        pb = basis.project(p, r)
        frame = build_frame(pb, partition)
        lam_covs = [frame.dual_icov[i] for i in pb.indices]
        if identity == "STARSTAR_SIGNS":
            # pure sign identity, no h dependence: one trivial chamber
            return form_set(n, []), form_set(n, lam_covs)
        h_covs = [frame.elem_icov[i] for i in pb.indices]
        first, tail = _tail_partition(partition)
        high = basis.project(r & ~first, r)
        h_covs += [high.elem_icov[i] for i in high.indices]
        if tail is not None:
            tail_frame = build_frame(basis.project(p, r & ~first), tail)
            h_covs += [tail_frame.elem_icov[i] for i in tail_frame.indices]
            lam_covs += [tail_frame.dual_icov[i] for i in tail_frame.indices]
        lam_covs += [high.dual_icov[i] for i in high.indices]
        return form_set(n, h_covs), form_set(n, lam_covs)

    if identity in ("P41", "BOULDER_21"):
        pb = basis.project(p, r)
        h_covs = []
        lam_covs = []
        if p != r:
            for part in enumerate_ordered_partitions(r & ~p):
                frame = build_frame(pb, part)
                h_covs += [frame.elem_icov[i] for i in pb.indices]
                lam_covs += [frame.dual_icov[i] for i in pb.indices]
        lam_covs += [pb.elem_icov[i] for i in pb.indices]
        if identity == "P41":
            h_covs += [pb.dual_icov[i] for i in pb.indices]
        return form_set(n, h_covs), form_set(n, lam_covs)

    raise MissingParam(identity)  # pragma: no cover


# ---------------------------------------------------------------------------
# certification


class CertifySession:
    """Chamber-exhaustive checking of one identity at fixed subset params.

    The arrangement is enumerated once and shared by every direction the
    session is asked to certify.
    """

    def __init__(
        self,
        basis: EuclideanBasis,
        identity: str,
        *,
        p: Optional[int] = None,
        q: Optional[int] = None,
        r: Optional[int] = None,
        partition: Optional[OrderedPartition] = None,
        strict: bool = True,
        max_forms: int = MAX_FORMS,
        max_cells: int = MAX_CELLS,
    ):
        self.basis = basis
        self.identity = identity
        full = full_mask(basis.rank)
        if identity == "BOULDER_21":
            p = p if p is not None else 0
            r = r if r is not None else full
        self.p = p
        self.q = q
        self.r = r
        self.partition = partition
        self.strict = strict
        self.h_forms, self.lam_forms = collect_forms(
            basis, identity, p=p, q=q, r=r, partition=partition
        )
        self.cells: list[Cell] = enumerate_cells(
            self.h_forms, max_forms=max_forms, max_cells=max_cells
        )
        self._index = {f: i for i, f in enumerate(self.h_forms.forms)}
        self._fast_tables = None
        self._p34_static = None
        if identity in ("P41", "BOULDER_21") and p != r:
            self._fast_tables = self._build_fast_tables()
        elif identity == "P34":
            self._p34_static = self._build_p34_static()

    # -- fast path for the partition-sum identities ------------------------

    def _build_fast_tables(self):
        pb = self.basis.project(self.p, self.r)
        frames = [
            build_frame(pb, part) for part in enumerate_ordered_partitions(self.r & ~self.p)
        ]
        tables = []
        for fr in frames:
            elem_bits = {i: 1 << self._index[fr.elem_icov[i]] for i in fr.indices}
            tables.append((fr, elem_bits))
        dual_bits = None
        if self.identity == "P41":
            dual_bits = {i: 1 << self._index[pb.dual_icov[i]] for i in pb.indices}
        return pb, tables, dual_bits

    def _fast_records(self, lam: QVector) -> list[CellRecord]:
        pb, tables, dual_bits = self._fast_tables
        lamc = lam.coords
        first_specs = []  # per frame: (sign, phi mask, phi want, psi mask, psi want) or None
        for fr, elem_bits in tables:
            pc_mask = 0
            pc_want = 0
            psi_want = 0
            conflict_phi = False
            conflict_psi = False
            first = fr.partition.blocks[0]
            b = 0
            c = 0
            for i in fr.indices:
                bit = elem_bits[i]
                d_l = int_dot(fr.dual_icov[i], lamc) > 0
                if not d_l:
                    b += 1
                    if not (first >> i & 1):
                        c += 1
                want_phi = 0 if d_l else bit
                want_psi = bit if (first >> i & 1) else want_phi
                if pc_mask & bit:
                    if (pc_want & bit) != want_phi:
                        conflict_phi = True
                    if (psi_want & bit) != want_psi:
                        conflict_psi = True
                pc_mask |= bit
                pc_want |= want_phi
                psi_want |= want_psi
            size = pb.size
            r_blocks = fr.partition.num_blocks
            a1 = popcount(first)
            alpha = b + size + r_blocks
            beta = 1 + c + (size - a1) + (r_blocks - 1)
            first_specs.append(
                (
                    _sign(alpha),
                    None if conflict_phi else (pc_mask, pc_want),
                    _sign(beta),
                    None if conflict_psi else (pc_mask, psi_want),
                )
            )

        if self.identity == "P41":
            sc = sign_counts(pb, lam)
            rhs_sign = _sign(sc.b_hat)
            th_mask = 0
            th_want = 0
            conflict = False
            for i in pb.indices:
                bit = dual_bits[i]
                e_l = int_dot(pb.elem_icov[i], lamc) > 0
                want = 0 if e_l else bit
                if th_mask & bit and (th_want & bit) != want:
                    conflict = True
                th_mask |= bit
                th_want |= want
            theta_spec = None if conflict else (th_mask, th_want)
        else:
            dom = dominance(pb, lam)

        records = []
        for cell in self.cells:
            cmask = 0
            for i, s in enumerate(cell.signs):
                if s > 0:
                    cmask |= 1 << i
            lhs = 0
            psi_sum = 0
            for s_alpha, phi_spec, s_beta, psi_spec in first_specs:
                if phi_spec is not None and (cmask & phi_spec[0]) == phi_spec[1]:
                    lhs += s_alpha
                if psi_spec is not None and (cmask & psi_spec[0]) == psi_spec[1]:
                    psi_sum += s_beta
            if self.identity == "P41":
                rhs = 0
                if theta_spec is not None and (cmask & theta_spec[0]) == theta_spec[1]:
                    rhs = rhs_sign
            else:
                rhs = dom + psi_sum
            records.append(CellRecord(cell.signs, cell.witness, lhs, rhs))
        return records

    # -- fast path for the product-vanishing identity ----------------------

    def _build_p34_static(self):
        """Per middle subset: both interval projections plus form-bit maps."""
        terms = []
        for q in iter_between(self.p, self.r):
            low = self.basis.project(self.p, q)
            high = self.basis.project(q, self.r)
            low_bits = {i: 1 << self._index[low.dual_icov[i]] for i in low.indices}
            high_bits = {i: 1 << self._index[high.elem_icov[i]] for i in high.indices}
            terms.append((low, high, low_bits, high_bits))
        return terms

    def _p34_records(self, lam1: QVector, lam2: QVector) -> list[CellRecord]:
        l1 = lam1.coords
        l2 = lam2.coords
        specs = []  # per middle subset: (sign, hat mask, hat want, mask, want)
        for low, high, low_bits, high_bits in self._p34_static:
            hat_mask = 0
            hat_want = 0
            b_hat = 0
            ok_hat = True
            for i in low.indices:
                bit = low_bits[i]
                e_l = int_dot(low.elem_icov[i], l2) > 0
                if not e_l:
                    b_hat += 1
                want = 0 if e_l else bit
                if hat_mask & bit and (hat_want & bit) != want:
                    ok_hat = False
                hat_mask |= bit
                hat_want |= want
            th_mask = 0
            th_want = 0
            b = 0
            ok_th = True
            for i in high.indices:
                bit = high_bits[i]
                d_l = int_dot(high.dual_icov[i], l1) > 0
                if not d_l:
                    b += 1
                want = 0 if d_l else bit
                if th_mask & bit and (th_want & bit) != want:
                    ok_th = False
                th_mask |= bit
                th_want |= want
            if not (ok_hat and ok_th):
                continue
            sgn = _sign(popcount(low.lower) + b_hat + popcount(high.lower) + b)
            specs.append((sgn, hat_mask, hat_want, th_mask, th_want))

        pb = self.basis.project(self.p, self.r)
        t1 = lambda_cut(pb, lam1).p_lambda
        t2 = lambda_cut(pb, lam2).q_lambda
        rhs = _sign(popcount(t1 & ~self.p)) * _delta(t1, t2)

        records = []
        for cell in self.cells:
            cmask = 0
            for i, s in enumerate(cell.signs):
                if s > 0:
                    cmask |= 1 << i
            lhs = 0
            for sgn, m1, w1, m2, w2 in specs:
                if (cmask & m1) == w1 and (cmask & m2) == w2:
                    lhs += sgn
            records.append(CellRecord(cell.signs, cell.witness, lhs, rhs))
        return records

    # -- generic path ------------------------------------------------------

    def _check_regular(self, lam: Optional[QVector], name: str) -> None:
        if lam is None:
            return
        for f in self.lam_forms.forms:
            if int_dot(f, lam.coords) == 0:
                raise NonRegularLambda(f"{name} lies on wall {f}")

    def run(
        self,
        lam: Optional[QVector] = None,
        lam1: Optional[QVector] = None,
        lam2: Optional[QVector] = None,
    ) -> CertificateReport:
        self._check_regular(lam, "lam")
        self._check_regular(lam1, "lam1")
        self._check_regular(lam2, "lam2")

        if self._fast_tables is not None:
            records = self._fast_records(_need(lam, "lam"))
        elif self._p34_static is not None:
            records = self._p34_records(_need(lam1, "lam1"), _need(lam2, "lam2"))
        else:
            records = []
            for cell in self.cells:
                v = verify(
                    self.basis,
                    self.identity,
                    p=self.p,
                    q=self.q,
                    r=self.r,
                    partition=self.partition,
                    lam=lam,
                    lam1=lam1,
                    lam2=lam2,
                    h=cell.witness,
                    strict=self.strict,
                )
                records.append(CellRecord(cell.signs, cell.witness, v.lhs, v.rhs))
        params = dict(p=self.p, q=self.q, r=self.r, partition=self.partition)
        if lam is not None:
            params["lam"] = lam
        if lam1 is not None:
            params["lam1"] = lam1
        if lam2 is not None:
            params["lam2"] = lam2
        return CertificateReport(
            identity=self.identity,
            params=params,
            num_forms=len(self.h_forms.forms),
            num_lam_forms=len(self.lam_forms.forms),
            cells=records,
        )


def certify(
    basis: EuclideanBasis,
    identity: str,
    *,
    p: Optional[int] = None,
    q: Optional[int] = None,
    r: Optional[int] = None,
    partition: Optional[OrderedPartition] = None,
    lam: Optional[QVector] = None,
    lam1: Optional[QVector] = None,
    lam2: Optional[QVector] = None,
    strict: bool = True,
    max_forms: int = MAX_FORMS,
    max_cells: int = MAX_CELLS,
) -> CertificateReport:
    """One-shot chamber certification; see CertifySession for batched runs."""
    session = CertifySession(
        basis,
        identity,
        p=p,
        q=q,
        r=r,
        partition=partition,
        strict=strict,
        max_forms=max_forms,
        max_cells=max_cells,
    )
    return session.run(lam=lam, lam1=lam1, lam2=lam2)
