"""Ordered set partitions of a projected system and their block frames.

An ordered partition splits the index set of a projected system into a
sequence of non-empty blocks.  The running unions of the blocks induce a
filtration by the spans of the corresponding duals; each block then gets its
own "frame": the original members and duals projected into the orthogonal
layer the block carves out of the filtration.  Frames are what the
partition-indexed indicator functions read.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import EmptyGroundSet, GroundMismatch
from .geometry import EuclideanBasis, ProjectedBasis
from .linalg import QVector
from .subsets import bits, iter_submasks


@dataclass(frozen=True)
class OrderedPartition:
    """Non-empty blocks, as bitmasks, tiling a non-empty ground mask."""

    ground: int
    blocks: tuple[int, ...]

    def __post_init__(self):
        if self.ground == 0:
            raise EmptyGroundSet("ground mask is empty")
        seen = 0
        for b in self.blocks:
            if b == 0:
                raise GroundMismatch("empty block")
            if b & seen:
                raise GroundMismatch("blocks overlap")
            seen |= b
        if seen != self.ground:
            raise GroundMismatch("blocks do not tile the ground mask")

    @property
    def num_blocks(self) -> int:
        return len(self.blocks)

    def block_of(self, i: int) -> int:
        """0-based block position holding index i."""
        for u, b in enumerate(self.blocks):
            if b >> i & 1:
                return u
        raise KeyError(i)


def enumerate_ordered_partitions(ground: int) -> list[OrderedPartition]:
    """All ordered partitions of the ground mask.

    Deterministic: the block tuples come out in lexicographic order (first
    block ascending as a bitmask, then recursively).  The count for a ground
    set of n elements is the n-th ordered-Bell number.
    """
    if ground == 0:
        raise EmptyGroundSet("ground mask is empty")
    out: list[OrderedPartition] = []

    def rec(rest: int, acc: tuple[int, ...]):
        if rest == 0:
            out.append(OrderedPartition(ground, acc))
            return
        for first in iter_submasks(rest):
            if first:
                rec(rest & ~first, acc + (first,))

    rec(ground, ())
    return out


def fubini(n: int) -> int:
    """Number of ordered partitions of an n-element set."""
    a = [1]
    for m in range(1, n + 1):
        total = 0
        binom = 1
        for k in range(1, m + 1):
            binom = binom * (m - k + 1) // k
            total += binom * a[m - k]
        a.append(total)
    return a[n]


class PartitionFrame:
    """Per-block projections of a projected system along a partition.

    For block u with running union E^u (as masks of ambient indices), the
    layer W^u is the orthogonal complement of span(duals of E^{u-1}) inside
    span(duals of E^u).  Each index i in block u contributes:

      proj_elements[i] : element i projected onto W^u; because element i is
                         orthogonal to the earlier dual span, this equals its
                         projection onto span(duals of E^u).
      proj_duals[i]    : dual i minus its projection onto the earlier dual
                         span (dual i already lies in span(duals of E^u)).

    Within one block the two families pair to the identity, and distinct
    blocks are orthogonal layers.
    """

    def __init__(self, base: ProjectedBasis, partition: OrderedPartition):
        if partition.ground != base.upper & ~base.lower:
            raise GroundMismatch("partition ground differs from the projected index set")
        self.base = base
        self.partition = partition
        basis = base.basis

        self.proj_elements: dict[int, QVector] = {}
        self.proj_duals: dict[int, QVector] = {}
        self._block_of: dict[int, int] = {}

        prev_duals: list[QVector] = []
        prev_mask = 0
        for u, block in enumerate(partition.blocks):
            cum_mask = prev_mask | block
            cum_duals = prev_duals + [base.dual(i) for i in bits(block)]
            for i in bits(block):
                self._block_of[i] = u
                self.proj_elements[i] = basis.project_onto(cum_duals, base.element(i))
                self.proj_duals[i] = base.dual(i) - basis.project_onto(prev_duals, base.dual(i))
            prev_duals = cum_duals
            prev_mask = cum_mask

        self.elem_icov = {i: basis.icov(v) for i, v in self.proj_elements.items()}
        self.dual_icov = {i: basis.icov(v) for i, v in self.proj_duals.items()}

    @property
    def indices(self) -> tuple[int, ...]:
        return self.base.indices

    def block_of(self, i: int) -> int:
        return self._block_of[i]

    def first_block(self) -> int:
        return self.partition.blocks[0]


def build_frame(base, partition: OrderedPartition) -> PartitionFrame:
    """Frame for (base, partition), cached on the underlying basis.

    `base` may be a full basis (taken as its trivial projection) or a
    projected system.
    """
    if isinstance(base, EuclideanBasis):
        base = base.full_projection()
    key = (base.lower, base.upper, partition.blocks)
    cache = base.basis._frame_cache
    frame = cache.get(key)
    if frame is None:
        frame = PartitionFrame(base, partition)
        cache[key] = frame
    return frame
