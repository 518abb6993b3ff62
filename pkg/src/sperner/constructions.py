"""Builders for cross-Sperner tuples with known measures.

Four shapes:

* pair builders: the two-family product and sum extremal examples;
* block product tuples: partition the ground set into k blocks, pick a
  colex initial segment inside each block, family i takes segment sets on
  block i and complement sets on every other block;
* tagged-antichain sum tuples: k-1 singleton families {i} + tail block,
  plus everything incomparable to that antichain as the k-th family;
* fixed-prefix tuples: k incomparable prefixes on the first ell elements,
  free tails above (the shape behind the conjectured product upper bound).

Every builder re-verifies its output with is_cross_sperner before
returning, so a returned tuple is always a valid witness.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .bounds import min_ground_for_antichain
from .errors import (
    AntichainTooSmall,
    BadGround,
    BadSegmentSize,
    EmptyBlock,
    InfeasibleParams,
)
from .lattice import (
    Family,
    FamilyTuple,
    check_ground,
    colex_initial_segment,
    incomparable_complement,
    is_cross_sperner,
    _positions_with_bit,
)


def _verified(t: FamilyTuple) -> FamilyTuple:
    ok, violation = is_cross_sperner(t)
    if not ok:  # pragma: no cover - builders are proven shapes
        raise AssertionError(f"builder produced an invalid tuple: {violation}")
    return t


def build_pair_product(n: int) -> FamilyTuple:
    """The extremal product pair: sets containing 1 but not n versus sets
    containing n but not 1.  Both have 2^(n-2) members."""
    check_ground(n, minimum=2)
    with_first = _positions_with_bit(n, 0)
    with_last = _positions_with_bit(n, n - 1)
    f = Family(n, with_first & ~with_last)
    g = Family(n, with_last & ~with_first)
    return _verified(FamilyTuple(n, (f, g)))


def build_pair_sum(n: int) -> FamilyTuple:
    """The extremal sum pair: the single set {1..floor(n/2)} versus
    everything incomparable to it, together scoring
    2^n - 2^ceil(n/2) - 2^floor(n/2) + 2."""
    check_ground(n, minimum=2)
    f = Family(n, 1 << ((1 << (n // 2)) - 1))
    return _verified(FamilyTuple(n, (f, incomparable_complement(f))))


# -- block product tuples ----------------------------------------------------


@dataclass(frozen=True)
class ProductParams:
    """Parameters for the block product construction.

    The ground set splits into k contiguous blocks, larger blocks first:
    block 1 = {1..ceil(n/k)}.  segments[i] is the size of the colex
    initial segment kept on block i; complement parts must stay non-empty,
    so 1 <= segments[i] < 2^(block size).  The default floor(2^b / k)
    (clamped to 1) balances the segment against the k-1 complement roles
    the block plays.
    """

    n: int
    k: int
    segments: Optional[tuple[int, ...]] = None

    def __post_init__(self):
        check_ground(self.n, minimum=1)
        if self.k < 2:
            raise BadGround(f"need k >= 2, got {self.k}")
        if self.segments is not None:
            object.__setattr__(self, "segments", tuple(self.segments))
            if len(self.segments) != self.k:
                raise BadSegmentSize(
                    f"got {len(self.segments)} segment sizes for k={self.k}"
                )

    def block_sizes(self) -> tuple[int, ...]:
        q, r = divmod(self.n, self.k)
        return tuple(q + 1 if i < r else q for i in range(self.k))

    def block_elements(self) -> tuple[tuple[int, ...], ...]:
        out, start = [], 1
        for b in self.block_sizes():
            out.append(tuple(range(start, start + b)))
            start += b
        return tuple(out)

    def segment_sizes(self) -> tuple[int, ...]:
        if self.segments is not None:
            return self.segments
        return tuple(max(1, (1 << b) // self.k) for b in self.block_sizes())

    def predicted_sizes(self) -> tuple[int, ...]:
        t = self.segment_sizes()
        sizes = self.block_sizes()
        out = []
        for i in range(self.k):
            s = t[i]
            for j in range(self.k):
                if j != i:
                    s *= (1 << sizes[j]) - t[j]
            out.append(s)
        return tuple(out)


def _spread(positions: int, choices) -> int:
    """Extend a position bitset by one disjoint block: each existing
    position forks once per allowed block mask.  Works because a block
    mask shares no bits with what is already accumulated, so OR is
    addition and the fork is a left shift."""
    out = 0
    for m in choices:
        out |= positions << m
    return out


def build_product_tuple(p: ProductParams) -> FamilyTuple:
    """Materialize the block product tuple for p.

    Family i = {F : F cap block_i in segment_i, F cap block_j in
    complement_j for j != i}; its size is segments[i] times the product of
    the complement counts of the other blocks.
    """
    sizes = p.block_sizes()
    elems = p.block_elements()
    t = p.segment_sizes()
    seg_masks: list[list[int]] = []
    comp_masks: list[list[int]] = []
    for i in range(p.k):
        cap = 1 << sizes[i]
        if not 1 <= t[i] <= cap:
            raise BadSegmentSize(
                f"segment size {t[i]} on block {i + 1} outside 1..{cap}"
            )
        seg = colex_initial_segment(p.n, elems[i], t[i])
        local = set(seg.masks())
        block_mask = 0
        for e in elems[i]:
            block_mask |= 1 << (e - 1)
        rest = []
        s = block_mask
        while True:
            if s not in local:
                rest.append(s)
            if s == 0:
                break
            s = (s - 1) & block_mask
        if not rest:
            raise EmptyBlock(
                f"segment swallows all of block {i + 1}, its complement part is empty"
            )
        seg_masks.append(sorted(local))
        comp_masks.append(sorted(rest))
    families = []
    for i in range(p.k):
        bits = 1  # the empty position, forked block by block
        for j in range(p.k):
            bits = _spread(bits, seg_masks[j] if j == i else comp_masks[j])
        families.append(Family(p.n, bits))
    return _verified(FamilyTuple(p.n, tuple(families)))


# -- tagged-antichain sum tuples ---------------------------------------------


@dataclass(frozen=True)
class SumParams:
    """Parameters for the tagged-antichain sum construction.

    The antichain has k-1 members {i} | G where G is the tail block of
    the last `tail` elements; families 1..k-1 are those singletons and
    family k is everything incomparable to the antichain.  The free knob
    is a = n - 2*tail, an integer with the parity of n.  Auto-selection
    picks the unique parity-matching a within one unit of the optimum of
    the comparability count, i.e. with
    a - (log2 k + log2(2^(k-1) / (2^(k-1) - 1))) in (-1, 1],
    decided by exact integer comparisons.  An explicit a skips the window
    and only needs parity and fit.
    """

    n: int
    k: int
    a: Optional[int] = None

    def __post_init__(self):
        check_ground(self.n, minimum=1)
        if self.k < 2:
            raise BadGround(f"need k >= 2, got {self.k}")
        if self.a is None:
            object.__setattr__(self, "a", self._auto_a())
        self._validate()

    def _auto_a(self) -> int:
        num = self.k << (self.k - 1)
        den = (1 << (self.k - 1)) - 1
        a = self.n & 1
        while True:
            # -1 < a - a* <= 1 with a* = log2(num/den), squared out to ints
            if (den << a) <= 2 * num and num < (den << (a + 1)):
                return a
            if (den << a) > 2 * num:  # walked past the window
                raise InfeasibleParams(
                    f"no a with the parity of n={self.n} fits the window for k={self.k}"
                )
            a += 2

    def _validate(self):
        if (self.n - self.a) % 2:
            raise InfeasibleParams(
                f"a={self.a} must have the parity of n={self.n}"
            )
        tail = (self.n - self.a) // 2
        if tail < 0:
            raise InfeasibleParams(f"a={self.a} exceeds n={self.n}")
        if self.k - 1 > self.n - tail:
            raise InfeasibleParams(
                f"antichain needs k-1={self.k - 1} elements outside the "
                f"tail of {tail}, only {self.n - tail} available"
            )

    @property
    def tail(self) -> int:
        return (self.n - self.a) // 2

    def tail_mask(self) -> int:
        t = self.tail
        return ((1 << t) - 1) << (self.n - t)

    def antichain_masks(self) -> tuple[int, ...]:
        g = self.tail_mask()
        return tuple(g | (1 << i) for i in range(self.k - 1))

    def predicted_sum(self) -> int:
        # (k-1) + 2^n - comparability of the antichain, all integers here
        t = self.tail
        comp = (
            self.k * (1 << t)
            + (1 << (self.n - t))
            - (1 << (self.n - t - (self.k - 1)))
            - (self.k - 1)
        )
        return (self.k - 1) + (1 << self.n) - comp


def build_sum_tuple(p: SumParams) -> FamilyTuple:
    """Materialize the tagged-antichain sum tuple for p: k-1 singleton
    families plus the incomparable remainder as family k."""
    members = p.antichain_masks()
    antichain = Family.from_masks(p.n, members)
    rest = incomparable_complement(antichain)
    if not rest.members:
        raise InfeasibleParams(
            "every subset is comparable to the antichain, family k would be empty"
        )
    families = tuple(Family(p.n, 1 << m) for m in members) + (rest,)
    return _verified(FamilyTuple(p.n, families))


# -- fixed-prefix tuples -----------------------------------------------------


@dataclass(frozen=True)
class PrefixParams:
    """Parameters for the fixed-prefix construction: k incomparable
    prefixes on the first ell elements (middle-layer sets of [ell] in
    colex order), each family being all sets with that exact prefix.
    Default ell is the least ground size whose middle layer holds k sets.
    """

    n: int
    k: int
    ell: Optional[int] = None

    def __post_init__(self):
        check_ground(self.n, minimum=1)
        if self.k < 2:
            raise BadGround(f"need k >= 2, got {self.k}")
        if self.ell is None:
            object.__setattr__(self, "ell", min_ground_for_antichain(self.k))
        if self.ell > self.n:
            raise BadGround(f"prefix ground ell={self.ell} exceeds n={self.n}")
        from math import comb

        if comb(self.ell, self.ell // 2) < self.k:
            raise AntichainTooSmall(
                f"the middle layer of a {self.ell}-element ground holds only "
                f"{comb(self.ell, self.ell // 2)} incomparable sets, need {self.k}"
            )

    def prefix_masks(self) -> tuple[int, ...]:
        half = self.ell // 2
        out = []
        for m in range(1 << self.ell):
            if m.bit_count() == half:
                out.append(m)
                if len(out) == self.k:
                    break
        return tuple(out)


def build_prefix_tuple(p: PrefixParams) -> FamilyTuple:
    """Materialize the fixed-prefix tuple: family i is every set whose
    intersection with {1..ell} equals the i-th middle-layer prefix, so
    each family has exactly 2^(n-ell) members."""
    tails = 1
    width = 1 << p.ell
    span = width
    total = 1 << p.n
    while span < total:
        tails |= tails << span
        span <<= 1
    families = tuple(Family(p.n, tails << m) for m in p.prefix_masks())
    return _verified(FamilyTuple(p.n, families))
