"""Bratteli sequences of simplicial groups with non-mixing connecting maps.

A sequence presents finitely many levels 1..L.  An optional periodic
tail (a level p < L) declares that the diagram continues forever past
level L, in one of two ways:

* cyclic, when rank_L == rank_p: the maps from level p on repeat
  literally, so rank and map at level t >= p depend only on
  (t - p) mod (L - p);
* self-similar, when rank_p == 1: every level-L node restarts the block
  below itself, so the level sizes grow by a factor of rank_L each
  period.  This is how infinite trees (full binary, full ternary) are
  presented with finite data.

The two readings agree when rank_p == rank_L == 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (
    BadRepeat,
    EmptyLevel,
    LevelOutOfRange,
    NonAscending,
    NotInjective,
    NotOrderUnit,
    RankMismatch,
)
from .simplicial import NonMixingMap, forall_n_leq, is_order_unit


@dataclass(frozen=True)
class BratteliSequence:
    """Levels 1..L with maps level t -> t+1 and an order unit at level 1."""

    ranks: tuple
    maps: tuple
    base_unit: tuple
    periodic_tail: int | None = None
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        ranks = tuple(self.ranks)
        maps = tuple(self.maps)
        base_unit = tuple(self.base_unit)
        if not ranks:
            raise RankMismatch("need at least one level")
        for r in ranks:
            if not isinstance(r, int) or r < 1:
                raise RankMismatch(f"ranks must be positive ints, got {r!r}")
        if len(maps) != len(ranks) - 1:
            raise RankMismatch(
                f"{len(ranks)} levels need {len(ranks) - 1} maps, got {len(maps)}"
            )
        for t, a in enumerate(maps, start=1):
            if not isinstance(a, NonMixingMap):
                raise TypeError(f"map {t} is not a NonMixingMap")
            if a.source_rank != ranks[t - 1] or a.target_rank != ranks[t]:
                raise RankMismatch(
                    f"map {t} goes {a.source_rank}->{a.target_rank} but the "
                    f"ranks there are {ranks[t - 1]} and {ranks[t]}"
                )
        if len(base_unit) != ranks[0]:
            raise RankMismatch(
                f"unit has length {len(base_unit)}, level 1 has rank {ranks[0]}"
            )
        if not is_order_unit(base_unit):
            raise NotOrderUnit(f"{base_unit} is not strictly positive")
        p = self.periodic_tail
        if p is not None:
            if not isinstance(p, int) or not 1 <= p < len(ranks):
                raise BadRepeat(
                    f"tail start must be a level in 1..{len(ranks) - 1}, got {p!r}"
                )
            if ranks[p - 1] != ranks[-1] and ranks[p - 1] != 1:
                raise BadRepeat(
                    f"tail from level {p} needs rank {ranks[-1]} there (cyclic) "
                    f"or rank 1 (self-similar), got {ranks[p - 1]}"
                )
        object.__setattr__(self, "ranks", ranks)
        object.__setattr__(self, "maps", maps)
        object.__setattr__(self, "base_unit", base_unit)

    @property
    def length(self) -> int:
        return len(self.ranks)

    @property
    def is_tailed(self) -> bool:
        return self.periodic_tail is not None

    @property
    def tail_kind(self):
        """None, "cyclic", or "substitution"."""
        if self.periodic_tail is None:
            return None
        if self.ranks[self.periodic_tail - 1] == self.ranks[-1]:
            return "cyclic"
        return "substitution"

    def has_level(self, t) -> bool:
        return isinstance(t, int) and t >= 1 and (self.is_tailed or t <= self.length)

    def _require_level(self, t):
        if not self.has_level(t):
            raise LevelOutOfRange(
                f"level {t!r} not available (presented 1..{self.length}"
                + (", with tail)" if self.is_tailed else ", no tail)")
            )

    def _memo(self, key, build):
        try:
            return self._cache[key]
        except KeyError:
            value = build()
            self._cache[key] = value
            return value

    def _block_position(self, t: int) -> int:
        # for t >= periodic_tail: the presented level in [p, L-1] that
        # plays the role of level t in the repeating block
        p = self.periodic_tail
        return p + (t - p) % (self.length - p)

    def _kids(self, b: int) -> tuple:
        """kids[c] lists the level-(b+1) coordinates fed by coordinate c."""

        def build():
            a = self.maps[b - 1]
            kids = [[] for _ in range(a.source_rank)]
            for j, i in enumerate(a.parent):
                kids[i].append(j)
            return tuple(tuple(k) for k in kids)

        return self._memo(("kids", b), build)

    # -- self-similar unrolling ------------------------------------------

    def _class_counts(self, t: int) -> tuple:
        # how many level-t nodes carry each block class; t >= length
        def build():
            L = self.length
            if t == L:
                return (self.ranks[-1],)
            counts = self._class_counts(t - 1)
            b = self._block_position(t - 1)
            a = self.maps[b - 1]
            if b + 1 < L:
                return tuple(counts[a.parent[j]] for j in range(a.target_rank))
            kids = self._kids(b)
            return (sum(counts[c] * len(kids[c]) for c in range(len(counts))),)

        return self._memo(("counts", t), build)

    def _sub_classes(self, t: int) -> tuple:
        # block class of every level-t node, in node order; t >= length
        def build():
            L = self.length
            if t == L:
                return (0,) * self.ranks[-1]
            classes = self._sub_classes(t - 1)
            b = self._block_position(t - 1)
            kids = self._kids(b)
            restart = b + 1 == L
            out = []
            for c in classes:
                for c2 in kids[c]:
                    out.append(0 if restart else c2)
            return tuple(out)

        return self._memo(("classes", t), build)

    # -- levels, maps, units ---------------------------------------------

    def rank_at(self, t: int) -> int:
        self._require_level(t)
        if t <= self.length:
            return self.ranks[t - 1]
        if self.tail_kind == "cyclic":
            return self.ranks[self._block_position(t) - 1]
        return sum(self._class_counts(t))

    def map_at(self, t: int) -> NonMixingMap:
        """The map from level t to level t+1."""
        if not isinstance(t, int) or t < 1:
            raise LevelOutOfRange(f"level {t!r} not available")
        if t < self.length:
            return self.maps[t - 1]
        self._require_level(t + 1)
        if self.tail_kind == "cyclic":
            return self.maps[self._block_position(t) - 1]

        def build():
            classes = self._sub_classes(t)
            b = self._block_position(t)
            block = self.maps[b - 1]
            kids = self._kids(b)
            parent, mult = [], []
            for j, c in enumerate(classes):
                for c2 in kids[c]:
                    parent.append(j)
                    mult.append(block.mult[c2])
            return NonMixingMap(len(classes), tuple(parent), tuple(mult))

        return self._memo(("map", t), build)

    def map_between(self, lo: int, hi: int) -> NonMixingMap:
        """Composite map from level lo to level hi (identity when equal)."""
        self._require_level(lo)
        self._require_level(hi)
        if lo > hi:
            raise LevelOutOfRange(f"need lo <= hi, got {lo} > {hi}")
        acc = NonMixingMap.identity(self.rank_at(lo))
        for t in range(lo, hi):
            acc = self.map_at(t).compose(acc)
        return acc

    def unit_at(self, t: int) -> tuple:
        """Image of the base unit at level t."""
        return self.map_between(1, t).apply(self.base_unit)

    def is_injective_presentation(self) -> bool:
        """True when every presented map is injective.

        For tailed sequences this settles the whole diagram: the
        unrolled maps past level L repeat (or restart) presented blocks
        and inherit injectivity from them.
        """
        return all(a.is_injective() for a in self.maps)

    # -- the class graph of a tail ---------------------------------------
    #
    # A position (b, c) stands for every unrolled node whose role in the
    # repeating block is coordinate c of level b, p <= b < L.  Whether a
    # node has descendants arbitrarily deep depends only on its position.

    def _tail_positions(self):
        p = self.periodic_tail
        return [
            (b, c) for b in range(p, self.length) for c in range(self.ranks[b - 1])
        ]

    def _children_positions(self, b: int, c: int):
        # one entry per child node, so duplicates count
        kids = self._kids(b)[c]
        if b + 1 < self.length:
            return [(b + 1, c2) for c2 in kids]
        if self.tail_kind == "cyclic":
            return [(self.periodic_tail, c2) for c2 in kids]
        return [(self.periodic_tail, 0)] * len(kids)

    def _alive_positions(self) -> frozenset:
        """Positions with an infinite chain of descendants."""

        def build():
            alive = set(self._tail_positions())
            changed = True
            while changed:
                changed = False
                for pos in list(alive):
                    if not any(ch in alive for ch in self._children_positions(*pos)):
                        alive.discard(pos)
                        changed = True
            return frozenset(alive)

        return self._memo(("alive",), build)

    def _single_chain_positions(self) -> frozenset:
        """Alive positions whose future is one infinite single-child chain.

        Nonempty exactly when the space of infinite paths through the
        alive part of the diagram has an isolated point.
        """

        def build():
            alive = self._alive_positions()
            sc = set(alive)
            changed = True
            while changed:
                changed = False
                for pos in list(sc):
                    live = [
                        ch for ch in self._children_positions(*pos) if ch in alive
                    ]
                    if len(live) != 1 or live[0] not in sc:
                        sc.discard(pos)
                        changed = True
            return frozenset(sc)

        return self._memo(("single",), build)


def keep_at(seq: BratteliSequence, t: int) -> tuple:
    """The level-t coordinates the limit actually sees, ascending.

    Without a tail these are the coordinates with a descendant at the
    last presented level; with a tail, those with descendants at every
    depth.
    """
    seq._require_level(t)
    L = seq.length
    if not seq.is_tailed:
        if t == L:
            return tuple(range(seq.ranks[-1]))
        return tuple(sorted(set(seq.map_between(t, L).parent)))
    p = seq.periodic_tail
    if t >= p:
        alive = seq._alive_positions()
        b = seq._block_position(t)
        if t >= L and seq.tail_kind == "substitution":
            classes = seq._sub_classes(t)
            return tuple(j for j, c in enumerate(classes) if (b, c) in alive)
        return tuple(c for c in range(seq.rank_at(t)) if (b, c) in alive)
    keep = set(keep_at(seq, p))
    for s in range(p - 1, t - 1, -1):
        keep = {seq.maps[s - 1].parent[j] for j in keep}
    return tuple(sorted(keep))


def injectivize(seq: BratteliSequence):
    """Prune coordinates the limit never sees; return (sequence, inclusions).

    inclusions[t-1] lists the kept old coordinates of level t, ascending.
    Every map of the pruned sequence is injective, unrolled levels
    included, and the pruned limit is the same group with the same order
    and unit.  A tail survives pruning with its start level unchanged.
    """
    L = seq.length
    keeps = [keep_at(seq, t) for t in range(1, L + 1)]
    for t, kept in enumerate(keeps, start=1):
        if not kept:
            raise EmptyLevel(f"level {t} loses every coordinate")
    if all(len(k) == r for k, r in zip(keeps, seq.ranks)):
        return seq, tuple(keeps)
    new_maps = []
    for t in range(1, L):
        old = seq.maps[t - 1]
        src = {c: i for i, c in enumerate(keeps[t - 1])}
        parent = tuple(src[old.parent[j]] for j in keeps[t])
        mult = tuple(old.mult[j] for j in keeps[t])
        new_maps.append(NonMixingMap(len(keeps[t - 1]), parent, mult))
    unit = tuple(seq.base_unit[c] for c in keeps[0])
    pruned = BratteliSequence(
        tuple(len(k) for k in keeps), tuple(new_maps), unit, seq.periodic_tail
    )
    return pruned, tuple(keeps)


def telescope(seq: BratteliSequence, keep) -> BratteliSequence:
    """Restrict the presentation to the listed levels (1-based, from 1).

    Maps of the result are the composites between consecutive kept
    levels.  A cyclic tail survives when the kept levels end in an
    arithmetic progression lying inside the tail whose step is a
    multiple of the period; a self-similar tail is dropped, since the
    telescoped level sizes no longer follow a fixed block.
    """
    keep = tuple(keep)
    if not keep or keep[0] != 1:
        raise NonAscending("kept levels must start at 1")
    for a, b in zip(keep, keep[1:]):
        if b <= a:
            raise NonAscending(f"kept levels not ascending at {a}, {b}")
    for t in keep:
        seq._require_level(t)
    if keep == tuple(range(1, seq.length + 1)):
        return seq
    ranks = tuple(seq.rank_at(t) for t in keep)
    maps = tuple(seq.map_between(a, b) for a, b in zip(keep, keep[1:]))
    tail = None
    if seq.tail_kind == "cyclic" and len(keep) >= 2:
        period = seq.length - seq.periodic_tail
        gaps = [b - a for a, b in zip(keep, keep[1:])]
        h = gaps[-1]
        if h % period == 0:
            t0 = len(gaps)
            while t0 > 0 and gaps[t0 - 1] == h and keep[t0 - 1] >= seq.periodic_tail:
                t0 -= 1
            if t0 <= len(gaps) - 1:
                tail = t0 + 1
    return BratteliSequence(ranks, maps, tuple(seq.base_unit), tail)


@dataclass(frozen=True)
class LimitElement:
    """A group element given at some level; later levels see its image."""

    level: int
    vec: tuple

    def __post_init__(self):
        if not isinstance(self.level, int) or self.level < 1:
            raise LevelOutOfRange(f"level must be a positive int, got {self.level!r}")
        vec = tuple(self.vec)
        for v in vec:
            if not isinstance(v, int):
                raise TypeError(f"entries must be ints, got {v!r}")
        object.__setattr__(self, "vec", vec)


def _pushed_pair(seq, a, b, strict):
    if strict and not seq.is_injective_presentation():
        raise NotInjective("presentation has non-injective maps")
    for el in (a, b):
        seq._require_level(el.level)
        want = seq.rank_at(el.level)
        if len(el.vec) != want:
            raise RankMismatch(
                f"element at level {el.level} has length {len(el.vec)}, expected {want}"
            )
    m = max(a.level, b.level)
    x = seq.map_between(a.level, m).apply(a.vec)
    y = seq.map_between(b.level, m).apply(b.vec)
    kept = keep_at(seq, m)
    return tuple(x[j] for j in kept), tuple(y[j] for j in kept)


def limit_eq(seq, a: LimitElement, b: LimitElement, strict: bool = False) -> bool:
    """Whether a and b are the same element of the limit group.

    Both elements are pushed to a common level and compared on the
    coordinates the limit sees.  Coordinates without deep descendants
    never influence any later level, so ignoring them is exact, not an
    approximation.  With strict=True a presentation with non-injective
    maps is rejected instead.
    """
    x, y = _pushed_pair(seq, a, b, strict)
    return x == y


def limit_leq(seq, a: LimitElement, b: LimitElement, strict: bool = False) -> bool:
    """Whether a <= b in the limit order."""
    x, y = _pushed_pair(seq, a, b, strict)
    return all(xi <= yi for xi, yi in zip(x, y))


def forall_n_leq_limit(seq, a, b, strict: bool = False) -> bool:
    """Whether n*a <= b in the limit for every n >= 1.

    Pushing multiplies each surviving coordinate by a positive integer,
    which changes no sign, so the coordinatewise test at the common
    level settles the question for all n at once.
    """
    x, y = _pushed_pair(seq, a, b, strict)
    return forall_n_leq(x, y)
