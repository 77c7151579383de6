"""Equivalence of presented sequences up to rational scaling.

Forgetting multiplicities (they dissolve into diagonal rescalings over
the rationals) leaves only the shape of a sequence: level sizes and
parent functions.  What remains of the limit is its space of infinite
paths.  Cardinality separates inequivalent limits; two finite limits of
the same size are equivalent; and two infinite limits without isolated
paths are both Cantor sets, hence equivalent, with an explicit zigzag
of surjections serving as the checkable certificate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .diagram import BratteliSequence, injectivize
from .errors import NotNormalized
from .simplicial import NonMixingMap


@dataclass(frozen=True)
class IndexSystem:
    """The shape of a sequence: sizes and parent functions only.

    parents[i][j] names the level-(i+1) coordinate that level-(i+2)
    coordinate j descends from (everything 0-based).  A periodic tail
    means the same as for a full sequence.
    """

    sizes: tuple
    parents: tuple
    periodic_tail: int | None = None
    _seq: BratteliSequence = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        sizes = tuple(self.sizes)
        parents = tuple(tuple(p) for p in self.parents)
        maps = tuple(
            NonMixingMap(sizes[i], parents[i], (1,) * len(parents[i]))
            for i in range(len(parents))
        )
        seq = BratteliSequence(sizes, maps, (1,) * sizes[0], self.periodic_tail)
        object.__setattr__(self, "sizes", sizes)
        object.__setattr__(self, "parents", parents)
        object.__setattr__(self, "_seq", seq)

    @classmethod
    def from_sequence(cls, seq: BratteliSequence) -> "IndexSystem":
        return cls(seq.ranks, tuple(a.parent for a in seq.maps), seq.periodic_tail)

    @property
    def length(self) -> int:
        return len(self.sizes)

    @property
    def is_tailed(self) -> bool:
        return self.periodic_tail is not None

    @property
    def tail_kind(self):
        return self._seq.tail_kind

    def has_level(self, t) -> bool:
        return self._seq.has_level(t)

    def size_at(self, t: int) -> int:
        return self._seq.rank_at(t)

    def sigma_at(self, t: int) -> tuple:
        """Parent function from level t+1 coordinates down to level t."""
        return self._seq.map_at(t).parent

    def proj(self, lo: int, hi: int) -> tuple:
        """Ancestor function from level hi coordinates down to level lo."""
        return self._seq.map_between(lo, hi).parent


def canonicalize_q(seq: BratteliSequence):
    """Split a sequence into its shape and the rational rescaling.

    Conjugating level t by the diagonal with entries 1/u_t[i] makes
    every connecting map a pure parent map and every unit the all-ones
    vector.  Returns (IndexSystem, diagonals), where diagonals[t-1] is
    that conjugating tuple of Fractions for each presented level.
    """
    diagonals = []
    units = [seq.unit_at(t) for t in range(1, seq.length + 1)]
    for u in units:
        diagonals.append(tuple(Fraction(1, v) for v in u))
    for t in range(1, seq.length):
        a = seq.maps[t - 1]
        u, v = units[t - 1], units[t]
        for j in range(a.target_rank):
            if a.mult[j] * u[a.parent[j]] != v[j]:
                raise NotNormalized(
                    f"unit transport fails at level {t}, coordinate {j}"
                )
    return IndexSystem.from_sequence(seq), tuple(diagonals)


def surjectivize(sys: IndexSystem):
    """Prune coordinates with no deep descendants.

    Afterwards every parent function is onto.  Returns the pruned system
    and, per level, the ascending tuple of surviving old coordinates.
    """
    pruned, inclusions = injectivize(sys._seq)
    return IndexSystem.from_sequence(pruned), inclusions


@dataclass(frozen=True)
class Cardinality:
    """Path count of a limit: an exact number, infinite, or a lower bound."""

    kind: str
    count: int | None = None

    def __post_init__(self):
        if self.kind not in ("finite", "infinite", "lower_bound"):
            raise ValueError(f"bad cardinality kind {self.kind!r}")
        if (self.count is None) != (self.kind == "infinite"):
            raise ValueError("count goes with finite and lower_bound kinds only")

    @classmethod
    def finite(cls, count: int) -> "Cardinality":
        return cls("finite", count)

    @classmethod
    def infinite(cls) -> "Cardinality":
        return cls("infinite", None)

    @classmethod
    def lower_bound(cls, count: int) -> "Cardinality":
        return cls("lower_bound", count)

    def __str__(self):
        if self.kind == "finite":
            return str(self.count)
        if self.kind == "infinite":
            return "infinite"
        return f">={self.count}"


def limit_cardinality(sys: IndexSystem) -> Cardinality:
    """How many infinite paths the pruned diagram carries.

    Without a tail only finitely many levels are known, so the path
    count of the presented part is just a lower bound.  With a tail the
    pruned sizes never shrink, so the limit is finite exactly when one
    full period adds no size, and then the size has already stabilized.
    """
    pruned, _ = surjectivize(sys)
    if not pruned.is_tailed:
        return Cardinality.lower_bound(pruned.sizes[-1])
    if pruned.size_at(pruned.periodic_tail) == pruned.size_at(pruned.length):
        return Cardinality.finite(pruned.size_at(pruned.length))
    return Cardinality.infinite()


def limit_is_perfect(sys: IndexSystem):
    """Whether the path space has no isolated point; None without a tail."""
    if not sys.is_tailed:
        return None
    return not sys._seq._single_chain_positions()


def _stable_level(pruned: IndexSystem, count: int) -> int:
    # first level where the pruned sizes reach their final value; from
    # there on every parent function is a bijection
    for t in range(1, pruned.length + 1):
        if pruned.size_at(t) == count:
            return t
    raise AssertionError("finite cardinality without a stable level")


@dataclass(frozen=True)
class Intertwining:
    """A zigzag of surjections between the pruned coordinate systems.

    f_maps[t] sends right-side coordinates at right_levels[t] to
    left-side coordinates at left_levels[t]; g_maps[t] sends left-side
    coordinates at left_levels[t+1] back to right-side coordinates at
    right_levels[t].  Every triangle composes to the ancestor function
    of its side.  closure says how the zigzag certifies the limits
    match: "stable-bijection" ends in a bijection past both stable
    levels, "perfect" relies on both limits being perfect.
    """

    left_levels: tuple
    right_levels: tuple
    f_maps: tuple
    g_maps: tuple
    closure: str


class _OutOfBudget(Exception):
    pass


class _Budget:
    __slots__ = ("left",)

    def __init__(self, n):
        self.left = n

    def spend(self):
        self.left -= 1
        if self.left < 0:
            raise _OutOfBudget
        return True


def _inverse_lists(f, n_targets):
    inv = [[] for _ in range(n_targets)]
    for x, a in enumerate(f):
        inv[a].append(x)
    return [tuple(v) for v in inv]


def _assignments(allowed, n_targets, budget):
    """Surjective choice functions, in balanced-first order.

    allowed[i] is the ascending tuple of permitted targets for slot i;
    yields every assignment hitting all of range(n_targets).  At every
    call site the distinct allowed sets are fibers of a surjection,
    hence pairwise disjoint, and surjectivity splits into independent
    coverage problems: the slots sharing a fiber must cover it alone.
    Counting slots against uncovered targets per fiber then prunes
    every dead prefix exactly.  If a caller ever passes overlapping
    sets, a slower generic search takes over.

    Order: each slot prefers the allowed target it has used least so
    far, ties broken by smaller index, so the first assignment out is
    the round-robin one.  Balanced fibers matter: a target grabbing
    many slots here forces a correspondingly coarse level on the other
    side of the zigzag later, so the balanced assignment is the one
    most likely to extend, and trying it first keeps the search from
    drowning in front-loaded dead ends.
    """
    n = len(allowed)
    if n_targets < 1 or n_targets > n:
        return
    groups = {}
    block_of = []
    for opts in allowed:
        block_of.append(groups.setdefault(opts, len(groups)))
    keys = list(groups)
    seen = set()
    total = 0
    for opts in keys:
        total += len(opts)
        seen.update(opts)
    if len(seen) < n_targets:
        return
    if total != len(seen):
        yield from _assignments_generic(allowed, n_targets, budget)
        return

    remaining = [0] * len(keys)
    for b in block_of:
        remaining[b] += 1
    uncovered = [len(k) for k in keys]
    if any(uncovered[b] > remaining[b] for b in range(len(keys))):
        return
    assign = [-1] * n
    cover = [0] * n_targets

    def options(i):
        b = block_of[i]
        if uncovered[b] == remaining[b]:
            pool = tuple(a for a in allowed[i] if not cover[a])
        else:
            pool = allowed[i]
        return sorted(pool, key=lambda a: (cover[a], a))

    iters = [iter(options(0))]
    while iters:
        i = len(iters) - 1
        b = block_of[i]
        if assign[i] >= 0:
            old = assign[i]
            cover[old] -= 1
            if cover[old] == 0:
                uncovered[b] += 1
            remaining[b] += 1
            assign[i] = -1
        a = next(iters[-1], None)
        if a is None:
            iters.pop()
            continue
        budget.spend()
        assign[i] = a
        remaining[b] -= 1
        if cover[a] == 0:
            uncovered[b] -= 1
        cover[a] += 1
        if i + 1 == n:
            yield tuple(assign)
        else:
            iters.append(iter(options(i + 1)))


def _assignments_generic(allowed, n_targets, budget):
    # same contract and order as _assignments without the disjointness
    # assumption; prunes only on slot counts and on targets running out
    # of slots
    n = len(allowed)
    last_place = {}
    for i, opts in enumerate(allowed):
        for a in opts:
            last_place[a] = i
    need_by = [[] for _ in range(n)]
    for a, i in last_place.items():
        need_by[i].append(a)

    assign = [-1] * n
    cover = [0] * n_targets
    state = {"uncovered": n_targets}

    def options(i):
        if state["uncovered"] > n - i:
            return ()
        forced = [a for a in need_by[i] if not cover[a]]
        if len(forced) > 1:
            return ()
        if len(forced) == 1:
            return (forced[0],)
        return sorted(allowed[i], key=lambda a: (cover[a], a))

    iters = [iter(options(0))]
    while iters:
        i = len(iters) - 1
        if assign[i] >= 0:
            old = assign[i]
            cover[old] -= 1
            if cover[old] == 0:
                state["uncovered"] += 1
            assign[i] = -1
        a = next(iters[-1], None)
        if a is None:
            iters.pop()
            continue
        budget.spend()
        assign[i] = a
        if cover[a] == 0:
            state["uncovered"] -= 1
        cover[a] += 1
        if i + 1 == n:
            if state["uncovered"] == 0:
                yield tuple(assign)
        else:
            iters.append(iter(options(i + 1)))


def _candidate_levels(sys, level_cap, size_cap):
    out = []
    for t in range(1, level_cap + 1):
        if not sys.has_level(t):
            break
        if sys.size_at(t) <= size_cap:
            out.append(t)
    return out


def _level_cap(sys, depth):
    # The window must be generous: when the other side grows faster,
    # this side needs many extra levels before its per-node descendant
    # counts catch up with the fiber sizes forced on it, so the size
    # cap is what really limits a fast-growing side and the level cap
    # is only a sanity bound on slow-growing tails.
    if not sys.is_tailed:
        return sys.length
    period = max(1, sys.length - sys.periodic_tail)
    return sys.length + 8 * (depth + 2) * period


def _search(sysA, sysB, depth, mode, stableA, stableB, node_budget, size_cap):
    # Slots are filled in the order k_1, l_1, f_1, k_2, g_1, l_2, f_2,
    # k_3, g_2, ...; levels are enumerated ascending and map slots in
    # the balanced-first order of _assignments, so the first hit is the
    # least certificate under that documented ordering.
    budget = _Budget(node_budget)
    if mode == "finite":
        candA = [
            t
            for t in _candidate_levels(sysA, stableA + depth + 2, size_cap)
            if t >= stableA
        ]
        candB = [
            t
            for t in _candidate_levels(sysB, stableB + depth + 2, size_cap)
            if t >= stableB
        ]
    else:
        candA = _candidate_levels(sysA, _level_cap(sysA, depth), size_cap)
        candB = _candidate_levels(sysB, _level_cap(sysB, depth), size_cap)

    kA, lB, fs, gs = [], [], [], []
    found = None

    def closed(t):
        if mode == "finite":
            nA = sysA.size_at(kA[-1])
            nB = sysB.size_at(lB[-1])
            return (
                kA[-1] >= stableA
                and lB[-1] >= stableB
                and nA == nB
                and len(set(fs[-1])) == nA
            )
        return t >= depth

    def place_k(t):
        lo = kA[-1] if kA else 0
        for ka in candA:
            if ka <= lo:
                continue
            budget.spend()
            kA.append(ka)
            ok = place_l(t) if t == 1 else place_g(t)
            kA.pop()
            if ok:
                return True
        return False

    def place_g(t):
        # g_{t-1}: left coords at kA[-1] -> right coords at lB[-1]
        proj = sysA.proj(kA[-2], kA[-1])
        f_inv = _inverse_lists(fs[-1], sysA.size_at(kA[-2]))
        allowed = [f_inv[proj[x]] for x in range(sysA.size_at(kA[-1]))]
        for g in _assignments(allowed, sysB.size_at(lB[-1]), budget):
            gs.append(g)
            ok = place_l(t)
            gs.pop()
            if ok:
                return True
        return False

    def place_l(t):
        lo = lB[-1] if lB else 0
        for lb in candB:
            if lb <= lo:
                continue
            budget.spend()
            lB.append(lb)
            ok = place_f(t)
            lB.pop()
            if ok:
                return True
        return False

    def place_f(t):
        nonlocal found
        nA = sysA.size_at(kA[-1])
        nB = sysB.size_at(lB[-1])
        if t == 1:
            allowed = [tuple(range(nA))] * nB
        else:
            g_inv = _inverse_lists(gs[-1], nB)
            proj = sysB.proj(lB[-2], lB[-1])
            allowed = [g_inv[proj[y]] for y in range(nB)]
        for f in _assignments(allowed, nA, budget):
            fs.append(f)
            if closed(t):
                found = Intertwining(
                    tuple(kA),
                    tuple(lB),
                    tuple(fs),
                    tuple(gs),
                    "stable-bijection" if mode == "finite" else "perfect",
                )
                fs.pop()
                return True
            if t < depth and place_k(t + 1):
                fs.pop()
                return True
            fs.pop()
        return False

    try:
        place_k(1)
    except _OutOfBudget:
        return None
    return found


def find_intertwining(
    sysA: IndexSystem,
    sysB: IndexSystem,
    depth: int = 5,
    node_budget: int = 250_000,
    size_cap: int = 50_000,
):
    """Search for a zigzag of surjections between two systems.

    Both systems are pruned first; the returned maps use the pruned
    coordinates.  Two finite limits of equal size close with a
    bijection at stabilized levels; otherwise the search tries to
    complete `depth` triangles.  Deterministic: levels are tried
    ascending and map slots in the balanced-first order documented at
    _assignments, and a fixed node budget bounds the work.  Returns
    None if nothing is found within budget.
    """
    prunedA, _ = surjectivize(sysA)
    prunedB, _ = surjectivize(sysB)
    cardA = limit_cardinality(sysA)
    cardB = limit_cardinality(sysB)
    if cardA.kind == "finite" and cardB.kind == "finite":
        if cardA.count != cardB.count:
            return None
        mode = "finite"
        stableA = _stable_level(prunedA, cardA.count)
        stableB = _stable_level(prunedB, cardB.count)
    else:
        mode = "perfect"
        stableA = stableB = None
    return _search(
        prunedA, prunedB, depth, mode, stableA, stableB, node_budget, size_cap
    )


@dataclass(frozen=True)
class EquivalenceCertificate:
    """Everything needed to recheck an equivalence verdict from scratch."""

    left: BratteliSequence
    right: BratteliSequence
    left_diagonals: tuple
    right_diagonals: tuple
    left_cardinality: Cardinality
    right_cardinality: Cardinality
    intertwining: Intertwining


@dataclass(frozen=True)
class Equivalent:
    certificate: EquivalenceCertificate


@dataclass(frozen=True)
class NotEquivalent:
    left_cardinality: Cardinality
    right_cardinality: Cardinality
    reason: str


@dataclass(frozen=True)
class Unknown:
    depth: int


EquivVerdict = Equivalent | NotEquivalent | Unknown


def equivalent_q(left: BratteliSequence, right: BratteliSequence, depth: int = 5):
    """Decide equivalence up to rational scaling, as far as honesty allows.

    NotEquivalent is only reported on one of the two sound witnesses:
    finite limits of different sizes, or a finite against an infinite
    limit.  Equivalent always comes with a certificate.  Everything
    else, in particular any untailed presentation (whose cardinality is
    only a lower bound) and any infinite limit with an isolated path,
    comes back Unknown.
    """
    sysA, diagA = canonicalize_q(left)
    sysB, diagB = canonicalize_q(right)
    cardA = limit_cardinality(sysA)
    cardB = limit_cardinality(sysB)

    kinds = (cardA.kind, cardB.kind)
    if kinds == ("finite", "finite"):
        if cardA.count != cardB.count:
            return NotEquivalent(cardA, cardB, "cardinality")
    elif kinds in (("finite", "infinite"), ("infinite", "finite")):
        return NotEquivalent(cardA, cardB, "finiteness")
    elif kinds == ("infinite", "infinite"):
        if not (limit_is_perfect(sysA) and limit_is_perfect(sysB)):
            return Unknown(depth)
    else:
        return Unknown(depth)

    tw = find_intertwining(sysA, sysB, depth)
    if tw is None:
        return Unknown(depth)
    cert = EquivalenceCertificate(left, right, diagA, diagB, cardA, cardB, tw)
    return Equivalent(cert)


def equivalence_certificate_failures(cert: EquivalenceCertificate) -> list:
    """Recheck every claim of an equivalence certificate; list failures.

    Nothing is trusted: the canonical forms, cardinalities, prunings,
    stable levels, and every triangle of the zigzag are recomputed from
    the two sequences embedded in the certificate.
    """
    failures = []
    sysA, diagA = canonicalize_q(cert.left)
    sysB, diagB = canonicalize_q(cert.right)
    if tuple(cert.left_diagonals) != diagA:
        failures.append("left diagonals do not match the left sequence")
    if tuple(cert.right_diagonals) != diagB:
        failures.append("right diagonals do not match the right sequence")
    cardA = limit_cardinality(sysA)
    cardB = limit_cardinality(sysB)
    if cert.left_cardinality != cardA:
        failures.append(
            f"left cardinality recomputes to {cardA}, not {cert.left_cardinality}"
        )
    if cert.right_cardinality != cardB:
        failures.append(
            f"right cardinality recomputes to {cardB}, not {cert.right_cardinality}"
        )

    kinds = (cardA.kind, cardB.kind)
    if kinds == ("finite", "finite"):
        mode = "finite"
        if cardA.count != cardB.count:
            failures.append(f"cardinalities {cardA} and {cardB} differ")
            return failures
    elif kinds == ("infinite", "infinite"):
        mode = "perfect"
        if not (limit_is_perfect(sysA) and limit_is_perfect(sysB)):
            failures.append("an infinite limit has an isolated path")
            return failures
    else:
        failures.append(f"cardinalities {cardA} and {cardB} cannot be equivalent")
        return failures

    tw = cert.intertwining
    want_closure = "stable-bijection" if mode == "finite" else "perfect"
    if tw.closure != want_closure:
        failures.append(f"closure is {tw.closure!r}, expected {want_closure!r}")

    T = len(tw.f_maps)
    if T < 1:
        failures.append("intertwining has no maps")
        return failures
    if len(tw.left_levels) != T or len(tw.right_levels) != T:
        failures.append("level lists do not match the number of maps")
        return failures
    if len(tw.g_maps) != T - 1:
        failures.append(f"{T} forward maps need {T - 1} return maps")
        return failures
    for levels, sysX, side in (
        (tw.left_levels, sysA, "left"),
        (tw.right_levels, sysB, "right"),
    ):
        for a, b in zip(levels, levels[1:]):
            if b <= a:
                failures.append(f"{side} levels are not strictly increasing")
                return failures
        for t in levels:
            if not sysX.has_level(t):
                failures.append(f"{side} level {t} is not available")
                return failures

    prunedA, _ = surjectivize(sysA)
    prunedB, _ = surjectivize(sysB)

    def check_map(f, n_from, n_to, what):
        if len(f) != n_from:
            failures.append(f"{what} has {len(f)} entries, expected {n_from}")
            return False
        if any(not isinstance(v, int) or not 0 <= v < n_to for v in f):
            failures.append(f"{what} has entries outside range({n_to})")
            return False
        if len(set(f)) != n_to:
            failures.append(f"{what} is not surjective")
            return False
        return True

    ok = True
    for t in range(T):
        ka, lb = tw.left_levels[t], tw.right_levels[t]
        ok &= check_map(
            tw.f_maps[t],
            prunedB.size_at(lb),
            prunedA.size_at(ka),
            f"f_{t + 1}",
        )
        if t + 1 < T:
            ok &= check_map(
                tw.g_maps[t],
                prunedA.size_at(tw.left_levels[t + 1]),
                prunedB.size_at(lb),
                f"g_{t + 1}",
            )
    if not ok:
        return failures

    for t in range(T - 1):
        ka, ka2 = tw.left_levels[t], tw.left_levels[t + 1]
        lb, lb2 = tw.right_levels[t], tw.right_levels[t + 1]
        projA = prunedA.proj(ka, ka2)
        for x in range(prunedA.size_at(ka2)):
            if tw.f_maps[t][tw.g_maps[t][x]] != projA[x]:
                failures.append(
                    f"triangle f_{t + 1} . g_{t + 1} breaks at left coordinate {x}"
                )
                break
        projB = prunedB.proj(lb, lb2)
        for y in range(prunedB.size_at(lb2)):
            if tw.g_maps[t][tw.f_maps[t + 1][y]] != projB[y]:
                failures.append(
                    f"triangle g_{t + 1} . f_{t + 2} breaks at right coordinate {y}"
                )
                break

    if mode == "finite":
        stableA = _stable_level(prunedA, cardA.count)
        stableB = _stable_level(prunedB, cardB.count)
        last_f = tw.f_maps[-1]
        if tw.left_levels[-1] < stableA or tw.right_levels[-1] < stableB:
            failures.append("zigzag ends before both sides stabilize")
        elif len(set(last_f)) != len(last_f):
            failures.append("final map is not a bijection")
    return failures


def verify_equivalence_certificate(cert: EquivalenceCertificate) -> bool:
    return not equivalence_certificate_failures(cert)
