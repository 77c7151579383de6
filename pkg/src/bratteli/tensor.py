"""Tensor products of presented sequences, levelwise and against Q_n.

Everything here is Kronecker-style bookkeeping: coordinates of a tensor
level are pairs (a, b) flattened row-major, so pair (a, b) sits at index
a * rank_B + b.
"""

from __future__ import annotations

from math import lcm

from .diagram import BratteliSequence
from .errors import BadRepeat
from .simplicial import NonMixingMap


def tensor_vec(u, v) -> tuple:
    """Kronecker product of vectors; entry j*len(v)+k equals u_j*v_k."""
    u, v = tuple(u), tuple(v)
    return tuple(a * b for a in u for b in v)


def tensor_map(f: NonMixingMap, g: NonMixingMap) -> NonMixingMap:
    """Kronecker product of non-mixing maps, again non-mixing."""
    parent, mult = [], []
    for j in range(f.target_rank):
        for k in range(g.target_rank):
            parent.append(f.parent[j] * g.source_rank + g.parent[k])
            mult.append(f.mult[j] * g.mult[k])
    return NonMixingMap(f.source_rank * g.source_rank, tuple(parent), tuple(mult))


def _tail_carries_over(seq: BratteliSequence, P: int, M: int) -> bool:
    # Can the structure of this factor from level P on be replayed below
    # every node at levels P, P+M, P+2M, ...?  A cyclic tail always can.
    # A self-similar tail can when the single level-P node and all nodes
    # one combined period later carry the same block class, so that each
    # of them roots an identical subdiagram.
    if seq.tail_kind == "cyclic":
        return True
    if seq.rank_at(P) != 1:
        return False
    c0 = 0 if P < seq.length else seq._sub_classes(P)[0]
    return all(c == c0 for c in seq._sub_classes(P + M))


def tensor_seq(A: BratteliSequence, B: BratteliSequence) -> BratteliSequence:
    """Levelwise tensor product of two presented sequences.

    When both factors have tails the result presents one combined
    period, from max(p_A, p_B) through the lcm of the two period
    lengths, and keeps a tail whenever the combined pattern provably
    closes up again; otherwise the tail is dropped.  With at most one
    tail the result is truncated to the shortest untailed presentation.
    """
    tail = None
    if A.is_tailed and B.is_tailed:
        P = max(A.periodic_tail, B.periodic_tail)
        M = lcm(A.length - A.periodic_tail, B.length - B.periodic_tail)
        length = P + M
        if _tail_carries_over(A, P, M) and _tail_carries_over(B, P, M):
            tail = P
    else:
        length = min(
            [s.length for s in (A, B) if not s.is_tailed]
        )
    ranks = tuple(A.rank_at(t) * B.rank_at(t) for t in range(1, length + 1))
    maps = tuple(tensor_map(A.map_at(t), B.map_at(t)) for t in range(1, length))
    unit = tensor_vec(A.base_unit, B.base_unit)
    if tail is not None:
        try:
            return BratteliSequence(ranks, maps, unit, tail)
        except BadRepeat:
            pass
    return BratteliSequence(ranks, maps, unit, None)


def tensor_qn(seq: BratteliSequence, n, depth: int) -> BratteliSequence:
    """Tensor with the subgroup of the rationals named by a supernatural n.

    The groups at each level are unchanged; the divisibility chain
    n_1 | n_2 | ... associated with n is folded into the presentation
    instead.  The unit becomes n_1 times the old one and the map out of
    level i picks up the integer factor n_{i+1}/n_i.  The result
    presents `depth` levels and carries no tail.
    """
    seq._require_level(depth)
    ns = n.associated_sequence(depth)
    ranks = tuple(seq.rank_at(t) for t in range(1, depth + 1))
    maps = []
    for i in range(1, depth):
        a = seq.map_at(i)
        k = ns[i] // ns[i - 1]
        maps.append(NonMixingMap(a.source_rank, a.parent, tuple(m * k for m in a.mult)))
    unit = tuple(ns[0] * u for u in seq.base_unit)
    return BratteliSequence(ranks, tuple(maps), unit, None)
