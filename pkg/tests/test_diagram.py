import random

import pytest

from bratteli import (
    BadRepeat,
    BratteliSequence,
    LevelOutOfRange,
    LimitElement,
    NonAscending,
    NonMixingMap,
    NotOrderUnit,
    RankMismatch,
    forall_n_leq_limit,
    injectivize,
    is_order_unit,
    keep_at,
    limit_eq,
    limit_leq,
    telescope,
)

from genseq import (
    full_tree,
    max_usable_level,
    random_element,
    random_sequence,
    scalar_chain,
    two_path,
)


class TestConstruction:
    def test_rank_map_consistency_enforced(self):
        good = NonMixingMap(1, (0, 0), (1, 1))
        with pytest.raises(RankMismatch):
            BratteliSequence((1, 3), (good,), (1,))
        with pytest.raises(RankMismatch):
            BratteliSequence((1, 2), (good,), (1, 1))

    def test_unit_must_be_order_unit(self):
        with pytest.raises(NotOrderUnit):
            BratteliSequence((2, 2), (NonMixingMap.identity(2),), (1, 0))

    def test_tail_needs_matching_rank_or_rank_one(self):
        m = NonMixingMap(2, (0, 1), (1, 1))
        grow = NonMixingMap(2, (0, 0, 1), (1, 1, 1))
        with pytest.raises(BadRepeat):
            BratteliSequence((2, 3), (grow,), (1, 1), periodic_tail=1)
        seq = BratteliSequence((2, 2), (m,), (1, 1), periodic_tail=1)
        assert seq.tail_kind == "cyclic"

    def test_tail_index_range_checked(self):
        m = NonMixingMap(1, (0,), (2,))
        with pytest.raises(BadRepeat):
            BratteliSequence((1, 1), (m,), (1,), periodic_tail=2)
        with pytest.raises(BadRepeat):
            BratteliSequence((1, 1), (m,), (1,), periodic_tail=0)


class TestTails:
    def test_cyclic_repetition(self):
        a1 = NonMixingMap(1, (0, 0), (1, 2))
        a2 = NonMixingMap(2, (0, 1), (2, 1))
        seq = BratteliSequence((1, 2, 2), (a1, a2), (1,), periodic_tail=2)
        assert seq.tail_kind == "cyclic"
        for t in range(2, 9):
            assert seq.map_at(t) == a2
            assert seq.rank_at(t) == 2

    def test_rank_one_restart(self):
        tree = full_tree(2, 2)
        assert tree.tail_kind == "substitution"
        assert [tree.rank_at(t) for t in range(1, 6)] == [1, 2, 4, 8, 16]
        m3 = tree.map_at(3)
        assert m3.source_rank == 4
        assert m3.parent == (0, 0, 1, 1, 2, 2, 3, 3)

    def test_restart_with_longer_block(self):
        # block of two maps restarting at every deep node
        m1 = NonMixingMap(1, (0, 0), (1, 1))
        m2 = NonMixingMap(2, (0, 0, 1), (1, 1, 1))
        seq = BratteliSequence((1, 2, 3), (m1, m2), (1,), periodic_tail=1)
        assert seq.tail_kind == "substitution"
        assert [seq.rank_at(t) for t in range(1, 6)] == [1, 2, 3, 6, 9]
        # every level-3 node restarts the block, so level 4 splits in twos
        assert seq.map_at(3).parent == (0, 0, 1, 1, 2, 2)

    def test_cyclic_preferred_when_both_fit(self):
        seq = scalar_chain(2, levels=2)
        assert seq.tail_kind == "cyclic"

    def test_no_level_beyond_untailed_end(self):
        seq = scalar_chain(2, levels=3, tailed=False)
        assert seq.has_level(3)
        assert not seq.has_level(4)
        with pytest.raises(LevelOutOfRange):
            seq.rank_at(4)


class TestUnitAt:
    def test_doubling_chain(self):
        seq = scalar_chain(2, levels=4)
        assert seq.unit_at(3) == (4,)

    def test_level_one_is_base(self):
        rng = random.Random(31)
        for _ in range(20):
            seq = random_sequence(rng)
            assert seq.unit_at(1) == seq.base_unit

    def test_one_application(self):
        m = NonMixingMap(1, (0, 0), (2, 3))
        seq = BratteliSequence((1, 2), (m,), (1,))
        assert seq.unit_at(2) == (2, 3)

    def test_always_an_order_unit(self):
        rng = random.Random(32)
        for _ in range(60):
            seq = random_sequence(rng)
            for t in range(1, max_usable_level(seq) + 1):
                assert is_order_unit(seq.unit_at(t))


class TestMapBetween:
    def test_composes_run_of_maps(self):
        seq = scalar_chain(3, levels=5, tailed=False)
        assert seq.map_between(1, 4).mult == (27,)
        assert seq.map_between(2, 2).mult == (1,)

    def test_order_checked(self):
        seq = scalar_chain(3, levels=5, tailed=False)
        with pytest.raises(LevelOutOfRange):
            seq.map_between(4, 2)


class TestTelescope:
    def test_full_range_is_identity(self):
        rng = random.Random(33)
        for _ in range(20):
            seq = random_sequence(rng)
            assert telescope(seq, range(1, seq.length + 1)) == seq

    def test_doubling_chain_every_other_level(self):
        seq = scalar_chain(2, levels=5, tailed=False)
        out = telescope(seq, (1, 3, 5))
        assert [m.mult for m in out.maps] == [(4,), (4,)]

    def test_two_level_tree_composite(self):
        tree = full_tree(2, 3)
        out = telescope(tree, (1, 3))
        composite = tree.map_between(1, 3)
        assert out.maps == (composite,)
        for x in ((1,), (5,)):
            assert out.maps[0].apply(x) == composite.apply(x)

    def test_keep_must_start_at_one_and_ascend(self):
        seq = scalar_chain(2, levels=4, tailed=False)
        with pytest.raises(NonAscending):
            telescope(seq, (2, 3))
        with pytest.raises(NonAscending):
            telescope(seq, (1, 3, 3))
        with pytest.raises(LevelOutOfRange):
            telescope(seq, (1, 9))

    def test_cyclic_tail_kept_when_gaps_match_period(self):
        a1 = NonMixingMap(1, (0, 0), (1, 2))
        a2 = NonMixingMap(2, (0, 1), (2, 1))
        a3 = NonMixingMap(2, (1, 0), (1, 3))
        seq = BratteliSequence((1, 2, 2, 2), (a1, a2, a3), (1,), periodic_tail=2)
        kept = telescope(seq, (1, 2, 4))
        assert kept.periodic_tail == 2
        assert kept.maps[-1] == seq.map_between(2, 4)
        dropped = telescope(seq, (1, 3, 4))
        assert dropped.periodic_tail is None

    def test_soundness_for_limit_verdicts(self):
        # comparisons at kept levels agree before and after telescoping,
        # provided the last presented level stays (dropping it would
        # change the limit itself)
        rng = random.Random(34)
        for _ in range(60):
            seq = random_sequence(rng, tail="none")
            if seq.length < 2:
                continue
            middle = sorted(
                rng.sample(range(2, seq.length), rng.randint(0, seq.length - 2))
            )
            keep = [1] + middle + [seq.length]
            tel = telescope(seq, keep)
            for _ in range(5):
                ia = rng.randrange(len(keep))
                ib = rng.randrange(len(keep))
                a = random_element(rng, seq, keep[ia])
                b = random_element(rng, seq, keep[ib])
                ta = LimitElement(ia + 1, a.vec)
                tb = LimitElement(ib + 1, b.vec)
                assert limit_eq(seq, a, b) == limit_eq(tel, ta, tb)
                assert limit_leq(seq, a, b) == limit_leq(tel, ta, tb)


class TestInjectivize:
    def test_injective_input_unchanged(self):
        seq = two_path(2, 3)
        pruned, incl = injectivize(seq)
        assert pruned == seq
        assert incl == ((0, 1), (0, 1), (0, 1))

    def test_unused_coordinate_dropped(self):
        m = NonMixingMap(2, (0,), (1,))
        seq = BratteliSequence((2, 1), (m,), (1, 1))
        pruned, incl = injectivize(seq)
        assert pruned.ranks == (1, 1)
        assert incl == ((0,), (0,))

    def test_backward_reachability(self):
        m1 = NonMixingMap(3, (0, 0), (1, 1))
        m2 = NonMixingMap(2, (0, 1), (1, 1))
        seq = BratteliSequence((3, 2, 2), (m1, m2), (1, 1, 1))
        pruned, incl = injectivize(seq)
        assert pruned.ranks == (1, 2, 2)
        assert incl[0] == (0,)

    def test_result_is_injective(self):
        rng = random.Random(35)
        for _ in range(80):
            seq = random_sequence(rng)
            pruned, _ = injectivize(seq)
            assert pruned.is_injective_presentation()

    def test_cyclic_tail_dead_branch(self):
        # parent cycle {0}; coordinate 1 has no children and dies
        m = NonMixingMap(2, (0, 0), (1, 2))
        seq = BratteliSequence((2, 2), (m,), (1, 1), periodic_tail=1)
        pruned, incl = injectivize(seq)
        assert pruned.ranks == (1, 1)
        assert pruned.periodic_tail == 1
        assert all(k == (0,) for k in incl)

    def test_soundness_through_inclusions(self):
        # embed pruned elements on the kept coordinates; verdicts agree
        rng = random.Random(36)
        for _ in range(60):
            seq = random_sequence(rng, tail="none")
            pruned, incl = injectivize(seq)
            for _ in range(5):
                ta = rng.randint(1, pruned.length)
                tb = rng.randint(1, pruned.length)
                a = random_element(rng, pruned, ta)
                b = random_element(rng, pruned, tb)
                ea = _embed(seq, ta, a.vec, incl[ta - 1])
                eb = _embed(seq, tb, b.vec, incl[tb - 1])
                assert limit_eq(pruned, a, b) == limit_eq(seq, ea, eb)
                assert limit_leq(pruned, a, b) == limit_leq(seq, ea, eb)


def _embed(seq, level, vec, kept):
    full = [0] * seq.rank_at(level)
    for value, coord in zip(vec, kept):
        full[coord] = value
    return LimitElement(level, tuple(full))


class TestKeepAt:
    def test_untailed_is_backward_reachability(self):
        m1 = NonMixingMap(3, (0, 0), (1, 1))
        m2 = NonMixingMap(2, (0, 1), (1, 1))
        seq = BratteliSequence((3, 2, 2), (m1, m2), (1, 1, 1))
        assert keep_at(seq, 1) == (0,)
        assert keep_at(seq, 2) == (0, 1)
        assert keep_at(seq, 3) == (0, 1)

    def test_tailed_keeps_alive_coordinates(self):
        m = NonMixingMap(2, (0, 0), (1, 2))
        seq = BratteliSequence((2, 2), (m,), (1, 1), periodic_tail=1)
        for t in range(1, 6):
            assert keep_at(seq, t) == (0,)


class TestLimitComparisons:
    def test_pushed_image_is_equal(self):
        seq = scalar_chain(2)
        assert limit_eq(seq, LimitElement(1, (1,)), LimitElement(2, (2,)))

    def test_same_level_distinct(self):
        seq = scalar_chain(2)
        assert not limit_eq(seq, LimitElement(1, (1,)), LimitElement(1, (2,)))

    def test_tree_pushforward(self):
        tree = full_tree(2, 3)
        a = LimitElement(2, (1, 1))
        b = LimitElement(3, tree.map_at(2).apply((1, 1)))
        assert limit_eq(tree, a, b)

    def test_leq_reflexive_and_signed(self):
        seq = scalar_chain(2)
        x = LimitElement(1, (1,))
        assert limit_leq(seq, x, x)
        assert limit_leq(seq, LimitElement(1, (-1,)), LimitElement(1, (0,)))

    def test_mixed_signs_incomparable(self):
        seq = two_path(1, 1)
        a = LimitElement(1, (1, -1))
        b = LimitElement(1, (0, 0))
        assert not limit_leq(seq, a, b)
        assert not limit_leq(seq, b, a)

    def test_dead_coordinates_ignored(self):
        m = NonMixingMap(2, (0, 0), (1, 2))
        seq = BratteliSequence((2, 2), (m,), (1, 1), periodic_tail=1)
        # coordinate 1 never reaches deep levels, so it cannot separate
        assert limit_eq(seq, LimitElement(1, (1, 5)), LimitElement(1, (1, -7)))

    def test_forall_n_pairs(self):
        seq = scalar_chain(2)
        assert forall_n_leq_limit(seq, LimitElement(1, (0,)), LimitElement(1, (0,)))
        assert not forall_n_leq_limit(seq, LimitElement(1, (1,)), LimitElement(1, (1000,)))
        pair = two_path(1, 1)
        assert forall_n_leq_limit(pair, LimitElement(1, (-2, 0)), LimitElement(1, (-2, 5)))

    def test_archimedean_on_injectivized(self):
        rng = random.Random(37)
        hits = 0
        for _ in range(50):
            seq, _ = injectivize(random_sequence(rng))
            top = max_usable_level(seq)
            for _ in range(20):
                x = random_element(rng, seq, rng.randint(1, top))
                if rng.random() < 0.5:
                    x = LimitElement(x.level, tuple(min(v, 0) for v in x.vec))
                y = random_element(rng, seq, rng.randint(1, top), lo=0)
                if forall_n_leq_limit(seq, x, y):
                    hits += 1
                    zero = LimitElement(x.level, (0,) * len(x.vec))
                    assert limit_leq(seq, x, zero)
        assert hits > 100
