import math
import random

import pytest
import scipy.stats as reference

from teahouse.stats import (
    DegenerateSampleError,
    Sample,
    StatsError,
    UnsupportedSizeError,
    describe,
    describe_categorical,
    kruskal_wallis,
    midranks,
    shapiro_wilk,
)


class TestMidranks:
    def test_no_ties(self):
        assert midranks([30, 10, 20]) == [3.0, 1.0, 2.0]

    def test_ties_get_midrank(self):
        assert midranks([1, 2, 2, 3]) == [1.0, 2.5, 2.5, 4.0]

    def test_all_tied(self):
        assert midranks([7, 7, 7]) == [2.0, 2.0, 2.0]


class TestKruskalWallis:
    def test_hand_computed_case(self):
        # ranks 1..6, rank sums 3/7/11 -> H = 12/42 * 89.5 - 21
        r = kruskal_wallis([[1, 2], [3, 4], [5, 6]])
        assert r.statistic == pytest.approx(4.5714, abs=1e-3)
        assert r.p_value == pytest.approx(0.1017, abs=1e-3)
        assert r.df == 2

    def test_all_identical(self):
        r = kruskal_wallis([[5, 5], [5, 5], [5, 5]])
        assert r.statistic == 0.0
        assert r.p_value == 1.0

    def test_group_order_symmetry(self):
        groups = [[1, 5, 3], [2, 2], [9, 4, 4, 8]]
        a = kruskal_wallis(groups)
        b = kruskal_wallis(list(reversed(groups)))
        assert a.statistic == pytest.approx(b.statistic, abs=1e-12)
        assert a.p_value == pytest.approx(b.p_value, abs=1e-12)

    def test_monotone_transform_invariance(self):
        rng = random.Random(12)
        for _ in range(50):
            groups = [[rng.randint(0, 10) for _ in range(rng.randint(2, 9))] for _ in range(3)]
            base = kruskal_wallis(groups)
            for f in (lambda x: math.exp(x / 3.0), lambda x: 2.0 * x + 3.0, lambda x: x**3):
                t = kruskal_wallis([[f(v) for v in g] for g in groups])
                assert t.statistic == pytest.approx(base.statistic, abs=1e-9)

    def test_matches_reference_on_ties(self):
        rng = random.Random(99)
        for _ in range(60):
            groups = [
                [rng.randint(0, 6) for _ in range(rng.randint(2, 10))]
                for _ in range(rng.randint(2, 5))
            ]
            if all(v == groups[0][0] for g in groups for v in g):
                continue
            mine = kruskal_wallis(groups)
            ref = reference.kruskal(*groups)
            assert mine.statistic == pytest.approx(ref.statistic, abs=1e-6)
            assert mine.p_value == pytest.approx(ref.pvalue, abs=1e-6)

    def test_needs_two_groups(self):
        with pytest.raises(StatsError):
            kruskal_wallis([[1, 2, 3]])

    def test_rejects_empty_group(self):
        with pytest.raises(StatsError):
            kruskal_wallis([[1, 2], []])

    def test_needs_three_observations(self):
        with pytest.raises(StatsError):
            kruskal_wallis([[1], [2]])

    def test_accepts_samples(self):
        r = kruskal_wallis([Sample((1.0, 2.0), "a"), Sample((3.0, 4.0), "b")])
        assert r.df == 1

    def test_h_nonnegative(self):
        rng = random.Random(5)
        for _ in range(40):
            groups = [[rng.choice([1, 2]) for _ in range(4)] for _ in range(3)]
            assert kruskal_wallis(groups).statistic >= 0.0


class TestShapiroWilk:
    def test_pinned_range_ten(self):
        # Reference oracle values pinned before the build.
        r = shapiro_wilk(list(range(1, 11)))
        assert r.statistic == pytest.approx(0.9701646110856056, abs=1e-3)
        assert r.p_value == pytest.approx(0.8923673061902978, abs=1e-3)

    def test_affine_invariance(self):
        rng = random.Random(8)
        xs = [rng.gauss(0, 1) for _ in range(25)]
        base = shapiro_wilk(xs)
        for a, b in [(2.0, 0.0), (0.5, 10.0), (3.7, -4.2)]:
            r = shapiro_wilk([a * x + b for x in xs])
            assert r.statistic == pytest.approx(base.statistic, abs=1e-9)

    def test_size_limits(self):
        with pytest.raises(UnsupportedSizeError):
            shapiro_wilk([1.0, 2.0])
        with pytest.raises(UnsupportedSizeError):
            shapiro_wilk([0.0] * 5001)

    def test_zero_variance(self):
        with pytest.raises(DegenerateSampleError):
            shapiro_wilk([3.0, 3.0, 3.0, 3.0])

    def test_w_in_unit_interval(self):
        rng = random.Random(3)
        for n in (3, 4, 5, 8, 12, 40, 200):
            xs = [rng.uniform(0, 1) for _ in range(n)]
            r = shapiro_wilk(xs)
            assert 0.0 < r.statistic <= 1.0
            assert 0.0 <= r.p_value <= 1.0

    def test_close_to_reference_across_sizes(self):
        rng = random.Random(17)
        for n in (3, 4, 5, 6, 11, 12, 30, 100, 500):
            xs = [rng.gauss(5, 3) for _ in range(n)]
            mine = shapiro_wilk(xs)
            ref = reference.shapiro(xs)
            assert mine.statistic == pytest.approx(ref.statistic, abs=1e-3)
            assert mine.p_value == pytest.approx(ref.pvalue, abs=1e-3)

    def test_uniform_less_normal_than_bell(self):
        wins = 0
        for k in range(100):
            r1, r2 = random.Random(77 + k), random.Random(7777 + k)
            uni = [r1.uniform(0, 1) for _ in range(50)]
            bell = [r2.gauss(0, 1) for _ in range(50)]
            wins += shapiro_wilk(uni).p_value < shapiro_wilk(bell).p_value
        assert wins >= 95


class TestDescribe:
    def test_published_percentage_case(self):
        genders = ["female"] * 30 + ["male"] * 11
        summary = describe_categorical(genders)
        assert summary.n == 41
        assert round(summary.percentages["female"], 1) == 73.2

    def test_single_value(self):
        d = describe([7.0])
        assert d.mean == 7.0
        assert d.sd is None

    def test_matches_independent_recompute(self):
        import statistics

        rng = random.Random(41)
        moca = [rng.randint(20, 30) for _ in range(41)]
        d = describe(moca)
        assert d.mean == pytest.approx(statistics.fmean(moca))
        assert d.sd == pytest.approx(statistics.stdev(moca))
        assert (d.minimum, d.maximum) == (min(moca), max(moca))

    def test_empty_rejected(self):
        with pytest.raises(StatsError):
            describe([])
        with pytest.raises(StatsError):
            describe_categorical([])

    def test_percentages_sum_to_100(self):
        s = describe_categorical(list("aabbbc"))
        assert sum(s.percentages.values()) == pytest.approx(100.0)
