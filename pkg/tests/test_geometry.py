import math

import numpy as np
import pytest

from covcorr import (
    Box,
    RankConfiguration,
    covered_volume,
    union_volume,
    union_volume_2d,
    vacancy,
    wrap_split,
)

from helpers import inclusion_exclusion_volume, mc_union_volume, random_boxes


def boxes_from_arrays(lo, hi):
    return [Box(lo=lo[i], hi=hi[i]) for i in range(lo.shape[0])]


class TestWrapSplit:
    def test_interior_no_wrap(self):
        boxes = wrap_split([0.5, 0.5], 0.1)
        assert len(boxes) == 1
        assert np.allclose(boxes[0].lo, [0.4, 0.4])
        assert np.allclose(boxes[0].hi, [0.6, 0.6])

    def test_wrap_one_axis(self):
        boxes = wrap_split([0.0, 0.5], 0.1)
        assert len(boxes) == 2
        assert sum(b.volume for b in boxes) == pytest.approx(0.04, rel=1e-12)
        corners = sorted(tuple(b.lo) for b in boxes)
        assert corners == [(0.0, 0.4), (0.9, 0.4)]

    def test_wrap_both_axes(self):
        boxes = wrap_split([0.0, 0.0], 0.1)
        assert len(boxes) == 4
        assert sum(b.volume for b in boxes) == pytest.approx(0.04, rel=1e-12)

    def test_total_volume_random_centers(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            d = rng.integers(2, 5)
            gamma = rng.uniform(0.01, 0.5)
            center = rng.random(d)
            boxes = wrap_split(center, gamma)
            total = sum(b.volume for b in boxes)
            assert total == pytest.approx((2 * gamma) ** d, rel=1e-10)

    def test_rejects_bad_gamma(self):
        with pytest.raises(ValueError):
            wrap_split([0.5], 0.0)
        with pytest.raises(ValueError):
            wrap_split([0.5], 0.6)


class TestUnionVolume2D:
    def test_disjoint_squares(self):
        boxes = [Box(lo=[0.0, 0.0], hi=[0.1, 0.1]),
                 Box(lo=[0.5, 0.5], hi=[0.6, 0.6])]
        assert union_volume_2d(boxes) == pytest.approx(0.02, rel=1e-12)

    def test_idempotent_duplicates(self):
        b = Box(lo=[0.2, 0.2], hi=[0.3, 0.3])
        assert union_volume_2d([b, b]) == pytest.approx(0.01, rel=1e-12)

    def test_partial_overlap(self):
        boxes = [Box(lo=[0.0, 0.0], hi=[0.1, 0.1]),
                 Box(lo=[0.05, 0.0], hi=[0.15, 0.1])]
        assert union_volume_2d(boxes) == pytest.approx(0.015, rel=1e-12)

    def test_empty(self):
        assert union_volume_2d([]) == 0.0

    @pytest.mark.parametrize("seed", range(10))
    def test_matches_inclusion_exclusion(self, seed):
        rng = np.random.default_rng(seed)
        lo, hi = random_boxes(rng, k=8, d=2)
        exact = inclusion_exclusion_volume(lo, hi)
        assert union_volume_2d(boxes_from_arrays(lo, hi)) == \
            pytest.approx(exact, rel=1e-12)


class TestUnionVolumeND:
    def test_single_cube_3d(self):
        b = Box(lo=[0.1, 0.1, 0.1], hi=[0.3, 0.3, 0.3])
        assert union_volume([b], d=3) == pytest.approx(0.008, rel=1e-12)

    def test_two_disjoint_cubes_3d(self):
        boxes = [Box(lo=[0.0, 0.0, 0.0], hi=[0.2, 0.2, 0.2]),
                 Box(lo=[0.5, 0.5, 0.5], hi=[0.7, 0.7, 0.7])]
        assert union_volume(boxes, d=3) == pytest.approx(0.016, rel=1e-12)

    def test_rejects_d1(self):
        with pytest.raises(ValueError):
            union_volume([], d=1)

    @pytest.mark.parametrize("d", [3, 4])
    def test_matches_inclusion_exclusion(self, d):
        rng = np.random.default_rng(d)
        lo, hi = random_boxes(rng, k=7, d=d)
        exact = inclusion_exclusion_volume(lo, hi)
        assert union_volume(boxes_from_arrays(lo, hi), d=d) == \
            pytest.approx(exact, rel=1e-12)

    def test_50_random_boxes_vs_monte_carlo(self):
        rng = np.random.default_rng(11)
        lo, hi = random_boxes(rng, k=50, d=3)
        exact = union_volume(boxes_from_arrays(lo, hi), d=3)
        est, se = mc_union_volume(lo, hi, 1_000_000, np.random.default_rng(99))
        assert abs(exact - est) < 4 * se

    def test_monotone_in_boxes(self):
        rng = np.random.default_rng(4)
        lo, hi = random_boxes(rng, k=12, d=3)
        boxes = boxes_from_arrays(lo, hi)
        prev = 0.0
        for k in range(1, len(boxes) + 1):
            cur = union_volume(boxes[:k], d=3)
            assert cur >= prev - 1e-15
            prev = cur


class TestCoveredVolume:
    def test_single_ball_covers_cube(self):
        for d in (2, 3):
            cfg = RankConfiguration(centers=np.full((1, d), 0.37), gamma=0.5)
            assert covered_volume(cfg) == pytest.approx(1.0, rel=1e-12)
            assert vacancy(cfg) == pytest.approx(0.0, abs=1e-12)

    def test_identical_centers(self):
        n, d = 16, 2
        gamma = 1.0 / (2.0 * n ** (1.0 / d))
        cfg = RankConfiguration(centers=np.tile([0.3, 0.8], (n, 1)), gamma=gamma)
        assert covered_volume(cfg) == pytest.approx(1.0 / n, rel=1e-12)
        assert vacancy(cfg) == pytest.approx(1.0 - 1.0 / n, rel=1e-12)

    def test_matches_monte_carlo_2d(self):
        rng = np.random.default_rng(21)
        n = 100
        cfg = RankConfiguration(centers=rng.random((n, 2)),
                                gamma=1.0 / (2.0 * math.sqrt(n)))
        exact = covered_volume(cfg)
        from covcorr.geometry import _wrap_split_arrays

        lo, hi = _wrap_split_arrays(cfg.centers, cfg.gamma)
        est, se = mc_union_volume(lo, hi, 1_000_000, np.random.default_rng(5))
        assert abs(exact - est) < 4 * se

    @pytest.mark.parametrize("d", [3, 4])
    def test_blocked_equals_direct(self, d):
        rng = np.random.default_rng(d + 100)
        n = 200
        cfg = RankConfiguration(centers=rng.random((n, d)),
                                gamma=1.0 / (2.0 * n ** (1.0 / d)))
        direct = covered_volume(cfg, blocked=False)
        blocked = covered_volume(cfg, blocked=True)
        assert blocked == pytest.approx(direct, rel=1e-12, abs=1e-12)

    def test_translation_invariance_mod_one(self):
        rng = np.random.default_rng(8)
        n = 60
        centers = rng.random((n, 2))
        gamma = 1.0 / (2.0 * math.sqrt(n))
        base = covered_volume(RankConfiguration(centers=centers, gamma=gamma))
        shift = np.array([0.311, 0.737])
        moved = covered_volume(RankConfiguration(
            centers=np.mod(centers + shift, 1.0), gamma=gamma))
        assert moved == pytest.approx(base, abs=1e-12)

    def test_bounds(self):
        rng = np.random.default_rng(13)
        for _ in range(20):
            n = int(rng.integers(1, 50))
            d = int(rng.integers(2, 4))
            gamma = 1.0 / (2.0 * n ** (1.0 / d))
            cfg = RankConfiguration(centers=rng.random((n, d)), gamma=gamma)
            cov = covered_volume(cfg)
            assert (2 * gamma) ** d - 1e-12 <= cov <= min(1.0, n * (2 * gamma) ** d) + 1e-12

    def test_diagonal_vacancy_estimate(self):
        # squares of side s = 1/sqrt(n) sliding along the closed diagonal
        # cover a staircase band of area ~ 2s, so vacancy ~ 1 - 2/sqrt(n);
        # cross-checked against the Monte Carlo oracle
        n = 2000
        centers = np.column_stack([np.arange(1, n + 1) / n] * 2)
        cfg = RankConfiguration(centers=centers, gamma=1.0 / (2.0 * math.sqrt(n)))
        v = vacancy(cfg)
        assert v == pytest.approx(1.0 - 2.0 / math.sqrt(n), abs=0.01)
        from covcorr.geometry import _wrap_split_arrays

        lo, hi = _wrap_split_arrays(cfg.centers, cfg.gamma)
        est, se = mc_union_volume(lo, hi, 400_000, np.random.default_rng(5))
        assert abs((1.0 - v) - est) < 4 * se


class TestBoxValidation:
    def test_rejects_inverted(self):
        with pytest.raises(ValueError):
            Box(lo=[0.5, 0.5], hi=[0.4, 0.6])

    def test_rejects_outside_cube(self):
        with pytest.raises(ValueError):
            Box(lo=[-0.1, 0.0], hi=[0.5, 0.5])
