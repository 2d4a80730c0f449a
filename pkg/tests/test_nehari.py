import math

import numpy as np
import pytest

from slicehankel.hankel import apply_H, build_hankel_matrix, operator_norm
from slicehankel.nehari import (
    approximation_report,
    constructive_best_approx,
    hankel_norm,
    maximizing_vector,
    optimize_distance,
    verify_nehari_bounds,
)
from slicehankel.quat import Quaternion
from slicehankel.series import SliceLaurentSeries, l2_norm, linf_norm

ONE = Quaternion(1.0)


def random_symbol(rng, neg=3, pos=2):
    coeffs = {-1: Quaternion(*rng.normal(size=4))}
    for n in range(-neg, pos + 1):
        if n != -1 and rng.random() < 0.8:
            coeffs[n] = Quaternion(*rng.normal(size=4))
    return SliceLaurentSeries(coeffs)


def random_unit(rng):
    v = rng.normal(size=4)
    return Quaternion(*(v / np.linalg.norm(v)))


class TestHankelNorm:
    def test_rank_one(self):
        c = Quaternion(1, -2, 2, 4)
        phi = SliceLaurentSeries({-1: c})
        assert hankel_norm(phi, 16) == pytest.approx(abs(c), abs=1e-12)

    def test_analytic_symbol_is_zero(self):
        phi = SliceLaurentSeries({0: ONE, 3: Quaternion(0, 2, 0, 0)})
        assert hankel_norm(phi, 16) == 0.0

    def test_golden_ratio(self):
        phi = SliceLaurentSeries({-1: ONE, -2: ONE})
        assert hankel_norm(phi, 16) == pytest.approx((1 + math.sqrt(5)) / 2, abs=1e-12)

    def test_truncation_independent_for_finite_symbols(self):
        rng = np.random.default_rng(50)
        for _ in range(10):
            phi = random_symbol(rng)
            assert abs(hankel_norm(phi, 16) - hankel_norm(phi, 32)) <= 1e-12

    def test_truncation_guard(self):
        phi = SliceLaurentSeries({-n: ONE for n in range(1, 6)})
        with pytest.raises(ValueError):
            hankel_norm(phi, 10)


class TestMaximizingVector:
    def test_rank_one_constant(self):
        phi = SliceLaurentSeries({-1: ONE})
        g = maximizing_vector(phi, 16)
        assert g.support == (0,)
        assert abs(g.coefficient(0)) == pytest.approx(1.0, abs=1e-12)
        assert l2_norm(apply_H(phi, g)) == pytest.approx(1.0, abs=1e-10)

    def test_attains_operator_norm(self):
        rng = np.random.default_rng(51)
        for _ in range(10):
            phi = random_symbol(rng)
            hn = hankel_norm(phi, 32)
            g = maximizing_vector(phi, 32)
            assert l2_norm(g) == pytest.approx(1.0, abs=1e-10)
            assert l2_norm(apply_H(phi, g)) >= hn * (1 - 1e-8)

    def test_right_gauge_preserves_achieved_norm(self):
        rng = np.random.default_rng(52)
        phi = random_symbol(rng)
        g = maximizing_vector(phi, 16)
        u = random_unit(rng)
        assert l2_norm(apply_H(phi, g.times_right(u))) == pytest.approx(
            l2_norm(apply_H(phi, g)), abs=1e-13
        )

    def test_zero_operator_rejected(self):
        with pytest.raises(ValueError):
            maximizing_vector(SliceLaurentSeries({1: ONE}), 16)


class TestConstructive:
    def test_rank_one_end_to_end(self):
        c = Quaternion(0.6, 0, 0.8, 0)
        phi = SliceLaurentSeries({-1: c})
        res = constructive_best_approx(phi, 16, 512)
        assert res.distance == pytest.approx(1.0, abs=1e-6)
        assert res.residual_negative_mass <= 1e-9
        assert res.status == "ok"
        assert linf_norm(res.best_approx, 512) <= 1e-6

    def test_analytic_part_recovered(self):
        phi = SliceLaurentSeries({-1: ONE, 1: Quaternion(3)})
        res = constructive_best_approx(phi, 16, 512)
        assert res.distance == pytest.approx(1.0, abs=1e-6)
        assert res.best_approx.coefficient(1).isclose(Quaternion(3), tol=1e-6)
        diff = res.best_approx - SliceLaurentSeries({1: Quaternion(3)})
        assert linf_norm(diff, 512) <= 1e-6

    def test_analytic_symbol_shortcut(self):
        phi = SliceLaurentSeries({0: ONE, 2: Quaternion(0, 1, 0, 0)})
        res = constructive_best_approx(phi, 16, 512)
        assert res.distance == 0.0
        assert res.best_approx == phi

    def test_distance_matches_hankel_norm(self):
        rng = np.random.default_rng(53)
        for _ in range(10):
            phi = random_symbol(rng)
            hn = hankel_norm(phi, 32)
            res = constructive_best_approx(phi, 32, 2048)
            assert abs(res.distance - hn) <= 1e-2 * hn
            assert res.residual_negative_mass <= 1e-3 * linf_norm(phi, 2048)

    def test_gauge_invariance(self):
        rng = np.random.default_rng(54)
        phi = random_symbol(rng)
        g = maximizing_vector(phi, 32)
        base = constructive_best_approx(phi, 32, 1024, g=g)
        for _ in range(4):
            gauged = constructive_best_approx(
                phi, 32, 1024, g=g.times_right(random_unit(rng))
            )
            assert abs(gauged.distance - base.distance) <= 1e-10


class TestOptimizer:
    def test_interpolation_case(self):
        phi = SliceLaurentSeries({0: Quaternion(1, 2, 0, 1), 2: Quaternion(0.5)})
        res = optimize_distance(phi, degree=3, grid=512, budget=5000, seed=0)
        assert res.distance <= 1e-6

    def test_rank_one_optimum_is_zero(self):
        phi = SliceLaurentSeries({-1: ONE})
        res = optimize_distance(phi, degree=2, grid=512, budget=5000, seed=0)
        assert res.distance == pytest.approx(1.0, abs=1e-3)

    def test_deterministic_and_monotone(self):
        rng = np.random.default_rng(55)
        phi = random_symbol(rng)
        a = optimize_distance(phi, degree=3, grid=512, budget=3000, seed=7)
        b = optimize_distance(phi, degree=3, grid=512, budget=3000, seed=7)
        assert a.distance == b.distance
        assert a.iterates == b.iterates
        for earlier, later in zip(a.iterates, a.iterates[1:]):
            assert later <= earlier

    def test_iterates_never_beat_hankel_norm(self):
        rng = np.random.default_rng(56)
        phi = random_symbol(rng)
        hn = hankel_norm(phi, 32)
        res = optimize_distance(phi, degree=4, grid=1024, budget=4000, seed=1)
        for it in res.iterates:
            assert hn <= it + 1e-6 * max(1.0, hn)

    def test_parameter_validation(self):
        phi = SliceLaurentSeries({-1: ONE})
        with pytest.raises(ValueError):
            optimize_distance(phi, degree=-1, grid=512, budget=100, seed=0)
        with pytest.raises(ValueError):
            optimize_distance(phi, degree=1, grid=512, budget=0, seed=0)


class TestReports:
    def test_report_text_has_field_keys(self):
        phi = SliceLaurentSeries({-1: ONE})
        report = approximation_report(phi, 16, 512, 2, 2000, seed=0)
        text = report.to_text()
        for key in (
            "hankel_norm", "constructive_distance", "optimized_distance",
            "best_approx", "residual_negative_mass", "truncation_N", "grid",
        ):
            assert key in text
        assert report.check()

    def test_report_for_analytic_symbol(self):
        phi = SliceLaurentSeries({1: Quaternion(2)})
        report = approximation_report(phi, 16, 512, 2, 2000, seed=0)
        assert report.hankel_norm == 0.0
        assert report.constructive_distance == 0.0
        assert report.check()

    def test_verify_rank_one(self):
        rep = verify_nehari_bounds([ONE], 16, 2, 512, 2000, seed=0)
        assert rep.gamma_norm == pytest.approx(1.0, abs=1e-12)
        assert rep.distance == pytest.approx(1.0, abs=1e-6)
        assert rep.passed
        assert rep.equality_ok

    def test_verify_random_alpha(self):
        rng = np.random.default_rng(57)
        alpha = [Quaternion(*rng.normal(size=4)) for _ in range(3)]
        rep = verify_nehari_bounds(alpha, 32, 4, 1024, 4000, seed=3)
        assert rep.passed
        assert rep.equality_ok

    def test_verify_hilbert_sequence_below_pi(self):
        norms = []
        for n in (4, 8, 16):
            alpha = [Quaternion(1.0 / (m + 1)) for m in range(2 * n - 1)]
            norms.append(operator_norm(build_hankel_matrix(alpha, n)))
        assert all(v < math.pi for v in norms)
        assert norms == sorted(norms)
