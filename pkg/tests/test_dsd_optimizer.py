import math
import random

import pytest

from lcroots import (
    MinStatus,
    MonicPolynomial,
    OptimizerConfig,
    OptimizerMethod,
    default_grid_span,
    dsd,
    dsd_derivative,
    from_roots,
    minimize_dsd,
)

DEG7 = MonicPolynomial((0.75236627 + 0.7632200j, -0.88646602 - 0.0588508j,
                        -0.36898968 - 0.8967600j, 0.61107101 + 0.4171449j,
                        -0.11086361 + 0.3804181j, -0.12915236 - 0.2105427j,
                        0.03085174 + 0.0215915j))

TWO_PHASE = OptimizerConfig(method=OptimizerMethod.TWO_PHASE, max_iterations=500,
                            initial_temperature=10.0, evals_per_temperature=200,
                            seed=0)


def brute_force_min(p, theta, lo, hi, samples=100000):
    # dense scan for the deepest interior local minimum, then golden-section
    # refine; independent of the grid logic (boundary dips do not count)
    vals = [dsd(p, theta, lo + (hi - lo) * k / samples)
            for k in range(samples + 1)]
    best_k, best_v = None, math.inf
    for k in range(1, samples):
        if vals[k] <= vals[k - 1] and vals[k] <= vals[k + 1] and vals[k] < best_v:
            best_k, best_v = k, vals[k]
    assert best_k is not None
    best_t = lo + (hi - lo) * best_k / samples
    a = max(lo, best_t - (hi - lo) / samples)
    b = min(hi, best_t + (hi - lo) / samples)
    phi = (math.sqrt(5.0) - 1.0) / 2.0
    c, d = b - phi * (b - a), a + phi * (b - a)
    for _ in range(200):
        if dsd(p, theta, c) < dsd(p, theta, d):
            b, d = d, c
            c = b - phi * (b - a)
        else:
            a, c = c, d
            d = a + phi * (b - a)
    t = (a + b) / 2
    return t, dsd(p, theta, t)


class TestOptimizerConfig:
    def test_defaults(self):
        cfg = OptimizerConfig()
        assert cfg.method is OptimizerMethod.GRID_DISCRETIZE
        assert cfg.grid_points >= 2

    @pytest.mark.parametrize("kwargs", [
        {"max_iterations": 0},
        {"initial_temperature": 0.0},
        {"initial_temperature": -1.0},
        {"evals_per_temperature": 0},
        {"grid_points": 1},
        {"grid_t_max": 0.0},
        {"polish_iterations": -1},
        {"polish_tolerance": 0.0},
    ])
    def test_rejects_bad_values(self, kwargs):
        with pytest.raises(ValueError):
            OptimizerConfig(**kwargs)


class TestDefaultGridSpan:
    def test_reference_span(self):
        # coefficient cap 4*(1+274) = 1100 loses to the root-radius bound
        w = from_roots([1, 2, 3, 4, 5])
        assert default_grid_span(w) == pytest.approx(39.375, rel=1e-12)

    def test_positive_for_tiny_polynomials(self):
        p = MonicPolynomial((1e-8, 1e-8j, 1e-8, 1e-8j))
        assert default_grid_span(p) >= 1.0


class TestDsdDerivative:
    def test_sign_structure_around_a_minimum(self):
        res = minimize_dsd(DEG7, 0.73136)
        t = res.t_star
        assert dsd_derivative(DEG7, 0.73136, t - 1e-3) < 0
        assert dsd_derivative(DEG7, 0.73136, t + 1e-3) > 0


class TestGridDiscretize:
    def test_degree_guard(self):
        with pytest.raises(ValueError):
            minimize_dsd(MonicPolynomial((1, 2, 3)), 0.0)

    def test_reference_frame_minimum(self):
        res = minimize_dsd(DEG7, 0.73136)
        assert res.status is MinStatus.OK
        assert res.t_star == pytest.approx(1.2465, rel=1e-3)
        assert res.min_value == pytest.approx(4.2053e-3, rel=1e-2)

    def test_five_minima_on_real_root_ladder(self):
        w = from_roots([1, 2, 3, 4, 5])
        res = minimize_dsd(w, math.pi)
        assert res.status is MinStatus.OK
        ts = [t for t, _ in res.all_minima]
        assert len(ts) == 5
        for got, want in zip(ts, (2.5, 3.5, 4.5, 5.5, 6.5)):
            assert got == pytest.approx(want, abs=1e-6)
        assert all(v <= 1e-8 for _, v in res.all_minima)
        assert ts == sorted(ts)
        # the global minimum is one of the collected ones
        assert res.min_value == min(v for _, v in res.all_minima)

    def test_user_span_cap_respected(self):
        w = from_roots([1, 2, 3, 4, 5])
        res = minimize_dsd(w, math.pi, OptimizerConfig(grid_t_max=4.0))
        ts = [round(t, 6) for t, _ in res.all_minima]
        assert ts == [2.5, 3.5]

    def test_no_crossing_reports_no_convergence(self):
        q = from_roots([-1, -1.2, -1.5 + 0.1j, -0.8 - 0.1j])
        res = minimize_dsd(q, 0.3, OptimizerConfig(grid_t_max=1e-6))
        assert res.status is MinStatus.NO_CONVERGENCE
        assert res.t_star is None and res.min_value is None
        assert res.all_minima == ()

    def test_all_roots_behind_ray(self):
        q = from_roots([-1, -1.2, -1.5 + 0.1j, -0.8 - 0.1j])
        res = minimize_dsd(q, math.pi)
        assert res.status is MinStatus.NO_CONVERGENCE

    def test_local_minimality(self):
        rng = random.Random(3)
        checked = 0
        while checked < 10:
            deg = rng.randrange(4, 7)
            p = from_roots([complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
                            for _ in range(deg)])
            theta = rng.uniform(-math.pi, math.pi)
            res = minimize_dsd(p, theta)
            if res.status is not MinStatus.OK:
                continue
            checked += 1
            scale = 1.0 + abs(res.min_value)
            for delta in (1e-4, 1e-3):
                step = delta * max(1.0, res.t_star)
                assert dsd(p, theta, res.t_star + step) >= res.min_value - 1e-9 * scale
                if res.t_star - step >= 0:
                    assert dsd(p, theta, res.t_star - step) >= res.min_value - 1e-9 * scale

    def test_matches_dense_scan(self):
        rng = random.Random(5)
        checked = 0
        while checked < 6:
            deg = rng.randrange(4, 7)
            p = from_roots([complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
                            for _ in range(deg)])
            theta = rng.uniform(-math.pi, math.pi)
            res = minimize_dsd(p, theta)
            if res.status is not MinStatus.OK:
                continue
            checked += 1
            t_ref, v_ref = brute_force_min(p, theta, 0.0, default_grid_span(p))
            assert res.min_value <= v_ref + 1e-12 * (1.0 + abs(v_ref))
            if abs(res.t_star - t_ref) > 1e-6 * max(1.0, t_ref):
                # landed in a different basin: then it must be at least as deep
                assert res.min_value < v_ref - 1e-15 or \
                    res.min_value == pytest.approx(v_ref, rel=1e-8)

    def test_deterministic(self):
        a = minimize_dsd(DEG7, 0.73136)
        b = minimize_dsd(DEG7, 0.73136)
        assert a.t_star == b.t_star
        assert a.min_value == b.min_value
        assert a.all_minima == b.all_minima


class TestTwoPhase:
    def test_reference_frame_minimum(self):
        res = minimize_dsd(DEG7, 0.73136, TWO_PHASE)
        assert res.status is MinStatus.OK
        assert res.t_star == pytest.approx(1.2465, rel=1e-3)
        assert res.min_value == pytest.approx(4.2053e-3, rel=1e-2)
        assert res.all_minima == ()

    def test_bit_identical_for_fixed_seed(self):
        a = minimize_dsd(DEG7, 0.73136, TWO_PHASE)
        b = minimize_dsd(DEG7, 0.73136, TWO_PHASE)
        assert a.t_star == b.t_star and a.min_value == b.min_value

    def test_theta_index_changes_the_stream(self):
        a = minimize_dsd(DEG7, 0.73136, TWO_PHASE, theta_index=0)
        b = minimize_dsd(DEG7, 0.73136, TWO_PHASE, theta_index=5)
        # same basin, not the same arithmetic path
        assert a.t_star == pytest.approx(b.t_star, rel=1e-6)

    def test_negative_minimizer_rejected(self):
        q = from_roots([-1, -1.2, -1.5 + 0.1j, -0.8 - 0.1j])
        res = minimize_dsd(q, math.pi, TWO_PHASE)
        assert res.status is MinStatus.REJECTED_NEGATIVE
        assert res.t_star is None and res.min_value is None

    def test_agrees_with_grid_on_shared_basin(self):
        grid = minimize_dsd(DEG7, 0.73136)
        sann = minimize_dsd(DEG7, 0.73136, TWO_PHASE)
        assert sann.t_star == pytest.approx(grid.t_star, rel=1e-6)
        assert sann.min_value == pytest.approx(grid.min_value, rel=1e-6)
