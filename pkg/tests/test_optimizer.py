"""Certificate search: grid + refinement against an independent oracle.

The oracle in this module re-derives the search objective from scratch
(plain loops over ordered atoms, no code shared with the package) so a
formula slip in the fast path cannot cancel out of the comparison.
"""

import math

import numpy as np
import pytest

from ucsbound.errors import BracketFailure, EmptyFeasible, VerificationFailed
from ucsbound.optimizer import (
    BASELINE_THRESHOLD,
    SearchConfig,
    default_alpha_grid,
    find_tmax,
    gamma_hat,
    inner_inf,
    verify_reference_point,
)

SEED = 61803

FAST = SearchConfig(grid_points_per_axis=32, refine_rounds=3, multistart_count=8)


# -- independent oracle ----------------------------------------------------


def oracle_entropy(x):
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def oracle_fullcorr(p, q):
    return sorted((max(p, q), 0.5, min(p + q, 1.0)))[1]


def oracle_ratio(a1, a2, b1, b2, t, alpha):
    """Objective from its definition, over explicit ordered atoms."""
    a = 0.5 * (a1 + a2)
    if b1 is None:
        atoms = [(a1, a2, 0.5), (a2, a1, 0.5)]
        beta = 0.0
    else:
        b = 0.5 * (b1 + b2)
        beta = (t - a) / (b - a)
        atoms = [
            (a1, a2, 0.5 * (1 - beta)),
            (a2, a1, 0.5 * (1 - beta)),
            (b1, b2, 0.5 * beta),
            (b2, b1, 0.5 * beta),
        ]
    marginal = [(x, m) for x, _, m in atoms]
    denom = sum(m * oracle_entropy(x) for x, m in marginal)
    independent = sum(
        mi * mj * oracle_entropy(xi + xj - xi * xj)
        for xi, mi in marginal
        for xj, mj in marginal
    )
    correlated = sum(m * oracle_entropy(oracle_fullcorr(x, y)) for x, y, m in atoms)
    return ((1 - alpha) * independent + alpha * correlated) / denom


def oracle_best_over_samples(t, alpha, rng, count=4000):
    """Cheap independent search: random feasible families, best ratio."""
    best = math.inf
    for _ in range(count):
        a1 = rng.uniform(0, t)
        a2 = rng.uniform(a1, min(1.0, 2 * t - a1))
        if rng.uniform() < 0.3:
            value = oracle_ratio(a1, a2, None, None, t, alpha)
        else:
            b2 = rng.uniform(t, 1.0)
            lo_b1 = max(0.0, 2 * t - b2 + 1e-9)
            if lo_b1 > b2:
                continue
            b1 = rng.uniform(lo_b1, b2)
            if 0.5 * (b1 + b2) <= t:
                continue
            value = oracle_ratio(a1, a2, b1, b2, t, alpha)
        if value < best:
            best = value
    return best


class TestInnerSearch:
    def test_reference_point_reproduced(self):
        rep = inner_inf(0.035, 0.38234)
        assert rep.branch == "beta_positive"
        assert rep.min_ratio == pytest.approx(1.00000889, abs=1e-7)
        fam = rep.argmin
        for coord in (fam.a1, fam.a2, fam.b1):
            assert coord == pytest.approx(0.3300622, abs=1e-4)
        assert fam.b2 == pytest.approx(1.0, abs=1e-6)
        assert fam.beta == pytest.approx(0.1560676, abs=1e-4)

    def test_reported_value_matches_oracle_at_argmin(self):
        # Soundness: the reported minimum is the true objective value of
        # the reported family, per the independent formula.
        for alpha, t in ((0.0, 0.31), (0.035, 0.38234), (0.2, 0.42)):
            rep = inner_inf(alpha, t, FAST)
            fam = rep.argmin
            expect = oracle_ratio(fam.a1, fam.a2, fam.b1, fam.b2, t, alpha)
            assert rep.min_ratio == pytest.approx(expect, abs=1e-9)

    def test_at_least_as_good_as_random_oracle_search(self):
        rng = np.random.default_rng(SEED)
        for alpha, t in ((0.0, 0.38234), (0.035, 0.38234), (0.1, 0.45)):
            rep = inner_inf(alpha, t, FAST)
            sampled = oracle_best_over_samples(t, alpha, rng)
            assert rep.min_ratio <= sampled + 1e-9

    def test_more_effort_never_hurts(self):
        # Growing the grid and refinement budget may only lower the
        # reported minimum (up to the objective tolerance).
        coarse = inner_inf(0.035, 0.38234, FAST)
        base = SearchConfig()
        mid = inner_inf(0.035, 0.38234, base)
        fine = inner_inf(
            0.035, 0.38234, SearchConfig(grid_points_per_axis=96, refine_rounds=8)
        )
        assert mid.min_ratio <= coarse.min_ratio + base.objective_tol
        assert fine.min_ratio <= mid.min_ratio + base.objective_tol

    def test_pinned_high_block_matches_free_search(self):
        # The free argmin has b2 = 1, so pinning b2 must find the same
        # minimum.
        free = inner_inf(0.035, 0.38234)
        pinned = inner_inf(0.035, 0.38234, SearchConfig(b2_pinned_to_one=True))
        assert pinned.argmin.b2 == 1.0
        assert pinned.min_ratio == pytest.approx(free.min_ratio, abs=1e-9)

    def test_sign_flips_across_baseline_threshold(self):
        assert inner_inf(0.0, 0.38).min_ratio > 1.0
        assert inner_inf(0.0, 0.383).min_ratio < 1.0

    @pytest.mark.parametrize("t", [-0.1, 0.0, 0.5, 0.6, 1.2])
    def test_rejects_t_outside_open_interval(self, t):
        with pytest.raises(EmptyFeasible, match="t must lie in"):
            inner_inf(0.035, t)

    def test_rejects_bad_alpha(self):
        with pytest.raises(ValueError):
            inner_inf(1.5, 0.38)

    def test_report_shape(self):
        rep = inner_inf(0.05, 0.4, FAST)
        payload = rep.to_json_dict()
        assert set(payload) == {
            "alpha",
            "t",
            "min_ratio",
            "argmin",
            "branch",
            "evaluations",
            "refined",
        }
        assert set(payload["argmin"]) == {"a1", "a2", "b1", "b2", "beta"}
        assert payload["evaluations"] > 0
        assert payload["refined"] is True


class TestSearchConfig:
    def test_defaults(self):
        cfg = SearchConfig()
        assert cfg.grid_points_per_axis == 64
        assert cfg.refine_rounds == 6
        assert cfg.multistart_count == 16
        assert cfg.param_tol == 1e-10
        assert cfg.objective_tol == 1e-12
        assert cfg.epsilon_boundary == 1e-9
        assert cfg.b2_pinned_to_one is False

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(grid_points_per_axis=1),
            dict(refine_rounds=-1),
            dict(multistart_count=0),
            dict(param_tol=0.0),
            dict(epsilon_boundary=0.5),
        ],
    )
    def test_rejects_bad_config(self, kwargs):
        with pytest.raises(ValueError):
            SearchConfig(**kwargs)


class TestGammaHat:
    def test_auto_sweep_at_reference_t(self):
        cert = gamma_hat(0.38234)
        assert cert.gamma_hat_lower >= 1.0000089 - 1e-5
        assert 0.02 <= cert.alpha_star <= 0.06
        assert cert.certifies

    def test_pinned_alpha_is_not_moved(self):
        cert = gamma_hat(0.38234, 0.035, FAST)
        assert cert.alpha_star == 0.035
        assert cert.gamma_hat_lower == pytest.approx(1.0000089, abs=1e-5)

    def test_small_t_certifies(self):
        cert = gamma_hat(0.3, alphas=[0.0, 0.05], config=FAST)
        assert cert.gamma_hat_lower > 1.0

    def test_large_t_fails_to_certify(self):
        cert = gamma_hat(0.49, config=FAST)
        assert cert.gamma_hat_lower < 1.0
        assert not cert.certifies

    def test_sweep_at_least_as_good_as_each_grid_point(self):
        cfg = FAST
        cert = gamma_hat(0.38234, config=cfg)
        for alpha in default_alpha_grid():
            assert cert.gamma_hat_lower >= inner_inf(alpha, 0.38234, cfg).min_ratio - 1e-12

    def test_rejects_bad_alpha_argument(self):
        with pytest.raises(ValueError):
            gamma_hat(0.38, alphas="garbage")
        with pytest.raises(ValueError):
            gamma_hat(0.38, alphas=[])
        with pytest.raises(ValueError):
            gamma_hat(0.38, alphas=[0.5, 1.5])

    def test_certificate_shape(self):
        cert = gamma_hat(0.4, 0.05, FAST)
        payload = cert.to_json_dict()
        assert set(payload) == {
            "t",
            "alpha_star",
            "gamma_hat_lower",
            "argmin",
            "branch",
            "evaluations",
            "config",
            "wall_time_ms",
        }
        assert payload["config"]["grid_points_per_axis"] == 32
        assert payload["wall_time_ms"] > 0


class TestFindTmax:
    def test_bracket_must_straddle(self):
        with pytest.raises(BracketFailure, match="low endpoint"):
            find_tmax(FAST, bracket=(0.45, 0.49))
        with pytest.raises(BracketFailure, match="high endpoint"):
            find_tmax(FAST, bracket=(0.30, 0.32), t_tol=1e-3)

    def test_rejects_malformed_bracket(self):
        with pytest.raises(ValueError):
            find_tmax(FAST, bracket=(0.4, 0.2))
        with pytest.raises(ValueError):
            find_tmax(FAST, bracket=(0.2, 0.6))

    def test_coarse_threshold_run(self):
        # A loose tolerance keeps this cheap; the precise run lives in
        # the acceptance suite.
        result = find_tmax(FAST, margin=1e-6, bracket=(0.37, 0.40), t_tol=5e-4)
        assert result.t_certified > BASELINE_THRESHOLD
        assert result.t_ceiling - result.t_certified <= 5e-4 + 1e-12
        assert result.certificate.gamma_hat_lower > 1.0 + 1e-6
        assert result.endpoint_bounds[0] > 1.0 + 1e-6
        assert result.endpoint_bounds[1] <= 1.0 + 1e-6
        payload = result.to_json_dict()
        assert set(payload) == {
            "t_certified",
            "t_ceiling",
            "margin",
            "bracket",
            "endpoint_bounds",
            "steps",
            "certificate",
            "wall_time_ms",
        }


class TestVerifyReferencePoint:
    def test_default_passes(self):
        cert = verify_reference_point()
        assert cert.gamma_hat_lower == pytest.approx(1.00000889, abs=2e-5)

    def test_strict_passes(self):
        cert = verify_reference_point(strict=True)
        assert cert.gamma_hat_lower == pytest.approx(1.00000889, abs=1e-6)

    def test_degraded_config_fails_with_report(self):
        with pytest.raises(VerificationFailed) as excinfo:
            verify_reference_point(
                SearchConfig(grid_points_per_axis=8, refine_rounds=0)
            )
        failure = excinfo.value
        assert failure.measured is not None
        assert failure.expected["min_ratio"] == 1.00000889
        assert abs(failure.measured["min_ratio"] - 1.00000889) > 2e-5

    def test_pinned_high_block_passes(self):
        cert = verify_reference_point(
            SearchConfig(
                grid_points_per_axis=96, refine_rounds=8, b2_pinned_to_one=True
            )
        )
        assert cert.argmin.b2 == 1.0
