import math
import warnings

import numpy as np
import pytest
from scipy.special import betainc

from slelab.dataclasses import HittingQuery
from slelab.driving import sample_sle_driving
from slelab.exceptions import InvalidParameterError, UnresolvedTrialsWarning
from slelab.hitting import (
    QUADRATURE_NODES,
    beffara_F,
    beffara_z,
    driving_hit_side,
    geometric_hit_side,
    mc_hitting,
    recursion_bound_sequence,
    recursion_lower_bound,
)
from slelab.trace import compute_trace, polyline_trace


def test_arcsine_values_at_kappa_8():
    assert beffara_F(8.0, 0.25) == pytest.approx(1.0 / 3.0, abs=1e-12)
    assert beffara_F(8.0, 0.75) == pytest.approx(2.0 / 3.0, abs=1e-12)
    for x in np.linspace(0, 1, 101):
        assert beffara_F(8.0, x) == pytest.approx(2 / math.pi * math.asin(math.sqrt(x)), abs=1e-10)


@pytest.mark.parametrize("kappa", [4.5, 5.0, 6.0, 8.0, 16.0])
def test_endpoints_and_symmetry(kappa):
    assert beffara_F(kappa, 0.0) == 0.0
    assert beffara_F(kappa, 1.0) == 1.0
    assert beffara_F(kappa, 0.5) == pytest.approx(0.5, abs=1e-14)
    for x in np.random.default_rng(1).random(1000):
        assert abs(beffara_F(kappa, x) + beffara_F(kappa, 1.0 - x) - 1.0) <= 1e-12


@pytest.mark.parametrize("kappa", [4.5, 5.0, 6.0, 8.0, 16.0])
def test_quadrature_converged(kappa):
    assert abs(beffara_z(kappa, 128) - beffara_z(kappa)) < 1e-11
    for x in np.linspace(0.0, 1.0, 41):
        assert abs(beffara_F(kappa, x, nodes=2 * QUADRATURE_NODES) - beffara_F(kappa, x)) < 1e-11


@pytest.mark.parametrize("kappa", [4.5, 6.0, 12.0])
def test_matches_regularized_incomplete_beta(kappa):
    alpha = 4.0 / kappa
    for x in (0.05, 0.3, 0.5, 0.8, 0.99):
        assert beffara_F(kappa, x) == pytest.approx(betainc(1 - alpha, 1 - alpha, x), abs=1e-10)


def test_normalization_at_kappa_8():
    assert beffara_z(8.0) == pytest.approx(math.pi, rel=1e-12)


def test_monotone():
    xs = np.linspace(0, 1, 50)
    values = [beffara_F(6.0, x) for x in xs]
    assert values == sorted(values)


def test_domain_errors():
    with pytest.raises(InvalidParameterError):
        beffara_F(4.0, 0.5)
    with pytest.raises(InvalidParameterError):
        beffara_F(6.0, 1.5)
    with pytest.raises(InvalidParameterError):
        HittingQuery(6.0, 1.0, 2.0)
    with pytest.raises(InvalidParameterError):
        HittingQuery(3.0, -1.0, 1.0)


def test_query_argument():
    assert HittingQuery(6.0, -1.0, 3.0).x == 0.25


def test_recursion_bound():
    assert recursion_lower_bound(1) == 0.5
    assert recursion_lower_bound(9) == 0.1
    np.testing.assert_allclose(recursion_bound_sequence(5), [1 / 2, 1 / 3, 1 / 4, 1 / 5, 1 / 6])
    with pytest.raises(InvalidParameterError):
        recursion_lower_bound(0)


@pytest.mark.parametrize("kappa", [5.0, 6.0, 8.0, 12.0])
def test_formula_dominates_recursion_bound(kappa):
    for n in range(2, 101):
        assert beffara_F(kappa, 1.0 / (n + 1)) > recursion_lower_bound(n)


def test_mc_symmetric_query():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UnresolvedTrialsWarning)
        est = mc_hitting(HittingQuery(6.0, -1.0, 1.0), 400, 4000, 20.0, seed=13)
    assert est.unresolved < 400
    assert est.f_theory == pytest.approx(0.5)
    assert abs(est.p_hat - 0.5) <= 4 * est.stderr + 0.02


@pytest.mark.slow
def test_mc_asymmetric_query():
    q = HittingQuery(6.0, -1.0, 2.0)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UnresolvedTrialsWarning)
        est = mc_hitting(q, 2000, 20_000, 50.0, seed=29)
    assert abs(est.p_hat - beffara_F(6.0, q.x)) <= max(4 * est.stderr, 0.04)


def test_mc_is_deterministic():
    q = HittingQuery(6.0, -1.0, 2.0)
    a = mc_hitting(q, 50, 500, 10.0, seed=4)
    b = mc_hitting(q, 50, 500, 10.0, seed=4)
    assert a == b


def test_mc_scale_invariance_is_exact():
    small = mc_hitting(HittingQuery(6.0, -1.0, 1.0), 100, 1000, 10.0, seed=6)
    large = mc_hitting(HittingQuery(6.0, -2.0, 2.0), 100, 1000, 40.0, seed=6)
    assert small.p_hat == large.p_hat
    assert small.unresolved == large.unresolved


def test_mc_unresolved_trials_warn():
    with pytest.warns(UnresolvedTrialsWarning):
        est = mc_hitting(HittingQuery(6.0, -1.0, 1.0), 20, 10, 1e-3, seed=1)
    assert est.unresolved == 20
    assert math.isnan(est.p_hat)


def test_single_trial_matches_driving_path():
    q = HittingQuery(6.0, -1.0, 2.0)
    steps, horizon = 5000, 50.0
    for seed in range(1, 6):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", UnresolvedTrialsWarning)
            est = mc_hitting(q, 1, steps, horizon, seed)
        path = sample_sle_driving(6.0, horizon, steps, seed)
        side = driving_hit_side(path.u, path.dt, 6.0, q.a, q.c)
        if est.unresolved:
            assert side == 0
        else:
            assert est.p_hat == (1.0 if side == 1 else 0.0)


def test_injected_formula_is_used():
    est = mc_hitting(HittingQuery(6.0, -1.0, 1.0), 10, 100, 10.0, seed=2,
                     beffara=lambda kappa, x: 0.125)
    assert est.f_theory == 0.125


def test_geometric_hit_side():
    assert geometric_hit_side(polyline_trace([0, 1j, 2 + 1j, 2, -2], 0.05), -1.0, 1.0, 0.05) == 1
    assert geometric_hit_side(polyline_trace([0, 1j, -2 + 1j, -2, 2], 0.05), -1.0, 1.0, 0.05) == -1
    assert geometric_hit_side(polyline_trace([0, 2j], 0.05), -1.0, 1.0, 0.05) == 0


@pytest.mark.slow
def test_geometric_and_driving_swallowing_agree():
    a, c = -1.0, 1.0
    outcomes = []
    for seed in range(50):
        path = sample_sle_driving(6.0, 5.0, 10_000, seed)
        side = driving_hit_side(path.u, path.dt, 6.0, a, c)
        if side == 0:
            continue
        delta = math.sqrt(6.0 * path.dt)
        outcomes.append(geometric_hit_side(compute_trace(path), a, c, delta) == side)
    assert len(outcomes) >= 20
    assert np.mean(outcomes) >= 0.9
