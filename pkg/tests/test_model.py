"""Parameter validation and the Bell-mixture initial state."""

import math
from fractions import Fraction

import numpy as np
import pytest

from phasedjcm import (
    TAIL_TOL,
    BlockState,
    ModelParams,
    ParameterError,
    build_initial_state,
    default_n_max,
    load_params,
    params_from_mapping,
    poisson_pmf,
    poisson_tail,
    validate_params,
)


def make_params(**overrides):
    base = dict(kappa_bar=1.0, gamma_bar=0.0, mean_photons=5.0, lam=0.5,
                p11=0.8, q11=0.5, bell_phase=math.pi / 6.0, n_max=None)
    base.update(overrides)
    return ModelParams(**base)


def test_poisson_pmf_vacuum():
    assert poisson_pmf(5.0, 0) == pytest.approx(math.exp(-5.0), rel=1e-14)


def test_poisson_pmf_log_space_matches_exact_rational():
    # independent evaluation: N^n / n! by exact rational arithmetic, then
    # one float multiply by e^-N
    for n in (1, 3, 5, 12):
        exact = float(Fraction(5**n, math.factorial(n))) * math.exp(-5.0)
        assert poisson_pmf(5.0, n) == pytest.approx(exact, rel=1e-12)


def test_poisson_pmf_far_tail_is_finite_and_tiny():
    val = poisson_pmf(5.0, 300)
    assert 0.0 < val < 1e-300 or val == 0.0 or val < 1e-200


def test_poisson_pmf_normalization():
    n_max = default_n_max(5.0)
    total = float(np.sum(poisson_pmf(5.0, np.arange(n_max + 1))))
    tail = poisson_tail(5.0, n_max)
    assert tail < TAIL_TOL
    assert total == pytest.approx(1.0 - tail, abs=1e-13)


def test_poisson_pmf_domain_errors():
    with pytest.raises(ValueError):
        poisson_pmf(0.0, 1)
    with pytest.raises(ValueError):
        poisson_pmf(5.0, -1)


def test_default_n_max_keeps_tail_small():
    for mean in (0.5, 2.0, 5.0, 20.0):
        assert poisson_tail(mean, default_n_max(mean)) < TAIL_TOL


def test_factored_state_has_no_coherence():
    state = build_initial_state(make_params(lam=0.0))
    assert np.all(state.c == 0)


def test_bell_state_weights():
    # lam=1, q11=0.5: a[n] = p(n)/2, c[n] = p(n) e^{-i phi}/2, b[0] = 0
    phi = math.pi / 6.0
    params = make_params(lam=1.0, q11=0.5, bell_phase=phi)
    state = build_initial_state(params)
    pn = poisson_pmf(5.0, np.arange(params.n_max + 1))
    np.testing.assert_allclose(state.a, pn / 2.0, rtol=0, atol=1e-15)
    np.testing.assert_allclose(state.c, pn[:-1] * np.exp(-1j * phi) / 2.0,
                               rtol=0, atol=1e-15)
    assert state.b[0] == 0.0
    np.testing.assert_allclose(state.b[1:], pn[:-1] / 2.0, rtol=0, atol=1e-15)


def test_initial_trace_normalized():
    for lam in (0.0, 0.3, 1.0):
        state = build_initial_state(make_params(lam=lam))
        assert abs(state.trace() - 1.0) < TAIL_TOL


def test_initial_marginals_match_closed_form():
    # P(n;0) = p(n)[(1-lam) + lam q11] + p(n-1) lam q22, w1 = (1-lam)p11 + lam q11
    params = make_params(lam=0.4, p11=0.7, q11=0.3)
    state = build_initial_state(params)
    pn = poisson_pmf(5.0, np.arange(params.n_max + 1))
    pn_prev = np.concatenate([[0.0], pn[:-1]])   # p(-1) := 0
    expected = pn * ((1 - 0.4) + 0.4 * 0.3) + pn_prev * 0.4 * 0.7
    np.testing.assert_allclose(state.a + state.b, expected, rtol=0, atol=1e-14)
    w1 = float(np.sum(state.a))
    assert w1 == pytest.approx((1 - 0.4) * 0.7 + 0.4 * 0.3, abs=1e-14)


def test_validate_accepts_factored_and_bell_ends():
    assert validate_params(make_params(lam=0.0)).ok
    for q11 in (0.1, 0.5, 0.9):
        assert validate_params(make_params(lam=1.0, q11=q11)).ok


def test_validate_rejects_overdamped():
    report = validate_params(make_params(kappa_bar=1.0, gamma_bar=5.0))
    assert not report.ok
    assert any("overdamped" in e for e in report.errors)


def test_validate_rejects_bad_ranges():
    assert not validate_params(make_params(lam=1.5)).ok
    assert not validate_params(make_params(p11=-0.2)).ok
    assert not validate_params(make_params(q11=1.0)).ok
    assert not validate_params(make_params(bell_phase=7.0)).ok
    assert not validate_params(make_params(mean_photons=-1.0)).ok


def test_validate_rejects_thin_truncation():
    report = validate_params(make_params(n_max=5))
    assert not report.ok
    assert any("tail" in e for e in report.errors)


def test_build_initial_state_propagates_validation():
    with pytest.raises(ParameterError):
        build_initial_state(make_params(gamma_bar=5.0))


def test_valid_params_give_positive_blocks():
    rng = np.random.default_rng(7)
    for _ in range(50):
        params = make_params(
            lam=float(rng.uniform(0, 1)),
            p11=float(rng.uniform(0, 1)),
            q11=float(rng.uniform(0.05, 0.95)),
            bell_phase=float(rng.uniform(0, 2 * math.pi)),
            mean_photons=float(rng.uniform(0.5, 20.0)),
        )
        report = validate_params(params)
        if report.ok:
            state = build_initial_state(params)
            assert state.min_eigenvalue() >= -1e-12
            assert abs(state.trace() - 1.0) < TAIL_TOL


def test_blockstate_shape_checks():
    with pytest.raises(ValueError):
        BlockState(a=np.zeros(4), b=np.zeros(4), c=np.zeros(4, complex))
    with pytest.raises(ValueError):
        BlockState(a=np.zeros(4), b=np.zeros(3), c=np.zeros(3, complex))


def test_blockstate_arrays_frozen():
    state = build_initial_state(make_params())
    with pytest.raises(ValueError):
        state.a[0] = 99.0


def test_config_round_trip(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(
        "# comment line\n"
        "kappa_bar = 1.0\n"
        "gamma_bar = 0.01\n"
        "mean_photons = 5\n"
        "lambda = 0.9   # inline comment\n"
        "p11 = 0.8\n"
        "q11 = 0.5\n"
        "bell_phase = 0.5235987755982988\n"
        "n_max = 60\n"
    )
    params = load_params(cfg)
    assert params.lam == 0.9
    assert params.n_max == 60
    assert params.gamma_bar == 0.01


def test_config_defaults_and_unknown_keys(tmp_path):
    params = params_from_mapping({"mean_photons": "20"})
    assert params.mean_photons == 20.0
    assert params.n_max == default_n_max(20.0)
    with pytest.raises(ParameterError):
        params_from_mapping({"mean_photon": "20"})
    bad = tmp_path / "bad.cfg"
    bad.write_text("just some words\n")
    with pytest.raises(ParameterError):
        load_params(bad)
