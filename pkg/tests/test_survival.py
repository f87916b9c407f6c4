"""Closed forms, contour integral, and bound states vs the propagation oracle."""

import math

import numpy as np
import pytest

from defectlattice import (
    InvalidSpecError,
    LatticeSpec,
    SeriesDivergenceError,
    SeriesTolerance,
    TimeGrid,
    bound_state_energies,
    build_hamiltonian,
    c0_closed_form,
    c0_contour,
    c0_critical,
    initial_state,
    propagate,
    regime_params,
    s_greater,
    s_less,
    survival_series,
)
from helpers import J1_FIRST_ZERO, propagation_c0, series_j


# ------------------------------------------------------------- regime params

def test_regime_params_examples():
    # delta = sqrt(2): amplitude vanishes identically
    assert regime_params(math.sqrt(2.0)).amp == pytest.approx(0.0, abs=1e-12)

    # frozen values recomputed from the printed definitions
    p = regime_params(0.474)
    assert p.gamma == pytest.approx(0.8805248434882459, rel=1e-12)
    assert p.amp == pytest.approx(2.289783367985513, rel=1e-12)
    assert p.omega == pytest.approx(0.25516145474094076, rel=1e-12)
    assert p.regime == "sub_critical"
    # four-significant-digit agreement with the quoted rounded values
    assert p.gamma == pytest.approx(0.8807, abs=5e-4)
    assert p.amp == pytest.approx(2.290, abs=5e-4)
    assert p.omega == pytest.approx(0.2551, abs=5e-4)

    p = regime_params(4.17)
    assert p.gamma == pytest.approx(4.04832063947509, rel=1e-12)
    assert p.amp == pytest.approx(0.9389830922148528, rel=1e-12)
    assert p.omega == pytest.approx(4.295336646618649, rel=1e-12)
    assert p.regime == "super_critical"
    assert p.gamma == pytest.approx(4.0483, abs=5e-4)
    assert p.amp == pytest.approx(0.9390, abs=5e-4)
    assert p.omega == pytest.approx(4.2954, abs=5e-4)


def test_regime_params_critical_and_errors():
    p = regime_params(1.0)
    assert p.gamma == 0.0
    assert p.amp is None and p.omega is None
    assert p.regime == "critical"
    with pytest.raises(InvalidSpecError):
        regime_params(0.0)
    with pytest.raises(InvalidSpecError):
        regime_params(-2.0)


# ------------------------------------------------------------ critical branch

def test_c0_critical_values():
    assert c0_critical(0.0) == 1.0
    assert abs(c0_critical(J1_FIRST_ZERO / 2.0)) < 1e-12
    assert c0_critical(2.0) == pytest.approx(series_j(1, 4.0) / 2.0, rel=1e-11)


def test_c0_critical_matches_chain():
    taus = np.linspace(0.0, 4.0, 41)
    oracle = propagation_c0(1.0, taus)
    for t, c in zip(taus, oracle):
        assert abs(c0_critical(float(t)) - c) < 1e-6


# ------------------------------------------------------------------- s_less

def test_s_less_literal_at_zero():
    # literal reading at tau=0: 2 - (1 + 1/gamma^2)/2; gamma^2 = 0.75 -> 5/6
    gamma = math.sqrt(0.75)
    assert s_less(0.0, gamma, variant="printed") == pytest.approx(5.0 / 6.0, rel=1e-12)


def test_s_less_reconciled_pinned_against_oracle():
    # reconciled branch total vs 600-site propagation at delta = 0.474, tau = 1
    p = regime_params(0.474)
    total = p.amp / 2.0 * math.exp(-p.omega * 1.0) + s_less(1.0, p.gamma, variant="reconciled")
    oracle = propagation_c0(0.474, [1.0])[0]
    assert total == pytest.approx(float(oracle.real), abs=1e-10)
    assert total == pytest.approx(0.8983806923213702, abs=1e-10)  # frozen


def test_s_less_truncation_insensitive():
    # tightening abs_tol by three decades must not move the result
    for gamma in (0.5, 0.7, 0.88):
        for tau in (0.5, 2.0, 4.0):
            a = s_less(tau, gamma, SeriesTolerance(abs_tol=1e-12), variant="printed")
            b = s_less(tau, gamma, SeriesTolerance(abs_tol=1e-15), variant="printed")
            assert a == pytest.approx(b, abs=5e-11)


def test_s_less_divergence_for_tiny_gamma():
    with pytest.raises(SeriesDivergenceError):
        s_less(50.0, 0.01, SeriesTolerance(max_terms=400))


def test_s_less_domain():
    with pytest.raises(InvalidSpecError):
        s_less(1.0, 1.2)
    with pytest.raises(InvalidSpecError):
        s_less(1.0, 0.5, variant="nonsense")


# ----------------------------------------------------------------- s_greater

@pytest.mark.parametrize("delta", [1.5, 2.0, 4.17])
@pytest.mark.parametrize("variant", ["printed", "reconciled"])
def test_s_greater_zero_identity(delta, variant):
    # A + S_>(0) = 1 holds analytically in both variants
    p = regime_params(delta)
    s0 = s_greater(0.0, p.gamma, variant=variant)
    assert s0 == pytest.approx(1.0 / p.gamma ** 2, rel=1e-12)
    assert p.amp + s0 == pytest.approx(1.0, rel=1e-12)


def test_s_greater_reconciled_matches_oracle():
    p = regime_params(4.17)
    oracle = propagation_c0(4.17, [1.0])[0]
    total = p.amp * math.cos(p.omega * 1.0) + s_greater(1.0, p.gamma, variant="reconciled")
    assert total == pytest.approx(float(oracle.real), abs=1e-6)


def test_s_greater_printed_deviates_from_oracle():
    # the literal weight exponent resums with growing weights and misses
    # the oracle by O(1); kept as the documented transcription failure
    p = regime_params(4.17)
    oracle = propagation_c0(4.17, [1.0])[0]
    total = p.amp * math.cos(p.omega * 1.0) + s_greater(1.0, p.gamma, variant="printed")
    assert abs(total - oracle.real) > 0.1


def test_s_greater_large_gamma_bounded():
    p = regime_params(50.0)
    for tau in np.linspace(0.0, 4.0, 17):
        val = s_greater(float(tau), p.gamma, variant="reconciled")
        assert abs(val) <= 2.0


def test_s_greater_domain():
    with pytest.raises(InvalidSpecError):
        s_greater(1.0, 0.0)
    with pytest.raises(InvalidSpecError):
        s_greater(-1.0, 2.0)


# ------------------------------------------------------------- c0_closed_form

@pytest.mark.parametrize("delta", [0.1, 0.474, 2.0, 4.17])
def test_initial_condition_reconciled(delta):
    assert abs(c0_closed_form(delta, 0.0)) == pytest.approx(1.0, abs=1e-10)


def test_closed_form_matches_oracle_both_regimes():
    taus = np.linspace(0.0, 4.0, 81)
    for delta in (0.474, 4.17):
        oracle = propagation_c0(delta, taus)
        vals = np.array([c0_closed_form(delta, float(t)) for t in taus])
        assert np.max(np.abs(np.abs(vals) - np.abs(oracle))) < 1e-6


def test_closed_form_printed_failures():
    # literal sub-critical branch: c0(0) = 2 instead of 1 ...
    assert c0_closed_form(0.5, 0.0, mode="printed").real == pytest.approx(2.0, rel=1e-12)
    # ... and the decoupled limit picks up a spurious + J0(2 tau)
    for tau in (0.5, 1.0, 2.0):
        lit = c0_closed_form(1e-3, tau, mode="printed").real
        assert lit == pytest.approx(1.0 + series_j(0, 2.0 * tau), abs=1e-4)


def test_closed_form_routes_near_critical():
    assert c0_closed_form(1.0 + 1e-9, 2.0).real == pytest.approx(c0_critical(2.0), rel=1e-12)
    assert c0_closed_form(1.0 - 1e-9, 2.0).real == pytest.approx(c0_critical(2.0), rel=1e-12)


def test_closed_form_bounded(rng):
    for _ in range(12):
        delta = float(rng.uniform(0.05, 5.0))
        tau = float(rng.uniform(0.0, 4.0))
        assert abs(c0_closed_form(delta, tau)) <= 1.0 + 1e-9


def test_survival_series_agrees_with_closed_form(rng):
    for _ in range(10):
        delta = float(rng.uniform(0.1, 4.5))
        tau = float(rng.uniform(0.0, 4.0))
        if abs(delta - 1.0) < 1e-3:
            continue
        assert survival_series(delta, tau) == pytest.approx(
            c0_closed_form(delta, tau).real, abs=5e-9
        )


# ------------------------------------------------------------------ contour

@pytest.mark.parametrize("delta", [0.1, 0.474, 2.0, 4.17])
def test_contour_initial_condition(delta):
    assert abs(c0_contour(delta, 0.0)) == pytest.approx(1.0, abs=1e-10)


def test_contour_matches_oracle_subcritical():
    taus = [0.5, 1.0, 2.0, 4.0]
    oracle = propagation_c0(0.474, taus)
    for t, c in zip(taus, oracle):
        assert abs(abs(c0_contour(0.474, t)) - abs(c)) < 1e-6


def test_contour_matches_oracle_supercritical():
    taus = [0.5, 1.0, 2.0, 4.0]
    oracle = propagation_c0(4.17, taus)
    for t, c in zip(taus, oracle):
        assert abs(abs(c0_contour(4.17, t)) - abs(c)) < 1e-6


def test_contour_printed_poles_fail_above_critical():
    # documented discrepancy: the literal pole pair produces runaway cosh
    # terms for delta > 1 (off by ~1e6 at tau = 4)
    oracle = propagation_c0(4.17, [4.0])[0]
    lit = c0_contour(4.17, 4.0, pole_convention="printed")
    assert abs(lit - oracle) > 1.0e3
    # ... while below critical the printed form is already exact
    oracle = propagation_c0(0.474, [2.0])[0]
    lit = c0_contour(0.474, 2.0, pole_convention="printed")
    assert abs(abs(lit) - abs(oracle)) < 1e-6


def test_contour_refinement_is_cauchy():
    # successive point-count doublings must already agree at the 1e-10
    # level by the time the evaluator returns (spectral accuracy of the
    # periodic trapezoid rule)
    a = c0_contour(0.474, 4.0, n_points_start=64)
    b = c0_contour(0.474, 4.0, n_points_start=128)
    c = c0_contour(0.474, 4.0, n_points_start=256)
    assert abs(a - b) < 1e-10
    assert abs(b - c) < 1e-10


def test_contour_domain_errors():
    with pytest.raises(InvalidSpecError):
        c0_contour(1.0, 1.0)
    with pytest.raises(InvalidSpecError):
        c0_contour(1.0 + 1e-9, 1.0)
    with pytest.raises(InvalidSpecError):
        c0_contour(0.5, -1.0)


# --------------------------------------------------------------- bound states

def test_bound_states_a3():
    assert bound_state_energies(4.17) == pytest.approx(
        (4.295336646618649, -4.295336646618649), rel=1e-12
    )
    # dense 2000-site spectrum: exactly two eigenvalues outside the band
    w, _ = build_hamiltonian(LatticeSpec(2000, delta=4.17)).eigensystem()
    outside = np.sort(w[np.abs(w) > 2.0])
    assert outside.size == 2
    assert outside == pytest.approx([-4.295336646618649, 4.295336646618649], abs=1e-6)


def test_bound_states_absent_below_threshold():
    assert bound_state_energies(1.2) is None
    w, _ = build_hamiltonian(LatticeSpec(2000, delta=1.2)).eigensystem()
    assert np.max(np.abs(w)) - 2.0 < 1e-4  # band-edge gap closes
    assert bound_state_energies(math.sqrt(2.0)) is None
    assert bound_state_energies(0.5) is None


def test_oscillation_period_matches_pi_over_omega():
    taus = np.linspace(0.0, 4.0, 4001)
    p0 = np.abs(propagation_c0(4.17, taus)) ** 2
    peaks = [
        taus[i]
        for i in range(1, len(taus) - 1)
        if p0[i] > p0[i - 1] and p0[i] > p0[i + 1]
    ]
    spacing = float(np.mean(np.diff(peaks)))
    omega = regime_params(4.17).omega
    assert spacing == pytest.approx(math.pi / omega, rel=0.02)


def test_zeno_limit_slope():
    # delta = 0.1: ln|c0|^2 decays with slope -2*Omega over tau in [5, 20]
    taus = np.linspace(5.0, 20.0, 151)
    grid = TimeGrid(taus)
    tr = propagate(build_hamiltonian(LatticeSpec(2000, delta=0.1)), initial_state(2000), grid)
    lnp = np.log(np.abs(tr.amplitudes[:, 0]) ** 2)
    slope = float(np.polyfit(taus, lnp, 1)[0])
    omega = regime_params(0.1).omega
    assert slope == pytest.approx(-2.0 * omega, rel=0.05)
