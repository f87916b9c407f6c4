"""Index inversion and Ricker fitting on synthetic modes."""

import numpy as np
import pytest

from defectlattice import InvalidSpecError, SigmaExtractionError
from defectlattice.eme import (
    Field,
    RickerParams,
    TransverseGrid,
    fit_ricker,
    implied_n_eff,
    reconstruct_index,
    ricker_profile,
    solve_modes,
)

LAM = 0.633
N0 = 1.457
TRUE = RickerParams(3e-3, 4.0, 4.0, N0)
GRID = TransverseGrid.centered(72.0, 72.0, 0.25, 0.25)


@pytest.fixture(scope="module")
def synthetic():
    ms = solve_modes(ricker_profile(TRUE, GRID), LAM, 1)
    return ms.modes[0], float(ms.n_eff[0])


def test_roundtrip_is_exact_on_mask(synthetic):
    mode, n_eff = synthetic
    rec = reconstruct_index(mode, n_eff, LAM, intensity_floor=0.01)
    truth = ricker_profile(TRUE, GRID).n
    err = np.nanmax(np.abs(np.where(rec.mask, rec.n - truth, np.nan)))
    assert err < 1e-9  # same stencil both ways: eigensolver accuracy
    assert rec.negative_count == 0


def test_peak_value_within_one_percent(synthetic):
    mode, n_eff = synthetic
    rec = reconstruct_index(mode, n_eff, LAM)
    peak = np.nanmax(rec.n)
    assert peak == pytest.approx(N0 + TRUE.delta_n, rel=1e-2)


def test_full_floor_masks_everything(synthetic):
    mode, n_eff = synthetic
    rec = reconstruct_index(mode, n_eff, LAM, intensity_floor=1.0)
    assert not rec.mask.any()
    assert np.isnan(rec.n).all()


def test_floor_validation(synthetic):
    mode, n_eff = synthetic
    with pytest.raises(InvalidSpecError):
        reconstruct_index(mode, n_eff, LAM, intensity_floor=0.0)


def test_implied_n_eff_matches_solver(synthetic):
    mode, n_eff = synthetic
    est = implied_n_eff(mode, LAM, N0)
    assert est == pytest.approx(n_eff, abs=2e-5)


def camera_image(mode_values: np.ndarray) -> tuple[TransverseGrid, np.ndarray]:
    """Resample the fine synthetic mode like a camera: 1 um pixels, 40 um field.

    The fine 0.25 um solver grid oversamples the pixel-level inversion;
    at camera sampling the discrete Laplacian of 1%-noise stays small
    against the index dip and the published-style noise robustness holds.
    """
    g1 = TransverseGrid.centered(40.0, 40.0, 1.0, 1.0)
    vals = mode_values[64:-64:4, 64:-64:4]
    assert vals.shape == (g1.ny, g1.nx)
    return g1, vals


def test_noisy_minima_localization(synthetic, rng):
    # 1% additive noise, 20 seeds: the sigma estimate from the masked
    # reconstruction stays within 10% of the true width (median over seeds)
    from defectlattice.eme.reconstruct import _minima_distance

    mode, n_eff = synthetic
    g1, clean = camera_image(mode.values)
    peak = clean.max()
    estimates = []
    for _ in range(20):
        noisy = np.clip(clean + rng.normal(0.0, 0.01 * peak, clean.shape), 0.0, None)
        rec = reconstruct_index(Field(g1, noisy), n_eff, LAM, intensity_floor=0.05)
        iy, ix = np.unravel_index(int(np.argmax(noisy)), noisy.shape)
        try:
            estimates.append(_minima_distance(g1.x, rec.n[iy, :], ix))
        except SigmaExtractionError:
            continue
    assert len(estimates) >= 15
    assert np.median(estimates) == pytest.approx(TRUE.sigma_x, rel=0.10)


def test_fit_recovers_parameters(synthetic):
    mode, _ = synthetic
    params, fidelity = fit_ricker(mode, LAM, N0)
    assert params.delta_n == pytest.approx(TRUE.delta_n, rel=0.02)
    assert params.sigma_x == pytest.approx(TRUE.sigma_x, rel=0.02)
    assert params.sigma_y == pytest.approx(TRUE.sigma_y, rel=0.02)
    assert fidelity > 0.999


def test_fit_residual_pointwise(synthetic):
    # regenerate the fitted mode and compare against the input image
    mode, _ = synthetic
    params, _ = fit_ricker(mode, LAM, N0)
    refit = solve_modes(ricker_profile(params, GRID), LAM, 1).modes[0]
    resid = np.max(np.abs(refit.values - mode.values)) / mode.values.max()
    assert resid < 2.4e-4  # quoted reconstruction-quality bound
