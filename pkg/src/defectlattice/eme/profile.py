"""Refractive-index landscapes: single Ricker-wavelet guides and arrays of them.

A femtosecond-written guide is modeled as the 2D Ricker ("Mexican hat")
profile

    n(x, y) = dn * (1 - 2 x'^2/sx^2 - 2 y'^2/sy^2) * exp(-2 x'^2/sx^2 - 2 y'^2/sy^2) + n0

whose x-direction minima sit exactly at x' = +-sx (same for y), so the
width parameters are the minima-to-peak distances.  Arrays superpose the
index *increments* of identical guides at the given centers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import GeometryError, InvalidSpecError
from .grid import Field, TransverseGrid


@dataclass(frozen=True)
class RickerParams:
    """Peak contrast dn over substrate n0, widths (um) along x and y."""

    delta_n: float
    sigma_x: float
    sigma_y: float
    n0: float

    def __post_init__(self):
        if not self.delta_n > 0:
            raise InvalidSpecError("delta_n must be > 0")
        if not (self.sigma_x > 0 and self.sigma_y > 0):
            raise InvalidSpecError("sigma_x and sigma_y must be > 0")


@dataclass(frozen=True)
class IndexProfile:
    """Index map on a grid; dips are bounded by the Ricker ring minimum."""

    grid: TransverseGrid
    n: np.ndarray
    n0: float

    def __post_init__(self):
        n = np.asarray(self.n, dtype=float)
        object.__setattr__(self, "n", n)
        if n.shape != (self.grid.ny, self.grid.nx):
            raise InvalidSpecError("index map shape does not match grid")
        if not np.all(np.isfinite(n)):
            raise InvalidSpecError("index map contains non-finite values")

    def as_field(self) -> Field:
        return Field(self.grid, self.n)


@dataclass(frozen=True)
class WaveguideGeometry:
    """Guide x-centers (um): first gap d0, all later gaps d."""

    centers: tuple[float, ...]

    def __post_init__(self):
        c = tuple(float(v) for v in self.centers)
        object.__setattr__(self, "centers", c)
        if len(c) < 1:
            raise InvalidSpecError("geometry needs at least one guide")
        if any(b <= a for a, b in zip(c, c[1:])):
            raise InvalidSpecError("guide centers must be strictly increasing")

    @property
    def n_guides(self) -> int:
        return len(self.centers)

    @staticmethod
    def from_spacings(n_guides: int, d0: float, d: float, center: float = 0.0) -> "WaveguideGeometry":
        """n_guides centers with first gap d0 and bulk gap d, centered at `center`."""
        if n_guides < 1:
            raise InvalidSpecError("n_guides must be >= 1")
        pos = [0.0]
        for i in range(1, n_guides):
            pos.append(pos[-1] + (d0 if i == 1 else d))
        mid = (pos[0] + pos[-1]) / 2.0
        return WaveguideGeometry(tuple(p - mid + center for p in pos))


def _ricker_increment(p: RickerParams, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    arg = 2.0 * x ** 2 / p.sigma_x ** 2 + 2.0 * y ** 2 / p.sigma_y ** 2
    return p.delta_n * (1.0 - arg) * np.exp(-arg)


def ricker_profile(
    p: RickerParams, grid: TransverseGrid, center: tuple[float, float] = (0.0, 0.0)
) -> IndexProfile:
    """Single-guide profile centered at (x, y) = center."""
    X, Y = grid.mesh()
    return IndexProfile(grid, _ricker_increment(p, X - center[0], Y - center[1]) + p.n0, p.n0)


def array_profile(p: RickerParams, geom: WaveguideGeometry, grid: TransverseGrid) -> IndexProfile:
    """Superpose identical guides at geom.centers (y = 0), plus n0 once.

    Every center must clear the grid edges by >= 3 sigma_x so no guide
    core is clipped.
    """
    margin = 3.0 * p.sigma_x
    x_lo, x_hi = grid.x[0], grid.x[-1]
    for c in geom.centers:
        if c - margin < x_lo or c + margin > x_hi:
            raise GeometryError(
                f"guide at x={c} um closer than 3*sigma_x={margin} um to the grid edge"
            )
    X, Y = grid.mesh()
    n = np.full_like(X, p.n0)
    for c in geom.centers:
        n += _ricker_increment(p, X - c, Y)
    return IndexProfile(grid, n, p.n0)
