"""Single-band chain with a boundary defect: construction and exact propagation.

The chain has uniform on-site term alpha and uniform hopping beta except
for the first bond, which carries beta0 = delta * beta.  All dynamics are
computed through the full eigendecomposition of the real symmetric
tridiagonal operator, so results are exact to machine precision at any
evolution time; this module is the brute-force oracle the analytic
formulas in :mod:`defectlattice.survival` are checked against.

Internally everything is dimensionless (tau = beta * z with beta = 1);
physical couplings in 1/cm and distances in cm only enter when building
operators from a :class:`LatticeSpec` with explicit units.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import InvalidSpecError

NORM_TOL = 1e-10

# effective-decay-rate convention: probabilities at or below this are
# treated as exact zeros and emitted as missing values, never +-inf
PROB_FLOOR = 1e-30


@dataclass(frozen=True)
class LatticeSpec:
    """Chain definition: site count, bulk coupling, defect ratio, on-site term.

    beta carries 1/cm when physical units matter; delta = beta0/beta is
    dimensionless.  beta0 is always derived, never stored.
    """

    n_sites: int
    beta: float = 1.0
    delta: float = 1.0
    alpha: float = 0.0

    def __post_init__(self):
        if self.n_sites < 2:
            raise InvalidSpecError(f"n_sites must be >= 2, got {self.n_sites}")
        if not self.beta > 0:
            raise InvalidSpecError(f"beta must be > 0, got {self.beta}")
        if not self.delta > 0:
            raise InvalidSpecError(f"delta must be > 0, got {self.delta}")

    @property
    def beta0(self) -> float:
        return self.delta * self.beta


@dataclass(frozen=True)
class TimeGrid:
    """Strictly increasing dimensionless times tau = beta*z, tau[0] >= 0.

    When a beta (1/cm) is attached, ``z_cm`` recovers physical positions.
    """

    tau: np.ndarray
    beta: float | None = None

    def __post_init__(self):
        tau = np.asarray(self.tau, dtype=float)
        object.__setattr__(self, "tau", tau)
        if tau.ndim != 1 or tau.size < 1:
            raise InvalidSpecError("tau must be a 1-d array with at least one entry")
        if not np.all(np.isfinite(tau)):
            raise InvalidSpecError("tau values must be finite")
        if tau[0] < 0:
            raise InvalidSpecError("tau must start at >= 0")
        if tau.size > 1 and not np.all(np.diff(tau) > 0):
            raise InvalidSpecError("tau must be strictly increasing")

    def __len__(self) -> int:
        return self.tau.size

    @property
    def z_cm(self) -> np.ndarray:
        if self.beta is None:
            raise InvalidSpecError("no beta attached to this grid")
        return self.tau / self.beta

    @staticmethod
    def uniform(tau_max: float, n_points: int, beta: float | None = None) -> "TimeGrid":
        return TimeGrid(np.linspace(0.0, tau_max, n_points), beta=beta)


@dataclass(frozen=True)
class TridiagonalOperator:
    """Real symmetric tridiagonal operator: diagonal alpha, off-diagonal couplings."""

    diagonal: np.ndarray
    off_diagonal: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.diagonal, dtype=float)
        e = np.asarray(self.off_diagonal, dtype=float)
        object.__setattr__(self, "diagonal", d)
        object.__setattr__(self, "off_diagonal", e)
        if e.size != d.size - 1:
            raise InvalidSpecError(
                f"off_diagonal must have length n_sites-1 ({d.size - 1}), got {e.size}"
            )

    @property
    def n_sites(self) -> int:
        return self.diagonal.size

    def eigensystem(self) -> tuple[np.ndarray, np.ndarray]:
        """Eigenvalues (ascending) and orthonormal eigenvector columns."""
        try:
            return eigh_tridiagonal(self.diagonal, self.off_diagonal)
        except np.linalg.LinAlgError as exc:  # pragma: no cover - defensive
            raise InvalidSpecError(
                f"tridiagonal eigensolver failed for size {self.n_sites}: {exc}"
            ) from exc


@dataclass(frozen=True)
class AmplitudeTrace:
    """Complex site amplitudes indexed (time, site) on a TimeGrid.

    Every row is a unit-norm state (closed-system evolution); violating
    rows indicate a numerical problem and are rejected at construction.
    """

    grid: TimeGrid
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        object.__setattr__(self, "amplitudes", amps)
        if amps.ndim != 2 or amps.shape[0] != len(self.grid):
            raise InvalidSpecError(
                f"amplitudes shape {amps.shape} does not match grid length {len(self.grid)}"
            )
        norms = np.sum(np.abs(amps) ** 2, axis=1)
        worst = float(np.max(np.abs(norms - 1.0)))
        if worst > NORM_TOL:
            raise InvalidSpecError(f"row norm deviates from 1 by {worst:.3e} (> {NORM_TOL:g})")

    @property
    def n_sites(self) -> int:
        return self.amplitudes.shape[1]


def build_hamiltonian(spec: LatticeSpec) -> TridiagonalOperator:
    """Tridiagonal operator for the chain: diag all alpha, first bond delta*beta."""
    off = np.full(spec.n_sites - 1, spec.beta)
    off[0] = spec.beta0
    return TridiagonalOperator(np.full(spec.n_sites, spec.alpha), off)


def initial_state(n_sites: int) -> np.ndarray:
    """Single excitation on the first site: (1, 0, ..., 0)."""
    if n_sites < 1:
        raise InvalidSpecError(f"n_sites must be >= 1, got {n_sites}")
    state = np.zeros(n_sites, dtype=complex)
    state[0] = 1.0
    return state


def propagate(op: TridiagonalOperator, state0: np.ndarray, grid: TimeGrid) -> AmplitudeTrace:
    """Evolve state0 under exp(-i*H*tau) for every tau on the grid.

    Full eigendecomposition, so each row is exact at its tau (no stepping
    error accumulates), and the trace passes the unit-norm check at 1e-10.
    """
    state0 = np.asarray(state0, dtype=complex)
    if state0.shape != (op.n_sites,):
        raise InvalidSpecError(
            f"state has shape {state0.shape}, operator needs ({op.n_sites},)"
        )
    w, v = op.eigensystem()
    coeffs = v.T @ state0
    phases = np.exp(-1j * np.outer(grid.tau, w))
    amps = (phases * coeffs) @ v.T
    return AmplitudeTrace(grid, amps)


def site_probabilities(trace: AmplitudeTrace) -> np.ndarray:
    """|c_i|^2 per (time, site); rows sum to 1 within the trace norm check."""
    return np.abs(trace.amplitudes) ** 2


def effective_decay_rate(prob0: np.ndarray, grid: TimeGrid) -> np.ndarray:
    """-ln(p0(tau))/tau, with NaN marking points where the rate is undefined.

    Undefined at tau = 0 and wherever p0 <= 1e-30 (zeros of the survival
    probability make the log diverge); NaN is this package's in-memory
    missing-value marker, rendered as an empty CSV field on output.
    """
    prob0 = np.asarray(prob0, dtype=float)
    if prob0.shape != (len(grid),):
        raise InvalidSpecError("prob0 length must match the grid")
    out = np.full(prob0.shape, np.nan)
    ok = (grid.tau > 0) & (prob0 > PROB_FLOOR)
    out[ok] = -np.log(prob0[ok]) / grid.tau[ok]
    return out
