"""Survival amplitude c0(tau) of the edge site on the semi-infinite chain.

Three equivalent routes are provided, all in the dimensionless convention
tau = beta*z with beta = 1:

* the piecewise closed forms (exponential/oscillatory leading term plus
  Bessel correction series), in both a ``printed`` and a ``reconciled``
  variant -- see below;
* the contour-integral representation, evaluated as two analytic pole
  residues plus a small-circle trapezoid quadrature around the essential
  singularity at the origin;
* :func:`survival_series`, a single resummed Bessel series

      c0(tau) = J_0(2 tau) + sum_{k>=1} (c^k + c^{k-1}) J_{2k}(2 tau),
      c = 1 - delta^2,

  valid in every regime, used internally and as the numerically best
  conditioned evaluator.

printed vs reconciled
---------------------
The published correction-term formulas do not satisfy c0(0) = 1 as
transcribed, and a finite-chain propagation oracle pins down two exact
repairs:

* sub-critical branch: the leading ``2*J_0(2 tau)`` term must read
  ``J_0(2 tau)`` (the literal form evaluates to the exact amplitude plus
  one spurious J_0, hence c0(0) = 2 and a spurious 1 + J_0(2 tau) limit
  for delta -> 0);
* super-critical branch: the weight exponent in the double sum must read
  ``gamma^(2n-2l)`` instead of ``gamma^(2l-2n)`` (equivalently the series
  resums to sum_k (-1)^k J_{2k}(2 tau) / gamma^(2k), with damped rather
  than growing weights -- this is also what makes the correction term
  vanish for delta >> 1);
* contour representation: the pole pair sits at the roots of
  ``z^2 + (1 - delta^2)``, i.e. at +-i*gamma only for delta < 1 but at
  the real points +-gamma for delta > 1 (the literal +-i*gamma reading
  produces runaway cosh terms there).

Both variants are kept: ``reconciled`` (default) matches the propagation
oracle to ~1e-10; ``printed`` reproduces the literal transcription and
its documented failures.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .bessel import bessel_j, bessel_j_array
from .errors import InvalidSpecError, QuadratureError, SeriesDivergenceError

#: below this distance from delta = 1 every evaluator routes to the
#: critical branch (gamma -> 0 makes both correction series singular)
CRITICAL_WINDOW = 1e-6

_VARIANTS = ("reconciled", "printed")


@dataclass(frozen=True)
class SeriesTolerance:
    """Truncation policy for the correction series."""

    abs_tol: float = 1e-12
    max_terms: int = 10 ** 6

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise InvalidSpecError("abs_tol must be > 0")
        if self.max_terms < 1:
            raise InvalidSpecError("max_terms must be >= 1")


DEFAULT_TOL = SeriesTolerance()


@dataclass(frozen=True)
class RegimeParams:
    """Derived constants gamma, A, Omega and the regime tag for a given delta.

    amp (A) and omega are None exactly at delta = 1, where the closed form
    degenerates to the critical Bessel branch.
    """

    delta: float
    gamma: float
    amp: float | None
    omega: float | None
    regime: str


def regime_params(delta: float) -> RegimeParams:
    """gamma = sqrt|1-delta^2|, A = (delta^2-2)/(delta^2-1), Omega = delta^2/gamma."""
    if not (isinstance(delta, (int, float)) and math.isfinite(delta) and delta > 0):
        raise InvalidSpecError(f"delta must be a finite number > 0, got {delta!r}")
    d2 = delta * delta
    gamma = math.sqrt(abs(1.0 - d2))
    if delta == 1.0:
        return RegimeParams(delta, 0.0, None, None, "critical")
    amp = (d2 - 2.0) / (d2 - 1.0)
    omega = d2 / gamma
    regime = "sub_critical" if delta < 1.0 else "super_critical"
    return RegimeParams(delta, gamma, amp, omega, regime)


def c0_critical(tau: float) -> float:
    """Critical branch J_1(2 tau)/tau, with the exact limit 1 at tau = 0."""
    if tau < 0:
        raise InvalidSpecError("tau must be >= 0")
    if tau == 0.0:
        return 1.0
    return bessel_j(1, 2.0 * tau) / tau


def _check_variant(variant: str):
    if variant not in _VARIANTS:
        raise InvalidSpecError(f"variant must be one of {_VARIANTS}, got {variant!r}")


def s_less(
    tau: float,
    gamma: float,
    tol: SeriesTolerance = DEFAULT_TOL,
    variant: str = "printed",
) -> float:
    """Correction term for the sub-critical branch (0 < gamma < 1).

    Evaluates the bilateral sum  sum_l J_l(2 tau)/gamma^l  and the even
    sum  sum_{l>=0} J_{2l}(2 tau)/gamma^(2l), combines them with the
    (1 + 1/gamma^2) prefactor, and adds the leading Bessel term:
    2*J_0(2 tau) as printed, J_0(2 tau) reconciled.

    The bilateral sum is truncated symmetrically; both sums stop once the
    running term magnitude stays below abs_tol for 5 consecutive orders.
    For gamma -> 0 the 1/gamma^l weights outgrow the Bessel decay within
    the term cap and a SeriesDivergenceError is raised.
    """
    _check_variant(variant)
    if not 0.0 < gamma < 1.0:
        raise InvalidSpecError(f"s_less needs 0 < gamma < 1, got {gamma}")
    if tau < 0:
        raise InvalidSpecError("tau must be >= 0")

    x = 2.0 * tau
    l_cap = int(min(tol.max_terms, 12 * tau + 80 + 40.0 / gamma))
    js = bessel_j_array(l_cap, x)

    j0 = js[0]
    bilateral = j0  # l = 0 term
    even = j0
    quiet_bi = quiet_ev = 0
    done_bi = done_ev = False
    inv_g = 1.0 / gamma
    pow_p = 1.0  # gamma^l
    pow_m = 1.0  # gamma^-l
    last = 0.0
    for l in range(1, l_cap + 1):
        pow_p *= gamma
        pow_m *= inv_g
        if pow_m > 1e280:
            raise SeriesDivergenceError(
                f"s_less weights overflow at order {l} (gamma={gamma})", last_term=last
            )
        if not done_bi:
            sign = -1.0 if (l % 2) else 1.0
            term = js[l] * (pow_m + sign * pow_p)  # +l and -l orders paired
            bilateral += term
            last = abs(term)
            quiet_bi = quiet_bi + 1 if last < tol.abs_tol else 0
            done_bi = quiet_bi >= 5
        if not done_ev and (l % 2) == 0:
            term = js[l] * pow_m
            even += term
            quiet_ev = quiet_ev + 1 if abs(term) < tol.abs_tol else 0
            done_ev = quiet_ev >= 5
        if done_bi and done_ev:
            break
    else:
        raise SeriesDivergenceError(
            f"s_less did not converge within {l_cap} orders (gamma={gamma}, tau={tau})",
            last_term=last,
        )

    g2 = gamma * gamma
    core = 0.5 * bilateral - even
    lead = 2.0 * j0 if variant == "printed" else j0
    return lead + (1.0 + 1.0 / g2) * core


def s_greater(
    tau: float,
    gamma: float,
    tol: SeriesTolerance = DEFAULT_TOL,
    variant: str = "printed",
) -> float:
    """Correction term for the super-critical branch (gamma > 0).

    Double sum over n with inner orders l = n..2n, each term
    (i tau)^(2n) / (l! (2n-l)!) carrying a gamma weight: exponent
    2l-2n as printed, 2n-2l reconciled.  (i tau)^(2n) is evaluated as
    (-1)^n tau^(2n) and the factorial ratios are built in log space.
    Truncation: stop once the whole inner-sum contribution of an index n
    stays below abs_tol for 3 consecutive n past the series hump.
    """
    _check_variant(variant)
    if not gamma > 0:
        raise InvalidSpecError(f"s_greater needs gamma > 0, got {gamma}")
    if tau < 0:
        raise InvalidSpecError("tau must be >= 0")

    g2 = gamma * gamma
    j0 = bessel_j(0, 2.0 * tau)
    if tau == 0.0:
        return j0 - (1.0 - 1.0 / g2)  # inner sum is exactly 1 at n = 0

    ln_tau = math.log(tau)
    ln_g = math.log(gamma)
    exp_sign = 1.0 if variant == "printed" else -1.0
    # contributions rise until n ~ tau * max(gamma, 1/gamma), then die
    hump = tau * max(gamma, 1.0 / gamma, 1.0)
    total = 0.0
    quiet = 0
    n = 0
    while n < tol.max_terms:
        inner = 0.0
        ln_t2n = 2.0 * n * ln_tau
        for l in range(n, 2 * n + 1):
            ln_mag = (
                ln_t2n
                - math.lgamma(l + 1)
                - math.lgamma(2 * n - l + 1)
                + exp_sign * (2.0 * l - 2.0 * n) * ln_g
            )
            if ln_mag > 690.0:
                raise SeriesDivergenceError(
                    f"s_greater term overflow at n={n}, l={l} (gamma={gamma})",
                    last_term=math.inf,
                )
            inner += math.exp(ln_mag)
        contrib = (1.0 if (n % 2) == 0 else -1.0) * inner
        total += contrib
        if n > hump:
            quiet = quiet + 1 if abs(contrib) < tol.abs_tol else 0
            if quiet >= 3:
                break
        n += 1
    else:
        raise SeriesDivergenceError(
            f"s_greater did not converge within {tol.max_terms} terms "
            f"(gamma={gamma}, tau={tau})",
            last_term=abs(contrib),
        )
    return j0 - (1.0 - 1.0 / g2) * total


def survival_series(delta: float, tau: float, tol: SeriesTolerance = DEFAULT_TOL) -> float:
    """Regime-independent resummed series for c0(tau); see module docstring.

    Converges for every delta > 0 (the Bessel tail decays faster than any
    geometric weight grows); for large delta the intermediate terms are
    large and ~1e-12 absolute accuracy is the practical floor.
    """
    if not delta > 0:
        raise InvalidSpecError(f"delta must be > 0, got {delta}")
    if tau < 0:
        raise InvalidSpecError("tau must be >= 0")
    x = 2.0 * tau
    c = 1.0 - delta * delta
    l_cap = int(min(tol.max_terms, 2 * tau * max(1.0, abs(c)) + 12 * tau + 60))
    js = bessel_j_array(2 * l_cap, x)
    total = js[0]
    ck_prev = 1.0  # c^(k-1)
    quiet = 0
    for k in range(1, l_cap + 1):
        ck = ck_prev * c
        term = (ck + ck_prev) * js[2 * k]
        total += term
        ck_prev = ck
        if 2 * k > x:
            quiet = quiet + 1 if abs(term) < tol.abs_tol else 0
            if quiet >= 3:
                break
    return total


def c0_closed_form(
    delta: float,
    tau: float,
    tol: SeriesTolerance = DEFAULT_TOL,
    mode: str = "reconciled",
) -> complex:
    """Piecewise closed form for c0(tau), dispatching on the regime.

    delta < 1:  (A/2) exp(-Omega tau) + S_<(tau)
    delta = 1:  J_1(2 tau)/tau            (also within 1e-6 of delta = 1)
    delta > 1:  A cos(Omega tau) + S_>(tau)

    mode="reconciled" (default) applies the transcription repairs and
    matches the propagation oracle; mode="printed" evaluates the literal
    formulas (sub-critical branch then returns oracle + J_0(2 tau), so
    c0(0) = 2).  The result is real for this model; it is returned as
    complex to keep the amplitude interface uniform.
    """
    _check_variant(mode)
    params = regime_params(delta)
    if abs(delta - 1.0) < CRITICAL_WINDOW:
        return complex(c0_critical(tau))
    if delta < 1.0:
        val = params.amp / 2.0 * math.exp(-params.omega * tau) + s_less(
            tau, params.gamma, tol, variant=mode
        )
    else:
        val = params.amp * math.cos(params.omega * tau) + s_greater(
            tau, params.gamma, tol, variant=mode
        )
    return complex(val)


def _pole_pair(delta: float, convention: str) -> list[complex]:
    """Poles of the contour integrand: roots of z^2 + (1 - delta^2).

    'printed' reads the denominator as z^2 + gamma^2 with
    gamma = sqrt|1-delta^2| (poles +-i*gamma in both regimes);
    'reconciled' keeps the sign of 1 - delta^2, which moves the poles to
    the real axis (+-gamma) for delta > 1.
    """
    g = math.sqrt(abs(1.0 - delta * delta))
    if convention == "printed" or delta < 1.0:
        return [1j * g, -1j * g]
    return [complex(g), complex(-g)]


def c0_contour(
    delta: float,
    tau: float,
    n_points_start: int = 64,
    pole_convention: str = "reconciled",
) -> complex:
    """Contour-integral evaluation of c0(tau): pole residues + origin quadrature.

    The two simple poles contribute analytically,
    Res = (z_p^2 - 1)/(2 z_p^2) * exp(i tau (z_p + 1/z_p)); the essential
    singularity at z = 0 is integrated by the periodic trapezoid rule on
    a circle of radius r0 = min(1, 0.9*gamma) (inside the poles), with the
    point count doubled until two refinements agree within 1e-10.  Keeping
    the circle radius at or below 1 bounds |exp(i tau (z + 1/z))| by
    exp(tau (1/r0 - r0)) and keeps the quadrature well conditioned; one
    large circle past the poles would lose ~exp(tau(r - 1/r)) digits.
    """
    if pole_convention not in ("printed", "reconciled"):
        raise InvalidSpecError(f"unknown pole convention {pole_convention!r}")
    if not delta > 0:
        raise InvalidSpecError(f"delta must be > 0, got {delta}")
    if abs(delta - 1.0) < CRITICAL_WINDOW:
        raise InvalidSpecError(
            "contour evaluation degenerates at delta = 1 (use the critical branch)"
        )
    if tau < 0:
        raise InvalidSpecError("tau must be >= 0")
    if n_points_start < 4:
        raise InvalidSpecError("n_points_start must be >= 4")

    d2 = delta * delta
    gamma = math.sqrt(abs(1.0 - d2))
    poles = _pole_pair(delta, pole_convention)
    # denominator quadratic consistent with the chosen pole pair
    quad_c = gamma * gamma if pole_convention == "printed" else (1.0 - d2)

    total = 0j
    for zp in poles:
        res = (zp * zp - 1.0) / (2.0 * zp * zp)
        total += res * cmath.exp(1j * tau * (zp + 1.0 / zp))

    r0 = min(1.0, 0.9 * gamma)
    n = int(n_points_start)
    prev = None
    for _ in range(20):
        theta = 2.0 * np.pi * np.arange(n) / n
        z = r0 * np.exp(1j * theta)
        f = np.exp(1j * tau * (z + 1.0 / z)) * (z * z - 1.0) / (z * (z * z + quad_c))
        val = complex(np.sum(f * z) / n)  # (1/2*pi*i) * closed integral
        if prev is not None and abs(val - prev) < 1e-10:
            return total + val
        prev = val
        n *= 2
    raise QuadratureError(
        f"origin quadrature did not converge after 20 doublings "
        f"(delta={delta}, tau={tau})",
        achieved=abs(val - prev),
    )


#: bound states require delta^2 - 2 > this margin (delta > sqrt(2);
#: exactly at threshold the ansatz decay factor is not normalizable)
_BOUND_MARGIN = 1e-12


def bound_state_energies(delta: float) -> tuple[float, float] | None:
    """(+Omega, -Omega) in units of beta for delta > sqrt(2), else None.

    The exponential-ansatz solution of the semi-infinite chain has decay
    factor 1/gamma per site, normalizable only for gamma > 1; the pair of
    discrete energies +-delta^2/sqrt(delta^2-1) then sits outside the
    band [-2, 2].
    """
    if not delta > 0:
        raise InvalidSpecError(f"delta must be > 0, got {delta}")
    d2 = delta * delta
    if d2 - 2.0 <= _BOUND_MARGIN:
        return None
    omega = d2 / math.sqrt(d2 - 1.0)
    return (omega, -omega)
