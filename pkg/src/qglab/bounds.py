"""Transcendental limit equations and closed-form eigenvalue bound constants.

Every limit equation handled here has the shape

    cos(theta * w) = c * w * sin(theta * w),        theta > 0, c >= 0,

whose left-minus-right side F(w) starts at F(0+) = 1, is strictly
decreasing on (0, pi/(2*theta)], and satisfies F(pi/(2*theta)) <= 0.  The
smallest positive root therefore lies in that bracket and bisection is
unconditionally convergent.  The tags ("thm1", "thm2", "star", "wentzell",
"conjecture") name the parameter families wired to the CLI.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class BoundsError(ValueError):
    """Invalid parameters for a bound or limit equation."""


@dataclass(frozen=True)
class OmegaResult:
    omega: float
    omega_sq: float
    tag: str
    residual: float
    bracket: tuple[float, float]
    theta: float
    mass: float  # the coefficient c in cos(theta w) = c w sin(theta w)

    def defining_value(self, w: float) -> float:
        return math.cos(self.theta * w) - self.mass * w * math.sin(self.theta * w)


def _f(theta: float, c: float, w: float) -> float:
    return math.cos(theta * w) - c * w * math.sin(theta * w)


def smallest_root_bisect(theta: float, c: float) -> tuple[float, tuple[float, float]]:
    """Smallest positive root of cos(theta w) - c w sin(theta w) by bisection."""
    hi = math.pi / (2.0 * theta)
    if c == 0.0:
        return hi, (hi, hi)
    lo = 0.0
    bracket = (lo, hi)
    f_hi = _f(theta, c, hi)
    if f_hi > 0.0:  # cannot happen analytically; guard against rounding
        raise BoundsError("no sign change on the analytic bracket")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if _f(theta, c, mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi), bracket


def smallest_root_golden(theta: float, c: float) -> float:
    """Same root located independently by golden-section minimisation of
    |F| on the analytic bracket; |F| is V-shaped there since F is strictly
    monotone."""
    hi = math.pi / (2.0 * theta)
    if c == 0.0:
        return hi
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = 0.0, hi
    x1 = b - invphi * (b - a)
    x2 = a + invphi * (b - a)
    f1, f2 = abs(_f(theta, c, x1)), abs(_f(theta, c, x2))
    for _ in range(200):
        if b - a < 1e-15 * (1.0 + a):
            break
        if f1 < f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - invphi * (b - a)
            f1 = abs(_f(theta, c, x1))
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + invphi * (b - a)
            f2 = abs(_f(theta, c, x2))
    return 0.5 * (a + b)


def _no_earlier_sign_change(theta: float, c: float, w: float, samples: int = 256) -> bool:
    """Numerically confirm F > 0 on (0, w - 1e-9)."""
    upper = w - 1e-9
    if upper <= 0:
        return True
    ws = np.linspace(upper / samples, upper, samples)
    vals = np.cos(theta * ws) - c * ws * np.sin(theta * ws)
    return bool(np.all(vals > 0.0))


def _solve(tag: str, theta: float, c: float) -> OmegaResult:
    if theta <= 0:
        raise BoundsError("theta must be positive")
    if c < 0:
        raise BoundsError("mass coefficient must be nonnegative")
    w, bracket = smallest_root_bisect(theta, c)
    residual = abs(_f(theta, c, w))
    if residual > 1e-12 * (1.0 + w):
        raise BoundsError(f"root residual {residual} too large for tag {tag}")
    if not _no_earlier_sign_change(theta, c, w):
        raise BoundsError(f"earlier sign change detected for tag {tag}")
    return OmegaResult(w, w * w, tag, residual, bracket, theta, c)


# ---------------------------------------------------------------------------
# Named parameter families
# ---------------------------------------------------------------------------


def gamma(L: float, D: float, k: int, beta: int) -> float:
    """Reduced length-per-star parameter; positive values are required by
    the higher-eigenvalue bound.  Negative values are returned, not raised,
    so callers can gate on the hypothesis."""
    if L <= 0 or D <= 0 or k < 1 or beta < 0:
        raise BoundsError("need L > 0, D > 0, k >= 1, beta >= 0")
    if k > beta:
        return L / (k - beta) - D / 2.0
    return L / k - D / 2.0


def omega_spectral_gap(L: float, D: float) -> OmegaResult:
    """Root of cos(wD/2) = (w(L-D)/2) sin(wD/2): the sharp spectral-gap
    lower bound for graphs of total length L and diameter D < L."""
    if not 0 < D < L:
        raise BoundsError(f"need 0 < D < L, got D={D}, L={L}")
    return _solve("thm1", D / 2.0, (L - D) / 2.0)


def omega_higher(L: float, D: float, k: int, beta: int) -> OmegaResult:
    """Root of cos(wD/2) = w*gamma*sin(wD/2) for the k-th eigenvalue bound;
    requires gamma(L, D, k, beta) > 0."""
    if not 0 < D < L:
        raise BoundsError(f"need 0 < D < L, got D={D}, L={L}")
    gam = gamma(L, D, k, beta)
    if gam <= 0:
        raise BoundsError(f"gamma = {gam} <= 0: hypothesis violated")
    return _solve("thm2", D / 2.0, gam)


def omega_star_limit(L: float, D: float) -> OmegaResult:
    """Root of cos(wD) = w(L-D) sin(wD): the n -> infinity limit of the
    star family's first Dirichlet eigenvalue.  At D = L the root is exactly
    pi/(2D)."""
    if not 0 < D <= L:
        raise BoundsError(f"need 0 < D <= L, got D={D}, L={L}")
    return _solve("star", D, L - D)


def omega_point_mass(D: float, m: float) -> OmegaResult:
    """Smallest positive eigenvalue (square root) of an interval (0, D)
    with a Dirichlet end at 0 and a concentrated point mass m at D.

    With m = L - D this coincides with ``omega_star_limit(L, D)``; the mass
    is an explicit parameter because the two printed variants of the
    endpoint condition differ by a factor of 2 in it (see
    ``discrepancy_report``).
    """
    if D <= 0:
        raise BoundsError("need D > 0")
    if m < 0:
        raise BoundsError("need m >= 0")
    return _solve("wentzell", D, m)


def omega_conjectured(L: float, D: float, k: int) -> OmegaResult:
    """Root of cos(wD/2) = w(L/k - D/2) sin(wD/2): the conjectured bound
    for any topology; requires L/k > D/2."""
    if L <= 0 or D <= 0 or k < 1:
        raise BoundsError("need positive L, D and k >= 1")
    mass = L / k - D / 2.0
    if mass <= 0:
        raise BoundsError(f"L/k - D/2 = {mass} <= 0: hypothesis violated")
    return _solve("conjecture", D / 2.0, mass)


def omega_star_derivative_in_D(L: float, D: float) -> float:
    """Closed-form dw/dD along the star limit equation at fixed L; strictly
    negative for D < L."""
    w = omega_star_limit(L, D).omega
    return -(w**3) * (L - D) ** 2 / (L + w * w * (L - D) ** 2 * D)


# ---------------------------------------------------------------------------
# Closed-form constants
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LabeledConstant:
    name: str
    value: float
    provenance: str  # "printed" or "corrected-candidate"


def closed_form_bounds(tag: str, **params: float) -> list[LabeledConstant]:
    """Closed-form constants attached to the named bounds.

    Where a printed constant fails numerical spot-checks, both the printed
    value and a corrected candidate are returned; callers choose explicitly.
    """
    if tag == "nicaise":
        L = params["L"]
        return [LabeledConstant("interval_gap", math.pi**2 / L**2, "printed")]
    if tag == "friedlander":
        L, k = params["L"], int(params["k"])
        return [
            LabeledConstant("star_lower", math.pi**2 * (k - 1) ** 2 / L**2, "printed"),
            LabeledConstant(
                "star_lower", math.pi**2 * k**2 / (4 * L**2), "corrected-candidate"
            ),
        ]
    if tag == "neig2":
        L, D = params["L"], params["D"]
        return [
            LabeledConstant("omega_sq_lower", 1.0 / (L * D), "printed"),
            LabeledConstant("omega_sq_upper", 12.0 / (L * D), "printed"),
        ]
    if tag == "neigk":
        L, D = params["L"], params["D"]
        gam = gamma(L, D, int(params["k"]), int(params["beta"]))
        out = [
            LabeledConstant(
                "omega_sq_lower", 2.0 / (D * gam + D * D / 2.0), "printed"
            )
        ]
        denom = D * gam - D * D / 6.0
        if denom > 0:
            out.append(LabeledConstant("omega_sq_upper", 2.0 / denom, "printed"))
        return out
    if tag == "prop14":
        L, D = params["L"], params["D"]
        out = [
            LabeledConstant("omega_sq_lower", 4.0 / (L * D - D * D / 2.0), "printed"),
            LabeledConstant("omega_sq_upper", 48.0 / (3 * L * D - 2 * D * D), "printed"),
            # same formulas read against the doubled graph (2L, 2D)
            LabeledConstant(
                "omega_sq_lower", 2.0 / (2 * L * D - D * D), "corrected-candidate"
            ),
            LabeledConstant(
                "omega_sq_upper", 12.0 / (3 * L * D - 2 * D * D), "corrected-candidate"
            ),
        ]
        return out
    raise BoundsError(f"unknown bound tag {tag!r}")
