"""Closed forms for the two elementary integrals behind the area formula,
with quadrature oracles for each.

    I(sigma, lam, s) = int_{-pi}^{pi} (cos^2 t / sigma^2 + sin^2 t / lam^2)**s dt
    J(lam, s)        = int_1^lam r**(2s+1) (1 - r^2)**(-s) dr

For r > 1 the factor (1 - r^2)**(-s) is taken on the principal branch, so J
is complex for non-integer s.
"""
from __future__ import annotations

import cmath
import math

import numpy as np

from .errors import DomainError
from .gamma_core import gamma_ratio
from .hyp_series import hyp2f1
from .quadrature import QuadResult, integrate_1d

__all__ = [
    "theorem1_closed",
    "theorem2_closed",
    "theorem3_closed",
    "angular_integral_oracle",
    "radial_integral_oracle",
]


def _check_positive(**kw):
    for name, v in kw.items():
        if not v > 0:
            raise DomainError(f"{name} must be positive, got {v!r}")


def theorem1_closed(sigma: float, lam: float, s: float) -> float:
    """I(sigma, lam, s) = 2 pi lam / sigma**(1+2s) * 2F1(1/2, 1+s; 1; 1 - lam^2/sigma^2),
    valid for sigma >= lam > 0."""
    _check_positive(sigma=sigma, lam=lam)
    if sigma < lam:
        raise DomainError("theorem1_closed needs sigma >= lam; use theorem2_closed")
    w = 1.0 - (lam / sigma) ** 2
    return float(2 * math.pi * lam / sigma ** (1 + 2 * s) * hyp2f1(0.5, 1 + s, 1.0, w))


def theorem2_closed(sigma: float, lam: float, s: float) -> float:
    """I(sigma, lam, s) for lam >= sigma > 0 (the mirror of theorem1_closed)."""
    _check_positive(sigma=sigma, lam=lam)
    if lam < sigma:
        raise DomainError("theorem2_closed needs lam >= sigma; use theorem1_closed")
    w = 1.0 - (sigma / lam) ** 2
    return float(2 * math.pi * sigma / lam ** (1 + 2 * s) * hyp2f1(0.5, 1 + s, 1.0, w))


def theorem3_closed(lam: float, s: float):
    """J(lam, s) = lam**(2s) (1 - lam^2)**(1-s) Gamma(s-1) / (2 lam^2 Gamma(s))
    * 2F1(2, 1-s; 2-s; 1 - 1/lam^2), for lam >= 1 and s < 1.

    Integer s gives a real float; other s give the complex principal-branch
    value.  Gamma(s-1)/Gamma(s) is taken as a limit, so nonpositive integer
    s is fine.
    """
    if not lam >= 1:
        raise DomainError(f"theorem3_closed needs lam >= 1, got {lam!r}")
    if not s < 1:
        raise DomainError(f"theorem3_closed needs s < 1, got {s!r}")
    ratio = gamma_ratio(num=[s - 1], den=[s])
    w = 1.0 - 1.0 / (lam * lam)
    f = hyp2f1(2.0, 1 - s, 2 - s, w)
    if float(s).is_integer():
        k = int(1 - s)  # >= 1
        return float(lam ** (2 * s) * (1 - lam * lam) ** k * ratio / (2 * lam * lam) * f)
    power = complex(1 - lam * lam) ** (1 - s) if lam > 1 else 0j
    return complex(lam ** (2 * s) * power * ratio / (2 * lam * lam) * f)


def angular_integral_oracle(sigma: float, lam: float, s: float, tol: float = 1e-12) -> QuadResult:
    """I(sigma, lam, s) by adaptive quadrature (4x the first quadrant)."""
    _check_positive(sigma=sigma, lam=lam)

    def f(t):
        return (np.cos(t) ** 2 / sigma ** 2 + np.sin(t) ** 2 / lam ** 2) ** s

    r = integrate_1d(f, 0.0, 0.5 * math.pi, tol=tol)
    return QuadResult(4 * r.value, 4 * r.est_error, r.evaluations)


def radial_integral_oracle(lam: float, s: float, tol: float = 1e-12) -> QuadResult:
    """J(lam, s) by quadrature in v with r = cosh v, which removes the
    (r - 1)**(-s) endpoint behaviour for s < 1/2 and softens it otherwise.

    Uses the principal branch of (-sinh^2 v)**(-s); the result is complex
    unless s is an integer.
    """
    if not lam >= 1:
        raise DomainError(f"radial_integral_oracle needs lam >= 1, got {lam!r}")
    if not s < 1:
        raise DomainError(f"radial_integral_oracle needs s < 1, got {s!r}")
    top = math.acosh(lam)
    if float(s).is_integer():
        k = int(-s)

        def f(v):
            return np.cosh(v) ** (2 * s + 1) * (-np.sinh(v) ** 2) ** k * np.sinh(v)
    else:
        phase = cmath.exp(-1j * math.pi * s)  # (-1)**(-s) on the principal branch

        def f(v):
            sh = np.sinh(v)
            return phase * np.cosh(v) ** (2 * s + 1) * sh ** (1 - 2 * s)
    return integrate_1d(f, 0.0, top, tol=tol)
