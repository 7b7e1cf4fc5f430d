"""Gamma function machinery: log-Gamma, Pochhammer symbols, Gamma ratios.

``log_gamma`` uses the Lanczos approximation (g = 7, nine terms) for
|z| < 10 and the Stirling series (eight Bernoulli terms) beyond, both on the
half-plane Re(z) >= 1/2, with the reflection formula elsewhere.  Ratios of
Gamma functions whose arguments sit on poles are evaluated as limits:
near x = -k one has Gamma(x + eps) ~ (-1)**k / (k! eps), so coincident poles
cancel analytically instead of by dividing two huge floats.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DomainError, PoleError

__all__ = [
    "LANCZOS_G",
    "LANCZOS_COEFFICIENTS",
    "STIRLING_COEFFICIENTS",
    "GammaRatioSpec",
    "log_gamma",
    "gamma",
    "nonpositive_integer",
    "pochhammer",
    "gamma_ratio",
    "wallis_integral",
]

LANCZOS_G = 7.0
LANCZOS_COEFFICIENTS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

# B_{2k} / (2k (2k-1)), k = 1..8
STIRLING_COEFFICIENTS = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
)
_STIRLING_RADIUS = 10.0

_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
_LOG_PI = math.log(math.pi)
# Products above this length go through log-Gamma instead of a direct loop.
_DIRECT_PRODUCT_LIMIT = 64


def nonpositive_integer(x, atol: float = 0.0) -> int | None:
    """Return k if ``x == -k`` for an integer k >= 0, else None."""
    x = complex(x)
    if x.imag != 0.0 or x.real > 0.5:
        return None
    k = round(-x.real)
    if abs(x.real + k) <= atol:
        return int(k)
    return None


def _lanczos_log(z: np.ndarray) -> np.ndarray:
    # valid for Re(z) >= 1/2
    zm = z - 1.0
    acc = np.full_like(zm, LANCZOS_COEFFICIENTS[0])
    for i, c in enumerate(LANCZOS_COEFFICIENTS[1:], start=1):
        acc = acc + c / (zm + i)
    t = zm + LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (zm + 0.5) * np.log(t) - t + np.log(acc)


def _stirling_log(z: np.ndarray) -> np.ndarray:
    # valid for |z| >= 10, Re(z) > 0
    zi = 1.0 / z
    z2 = zi * zi
    acc = np.zeros_like(z)
    for c in reversed(STIRLING_COEFFICIENTS):
        acc = acc * z2 + c
    return (z - 0.5) * np.log(z) - z + _HALF_LOG_2PI + acc * zi


def _log_gamma_right(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    big = np.abs(z) >= _STIRLING_RADIUS
    if np.any(big):
        out[big] = _stirling_log(z[big])
    if not np.all(big):
        out[~big] = _lanczos_log(z[~big])
    return out


def _log_sin_pi(z: np.ndarray) -> np.ndarray:
    """log(sin(pi z)) modulo 2 pi i, without overflow for large |Im z|."""
    # sin(pi z) = (-1)^k sin(pi (z - k)); reducing first keeps pi*z exact-ish
    k = np.round(z.real)
    w = np.pi * (z - k)
    out = np.empty_like(w)
    up = w.imag > 0
    lo = ~up
    # sin w = e^{-iw} (e^{2iw} - 1) / (2i), small exponential when Im w > 0;
    # expm1 keeps the digits when |w| is tiny
    wu = w[up]
    out[up] = -1j * wu + np.log(np.expm1(2j * wu) / 2j)
    wl = w[lo]
    out[lo] = 1j * wl + np.log(-np.expm1(-2j * wl) / 2j)
    return out + 1j * np.pi * k


def _wrap_phase(v: np.ndarray) -> np.ndarray:
    im = np.mod(v.imag + np.pi, 2.0 * np.pi) - np.pi
    # (-pi, pi] rather than [-pi, pi)
    im = np.where(im == -np.pi, np.pi, im)
    return v.real + 1j * im


def log_gamma(z):
    """Principal logarithm of Gamma(z).

    Accepts scalars or arrays (real or complex) and returns complex values
    whose imaginary part lies in (-pi, pi].  For real z > 0 the result is
    real-valued (zero imaginary part).

    Raises
    ------
    PoleError
        If any argument is a nonpositive integer.
    """
    scalar = np.ndim(z) == 0
    zz = np.atleast_1d(np.asarray(z, dtype=complex))
    poles = (zz.imag == 0) & (zz.real <= 0) & (zz.real == np.round(zz.real))
    if np.any(poles):
        raise PoleError(f"Gamma has a pole at {zz[poles][0].real:g}")
    out = np.empty_like(zz)
    right = zz.real >= 0.5
    if np.any(right):
        out[right] = _log_gamma_right(zz[right])
    left = ~right
    if np.any(left):
        zl = zz[left]
        out[left] = _LOG_PI - _log_sin_pi(zl) - _log_gamma_right(1.0 - zl)
    out = _wrap_phase(out)
    # exact zero phase for positive reals
    pos = (zz.imag == 0) & (zz.real > 0)
    out[pos] = out[pos].real
    if scalar:
        return complex(out[0])
    return out


def gamma(z):
    """Gamma(z) via ``log_gamma``; real input gives real output."""
    value = np.exp(log_gamma(z))
    if np.iscomplexobj(np.asarray(z)):
        return value
    if np.ndim(z) == 0:
        return float(value.real)
    return value.real


@dataclass(frozen=True)
class GammaRatioSpec:
    """prod Gamma(numerator_args) / prod Gamma(denominator_args)."""

    numerator_args: Sequence[complex] = field(default_factory=tuple)
    denominator_args: Sequence[complex] = field(default_factory=tuple)


def _is_real(values) -> bool:
    return all(complex(v).imag == 0.0 for v in values)


def gamma_ratio(spec: GammaRatioSpec | None = None, *, num=(), den=()):
    """Evaluate a ratio of Gamma products as a limit through any poles.

    Each argument x = -k sitting on a pole contributes the residue factor
    (-1)**k / k! and one power of 1/eps; the ratio is finite iff the
    denominator carries at least as many poles as the numerator, and zero
    when it carries strictly more.

    Can be called with a :class:`GammaRatioSpec` or with ``num=``/``den=``.
    Returns a float when every argument is real, else a complex.

    >>> gamma_ratio(num=[-1.0], den=[0.0])   # Gamma(s-1)/Gamma(s) at s=0
    -1.0
    """
    if spec is not None:
        num, den = spec.numerator_args, spec.denominator_args
    num = [complex(x) for x in num]
    den = [complex(x) for x in den]
    real = _is_real(num) and _is_real(den)

    log_mag = 0.0 + 0.0j
    sign = 1
    n_poles = 0
    d_poles = 0
    for x in num:
        k = nonpositive_integer(x)
        if k is None:
            log_mag += log_gamma(x)
        else:
            n_poles += 1
            sign *= -1 if k % 2 else 1
            log_mag -= math.lgamma(k + 1)
    for x in den:
        k = nonpositive_integer(x)
        if k is None:
            log_mag -= log_gamma(x)
        else:
            d_poles += 1
            sign *= -1 if k % 2 else 1
            log_mag += math.lgamma(k + 1)

    if n_poles > d_poles:
        raise PoleError(
            f"Gamma ratio diverges: {n_poles} numerator pole(s) against {d_poles}"
        )
    if d_poles > n_poles:
        return 0.0 if real else 0j
    value = sign * np.exp(log_mag)
    if real:
        return float(value.real)
    return complex(value)


def pochhammer(a, n: int):
    """Rising factorial (a)_n = Gamma(a+n)/Gamma(a) for any integer n.

    Negative n gives 1/((a-1)(a-2)...(a-|n|)).  When a is a nonpositive
    integer and the product passes through zero the result is exactly 0,
    matching the Gamma-ratio limit.

    Raises
    ------
    PoleError
        If a + n is a nonpositive integer while a is not (the ratio has an
        uncancelled numerator pole).
    """
    if int(n) != n:
        raise DomainError(f"pochhammer index must be an integer, got {n!r}")
    n = int(n)
    real = complex(a).imag == 0.0
    a = complex(a).real if real else complex(a)
    if n == 0:
        return 1.0 if real else 1 + 0j
    if abs(n) <= _DIRECT_PRODUCT_LIMIT:
        prod = 1.0 if real else 1 + 0j
        if n > 0:
            for j in range(n):
                prod *= a + j
        else:
            for j in range(1, -n + 1):
                f = a - j
                if f == 0:
                    raise PoleError(f"({a})_{n} has a pole: factor a-{j} vanishes")
                prod /= f
        return prod
    return gamma_ratio(num=[a + n], den=[a])


def wallis_integral(alpha, beta) -> float:
    """Integral of sin**alpha(t) cos**beta(t) over [0, pi/2].

    Equals Gamma((alpha+1)/2) Gamma((beta+1)/2) / (2 Gamma((alpha+beta+2)/2))
    for Re(alpha), Re(beta) > -1.
    """
    if complex(alpha).real <= -1 or complex(beta).real <= -1:
        raise DomainError("wallis_integral needs Re(alpha) > -1 and Re(beta) > -1")
    return 0.5 * gamma_ratio(
        num=[(alpha + 1) / 2, (beta + 1) / 2], den=[(alpha + beta + 2) / 2]
    )
