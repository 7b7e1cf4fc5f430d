"""Power-series evaluation of pFq, Gauss's sum at unit argument and the
z -> 1 - 1/z continuation of 2F1."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ConvergenceError, DomainError, PoleError
from .gamma_core import gamma_ratio, nonpositive_integer

__all__ = [
    "DEFAULT_TOL",
    "DEFAULT_MAX_TERMS",
    "PFQParams",
    "SeriesValue",
    "pfq_series",
    "hyp2f1",
    "gauss_sum_at_unity",
    "continued_2f1",
    "extrapolate_to_unity",
]

DEFAULT_TOL = 1e-15
DEFAULT_MAX_TERMS = 100_000


@dataclass(frozen=True)
class SeriesValue:
    """Result of a truncated series or numerical integral.

    ``est_error`` is an absolute error estimate; ``converged`` implies
    ``est_error <= tol * |value|`` for the tolerance that was requested.
    """

    value: complex | float
    terms_used: int
    est_error: float
    converged: bool

    def __float__(self):
        return float(complex(self.value).real)

    def __complex__(self):
        return complex(self.value)


@dataclass(frozen=True)
class PFQParams:
    upper: Sequence[complex] = field(default_factory=tuple)
    lower: Sequence[complex] = field(default_factory=tuple)
    argument: complex = 0.0

    @property
    def p(self) -> int:
        return len(self.upper)

    @property
    def q(self) -> int:
        return len(self.lower)


def _scalar(x):
    c = complex(x)
    return c.real if c.imag == 0.0 else c


def _truncation_order(upper) -> int | None:
    """Smallest N such that some upper parameter equals -N."""
    orders = [k for k in (nonpositive_integer(a) for a in upper) if k is not None]
    return min(orders) if orders else None


def _fsum(values):
    if any(isinstance(v, complex) for v in values):
        return complex(math.fsum(v.real for v in values), math.fsum(v.imag for v in values))
    return math.fsum(values)


def pfq_series(params: PFQParams, tol: float = DEFAULT_TOL,
               max_terms: int = DEFAULT_MAX_TERMS) -> SeriesValue:
    """Sum the pFq power series directly.

    The sum stops once two consecutive terms fall below ``tol * |partial
    sum|`` and the geometric tail estimate agrees.  A nonpositive integer
    upper parameter truncates the series to a polynomial, which takes
    precedence over any lower-parameter pole further out.

    Raises
    ------
    PoleError
        A lower parameter is a nonpositive integer reached before truncation.
    DomainError
        p > q + 1 with z != 0 (and no truncation), or p == q + 1, |z| > 1.
    ConvergenceError
        ``max_terms`` exhausted before the stopping rule fired.
    """
    upper = [_scalar(a) for a in params.upper]
    lower = [_scalar(b) for b in params.lower]
    z = _scalar(params.argument)
    p, q = len(upper), len(lower)

    n_trunc = _truncation_order(upper)
    for b in lower:
        k = nonpositive_integer(b)
        if k is not None and (n_trunc is None or n_trunc > k):
            raise PoleError(f"lower parameter {b} is a nonpositive integer")

    if z == 0:
        return SeriesValue(1.0 if not isinstance(z, complex) else 1 + 0j, 1, 0.0, True)
    if n_trunc is None:
        if p > q + 1:
            raise DomainError(f"{p}F{q} series diverges for z != 0")
        if p == q + 1 and abs(z) > 1:
            raise DomainError(f"{p}F{q} series needs |z| <= 1, got |z| = {abs(z):g}")

    limit = max_terms if n_trunc is None else min(max_terms, n_trunc + 1)
    term = 1.0
    terms = [term]
    total = term
    small_run = 0
    for k in range(limit - 1):
        num = 1.0
        for a in upper:
            num *= a + k
        den = float(k + 1)
        for b in lower:
            den *= b + k
        ratio = num / den * z
        term = term * ratio
        terms.append(term)
        total += term
        if n_trunc is not None:
            continue
        if abs(term) <= tol * abs(total):
            small_run += 1
        else:
            small_run = 0
        if small_run >= 2 and abs(ratio) < 1:
            # next-term ratio for the geometric tail bound
            nk = k + 1
            r = abs(z)
            for a in upper:
                r *= abs(a + nk)
            r /= nk + 1
            for b in lower:
                r /= abs(b + nk)
            tail = abs(term) * r / (1 - r) if r < 1 else math.inf
            if tail <= tol * abs(total):
                value = _fsum(terms)
                return SeriesValue(value, len(terms), tail, True)

    value = _fsum(terms)
    if n_trunc is not None and len(terms) == n_trunc + 1:
        return SeriesValue(value, len(terms), 0.0, True)
    raise ConvergenceError(
        f"{p}F{q} series not converged after {len(terms)} terms "
        f"(last term {abs(term):.3g}, sum {abs(value):.3g})"
    )


def hyp2f1(a, b, c, z, tol: float = DEFAULT_TOL):
    """Value of 2F1(a, b; c; z) by direct summation (|z| < 1)."""
    return pfq_series(PFQParams((a, b), (c,), z), tol).value


def gauss_sum_at_unity(a, b, c):
    """2F1(a, b; c; 1) = Gamma(c) Gamma(c-a-b) / (Gamma(c-a) Gamma(c-b))."""
    if complex(c - a - b).real <= 0:
        raise DomainError("Gauss summation needs Re(c - a - b) > 0")
    if nonpositive_integer(c) is not None:
        raise PoleError(f"c = {c} is a nonpositive integer")
    return gamma_ratio(num=[c, c - a - b], den=[c - a, c - b])


def continued_2f1(A, B, C, z, tol: float = DEFAULT_TOL) -> complex:
    """2F1(A, B; C; z) through the two-term expansion in powers of 1 - 1/z.

    Both inner series converge when |1 - 1/z| < 1, which covers Re(z) > 1/2,
    including the overlap (1/2, 1) with the ordinary series.

    Notes
    -----
    Fractional powers use principal branches.  For real z > 1 this gives
    (1 - z)**(C - A - B) with arg(1 - z) = pi, i.e. the boundary value of
    2F1 approached from Im(z) < 0; for example
    2F1(1/2, 1; 2; 4/3) = 1.5 - 0.866i.

    Always returns a complex number.
    """
    s = A + B - C
    if complex(s).imag == 0 and float(complex(s).real).is_integer():
        raise DomainError("A + B - C must not be an integer")
    z = complex(z)
    if z == 0:
        raise DomainError("z = 0 is not covered by the continuation")
    w = 1 - 1 / z
    if abs(w) >= 1:
        raise DomainError(f"|1 - 1/z| = {abs(w):.4g} >= 1, continuation does not converge")

    pre1 = gamma_ratio(num=[C, C - A - B], den=[C - A, C - B])
    pre2 = gamma_ratio(num=[C, A + B - C], den=[A, B])
    total = 0j
    if pre1 != 0:
        f1 = pfq_series(PFQParams((A, 1 + A - C), (A + B - C + 1,), w), tol).value
        total += pre1 * z ** (-A) * f1
    if pre2 != 0:
        f2 = pfq_series(PFQParams((C - A, 1 - A), (1 + C - A - B,), w), tol).value
        total += pre2 * z ** (A - C) * (1 - z) ** (C - A - B) * f2
    return complex(total)


def extrapolate_to_unity(a, b, c, h_min: float = 1e-3, h_max: float = 0.1,
                         points: int = 13, regular_terms: int = 5,
                         singular_terms: int = 4) -> float:
    """Estimate 2F1(a, b; c; 1) from series values at z = 1 - h, h in [h_min, h_max].

    Near z = 1 the function has the form

        sum_j A_j h**j + h**g sum_j B_j h**j,            g = c - a - b,

    with h**(g+j) replaced by h**(g+j) log h when g is an integer.  A least
    squares fit of that basis on a log-spaced grid returns A_0.  Real
    parameters with c - a - b > 0 only; meant as an independent check of
    :func:`gauss_sum_at_unity`.
    """
    g = float(c - a - b)
    if not g > 0:
        raise DomainError("extrapolation needs c - a - b > 0")
    h = np.geomspace(h_min, h_max, points)
    values = np.array([float(complex(hyp2f1(a, b, c, 1.0 - x)).real) for x in h])
    cols = [h ** j for j in range(regular_terms)]
    if g.is_integer():
        cols += [h ** (g + j) * np.log(h) for j in range(singular_terms)]
    else:
        cols += [h ** (g + j) for j in range(singular_terms)]
    design = np.column_stack(cols)
    scale = np.abs(design).max(axis=0)
    coef = np.linalg.lstsq(design / scale, values, rcond=None)[0] / scale
    return float(coef[0])
