"""Closed-form routes to Meijer G-functions.

Three pathways are provided: the G^{2,2}_{2,2} -> 2F1 conversion, the
decomposition of G^{m,n}_{p,q} into n weighted qF_{p-1} series in 1/z, and
the G^{2,2}_{3,3} kernel that appears when the lateral-area integral of a
hyperboloid cap is reduced to series form.
"""
from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field
from typing import Sequence

from .errors import ConvergenceError, DomainError, PrecisionWarning
from .gamma_core import gamma_ratio, nonpositive_integer
from .hyp_series import PFQParams, pfq_series

__all__ = [
    "GSpec",
    "DecompositionTerm",
    "g2222_to_2f1",
    "g_decompose",
    "g_decompose_value",
    "decomposition_conditions",
    "g2233_area_kernel",
    "KERNEL_DECOMPOSITION_MARGIN",
]

# |1/z| above this triggers a PrecisionWarning in the inner series
KERNEL_DECOMPOSITION_MARGIN = 0.9


@dataclass(frozen=True)
class GSpec:
    """G^{m,n}_{p,q}(argument | a; b) with a[:n] and b[:m] distinguished."""

    a: Sequence[complex]
    b: Sequence[complex]
    m: int
    n: int
    argument: complex = 1.0

    def __post_init__(self):
        p, q = len(self.a), len(self.b)
        if not (p <= q and 1 <= self.m <= q and 0 <= self.n <= p):
            raise DomainError(f"invalid G shape m={self.m}, n={self.n}, p={p}, q={q}")

    @property
    def p(self) -> int:
        return len(self.a)

    @property
    def q(self) -> int:
        return len(self.b)


@dataclass(frozen=True)
class DecompositionTerm:
    """prefactor * z**exponent * qF_{p-1}(upper; lower; argument)."""

    prefactor: complex
    exponent: complex
    upper: tuple
    lower: tuple
    argument: complex
    value: complex


def _scalar(x):
    c = complex(x)
    return c.real if c.imag == 0 else c


def g2222_to_2f1(a1, a2, b1, b2, z):
    """G^{2,2}_{2,2}(z | a1, a2; b1, b2) for |1 - z| < 1 via Gauss's series.

    Equals Gamma(1-a1+b1) Gamma(1-a1+b2) Gamma(1-a2+b1) Gamma(1-a2+b2)
    / Gamma(2-a1-a2+b1+b2) * z**b1 * 2F1(1-a1+b1, 1-a2+b1; 2-a1-a2+b1+b2; 1-z).
    """
    zc = complex(z)
    if abs(1 - zc) >= 1:
        raise DomainError(f"g2222_to_2f1 needs |1 - z| < 1, got {abs(1 - zc):.4g}")
    c = 2 - a1 - a2 + b1 + b2
    if nonpositive_integer(c) is not None:
        raise DomainError("2 - a1 - a2 + b1 + b2 is a nonpositive integer")
    pre = gamma_ratio(num=[1 - a1 + b1, 1 - a1 + b2, 1 - a2 + b1, 1 - a2 + b2], den=[c])
    f = pfq_series(PFQParams((1 - a1 + b1, 1 - a2 + b1), (c,), 1 - zc)).value
    value = pre * zc ** b1 * f if complex(b1) != 0 else pre * f
    real = all(complex(x).imag == 0 for x in (a1, a2, b1, b2)) and zc.imag == 0
    return complex(value).real if real else complex(value)


def decomposition_conditions(spec: GSpec) -> dict:
    """Which convergence conditions (i)-(iv) of the decomposition hold."""
    p, q, m, n = spec.p, spec.q, spec.m, spec.n
    z = complex(spec.argument)
    on_cut = z.imag == 0 and -1 < z.real < 0
    return {
        "i": p > q,
        "ii": p == q and m + n == p + 1 and not on_cut,
        "iii": p == q and m + n > p + 1,
        "iv": p == q and m + n == p and abs(z) > 1,
    }


def g_decompose(spec: GSpec, tol: float = 1e-15) -> list:
    """Split G^{m,n}_{p,q}(z) into n terms, term h being

        prod_{j != h} Gamma(a_h - a_j) prod_{j<=m} Gamma(1 + b_j - a_h)
        / (prod_{j>n} Gamma(1 + a_j - a_h) prod_{j>m} Gamma(a_h - b_j))
        * z**(a_h - 1) * qF_{p-1}(1 + b - a_h; 1 + a_{j != h} - a_h; (-1)**(q-m-n) / z).

    Terms whose prefactor vanishes (a Gamma pole in the denominator) are
    returned with value 0 and their series is not summed.

    Raises
    ------
    DomainError
        If two distinguished upper parameters differ by an integer.
    ConvergenceError
        If no decomposition condition holds or an inner series diverges.
    """
    a = [_scalar(x) for x in spec.a]
    b = [_scalar(x) for x in spec.b]
    p, q, m, n = spec.p, spec.q, spec.m, spec.n
    z = complex(spec.argument)
    if p < 1:
        raise DomainError("decomposition needs p >= 1")
    if z == 0:
        raise DomainError("z must be nonzero")
    for h in range(n):
        for j in range(h + 1, n):
            d = complex(a[h] - a[j])
            if d.imag == 0 and float(d.real).is_integer():
                raise DomainError(f"a_{h+1} - a_{j+1} = {d.real:g} is an integer")
    conds = decomposition_conditions(spec)
    if not any(conds.values()):
        raise ConvergenceError(f"no decomposition condition holds for m={m}, n={n}, p={p}, q={q}, |z|={abs(z):g}")

    w = (-1) ** (q - m - n) / z
    if abs(w) > KERNEL_DECOMPOSITION_MARGIN:
        warnings.warn(f"|1/z| = {abs(w):.3g} is close to the radius of convergence",
                      PrecisionWarning, stacklevel=2)
    real_args = z.imag == 0 and all(complex(x).imag == 0 for x in a + b)
    w = w.real if real_args else w

    terms = []
    for h in range(n):
        ah = a[h]
        pre = gamma_ratio(
            num=[ah - a[j] for j in range(n) if j != h] + [1 + b[j] - ah for j in range(m)],
            den=[1 + a[j] - ah for j in range(n, p)] + [ah - b[j] for j in range(m, q)],
        )
        upper = tuple(1 + bj - ah for bj in b)
        lower = tuple(1 + a[j] - ah for j in range(p) if j != h)
        if pre == 0:
            terms.append(DecompositionTerm(pre, ah - 1, upper, lower, w, 0.0))
            continue
        try:
            series = pfq_series(PFQParams(upper, lower, w), tol).value
        except DomainError as exc:
            raise ConvergenceError(f"inner series of term {h + 1} diverges: {exc}") from exc
        value = pre * z ** (ah - 1) * series
        if real_args and z.real > 0:
            value = complex(value).real
        terms.append(DecompositionTerm(pre, ah - 1, upper, lower, w, value))
    return terms


def g_decompose_value(spec: GSpec, tol: float = 1e-15):
    """Sum of the :func:`g_decompose` terms."""
    values = [t.value for t in g_decompose(spec, tol)]
    if all(isinstance(v, float) for v in values):
        return math.fsum(values)
    return complex(math.fsum(complex(v).real for v in values),
                   math.fsum(complex(v).imag for v in values))


def g2233_area_kernel(m: int, n: int, z: float, tol: float = 1e-15) -> float:
    """G^{2,2}_{3,3}(z | 3/2, -m; 2+n / 0, 1+n; 0) for real z > 1.

    Only the first decomposition term survives (the second carries
    1/Gamma(-m)), leaving

        Gamma(3/2+m) Gamma(-1/2) Gamma(1/2+n) / (Gamma(3/2+n) Gamma(3/2)) * sqrt(z)
        * 3F2(-1/2, 1/2+n, -1/2; -1/2-m, 3/2+n; -1/z).
    """
    if int(m) != m or int(n) != n or m < 0 or n < 0:
        raise DomainError("m and n must be nonnegative integers")
    if not (isinstance(z, (int, float)) or complex(z).imag == 0):
        raise DomainError("g2233_area_kernel takes real z")
    z = float(complex(z).real)
    if not z > 1:
        raise DomainError(f"g2233_area_kernel needs z > 1, got {z:g}")
    spec = GSpec((1.5, -int(m), 2 + int(n)), (0.0, 1 + int(n), 0.0), 2, 2, z)
    value = g_decompose_value(spec, tol)
    if isinstance(value, complex):
        if abs(value.imag) > 1e-10 * max(1.0, abs(value.real)):
            raise ConvergenceError(f"kernel picked up an imaginary part {value.imag:.3g}")
        value = value.real
    return float(value)
