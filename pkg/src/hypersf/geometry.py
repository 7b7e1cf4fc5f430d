"""Lateral area and volume of a one-sheet hyperboloid cap.

The surface is x^2/a^2 + y^2/b^2 - z^2/c^2 = 1, cut by the planes z = 0 and
z = H.  With lam = sqrt(1 + H^2/c^2) the upper rim is the base ellipse
scaled by lam, and the lateral area is

    S = 2 pi b^2 c sqrt(lam^2 - 1) / (lam a) * F(x1, x2, x3),
    x1 = b^2/a^2 - 1,  x2 = 1 - 1/lam^2,  x3 = a^2 (1 - lam^2) / (c^2 lam^2),

where F is a triple hypergeometric series converging for |x_i| < 1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

from .errors import ConvergenceError, DomainError, OutOfRegionError
from .hyp_series import SeriesValue
from .quadrature import surface_integral_oracle
from .srivastava_daoust import hyperboloid_area_spec, sd_eval

__all__ = [
    "GeometryParams",
    "AreaResult",
    "RegionCheck",
    "VolumeParts",
    "lambda_of",
    "area_arguments",
    "area_region_check",
    "area_prefactor",
    "surface_area_closed",
    "surface_area_triple_sum",
    "surface_area",
    "volume",
    "volume_decomposition",
    "lambda_from_bases",
    "c_from_bases",
]

_MAX_INDEX = 5000


@dataclass(frozen=True)
class GeometryParams:
    """Semi-axes a > b of the waist ellipse, axial scale c, cap height H.

    ``allow_circular`` admits a == b.  H == 0 is accepted as the empty cap.
    """

    a: float
    b: float
    c: float
    H: float
    allow_circular: bool = False

    def __post_init__(self):
        for name in ("a", "b", "c", "H"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v)):
                raise DomainError(f"{name} must be a finite real number, got {v!r}")
            object.__setattr__(self, name, float(v))
        if not (self.b > 0 and self.c > 0):
            raise DomainError("need b > 0 and c > 0")
        if self.H < 0:
            raise DomainError("need H >= 0")
        if self.a == self.b:
            if not self.allow_circular:
                raise DomainError("a == b is the circular case; pass allow_circular=True")
        elif not self.a > self.b:
            raise DomainError(f"need a > b (semi-major first), got a={self.a:g}, b={self.b:g}")

    def scaled(self, k: float) -> "GeometryParams":
        return GeometryParams(k * self.a, k * self.b, k * self.c, k * self.H, self.allow_circular)


@dataclass(frozen=True)
class RegionCheck:
    x: tuple
    inside: tuple

    @property
    def ok(self) -> bool:
        return all(self.inside)

    @property
    def failed(self) -> tuple:
        return tuple(f"|x{i + 1}| = {abs(v):.6g} >= 1" for i, (v, ok)
                     in enumerate(zip(self.x, self.inside)) if not ok)


@dataclass(frozen=True)
class AreaResult:
    area: float
    method: str
    region_ok: bool
    series: SeriesValue | None = None
    est_error: float = 0.0
    failed: tuple = field(default_factory=tuple)


class VolumeParts(NamedTuple):
    V_c: float
    V_b: float
    V: float


def lambda_of(params) -> float:
    """sqrt(1 + H^2/c^2): scale of the upper rim relative to the waist."""
    return math.sqrt(1.0 + (params.H / params.c) ** 2)


def area_arguments(params) -> tuple:
    lam2 = 1.0 + (params.H / params.c) ** 2
    a, b, c = params.a, params.b, params.c
    return (b * b / (a * a) - 1.0, 1.0 - 1.0 / lam2, a * a * (1.0 - lam2) / (c * c * lam2))


def area_region_check(params) -> RegionCheck:
    """Series arguments and whether each lies in (-1, 1)."""
    x = area_arguments(params)
    return RegionCheck(x, tuple(-1 < v < 1 for v in x))


def area_prefactor(params) -> float:
    lam = lambda_of(params)
    return 2 * math.pi * params.b ** 2 * params.c * math.sqrt(lam * lam - 1) / (lam * params.a)


def _require_region(params) -> RegionCheck:
    check = area_region_check(params)
    if not check.ok:
        raise OutOfRegionError(
            "series arguments outside the unit interval: " + "; ".join(check.failed),
            failed=check.failed,
        )
    return check


def surface_area_closed(params: GeometryParams, tol: float = 1e-13) -> AreaResult:
    """Lateral area from the triple-series tableau, summed by ``sd_eval``.

    Raises
    ------
    OutOfRegionError
        If some |x_i| >= 1 (use :func:`surface_area` for the fallback).
    """
    check = _require_region(params)
    pre = area_prefactor(params)
    series = sd_eval(hyperboloid_area_spec(), check.x, tol=tol, max_index=_MAX_INDEX)
    area = pre * float(series.value)
    return AreaResult(area, "closed_form", True, series, abs(pre) * series.est_error)


def _sum_until_small(next_term, tol):
    """Sum terms from ``next_term(k)`` until two in a row are below tol*|sum|."""
    terms = []
    total = 0.0
    small = 0
    for k in range(_MAX_INDEX):
        t = next_term(k)
        terms.append(t)
        total += t
        if abs(t) <= tol * abs(total):
            small += 1
            if small >= 2:
                return math.fsum(terms), len(terms)
        else:
            small = 0
    raise ConvergenceError(f"triple sum not converged after {_MAX_INDEX} terms")


def surface_area_triple_sum(params: GeometryParams, tol: float = 1e-15) -> AreaResult:
    """Lateral area from the explicit sum over (m, n, p) of

        (1/2)_{n+p} (1/2)_m (2)_n ((-1/2)_p)^2 x1^m x2^n x3^p
        / ((-1/2)_{p-m} (3/2)_{n+p} (1)_m m! n! p!),

    built from term ratios along each axis rather than from a tableau.
    """
    check = _require_region(params)
    x1, x2, x3 = check.x
    used = 0

    def p_sum(m, n, t0):
        nonlocal used
        state = {"t": t0}

        def term(p):
            if p > 0:
                q = p - 1
                state["t"] *= ((0.5 + n + q) * (q - 0.5) ** 2 * x3
                               / ((q - 0.5 - m) * (1.5 + n + q) * (q + 1)))
            return state["t"]

        s, k = _sum_until_small(term, tol)
        used += k
        return s

    def n_sum(m, t0):
        state = {"t": t0}

        def term(n):
            if n > 0:
                q = n - 1
                state["t"] *= (0.5 + q) * (2 + q) * x2 / ((1.5 + q) * (q + 1))
            return p_sum(m, n, state["t"]) if state["t"] != 0 else 0.0

        return _sum_until_small(term, tol)[0]

    state = {"t": 1.0}

    def m_term(m):
        if m > 0:
            q = m - 1
            state["t"] *= (0.5 + q) * (-1.5 - q) * x1 / ((q + 1) ** 2)
        return n_sum(m, state["t"]) if state["t"] != 0 else 0.0

    value, _ = _sum_until_small(m_term, tol)
    pre = area_prefactor(params)
    series = SeriesValue(value, used, abs(value) * tol * 10, True)
    return AreaResult(pre * value, "triple_sum", True, series, abs(pre) * series.est_error)


def surface_area(params: GeometryParams, method: str = "closed", tol: float = 1e-12,
                 strict: bool = False) -> AreaResult:
    """Lateral area by ``method`` in {"closed", "triple", "oracle"}.

    Outside the series region the closed and triple methods fall back to
    2D quadrature and name the failed condition, unless ``strict``.
    """
    if method not in ("closed", "triple", "oracle"):
        raise ValueError(f"unknown method {method!r}")
    check = area_region_check(params)
    if method != "oracle":
        if check.ok:
            if method == "closed":
                return surface_area_closed(params, tol=min(tol, 1e-13))
            return surface_area_triple_sum(params)
        if strict:
            _require_region(params)
    q = surface_integral_oracle(params, tol=max(tol, 1e-12))
    return AreaResult(float(q.value), "oracle", check.ok, None, q.est_error, check.failed)


def volume(params) -> float:
    """pi a b H (1 + H^2 / (3 c^2))."""
    a, b, c, H = params.a, params.b, params.c, params.H
    return math.pi * a * b * H * (1.0 + H * H / (3.0 * c * c))


def volume_decomposition(params) -> VolumeParts:
    """Cylinder-like V_c = pi a b lam^2 H minus V_b = 2 pi a b c (lam^2-1)^(3/2) / 3."""
    a, b, c, H = params.a, params.b, params.c, params.H
    lam2 = 1.0 + (H / c) ** 2
    V_c = math.pi * a * b * lam2 * H
    V_b = 2.0 * math.pi * a * b * c * (lam2 - 1.0) ** 1.5 / 3.0
    return VolumeParts(V_c, V_b, V_c - V_b)


def lambda_from_bases(large_semi_axis: float, small_semi_axis: float) -> float:
    """Ratio of corresponding semi-axes of the top and waist ellipses."""
    if not (large_semi_axis > 0 and small_semi_axis > 0):
        raise DomainError("semi-axes must be positive")
    lam = large_semi_axis / small_semi_axis
    if lam < 1:
        raise DomainError(f"ratio {lam:g} < 1: the top rim cannot be smaller than the waist")
    return lam


def c_from_bases(large_semi_axis: float, small_semi_axis: float, H: float) -> float:
    """Axial scale c = H / sqrt(lam^2 - 1) of a cap with measured rims."""
    lam = lambda_from_bases(large_semi_axis, small_semi_axis)
    if lam == 1:
        raise DomainError("equal rims: the cap is a cylinder and c is undefined")
    return H / math.sqrt(lam * lam - 1.0)
