"""Numerical Mellin-Barnes integrals along a vertical line.

Every integrand handled here has the form

    exp(s * L) * prod Gamma(c_j + e_j s) / prod Gamma(d_k + f_k s),   e, f = +-1,

and is integrated with the trapezoid rule in t on s = sigma + i t.  The
integrand decays exponentially in |t|, so the rule converges spectrally;
the node count is doubled until two successive grids agree.  All Gamma
factors are summed in log space and exponentiated once per node.

When the left pole families (from Gamma(c + s)) and the right families
(from Gamma(c - s)) interleave on the real axis, no straight line separates
them.  The line is then placed just left of the first right pole and the
finitely many left poles stranded to its right are added back as residues,
which is the same as bending the contour around them.
"""
from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ContourError, ConvergenceError, DomainError, PrecisionWarning
from .gamma_core import gamma_ratio, log_gamma, nonpositive_integer
from .hyp_series import PFQParams, SeriesValue

__all__ = [
    "ContourSpec",
    "GConvergenceReport",
    "choose_contour",
    "check_g_convergence",
    "mb_1f0",
    "mb_pfq",
    "mb_meijer_g",
]

DEFAULT_NODES = 512
MAX_DOUBLINGS = 3
_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class ContourSpec:
    """The line Re(s) = abscissa, truncated to |Im(s)| <= half_height."""

    abscissa: float
    half_height: float
    nodes: int = DEFAULT_NODES

    def __post_init__(self):
        if self.half_height <= 0:
            raise ValueError("half_height must be positive")
        if self.nodes < 64:
            raise ValueError("need at least 64 nodes")


def choose_contour(left_poles: Sequence[complex], right_poles: Sequence[complex],
                   decay: float = math.pi / 2, tol: float = 1e-12,
                   nodes: int = DEFAULT_NODES) -> ContourSpec:
    """Line separating left families {l - k} from right families {r + k}.

    ``left_poles`` and ``right_poles`` are the leading poles of each family.
    The abscissa is the midpoint of the gap; the half-height is set so that
    an integrand decaying like exp(-decay |t|) has a tail below tol/10.

    Raises
    ------
    ContourError
        If the families overlap on the real axis.
    """
    lmax = max((complex(x).real for x in left_poles), default=-math.inf)
    rmin = min((complex(x).real for x in right_poles), default=math.inf)
    if not lmax < rmin:
        raise ContourError(
            f"pole families interleave: left reaches {lmax:g}, right starts at {rmin:g}"
        )
    if math.isinf(lmax) and math.isinf(rmin):
        sigma = 0.0
    elif math.isinf(lmax):
        sigma = rmin - 0.5
    elif math.isinf(rmin):
        sigma = lmax + 0.5
    else:
        sigma = 0.5 * (lmax + rmin)
    if decay <= 0:
        raise ContourError("integrand does not decay along a vertical line")
    half_height = (math.log(10.0 / tol) + 4.0) / decay
    return ContourSpec(sigma, half_height, nodes)


@dataclass
class _Integrand:
    """exp(log_const + s*log_arg) * prod Gamma(num) / prod Gamma(den)."""

    num: list = field(default_factory=list)  # (offset, sign) -> Gamma(offset + sign*s)
    den: list = field(default_factory=list)
    log_arg: complex = 0j
    log_const: complex = 0j

    def log_eval(self, s):
        out = self.log_const + s * self.log_arg
        for off, sg in self.num:
            out = out + log_gamma(off + sg * s)
        for off, sg in self.den:
            out = out - log_gamma(off + sg * s)
        return out

    def left_starts(self):
        return [-complex(off) for off, sg in self.num if sg > 0]

    def right_starts(self):
        return [complex(off) for off, sg in self.num if sg < 0]

    def decay_rates(self):
        """Exponential decay rates of |integrand| as t -> +inf and t -> -inf."""
        surplus = 0.5 * math.pi * (len(self.num) - len(self.den))
        im = complex(self.log_arg).imag
        return surplus + im, surplus - im

    def residue(self, s0: complex) -> complex:
        """Residue at s0, or 0 if the numerator poles there are cancelled."""
        order = 0
        coeff = 1.0
        log_reg = self.log_const + s0 * self.log_arg
        for off, sg in self.num:
            k = nonpositive_integer(off + sg * s0, atol=1e-12)
            if k is None:
                log_reg += log_gamma(off + sg * s0)
            else:
                order += 1
                coeff *= (-1) ** k / math.factorial(k) / sg
        for off, sg in self.den:
            k = nonpositive_integer(off + sg * s0, atol=1e-12)
            if k is None:
                log_reg -= log_gamma(off + sg * s0)
            else:
                order -= 1
                coeff /= (-1) ** k / math.factorial(k) / sg
        if order <= 0:
            return 0j
        if order > 1:
            raise ContourError(f"pole of order {order} at s = {s0} is not supported")
        return coeff * cmath.exp(log_reg)


def _line_abscissa(left, right) -> float:
    lmax = max((x.real for x in left), default=-math.inf)
    rmin = min((x.real for x in right), default=math.inf)
    if lmax < rmin:
        return choose_contour(left, right).abscissa
    # every left pole real part below rmin, nearest first
    below = [x.real - k for x in left
             for k in range(int(max(0, math.floor(x.real - rmin))), int(math.ceil(x.real - rmin)) + 2)
             if x.real - k < rmin - 1e-12]
    nearest = max(below, default=rmin - 1.0)
    return 0.5 * (max(nearest, rmin - 1.0) + rmin)


def _stranded_poles(left, right, sigma):
    """Left-family poles right of sigma and right-family poles left of it."""
    lefts, rights = set(), set()
    for x in left:
        k = 0
        while (x - k).real > sigma:
            lefts.add(complex(x - k))
            k += 1
    for x in right:
        k = 0
        while (x + k).real < sigma:
            rights.add(complex(x + k))
            k += 1
    return sorted(lefts, key=lambda c: (c.real, c.imag)), sorted(rights, key=lambda c: (c.real, c.imag))


def _trapezoid(integrand: _Integrand, sigma: float, T: float, n: int):
    t = np.linspace(-T, T, n + 1)
    f = np.exp(integrand.log_eval(sigma + 1j * t))
    w = np.ones_like(t)
    w[0] = w[-1] = 0.5
    h = 2 * T / n
    order = np.argsort(np.abs(t), kind="stable")
    terms = (w * f)[order]
    value = h * np.sum(terms) / (2 * math.pi)
    scale = h * np.sum(np.abs(terms)) / (2 * math.pi)
    return value, scale, abs(f[0]), abs(f[-1])


def _integrate(integrand: _Integrand, contour: ContourSpec | None, tol: float) -> SeriesValue:
    rate_up, rate_down = integrand.decay_rates()
    if min(rate_up, rate_down) <= 0:
        raise ConvergenceError("integrand does not decay along a vertical line")
    left, right = integrand.left_starts(), integrand.right_starts()
    if contour is None:
        sigma = _line_abscissa(left, right)
        T = (math.log(10.0 / tol) + 4.0) / min(rate_up, rate_down)
        nodes = DEFAULT_NODES
    else:
        sigma, T, nodes = contour.abscissa, contour.half_height, contour.nodes
    lefts, rights = _stranded_poles(left, right, sigma)
    correction = sum((integrand.residue(s0) for s0 in lefts), 0j)
    correction -= sum((integrand.residue(s0) for s0 in rights), 0j)

    # widen the window until the tails are negligible
    for _ in range(6):
        value, scale, f_lo, f_hi = _trapezoid(integrand, sigma, T, nodes)
        tail = (f_lo / rate_down + f_hi / rate_up) / (2 * math.pi)
        if tail <= 0.1 * tol * max(abs(value + correction), 1e-300):
            break
        T *= 1.5
        nodes = int(math.ceil(nodes * 1.5 / 2) * 2)

    prev = value
    converged = False
    diff = math.inf
    for _ in range(MAX_DOUBLINGS):
        nodes *= 2
        value, scale, f_lo, f_hi = _trapezoid(integrand, sigma, T, nodes)
        diff = abs(value - prev)
        prev = value
        if diff <= tol * abs(value + correction):
            converged = True
            break
    tail = (f_lo / rate_down + f_hi / rate_up) / (2 * math.pi)
    est = diff + tail + 64 * _EPS * scale
    total = value + correction
    converged = converged and est <= max(tol * abs(total), 64 * _EPS * scale)
    return SeriesValue(complex(total), nodes + 1, float(est), bool(converged))


def _real_if(value, real: bool):
    return float(complex(value).real) if real else complex(value)


def mb_1f0(a, z, contour: ContourSpec | None = None, tol: float = 1e-12):
    """(1 - z)**(-a) from its Barnes integral

        1/(2 pi i Gamma(a)) int Gamma(a + s) Gamma(-s) (-z)**s ds.

    Needs |arg(-z)| < pi, i.e. z not on [0, inf).  Warns with
    :class:`PrecisionWarning` when the node/tail checks do not meet ``tol``.
    """
    z = complex(z)
    if z == 0 or (z.imag == 0 and z.real > 0):
        raise DomainError("mb_1f0 needs |arg(-z)| < pi (z must not be real positive)")
    if nonpositive_integer(a) is not None:
        raise DomainError(f"a = {a} is a nonpositive integer")
    integrand = _Integrand(
        num=[(complex(a), 1), (0j, -1)],
        log_arg=cmath.log(-z),
        log_const=-log_gamma(a),
    )
    res = _integrate(integrand, contour, tol)
    if not res.converged:
        warnings.warn(f"mb_1f0 error estimate {res.est_error:.3g} above tolerance",
                      PrecisionWarning, stacklevel=2)
    real = complex(a).imag == 0 and z.imag == 0
    return _real_if(res.value, real)


def mb_pfq(params: PFQParams, contour: ContourSpec | None = None,
           tol: float = 1e-12) -> SeriesValue:
    """pFq(alpha; beta; z) from its Barnes integral

        prod Gamma(beta) / prod Gamma(alpha) * 1/(2 pi i)
            int prod Gamma(alpha + x) Gamma(-x) / prod Gamma(beta + x) (-z)**x dx.

    Supported for p = q + 1 with |arg(-z)| < pi and p = q with
    |arg(-z)| < pi/2.
    """
    upper = [complex(a) for a in params.upper]
    lower = [complex(b) for b in params.lower]
    z = complex(params.argument)
    p, q = len(upper), len(lower)
    if z == 0:
        raise DomainError("z = 0 has no Barnes representation; the value is 1")
    for a in upper:
        if nonpositive_integer(a) is not None:
            raise DomainError(f"upper parameter {a.real:g} is a nonpositive integer")
    arg = abs(cmath.phase(-z))
    if p == q + 1:
        if arg >= math.pi:
            raise DomainError("p = q + 1 needs |arg(-z)| < pi")
    elif p == q:
        if arg >= math.pi / 2:
            raise DomainError("p = q needs |arg(-z)| < pi/2")
    else:
        raise DomainError(f"Barnes integral for {p}F{q} is not supported")
    pre = gamma_ratio(num=lower, den=upper)
    integrand = _Integrand(
        num=[(a, 1) for a in upper] + [(0j, -1)],
        den=[(b, 1) for b in lower],
        log_arg=cmath.log(-z),
    )
    res = _integrate(integrand, contour, tol)
    real = all(x.imag == 0 for x in upper + lower) and z.imag == 0
    value = pre * res.value
    return SeriesValue(_real_if(value, real), res.terms_used,
                       abs(pre) * res.est_error, res.converged)


@dataclass(frozen=True)
class GConvergenceReport:
    """Which of the convergence conditions (i)-(v) hold for a G-function.

    ``conditions`` maps "i".."v" to True/False; condition (iii) depends on
    the contour abscissa and is reported as None.
    """

    Lambda: float
    nu: complex
    conditions: dict
    notes: str = ""

    @property
    def applicable(self) -> list:
        return [k for k, v in self.conditions.items() if v]


def check_g_convergence(a: Sequence, b: Sequence, m: int, n: int, z) -> GConvergenceReport:
    """Classify G^{m,n}_{p,q}(z | a; b) against conditions (i)-(v)."""
    p, q = len(a), len(b)
    Lam = m + n - 0.5 * (p + q)
    nu = complex(sum(complex(x) for x in b) - sum(complex(x) for x in a))
    z = complex(z)
    arg = abs(cmath.phase(z)) if z != 0 else 0.0
    on_edge = math.isclose(arg, Lam * math.pi, abs_tol=1e-14)
    az = abs(z)
    conds = {
        "i": Lam > 0 and arg < Lam * math.pi,
        "ii": on_edge and Lam >= 0 and p == q and nu.real < -1,
        "iii": None if (on_edge and Lam >= 0 and p != q) else False,
        "iv": q >= 1 and ((p < q and 0 < az) or (p == q and 0 < az < 1)),
        "v": p >= 1 and ((p > q and 0 < az) or (p == q and az > 1)),
    }
    notes = ""
    if conds["iii"] is None:
        notes = "condition (iii) depends on the contour abscissa; not evaluated"
    return GConvergenceReport(Lam, nu, conds, notes)


def mb_meijer_g(a: Sequence, b: Sequence, m: int, n: int, z,
                contour: ContourSpec | None = None, tol: float = 1e-12) -> SeriesValue:
    """G^{m,n}_{p,q}(z | a; b) by direct quadrature of its Barnes integral

        1/(2 pi i) int prod_{j<=m} Gamma(b_j - s) prod_{j<=n} Gamma(1 - a_j + s)
                     / (prod_{j>m} Gamma(1 - b_j + s) prod_{j>n} Gamma(a_j - s)) z**s ds.

    The vertical line only converges under condition (i), |arg z| < Lambda pi;
    cases that rely on (ii)-(v) alone raise ConvergenceError.
    """
    a = [complex(x) for x in a]
    b = [complex(x) for x in b]
    p, q = len(a), len(b)
    if not (p <= q and 1 <= m <= q and 0 <= n <= p):
        raise DomainError(f"invalid G shape m={m}, n={n}, p={p}, q={q}")
    z = complex(z)
    if z == 0:
        raise DomainError("z must be nonzero")
    for i in range(n):
        for j in range(m):
            d = a[i] - b[j]
            if d.imag == 0 and d.real > 0 and float(d.real).is_integer():
                raise DomainError(f"a_{i+1} - b_{j+1} = {d.real:g} is a positive integer")
    report = check_g_convergence(a, b, m, n, z)
    if not report.conditions["i"]:
        held = ", ".join(report.applicable) or "none"
        raise ConvergenceError(
            f"line integral needs |arg z| < Lambda*pi (Lambda = {report.Lambda:g}); "
            f"conditions holding: {held}"
        )
    integrand = _Integrand(
        num=[(b[j], -1) for j in range(m)] + [(1 - a[j], 1) for j in range(n)],
        den=[(1 - b[j], 1) for j in range(m, q)] + [(a[j], -1) for j in range(n, p)],
        log_arg=cmath.log(z),
    )
    res = _integrate(integrand, contour, tol)
    real = all(x.imag == 0 for x in a + b) and z.imag == 0 and z.real > 0
    return SeriesValue(_real_if(res.value, real), res.terms_used, res.est_error, res.converged)
