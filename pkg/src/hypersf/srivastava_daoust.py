"""Multivariable hypergeometric series of Srivastava-Daoust type.

The series is

    F(x) = sum_{m >= 0} Omega(m) prod_i x_i**m_i / m_i!,

    Omega(m) = prod_j (a_j)_{m . theta_j} prod_i prod_j (b_j^(i))_{m_i phi_j^(i)}
             / (prod_j (c_j)_{m . psi_j} prod_i prod_j (d_j^(i))_{m_i delta_j^(i)}).

Shift coefficients are integers and may be negative; a negative Pochhammer
index is the reciprocal falling product (a)_{-k} = 1/((a-1)...(a-k)).  The
lattice is summed one simplex |m| = L at a time, so cancellation across
the lattice is visible to the stopping rule.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from importlib import resources
from typing import Sequence

import numpy as np

from .errors import ConvergenceError, DomainError, PoleError
from .hyp_series import SeriesValue

__all__ = [
    "SDSpec",
    "ConvergenceReport",
    "sd_eval",
    "sd_classify",
    "sd_level_sums",
    "hyperboloid_area_spec",
    "product_spec",
    "load_spec",
    "DEFAULT_MAX_INDEX",
]

DEFAULT_MAX_INDEX = 2000
_RESTARTS = 64


def _num(v):
    c = complex(v)
    return c.real if c.imag == 0 else c


def _encode(v):
    c = complex(v)
    return c.real if c.imag == 0 else [c.real, c.imag]


def _decode(v):
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise DomainError(f"complex values are [re, im], got {v!r}")
        return _num(complex(v[0], v[1]))
    return _num(v)


def _int_shift(s) -> int:
    if isinstance(s, bool) or int(s) != s:
        raise DomainError(f"shift coefficients must be integers, got {s!r}")
    return int(s)


@dataclass(frozen=True)
class SDSpec:
    """Parameter tableau of an n-variable series.

    ``upper_global``/``lower_global`` hold (value, shifts) with one integer
    shift per variable; ``upper_per_variable``/``lower_per_variable`` hold,
    for each variable, a tuple of (value, shift).
    """

    variable_count: int
    upper_global: tuple = ()
    lower_global: tuple = ()
    upper_per_variable: tuple = ()
    lower_per_variable: tuple = ()

    def __post_init__(self):
        n = int(self.variable_count)
        if n < 1:
            raise DomainError("need at least one variable")
        norm_g = lambda rows: tuple((_num(v), tuple(_int_shift(s) for s in sh)) for v, sh in rows)
        norm_v = lambda rows: tuple(tuple((_num(v), _int_shift(s)) for v, s in r) for r in rows)
        ug, lg = norm_g(self.upper_global), norm_g(self.lower_global)
        up = norm_v(self.upper_per_variable) or ((),) * n
        lp = norm_v(self.lower_per_variable) or ((),) * n
        for _, sh in ug + lg:
            if len(sh) != n:
                raise DomainError(f"shift vector {sh} does not have length {n}")
        if len(up) != n or len(lp) != n:
            raise DomainError("per-variable tableaus must have one entry per variable")
        object.__setattr__(self, "variable_count", n)
        object.__setattr__(self, "upper_global", ug)
        object.__setattr__(self, "lower_global", lg)
        object.__setattr__(self, "upper_per_variable", up)
        object.__setattr__(self, "lower_per_variable", lp)

    @property
    def n(self) -> int:
        return self.variable_count

    def deltas(self) -> list:
        """Delta_i = 1 + sum psi + sum delta - sum theta - sum phi."""
        out = []
        for i in range(self.n):
            d = 1
            d += sum(sh[i] for _, sh in self.lower_global)
            d += sum(s for _, s in self.lower_per_variable[i])
            d -= sum(sh[i] for _, sh in self.upper_global)
            d -= sum(s for _, s in self.upper_per_variable[i])
            out.append(d)
        return out

    def permuted(self, order: Sequence[int]) -> "SDSpec":
        """The same series with variables reordered (variable k <- order[k])."""
        order = list(order)
        if sorted(order) != list(range(self.n)):
            raise DomainError(f"{order} is not a permutation of 0..{self.n - 1}")
        pg = lambda rows: tuple((v, tuple(sh[k] for k in order)) for v, sh in rows)
        return SDSpec(
            self.n,
            pg(self.upper_global),
            pg(self.lower_global),
            tuple(self.upper_per_variable[k] for k in order),
            tuple(self.lower_per_variable[k] for k in order),
        )

    def to_dict(self) -> dict:
        return {
            "variables": self.n,
            "upper_global": [{"value": _encode(v), "shifts": list(sh)} for v, sh in self.upper_global],
            "lower_global": [{"value": _encode(v), "shifts": list(sh)} for v, sh in self.lower_global],
            "upper_per_variable": [[{"value": _encode(v), "shift": s} for v, s in r]
                                   for r in self.upper_per_variable],
            "lower_per_variable": [[{"value": _encode(v), "shift": s} for v, s in r]
                                   for r in self.lower_per_variable],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SDSpec":
        try:
            n = int(d["variables"])
            g = lambda key: [(_decode(r["value"]), r["shifts"]) for r in d.get(key, [])]
            v = lambda key: [[(_decode(r["value"]), r["shift"]) for r in row]
                             for row in d.get(key, [[] for _ in range(n)])]
            return cls(n, g("upper_global"), g("lower_global"),
                       v("upper_per_variable"), v("lower_per_variable"))
        except (KeyError, TypeError) as exc:
            raise DomainError(f"malformed series specification: {exc}") from exc

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def load_spec(path) -> SDSpec:
    """Read an :class:`SDSpec` from a JSON file."""
    with open(path, encoding="utf-8") as fh:
        return SDSpec.from_dict(json.load(fh))


def hyperboloid_area_spec() -> SDSpec:
    """Triple-series tableau of the hyperboloid-cap lateral area."""
    text = resources.files("hypersf").joinpath("data/hyperboloid_area.json").read_text("utf-8")
    return SDSpec.from_dict(json.loads(text))


def product_spec(upper: Sequence[Sequence], lower: Sequence[Sequence]) -> SDSpec:
    """Spec without global rows: the product of one pFq per variable."""
    if len(upper) != len(lower):
        raise DomainError("upper and lower need one parameter list per variable")
    return SDSpec(
        len(upper), (), (),
        tuple(tuple((v, 1) for v in u) for u in upper),
        tuple(tuple((v, 1) for v in d) for d in lower),
    )


class _PochTable:
    """log (a)_k for integer k, grown on demand, with zero/pole flags."""

    def __init__(self, a):
        self.a = complex(a)
        self.pos_log = [0j]
        self.pos_zero = [False]
        self.neg_log = [0j]
        self.neg_pole = [False]

    def _grow(self, kmax: int, kmin: int):
        a = self.a
        while len(self.pos_log) <= kmax:
            k = len(self.pos_log) - 1
            f = a + k
            if self.pos_zero[-1] or f == 0:
                self.pos_log.append(self.pos_log[-1])
                self.pos_zero.append(True)
            else:
                self.pos_log.append(self.pos_log[-1] + np.log(f))
                self.pos_zero.append(False)
        while len(self.neg_log) <= -kmin:
            j = len(self.neg_log)
            f = a - j
            if self.neg_pole[-1] or f == 0:
                self.neg_log.append(self.neg_log[-1])
                self.neg_pole.append(True)
            else:
                self.neg_log.append(self.neg_log[-1] - np.log(f))
                self.neg_pole.append(False)

    def lookup(self, k: np.ndarray):
        self._grow(int(k.max(initial=0)), int(k.min(initial=0)))
        pl, pz = np.array(self.pos_log), np.array(self.pos_zero)
        nl, npole = np.array(self.neg_log), np.array(self.neg_pole)
        nonneg = k >= 0
        kp = np.where(nonneg, k, 0)
        kn = np.where(nonneg, 0, -k)
        logs = np.where(nonneg, pl[kp], nl[kn])
        zero = nonneg & pz[kp]
        pole = ~nonneg & npole[kn]
        return logs, zero, pole


class _Evaluator:
    def __init__(self, spec: SDSpec, x):
        self.spec = spec
        self.x = [complex(v) for v in x]
        if len(self.x) != spec.n:
            raise DomainError(f"expected {spec.n} arguments, got {len(self.x)}")
        self.ug = [(_PochTable(v), np.array(sh)) for v, sh in spec.upper_global]
        self.lg = [(_PochTable(v), np.array(sh)) for v, sh in spec.lower_global]
        self.up = [[(_PochTable(v), s) for v, s in r] for r in spec.upper_per_variable]
        self.lp = [[(_PochTable(v), s) for v, s in r] for r in spec.lower_per_variable]
        self.logx = np.array([np.log(v) if v != 0 else 0j for v in self.x])
        self.xzero = np.array([v == 0 for v in self.x])
        self.lgamma = [0.0]

    def _log_factorial(self, m: np.ndarray):
        top = int(m.max(initial=0))
        while len(self.lgamma) <= top:
            self.lgamma.append(self.lgamma[-1] + math.log(len(self.lgamma)))
        return np.array(self.lgamma)[m]

    def terms(self, points: np.ndarray) -> np.ndarray:
        """Terms Omega(m) prod x**m / m! at the lattice points (rows)."""
        logs = np.zeros(len(points), dtype=complex)
        zero = np.zeros(len(points), dtype=bool)
        num_pole = np.zeros(len(points), dtype=bool)
        den_zero = np.zeros(len(points), dtype=bool)
        for table, sh in self.ug:
            lv, z, p = table.lookup(points @ sh)
            logs += lv; zero |= z; num_pole |= p
        for table, sh in self.lg:
            lv, z, p = table.lookup(points @ sh)
            logs -= lv; den_zero |= z
        for i in range(self.spec.n):
            mi = points[:, i]
            for table, s in self.up[i]:
                lv, z, p = table.lookup(mi * s)
                logs += lv; zero |= z; num_pole |= p
            for table, s in self.lp[i]:
                lv, z, p = table.lookup(mi * s)
                logs -= lv; den_zero |= z
            logs -= self._log_factorial(mi)
            logs += mi * self.logx[i]
            if self.xzero[i]:
                zero |= mi > 0
        bad = (num_pole | den_zero) & ~zero
        if np.any(bad):
            m = tuple(int(v) for v in points[np.argmax(bad)])
            raise PoleError(f"coefficient at m = {m} hits an uncancelled Gamma pole")
        out = np.exp(np.where(zero, -np.inf + 0j, logs))
        out[zero] = 0
        return out


def _simplex(level: int, n: int) -> np.ndarray:
    """All m >= 0 with |m| = level, in lexicographic order."""
    if n == 1:
        return np.array([[level]])
    combos = np.array(list(itertools.combinations(range(level + n - 1), n - 1)), dtype=np.int64)
    bars = np.concatenate([
        np.full((len(combos), 1), -1), combos, np.full((len(combos), 1), level + n - 1)
    ], axis=1)
    return np.diff(bars, axis=1) - 1


def _fsum_complex(values) -> complex:
    return complex(math.fsum(values.real), math.fsum(values.imag))


def sd_level_sums(spec: SDSpec, x, levels: int) -> list:
    """sum |term| over each simplex |m| = 0 .. levels-1 (a growth diagnostic)."""
    ev = _Evaluator(spec, x)
    return [math.fsum(np.abs(ev.terms(_simplex(L, spec.n)))) for L in range(levels)]


def sd_eval(spec: SDSpec, x, tol: float = 1e-14,
            max_index: int = DEFAULT_MAX_INDEX) -> SeriesValue:
    """Sum the series at ``x`` simplex by simplex.

    Stops once two consecutive simplices each contribute (in absolute value)
    at most ``tol * |partial sum|`` and the geometric tail estimate from
    their ratio is below the same bound.

    Raises
    ------
    PoleError
        Some coefficient hits a Gamma pole that no zero cancels.
    ConvergenceError
        ``max_index`` simplices summed without meeting the stopping rule.
    """
    ev = _Evaluator(spec, x)
    real = all(v.imag == 0 for v in ev.x) and all(
        complex(v).imag == 0 for v, _ in spec.upper_global + spec.lower_global
    ) and all(complex(v).imag == 0 for r in spec.upper_per_variable + spec.lower_per_variable
              for v, _ in r)
    level_values = []
    count = 0
    small = 0
    prev_abs = None
    tail = math.inf
    for L in range(max_index):
        t = ev.terms(_simplex(L, spec.n))
        count += len(t)
        level_values.append(_fsum_complex(t))
        level_abs = math.fsum(np.abs(t))
        total = _fsum_complex(np.array(level_values))
        bound = tol * abs(total)
        if level_abs <= bound:
            small += 1
        else:
            small = 0
        if prev_abs is not None and prev_abs > 0:
            r = level_abs / prev_abs
            tail = level_abs * r / (1 - r) if r < 1 else math.inf
        elif level_abs == 0:
            tail = 0.0
        prev_abs = level_abs
        if small >= 2 and tail <= bound:
            value = total.real if real else total
            return SeriesValue(value, count, float(tail + level_abs), True)
    raise ConvergenceError(
        f"series not converged after {max_index} simplices ({count} terms)"
    )


@dataclass(frozen=True)
class ConvergenceReport:
    deltas: tuple
    case_label: str
    region_ok: bool | None
    diagnostics: str = ""
    rho: tuple | None = None


def _uniform_rows(rows, n) -> bool:
    return all(len(set(sh)) == 1 for _, sh in rows)


def _self_power(s: int) -> float:
    return abs(s) ** s if s != 0 else 1.0


def _log_E(spec: SDSpec, i: int, mu: np.ndarray) -> float:
    # log E_i, with |linear form| since negative shifts can make it change sign
    deg = 1 + sum(s for _, s in spec.lower_per_variable[i]) - sum(s for _, s in spec.upper_per_variable[i])
    out = deg * math.log(mu[i])
    for _, sh in spec.lower_global:
        if sh[i]:
            out += sh[i] * math.log(max(abs(float(np.dot(mu, sh))), 1e-300))
    for _, sh in spec.upper_global:
        if sh[i]:
            out -= sh[i] * math.log(max(abs(float(np.dot(mu, sh))), 1e-300))
    out += sum(math.log(_self_power(s)) for _, s in spec.lower_per_variable[i] if s > 0)
    out -= sum(math.log(_self_power(s)) for _, s in spec.upper_per_variable[i] if s > 0)
    return out


def _rho_estimates(spec: SDSpec) -> tuple:
    """Numeric min over mu > 0 of each E_i (multi-start, log coordinates)."""
    from scipy.optimize import minimize

    rng = np.random.default_rng(0)
    starts = rng.normal(scale=2.0, size=(_RESTARTS, spec.n))
    rhos = []
    for i in range(spec.n):
        f = lambda y: _log_E(spec, i, np.exp(np.clip(y, -50, 50)))
        best = min(minimize(f, y0, method="Nelder-Mead",
                            options={"xatol": 1e-8, "fatol": 1e-10, "maxiter": 600}).fun
                   for y0 in starts)
        # a run-away minimiser means the infimum is 0, not a tiny radius
        rhos.append(0.0 if best < -30 else math.exp(best))
    return tuple(rhos)


def _tail_diagnostic(spec: SDSpec, x):
    sums = sd_level_sums(spec, x, 33)
    if sums[24] == 0:
        return True, "series terminates or vanishes beyond level 24"
    ratio = (sums[32] / sums[24]) ** (1 / 8)
    return ratio < 1, f"level-sum ratio (S32/S24)^(1/8) = {ratio:.4g}"


def sd_classify(spec: SDSpec, x=None) -> ConvergenceReport:
    """Convergence case of the series and, if ``x`` is given, whether x lies
    in its region.

    Case I: all Delta_i > 0.  Case III: all Delta_i < 0.  Case II: all
    Delta_i = 0, refined to II(a)/II(b) when every global shift vector is
    constant across variables.  Otherwise (non-uniform Case II or mixed
    signs) the radii rho_i are estimated numerically and are only heuristic;
    region membership then comes from the decay of the simplex sums.
    """
    deltas = tuple(spec.deltas())
    n = spec.n
    if all(d > 0 for d in deltas):
        return ConvergenceReport(deltas, "I", True, "converges for all finite x")
    if all(d < 0 for d in deltas):
        ok = None if x is None else all(complex(v) == 0 for v in x)
        return ConvergenceReport(deltas, "III", ok, "diverges unless x = 0")
    if not all(d == 0 for d in deltas):
        if x is None:
            return ConvergenceReport(deltas, "unclassified", None, "mixed-sign Delta_i")
        ok, msg = _tail_diagnostic(spec, x)
        return ConvergenceReport(deltas, "unclassified", ok, "mixed-sign Delta_i; " + msg)

    if _uniform_rows(spec.upper_global, n) and _uniform_rows(spec.lower_global, n):
        G = []
        for i in range(n):
            g = 1.0
            for _, sh in spec.lower_global:
                g *= _self_power(sh[i])
            for _, s in spec.lower_per_variable[i]:
                g *= _self_power(s)
            for _, sh in spec.upper_global:
                g /= _self_power(sh[i])
            for _, s in spec.upper_per_variable[i]:
                g /= _self_power(s)
            G.append(g)
        omega = sum(sh[0] for _, sh in spec.upper_global) - sum(sh[0] for _, sh in spec.lower_global)
        label = "IIa" if omega > 0 else "IIb"
        ok = None
        if x is not None:
            r = [abs(complex(v)) / g for v, g in zip(x, G)]
            ok = sum(t ** (1 / omega) for t in r) < 1 if omega > 0 else max(r) < 1
        msg = f"G = {tuple(round(g, 12) for g in G)}, Omega = {omega}"
        return ConvergenceReport(deltas, label, ok, msg, tuple(G))

    rho = _rho_estimates(spec)
    msg = f"non-uniform shifts; numeric rho = {tuple(float(f'{r:.6g}') for r in rho)} (heuristic)"
    if x is None:
        return ConvergenceReport(deltas, "II", None, msg, rho)
    ok, tail_msg = _tail_diagnostic(spec, x)
    return ConvergenceReport(deltas, "II", ok, msg + "; " + tail_msg, rho)
