import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypersf.errors import ConvergenceError, DomainError
from hypersf.geometry import GeometryParams
from hypersf.quadrature import (
    integrate_1d,
    revolve_oracle,
    surface_integral_oracle,
    surface_integral_quadrant,
    volume_slice_oracle,
)

# lateral areas from a 30-digit 2D quadrature, (a, b, c, H) -> S
GOLDEN_AREA = {
    (1.2, 1.0, 2.0, 1.0): 7.2838221256187081,
    (1.01, 1.0, 1.5, 0.5): 3.2400979292403315,
    (1.0, 1.0, 2.0, 1.0): 6.5965856151281433,
    (1.5, 1.0, 3.0, 2.0): 17.138827859390223,
}

# integrand, lo, hi, exact
CORPUS = [
    (lambda t: np.sin(t) ** 2, 0.0, math.pi / 2, math.pi / 4),
    (lambda r: 1 / r - r, 1.0, math.sqrt(2), math.log(2) / 2 - 0.5),
    (lambda t: np.cos(t) ** 2 / 4 + np.sin(t) ** 2, -math.pi, math.pi, 5 * math.pi / 4),
    (np.exp, 0.0, 3.0, math.exp(3) - 1),
    (lambda x: 1 / (1 + x * x), -5.0, 5.0, 2 * math.atan(5)),
    (lambda x: np.sqrt(x), 0.0, 2.0, 2 / 3 * 2 ** 1.5),
]


@pytest.mark.parametrize("f, lo, hi, exact", CORPUS)
def test_corpus(f, lo, hi, exact):
    r = integrate_1d(f, lo, hi, tol=1e-12)
    assert r.value == pytest.approx(exact, rel=1e-11)
    assert r.evaluations >= 15


@pytest.mark.parametrize("f, lo, hi, exact", CORPUS)
def test_requested_tolerance_is_met(f, lo, hi, exact):
    r = integrate_1d(f, lo, hi, tol=1e-6)
    assert abs(r.value - exact) <= 1e-6 * abs(exact)


@pytest.mark.parametrize("f, lo, hi, exact", CORPUS)
def test_error_estimate_bounds_refinement(f, lo, hi, exact):
    r1 = integrate_1d(f, lo, hi, tol=1e-8)
    r2 = integrate_1d(f, lo, hi, tol=5e-9)
    assert abs(r2.value - r1.value) <= max(r1.est_error, 1e-15)


@pytest.mark.parametrize("deg", range(10))
def test_polynomials_exact_on_one_panel(deg):
    r = integrate_1d(lambda x: x ** deg, -0.5, 1.0, tol=1.0)
    assert r.evaluations == 15
    exact = (1.0 ** (deg + 1) - (-0.5) ** (deg + 1)) / (deg + 1)
    assert r.value == pytest.approx(exact, rel=1e-14, abs=1e-15)


def test_orientation_and_empty_interval():
    assert integrate_1d(np.exp, 1.0, 0.0).value == pytest.approx(1 - math.e, rel=1e-13)
    assert integrate_1d(np.exp, 2.0, 2.0).value == 0.0


def test_scalar_only_integrand():
    assert integrate_1d(math.cos, 0.0, 1.0).value == pytest.approx(math.sin(1.0), rel=1e-12)


def test_complex_integrand():
    r = integrate_1d(lambda t: np.exp(1j * t), 0.0, math.pi)
    assert abs(r.value - 2j) < 1e-12


def test_non_convergence():
    with pytest.raises(ConvergenceError):
        integrate_1d(lambda x: np.sin(1 / x), 1e-9, 1.0, tol=1e-14, max_panels=50)


@pytest.mark.parametrize("key", sorted(GOLDEN_AREA))
def test_surface_oracle_golden(key):
    r = surface_integral_oracle(GeometryParams(*key, allow_circular=True), tol=1e-11)
    assert r.value == pytest.approx(GOLDEN_AREA[key], rel=1e-10)
    assert r.est_error < 1e-9 * r.value


@pytest.mark.parametrize("key", sorted(GOLDEN_AREA))
def test_two_substitutions_agree(key):
    p = GeometryParams(*key, allow_circular=True)
    t = surface_integral_oracle(p, tol=1e-11, substitution="t").value
    v = surface_integral_oracle(p, tol=1e-11, substitution="cosh").value
    assert t == pytest.approx(v, rel=1e-9)


def test_unknown_substitution():
    with pytest.raises(ValueError):
        surface_integral_oracle(GeometryParams(1.2, 1, 2, 1), substitution="polar")


def test_empty_cap():
    assert surface_integral_oracle(GeometryParams(1.2, 1, 2, 0)).value == 0.0
    assert surface_integral_oracle(GeometryParams(1.2, 1, 2, 1e-8)).value < 1e-6


@pytest.mark.parametrize("a, c, H", [(1, 2, 1), (1, 1, 1), (2, 1, 3)])
def test_revolve_agrees_with_surface_oracle(a, c, H):
    p = GeometryParams(a, a, c, H, allow_circular=True)
    assert revolve_oracle(p).value == pytest.approx(surface_integral_oracle(p, tol=1e-11).value, rel=1e-9)


def test_revolve_requires_circle():
    with pytest.raises(DomainError):
        revolve_oracle(GeometryParams(1.2, 1, 2, 1))
    assert revolve_oracle(GeometryParams(1, 1, 1, 0, allow_circular=True)).value == 0.0


def test_quadrant_symmetry():
    p = GeometryParams(1.3, 0.8, 1.7, 1.1)
    q1 = surface_integral_quadrant(p, 0.0, math.pi / 2, tol=1e-11).value
    q2 = surface_integral_quadrant(p, math.pi / 2, math.pi, tol=1e-11).value
    q3 = surface_integral_quadrant(p, -math.pi / 2, 0.0, tol=1e-11).value
    assert q2 == pytest.approx(q1, rel=1e-10)
    assert q3 == pytest.approx(q1, rel=1e-10)
    full = surface_integral_quadrant(p, -math.pi, math.pi, tol=1e-11).value
    assert full == pytest.approx(4 * q1, rel=1e-10)


@pytest.mark.parametrize("params, expected", [
    ((1, 1, 1, 1), 4 * math.pi / 3),
    ((2, 1, 1, 1), 8 * math.pi / 3),
    ((1.2, 1, 2, 0), 0.0),
])
def test_volume_slices(params, expected):
    p = GeometryParams(*params, allow_circular=True)
    assert volume_slice_oracle(p).value == pytest.approx(expected, rel=1e-13, abs=1e-15)


@settings(max_examples=20, deadline=None)
@given(st.floats(1.0, 3.0), st.floats(0.3, 1.0), st.floats(0.5, 3.0), st.floats(0.1, 2.0), st.floats(1.5, 3.0))
def test_area_scaling(ratio, b, c, H, k):
    p = GeometryParams(ratio * b, b, c, H, allow_circular=True)
    s1 = surface_integral_oracle(p, tol=1e-10).value
    s2 = surface_integral_oracle(p.scaled(k), tol=1e-10).value
    assert s2 == pytest.approx(k * k * s1, rel=1e-8)
