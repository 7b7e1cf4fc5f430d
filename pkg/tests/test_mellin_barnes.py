import math
import warnings

import pytest

from hypersf.errors import ContourError, ConvergenceError, DomainError, PrecisionWarning
from hypersf.hyp_series import PFQParams, pfq_series
from hypersf.mellin_barnes import (
    ContourSpec,
    check_g_convergence,
    choose_contour,
    mb_1f0,
    mb_meijer_g,
    mb_pfq,
)


def test_contour_spec_validation():
    with pytest.raises(ValueError):
        ContourSpec(0.0, -1.0)
    with pytest.raises(ValueError):
        ContourSpec(0.0, 10.0, nodes=16)


def test_choose_contour_separates_families():
    c = choose_contour([-0.5], [0.0])
    assert -0.5 < c.abscissa < 0.0
    assert c.half_height > 10
    with pytest.raises(ContourError):
        choose_contour([0.5], [0.0])
    assert choose_contour([], [2.0]).abscissa == 1.5


@pytest.mark.parametrize("a, z, expected", [
    (0.5, -3, 0.5),
    (2, -1, 0.25),
    (1 / 3, -0.7, 1.7 ** (-1 / 3)),
])
def test_mb_1f0_examples(a, z, expected):
    assert mb_1f0(a, z) == pytest.approx(expected, rel=1e-10)


@pytest.mark.parametrize("a", [1 / 3, 1 / 2, 2, 5 / 2])
@pytest.mark.parametrize("z", [-0.3, -1, -3, -10])
def test_mb_1f0_grid(a, z):
    assert mb_1f0(a, z) == pytest.approx((1 - z) ** (-a), rel=1e-8)


def test_mb_1f0_complex_argument():
    z = 0.5 + 0.3j
    assert abs(mb_1f0(0.7, z) - (1 - z) ** -0.7) < 1e-12


def test_mb_1f0_errors():
    with pytest.raises(DomainError):
        mb_1f0(0.5, 2.0)
    with pytest.raises(DomainError):
        mb_1f0(-1, -0.5)


def test_short_window_is_widened():
    assert mb_1f0(0.5, -3, contour=ContourSpec(-0.25, 2.0, 64)) == pytest.approx(0.5, rel=1e-10)


def test_mb_1f0_unreachable_tolerance_warns():
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        mb_1f0(0.5, -3, tol=1e-19)
    assert any(issubclass(w.category, PrecisionWarning) for w in caught)


@pytest.mark.parametrize("upper, lower, z, expected", [
    ((0.5, 1), (2,), -1, 2 * (math.sqrt(2) - 1)),
    ((1,), (2,), -1, 1 - math.exp(-1)),
    ((0.5, 1.5), (1.5,), -1, 1 / math.sqrt(2)),
])
def test_mb_pfq_examples(upper, lower, z, expected):
    r = mb_pfq(PFQParams(upper, lower, z))
    assert r.value == pytest.approx(expected, rel=1e-10)
    assert r.converged


@pytest.mark.parametrize("upper, lower", [
    ((0.5, 1), (2,)), ((0.3, 1.7), (2.5,)), ((1, 1, 0.5), (2, 1.5)), ((0.25, 0.75, 1.2), (1.1, 2.2)),
])
@pytest.mark.parametrize("z", [-0.1, -0.5, -0.9])
def test_mb_pfq_matches_series(upper, lower, z):
    p = PFQParams(upper, lower, z)
    assert mb_pfq(p).value == pytest.approx(pfq_series(p).value, rel=1e-6)


def test_mb_pfq_beyond_series_radius():
    # 2F1(1/2, 1; 2; z) = 2 (1 - sqrt(1 - z)) / z also for z < -1
    z = -7.0
    assert mb_pfq(PFQParams((0.5, 1), (2,), z)).value == pytest.approx(2 * (1 - math.sqrt(1 - z)) / z, rel=1e-10)


def test_mb_pfq_errors():
    with pytest.raises(DomainError):
        mb_pfq(PFQParams((-1, 1), (2,), -0.5))
    with pytest.raises(DomainError):
        mb_pfq(PFQParams((1,), (2,), 0.5))  # p = q needs |arg(-z)| < pi/2
    with pytest.raises(DomainError):
        mb_pfq(PFQParams((1, 1), (2,), 0.5))  # on the cut
    with pytest.raises(DomainError):
        mb_pfq(PFQParams((1,), (2, 3), -0.5))


def test_node_doubling_within_error_estimate():
    p = PFQParams((0.5, 1), (2,), -3.0)
    base = ContourSpec(-0.25, 20.0, 128)
    r1 = mb_pfq(p, contour=base)
    r2 = mb_pfq(p, contour=ContourSpec(base.abscissa, base.half_height, 256))
    assert abs(r2.value - r1.value) <= r1.est_error


@pytest.mark.parametrize("z", [0.5, 1, 2])
def test_g1001_is_exponential(z):
    r = mb_meijer_g([], [0], 1, 0, z)
    assert r.value == pytest.approx(math.exp(-z), rel=1e-8)


def test_g1001_against_residue_sum():
    z = 1.0
    residue_sum = math.fsum((-z) ** k / math.factorial(k) for k in range(40))
    assert mb_meijer_g([], [0], 1, 0, z).value == pytest.approx(residue_sum, rel=1e-10)


def test_g2222_at_unit_argument():
    a1, a2, b1, b2 = 0.3, 0.6, 0.1, 0.2
    expected = (math.gamma(1 - a1 + b1) * math.gamma(1 - a1 + b2) * math.gamma(1 - a2 + b1)
                * math.gamma(1 - a2 + b2) / math.gamma(2 - a1 - a2 + b1 + b2))
    assert mb_meijer_g([a1, a2], [b1, b2], 2, 2, 1.0).value == pytest.approx(expected, rel=1e-10)


# G^{2,2}_{3,3}(z | 3/2, -m; 2+n / 0, 1+n; 0) from 30-digit references
KERNEL_REFERENCE = {
    (0, 0, 2): -10.8084544394486,
    (0, 0, 4): -14.7500606146373,
    (0, 0, 10): -22.7882169270328,
    (1, 2, 4): -4.38510238572646,
    (2, 1, 10): -28.194197315373,
}


@pytest.mark.parametrize("key", sorted(KERNEL_REFERENCE))
def test_interleaved_kernel_with_residue_correction(key):
    m, n, z = key
    r = mb_meijer_g([1.5, -m, 2 + n], [0, 1 + n, 0], 2, 2, z)
    assert r.value == pytest.approx(KERNEL_REFERENCE[key], rel=1e-12)


def test_mb_meijer_g_errors():
    with pytest.raises(DomainError):
        mb_meijer_g([1.0], [0.0], 1, 1, 0.5)     # a1 - b1 = 1
    with pytest.raises(DomainError):
        mb_meijer_g([0.5], [0.0], 0, 1, 0.5)     # m = 0
    with pytest.raises(ConvergenceError):
        mb_meijer_g([0.5, 0.5], [0.0, 0.1], 1, 0, 0.5)  # Lambda = -1/2


def test_check_g_convergence():
    r = check_g_convergence([], [0], 1, 0, 1.0)
    assert r.Lambda == 0.5 and r.conditions["i"]
    assert not check_g_convergence([], [0], 1, 0, -1.0).conditions["i"]
    r = check_g_convergence([0.3, 0.6], [0.1, 0.2], 2, 2, 0.5)
    assert r.Lambda == 2 and r.conditions["iv"] and not r.conditions["v"]
    r = check_g_convergence([1.5, 0, 2], [0, 1, 0], 2, 2, 4.0)
    assert r.Lambda == 1 and r.conditions["v"]
    assert r.nu == pytest.approx(1 - 3.5)
    assert "i" in r.applicable
