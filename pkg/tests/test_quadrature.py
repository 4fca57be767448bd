import math

import numpy as np
import pytest

from hyperradial import DomainError, QuadratureError, Tolerance, integrate, integrate_radial


def test_gaussian():
    res = integrate(lambda x: np.exp(-(x**2)), -10.0, 10.0)
    assert res.value == pytest.approx(math.sqrt(math.pi), rel=1e-12)
    assert res.converged and res.method == "tanh_sinh"


def test_polynomial():
    res = integrate(lambda x: x**3, 0.0, 1.0)
    assert res.value == pytest.approx(0.25, rel=1e-12)


def test_reversed_bounds_flip_sign():
    forward = integrate(lambda x: x**2, 0.0, 2.0).value
    backward = integrate(lambda x: x**2, 2.0, 0.0).value
    assert backward == pytest.approx(-forward, rel=1e-13)


def test_degenerate_interval():
    assert integrate(lambda x: x, 1.0, 1.0).value == 0.0


def test_endpoint_singularity():
    # integrable 1/sqrt(x) endpoint: tanh-sinh territory
    res = integrate(lambda x: 1.0 / np.sqrt(x), 0.0, 1.0)
    assert res.value == pytest.approx(2.0, rel=1e-10)


def test_radial_exponential():
    res = integrate_radial(lambda r: np.exp(-r), 1e-12, 60.0)
    assert res.value == pytest.approx(1.0, rel=1e-10)


def test_radial_requires_positive_bounds():
    with pytest.raises(DomainError):
        integrate_radial(lambda r: r, 0.0, 1.0)
    with pytest.raises(DomainError):
        integrate_radial(lambda r: r, -1.0, 1.0)


def test_rejects_infinite_bounds():
    with pytest.raises(DomainError):
        integrate(lambda x: np.exp(-x * x), 0.0, math.inf)


def test_gauss_kronrod_fallback():
    # capped tanh-sinh levels cannot resolve 80 oscillation periods; QUADPACK can
    tol = Tolerance(rel=1e-4, abs=1e-6, max_subdivisions=3)
    res = integrate(lambda x: np.sin(50.0 * x), 0.0, 10.0, tol)
    assert res.method == "gauss_kronrod"
    assert res.converged
    assert res.value == pytest.approx((1.0 - math.cos(500.0)) / 50.0, rel=1e-8)


def test_nonconvergent_raises_with_diagnostics():
    tol = Tolerance(rel=1e-12, abs=1e-15, max_subdivisions=3)
    with pytest.raises(QuadratureError, match="failed to converge"):
        integrate(lambda x: np.sin(1.0 / np.maximum(x, 1e-300)), 1e-8, 1.0, tol)


def test_deterministic():
    runs = [integrate(lambda x: np.exp(-x) * np.sin(3 * x), 0.0, 8.0).value for _ in range(2)]
    assert runs[0] == runs[1]


def test_float_conversion():
    res = integrate(lambda x: np.ones_like(x), 0.0, 2.0)
    assert float(res) == pytest.approx(2.0, rel=1e-13)
