import math

import mpmath
import numpy as np
import pytest
from scipy import integrate

from quasipower import smoothing_kernel as sk


def density_mp(z):
    if z == 0:
        return mpmath.mpf(3) / (8 * mpmath.pi)
    return 3 / (8 * mpmath.pi) * (mpmath.sin(z / 4) / (z / 4)) ** 4


def test_density_values():
    assert sk.density_f_P(0.0) == pytest.approx(3 / (8 * math.pi), rel=1e-15)
    assert sk.density_f_P(0.0) == pytest.approx(0.1193662, abs=1e-7)
    assert sk.density_f_P(4 * math.pi) == pytest.approx(0.0, abs=1e-18)
    z = np.linspace(-50, 50, 1001)
    assert np.all(sk.density_f_P(z) >= 0)
    assert np.allclose(sk.density_f_P(z), sk.density_f_P(-z), rtol=0, atol=0)


def test_density_normalisation():
    Z = 1e3
    mass = 2 * sk._panel_integral(np.ones_like, 0.0, Z)
    # neglected mass beyond |z| = Z is at most 2 * 3/(8 pi) * 256 / (3 Z^3)
    assert abs(mass - 1) < 1e-6
    assert abs(mass + 2 * sk.tail_mass_estimate(Z) - 1) < 1e-10


def test_charfn_branches():
    assert sk.charfn_phi_P(0.0) == 1.0
    assert sk.charfn_phi_P(0.5) == 0.25
    assert 1 - 6 * 0.25 + 6 * 0.125 == 2 * 0.5**3 == 0.25
    assert sk.charfn_phi_P(1.5) == 0.0
    assert sk.charfn_phi_P(-0.3) == sk.charfn_phi_P(0.3)
    t = np.linspace(-2, 2, 4001)
    v = sk.charfn_phi_P(t)
    assert np.max(np.abs(np.diff(v))) < 2e-3  # continuity on a fine grid
    assert np.all(v[np.abs(t) >= 1] == 0)


@pytest.mark.parametrize("t", [0.0, 0.25, 0.6, 0.95, 1.1])
def test_fourier_against_scipy_oracle(t):
    # independent oracle: QUADPACK with cosine weight on the same truncated range
    val = 0.0
    edges = np.arange(0, 1e3 + 1, 4 * math.pi)
    for a, b in zip(edges[:-1], edges[1:]):
        val += integrate.quad(lambda w: float(sk.density_f_P(w)), a, b, weight="cos", wvar=t)[0]
    assert 2 * val == pytest.approx(sk.charfn_phi_P(t), abs=1e-6)


def test_fourier_grid():
    for t in np.round(np.arange(-12, 13) / 10, 12):
        assert abs(sk.fourier_transform_f_P(t) - sk.charfn_phi_P(t)) <= 1e-6


def test_second_moment():
    assert abs(sk.second_moment_from_charfn() - 12) <= 1e-4
    m2 = sk.truncated_moment(2, 1e5)
    assert 12 - 1e-3 <= m2 <= 12


def test_first_absolute_moment():
    e_abs = sk.truncated_moment(1, 1e5)
    assert e_abs <= sk.C2
    # numeric value, roughly 12 ln 2 / pi; no closed form is asserted
    assert 2.6 < e_abs < 2.7


def test_constants():
    assert sk.C2 == 12 / math.pi
    assert sk.constant_C1(1) == pytest.approx((128 / math.pi) ** (1 / 3), rel=1e-15)
    assert sk.constant_C1(1) == pytest.approx(3.4410, abs=1e-4)


@pytest.mark.parametrize("m", range(1, 9))
def test_lambda_quantile(m):
    lam = sk.solve_lambda(m, tol=1e-8)
    target = 0.75 ** (1 / m)
    assert lam <= sk.constant_C1(m)
    assert abs(sk.cdf_P(lam) - target) <= 1e-8
    oracle = mpmath.mpf(1) / 2 + mpmath.quad(density_mp, [0, lam])
    assert abs(float(oracle) - target) <= 1e-8


def test_lambda_monotone():
    lams = [sk.solve_lambda(m) for m in range(1, 9)]
    assert all(a < b for a, b in zip(lams, lams[1:]))


def test_lambda_errors():
    with pytest.raises(ValueError):
        sk.solve_lambda(0)
    with pytest.raises(ValueError):
        sk.solve_lambda(2, tol=1e-13)


def test_kernel_Q():
    assert sk.kernel_Q_charfn(np.zeros(2), 2.0) == 1.0
    assert sk.kernel_Q_charfn(np.array([1.0, 1.0]), 2.0) == pytest.approx(0.0625, abs=1e-15)
    assert sk.kernel_Q_charfn(np.array([2.0, 0.1]), 2.0) == 0.0
    assert sk.kernel_Q_charfn(np.array([0.3, -2.5]), 2.0) == 0.0
    with pytest.raises(ValueError):
        sk.kernel_Q_charfn(np.zeros(2), 0.0)


def test_kernel_Q_density_integrates_to_one():
    T = 2.0
    one_d = integrate.quad(lambda z: float(sk.kernel_Q_density(np.array([z]), T)), -400, 400, limit=400)[0]
    assert one_d == pytest.approx(1.0, abs=1e-5)


@pytest.mark.parametrize("m", [1, 2, 3])
@pytest.mark.parametrize("theta", [1, -1])
def test_shifted_orthant_mass(m, theta):
    assert abs(sk.shifted_orthant_mass(m, 3.0, theta) - 0.75) <= 1e-6


@pytest.mark.parametrize("theta", [1, -1])
def test_shifted_abs_moment(theta):
    T = 3.0
    lam = sk.solve_lambda(2)
    assert sk.shifted_abs_moment(T, theta, lam) <= (sk.C2 + lam) / T + 1e-9
