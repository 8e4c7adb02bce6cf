import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.polynomial import Polynomial

from quasipower.errors import DegenerateCovarianceError
from quasipower.lattice import LatticeDistribution
from quasipower.models import bernoulli_step, binomial_model, correlated_model, iid_model, rademacher_model
from quasipower.quasi_power import (PowerSeries, QuasiPowerModel, exponents, lattice_charfn, mean_cov,
                                    moment_polynomial, rate_experiment, series_exp, series_log, series_product,
                                    standardize)

from conftest import binomial_law


def s(m, order, j):
    return PowerSeries.variable(m, order, j)


def test_product_basics():
    one = PowerSeries.constant(2, 3, 1.0)
    a = PowerSeries(2, 3, {(1, 0): 2.0, (0, 2): -1.0, (1, 1): 0.5})
    assert series_product(a, one) == a
    st_ = series_product(s(2, 3, 0), s(2, 3, 1))
    assert st_.coeffs == {(1, 1): 1.0}
    one_plus = PowerSeries(2, 2, {(0, 0): 1.0, (1, 0): 1.0})
    sq = series_product(one_plus, one_plus)
    assert sq.coeffs == {(0, 0): 1.0, (1, 0): 2.0, (2, 0): 1.0}
    with pytest.raises(ValueError):
        series_product(PowerSeries(2, 3), PowerSeries(2, 2))
    with pytest.raises(ValueError):
        series_product(PowerSeries(1, 3), PowerSeries(2, 3))


def test_truncation():
    a = PowerSeries(1, 2, {(3,): 1.0, (1,): 1.0})
    assert a.coeffs == {(1,): 1.0}
    b = series_product(PowerSeries(1, 2, {(1,): 1.0}), PowerSeries(1, 2, {(2,): 1.0}))
    assert b.coeffs == {}


def test_exp_examples():
    assert series_exp(PowerSeries(2, 3)).coeffs == {(0, 0): 1.0}
    e = series_exp(s(1, 3, 0))
    assert [e[(k,)] for k in range(4)] == pytest.approx([1, 1, 0.5, 1 / 6], rel=1e-15)
    e2 = series_exp(s(2, 3, 0) + s(2, 3, 1))
    assert e2[(1, 1)] == pytest.approx(1.0)
    assert e2[(2, 1)] == pytest.approx(0.5)
    with pytest.raises(ValueError):
        series_exp(PowerSeries.constant(1, 2, 1.0))


coef = st.floats(-2, 2, allow_nan=False)


@settings(max_examples=40, deadline=None)
@given(st.lists(coef, min_size=9, max_size=9), st.lists(coef, min_size=9, max_size=9))
def test_exp_of_sum_is_product_of_exps(ca, cb):
    keys = [e for e in exponents(2, 3) if sum(e) > 0]
    a = PowerSeries(2, 3, dict(zip(keys, ca)))
    b = PowerSeries(2, 3, dict(zip(keys, cb)))
    lhs, rhs = series_exp(a + b), series_product(series_exp(a), series_exp(b))
    for k in exponents(2, 3):
        assert lhs[k] == pytest.approx(rhs[k], abs=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.lists(coef, min_size=4, max_size=4))
def test_log_inverts_exp(c):
    a = PowerSeries(1, 4, {(k + 1,): v for k, v in enumerate(c)})
    back = series_log(series_exp(a))
    for k in range(1, 5):
        assert back[(k,)] == pytest.approx(a[(k,)], abs=1e-11)


def test_log_requires_unit_constant():
    with pytest.raises(ValueError):
        series_log(PowerSeries.constant(1, 3, 2.0))


def test_binomial_cumulants():
    # log((1 + e^s)/2) = s/2 + s^2/8 - s^4/192 + ...
    u = binomial_model(1).u
    assert u[(1,)] == pytest.approx(0.5)
    assert u[(2,)] == pytest.approx(1 / 8)
    assert u[(3,)] == pytest.approx(0.0, abs=1e-15)
    assert u[(4,)] == pytest.approx(-1 / 192)


def test_normalisation_of_constants():
    u = PowerSeries(1, 2, {(0,): 3.0, (2,): 0.5})
    v = PowerSeries(1, 2, {(0,): -1.0, (1,): 0.2})
    model = QuasiPowerModel(u, v)
    assert model.u.constant_term() == 0 and model.v.constant_term() == 0


def test_moment_polynomial_examples():
    model = correlated_model()
    p0 = moment_polynomial(model, (0, 0))
    assert p0 == Polynomial([1.0])
    for j, e in enumerate([(1, 0), (0, 1)]):
        p = moment_polynomial(model, e)
        assert p.coef[0] == pytest.approx(model.v[e]) and p.coef[1] == pytest.approx(model.u[e])
    assert moment_polynomial(model, (2, 1)).degree() <= 3
    with pytest.raises(ValueError):
        moment_polynomial(model, (3, 2))


@pytest.mark.parametrize("model", [binomial_model(1), binomial_model(2), correlated_model()],
                         ids=["binomial1", "binomial2", "correlated"])
@pytest.mark.parametrize("n", [7, 40])
def test_exact_power_moments(model, n):
    law = model.exact_law(n)
    mean, cov = mean_cov(model, n)
    assert np.allclose(mean, law.mean(), rtol=1e-9, atol=0)
    assert np.allclose(cov, law.cov(), rtol=1e-9, atol=1e-12)
    for k in exponents(model.dimension, 3):
        predicted = moment_polynomial(model, k)(float(n)) * math.prod(math.factorial(i) for i in k)
        assert predicted == pytest.approx(law.moment(k), rel=1e-9)


def test_v_zero_mean_and_symmetric_step():
    model = binomial_model(1)
    assert mean_cov(model, 10)[0][0] == pytest.approx(5.0)
    sym = iid_model(LatticeDistribution(np.array([0.25, 0.5, 0.25]), -1.0, 1.0))
    assert abs(sym.u.gradient()[0]) < 1e-15
    assert abs(mean_cov(sym, 12)[0][0]) < 1e-14


def test_standardize_binomial():
    n = 64
    law = standardize(binomial_law(n), n / 2, math.sqrt(n / 4))
    assert abs(law.mean()[0]) < 1e-12
    assert law.cov()[0, 0] == pytest.approx(1.0, rel=1e-12)
    same = standardize(binomial_law(n), 0.0, 1.0)
    assert np.array_equal(same.offset, binomial_law(n).offset)


def test_lattice_charfn(rng):
    h = lattice_charfn(LatticeDistribution(np.array([0.5, 0.5]), -1.0, 2.0))
    t = rng.uniform(-4, 4, size=(30, 1))
    assert np.allclose(h(t), np.cos(t[:, 0]), atol=1e-15)


def test_rate_experiment_binomial():
    res = rate_experiment(binomial_model(1), [2**k for k in range(4, 11)])
    assert -0.62 <= res.slope <= -0.38
    assert np.all((res.doubling_ratios() > 0.6) & (res.doubling_ratios() < 0.8))


def test_rate_experiment_refuses_degenerate():
    with pytest.raises(DegenerateCovarianceError, match="rademacher"):
        rate_experiment(rademacher_model(), [4, 8])
    full = iid_model(LatticeDistribution.from_mapping({(0, 0): 0.5, (1, 1): 0.5}))
    with pytest.raises(DegenerateCovarianceError):
        rate_experiment(full, [4, 8])


def test_independent_2d_distance_vs_marginals():
    # for independent coordinates F = F1 F2, so the 2-d distance lies between the
    # 1-d distance and twice it
    model = binomial_model(2)
    one = rate_experiment(binomial_model(1), [64]).rows[0][2]
    two = rate_experiment(model, [64]).rows[0][2]
    assert one <= two <= 2 * one
