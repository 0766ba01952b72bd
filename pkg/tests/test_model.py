import numpy as np
import pytest

from pvar.errors import DimensionMismatch, LagOutOfRange, NotCausal
from pvar.model import (PeriodicSeries, PvarModel, build_lifted_var,
                        companion_spectral_radius, is_causal, ma_coefficients,
                        require_causal)
from pvar.noise import NoiseSpec, gen_noise, simulate


def scalar_model(phis, sigmas=None):
    s = len(phis)
    sigmas = sigmas or [1.0] * s
    return PvarModel(s=s, d=1, phi=[[np.array([[f]])] for f in phis],
                     sigma=[np.array([[v]]) for v in sigmas])


def two_season_model():
    return PvarModel(
        s=2, d=2,
        phi=[[np.diag([0.3, -0.6])], [np.diag([-0.7, 0.15])]],
        sigma=[np.diag([1.5, 2.5]), np.diag([1.0, 0.5])],
    )


def test_lifted_var_two_season_order_one():
    model = two_season_model()
    phi0, phis = build_lifted_var(model)
    d = 2
    # blocks in reverse season order: row 0 is season 2, row 1 is season 1
    assert np.allclose(phi0[:d, :d], np.eye(d))
    assert np.allclose(phi0[d:, d:], np.eye(d))
    assert np.allclose(phi0[:d, d:], -model.phi[1][0])
    assert np.allclose(phi0[d:, :d], 0.0)
    assert len(phis) == 1
    assert np.allclose(phis[0][:d, :d], 0.0)
    assert np.allclose(phis[0][:d, d:], 0.0)
    assert np.allclose(phis[0][d:, :d], model.phi[0][0])
    assert np.allclose(phis[0][d:, d:], 0.0)


def test_lifted_var_stacked_order():
    # p = 3 on s = 2 forces p* = 2 stacked lags
    model = PvarModel(
        s=2, d=1,
        phi=[[np.array([[0.1]]), np.array([[0.2]]), np.array([[0.3]])],
             [np.array([[0.4]]), np.array([[0.5]]), np.array([[0.6]])]],
        sigma=[np.eye(1), np.eye(1)],
    )
    phi0, phis = build_lifted_var(model)
    assert len(phis) == 2
    # season 2 row: lag k*s - 0 + c
    assert phis[0][0, 0] == pytest.approx(0.5)   # lag 2, season 2
    assert phis[0][0, 1] == pytest.approx(0.6)   # lag 3, season 2
    assert phis[0][1, 0] == pytest.approx(0.1)   # lag 1, season 1
    assert phis[0][1, 1] == pytest.approx(0.2)   # lag 2, season 1
    assert phis[1][1, 0] == pytest.approx(0.3)   # lag 3, season 1
    assert phis[1][0, :].tolist() == [0.0, 0.0]


def test_causality_scalar_product_rule():
    # for scalar periodic AR(1) the companion radius is the coefficient product
    assert companion_spectral_radius(scalar_model([0.3, -0.7])) == pytest.approx(0.21)
    assert is_causal(scalar_model([0.3, -0.7]))
    assert companion_spectral_radius(scalar_model([2.0, 0.6])) == pytest.approx(1.2)
    assert not is_causal(scalar_model([2.0, 0.6]))
    with pytest.raises(NotCausal):
        require_causal(scalar_model([2.0, 0.6]))
    # large within-season coefficients are fine if the cycle contracts
    assert is_causal(scalar_model([-1.43, 0.46, 1.23, 0.30, 0.90]))


def test_causality_boundary():
    assert not is_causal(scalar_model([1.0, 1.0]))


def test_ma_coefficients_reproduce_simulation():
    model = two_season_model()
    coeffs = ma_coefficients(model, 60)
    n_cycles = 3
    eps = gen_noise(model.sigma, n_cycles + 40, NoiseSpec("strong"),
                    np.random.default_rng(3))
    # build Y directly from the MA weights and compare with the recursion
    total = (n_cycles + 40) * model.s
    y_rec = np.zeros((total, model.d))
    for t in range(total):
        v = t % model.s + 1
        acc = eps[t].copy()
        for k in range(1, model.p(v) + 1):
            if t - k >= 0:
                acc += model.phi_at(v, k) @ y_rec[t - k]
        y_rec[t] = acc
    t = total - 1          # a season-2 time (total even)
    v = (t % model.s) + 1
    y_ma = np.zeros(model.d)
    for i, c in enumerate(coeffs[v - 1]):
        if t - i < 0:
            break
        y_ma += c @ eps[t - i]
    assert np.allclose(y_ma, y_rec[t], atol=1e-10)


def test_ma_leading_coefficient_is_identity():
    coeffs = ma_coefficients(two_season_model(), 2)
    for per_season in coeffs:
        assert np.array_equal(per_season[0], np.eye(2))


def test_model_validation():
    with pytest.raises(DimensionMismatch):
        PvarModel(s=2, d=2, phi=[[np.eye(2)]], sigma=[np.eye(2), np.eye(2)])
    with pytest.raises(DimensionMismatch):
        PvarModel(s=1, d=2, phi=[[np.eye(3)]], sigma=[np.eye(2)])


def test_periodic_series_indexing():
    data = np.arange(8.0).reshape(4, 2)
    pre = np.array([[-1.0, -2.0]])
    ser = PeriodicSeries(s=2, data=data, presample=pre)
    assert ser.n_cycles == 2
    assert np.array_equal(ser.at(1), [0.0, 1.0])
    assert np.array_equal(ser.at(4), [6.0, 7.0])
    assert np.array_equal(ser.at(0), [-1.0, -2.0])
    with pytest.raises(LagOutOfRange):
        ser.at(-1)


def test_periodic_series_requires_whole_cycles():
    with pytest.raises(DimensionMismatch):
        PeriodicSeries(s=2, data=np.zeros((3, 1)))


def test_simulate_shapes_and_presample():
    model = two_season_model()
    ser = simulate(model, 50, seed=0)
    assert ser.data.shape == (100, 2)
    assert ser.presample.shape == (1, 2)
    assert ser.s == 2
