"""Posterior-mean GP regression contracts."""

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from gpdiff._linalg import chol_factor
from gpdiff.exceptions import NumericsError
from gpdiff.gp import GPRegressor
from gpdiff.kernels import Hyperparameters, cov_matrix


def dense_posterior_mean(params, X, y, Xq):
    """Reference prediction via explicit matrix inverse."""
    resid = y - params.mean_offset
    A = cov_matrix(params, X) + params.nugget_std**2 * np.eye(len(X))
    alpha = np.linalg.inv(A) @ resid
    return params.mean_offset + cov_matrix(params, Xq, X) @ alpha


@pytest.fixture
def params_1d():
    return Hyperparameters(signal_std=2.0, lengthscales=[0.3], nugget_std=0.2)


class TestFit:
    def test_scalar_weight(self):
        """One point at the origin: weight is y / (signal_var + nugget_var)."""
        p = Hyperparameters(signal_std=1.0, lengthscales=[1.0], nugget_std=1.0)
        model = GPRegressor(params=p).fit([[0.0]], [2.0])
        np.testing.assert_allclose(model.alpha_, [1.0], rtol=1e-12)

    def test_weights_solve_regularized_system(self, params_1d):
        rng = np.random.default_rng(10)
        X = rng.uniform(0.0, 1.0, size=(40, 1))
        y = np.sin(4.0 * X[:, 0]) + 0.2 * rng.standard_normal(40)
        model = GPRegressor(params=params_1d).fit(X, y)
        A = cov_matrix(params_1d, X) + params_1d.nugget_std**2 * np.eye(40)
        resid = y - params_1d.mean_offset
        rel = np.linalg.norm(A @ model.alpha_ - resid) / np.linalg.norm(resid)
        assert rel <= 1e-8

    def test_fit_returns_self(self, params_1d):
        model = GPRegressor(params=params_1d)
        assert model.fit([[0.0], [1.0]], [0.0, 1.0]) is model

    def test_mean_offset_reproduced_for_constant_data(self):
        p = Hyperparameters(
            signal_std=1.0, lengthscales=[0.5], nugget_std=0.1, mean_offset=3.0
        )
        X = np.linspace(0.0, 1.0, 9)[:, None]
        model = GPRegressor(params=p).fit(X, np.full(9, 3.0))
        np.testing.assert_allclose(model.predict([[0.25], [0.9]]), 3.0, rtol=1e-12)

    def test_linearity_in_responses(self, params_1d):
        rng = np.random.default_rng(11)
        X = rng.uniform(0.0, 1.0, size=(15, 1))
        y1 = rng.standard_normal(15)
        y2 = rng.standard_normal(15)
        a1 = GPRegressor(params=params_1d).fit(X, y1).alpha_
        a2 = GPRegressor(params=params_1d).fit(X, y2).alpha_
        a12 = GPRegressor(params=params_1d).fit(X, 2.0 * y1 - 3.0 * y2).alpha_
        np.testing.assert_allclose(a12, 2.0 * a1 - 3.0 * a2, atol=1e-10)

    def test_large_nugget_shrinks_toward_mean(self):
        p = Hyperparameters(
            signal_std=1.0, lengthscales=[0.3], nugget_std=100.0, mean_offset=1.0
        )
        X = np.linspace(0.0, 1.0, 20)[:, None]
        y = 1.0 + np.sin(6.0 * X[:, 0])
        preds = GPRegressor(params=p).fit(X, y).predict(X)
        assert np.max(np.abs(preds - 1.0)) < 0.05 * np.max(np.abs(y - 1.0))

    def test_dimension_mismatch_rejected(self, params_1d):
        with pytest.raises(ValueError, match="lengthscale"):
            GPRegressor(params=params_1d).fit([[0.0, 0.0], [1.0, 1.0]], [0.0, 1.0])

    def test_nonfinite_responses_rejected(self, params_1d):
        with pytest.raises(ValueError, match="non-finite"):
            GPRegressor(params=params_1d).fit([[0.0], [1.0]], [np.nan, 1.0])

    def test_mismatched_lengths_rejected(self, params_1d):
        with pytest.raises(ValueError, match="rows"):
            GPRegressor(params=params_1d).fit([[0.0], [1.0]], [1.0, 2.0, 3.0])

    def test_duplicate_rows_rescued_by_jitter(self):
        p = Hyperparameters(signal_std=1.0, lengthscales=[0.5], nugget_std=1e-9)
        X = np.array([[0.2], [0.2], [0.7]])
        model = GPRegressor(params=p).fit(X, [1.0, 1.0, 2.0])
        assert model.jitter_ > 0.0
        assert np.all(np.isfinite(model.alpha_))


class TestPredict:
    def test_scalar_prediction(self):
        """Hand-computed single-point posterior mean."""
        p = Hyperparameters(signal_std=1.0, lengthscales=[1.0], nugget_std=1.0)
        model = GPRegressor(params=p).fit([[0.0]], [2.0])
        np.testing.assert_allclose(model.predict([[0.0]]), [1.0], rtol=1e-12)
        np.testing.assert_allclose(model.predict([[1.0]]), [np.exp(-1.0)], rtol=1e-12)

    def test_matches_dense_inverse_oracle(self):
        rng = np.random.default_rng(12)
        for trial in range(20):
            n = int(rng.integers(2, 9))
            d = int(rng.integers(1, 3))
            p = Hyperparameters(
                signal_std=float(rng.uniform(0.5, 3.0)),
                lengthscales=rng.uniform(0.2, 2.0, size=d),
                nugget_std=float(rng.uniform(0.05, 1.0)),
                mean_offset=float(rng.uniform(-1.0, 1.0)),
            )
            X = rng.uniform(-1.0, 1.0, size=(n, d))
            y = rng.standard_normal(n)
            Xq = rng.uniform(-1.0, 1.0, size=(6, d))
            got = GPRegressor(params=p).fit(X, y).predict(Xq)
            want = dense_posterior_mean(p, X, y, Xq)
            np.testing.assert_allclose(got, want, rtol=1e-8, atol=1e-12)

    def test_unfitted_raises(self, params_1d):
        with pytest.raises(NotFittedError):
            GPRegressor(params=params_1d).predict([[0.0]])

    def test_query_dimension_checked(self, params_1d):
        model = GPRegressor(params=params_1d).fit([[0.0], [1.0]], [0.0, 1.0])
        with pytest.raises(ValueError, match="columns"):
            model.predict([[0.0, 1.0]])

    def test_one_dim_inputs_accepted_as_column(self, params_1d):
        model = GPRegressor(params=params_1d).fit(np.linspace(0, 1, 8), np.zeros(8))
        assert model.predict(np.array([0.3, 0.6])).shape == (2,)


class TestEstimatorApi:
    def test_get_params_round_trip(self, params_1d):
        model = GPRegressor(params=params_1d)
        assert model.get_params()["params"] == params_1d
        cloned = clone(model)
        assert cloned.params == params_1d

    def test_auto_fit_without_params(self):
        rng = np.random.default_rng(13)
        X = rng.uniform(0.0, 1.0, size=(50, 1))
        y = np.sin(5.0 * X[:, 0]) + 0.1 * rng.standard_normal(50)
        model = GPRegressor().fit(X, y)
        assert model.params_.n_dims == 1
        # interpolation should beat predicting the plain mean
        resid = y - model.predict(X)
        assert np.mean(resid**2) < np.var(y)


class TestJitterLadder:
    def test_indefinite_matrix_raises_with_diagnostics(self):
        A = np.diag([1.0, -1.0])
        with pytest.raises(NumericsError) as excinfo:
            chol_factor(A, scale=1.0)
        err = excinfo.value
        assert err.min_eigenvalue == pytest.approx(-1.0)
        assert len(err.jitter_attempts) == 6
        assert err.jitter_attempts[-1] == pytest.approx(1e-6)

    def test_near_singular_rescued(self):
        A = np.ones((3, 3))  # rank one
        factor, jitter = chol_factor(A, scale=1.0)
        assert jitter > 0.0
