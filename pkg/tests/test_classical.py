import numpy as np
import pytest

from qsim import classical
from qsim.classical import (DEFAULT_PARAMS, SampleAccess, SigmoidParams,
                            classical_poly_value, estimate_yk_sampling,
                            exact_value, fit_polynomial, sampling_group_count,
                            sampling_group_size, sigmoid_volume, tang_inner,
                            tang_sample)
from qsim.sim import RngStream


class TestSigmoid:
    def test_value_at_origin(self):
        # f(0) = A / (1 + (35/40)^3) + D
        expected = 20000.0 / (1.0 + (35.0 / 40.0) ** 3) + 6000.0
        assert sigmoid_volume(0.0, DEFAULT_PARAMS) == pytest.approx(expected)

    def test_monotone_below_t0(self):
        # demand falls as temperature rises toward T0
        grid = np.linspace(-30.0, 35.0, 200)
        vals = sigmoid_volume(grid, DEFAULT_PARAMS)
        assert np.all(np.diff(vals) < 0)

    def test_pole_guard(self):
        with pytest.raises(ValueError):
            sigmoid_volume(40.0, DEFAULT_PARAMS)

    def test_param_validation(self):
        with pytest.raises(ValueError):
            SigmoidParams(A=1.0, B=1.0, C=3.0, D=1.0, T0=40.0)


class TestFit:
    def test_taylor_coefficients(self):
        coeffs = fit_polynomial(DEFAULT_PARAMS, 0.0, 3, "taylor")
        targets = [17976.0, -360.0, -7.17, 0.0072]
        for b, target in zip(coeffs.b, targets):
            assert abs(b - target) / abs(target) < 0.01

    def test_least_squares_coefficients(self):
        coeffs = fit_polynomial(DEFAULT_PARAMS, 0.0, 3, "least_squares",
                                domain=(-15.0, 30.0))
        targets = [17957.0, -393.0, -6.50, 0.225]
        for b, target in zip(coeffs.b, targets):
            assert abs(b - target) / abs(target) < 0.05

    def test_taylor_matches_function_locally(self):
        coeffs = fit_polynomial(DEFAULT_PARAMS, 10.0, 3, "taylor")
        x = 11.5
        approx = float(coeffs(x - 10.0))
        assert approx == pytest.approx(sigmoid_volume(x, DEFAULT_PARAMS),
                                       rel=1e-4)

    def test_domain_validation(self):
        with pytest.raises(ValueError):
            fit_polynomial(DEFAULT_PARAMS, 0.0, 3, "taylor", domain=(5.0, 5.0))
        with pytest.raises(ValueError):
            fit_polynomial(DEFAULT_PARAMS, 0.0, 3, "taylor", domain=(0.0, 45.0))
        with pytest.raises(ValueError):
            fit_polynomial(DEFAULT_PARAMS, 0.0, 3, "spline")


class TestValues:
    def test_exact_value(self):
        t = [12.0, 17.0]
        e = [30.0, 24.0]
        expected = (sigmoid_volume(12.0, DEFAULT_PARAMS) * 30.0
                    + sigmoid_volume(17.0, DEFAULT_PARAMS) * 24.0)
        assert exact_value(t, e, DEFAULT_PARAMS) == pytest.approx(expected)

    def test_poly_value_matches_direct_sum(self):
        coeffs = fit_polynomial(DEFAULT_PARAMS, 0.0, 2, "taylor")
        t = np.array([5.0, 8.0])
        e = np.array([30.0, 24.0])
        direct = sum(coeffs.b[k] * np.sum(e * t**k) for k in range(3))
        assert classical_poly_value(t, e, coeffs) == pytest.approx(direct)


class TestSampling:
    def test_tang_sample_distribution(self):
        vals = np.array([1.0, 2.0, 3.0, 4.0])
        access = SampleAccess.from_values(vals)
        rng = RngStream(0)
        counts = np.zeros(4)
        n = 4000
        for _ in range(n):
            counts[tang_sample(access, rng)] += 1
        target = vals**2 / np.sum(vals**2)
        np.testing.assert_allclose(counts / n, target, atol=0.03)

    def test_group_formulas(self):
        assert sampling_group_size(0.1) == 400
        assert sampling_group_count(0.9) == 6 * 4  # ceil(lg 10) = 4

    def test_tang_inner_accuracy(self):
        rng = np.random.default_rng(1)
        v = rng.uniform(0.5, 2.0, size=8)
        w = rng.uniform(0.5, 2.0, size=8)
        access = SampleAccess.from_values(v)
        est = tang_inner(access, w, 0.05, 0.9, RngStream(3))
        truth = float(np.dot(v, w))
        bound = 0.05 * np.linalg.norm(v) * np.linalg.norm(w)
        assert abs(est - truth) <= bound

    def test_estimate_yk_sampling(self):
        t = np.array([12.0, 17.0, 23.0, 28.0])
        e = np.array([30.0, 24.0, 36.0, 28.0])
        k = 2
        est, queries = estimate_yk_sampling(t, e, 10.0, k, 0.05, 0.9,
                                            RngStream(0))
        truth = float(np.sum(e * (t - 10.0) ** k))
        v = t - 10.0
        w = e * v ** (k - 1)
        bound = 0.05 * np.linalg.norm(v) * np.linalg.norm(w)
        assert abs(est - truth) <= bound
        assert queries == sampling_group_count(0.9) * sampling_group_size(0.05)

    def test_sampling_requires_positive_shift(self):
        with pytest.raises(ValueError):
            estimate_yk_sampling([12.0, 17.0], [1.0, 1.0], 15.0, 1, 0.1, 0.9,
                                 RngStream(0))
