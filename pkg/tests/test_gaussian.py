import numpy as np
import pytest

from reject_gate.errors import DimensionMismatch, SingularDesign
from reject_gate.gaussian import (
    GaussianPosterior,
    GaussianPrior,
    MlEstimate,
    design_matrix,
    features,
    fit_ml,
    fit_posterior,
    ml_predict,
    predictive,
)
from reject_gate.numerics import RngStream, quadratic_form
from reject_gate.synthetic import (
    Dataset,
    NoiseSpec,
    example1_process,
    experiment_prior,
    noise_variance,
    sample_dataset,
    sample_true_process,
)

# hand solution of (phi phi^T / 2.66 + I) mu = phi * 2 / 2.66 with phi = [1, 0]
ONE_POINT_MEAN = 2.0 / 3.66
ONE_POINT_VAR = 2.66 / 3.66


class TestDesignMatrix:
    def test_single_row(self):
        np.testing.assert_array_equal(design_matrix(Dataset([2.0], [0.0]), 1), [[1.0, 2.0]])

    def test_cubic_row(self):
        np.testing.assert_array_equal(design_matrix(Dataset([3.0], [0.0]), 3), [[1, 3, 9, 27]])

    def test_empty(self):
        assert design_matrix(Dataset([], []), 2).shape == (0, 3)


class TestFitMl:
    def test_two_points_interpolate(self):
        data = Dataset([-1.0, 3.0], [0.5, 2.5])
        est = fit_ml(data, 1, NoiseSpec(0.3, 0.7, 1.0))
        np.testing.assert_allclose(est.theta_hat, [1.0, 0.5], atol=1e-12)

    def test_identical_inputs_singular(self):
        with pytest.raises(SingularDesign):
            fit_ml(Dataset([1.0, 1.0, 1.0], [0.0, 1.0, 2.0]), 1, NoiseSpec())

    def test_too_few_points_singular(self):
        with pytest.raises(SingularDesign):
            fit_ml(Dataset([0.0, 1.0], [0.0, 1.0]), 3, NoiseSpec())

    def test_consistency(self):
        process = example1_process()
        d = sample_dataset(process, 5000, RngStream(17))
        est = fit_ml(d, 1, process.noise)
        np.testing.assert_allclose(est.theta_hat, [1.0, 0.5], atol=0.05)

    def test_maximizes_likelihood(self):
        process = example1_process()
        d = sample_dataset(process, 40, RngStream(3))
        est = fit_ml(d, 1, process.noise)
        v = noise_variance(process.noise, d.x)

        def nll(theta):
            return np.sum((d.y - design_matrix(d, 1) @ theta) ** 2 / v)

        base = nll(est.theta_hat)
        gen = np.random.default_rng(0)
        for _ in range(200):
            assert nll(est.theta_hat + 1e-3 * gen.standard_normal(2)) >= base

    def test_ml_predict(self):
        est = MlEstimate(np.array([1.0, 0.5]), 1, NoiseSpec())
        pred, risk = ml_predict(est, 2.0)
        assert pred == 2.0
        assert ml_predict(est, -8.0)[1] == pytest.approx(0.1, abs=1e-15)
        assert ml_predict(MlEstimate(np.zeros(4), 3, NoiseSpec()), 1.7)[0] == 0.0


class TestFitPosterior:
    def test_empty_data_is_prior(self, empty_posterior):
        np.testing.assert_array_equal(empty_posterior.mean, [0.0, 0.0])
        np.testing.assert_array_equal(empty_posterior.covariance, np.eye(2))

    def test_one_point(self, one_point_posterior):
        np.testing.assert_allclose(one_point_posterior.mean, [ONE_POINT_MEAN, 0.0], atol=1e-14)
        np.testing.assert_allclose(one_point_posterior.covariance,
                                   np.diag([ONE_POINT_VAR, 1.0]), atol=1e-14)
        assert ONE_POINT_MEAN == pytest.approx(0.54645, abs=1e-5)
        assert ONE_POINT_VAR == pytest.approx(0.72678, abs=1e-5)

    def test_permutation_invariant(self):
        process = example1_process()
        d = sample_dataset(process, 30, RngStream(4))
        perm = np.random.default_rng(1).permutation(d.m)
        prior = GaussianPrior.diagonal([1.0, 1.0])
        a = fit_posterior(d, prior, 1, process.noise)
        b = fit_posterior(Dataset(d.x[perm], d.y[perm]), prior, 1, process.noise)
        np.testing.assert_allclose(a.mean, b.mean, rtol=0, atol=1e-14)
        np.testing.assert_allclose(a.covariance, b.covariance, rtol=0, atol=1e-14)

    def test_covariance_symmetric_pd(self):
        prior = experiment_prior()
        process = sample_true_process(prior, 3, RngStream(1))
        post = fit_posterior(sample_dataset(process, 25, RngStream(2)), prior, 3, process.noise)
        np.testing.assert_array_equal(post.covariance, post.covariance.T)
        assert np.linalg.eigvalsh(post.covariance).min() > 0

    def test_matches_explicit_inverse(self):
        process = example1_process()
        d = sample_dataset(process, 12, RngStream(6))
        lam = np.array([2.0, 0.5])
        post = fit_posterior(d, GaussianPrior.diagonal(lam), 1, process.noise)
        X = design_matrix(d, 1)
        s_inv = np.diag(1 / noise_variance(process.noise, d.x))
        cov = np.linalg.inv(X.T @ s_inv @ X + np.diag(1 / lam))
        np.testing.assert_allclose(post.covariance, cov, rtol=1e-12)
        np.testing.assert_allclose(post.mean, cov @ X.T @ s_inv @ d.y, rtol=1e-12)

    def test_prior_dimension(self):
        with pytest.raises(DimensionMismatch):
            fit_posterior(Dataset([], []), experiment_prior(), 1, NoiseSpec())

    def test_flat_prior_agrees_with_ml(self):
        gen = np.random.default_rng(5)
        for trial in range(20):
            degree = int(gen.integers(1, 4))
            prior = GaussianPrior.diagonal(np.full(degree + 1, 1e6))
            process = sample_true_process(GaussianPrior.diagonal(np.ones(degree + 1)), degree,
                                          RngStream(trial))
            # well-spread inputs keep the weighted normal equations well conditioned
            m = degree + 3 + int(gen.integers(0, 20))
            x = np.linspace(-2, 2, m) + gen.uniform(-0.05, 0.05, m)
            y = process.mean(x) + np.sqrt(noise_variance(process.noise, x)) * gen.standard_normal(m)
            d = Dataset(x, y)
            post = fit_posterior(d, prior, degree, process.noise)
            est = fit_ml(d, degree, process.noise)
            assert np.linalg.norm(post.mean - est.theta_hat) <= 1e-3 * (1 + np.linalg.norm(est.theta_hat))

    def test_posterior_consistency(self):
        prior = experiment_prior()
        wins = 0
        for t in range(100):
            stream = RngStream(77, t)
            process = sample_true_process(prior, 3, stream.child(0))
            big = sample_dataset(process, 2000, stream.child(1))
            small = Dataset(big.x[:20], big.y[:20])
            err = [np.linalg.norm(fit_posterior(d, prior, 3, process.noise).mean - process.theta_star)
                   for d in (small, big)]
            wins += err[1] < err[0]
        assert wins >= 95

    def test_json_round_trip(self, one_point_posterior):
        back = GaussianPosterior.from_json(one_point_posterior.to_json())
        np.testing.assert_array_equal(back.mean, one_point_posterior.mean)
        np.testing.assert_array_equal(back.covariance, one_point_posterior.covariance)
        assert back.noise == one_point_posterior.noise and back.degree == 1
        est = MlEstimate(np.array([1.0, 0.25, -3.0]), 2, NoiseSpec(1.0, 0.0, 0.0))
        again = MlEstimate.from_json(est.to_json())
        np.testing.assert_array_equal(again.theta_hat, est.theta_hat)


class TestPredictive:
    def test_prior_at_origin(self, empty_posterior):
        p = predictive(empty_posterior, 0.0)
        assert p.mean == 0.0
        assert p.epistemic == 1.0
        assert p.aleatoric == pytest.approx(2.66, abs=1e-14)

    def test_one_point(self, one_point_posterior):
        p = predictive(one_point_posterior, 0.0)
        assert p.mean == pytest.approx(ONE_POINT_MEAN, abs=1e-14)
        assert p.epistemic == pytest.approx(ONE_POINT_VAR, abs=1e-14)

    def test_variance_is_exact_sum(self):
        prior = experiment_prior()
        process = sample_true_process(prior, 3, RngStream(1))
        post = fit_posterior(sample_dataset(process, 15, RngStream(2)), prior, 3, process.noise)
        for x in np.linspace(-4, 4, 41):
            p = predictive(post, x)
            phi = features(x, 3)
            assert p.variance == quadratic_form(post.covariance, phi) + noise_variance(process.noise, x)
            assert p.epistemic >= 0

    def test_epistemic_shrinks_with_data(self):
        prior = experiment_prior()
        probes = np.linspace(-3, 3, 25)
        for t in range(200):
            stream = RngStream(31, t)
            process = sample_true_process(prior, 3, stream.child(0))
            d = sample_dataset(process, int(stream.generator.integers(0, 15)) + 1, stream.child(1))
            before = fit_posterior(Dataset(d.x[:-1], d.y[:-1]), prior, 3, process.noise)
            after = fit_posterior(d, prior, 3, process.noise)
            for x in probes:
                assert predictive(after, x).epistemic <= predictive(before, x).epistemic + 1e-12
