import numpy as np
import pytest

from rca.signals import (CorrelationFunction, Signal, SpectralDensity,
                         corr_from_csv, corr_to_csv, empirical_autocorr,
                         empirical_crosscorr, exponential_corr, frequency_grid,
                         gen_expcorr, gen_iid_uniform, psd_exponential,
                         psd_flat, signal_from_csv, signal_to_csv, standardize)


class TestGenIidUniform:
    def test_empty_interval_rejected(self):
        with pytest.raises(ValueError, match="invalid range"):
            gen_iid_uniform(4, 0.0, 0.0, seed=1)

    def test_mean_matches_uniform(self):
        s = gen_iid_uniform(10_000, 0.0, 0.5, seed=1)
        assert abs(s.mean - 0.25) < 0.01

    def test_deterministic(self):
        a = gen_iid_uniform(5, 0.0, 1.0, seed=7)
        b = gen_iid_uniform(5, 0.0, 1.0, seed=7)
        np.testing.assert_array_equal(a.samples, b.samples)

    def test_range(self):
        s = gen_iid_uniform(1_000, -2.0, 3.0, seed=2)
        assert s.samples.min() >= -2.0 and s.samples.max() < 3.0

    def test_n_positive(self):
        with pytest.raises(ValueError):
            gen_iid_uniform(0, 0.0, 1.0, seed=1)


class TestGenExpcorr:
    def test_lag_one_autocorrelation(self):
        # AR(1) theory forces R(1) = e^-alpha after standardization
        s = gen_expcorr(200_000, 0.05, seed=3)
        r = empirical_autocorr(s, 1)
        assert abs(r.values[1] - np.exp(-0.05)) < 0.02

    def test_large_alpha_is_iid(self):
        s = gen_expcorr(100_000, 10.0, seed=3)
        r = empirical_autocorr(s, 1)
        assert abs(r.values[1]) < 0.01

    @pytest.mark.parametrize("alpha,seed", [(0.05, 3), (0.5, 1), (2.0, 9)])
    def test_standardization_contract(self, alpha, seed):
        s = gen_expcorr(50_000, alpha, seed=seed)
        assert abs(s.mean) < 1e-10
        assert abs(s.variance - 1.0) < 1e-6

    def test_rejects_bad_alpha(self):
        with pytest.raises(ValueError):
            gen_expcorr(100, 0.0, seed=1)
        with pytest.raises(ValueError):
            gen_expcorr(100, -1.0, seed=1)

    def test_deterministic(self):
        a = gen_expcorr(1_000, 0.1, seed=5)
        b = gen_expcorr(1_000, 0.1, seed=5)
        np.testing.assert_array_equal(a.samples, b.samples)

    @pytest.mark.parametrize("alpha,seed", [(0.05, 7), (0.2, 11), (1.0, 4)])
    def test_autocorrelation_matches_exponential(self, alpha, seed):
        n = 200_000
        s = gen_expcorr(n, alpha, seed=seed)
        r = empirical_autocorr(s, 20)
        target = np.exp(-alpha * np.arange(21))
        assert np.max(np.abs(r.values - target)) < 5.0 / np.sqrt(n)


class TestStandardize:
    def test_constant_signal_rejected(self):
        with pytest.raises(ValueError, match="zero-variance"):
            standardize(Signal(np.ones(4)))

    def test_two_point(self):
        out = standardize(Signal(np.array([0.0, 2.0])))
        np.testing.assert_allclose(out.samples, [-1.0, 1.0])

    def test_idempotent(self):
        s = gen_expcorr(5_000, 0.3, seed=2)
        again = standardize(s)
        np.testing.assert_allclose(again.samples, s.samples, atol=1e-12)


class TestEmpiricalAutocorr:
    def test_lag_zero_is_variance(self):
        s = gen_expcorr(50_000, 0.1, seed=1)
        r = empirical_autocorr(s, 0)
        assert abs(r.values[0] - 1.0) < 1e-6

    def test_alternating_signal(self):
        s = Signal(np.tile([1.0, -1.0], 500))
        r = empirical_autocorr(s, 1)
        assert abs(r.values[1] + 1.0) < 1e-12

    def test_long_run_exponential(self):
        s = gen_expcorr(200_000, 0.05, seed=3)
        r = empirical_autocorr(s, 10)
        assert abs(r.values[10] - np.exp(-0.5)) < 0.03

    def test_max_lag_bound(self):
        with pytest.raises(ValueError):
            empirical_autocorr(Signal(np.arange(5.0)), 5)


class TestEmpiricalCrosscorr:
    def test_self_equals_autocorr(self):
        s = gen_expcorr(10_000, 0.2, seed=4)
        auto = empirical_autocorr(s, 12)
        cross = empirical_crosscorr(s, s, 12)
        np.testing.assert_allclose(cross.values, auto.values, atol=1e-12)

    def test_pure_delay(self):
        u = gen_iid_uniform(100_000, -1.0, 1.0, seed=8)
        y = np.zeros(len(u))
        y[3:] = u.samples[:-3]
        r = empirical_crosscorr(u, y, 6)
        assert abs(r.values[3] - u.variance) < 0.01
        others = np.delete(r.values, 3)
        assert np.max(np.abs(others)) < 0.01

    def test_narma_crosscorr_decays(self):
        from rca.tasks import narma10
        u = gen_iid_uniform(30_000, 0.0, 0.5, seed=11)
        y = narma10(u)
        r = empirical_crosscorr(u, y, 60)
        centered = r.values - u.samples.mean() * y.samples.mean()
        assert np.max(np.abs(centered[:15])) > 1e-4
        assert np.max(np.abs(centered[40:])) < np.max(np.abs(centered[:15]))

    def test_length_mismatch(self):
        with pytest.raises(ValueError, match="length mismatch"):
            empirical_crosscorr(np.arange(5.0), np.arange(6.0), 2)


class TestPsdExponential:
    def test_rejects_bad_alpha(self):
        with pytest.raises(ValueError):
            psd_exponential(0.0)

    def test_flat_limit(self):
        s = psd_exponential(50.0, 256)
        np.testing.assert_allclose(s.values.real, 1.0, atol=1e-12)

    def test_positive(self):
        s = psd_exponential(0.05, 4096)
        assert np.all(s.values.real > 0)
        assert np.max(np.abs(s.values.imag)) == 0

    def test_inverse_transform_recovers_correlation(self):
        # oracle: midpoint quadrature of (1/2pi) int S(f) e^{if tau} df
        alpha, m = 0.5, 8192
        s = psd_exponential(alpha, m)
        for tau in range(21):
            r_num = np.mean(s.values * np.exp(1j * s.frequencies * tau)).real
            assert abs(r_num - np.exp(-alpha * tau)) < 1e-3

    def test_forward_transform_matches(self):
        # Fourier pair: sum_k R(k) e^{-ifk} over truncated lags approaches S
        alpha = 0.5
        grid = frequency_grid(512)
        s = psd_exponential(alpha, grid)
        lags = np.arange(1, 80)
        approx = 1.0 + 2.0 * np.sum(
            np.exp(-alpha * lags)[:, None] * np.cos(np.outer(lags, grid)), axis=0)
        np.testing.assert_allclose(approx, s.values.real, atol=1e-12)

    def test_conjugate_symmetry(self):
        s = psd_exponential(0.3, 128)
        assert s.conjugate_symmetry_error() < 1e-10
        flat = psd_flat(2.0, 64)
        assert flat.conjugate_symmetry_error() < 1e-15


class TestSerialization:
    def test_signal_roundtrip(self, tmp_path):
        s = gen_iid_uniform(100, 0.0, 1.0, seed=3)
        path = tmp_path / "sig.csv"
        signal_to_csv(s, path)
        assert path.read_text().splitlines()[0] == "u"
        back = signal_from_csv(path)
        np.testing.assert_allclose(back.samples, s.samples, rtol=1e-15)

    def test_corr_roundtrip(self, tmp_path):
        r = exponential_corr(0.2, 15)
        path = tmp_path / "corr.csv"
        corr_to_csv(r, path)
        assert path.read_text().splitlines()[0] == "lag,value"
        back = corr_from_csv(path)
        np.testing.assert_allclose(back.values, r.values, rtol=1e-15)


class TestTypes:
    def test_signal_requires_samples(self):
        with pytest.raises(ValueError):
            Signal(np.array([]))

    def test_exponential_corr_exact(self):
        r = exponential_corr(0.7, 10)
        np.testing.assert_allclose(r.values, np.exp(-0.7 * np.arange(11)))
        assert r.values[0] == 1.0
        assert r.kind == "analytic-exponential"

    def test_correlation_needs_values(self):
        with pytest.raises(ValueError):
            CorrelationFunction(np.array([]))

    def test_spectral_density_shape_check(self):
        with pytest.raises(ValueError):
            SpectralDensity(frequency_grid(8), np.ones(4), 8)
