"""Demand discretization, convolution and the cumulative cache."""

import numpy as np
import pytest

from rss_policy import (
    CumulativeDemandCache,
    DemandPmf,
    DemandSpec,
    convolve,
    discretize,
    point_mass,
)


class TestDiscretize:
    def test_poisson_zero_mean_is_point_mass(self):
        pmf = discretize(DemandSpec("poisson", 0.0))
        assert pmf.offset == 0
        assert pmf.probs.tolist() == [1.0]

    def test_normal_zero_cv_is_point_mass(self):
        pmf = discretize(DemandSpec("normal", 50.0, 0.0))
        assert pmf.offset == 50
        assert pmf.probs.tolist() == [1.0]

    def test_normal_zero_cv_rounds_noninteger_mean(self):
        assert discretize(DemandSpec("normal", 50.4, 0.0)).offset == 50

    def test_poisson_moments(self):
        pmf = discretize(DemandSpec("poisson", 50.0), tail_eps=1e-6)
        assert pmf.mean() == pytest.approx(50.0, abs=1e-3)
        assert pmf.variance() == pytest.approx(50.0, abs=0.1)
        # support should end a few standard deviations above the mean
        assert 50 + 3 * np.sqrt(50) < pmf.max_value < 50 + 7 * np.sqrt(50)

    def test_normal_moments(self):
        pmf = discretize(DemandSpec("normal", 60.0, 0.2), tail_eps=1e-6)
        assert pmf.mean() == pytest.approx(60.0, abs=0.01)
        assert np.sqrt(pmf.variance()) == pytest.approx(12.0, rel=0.02)

    def test_normal_negative_mass_folds_into_zero(self):
        # large cv puts real mass below -0.5; it must end up at demand 0
        pmf = discretize(DemandSpec("normal", 2.0, 1.0))
        from scipy.stats import norm

        assert pmf.probs[0] == pytest.approx(norm.cdf((0.5 - 2.0) / 2.0), rel=1e-6)
        assert pmf.mean() > 2.0  # folding is one-sided, biasing the mean up

    def test_rejects_bad_inputs(self):
        with pytest.raises(ValueError):
            DemandSpec("poisson", -1.0)
        with pytest.raises(ValueError):
            DemandSpec("binomial", 5.0)
        with pytest.raises(ValueError):
            discretize(DemandSpec("poisson", 5.0), tail_eps=0.5)
        with pytest.raises(ValueError):
            discretize(DemandSpec("poisson", 5.0), tail_eps=0.0)

    def test_mass_normalized(self):
        for spec in [DemandSpec("poisson", 7.3), DemandSpec("normal", 40.0, 0.35)]:
            pmf = discretize(spec)
            assert pmf.probs.sum() == pytest.approx(1.0, abs=1e-12)


class TestConvolve:
    def test_point_masses_add(self):
        out = convolve(point_mass(3), point_mass(4))
        assert out.offset == 7
        assert out.probs.tolist() == [1.0]

    def test_point_mass_at_zero_is_identity(self):
        pmf = discretize(DemandSpec("poisson", 6.0))
        out = convolve(pmf, point_mass(0))
        assert out.offset == pmf.offset
        np.testing.assert_allclose(out.probs, pmf.probs, atol=1e-15)

    def test_poisson_additivity(self):
        a = discretize(DemandSpec("poisson", 30.0))
        b = discretize(DemandSpec("poisson", 40.0))
        direct = discretize(DemandSpec("poisson", 70.0))
        summed = convolve(a, b)
        hi = max(summed.max_value, direct.max_value)
        p = np.zeros(hi + 1)
        q = np.zeros(hi + 1)
        p[summed.offset : summed.offset + len(summed)] = summed.probs
        q[direct.offset : direct.offset + len(direct)] = direct.probs
        assert 0.5 * np.abs(p - q).sum() < 1e-5

    def test_commutative_and_associative(self, rng):
        pmfs = [
            DemandPmf(offset=int(rng.integers(0, 4)), probs=rng.random(int(rng.integers(2, 9))))
            for _ in range(3)
        ]
        a, b, c = pmfs
        ab = convolve(a, b)
        ba = convolve(b, a)
        assert ab.offset == ba.offset
        np.testing.assert_allclose(ab.probs, ba.probs, atol=1e-12)
        left = convolve(ab, c)
        right = convolve(a, convolve(b, c))
        assert left.offset == right.offset
        np.testing.assert_allclose(left.probs, right.probs, atol=1e-12)

    def test_mass_conserved(self, rng):
        a = DemandPmf(offset=0, probs=rng.random(12))
        b = DemandPmf(offset=2, probs=rng.random(5))
        assert convolve(a, b).probs.sum() == pytest.approx(1.0, abs=1e-9)


class TestCumulativeCache:
    def _cache(self, means):
        return CumulativeDemandCache([discretize(DemandSpec("poisson", m)) for m in means])

    def test_single_period(self):
        cache = self._cache([5.0, 9.0])
        single = cache.cumulative(1, 2)
        np.testing.assert_array_equal(single.probs, cache.period(1).probs)

    def test_two_periods_is_convolution(self):
        cache = self._cache([5.0, 9.0])
        expected = convolve(cache.period(1), cache.period(2))
        got = cache.cumulative(1, 3)
        assert got.offset == expected.offset
        np.testing.assert_allclose(got.probs, expected.probs, atol=1e-15)

    def test_mean_adds_up(self):
        means = [4.0, 11.5, 7.25, 20.0]
        cache = self._cache(means)
        total = cache.cumulative(1, 5)
        assert total.mean() == pytest.approx(sum(means), rel=1e-6)
        for t in range(1, 4):
            for j in range(t + 1, 6):
                assert cache.cumulative(t, j).mean() == pytest.approx(
                    sum(means[t - 1 : j - 1]), rel=1e-6
                )

    def test_repeated_calls_identical(self):
        cache = self._cache([5.0, 9.0, 3.0])
        first = cache.cumulative(1, 4)
        assert cache.cumulative(1, 4) is first

    def test_rejects_bad_ranges(self):
        cache = self._cache([5.0, 9.0])
        with pytest.raises(ValueError):
            cache.cumulative(2, 2)
        with pytest.raises(ValueError):
            cache.cumulative(2, 1)
        with pytest.raises(ValueError):
            cache.cumulative(1, 4)


class TestDemandPmf:
    def test_rejects_negative_probabilities(self):
        with pytest.raises(ValueError):
            DemandPmf(offset=0, probs=np.array([0.5, -0.1, 0.6]))

    def test_rejects_negative_offset(self):
        with pytest.raises(ValueError):
            DemandPmf(offset=-1, probs=np.array([1.0]))

    def test_quantile(self):
        pmf = DemandPmf(offset=2, probs=np.array([0.2, 0.5, 0.3]))
        assert pmf.quantile(0.1) == 2
        assert pmf.quantile(0.69) == 3
        assert pmf.quantile(0.71) == 4
        assert pmf.quantile(1.0) == 4
