"""Testbed generators: pattern shapes and factorial coverage."""

import numpy as np
import pytest

from rss_policy import PatternSpec, gen_analysis, gen_scalability, pattern_means


class TestPatterns:
    def test_stationary(self):
        mu = pattern_means(PatternSpec(kind="STA", base_mean=50.0, T=10))
        np.testing.assert_allclose(mu, 50.0)

    def test_dec_is_reversed_inc(self):
        inc = pattern_means(PatternSpec(kind="INC", base_mean=50.0, T=10))
        dec = pattern_means(PatternSpec(kind="DEC", base_mean=50.0, T=10))
        np.testing.assert_allclose(dec, inc[::-1])

    def test_trends_are_strictly_monotone(self):
        inc = pattern_means(PatternSpec(kind="INC", base_mean=50.0, T=12))
        dec = pattern_means(PatternSpec(kind="DEC", base_mean=50.0, T=12))
        assert np.all(np.diff(inc) > 0)
        assert np.all(np.diff(dec) < 0)

    @pytest.mark.parametrize("kind", ["STA", "INC", "DEC", "LCY1", "LCY2", "RAND"])
    @pytest.mark.parametrize("T", [10, 20])
    def test_total_demand_normalized(self, kind, T):
        spec = PatternSpec(kind=kind, base_mean=50.0, T=T, seed=5)
        mu = pattern_means(spec)
        assert mu.shape == (T,)
        assert np.all(mu > 0)
        assert mu.sum() == pytest.approx(50.0 * T, rel=1e-9)

    def test_rand_is_seeded(self):
        a = pattern_means(PatternSpec(kind="RAND", base_mean=50.0, T=10, seed=3))
        b = pattern_means(PatternSpec(kind="RAND", base_mean=50.0, T=10, seed=3))
        c = pattern_means(PatternSpec(kind="RAND", base_mean=50.0, T=10, seed=4))
        np.testing.assert_array_equal(a, b)
        assert not np.array_equal(a, c)

    def test_rejects_unknown_pattern(self):
        with pytest.raises(ValueError):
            PatternSpec(kind="SAW", base_mean=50.0, T=10)


class TestScalabilityGenerator:
    def test_count_and_ranges(self):
        batch = gen_scalability(T=6, n=100, seed=1)
        assert len(batch) == 100
        for inst in batch:
            assert inst.T == 6
            assert inst.params.h == 1.0
            assert 80 <= inst.params.K <= 320
            assert 80 <= inst.params.W <= 320
            assert 4 <= inst.params.b <= 16
            assert inst.I0 == 0
            assert all(d.kind == "poisson" and 30 <= d.mean <= 70 for d in inst.demand)

    def test_deterministic_under_seed(self):
        assert gen_scalability(4, 5, seed=9) == gen_scalability(4, 5, seed=9)
        assert gen_scalability(4, 5, seed=9) != gen_scalability(4, 5, seed=10)

    def test_cost_draw_mean(self):
        batch = gen_scalability(T=2, n=10_000, seed=0)
        ks = np.array([inst.params.K for inst in batch])
        assert ks.mean() == pytest.approx(200.0, abs=5.0)


class TestAnalysisGenerator:
    def test_factorial_size_and_fixed_costs(self):
        batch = gen_analysis(T=10)
        assert len(batch) == 750
        assert all(inst.params.h == 1.0 and inst.params.b == 10.0 for inst in batch)

    def test_every_cell_exactly_once(self):
        batch = gen_analysis(T=10)
        cells = set()
        for inst in batch:
            d = inst.demand[0]
            sigma = "p" if d.kind == "poisson" else f"{d.cv:g}"
            pattern = inst.label.rsplit("-", 1)[1]
            cells.add((inst.params.K, inst.params.W, sigma, pattern))
        assert len(cells) == 5 * 5 * 5 * 6

    def test_poisson_cells_carry_no_cv(self):
        for inst in gen_analysis(T=10):
            for d in inst.demand:
                if d.kind == "poisson":
                    assert d.cv == 0.0

    def test_rejects_other_horizons(self):
        with pytest.raises(ValueError):
            gen_analysis(T=12)

    def test_both_horizons_give_1500(self):
        assert len(gen_analysis(T=10)) + len(gen_analysis(T=20)) == 1500
