from math import erfc, sqrt

import numpy as np
import pytest

from chamber_sampler.stats import binomial_floor, chi_square_uniform, frequency_report, total_variation


class TestChiSquare:
    @pytest.mark.parametrize("counts", [(50, 50), (60, 40), (70, 30), (10, 90)])
    def test_one_degree_of_freedom_closed_form(self, counts):
        stat, p = chi_square_uniform(counts)
        a, b = counts
        e = (a + b) / 2
        assert stat == pytest.approx(((a - e) ** 2 + (b - e) ** 2) / e)
        # chi-square with 1 dof: P(X > x) = erfc(sqrt(x / 2))
        assert p == pytest.approx(erfc(sqrt(stat / 2)), rel=1e-12, abs=1e-300)

    def test_single_cell(self):
        assert chi_square_uniform([7]) == (0.0, 1.0)


class TestTotalVariation:
    def test_values(self):
        assert total_variation([0.5, 0.5], [0.5, 0.5]) == 0.0
        assert total_variation([1.0, 0.0], [0.0, 1.0]) == 1.0
        assert total_variation([0.25, 0.75], [0.5, 0.5]) == pytest.approx(0.25)

    def test_floor(self):
        assert binomial_floor(0.5, 100) == pytest.approx(0.5 - 5 * 0.05)


class TestFrequencyReport:
    def test_self_consistency(self, rng):
        cells = [(1, 1), (1, -1), (-1, 1), (-1, -1)]
        records = [cells[i] for i in rng.integers(4, size=1000)]
        r = frequency_report(records, support=cells)
        assert r.total == sum(r.counts.values()) == 1000
        freq = np.array([r.counts.get(c, 0) for c in sorted(cells)]) / 1000
        assert r.tv_to_uniform == pytest.approx(total_variation(freq, np.full(4, 0.25)))
        assert r.min_frequency == freq.min() and r.max_frequency == freq.max()
        assert r.ratio == pytest.approx(freq.max() / freq.min())
        assert r.missing == 0

    def test_missing_cells_count_as_zero(self):
        r = frequency_report([(1,), (1,)], support=[(1,), (-1,)])
        assert r.missing == 1 and r.min_frequency == 0.0
        assert r.ratio == float("inf") and r.tv_to_uniform == 0.5

    def test_outside_support_rejected(self):
        with pytest.raises(ValueError, match="outside"):
            frequency_report([(1,), (2,)], support=[(1,)])

    def test_dict_keys(self):
        d = frequency_report([(1, -1), (1, -1), (-1, 1)]).to_dict()
        assert d["counts"] == {"-1,1": 1, "1,-1": 2}
        assert d["tv_to_uniform"] is None
