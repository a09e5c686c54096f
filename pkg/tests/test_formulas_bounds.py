from fractions import Fraction

import pytest

from src.geometry.bounds import published_bound
from src.geometry.formulas import (
    catalog_variables, co1_twd_bound, floor_log2, grassmann_power, r_mn, rank_stats,
    special_defective_h, sv1d_rank, xkn_shape,
)
from src.geometry.varieties import VarietySpec, parse_spec


def binary_segre(k):
    return VarietySpec.segre(*([1] * k))


class TestRankStats:
    def test_binary_segre_six_factors(self):
        stats = rank_stats(binary_segre(6))
        assert (stats.gr, stats.s, stats.perfect) == (10, 9, False)
        assert stats.delta == 9 % 2

    def test_xkn_is_perfect(self):
        stats = rank_stats(VarietySpec.segre(2, 3, 3, 3))
        assert stats.gr == 16
        assert stats.perfect

    def test_diagonal_segre_delta(self):
        stats = rank_stats(VarietySpec.segre(2, 2, 2, 2, 2))
        assert (stats.s, stats.delta) == (22, 1)

    def test_non_diagonal_has_no_delta(self):
        assert rank_stats(parse_spec('gm:d=14')).delta is None

    def test_to_dict_carries_provenance(self):
        data = rank_stats(binary_segre(3)).to_dict()
        assert data['provenance']['kind'] == 'formula'


class TestHelpers:
    def test_floor_log2(self):
        assert [floor_log2(v) for v in (1, 2, 3, 8, 9)] == [0, 1, 1, 3, 3]
        with pytest.raises(ValueError):
            floor_log2(0)

    @pytest.mark.parametrize('degrees,h', [
        ((2, 2, 2), 7),
        ((2, 4), 5),
        ((4, 2), 5),
        ((1, 1, 2), 3),
        ((1, 1, 1, 1), 3),
        ((1, 2), None),
        ((2, 3), None),
    ])
    def test_special_binary_segre_veronese(self, degrees, h):
        assert special_defective_h(degrees) == h

    def test_r_mn_branches(self):
        assert r_mn(4, 5) == 56
        assert r_mn(3, 3) == Fraction(8)
        assert r_mn(5, 2) == Fraction(3 * 36, 2)

    def test_sv1d_rank(self):
        assert sv1d_rank(1, 1, 3) == 2
        assert sv1d_rank(2, 2, 3) % 3 == 0

    def test_grassmann_power_is_exact(self):
        assert grassmann_power(4, 250) == Fraction(251, 5) ** 2
        assert grassmann_power(1, 10) == 1

    def test_co1_bound(self):
        assert co1_twd_bound(2, 4) == 1
        assert co1_twd_bound(3, 4) == 8

    def test_xkn_shape(self):
        assert xkn_shape(VarietySpec.segre(2, 3, 3, 3)) == (2, 3)
        assert xkn_shape(VarietySpec.segre(2, 3, 3)) is None
        assert xkn_shape(VarietySpec.segre(1, 1)) is None

    def test_catalog_variables(self):
        values = catalog_variables(VarietySpec.grassmann(4, 250))
        assert values['mr_applies'] == 1
        assert values['mr_floor'] == 2520
        segre = catalog_variables(binary_segre(5))
        assert (segre['s'], segre['gr'], segre['factors']) == (5, 6, 5)


class TestPublishedBound:
    @pytest.mark.parametrize('k,h_max', [(2, 1), (3, 2), (4, 2), (5, 4), (6, 9), (7, 15), (8, 27)])
    def test_binary_segre(self, k, h_max):
        assert published_bound(binary_segre(k)).h_max == h_max

    def test_grassmann_large(self):
        record = published_bound(VarietySpec.grassmann(4, 250))
        assert record.h_max == 2519
        check = record.checks[0]
        assert check.alternatives == {'floor(V) - 1': 2519, 'floor(V - 1)': 2519}
        assert all(h.holds for h in check.hypotheses)

    def test_grassmann_hypothesis_fails(self):
        record = published_bound(VarietySpec.grassmann(2, 5))
        assert record.h_max is None
        assert any(not h.holds for h in record.hypotheses)

    @pytest.mark.parametrize('d', range(14, 21))
    def test_gaussian(self, d):
        assert published_bound(VarietySpec.gaussian_moments(d)).h_max == (d + 1) // 3 - 1

    def test_gaussian_below_threshold(self):
        assert published_bound(VarietySpec.gaussian_moments(13)).h_max is None

    def test_xkn_uses_generic_rank(self):
        record = published_bound(VarietySpec.segre(2, 1, 1, 1))
        assert record.h_max == rank_stats(VarietySpec.segre(2, 1, 1, 1)).gr - 1
        assert record.theorem.startswith('X[k,n]')

    def test_no_family_no_claim(self):
        record = published_bound(VarietySpec.veronese(3, 2))
        assert record.h_max is None
        assert record.checks == []

    def test_to_dict_records_hypotheses(self):
        data = published_bound(VarietySpec.grassmann(4, 250)).to_dict()
        assert data['provenance']['kind'] == 'formula'
        assert data['checks'][0]['hypotheses']
        assert data['checks'][0]['provenance']['name'] == data['theorem']
