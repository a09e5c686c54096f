from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.exactla.field import FieldCfg
from src.geometry.model import make_model
from src.geometry.varieties import parse_spec
from src.probes.secant import SecantProbe
from src.utils.config import ProbeConfig
from src.utils.errors import CapacityError, PreconditionError


PROFILE_SPECS = ['segre:1,1,1,1', 'veronese:d=2,n=2', 'veronese:d=3,n=2', 'sv:d=1,2;n=1,1', 'gm:d=8']


@pytest.fixture
def probe(probe_config, prime_field):
    return SecantProbe(probe_config, prime_field)


class TestTerraciniDimension:
    def test_veronese_surface_is_defective(self, probe, model):
        report = probe.terracini_dimension(model('veronese:d=2,n=2'), 2)
        assert (report.dim_computed, report.dim_expected, report.defect) == (4, 5, 1)
        assert report.defect_confirmed
        assert report.status == 'defect confirmed in rational mode'

    @pytest.mark.parametrize('a,b,h', [(1, 1, 1), (1, 2, 2), (2, 3, 2), (2, 3, 3), (3, 3, 3)])
    def test_matrix_rank_varieties(self, probe, model, a, b, h):
        report = probe.terracini_dimension(model(f'segre:{a},{b}'), h)
        assert report.dim_computed == h * (a + b + 2 - h) - 1

    def test_non_defective_report(self, probe, model):
        report = probe.terracini_dimension(model('segre:1,1,1,1,1'), 4)
        assert report.defect == 0
        assert report.generically_finite
        assert not report.fills_ambient
        assert report.status == 'non-defective certified'
        assert len(report.trial_dims) == 2

    def test_failure_bound_is_small(self, probe, model):
        report = probe.terracini_dimension(model('segre:1,1,1'), 2)
        assert Fraction(0) < report.failure_bound < Fraction(1, 10**10)
        assert report.fills_ambient

    def test_to_dict_provenance(self, probe, model):
        data = probe.terracini_dimension(model('gm:d=6'), 2).to_dict()
        assert data['provenance'] == {'kind': 'probe', 'id': 'secant:h=2', 'field': 'prime'}
        assert data['seed'] == 0

    def test_same_seed_same_dimensions(self, probe_config, prime_field, model):
        m = model('sv:d=1,2;n=1,1')
        first = SecantProbe(probe_config, prime_field).terracini_dimension(m, 2)
        second = SecantProbe(probe_config, prime_field).terracini_dimension(m, 2)
        assert first.trial_dims == second.trial_dims

    def test_rational_mode(self, rational_field, model):
        probe = SecantProbe(ProbeConfig(trials=1), rational_field)
        report = probe.terracini_dimension(model('veronese:d=2,n=2'), 2)
        assert report.dim_computed == 4
        assert report.defect_confirmed

    def test_capacity_cap(self, prime_field, model):
        probe = SecantProbe(ProbeConfig(max_matrix_entries=10), prime_field)
        with pytest.raises(CapacityError) as info:
            probe.terracini_dimension(model('segre:1,1,1'), 2)
        assert info.value.exit_code == 3

    def test_h_must_be_positive(self, probe, model):
        with pytest.raises(PreconditionError):
            probe.terracini_dimension(model('segre:1,1'), 0)


class TestSecantProfile:
    def test_profile_matches_single_h_runs(self, probe, model):
        m = model('segre:1,1,1,1')
        profile = probe.secant_profile(m, 4)
        singles = [probe.terracini_dimension(m, h) for h in range(1, 5)]
        assert [r.to_dict() for r in profile] == [r.to_dict() for r in singles]

    def test_binary_segre_four_factors_defective_at_three(self, probe, model):
        profile = probe.secant_profile(model('segre:1,1,1,1'), 3)
        assert [r.defect for r in profile] == [0, 0, 1]

    def test_gaussian_moments_fourteen(self, probe, model):
        profile = probe.secant_profile(model('gm:d=14'), 5)
        assert [r.defect for r in profile] == [0] * 5
        assert profile[-1].dim_computed == 14

    def test_rejects_empty_profile(self, probe, model):
        with pytest.raises(PreconditionError):
            probe.secant_profile(model('segre:1,1'), 0)

    def test_expired_deadline_keeps_first_trial(self, probe, model):
        profile = probe.secant_profile(model('segre:1,1,1,1'), 3, trials=3, deadline=0.0)
        assert all(r.trials == 1 and len(r.trial_dims) == 1 for r in profile)
        assert [r.defect for r in profile] == [0, 0, 1]

    @given(st.integers(min_value=0, max_value=2**32 - 1), st.sampled_from(PROFILE_SPECS))
    @settings(max_examples=15, deadline=None)
    def test_dimension_grows_by_at_most_one_frame(self, seed, text):
        m = make_model(parse_spec(text))
        probe = SecantProbe(ProbeConfig(trials=1, seed=seed, confirm_defects_rational=False), FieldCfg())
        dims = [r.dim_computed for r in probe.secant_profile(m, 4)]
        for lower, upper in zip(dims, dims[1:]):
            assert lower <= upper <= lower + m.n + 1

    @given(st.integers(min_value=0, max_value=2**32 - 1), st.sampled_from(PROFILE_SPECS),
           st.integers(min_value=1, max_value=3))
    @settings(max_examples=15, deadline=None)
    def test_more_trials_never_lower_the_dimension(self, seed, text, h):
        m = make_model(parse_spec(text))
        probe = SecantProbe(ProbeConfig(seed=seed, confirm_defects_rational=False), FieldCfg())
        dims = [probe.terracini_dimension(m, h, trials=trials).dim_computed for trials in (1, 2, 3)]
        assert dims == sorted(dims)


class TestAdditionMap:
    @pytest.mark.parametrize('text,h', [('veronese:d=2,n=2', 2), ('segre:1,2', 2), ('gm:d=8', 2),
                                        ('grass:k=1,n=4', 2)])
    def test_agrees_with_terracini(self, probe, model, text, h):
        m = model(text)
        terracini = probe.terracini_dimension(m, h, trials=1, seed=7)
        assert probe.addition_map_dimension(m, h, np.random.default_rng(7)) == terracini.trial_dims[0]


class TestFiberType:
    def test_defective_veronese_has_positive_fibers(self, probe, model):
        assert probe.fiber_type_tau(model('veronese:d=2,n=2'), 1)

    def test_filling_secant_is_not_fiber_type(self, probe, model):
        assert not probe.fiber_type_tau(model('segre:1,1,1'), 1)

    def test_identifiable_range(self, probe, model):
        assert not probe.fiber_type_tau(model('segre:1,1,1,1,1'), 3)

    def test_rational_field_points(self, probe_config, model):
        probe = SecantProbe(probe_config, FieldCfg.rational(20))
        assert probe.fiber_type_tau(model('veronese:d=2,n=2'), 1)
