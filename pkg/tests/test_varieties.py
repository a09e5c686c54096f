import pytest

from src.geometry.model import make_model
from src.geometry.varieties import VarietyKind, VarietySpec, parse_spec
from src.utils.errors import SpecError


class TestParseSpec:
    @pytest.mark.parametrize('text,kind', [
        ('segre:1,1,1', VarietyKind.SEGRE),
        ('veronese:d=2,n=2', VarietyKind.VERONESE),
        ('sv:d=1,2;n=1,3', VarietyKind.SEGRE_VERONESE),
        ('grass:k=1,n=4', VarietyKind.GRASSMANN),
        ('gm:d=14', VarietyKind.GAUSSIAN_MOMENTS),
    ])
    def test_label_round_trip(self, text, kind):
        spec = parse_spec(text)
        assert spec.kind is kind
        assert spec.label == text
        assert parse_spec(spec.label) == spec

    def test_whitespace_is_ignored(self):
        assert parse_spec(' segre: 1, 2 ') == VarietySpec.segre(1, 2)

    @pytest.mark.parametrize('text', [
        '',
        'segre',
        'segre:1',
        'segre:a,b',
        'foo:1,2',
        'veronese:d=2',
        'veronese:d=0,n=2',
        'sv:d=1,2;n=1',
        'grass:k=3,n=3',
        'gm:d=2',
    ])
    def test_rejects_malformed_specs(self, text):
        with pytest.raises(SpecError):
            parse_spec(text)

    def test_spec_error_is_a_value_error(self):
        with pytest.raises(ValueError):
            parse_spec('segre:0,1')


class TestVarietySpec:
    def test_family_predicates(self):
        assert VarietySpec.segre(1, 1).is_segre
        assert VarietySpec.veronese(3, 2).is_veronese
        sv = VarietySpec.segre_veronese((1, 2), (1, 1))
        assert sv.is_product and not sv.is_segre and not sv.is_veronese
        assert not VarietySpec.grassmann(1, 3).is_product

    def test_to_dict(self):
        assert VarietySpec.grassmann(1, 4).to_dict() == {'kind': 'grass', 'spec': 'grass:k=1,n=4', 'k': 1, 'n': 4}
        assert VarietySpec.gaussian_moments(6).to_dict() == {'kind': 'gm', 'spec': 'gm:d=6', 'd': 6}


class TestModelDimensions:
    @pytest.mark.parametrize('text,n,N', [
        ('segre:1,1,1', 3, 7),
        ('segre:1,1,1,1,1', 5, 31),
        ('segre:2,3', 5, 11),
        ('veronese:d=2,n=2', 2, 5),
        ('veronese:d=3,n=2', 2, 9),
        ('sv:d=1,2;n=1,1', 2, 5),
        ('grass:k=1,n=3', 4, 5),
        ('grass:k=1,n=4', 6, 9),
        ('gm:d=14', 2, 14),
    ])
    def test_dimensions(self, text, n, N):
        model = make_model(parse_spec(text))
        assert (model.n, model.N) == (n, N)
        assert model.param_arity == n + 1

    def test_abstract_and_expected_dimension(self):
        model = make_model(VarietySpec.veronese(2, 2))
        assert model.dim_abstract(2) == 5
        assert model.dim_expected(2) == 5
        assert model.dim_expected(3) == 5
        assert model.dim_abstract(3) == 8
