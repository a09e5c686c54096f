import json

import pytest

from src.geometry.varieties import VarietySpec, parse_spec
from src.inference.catalog import (
    FAMILIES, HRange, KnowledgeBase, evaluate_expression, parse_h_range,
)
from src.inference.facts import Fact, Predicate
from src.utils.errors import KnowledgeBaseError

P = Predicate


def labels(facts):
    return [f.label for f in facts]


class TestKnowledgeBaseLoading:
    def test_shipped_knowledge_base(self, knowledge_base):
        assert knowledge_base.entries
        assert {e.family for e in knowledge_base.entries} <= set(FAMILIES)
        assert all(e.citation for e in knowledge_base.entries)

    def test_corrupted_knowledge_base(self, corrupted_knowledge_base):
        with pytest.raises(KnowledgeBaseError) as info:
            KnowledgeBase.load(corrupted_knowledge_base)
        assert info.value.exit_code == 2

    def test_missing_file(self, tmp_path):
        with pytest.raises(KnowledgeBaseError):
            KnowledgeBase.load(tmp_path / 'absent.json')

    def test_invalid_json(self, tmp_path):
        path = tmp_path / 'kb.json'
        path.write_text('{"version": 1,')
        with pytest.raises(KnowledgeBaseError):
            KnowledgeBase.load(path)

    def test_duplicate_ids(self, tmp_path):
        entry = {'id': 'twice', 'family': 'gaussian', 'fact': 'Not1Twd', 'citation': 'test'}
        path = tmp_path / 'kb.json'
        path.write_text(json.dumps({'version': 1, 'entries': [entry, entry]}))
        with pytest.raises(KnowledgeBaseError):
            KnowledgeBase.load(path)

    def test_unknown_where_variable(self, tmp_path):
        entry = {'id': 'odd', 'family': 'gaussian', 'fact': 'Not1Twd', 'citation': 'test',
                 'where': {'colour': {'eq': 1}}}
        path = tmp_path / 'kb.json'
        path.write_text(json.dumps({'version': 1, 'entries': [entry]}))
        kb = KnowledgeBase.load(path)
        with pytest.raises(KnowledgeBaseError):
            kb.catalog_facts(parse_spec('gm:d=14'), 6)


class TestExpressions:
    def test_evaluate(self):
        assert evaluate_expression('s - delta', {'s': 22, 'delta': 1}) == 21
        assert evaluate_expression('3 * factor_dim', {'factor_dim': 2}) == 6
        assert evaluate_expression(7, {}) == 7

    @pytest.mark.parametrize('expression', ['x + 1', 's / 4', 's +'])
    def test_rejects_non_integer_expressions(self, expression):
        with pytest.raises(KnowledgeBaseError):
            evaluate_expression(expression, {'s': 22})

    @pytest.mark.parametrize('text,expected', [
        ('any', HRange(None, None)),
        ('== gr', HRange(6, 6)),
        ('<= 3', HRange(1, 3)),
        ('< gr', HRange(1, 5)),
        ('2 .. n', HRange(2, 4)),
    ])
    def test_parse_h_range(self, text, expected):
        assert parse_h_range(text, {'gr': 6, 'n': 4}) == expected

    def test_unrecognised_range(self):
        with pytest.raises(KnowledgeBaseError):
            parse_h_range('sometimes', {})

    def test_values_respect_ceiling(self):
        assert HRange(1, 10).values(4) == [1, 2, 3, 4, 10]
        assert HRange(None, None).values(3) == [1, 2, 3]
        assert HRange(3, 2).values(5) == []


class TestCatalogFacts:
    def test_binary_segre_five_factors(self, knowledge_base):
        facts = labels(knowledge_base.catalog_facts(VarietySpec.segre(*[1] * 5), 7))
        assert 'Not1Twd' in facts
        assert 'NotTwd(4)' in facts
        assert 'NotDefective(6)' in facts
        assert 'NotDefective(7)' not in facts

    def test_binary_segre_four_factors(self, knowledge_base):
        facts = labels(knowledge_base.catalog_facts(VarietySpec.segre(1, 1, 1, 1), 5))
        assert 'Defective(3)' in facts
        assert {'NotDefective(1)', 'NotDefective(2)'} <= set(facts)
        assert 'NotDefective(3)' not in facts

    def test_quadric_veronese(self, knowledge_base):
        facts = labels(knowledge_base.catalog_facts(VarietySpec.veronese(2, 3), 5))
        assert {'NotDefective(1)', 'Defective(2)', 'Defective(3)'} <= set(facts)

    def test_quartic_plane_exception(self, knowledge_base):
        facts = labels(knowledge_base.catalog_facts(VarietySpec.veronese(4, 2), 6))
        assert 'Defective(5)' in facts
        assert 'NotDefective(4)' in facts

    def test_gaussian_moments(self, knowledge_base):
        facts = knowledge_base.catalog_facts(parse_spec('gm:d=14'), 6)
        assert Fact(P.NOT_1TWD) in facts
        assert Fact(P.NOT_DEFECTIVE, 5) in facts
        assert all(f.provenance.kind == 'literature' for f in facts)

    def test_stable_order(self, knowledge_base):
        spec = VarietySpec.segre(2, 2, 2, 2)
        first = knowledge_base.catalog_facts(spec, 10)
        assert [f.key for f in first] == sorted(f.key for f in first)
        assert labels(first) == labels(knowledge_base.catalog_facts(spec, 10))

    def test_linear_space_has_no_smoothness_fact(self, knowledge_base):
        facts = knowledge_base.catalog_facts(VarietySpec.grassmann(0, 4), 2)
        assert Fact(P.NOT_1TWD) not in facts
