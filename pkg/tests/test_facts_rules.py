import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.geometry.model import make_model
from src.geometry.varieties import parse_spec
from src.inference.engine import Certificate, derive, replay_certificate, rule_context
from src.inference.facts import Fact, FactBase, Predicate, Provenance, fact
from src.inference.fuzz import check_closure, fuzz_rules, random_facts
from src.inference.rules import RULES, RULES_BY_ID, RuleContext
from src.utils.errors import ContradictionError, PreconditionError

P = Predicate
FUZZ_MODELS = [make_model(parse_spec(text)) for text in ('segre:1,1,1,1,1', 'gm:d=14', 'veronese:d=3,n=2')]


def conclusions(rule_id, facts, ctx):
    return sorted(d.conclusion.label for d in RULES_BY_ID[rule_id].apply(FactBase(facts), ctx))


class TestFacts:
    def test_indexed_predicates_need_h(self):
        with pytest.raises(PreconditionError):
            Fact(P.NOT_TWD)
        with pytest.raises(PreconditionError):
            Fact(P.DEFECTIVE, 0)
        with pytest.raises(PreconditionError):
            Fact(P.NOT_1TWD, 1)

    def test_equality_ignores_provenance(self):
        assert fact(P.TWD, 2, 'probe', 'twd:h=2') == Fact(P.TWD, 2)
        assert Fact(P.NOT_1TWD).label == 'Not1Twd'
        assert Fact(P.NOT_TWD, 3).label == 'NotTwd(3)'

    def test_unknown_provenance_kind(self):
        with pytest.raises(PreconditionError):
            Provenance('guess', 'x')

    def test_probe_provenance_carries_failure_bound(self):
        data = fact(P.NOT_DEFECTIVE, 2, 'probe', 'secant:h=2').to_dict()
        assert 'failure_bound' in data['provenance']
        assert 'failure_bound' not in fact(P.NOT_DEFECTIVE, 2).to_dict()['provenance']


class TestFactBase:
    def test_conflicting_facts(self):
        base = FactBase([fact(P.NOT_DEFECTIVE, 2)])
        with pytest.raises(ContradictionError) as info:
            base.assert_fact(fact(P.DEFECTIVE, 2))
        assert info.value.existing == Fact(P.NOT_DEFECTIVE, 2)
        assert info.value.incoming == Fact(P.DEFECTIVE, 2)
        assert info.value.exit_code == 4

    def test_not1twd_conflicts_with_twd_one(self):
        base = FactBase([fact(P.NOT_1TWD)])
        with pytest.raises(ContradictionError):
            base.assert_fact(fact(P.TWD, 1))
        base.assert_fact(fact(P.TWD, 2))
        assert base.has(P.TWD, 2)

    def test_assert_is_idempotent(self):
        base = FactBase([fact(P.TWD, 2, 'literature', 'first')])
        base.assert_fact(fact(P.TWD, 2, 'literature', 'second'))
        assert len(base) == 1
        assert base.lookup(P.TWD, 2).provenance.source == 'first'

    def test_fact_without_provenance(self):
        with pytest.raises(PreconditionError):
            FactBase().assert_fact(Fact(P.TWD, 2))

    def test_sorted_queries(self):
        base = FactBase([fact(P.NOT_TWD, 3), fact(P.NOT_TWD, 1), fact(P.TWD, 5)])
        assert base.indices(P.NOT_TWD) == [1, 3]
        assert base.max_index(P.NOT_TWD) == 3
        assert base.max_index(P.IDENTIFIABLE) is None
        copy = base.copy()
        copy.assert_fact(fact(P.NOT_1TWD))
        assert len(base) == 3


class TestRules:
    ctx = RuleContext(n=2, N=14, ceiling=6)

    def test_rule_ids_are_unique(self):
        assert len(RULES_BY_ID) == len(RULES)

    def test_r1_within_abstract_dimension(self):
        ctx = RuleContext(n=5, N=31, ceiling=7)
        assert conclusions('R1', [fact(P.NOT_TWD, 4)], ctx) == ['Identifiable(4)']

    def test_r1_needs_proper_secant_beyond_n(self):
        ctx = RuleContext(n=5, N=31, ceiling=7)
        assert conclusions('R1', [fact(P.NOT_TWD, 6)], ctx) == []
        assert conclusions('R1', [fact(P.NOT_TWD, 6), fact(P.SEC_PROPER, 6)], ctx) == ['Identifiable(6)']

    def test_r2a_and_r3a(self):
        premises = [fact(P.NOT_1TWD), fact(P.GENERICALLY_FINITE, 5)]
        assert conclusions('R2a', premises, self.ctx) == ['NotTwd(3)']
        assert conclusions('R3a', premises, self.ctx) == ['NotTwd(4)']
        assert conclusions('R3a', [fact(P.GENERICALLY_FINITE, 5)], self.ctx) == []

    def test_r2b_and_r3b_need_proper_secant(self):
        premises = [fact(P.NOT_1TWD), fact(P.GENERICALLY_FINITE, 4)]
        assert conclusions('R2b', premises, self.ctx) == []
        premises.append(fact(P.SEC_PROPER, 4))
        assert conclusions('R2b', premises, self.ctx) == ['NotTwd(3)']
        assert conclusions('R3b', premises, self.ctx) == ['NotTwd(3)']

    def test_r4(self):
        premises = [fact(P.NOT_DEFECTIVE, 5), fact(P.NOT_TWD, 3)]
        assert conclusions('R4', premises, self.ctx) == ['Identifiable(4)']
        assert conclusions('R4', premises[:1], self.ctx) == []

    def test_r4_requires_room_for_h_plus_one_points(self):
        assert conclusions('R4', [fact(P.NOT_DEFECTIVE, 6), fact(P.NOT_TWD, 4)], self.ctx) == []

    def test_r4_requires_h_above_n(self):
        assert conclusions('R4', [fact(P.NOT_DEFECTIVE, 3), fact(P.NOT_TWD, 1)], self.ctx) == []

    def test_r5(self):
        premises = [fact(P.GENERICALLY_FINITE, 5), fact(P.NOT_TWD, 3)]
        assert conclusions('R5', premises, self.ctx) == ['NotTwd(4)']

    def test_r6(self):
        assert conclusions('R6', [fact(P.TWD, 2), fact(P.NOT_1TWD)], self.ctx) == ['FiberType(4)']
        assert conclusions('R6', [fact(P.TWD, 2)], self.ctx) == []

    def test_step_rules_stop_at_ceiling(self):
        low = RuleContext(n=2, N=14, ceiling=3)
        assert conclusions('nottwd-down', [fact(P.NOT_TWD, 5)], self.ctx) == ['NotTwd(4)']
        assert conclusions('nottwd-down', [fact(P.NOT_TWD, 5)], low) == []
        assert conclusions('fiber-up', [fact(P.FIBER_TYPE, 3)], low) == []

    def test_twd_up_only_below_ambient(self):
        assert conclusions('twd-up', [fact(P.TWD, 3)], self.ctx) == ['Twd(4)']
        assert conclusions('twd-up', [fact(P.TWD, 4)], self.ctx) == []

    def test_nondefective_split(self):
        assert conclusions('nondefective-finite', [fact(P.NOT_DEFECTIVE, 5)], self.ctx) == ['GenericallyFinite(5)']
        assert conclusions('nondefective-dominant', [fact(P.NOT_DEFECTIVE, 5)], self.ctx) == ['Dominant(5)']
        assert conclusions('nondefective-dominant', [fact(P.NOT_DEFECTIVE, 4)], self.ctx) == []


class TestDerive:
    @pytest.fixture
    def gm14(self, model):
        return model('gm:d=14')

    def test_identifiability_from_literature(self, gm14):
        base = FactBase([fact(P.NOT_1TWD, kind='literature', source='smooth'),
                         fact(P.NOT_DEFECTIVE, 5, kind='literature', source='moments')])
        closed, certificates = derive(base, gm14)
        assert closed.max_index(P.IDENTIFIABLE) == 4
        assert not closed.has(P.IDENTIFIABLE, 5)
        assert len(base) == 2
        goal = next(c for c in certificates if c.goal == Fact(P.IDENTIFIABLE, 4))
        assert replay_certificate(goal, rule_context(gm14))
        assert {f.provenance.source for f in goal.hypotheses_external} <= {'smooth', 'moments'}

    def test_closure_is_a_fixed_point(self, gm14):
        base = FactBase([fact(P.NOT_1TWD), fact(P.NOT_DEFECTIVE, 5)])
        closed, _ = derive(base, gm14)
        again, certificates = derive(closed, gm14)
        assert certificates == []
        assert [f.label for f in again] == [f.label for f in closed]

    def test_contradiction_carries_certificates(self, gm14):
        base = FactBase([fact(P.DEFECTIVE, 3), fact(P.NOT_TWD, 3)])
        with pytest.raises(ContradictionError) as info:
            derive(base, gm14)
        assert isinstance(info.value.existing, Certificate)
        assert isinstance(info.value.incoming, Certificate)

    def test_tampered_certificate_does_not_replay(self, gm14):
        base = FactBase([fact(P.NOT_1TWD), fact(P.NOT_DEFECTIVE, 5)])
        _, certificates = derive(base, gm14)
        certificate = next(c for c in certificates if c.trace)
        certificate.leaves.clear()
        assert not replay_certificate(certificate, rule_context(gm14))

    def test_probe_failure_bound_union(self, gm14):
        from fractions import Fraction
        base = FactBase([fact(P.NOT_1TWD, kind='probe', source='twd:h=1', failure_bound=Fraction(1, 100)),
                         fact(P.NOT_DEFECTIVE, 5, kind='probe', source='secant:h=5',
                              failure_bound=Fraction(1, 50))])
        _, certificates = derive(base, gm14)
        goal = next(c for c in certificates if c.goal == Fact(P.IDENTIFIABLE, 4))
        assert goal.failure_bound == Fraction(3, 100)


class TestFuzz:
    @given(st.integers(min_value=0, max_value=2**32 - 1), st.sampled_from(FUZZ_MODELS))
    @settings(max_examples=40, deadline=None)
    def test_random_closures_are_sound(self, seed, model):
        rng = np.random.default_rng(seed)
        outcome = check_closure(random_facts(rng, model, 6), model, rng)
        assert outcome.passed, outcome.problems

    def test_fuzz_rules_reports_no_problems(self):
        assert fuzz_rules(FUZZ_MODELS, runs=30, seed=1) == []
