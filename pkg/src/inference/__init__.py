"""Rule engine, literature catalog and identifiable-range certification."""

from .facts import Fact, FactBase, Predicate, Provenance, fact
from .rules import RULES, RULES_BY_ID, Derivation, Rule, RuleContext
from .engine import Certificate, TraceStep, derive, replay_certificate, rule_context
from .catalog import KnowledgeBase, KnowledgeEntry, evaluate_expression, parse_h_range
from .ranges import IdentifiabilityAnalyzer, RangeMode, RangeReport
from .fuzz import check_closure, fuzz_rules, random_facts

__all__ = [
    'Certificate',
    'Derivation',
    'Fact',
    'FactBase',
    'IdentifiabilityAnalyzer',
    'KnowledgeBase',
    'KnowledgeEntry',
    'Predicate',
    'Provenance',
    'RULES',
    'RULES_BY_ID',
    'RangeMode',
    'RangeReport',
    'Rule',
    'RuleContext',
    'TraceStep',
    'check_closure',
    'derive',
    'evaluate_expression',
    'fact',
    'fuzz_rules',
    'parse_h_range',
    'random_facts',
    'replay_certificate',
    'rule_context',
]
