"""Forward chaining to a fixed point, with certificates for every derived fact."""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

from .facts import Fact, FactBase, Provenance
from .rules import RULES, RULES_BY_ID, RuleContext
from ..geometry.formulas import rank_stats
from ..geometry.model import VarietyModel
from ..utils.errors import ContradictionError

logger = logging.getLogger(__name__)


def rule_context(model: VarietyModel, dense_h_limit: int = 256) -> RuleContext:
    """Context whose step-rule ceiling is min(dense_h_limit, gr + 1)."""
    gr = rank_stats(model.spec).gr
    return RuleContext(n=model.n, N=model.N, ceiling=min(dense_h_limit, gr + 1))


@dataclass(frozen=True)
class TraceStep:
    fact: Fact
    rule_id: str
    premises: Tuple[Fact, ...]
    side_conditions: Tuple[str, ...] = ()

    def to_dict(self) -> Dict[str, Any]:
        return {
            'fact': self.fact.label,
            'rule': self.rule_id,
            'premises': [p.label for p in self.premises],
            'side_conditions': list(self.side_conditions),
        }


@dataclass
class Certificate:
    """Derivation of ``goal``: rule steps in dependency order plus the leaves they rest on."""
    goal: Fact
    trace: List[TraceStep] = field(default_factory=list)
    leaves: List[Fact] = field(default_factory=list)

    @property
    def hypotheses_external(self) -> List[Fact]:
        return [f for f in self.leaves if f.provenance.kind == 'literature']

    @property
    def failure_bound(self) -> Fraction:
        """Union bound over the probe facts the derivation relies on."""
        total = sum((f.provenance.failure_bound for f in self.leaves if f.provenance.kind == 'probe'),
                    Fraction(0))
        return min(total, Fraction(1))

    @classmethod
    def build(cls, goal: Fact) -> 'Certificate':
        certificate = cls(goal=goal)
        seen = set()

        def visit(f: Fact) -> None:
            if f in seen:
                return
            seen.add(f)
            provenance = f.provenance
            if provenance.kind != 'rule':
                certificate.leaves.append(f)
                return
            for premise in provenance.premises:
                visit(premise)
            certificate.trace.append(TraceStep(f, provenance.source, provenance.premises,
                                               provenance.side_conditions))

        visit(goal)
        certificate.leaves.sort(key=lambda f: f.key)
        return certificate

    def to_dict(self) -> Dict[str, Any]:
        return {
            'goal': self.goal.label,
            'trace': [step.to_dict() for step in self.trace],
            'leaves': [leaf.to_dict() for leaf in self.leaves],
            'hypotheses_external': [
                {'fact': f.label, 'citation': f.provenance.source} for f in self.hypotheses_external
            ],
            'failure_bound': self.failure_bound,
            'provenance': {'kind': 'rule', 'goal': self.goal.label},
        }


def derive(base: FactBase, model: VarietyModel, context: Optional[RuleContext] = None,
           dense_h_limit: int = 256) -> Tuple[FactBase, List[Certificate]]:
    """
    Apply every rule until nothing new is derived.

    Args:
        base: Starting facts; left unchanged
        model: The variety the facts are about
        context: Rule context (built from ``model`` when omitted)
        dense_h_limit: Step-rule ceiling used when building the context

    Returns:
        Tuple of the closed fact base and one certificate per derived fact

    Raises:
        ContradictionError: Carrying the certificates of both conflicting facts
    """
    context = context or rule_context(model, dense_h_limit)
    closed = base.copy()
    derived: List[Fact] = []
    rounds = 0
    changed = True
    while changed:
        changed = False
        rounds += 1
        for rule in RULES:
            for derivation in list(rule.apply(closed, context)):
                if derivation.conclusion in closed:
                    continue
                new = derivation.conclusion.with_provenance(
                    Provenance('rule', rule.rule_id, derivation.premises, derivation.side_conditions))
                try:
                    closed.assert_fact(new)
                except ContradictionError as e:
                    raise ContradictionError(
                        str(e),
                        existing=Certificate.build(e.existing),
                        incoming=Certificate.build(e.incoming),
                    ) from e
                derived.append(new)
                changed = True
    logger.info(f"Closure of {model.spec.label}: {len(base)} facts in, {len(derived)} derived "
                f"in {rounds} rounds")
    return closed, [Certificate.build(f) for f in derived]


def replay_certificate(certificate: Certificate, context: RuleContext) -> bool:
    """Re-run each recorded rule on exactly its premises and check it yields the recorded fact."""
    known = {leaf for leaf in certificate.leaves}
    for step in certificate.trace:
        if any(p not in known for p in step.premises):
            return False
        rule = RULES_BY_ID.get(step.rule_id)
        if rule is None:
            return False
        outcomes = rule.apply(FactBase(list(step.premises)), context)
        if not any(d.conclusion == step.fact and set(d.premises) == set(step.premises) for d in outcomes):
            return False
        known.add(step.fact)
    return certificate.goal in known
