"""Randomized soundness checks for the rule engine.

A run draws leaf facts, closes them twice (in the drawn order and in a
shuffled order) and checks that both closures agree and that every
certificate replays on its own premises.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .engine import derive, replay_certificate, rule_context
from .facts import Fact, FactBase, Predicate, Provenance
from ..geometry.model import VarietyModel
from ..utils.errors import ContradictionError

logger = logging.getLogger(__name__)

LEAF_PREDICATES = (
    Predicate.NOT_DEFECTIVE,
    Predicate.DEFECTIVE,
    Predicate.GENERICALLY_FINITE,
    Predicate.SEC_PROPER,
    Predicate.NOT_TWD,
    Predicate.TWD,
    Predicate.NOT_1TWD,
)


@dataclass
class FuzzOutcome:
    contradiction: bool
    derived: int = 0
    problems: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.problems


def random_facts(rng: np.random.Generator, model: VarietyModel, size: int,
                 ceiling: Optional[int] = None) -> List[Fact]:
    """``size`` leaf facts with indices in 1..ceiling (gr + 1 by default)."""
    ceiling = ceiling or rule_context(model).ceiling
    facts = []
    for i in range(size):
        predicate = LEAF_PREDICATES[int(rng.integers(len(LEAF_PREDICATES)))]
        h = None if not predicate.indexed else int(rng.integers(1, ceiling + 1))
        facts.append(Fact(predicate, h, Provenance('formula', f'fuzz-{i}')))
    return facts


def _close(facts: List[Fact], model: VarietyModel):
    base = FactBase()
    for f in facts:
        base.assert_fact(f)
    return derive(base, model)


def check_closure(facts: List[Fact], model: VarietyModel, rng: np.random.Generator) -> FuzzOutcome:
    """Close ``facts`` in two orders and replay every certificate of the first closure."""
    shuffled = [facts[i] for i in rng.permutation(len(facts))]
    try:
        closed, certificates = _close(facts, model)
    except ContradictionError:
        try:
            _close(shuffled, model)
        except ContradictionError:
            return FuzzOutcome(contradiction=True)
        return FuzzOutcome(contradiction=True, problems=['contradiction depends on assertion order'])

    outcome = FuzzOutcome(contradiction=False, derived=len(certificates))
    try:
        other, _ = _close(shuffled, model)
    except ContradictionError:
        outcome.problems.append('contradiction depends on assertion order')
        return outcome
    if [f.label for f in closed] != [f.label for f in other]:
        outcome.problems.append('closure depends on assertion order')

    context = rule_context(model)
    for certificate in certificates:
        missing = [p.label for step in certificate.trace for p in step.premises if p not in closed]
        if missing:
            outcome.problems.append(f'{certificate.goal.label} uses facts outside the closure: {missing}')
        if not replay_certificate(certificate, context):
            outcome.problems.append(f'certificate of {certificate.goal.label} does not replay')
    return outcome


def fuzz_rules(models: List[VarietyModel], runs: int, seed: int = 0, size: int = 6) -> List[str]:
    """Problems found over ``runs`` random fact bases, cycling through ``models``."""
    rng = np.random.default_rng(seed)
    problems: List[str] = []
    contradictions = 0
    for run in range(runs):
        model = models[run % len(models)]
        outcome = check_closure(random_facts(rng, model, size), model, rng)
        contradictions += outcome.contradiction
        problems.extend(f'run {run} ({model.spec.label}): {p}' for p in outcome.problems)
    logger.info(f"Rule fuzzing: {runs} runs, {contradictions} contradictions, {len(problems)} problems")
    return problems
