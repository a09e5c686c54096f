"""Largest certified identifiable h for a variety, from probes, the catalog, or both."""

import logging
import time
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional

from .catalog import KnowledgeBase
from .engine import Certificate, derive, rule_context
from .facts import Fact, FactBase, Predicate, Provenance
from ..exactla.field import FieldCfg
from ..geometry.bounds import BoundRecord, published_bound
from ..geometry.model import VarietyModel, make_model
from ..geometry.varieties import VarietySpec
from ..probes.secant import SecantProbe, SecantReport
from ..probes.twd import TwdProbe, TwdReport
from ..utils.config import AppConfig, BudgetConfig
from ..utils.errors import CapacityError, ContradictionError, InapplicableError

P = Predicate


class RangeMode(Enum):
    PROBE_ONLY = 'probe-only'
    CATALOG_ONLY = 'catalog-only'
    HYBRID = 'hybrid'

    @property
    def uses_probes(self) -> bool:
        return self is not RangeMode.CATALOG_ONLY

    @property
    def uses_catalog(self) -> bool:
        return self is not RangeMode.PROBE_ONLY


@dataclass
class RangeReport:
    """Outcome of :meth:`IdentifiabilityAnalyzer.identifiability_range`."""
    spec: VarietySpec
    mode: RangeMode
    h_ident_max: Optional[int]
    published: BoundRecord
    identifiable: List[int] = field(default_factory=list)
    certificate: Optional[Certificate] = None
    secant_reports: List[SecantReport] = field(default_factory=list)
    twd_reports: List[TwdReport] = field(default_factory=list)
    incomplete: bool = False
    notes: List[str] = field(default_factory=list)
    fact_count: int = 0

    @property
    def published_claim(self) -> Optional[int]:
        return self.published.h_max

    @property
    def agreement(self) -> Optional[bool]:
        """h_ident_max reaches the published bound; None when no bound applies."""
        if self.published_claim is None:
            return None
        return (self.h_ident_max or 0) >= self.published_claim

    @property
    def failure_bound(self) -> Fraction:
        return self.certificate.failure_bound if self.certificate else Fraction(0)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'spec': self.spec.to_dict(),
            'mode': self.mode.value,
            'h_ident_max': self.h_ident_max,
            'identifiable': list(self.identifiable),
            'published_claim': self.published_claim,
            'published_bounds': self.published.to_dict(),
            'agreement': self.agreement,
            'incomplete': self.incomplete,
            'notes': list(self.notes),
            'fact_count': self.fact_count,
            'failure_bound': self.failure_bound,
            'certificate': self.certificate.to_dict() if self.certificate else None,
            'secant': [r.to_dict() for r in self.secant_reports],
            'twd': [r.to_dict() for r in self.twd_reports],
            'provenance': {'kind': 'rule', 'source': 'forward chaining closure'},
        }


def probe_facts(report: SecantReport, promote: bool) -> List[Fact]:
    """Facts a secant report supports; observed defects become Defective only when confirmed or promoted."""
    provenance = Provenance('probe', report.report_id, failure_bound=report.failure_bound)
    facts = []
    if report.defect == 0:
        facts.append(Fact(P.NOT_DEFECTIVE, report.h, provenance))
    else:
        facts.append(Fact(P.OBSERVED_DEFECTIVE, report.h, provenance))
        if report.defect_confirmed or promote:
            source = report.report_id + (':confirmed' if report.defect_confirmed else ':promoted')
            facts.append(Fact(P.DEFECTIVE, report.h, Provenance('probe', source,
                                                                 failure_bound=report.failure_bound)))
    if report.generically_finite:
        facts.append(Fact(P.GENERICALLY_FINITE, report.h, provenance))
    if report.fills_ambient:
        facts.append(Fact(P.DOMINANT, report.h, provenance))
    return facts


def dimension_count_facts(model: VarietyModel, indices: List[int]) -> List[Fact]:
    """SecProper where h(n+1)-1 < N and FiberType where it exceeds N."""
    facts = []
    for h in sorted(set(indices)):
        dim = model.dim_abstract(h)
        if dim < model.N:
            facts.append(Fact(P.SEC_PROPER, h, Provenance('formula', f'dim_abstract({h}) = {dim} < N')))
        elif dim > model.N:
            facts.append(Fact(P.FIBER_TYPE, h, Provenance('formula', f'dim_abstract({h}) = {dim} > N')))
    return facts


class IdentifiabilityAnalyzer:
    """Runs probes, merges catalog facts and derives the identifiable range."""

    def __init__(self, config: AppConfig, knowledge_base: Optional[KnowledgeBase] = None):
        """
        Initialize the analyzer.

        Args:
            config: Application configuration
            knowledge_base: Catalog to use (loaded from the configured path when omitted)
        """
        self.config = config
        self.field = FieldCfg.from_config(config.field)
        self.secant = SecantProbe(config.probes, self.field)
        self.twd = TwdProbe(config.probes, self.field)
        self._knowledge_base = knowledge_base
        self.logger = logging.getLogger(__name__)

    @property
    def knowledge_base(self) -> KnowledgeBase:
        if self._knowledge_base is None:
            self._knowledge_base = KnowledgeBase.load(self.config.inference.knowledge_base_path())
        return self._knowledge_base

    def _probe(self, model: VarietyModel, report: RangeReport, h_top: int, deadline: float,
               strict: bool) -> List[Fact]:
        block = (model.n + 1) * (model.N + 1)
        affordable = self.config.probes.max_matrix_entries // block
        if affordable < 1:
            if strict:
                self.secant.check_capacity(model, 1)
            report.incomplete = True
            report.notes.append('probes skipped: a single tangent frame exceeds the entry cap')
            return []
        if affordable < h_top:
            report.incomplete = True
            report.notes.append(f'probes limited to h <= {affordable} by the entry cap')
            h_top = affordable

        report.secant_reports = self.secant.secant_profile(model, h_top, deadline=deadline)
        if report.secant_reports[0].trials < self.config.probes.trials:
            report.incomplete = True
            report.notes.append(f'time budget exhausted after {report.secant_reports[0].trials} '
                                'secant trial(s)')
        facts: List[Fact] = []
        for secant_report in report.secant_reports:
            facts.extend(probe_facts(secant_report, self.config.inference.promote_observed_defects))

        # Certifying at h implies every smaller h, so work downward and stop at the first success.
        candidates = [r.h for r in report.secant_reports if r.generically_finite and not r.fills_ambient]
        for h in sorted(candidates, reverse=True):
            if time.monotonic() > deadline:
                report.incomplete = True
                report.notes.append(f'time budget exhausted before the twd probe at h={h}')
                break
            try:
                twd_report = self.twd.certify_not_twd(model, h, deadline=deadline)
            except InapplicableError:
                twd_report = TwdReport.inapplicable_report(h, model.n, self.config.probes.trials,
                                                           self.config.probes.seed, self.field.mode.value)
            report.twd_reports.append(twd_report)
            if twd_report.trials < self.config.probes.trials:
                report.incomplete = True
                report.notes.append(f'time budget exhausted after {twd_report.trials} twd trial(s) at h={h}')
            if twd_report.certified_not_twd:
                facts.append(Fact(P.NOT_TWD, h, Provenance('probe', twd_report.report_id,
                                                          failure_bound=twd_report.failure_bound)))
                break
        report.twd_reports.sort(key=lambda r: r.h)
        return facts

    def identifiability_range(self, spec: VarietySpec, mode: RangeMode = RangeMode.HYBRID,
                              budget: Optional[BudgetConfig] = None,
                              h_limit: Optional[int] = None) -> RangeReport:
        """
        Certify the largest h for which ``spec`` is h-identifiable.

        Args:
            spec: Variety to analyze
            mode: Which fact sources to use
            budget: Time budget (the configured one when omitted)
            h_limit: Probe only h up to this value

        Returns:
            RangeReport: h_ident_max, its certificate and the comparison with published bounds

        Raises:
            CapacityError: In probe-only mode when not even h = 1 fits the entry cap
            ContradictionError: If the gathered facts conflict
        """
        budget = budget or self.config.budget
        deadline = time.monotonic() + budget.max_seconds
        model = make_model(spec)
        context = rule_context(model, self.config.inference.dense_h_limit)
        report = RangeReport(spec=spec, mode=mode, h_ident_max=None, published=published_bound(spec))

        gathered: List[Fact] = []
        if mode.uses_probes:
            h_top = min(h_limit or context.ceiling, context.ceiling)
            try:
                gathered.extend(self._probe(model, report, h_top, deadline,
                                            strict=mode is RangeMode.PROBE_ONLY))
            except CapacityError:
                if mode is RangeMode.PROBE_ONLY:
                    raise
                report.incomplete = True
                report.notes.append('probes skipped: capacity exceeded')
        if mode.uses_catalog:
            gathered.extend(self.knowledge_base.catalog_facts(spec, context.ceiling))

        indices = list(range(1, context.ceiling + 1)) + [f.h for f in gathered if f.h is not None]
        gathered.extend(dimension_count_facts(model, indices))

        base = FactBase()
        for f in gathered:
            try:
                base.assert_fact(f)
            except ContradictionError as e:
                raise ContradictionError(str(e), existing=Certificate.build(e.existing),
                                         incoming=Certificate.build(e.incoming)) from e
        closed, _ = derive(base, model, context)

        report.fact_count = len(closed)
        report.identifiable = closed.indices(P.IDENTIFIABLE)
        if report.identifiable:
            report.h_ident_max = max(report.identifiable)
            report.certificate = Certificate.build(closed.lookup(P.IDENTIFIABLE, report.h_ident_max))
        self.logger.info(f"{spec.label} [{mode.value}]: h_ident_max={report.h_ident_max}, "
                         f"published={report.published_claim}, agreement={report.agreement}")
        return report
