"""``analyze``: secant profile, twd probes and fiber-type checks for one variety."""

import logging
from fractions import Fraction
from typing import Any, Dict, List

import numpy as np

from .run_config import RunConfig
from ..exactla.field import FieldCfg
from ..geometry.bounds import published_bound
from ..geometry.formulas import rank_stats
from ..geometry.model import make_model
from ..probes.secant import SecantProbe, SecantReport
from ..probes.twd import TwdProbe, TwdReport
from ..utils.config import AppConfig
from ..utils.errors import CapacityError, InapplicableError

logger = logging.getLogger(__name__)


def _twd_reports(probe: TwdProbe, model, hs: List[int], run: RunConfig) -> List[TwdReport]:
    reports = []
    for h in hs:
        try:
            reports.append(probe.certify_not_twd(model, h))
        except InapplicableError:
            reports.append(TwdReport.inapplicable_report(h, model.n, run.trials, run.seed, run.field_mode))
    return reports


def _tau(probe: SecantProbe, model, hs: List[int], run: RunConfig) -> List[Dict[str, Any]]:
    rows = []
    for h in hs:
        try:
            fiber = probe.fiber_type_tau(model, h)
        except CapacityError:
            logger.info(f"Skipping fiber-type check at h={h}: h+1 frames exceed the entry cap")
            continue
        rows.append({
            'h': h,
            'fiber_type': fiber,
            'trials': run.trials,
            'seed': run.seed,
            'provenance': {'kind': 'probe', 'id': f'tau:h={h}', 'field': run.field_mode},
        })
    return rows


def _addition_check(probe: SecantProbe, model, report: SecantReport, run: RunConfig) -> Dict[str, Any]:
    """Addition-map rank at the points of trial 0, against that trial's Terracini rank."""
    rng = np.random.default_rng(run.seed)
    addition = probe.addition_map_dimension(model, report.h, rng)
    return {
        'h': report.h,
        'terracini_dim': report.trial_dims[0],
        'addition_dim': addition,
        'agree': addition == report.trial_dims[0],
        'provenance': {'kind': 'probe', 'id': f'addition:h={report.h}', 'field': run.field_mode},
    }


def cmd_analyze(run: RunConfig, config: AppConfig) -> Dict[str, Any]:
    """
    Probe one variety for h in 1..h_max, or at the single h given by ``--h``.

    Args:
        run: Run settings; ``spec`` is required
        config: Application config with the run's overrides applied

    Returns:
        Dict: The analyze document

    Raises:
        SpecError: If the spec does not parse
        CapacityError: If the largest h exceeds the entry cap
    """
    spec = run.variety
    model = make_model(spec)
    field = FieldCfg.from_config(config.field)
    secant = SecantProbe(config.probes, field)
    twd = TwdProbe(config.probes, field)

    if run.h is not None:
        reports = [secant.terracini_dimension(model, run.h)]
    else:
        reports = secant.secant_profile(model, run.h_max or 1)
    hs = [r.h for r in reports]

    twd_reports = _twd_reports(twd, model, hs, run)
    total = sum((r.failure_bound for r in reports), Fraction(0))
    total += sum((r.failure_bound for r in twd_reports if not r.inapplicable), Fraction(0))

    document = {
        'command': 'analyze',
        'run': run.to_dict(),
        'spec': spec.to_dict(),
        'model': model.to_dict(),
        'rank_stats': rank_stats(spec).to_dict(),
        'published_bounds': published_bound(spec).to_dict(),
        'secant': [r.to_dict() for r in reports],
        'twd': [r.to_dict() for r in twd_reports],
        'tau': _tau(secant, model, hs, run),
        'addition_check': _addition_check(secant, model, reports[-1], run),
        'failure_bound': min(total, Fraction(1)),
        'provenance': {'kind': 'probe', 'source': 'union bound over secant and twd reports'},
    }
    logger.info(f"Analyzed {spec.label} at h={hs}: dims {[r.dim_computed for r in reports]}")
    return document
