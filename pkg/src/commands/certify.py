"""``certify``: the certified identifiable range of one variety."""

import logging
from typing import Any, Dict, Optional

from .run_config import RunConfig
from ..inference.catalog import KnowledgeBase
from ..inference.ranges import IdentifiabilityAnalyzer, RangeMode, RangeReport
from ..utils.config import AppConfig
from ..utils.errors import ContradictionError, PreconditionError

logger = logging.getLogger(__name__)


def range_mode(name: str) -> RangeMode:
    try:
        return RangeMode(name)
    except ValueError:
        raise PreconditionError(f"unknown mode '{name}'") from None


def certify_document(run: RunConfig, report: RangeReport) -> Dict[str, Any]:
    return {
        'command': 'certify',
        'run': run.to_dict(),
        'range': report.to_dict(),
        'provenance': {'kind': 'rule', 'source': 'identifiable range certification'},
    }


def contradiction_document(run: RunConfig, error: ContradictionError) -> Dict[str, Any]:
    """The two conflicting derivations, so the document explains the exit code."""
    return {
        'command': 'certify',
        'run': run.to_dict(),
        'contradiction': {
            'message': str(error),
            'existing': error.existing.to_dict(),
            'incoming': error.incoming.to_dict(),
        },
        'provenance': {'kind': 'rule', 'source': 'identifiable range certification'},
    }


def cmd_certify(run: RunConfig, config: AppConfig,
                knowledge_base: Optional[KnowledgeBase] = None) -> Dict[str, Any]:
    """
    Certify h_ident_max and compare it with the published bound.

    Args:
        run: Run settings; ``spec`` is required, ``h`` limits probing
        config: Application config with the run's overrides applied
        knowledge_base: Catalog to use (loaded from the config when omitted)

    Returns:
        Dict: The certify document

    Raises:
        ContradictionError: If probe, catalog and derived facts conflict
        CapacityError: In probe-only mode when h = 1 already exceeds the entry cap
    """
    analyzer = IdentifiabilityAnalyzer(config, knowledge_base)
    report = analyzer.identifiability_range(run.variety, range_mode(run.mode), h_limit=run.h)
    if report.agreement is False:
        logger.warning(f"{run.spec}: certified h_ident_max={report.h_ident_max} is below the "
                       f"published bound {report.published_claim}")
    return certify_document(run, report)
