"""``table``: published bounds over a parameter grid, certified where the instance is small."""

import logging
import re
from itertools import combinations_with_replacement
from typing import Any, Callable, Dict, List, Optional, Tuple

from .certify import range_mode
from .run_config import RunConfig
from ..geometry.bounds import published_bound
from ..geometry.formulas import rank_stats
from ..geometry.model import make_model
from ..geometry.varieties import VarietySpec
from ..inference.catalog import KnowledgeBase
from ..inference.ranges import IdentifiabilityAnalyzer
from ..utils.config import AppConfig
from ..utils.errors import PreconditionError

logger = logging.getLogger(__name__)

GridRow = Tuple[Dict[str, int], VarietySpec]

_RANGE = re.compile(r'^\s*(\d+)\s*(?:\.\.\s*(\d+))?\s*$')


def parse_int_range(text: Optional[str], default: Tuple[int, int]) -> range:
    """'14..20' or '14' as an inclusive range."""
    if text is None:
        return range(default[0], default[1] + 1)
    match = _RANGE.match(text)
    if not match:
        raise PreconditionError(f"expected an integer or a range like 14..20, got '{text}'")
    low = int(match.group(1))
    high = int(match.group(2) or low)
    if high < low:
        raise PreconditionError(f"empty range '{text}'")
    return range(low, high + 1)


def _binary_segre(run: RunConfig) -> List[GridRow]:
    return [({'k': k}, VarietySpec.segre(*([1] * k))) for k in range(2, (run.max_k or 7) + 1)]


def _diagonal_segre(run: RunConfig) -> List[GridRow]:
    return [({'n': n, 'k': k}, VarietySpec.segre(*([n] * k)))
            for n in range(2, (run.max_value or 3) + 1)
            for k in range(4, (run.max_k or 5) + 1)]


def _xkn(run: RunConfig) -> List[GridRow]:
    top = run.max_value or 3
    return [({'k': k, 'n': n}, VarietySpec.segre(k, *([n] * (k + 1))))
            for k in range(2, top + 1)
            for n in range(1, top + 1, 2)]


def _sv_binary(run: RunConfig) -> List[GridRow]:
    rows = []
    for r in range(2, (run.max_k or 4) + 1):
        for degrees in combinations_with_replacement(range(1, (run.max_value or 4) + 1), r):
            if any(d > 1 for d in degrees):
                rows.append(({'r': r, 'd': sum(degrees)},
                             VarietySpec.segre_veronese(degrees, (1,) * r)))
    return rows


def _sv_general(run: RunConfig) -> List[GridRow]:
    top = run.max_value or 3
    rows = []
    for dims in combinations_with_replacement(range(1, top + 1), 2):
        for degrees in combinations_with_replacement(range(1, top + 1), 2):
            if degrees != (1, 1):
                rows.append(({'n1': dims[0], 'n2': dims[1], 'd1': degrees[0], 'd2': degrees[1]},
                             VarietySpec.segre_veronese(degrees, dims)))
    return rows


def _sv_12(run: RunConfig) -> List[GridRow]:
    top = run.max_value or 4
    return [({'m': m, 'n': n}, VarietySpec.segre_veronese((1, 2), (m, n)))
            for m in range(1, top + 1) for n in range(1, top + 1)]


def _sv_1d(run: RunConfig) -> List[GridRow]:
    top = run.max_value or 3
    return [({'m': m, 'n': n, 'd': d}, VarietySpec.segre_veronese((1, d), (m, n)))
            for d in parse_int_range(run.d_range, (3, 4))
            for m in range(1, top + 1) for n in range(1, top + 1)]


def _grassmann(run: RunConfig) -> List[GridRow]:
    return [({'k': k, 'n': n}, VarietySpec.grassmann(k, n))
            for k in range(1, (run.max_value or 3) + 1)
            for n in range(2 * k + 1, 2 * k + 6)]


def _gaussian(run: RunConfig) -> List[GridRow]:
    return [({'d': d}, VarietySpec.gaussian_moments(d)) for d in parse_int_range(run.d_range, (14, 20))]


TABLES: Dict[str, Callable[[RunConfig], List[GridRow]]] = {
    'binary-segre': _binary_segre,
    'diagonal-segre': _diagonal_segre,
    'xkn': _xkn,
    'sv-binary': _sv_binary,
    'sv-general': _sv_general,
    'sv-12': _sv_12,
    'sv-1d': _sv_1d,
    'grassmann': _grassmann,
    'gaussian': _gaussian,
}


def _row(parameters: Dict[str, int], spec: VarietySpec) -> Dict[str, Any]:
    stats = rank_stats(spec)
    bound = published_bound(spec)
    row: Dict[str, Any] = {
        'parameters': dict(parameters),
        'spec': spec.label,
        'gr': stats.gr,
        's': stats.s,
        'delta': stats.delta,
        'perfect': stats.perfect,
        'h_max': bound.h_max,
        'theorem': bound.theorem,
        'certified': False,
        'provenance': {'kind': 'formula', 'name': bound.theorem or 'rank statistics'},
    }
    alternatives = [c.alternatives for c in bound.checks if c.alternatives]
    if alternatives:
        row['floor_conventions'] = alternatives[0]
    return row


def tsv_rows(document: Dict[str, Any]) -> List[Dict[str, Any]]:
    """Rows with their parameters lifted to top-level columns."""
    return [{**row['parameters'], **row} for row in document['rows']]


def cmd_table(run: RunConfig, config: AppConfig,
              knowledge_base: Optional[KnowledgeBase] = None) -> Dict[str, Any]:
    """
    Evaluate a published-bound table, certifying rows whose ambient space is under the desk cap.

    Args:
        run: Run settings; ``table`` names the grid, ``mode`` the certification mode
        config: Application config with the run's overrides applied
        knowledge_base: Catalog to use (loaded from the config when omitted)

    Returns:
        Dict: The table document

    Raises:
        PreconditionError: For an unknown table name or a malformed range
    """
    if run.table not in TABLES:
        raise PreconditionError(f"unknown table '{run.table}'; choose from {', '.join(TABLES)}")
    mode = range_mode(run.mode)
    analyzer = IdentifiabilityAnalyzer(config, knowledge_base)
    cap = config.budget.table_desk_cap

    rows = []
    for parameters, spec in TABLES[run.table](run):
        row = _row(parameters, spec)
        if make_model(spec).N + 1 <= cap:
            report = analyzer.identifiability_range(spec, mode)
            row.update({
                'certified': True,
                'h_ident_max': report.h_ident_max,
                'agreement': report.agreement,
                'incomplete': report.incomplete,
                'failure_bound': report.failure_bound,
            })
        rows.append(row)
        logger.info(f"{run.table} {spec.label}: published {row['h_max']}, "
                    f"certified {row.get('h_ident_max')}")

    return {
        'command': 'table',
        'run': run.to_dict(),
        'table': run.table,
        'rows': rows,
        'provenance': {'kind': 'formula', 'source': f'{run.table} grid'},
    }
