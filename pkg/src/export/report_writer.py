"""Canonical JSON documents, schema validation, provenance lint and TSV summaries."""

import json
import logging
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional

import jsonschema
import pandas as pd

from ..utils.config import OutputConfig, PACKAGE_ROOT
from ..utils.errors import ReportError

REPORT_SCHEMA = PACKAGE_ROOT / 'config' / 'schemas' / 'report.schema.json'
REPORT_VERSION = 1

# A dict holding any of these keys states a number someone could cite, so it must say where it came from.
# The `run` block echoes settings, not claims.
CLAIM_KEYS = frozenset({
    'dim_computed', 'dim_expected', 'min_kernel', 'h_ident_max', 'h_max', 'gr', 'failure_bound',
})


def to_jsonable(value: Any) -> Any:
    """Plain JSON types; rationals become "p/q" strings."""
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, bool) or value is None or isinstance(value, (str, float)):
        return value
    if isinstance(value, int):
        return int(value)
    raise ReportError(f"cannot serialize {type(value).__name__}")


def canonical_json(document: Dict[str, Any]) -> str:
    """Sorted keys, two-space indent, trailing newline; identical input gives identical bytes."""
    return json.dumps(to_jsonable(document), sort_keys=True, indent=2, ensure_ascii=False) + '\n'


def lint_provenance(document: Any, path: str = '$') -> List[str]:
    """Paths of dicts that carry a numeric claim but no provenance."""
    problems: List[str] = []
    if isinstance(document, dict):
        if CLAIM_KEYS & document.keys() and not document.get('provenance'):
            problems.append(path)
        for key in sorted(document):
            if key in ('provenance', 'run'):
                continue
            problems.extend(lint_provenance(document[key], f'{path}.{key}'))
    elif isinstance(document, list):
        for i, item in enumerate(document):
            problems.extend(lint_provenance(item, f'{path}[{i}]'))
    return problems


class ReportWriter:
    """Validates and writes command output."""

    def __init__(self, config: Optional[OutputConfig] = None, schema_path: Path = REPORT_SCHEMA):
        """
        Initialize report writer.

        Args:
            config: Output configuration (directory for TSV files)
            schema_path: JSON schema every document must satisfy
        """
        self.config = config or OutputConfig()
        self.logger = logging.getLogger(__name__)
        with open(schema_path, 'r', encoding='utf-8') as f:
            self.schema = json.load(f)

    def validate(self, document: Dict[str, Any]) -> Dict[str, Any]:
        """
        Check a document against the schema and the provenance lint.

        Returns:
            Dict: The JSON-ready form of the document

        Raises:
            ReportError: On a schema violation or a claim without provenance
        """
        plain = to_jsonable(document)
        try:
            jsonschema.validate(plain, self.schema)
        except jsonschema.ValidationError as e:
            location = '/'.join(str(p) for p in e.absolute_path)
            raise ReportError(f"report fails schema validation at {location or '$'}: {e.message}") from e
        problems = lint_provenance(plain)
        if problems:
            raise ReportError(f"claims without provenance at {', '.join(problems[:5])}")
        return plain

    def render(self, document: Dict[str, Any]) -> str:
        document = dict(document)
        document.setdefault('version', REPORT_VERSION)
        self.validate(document)
        return canonical_json(document)

    def write(self, document: Dict[str, Any], output: Optional[str] = None) -> str:
        """
        Render a document and write it to ``output`` (when given).

        Returns:
            str: The rendered JSON text
        """
        text = self.render(document)
        if output:
            path = Path(output)
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(text, encoding='utf-8')
            self.logger.info(f"Wrote {document.get('command', 'report')} document to {path}")
        return text

    def write_tsv(self, rows: List[Dict[str, Any]], name: str) -> Optional[Path]:
        """Flat TSV summary of table rows; nested values are dropped."""
        if not self.config.write_tsv or not rows:
            return None
        flat = [{k: to_jsonable(v) for k, v in row.items() if not isinstance(v, (dict, list))}
                for row in rows]
        output_dir = Path(self.config.output_directory)
        output_dir.mkdir(parents=True, exist_ok=True)
        path = output_dir / f'{name}.tsv'
        pd.DataFrame(flat).to_csv(path, sep='\t', index=False)
        self.logger.info(f"Wrote {len(flat)} rows to {path}")
        return path
