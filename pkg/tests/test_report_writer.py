import json
from fractions import Fraction

import pandas as pd
import pytest

from src.export.report_writer import ReportWriter, canonical_json, lint_provenance, to_jsonable
from src.utils.config import OutputConfig
from src.utils.errors import ReportError


def selftest_document(**extra):
    document = {
        'command': 'selftest',
        'run': {'command': 'selftest', 'trials': 1, 'seed': 0, 'field': {'mode': 'prime'}},
        'provenance': {'kind': 'rule', 'source': 'selftest'},
        'checks': [{'name': 'quadric-veronese', 'passed': True, 'detail': 'dim 4'}],
        'passed': True,
    }
    document.update(extra)
    return document


@pytest.fixture
def writer(tmp_path):
    return ReportWriter(OutputConfig(output_directory=str(tmp_path / 'out')))


class TestCanonicalJson:
    def test_fractions_become_strings(self):
        assert to_jsonable({'bound': Fraction(3, 7), 'zero': Fraction(0)}) == {'bound': '3/7', 'zero': '0'}

    def test_sorted_keys_and_newline(self):
        text = canonical_json({'b': 1, 'a': [Fraction(1, 2)]})
        assert text == '{\n  "a": [\n    "1/2"\n  ],\n  "b": 1\n}\n'

    def test_unserializable_value(self):
        with pytest.raises(ReportError):
            to_jsonable({'x': object()})


class TestProvenanceLint:
    def test_claim_without_provenance(self):
        assert lint_provenance({'rows': [{'h_max': 3}]}) == ['$.rows[0]']

    def test_claim_with_provenance(self):
        assert lint_provenance({'h_max': 3, 'provenance': {'kind': 'formula'}}) == []

    def test_provenance_dicts_are_not_linted(self):
        document = {'gr': 2, 'provenance': {'kind': 'probe', 'failure_bound': '1/5'}}
        assert lint_provenance(document) == []

    def test_run_settings_are_not_claims(self):
        document = {'run': {'command': 'analyze', 'h_max': 2}, 'provenance': {'kind': 'probe'}}
        assert lint_provenance(document) == []


class TestReportWriter:
    def test_render_adds_version(self, writer):
        data = json.loads(writer.render(selftest_document()))
        assert data['version'] == 1

    def test_identical_documents_render_identically(self, writer):
        assert writer.render(selftest_document()) == writer.render(selftest_document())

    def test_schema_violation(self, writer):
        with pytest.raises(ReportError) as info:
            writer.render(selftest_document(passed='yes'))
        assert 'passed' in str(info.value)
        assert info.value.exit_code == 1

    def test_lint_violation(self, writer):
        with pytest.raises(ReportError):
            writer.render(selftest_document(extra={'failure_bound': '0'}))

    def test_write_to_file(self, writer, tmp_path):
        path = tmp_path / 'reports' / 'selftest.json'
        text = writer.write(selftest_document(), str(path))
        assert path.read_text() == text

    def test_write_tsv(self, writer):
        rows = [{'spec': 'segre:1,1', 'h_max': 1, 'parameters': {'k': 2}, 'bound': Fraction(1, 3)},
                {'spec': 'segre:1,1,1', 'h_max': 2, 'parameters': {'k': 3}, 'bound': Fraction(1, 4)}]
        path = writer.write_tsv(rows, 'binary-segre')
        frame = pd.read_csv(path, sep='\t')
        assert list(frame.columns) == ['spec', 'h_max', 'bound']
        assert list(frame['bound']) == ['1/3', '1/4']

    def test_tsv_disabled(self, tmp_path):
        writer = ReportWriter(OutputConfig(output_directory=str(tmp_path), write_tsv=False))
        assert writer.write_tsv([{'spec': 'x'}], 'table') is None
        assert writer.write_tsv([], 'table') is None
