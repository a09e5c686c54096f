import json

import pytest
import yaml

from main import main


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / 'config.yaml'
    path.write_text(yaml.safe_dump({
        'probes': {'trials': 2},
        'output': {'output_directory': str(tmp_path / 'tables')},
        'log_level': 'WARNING',
    }))
    return str(path)


@pytest.fixture
def run_cli(capsys, config_file):
    """Run the CLI and return (exit code, parsed stdout document)."""
    def run(*argv):
        code = main([*argv, '--config', config_file])
        out = capsys.readouterr().out
        return code, (json.loads(out) if out.strip() else None)
    return run


def knowledge_base_file(tmp_path, entries):
    path = tmp_path / 'kb.json'
    path.write_text(json.dumps({'version': 1, 'entries': entries}))
    return str(path)


class TestAnalyze:
    def test_quadric_veronese(self, run_cli):
        code, document = run_cli('analyze', '--spec', 'veronese:d=2,n=2', '--h-max', '2')
        assert code == 0
        assert [r['dim_computed'] for r in document['secant']] == [2, 4]
        assert document['secant'][1]['defect'] == 1
        assert document['addition_check']['agree'] is True
        assert document['run']['trials'] == 2
        assert document['run']['h_max'] == 2
        assert document['version'] == 1

    def test_single_h_with_filling_span(self, run_cli):
        code, document = run_cli('analyze', '--spec', 'segre:1,1,1', '--h', '2')
        assert code == 0
        assert document['secant'][0]['dim_computed'] == 7
        assert document['twd'][0]['inapplicable'] is True
        assert document['tau'][0]['h'] == 2

    def test_rational_field(self, run_cli):
        code, document = run_cli('analyze', '--spec', 'segre:1,2', '--h-max', '2', '--field-mode', 'rational')
        assert code == 0
        assert document['run']['field'] == {'mode': 'rational'}
        assert [r['dim_computed'] for r in document['secant']] == [3, 5]

    def test_bad_spec(self, run_cli):
        code, document = run_cli('analyze', '--spec', 'segre:0,1')
        assert code == 2
        assert document is None

    def test_bad_modulus(self, run_cli):
        code, _ = run_cli('analyze', '--spec', 'segre:1,1', '--modulus', '1000003')
        assert code == 2

    def test_capacity(self, run_cli):
        code, _ = run_cli('analyze', '--spec', 'segre:1,1,1', '--h', '2', '--max-entries', '10')
        assert code == 3

    def test_missing_spec_is_a_usage_error(self, config_file):
        with pytest.raises(SystemExit) as info:
            main(['analyze', '--config', config_file])
        assert info.value.code == 2


class TestCertify:
    def test_catalog_only(self, run_cli):
        code, document = run_cli('certify', '--spec', 'segre:1,1,1,1,1', '--mode', 'catalog-only')
        assert code == 0
        assert document['range']['h_ident_max'] == 4
        assert document['range']['agreement'] is True
        assert document['run']['mode'] == 'catalog-only'

    def test_hybrid_gaussian(self, run_cli):
        code, document = run_cli('certify', '--spec', 'gm:d=14', '--h', '5')
        assert code == 0
        assert document['range']['h_ident_max'] == 4
        assert document['range']['secant']

    def test_disagreement(self, run_cli, tmp_path):
        empty = knowledge_base_file(tmp_path, [])
        code, document = run_cli('certify', '--spec', 'segre:1,1,1,1,1', '--mode', 'catalog-only',
                                 '--knowledge-base', empty)
        assert code == 4
        assert document['range']['h_ident_max'] is None
        assert document['range']['agreement'] is False

    def test_contradiction(self, run_cli, tmp_path):
        wrong = knowledge_base_file(tmp_path, [{'id': 'wrong', 'family': 'binary_segre', 'fact': 'Defective',
                                                'h_range': '== 2', 'citation': 'deliberately wrong'}])
        code, document = run_cli('certify', '--spec', 'segre:1,1,1,1,1', '--h', '2',
                                 '--knowledge-base', wrong)
        assert code == 4
        assert 'range' not in document
        assert document['contradiction']['existing']['goal']
        assert document['contradiction']['incoming']['goal']

    def test_probe_only_capacity(self, run_cli):
        code, _ = run_cli('certify', '--spec', 'segre:1,1,1,1,1', '--mode', 'probe-only', '--max-entries', '10')
        assert code == 3

    def test_output_file_matches_stdout(self, capsys, config_file, tmp_path):
        path = tmp_path / 'out' / 'certify.json'
        code = main(['certify', '--spec', 'segre:1,1,1', '--mode', 'catalog-only',
                     '--output', str(path), '--config', config_file])
        assert code == 0
        assert capsys.readouterr().out == path.read_text()

    def test_repeated_runs_are_byte_identical(self, capsys, config_file):
        argv = ['certify', '--spec', 'gm:d=14', '--h', '3', '--trials', '1', '--seed', '11',
                '--config', config_file]
        outputs = set()
        for _ in range(3):
            assert main(argv) == 0
            outputs.add(capsys.readouterr().out)
        assert len(outputs) == 1


class TestTable:
    def test_binary_segre(self, run_cli, tmp_path):
        code, document = run_cli('table', 'binary-segre', '--max-k', '7', '--mode', 'catalog-only')
        assert code == 0
        assert [row['h_max'] for row in document['rows']] == [1, 2, 2, 4, 9, 15]
        assert all(row['certified'] and row['agreement'] for row in document['rows'])
        assert (tmp_path / 'tables' / 'binary-segre.tsv').exists()

    def test_xkn_rows_are_perfect(self, run_cli):
        code, document = run_cli('table', 'xkn', '--max', '3', '--mode', 'catalog-only')
        assert code == 0
        assert len(document['rows']) == 4
        assert all(row['perfect'] for row in document['rows'])
        assert all(row['h_max'] == row['gr'] - 1 for row in document['rows'])

    def test_gaussian(self, run_cli):
        code, document = run_cli('table', 'gaussian', '--d', '14..20', '--mode', 'catalog-only')
        assert code == 0
        assert [row['parameters']['d'] for row in document['rows']] == list(range(14, 21))
        assert [row['h_max'] for row in document['rows']] == [(d + 1) // 3 - 1 for d in range(14, 21)]

    def test_grassmann_floor_conventions(self, run_cli):
        code, document = run_cli('table', 'grassmann', '--max', '1', '--mode', 'catalog-only')
        assert code == 0
        assert all('floor_conventions' in row for row in document['rows'] if row['h_max'] is not None)

    def test_bad_range(self, run_cli):
        code, _ = run_cli('table', 'gaussian', '--d', '20..14')
        assert code == 2


class TestSelftest:
    def test_corrupted_knowledge_base(self, run_cli, corrupted_knowledge_base):
        code, document = run_cli('selftest', '--knowledge-base', str(corrupted_knowledge_base))
        assert code == 2
        assert document is None

    @pytest.mark.slow
    def test_full_selftest(self, run_cli):
        code, document = run_cli('selftest', '--trials', '1')
        assert code == 0
        assert document['passed'] is True
        assert len(document['checks']) == 9
