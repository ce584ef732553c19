import json

import pytest

from src.cli import build_parser, run
from src.notions import parse_density
from src.result_formatter import ResultFormatter
from src.schemas import EstimateDocument


def _run_json(capsys, argv):
    assert run(argv) == 0
    return json.loads(capsys.readouterr().out)


def test_mpds_document(capsys, data_dir):
    document = _run_json(capsys, ['mpds', '--graph', str(data_dir / 'fig1.txt'), '--k', '2',
                                  '--theta', '5000', '--seed', '7'])
    assert document['mode'] == 'mpds'
    assert document['notion'] == 'edge'
    assert document['theta'] == 5000
    assert [row['nodes'] for row in document['results']] == [[1, 3], [0, 1, 2, 3]]
    assert document['results'][0]['estimate'] == pytest.approx(0.42, abs=0.05)
    assert 'labels' not in document['results'][0]
    assert 'bounds' not in document


def test_json_output_is_canonical(capsys, data_dir, tmp_path):
    out = tmp_path / 'mpds.json'
    assert run(['mpds', '--graph', str(data_dir / 'fig1.txt'), '--k', '3', '--theta', '500',
                '--bounds', '--out', str(out)]) == 0
    text = out.read_text(encoding='utf-8')
    document = ResultFormatter.from_json(text, EstimateDocument)
    assert ResultFormatter.to_json(document) == text
    assert text.endswith('\n')
    assert set(document.bounds) == {'hoeffding_radius', 'inclusion', 'return'}


@pytest.mark.parametrize('command', [
    ['mpds', '--k', '3', '--theta', '600', '--seed', '9', '--bounds'],
    ['nds', '--k', '2', '--theta', '600', '--seed', '9', '--bounds'],
])
def test_worker_count_does_not_change_output(capsys, data_dir, command):
    argv = command + ['--graph', str(data_dir / 'fig1.txt')]
    assert run(argv + ['--threads', '1']) == 0
    single = capsys.readouterr().out
    for threads in ('4', '8'):
        assert run(argv + ['--threads', threads]) == 0
        assert capsys.readouterr().out == single


def test_auto_theta_reports_convergence(capsys, data_dir):
    document = _run_json(capsys, ['nds', '--graph', str(data_dir / 'fig1.txt'), '--auto-theta'])
    rungs = document['convergence']
    assert rungs[0] == {'theta': 10}
    assert all(set(rung) == {'theta', 'jaccard'} for rung in rungs[1:])
    assert document['theta'] == rungs[-1]['theta']
    assert document['l_m'] == 2


def test_oracle_set(capsys, data_dir):
    document = _run_json(capsys, ['oracle', '--graph', str(data_dir / 'fig1.txt'), '--set', '1,3'])
    assert document['nodes'] == [1, 3]
    assert document['tau'] == pytest.approx(0.42)
    assert document['gamma'] == pytest.approx(0.7)
    assert 'results' not in document


def test_oracle_topk_warns_when_short(capsys, data_dir):
    document = _run_json(capsys, ['oracle', '--graph', str(data_dir / 'fig1.txt'), '--k', '10'])
    assert len(document['results']) == 6
    assert document['results'][0] == {'nodes': [1, 3], 'estimate': 0.42}
    assert len(document['warnings']) == 1


def test_oracle_matching(capsys, tmp_path):
    path = tmp_path / 'triangle.txt'
    path.write_text("# triangle\na b\nb c\na c\n")
    document = _run_json(capsys, ['oracle', '--matching', str(path)])
    assert document['matching'] == {'lhs': 0.5, 'rhs': 0.5, 'edges': 3, 'nodes': 3}


def test_eds(capsys, data_dir):
    document = _run_json(capsys, ['eds', '--graph', str(data_dir / 'fig1.txt')])
    assert document['eds']['nodes'] == [0, 1, 2, 3]
    assert document['eds']['expected_density'] == pytest.approx(0.375)
    assert document['eds']['tau'] == pytest.approx(0.28)
    assert document['dds']['nodes'] == [0, 1, 2, 3]


def test_metrics_with_labels(capsys, data_dir):
    document = _run_json(capsys, ['metrics', '--graph', str(data_dir / 'fig1.txt'), '--set', '0,1,2,3',
                                  '--labels', str(data_dir / 'labels_fig1.txt')])
    assert document['purity'] == 0.5
    assert document['probabilistic_density'] == pytest.approx(0.25)
    assert document['expected_density'] == pytest.approx(0.375)


def test_metrics_compares_saved_result(capsys, data_dir, tmp_path):
    saved = tmp_path / 'mpds.json'
    assert run(['mpds', '--graph', str(data_dir / 'fig1.txt'), '--k', '2', '--theta', '6000',
                '--out', str(saved)]) == 0
    document = _run_json(capsys, ['metrics', '--graph', str(data_dir / 'fig1.txt'), '--set', '1,3',
                                  '--compare', str(saved)])
    assert document['rank_f1'] == 1.0


def test_bench_tsv(capsys, data_dir):
    assert run(['bench', '--graph', str(data_dir / 'fig1.txt'), '--rungs', '3']) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].split('\t') == ['theta', 'runtime', 'jaccard', 'f1']
    assert 2 <= len(lines) <= 4
    assert lines[1].split('\t')[0] == '10'
    assert lines[1].split('\t')[2] == 'nan'


def test_bench_synthetic_beyond_oracle(capsys):
    assert run(['bench', '--synthetic', 'er:12:15', '--rungs', '2', '--seed', '3']) == 0
    rows = [line.split('\t') for line in capsys.readouterr().out.splitlines()[1:]]
    assert all(row[3] == 'nan' for row in rows)


@pytest.mark.parametrize('argv', [
    ['mpds'],
    ['mpds', '--graph', 'fig1.txt', '--k', '0'],
    ['nosuch'],
])
def test_usage_errors_exit_2(argv):
    assert run(argv) == 2


def test_invalid_input_exits_2(data_dir, tmp_path):
    assert run(['mpds', '--graph', str(data_dir / 'fig1.txt'), '--density', 'bogus']) == 2
    assert run(['mpds', '--graph', str(tmp_path / 'missing.txt')]) == 2
    assert run(['oracle']) == 2
    assert run(['bench', '--graph', str(data_dir / 'fig1.txt'), '--synthetic', 'er:5:4']) == 2


def test_oracle_on_large_graph_exits_1(tmp_path):
    path = tmp_path / 'path.txt'
    path.write_text(''.join(f"{i} {i + 1} 0.5\n" for i in range(10)))
    assert run(['oracle', '--graph', str(path)]) == 1


def test_help_exits_0(capsys):
    assert run(['--help']) == 0
    assert 'mpds' in capsys.readouterr().out


def test_bad_environment_exits_2(monkeypatch):
    monkeypatch.setenv('UDENSE_THREADS', 'many')
    assert run(['mpds', '--help']) == 2


def test_subcommands_are_registered():
    parser = build_parser()
    for command in ('mpds', 'nds', 'oracle', 'eds', 'bench'):
        assert parser.parse_args([command, '--graph', 'g.txt']).command == command
    assert parser.parse_args(['metrics', '--graph', 'g.txt', '--set', '1']).command == 'metrics'


def test_parse_density(data_dir):
    assert parse_density('edge').kind == 'edge'
    assert parse_density('clique:3').h == 3
    assert parse_density('pattern:diamond.txt').pattern.automorphism_count == 4
    assert parse_density(f"pattern:{data_dir / 'patterns' / '3-star.txt'}").pattern.node_count == 4
    for bad in ('clique:x', 'clique:1', 'pattern:', 'bogus'):
        with pytest.raises(ValueError):
            parse_density(bad)
