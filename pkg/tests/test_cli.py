import csv
import io

import pytest
import simplejson as json

from hardmdp.cli import main
from hardmdp.info import kl_bernoulli
from hardmdp.utils.io import save_json

TREE_FLAGS = ['--family', 'tree', '--S', '6', '--A', '2', '--H', '9', '--Hbar', '3',
              '--eps', '0.1']


def _stdout_json(capsys):
    return json.loads(capsys.readouterr().out)


@pytest.fixture
def tree_dir(tmp_path, capsys):
    out = tmp_path / 'tree'
    assert main(['gen'] + TREE_FLAGS + ['--out', str(out)]) == 0
    capsys.readouterr()
    return out


@pytest.fixture
def s3_dir(tmp_path, capsys):
    out = tmp_path / 's3'
    assert main(['gen', '--family', 's3', '--A', '2', '--H', '2', '--eps', '0.1',
                 '--out', str(out)]) == 0
    capsys.readouterr()
    return out


# ---------------------------------------------------------------------------
# gen / plan / kl
# ---------------------------------------------------------------------------

def test_gen_writes_class(tmp_path, capsys):
    out = tmp_path / 'tree'
    assert main(['gen'] + TREE_FLAGS + ['--out', str(out)]) == 0
    manifest = _stdout_json(capsys)
    assert len(manifest['instances']) == 13
    assert manifest['instances'][0]['arm'] is None
    assert len(manifest['arm_sites']) == 12
    assert manifest['schema_version'] == 1
    assert sorted(p.name for p in out.iterdir()) == \
        ['instance_%03d.json' % i for i in range(13)] + ['manifest.json']


def test_gen_from_spec(tmp_path, capsys):
    spec = tmp_path / 'gen.json'
    save_json({'class': {'family': 's3', 'A': 4, 'H': 3, 'eps': 0.2}}, spec)
    out = tmp_path / 's3'
    assert main(['gen', '--spec', str(spec), '--out', str(out)]) == 0
    assert len(_stdout_json(capsys)['instances']) == 5
    assert (out / 'instance_004.json').exists()


def test_gen_replaces_earlier_instances(tree_dir, capsys):
    assert main(['gen', '--family', 's3', '--A', '2', '--H', '3', '--eps', '0.1',
                 '--out', str(tree_dir)]) == 0
    assert len(_stdout_json(capsys)['instances']) == 3
    assert sorted(p.name for p in tree_dir.iterdir()) == \
        ['instance_000.json', 'instance_001.json', 'instance_002.json', 'manifest.json']


def test_gen_needs_a_class(tmp_path):
    assert main(['gen', '--family', 'tree', '--out', str(tmp_path)]) == 2
    assert main(['gen', '--family', 'cube', '--A', '2', '--H', '4',
                 '--out', str(tmp_path)]) == 2


def test_plan(tree_dir, capsys):
    assert main(['plan', str(tree_dir / 'instance_001.json')]) == 0
    plan = _stdout_json(capsys)
    assert plan['rho_star'] == pytest.approx(2.4, abs=1e-12)
    assert len(plan['policy']) == 9
    assert main(['plan', str(tree_dir / 'instance_000.json'), '--format', 'table']) == 0
    assert capsys.readouterr().out.startswith('rho* = 2\n')


def test_plan_rejects_invalid_instance(tree_dir, tmp_path):
    doc = json.loads((tree_dir / 'instance_000.json').read_text())
    doc['p'][0][0][0][0] += 0.5
    broken = tmp_path / 'broken.json'
    save_json(doc, broken)
    assert main(['plan', str(broken)]) == 2
    assert main(['plan', str(tmp_path / 'missing.json')]) == 2


def test_kl_exact(s3_dir, capsys):
    assert main(['kl', '--m0', str(s3_dir / 'instance_000.json'),
                 '--m1', str(s3_dir / 'instance_002.json'), '--T', '100',
                 '--format', 'json']) == 0
    result = _stdout_json(capsys)
    assert result['total'] == pytest.approx(50 * kl_bernoulli(0.5, 0.6), rel=1e-12)
    assert len(result['entries']) == 1


def test_kl_methods(s3_dir, capsys):
    m0, m1 = str(s3_dir / 'instance_000.json'), str(s3_dir / 'instance_002.json')
    assert main(['kl', '--m0', m0, '--m1', m1, '--T', '2', '--method', 'brute-force',
                 '--format', 'json']) == 0
    assert _stdout_json(capsys)['total'] == pytest.approx(kl_bernoulli(0.5, 0.6))
    assert main(['kl', '--m0', m0, '--m1', m1, '--T', '10', '--method', 'monte-carlo',
                 '--n-reps', '50', '--seed', '1', '--parallelism', '1',
                 '--format', 'json']) == 0
    result = _stdout_json(capsys)
    assert result['n_reps'] == 50
    assert result['stderr'] > 0


def test_kl_exit_codes(tree_dir, s3_dir):
    m0, m1 = str(tree_dir / 'instance_000.json'), str(tree_dir / 'instance_001.json')
    assert main(['kl', '--m0', m0, '--m1', m1, '--T', '2', '--method', 'brute-force']) == 1
    assert main(['kl', '--m0', m0, '--m1', str(s3_dir / 'instance_001.json'),
                 '--T', '2']) == 2
    assert main(['kl', '--m0', m0, '--m1', m1]) == 2


def test_kl_from_spec(s3_dir, tmp_path, capsys):
    spec = tmp_path / 'kl.json'
    save_json({'m0': str(s3_dir / 'instance_000.json'), 'm1': str(s3_dir / 'instance_002.json'),
               'T': 100}, spec)
    assert main(['kl', '--spec', str(spec), '--format', 'json']) == 0
    assert _stdout_json(capsys)['total'] == pytest.approx(50 * kl_bernoulli(0.5, 0.6), rel=1e-12)

    # flags take precedence over the file
    assert main(['kl', '--spec', str(spec), '--T', '2', '--method', 'brute-force',
                 '--format', 'json']) == 0
    result = _stdout_json(capsys)
    assert result['method'] == 'brute-force'
    assert result['total'] == pytest.approx(kl_bernoulli(0.5, 0.6))


def test_kl_spec_errors(s3_dir, tmp_path):
    spec = tmp_path / 'kl.json'
    save_json({'m0': str(s3_dir / 'instance_000.json'), 'T': 10}, spec)
    assert main(['kl', '--spec', str(spec)]) == 2
    save_json({'m0': str(s3_dir / 'instance_000.json'), 'm1': str(s3_dir / 'instance_001.json'),
               'T': 10, 'method': 'sampling'}, spec)
    assert main(['kl', '--spec', str(spec)]) == 2


# ---------------------------------------------------------------------------
# bound
# ---------------------------------------------------------------------------

def test_bound_json(capsys):
    assert main(['bound', '--theorem', 'regret-tree', '--H', '6', '--S', '6', '--A', '2',
                 '--T', '72']) == 0
    report = _stdout_json(capsys)
    assert report['value'] == pytest.approx(3.6742, abs=1e-4)
    assert report['valid']


def test_bound_table(capsys):
    assert main(['bound', '--theorem', 'regret-s4', '--H', '3', '--A', '2', '--T', '10',
                 '--format', 'table']) == 0
    out = capsys.readouterr().out
    assert out.startswith('regret-s4: ')
    assert 'FAIL' in out


def test_bound_batch(tmp_path, capsys):
    batch = tmp_path / 'batch.json'
    save_json([{'theorem': 'regret-s3', 'H': 2, 'S': 3, 'A': 2, 'T': 4},
               {'theorem': 'bpi-s4', 'H': 6, 'S': 4, 'A': 3, 'eps': 0.2, 'delta': 0.5}], batch)
    assert main(['bound', '--batch', str(batch)]) == 0
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert [row['theorem_id'] for row in rows] == ['regret-s3', 'bpi-s4']
    assert float(rows[0]['value']) == pytest.approx(0.125)
    assert rows[0]['valid'] == '1'
    assert rows[1]['failed'] == 'log(1/(2.4 delta)) > 0'
    assert rows[1]['T'] == ''


def test_bound_usage_errors(tmp_path):
    assert main(['bound', '--theorem', 'regret-cube', '--H', '6', '--A', '2', '--T', '5']) == 2
    assert main(['bound', '--theorem', 'regret-tree', '--H', '6', '--S', '6', '--A', '2']) == 2
    assert main(['bound', '--H', 'six']) == 2
    batch = tmp_path / 'batch.json'
    save_json({'theorem': 'regret-s3'}, batch)
    assert main(['bound', '--batch', str(batch)]) == 2


def test_no_command():
    assert main([]) == 2
    assert main(['--version']) == 0


# ---------------------------------------------------------------------------
# sweeps and verify
# ---------------------------------------------------------------------------

def test_regret_sweep_to_directory(tmp_path, capsys):
    spec = tmp_path / 'regret.json'
    save_json({'class': {'family': 's3', 'A': 2, 'H': 3, 'eps': 'optimal'},
               'learner': {'kind': 'uniform'}, 'T': 50, 'n_seeds': 2}, spec)
    out = tmp_path / 'out'
    assert main(['regret-sweep', '--spec', str(spec), '--out', str(out),
                 '--parallelism', '1']) == 0
    summary = _stdout_json(capsys)
    assert summary['schema_version'] == 1
    assert len(summary['records']) == 3
    assert summary['class']['eps'] == pytest.approx(0.5 * (2 / 50) ** 0.5 / (2 * 2 ** 0.5))
    with open(out / 'regret_cells.csv') as f:
        rows = list(csv.DictReader(f))
    assert len(rows) == 6
    assert {int(row['arm_visits_total']) for row in rows} == {50}
    assert (out / 'summary.json').exists()


def test_regret_sweep_to_stdout(tmp_path, capsys):
    spec = tmp_path / 'regret.json'
    save_json({'class': {'family': 's4', 'A': 2, 'H': 4, 'Hbar': 1, 'eps': 0.1},
               'learner': 'optimistic-q', 'T': 20, 'n_seeds': 1, 'seed': 3}, spec)
    assert main(['regret-sweep', '--spec', str(spec), '--parallelism', '1']) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == 'instance,arm,seed,N,arm_visits_total,reward,identity_regret,reward_regret'
    assert len(lines) == 4


def test_sweep_spec_errors(tmp_path):
    spec = tmp_path / 'regret.json'
    save_json({'class': {'family': 's3', 'A': 2, 'H': 3}, 'T': 50, 'n_seeds': 2}, spec)
    assert main(['regret-sweep', '--spec', str(spec)]) == 2
    assert main(['bpi-sweep', '--spec', str(tmp_path / 'missing.json')]) == 2


def test_bpi_sweep(tmp_path, capsys):
    spec = tmp_path / 'bpi.json'
    save_json({'class': {'family': 's4-bpi', 'A': 2, 'H': 6, 'Hbar': 1},
               'eps': 0.3, 'delta': 0.1, 'n_seeds': 2}, spec)
    out = tmp_path / 'out'
    assert main(['bpi-sweep', '--spec', str(spec), '--out', str(out),
                 '--parallelism', '1']) == 0
    summary = _stdout_json(capsys)
    assert summary['class_gap'] == pytest.approx(0.075)
    assert summary['exclusive']
    assert summary['bound']['theorem_id'] == 'bpi-s4'
    assert (out / 'bpi_cells.csv').exists()


def test_verify_subset(capsys):
    assert main(['verify', '--checks', 'pinsker', 'kl-half-epsilon']) == 0
    out = capsys.readouterr().out
    assert 'pinsker' in out
    assert 'FAIL' not in out


def test_verify_unknown_check():
    assert main(['verify', '--checks', 'pinsker', 'nope']) == 2
