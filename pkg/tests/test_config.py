from pathlib import Path

import pytest

import hardmdp
from hardmdp.config import CRITICAL_VARS, SPEC_KINDS, check_config
from hardmdp.instances import ClassSpec
from hardmdp.utils.io import load_config

CONFIG_DIR = Path(hardmdp.__file__).parent / 'config_files'


def _regret_spec():
    return {'class': {'family': 'tree', 'S': 6, 'A': 2, 'H': 9, 'Hbar': 3},
            'learner': 'uniform', 'T': 100, 'n_seeds': 4}


def test_templates_are_complete(log_records):
    regret = check_config(load_config(CONFIG_DIR / 'regret_sweep_tree.json'), 'regret-sweep')
    bpi = check_config(load_config(CONFIG_DIR / 'bpi_sweep_s4.json'), 'bpi-sweep')
    assert regret['class']['eps'] == 'optimal'
    assert bpi['class']['ref_arm'] == [2, 0]
    assert 'Setting undefined parameter' not in log_records.text


def test_optional_values_are_filled(log_records):
    cfg = check_config(_regret_spec(), 'regret-sweep')
    assert cfg['seed'] == 0
    assert cfg['parallelism'] is None
    assert cfg['out'] is None
    assert cfg['class']['eps'] == 0.0
    assert cfg['class']['relaxed'] is False
    assert 'Setting undefined parameter seed=0' in log_records.text
    assert 'Updating internal parameter for family tree' in log_records.text


def test_family_defaults_follow_aliases():
    cfg = check_config({'class': {'family': 's4-bpi', 'A': 2, 'H': 8, 'Hbar': 3},
                        'eps': 0.3, 'delta': 0.1, 'n_seeds': 2}, 'bpi-sweep')
    assert cfg['class']['ref_arm'] == [2, 0]
    assert cfg['learner'] == {'kind': 'bpi-uniform'}
    cfg = check_config({'class': {'family': 's3', 'A': 2, 'H': 3}}, 'gen')
    assert cfg['out'] == 'instances'
    assert ClassSpec.from_dict(cfg['class']).family == 's3-stationary'


def test_kl_spec_defaults(log_records):
    cfg = check_config({'m0': 'a.json', 'm1': 'b.json', 'T': 20}, 'kl')
    assert (cfg['policy'], cfg['method'], cfg['n_reps']) == ('uniform', 'exact', 100)
    assert 'Setting undefined parameter method=exact' in log_records.text
    with pytest.raises(RuntimeError):
        check_config({'m0': 'a.json', 'm1': 'b.json', 'T': '20'}, 'kl')


@pytest.mark.parametrize('key', sorted(CRITICAL_VARS['regret-sweep']))
def test_missing_mandatory_key(key):
    cfg = _regret_spec()
    del cfg[key]
    with pytest.raises(RuntimeError):
        check_config(cfg, 'regret-sweep')


def test_wrong_types():
    cfg = _regret_spec()
    cfg['T'] = 100.5
    with pytest.raises(RuntimeError):
        check_config(cfg, 'regret-sweep')
    cfg = _regret_spec()
    cfg['n_seeds'] = True
    with pytest.raises(RuntimeError):
        check_config(cfg, 'regret-sweep')


def test_bad_class_selection():
    for broken in ({'A': 2, 'H': 9}, {'family': 'grid', 'A': 2, 'H': 9},
                   {'family': 'tree', 'A': 2}):
        cfg = _regret_spec()
        cfg['class'] = broken
        with pytest.raises(RuntimeError):
            check_config(cfg, 'regret-sweep')


def test_unknown_kind_and_non_object():
    assert 'kl' in SPEC_KINDS
    with pytest.raises(ValueError):
        check_config({}, 'plot')
    with pytest.raises(RuntimeError):
        check_config([1, 2], 'gen')


def test_load_config_errors(tmp_path):
    with pytest.raises(IOError):
        load_config(tmp_path / 'missing.json')
    broken = tmp_path / 'broken.json'
    broken.write_text('{"class": ')
    with pytest.raises(ValueError):
        load_config(broken)
    scalar = tmp_path / 'scalar.json'
    scalar.write_text('3')
    with pytest.raises(ValueError):
        load_config(scalar)
