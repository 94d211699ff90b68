import pytest

from hardmdp.verify import CHECKS, closed_form_grid, kl_cells, run_checks


def test_enumeration_matrix_size():
    cells = kl_cells()
    assert len(cells) >= 20
    for ref, _, _, _, T in cells:
        assert ref.mdp.S <= 4 and ref.mdp.A <= 3 and ref.mdp.H <= 4
        assert T <= 2


def test_closed_form_grid_covers_every_family():
    grid = closed_form_grid()
    assert len(grid) >= 50
    assert {params.family for params, _ in grid} == \
        {'tree', 'tree-stationary', 's3-stationary', 's4-stage', 's4-bpi'}


@pytest.mark.parametrize('name', [name for name, _ in CHECKS])
def test_check_passes(name):
    result, = run_checks(seed=0, names=[name])
    assert result.name == name
    assert result.passed, result.detail
    assert result.cases > 0


def test_checks_run_in_order():
    names = ['leaf-count', 'pinsker']
    assert [r.name for r in run_checks(names=names)] == ['pinsker', 'leaf-count']


def test_unknown_check():
    with pytest.raises(ValueError):
        run_checks(names=['pinsker', 'nope'])
