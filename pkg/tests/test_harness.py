import math

import numpy as np
import pytest

from hardmdp.harness import (LEARNER_KINDS, LearnerSpec, adversarial_instance, arm_histogram,
                             averaging_inequality_check, builtin_learners, good_arm_count,
                             make_learner, optimal_class_eps, run_bpi_sweep, run_regret_sweep)
from hardmdp.instances import ClassSpec, arm_policy, build_instance
from hardmdp.mdp import make_generator, uniform_policy

S3_SPEC = ClassSpec('s3-stationary', A=2, H=3, eps=0.2)
BPI_SPEC = ClassSpec('s4-bpi', A=2, H=6, Hbar=1)


def _regrets(result):
    return [(row['instance'], row['seed'], row['N'], row['identity_regret'], row['reward'])
            for row in result.rows]


# ---------------------------------------------------------------------------
# learners
# ---------------------------------------------------------------------------

def test_learner_spec():
    assert LearnerSpec.from_dict('optimistic-q').kind == 'optimistic-q'
    assert LearnerSpec.from_dict({'kind': 'fixed-arm', 'arm': 2}).arm == 2
    with pytest.raises(ValueError):
        LearnerSpec('sarsa')
    with pytest.raises(ValueError):
        LearnerSpec('optimistic-q', bonus=0.0)
    with pytest.raises(ValueError):
        LearnerSpec.from_dict({'kind': 'uniform', 'rate': 0.1})


def test_builtin_learners_catalog():
    catalog = builtin_learners()
    assert set(catalog) == set(LEARNER_KINDS)
    assert catalog['optimistic-q']['defaults'] == {'bonus': 1.0}


def test_make_learner(tree_pair):
    instance = tree_pair[1]
    rng = make_generator(0)
    assert make_learner('uniform', instance, rng).markov_policy() is not None
    assert make_learner('optimistic-q', instance, rng).markov_policy() is None
    with pytest.raises(ValueError):
        make_learner('bpi-uniform', instance, rng)
    with pytest.raises(ValueError):
        make_learner(LearnerSpec('fixed-arm', arm=99), instance, rng)


def test_good_arm_count(tree_pair):
    reference = tree_pair[0]
    m = reference.mdp
    assert good_arm_count(reference, m, uniform_policy(m.S, m.A, m.H)) == 0
    for site in reference.arm_sites:
        assert good_arm_count(reference, m, arm_policy(reference, site)) == 1


def test_arm_histogram_requires_one_visit_per_episode():
    instance = build_instance(S3_SPEC.reference_params())
    states = np.ones((4, 3), dtype=int)
    actions = np.zeros((4, 3), dtype=int)
    with pytest.raises(RuntimeError):
        arm_histogram(instance, states, actions)
    states[:, 0] = 0
    actions[:2, 0] = 1
    assert arm_histogram(instance, states, actions).tolist() == [2, 2]


# ---------------------------------------------------------------------------
# regret sweeps
# ---------------------------------------------------------------------------

def test_sweep_shape_and_counts():
    result = run_regret_sweep('uniform', S3_SPEC, T=200, n_seeds=3, seed=1)
    assert len(result.records) == 3
    assert len(result.rows) == 9
    assert all(row['arm_visits_total'] == 200 for row in result.rows)
    assert all(row['histogram'].sum() == 200 for row in result.rows)
    assert result.histograms(1).shape == (3, 2)
    assert result.records[0].identity_regret == 0.0
    assert math.isnan(result.records[0].mean_N)
    assert result.bound.theorem_id == 'regret-s3'


def test_sweep_is_reproducible():
    first = run_regret_sweep('uniform', S3_SPEC, T=100, n_seeds=2, seed=5)
    second = run_regret_sweep('uniform', S3_SPEC, T=100, n_seeds=2, seed=5)
    other = run_regret_sweep('uniform', S3_SPEC, T=100, n_seeds=2, seed=6)
    assert _regrets(first) == _regrets(second)
    assert _regrets(first) != _regrets(other)


def test_sweep_does_not_depend_on_workers():
    serial = run_regret_sweep('optimistic-q', S3_SPEC, T=50, n_seeds=2, seed=3, n_jobs=1)
    pooled = run_regret_sweep('optimistic-q', S3_SPEC, T=50, n_seeds=2, seed=3, n_jobs=2)
    assert _regrets(serial) == _regrets(pooled)


def test_zero_gap_has_zero_identity_regret():
    result = run_regret_sweep('uniform', S3_SPEC.with_eps(0.0), T=100, n_seeds=2)
    assert all(row['identity_regret'] == 0.0 for row in result.rows)


def test_identity_and_reward_regret_agree():
    result = run_regret_sweep('uniform', S3_SPEC, T=400, n_seeds=10, seed=2)
    assert all(rec.agree for rec in result.records)
    for rec in result.records[1:]:
        assert rec.identity_regret == pytest.approx(400 * 2 * 0.2 * 0.5, rel=0.2)


def test_fixed_arm_identity():
    result = run_regret_sweep(LearnerSpec('fixed-arm', arm=1), S3_SPEC, T=50, n_seeds=1)
    assert [rec.mean_N for rec in result.records[1:]] == [0.0, 50.0]
    assert result.records[1].identity_regret == pytest.approx(50 * 2 * 0.2)
    assert result.records[2].identity_regret == 0.0
    assert result.worst.index == 1


def test_optimistic_beats_uniform():
    uniform = run_regret_sweep('uniform', S3_SPEC, T=1000, n_seeds=2, seed=4)
    optimistic = run_regret_sweep('optimistic-q', S3_SPEC, T=1000, n_seeds=2, seed=4)
    assert optimistic.worst_regret < uniform.worst_regret


@pytest.mark.slow
def test_optimistic_settles_on_the_boosted_arm():
    fractions = []
    for T in (100, 1000, 10000):
        result = run_regret_sweep('optimistic-q', S3_SPEC, T=T, n_seeds=2, seed=8)
        fractions.append(np.mean([rec.mean_N / T for rec in result.records[1:]]))
    assert fractions == sorted(fractions)
    assert fractions[-1] > 0.75


def test_adversarial_instance_is_worst():
    params, regret = adversarial_instance('uniform', S3_SPEC, T=200, n_seeds=2, seed=7)
    result = run_regret_sweep('uniform', S3_SPEC, T=200, n_seeds=2, seed=7)
    assert params == result.worst.params
    assert regret >= result.mean_regret
    assert params.arm is not None


def test_sweep_rejects_bpi_family():
    with pytest.raises(ValueError):
        run_regret_sweep('uniform', BPI_SPEC, T=10, n_seeds=1)
    with pytest.raises(ValueError):
        run_regret_sweep('uniform', S3_SPEC, T=0, n_seeds=1)


def test_sweep_dict_and_csv(tree_spec):
    result = run_regret_sweep('uniform', tree_spec, T=20, n_seeds=1)
    data = result.to_dict()
    assert data['class']['family'] == 'tree'
    assert len(data['records']) == 13
    assert data['bound']['theorem_id'] == 'regret-tree'
    assert len(result.csv_rows()) == 13
    assert result.csv_rows()[0][1] == ''


def test_optimal_class_eps(tree_spec):
    assert optimal_class_eps(tree_spec, 1200) == pytest.approx(0.032409, abs=1e-6)


# ---------------------------------------------------------------------------
# averaging argument
# ---------------------------------------------------------------------------

@pytest.mark.parametrize('learner', ['uniform', LearnerSpec('fixed-arm', arm=0)])
def test_averaging_inequality(tree_spec, learner):
    report = averaging_inequality_check(learner, tree_spec, T=100, n_seeds=4, seed=1)
    assert report.K == 12
    assert report.counts_sum_to_T
    assert report.holds
    assert report.pinsker_holds
    assert report.rhs == pytest.approx(1 + math.sqrt(2) * 0.1 * math.sqrt(1200))


def test_averaging_fixed_arm_is_exact(tree_spec):
    report = averaging_inequality_check(LearnerSpec('fixed-arm', arm=3), tree_spec, T=50,
                                        n_seeds=2)
    assert report.lhs == pytest.approx(1.0)
    assert report.lhs_stderr == 0.0


# ---------------------------------------------------------------------------
# best-policy identification
# ---------------------------------------------------------------------------

def test_bpi_sweep():
    result = run_bpi_sweep('bpi-uniform', BPI_SPEC, eps=0.3, delta=0.1, n_seeds=8, seed=2)
    assert result.class_gap == pytest.approx(0.075)
    assert len(result.records) == 2
    assert all(rec.n_capped == 0 for rec in result.records)
    assert result.failure_ok
    assert result.exclusive
    assert result.bound.theorem_id == 'bpi-s4'
    assert result.bound_ok
    assert result.reference_tau > result.bound.value
    assert all(row['tau'] % 2 == 0 for row in result.rows)


def test_bpi_sweep_on_tree():
    spec = ClassSpec('tree', S=6, A=2, H=8, Hbar=2)
    result = run_bpi_sweep('bpi-uniform', spec, eps=0.3, delta=0.1, n_seeds=2, seed=1)
    assert result.class_gap == pytest.approx(0.15)
    assert len(result.records) == 9
    assert len(result.rows) == 18
    assert all(row['pac_success'] for row in result.rows)
    assert result.failure_ok
    assert result.bound.theorem_id == 'bpi-tree'


def test_bpi_sweep_capped_runs(log_records):
    learner = LearnerSpec('bpi-uniform', cap=100)
    result = run_bpi_sweep(learner, BPI_SPEC, eps=0.3, delta=0.1, n_seeds=2)
    assert all(row['capped'] for row in result.rows)
    assert all(rec.n_capped == 2 for rec in result.records)
    assert math.isnan(result.reference_tau)
    assert 'reached the cap' in log_records.text


def test_bpi_sweep_rejects_bad_inputs():
    with pytest.raises(ValueError):
        run_bpi_sweep('uniform', BPI_SPEC, eps=0.3, delta=0.1, n_seeds=1)
    with pytest.raises(ValueError):
        run_bpi_sweep('bpi-uniform', S3_SPEC, eps=0.3, delta=0.1, n_seeds=1)
    with pytest.raises(ValueError):
        run_bpi_sweep('bpi-uniform', BPI_SPEC, eps=0.3, delta=1.5, n_seeds=1)
