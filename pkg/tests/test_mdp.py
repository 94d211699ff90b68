import math

import numpy as np
import pytest

from hardmdp.instances import (HardInstanceParams, arm_policy, build_instance,
                               make_s3_stationary)
from hardmdp.mdp import (Mdp, MarkovPolicy, Trajectory, deterministic_policy,
                         evaluate_policy, make_generator, mdp_from_dict, mdp_to_dict,
                         occupancy, optimal_values, policy_from_dict, policy_to_dict,
                         simulate_batch, simulate_episode, trajectory_log_prob,
                         uniform_policy, validate)


def _chain():
    """
    Two states, one action, deterministic move 0 -> 1 -> 1.
    """
    p = np.zeros((2, 2, 1, 2))
    p[:, :, 0, 1] = 1.0
    return Mdp([1.0, 0.0], p, np.zeros((3, 2, 1)))


# ---------------------------------------------------------------------------
# containers and validation
# ---------------------------------------------------------------------------

def test_mdp_rejects_inconsistent_shapes():
    with pytest.raises(ValueError):
        Mdp([1.0, 0.0], np.zeros((1, 3, 1, 3)), np.zeros((2, 2, 1)))
    with pytest.raises(ValueError):
        Mdp([1.0, 0.0], np.zeros((1, 2, 1, 2)), np.zeros((2, 2)))


def test_mdp_arrays_are_read_only():
    m = make_s3_stationary(2, 3)
    with pytest.raises(ValueError):
        m.p[0, 0, 0, 0] = 1.0


def test_hard_instances_are_valid(tree_pair, s3_pair):
    for instance in tree_pair + s3_pair:
        assert validate(instance.mdp).valid


def test_validate_names_short_kernel_row():
    m = make_s3_stationary(2, 3)
    p = np.array(m.p)
    p[0, 0, 1] *= 0.8
    report = validate(Mdp(m.mu, p, m.r))
    assert not report.valid
    assert len(report.kernel_row_errors) == 1
    h, s, a, total = report.kernel_row_errors[0]
    assert (h, s, a) == (1, 0, 1)
    assert total == pytest.approx(0.8)
    assert 'h=1, s=0, a=1' in report.summary()


def test_validate_flags_reward_out_of_range():
    m = make_s3_stationary(2, 3)
    r = np.array(m.r)
    r[2, 1, 0] = 1.5
    report = validate(Mdp(m.mu, m.p, r))
    assert not report.valid
    assert report.reward_violations == [(3, 1, 0, 1.5)]


def test_validate_flags_initial_distribution():
    m = make_s3_stationary(2, 3)
    report = validate(Mdp([0.5, 0.0, 0.0], m.p, m.r))
    assert not report.mu_valid
    assert not report.valid


def test_policy_rows_must_be_distributions():
    with pytest.raises(ValueError):
        MarkovPolicy(np.full((2, 3, 2), 0.4))
    with pytest.raises(ValueError):
        deterministic_policy([[0, 2]], 2)


def test_deterministic_policy_table():
    pol = deterministic_policy([[1, 0, 1], [0, 0, 1]], 2)
    assert pol.is_deterministic()
    assert pol.actions().tolist() == [[1, 0, 1], [0, 0, 1]]
    assert not uniform_policy(3, 2, 2).is_deterministic()


def test_json_forms(tree_pair):
    m = tree_pair[1].mdp
    assert mdp_from_dict(mdp_to_dict(m)) == m
    pol = uniform_policy(m.S, m.A, m.H)
    assert policy_from_dict(policy_to_dict(pol)) == pol
    with pytest.raises(ValueError):
        mdp_from_dict({'S': 3, 'A': 2})


# ---------------------------------------------------------------------------
# planning and occupancy
# ---------------------------------------------------------------------------

@pytest.mark.parametrize('H', [2, 3, 6])
def test_uniform_value_on_reference_s3(H):
    m = make_s3_stationary(2, H)
    assert evaluate_policy(m, uniform_policy(3, 2, H)).rho == pytest.approx((H - 1) / 2.0,
                                                                           abs=1e-12)


def test_zero_reward_value():
    m = _chain()
    assert evaluate_policy(m, uniform_policy(2, 1, 3)).rho == 0.0
    assert optimal_values(m)[0].rho == 0.0


def test_optimal_value_tree_instance(tree_pair):
    values, pol = optimal_values(tree_pair[1].mdp)
    assert values.rho == pytest.approx(2.4, abs=1e-12)
    assert pol.is_deterministic()
    assert evaluate_policy(tree_pair[1].mdp, pol).rho == pytest.approx(values.rho, abs=1e-12)


def test_optimal_value_tree_reference(tree_pair):
    assert optimal_values(tree_pair[0].mdp)[0].rho == pytest.approx(2.0, abs=1e-12)


def test_optimal_value_s3_alternative():
    m = make_s3_stationary(3, 5, arm_action=2, eps=0.2)
    values, pol = optimal_values(m)
    assert values.rho == pytest.approx(4 * 0.7, abs=1e-12)
    assert pol.actions()[0, 0] == 2


def test_greedy_ties_go_to_lowest_action():
    _, pol = optimal_values(make_s3_stationary(3, 4))
    assert np.all(pol.actions() == 0)


def test_policy_dimension_mismatch():
    m = make_s3_stationary(2, 3)
    with pytest.raises(ValueError):
        evaluate_policy(m, uniform_policy(3, 2, 4))


def test_occupancy_symmetric_split():
    m = make_s3_stationary(2, 4)
    occ = occupancy(m, uniform_policy(3, 2, 4), T=100)
    assert occ.state_marginal(2)[1] == pytest.approx(0.5)
    assert occ.expected_counts[0, 0, 1] == pytest.approx(50.0)
    assert np.allclose(occ.d.sum(axis=(1, 2)), 1.0)


def test_occupancy_of_arm_policy(tree_pair):
    instance = tree_pair[1]
    site = instance.site
    d = occupancy(instance.mdp, arm_policy(instance, site)).d
    assert d[site.stage - 1, site.state, site.action] == pytest.approx(1.0)


def _random_policies(m, n, seed=0):
    rng = np.random.default_rng(seed)
    return [MarkovPolicy(rng.dirichlet(np.ones(m.A), size=(m.H, m.S))) for _ in range(n)]


@pytest.fixture
def small_tree():
    return build_instance(HardInstanceParams('tree', A=2, H=6, S=6, Hbar=2, eps=0.2,
                                             arm=(3, 1, 0))).mdp


def test_optimal_value_dominates_random_policies(small_tree):
    rho_star = optimal_values(small_tree)[0].rho
    for pol in _random_policies(small_tree, 100):
        assert evaluate_policy(small_tree, pol).rho <= rho_star + 1e-12


def test_occupancy_value_duality(small_tree):
    for pol in _random_policies(small_tree, 100, seed=1):
        d = occupancy(small_tree, pol).d
        assert float(np.sum(d * small_tree.r)) == \
            pytest.approx(evaluate_policy(small_tree, pol).rho, abs=1e-12)


def test_sampling_tables_are_fixed(small_tree):
    attributes = set(vars(small_tree))
    simulate_batch(small_tree, uniform_policy(small_tree.S, small_tree.A, small_tree.H), 10,
                   make_generator(0))
    simulate_episode(small_tree, lambda h, s, history: 0, seed=0)
    assert set(vars(small_tree)) == attributes
    cdf_mu, cdf_p = small_tree.cdf_tables
    assert cdf_mu[-1] == 1.0
    with pytest.raises(ValueError):
        cdf_p[0, 0, 0, 0] = 0.5


# ---------------------------------------------------------------------------
# simulation and likelihoods
# ---------------------------------------------------------------------------

def test_make_generator_streams():
    a = make_generator(7, 1, 2).random(5)
    b = make_generator(7, 1, 2).random(5)
    c = make_generator(7, 2, 1).random(5)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    with pytest.raises(ValueError):
        make_generator(-1)


def test_fixed_seed_replay(tree_pair):
    m = tree_pair[1].mdp

    def decide(stage, state, history):
        return 1 if stage >= 2 else 0

    first = simulate_episode(m, decide, seed=11)
    assert first == simulate_episode(m, decide, seed=11)
    assert len(first.states) == m.H


def test_simulate_episode_rejects_bad_action():
    m = make_s3_stationary(2, 3)
    with pytest.raises(ValueError):
        simulate_episode(m, lambda stage, state, history: 5, seed=0)


def test_good_state_frequency():
    m = make_s3_stationary(2, 2)
    batch = simulate_batch(m, uniform_policy(3, 2, 2), 10 ** 5, make_generator(3))
    freq = np.mean(batch.states[:, 1] == 1)
    assert abs(freq - 0.5) <= 3 * math.sqrt(0.25 / 10 ** 5)


def test_empirical_value_matches_evaluation(tree_pair):
    m = tree_pair[0].mdp
    pol = uniform_policy(m.S, m.A, m.H)
    batch = simulate_batch(m, pol, 20000, make_generator(5))
    stderr = batch.rewards.std(ddof=1) / math.sqrt(len(batch))
    assert abs(batch.rewards.mean() - evaluate_policy(m, pol).rho) <= 4 * stderr


def test_log_prob_of_sure_trajectory():
    m = _chain()
    traj = Trajectory(states=(0, 1, 1), actions=(0, 0, 0), reward=0.0)
    assert trajectory_log_prob(m, uniform_policy(2, 1, 3), traj) == 0.0


def test_log_prob_reference_s3():
    m = make_s3_stationary(2, 2)
    traj = Trajectory(states=(0, 1), actions=(1, 0), reward=1.0)
    assert trajectory_log_prob(m, uniform_policy(3, 2, 2), traj) == pytest.approx(math.log(0.25))


def test_log_prob_impossible_transition():
    m = make_s3_stationary(2, 3)
    traj = Trajectory(states=(0, 0, 0), actions=(0, 0, 0), reward=0.0)
    assert trajectory_log_prob(m, uniform_policy(3, 2, 3), traj) == -math.inf


def test_log_prob_length_mismatch():
    m = make_s3_stationary(2, 3)
    traj = Trajectory(states=(0, 1), actions=(0, 0), reward=0.0)
    with pytest.raises(ValueError):
        trajectory_log_prob(m, uniform_policy(3, 2, 3), traj)


def test_batch_and_episode_share_the_law():
    params = HardInstanceParams('s4-stage', A=2, H=5, Hbar=2, eps=0.2, arm=(3, 1))
    m = build_instance(params).mdp
    pol = uniform_policy(4, 2, 5)
    batch = simulate_batch(m, pol, 20000, make_generator(1))
    rng = make_generator(2)
    cdf = np.cumsum(pol.probs, axis=-1)

    def decide(stage, state, history):
        return int(np.searchsorted(cdf[stage - 1, state], rng.random(), side='right'))

    episodes = [simulate_episode(m, decide, rng=rng) for _ in range(4000)]
    good_batch = np.mean(batch.states[:, -1] == 3)
    good_single = np.mean([ep.states[-1] == 3 for ep in episodes])
    sigma = math.sqrt(0.25 / 20000 + 0.25 / 4000)
    assert abs(good_batch - good_single) <= 4 * sigma
