"""
Seeded sampling of episodes and exact trajectory log-likelihoods.

Every random draw comes from a numpy Generator over the counter-based Philox
bit generator. make_generator() derives independent substreams from a base
seed and an integer key such as (instance, replication).
"""
from dataclasses import dataclass

import numpy as np

from .mdp import normalized_cdf
from .. import logger


def make_generator(seed, *key):
    """
    Independent random stream for a base seed and a substream key.

    Parameters
    ----------
    seed : int
        The base seed, nonnegative.
    *key : int
        The substream coordinates, e.g. instance index then replication.

    Returns
    -------
    numpy.random.Generator
    """
    if isinstance(seed, np.random.Generator):
        return seed
    if seed is None or int(seed) < 0:
        logger.error(f'A nonnegative integer seed is required, got {seed}.')
        raise ValueError
    seq = np.random.SeedSequence(entropy=int(seed),
                                 spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(seq))


def inverse_cdf(cdf, u):
    """
    Vectorized inverse-CDF draw. Zero-probability outcomes are never drawn.

    Parameters
    ----------
    cdf : array, shape (..., K)
        Normalized cumulative sums whose last entry is exactly 1.
    u : array, shape (...)
        Uniform draws in [0, 1).

    Returns
    -------
    array of int, shape (...)
    """
    return np.sum(np.asarray(u)[..., None] >= cdf, axis=-1)


@dataclass(frozen=True)
class Trajectory:
    """
    One episode: states s_1..s_H, actions a_1..a_H (the stage-H action is
    recorded as well) and the accumulated reward.
    """
    states: tuple
    actions: tuple
    reward: float


@dataclass(frozen=True)
class EpisodeBatch:
    """
    Many episodes sampled under one Markov policy. states and actions have
    shape (n, H), rewards shape (n,).
    """
    states: np.ndarray
    actions: np.ndarray
    rewards: np.ndarray

    def __len__(self):
        return self.states.shape[0]


def simulate_episode(m, decide, seed=None, rng=None):
    """
    Sample one episode, the actions being chosen by a callback.

    Parameters
    ----------
    m : Mdp
        A valid MDP.
    decide : callable
        decide(stage, state, history) -> action, where stage is 1-based and
        history is the list of (state, action) pairs of the earlier stages of
        this episode.
    seed : int | None
        Base seed, used when rng is not given.
    rng : numpy.random.Generator | None
        The random stream to draw from.

    Returns
    -------
    Trajectory
    """
    if rng is None:
        rng = make_generator(seed)
    cdf_mu, cdf_p = m.cdf_tables

    state = int(np.searchsorted(cdf_mu, rng.random(), side='right'))
    states, actions, history = [], [], []
    reward = 0.0
    for k in range(m.H):
        action = decide(k + 1, state, history)
        if not isinstance(action, (int, np.integer)) or not 0 <= action < m.A:
            logger.error(f'Callback returned action {action!r} at stage {k + 1}, '
                         f'expected an integer in [0, {m.A}).')
            raise ValueError
        action = int(action)
        states.append(state)
        actions.append(action)
        history.append((state, action))
        reward += float(m.r[k, state, action])
        if k < m.H - 1:
            state = int(np.searchsorted(cdf_p[k, state, action], rng.random(),
                                        side='right'))

    return Trajectory(states=tuple(states), actions=tuple(actions), reward=reward)


def simulate_batch(m, pol, n_episodes, rng):
    """
    Sample n_episodes independent episodes under a Markov policy.

    Parameters
    ----------
    m : Mdp
        A valid MDP.
    pol : MarkovPolicy
        The policy, with matching dimensions.
    n_episodes : int
        The number of episodes.
    rng : numpy.random.Generator
        The random stream.

    Returns
    -------
    EpisodeBatch
    """
    pol.check_matches(m)
    cdf_mu, cdf_p = m.cdf_tables
    cdf_pi = normalized_cdf(pol.probs)

    n = int(n_episodes)
    states = np.zeros((n, m.H), dtype=int)
    actions = np.zeros((n, m.H), dtype=int)
    rewards = np.zeros(n)

    s = inverse_cdf(cdf_mu, rng.random(n))
    for k in range(m.H):
        a = inverse_cdf(cdf_pi[k, s], rng.random(n))
        states[:, k] = s
        actions[:, k] = a
        rewards += m.r[k, s, a]
        if k < m.H - 1:
            s = inverse_cdf(cdf_p[k, s, a], rng.random(n))

    return EpisodeBatch(states=states, actions=actions, rewards=rewards)


def trajectory_log_prob(m, pol, traj):
    """
    Log-probability of a trajectory under an MDP and a Markov policy:
    log mu(s_1) + sum_{h<H} [log pi(a_h|s_h,h) + log p_h(s_{h+1}|s_h,a_h)].

    The stage-H action has no successor and does not enter the product.

    Parameters
    ----------
    m : Mdp
    pol : MarkovPolicy
    traj : Trajectory

    Returns
    -------
    float : -inf for an impossible trajectory.
    """
    pol.check_matches(m)
    if len(traj.states) != m.H or len(traj.actions) < m.H - 1:
        logger.error(f'Trajectory length {len(traj.states)} does not match H={m.H}.')
        raise ValueError
    return episode_log_prob(m, pol, traj.states, traj.actions)


def episode_log_prob(m, pol, states, actions):
    """
    Log-probability of s_1, a_1, ..., a_{H-1}, s_H without dimension checks.
    Used by the enumerations.
    """
    factors = [m.mu[states[0]]]
    for k in range(m.H - 1):
        s, a, s_next = states[k], actions[k], states[k + 1]
        factors.append(pol.probs[k, s, a])
        factors.append(m.p[k, s, a, s_next])

    with np.errstate(divide='ignore'):
        return float(np.sum(np.log(factors)))
