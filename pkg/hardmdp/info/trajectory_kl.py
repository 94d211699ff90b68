"""
KL divergence between the laws of the T-episode histories generated by one
algorithm on two MDPs that differ only through their kernels.

Three routes are provided: the decomposition into expected visit counts
times per-row KL (Markov policies), exhaustive enumeration of all histories
(small instances) and Monte Carlo over log-likelihood ratios (any algorithm).
The Monte Carlo estimate is unbiased for a fixed number of episodes; the
optional stopping argument extends it to stopping times with finite mean.
"""
import math
import itertools
from dataclasses import dataclass, field
from functools import partial
from typing import NamedTuple

import numpy as np

from .kl import kl_bernoulli, kl_categorical
from ..mdp import (MarkovAgent, episode_log_prob, make_generator, occupancy,
                   run_episodes)
from ..utils.math import mean_stderr
from ..utils.parallel import run_jobs
from .. import logger

MAX_TERMS = 10 ** 7


@dataclass(frozen=True)
class KlEntry:
    """
    One differing kernel row: stage h (1-based), state s, action a, the
    expected number of visits and the KL between the two rows.
    """
    h: int
    s: int
    a: int
    expected_count: float
    row_kl: float

    @property
    def absolutely_continuous(self):
        return math.isfinite(self.row_kl)

    @property
    def contribution(self):
        if self.expected_count == 0:
            return 0.0
        return self.expected_count * self.row_kl


@dataclass(frozen=True)
class KlBreakdown:
    """
    Decomposition total = sum of expected_count * row_kl over the entries.
    """
    total: float
    entries: list = field(default_factory=list)
    T: int = 1

    @property
    def flagged(self):
        """
        Entries violating absolute continuity.
        """
        return [e for e in self.entries if not e.absolutely_continuous]

    def to_dict(self):
        return {'total': self.total, 'T': self.T,
                'entries': [{'h': e.h, 's': e.s, 'a': e.a,
                             'expected_count': e.expected_count,
                             'row_kl': e.row_kl,
                             'absolutely_continuous': e.absolutely_continuous}
                            for e in self.entries]}


def _check_pair(m, m2):
    if not m.same_structure(m2):
        logger.error('The two MDPs must share S, A, H, mu and r.')
        raise ValueError


def trajectory_kl_exact(m, m2, pol, T):
    """
    KL between the T-episode history laws of a Markov policy on m and m2.

    Parameters
    ----------
    m, m2 : Mdp
        MDPs identical except for their kernels.
    pol : MarkovPolicy
        The policy played in every episode.
    T : int
        The number of episodes.

    Returns
    -------
    KlBreakdown : total = sum over differing rows of T d_m(h,s,a) KL(p, p2).
    """
    _check_pair(m, m2)
    if T < 0:
        logger.error(f'T must be nonnegative, got {T}.')
        raise ValueError

    occ = occupancy(m, pol)
    entries = []
    for h, s, a in m.kernel_diff(m2):
        row_kl = kl_categorical(m.p[h - 1, s, a], m2.p[h - 1, s, a])
        entries.append(KlEntry(h=h, s=s, a=a,
                               expected_count=float(T * occ.d[h - 1, s, a]),
                               row_kl=row_kl))

    total = float(sum(e.contribution for e in entries))
    for e in entries:
        if not e.absolutely_continuous:
            logger.warning(f'Row (h={e.h}, s={e.s}, a={e.a}) of the first MDP is not '
                           'absolutely continuous w.r.t. the second.')
    return KlBreakdown(total=total, entries=entries, T=T)


def enumeration_size(m, T):
    """
    Number of T-episode histories (S A)^((H-1) T) S^T.
    """
    return (m.S * m.A) ** ((m.H - 1) * T) * m.S ** T


def _check_enumerable(m, T):
    size = enumeration_size(m, T)
    if size > MAX_TERMS:
        logger.error(f'Instance too large to enumerate: {size} histories > {MAX_TERMS}.')
        raise ValueError


def enumerate_episodes(m, pol):
    """
    All single episodes s_1, a_1, ..., a_{H-1}, s_H of positive probability.

    Returns
    -------
    list of (states, actions, log_prob)
    """
    episodes = []

    def extend(states, actions, k):
        if k == m.H - 1:
            episodes.append((tuple(states), tuple(actions),
                             episode_log_prob(m, pol, states, actions)))
            return
        s = states[-1]
        for a in np.flatnonzero(pol.probs[k, s] > 0):
            for s_next in np.flatnonzero(m.p[k, s, a] > 0):
                extend(states + [int(s_next)], actions + [int(a)], k + 1)

    for s in np.flatnonzero(m.mu > 0):
        extend([int(s)], [], 0)
    return episodes


def trajectory_kl_brute_force(m, m2, pol, T):
    """
    KL between the T-episode history laws by summing P log(P / P2) over every
    history of positive probability.

    Parameters
    ----------
    m, m2 : Mdp
    pol : MarkovPolicy
    T : int

    Returns
    -------
    float : +inf when some history has positive probability under m only.
    """
    _check_pair(m, m2)
    _check_enumerable(m, T)

    episodes = [(logp, episode_log_prob(m2, pol, states, actions))
                for states, actions, logp in enumerate_episodes(m, pol)]
    terms = []
    for history in itertools.product(episodes, repeat=T):
        logp = sum(e[0] for e in history)
        logp2 = sum(e[1] for e in history)
        if logp2 == -math.inf:
            return math.inf
        terms.append(math.exp(logp) * (logp - logp2))
    return math.fsum(terms)


class VisitFraction:
    """
    History functional N / T, the fraction of episodes in (s, a) at stage h.
    """

    def __init__(self, site):
        self.site = site

    def __call__(self, history):
        h, s, a = self.site
        visits = sum(1 for states, actions in history
                     if states[h - 1] == s and actions[h - 1] == a)
        return visits / len(history)


class MajorityVisit(VisitFraction):
    """
    History functional 1{N / T > 1/2}: the empirical visit distribution puts
    more than half its mass on the site.
    """

    def __call__(self, history):
        return float(super().__call__(history) > 0.5)


class ContractionCheck(NamedTuple):
    kl_of_means: float
    traj_kl: float
    holds: bool


def _expectation(m, pol, T, functional):
    episodes = enumerate_episodes(m, pol)
    terms = []
    for history in itertools.product(episodes, repeat=T):
        value = functional([(states, actions) for states, actions, _ in history])
        if not 0.0 <= value <= 1.0:
            logger.error(f'The functional must take values in [0, 1], got {value}.')
            raise ValueError
        terms.append(math.exp(sum(e[2] for e in history)) * value)
    return min(max(math.fsum(terms), 0.0), 1.0)


def kl_contraction_check(m, m2, pol, T, functional):
    """
    Check kl(E_1[Z], E_2[Z]) <= KL(P_1, P_2) for a [0, 1]-valued functional Z
    of the T-episode history.

    Parameters
    ----------
    m, m2 : Mdp
    pol : MarkovPolicy
    T : int
    functional : callable
        Z(history) where history is a list of T (states, actions) pairs
        (actions of stages 1..H-1).

    Returns
    -------
    ContractionCheck
    """
    _check_pair(m, m2)
    _check_enumerable(m, T)
    mean_1 = _expectation(m, pol, T, functional)
    mean_2 = _expectation(m2, pol, T, functional)
    kl_of_means = kl_bernoulli(mean_1, mean_2)
    traj_kl = trajectory_kl_exact(m, m2, pol, T).total
    logger.debug(f'E1[Z]={mean_1}, E2[Z]={mean_2}, kl={kl_of_means}, KL={traj_kl}')
    return ContractionCheck(kl_of_means, traj_kl, bool(kl_of_means <= traj_kl + 1e-12))


def markov_agent_factory(pol):
    """
    Agent factory (rng -> agent) playing a fixed Markov policy.
    """
    return partial(MarkovAgent, pol)


def _log_likelihood_ratio(m, m2, make_agent, T, seed, rep):
    agent = make_agent(make_generator(seed, rep, 1))
    trajectories = run_episodes(m, agent, T, make_generator(seed, rep, 0))
    total = 0.0
    for traj in trajectories:
        for k in range(m.H - 1):
            s, a, s_next = traj.states[k], traj.actions[k], traj.states[k + 1]
            p1, p2 = m.p[k, s, a, s_next], m2.p[k, s, a, s_next]
            if p1 == p2:
                continue
            if p2 == 0:
                logger.error(f'Zero kernel entry p2(h={k + 1}, s={s}, a={a}, next={s_next}) '
                             'met on a visited row.')
                raise RuntimeError
            total += math.log(p1) - math.log(p2)
    return total


def trajectory_kl_monte_carlo(m, m2, make_agent, T, n_reps, seed, n_jobs=1):
    """
    Monte Carlo estimate of the history KL for any algorithm.

    Parameters
    ----------
    m, m2 : Mdp
        MDPs identical except for their kernels.
    make_agent : callable
        rng -> Agent, called once per replication (must be picklable when
        n_jobs > 1).
    T : int
        Episodes per replication.
    n_reps : int
        Number of independent replications.
    seed : int
        Base seed; replication r uses the substreams (r, 0) for the
        environment and (r, 1) for the agent.
    n_jobs : int | None
        Number of workers.

    Returns
    -------
    float : Mean of the per-replication log-likelihood ratio sums.
    float : Its standard error.
    """
    _check_pair(m, m2)
    if n_reps < 1:
        logger.error(f'At least one replication is needed, got {n_reps}.')
        raise ValueError
    values = run_jobs(_log_likelihood_ratio,
                      [(m, m2, make_agent, T, seed, rep) for rep in range(n_reps)],
                      n_jobs=n_jobs)
    return mean_stderr(values)
