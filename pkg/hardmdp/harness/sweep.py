"""
Regret sweeps over a hard class.

Every (instance, replication) cell lets a fresh learner play T episodes.
The number N of episodes through the instance's boosted row gives the
regret exactly through T g eps (1 - N / T); the reward-based regret
T rho* - sum of rewards is computed alongside as a cross-check.
"""
import math
from dataclasses import dataclass, field

import numpy as np

from .learners import LearnerSpec, make_learner
from ..bounds import optimal_epsilon, regret_bound, regret_identity
from ..info import kl_bernoulli
from ..instances import ClassSpec, build_instance, enumerate_class
from ..mdp import make_generator, optimal_values, run_episodes, simulate_batch
from ..utils.math import joint_sigma, mean_stderr
from ..utils.parallel import run_jobs
from ..utils.timer import Timer
from .. import logger

REGRET_FAMILIES = ('tree', 'tree-stationary', 's3-stationary', 's4-stage')

REGRET_THEOREM = {'tree': 'regret-tree', 'tree-stationary': 'regret-stationary',
                  's3-stationary': 'regret-s3', 's4-stage': 'regret-s4'}

REGRET_CSV_COLUMNS = ['instance', 'arm', 'seed', 'N', 'arm_visits_total', 'reward',
                      'identity_regret', 'reward_regret']

# identity and reward regrets must agree within this many joint sigmas
AGREEMENT_SIGMAS = 4.0


def arm_label(arm):
    return '' if arm is None else ':'.join(str(x) for x in arm)


def _episode_arrays(m, agent, T, rng):
    pol = agent.markov_policy()
    if pol is not None:
        batch = simulate_batch(m, pol, T, rng)
        return batch.states, batch.actions, batch.rewards
    trajectories = run_episodes(m, agent, T, rng)
    states = np.array([traj.states for traj in trajectories], dtype=int)
    actions = np.array([traj.actions for traj in trajectories], dtype=int)
    rewards = np.array([traj.reward for traj in trajectories])
    return states, actions, rewards


def arm_histogram(instance, states, actions):
    """
    Visits of every arm row of the class over a set of episodes.

    Also checks that each episode meets the arm states exactly once inside
    the arm window.

    Returns
    -------
    array of int, shape (K,)
    """
    first, last = instance.window
    window_states = states[:, first - 1:last]
    hits = np.isin(window_states, instance.arm_states).sum(axis=1)
    if np.any(hits != 1):
        bad = int(np.flatnonzero(hits != 1)[0])
        logger.error(f'Episode {bad} meets the arm states {int(hits[bad])} times '
                     f'in the window {instance.window}.')
        raise RuntimeError
    return np.array([np.count_nonzero((states[:, s.stage - 1] == s.state)
                                      & (actions[:, s.stage - 1] == s.action))
                     for s in instance.arm_sites], dtype=int)


def _regret_cell(learner, params, index, rep, T, seed):
    instance = build_instance(params)
    m = instance.mdp
    agent = make_learner(learner, instance, make_generator(seed, index, rep, 1))
    states, actions, rewards = _episode_arrays(m, agent, T, make_generator(seed, index, rep, 0))

    histogram = arm_histogram(instance, states, actions)
    rho_star = optimal_values(m)[0].rho
    reward = float(np.sum(rewards))
    if instance.site is None:
        count, identity = None, 0.0
    else:
        count = int(histogram[instance.site_index(instance.site)])
        identity = regret_identity(instance.family, m.H, params.Hbar, instance.depth,
                                   params.eps, T, count)
    return {'instance': index, 'arm': arm_label(params.arm), 'seed': rep, 'N': count,
            'arm_visits_total': int(histogram.sum()), 'reward': reward,
            'identity_regret': identity, 'reward_regret': T * rho_star - reward,
            'histogram': histogram}


@dataclass
class SweepRecord:
    """
    Aggregate of one instance over the replications.
    """
    index: int
    params: object
    mean_N: float
    identity_regret: float
    identity_stderr: float
    reward_regret: float
    reward_stderr: float
    n_seeds: int

    @property
    def sigma(self):
        return joint_sigma(self.identity_stderr, self.reward_stderr)

    @property
    def agree(self):
        """
        Identity and reward regrets agree within AGREEMENT_SIGMAS joint sigmas.
        """
        gap = abs(self.identity_regret - self.reward_regret)
        return bool(gap <= AGREEMENT_SIGMAS * self.sigma + 1e-9)

    def to_dict(self):
        return {'instance': self.index, 'arm': arm_label(self.params.arm),
                'mean_N': self.mean_N, 'identity_regret': self.identity_regret,
                'identity_stderr': self.identity_stderr,
                'reward_regret': self.reward_regret, 'reward_stderr': self.reward_stderr,
                'agree': self.agree, 'n_seeds': self.n_seeds}


@dataclass
class SweepResult:
    """
    Outcome of a regret sweep.

    Attributes
    ----------
    records : list of SweepRecord
        One per class member, in enumeration order.
    rows : list of dict
        One per (instance, replication) cell, in grid order.
    worst : SweepRecord
        Largest identity regret, first in enumeration order on ties.
    bound : BoundReport
        The class's minimax bound at the same (H, S, A, T).
    """
    learner: LearnerSpec
    class_spec: ClassSpec
    T: int
    n_seeds: int
    seed: int
    records: list
    rows: list = field(repr=False)
    worst: SweepRecord = None
    bound: object = None

    @property
    def worst_regret(self):
        return self.worst.identity_regret

    @property
    def mean_regret(self):
        return float(np.mean([rec.identity_regret for rec in self.records]))

    @property
    def ratio(self):
        if self.bound is None or self.bound.value == 0:
            return float('nan')
        return self.worst_regret / self.bound.value

    def histograms(self, index):
        """
        Arm-visit histograms of the replications of one instance, shape (n_seeds, K).
        """
        return np.array([row['histogram'] for row in self.rows if row['instance'] == index])

    def csv_rows(self):
        return [[row[col] for col in REGRET_CSV_COLUMNS] for row in self.rows]

    def to_dict(self):
        return {'learner': self.learner.to_dict(), 'class': self.class_spec.to_dict(),
                'T': self.T, 'n_seeds': self.n_seeds, 'seed': self.seed,
                'records': [rec.to_dict() for rec in self.records],
                'worst_instance': self.worst.params.to_dict(),
                'worst_regret': self.worst_regret, 'mean_regret': self.mean_regret,
                'bound': None if self.bound is None else self.bound.to_dict(),
                'ratio': self.ratio}


def _check_sweep(class_spec, T, n_seeds):
    if not isinstance(class_spec, ClassSpec):
        class_spec = ClassSpec.from_dict(class_spec)
    if class_spec.family not in REGRET_FAMILIES:
        logger.error(f"Regret sweeps need one of {', '.join(REGRET_FAMILIES)}, "
                     f"got '{class_spec.family}'.")
        raise ValueError
    if T < 1 or n_seeds < 1:
        logger.error(f'Need T >= 1 and at least one replication, got T={T}, n_seeds={n_seeds}.')
        raise ValueError
    return class_spec


def optimal_class_eps(class_spec, T):
    """
    Gap maximizing the class regret bound at budget T.
    """
    if not isinstance(class_spec, ClassSpec):
        class_spec = ClassSpec.from_dict(class_spec)
    reference = build_instance(class_spec.reference_params())
    L = reference.shape.L if reference.shape is not None else 1
    return optimal_epsilon(class_spec.family, class_spec.H, class_spec.Hbar, L,
                           class_spec.A, T)


def run_regret_sweep(learner, class_spec, T, n_seeds, seed=0, n_jobs=1):
    """
    Let a learner play T episodes on every member of a class.

    Parameters
    ----------
    learner : LearnerSpec | dict | str
    class_spec : ClassSpec | dict
    T : int
        Episodes per cell.
    n_seeds : int
        Replications per instance.
    seed : int
        Base seed. Cell (i, r) draws the environment from substream (i, r, 0)
        and the learner from (i, r, 1), so results do not depend on n_jobs.
    n_jobs : int | None
        Number of workers.

    Returns
    -------
    SweepResult
    """
    if not isinstance(learner, LearnerSpec):
        learner = LearnerSpec.from_dict(learner)
    class_spec = _check_sweep(class_spec, T, n_seeds)
    members = enumerate_class(class_spec)

    jobs = [(learner, params, i, rep, T, seed)
            for i, params in enumerate(members) for rep in range(n_seeds)]
    logger.info(f'Regret sweep: {learner.kind} on {len(members)} {class_spec.family} '
                f'instances x {n_seeds} seeds, T={T}')
    with Timer() as timer:
        rows = run_jobs(_regret_cell, jobs, n_jobs=n_jobs)
    logger.info(f'{len(rows)} cells done in {timer.elapsed:.1f} s')

    records = []
    for i, params in enumerate(members):
        cells = rows[i * n_seeds:(i + 1) * n_seeds]
        counts = [c['N'] for c in cells if c['N'] is not None]
        identity, identity_se = mean_stderr([c['identity_regret'] for c in cells])
        reward, reward_se = mean_stderr([c['reward_regret'] for c in cells])
        records.append(SweepRecord(index=i, params=params,
                                   mean_N=float(np.mean(counts)) if counts else float('nan'),
                                   identity_regret=identity, identity_stderr=identity_se,
                                   reward_regret=reward, reward_stderr=reward_se,
                                   n_seeds=n_seeds))
        if not records[-1].agree:
            logger.warning(f'Instance {i}: identity regret {identity} and reward regret '
                           f'{reward} differ by more than {AGREEMENT_SIGMAS} sigma.')

    regrets = [rec.identity_regret for rec in records]
    worst = records[int(np.argmax(regrets))]
    S = class_spec.S if class_spec.S is not None else members[0].S
    bound = regret_bound(REGRET_THEOREM[class_spec.family], class_spec.H, S, class_spec.A, T)
    return SweepResult(learner=learner, class_spec=class_spec, T=T, n_seeds=n_seeds,
                       seed=seed, records=records, rows=rows, worst=worst, bound=bound)


def adversarial_instance(learner, class_spec, T, n_seeds, seed=0, n_jobs=1):
    """
    Class member on which the learner's regret is largest.

    Returns
    -------
    HardInstanceParams : The worst instance (first in enumeration order on ties).
    float : Its identity regret.
    """
    result = run_regret_sweep(learner, class_spec, T, n_seeds, seed, n_jobs)
    return result.worst.params, result.worst_regret


@dataclass
class AveragingReport:
    """
    Empirical check of the averaging argument.

    Attributes
    ----------
    counts_sum_to_T : bool
        Every episode of every cell visited exactly one arm row.
    lhs, lhs_stderr : float
        (1/T) sum over arms of the mean N of the arm's own instance.
    rhs : float
        1 + sqrt(2) eps sqrt(K T).
    arms : list of dict
        Per arm: E_arm[N]/T, E_0[N]/T, the history KL E_0[N] kl(1/2, 1/2 + eps)
        and the Pinsker bound E_0[N]/T + sqrt(KL / 2).
    """
    K: int
    T: int
    eps: float
    counts_sum_to_T: bool
    lhs: float
    lhs_stderr: float
    rhs: float
    arms: list

    @property
    def holds(self):
        return bool(self.counts_sum_to_T and self.lhs <= self.rhs + 3.0 * self.lhs_stderr)

    @property
    def pinsker_holds(self):
        return all(arm['holds'] for arm in self.arms)

    def to_dict(self):
        return {'K': self.K, 'T': self.T, 'eps': self.eps,
                'counts_sum_to_T': self.counts_sum_to_T, 'lhs': self.lhs,
                'lhs_stderr': self.lhs_stderr, 'rhs': self.rhs, 'holds': self.holds,
                'pinsker_holds': self.pinsker_holds, 'arms': self.arms}


def averaging_inequality_check(learner, class_spec, T, n_seeds, seed=0, n_jobs=1):
    """
    Check that the arm counts of every run sum to T, and that
    (1/T) sum_arm E_arm[N_arm] <= 1 + sqrt(2) eps sqrt(K T) within three
    standard errors.

    The reference runs give E_0[N_arm], from which each arm's Pinsker step
    E_arm[N]/T <= E_0[N]/T + sqrt(E_0[N] kl(1/2, 1/2 + eps) / 2) is checked
    as a diagnostic.

    Returns
    -------
    AveragingReport
    """
    result = run_regret_sweep(learner, class_spec, T, n_seeds, seed, n_jobs)
    eps = result.class_spec.eps
    reference = result.records[0]
    K = len(result.records) - 1

    counts_ok = all(row['arm_visits_total'] == T for row in result.rows)
    reference_counts = result.histograms(reference.index).mean(axis=0)
    kl_step = kl_bernoulli(0.5, 0.5 + eps)

    arms, se = [], []
    for rec in result.records[1:]:
        instance = build_instance(rec.params)
        j = instance.site_index(instance.site)
        _, count_se = mean_stderr([row['N'] for row in result.rows
                                   if row['instance'] == rec.index])
        se.append(count_se)
        e0 = float(reference_counts[j])
        kl = e0 * kl_step
        pinsker = e0 / T + math.sqrt(kl / 2.0)
        arms.append({'arm': arm_label(rec.params.arm), 'mean_N_arm': rec.mean_N / T,
                     'mean_N_reference': e0 / T, 'kl': kl, 'pinsker_bound': pinsker,
                     'holds': bool(rec.mean_N / T <= pinsker + 3.0 * count_se / T + 1e-12)})

    lhs = sum(rec.mean_N for rec in result.records[1:]) / T
    report = AveragingReport(K=K, T=T, eps=eps, counts_sum_to_T=counts_ok, lhs=lhs,
                             lhs_stderr=joint_sigma(*se) / T,
                             rhs=1.0 + math.sqrt(2.0) * eps * math.sqrt(K * T), arms=arms)
    logger.info(f'Averaging check: {lhs:.4f} <= {report.rhs:.4f} -> {report.holds}')
    return report
