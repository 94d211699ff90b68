"""
Reference learners confronted with the hard classes.

Every learner is an Agent (begin_episode / act / observe). Non-adaptive ones
also return their Markov policy so that the harness can simulate them in
vectorized batches.
"""
from dataclasses import dataclass, asdict

import numpy as np

from ..instances import arm_policy
from ..mdp import Agent, MarkovAgent, greedy_actions, occupancy, simulate_batch, \
    uniform_policy
from .. import logger

LEARNER_KINDS = ('uniform', 'fixed-arm', 'optimistic-q', 'bpi-uniform')

# episodes after which bpi-uniform gives up
BPI_CAP = 10 ** 6


@dataclass(frozen=True)
class LearnerSpec:
    """
    Learner selection.

    Attributes
    ----------
    kind : str
        uniform | fixed-arm | optimistic-q | bpi-uniform.
    bonus : float
        Bonus scale b of optimistic-q; the bonus is b H / sqrt(n).
    arm : int
        Index into the class arm rows played by fixed-arm.
    cap : int
        Episode cap of bpi-uniform.
    """
    kind: str = 'uniform'
    bonus: float = 1.0
    arm: int = 0
    cap: int = BPI_CAP

    def __post_init__(self):
        if self.kind not in LEARNER_KINDS:
            logger.error(f"Unknown learner '{self.kind}'. Supported: {', '.join(LEARNER_KINDS)}.")
            raise ValueError
        if self.bonus <= 0 or self.cap <= 0 or self.arm < 0:
            logger.error(f'Learner hyperparameters must be positive, got {self}.')
            raise ValueError

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, data):
        if isinstance(data, str):
            return cls(kind=data)
        unknown = set(data) - {'kind', 'bonus', 'arm', 'cap'}
        if unknown:
            logger.error(f'Unknown learner fields {sorted(unknown)}.')
            raise ValueError
        return cls(**data)


def builtin_learners():
    """
    Catalog of the learners with their default hyperparameters.

    Returns
    -------
    dict : kind -> {'description', 'defaults'}.
    """
    return {
        'uniform': {'description': 'uniformly random action at every step',
                    'defaults': {}},
        'fixed-arm': {'description': 'deterministic policy to one arm row, every episode',
                      'defaults': {'arm': 0}},
        'optimistic-q': {'description': 'greedy on clipped optimistic Q, bonus b H / sqrt(n)',
                         'defaults': {'bonus': 1.0}},
        'bpi-uniform': {'description': 'round-robin over the arm policies, stops on '
                                       'separated confidence intervals',
                        'defaults': {'cap': BPI_CAP}},
    }


class UniformLearner(MarkovAgent):
    """
    Plays a uniformly random action whatever the history.
    """

    def __init__(self, S, A, H, rng):
        super().__init__(uniform_policy(S, A, H), rng)


class FixedArmLearner(MarkovAgent):
    """
    Plays the deterministic policy visiting one arm row in every episode.
    """

    def __init__(self, instance, arm, rng):
        if not 0 <= arm < len(instance.arm_sites):
            logger.error(f'Arm index {arm} out of range [0, {len(instance.arm_sites)}).')
            raise ValueError
        super().__init__(arm_policy(instance, instance.arm_sites[arm]), rng)


class OptimisticQLearner(Agent):
    """
    Tabular optimistic planning on the empirical kernel.

    The rewards are known; the kernel is estimated from counts. Before every
    episode the learner plans on Q_k = r_k + P_k V_{k+1} + b H / sqrt(n_k),
    clipped at the H - k reward still collectable, with Q = H - k on unvisited
    rows, and plays greedily (ties to the lowest action).

    Parameters
    ----------
    r : array, shape (H, S, A)
        The known reward table.
    bonus : float
        The bonus scale b.
    """

    def __init__(self, r, bonus=1.0):
        self.r = np.asarray(r, dtype=float)
        self.H, self.S, self.A = self.r.shape
        self.bonus = bonus
        self.counts = np.zeros((self.H - 1, self.S, self.A, self.S))
        self.table = None

    def plan(self):
        H = self.H
        table = np.zeros((H, self.S), dtype=int)
        V_next = np.zeros(self.S)
        for k in range(H - 1, -1, -1):
            remaining = H - k
            Q = self.r[k].copy()
            if k < H - 1:
                n = self.counts[k].sum(axis=-1)
                visited = n > 0
                P_hat = np.divide(self.counts[k], n[..., None], out=np.zeros_like(self.counts[k]),
                                  where=n[..., None] > 0)
                bonus = np.zeros_like(n)
                bonus[visited] = self.bonus * H / np.sqrt(n[visited])
                Q += P_hat @ V_next + bonus
                Q[~visited] = remaining
            Q = np.minimum(Q, remaining)
            table[k] = greedy_actions(Q)
            V_next = Q.max(axis=-1)
        return table

    def begin_episode(self):
        self.table = self.plan()

    def act(self, stage, state, history):
        return int(self.table[stage - 1, state])

    def observe(self, trajectory):
        states, actions = trajectory.states, trajectory.actions
        for k in range(self.H - 1):
            self.counts[k, states[k], actions[k], states[k + 1]] += 1


class BpiUniformLearner:
    """
    Best-policy identification by uniform sampling of the arm rows.

    Rounds play the deterministic policy of every class arm once. An episode
    is a success when it ends in the good state, a Bernoulli draw with mean
    1/2 plus the arm's boost. After n rounds every arm has an anytime
    Hoeffding interval of half-width sqrt(log(4 K n^2 / delta) / (2 n)).
    Sampling stops when the lower bound of the empirical best exceeds the
    upper bound of the runner-up minus tol / 2, tol = eps / value_stages;
    the recommendation is the policy of the empirical best (lowest index on
    ties).

    Parameters
    ----------
    instance : HardInstance
        Any member of the class; gives the arm rows and their policies.
    delta : float
        Confidence.
    eps : float
        Accuracy in value.
    cap : int
        Episode cap; a capped run recommends the current empirical best.
    """
    first_chunk = 64
    max_chunk = 8192

    def __init__(self, instance, delta, eps, cap=BPI_CAP):
        if not 0.0 < delta < 1.0 or eps <= 0:
            logger.error(f'bpi-uniform needs delta in (0, 1) and eps > 0, got {delta}, {eps}.')
            raise ValueError
        self.sites = instance.arm_sites
        self.policies = [arm_policy(instance, site) for site in self.sites]
        self.good_state = instance.good_state
        self.delta = delta
        self.tol = eps / instance.value_stages
        self.cap = int(cap)

    @property
    def K(self):
        return len(self.sites)

    def width(self, n):
        n = np.asarray(n, dtype=float)
        return np.sqrt(np.log(4.0 * self.K * n ** 2 / self.delta) / (2.0 * n))

    def _first_stop(self, successes, n0):
        """
        First round of a chunk at which the stopping rule fires, or None.

        successes : array, shape (rounds, K), cumulative success counts.
        """
        n = n0 + np.arange(1, successes.shape[0] + 1)
        means = successes / n[:, None]
        if self.K == 1:
            return 0
        top2 = -np.sort(-means, axis=1)[:, :2]
        w = self.width(n)
        stop = top2[:, 0] - w > top2[:, 1] + w - self.tol / 2.0
        hits = np.flatnonzero(stop)
        return int(hits[0]) if hits.size else None

    def run(self, m, rng):
        """
        Sample until the stopping rule fires or the cap is reached.

        Parameters
        ----------
        m : Mdp
            The MDP sampled from.
        rng : numpy.random.Generator

        Returns
        -------
        int : The stopping time tau in episodes.
        bool : True if the cap was reached.
        int : Index of the recommended arm.
        MarkovPolicy : The recommended deterministic policy.
        """
        max_rounds = max(1, self.cap // self.K)
        totals = np.zeros(self.K)
        n_done = 0
        chunk = self.first_chunk
        stop_round = None
        while n_done < max_rounds:
            rounds = min(chunk, max_rounds - n_done)
            wins = np.empty((rounds, self.K))
            for j, pol in enumerate(self.policies):
                batch = simulate_batch(m, pol, rounds, rng)
                wins[:, j] = batch.states[:, -1] == self.good_state
            cumulative = totals + np.cumsum(wins, axis=0)
            hit = self._first_stop(cumulative, n_done)
            if hit is not None:
                stop_round = n_done + hit + 1
                totals = cumulative[hit]
                break
            totals = cumulative[-1]
            n_done += rounds
            chunk = min(2 * chunk, self.max_chunk)

        capped = stop_round is None
        if capped:
            stop_round = n_done
            logger.warning(f'bpi-uniform reached the cap of {self.cap} episodes.')
        best = int(np.argmax(totals))
        return stop_round * self.K, capped, best, self.policies[best]


def good_arm_count(instance, m, pol):
    """
    Number of arm rows the policy visits with probability above 1/2.
    """
    d = occupancy(m, pol).d
    return int(sum(d[site.stage - 1, site.state, site.action] > 0.5
                   for site in instance.arm_sites))


def make_learner(spec, instance, rng):
    """
    Build a regret learner for one instance.

    Parameters
    ----------
    spec : LearnerSpec | dict | str
    instance : HardInstance
    rng : numpy.random.Generator
        The learner's own stream.

    Returns
    -------
    Agent
    """
    if not isinstance(spec, LearnerSpec):
        spec = LearnerSpec.from_dict(spec)
    m = instance.mdp
    if spec.kind == 'uniform':
        return UniformLearner(m.S, m.A, m.H, rng)
    if spec.kind == 'fixed-arm':
        return FixedArmLearner(instance, spec.arm, rng)
    if spec.kind == 'optimistic-q':
        return OptimisticQLearner(m.r, spec.bonus)
    logger.error('bpi-uniform is a best-policy-identification learner; use run_bpi_sweep.')
    raise ValueError
