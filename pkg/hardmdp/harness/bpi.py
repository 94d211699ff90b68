"""
Best-policy-identification sweeps: stopping times, exact values of the
recommended policies and the PAC failure rate on every class member.
"""
from dataclasses import dataclass, field

import numpy as np

from .learners import BpiUniformLearner, LearnerSpec, good_arm_count
from .sweep import arm_label
from ..bounds import bpi_bound
from ..instances import ClassSpec, bpi_class_gap, build_instance, enumerate_class
from ..mdp import evaluate_policy, make_generator, optimal_values
from ..utils.math import binomial_sigma, mean_stderr
from ..utils.parallel import run_jobs
from ..utils.timer import Timer
from .. import logger

BPI_FAMILIES = ('s4-bpi', 'tree')

BPI_THEOREM = {'s4-bpi': 'bpi-s4', 'tree': 'bpi-tree'}

BPI_CSV_COLUMNS = ['instance', 'arm', 'seed', 'tau', 'capped', 'rho_hat', 'rho_star',
                   'pac_success', 'good_arms']

# values closer than this count as equal when checking eps-optimality
VALUE_TOL = 1e-9


def _bpi_cell(learner, params, index, rep, eps, delta, seed):
    instance = build_instance(params)
    m = instance.mdp
    agent = BpiUniformLearner(instance, delta, eps, cap=learner.cap)
    tau, capped, _, pol = agent.run(m, make_generator(seed, index, rep, 0))
    rho_hat = evaluate_policy(m, pol).rho
    rho_star = optimal_values(m)[0].rho
    return {'instance': index, 'arm': arm_label(params.arm), 'seed': rep, 'tau': tau,
            'capped': capped, 'rho_hat': rho_hat, 'rho_star': rho_star,
            'pac_success': bool(rho_hat > rho_star - eps + VALUE_TOL),
            'good_arms': good_arm_count(instance, m, pol)}


@dataclass
class BpiRecord:
    """
    Aggregate of one instance over the replications. Capped runs are left
    out of the mean stopping time.
    """
    index: int
    params: object
    mean_tau: float
    tau_stderr: float
    n_capped: int
    failure_rate: float
    failure_sigma: float
    max_good_arms: int
    n_seeds: int

    def failure_ok(self, delta):
        return bool(self.failure_rate <= delta + 3.0 * self.failure_sigma)

    def to_dict(self):
        return {'instance': self.index, 'arm': arm_label(self.params.arm),
                'mean_tau': self.mean_tau, 'tau_stderr': self.tau_stderr,
                'n_capped': self.n_capped, 'failure_rate': self.failure_rate,
                'failure_sigma': self.failure_sigma, 'max_good_arms': self.max_good_arms,
                'n_seeds': self.n_seeds}


@dataclass
class BpiRunResult:
    """
    Outcome of a BPI sweep.

    Attributes
    ----------
    class_gap : float
        Kernel gap of the class built for accuracy eps.
    records : list of BpiRecord
        One per class member, the reference first.
    rows : list of dict
        One per (instance, replication) cell.
    bound : BoundReport
        bpi-s4 or bpi-tree at (H, S, A, eps, delta).
    """
    learner: LearnerSpec
    class_spec: ClassSpec
    eps: float
    delta: float
    class_gap: float
    n_seeds: int
    seed: int
    records: list
    rows: list = field(repr=False)
    bound: object = None

    @property
    def reference_tau(self):
        return self.records[0].mean_tau

    @property
    def failure_ok(self):
        return all(rec.failure_ok(self.delta) for rec in self.records)

    @property
    def bound_ok(self):
        return bool(self.reference_tau >= self.bound.value)

    @property
    def exclusive(self):
        """
        No recommended policy visits two arm rows with probability above 1/2.
        """
        return all(row['good_arms'] <= 1 for row in self.rows)

    def csv_rows(self):
        return [[row[col] for col in BPI_CSV_COLUMNS] for row in self.rows]

    def to_dict(self):
        return {'learner': self.learner.to_dict(), 'class': self.class_spec.to_dict(),
                'eps': self.eps, 'delta': self.delta, 'class_gap': self.class_gap,
                'n_seeds': self.n_seeds, 'seed': self.seed,
                'records': [rec.to_dict() for rec in self.records],
                'reference_tau': self.reference_tau, 'failure_ok': self.failure_ok,
                'exclusive': self.exclusive, 'bound': self.bound.to_dict(),
                'bound_ok': self.bound_ok}


def run_bpi_sweep(learner, class_spec, eps, delta, n_seeds, seed=0, n_jobs=1):
    """
    Run bpi-uniform on every member of the class built for accuracy eps.

    The class kernel gap is eps / (H - Hbar - 1) for s4-bpi and
    2 eps / (H - Hbar - d) for tree; the eps field of class_spec is ignored.

    Parameters
    ----------
    learner : LearnerSpec | dict | str
        Must be of kind bpi-uniform.
    class_spec : ClassSpec | dict
        s4-bpi or tree.
    eps : float
        Accuracy in value.
    delta : float
        Confidence.
    n_seeds : int
        Replications per instance.
    seed : int
        Base seed; cell (i, r) samples from substream (i, r, 0).
    n_jobs : int | None

    Returns
    -------
    BpiRunResult
    """
    if not isinstance(learner, LearnerSpec):
        learner = LearnerSpec.from_dict(learner)
    if learner.kind != 'bpi-uniform':
        logger.error(f"BPI sweeps need the bpi-uniform learner, got '{learner.kind}'.")
        raise ValueError
    if not isinstance(class_spec, ClassSpec):
        class_spec = ClassSpec.from_dict(class_spec)
    if class_spec.family not in BPI_FAMILIES:
        logger.error(f"BPI sweeps need one of {', '.join(BPI_FAMILIES)}, "
                     f"got '{class_spec.family}'.")
        raise ValueError
    if not 0.0 < delta < 1.0 or eps <= 0 or n_seeds < 1:
        logger.error(f'Need eps > 0, delta in (0, 1) and n_seeds >= 1, '
                     f'got {eps}, {delta}, {n_seeds}.')
        raise ValueError

    depth = build_instance(class_spec.reference_params()).depth
    gap = bpi_class_gap(class_spec.family, class_spec.H, class_spec.Hbar, depth, eps)
    class_spec = class_spec.with_eps(gap)
    members = enumerate_class(class_spec)

    jobs = [(learner, params, i, rep, eps, delta, seed)
            for i, params in enumerate(members) for rep in range(n_seeds)]
    logger.info(f'BPI sweep: {len(members)} {class_spec.family} instances x {n_seeds} seeds, '
                f'eps={eps}, delta={delta}, class gap {gap:.5g}')
    with Timer() as timer:
        rows = run_jobs(_bpi_cell, jobs, n_jobs=n_jobs)
    logger.info(f'{len(rows)} cells done in {timer.elapsed:.1f} s')

    records = []
    for i, params in enumerate(members):
        cells = rows[i * n_seeds:(i + 1) * n_seeds]
        taus = [c['tau'] for c in cells if not c['capped']]
        n_capped = n_seeds - len(taus)
        if n_capped:
            logger.warning(f'Instance {i}: {n_capped} capped runs left out of E[tau].')
        mean_tau, tau_se = mean_stderr(taus)
        failure = 1.0 - float(np.mean([c['pac_success'] for c in cells]))
        records.append(BpiRecord(index=i, params=params, mean_tau=mean_tau, tau_stderr=tau_se,
                                 n_capped=n_capped, failure_rate=failure,
                                 failure_sigma=binomial_sigma(delta, n_seeds),
                                 max_good_arms=max(c['good_arms'] for c in cells),
                                 n_seeds=n_seeds))

    S = class_spec.S if class_spec.S is not None else members[0].S
    bound = bpi_bound(BPI_THEOREM[class_spec.family], class_spec.H, S, class_spec.A,
                      eps, delta)
    result = BpiRunResult(learner=learner, class_spec=class_spec, eps=eps, delta=delta,
                          class_gap=gap, n_seeds=n_seeds, seed=seed, records=records,
                          rows=rows, bound=bound)
    if not result.bound_ok:
        logger.warning(f'Reference E[tau] {result.reference_tau} is below the bound '
                       f'{bound.value}.')
    return result
