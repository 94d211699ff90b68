"""
Oracle suite: exact identities and numeric inequalities checked on small
instances and parameter grids.

Each check returns a CheckResult; run_checks() runs them all in a fixed
order.
"""
from typing import NamedTuple

import numpy as np

from .bounds import optimal_epsilon, regret_class_bound
from .info import (MajorityVisit, VisitFraction, kl_contraction_check,
                   kl_delta_bound, kl_delta_one_minus_delta, kl_epsilon_bound,
                   pinsker_check, trajectory_kl_brute_force, trajectory_kl_exact)
from .instances import (HardInstanceParams, arm_policy, balanced_tree, build_instance,
                        class_instances, ClassSpec)
from .mdp import MarkovPolicy, make_generator, occupancy, optimal_values, uniform_policy
from .utils.timer import Timer
from . import logger

AGREEMENT_TOL = 1e-10
VALUE_TOL = 1e-12


class CheckResult(NamedTuple):
    name: str
    passed: bool
    cases: int
    failures: int
    detail: str = ''
    elapsed: float = 0.0


def _pairs():
    """
    (reference, alternative) instance pairs of the small families.
    """
    params = []
    for A in (2, 3):
        for H in (2, 3, 4):
            params.append(HardInstanceParams('s3-stationary', A=A, H=H, eps=0.2, arm=(A - 1,)))
    for Hbar in (1, 2):
        params.append(HardInstanceParams('s4-stage', A=2, H=4, Hbar=Hbar, eps=0.15,
                                         arm=(Hbar + 1, 1)))
    params.append(HardInstanceParams('s4-stage', A=3, H=4, Hbar=2, eps=0.1, arm=(3, 2)))
    return [(build_instance(p.with_arm(None)), build_instance(p)) for p in params]


def _random_policy(m, rng):
    return MarkovPolicy(rng.dirichlet(np.ones(m.A), size=(m.H, m.S)))


def kl_cells(seed=0):
    """
    The (reference, alternative, policy, T) matrix of the enumeration checks.
    """
    cells = []
    for i, (ref, alt) in enumerate(_pairs()):
        m = ref.mdp
        policies = [('uniform', uniform_policy(m.S, m.A, m.H)),
                    ('arm', arm_policy(alt, alt.site)),
                    ('random', _random_policy(m, make_generator(seed, i)))]
        horizons = (1,) if m.A == 3 and m.S == 4 else (1, 2)
        for name, pol in policies:
            for T in horizons:
                cells.append((ref, alt, name, pol, T))
    return cells


def check_kl_oracle(seed=0):
    """
    Exact trajectory KL equals the brute-force sum over histories.
    """
    failures, worst = 0, 0.0
    cells = kl_cells(seed)
    for ref, alt, _, pol, T in cells:
        exact = trajectory_kl_exact(ref.mdp, alt.mdp, pol, T).total
        brute = trajectory_kl_brute_force(ref.mdp, alt.mdp, pol, T)
        gap = abs(exact - brute)
        worst = max(worst, gap)
        failures += gap > AGREEMENT_TOL
    return len(cells), failures, f'max gap {worst:.3g}'


def check_contraction(seed=0):
    """
    kl(E_1[Z], E_2[Z]) <= KL for the visit fraction and the majority event.
    """
    cases, failures = 0, 0
    for ref, alt, _, pol, T in kl_cells(seed):
        for functional in (VisitFraction(alt.site), MajorityVisit(alt.site)):
            cases += 1
            failures += not kl_contraction_check(ref.mdp, alt.mdp, pol, T, functional).holds
    return cases, failures, ''


def closed_form_grid():
    """
    (params, closed-form rho*) over every family.
    """
    grid = []
    for A in (2, 3):
        for H in (2, 3, 5):
            for eps in (0.0, 0.1, 0.25):
                grid.append((HardInstanceParams('s3-stationary', A=A, H=H, eps=eps,
                                                arm=(A - 1,)), (H - 1) * (0.5 + eps)))
    for H in (4, 6):
        for Hbar in (1, 2):
            g = H - Hbar - 1
            for eps in (0.05, 0.2):
                grid.append((HardInstanceParams('s4-stage', A=2, H=H, Hbar=Hbar, eps=eps,
                                                arm=(Hbar + 1, 1)), g * (0.5 + eps)))
            for eps in (0.05, 0.1):
                grid.append((HardInstanceParams('s4-bpi', A=2, H=H, Hbar=Hbar, eps=eps,
                                                arm=(Hbar + 1, 1)), g * (0.5 + 2 * eps)))
    for S, A in ((6, 2), (7, 3)):
        for H in (6, 9):
            for Hbar in (1, 3):
                for eps in (0.1, 0.3):
                    grid.append((HardInstanceParams('tree', A=A, H=H, S=S, Hbar=Hbar, eps=eps,
                                                    arm=(3, 0, 1)),
                                 (H - Hbar - 2) * (0.5 + eps)))
    for H in (3, 5):
        for eps in (0.1, 0.2):
            grid.append((HardInstanceParams('tree-stationary', A=2, H=H, S=6, eps=eps,
                                            arm=(1, 0)), (H - 2) * (0.5 + eps)))
    return grid


def check_closed_forms():
    """
    Planner rho* equals the closed form of every family.
    """
    grid = closed_form_grid()
    failures, worst = 0, 0.0
    for params, expected in grid:
        rho = optimal_values(build_instance(params).mdp)[0].rho
        gap = abs(rho - expected)
        worst = max(worst, gap)
        failures += gap > VALUE_TOL
    return len(grid), failures, f'max gap {worst:.3g}'


def check_kl_epsilon():
    values = [round(k * 1e-3, 10) for k in range(251)]
    failures = 0
    for eps in values:
        lhs, rhs = kl_epsilon_bound(eps)
        failures += lhs > rhs
    return len(values), failures, 'kl(1/2, 1/2+eps) <= 4 eps^2'


def _unit_grid():
    return [round(k * 0.01, 10) for k in range(101)]


def check_kl_delta():
    cases, failures = 0, 0
    for p in _unit_grid():
        for q in _unit_grid()[:-1]:
            lhs, rhs = kl_delta_bound(p, q)
            cases += 1
            failures += lhs < rhs - 1e-12
    return cases, failures, 'kl(p, q) >= (1-p) log(1/(1-q)) - log 2'


def check_pinsker():
    cases, failures = 0, 0
    for p in _unit_grid():
        for q in _unit_grid():
            _, _, holds = pinsker_check(p, q)
            cases += 1
            failures += not holds
    return cases, failures, '(p - q)^2 <= kl(p, q) / 2'


def check_leaf_count():
    """
    A balanced A-ary tree over S nodes has at least S/4 leaves.
    """
    cases, failures = 0, 0
    for S in range(6, 201):
        for A in range(2, 7):
            cases += 1
            failures += balanced_tree(S, A).L < S / 4.0
    return cases, failures, 'L >= S/4'


def check_kl_delta_one_minus_delta():
    values = [k * 1e-3 for k in range(1, 151)]
    failures = sum(1 for delta in values if not kl_delta_one_minus_delta(delta)[2])
    return len(values), failures, 'kl(delta, 1-delta) >= log(1/(2.4 delta))'


def _tree_classes():
    return [ClassSpec('tree', A=2, H=9, S=6, Hbar=3, eps=0.1),
            ClassSpec('tree', A=3, H=7, S=7, Hbar=2, eps=0.2),
            ClassSpec('tree', A=2, H=12, S=10, Hbar=2, eps=0.1),
            ClassSpec('tree', A=2, H=12, S=11, Hbar=3, eps=0.1, relaxed=True),
            ClassSpec('tree-stationary', A=2, H=5, S=6, eps=0.1)]


def check_occupancy():
    """
    Occupancies sum to one at every stage, and under any policy the arm rows
    of a tree class carry a total mass of exactly one.
    """
    cases, failures = 0, 0
    for spec in _tree_classes():
        instances = class_instances(spec)
        ref = instances[0]
        m = ref.mdp
        policies = [uniform_policy(m.S, m.A, m.H)] + \
            [arm_policy(ref, site) for site in ref.arm_sites[:4]]
        for instance in instances[:3]:
            for pol in policies:
                d = occupancy(instance.mdp, pol).d
                cases += 1
                stage_mass = d.sum(axis=(1, 2))
                arm_mass = sum(d[s.stage - 1, s.state, s.action] for s in instance.arm_sites)
                failures += not (np.allclose(stage_mass, 1.0, atol=1e-12)
                                 and abs(arm_mass - 1.0) < 1e-12)
    return cases, failures, ''


def check_optimal_epsilon():
    """
    The optimal eps maximizes the class regret bound over a 1e-4 grid.
    """
    cases, failures = 0, 0
    for family, Hbar, L, A, T in (('tree', 3, 2, 2, 1200), ('tree', 2, 4, 2, 5000),
                                  ('s3-stationary', None, 1, 2, 400),
                                  ('s4-stage', 3, 1, 3, 2000)):
        K = {'tree': Hbar * L * A, 's3-stationary': A, 's4-stage': (Hbar or 1) * A}[family]
        eps_star = optimal_epsilon(family, None, Hbar, L, A, T)
        grid = np.arange(0.0, 0.25 + 1e-12, 1e-4)
        values = [regret_class_bound(K, 1, eps, T) for eps in grid]
        best = grid[int(np.argmax(values))]
        cases += 1
        failures += abs(best - eps_star) > 1e-4 + 1e-12
    return cases, failures, ''


CHECKS = (('kl-exact-vs-brute-force', check_kl_oracle),
          ('kl-contraction', check_contraction),
          ('closed-form-values', check_closed_forms),
          ('kl-half-epsilon', check_kl_epsilon),
          ('kl-lower-log', check_kl_delta),
          ('pinsker', check_pinsker),
          ('leaf-count', check_leaf_count),
          ('kl-delta-one-minus-delta', check_kl_delta_one_minus_delta),
          ('occupancy', check_occupancy),
          ('optimal-epsilon', check_optimal_epsilon))


def run_checks(seed=0, names=None):
    """
    Run the oracle suite.

    Parameters
    ----------
    seed : int
        Seed of the random policies of the enumeration checks.
    names : list of str | None
        Subset of checks to run, all of them by default.

    Returns
    -------
    list of CheckResult
    """
    selected = [(name, func) for name, func in CHECKS if names is None or name in names]
    if names is not None and len(selected) != len(set(names)):
        unknown = sorted(set(names) - {name for name, _ in CHECKS})
        logger.error(f'Unknown checks {unknown}.')
        raise ValueError

    results = []
    for name, func in selected:
        with Timer() as timer:
            if func in (check_kl_oracle, check_contraction):
                cases, failures, detail = func(seed)
            else:
                cases, failures, detail = func()
        results.append(CheckResult(name, failures == 0, cases, int(failures), detail,
                                   timer.elapsed))
        log = logger.info if failures == 0 else logger.error
        log(f'{name}: {cases - failures}/{cases} passed ({timer.elapsed:.2f} s)')
    return results
