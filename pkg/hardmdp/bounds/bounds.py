"""
Closed-form lower bounds, their hypotheses, and the intermediate quantities
of the regret and best-policy-identification arguments.

All logarithms are natural. Constants are evaluated from their radical
expressions.
"""
import math
from dataclasses import dataclass

from .report import (BPI_THEOREMS, REGRET_THEOREMS, THEOREM_IDS, BoundReport,
                     Precondition)
from ..instances.tree import (REGIME_CAP, assumption_depth, build_tree_shape,
                              leaf_count_formula, tree_regime)
from .. import logger

C_REGRET_S3 = 1.0 / (32.0 * math.sqrt(2.0))
C_REGRET_S4 = 1.0 / 128.0
C_REGRET_TREE = 1.0 / (48.0 * math.sqrt(6.0))
C_BPI_S4 = 1.0 / 1024.0
C_BPI_TREE = 1.0 / 3456.0
# the relaxed-tree and stationary bounds hold up to unspecified absolute
# constants; they are evaluated with c = 1
C_UNSPECIFIED = 1.0

EPS_MAX = 0.25

# rewarded stages after an arm, per family: H - Hbar - d, H - 1, ...
GAP_STAGES = {
    'tree': lambda H, Hbar, d: H - Hbar - d,
    'tree-stationary': lambda H, Hbar, d: H - d,
    's3-stationary': lambda H, Hbar, d: H - 1,
    's4-stage': lambda H, Hbar, d: H - Hbar - 1,
    's4-bpi': lambda H, Hbar, d: H - Hbar - 1,
}

_FAMILY_ALIASES = {'s3': 's3-stationary', 's4': 's4-stage', 'stationary-tree': 'tree-stationary'}


def _family(family):
    family = _FAMILY_ALIASES.get(family, family)
    if family not in GAP_STAGES:
        logger.error(f"Unknown family '{family}'.")
        raise ValueError
    return family


def class_size(family, Hbar, L, A):
    """
    Number of arms K of a class: Hbar L A (tree), L A (stationary tree),
    A (S=3), Hbar A (S=4).
    """
    family = _family(family)
    if family == 'tree':
        return Hbar * L * A
    if family == 'tree-stationary':
        return L * A
    if family == 's3-stationary':
        return A
    return Hbar * A


def gap_stages(family, H, Hbar=None, d=None):
    """
    Number of rewarded stages following the arm row.
    """
    return GAP_STAGES[_family(family)](H, Hbar, d)


def optimal_epsilon(family, H, Hbar, L, A, T):
    """
    Gap maximizing the class regret lower bound,
    eps = (1 - 1/K) sqrt(K / T) / (2 sqrt 2) with K the number of arms.

    The bound argument needs eps <= 1/4; a larger value is returned with a
    warning.

    Parameters
    ----------
    family : str
    H : int
        Unused by the formula, kept for a uniform signature.
    Hbar : float
        Waiting window (ignored by s3 and stationary tree).
    L : float
        Number of leaves (tree families; ignored otherwise).
    A : int
    T : int

    Returns
    -------
    float
    """
    if T <= 0:
        logger.error(f'T must be positive, got {T}.')
        raise ValueError
    K = class_size(family, Hbar, L, A)
    eps = (1.0 - 1.0 / K) * math.sqrt(K / T) / (2.0 * math.sqrt(2.0))
    if eps > EPS_MAX:
        logger.warning(f'Optimal gap {eps} exceeds 1/4; T={T} is too small.')
    return eps


def regret_identity(family, H, Hbar, d, eps, T, expected_count):
    """
    Expected regret T g eps (1 - E[N] / T) of an algorithm visiting the
    boosted row E[N] times on average, g being the number of rewarded
    stages (H - Hbar - d for the tree family).
    """
    if not 0 <= expected_count <= T:
        logger.error(f'Expected count must lie in [0, T] = [0, {T}], got {expected_count}.')
        raise ValueError
    g = gap_stages(family, H, Hbar, d)
    return T * g * eps * (1.0 - expected_count / T)


def regret_class_bound(K, g, eps, T):
    """
    Class-average regret lower bound before the choice of eps,
    T g eps (1 - 1/K - sqrt(2) eps sqrt(K T) / K).
    """
    return T * g * eps * (1.0 - 1.0 / K - math.sqrt(2.0) * eps * math.sqrt(K * T) / K)


def regret_class_optimum(K, g, T):
    """
    regret_class_bound at its optimal eps: (1 - 1/K)^2 g sqrt(K T) / (4 sqrt 2).
    """
    return (1.0 - 1.0 / K) ** 2 * g * math.sqrt(K * T) / (4.0 * math.sqrt(2.0))


def bpi_class_bound(family, K, g, eps, delta):
    """
    Expected sample complexity lower bound on the reference instance of a
    class, before simplification.

    tree   : K g^2 log(1/delta) / (32 eps^2)
    s4-bpi : (K - 1) g^2 log(1/(2.4 delta)) / (16 eps^2)
    """
    family = _family(family)
    if family == 'tree':
        return K * g ** 2 * math.log(1.0 / delta) / (32.0 * eps ** 2)
    if family == 's4-bpi':
        return (K - 1) * g ** 2 * math.log(1.0 / (2.4 * delta)) / (16.0 * eps ** 2)
    logger.error(f'No BPI class bound for family {family}.')
    raise ValueError


@dataclass(frozen=True)
class AssumptionReport:
    """
    Regime of the tree construction for (S, A, H).

    Attributes
    ----------
    regime : str
        'full-tree', 'relaxed-tree', 'exponential-cap' or 'unsupported'.
    d : int | None
        Depth of the tree that is built: the integer of
        S = 3 + (A^d - 1)/(A - 1) for a full tree, ceil(log_A((S-3)(A-1) + 1))
        for the relaxed tree, the same formula over the capped node count
        under the cap.
    L : int | None
        Leaves of the tree actually built.
    effective_states : int
        min(S, ceil(A^(H/3 - 2))) under the cap, S otherwise.
    tree_depth : int | None
        Levels of the tree actually built.
    assumption_holds : bool
        Whether S = 3 + (A^d - 1)/(A - 1) for an integer d.
    horizon_ok : bool
        Whether H >= 3d.
    """
    S: int
    A: int
    H: int
    regime: str
    d: int = None
    L: int = None
    effective_states: int = None
    tree_depth: int = None
    merged_states: int = 0
    assumption_holds: bool = False
    horizon_ok: bool = False

    def to_dict(self):
        return dict(self.__dict__)


def assumption_check(S, A, H):
    """
    Report which tree construction applies to (S, A, H).

    Returns
    -------
    AssumptionReport
    """
    if S < 6 or A < 2:
        return AssumptionReport(S=S, A=A, H=H, regime='unsupported', effective_states=S)

    d_full = assumption_depth(S, A)
    regime, d, n_nodes = tree_regime(S, A, H)
    shape = build_tree_shape(S, A, relaxed=True,
                             n_nodes=n_nodes if regime == REGIME_CAP else None)
    effective = S
    if regime == REGIME_CAP:
        effective = min(S, math.ceil(A ** (H / 3.0 - 2.0)))
    return AssumptionReport(S=S, A=A, H=H, regime=regime, d=d, L=shape.L,
                            effective_states=effective, tree_depth=shape.depth,
                            merged_states=shape.merged_states,
                            assumption_holds=d_full is not None,
                            horizon_ok=H >= 3 * d)


def _check(name, passed, detail=''):
    return Precondition(name, bool(passed), detail)


def _tree_checks(S, A, H):
    d = assumption_depth(S, A)
    checks = [_check('full-tree-states', S >= 6 and A >= 2 and d is not None,
                     'S >= 6, A >= 2 and S = 3 + (A^d - 1)/(A - 1)')]
    checks.append(_check('H >= 3d', d is not None and H >= 3 * d,
                         f'd = {d}' if d is not None else 'no integer d'))
    return checks, d


def _relaxed_checks(S, A, H):
    return [_check('S >= 11', S >= 11), _check('A >= 4', A >= 4), _check('H >= 6', H >= 6)]


def _constant_check():
    return _check('absolute-constant', False, 'absolute constant unspecified, c = 1 used')


def _eps_feasible(eps):
    return _check('eps <= 1/4', eps <= EPS_MAX, f'optimal eps = {eps!r}')


def _check_positive(**values):
    for name, value in values.items():
        if value is None or value <= 0:
            logger.error(f'{name} must be positive, got {value}.')
            raise ValueError


def regret_bound(theorem_id, H, S, A, T):
    """
    Evaluate a minimax regret lower bound.

    Parameters
    ----------
    theorem_id : str
        One of regret-s3, regret-s4, regret-tree, regret-tree-relaxed,
        regret-stationary.
    H, S, A, T : int
        Horizon, states, actions and number of episodes. S is ignored by the
        S=3 and S=4 bounds.

    Returns
    -------
    BoundReport
    """
    if theorem_id not in REGRET_THEOREMS:
        logger.error(f"Unknown regret theorem '{theorem_id}'. "
                     f"Supported: {', '.join(REGRET_THEOREMS)}.")
        raise ValueError
    _check_positive(H=H, A=A, T=T)
    inputs = {'H': H, 'S': S, 'A': A, 'T': T}

    if theorem_id == 'regret-s3':
        value = C_REGRET_S3 * H * math.sqrt(A * T)
        checks = [_check('A >= 2', A >= 2), _check('H >= 2', H >= 2),
                  _check('T >= 2A', T >= 2 * A),
                  _eps_feasible(optimal_epsilon('s3-stationary', H, 1, 1, A, T))]
        formula = 'H sqrt(A T) / (32 sqrt 2)'
    elif theorem_id == 'regret-s4':
        value = C_REGRET_S4 * math.sqrt(H ** 3 * A * T)
        checks = [_check('A >= 2', A >= 2), _check('H >= 4', H >= 4),
                  _check('T >= HA', T >= H * A),
                  _eps_feasible(optimal_epsilon('s4-stage', H, H / 2.0, 1, A, T))]
        formula = 'sqrt(H^3 A T) / 128'
    elif theorem_id == 'regret-tree':
        _check_positive(S=S)
        value = C_REGRET_TREE * math.sqrt(H ** 3 * S * A * T)
        checks, _ = _tree_checks(S, A, H)
        checks.append(_check('T >= HSA', T >= H * S * A))
        checks.append(_eps_feasible(optimal_epsilon(
            'tree', H, H / 3.0, leaf_count_formula(S, A), A, T)))
        formula = 'sqrt(H^3 S A T) / (48 sqrt 6)'
    elif theorem_id == 'regret-tree-relaxed':
        _check_positive(S=S)
        value = C_UNSPECIFIED * math.sqrt(min(S, A ** (H / 3.0 - 2.0))) \
            * math.sqrt(H ** 3 * A * T)
        checks = _relaxed_checks(S, A, H) + [_check('T >= HSA', T >= H * S * A),
                                             _constant_check()]
        formula = 'c sqrt(min(S, A^(H/3 - 2))) sqrt(H^3 A T), c = 1'
    else:
        _check_positive(S=S)
        value = C_UNSPECIFIED * math.sqrt(H ** 2 * S * A * T)
        checks, d = _tree_checks(S, A, H)
        checks = checks[:1] + [_check('H > d', d is not None and H > d)]
        if d is not None:
            checks.append(_eps_feasible(optimal_epsilon(
                'tree-stationary', H, 1, leaf_count_formula(S, A), A, T)))
        checks.append(_constant_check())
        formula = 'c sqrt(H^2 S A T), c = 1'

    report = BoundReport(theorem_id=theorem_id, inputs=inputs, value=value,
                         preconditions=checks, formula=formula)
    if not report.valid:
        logger.debug(f'{theorem_id}: failed preconditions {report.failed}')
    return report


def bpi_bound(theorem_id, H, S, A, eps, delta):
    """
    Evaluate a best-policy-identification or PAC-MDP lower bound.

    Parameters
    ----------
    theorem_id : str
        One of bpi-s4, bpi-tree, bpi-tree-relaxed, bpi-stationary, pac-tree,
        pac-tree-relaxed.
    H, S, A : int
    eps : float
        Accuracy, positive.
    delta : float
        Confidence, in (0, 1).

    Returns
    -------
    BoundReport : for the pac-* ids the value is the episode threshold
        T(eps, delta) under which some instance forces more than T
        eps-suboptimal episodes.
    """
    if theorem_id not in BPI_THEOREMS:
        logger.error(f"Unknown BPI theorem '{theorem_id}'. "
                     f"Supported: {', '.join(BPI_THEOREMS)}.")
        raise ValueError
    if not 0.0 < delta < 1.0:
        logger.error(f'delta must lie in (0, 1), got {delta}.')
        raise ValueError
    _check_positive(eps=eps, H=H, A=A)
    inputs = {'H': H, 'S': S, 'A': A, 'eps': eps, 'delta': delta}
    log_term = math.log(1.0 / delta)
    delta_check = _check('delta <= 1/16', delta <= 1.0 / 16.0)

    if theorem_id == 'bpi-s4':
        log_s4 = math.log(1.0 / (2.4 * delta))
        value = max(C_BPI_S4 * H ** 3 * A / eps ** 2 * log_s4, 0.0)
        checks = [_check('A >= 2', A >= 2), _check('H >= 4', H >= 4),
                  _check('eps <= (H/2 - 1)/8', eps <= (H / 2.0 - 1.0) / 8.0),
                  _check('log(1/(2.4 delta)) > 0', log_s4 > 0)]
        formula = 'H^3 A log(1/(2.4 delta)) / (1024 eps^2)'
    elif theorem_id in ('bpi-tree', 'pac-tree'):
        _check_positive(S=S)
        checks, _ = _tree_checks(S, A, H)
        checks += [_check('H >= 4', H >= 4), _check('eps <= H/24', eps <= H / 24.0),
                   delta_check]
        value = C_BPI_TREE * H ** 3 * S * A / eps ** 2 * log_term
        formula = 'H^3 S A log(1/delta) / (3456 eps^2)'
        if theorem_id == 'pac-tree':
            value = value / 2.0 - 1.0
            checks.append(_check('nonnegative', value >= 0))
            formula = 'H^3 S A log(1/delta) / (6912 eps^2) - 1'
    elif theorem_id in ('bpi-tree-relaxed', 'pac-tree-relaxed'):
        _check_positive(S=S)
        checks = _relaxed_checks(S, A, H) + [
            _check('eps <= H/24', eps <= H / 24.0), delta_check, _constant_check()]
        value = C_UNSPECIFIED * min(S, A ** (H / 3.0 - 2.0)) * H ** 3 * A / eps ** 2 * log_term
        formula = 'c min(S, A^(H/3 - 2)) H^3 A log(1/delta) / eps^2, c = 1'
        if theorem_id == 'pac-tree-relaxed':
            value -= 1.0
            checks.append(_check('nonnegative', value >= 0))
            formula += ' - 1'
    else:
        _check_positive(S=S)
        checks, _ = _tree_checks(S, A, H)
        checks = checks[:1] + [delta_check, _constant_check()]
        value = C_UNSPECIFIED * S * A * H ** 2 / eps ** 2 * log_term
        formula = 'c S A H^2 log(1/delta) / eps^2, c = 1'

    report = BoundReport(theorem_id=theorem_id, inputs=inputs, value=value,
                         preconditions=checks, formula=formula)
    if not report.valid:
        logger.debug(f'{theorem_id}: failed preconditions {report.failed}')
    return report


def evaluate_bound(theorem_id, H=None, S=None, A=None, T=None, eps=None, delta=None):
    """
    Dispatch to regret_bound or bpi_bound according to the theorem id.
    """
    if theorem_id not in THEOREM_IDS:
        logger.error(f"Unknown theorem '{theorem_id}'. Supported: {', '.join(THEOREM_IDS)}.")
        raise ValueError
    if theorem_id in REGRET_THEOREMS:
        if T is None:
            logger.error(f'{theorem_id} needs T.')
            raise ValueError
        return regret_bound(theorem_id, H, S, A, T)
    if eps is None or delta is None:
        logger.error(f'{theorem_id} needs eps and delta.')
        raise ValueError
    return bpi_bound(theorem_id, H, S, A, eps, delta)
