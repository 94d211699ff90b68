"""
Tabular episodic MDP and Markov policy containers, validation and JSON
conversion.

Stages are 1-based in every public argument and report (h = 1..H) and
0-based in the arrays: r[h-1] is the stage-h reward and p[h-1] the kernel
used to move from stage h to stage h+1.
"""
from dataclasses import dataclass, field

import numpy as np

from .. import logger

TOL = 1e-9


def _frozen(array):
    array = np.array(array, dtype=float)
    array.setflags(write=False)
    return array


def normalized_cdf(probs):
    """
    Cumulative sums along the last axis, scaled so the last entry is 1.
    All-zero rows give nan.
    """
    cdf = np.cumsum(probs, axis=-1)
    with np.errstate(invalid='ignore', divide='ignore'):
        return cdf / cdf[..., -1:]


class Mdp:
    """
    Finite-horizon tabular MDP (S, A, H, mu, p, r).

    Parameters
    ----------
    mu : array-like, shape (S,)
        The initial state distribution.
    p : array-like, shape (H-1, S, A, S)
        The stage-dependent kernels p[h-1][s][a][s'].
    r : array-like, shape (H, S, A)
        The rewards r[h-1][s][a].

    Shapes are checked here; probabilities and reward ranges are checked by
    validate() so that invalid instances can still be built and reported on.
    """

    def __init__(self, mu, p, r):
        mu = _frozen(mu)
        r = _frozen(r)
        if mu.ndim != 1 or r.ndim != 3:
            logger.error('mu must be 1D and r must be 3D (H, S, A).')
            raise ValueError

        H, S, A = r.shape
        if S != mu.shape[0] or S < 1 or A < 1 or H < 1:
            logger.error(f'Inconsistent sizes: mu has {mu.shape[0]} states, '
                         f'r has shape {r.shape}.')
            raise ValueError

        p = np.array(p, dtype=float)
        if H == 1 and p.size == 0:
            p = np.zeros((0, S, A, S))
        if p.shape != (H - 1, S, A, S):
            logger.error(f'Kernel shape {p.shape} does not match '
                         f'(H-1, S, A, S) = {(H - 1, S, A, S)}.')
            raise ValueError

        self._mu = mu
        self._p = _frozen(p)
        self._r = r
        # sampling tables of mu and of every kernel row
        self._cdf = (_frozen(normalized_cdf(mu)), _frozen(normalized_cdf(self._p)))

    def __repr__(self):
        return f'<Mdp | S={self.S}, A={self.A}, H={self.H}>'

    def __eq__(self, other):
        if not isinstance(other, Mdp):
            return NotImplemented
        return (self.shape == other.shape
                and np.array_equal(self._mu, other._mu)
                and np.array_equal(self._p, other._p)
                and np.array_equal(self._r, other._r))

    __hash__ = None

    def same_structure(self, other):
        """
        True when both MDPs share S, A, H, mu and r, i.e. they may differ only
        through their kernels.
        """
        return (self.shape == other.shape
                and np.array_equal(self._mu, other._mu)
                and np.array_equal(self._r, other._r))

    def kernel_diff(self, other):
        """
        List the (h, s, a) rows whose kernels differ.

        Parameters
        ----------
        other : Mdp
            An MDP of the same shape.

        Returns
        -------
        list of tuple : 1-based stage, state and action of each differing row.
        """
        if self.shape != other.shape:
            logger.error('Cannot compare kernels of MDPs with different shapes.')
            raise ValueError
        rows = np.argwhere(np.any(self._p != other._p, axis=-1))
        return [(int(k) + 1, int(s), int(a)) for k, s, a in rows]

    @property
    def shape(self):
        """
        (S, A, H)
        """
        return (self.S, self.A, self.H)

    @property
    def S(self):
        """
        The number of states.
        """
        return self._mu.shape[0]

    @S.setter
    def S(self, S):
        logger.warning("This attribute cannot be changed.")

    @property
    def A(self):
        """
        The number of actions.
        """
        return self._r.shape[2]

    @A.setter
    def A(self, A):
        logger.warning("This attribute cannot be changed.")

    @property
    def H(self):
        """
        The horizon.
        """
        return self._r.shape[0]

    @H.setter
    def H(self, H):
        logger.warning("This attribute cannot be changed.")

    @property
    def mu(self):
        """
        The initial distribution, read-only array of shape (S,).
        """
        return self._mu

    @mu.setter
    def mu(self, mu):
        logger.warning("This attribute cannot be changed.")

    @property
    def p(self):
        """
        The kernels, read-only array of shape (H-1, S, A, S).
        """
        return self._p

    @p.setter
    def p(self, p):
        logger.warning("This attribute cannot be changed.")

    @property
    def r(self):
        """
        The rewards, read-only array of shape (H, S, A).
        """
        return self._r

    @r.setter
    def r(self, r):
        logger.warning("This attribute cannot be changed.")

    @property
    def cdf_tables(self):
        """
        Normalized cumulative tables (of mu, of p along s'), read-only.
        """
        return self._cdf


class MarkovPolicy:
    """
    Stage-dependent randomized policy pi(a | s, h).

    Parameters
    ----------
    probs : array-like, shape (H, S, A)
        The action distributions. Each row must sum to 1.
    """

    def __init__(self, probs):
        probs = _frozen(probs)
        if probs.ndim != 3:
            logger.error(f'Policy must have shape (H, S, A), got {probs.shape}.')
            raise ValueError
        if np.any(probs < 0) or np.any(np.abs(probs.sum(axis=-1) - 1.0) > TOL):
            logger.error('Policy rows must be probability vectors.')
            raise ValueError
        self._probs = probs

    def __repr__(self):
        H, S, A = self._probs.shape
        kind = 'deterministic' if self.is_deterministic() else 'randomized'
        return f'<MarkovPolicy | {kind}, S={S}, A={A}, H={H}>'

    def __eq__(self, other):
        if not isinstance(other, MarkovPolicy):
            return NotImplemented
        return np.array_equal(self._probs, other._probs)

    __hash__ = None

    def matches(self, m):
        """
        True if the policy dimensions fit the MDP m.
        """
        return self._probs.shape == (m.H, m.S, m.A)

    def check_matches(self, m):
        """
        Raise ValueError when the policy does not fit the MDP m.
        """
        if not self.matches(m):
            logger.error(f'Policy shape {self._probs.shape} does not match '
                         f'the MDP (H, S, A) = {(m.H, m.S, m.A)}.')
            raise ValueError

    def is_deterministic(self):
        """
        True if every row puts all its mass on one action.
        """
        return bool(np.all(np.isin(self._probs, (0.0, 1.0))))

    def actions(self):
        """
        The most likely action of every (h, s), shape (H, S).
        """
        return np.argmax(self._probs, axis=-1)

    @property
    def probs(self):
        """
        The action probabilities, read-only array of shape (H, S, A).
        """
        return self._probs

    @probs.setter
    def probs(self, probs):
        logger.warning("This attribute cannot be changed.")

    @property
    def H(self):
        return self._probs.shape[0]

    @property
    def S(self):
        return self._probs.shape[1]

    @property
    def A(self):
        return self._probs.shape[2]


def uniform_policy(S, A, H):
    """
    The policy playing every action with probability 1/A.
    """
    return MarkovPolicy(np.full((H, S, A), 1.0 / A))


def deterministic_policy(actions, A):
    """
    Build a deterministic Markov policy from an action table.

    Parameters
    ----------
    actions : array-like of int, shape (H, S)
        The action played in each (stage, state).
    A : int
        The number of actions.

    Returns
    -------
    MarkovPolicy
    """
    actions = np.asarray(actions, dtype=int)
    if actions.ndim != 2 or np.any(actions < 0) or np.any(actions >= A):
        logger.error('Action table must be 2D with entries in [0, A).')
        raise ValueError
    probs = np.zeros(actions.shape + (A,))
    np.put_along_axis(probs, actions[..., None], 1.0, axis=-1)
    return MarkovPolicy(probs)


@dataclass
class ValidationReport:
    """
    Outcome of validate(). Stages are 1-based.

    Attributes
    ----------
    kernel_row_errors : list of (h, s, a, row_sum)
    negative_kernel_entries : list of (h, s, a, s_next)
    reward_violations : list of (h, s, a, value)
    mu_sum : float
    mu_negative : list of int
    """
    kernel_row_errors: list = field(default_factory=list)
    negative_kernel_entries: list = field(default_factory=list)
    reward_violations: list = field(default_factory=list)
    mu_sum: float = 1.0
    mu_negative: list = field(default_factory=list)
    tol: float = TOL

    @property
    def mu_valid(self):
        return abs(self.mu_sum - 1.0) <= self.tol and not self.mu_negative

    @property
    def valid(self):
        return (self.mu_valid
                and not self.kernel_row_errors
                and not self.negative_kernel_entries
                and not self.reward_violations)

    def summary(self):
        if self.valid:
            return 'valid'
        parts = []
        if not self.mu_valid:
            parts.append(f'mu sums to {self.mu_sum!r}, negative at {self.mu_negative}')
        for h, s, a, total in self.kernel_row_errors:
            parts.append(f'kernel row (h={h}, s={s}, a={a}) sums to {total!r}')
        for h, s, a, t in self.negative_kernel_entries:
            parts.append(f'negative kernel entry (h={h}, s={s}, a={a}, next={t})')
        for h, s, a, value in self.reward_violations:
            parts.append(f'reward r(h={h}, s={s}, a={a}) = {value!r} outside [0, 1]')
        return '; '.join(parts)


def validate(m, tol=TOL):
    """
    Check the probability and reward invariants of an MDP.

    Parameters
    ----------
    m : Mdp
        The MDP to check.
    tol : float
        Tolerance on row sums.

    Returns
    -------
    ValidationReport : Failures are reported, never raised.
    """
    report = ValidationReport(tol=tol)
    report.mu_sum = float(m.mu.sum())
    report.mu_negative = [int(s) for s in np.flatnonzero(m.mu < 0)]

    row_sums = m.p.sum(axis=-1)
    for k, s, a in np.argwhere(np.abs(row_sums - 1.0) > tol):
        report.kernel_row_errors.append(
            (int(k) + 1, int(s), int(a), float(row_sums[k, s, a])))
    for k, s, a, t in np.argwhere(m.p < 0):
        report.negative_kernel_entries.append((int(k) + 1, int(s), int(a), int(t)))
    for k, s, a in np.argwhere((m.r < 0) | (m.r > 1)):
        report.reward_violations.append(
            (int(k) + 1, int(s), int(a), float(m.r[k, s, a])))

    if not report.valid:
        logger.debug(f'Invalid MDP: {report.summary()}')
    return report


def mdp_to_dict(m):
    """
    JSON-compatible form with fields S, A, H, mu, p, r; p is indexed
    [h][s][a][s'].
    """
    return {'S': m.S, 'A': m.A, 'H': m.H,
            'mu': m.mu.tolist(), 'p': m.p.tolist(), 'r': m.r.tolist()}


def mdp_from_dict(data):
    """
    Inverse of mdp_to_dict.
    """
    missing = [key for key in ('S', 'A', 'H', 'mu', 'p', 'r') if key not in data]
    if missing:
        logger.error(f'MDP document misses fields {missing}.')
        raise ValueError

    S, A, H = int(data['S']), int(data['A']), int(data['H'])
    p = np.array(data['p'], dtype=float)
    if p.size == 0:
        p = np.zeros((max(H - 1, 0), S, A, S))
    m = Mdp(data['mu'], p, data['r'])
    if m.shape != (S, A, H):
        logger.error(f'Declared sizes {(S, A, H)} do not match the arrays {m.shape}.')
        raise ValueError
    return m


def policy_to_dict(pol):
    """
    JSON-compatible form with fields S, A, H, pi.
    """
    return {'S': pol.S, 'A': pol.A, 'H': pol.H, 'pi': pol.probs.tolist()}


def policy_from_dict(data):
    """
    Inverse of policy_to_dict.
    """
    if 'pi' not in data:
        logger.error("Policy document misses the field 'pi'.")
        raise ValueError
    pol = MarkovPolicy(data['pi'])
    declared = tuple(int(data.get(key, dim)) for key, dim
                     in zip(('S', 'A', 'H'), (pol.S, pol.A, pol.H)))
    if declared != (pol.S, pol.A, pol.H):
        logger.error('Declared sizes do not match the policy array.')
        raise ValueError
    return pol
