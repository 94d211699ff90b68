"""
Exact backward induction and forward occupancy recursions.
"""
from dataclasses import dataclass

import numpy as np

from .mdp import MarkovPolicy
from .. import logger

# greedy ties within this gap go to the lowest action index
TIE_TOL = 1e-12


@dataclass(frozen=True)
class ValueTable:
    """
    Stage-wise values. V has shape (H, S), Q has shape (H, S, A); rho is the
    mu-average of the stage-1 values.
    """
    V: np.ndarray
    Q: np.ndarray
    rho: float


@dataclass(frozen=True)
class OccupancyTable:
    """
    Stage-wise state-action distribution d[h-1][s][a] of one episode, and the
    expected visit counts T * d when a budget T is given.
    """
    d: np.ndarray
    expected_counts: np.ndarray = None
    T: int = None

    def state_marginal(self, h):
        """
        Distribution of the state at stage h (1-based).
        """
        return self.d[h - 1].sum(axis=-1)


def _readonly(*arrays):
    for array in arrays:
        array.setflags(write=False)


def _backup(m, k, V_next):
    """
    Q-values of stage k+1 (0-based k) given the values of the next stage.
    """
    Q = np.array(m.r[k], dtype=float)
    if k < m.H - 1:
        Q += m.p[k] @ V_next
    return Q


def evaluate_policy(m, pol):
    """
    Evaluate a Markov policy by backward recursion.

    Parameters
    ----------
    m : Mdp
        The MDP.
    pol : MarkovPolicy
        The policy, with matching dimensions.

    Returns
    -------
    ValueTable : V^pi, Q^pi and rho^pi.
    """
    pol.check_matches(m)

    V = np.zeros((m.H, m.S))
    Q = np.zeros((m.H, m.S, m.A))
    V_next = np.zeros(m.S)
    for k in range(m.H - 1, -1, -1):
        Q[k] = _backup(m, k, V_next)
        V[k] = np.sum(pol.probs[k] * Q[k], axis=-1)
        V_next = V[k]

    rho = float(m.mu @ V[0])
    _readonly(V, Q)
    return ValueTable(V=V, Q=Q, rho=rho)


def greedy_actions(Q, tol=TIE_TOL):
    """
    Greedy actions of a Q table over its last axis; ties within tol go to the
    lowest action index.
    """
    best = Q.max(axis=-1, keepdims=True)
    return np.argmax(Q >= best - tol, axis=-1)


def optimal_values(m):
    """
    Bellman-optimal values and a greedy deterministic policy.

    Parameters
    ----------
    m : Mdp
        A valid MDP.

    Returns
    -------
    ValueTable : V*, Q* and rho*.
    MarkovPolicy : The greedy policy, ties broken toward the lowest action.
    """
    V = np.zeros((m.H, m.S))
    Q = np.zeros((m.H, m.S, m.A))
    probs = np.zeros((m.H, m.S, m.A))
    V_next = np.zeros(m.S)
    for k in range(m.H - 1, -1, -1):
        Q[k] = _backup(m, k, V_next)
        actions = greedy_actions(Q[k])
        probs[k, np.arange(m.S), actions] = 1.0
        V[k] = Q[k].max(axis=-1)
        V_next = V[k]

    rho = float(m.mu @ V[0])
    _readonly(V, Q)
    logger.debug(f'rho* = {rho}')
    return ValueTable(V=V, Q=Q, rho=rho), MarkovPolicy(probs)


def occupancy(m, pol, T=None):
    """
    Exact occupancy measure of a Markov policy.

    d_1(s, a) = mu(s) pi(a|s,1) and
    d_{h+1}(s', a') = sum_{s,a} d_h(s, a) p_h(s'|s, a) pi(a'|s', h+1).

    Parameters
    ----------
    m : Mdp
        The MDP.
    pol : MarkovPolicy
        The policy, with matching dimensions.
    T : int | None
        Episode budget; when given, expected_counts = T * d.

    Returns
    -------
    OccupancyTable
    """
    pol.check_matches(m)

    d = np.zeros((m.H, m.S, m.A))
    x = np.array(m.mu, dtype=float)
    for k in range(m.H):
        d[k] = x[:, None] * pol.probs[k]
        if k < m.H - 1:
            x = np.einsum('sa,sat->t', d[k], m.p[k])

    counts = None
    if T is not None:
        if T < 0:
            logger.error(f'Episode budget must be nonnegative, got {T}.')
            raise ValueError
        counts = T * d
        _readonly(counts)
    _readonly(d)
    return OccupancyTable(d=d, expected_counts=counts, T=T)
