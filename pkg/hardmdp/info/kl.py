"""
Bernoulli and categorical relative entropies (natural log) and the scalar
inequalities the change-of-distribution arguments rely on.
"""
import math

import numpy as np
from scipy.special import rel_entr

from .. import logger


def _check_unit(*values):
    for value in values:
        if not 0.0 <= value <= 1.0:
            logger.error(f'Expected a value in [0, 1], got {value}.')
            raise ValueError


def kl_bernoulli(p, q):
    """
    kl(p, q) = KL(B(p), B(q)) in nats, with 0 log(0/.) = 0.

    Returns +inf when q is 0 or 1 and p differs.
    """
    _check_unit(p, q)
    return float(rel_entr(p, q) + rel_entr(1.0 - p, 1.0 - q))


def kl_categorical(P, Q, tol=1e-9):
    """
    KL(P, Q) = sum_i P_i log(P_i / Q_i) for two probability vectors.

    Parameters
    ----------
    P, Q : array-like
        Probability vectors of equal length.
    tol : float
        Tolerance on the normalization of the inputs.

    Returns
    -------
    float : +inf if P charges an outcome Q does not.
    """
    P = np.asarray(P, dtype=float)
    Q = np.asarray(Q, dtype=float)
    if P.shape != Q.shape or P.ndim != 1:
        logger.error(f'KL needs two vectors of equal length, got {P.shape} and {Q.shape}.')
        raise ValueError
    for vector in (P, Q):
        if np.any(vector < 0) or abs(vector.sum() - 1.0) > tol:
            logger.error(f'Not a probability vector: {vector}.')
            raise ValueError
    return float(np.sum(rel_entr(P, Q)))


def pinsker_check(p, q):
    """
    Pinsker's inequality for Bernoulli laws: (p - q)^2 <= kl(p, q) / 2.

    Returns
    -------
    float : (p - q)^2
    float : kl(p, q) / 2
    bool : whether the inequality holds
    """
    _check_unit(p, q)
    lhs = (p - q) ** 2
    rhs = kl_bernoulli(p, q) / 2.0
    return lhs, rhs, bool(lhs <= rhs)


def kl_epsilon_bound(eps):
    """
    Both sides of kl(1/2, 1/2 + eps) <= 4 eps^2, valid for eps in [0, 1/4].
    """
    if not 0.0 <= eps <= 0.25:
        logger.error(f'The bound kl(1/2, 1/2+eps) <= 4 eps^2 is only claimed for '
                     f'eps in [0, 1/4], got {eps}.')
        raise ValueError
    return kl_bernoulli(0.5, 0.5 + eps), 4.0 * eps ** 2


def kl_delta_bound(p, q):
    """
    Both sides of kl(p, q) >= (1 - p) log(1 / (1 - q)) - log 2, for q < 1.
    """
    _check_unit(p, q)
    if q >= 1.0:
        logger.error('The lower bound needs q < 1.')
        raise ValueError
    return kl_bernoulli(p, q), (1.0 - p) * math.log(1.0 / (1.0 - q)) - math.log(2.0)


def kl_delta_one_minus_delta(delta):
    """
    Both sides of kl(delta, 1 - delta) >= log(1 / (2.4 delta)).

    Returns
    -------
    float : kl(delta, 1 - delta)
    float : log(1 / (2.4 delta))
    bool : whether the inequality holds
    """
    if not 0.0 < delta < 1.0:
        logger.error(f'delta must lie in (0, 1), got {delta}.')
        raise ValueError
    lhs = kl_bernoulli(delta, 1.0 - delta)
    rhs = math.log(1.0 / (2.4 * delta))
    return lhs, rhs, bool(lhs >= rhs)
