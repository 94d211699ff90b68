import math

import numpy as np


def mean_stderr(samples):
    """
    Sample mean and standard error of the mean.

    Parameters
    ----------
    samples : array-like
        1D samples, summed in their given order.

    Returns
    -------
    float : The mean.
    float : The standard error (0 for fewer than two samples).
    """
    x = np.asarray(samples, dtype=float)
    if x.size == 0:
        return float('nan'), float('nan')
    mean = float(np.mean(x))
    if x.size < 2:
        return mean, 0.0
    return mean, float(np.std(x, ddof=1) / math.sqrt(x.size))


def binomial_sigma(p, n):
    """
    Standard deviation of a binomial proportion with success rate p over n
    trials.
    """
    if n <= 0:
        return float('inf')
    return math.sqrt(p * (1.0 - p) / n)


def joint_sigma(*stderrs):
    """
    Combine independent standard errors.
    """
    return math.sqrt(sum(se ** 2 for se in stderrs))
