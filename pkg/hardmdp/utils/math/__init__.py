"""
Small statistics helpers shared by the harness and the checks.
"""

from .stats import mean_stderr, binomial_sigma, joint_sigma
