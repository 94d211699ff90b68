"""
Timer used to report the duration of sweeps and checks.
"""

from .timer import Timer
