"""
hardmdp builds the hard episodic MDP families used in minimax lower bounds,
computes exact values, occupancies and trajectory KL divergences on them,
evaluates the closed-form bounds, and runs learners against the classes.
"""
import logging

from .logger import init_logger

__version__ = '0.1.0'

# package logger, level from HARDMDP_LOG
logger = logging.getLogger('hardmdp')
logger.propagate = False
init_logger(logger)
