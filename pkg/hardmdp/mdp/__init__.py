"""
Exact tabular episodic MDPs: containers, validation, planning, occupancy
measures and seeded simulation.
"""

from .mdp import (Mdp, MarkovPolicy, ValidationReport, validate,
                  uniform_policy, deterministic_policy,
                  mdp_to_dict, mdp_from_dict, policy_to_dict, policy_from_dict)
from .planning import (ValueTable, OccupancyTable, evaluate_policy,
                       optimal_values, occupancy, greedy_actions)
from .simulation import (Trajectory, EpisodeBatch, make_generator,
                         simulate_episode, simulate_batch, trajectory_log_prob,
                         episode_log_prob, inverse_cdf)
from .agent import Agent, MarkovAgent, run_episodes
