"""
Relative entropies, the kl inequalities used by the lower-bound arguments,
and the trajectory-KL decomposition with its exact, brute-force and Monte
Carlo evaluations.
"""

from .kl import (kl_bernoulli, kl_categorical, pinsker_check, kl_epsilon_bound,
                 kl_delta_bound, kl_delta_one_minus_delta)
from .trajectory_kl import (KlEntry, KlBreakdown, trajectory_kl_exact,
                            trajectory_kl_brute_force, trajectory_kl_monte_carlo,
                            kl_contraction_check, enumerate_episodes,
                            enumeration_size, markov_agent_factory,
                            VisitFraction, MajorityVisit, ContractionCheck,
                            MAX_TERMS)
