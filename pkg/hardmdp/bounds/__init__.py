"""
Closed-form regret, best-policy-identification and PAC-MDP lower bounds with
their hypotheses, and the intermediate class-level quantities.
"""

from .report import (BoundReport, Precondition, THEOREM_IDS, REGRET_THEOREMS,
                     BPI_THEOREMS)
from .bounds import (regret_bound, bpi_bound, evaluate_bound, optimal_epsilon,
                     regret_identity, regret_class_bound, regret_class_optimum,
                     bpi_class_bound, assumption_check, AssumptionReport,
                     class_size, gap_stages)
