"""
Reference learners and the experiment driver: regret sweeps over a hard
class, the worst-case instance, the averaging check and BPI sweeps.
"""

from .learners import (LearnerSpec, LEARNER_KINDS, builtin_learners, make_learner,
                       UniformLearner, FixedArmLearner, OptimisticQLearner,
                       BpiUniformLearner, good_arm_count, BPI_CAP)
from .sweep import (SweepRecord, SweepResult, AveragingReport, run_regret_sweep,
                    adversarial_instance, averaging_inequality_check, arm_histogram,
                    optimal_class_eps,
                    REGRET_CSV_COLUMNS, REGRET_FAMILIES)
from .bpi import (BpiRecord, BpiRunResult, run_bpi_sweep, BPI_CSV_COLUMNS,
                  BPI_FAMILIES)
