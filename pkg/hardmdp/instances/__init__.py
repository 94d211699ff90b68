"""
Hard MDP families: tree layouts, the stage-dependent and stationary tree
classes, and the small S=3 / S=4 classes.
"""

from .tree import (TreeShape, build_tree_shape, balanced_tree, full_tree,
                   relaxed_tree, assumption_depth, relaxed_depth_formula,
                   leaf_count_formula, tree_regime, REGIME_FULL,
                   REGIME_RELAXED, REGIME_CAP)
from .params import (FAMILIES, ArmSite, HardInstanceParams, ClassSpec,
                     canonical_family)
from .families import (HardInstance, build_instance, make_tree_instance,
                       make_s3_stationary, make_s4_stage, make_s4_bpi,
                       make_stationary_tree, enumerate_class, class_instances,
                       class_arms, arm_policy, bpi_class_gap, tree_shape_for,
                       WAIT_ACTION, LEAVE_ACTION)
