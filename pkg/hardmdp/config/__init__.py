"""
Structure of the JSON experiment specs and their checking.
"""

from .check_config import (check_config, check_cfg_mandatory, check_cfg_optional,
                           check_cfg_selected, CRITICAL_VARS, OPTIONAL_VARS, SPEC_KINDS)
