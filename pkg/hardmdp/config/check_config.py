"""
Experiment specs are JSON objects. Each kind has mandatory keys
(CRITICAL_VARS, with the accepted types) and optional keys with defaults
(OPTIONAL_VARS). The class selection is completed with the defaults of its
family.
"""
import numbers

from ..instances import FAMILIES, canonical_family
from .. import logger

SPEC_KINDS = ('regret-sweep', 'bpi-sweep', 'gen', 'kl')

_CLASS = dict
_INT = numbers.Integral
_REAL = numbers.Real

CRITICAL_VARS = {
    'regret-sweep': {'class': _CLASS, 'learner': (dict, str), 'T': _INT, 'n_seeds': _INT},
    'bpi-sweep': {'class': _CLASS, 'eps': _REAL, 'delta': _REAL, 'n_seeds': _INT},
    'gen': {'class': _CLASS},
    'kl': {'m0': str, 'm1': str, 'T': _INT},
}

OPTIONAL_VARS = {
    'regret-sweep': {'seed': 0, 'parallelism': None, 'out': None},
    'bpi-sweep': {'learner': {'kind': 'bpi-uniform'}, 'seed': 0, 'parallelism': None,
                  'out': None},
    'gen': {'out': 'instances'},
    'kl': {'policy': 'uniform', 'method': 'exact', 'n_reps': 100, 'seed': 0,
           'parallelism': None},

    # class defaults, per family
    'tree': {'eps': 0.0, 'relaxed': False},
    'tree-stationary': {'eps': 0.0, 'relaxed': False},
    's3-stationary': {'eps': 0.0},
    's4-stage': {'eps': 0.0},
    's4-bpi': {'eps': 0.0, 'ref_arm': [2, 0]},
}


def check_cfg_mandatory(cfg, critical_vars, key_var):
    """
    Check that the mandatory parameters are defined and of an accepted type.
    """
    for key, types in critical_vars[key_var].items():
        if key not in cfg:
            logger.error(f'{key} not defined in the {key_var} spec.')
            raise RuntimeError
        value = cfg[key]
        if isinstance(value, bool) or not isinstance(value, types):
            logger.error(f'{key}={value!r} has the wrong type in the {key_var} spec.')
            raise RuntimeError


def check_cfg_optional(cfg, optional_vars, key_var):
    """
    Fill in the optional parameters left undefined.
    """
    for key, val in optional_vars[key_var].items():
        if key not in cfg:
            cfg[key] = val
            logger.warning(f'Setting undefined parameter {key}={val}')


def check_cfg_selected(cfg, optional_vars, select):
    """
    Check the family selected by cfg[select] and complete its parameters.
    """
    param = cfg[select]
    if 'family' not in param:
        logger.error(f'{select}.family not defined in config.')
        raise RuntimeError
    try:
        family = canonical_family(param['family'])
    except ValueError:
        logger.error(f"{select}.family must be one of {', '.join(FAMILIES)}.")
        raise RuntimeError
    for key in ('A', 'H'):
        if key not in param:
            logger.error(f'{select}.{key} not defined in config.')
            raise RuntimeError
    for key, val in optional_vars[family].items():
        if key not in param:
            param[key] = val
            logger.warning(f'Updating internal parameter for family {family}: {key}={val}')


def check_config(cfg, kind):
    """
    Check an experiment spec and fill in its defaults.

    Parameters
    ----------
    cfg : dict
        The loaded spec; modified in place.
    kind : str
        regret-sweep | bpi-sweep | gen | kl.

    Returns
    -------
    dict : The completed spec.
    """
    if kind not in SPEC_KINDS:
        logger.error(f"Unknown spec kind '{kind}'. Supported: {', '.join(SPEC_KINDS)}.")
        raise ValueError
    if not isinstance(cfg, dict):
        logger.error(f'A {kind} spec must be a JSON object.')
        raise RuntimeError

    check_cfg_mandatory(cfg, CRITICAL_VARS, kind)
    check_cfg_optional(cfg, OPTIONAL_VARS, kind)
    if 'class' in cfg:
        check_cfg_selected(cfg, OPTIONAL_VARS, 'class')

    return cfg
