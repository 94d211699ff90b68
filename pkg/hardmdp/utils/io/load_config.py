from pathlib import Path

import simplejson as json

from ... import logger


def load_config(cfg_file):
    """
    Load an experiment spec written as a JSON document.

    Parameters
    ----------
    cfg_file : str | Path
        The path to the spec file to load.

    Returns
    -------
    dict : The parsed spec.
    """
    cfg_file = Path(cfg_file)
    if not cfg_file.is_absolute():
        cfg_file = cfg_file.absolute()
    if not cfg_file.exists():
        logger.error(f"Spec file '{cfg_file}' not found.")
        raise IOError

    with open(cfg_file, 'r') as f:
        try:
            cfg = json.load(f)
        except json.JSONDecodeError as err:
            logger.error(f"Spec file '{cfg_file}' is not valid JSON: {err}")
            raise ValueError

    if not isinstance(cfg, (dict, list)):
        logger.error(f"Spec file '{cfg_file}' must hold an object or array.")
        raise ValueError

    return cfg
