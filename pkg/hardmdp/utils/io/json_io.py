from pathlib import Path

import simplejson as json

from ... import logger


def dumps_json(obj):
    """
    Serialize to a stable JSON string (sorted keys, 2-space indent).

    Parameters
    ----------
    obj : dict | list
        The JSON-compatible object.

    Returns
    -------
    str : The JSON text, terminated by a newline.
    """
    return json.dumps(obj, sort_keys=True, indent=2, ignore_nan=False) + '\n'


def save_json(obj, path):
    """
    Write a JSON-compatible object to a file.

    Parameters
    ----------
    obj : dict | list
        The object to save.
    path : str | Path
        The destination file.
    """
    path = Path(path)
    with open(path, 'w') as f:
        f.write(dumps_json(obj))
    logger.debug(f'Saved {path}')


def load_json(path):
    """
    Read a JSON file.

    Parameters
    ----------
    path : str | Path
        The file to read.

    Returns
    -------
    dict | list : The parsed content.
    """
    path = Path(path)
    if not path.exists():
        logger.error(f"The file '{path}' does not exist.")
        raise IOError

    with open(path, 'r') as f:
        try:
            return json.load(f)
        except json.JSONDecodeError as err:
            logger.error(f"The file '{path}' is not valid JSON: {err}")
            raise ValueError
