import shutil
from pathlib import Path

from ... import logger


def get_file_list(path, fullpath=True, suffix=None, prefix=None):
    """
    Sorted list of the visible files in a directory.

    Parameters
    ----------
    path : str | Path
    fullpath : bool
        Return full paths instead of bare names.
    suffix, prefix : str | None
        Keep only names ending / starting with these.

    Returns
    -------
    list of str
    """
    path = Path(path)
    if not path.is_dir():
        logger.error(f"The directory '{path}' does not exist.")
        raise IOError

    names = sorted(p.name for p in path.iterdir()
                   if p.is_file() and not p.name.startswith('.'))
    if suffix is not None:
        names = [n for n in names if n.endswith(suffix)]
    if prefix is not None:
        names = [n for n in names if n.startswith(prefix)]
    return [str(path / n) for n in names] if fullpath else names


def make_dirs(dirname, delete=False):
    """
    Create an output directory and its parents if needed.

    Parameters
    ----------
    dirname : str | Path
    delete : bool
        Empty an existing directory first.
    """
    dirname = Path(dirname)
    if delete and dirname.exists():
        try:
            shutil.rmtree(dirname)
        except OSError:
            logger.warning(f"Could not fully remove '{dirname}'. Continuing.")
    dirname.mkdir(parents=True, exist_ok=True)
