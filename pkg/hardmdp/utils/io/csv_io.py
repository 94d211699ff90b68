import io
import csv
from pathlib import Path

from ... import logger


def format_csv(header, rows):
    """
    Render rows as CSV text with a fixed line terminator.

    Parameters
    ----------
    header : list of str
        The column names.
    rows : list of sequence
        The rows, in output order. Floats are written with repr precision.

    Returns
    -------
    str : The CSV text.
    """
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(header)
    for row in rows:
        if len(row) != len(header):
            logger.error(f'CSV row has {len(row)} fields, expected {len(header)}.')
            raise ValueError
        writer.writerow([_cell(v) for v in row])

    return buffer.getvalue()


def write_csv(path, header, rows):
    """
    Write rows to a CSV file.

    Parameters
    ----------
    path : str | Path
        The destination file.
    header : list of str
        The column names.
    rows : list of sequence
        The rows.
    """
    path = Path(path)
    with open(path, 'w', newline='') as f:
        f.write(format_csv(header, rows))
    logger.debug(f'Saved {path}')


def _cell(value):
    if value is None:
        return ''
    if isinstance(value, bool):
        return int(value)
    if isinstance(value, float):
        return repr(value)
    return value
