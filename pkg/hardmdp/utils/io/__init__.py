"""
Module containing functions for loading/saving JSON documents and CSV tables,
loading experiment specs and handling output directories.
"""

from .io_file_dir import get_file_list, make_dirs
from .load_config import load_config
from .json_io import load_json, save_json, dumps_json
from .csv_io import write_csv, format_csv
