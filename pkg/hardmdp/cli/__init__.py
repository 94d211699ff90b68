"""
Command-line front end: `hmdp <command>`.
"""

from .main import main, build_parser, EXIT_OK, EXIT_DOMAIN, EXIT_USAGE
