"""
Process pool helper running independent jobs and returning results in
submission order.
"""

from .pool import run_jobs, get_n_jobs
