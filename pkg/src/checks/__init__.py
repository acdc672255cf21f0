from .registry import CHECKS, get_check, run_checks
