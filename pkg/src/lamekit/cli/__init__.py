"""
Command-line interface and the acceptance suite
"""

from .checks import run_checks
from .report import Assertion, RunReport
from .runner import main, run

__all__ = ["Assertion", "RunReport", "main", "run", "run_checks"]
