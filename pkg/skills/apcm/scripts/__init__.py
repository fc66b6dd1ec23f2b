"""apcm - adaptive possibilistic c-means toolkit

Command-line harness around the clustering library in ``skills/apcm/libs``:
FCM, PCM and adaptive PCM runs, parameter sweeps, cost landscapes and
numerical verification suites.
"""

__version__ = "1.0.0"

from .config import RunConfig, UsageError
from .runner import ExperimentRunner
from .verify import VerifyResult, run_suites

# CLI entry point
from .cli import main

__all__ = [
    "RunConfig",
    "UsageError",
    "ExperimentRunner",
    "VerifyResult",
    "run_suites",
    "main",
]
