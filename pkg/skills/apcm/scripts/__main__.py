"""Entry point for ``python -m skills.apcm.scripts``."""

import sys

try:
    from .cli import main
except ImportError:
    from cli import main


if __name__ == "__main__":
    sys.exit(main())
