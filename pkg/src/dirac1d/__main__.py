"""Module entry point: python -m dirac1d ... mirrors the dirac1d script."""

import sys

from .cli import main

if __name__ == "__main__":
    sys.exit(main())
