#!/usr/bin/env python3
"""
Entry point of the udense command line.
"""

import sys

from src.cli import run

if __name__ == "__main__":
    sys.exit(run())
