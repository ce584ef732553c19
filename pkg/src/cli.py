"""
Command-line application.

Exit codes: 0 on success, 2 on usage errors and invalid input, 1 when a
computation limit is hit (enumeration or mining cap, graph too large for
the oracle, capacity overflow).
"""

import argparse
import logging
import sys
from typing import List, Optional

from .commands import bench, eds, metrics, mpds, nds, oracle
from .config import get_settings
from .errors import UdenseError

logger = logging.getLogger(__name__)

COMMANDS = (mpds, nds, oracle, eds, metrics, bench)

LOG_FORMAT = '%(asctime)s %(levelname)s %(name)s: %(message)s'


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='udense',
        description="Most probable and nucleus densest subgraphs of uncertain graphs",
    )
    subparsers = parser.add_subparsers(dest='command', required=True)
    for command in COMMANDS:
        command.register(subparsers)
    return parser


def _fail(message: str, code: int) -> int:
    logger.error(f"✗ {message}")
    print(f"error: {message}", file=sys.stderr)
    return code


def run(argv: Optional[List[str]] = None) -> int:
    """
    Parse ``argv`` and run the chosen subcommand.

    Args:
        argv: Arguments without the program name (defaults to sys.argv[1:])

    Returns:
        Process exit code
    """
    try:
        settings = get_settings()
    except ValueError as e:
        return _fail(f"invalid configuration: {e}", 2)
    logging.basicConfig(level=getattr(logging, settings.log_level, logging.INFO),
                        format=LOG_FORMAT, stream=sys.stderr)

    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return 0 if e.code in (0, None) else 2

    try:
        args.handler(args, settings)
    except (ValueError, OSError) as e:
        return _fail(str(e), 2)
    except UdenseError as e:
        return _fail(str(e), 1)
    return 0
