"""
CLI subcommand modules for fourier-knots.

Each module exports a ``register(subparsers, parents)`` function that adds
its subparser and binds ``handler=run``. Handlers take the parsed
arguments plus the resolved RunConfig and return an exit status.
"""

import argparse
from typing import Dict

from . import approximate, claim_suite, diagram, invariants, sample, svg

COMMAND_MODULES = (sample, invariants, svg, diagram, approximate, claim_suite)


def register_all(subparsers: argparse._SubParsersAction, parents: Dict[str, argparse.ArgumentParser]) -> None:
    for module in COMMAND_MODULES:
        module.register(subparsers, parents)
