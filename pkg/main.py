"""Main module, do not import. Run this module to use the command-line front end."""

import argparse
import asyncio
import sys
from collections.abc import Callable, Sequence

from loguru import logger

import command
import command_list
import common
import loops
import runway
import verify

COMMAND_HELP = {
    "reduce": "print the reduced form of a free-loop word",
    "magnus": "print the (modified) Magnus series of a word",
    "dimension": "report the dimension degree of a word and its dimension-subloop membership",
    "scan": "look for Magnus collisions among all reduced words up to a leaf bound",
    "loop-eval": "evaluate an expression in one of the integer-pair loops",
    "higman-delta": "print (alpha(w), psi(w)) for the (L,A) construction over a free abelian group",
    "verify": "run named verification suites",
}


def _add_term(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("term", nargs="?", help="word such as 'x1\\(x1*x2)'")


def _add_magnus_flags(parser: argparse.ArgumentParser) -> None:
    _add_term(parser)
    parser.add_argument("--base", choices=["exp", "none"], default="none",
                        help="use the right-normed exponential base (modified map) or 1 + X_i (classical map)")


def _add_dimension_flags(parser: argparse.ArgumentParser) -> None:
    _add_magnus_flags(parser)
    parser.add_argument("--n", type=int, default=None, help="dimension subloop index to test")


def _add_scan_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--generators", type=int, default=None, help="alphabet size (default 2)")


def _add_loop_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("term", nargs="?", help="expression such as '[(1,0),(2,0)]@(3,0)'")
    parser.add_argument("--loop", choices=sorted(loops.PAIR_LOOPS), default=loops.IntPairCommLoop.name)


def _add_delta_flags(parser: argparse.ArgumentParser) -> None:
    _add_term(parser)
    parser.add_argument("--target", default=None, help="target loop L, currently abelian:n")


def _add_verify_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--suite", choices=verify.suite_names(), default=None)
    group.add_argument("--all", action="store_true", help="run every suite")
    group.add_argument("--list", action="store_true", help="print the suite names")
    parser.add_argument("--save", action="store_true", help="also write each report to Data/reports/<suite>.json")


EXTRA_FLAGS: dict[str, Callable[[argparse.ArgumentParser], None]] = {
    "reduce": _add_term,
    "magnus": _add_magnus_flags,
    "dimension": _add_dimension_flags,
    "scan": _add_scan_flags,
    "loop-eval": _add_loop_flags,
    "higman-delta": _add_delta_flags,
    "verify": _add_verify_flags,
}


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--degree", type=int, default=None, help="truncation degree N")
    shared.add_argument("--commutative", action=argparse.BooleanOptionalAction, default=None,
                        help="use the free commutative loop (--no-commutative overrides settings.toml)")
    shared.add_argument("--leaves", type=int, default=None, help="leaf bound for word enumeration")
    shared.add_argument("--grid", type=int, default=None, help="half-width of the integer grid")
    shared.add_argument("--seed", type=int, default=None, help="seed for randomized checks")
    shared.add_argument("--json", action="store_true", help="print JSON instead of text")
    shared.add_argument("--verbose", action="store_true", help="log debug output to stderr")

    parser = argparse.ArgumentParser(prog="loopmagnus",
                                     description="Free loops, Magnus maps and the Higman construction")
    subparsers = parser.add_subparsers(dest="command", required=True)

    for name, _ in command_list.COMMAND_LIST:
        subparser = subparsers.add_parser(name, parents=[shared], help=COMMAND_HELP.get(name))
        EXTRA_FLAGS[name](subparser)

    return parser


async def prepare_runway(*, verbose: bool) -> common.Config:
    # Initialize logging
    runway.init_logging(verbose=verbose)
    project_info = await common.get_project_info()
    logger.debug(f"Loaded {project_info['name']} {project_info.get('version', '')}, "
                 f"logging to {common.PATH_LOGGING_FILE}")

    # Make sure all files and folders exist that this script needs
    for info in runway.create_project_structure():
        logger.debug(info)

    config = await common.Config.load()
    common.apply_cap_overrides(max_terms=config.limits.maxterms.value, max_words=config.limits.maxwords.value)

    if config.main.startupchecks.value:
        for warning in runway.check_unregistered_commands():
            logger.warning(warning)

        for warning in runway.check_unregistered_suites():
            logger.warning(warning)

        # For debug purposes, this should never happen in production
        for warning in runway.check_for_untracked_paths():
            logger.warning(warning)

        # For debug purposes, this should never happen in production
        async for warning in config.verify_settings():
            logger.warning(warning)

    return config


async def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    config = await prepare_runway(verbose=args.verbose)

    user_command = command.UserCommand(args, config)
    function = dict(command_list.COMMAND_LIST)[args.command]
    return await user_command.get_and_send_response(function)


def run(argv: Sequence[str] | None = None) -> int:
    """Run one command and return its exit code; argparse usage errors give exit code 2."""
    try:
        return asyncio.run(main(argv))
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else common.EXIT_USAGE


if __name__ == "__main__":
    try:
        sys.exit(run())
    except KeyboardInterrupt:
        sys.exit(130)
