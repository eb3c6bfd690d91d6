"""Runway for a loopmagnus run.

Sets up loguru sinks, creates the `Data` folder tree and looks for registry mistakes
(a `*_command` missing from COMMAND_LIST, a `*_suite` missing from SUITE_LIST).
Everything here runs from `main.prepare_runway` before the command itself.
"""

import logging
import sys
import types
from collections.abc import Generator, Iterable
from pathlib import Path
from typing import Any

from loguru import logger

import command_list
import common
import verify

# Created on startup when missing
directories = {
    common.PATH_DATA_FOLDER,
    common.PATH_LOGGING_FOLDER,
    common.PATH_REPORT_FOLDER,
}

text_files = {
    common.PATH_LOGGING_FILE,
}

# Known paths that runway never creates itself
do_not_create: set[Path] = {
    common.PATH_PYPROJECT_TOML,
    common.PATH_CONFIG_FILE,  # Config.load() writes this one
}

LOG_FORMAT = ("{message} <level>[{level}]</level> <green>{time:YYYY-MM-DD HH:mm:ss}</green> "
              "<cyan>{name}:{function}:{line}</cyan>")


class InterceptHandler(logging.Handler):
    """Forward stdlib logging records (sympy, asyncio) to loguru."""

    def emit(self, record: logging.LogRecord) -> None:
        try:
            level: str | int = logger.level(record.levelname).name
        except ValueError:
            level = record.levelno

        logger.opt(depth=6, exception=record.exc_info).log(level, record.getMessage())


def _log_unhandled(exc_type: type[BaseException], exc_value: BaseException,
                   exc_traceback: types.TracebackType | None) -> None:
    logger.opt(exception=(exc_type, exc_value, exc_traceback)).error("Unhandled exception")


def init_logging(*, verbose: bool = False) -> None:
    # stdout is reserved for command output, so the console sink is stderr
    logger.configure(handlers=[
        {"sink": sys.stderr, "level": "DEBUG" if verbose else "WARNING", "format": LOG_FORMAT,
         "backtrace": False, "diagnose": False},
        {"sink": common.PATH_LOGGING_FILE, "level": "WARNING", "format": LOG_FORMAT,
         "backtrace": False, "diagnose": False},
    ])

    logging.root.handlers = [InterceptHandler()]
    logging.root.setLevel(logging.INFO)
    logging.getLogger("sympy").setLevel(logging.WARNING)

    sys.excepthook = _log_unhandled


def _unregistered(module: types.ModuleType, registry: Iterable[tuple[str, Any]], suffix: str,
                  registry_name: str) -> Generator[str]:
    registered = [function for _, function in registry]
    for obj in vars(module).values():
        name = getattr(obj, "__name__", "")
        if callable(obj) and name.endswith(suffix) and obj not in registered:
            yield f"Function '{name}' is not registered in {registry_name}"


def check_unregistered_commands() -> Generator[str]:
    yield from _unregistered(command_list, command_list.COMMAND_LIST, "_command", "COMMAND_LIST")


def check_unregistered_suites() -> Generator[str]:
    yield from _unregistered(verify, verify.SUITE_LIST, "_suite", "SUITE_LIST")


def check_for_untracked_paths() -> Generator[str]:
    known = directories | text_files | do_not_create
    for obj in vars(common).values():
        if isinstance(obj, Path) and obj not in known:
            yield f"Path '{obj}' is not covered by runway"


def create_project_structure() -> Generator[str]:
    for folder in sorted(directories):
        if not folder.exists():
            folder.mkdir(parents=True, exist_ok=True)
            yield f"Created missing directory {folder}"

    for file in sorted(text_files):
        if not file.exists():
            file.touch(exist_ok=True)
            yield f"Created missing file {file}"
