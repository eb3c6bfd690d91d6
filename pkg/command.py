"""Command utilities.

This module contains classes and functions related to sending command-line inputs to command functions
and handling their responses.
"""

from __future__ import annotations  # Python 3.14 feature for deferred annotations

import argparse
import functools
import json
import sys
import types
from collections.abc import Callable
from dataclasses import dataclass, field
from typing import Any

from loguru import logger

import common
import series
import term
from common import Mode


# ==========================
# COMMANDS & RESPONSES
# ==========================
# region
class UserCommand:
    """Class that stores the arguments of one command-line invocation together with the loaded config.

    Flags given on the command line win over config values, so commands should read settings through the
    getters here rather than from either source directly.
    """

    def __init__(self, args: argparse.Namespace, config: common.Config) -> None:
        self.args = args
        self.config = config
        self.response: CommandResponse | None = None

    def get_command_name(self) -> str | None:
        """Return name of the subcommand that was called, or None if no subcommand was called."""
        return getattr(self.args, "command", None)

    def get_arg(self, name: str) -> Any:
        return getattr(self.args, name, None)

    def get_term_text(self) -> str | None:
        text = self.get_arg("term")
        if text is None or not text.strip():
            return None
        return text

    def parse_term(self, alphabet_size: int | None = None) -> term.LoopTerm:
        text = self.get_term_text()
        if text is None:
            error_msg = "This command needs a TERM argument"
            raise UsageError(error_msg)
        return term.parse(text, alphabet_size)

    def get_degree(self) -> int:
        return self._flag_or_config("degree", self.config.main.degree)

    def get_leaves(self) -> int:
        return self._flag_or_config("leaves", self.config.main.leaves)

    def get_grid(self) -> int:
        return self._flag_or_config("grid", self.config.main.grid)

    def get_seed(self) -> int:
        return self._flag_or_config("seed", self.config.main.seed)

    def get_mode(self) -> Mode:
        if self.is_explicit("commutative"):
            commutative = bool(self.get_arg("commutative"))
        else:
            commutative = self.config.main.commutative.value
        return Mode.from_flag(commutative=commutative)

    def wants_json(self) -> bool:
        return bool(self.get_arg("json"))

    def is_explicit(self, name: str) -> bool:
        """Return whether a flag was given on the command line rather than left at its default."""
        return self.get_arg(name) is not None

    def _flag_or_config(self, name: str, item: common.ConfigItem[int]) -> int:
        value = self.get_arg(name)
        if value is None:
            return item.value

        try:
            item.validate_new_value(value)
        except common.ConfigError as e:
            error_msg = f"--{name}: {e.message}"
            raise UsageError(error_msg) from e

        return value

    async def get_and_send_response(self, command_function: CommandAnn) -> int:
        """Run the command, write its response to stdout and return the process exit code."""
        try:
            self.response = await command_function(self)

        except (UsageError, term.TermSyntaxError, term.GeneratorRangeError, series.SeriesMismatchError) as e:
            logger.error(f"Command '{self.get_command_name()}' rejected its input ({type(e).__name__}: {e})")
            self.response = ErrorResponse(text=f"error: {e}", exit_code=common.EXIT_USAGE)

        except common.ResourceCapError as e:
            logger.error(f"Command '{self.get_command_name()}' hit a resource cap ({e.message})")
            self.response = ErrorResponse(text=f"error: {e.message}", exit_code=common.EXIT_RESOURCE_CAP)

        self.send_response(self.response)
        return self.response.exit_code

    def send_response(self, response: CommandResponse) -> None:
        if isinstance(response, ErrorResponse):
            sys.stderr.write(response.text + "\n")
            return

        if self.wants_json():
            payload = response.payload if response.payload is not None else {"result": response.text}
            sys.stdout.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
        else:
            sys.stdout.write(response.text + "\n")


@dataclass(kw_only=True)
class CommandResponse:
    """Class representing the output of one command."""

    text: str
    payload: Any = field(default=None)  # JSON-compatible form of the result, used with --json
    exit_code: int = field(default=common.EXIT_OK)


@dataclass(kw_only=True)
class ErrorResponse(CommandResponse):
    """Subclass of CommandResponse for input errors; the text goes to stderr instead of stdout."""

    exit_code: int = field(default=common.EXIT_USAGE)
# endregion


# ==========================
# EXCEPTION TYPES
# ==========================
# region
class UsageError(ValueError):
    """Exception type to be raised if the command-line arguments cannot be used (missing TERM, bad flag value)."""

    def __init__(self, message: str) -> None:
        super().__init__(message)
        self.message = message
# endregion


# ==========================
# TYPE ANNOTATIONS
# ==========================
# region
CommandAnn = Callable[[UserCommand], types.CoroutineType[Any, Any, CommandResponse]]
# endregion


# ==========================
# WRAPPERS
# ==========================
# region
def requireterm(function: CommandAnn) -> CommandAnn:
    """Wrap function with @requireterm decorator to reject calls without a TERM argument."""
    @functools.wraps(function)
    async def term_wrapper(user_command: UserCommand) -> CommandResponse:
        if user_command.get_term_text() is None:
            error_msg = f"'{user_command.get_command_name()}' needs a TERM argument"
            raise UsageError(error_msg)

        return await function(user_command)

    term_wrapper.requireterm = True  # pyright: ignore[reportAttributeAccessIssue]
    return term_wrapper
# endregion
