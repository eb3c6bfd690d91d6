"""Common utilities.

This module contains constants, classes, and functions used throughout the rest of this project.
This includes important file paths, configuration, resource caps, and file IO functions.
"""

from __future__ import annotations  # Python 3.14 feature for deferred annotations

import contextlib
import enum
import functools
import json
import os
import tomllib
from collections.abc import AsyncGenerator
from pathlib import Path
from typing import Any, Never

import aiofiles
import aiofiles.os
import tomli_w
from loguru import logger

# Every other module imports this one, so it imports nothing internal

# ==========================
# CONSTANTS
# ==========================
# region
# DIRECTORIES
PATH_DATA_FOLDER = Path("Data")
PATH_LOGGING_FOLDER = PATH_DATA_FOLDER / "logging"
PATH_REPORT_FOLDER = PATH_DATA_FOLDER / "reports"

# CORE FILES
PATH_PYPROJECT_TOML = Path("pyproject.toml")
PATH_CONFIG_FILE = PATH_DATA_FOLDER / "settings.toml"
PATH_LOGGING_FILE = PATH_LOGGING_FOLDER / "log.txt"

# ENVIRONMENT OVERRIDES
ENV_MAX_TERMS = "LOOPMAGNUS_MAX_TERMS"
ENV_MAX_WORDS = "LOOPMAGNUS_MAX_WORDS"

DEFAULT_MAX_TERMS = 2_000_000
DEFAULT_MAX_WORDS = 500_000
DEFAULT_SEED = 20160101

# Exit codes returned by main.run()
EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_RESOURCE_CAP = 3
# endregion


# ==========================
# SHARED TYPES
# ==========================
# region
class Mode(enum.Enum):
    """Whether words and series live in the free loop or the free commutative loop."""

    NONCOMMUTATIVE = "noncommutative"
    COMMUTATIVE = "commutative"

    @property
    def is_commutative(self) -> bool:
        return self is Mode.COMMUTATIVE

    @classmethod
    def from_flag(cls, *, commutative: bool) -> Mode:
        return cls.COMMUTATIVE if commutative else cls.NONCOMMUTATIVE


class ResourceCapError(RuntimeError):
    """Raised when a series or a word enumeration grows past its configured cap."""

    def __init__(self, message: str) -> None:
        super().__init__(message)
        self.message = message


def _read_cap(env_name: str, default: int) -> int:
    raw_value = os.environ.get(env_name)
    if raw_value is None:
        return default

    try:
        cap = int(raw_value)
    except ValueError:
        logger.warning(f"Ignoring {env_name}={raw_value!r}, expected an integer")
        return default

    if cap < 1:
        logger.warning(f"Ignoring {env_name}={cap}, cap must be positive")
        return default

    return cap


@functools.cache
def max_series_terms() -> int:
    """Maximum number of stored terms in any single truncated series."""
    return _read_cap(ENV_MAX_TERMS, DEFAULT_MAX_TERMS)


@functools.cache
def max_enumerated_words() -> int:
    """Maximum number of words a single enumeration may produce."""
    return _read_cap(ENV_MAX_WORDS, DEFAULT_MAX_WORDS)


def apply_cap_overrides(*, max_terms: int | None = None, max_words: int | None = None) -> None:
    """Set the caps from config values, unless the environment already overrides them."""
    if max_terms is not None and ENV_MAX_TERMS not in os.environ:
        os.environ[ENV_MAX_TERMS] = str(max_terms)
        max_series_terms.cache_clear()

    if max_words is not None and ENV_MAX_WORDS not in os.environ:
        os.environ[ENV_MAX_WORDS] = str(max_words)
        max_enumerated_words.cache_clear()
# endregion


# ==========================
# SETTINGS MANAGEMENT
# ==========================
# region
class ConfigError(Exception):
    """Error to be raised if loading a setting fails due to invalid values (e.g. expected int, got string)."""

    def __init__(self, message: str) -> None:
        super().__init__(message)
        self.message = message


class Config:
    """Settings every command falls back to, in a `main` and a `limits` group.

    Build one with `await Config.load()`, or with `Config.defaults()` when nothing should touch the disk.
    """

    main: ConfigMain
    limits: ConfigLimits

    def __init__(self, _: Never) -> None:
        error_msg = "Use `await Config.load()` instead of creating Config directly."
        raise RuntimeError(error_msg)

    @classmethod
    def defaults(cls) -> Config:
        """Create a Config object holding only default values, without touching the disk."""
        self = object.__new__(cls)
        self.main = ConfigMain()
        self.limits = ConfigLimits()
        return self

    @classmethod
    async def load(cls) -> Config:
        """Read Data/settings.toml over the defaults, writing the defaults out if the file is missing."""
        self = cls.defaults()
        loaded = await try_read_toml(PATH_CONFIG_FILE, {})

        if not loaded:
            logger.info(f"No settings found at {PATH_CONFIG_FILE}, writing default settings")
            await self.save_config()
            return self

        for group_name, group in vars(self).items():
            loaded_group = loaded.get(group_name, {})
            for name, item in vars(group).items():
                if name not in loaded_group:
                    continue

                try:
                    item.validate_new_value(loaded_group[name])
                    item.value = loaded_group[name]
                except ConfigError as e:
                    logger.error(f"Keeping default for '{name}': {e.message}")

        return self

    async def save_config(self) -> None:
        settings = {group_name: {name: item.value for name, item in vars(group).items()}
                    for group_name, group in vars(self).items()}
        await write_toml_to_file(PATH_CONFIG_FILE, settings)

    async def verify_settings(self) -> AsyncGenerator[str]:
        """Yield a description of every structural problem in the settings classes."""
        seen: dict[str, str] = {}
        for group_name, group in vars(self).items():
            for name, item in vars(group).items():
                if name in seen:
                    yield f"Setting '{name}' appears in both '{seen[name]}' and '{group_name}'"
                else:
                    seen[name] = group_name

                if name != item.name:
                    yield f"Setting '{name}' is registered under the name '{item.name}'"


class ConfigItem[T]:
    """One named setting: default, current value and, for ints, an inclusive valid range."""

    def __init__(self, name: str,
                 *, default_value: T, description: str, valid_range: tuple[int, int] | None = None) -> None:
        self.name = name
        self.value = default_value
        self.description = description
        self.item_type = type(default_value)
        self.default_value = default_value
        self.valid_range = valid_range

        if self.item_type not in {int, str, bool}:
            error_msg = f"Only int, str, bool are accepted setting types (got {self.item_type.__name__})"
            raise ConfigError(error_msg)

        if self.valid_range is not None:
            if self.item_type is not int:
                error_msg = "valid_range != None is only valid for ints."
                raise ConfigError(error_msg)

            if self.valid_range[0] > self.valid_range[1]:
                error_msg = "Second item of valid_range has to be equal or larger than the first"
                raise ConfigError(error_msg)

        elif self.item_type is int:
            error_msg = "valid_range cannot be None if item is int"
            raise ConfigError(error_msg)

    def __bool__(self) -> bool:
        if self.item_type is bool:
            return bool(self.value)

        error_msg = f"Use ConfigItem.value to access {self.name}'s value"
        raise RuntimeError(error_msg)

    def __repr__(self) -> str:
        return str(self.value)

    def validate_new_value(self, new_value: T) -> None:
        # bool is a subclass of int, so it has to be excluded explicitly
        if not isinstance(new_value, self.item_type) or (self.item_type is int and isinstance(new_value, bool)):
            error_msg = f"New value for setting '{self.name}' has to be of type {self.item_type.__name__}"
            raise ConfigError(error_msg)

        if self.valid_range is not None and isinstance(new_value, int):
            v_min, v_max = self.valid_range

            if not (v_min <= new_value <= v_max):
                error_msg = f"New value for setting '{self.name}' is outside valid range of {v_min} to {v_max}"
                raise ConfigError(error_msg)


class ConfigList:
    """ABC for ConfigMain, ConfigLimits."""


class ConfigMain(ConfigList):
    """Config class for the defaults every command falls back to."""

    def __init__(self) -> None:
        self.degree = ConfigItem("degree", default_value=6, valid_range=(1, 12),
            description="Truncation degree N for series computations when --degree is not given")

        self.leaves = ConfigItem("leaves", default_value=4, valid_range=(0, 6),
            description="Leaf bound for word enumeration when --leaves is not given")

        self.grid = ConfigItem("grid", default_value=5, valid_range=(1, 50),
            description="Half-width B of the integer box [-B, B] used by loop grid checks")

        self.seed = ConfigItem("seed", default_value=DEFAULT_SEED, valid_range=(0, 2**32 - 1),
            description="Seed for randomized property checks")

        self.commutative = ConfigItem("commutative", default_value=False,
            description="Whether commands default to the free commutative loop")

        self.startupchecks = ConfigItem("startupchecks", default_value=True,
            description="Whether settings are checked for structural problems at startup")


class ConfigLimits(ConfigList):
    """Config class for resource caps and sample sizes."""

    def __init__(self) -> None:
        self.maxterms = ConfigItem("maxterms", default_value=DEFAULT_MAX_TERMS, valid_range=(1, 10**9),
            description=f"Maximum stored terms in a single series (overridden by {ENV_MAX_TERMS})")

        self.maxwords = ConfigItem("maxwords", default_value=DEFAULT_MAX_WORDS, valid_range=(1, 10**9),
            description=f"Maximum number of words per enumeration (overridden by {ENV_MAX_WORDS})")

        self.samples = ConfigItem("samples", default_value=1000, valid_range=(1, 10**6),
            description="Number of random samples drawn by loop axiom checks")
# endregion


# ==========================
# FILE IO
# ==========================
# region
async def get_project_info() -> dict[str, str]:
    loaded_data = await try_read_toml(PATH_PYPROJECT_TOML, {'project': {'name': 'loopmagnus'}})
    return {key: str(value) for key, value in loaded_data['project'].items()}


async def try_read_toml(path: str | Path, default: dict[str, Any]) -> dict[str, Any]:
    """Return the TOML document at path as a dict, or default when it is missing, empty or malformed."""
    try:
        async with aiofiles.open(path, encoding='utf-8') as f:
            data = tomllib.loads(await f.read())
            return data or default
    except FileNotFoundError:
        logger.debug(f"Tried to open file at {path}, but file did not exist")
    except tomllib.TOMLDecodeError:
        logger.error(f"Tried to open file at {path}, but failed to decode toml")
    except OSError:
        logger.error(f"Tried to open file at {path}, but encountered an error")

    return default


async def write_json_to_file(path: str | Path, data: Any) -> None:
    with contextlib.suppress(FileExistsError):
        await aiofiles.os.makedirs(Path(path).parent, exist_ok=True)

    async with aiofiles.open(path, mode='w', encoding='utf-8') as f:
        content = json.dumps(data, indent=4, sort_keys=True)
        await f.write(content)


async def write_toml_to_file(path: str | Path, data: dict[str, Any]) -> None:
    """Dump data to path as TOML, creating the parent folder first. Comments in an existing file are lost."""
    with contextlib.suppress(FileExistsError):
        await aiofiles.os.makedirs(Path(path).parent, exist_ok=True)

    async with aiofiles.open(path, mode='w', encoding='utf-8') as f:
        content = tomli_w.dumps(data)
        await f.write(content)
# endregion
