"""The Magnus map and the dimension filtration of the free loop.

A word is sent homomorphically into the loop of units of the truncated series algebra: generators go to
1 + X_i (classical map) or to e(X_i) for a base e (modified map), products to products and divisions to
order-by-order divisions. A word lies in the n-th dimension subloop exactly when its image minus 1 has
no terms below degree n.
"""

from __future__ import annotations  # Python 3.14 feature for deferred annotations

import functools
import math
from dataclasses import dataclass, field

from loguru import logger

import hopf
import series
import term
from common import Mode
from series import NSeries
from term import LoopTerm


@dataclass(frozen=True)
class MagnusConfig:
    """Alphabet size, truncation degree, mode and optional base for logarithms of one Magnus computation."""

    alphabet_size: int
    degree: int
    mode: Mode = Mode.NONCOMMUTATIVE
    base: NSeries | None = field(default=None)

    def __post_init__(self) -> None:
        if self.degree < 1:
            error_msg = f"Truncation degree must be at least 1 (got {self.degree})"
            raise ValueError(error_msg)

        if self.alphabet_size < 0:
            error_msg = f"Alphabet size must be non-negative (got {self.alphabet_size})"
            raise ValueError(error_msg)

        if self.base is not None:
            hopf.check_base(self.base)
            if self.base.mode != self.mode:
                error_msg = "The base for logarithms has to be in the same mode as the Magnus map"
                raise series.SeriesMismatchError(error_msg)
            if self.base.degree_bound < self.degree:
                error_msg = f"The base is truncated at {self.base.degree_bound}, below N={self.degree}"
                raise series.SeriesMismatchError(error_msg)

    @classmethod
    def modified(cls, alphabet_size: int, degree: int, mode: Mode = Mode.NONCOMMUTATIVE) -> MagnusConfig:
        """Return a config for the modified map with the right-normed exponential base."""
        return cls(alphabet_size, degree, mode, hopf.exp_base(degree, mode))

    def classical(self) -> MagnusConfig:
        return MagnusConfig(self.alphabet_size, self.degree, self.mode)


@dataclass(frozen=True)
class DimensionDegree:
    """Low degree of M(w) - 1; when saturated the true value is only known to be at least `value`."""

    value: int
    saturated: bool

    def __str__(self) -> str:
        return f">= {self.value}" if self.saturated else str(self.value)


@dataclass(kw_only=True)
class CollisionReport:
    words_scanned: int
    degree: int
    mode: str
    max_leaves: int
    alphabet_size: int
    collisions: list[tuple[str, str]]

    @property
    def passed(self) -> bool:
        return not self.collisions

    def to_json(self) -> dict[str, object]:
        return {
            "words_scanned": self.words_scanned,
            "degree": self.degree,
            "mode": self.mode,
            "max_leaves": self.max_leaves,
            "alphabet_size": self.alphabet_size,
            "collisions": [list(pair) for pair in self.collisions],
            "passed": self.passed,
        }


# ==========================
# MAGNUS MAP
# ==========================
# region
@functools.cache
def generator_image(index: int, cfg: MagnusConfig) -> NSeries:
    """Return 1 + X_index, or e(X_index) when cfg carries a base."""
    if cfg.base is None:
        return NSeries.unit_plus_variable(index, cfg.degree, cfg.mode)

    variable = NSeries.variable(index, cfg.degree, cfg.mode)
    base = cfg.base.truncated(cfg.degree)
    return series.eval_univariate(base, variable)


@functools.lru_cache(maxsize=1 << 16)
def _magnus(w: LoopTerm, cfg: MagnusConfig) -> NSeries:
    match w:
        case term.Identity():
            return NSeries.constant(1, cfg.degree, cfg.mode)
        case term.Gen(index):
            return generator_image(index, cfg)
        case term.Mul(left, right):
            return series.mul(_magnus(left, cfg), _magnus(right, cfg))
        case term.LDiv(left, right):
            return series.left_divide(_magnus(left, cfg), _magnus(right, cfg))
        case term.RDiv(left, right):
            return series.right_divide(_magnus(left, cfg), _magnus(right, cfg))


def magnus(w: LoopTerm, cfg: MagnusConfig) -> NSeries:
    """Return the (modified) Magnus image of w, truncated at cfg.degree."""
    term.check_alphabet(w, cfg.alphabet_size)
    return _magnus(w, cfg)


def dimension_degree(w: LoopTerm, cfg: MagnusConfig) -> DimensionDegree:
    difference = magnus(w, cfg) - NSeries.constant(1, cfg.degree, cfg.mode)
    low = series.low_degree(difference)

    if low == math.inf:
        return DimensionDegree(cfg.degree + 1, saturated=True)
    return DimensionDegree(int(low), saturated=False)


def in_dimension_subloop(w: LoopTerm, n: int, cfg: MagnusConfig) -> bool | None:
    """Return whether w lies in the n-th dimension subloop, or None when cfg.degree is too small to tell."""
    if n <= 1 or term.reduce(w, cfg.mode) == term.IDENTITY:
        return True

    found = dimension_degree(w, cfg)
    if not found.saturated:
        return found.value >= n

    if n <= found.value:
        return True

    logger.warning(f"Dimension test for {term.render(w)} saturates at N={cfg.degree}, raise N to decide D_{n}")
    return None
# endregion


# ==========================
# INJECTIVITY SCAN
# ==========================
# region
def injectivity_scan(max_leaves: int, cfg: MagnusConfig) -> CollisionReport:
    """Compute the Magnus image of every reduced word up to max_leaves leaves and report equal images."""
    words = term.enumerate_reduced(cfg.alphabet_size, max_leaves, cfg.mode)
    seen: dict[tuple, LoopTerm] = {}
    collisions: list[tuple[str, str]] = []

    for w in words:
        key = magnus(w, cfg).canonical_key()
        if key in seen:
            collisions.append((term.render(seen[key]), term.render(w)))
        else:
            seen[key] = w

    for first, second in collisions:
        logger.warning(f"Collision at truncation N={cfg.degree} (raise N): {first} and {second}")

    logger.debug(f"Scanned {len(words)} words at N={cfg.degree}, {len(collisions)} collisions")
    return CollisionReport(words_scanned=len(words), degree=cfg.degree, mode=cfg.mode.value,
                           max_leaves=max_leaves, alphabet_size=cfg.alphabet_size, collisions=collisions)
# endregion
