"""Loop words.

This module contains the syntax tree for words of the free loop, the parser and printer for their
text form, and the rewriting machinery that brings a word to its reduced normal form in both the
free loop and the free commutative loop.
"""

from __future__ import annotations  # Python 3.14 feature for deferred annotations

import functools
import re
from dataclasses import dataclass
from typing import ClassVar

from loguru import logger

import common
from common import Mode

RewriteMode = Mode


# ==========================
# EXCEPTIONS
# ==========================
# region
class TermSyntaxError(ValueError):
    """Raised when a word cannot be parsed, carries the character position of the problem."""

    def __init__(self, message: str, position: int) -> None:
        super().__init__(f"{message} (at position {position})")
        self.message = f"{message} (at position {position})"
        self.position = position


class GeneratorRangeError(ValueError):
    """Raised when a word uses a generator index outside of the declared alphabet."""

    def __init__(self, message: str) -> None:
        super().__init__(message)
        self.message = message
# endregion


# ==========================
# SYNTAX TREE
# ==========================
# region
@dataclass(frozen=True, slots=True)
class Identity:
    rank: ClassVar[int] = 0

    def __str__(self) -> str:
        return "e"


@dataclass(frozen=True, slots=True)
class Gen:
    """The generator x_index, indices start at 1."""

    index: int
    rank: ClassVar[int] = 1

    def __str__(self) -> str:
        return f"x{self.index}"


@dataclass(frozen=True, slots=True)
class BinaryTerm:
    left: LoopTerm
    right: LoopTerm
    rank: ClassVar[int]
    symbol: ClassVar[str]

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True, slots=True)
class Mul(BinaryTerm):
    """The product left*right."""

    rank: ClassVar[int] = 2
    symbol: ClassVar[str] = '*'


@dataclass(frozen=True, slots=True)
class LDiv(BinaryTerm):
    """The left division left\\right, the solution x of left*x = right."""

    rank: ClassVar[int] = 3
    symbol: ClassVar[str] = '\\'


@dataclass(frozen=True, slots=True)
class RDiv(BinaryTerm):
    """The right division left/right, the solution x of x*right = left."""

    rank: ClassVar[int] = 4
    symbol: ClassVar[str] = '/'


type LoopTerm = Identity | Gen | Mul | LDiv | RDiv

IDENTITY = Identity()
OPERATOR_MAP: dict[str, type[Mul | LDiv | RDiv]] = {'*': Mul, '\\': LDiv, '/': RDiv}


@functools.cache
def leaf_count(w: LoopTerm) -> int:
    """Return the number of generator occurrences in w."""
    match w:
        case Identity():
            return 0
        case Gen():
            return 1
        case BinaryTerm(left, right):
            return leaf_count(left) + leaf_count(right)


@functools.cache
def term_order_key(w: LoopTerm) -> tuple:
    """Return a sort key realizing the fixed total order on words.

    Words compare by leaf count, then by constructor (e < x_i < * < \\ < /), then by generator index,
    then recursively by left and right child.
    """
    match w:
        case Identity():
            return (0, Identity.rank, 0)
        case Gen(index):
            return (1, Gen.rank, index)
        case BinaryTerm(left, right):
            return (leaf_count(w), w.rank, 0, term_order_key(left), term_order_key(right))


def term_less(u: LoopTerm, v: LoopTerm) -> bool:
    return term_order_key(u) < term_order_key(v)


@functools.cache
def components(w: LoopTerm) -> frozenset[LoopTerm]:
    """Return every subword of w, including e and w itself."""
    match w:
        case Identity():
            return frozenset({IDENTITY})
        case Gen():
            return frozenset({IDENTITY, w})
        case BinaryTerm(left, right):
            return components(left) | components(right) | {w}


def generators(w: LoopTerm) -> list[int]:
    """Return the sorted generator indices occurring in w."""
    return sorted({c.index for c in components(w) if isinstance(c, Gen)})


def max_generator(w: LoopTerm) -> int:
    found = generators(w)
    return found[-1] if found else 0


def check_alphabet(w: LoopTerm, alphabet_size: int) -> None:
    """Raise GeneratorRangeError unless every generator of w lies in [1, alphabet_size]."""
    for index in generators(w):
        if not 1 <= index <= alphabet_size:
            error_msg = f"Generator x{index} is outside of the alphabet x1..x{alphabet_size}"
            raise GeneratorRangeError(error_msg)
# endregion


# ==========================
# PARSING AND RENDERING
# ==========================
# region
TOKEN_PATTERN = re.compile(r"x(?P<index>\d+)|(?P<identity>e)|(?P<punct>[()*\\/])")

# Parenthesis depth accepted by the word and expression parsers
MAX_NESTING = 100


def _tokenize(text: str) -> list[tuple[str, str | int, int]]:
    tokens: list[tuple[str, str | int, int]] = []
    position = 0

    while position < len(text):
        if text[position].isspace():
            position += 1
            continue

        match = TOKEN_PATTERN.match(text, position)
        if match is None:
            error_msg = f"Unexpected character {text[position]!r}"
            raise TermSyntaxError(error_msg, position)

        if match.group('index') is not None:
            tokens.append(('gen', int(match.group('index')), position))
        elif match.group('identity') is not None:
            tokens.append(('identity', 'e', position))
        else:
            tokens.append(('punct', match.group('punct'), position))

        position = match.end()

    return tokens


class _Parser:
    def __init__(self, text: str) -> None:
        self.text = text
        self.tokens = _tokenize(text)
        self.cursor = 0
        self.depth = 0

    def peek(self) -> tuple[str, str | int, int] | None:
        return self.tokens[self.cursor] if self.cursor < len(self.tokens) else None

    def position(self) -> int:
        token = self.peek()
        return token[2] if token is not None else len(self.text)

    def expect(self, value: str) -> None:
        token = self.peek()
        if token is None or token[1] != value:
            error_msg = f"Expected {value!r}"
            raise TermSyntaxError(error_msg, self.position())
        self.cursor += 1

    def parse_expression(self) -> LoopTerm:
        left = self.parse_operand()
        token = self.peek()

        if token is None or token[0] != 'punct' or token[1] not in OPERATOR_MAP:
            return left

        self.cursor += 1
        right = self.parse_operand()

        following = self.peek()
        if following is not None and following[1] in OPERATOR_MAP:
            error_msg = "Operators are non-associative, nested operations need parentheses"
            raise TermSyntaxError(error_msg, following[2])

        return OPERATOR_MAP[str(token[1])](left, right)

    def parse_operand(self) -> LoopTerm:
        token = self.peek()
        if token is None:
            error_msg = "Unexpected end of input"
            raise TermSyntaxError(error_msg, len(self.text))

        kind, value, position = token
        if kind == 'identity':
            self.cursor += 1
            return IDENTITY

        if kind == 'gen':
            self.cursor += 1
            if not isinstance(value, int) or value < 1:
                error_msg = "Generator indices start at 1"
                raise TermSyntaxError(error_msg, position)
            return Gen(value)

        if value == '(':
            if self.depth >= MAX_NESTING:
                error_msg = f"Parentheses nest deeper than {MAX_NESTING} levels"
                raise TermSyntaxError(error_msg, position)

            self.cursor += 1
            self.depth += 1
            inner = self.parse_expression()
            self.expect(')')
            self.depth -= 1
            return inner

        error_msg = f"Unexpected {value!r}"
        raise TermSyntaxError(error_msg, position)


def parse(text: str, alphabet_size: int | None = None) -> LoopTerm:
    """Parse a word such as 'x1\\(x1*x2)' into its syntax tree.

    When alphabet_size is None the alphabet is inferred from the largest generator index.
    """
    parser = _Parser(text)
    result = parser.parse_expression()

    if parser.peek() is not None:
        error_msg = "Unexpected trailing input"
        raise TermSyntaxError(error_msg, parser.position())

    if alphabet_size is not None:
        check_alphabet(result, alphabet_size)

    return result


def _render_operand(w: LoopTerm) -> str:
    if isinstance(w, BinaryTerm):
        return f"({render(w)})"
    return str(w)


def render(w: LoopTerm) -> str:
    """Render w with every nested binary operation parenthesized, the outermost one bare."""
    if isinstance(w, BinaryTerm):
        return f"{_render_operand(w.left)}{w.symbol}{_render_operand(w.right)}"
    return str(w)
# endregion


# ==========================
# REWRITING
# ==========================
# region
def _rewrite_noncommutative(w: BinaryTerm) -> LoopTerm | None:
    u, v = w.left, w.right

    match w:
        case Mul():
            if u == IDENTITY:
                return v
            if v == IDENTITY:
                return u
            if isinstance(v, LDiv) and v.left == u:  # u(u\v) = v
                return v.right
            if isinstance(u, RDiv) and u.right == v:  # (u/v)v = u
                return u.left

        case LDiv():
            if u == IDENTITY:
                return v
            if u == v:
                return IDENTITY
            if isinstance(v, Mul) and v.left == u:  # u\(uv) = v
                return v.right
            if isinstance(u, RDiv) and u.left == v:  # (u/v)\u = v
                return u.right

        case RDiv():
            if v == IDENTITY:
                return u
            if u == v:
                return IDENTITY
            if isinstance(u, Mul) and u.right == v:  # (uv)/v = u
                return u.left
            if isinstance(v, LDiv) and v.right == u:  # u/(v\u) = v
                return v.left

    return None


def _rewrite_commutative(w: BinaryTerm) -> LoopTerm | None:
    u, v = w.left, w.right

    match w:
        case Mul():
            if u == IDENTITY:
                return v
            if v == IDENTITY:
                return u
            # Reduced products keep the smaller factor on the left, so (u\v)u is swapped before it can match
            if term_less(v, u):
                return Mul(v, u)
            if isinstance(v, LDiv) and v.left == u:  # u(u\v) = v
                return v.right

        case LDiv():
            if u == IDENTITY:
                return v
            if u == v:
                return IDENTITY
            if isinstance(v, Mul) and v.left == u:  # u\(uv) = v
                return v.right
            if isinstance(v, Mul) and v.right == u:  # v\(uv) = u
                return v.left
            if isinstance(u, LDiv) and u.right == v:  # (v\u)\u = v
                return u.left

        case RDiv():
            return LDiv(v, u)

    return None


def rewrite_root(w: LoopTerm, mode: RewriteMode) -> LoopTerm | None:
    """Rewrite w at its root if the root is a forbidden pattern, otherwise return None."""
    if not isinstance(w, BinaryTerm):
        return None

    if mode.is_commutative:
        return _rewrite_commutative(w)
    return _rewrite_noncommutative(w)


@functools.cache
def is_reduced(w: LoopTerm, mode: RewriteMode) -> bool:
    """Return True if no component of w matches a forbidden pattern."""
    if not isinstance(w, BinaryTerm):
        return True

    return is_reduced(w.left, mode) and is_reduced(w.right, mode) and rewrite_root(w, mode) is None


def rewrite_step(w: LoopTerm, mode: RewriteMode, *, rightmost: bool = False) -> LoopTerm | None:
    """Perform one innermost rewrite, on the leftmost redex by default, and return None if w is reduced."""
    if not isinstance(w, BinaryTerm):
        return None

    if rightmost:
        if (new_right := rewrite_step(w.right, mode, rightmost=True)) is not None:
            return type(w)(w.left, new_right)
        if (new_left := rewrite_step(w.left, mode, rightmost=True)) is not None:
            return type(w)(new_left, w.right)
    else:
        if (new_left := rewrite_step(w.left, mode)) is not None:
            return type(w)(new_left, w.right)
        if (new_right := rewrite_step(w.right, mode)) is not None:
            return type(w)(w.left, new_right)

    return rewrite_root(w, mode)


def reduce_stepwise(w: LoopTerm, mode: RewriteMode, *, rightmost: bool = False) -> LoopTerm:
    """Rewrite one redex at a time until w is reduced."""
    while (step := rewrite_step(w, mode, rightmost=rightmost)) is not None:
        w = step
    return w


@functools.cache
def reduce(w: LoopTerm, mode: RewriteMode) -> LoopTerm:
    """Return the reduced word representing the same element of the free (commutative) loop as w."""
    if not isinstance(w, BinaryTerm):
        return w

    current = type(w)(reduce(w.left, mode), reduce(w.right, mode))
    rewritten = rewrite_root(current, mode)

    # Children are reduced at this point, so a root rewrite either finishes or exposes a new redex
    if rewritten is None:
        return current
    return reduce(rewritten, mode)


def equal_in_free_loop(a: LoopTerm, b: LoopTerm, mode: RewriteMode) -> bool:
    return reduce(a, mode) == reduce(b, mode)
# endregion


# ==========================
# ENUMERATION
# ==========================
# region
def _check_word_cap(count: int) -> None:
    if count > (cap := common.max_enumerated_words()):
        error_msg = f"Word enumeration exceeded the cap of {cap} words (set {common.ENV_MAX_WORDS} to raise it)"
        raise common.ResourceCapError(error_msg)


def enumerate_words(alphabet_size: int, max_leaves: int) -> list[LoopTerm]:
    """Return every word over x1..x{alphabet_size} with at most max_leaves leaves and no e inside.

    The list starts with e and is ordered by the fixed total order on words.
    """
    layers: list[list[LoopTerm]] = [[IDENTITY], [Gen(i) for i in range(1, alphabet_size + 1)]]
    total = 1 + alphabet_size

    for leaves in range(2, max_leaves + 1):
        layer: list[LoopTerm] = []
        for left_leaves in range(1, leaves):
            for left in layers[left_leaves]:
                for right in layers[leaves - left_leaves]:
                    layer.extend(operation(left, right) for operation in (Mul, LDiv, RDiv))

        total += len(layer)
        _check_word_cap(total)
        layers.append(sorted(layer, key=term_order_key))

    return [w for layer in layers[:max_leaves + 1] for w in layer]


def enumerate_reduced(alphabet_size: int, max_leaves: int, mode: RewriteMode) -> list[LoopTerm]:
    """Return every reduced word with at most max_leaves leaves, each exactly once, in a deterministic order.

    Words containing e as a proper subword are excluded, since those carry no leaf bound.
    """
    if max_leaves < 0:
        error_msg = f"max_leaves must be non-negative (got {max_leaves})"
        raise ValueError(error_msg)

    layers: list[list[LoopTerm]] = [[IDENTITY], [Gen(i) for i in range(1, alphabet_size + 1)]]
    total = 1 + alphabet_size

    for leaves in range(2, max_leaves + 1):
        layer: list[LoopTerm] = []
        for left_leaves in range(1, leaves):
            for left in layers[left_leaves]:
                for right in layers[leaves - left_leaves]:
                    for operation in (Mul, LDiv, RDiv):
                        candidate = operation(left, right)
                        # Children are reduced already, only the root can still be a forbidden pattern
                        if rewrite_root(candidate, mode) is None:
                            layer.append(candidate)

        total += len(layer)
        _check_word_cap(total)
        layers.append(sorted(layer, key=term_order_key))

    result = [w for layer in layers[:max_leaves + 1] for w in layer]
    logger.debug(f"Enumerated {len(result)} reduced words ({alphabet_size} generators, <= {max_leaves} leaves, "
                 f"{mode.value})")
    return result
# endregion
