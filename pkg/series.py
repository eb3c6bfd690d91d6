"""Truncated non-associative power series.

Exact arithmetic in the free non-associative algebra Q{X} and the free commutative non-associative
algebra over the rationals, truncated at a degree bound N. Monomials are binary trees: a generator
is a positive int, a product is a 2-tuple (left, right) and the empty tuple ONE is the unit. Series
store the constant term under ONE.

Coefficients stay Python ints while every operation is integral and become fractions.Fraction
otherwise, so no floating point is involved anywhere.
"""

from __future__ import annotations  # Python 3.14 feature for deferred annotations

import functools
import itertools
import math
from collections.abc import Callable, Iterable, Iterator, Mapping, Sequence
from fractions import Fraction
from typing import Any, Final, Protocol, Self

import common
from common import Mode

type Monomial = int | tuple[()] | tuple[Monomial, Monomial]
type Coefficient = int | Fraction

ONE: Final[tuple[()]] = ()


# ==========================
# EXCEPTIONS
# ==========================
# region
class SeriesMismatchError(ValueError):
    """Raised when two series with different truncation degree or mode are combined."""

    def __init__(self, message: str) -> None:
        super().__init__(message)
        self.message = message


class NotAUnitError(ValueError):
    """Raised when dividing by a series whose constant term is zero."""

    def __init__(self, message: str) -> None:
        super().__init__(message)
        self.message = message


class CommutativeFlattenError(TypeError):
    """Raised when forgetting parentheses is requested for a commutative series."""

    def __init__(self, message: str) -> None:
        super().__init__(message)
        self.message = message


class SubstitutionError(ValueError):
    """Raised when a substituted element has a non-zero constant term."""

    def __init__(self, message: str) -> None:
        super().__init__(message)
        self.message = message
# endregion


# ==========================
# MONOMIALS
# ==========================
# region
@functools.cache
def degree(m: Monomial) -> int:
    if m == ONE:
        return 0
    if isinstance(m, int):
        return 1
    return degree(m[0]) + degree(m[1])


@functools.cache
def monomial_key(m: Monomial) -> tuple:
    """Sort key of the fixed monomial order: by degree, then generator index, then left and right subtree."""
    if m == ONE:
        return (0,)
    if isinstance(m, int):
        return (1, m)
    return (degree(m), monomial_key(m[0]), monomial_key(m[1]))


def mono_mul(a: Monomial, b: Monomial, *, commutative: bool) -> Monomial:
    """Return the product of two canonical monomials, canonical again in commutative mode."""
    if a == ONE:
        return b
    if b == ONE:
        return a
    if commutative and monomial_key(a) < monomial_key(b):
        return (b, a)
    return (a, b)


@functools.cache
def canonical(m: Monomial) -> Monomial:
    """Return the commutative canonical form of m: at every node the left subtree is not smaller."""
    if m == ONE or isinstance(m, int):
        return m
    return mono_mul(canonical(m[0]), canonical(m[1]), commutative=True)


@functools.cache
def leaves(m: Monomial) -> tuple[int, ...]:
    """Return the generator sequence of m read left to right."""
    if m == ONE:
        return ()
    if isinstance(m, int):
        return (m,)
    return leaves(m[0]) + leaves(m[1])


@functools.cache
def is_right_normed(m: Monomial) -> bool:
    """Return True for monomials of the shape X_i1(X_i2(...X_ik)) (and for ONE)."""
    if m == ONE or isinstance(m, int):
        return True
    return isinstance(m[0], int) and is_right_normed(m[1])


def right_normed(indices: Sequence[int]) -> Monomial:
    """Build the right-normed monomial on the given generator sequence."""
    if not indices:
        return ONE
    result: Monomial = indices[-1]
    for index in reversed(indices[:-1]):
        result = (index, result)
    return result


def render_monomial(m: Monomial) -> str:
    if m == ONE:
        return "1"
    if isinstance(m, int):
        return f"x{m}"
    return f"({render_monomial(m[0])}*{render_monomial(m[1])})"


@functools.cache
def monomials_of_degree(d: int, alphabet_size: int, *, commutative: bool) -> tuple[Monomial, ...]:
    """Return every (canonical) monomial of degree d over alphabet_size generators, sorted."""
    if d <= 0:
        return (ONE,)
    if d == 1:
        return tuple(range(1, alphabet_size + 1))

    found: list[Monomial] = []
    for left_degree in range(1, d):
        for left in monomials_of_degree(left_degree, alphabet_size, commutative=commutative):
            for right in monomials_of_degree(d - left_degree, alphabet_size, commutative=commutative):
                if commutative and monomial_key(left) < monomial_key(right):
                    continue
                found.append((left, right))

    return tuple(sorted(found, key=monomial_key))


def catalan(n: int) -> int:
    return math.comb(2 * n, n) // (n + 1)


def exact(value: Coefficient) -> Coefficient:
    """Collapse integral fractions back to int."""
    if isinstance(value, Fraction) and value.denominator == 1:
        return value.numerator
    return value


def render_coefficient(value: Coefficient) -> str:
    value = exact(value)
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    return str(value)
# endregion


# ==========================
# GENERIC GRADED ALGEBRA
# ==========================
# region
class GradedElement(Protocol):
    """What order-by-order division and substitution need from a truncated graded algebra element."""

    degree_bound: int

    @property
    def constant_term(self) -> Coefficient: ...

    def homogeneous_parts(self) -> dict[int, Self]: ...

    def zero_like(self) -> Self: ...

    def unit_like(self) -> Self: ...

    def scaled(self, factor: Coefficient) -> Self: ...

    def __add__(self, other: Self, /) -> Self: ...

    def __sub__(self, other: Self, /) -> Self: ...

    def __mul__(self, other: Self, /) -> Self: ...


def solve_by_degree[S: GradedElement](divisor: S, target: S, multiply: Callable[[S, S], S],
                                      *, divisor_on_left: bool) -> S:
    """Solve divisor*q = target (or q*divisor = target) for q, one homogeneous degree at a time.

    The degree-d part of q is (target_d - sum_k divisor_k q_(d-k)) / c, where c is the constant term
    of the divisor and k runs over positive degrees.
    """
    unit = divisor.constant_term
    if not unit:
        error_msg = "Cannot divide by a series with zero constant term"
        raise NotAUnitError(error_msg)

    divisor_parts = {k: part for k, part in divisor.homogeneous_parts().items() if k > 0}
    target_parts = target.homogeneous_parts()
    inverse_unit = 1 if unit == 1 else Fraction(1) / unit

    result = target.zero_like()
    solved: dict[int, S] = {}
    for d in range(target.degree_bound + 1):
        rest = target_parts.get(d, target.zero_like())
        for k, part in divisor_parts.items():
            if k > d or (d - k) not in solved:
                continue
            product = multiply(part, solved[d - k]) if divisor_on_left else multiply(solved[d - k], part)
            rest -= product

        solved[d] = rest if inverse_unit == 1 else rest.scaled(inverse_unit)
        result += solved[d]

    return result


def substitute[S: GradedElement](s: NSeries, images: Mapping[int, S],
                                 memo: dict[Monomial, S] | None = None) -> S:
    """Apply the algebra homomorphism X_i -> images[i] to s, respecting the tree shape of each monomial.

    Every image must have zero constant term; the result is truncated at the images' degree bound.
    Images of monomials are kept in memo, so repeated substitutions with the same images can share it.
    """
    if not images:
        error_msg = "substitute() needs at least one generator image"
        raise SubstitutionError(error_msg)

    sample = next(iter(images.values()))
    for index, image in images.items():
        if image.constant_term:
            error_msg = f"Image of X{index} has non-zero constant term {render_coefficient(image.constant_term)}"
            raise SubstitutionError(error_msg)

    bound = sample.degree_bound
    values: dict[Monomial, S] = {} if memo is None else memo
    values.setdefault(ONE, sample.unit_like())

    def value(m: Monomial) -> S:
        if m not in values:
            if isinstance(m, int):
                if m not in images:
                    error_msg = f"No image given for X{m}"
                    raise SubstitutionError(error_msg)
                values[m] = images[m]
            else:
                values[m] = value(m[0]) * value(m[1])
        return values[m]

    result = sample.zero_like()
    for m, coefficient in s.sorted_terms():
        # Images have no constant term, so a monomial of degree d lands in degree >= d
        if degree(m) > bound:
            continue
        result += value(m).scaled(coefficient)

    return result


def eval_univariate[S: GradedElement](s: NSeries, z: S) -> S:
    """Substitute z for the single variable X1 of s."""
    return substitute(s, {1: z})
# endregion


# ==========================
# NON-ASSOCIATIVE SERIES
# ==========================
# region
class NSeries:
    """A series in Q{X} (or its commutative analogue) truncated past degree N.

    Series are treated as immutable values: every operation returns a new object.
    """

    __slots__ = ("degree_bound", "mode", "terms")

    def __init__(self, terms: Mapping[Monomial, Coefficient] | None = None, degree_bound: int = 6,
                 mode: Mode = Mode.NONCOMMUTATIVE) -> None:
        if degree_bound < 0:
            error_msg = f"Truncation degree must be non-negative (got {degree_bound})"
            raise ValueError(error_msg)

        self.degree_bound = degree_bound
        self.mode = mode
        self.terms: dict[Monomial, Coefficient] = {}

        for m, coefficient in (terms or {}).items():
            if degree(m) > degree_bound:
                continue
            key = canonical(m) if mode.is_commutative else m
            self.terms[key] = self.terms.get(key, 0) + coefficient

        self.terms = {m: exact(c) for m, c in self.terms.items() if c}
        _check_size(len(self.terms))

    @classmethod
    def _wrap(cls, terms: dict[Monomial, Coefficient], degree_bound: int, mode: Mode) -> NSeries:
        """Build a series from terms that are already canonical and truncated."""
        self = object.__new__(cls)
        self.degree_bound = degree_bound
        self.mode = mode
        self.terms = {m: exact(c) for m, c in terms.items() if c}
        _check_size(len(self.terms))
        return self

    @classmethod
    def constant(cls, value: Coefficient, degree_bound: int, mode: Mode = Mode.NONCOMMUTATIVE) -> NSeries:
        return cls({ONE: value}, degree_bound, mode)

    @classmethod
    def variable(cls, index: int, degree_bound: int, mode: Mode = Mode.NONCOMMUTATIVE) -> NSeries:
        """Return the series X_index."""
        return cls({index: 1}, degree_bound, mode)

    @classmethod
    def unit_plus_variable(cls, index: int, degree_bound: int, mode: Mode = Mode.NONCOMMUTATIVE) -> NSeries:
        """Return 1 + X_index, the classical Magnus image of x_index."""
        return cls({ONE: 1, index: 1}, degree_bound, mode)

    @property
    def is_commutative(self) -> bool:
        return self.mode.is_commutative

    @property
    def constant_term(self) -> Coefficient:
        return self.terms.get(ONE, 0)

    def coefficient(self, m: Monomial) -> Coefficient:
        return self.terms.get(canonical(m) if self.is_commutative else m, 0)

    def zero_like(self) -> NSeries:
        return NSeries._wrap({}, self.degree_bound, self.mode)

    def unit_like(self) -> NSeries:
        return NSeries._wrap({ONE: 1}, self.degree_bound, self.mode)

    def scaled(self, factor: Coefficient) -> NSeries:
        return NSeries._wrap({m: c * factor for m, c in self.terms.items()}, self.degree_bound, self.mode)

    def truncated(self, degree_bound: int) -> NSeries:
        """Return the same series truncated at a (possibly smaller) degree bound."""
        kept = {m: c for m, c in self.terms.items() if degree(m) <= degree_bound}
        return NSeries._wrap(kept, degree_bound, self.mode)

    def homogeneous_parts(self) -> dict[int, NSeries]:
        grouped: dict[int, dict[Monomial, Coefficient]] = {}
        for m, c in self.terms.items():
            grouped.setdefault(degree(m), {})[m] = c
        return {d: NSeries._wrap(part, self.degree_bound, self.mode) for d, part in grouped.items()}

    def homogeneous(self, d: int) -> NSeries:
        return NSeries._wrap({m: c for m, c in self.terms.items() if degree(m) == d}, self.degree_bound, self.mode)

    def sorted_terms(self) -> list[tuple[Monomial, Coefficient]]:
        return sorted(self.terms.items(), key=lambda item: monomial_key(item[0]))

    def canonical_key(self) -> tuple[tuple[Monomial, Coefficient], ...]:
        """Sorted term list, suitable for hashing and collision tables."""
        return tuple(self.sorted_terms())

    def __add__(self, other: NSeries) -> NSeries:
        return add(self, other)

    def __sub__(self, other: NSeries) -> NSeries:
        return add(self, other.scaled(-1))

    def __neg__(self) -> NSeries:
        return self.scaled(-1)

    def __mul__(self, other: NSeries) -> NSeries:
        return mul(self, other)

    def __rmul__(self, factor: Coefficient) -> NSeries:
        return self.scaled(factor)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NSeries):
            return NotImplemented
        return (self.degree_bound, self.mode, self.terms) == (other.degree_bound, other.mode, other.terms)

    def __hash__(self) -> int:
        return hash((self.degree_bound, self.mode, self.canonical_key()))

    def __repr__(self) -> str:
        return f"NSeries({render_series(self)}, N={self.degree_bound}, {self.mode.value})"

    def __str__(self) -> str:
        return render_series(self)


def _check_size(count: int) -> None:
    if count > (cap := common.max_series_terms()):
        error_msg = f"Series grew past the cap of {cap} terms (set {common.ENV_MAX_TERMS} to raise it)"
        raise common.ResourceCapError(error_msg)


def check_compatible(a: Any, b: Any) -> None:
    """Raise SeriesMismatchError unless a and b share truncation degree and mode."""
    if a.degree_bound != b.degree_bound:
        error_msg = f"Truncation degrees differ ({a.degree_bound} vs {b.degree_bound})"
        raise SeriesMismatchError(error_msg)
    if getattr(a, "mode", None) != getattr(b, "mode", None):
        error_msg = "Cannot combine a commutative series with a non-commutative one"
        raise SeriesMismatchError(error_msg)


def add(a: NSeries, b: NSeries) -> NSeries:
    check_compatible(a, b)
    result = dict(a.terms)
    for m, c in b.terms.items():
        result[m] = result.get(m, 0) + c
    return NSeries._wrap(result, a.degree_bound, a.mode)


def scale(factor: Coefficient, a: NSeries) -> NSeries:
    return a.scaled(factor)


def mul(a: NSeries, b: NSeries) -> NSeries:
    """Multiply two series monomial by monomial, dropping everything above the truncation degree."""
    check_compatible(a, b)
    bound = a.degree_bound
    commutative = a.is_commutative

    b_by_degree: dict[int, list[tuple[Monomial, Coefficient]]] = {}
    for m, c in b.terms.items():
        b_by_degree.setdefault(degree(m), []).append((m, c))

    result: dict[Monomial, Coefficient] = {}
    for ma, ca in a.terms.items():
        room = bound - degree(ma)
        for d in range(room + 1):
            for mb, cb in b_by_degree.get(d, ()):
                m = mono_mul(ma, mb, commutative=commutative)
                result[m] = result.get(m, 0) + ca * cb

    return NSeries._wrap(result, bound, a.mode)


def left_divide(b: NSeries, a: NSeries) -> NSeries:
    """Return b\\a, the series q with b*q = a up to the truncation degree."""
    check_compatible(a, b)
    return solve_by_degree(b, a, mul, divisor_on_left=True)


def right_divide(a: NSeries, b: NSeries) -> NSeries:
    """Return a/b, the series q with q*b = a up to the truncation degree."""
    check_compatible(a, b)
    return solve_by_degree(b, a, mul, divisor_on_left=False)


def low_degree(a: NSeries) -> int | float:
    """Return the smallest degree of a non-constant term of a, or math.inf if a is constant."""
    degrees = [degree(m) for m in a.terms if m != ONE]
    return min(degrees) if degrees else math.inf


def right_normed_only(a: NSeries) -> bool:
    return all(is_right_normed(m) for m in a.terms)


def render_series(a: NSeries) -> str:
    """Render a as 'c0 + c1*m1 + ...' in the fixed monomial order, e.g. '1 + 1*(x1*x2) + -1*(x2*x1)'."""
    if not a.terms:
        return "0"

    parts = []
    for m, c in a.sorted_terms():
        if m == ONE:
            parts.append(render_coefficient(c))
        else:
            parts.append(f"{render_coefficient(c)}*{render_monomial(m)}")
    return " + ".join(parts)


def series_to_json(a: NSeries) -> list[dict[str, str]]:
    result = []
    for m, c in a.sorted_terms():
        value = Fraction(c)
        result.append({"monomial": render_monomial(m), "num": str(value.numerator), "den": str(value.denominator)})
    return result


def random_unit_series(rng: Any, alphabet_size: int, degree_bound: int, *, mode: Mode = Mode.NONCOMMUTATIVE,
                       density: float = 0.3, max_coefficient: int = 3, unit_constant: bool = False) -> NSeries:
    """Draw a sparse random series with non-zero constant term from a numpy Generator."""
    terms: dict[Monomial, Coefficient] = {}
    constant = 1 if unit_constant else int(rng.choice([-2, -1, 1, 2, 3]))
    terms[ONE] = constant

    for d in range(1, degree_bound + 1):
        for m in monomials_of_degree(d, alphabet_size, commutative=mode.is_commutative):
            if rng.random() < density:
                terms[m] = int(rng.integers(-max_coefficient, max_coefficient + 1))

    return NSeries(terms, degree_bound, mode)
# endregion


# ==========================
# ASSOCIATIVE SERIES
# ==========================
# region
class ASeries:
    """A series in the free associative algebra, truncated past degree N; monomials are generator tuples."""

    __slots__ = ("degree_bound", "terms")

    def __init__(self, terms: Mapping[tuple[int, ...], Coefficient] | None = None, degree_bound: int = 6) -> None:
        self.degree_bound = degree_bound
        self.terms = {w: exact(c) for w, c in (terms or {}).items() if c and len(w) <= degree_bound}

    @property
    def constant_term(self) -> Coefficient:
        return self.terms.get((), 0)

    def zero_like(self) -> ASeries:
        return ASeries({}, self.degree_bound)

    def unit_like(self) -> ASeries:
        return ASeries({(): 1}, self.degree_bound)

    def scaled(self, factor: Coefficient) -> ASeries:
        return ASeries({w: c * factor for w, c in self.terms.items()}, self.degree_bound)

    def homogeneous_parts(self) -> dict[int, ASeries]:
        grouped: dict[int, dict[tuple[int, ...], Coefficient]] = {}
        for w, c in self.terms.items():
            grouped.setdefault(len(w), {})[w] = c
        return {d: ASeries(part, self.degree_bound) for d, part in grouped.items()}

    def inverse(self) -> ASeries:
        return solve_by_degree(self, self.unit_like(), ASeries.__mul__, divisor_on_left=True)

    def __add__(self, other: ASeries) -> ASeries:
        check_compatible(self, other)
        result = dict(self.terms)
        for w, c in other.terms.items():
            result[w] = result.get(w, 0) + c
        return ASeries(result, self.degree_bound)

    def __sub__(self, other: ASeries) -> ASeries:
        return self + other.scaled(-1)

    def __mul__(self, other: ASeries) -> ASeries:
        check_compatible(self, other)
        result: dict[tuple[int, ...], Coefficient] = {}
        for (wa, ca), (wb, cb) in itertools.product(self.terms.items(), other.terms.items()):
            if len(wa) + len(wb) <= self.degree_bound:
                result[wa + wb] = result.get(wa + wb, 0) + ca * cb
        return ASeries(result, self.degree_bound)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ASeries):
            return NotImplemented
        return (self.degree_bound, self.terms) == (other.degree_bound, other.terms)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        shown = " + ".join(f"{render_coefficient(c)}*{''.join(f'x{i}' for i in w) or '1'}"
                           for w, c in sorted(self.terms.items(), key=lambda item: (len(item[0]), item[0])))
        return f"ASeries({shown or '0'}, N={self.degree_bound})"


def drop_parens(a: NSeries) -> ASeries:
    """Forget the parentheses of every monomial of a non-commutative series."""
    if a.is_commutative:
        error_msg = "Commutative monomials have no canonical flat image"
        raise CommutativeFlattenError(error_msg)

    result: dict[tuple[int, ...], Coefficient] = {}
    for m, c in a.terms.items():
        word = leaves(m)
        result[word] = result.get(word, 0) + c
    return ASeries(result, a.degree_bound)


def group_magnus(word: Iterable[tuple[int, int]], degree_bound: int) -> ASeries:
    """Return the associative Magnus series of a free group word given as (generator, +1 or -1) factors."""
    result = ASeries({(): 1}, degree_bound)
    for index, sign in word:
        factor = ASeries({(): 1, (index,): 1}, degree_bound)
        result *= factor if sign > 0 else factor.inverse()
    return result


def iter_monomials(max_degree: int, alphabet_size: int, *, commutative: bool) -> Iterator[Monomial]:
    for d in range(1, max_degree + 1):
        yield from monomials_of_degree(d, alphabet_size, commutative=commutative)
# endregion
