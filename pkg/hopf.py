"""Coalgebra structure on truncated non-associative series.

The coproduct is the algebra morphism making every generator primitive. On a monomial m it is the sum
over all ways of splitting the leaves of m into two subsets, each side keeping the tree shape that m
induces on it. This module also builds the right-normed exponential base and its logarithm.
"""

from __future__ import annotations  # Python 3.14 feature for deferred annotations

import functools
import math
from collections.abc import Mapping
from fractions import Fraction

from loguru import logger

import series
from common import Mode
from series import ONE, Coefficient, Monomial, NSeries

type MonomialPair = tuple[Monomial, Monomial]


class BaseError(ValueError):
    """Raised when a series cannot serve as a base for logarithms."""

    def __init__(self, message: str) -> None:
        super().__init__(message)
        self.message = message


# ==========================
# TENSOR SQUARE
# ==========================
# region
class TensorSeries:
    """An element of the tensor square of the truncated algebra, truncated by total degree."""

    __slots__ = ("degree_bound", "mode", "terms")

    def __init__(self, terms: Mapping[MonomialPair, Coefficient], degree_bound: int,
                 mode: Mode = Mode.NONCOMMUTATIVE) -> None:
        self.degree_bound = degree_bound
        self.mode = mode
        self.terms = {pair: series.exact(c) for pair, c in terms.items()
                      if c and series.degree(pair[0]) + series.degree(pair[1]) <= degree_bound}

    @property
    def counit_value(self) -> Coefficient:
        """Coefficient of 1 (x) 1."""
        return self.terms.get((ONE, ONE), 0)

    def __add__(self, other: TensorSeries) -> TensorSeries:
        series.check_compatible(self, other)
        result = dict(self.terms)
        for pair, c in other.terms.items():
            result[pair] = result.get(pair, 0) + c
        return TensorSeries(result, self.degree_bound, self.mode)

    def __sub__(self, other: TensorSeries) -> TensorSeries:
        return self + TensorSeries({pair: -c for pair, c in other.terms.items()}, other.degree_bound, other.mode)

    def __mul__(self, other: TensorSeries) -> TensorSeries:
        """Componentwise product (a1 (x) a2)(b1 (x) b2) = a1 b1 (x) a2 b2."""
        series.check_compatible(self, other)
        commutative = self.mode.is_commutative
        result: dict[MonomialPair, Coefficient] = {}
        for (a1, a2), ca in self.terms.items():
            room = self.degree_bound - series.degree(a1) - series.degree(a2)
            for (b1, b2), cb in other.terms.items():
                if series.degree(b1) + series.degree(b2) > room:
                    continue
                pair = (series.mono_mul(a1, b1, commutative=commutative),
                        series.mono_mul(a2, b2, commutative=commutative))
                result[pair] = result.get(pair, 0) + ca * cb
        return TensorSeries(result, self.degree_bound, self.mode)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TensorSeries):
            return NotImplemented
        return (self.degree_bound, self.mode, self.terms) == (other.degree_bound, other.mode, other.terms)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        shown = " + ".join(
            f"{series.render_coefficient(c)}*{series.render_monomial(m1)}(x){series.render_monomial(m2)}"
            for (m1, m2), c in sorted(self.terms.items(),
                                      key=lambda item: (series.monomial_key(item[0][0]),
                                                        series.monomial_key(item[0][1]))))
        return f"TensorSeries({shown or '0'}, N={self.degree_bound})"


def tensor(a: NSeries, b: NSeries) -> TensorSeries:
    """Return a (x) b truncated by total degree."""
    series.check_compatible(a, b)
    result: dict[MonomialPair, Coefficient] = {}
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            result[ma, mb] = ca * cb
    return TensorSeries(result, a.degree_bound, a.mode)


def tensor_square(a: NSeries) -> TensorSeries:
    return tensor(a, a)
# endregion


# ==========================
# COPRODUCT
# ==========================
# region
@functools.cache
def coproduct_monomial(m: Monomial, *, commutative: bool) -> tuple[tuple[MonomialPair, int], ...]:
    """Return the coproduct of a single monomial as (pair, multiplicity) items."""
    if m == ONE:
        return (((ONE, ONE), 1),)
    if isinstance(m, int):
        return (((m, ONE), 1), ((ONE, m), 1))

    result: dict[MonomialPair, int] = {}
    for (l1, l2), cl in coproduct_monomial(m[0], commutative=commutative):
        for (r1, r2), cr in coproduct_monomial(m[1], commutative=commutative):
            pair = (series.mono_mul(l1, r1, commutative=commutative),
                    series.mono_mul(l2, r2, commutative=commutative))
            result[pair] = result.get(pair, 0) + cl * cr

    return tuple(sorted(result.items(), key=lambda item: (series.monomial_key(item[0][0]),
                                                          series.monomial_key(item[0][1]))))


@functools.cache
def iterated_coproduct(m: Monomial, k: int, *, commutative: bool) -> tuple[tuple[tuple[Monomial, ...], int], ...]:
    """Return the k-fold coproduct of m, nesting further coproducts on the leftmost factor."""
    if k < 1:
        error_msg = f"Iterated coproduct needs k >= 1 (got {k})"
        raise ValueError(error_msg)

    if k == 1:
        return (((m,), 1),)

    result: dict[tuple[Monomial, ...], int] = {}
    for factors, c in iterated_coproduct(m, k - 1, commutative=commutative):
        for (first, second), d in coproduct_monomial(factors[0], commutative=commutative):
            key = (first, second, *factors[1:])
            result[key] = result.get(key, 0) + c * d

    return tuple(result.items())


def coproduct(a: NSeries) -> TensorSeries:
    commutative = a.is_commutative
    result: dict[MonomialPair, Coefficient] = {}
    for m, c in a.terms.items():
        for pair, multiplicity in coproduct_monomial(m, commutative=commutative):
            result[pair] = result.get(pair, 0) + c * multiplicity
    return TensorSeries(result, a.degree_bound, a.mode)


def is_primitive(a: NSeries) -> bool:
    one = a.unit_like()
    return coproduct(a) == tensor(a, one) + tensor(one, a)


def is_grouplike(a: NSeries) -> bool:
    """Return True if a has constant term 1 and coproduct a (x) a, up to the truncation degree."""
    return a.constant_term == 1 and coproduct(a) == tensor_square(a)
# endregion


# ==========================
# BASES FOR LOGARITHMS
# ==========================
# region
def right_normed_power(d: int) -> Monomial:
    """Return X(X(...X)) with d factors of the single variable X = X1."""
    return series.right_normed([1] * d)


def exp_base(degree_bound: int, mode: Mode = Mode.NONCOMMUTATIVE) -> NSeries:
    """Return the exponential series with right-normed powers, the default base for logarithms."""
    if degree_bound < 1:
        error_msg = f"Truncation degree must be at least 1 (got {degree_bound})"
        raise ValueError(error_msg)

    terms = {right_normed_power(d): Fraction(1, math.factorial(d)) for d in range(degree_bound + 1)}
    return NSeries(terms, degree_bound, mode)


def check_base(base: NSeries) -> None:
    """Raise BaseError unless base is a one-variable series 1 + cX + ... with c non-zero."""
    if base.constant_term != 1:
        error_msg = "A base for logarithms has constant term 1"
        raise BaseError(error_msg)

    if not base.coefficient(1):
        error_msg = "A base for logarithms has non-zero linear coefficient"
        raise BaseError(error_msg)

    if any(index != 1 for m in base.terms for index in series.leaves(m)):
        error_msg = "A base for logarithms is a series in the single variable X1"
        raise BaseError(error_msg)


def log_base(base: NSeries, degree_bound: int | None = None) -> NSeries:
    """Return the series l with base(l) = 1 + X up to the truncation degree.

    The solution is built one degree at a time: after the linear term X/c, each degree-d part of
    base(l) is cancelled by subtracting it (divided by c) from l.
    """
    check_base(base)
    bound = base.degree_bound if degree_bound is None else degree_bound
    base = base.truncated(bound)

    linear = base.coefficient(1)
    inverse_linear = Fraction(1) / linear
    log = NSeries({1: inverse_linear}, bound, base.mode)

    for d in range(2, bound + 1):
        residue = series.eval_univariate(base, log).homogeneous(d)
        log -= residue.scaled(inverse_linear)

    logger.debug(f"Computed logarithm for base at N={bound} with {len(log.terms)} terms")
    return log
# endregion
