"""The Hopf-algebraic version of the (L, A) construction.

The symbol set T holds one degree-1 symbol t_i per generator and one symbol t(m1, m2) of degree
|m1| + |m2| per pair of monomials (unordered in commutative mode). Q[T] is the ordinary polynomial
algebra on T with every symbol primitive. The tensor product Q{X} (x) Q[T] carries the twisted product

    (x (x) alpha)(y (x) beta) = sum x_(1) y_(1) (x) t*(x_(2) (x) y_(2)) alpha beta

where t*(m (x) m') = eps(m) eps(m') + sum_k 1/k! t(m_(1), m'_(1)) ... t(m_(k), m'_(k)). Words of the free
loop map into it through x_i -> e(X_i) (x) exp(t_i), and the homomorphism phi built from
X_i -> log_e(e(X_i) (x) exp(t_i)) carries the modified Magnus map onto that image.
"""

from __future__ import annotations  # Python 3.14 feature for deferred annotations

import functools
import itertools
import math
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction

import sympy
from loguru import logger

import hopf
import magnus
import series
import term
from common import Mode
from magnus import MagnusConfig
from series import ONE, Coefficient, Monomial, NSeries
from term import LoopTerm

# Number of configs whose monomial images phi_apply keeps around
PHI_MEMO_CONFIGS = 16


# ==========================
# SYMBOLS AND Q[T]
# ==========================
# region
@dataclass(frozen=True)
class TGen:
    index: int

    @property
    def degree(self) -> int:
        return 1

    def sort_key(self) -> tuple:
        return (1, 0, self.index)

    def __str__(self) -> str:
        return f"t{self.index}"


@dataclass(frozen=True)
class TPair:
    left: Monomial
    right: Monomial

    @property
    def degree(self) -> int:
        return series.degree(self.left) + series.degree(self.right)

    def sort_key(self) -> tuple:
        return (self.degree, 1, series.monomial_key(self.left), series.monomial_key(self.right))

    def __str__(self) -> str:
        return f"t({series.render_monomial(self.left)},{series.render_monomial(self.right)})"


type TSymbol = TGen | TPair
type TMonomial = tuple[TSymbol, ...]


def make_tpair(m1: Monomial, m2: Monomial, *, commutative: bool) -> TPair:
    if commutative and series.monomial_key(m1) < series.monomial_key(m2):
        m1, m2 = m2, m1
    return TPair(m1, m2)


@functools.cache
def t_degree(tm: TMonomial) -> int:
    return sum(symbol.degree for symbol in tm)


def tmono_mul(*factors: TMonomial) -> TMonomial:
    return tuple(sorted(itertools.chain.from_iterable(factors), key=lambda symbol: symbol.sort_key()))


def render_tmonomial(tm: TMonomial) -> str:
    return "*".join(str(symbol) for symbol in tm) or "1"


class TPoly:
    """A polynomial in the commuting symbols T, truncated past total degree N."""

    __slots__ = ("degree_bound", "terms")

    def __init__(self, terms: Mapping[TMonomial, Coefficient] | None = None, degree_bound: int = 4) -> None:
        self.degree_bound = degree_bound
        self.terms = {tm: series.exact(c) for tm, c in (terms or {}).items() if c and t_degree(tm) <= degree_bound}

    @classmethod
    def symbol(cls, s: TSymbol, degree_bound: int) -> TPoly:
        return cls({(s,): 1}, degree_bound)

    @property
    def constant_term(self) -> Coefficient:
        return self.terms.get((), 0)

    def zero_like(self) -> TPoly:
        return TPoly({}, self.degree_bound)

    def unit_like(self) -> TPoly:
        return TPoly({(): 1}, self.degree_bound)

    def scaled(self, factor: Coefficient) -> TPoly:
        return TPoly({tm: c * factor for tm, c in self.terms.items()}, self.degree_bound)

    def homogeneous_parts(self) -> dict[int, TPoly]:
        grouped: dict[int, dict[TMonomial, Coefficient]] = {}
        for tm, c in self.terms.items():
            grouped.setdefault(t_degree(tm), {})[tm] = c
        return {d: TPoly(part, self.degree_bound) for d, part in grouped.items()}

    def __add__(self, other: TPoly) -> TPoly:
        series.check_compatible(self, other)
        result = dict(self.terms)
        for tm, c in other.terms.items():
            result[tm] = result.get(tm, 0) + c
        return TPoly(result, self.degree_bound)

    def __sub__(self, other: TPoly) -> TPoly:
        return self + other.scaled(-1)

    def __mul__(self, other: TPoly) -> TPoly:
        series.check_compatible(self, other)
        result: dict[TMonomial, Coefficient] = {}
        for (ta, ca), (tb, cb) in itertools.product(self.terms.items(), other.terms.items()):
            if t_degree(ta) + t_degree(tb) <= self.degree_bound:
                tm = tmono_mul(ta, tb)
                result[tm] = result.get(tm, 0) + ca * cb
        return TPoly(result, self.degree_bound)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TPoly):
            return NotImplemented
        return (self.degree_bound, self.terms) == (other.degree_bound, other.terms)

    __hash__ = None  # type: ignore[assignment]

    def inverse(self) -> TPoly:
        return series.solve_by_degree(self, self.unit_like(), TPoly.__mul__, divisor_on_left=True)

    def power(self, k: int) -> TPoly:
        base = self if k >= 0 else self.inverse()
        result = self.unit_like()
        for _ in range(abs(k)):
            result *= base
        return result

    def exp(self) -> TPoly:
        """Return exp of a polynomial without constant term."""
        if self.constant_term:
            error_msg = "exp() needs a polynomial without constant term"
            raise series.SubstitutionError(error_msg)

        result, power = self.unit_like(), self.unit_like()
        for k in range(1, self.degree_bound + 1):
            power *= self
            result += power.scaled(Fraction(1, math.factorial(k)))
        return result

    def log(self) -> TPoly:
        """Return log of a polynomial with constant term 1."""
        if self.constant_term != 1:
            error_msg = "log() needs constant term 1"
            raise series.SubstitutionError(error_msg)

        u = self - self.unit_like()
        result, power = self.zero_like(), self.unit_like()
        for k in range(1, self.degree_bound + 1):
            power *= u
            result += power.scaled(Fraction((-1) ** (k + 1), k))
        return result

    def sorted_terms(self) -> list[tuple[TMonomial, Coefficient]]:
        return sorted(self.terms.items(), key=lambda item: [symbol.sort_key() for symbol in item[0]])

    def __repr__(self) -> str:
        shown = " + ".join(f"{series.render_coefficient(c)}*{render_tmonomial(tm)}" for tm, c in self.sorted_terms())
        return f"TPoly({shown or '0'}, N={self.degree_bound})"


def tpoly_coproduct(p: TPoly) -> dict[tuple[TMonomial, TMonomial], Coefficient]:
    """Coproduct of Q[T] with primitive symbols: every split of a monomial's factors into two parts."""
    result: dict[tuple[TMonomial, TMonomial], Coefficient] = {}
    for tm, c in p.terms.items():
        for mask in itertools.product((0, 1), repeat=len(tm)):
            left = tuple(s for s, side in zip(tm, mask, strict=True) if side == 0)
            right = tuple(s for s, side in zip(tm, mask, strict=True) if side == 1)
            result[left, right] = result.get((left, right), 0) + c
    return {key: c for key, c in result.items() if c}
# endregion


# ==========================
# THE MAPS t AND t*
# ==========================
# region
def t_map(u: NSeries, v: NSeries) -> TPoly:
    """Bilinear map sending m1 (x) m2 to the symbol t(m1, m2), and to 0 when either side is 1."""
    series.check_compatible(u, v)
    commutative = u.is_commutative
    result: dict[TMonomial, Coefficient] = {}
    for (mu, cu), (mv, cv) in itertools.product(u.terms.items(), v.terms.items()):
        if ONE in (mu, mv) or series.degree(mu) + series.degree(mv) > u.degree_bound:
            continue
        key = (make_tpair(mu, mv, commutative=commutative),)
        result[key] = result.get(key, 0) + cu * cv
    return TPoly(result, u.degree_bound)


def _nontrivial_splits(m: Monomial, k: int, *, commutative: bool) -> list[tuple[tuple[Monomial, ...], int]]:
    return [(factors, c) for factors, c in hopf.iterated_coproduct(m, k, commutative=commutative)
            if ONE not in factors]


@functools.cache
def tstar_monomials(m1: Monomial, m2: Monomial, *, commutative: bool) -> tuple[tuple[TMonomial, Fraction], ...]:
    """Return t*(m1 (x) m2) for two monomials as (T-monomial, coefficient) items.

    Only k <= min(|m1|, |m2|) contributes, since t vanishes on any factor equal to 1.
    """
    if m1 == ONE and m2 == ONE:
        return (((), Fraction(1)),)
    if ONE in (m1, m2):
        return ()

    result: dict[TMonomial, Fraction] = {}
    for k in range(1, min(series.degree(m1), series.degree(m2)) + 1):
        weight = Fraction(1, math.factorial(k))
        for (first, c1), (second, c2) in itertools.product(_nontrivial_splits(m1, k, commutative=commutative),
                                                           _nontrivial_splits(m2, k, commutative=commutative)):
            tm = tmono_mul(tuple(make_tpair(a, b, commutative=commutative) for a, b in zip(first, second,
                                                                                             strict=True)))
            result[tm] = result.get(tm, 0) + weight * c1 * c2

    return tuple((tm, c) for tm, c in result.items() if c)


def t_star(u: NSeries, v: NSeries) -> TPoly:
    series.check_compatible(u, v)
    commutative = u.is_commutative
    result: dict[TMonomial, Coefficient] = {}
    for (mu, cu), (mv, cv) in itertools.product(u.terms.items(), v.terms.items()):
        if series.degree(mu) + series.degree(mv) > u.degree_bound:
            continue
        for tm, c in tstar_monomials(mu, mv, commutative=commutative):
            result[tm] = result.get(tm, 0) + cu * cv * c
    return TPoly(result, u.degree_bound)


def tstar_coproduct_check(u: NSeries, v: NSeries) -> bool:
    """Check that t* commutes with coproducts: Delta(t*(u (x) v)) = sum t*(u1 (x) v1) (x) t*(u2 (x) v2)."""
    series.check_compatible(u, v)
    commutative = u.is_commutative
    bound = u.degree_bound

    expected: dict[tuple[TMonomial, TMonomial], Coefficient] = {}
    for (mu, cu), (mv, cv) in itertools.product(u.terms.items(), v.terms.items()):
        if series.degree(mu) + series.degree(mv) > bound:
            continue
        for ((u1, u2), a), ((v1, v2), b) in itertools.product(hopf.coproduct_monomial(mu, commutative=commutative),
                                                              hopf.coproduct_monomial(mv, commutative=commutative)):
            for (left, c1), (right, c2) in itertools.product(tstar_monomials(u1, v1, commutative=commutative),
                                                             tstar_monomials(u2, v2, commutative=commutative)):
                key = (left, right)
                expected[key] = expected.get(key, 0) + cu * cv * a * b * c1 * c2

    expected = {key: c for key, c in expected.items() if c}
    return tpoly_coproduct(t_star(u, v)) == expected
# endregion


# ==========================
# THE MIXED ALGEBRA
# ==========================
# region
type MixedKey = tuple[Monomial, TMonomial]


@functools.cache
def mixed_term_product(x: Monomial, y: Monomial, *, commutative: bool) -> tuple[tuple[MixedKey, Coefficient], ...]:
    """Return (x (x) 1)(y (x) 1) under the twisted product."""
    result: dict[MixedKey, Coefficient] = {}
    for ((x1, x2), a), ((y1, y2), b) in itertools.product(hopf.coproduct_monomial(x, commutative=commutative),
                                                          hopf.coproduct_monomial(y, commutative=commutative)):
        product = series.mono_mul(x1, y1, commutative=commutative)
        for tm, c in tstar_monomials(x2, y2, commutative=commutative):
            key = (product, tm)
            result[key] = result.get(key, 0) + a * b * c
    return tuple((key, series.exact(c)) for key, c in result.items() if c)


def mixed_degree(key: MixedKey) -> int:
    return series.degree(key[0]) + t_degree(key[1])


class MixedSeries:
    """An element of Q{X} (x) Q[T] truncated past total degree N, multiplied by the twisted product."""

    __slots__ = ("degree_bound", "mode", "terms")

    def __init__(self, terms: Mapping[MixedKey, Coefficient] | None = None, degree_bound: int = 4,
                 mode: Mode = Mode.NONCOMMUTATIVE) -> None:
        self.degree_bound = degree_bound
        self.mode = mode
        self.terms = {key: series.exact(c) for key, c in (terms or {}).items()
                      if c and mixed_degree(key) <= degree_bound}

    @classmethod
    def pure(cls, a: NSeries, b: TPoly) -> MixedSeries:
        """Return a (x) b."""
        terms = {(m, tm): ca * cb for (m, ca), (tm, cb) in itertools.product(a.terms.items(), b.terms.items())}
        return cls(terms, a.degree_bound, a.mode)

    @property
    def is_commutative(self) -> bool:
        return self.mode.is_commutative

    @property
    def constant_term(self) -> Coefficient:
        return self.terms.get((ONE, ()), 0)

    def zero_like(self) -> MixedSeries:
        return MixedSeries({}, self.degree_bound, self.mode)

    def unit_like(self) -> MixedSeries:
        return MixedSeries({(ONE, ()): 1}, self.degree_bound, self.mode)

    def scaled(self, factor: Coefficient) -> MixedSeries:
        return MixedSeries({key: c * factor for key, c in self.terms.items()}, self.degree_bound, self.mode)

    def homogeneous_parts(self) -> dict[int, MixedSeries]:
        grouped: dict[int, dict[MixedKey, Coefficient]] = {}
        for key, c in self.terms.items():
            grouped.setdefault(mixed_degree(key), {})[key] = c
        return {d: MixedSeries(part, self.degree_bound, self.mode) for d, part in grouped.items()}

    def homogeneous(self, d: int) -> MixedSeries:
        return MixedSeries({key: c for key, c in self.terms.items() if mixed_degree(key) == d},
                           self.degree_bound, self.mode)

    def __add__(self, other: MixedSeries) -> MixedSeries:
        series.check_compatible(self, other)
        result = dict(self.terms)
        for key, c in other.terms.items():
            result[key] = result.get(key, 0) + c
        return MixedSeries(result, self.degree_bound, self.mode)

    def __sub__(self, other: MixedSeries) -> MixedSeries:
        return self + other.scaled(-1)

    def __mul__(self, other: MixedSeries) -> MixedSeries:
        return mixed_mul(self, other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MixedSeries):
            return NotImplemented
        return (self.degree_bound, self.mode, self.terms) == (other.degree_bound, other.mode, other.terms)

    __hash__ = None  # type: ignore[assignment]

    def sorted_terms(self) -> list[tuple[MixedKey, Coefficient]]:
        return sorted(self.terms.items(), key=lambda item: (mixed_degree(item[0]), series.monomial_key(item[0][0]),
                                                            [symbol.sort_key() for symbol in item[0][1]]))

    def canonical_key(self) -> tuple[tuple[MixedKey, Coefficient], ...]:
        return tuple(self.sorted_terms())

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{series.render_coefficient(c)}*{series.render_monomial(m)}(x){render_tmonomial(tm)}"
                          for (m, tm), c in self.sorted_terms())

    def __repr__(self) -> str:
        return f"MixedSeries({self}, N={self.degree_bound}, {self.mode.value})"


def mixed_mul(a: MixedSeries, b: MixedSeries) -> MixedSeries:
    series.check_compatible(a, b)
    bound = a.degree_bound
    commutative = a.is_commutative

    b_by_degree: dict[int, list[tuple[MixedKey, Coefficient]]] = {}
    for key, c in b.terms.items():
        b_by_degree.setdefault(mixed_degree(key), []).append((key, c))

    result: dict[MixedKey, Coefficient] = {}
    for (x, alpha), ca in a.terms.items():
        room = bound - series.degree(x) - t_degree(alpha)
        for d in range(room + 1):
            for (y, beta), cb in b_by_degree.get(d, ()):
                for (product, gamma), c in mixed_term_product(x, y, commutative=commutative):
                    key = (product, tmono_mul(gamma, alpha, beta))
                    result[key] = result.get(key, 0) + ca * cb * c

    return MixedSeries(result, bound, a.mode)


def mixed_left_divide(b: MixedSeries, a: MixedSeries) -> MixedSeries:
    """Return b\\a, the element q with b*q = a."""
    series.check_compatible(a, b)
    return series.solve_by_degree(b, a, mixed_mul, divisor_on_left=True)


def mixed_right_divide(a: MixedSeries, b: MixedSeries) -> MixedSeries:
    """Return a/b, the element q with q*b = a."""
    series.check_compatible(a, b)
    return series.solve_by_degree(b, a, mixed_mul, divisor_on_left=False)
# endregion


# ==========================
# THE MAPS M~' AND phi
# ==========================
# region
def _with_base(cfg: MagnusConfig) -> MagnusConfig:
    if cfg.base is not None:
        return cfg
    return MagnusConfig.modified(cfg.alphabet_size, cfg.degree, cfg.mode)


@functools.cache
def exp_symbol(index: int, degree_bound: int) -> TPoly:
    """Return exp(t_index)."""
    return TPoly.symbol(TGen(index), degree_bound).exp()


@functools.cache
def tilde_generator_image(index: int, cfg: MagnusConfig) -> MixedSeries:
    """Return e(X_index) (x) exp(t_index)."""
    return MixedSeries.pure(magnus.generator_image(index, cfg), exp_symbol(index, cfg.degree))


@functools.lru_cache(maxsize=1 << 14)
def _magnus_tilde(w: LoopTerm, cfg: MagnusConfig) -> MixedSeries:
    match w:
        case term.Identity():
            return MixedSeries({(ONE, ()): 1}, cfg.degree, cfg.mode)
        case term.Gen(index):
            return tilde_generator_image(index, cfg)
        case term.Mul(left, right):
            return mixed_mul(_magnus_tilde(left, cfg), _magnus_tilde(right, cfg))
        case term.LDiv(left, right):
            return mixed_left_divide(_magnus_tilde(left, cfg), _magnus_tilde(right, cfg))
        case term.RDiv(left, right):
            return mixed_right_divide(_magnus_tilde(left, cfg), _magnus_tilde(right, cfg))


def magnus_tilde(w: LoopTerm, cfg: MagnusConfig) -> MixedSeries:
    """Return the image of w under x_i -> e(X_i) (x) exp(t_i); the exponential base is used if cfg has none."""
    term.check_alphabet(w, cfg.alphabet_size)
    return _magnus_tilde(w, _with_base(cfg))


@functools.cache
def phi_generator_images(cfg: MagnusConfig) -> dict[int, MixedSeries]:
    """Return phi(X_i) = log_e(e(X_i) (x) exp(t_i)) for every generator."""
    log_series = hopf.log_base(cfg.base)
    images = {}
    for index in range(1, cfg.alphabet_size + 1):
        shifted = tilde_generator_image(index, cfg) - MixedSeries({(ONE, ()): 1}, cfg.degree, cfg.mode)
        images[index] = series.eval_univariate(log_series, shifted)
    return images


def phi_apply(s: NSeries, cfg: MagnusConfig) -> MixedSeries:
    """Apply the algebra homomorphism phi to a series over the generators of cfg."""
    cfg = _with_base(cfg)
    if s.degree_bound != cfg.degree or s.mode != cfg.mode:
        error_msg = "phi needs a series with the truncation degree and mode of its config"
        raise series.SeriesMismatchError(error_msg)

    return series.substitute(s, phi_generator_images(cfg), _phi_monomial_images(cfg))


@functools.lru_cache(maxsize=PHI_MEMO_CONFIGS)
def _phi_monomial_images(cfg: MagnusConfig) -> dict[Monomial, MixedSeries]:
    return {}
# endregion


# ==========================
# INDEPENDENCE OF THE GROUP-LIKE GENERATORS
# ==========================
# region
@dataclass(kw_only=True)
class LemmaAReport:
    generator_count: int
    rank: int
    vectors_checked: int
    relations: list[tuple[int, ...]]
    direct_checked: int
    direct_relations: list[tuple[int, ...]]
    commuting: bool

    @property
    def passed(self) -> bool:
        return (not self.relations and not self.direct_relations and self.commuting
                and self.rank == self.generator_count)


def _rational(value: Coefficient) -> sympy.Rational:
    fraction = Fraction(value)
    return sympy.Rational(fraction.numerator, fraction.denominator)


def lemma_a_generators(pairs: Sequence[tuple[NSeries, NSeries]], alphabet_size: int,
                       degree_bound: int) -> list[TPoly]:
    """Return exp(t_1), ..., exp(t_n) followed by t*(g (x) g') for every given pair."""
    generators = [exp_symbol(i, degree_bound) for i in range(1, alphabet_size + 1)]
    generators.extend(t_star(g, h) for g, h in pairs)
    return generators


def lemma_a_check(pairs: Sequence[tuple[NSeries, NSeries]], *, alphabet_size: int, exponent_bound: int,
                  degree_bound: int) -> LemmaAReport:
    """Search a bounded exponent box for a multiplicative relation among the group-like generators.

    Logarithms turn products in Q[T] into sums, so a relation at truncation is a vanishing integer
    combination of the logarithms. The whole box is scanned, the rank of the logarithms is computed with
    sympy, and vectors with at most two non-zero entries are also multiplied out directly.
    """
    generators = lemma_a_generators(pairs, alphabet_size, degree_bound)
    logs = [g.log() for g in generators]
    count = len(generators)

    columns = sorted({tm for log in logs for tm in log.terms}, key=lambda tm: [s.sort_key() for s in tm])
    matrix = sympy.Matrix([[_rational(log.terms.get(tm, 0)) for tm in columns] for log in logs])
    rank = matrix.rank() if columns else 0

    relations = []
    box = range(-exponent_bound, exponent_bound + 1)
    vectors = [v for v in itertools.product(box, repeat=count) if any(v)]
    for vector in vectors:
        combination = logs[0].zero_like()
        for exponent, log in zip(vector, logs, strict=True):
            if exponent:
                combination += log.scaled(exponent)
        if not combination.terms:
            relations.append(vector)

    one = generators[0].unit_like()
    direct_relations = []
    direct_vectors = [v for v in vectors if sum(1 for x in v if x) <= 2]
    for vector in direct_vectors:
        product = one
        for exponent, generator in zip(vector, generators, strict=True):
            if exponent:
                product *= generator.power(exponent)
        if product == one:
            direct_relations.append(vector)

    commuting = all(g * h == h * g for g, h in itertools.combinations(generators, 2))

    if relations or direct_relations:
        logger.warning(f"Found {len(relations) + len(direct_relations)} relations among group-like generators")

    return LemmaAReport(generator_count=count, rank=rank, vectors_checked=len(vectors), relations=relations,
                        direct_checked=len(direct_vectors), direct_relations=direct_relations, commuting=commuting)


def grouplike_images(words: Iterable[LoopTerm], cfg: MagnusConfig) -> list[NSeries]:
    """Return the modified Magnus images of the given words, which are group-like."""
    cfg = _with_base(cfg)
    return [magnus.magnus(w, cfg) for w in words]
# endregion
