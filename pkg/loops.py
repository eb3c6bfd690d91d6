"""Concrete loops and their left multiplication groups.

This module contains the Loop interface and three computable loops (free abelian groups and two loop
structures on pairs of integers), words in left translations and their action, the finite embeddings of
the integer-pair loops into truncated series, and the check that iterated commutators of left
translations move a free generator only by terms of high degree.
"""

from __future__ import annotations  # Python 3.14 feature for deferred annotations

import math
import re
from abc import ABC, abstractmethod
from collections.abc import Callable, Iterable, Mapping, Sequence
from dataclasses import dataclass
from typing import Any, ClassVar

import sympy
from loguru import logger

import magnus
import series
import term
from common import Mode
from series import Coefficient, NSeries
from term import LoopTerm

type Pair = tuple[int, int]
type LMltWord[T] = tuple[tuple[T, int], ...]


def binomial(p: Any, k: int) -> Any:
    """Return p choose k by the polynomial formula, so negative p is allowed.

    Works for ints (exact integer result) and for sympy expressions.
    """
    numerator = math.prod((p - i for i in range(k)), start=1)
    if isinstance(p, int):
        return numerator // math.factorial(k)
    return numerator / math.factorial(k)


# ==========================
# LOOP INTERFACE
# ==========================
# region
class Loop[T](ABC):
    """A loop with decidable equality: a unital product where both divisions are defined."""

    name: ClassVar[str] = "loop"

    @abstractmethod
    def identity(self) -> T: ...

    @abstractmethod
    def mul(self, a: T, b: T) -> T: ...

    @abstractmethod
    def ldiv(self, a: T, b: T) -> T:
        """Return a\\b, the solution x of a*x = b."""

    @abstractmethod
    def rdiv(self, a: T, b: T) -> T:
        """Return a/b, the solution x of x*b = a."""

    @abstractmethod
    def sample(self, rng: Any, bound: int) -> T:
        """Draw a random element from a numpy Generator, with coordinates in [-bound, bound]."""

    def is_identity(self, a: T) -> bool:
        return a == self.identity()

    def check_axioms(self, pairs: Iterable[tuple[T, T]]) -> list[str]:
        """Return a description of every loop axiom violated by the given pairs (empty if none)."""
        violations = []
        e = self.identity()

        for a, b in pairs:
            checks = {
                "a\\(ab) = b": self.ldiv(a, self.mul(a, b)) == b,
                "a(a\\b) = b": self.mul(a, self.ldiv(a, b)) == b,
                "(ab)/b = a": self.rdiv(self.mul(a, b), b) == a,
                "(a/b)b = a": self.mul(self.rdiv(a, b), b) == a,
                "ea = a = ae": self.mul(e, a) == a == self.mul(a, e),
            }
            violations.extend(f"{name} fails for a={a}, b={b}" for name, holds in checks.items() if not holds)

        return violations

    def sample_pairs(self, rng: Any, count: int, bound: int) -> list[tuple[T, T]]:
        return [(self.sample(rng, bound), self.sample(rng, bound)) for _ in range(count)]


class FreeAbelianGroup(Loop[tuple[int, ...]]):
    """The free abelian group on `rank` generators, elements are integer vectors."""

    name: ClassVar[str] = "abelian"

    def __init__(self, rank: int) -> None:
        self.rank = rank

    def identity(self) -> tuple[int, ...]:
        return (0,) * self.rank

    def generator(self, index: int) -> tuple[int, ...]:
        return tuple(1 if i == index else 0 for i in range(1, self.rank + 1))

    def mul(self, a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
        return tuple(x + y for x, y in zip(a, b, strict=True))

    def ldiv(self, a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
        return tuple(y - x for x, y in zip(a, b, strict=True))

    def rdiv(self, a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
        return tuple(x - y for x, y in zip(a, b, strict=True))

    def sample(self, rng: Any, bound: int) -> tuple[int, ...]:
        return tuple(int(x) for x in rng.integers(-bound, bound + 1, size=self.rank))

    def __repr__(self) -> str:
        return f"FreeAbelianGroup({self.rank})"


class IntPairLoopBase(Loop[Pair]):
    """Shared parts of the loops on Z x Z whose first coordinate simply adds up."""

    embedding_degree: ClassVar[int]
    embedding_mode: ClassVar[Mode]

    def identity(self) -> Pair:
        return (0, 0)

    def sample(self, rng: Any, bound: int) -> Pair:
        p, q = rng.integers(-bound, bound + 1, size=2)
        return (int(p), int(q))

    @abstractmethod
    def embed(self, x: Pair) -> NSeries:
        """Return the image of x in the one-variable series algebra, truncated at embedding_degree."""

    def __repr__(self) -> str:
        return f"{type(self).__name__}()"


class IntPairCommLoop(IntPairLoopBase):
    """The commutative loop (p,q)(p',q') = (p+p', q+q'+C(p,2)C(p',2)), with trivial fifth dimension subloop."""

    name: ClassVar[str] = "prop3"
    embedding_degree: ClassVar[int] = 4
    embedding_mode: ClassVar[Mode] = Mode.COMMUTATIVE

    def mul(self, a: Pair, b: Pair) -> Pair:
        (p, q), (r, s) = a, b
        return (p + r, q + s + binomial(p, 2) * binomial(r, 2))

    def ldiv(self, a: Pair, b: Pair) -> Pair:
        (p, q), (x, y) = a, b
        return (x - p, y - q - binomial(p, 2) * binomial(x - p, 2))

    def rdiv(self, a: Pair, b: Pair) -> Pair:
        (x, y), (p, q) = a, b
        return (x - p, y - q - binomial(x - p, 2) * binomial(p, 2))

    def embed(self, x: Pair) -> NSeries:
        return embed_prop3(x)


class IntPairLoop(IntPairLoopBase):
    """The loop (p,q)(p',q') = (p+p', q+q'+C(p,2)p'), with trivial fourth dimension subloop."""

    name: ClassVar[str] = "prop4"
    embedding_degree: ClassVar[int] = 3
    embedding_mode: ClassVar[Mode] = Mode.NONCOMMUTATIVE

    def mul(self, a: Pair, b: Pair) -> Pair:
        (p, q), (r, s) = a, b
        return (p + r, q + s + binomial(p, 2) * r)

    def ldiv(self, a: Pair, b: Pair) -> Pair:
        (p, q), (x, y) = a, b
        return (x - p, y - q - binomial(p, 2) * (x - p))

    def rdiv(self, a: Pair, b: Pair) -> Pair:
        (x, y), (p, q) = a, b
        return (x - p, y - q - binomial(x - p, 2) * p)

    def embed(self, x: Pair) -> NSeries:
        return embed_prop4(x)


PAIR_LOOPS: dict[str, Callable[[], IntPairLoopBase]] = {
    IntPairCommLoop.name: IntPairCommLoop,
    IntPairLoop.name: IntPairLoop,
}


def evaluate[T](w: LoopTerm, loop: Loop[T], images: Mapping[int, T], memo: dict[LoopTerm, T] | None = None) -> T:
    """Evaluate a word in a concrete loop, sending x_i to images[i]."""
    if memo is None:
        memo = {}
    if w in memo:
        return memo[w]

    match w:
        case term.Identity():
            value = loop.identity()
        case term.Gen(index):
            if index not in images:
                error_msg = f"No image given for generator x{index}"
                raise term.GeneratorRangeError(error_msg)
            value = images[index]
        case term.Mul(left, right):
            value = loop.mul(evaluate(left, loop, images, memo), evaluate(right, loop, images, memo))
        case term.LDiv(left, right):
            value = loop.ldiv(evaluate(left, loop, images, memo), evaluate(right, loop, images, memo))
        case term.RDiv(left, right):
            value = loop.rdiv(evaluate(left, loop, images, memo), evaluate(right, loop, images, memo))

    memo[w] = value
    return value
# endregion


# ==========================
# LEFT MULTIPLICATION WORDS
# ==========================
# region
def translation[T](a: T, sign: int = 1) -> LMltWord[T]:
    """Return the one-letter word L_a (sign +1) or its inverse (sign -1)."""
    return ((a, sign),)


def inverse_word[T](word: LMltWord[T]) -> LMltWord[T]:
    return tuple((a, -sign) for a, sign in reversed(word))


def commutator[T](f: LMltWord[T], g: LMltWord[T]) -> LMltWord[T]:
    """Return [f, g] = f^-1 g^-1 f g as a word, letters applied right to left."""
    return inverse_word(f) + inverse_word(g) + f + g


def nested_commutator[T](words: Sequence[LMltWord[T]]) -> LMltWord[T]:
    """Return [w1, [w2, ..., [w(k-1), wk]]]."""
    result = words[-1]
    for word in reversed(words[:-1]):
        result = commutator(word, result)
    return result


def lmlt_apply[T](loop: Loop[T], word: LMltWord[T], x: T) -> T:
    """Apply a word in left translations to x; sign +1 multiplies on the left, -1 left-divides."""
    for a, sign in reversed(word):
        x = loop.mul(a, x) if sign > 0 else loop.ldiv(a, x)
    return x


def lmlt_term_apply(word: Iterable[tuple[int, int]], w: LoopTerm) -> LoopTerm:
    """Apply a word in translations by generators symbolically: (i,+1) gives x_i*w, (i,-1) gives x_i\\w."""
    for index, sign in reversed(tuple(word)):
        w = term.Mul(term.Gen(index), w) if sign > 0 else term.LDiv(term.Gen(index), w)
    return w


def lmlt_class_profile[T](loop: Loop[T], rng: Any, *, max_weight: int, bound: int,
                          samples: int) -> dict[int, bool]:
    """For each weight 2..max_weight, report whether some sampled nested commutator of translations moves a point."""
    profile: dict[int, bool] = {}

    for weight in range(2, max_weight + 1):
        moved = False
        for _ in range(samples):
            letters = [translation(loop.sample(rng, bound)) for _ in range(weight)]
            x = loop.sample(rng, bound)
            if lmlt_apply(loop, nested_commutator(letters), x) != x:
                moved = True
                break

        profile[weight] = moved
        logger.debug(f"{loop!r}: weight {weight} commutators {'act non-trivially' if moved else 'act trivially'}")

    return profile
# endregion


# ==========================
# EMBEDDINGS INTO SERIES
# ==========================
# region
X1 = 1
X2 = (1, 1)
X3_COMMUTATIVE = ((1, 1), 1)
X3X = (X3_COMMUTATIVE, 1)
X2X2 = (X2, X2)
X_X2 = (1, X2)
X2_X = (X2, 1)

# Coefficients of (p,q) -> 1 + pX + (a0 C(p,2) + a1 q) X.X + (b0 C(p,3) + b1 q) X(X.X) + (c0 C(p,3) + c1 q) (X.X)X,
# fixed by solve_prop4_coefficients()
PROP4_COEFFICIENTS: dict[str, int] = {"a0": 1, "a1": 0, "b0": 1, "b1": -1, "c0": 0, "c1": 1}


def embed_prop3(x: Pair) -> NSeries:
    """Return 1 + pX + C(p,2)X^2 + C(p,3)X^3 + (C(p,4)-q)X^3X + qX^2X^2 in one commuting variable, N=4."""
    p, q = x
    terms: dict[series.Monomial, Coefficient] = {
        series.ONE: 1,
        X1: p,
        X2: binomial(p, 2),
        X3_COMMUTATIVE: binomial(p, 3),
        X3X: binomial(p, 4) - q,
        X2X2: q,
    }
    return NSeries(terms, IntPairCommLoop.embedding_degree, Mode.COMMUTATIVE)


def _prop4_terms(p: Any, q: Any, coefficients: Mapping[str, Any]) -> dict[series.Monomial, Any]:
    return {
        series.ONE: 1,
        X1: p,
        X2: coefficients["a0"] * binomial(p, 2) + coefficients["a1"] * q,
        X_X2: coefficients["b0"] * binomial(p, 3) + coefficients["b1"] * q,
        X2_X: coefficients["c0"] * binomial(p, 3) + coefficients["c1"] * q,
    }


def embed_prop4(x: Pair) -> NSeries:
    """Return 1 + pX + C(p,2)X.X + (C(p,3)-q)X(X.X) + q(X.X)X in one variable, N=3."""
    p, q = x
    return NSeries(_prop4_terms(p, q, PROP4_COEFFICIENTS), IntPairLoop.embedding_degree, Mode.NONCOMMUTATIVE)


def solve_prop4_coefficients() -> dict[str, Any]:
    """Solve for the embedding coefficients that make embed_prop4 a homomorphism modulo degree 4.

    Series arithmetic runs with sympy polynomial coefficients in p, q, p', q'; requiring the product of two
    images to equal the image of the product gives linear equations in the unknown coefficients.
    """
    p, q, pp, qq = sympy.symbols("p q pp qq")
    unknowns = sympy.symbols("a0 a1 b0 b1 c0 c1")
    coefficients = dict(zip(("a0", "a1", "b0", "b1", "c0", "c1"), unknowns, strict=True))
    bound = IntPairLoop.embedding_degree

    def image(first: Any, second: Any) -> NSeries:
        return NSeries(_prop4_terms(first, second, coefficients), bound, Mode.NONCOMMUTATIVE)

    product = series.mul(image(p, q), image(pp, qq))
    target = image(p + pp, q + qq + binomial(p, 2) * pp)

    equations = []
    for m in set(product.terms) | set(target.terms):
        difference = sympy.expand(product.terms.get(m, 0) - target.terms.get(m, 0))
        if difference != 0:
            equations.extend(sympy.Poly(difference, p, q, pp, qq).coeffs())

    solution = sympy.solve(equations, unknowns, dict=True)
    if len(solution) != 1:
        error_msg = f"Expected a unique embedding, found {len(solution)} solutions"
        raise ArithmeticError(error_msg)

    return {name: solution[0].get(symbol, symbol) for name, symbol in coefficients.items()}


def loop_dimension_degree(x: Pair, loop: IntPairLoopBase) -> int | float:
    """Return the low degree of embed(x) - 1, or math.inf when embed(x) = 1 (x is the identity)."""
    image = loop.embed(x)
    return series.low_degree(image - image.unit_like())
# endregion


# ==========================
# ITERATED COMMUTATORS IN THE FREE LOOP
# ==========================
# region
@dataclass(kw_only=True)
class LemmaFirstReport:
    n: int
    degree: int
    word: str
    low_degree: int | float
    leading_term: str
    right_normed_only: bool
    flattened_matches: bool

    @property
    def passed(self) -> bool:
        return self.low_degree >= self.n and self.right_normed_only and self.flattened_matches


def generator_commutator_word(n: int) -> LMltWord[int]:
    """Return [L_x1, [L_x2, ..., [L_x(n-1), L_xn]]] as a word in translations by generator indices."""
    return nested_commutator([translation(i) for i in range(1, n + 1)])


def lemma_first_check(n: int, degree: int) -> LemmaFirstReport:
    """Check that the n-fold commutator F of L_x1..L_xn satisfies M(F(a)) - M(a) in degree >= n.

    The free loop has n+1 generators and a = x(n+1). Besides the degree, the image of F(a) has to
    consist of right-normed monomials only, and forgetting its parentheses must give the associative
    Magnus series of the corresponding free group word.
    """
    if n < 1 or n > degree:
        error_msg = f"Need 1 <= n <= N (got n={n}, N={degree})"
        raise ValueError(error_msg)

    word = generator_commutator_word(n)
    a = term.Gen(n + 1)
    moved = lmlt_term_apply(word, a)

    cfg = magnus.MagnusConfig(n + 1, degree)
    image = magnus.magnus(moved, cfg)
    difference = image - magnus.magnus(a, cfg)
    low = series.low_degree(difference)

    leading = "0" if low == math.inf else series.render_series(difference.homogeneous(int(low)))
    flattened = series.drop_parens(image) == series.group_magnus([*word, (n + 1, 1)], degree)

    report = LemmaFirstReport(n=n, degree=degree, word=term.render(moved), low_degree=low, leading_term=leading,
                              right_normed_only=series.right_normed_only(image), flattened_matches=flattened)
    logger.debug(f"Iterated commutator check n={n}, N={degree}: low degree {low}, passed={report.passed}")
    return report
# endregion


# ==========================
# EXPRESSIONS OVER PAIR LOOPS
# ==========================
# region
EXPRESSION_TOKEN = re.compile(r"(?P<int>-?\d+)|(?P<punct>[()\[\],@*\\/L])")


class _ExpressionParser:
    """Recursive descent over: expr := operand (op operand)?, operand := pair | '(' expr ')' | lword '@' operand."""

    def __init__(self, text: str, loop: IntPairLoopBase) -> None:
        self.text = text
        self.loop = loop
        self.tokens: list[tuple[str, str, int]] = []
        self.cursor = 0
        self.depth = 0

        position = 0
        while position < len(text):
            if text[position].isspace():
                position += 1
                continue
            match = EXPRESSION_TOKEN.match(text, position)
            if match is None:
                error_msg = f"Unexpected character {text[position]!r}"
                raise term.TermSyntaxError(error_msg, position)
            kind = 'int' if match.group('int') is not None else 'punct'
            self.tokens.append((kind, match.group(0), position))
            position = match.end()

    def peek(self, offset: int = 0) -> tuple[str, str, int] | None:
        index = self.cursor + offset
        return self.tokens[index] if index < len(self.tokens) else None

    def fail(self, message: str) -> term.TermSyntaxError:
        token = self.peek()
        return term.TermSyntaxError(message, token[2] if token is not None else len(self.text))

    def expect(self, value: str) -> str:
        token = self.peek()
        if token is None or token[1] != value:
            raise self.fail(f"Expected {value!r}")
        self.cursor += 1
        return token[1]

    def integer(self) -> int:
        token = self.peek()
        if token is None or token[0] != 'int':
            raise self.fail("Expected an integer")
        self.cursor += 1
        return int(token[1])

    def pair(self) -> Pair:
        self.expect('(')
        p = self.integer()
        self.expect(',')
        q = self.integer()
        self.expect(')')
        return (p, q)

    def starts_pair(self) -> bool:
        first, second, third = self.peek(), self.peek(1), self.peek(2)
        return (first is not None and first[1] == '(' and second is not None and second[0] == 'int'
                and third is not None and third[1] == ',')

    def nested[T](self, parse: Callable[[], T]) -> T:
        if self.depth >= term.MAX_NESTING:
            raise self.fail(f"Expression nests deeper than {term.MAX_NESTING} levels")

        self.depth += 1
        try:
            return parse()
        finally:
            self.depth -= 1

    def lword(self) -> LMltWord[Pair]:
        return self.nested(self._lword)

    def _lword(self) -> LMltWord[Pair]:
        token = self.peek()
        if token is not None and token[1] == '[':
            self.cursor += 1
            first = self.lword()
            self.expect(',')
            second = self.lword()
            self.expect(']')
            return commutator(first, second)

        if token is not None and token[1] == 'L':
            self.cursor += 1
        return translation(self.pair())

    def expression(self) -> Pair:
        left = self.operand()
        token = self.peek()
        if token is None or token[1] not in {'*', '\\', '/'}:
            return left

        self.cursor += 1
        right = self.operand()
        following = self.peek()
        if following is not None and following[1] in {'*', '\\', '/'}:
            raise self.fail("Operators are non-associative, nested operations need parentheses")

        operation = {'*': self.loop.mul, '\\': self.loop.ldiv, '/': self.loop.rdiv}[token[1]]
        return operation(left, right)

    def operand(self) -> Pair:
        return self.nested(self._operand)

    def _operand(self) -> Pair:
        token = self.peek()
        if token is None:
            raise self.fail("Unexpected end of input")

        if token[1] in {'[', 'L'}:
            word = self.lword()
            self.expect('@')
            return lmlt_apply(self.loop, word, self.operand())

        if self.starts_pair():
            return self.pair()

        if token[1] == '(':
            self.cursor += 1
            inner = self.expression()
            self.expect(')')
            return inner

        raise self.fail(f"Unexpected {token[1]!r}")


def evaluate_expression(text: str, loop: IntPairLoopBase) -> Pair:
    """Evaluate e.g. '[L(2,0),L(1,0)]@(3,0)' or '((1,0)*(2,0))\\(3,1)' in a pair loop."""
    parser = _ExpressionParser(text, loop)
    result = parser.expression()
    if parser.peek() is not None:
        raise parser.fail("Unexpected trailing input")
    return result
# endregion
