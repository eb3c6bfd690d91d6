"""The (L, A) construction.

Given a loop L, A is the free abelian group on symbols x_i (one per generator of the free loop) and
<l1, l2> (one per pair of non-identity elements of L). The set L x A becomes a loop through

    (l1, a1)(l2, a2) = (l1 l2, a1 + a2 + <l1, l2>)
    (l1, a1)/(l2, a2) = (l1/l2, a1 - a2 - <l1/l2, l2>)
    (l2, a2)\\(l1, a1) = (l2\\l1, a1 - a2 - <l2, l2\\l1>)

where pairs involving the identity of L vanish. An assignment alpha of the generators into L extends to
the homomorphism delta = (alpha, psi) from the free loop into (L, A).
"""

from __future__ import annotations  # Python 3.14 feature for deferred annotations

import itertools
from collections import defaultdict
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from typing import Any, ClassVar

from loguru import logger

import loops
import term
from common import Mode
from term import LoopTerm


class NotComponentClosedError(ValueError):
    """Raised when a word set passed to the injectivity-on-families check misses some component of its words."""

    def __init__(self, message: str) -> None:
        super().__init__(message)
        self.message = message


# ==========================
# THE GROUP A
# ==========================
# region
@dataclass(frozen=True, order=True)
class GenSymbol:
    index: int

    def __str__(self) -> str:
        return f"x{self.index}"

    def sort_key(self) -> tuple:
        return (0, self.index)


@dataclass(frozen=True)
class PairSymbol:
    """The symbol <left, right>; never built with an identity entry."""

    left: Any
    right: Any

    def __str__(self) -> str:
        return f"<{_render_element(self.left)},{_render_element(self.right)}>"

    def sort_key(self) -> tuple:
        return (1, self.left, self.right)


type ASymbol = GenSymbol | PairSymbol


def _render_element(value: Any) -> str:
    if isinstance(value, tuple):
        return "(" + ",".join(str(x) for x in value) + ")"
    return str(value)


class AElement:
    """An element of the free abelian group A: a finite integer combination of symbols."""

    __slots__ = ("coefficients",)

    def __init__(self, coefficients: Mapping[ASymbol, int] | None = None) -> None:
        self.coefficients: dict[ASymbol, int] = {s: c for s, c in (coefficients or {}).items() if c}

    @classmethod
    def symbol(cls, s: ASymbol) -> AElement:
        return cls({s: 1})

    def coefficient(self, s: ASymbol) -> int:
        return self.coefficients.get(s, 0)

    def __add__(self, other: AElement) -> AElement:
        result = dict(self.coefficients)
        for s, c in other.coefficients.items():
            result[s] = result.get(s, 0) + c
        return AElement(result)

    def __neg__(self) -> AElement:
        return AElement({s: -c for s, c in self.coefficients.items()})

    def __sub__(self, other: AElement) -> AElement:
        return self + (-other)

    def __bool__(self) -> bool:
        return bool(self.coefficients)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AElement):
            return NotImplemented
        return self.coefficients == other.coefficients

    def __hash__(self) -> int:
        return hash(frozenset(self.coefficients.items()))

    def sorted_items(self) -> list[tuple[ASymbol, int]]:
        return sorted(self.coefficients.items(), key=lambda item: item[0].sort_key())

    def __str__(self) -> str:
        if not self.coefficients:
            return "0"
        return " + ".join(f"{c}*{s}" for s, c in self.sorted_items())

    def __repr__(self) -> str:
        return f"AElement({self})"

    def to_json(self) -> list[dict[str, Any]]:
        return [{"symbol": str(s), "coefficient": c} for s, c in self.sorted_items()]
# endregion


# ==========================
# THE LOOP (L, A)
# ==========================
# region
@dataclass(frozen=True)
class LAElement:
    l: Any  # noqa: E741
    a: AElement = field(default_factory=AElement)

    def __str__(self) -> str:
        return f"({_render_element(self.l)}, {self.a})"


class LALoop(loops.Loop[LAElement]):
    """The loop on L x A twisted by the pair symbols."""

    name: ClassVar[str] = "higman"

    def __init__(self, base: loops.Loop[Any], mode: Mode = Mode.NONCOMMUTATIVE) -> None:
        self.base = base
        self.mode = mode

    def pair(self, l1: Any, l2: Any) -> AElement:
        """Return <l1, l2> as an element of A, zero if either side is the identity of L."""
        if self.base.is_identity(l1) or self.base.is_identity(l2):
            return AElement()
        if self.mode.is_commutative and l2 < l1:
            l1, l2 = l2, l1
        return AElement.symbol(PairSymbol(l1, l2))

    def identity(self) -> LAElement:
        return LAElement(self.base.identity(), AElement())

    def mul(self, a: LAElement, b: LAElement) -> LAElement:
        return LAElement(self.base.mul(a.l, b.l), a.a + b.a + self.pair(a.l, b.l))

    def rdiv(self, a: LAElement, b: LAElement) -> LAElement:
        quotient = self.base.rdiv(a.l, b.l)
        return LAElement(quotient, a.a - b.a - self.pair(quotient, b.l))

    def ldiv(self, a: LAElement, b: LAElement) -> LAElement:
        quotient = self.base.ldiv(a.l, b.l)
        return LAElement(quotient, b.a - a.a - self.pair(a.l, quotient))

    def sample(self, rng: Any, bound: int) -> LAElement:
        """Draw a random (l, a) where a combines a few generator and pair symbols."""
        a = AElement()
        for _ in range(int(rng.integers(0, 4))):
            if rng.random() < 0.5:
                a += AElement({GenSymbol(int(rng.integers(1, 4))): int(rng.integers(-bound, bound + 1))})
            else:
                a += self.pair(self.base.sample(rng, bound), self.base.sample(rng, bound))
        return LAElement(self.base.sample(rng, bound), a)

    def __repr__(self) -> str:
        return f"LALoop({self.base!r}, {self.mode.value})"


@dataclass(frozen=True)
class Assignment:
    """The map alpha sending generator x_i to images[i-1] in the loop L."""

    loop: loops.Loop[Any]
    images: tuple[Any, ...]

    def as_mapping(self) -> dict[int, Any]:
        return {i: image for i, image in enumerate(self.images, start=1)}

    def alpha(self, w: LoopTerm, memo: dict[LoopTerm, Any] | None = None) -> Any:
        return loops.evaluate(w, self.loop, self.as_mapping(), memo)


def alpha_abelianization(n: int) -> Assignment:
    """Return the assignment x_i -> i-th basis vector of the free abelian group of rank n."""
    group = loops.FreeAbelianGroup(n)
    return Assignment(group, tuple(group.generator(i) for i in range(1, n + 1)))


def delta(w: LoopTerm, alpha: Assignment, mode: Mode = Mode.NONCOMMUTATIVE,
          memo: dict[LoopTerm, LAElement] | None = None) -> LAElement:
    """Return (alpha(w), psi(w)), the image of w under the homomorphism sending x_i to (alpha(x_i), x_i)."""
    la_loop = LALoop(alpha.loop, mode)
    images = {i: LAElement(image, AElement.symbol(GenSymbol(i))) for i, image in alpha.as_mapping().items()}
    return loops.evaluate(w, la_loop, images, memo)


def psi(w: LoopTerm, alpha: Assignment, mode: Mode = Mode.NONCOMMUTATIVE) -> AElement:
    """Return the A-component of delta(w).

    Read off the (L, A) laws: psi(uv) = psi(u) + psi(v) + <alpha(u), alpha(v)>,
    psi(u/v) = psi(u) - psi(v) - <alpha(u)/alpha(v), alpha(v)>,
    psi(u\\v) = psi(v) - psi(u) - <alpha(u), alpha(u)\\alpha(v)>.
    """
    return delta(w, alpha, mode).a
# endregion


# ==========================
# WITNESSES AND CHECKS
# ==========================
# region
@dataclass(kw_only=True)
class Prop5Witness:
    n: int
    word: str
    coefficient: int
    alpha_value: tuple[int, ...]
    expected_alpha: tuple[int, ...]

    @property
    def passed(self) -> bool:
        return self.coefficient == 1 and self.alpha_value == self.expected_alpha


def prop5_witness(n: int) -> Prop5Witness:
    """Evaluate y = [L_xn, [L_x(n-1), ..., [L_x3, L_x2]]](x1) in the free abelian group on x1..xn.

    The <x2, x1> coefficient of psi(y) stays 1 for every n, so the iterated commutator never acts trivially.
    """
    if n < 3:
        error_msg = f"The witness needs n >= 3 (got {n})"
        raise ValueError(error_msg)

    word = loops.nested_commutator([loops.translation(i) for i in range(n, 1, -1)])
    y = loops.lmlt_term_apply(word, term.Gen(1))

    alpha = alpha_abelianization(n)
    image = delta(y, alpha)
    target = LALoop(alpha.loop).pair(alpha.images[1], alpha.images[0])
    (symbol,) = target.coefficients

    return Prop5Witness(n=n, word=term.render(y), coefficient=image.a.coefficient(symbol), alpha_value=image.l,
                        expected_alpha=alpha.images[0])


@dataclass(kw_only=True)
class Lemma6Result:
    status: str  # "witness", "hypothesis-failed" or "counterexample"
    detail: str
    witness: ASymbol | None = None


def lemma6_check(w: LoopTerm, w2: LoopTerm, alpha: Assignment, mode: Mode = Mode.NONCOMMUTATIVE) -> Lemma6Result:
    """Check the hypotheses on (w, w2) and, when they hold, look for a symbol separating psi(w) from psi(w2).

    Hypotheses: w2 is not a component of w, alpha(w) = alpha(w2), and alpha is injective on
    Comp(w) | Comp(w2) except for identifying w with w2.
    """
    if w2 in term.components(w):
        return Lemma6Result(status="hypothesis-failed", detail="w' in Comp(w)")

    memo: dict[LoopTerm, Any] = {}
    if alpha.alpha(w, memo) != alpha.alpha(w2, memo):
        return Lemma6Result(status="hypothesis-failed", detail="alpha(w) != alpha(w')")

    by_value: dict[Any, list[LoopTerm]] = defaultdict(list)
    for u in term.components(w) | term.components(w2):
        by_value[alpha.alpha(u, memo)].append(u)

    for group in by_value.values():
        if len(group) > 1 and set(group) != {w, w2}:
            shown = ", ".join(sorted(term.render(u) for u in group))
            return Lemma6Result(status="hypothesis-failed", detail=f"alpha identifies {shown}")

    la_memo: dict[LoopTerm, LAElement] = {}
    first = delta(w, alpha, mode, la_memo).a
    second = delta(w2, alpha, mode, la_memo).a

    candidates = sorted((s for s, c in second.coefficients.items() if abs(c) == 1 and not first.coefficient(s)),
                        key=lambda s: s.sort_key())
    if not candidates:
        logger.warning(f"No separating symbol for {term.render(w)} and {term.render(w2)}")
        return Lemma6Result(status="counterexample", detail=f"psi(w)={first}, psi(w')={second}")

    return Lemma6Result(status="witness", detail=str(candidates[0]), witness=candidates[0])


@dataclass(kw_only=True)
class Corollary1Result:
    size: int
    alpha_count: int
    delta_count: int

    @property
    def vacuous(self) -> bool:
        return self.alpha_count == self.size

    @property
    def holds(self) -> bool:
        return self.vacuous or self.delta_count > self.alpha_count


def corollary1_check(words: Iterable[LoopTerm], alpha: Assignment,
                     mode: Mode = Mode.NONCOMMUTATIVE) -> Corollary1Result:
    """Compare the number of distinct alpha-images and delta-images of a component-closed word set.

    Whenever alpha is not injective on the set, delta has to separate strictly more elements.
    """
    word_set = frozenset(words)
    for w in word_set:
        if missing := term.components(w) - word_set:
            error_msg = f"Set is not closed under components: {term.render(next(iter(missing)))} is missing"
            raise NotComponentClosedError(error_msg)

    memo: dict[LoopTerm, Any] = {}
    la_memo: dict[LoopTerm, LAElement] = {}
    alpha_images = {alpha.alpha(w, memo) for w in word_set}
    delta_images = {delta(w, alpha, mode, la_memo) for w in word_set}

    return Corollary1Result(size=len(word_set), alpha_count=len(alpha_images), delta_count=len(delta_images))


def component_closure(words: Iterable[LoopTerm]) -> frozenset[LoopTerm]:
    return frozenset(itertools.chain.from_iterable(term.components(w) for w in words))


def corollary1_families(words: Iterable[LoopTerm], alpha: Assignment) -> Iterator[frozenset[LoopTerm]]:
    """Yield component-closed sets on which alpha fails to be injective.

    These are the closures of pairs of distinct words with equal alpha-image, followed by the closures of
    every leaf-count layer.
    """
    word_list = list(words)
    memo: dict[LoopTerm, Any] = {}

    by_value: dict[Any, list[LoopTerm]] = defaultdict(list)
    for w in word_list:
        by_value[alpha.alpha(w, memo)].append(w)

    for group in by_value.values():
        for first, second in itertools.combinations(group, 2):
            yield component_closure([first, second])

    max_leaves = max((term.leaf_count(w) for w in word_list), default=0)
    for leaves in range(1, max_leaves + 1):
        yield component_closure(w for w in word_list if term.leaf_count(w) <= leaves)
# endregion
