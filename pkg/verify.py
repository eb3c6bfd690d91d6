"""Named verification suites.

Each suite is a generator of CheckResult objects, registered in SUITE_LIST the same way commands are
registered in `command_list`. Grid checks are exhaustive over an integer box, word checks are exhaustive
over enumerated reduced words, and everything random draws from a seeded numpy Generator so that two runs
with the same options give the same report.
"""

from __future__ import annotations  # Python 3.14 feature for deferred annotations

import itertools
import math
import time
from collections import defaultdict
from collections.abc import Callable, Iterator
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from loguru import logger

import common
import higman
import higman_hopf
import hopf
import loops
import magnus
import series
import term
from common import Mode
from magnus import MagnusConfig
from series import ONE, NSeries

PASS = "pass"
FAIL = "fail"
SKIPPED = "skipped"

SOUNDNESS_TOP_DEGREE = 6


# ==========================
# REPORTS
# ==========================
# region
@dataclass(kw_only=True)
class CheckResult:
    check_id: str
    status: str
    detail: str = ""

    def to_json(self) -> dict[str, str]:
        return {"check": self.check_id, "status": self.status, "detail": self.detail}


@dataclass(kw_only=True)
class SuiteReport:
    """All checks of one suite run, in the order the suite produced them."""

    name: str
    checks: list[CheckResult]
    wall_time: float = field(default=0.0)

    @property
    def passed(self) -> bool:
        return all(check.status != FAIL for check in self.checks)

    @property
    def failures(self) -> list[CheckResult]:
        return [check for check in self.checks if check.status == FAIL]

    def to_json(self, *, include_timing: bool = False) -> dict[str, Any]:
        data: dict[str, Any] = {
            "suite": self.name,
            "passed": self.passed,
            "checks": [check.to_json() for check in self.checks],
        }
        if include_timing:
            data["wall_time"] = round(self.wall_time, 3)
        return data

    def render(self) -> str:
        lines = [f"suite {self.name}: {'PASS' if self.passed else 'FAIL'} ({len(self.checks)} checks)"]
        for check in self.checks:
            detail = f" ({check.detail})" if check.detail else ""
            lines.append(f"  [{check.status}] {check.check_id}{detail}")
        return "\n".join(lines)


@dataclass(kw_only=True)
class SuiteOptions:
    """Bounds shared by every suite; None means the suite picks its own default."""

    degree: int | None = None
    leaves: int | None = None
    grid: int = 5
    seed: int = common.DEFAULT_SEED
    samples: int = 1000

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)


def check(check_id: str, passed: bool, detail: str = "") -> CheckResult:  # noqa: FBT001
    return CheckResult(check_id=check_id, status=PASS if passed else FAIL, detail=detail)


def skip(check_id: str, detail: str) -> CheckResult:
    return CheckResult(check_id=check_id, status=SKIPPED, detail=detail)


def _first_failure[T](items: Iterator[T] | list[T], predicate: Callable[[T], bool]) -> T | None:
    return next((item for item in items if not predicate(item)), None)


def _grid_pairs(bound: int) -> list[loops.Pair]:
    return list(itertools.product(range(-bound, bound + 1), repeat=2))


def _modes() -> tuple[Mode, Mode]:
    return (Mode.NONCOMMUTATIVE, Mode.COMMUTATIVE)


def _words_with_identity() -> list[term.LoopTerm]:
    """Words with at most two leaves that have e as a proper subword, such as e/x1 or e\\e."""
    atoms = [term.IDENTITY, term.Gen(1), term.Gen(2)]
    return [operation(left, right) for operation in (term.Mul, term.LDiv, term.RDiv)
            for left, right in itertools.product(atoms, repeat=2) if term.IDENTITY in (left, right)]


def _reduce_keeps_magnus(w: term.LoopTerm, leaves: int, degree: int, top_degree: int, mode: Mode) -> bool:
    cfg = MagnusConfig(2, top_degree if term.leaf_count(w) >= leaves else degree, mode)
    return magnus.magnus(term.reduce(w, mode), cfg) == magnus.magnus(w, cfg)
# endregion


# ==========================
# INTEGER-PAIR LOOPS
# ==========================
# region
def _pair_loop_checks(loop: loops.IntPairLoopBase, options: SuiteOptions) -> Iterator[CheckResult]:
    """Checks shared by both pair loops: axioms, embedding multiplicativity and injectivity."""
    grid = _grid_pairs(options.grid)
    prefix = loop.name

    violations = loop.check_axioms(itertools.product(grid, repeat=2))
    yield check(f"{prefix}.axioms", not violations, violations[0] if violations else f"{len(grid) ** 2} pairs")

    def multiplicative(pair: tuple[loops.Pair, loops.Pair]) -> bool:
        x, y = pair
        return series.mul(loop.embed(x), loop.embed(y)) == loop.embed(loop.mul(x, y))

    bad = _first_failure(itertools.product(grid, repeat=2), multiplicative)
    yield check(f"{prefix}.embed-multiplicative", bad is None, f"fails at {bad}" if bad else "")

    images = {loop.embed(x).canonical_key(): x for x in grid}
    one = NSeries.constant(1, loop.embedding_degree, loop.embedding_mode)
    trivial = [x for x in grid if loop.embed(x) == one]
    yield check(f"{prefix}.embed-injective", len(images) == len(grid) and trivial == [(0, 0)],
                f"{len(images)} distinct images of {len(grid)} points")


def _filtration_check(loop: loops.IntPairLoopBase, options: SuiteOptions, top: int) -> CheckResult:
    """D_2 = ... = D_top = {(0, q)} and D_(top+1) trivial, read off the embedding."""
    failures = []
    for x in _grid_pairs(options.grid):
        low = loops.loop_dimension_degree(x, loop)
        expected = math.inf if x == (0, 0) else (top if x[0] == 0 else 1)
        if low != expected:
            failures.append(f"{x}: {low}")
    return check(f"{loop.name}.filtration", not failures, failures[0] if failures else f"D_2 = D_{top} = {{(0,q)}}")


def prop3_suite(options: SuiteOptions) -> Iterator[CheckResult]:
    loop = loops.IntPairCommLoop()
    rng = options.rng()
    box = range(-options.grid, options.grid + 1)

    yield from _pair_loop_checks(loop, options)

    expected_unit = NSeries({ONE: 1, loops.X3X: -1, loops.X2X2: 1}, 4, Mode.COMMUTATIVE)
    yield check("prop3.embed-unit", loops.embed_prop3((0, 1)) == expected_unit, str(loops.embed_prop3((0, 1))))

    quartic = NSeries({loops.X2X2: 1, loops.X3X: -1}, 4, Mode.COMMUTATIVE)
    recovered = series.left_divide(loops.embed_prop3((4, 0)), quartic)
    yield check("prop3.d4-witness",
                recovered == loops.embed_prop3((0, 1)) - quartic.unit_like() and series.low_degree(quartic) == 4,
                "(0,1) - 1 = (4,0) \\ (X^2X^2 - X^3X), low degree 4")

    yield _filtration_check(loop, options, 4)

    def weight2(values: tuple[int, int, int, int]) -> bool:
        p, r, a, b = values
        shift = a * p * r * (p - r)
        word = loops.commutator(loops.translation((p, 0)), loops.translation((r, 0)))
        return shift % 2 == 0 and loops.lmlt_apply(loop, word, (a, b)) == (a, b + shift // 2)

    bad = _first_failure(itertools.product(box, repeat=4), weight2)
    yield check("prop3.commutator-weight2", bad is None, f"fails at (p,r,a,b)={bad}" if bad else "")

    def weight3(values: tuple[int, int, int, int]) -> bool:
        s, p, r, a = values
        b = int(rng.integers(-options.grid, options.grid + 1))
        shift = p * r * s * (p - r)
        inner = loops.commutator(loops.translation((p, 0)), loops.translation((r, 0)))
        word = loops.commutator(loops.translation((s, 0)), inner)
        return shift % 2 == 0 and loops.lmlt_apply(loop, word, (a, b)) == (a, b - shift // 2)

    bad = _first_failure(itertools.product(box, repeat=4), weight3)
    yield check("prop3.commutator-weight3", bad is None, f"fails at (s,p,r,a)={bad}" if bad else "")

    points = [loop.sample(rng, options.grid) for _ in range(5)]

    def central(values: tuple[int, int, int]) -> bool:
        q, pp, qq = values
        word = loops.commutator(loops.translation((0, q)), loops.translation((pp, qq)))
        return all(loops.lmlt_apply(loop, word, x) == x for x in points)

    bad = _first_failure(itertools.product(box, repeat=3), central)
    yield check("prop3.centrality", bad is None, f"L_(0,{bad[0]}) fails against ({bad[1]},{bad[2]})" if bad else "")

    witness = loops.lmlt_apply(loop, loops.commutator(loops.translation((2, 0)), loops.translation((1, 0))), (3, 0))
    unit_letters = [loops.translation((1, 0)), loops.translation((2, 0)), loops.translation((1, 0))]
    triple = loops.nested_commutator(unit_letters)
    shifted = all(loops.lmlt_apply(loop, triple, (a, b)) == (a, b - 1) for a, b in points)
    yield check("prop3.witnesses", witness == (3, 3) and shifted, f"[L_(2,0),L_(1,0)](3,0) = {witness}")

    profile = loops.lmlt_class_profile(loop, rng, max_weight=4, bound=options.grid, samples=options.samples)
    yield check("prop3.class", profile == {2: True, 3: True, 4: False}, f"non-trivial weights: {profile}")


def prop4_suite(options: SuiteOptions) -> Iterator[CheckResult]:
    loop = loops.IntPairLoop()
    rng = options.rng()
    box = range(-options.grid, options.grid + 1)

    yield from _pair_loop_checks(loop, options)

    solved = loops.solve_prop4_coefficients()
    yield check("prop4.embed-coefficients", solved == loops.PROP4_COEFFICIENTS, str(solved))

    yield _filtration_check(loop, options, 3)

    def weight2(values: tuple[int, int, int, int]) -> bool:
        p, r, a, b = values
        word = loops.commutator(loops.translation((p, 0)), loops.translation((r, 0)))
        expected = (a, b + loops.binomial(p, 2) * r - loops.binomial(r, 2) * p)
        return loops.lmlt_apply(loop, word, (a, b)) == expected

    bad = _first_failure(itertools.product(box, repeat=4), weight2)
    yield check("prop4.commutator-weight2", bad is None, f"fails at (p,r,a,b)={bad}" if bad else "")

    profile = loops.lmlt_class_profile(loop, rng, max_weight=3, bound=options.grid, samples=options.samples)
    yield check("prop4.class", profile == {2: True, 3: False}, f"non-trivial weights: {profile}")

    one_plus_x = NSeries.unit_plus_variable(1, 3)
    square = series.mul(one_plus_x, one_plus_x)
    associator = series.mul(square, one_plus_x) - series.mul(one_plus_x, square)
    difference = loops.embed_prop4((3, 1)) - loops.embed_prop4((3, 0))
    recovered = series.left_divide(loops.embed_prop4((3, 0)), difference)
    yield check("prop4.d3-witness",
                difference == associator and recovered == loops.embed_prop4((0, 1)) - one_plus_x.unit_like()
                and series.low_degree(difference) == 3,
                "(3,1) - (3,0) = ((1+X)(1+X))(1+X) - (1+X)((1+X)(1+X))")
# endregion


# ==========================
# MAGNUS MAPS
# ==========================
# region
def magnus_suite(options: SuiteOptions) -> Iterator[CheckResult]:
    degree = options.degree or 8
    leaves = options.leaves or 4

    for mode in _modes():
        cfg = MagnusConfig(2, degree, mode)
        # The top leaf layer of unreduced words is checked at a lower truncation degree
        soundness_degree = min(degree, SOUNDNESS_TOP_DEGREE)
        words = _words_with_identity() + term.enumerate_words(2, leaves)
        bad = _first_failure(words, lambda w, m=mode: _reduce_keeps_magnus(w, leaves, degree, soundness_degree, m))
        yield check(f"magnus.reduce-invariant.{mode.value}", bad is None,
                    f"fails at {term.render(bad)}" if bad else
                    f"{len(words)} words, N={degree} below {leaves} leaves and N={soundness_degree} at {leaves}")

        reduced = term.enumerate_reduced(2, leaves, mode)
        bad = _first_failure(reduced, lambda w, cfg=cfg: w == term.IDENTITY
                             or magnus.dimension_degree(w, cfg).value >= 1)
        yield check(f"magnus.dimension-positive.{mode.value}", bad is None, f"{len(reduced)} reduced words")

        small = term.enumerate_reduced(2, min(leaves, 3), mode)
        modified = MagnusConfig.modified(2, 4, mode)
        bad = _first_failure(small, lambda w, cfg=modified: hopf.is_grouplike(magnus.magnus(w, cfg)))
        yield check(f"magnus.grouplike.{mode.value}", bad is None,
                    f"fails at {term.render(bad)}" if bad else f"{len(small)} words at N=4")

        classical = modified.classical()
        shift = {i: magnus.generator_image(i, modified) - NSeries.constant(1, 4, mode) for i in (1, 2)}
        bad = _first_failure(small, lambda w, c=classical, m=modified: series.substitute(magnus.magnus(w, c), shift)
                             == magnus.magnus(w, m))
        yield check(f"magnus.classical-to-modified.{mode.value}", bad is None,
                    f"fails at {term.render(bad)}" if bad else "X_i -> e(X_i) - 1 sends M(w) to M'(w)")

    commutator = term.parse("(x1*x2)/(x2*x1)")
    expected = NSeries({ONE: 1, (1, 2): 1, (2, 1): -1}, 2)
    yield check("magnus.commutator-series", magnus.magnus(commutator, MagnusConfig(2, 2)) == expected,
                "1 + X1X2 - X2X1 at N=2")

    cfg = MagnusConfig(3, max(degree, 4))
    associator = term.parse("((x1*x2)*x3)/(x1*(x2*x3))")
    found = (magnus.dimension_degree(commutator, cfg), magnus.dimension_degree(associator, cfg))
    yield check("magnus.dimension-degrees", (found[0].value, found[1].value) == (2, 3),
                f"commutator {found[0]}, associator {found[1]}")

    verdicts = (magnus.in_dimension_subloop(term.parse("x1"), 1, cfg),
                magnus.in_dimension_subloop(commutator, 3, cfg),
                magnus.in_dimension_subloop(associator, 3, cfg),
                magnus.in_dimension_subloop(associator, 4, cfg),
                magnus.in_dimension_subloop(term.IDENTITY, degree + 5, cfg))
    yield check("magnus.dimension-verdicts", verdicts == (True, False, True, False, True), str(verdicts))


def injectivity_suite(options: SuiteOptions) -> Iterator[CheckResult]:
    degree = options.degree or 8
    leaves = options.leaves or 4

    for mode in _modes():
        report = magnus.injectivity_scan(leaves, MagnusConfig(2, degree, mode))
        detail = f"{report.words_scanned} words, {len(report.collisions)} collisions at N={degree}"
        yield check(f"injectivity.{mode.value}", report.passed, detail)


def lemma_first_suite(options: SuiteOptions) -> Iterator[CheckResult]:
    rendered = term.render(loops.lmlt_term_apply(loops.commutator(loops.translation(3), loops.translation(2)),
                                                 term.Gen(1)))
    yield check("lemma-first.word", rendered == "x3\\(x2\\(x3*(x2*x1)))", rendered)

    for n in range(2, 5):
        degree = max(options.degree or 0, n + 2)
        report = loops.lemma_first_check(n, degree)
        detail = f"low degree {report.low_degree}, leading {report.leading_term}"
        yield check(f"lemma-first.n{n}.degree", report.low_degree >= n, detail)
        yield check(f"lemma-first.n{n}.right-normed", report.right_normed_only and report.flattened_matches,
                    "flattening gives the free group Magnus series")
# endregion


# ==========================
# HIGMAN CONSTRUCTION
# ==========================
# region
def prop5_suite(_: SuiteOptions) -> Iterator[CheckResult]:
    alpha = higman.alpha_abelianization(3)
    a1, a2, a3 = alpha.images
    la_loop = higman.LALoop(alpha.loop)
    y = term.parse("x3\\(x2\\(x3*(x2*x1)))")

    expected = (higman.AElement.symbol(higman.GenSymbol(1)) + la_loop.pair(a2, a1)
                + la_loop.pair(a3, alpha.loop.mul(a2, a1)) - la_loop.pair(a2, alpha.loop.mul(a3, a1))
                - la_loop.pair(a3, a1))
    yield check("prop5.psi-expansion", higman.psi(y, alpha) == expected, str(higman.psi(y, alpha)))

    for n in range(3, 7):
        witness = higman.prop5_witness(n)
        yield check(f"prop5.n{n}", witness.passed,
                    f"coefficient {witness.coefficient}, alpha(y) = {witness.alpha_value}")


def _word_pairs_with_equal_alpha(words: list[term.LoopTerm],
                                 alpha: higman.Assignment) -> Iterator[tuple[term.LoopTerm, term.LoopTerm]]:
    memo: dict[term.LoopTerm, Any] = {}
    by_value: dict[Any, list[term.LoopTerm]] = defaultdict(list)
    for w in words:
        by_value[alpha.alpha(w, memo)].append(w)

    for group in by_value.values():
        yield from itertools.permutations(group, 2)


def lemma6_suite(options: SuiteOptions) -> Iterator[CheckResult]:
    leaves = options.leaves or 4
    rng = options.rng()
    alpha = higman.alpha_abelianization(2)

    bases: list[loops.Loop[Any]] = [loops.FreeAbelianGroup(3), loops.IntPairCommLoop()]
    for base in bases:
        la_loop = higman.LALoop(base)
        violations = la_loop.check_axioms(la_loop.sample_pairs(rng, options.samples, options.grid))
        yield check(f"lemma6.la-axioms.{base.name}", not violations, violations[0] if violations else "")

    for mode in _modes():
        words = term.enumerate_reduced(2, leaves, mode)

        la_loop = higman.LALoop(alpha.loop, mode)
        memo: dict[term.LoopTerm, higman.LAElement] = {}
        picks = [(words[int(rng.integers(len(words)))], words[int(rng.integers(len(words)))]) for _ in range(200)]
        bad = _first_failure(picks, lambda uv, m=mode, lm=la_loop, mm=memo: higman.delta(term.Mul(*uv), alpha, m, mm)
                             == lm.mul(higman.delta(uv[0], alpha, m, mm), higman.delta(uv[1], alpha, m, mm)))
        yield check(f"lemma6.delta-homomorphism.{mode.value}", bad is None,
                    f"fails at {term.render(bad[0])}, {term.render(bad[1])}" if bad else "200 random pairs")

        counts: dict[str, int] = defaultdict(int)
        counterexamples = []
        for w, w2 in _word_pairs_with_equal_alpha(words, alpha):
            result = higman.lemma6_check(w, w2, alpha, mode)
            counts[result.status] += 1
            if result.status == "counterexample":
                counterexamples.append(f"{term.render(w)} / {term.render(w2)}")

        check_id = f"lemma6.separating-symbol.{mode.value}"
        detail = f"{counts['witness']} witnesses, {counts['hypothesis-failed']} pairs outside the hypotheses"
        if counts["witness"] == 0 and not counterexamples:
            yield skip(check_id, f"no pair within the hypotheses at {leaves} leaves")
        else:
            yield check(check_id, not counterexamples, counterexamples[0] if counterexamples else detail)

    degenerate = higman.lemma6_check(term.Gen(1), term.Gen(1), alpha)
    yield check("lemma6.hypothesis-report", degenerate.status == "hypothesis-failed", degenerate.detail)


def hc1_suite(options: SuiteOptions) -> Iterator[CheckResult]:
    leaves = options.leaves or 4
    alpha = higman.alpha_abelianization(2)

    sample = [term.parse(text) for text in ("e", "x1", "x2", "x1*x2", "x2*x1")]
    result = higman.corollary1_check(sample, alpha)
    yield check("hc1.example", (result.alpha_count, result.delta_count) == (4, 5),
                f"|alpha(S)| = {result.alpha_count}, |delta(S)| = {result.delta_count}")

    try:
        higman.corollary1_check([term.parse("x1*x2")], alpha)
        rejected = False
    except higman.NotComponentClosedError:
        rejected = True
    yield check("hc1.closure-required", rejected, "sets missing components are rejected")

    for mode in _modes():
        words = term.enumerate_reduced(2, leaves, mode)
        families = 0
        failures = []
        for family in higman.corollary1_families(words, alpha):
            outcome = higman.corollary1_check(family, alpha, mode)
            if outcome.vacuous:
                continue
            families += 1
            if not outcome.holds:
                failures.append(f"{outcome.size} words, {outcome.alpha_count} alpha, {outcome.delta_count} delta")

        check_id = f"hc1.families.{mode.value}"
        if families == 0:
            yield skip(check_id, f"every family is vacuous at {leaves} leaves")
        else:
            yield check(check_id, not failures, failures[0] if failures else f"{families} component-closed families")
# endregion


# ==========================
# HOPF-ALGEBRAIC CONSTRUCTION
# ==========================
# region
def _hopf_base_checks(mode: Mode) -> Iterator[CheckResult]:
    base = hopf.exp_base(6, mode)
    variable = NSeries.variable(1, 6, mode)
    log_series = hopf.log_base(base)

    yield check(f"hopf.exp-grouplike.{mode.value}", hopf.is_grouplike(base), "N=6")
    yield check(f"hopf.log-of-exp.{mode.value}", series.eval_univariate(log_series, base - base.unit_like())
                == variable, "log_e(e(X)) = X at N=6")
    yield check(f"hopf.exp-of-log.{mode.value}", series.eval_univariate(base, log_series)
                == NSeries.unit_plus_variable(1, 6, mode), "e(log_e(1+X)) = 1+X at N=6")


def hopf_higman_suite(options: SuiteOptions) -> Iterator[CheckResult]:
    degree = options.degree or 4
    leaves = options.leaves or 3
    rng = options.rng()

    for mode in _modes():
        yield from _hopf_base_checks(mode)

        pairs = [(series.random_unit_series(rng, 2, 3, mode=mode), series.random_unit_series(rng, 2, 3, mode=mode))
                 for _ in range(5)]
        bad = _first_failure(pairs, lambda ab: hopf.coproduct(series.mul(*ab))
                             == hopf.coproduct(ab[0]) * hopf.coproduct(ab[1]))
        yield check(f"hopf.coproduct-multiplicative.{mode.value}", bad is None, "5 random pairs at N=3")

        bad = _first_failure(pairs, lambda ab: higman_hopf.tstar_coproduct_check(*ab))
        yield check(f"higman-hopf.tstar-coalgebra.{mode.value}", bad is None, "5 random pairs at N=3")

        cfg = MagnusConfig.modified(2, degree, mode)
        g1, g2 = higman_hopf.grouplike_images([term.Gen(1), term.Gen(2)], cfg)
        yield check(f"higman-hopf.tstar-exp.{mode.value}",
                    higman_hopf.t_star(g1, g2) == higman_hopf.t_map(g1, g2).exp(), f"M'(x1), M'(x2) at N={degree}")

        unit = higman_hopf.MixedSeries({(ONE, ()): 1}, degree, mode)
        x1, x2 = (higman_hopf.magnus_tilde(term.Gen(i), cfg) for i in (1, 2))
        product = higman_hopf.mixed_mul(x1, x2)
        unital = higman_hopf.mixed_mul(unit, product) == product == higman_hopf.mixed_mul(product, unit)
        yield check(f"higman-hopf.unital.{mode.value}", unital, "1 (x) 1 is a two-sided unit")

        if mode.is_commutative:
            yield check("higman-hopf.commutative-product", product == higman_hopf.mixed_mul(x2, x1),
                        "M~'(x1) M~'(x2) = M~'(x2) M~'(x1)")

        divided = (higman_hopf.mixed_mul(x2, higman_hopf.mixed_left_divide(x2, product)) == product
                   and higman_hopf.mixed_mul(higman_hopf.mixed_right_divide(product, x2), x2) == product)
        yield check(f"higman-hopf.divisions.{mode.value}", divided, "b(b\\a) = a and (a/b)b = a")

        expected_linear = higman_hopf.MixedSeries({(1, ()): 1, (ONE, (higman_hopf.TGen(1),)): 1}, degree, mode)
        linear = higman_hopf.phi_apply(NSeries.variable(1, degree, mode), cfg).homogeneous(1)
        yield check(f"higman-hopf.phi-linear.{mode.value}", linear == expected_linear, str(linear))

        small_cfg = MagnusConfig.modified(2, 3, mode)
        bad = _first_failure(pairs, lambda ab, c=small_cfg: higman_hopf.phi_apply(series.mul(*ab), c)
                             == higman_hopf.mixed_mul(higman_hopf.phi_apply(ab[0], c),
                                                      higman_hopf.phi_apply(ab[1], c)))
        yield check(f"higman-hopf.phi-multiplicative.{mode.value}", bad is None, "5 random pairs at N=3")

        words = term.enumerate_reduced(2, leaves, mode)
        bad = _first_failure(words, lambda w, c=cfg: higman_hopf.phi_apply(magnus.magnus(w, c), c)
                             == higman_hopf.magnus_tilde(w, c))
        yield check(f"higman-hopf.phi-intertwines.{mode.value}", bad is None,
                    f"fails at {term.render(bad)}" if bad else f"{len(words)} words at N={degree}")

        plain_classes: dict[tuple, set[term.LoopTerm]] = defaultdict(set)
        tilde_classes: dict[tuple, set[term.LoopTerm]] = defaultdict(set)
        for w in words:
            plain_classes[magnus.magnus(w, cfg).canonical_key()].add(w)
            tilde_classes[higman_hopf.magnus_tilde(w, cfg).canonical_key()].add(w)
        same = {frozenset(c) for c in plain_classes.values()} == {frozenset(c) for c in tilde_classes.values()}
        yield check(f"higman-hopf.same-collisions.{mode.value}", same, "M' and M~' identify the same words")

        g12 = magnus.magnus(term.parse("x1*x2"), cfg)
        report = higman_hopf.lemma_a_check([(g1, g2), (g2, g12)], alphabet_size=2, exponent_bound=2,
                                           degree_bound=degree)
        yield check(f"higman-hopf.independence.{mode.value}", report.passed,
                    f"rank {report.rank} of {report.generator_count}, {report.vectors_checked} vectors in [-2,2]")
# endregion


SuiteAnn = Callable[[SuiteOptions], Iterator[CheckResult]]

SUITE_LIST: list[tuple[str, SuiteAnn]] = [
    ("prop3", prop3_suite),
    ("prop4", prop4_suite),
    ("magnus", magnus_suite),
    ("injectivity", injectivity_suite),
    ("lemma-first", lemma_first_suite),
    ("prop5", prop5_suite),
    ("lemma6", lemma6_suite),
    ("hc1", hc1_suite),
    ("hopf-higman", hopf_higman_suite),
]


def suite_names() -> list[str]:
    return [name for name, _ in SUITE_LIST]


def run_suite(name: str, options: SuiteOptions) -> SuiteReport:
    suites = dict(SUITE_LIST)
    if name not in suites:
        error_msg = f"Unknown suite '{name}', expected one of {', '.join(suite_names())}"
        raise KeyError(error_msg)

    start = time.perf_counter()
    checks = list(suites[name](options))
    report = SuiteReport(name=name, checks=checks, wall_time=time.perf_counter() - start)

    for failure in report.failures:
        logger.warning(f"Suite {name}: check {failure.check_id} failed ({failure.detail})")
    logger.debug(f"Suite {name} finished {len(checks)} checks in {report.wall_time:.2f}s")
    return report


def run_all(options: SuiteOptions) -> list[SuiteReport]:
    return [run_suite(name, options) for name in suite_names()]
