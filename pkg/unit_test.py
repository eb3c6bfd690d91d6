"""Module for unit testing words, series, loops and the commands built on them.

Word cases in INPUT_LIST are run through every function of TEST_LIST; the functions of CHECK_LIST
take no input. Bounds are kept small here, the full acceptance bounds live in the suites of `verify`.
"""

from __future__ import annotations  # Python 3.14 feature for deferred annotations

import asyncio
import contextlib
import io
import json
import os
import string
from collections.abc import AsyncGenerator, Callable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

import numpy as np
from loguru import logger

import command
import command_list
import common
import higman
import higman_hopf
import hopf
import loops
import magnus
import series
import term
import verify
from common import Mode
from magnus import MagnusConfig
from main import build_parser
from series import ONE, NSeries
from term import IDENTITY, Gen, LDiv, Mul, RDiv

NC = Mode.NONCOMMUTATIVE
COMM = Mode.COMMUTATIVE
SEED = 7


def raises(exception: type[BaseException], function: Callable[..., Any], *args: Any) -> bool:
    try:
        function(*args)
    except exception:
        return True
    return False


def one_plus(index: int, degree_bound: int, mode: Mode = NC) -> NSeries:
    return NSeries.unit_plus_variable(index, degree_bound, mode)


def x(index: int, degree_bound: int, mode: Mode = NC) -> NSeries:
    return NSeries.variable(index, degree_bound, mode)


type Reducer = Callable[[term.LoopTerm, Mode], term.LoopTerm]

# Each word case is reduced three ways: recursively, and one redex at a time from either side
REDUCERS: list[Reducer] = [
    term.reduce,
    lambda w, mode: term.reduce_stepwise(w, mode),
    lambda w, mode: term.reduce_stepwise(w, mode, rightmost=True),
]


# ==========================
# WORD TESTS
# ==========================
# region
async def test_reduce(reducer: Reducer, item: WordCase) -> bool:
    return term.render(reducer(term.parse(item.text), item.mode)) == item.reduced


async def test_reduce_idempotent(reducer: Reducer, item: WordCase) -> bool:
    once = reducer(term.parse(item.text), item.mode)
    return reducer(once, item.mode) == once and term.is_reduced(once, item.mode)


async def test_is_reduced(_: Reducer, item: WordCase) -> bool:
    return term.is_reduced(term.parse(item.text), item.mode) == item.is_reduced


async def test_leaf_count(_: Reducer, item: WordCase) -> bool:
    return term.leaf_count(term.parse(item.text)) == item.leaves


async def test_render_parse(_: Reducer, item: WordCase) -> bool:
    w = term.parse(item.text)
    return term.parse(term.render(w)) == w


async def test_reduce_keeps_magnus(reducer: Reducer, item: WordCase) -> bool:
    w = term.parse(item.text)
    cfg = MagnusConfig(3, 5, item.mode)
    return magnus.magnus(w, cfg) == magnus.magnus(reducer(w, item.mode), cfg)


TEST_LIST = [
    test_reduce,
    test_reduce_idempotent,
    test_is_reduced,
    test_leaf_count,
    test_render_parse,
    test_reduce_keeps_magnus,
]
# endregion


# ==========================
# INPUTS
# ==========================
# region
@dataclass(kw_only=True)
class WordCase:
    """Dataclass for describing a word and what is expected of it in one mode."""

    text: str
    mode: Mode
    reduced: str
    is_reduced: bool
    leaves: int


INPUT_LIST: list[WordCase] = [
    WordCase(text="e", mode=NC, reduced="e", is_reduced=True, leaves=0),
    WordCase(text="x3", mode=NC, reduced="x3", is_reduced=True, leaves=1),
    WordCase(text="x1\\(x1*x2)", mode=NC, reduced="x2", is_reduced=False, leaves=3),
    WordCase(text="x1*(x1\\x2)", mode=NC, reduced="x2", is_reduced=False, leaves=3),
    WordCase(text="((x1*x2)/x2)", mode=NC, reduced="x1", is_reduced=False, leaves=3),
    WordCase(text="x1/x1", mode=NC, reduced="e", is_reduced=False, leaves=2),
    WordCase(text="x1/(x2\\x1)", mode=NC, reduced="x2", is_reduced=False, leaves=3),
    WordCase(text="x1*(x2\\x1)", mode=NC, reduced="x1*(x2\\x1)", is_reduced=True, leaves=3),
    WordCase(text="x1*x2", mode=NC, reduced="x1*x2", is_reduced=True, leaves=2),
    WordCase(text="x1*x2", mode=COMM, reduced="x1*x2", is_reduced=True, leaves=2),
    WordCase(text="x2*x1", mode=COMM, reduced="x1*x2", is_reduced=False, leaves=2),
    WordCase(text="x1/x2", mode=NC, reduced="x1/x2", is_reduced=True, leaves=2),
    WordCase(text="x1/x2", mode=COMM, reduced="x2\\x1", is_reduced=False, leaves=2),
    WordCase(text="(x2*x1)\\(x1*x2)", mode=COMM, reduced="e", is_reduced=False, leaves=4),
    WordCase(text=" ( x1 * e ) \\ x1 ", mode=NC, reduced="e", is_reduced=False, leaves=2),
]
# endregion


# ==========================
# TERM CHECKS
# ==========================
# region
async def test_parse_examples() -> bool:
    return (term.parse("e") == IDENTITY
            and term.parse("x1\\(x1*x2)") == LDiv(Gen(1), Mul(Gen(1), Gen(2)))
            and term.parse("((x1*x2)/x2)") == RDiv(Mul(Gen(1), Gen(2)), Gen(2)))


async def test_parse_errors() -> bool:
    try:
        term.parse("x1*x2*x3")
    except term.TermSyntaxError as e:
        position = e.position
    else:
        return False

    return (position == 5
            and raises(term.TermSyntaxError, term.parse, "(x1*x2")
            and raises(term.TermSyntaxError, term.parse, "x0")
            and raises(term.TermSyntaxError, term.parse, "x1+x2")
            and raises(term.GeneratorRangeError, term.parse, "x1*x3", 2))


async def test_components() -> bool:
    w = Mul(Gen(1), Gen(2))
    return (term.components(IDENTITY) == {IDENTITY}
            and term.components(Gen(1)) == {IDENTITY, Gen(1)}
            and term.components(w) == {IDENTITY, Gen(1), Gen(2), w})


async def test_term_order() -> bool:
    ordered = [IDENTITY, Gen(1), Gen(2), Mul(Gen(1), Gen(1)), LDiv(Gen(1), Gen(1)), RDiv(Gen(1), Gen(1)),
               Mul(Gen(1), Mul(Gen(1), Gen(1)))]
    return sorted(reversed(ordered), key=term.term_order_key) == ordered


async def test_enumerate_small() -> bool:
    one_leaf = term.enumerate_reduced(2, 1, NC)
    two_leaves = {term.render(w) for w in term.enumerate_reduced(1, 2, NC)}
    return (term.enumerate_reduced(1, 1, NC) == [IDENTITY, Gen(1)]
            and one_leaf == [IDENTITY, Gen(1), Gen(2)]
            and two_leaves == {"e", "x1", "x1*x1"})


async def test_enumerate_reduced_unique() -> bool:
    for mode in (NC, COMM):
        words = term.enumerate_reduced(2, 3, mode)
        if len(set(words)) != len(words) or not all(term.is_reduced(w, mode) for w in words):
            return False

        # Every reduced word of the full enumeration shows up, and nothing else does
        expected = {w for w in term.enumerate_words(2, 3) if term.is_reduced(w, mode)}
        if set(words) != expected:
            return False

    return True


async def test_confluence() -> bool:
    for mode in (NC, COMM):
        for w in term.enumerate_words(2, 4):
            normal = term.reduce(w, mode)
            if term.reduce_stepwise(w, mode) != normal or term.reduce_stepwise(w, mode, rightmost=True) != normal:
                return False
    return True


async def test_rewrite_step_decreases() -> bool:
    for mode in (NC, COMM):
        for w in term.enumerate_words(2, 4):
            step = term.rewrite_step(w, mode)
            if step is not None and not term.term_order_key(step) < term.term_order_key(w):
                return False
    return True


async def test_reduce_idempotent_enumerated() -> bool:
    for mode in (NC, COMM):
        for w in term.enumerate_words(2, 5):
            once = term.reduce(w, mode)
            if term.reduce(once, mode) != once or not term.is_reduced(once, mode):
                return False
    return True


async def test_parse_nesting_cap() -> bool:
    text = "x1"
    for _ in range(term.MAX_NESTING):
        text = f"x2*({text})"
    deep = term.parse(text)

    too_deep = "(" * (term.MAX_NESTING + 1) + "x1" + ")" * (term.MAX_NESTING + 1)
    try:
        term.parse(too_deep)
        position = None
    except term.TermSyntaxError as e:
        position = e.position

    return (term.leaf_count(deep) == term.MAX_NESTING + 1 and term.is_reduced(term.reduce(deep, NC), NC)
            and position == term.MAX_NESTING
            and raises(term.TermSyntaxError, loops.evaluate_expression, too_deep.replace("x1", "(1,0)"),
                       loops.IntPairLoop()))


async def test_components_of_reduced() -> bool:
    words = term.enumerate_reduced(2, 3, NC)
    return all(term.is_reduced(c, NC) for w in words for c in term.components(w))


async def test_equal_in_free_loop() -> bool:
    a, b = term.parse("x1*x2"), term.parse("x2*x1")
    return (term.equal_in_free_loop(term.parse("(x1*x2)/x2"), Gen(1), NC)
            and not term.equal_in_free_loop(a, b, NC)
            and term.equal_in_free_loop(a, b, COMM))


async def test_word_cap() -> bool:
    previous = os.environ.get(common.ENV_MAX_WORDS)
    os.environ[common.ENV_MAX_WORDS] = "20"
    common.max_enumerated_words.cache_clear()
    try:
        return raises(common.ResourceCapError, term.enumerate_words, 2, 3)
    finally:
        if previous is None:
            os.environ.pop(common.ENV_MAX_WORDS)
        else:
            os.environ[common.ENV_MAX_WORDS] = previous
        common.max_enumerated_words.cache_clear()
# endregion


# ==========================
# SERIES CHECKS
# ==========================
# region
async def test_add_and_scale() -> bool:
    half = series.scale(Fraction(1, 2), NSeries({(1, 2): 1, (2, 1): -1}, 2))
    return (series.add(NSeries.constant(1, 2), NSeries.constant(-1, 2)) == NSeries({}, 2)
            and series.add(one_plus(1, 2), one_plus(2, 2)) == NSeries({ONE: 2, 1: 1, 2: 1}, 2)
            and half.coefficient((1, 2)) == Fraction(1, 2) and half.coefficient((2, 1)) == Fraction(-1, 2))


async def test_products() -> bool:
    single = series.mul(one_plus(1, 2, COMM), one_plus(1, 2, COMM))
    return (series.mul(one_plus(1, 2), one_plus(2, 2)) == NSeries({ONE: 1, 1: 1, 2: 1, (1, 2): 1}, 2)
            and single == NSeries({ONE: 1, 1: 2, (1, 1): 1}, 2, COMM))


async def test_associator() -> bool:
    a, b, c = one_plus(1, 3), one_plus(2, 3), one_plus(3, 3)
    difference = (a * b) * c - a * (b * c)
    return difference == NSeries({((1, 2), 3): 1, (1, (2, 3)): -1}, 3) and series.low_degree(difference) == 3


async def test_left_divide_formula() -> bool:
    x1 = x(1, 3)
    d = x(2, 3) - x1
    expected = NSeries.constant(1, 3) + d - x1 * d + x1 * (x1 * d)

    s = NSeries({ONE: 1, 1: 1, (1, 2): 3}, 3)
    return (series.left_divide(one_plus(1, 3), one_plus(2, 3)) == expected
            and series.left_divide(s, s) == NSeries.constant(1, 3)
            and series.left_divide(one_plus(1, 3), one_plus(1, 3) * one_plus(2, 3)) == one_plus(2, 3))


async def test_right_divide_commutator() -> bool:
    a = one_plus(1, 2) * one_plus(2, 2)
    b = one_plus(2, 2) * one_plus(1, 2)
    quotient = series.right_divide(a, b)
    return (quotient == NSeries({ONE: 1, (1, 2): 1, (2, 1): -1}, 2)
            and series.low_degree(quotient) == 2
            and series.right_divide(a, one_plus(2, 2)) == one_plus(1, 2))


async def test_low_degree() -> bool:
    return (series.low_degree(NSeries.constant(1, 4)) == float("inf")
            and series.low_degree(NSeries({ONE: 1, (1, 2): 1}, 4)) == 2)


async def test_division_axioms() -> bool:
    rng = np.random.default_rng(SEED)
    for mode in (NC, COMM):
        for _ in range(5):
            a = series.random_unit_series(rng, 2, 4, mode=mode)
            b = series.random_unit_series(rng, 2, 4, mode=mode)
            if not (b * series.left_divide(b, a) == a
                    and series.right_divide(a, b) * b == a
                    and series.left_divide(b, b * a) == a
                    and series.right_divide(a * b, b) == a):
                return False
    return True


async def test_division_errors() -> bool:
    return (raises(series.NotAUnitError, series.left_divide, x(1, 3), one_plus(1, 3))
            and raises(series.NotAUnitError, series.right_divide, one_plus(1, 3), x(2, 3))
            and raises(series.SeriesMismatchError, series.add, one_plus(1, 2), one_plus(1, 3))
            and raises(series.SeriesMismatchError, series.mul, one_plus(1, 3), one_plus(1, 3, COMM)))


async def test_drop_parens() -> bool:
    a, b, c = one_plus(1, 3), one_plus(2, 3), one_plus(3, 3)
    flat_associator = series.drop_parens((a * b) * c - a * (b * c))
    right_normed = series.drop_parens(NSeries({series.right_normed([1, 2, 3]): 1}, 3))

    rng = np.random.default_rng(SEED)
    for _ in range(5):
        u = series.random_unit_series(rng, 2, 4)
        v = series.random_unit_series(rng, 2, 4)
        if series.drop_parens(u * v) != series.drop_parens(u) * series.drop_parens(v):
            return False

    return (flat_associator == series.ASeries({}, 3)
            and right_normed == series.ASeries({(1, 2, 3): 1}, 3)
            and raises(series.CommutativeFlattenError, series.drop_parens, one_plus(1, 3, COMM)))


async def test_right_normed_flattening_injective() -> bool:
    for d in range(1, 7):
        monomials = [m for m in series.monomials_of_degree(d, 2, commutative=False) if series.is_right_normed(m)]
        if len({series.leaves(m) for m in monomials}) != len(monomials) or len(monomials) != 2 ** d:
            return False
    return True


async def test_monomial_census() -> bool:
    return all(len(series.monomials_of_degree(d, k, commutative=False)) == series.catalan(d - 1) * k ** d
               for d in range(1, 7) for k in (1, 2))


async def test_commutative_canonical() -> bool:
    monomials = list(series.iter_monomials(4, 2, commutative=True))
    return all(series.mono_mul(a, b, commutative=True) == series.mono_mul(b, a, commutative=True)
               for a in monomials for b in monomials)


async def test_left_divide_keeps_right_normed() -> bool:
    inner = series.left_divide(one_plus(2, 6), one_plus(1, 6))
    dividends = [one_plus(2, 6), hopf.exp_base(6), inner]
    if not all(series.right_normed_only(s) for s in dividends):
        return False

    quotients = [series.left_divide(one_plus(i, 6), s) for i in (1, 2) for s in dividends]
    return (all(series.right_normed_only(q) for q in quotients)
            and series.left_divide(one_plus(1, 6), one_plus(2, 6)).coefficient((1, 2)) == -1)


async def test_eval_univariate() -> bool:
    square = NSeries({(1, 1): 1}, 3)
    z = NSeries({1: 1, 2: 1}, 3)
    expected = NSeries({(1, 1): 1, (1, 2): 1, (2, 1): 1, (2, 2): 1}, 3)
    return (series.eval_univariate(square, z) == expected
            and series.eval_univariate(one_plus(1, 3), z) == NSeries.constant(1, 3) + z
            and raises(series.SubstitutionError, series.eval_univariate, square, one_plus(2, 3)))


async def test_render_series() -> bool:
    s = NSeries({ONE: 1, (1, 2): 1, (2, 1): -1}, 2)
    half = NSeries({ONE: 1, 1: Fraction(1, 2)}, 2)
    return (series.render_series(s) == "1 + 1*(x1*x2) + -1*(x2*x1)"
            and series.render_series(NSeries({}, 2)) == "0"
            and series.series_to_json(half) == [{"monomial": "1", "num": "1", "den": "1"},
                                                {"monomial": "x1", "num": "1", "den": "2"}])


async def test_group_magnus() -> bool:
    commutator = series.group_magnus([(1, -1), (2, -1), (1, 1), (2, 1)], 2)
    return commutator == series.ASeries({(): 1, (1, 2): 1, (2, 1): -1}, 2)
# endregion


# ==========================
# HOPF CHECKS
# ==========================
# region
async def test_exp_base_grouplike() -> bool:
    return all(hopf.is_grouplike(hopf.exp_base(6, mode)) for mode in (NC, COMM))


async def test_log_of_exp() -> bool:
    base = hopf.exp_base(6)
    log = hopf.log_base(base)
    return (series.eval_univariate(log, base - base.unit_like()) == x(1, 6)
            and series.eval_univariate(base, log) == one_plus(1, 6))


async def test_log_quadratic_term() -> bool:
    log = hopf.log_base(hopf.exp_base(4))
    return log.coefficient((1, 1)) == Fraction(-1, 2) and log.coefficient(1) == 1


async def test_coproduct_of_product() -> bool:
    x1, x2 = x(1, 4), x(2, 4)
    one = x1.unit_like()
    expected = (hopf.tensor(x1 * x2, one) + hopf.tensor(x1, x2)
                + hopf.tensor(x2, x1) + hopf.tensor(one, x1 * x2))
    return (hopf.coproduct(x1 * x2) == expected and hopf.coproduct(x1 * x2).counit_value == 0
            and hopf.coproduct(one).counit_value == 1 and hopf.is_grouplike(one))


async def test_primitive() -> bool:
    return (hopf.is_primitive(x(1, 4))
            and not hopf.is_primitive(one_plus(1, 4))
            and not hopf.is_grouplike(one_plus(1, 4)))


async def test_coproduct_multiplicative() -> bool:
    rng = np.random.default_rng(SEED)
    for _ in range(3):
        a = series.random_unit_series(rng, 2, 3)
        b = series.random_unit_series(rng, 2, 3)
        if hopf.coproduct(a * b) != hopf.coproduct(a) * hopf.coproduct(b):
            return False
    return True


async def test_check_base() -> bool:
    return (raises(hopf.BaseError, hopf.check_base, NSeries({ONE: 1, (1, 1): 1}, 3))
            and raises(hopf.BaseError, hopf.check_base, NSeries({ONE: 2, 1: 1}, 3))
            and raises(hopf.BaseError, hopf.check_base, one_plus(2, 3)))
# endregion


# ==========================
# MAGNUS CHECKS
# ==========================
# region
COMMUTATOR = "(x1*x2)/(x2*x1)"
ASSOCIATOR = "((x1*x2)*x3)/(x1*(x2*x3))"


async def test_generator_images() -> bool:
    return (magnus.magnus(Gen(1), MagnusConfig(1, 3)) == one_plus(1, 3)
            and magnus.magnus(Gen(1), MagnusConfig.modified(1, 3)) == hopf.exp_base(3)
            and raises(term.GeneratorRangeError, magnus.magnus, Gen(3), MagnusConfig(2, 3)))


async def test_dimension_degrees() -> bool:
    cfg = MagnusConfig(3, 4)
    commutator, associator = term.parse(COMMUTATOR), term.parse(ASSOCIATOR)
    return (magnus.dimension_degree(commutator, cfg) == magnus.DimensionDegree(2, saturated=False)
            and magnus.dimension_degree(associator, cfg) == magnus.DimensionDegree(3, saturated=False)
            and magnus.in_dimension_subloop(associator, 3, cfg) is True
            and magnus.in_dimension_subloop(associator, 4, cfg) is False)


async def test_dimension_saturation() -> bool:
    cfg = MagnusConfig(3, 2)
    associator = term.parse(ASSOCIATOR)
    found = magnus.dimension_degree(associator, cfg)
    return (found.saturated and str(found) == ">= 3"
            and magnus.in_dimension_subloop(associator, 3, cfg) is True
            and magnus.in_dimension_subloop(associator, 4, cfg) is None)


async def test_injectivity_scan() -> bool:
    for mode in (NC, COMM):
        report = magnus.injectivity_scan(3, MagnusConfig(2, 6, mode))
        if not report.passed or report.words_scanned != len(term.enumerate_reduced(2, 3, mode)):
            return False
    return True


async def test_collision_at_low_degree() -> bool:
    # At N=1 the images of x1*x2 and x2*x1 agree
    report = magnus.injectivity_scan(2, MagnusConfig(2, 1))
    return not report.passed and report.to_json()["passed"] is False


async def test_magnus_config_errors() -> bool:
    return (raises(ValueError, MagnusConfig, 2, 0)
            and raises(series.SeriesMismatchError, MagnusConfig, 2, 4, NC, hopf.exp_base(3)))
# endregion


# ==========================
# LOOP CHECKS
# ==========================
# region
def _pairs(bound: int) -> list[loops.Pair]:
    box = range(-bound, bound + 1)
    return [(p, q) for p in box for q in box]


async def test_pair_loop_axioms() -> bool:
    pairs = _pairs(2)
    for factory in loops.PAIR_LOOPS.values():
        loop = factory()
        if loop.check_axioms([(a, b) for a in pairs for b in pairs]):
            return False
    return True


async def test_embeddings_multiplicative() -> bool:
    pairs = _pairs(2)
    for factory in loops.PAIR_LOOPS.values():
        loop = factory()
        for a in pairs:
            for b in pairs:
                if loop.embed(loop.mul(a, b)) != loop.embed(a) * loop.embed(b):
                    return False
        if len({loop.embed(a) for a in pairs}) != len(pairs):
            return False
    return True


async def test_embed_prop3_unit() -> bool:
    expected = NSeries({ONE: 1, loops.X3X: -1, loops.X2X2: 1}, 4, COMM)
    return loops.embed_prop3((0, 1)) == expected


async def test_prop4_coefficients() -> bool:
    return loops.solve_prop4_coefficients() == loops.PROP4_COEFFICIENTS


async def test_loop_filtration() -> bool:
    commutative, plain = loops.IntPairCommLoop(), loops.IntPairLoop()
    return (loops.loop_dimension_degree((1, 0), commutative) == 1
            and loops.loop_dimension_degree((0, 1), commutative) == 4
            and loops.loop_dimension_degree((0, -2), plain) == 3
            and loops.loop_dimension_degree((0, 0), plain) == float("inf"))


async def test_prop3_commutators() -> bool:
    loop = loops.IntPairCommLoop()
    weight2 = loops.commutator(loops.translation((2, 0)), loops.translation((1, 0)))
    weight3 = loops.nested_commutator([loops.translation((1, 0)), loops.translation((2, 0)),
                                       loops.translation((1, 0))])
    return (loops.lmlt_apply(loop, weight2, (3, 0)) == (3, 3)
            and loops.lmlt_apply(loop, weight3, (2, 5)) == (2, 4))


async def test_prop4_commutator() -> bool:
    loop = loops.IntPairLoop()
    word = loops.commutator(loops.translation((2, 0)), loops.translation((1, 0)))
    return loops.lmlt_apply(loop, word, (4, 7)) == (4, 8)


async def test_class_profiles() -> bool:
    rng = np.random.default_rng(SEED)
    commutative = loops.lmlt_class_profile(loops.IntPairCommLoop(), rng, max_weight=4, bound=3, samples=300)
    plain = loops.lmlt_class_profile(loops.IntPairLoop(), rng, max_weight=3, bound=3, samples=300)
    return commutative == {2: True, 3: True, 4: False} and plain == {2: True, 3: False}


async def test_expressions() -> bool:
    commutative, plain = loops.IntPairCommLoop(), loops.IntPairLoop()
    return (loops.evaluate_expression("(2,0)*(2,0)", commutative) == (4, 1)
            and loops.evaluate_expression("(2,0)*(3,0)", plain) == (5, 3)
            and loops.evaluate_expression("[L(2,0),L(1,0)]@(3,0)", commutative) == (3, 3)
            and loops.evaluate_expression("((2,0)*(3,0))/(3,0)", plain) == (2, 0)
            and raises(term.TermSyntaxError, loops.evaluate_expression, "(1,0)*(1,0)*(1,0)", plain))


async def test_evaluate_word() -> bool:
    group = loops.FreeAbelianGroup(2)
    images = {1: group.generator(1), 2: group.generator(2)}
    return (loops.evaluate(term.parse("x1\\(x2*x2)"), group, images) == (-1, 2)
            and raises(term.GeneratorRangeError, loops.evaluate, Gen(3), group, images))


async def test_lemma_first() -> bool:
    reports = [loops.lemma_first_check(n, n + 2) for n in (2, 3)]
    return all(report.passed for report in reports) and raises(ValueError, loops.lemma_first_check, 5, 4)
# endregion


# ==========================
# HIGMAN CHECKS
# ==========================
# region
async def test_delta_product() -> bool:
    alpha = higman.alpha_abelianization(2)
    image = higman.delta(term.parse("x1*x2"), alpha)
    symbols = [higman.GenSymbol(1), higman.GenSymbol(2), higman.PairSymbol((1, 0), (0, 1))]
    return image.l == (1, 1) and all(image.a.coefficient(s) == 1 for s in symbols) and len(image.a.coefficients) == 3


async def test_la_loop_axioms() -> bool:
    rng = np.random.default_rng(SEED)
    for mode in (NC, COMM):
        la_loop = higman.LALoop(loops.FreeAbelianGroup(2), mode)
        if la_loop.check_axioms(la_loop.sample_pairs(rng, 50, 2)):
            return False
    return True


async def test_prop5_witness() -> bool:
    return all(higman.prop5_witness(n).passed for n in (3, 4)) and raises(ValueError, higman.prop5_witness, 2)


async def test_lemma6() -> bool:
    alpha = higman.alpha_abelianization(2)
    found = higman.lemma6_check(term.parse("x1*x2"), term.parse("x2*x1"), alpha)
    rejected = higman.lemma6_check(term.parse("x1*x2"), Gen(1), alpha)
    return (found.status == "witness" and found.witness == higman.PairSymbol((0, 1), (1, 0))
            and rejected.status == "hypothesis-failed")


async def test_corollary1() -> bool:
    alpha = higman.alpha_abelianization(2)
    family = higman.component_closure([term.parse("x1*x2"), term.parse("x2*x1")])
    result = higman.corollary1_check(family, alpha)
    return (result.size == 5 and result.alpha_count == 4 and result.delta_count == 5
            and result.holds and not result.vacuous
            and raises(higman.NotComponentClosedError, higman.corollary1_check, [term.parse("x1*x2")], alpha))
# endregion


# ==========================
# HOPF HIGMAN CHECKS
# ==========================
# region
async def test_tpoly_exp_log() -> bool:
    t = higman_hopf.TPoly.symbol(higman_hopf.TGen(1), 4)
    return t.exp().log() == t and t.exp() * t.exp().power(-1) == t.unit_like()


async def test_tstar_coproduct() -> bool:
    return higman_hopf.tstar_coproduct_check(one_plus(1, 3), one_plus(2, 3) * one_plus(1, 3))


async def test_mixed_divisions() -> bool:
    cfg = MagnusConfig.modified(2, 3)
    a = higman_hopf.magnus_tilde(Gen(1), cfg)
    b = higman_hopf.magnus_tilde(Gen(2), cfg)
    return (higman_hopf.mixed_mul(b, higman_hopf.mixed_left_divide(b, a)) == a
            and higman_hopf.mixed_mul(higman_hopf.mixed_right_divide(a, b), b) == a)


async def test_phi_intertwines() -> bool:
    cfg = MagnusConfig.modified(2, 3)
    words = term.enumerate_reduced(2, 2, NC)
    return all(higman_hopf.phi_apply(magnus.magnus(w, cfg), cfg) == higman_hopf.magnus_tilde(w, cfg)
               for w in words)


async def test_t_map_examples() -> bool:
    one = NSeries.constant(1, 4)
    pair = higman_hopf.TPoly.symbol(higman_hopf.TPair(1, 2), 4)
    return (higman_hopf.t_map(one, one) == higman_hopf.TPoly({}, 4)
            and higman_hopf.t_map(x(1, 4), x(2, 4)) == pair
            and higman_hopf.t_map(one_plus(1, 4), one_plus(2, 4)) == pair
            and higman_hopf.t_map(x(1, 4, COMM), x(2, 4, COMM)) == higman_hopf.t_map(x(2, 4, COMM), x(1, 4, COMM)))


async def test_phi_memo_bounded() -> bool:
    for alphabet_size in range(1, higman_hopf.PHI_MEMO_CONFIGS // 2 + 3):
        for mode in (NC, COMM):
            cfg = MagnusConfig.modified(alphabet_size, 2, mode)
            higman_hopf.phi_apply(magnus.magnus(Gen(1), cfg), cfg)
    return higman_hopf._phi_monomial_images.cache_info().currsize <= higman_hopf.PHI_MEMO_CONFIGS  # noqa: SLF001


async def test_lemma_a() -> bool:
    cfg = MagnusConfig.modified(2, 3)
    g1, g2 = higman_hopf.grouplike_images([Gen(1), Gen(2)], cfg)
    report = higman_hopf.lemma_a_check([(g1, g2)], alphabet_size=2, exponent_bound=1, degree_bound=3)
    return report.passed and report.rank == report.generator_count == 3
# endregion


# ==========================
# VERIFY AND COMMAND CHECKS
# ==========================
# region
async def run_command(argv: Sequence[str], config: common.Config | None = None) -> tuple[int, str, str]:
    """Run one subcommand, against default settings unless config is given, and return (exit code, stdout, stderr)."""
    args = build_parser().parse_args(argv)
    user_command = command.UserCommand(args, config or common.Config.defaults())
    function = dict(command_list.COMMAND_LIST)[args.command]

    stdout, stderr = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(stdout), contextlib.redirect_stderr(stderr):
        exit_code = await user_command.get_and_send_response(function)
    return exit_code, stdout.getvalue(), stderr.getvalue()


async def test_suite_registry() -> bool:
    expected = ["prop3", "prop4", "magnus", "injectivity", "lemma-first", "prop5", "lemma6", "hc1", "hopf-higman"]
    return verify.suite_names() == expected and raises(KeyError, verify.run_suite, "nope", verify.SuiteOptions())


async def test_prop5_suite() -> bool:
    report = verify.run_suite("prop5", verify.SuiteOptions())
    data = report.to_json()
    return report.passed and "wall_time" not in data and "wall_time" in report.to_json(include_timing=True)


async def test_prop4_suite_small() -> bool:
    return verify.run_suite("prop4", verify.SuiteOptions(grid=2, samples=300)).passed


async def test_reduce_keeps_magnus_with_identity() -> bool:
    words = verify._words_with_identity()  # noqa: SLF001
    if term.parse("e/x1") not in words or term.parse("x2\\e") not in words:
        return False

    words += term.enumerate_words(2, 3)
    return all(verify._reduce_keeps_magnus(w, 3, 4, 3, mode)  # noqa: SLF001
               for mode in (NC, COMM) for w in words)


async def test_suite_skips_empty_range() -> bool:
    report = verify.run_suite("lemma6", verify.SuiteOptions(leaves=1, samples=50))
    statuses = {check.check_id: check.status for check in report.checks}
    return (statuses["lemma6.separating-symbol.noncommutative"] == verify.SKIPPED
            and report.passed and "[skipped]" in report.render())


async def test_command_reduce() -> bool:
    exit_code, out, _ = await run_command(["reduce", "x1\\(x1*x2)"])
    json_code, json_out, _ = await run_command(["reduce", "--commutative", "--json", "x2*x1"])
    return (exit_code, out) == (0, "x2\n") and json_code == 0 and json.loads(json_out)["reduced"] == "x1*x2"


async def test_command_mode_override() -> bool:
    config = common.Config.defaults()
    config.main.commutative.value = True
    _, from_config, _ = await run_command(["reduce", "x2*x1"], config)
    _, overridden, _ = await run_command(["reduce", "--no-commutative", "x2*x1"], config)
    _, flagged, _ = await run_command(["reduce", "--commutative", "x2*x1"])
    return (from_config, overridden, flagged) == ("x1*x2\n", "x2*x1\n", "x1*x2\n")


async def test_command_magnus() -> bool:
    exit_code, out, _ = await run_command(["magnus", "--degree", "2", COMMUTATOR])
    return (exit_code, out) == (0, "1 + 1*(x1*x2) + -1*(x2*x1)\n")


async def test_command_dimension() -> bool:
    exit_code, out, _ = await run_command(["dimension", "--degree", "4", ASSOCIATOR])
    return (exit_code, out) == (0, "degree 3: in D_3, not in D_4\n")


async def test_command_usage_errors() -> bool:
    cases = [["reduce"], ["reduce", "x1*"], ["magnus", "--degree", "0", "x1"], ["scan", "--generators", "0"],
             ["verify"], ["higman-delta", "--target", "free:2", "x1"]]
    for argv in cases:
        exit_code, out, err = await run_command(argv)
        if exit_code != common.EXIT_USAGE or out or "error:" not in err:
            return False
    return True


async def test_command_resource_cap() -> bool:
    previous = os.environ.get(common.ENV_MAX_WORDS)
    os.environ[common.ENV_MAX_WORDS] = "10"
    common.max_enumerated_words.cache_clear()
    try:
        exit_code, _, _ = await run_command(["scan", "--leaves", "3"])
    finally:
        if previous is None:
            os.environ.pop(common.ENV_MAX_WORDS)
        else:
            os.environ[common.ENV_MAX_WORDS] = previous
        common.max_enumerated_words.cache_clear()
    return exit_code == common.EXIT_RESOURCE_CAP


async def test_command_scan() -> bool:
    exit_code, out, _ = await run_command(["scan", "--leaves", "2", "--degree", "4"])
    return exit_code == 0 and json.loads(out)["passed"] is True


async def test_command_loop_eval() -> bool:
    exit_code, out, _ = await run_command(["loop-eval", "--loop", "prop4", "(2,0)*(3,0)"])
    return (exit_code, out) == (0, "(5,3)\n")


async def test_command_higman_delta() -> bool:
    exit_code, out, _ = await run_command(["higman-delta", "x1*x2"])
    payload = json.loads(out)
    return exit_code == 0 and payload["alpha"] == [1, 1] and len(payload["psi"]) == 3


async def test_command_verify() -> bool:
    list_code, list_out, _ = await run_command(["verify", "--list"])
    exit_code, out, _ = await run_command(["verify", "--suite", "prop5", "--json"])
    return (list_code == 0 and list_out.split() == verify.suite_names()
            and exit_code == 0 and json.loads(out)["passed"] is True)


async def test_parser_rejects_unknown_command() -> bool:
    with contextlib.redirect_stderr(io.StringIO()):
        try:
            build_parser().parse_args(["nonsense"])
        except SystemExit as e:
            return e.code == common.EXIT_USAGE
    return False


async def test_config_ranges() -> bool:
    settings = common.Config.defaults()
    return (raises(common.ConfigError, settings.main.degree.validate_new_value, 13)
            and not raises(common.ConfigError, settings.main.degree.validate_new_value, 8)
            and raises(RuntimeError, common.Config, None))
# endregion


CHECK_LIST = [
    test_parse_examples,
    test_parse_errors,
    test_components,
    test_term_order,
    test_enumerate_small,
    test_enumerate_reduced_unique,
    test_confluence,
    test_rewrite_step_decreases,
    test_reduce_idempotent_enumerated,
    test_parse_nesting_cap,
    test_components_of_reduced,
    test_equal_in_free_loop,
    test_word_cap,
    test_add_and_scale,
    test_products,
    test_associator,
    test_left_divide_formula,
    test_right_divide_commutator,
    test_low_degree,
    test_division_axioms,
    test_division_errors,
    test_drop_parens,
    test_right_normed_flattening_injective,
    test_monomial_census,
    test_commutative_canonical,
    test_left_divide_keeps_right_normed,
    test_eval_univariate,
    test_render_series,
    test_group_magnus,
    test_exp_base_grouplike,
    test_log_of_exp,
    test_log_quadratic_term,
    test_coproduct_of_product,
    test_primitive,
    test_coproduct_multiplicative,
    test_check_base,
    test_generator_images,
    test_dimension_degrees,
    test_dimension_saturation,
    test_injectivity_scan,
    test_collision_at_low_degree,
    test_magnus_config_errors,
    test_pair_loop_axioms,
    test_embeddings_multiplicative,
    test_embed_prop3_unit,
    test_prop4_coefficients,
    test_loop_filtration,
    test_prop3_commutators,
    test_prop4_commutator,
    test_class_profiles,
    test_expressions,
    test_evaluate_word,
    test_lemma_first,
    test_delta_product,
    test_la_loop_axioms,
    test_prop5_witness,
    test_lemma6,
    test_corollary1,
    test_tpoly_exp_log,
    test_tstar_coproduct,
    test_mixed_divisions,
    test_phi_intertwines,
    test_t_map_examples,
    test_phi_memo_bounded,
    test_lemma_a,
    test_suite_registry,
    test_prop5_suite,
    test_prop4_suite_small,
    test_reduce_keeps_magnus_with_identity,
    test_suite_skips_empty_range,
    test_command_reduce,
    test_command_mode_override,
    test_command_magnus,
    test_command_dimension,
    test_command_usage_errors,
    test_command_resource_cap,
    test_command_scan,
    test_command_loop_eval,
    test_command_higman_delta,
    test_command_verify,
    test_parser_rejects_unknown_command,
    test_config_ranges,
]


class TestResult:
    """Class for describing the result/output for a unit test case."""

    def __init__(self, *, passed: bool, test_name: str, index: int, subindex: str) -> None:
        self.passed = passed
        self.test_name = test_name
        self.index = index
        self.subindex = subindex
        self.result_string = f"Item {index}{subindex} {'passed' if passed else 'failed'} {test_name}()"


async def perform_tests() -> AsyncGenerator[TestResult]:
    for test in TEST_LIST:
        for index, item in enumerate(INPUT_LIST):
            # This zip pairs each reducer with a letter of the alphabet
            for reducer, letter in zip(REDUCERS, string.ascii_lowercase, strict=False):
                result = await test(reducer, item)
                yield TestResult(passed=result, test_name=test.__name__, index=index, subindex=letter)

    for index, check in enumerate(CHECK_LIST):
        yield TestResult(passed=await check(), test_name=check.__name__, index=index, subindex="")


async def main() -> None:
    failed = 0
    async for test_result in perform_tests():
        if test_result.passed:
            logger.info(test_result.result_string)
        else:
            failed += 1
            logger.error(test_result.result_string)

    logger.info(f"Tests complete, {failed} failed.")


if __name__ == "__main__":
    asyncio.run(main())
