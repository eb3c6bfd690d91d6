"""Module for defining and registering commands.

This module is where all subcommands of the command-line front end are defined.
Only the final command functions should be defined here, any necessary helper functions
should be defined in and imported from other modules like `magnus` or `higman`.
"""

import json

from loguru import logger

import command
import common
import higman
import loops
import magnus
import series
import term
import verify
from command import CommandResponse, UsageError, UserCommand, requireterm
from magnus import MagnusConfig


# ==========================
# WORD COMMANDS
# ==========================
# region
@requireterm
async def reduce_command(user_command: UserCommand) -> CommandResponse:
    mode = user_command.get_mode()
    w = user_command.parse_term()
    reduced = term.reduce(w, mode)

    payload = {"term": term.render(w), "reduced": term.render(reduced), "mode": mode.value}
    return CommandResponse(text=term.render(reduced), payload=payload)


def _magnus_config(user_command: UserCommand, w: term.LoopTerm) -> MagnusConfig:
    alphabet_size = term.max_generator(w)
    degree = user_command.get_degree()
    mode = user_command.get_mode()

    base = user_command.get_arg("base") or "none"
    if base == "exp":
        return MagnusConfig.modified(alphabet_size, degree, mode)
    return MagnusConfig(alphabet_size, degree, mode)


@requireterm
async def magnus_command(user_command: UserCommand) -> CommandResponse:
    w = user_command.parse_term()
    cfg = _magnus_config(user_command, w)
    image = magnus.magnus(w, cfg)

    payload = {
        "term": term.render(w),
        "degree": cfg.degree,
        "mode": cfg.mode.value,
        "base": "none" if cfg.base is None else "exp",
        "series": series.series_to_json(image),
    }
    return CommandResponse(text=series.render_series(image), payload=payload)


@requireterm
async def dimension_command(user_command: UserCommand) -> CommandResponse:
    w = user_command.parse_term()
    cfg = _magnus_config(user_command, w)
    found = magnus.dimension_degree(w, cfg)

    n = user_command.get_arg("n")
    if n is None:
        n = found.value
    if n < 1:
        error_msg = f"--n has to be at least 1 (got {n})"
        raise UsageError(error_msg)

    verdict = magnus.in_dimension_subloop(w, n, cfg)
    if verdict is None:
        parts = [f"D_{n} unknown (raise N above {cfg.degree})"]
    else:
        parts = [f"in D_{n}" if verdict else f"not in D_{n}"]

    if verdict and not found.saturated and term.reduce(w, cfg.mode) != term.IDENTITY:
        parts.append(f"not in D_{found.value + 1}")

    payload = {
        "term": term.render(w),
        "degree": cfg.degree,
        "low_degree": found.value,
        "saturated": found.saturated,
        "n": n,
        "in_subloop": verdict,
    }
    return CommandResponse(text=f"degree {found}: {', '.join(parts)}", payload=payload)


async def scan_command(user_command: UserCommand) -> CommandResponse:
    generators = user_command.get_arg("generators")
    if generators is None:
        generators = 2
    if generators < 1:
        error_msg = f"--generators has to be at least 1 (got {generators})"
        raise UsageError(error_msg)

    cfg = MagnusConfig(generators, user_command.get_degree(), user_command.get_mode())
    report = magnus.injectivity_scan(user_command.get_leaves(), cfg)

    payload = report.to_json()
    exit_code = common.EXIT_OK if report.passed else common.EXIT_CHECK_FAILED
    return CommandResponse(text=json.dumps(payload, indent=2, sort_keys=True), payload=payload, exit_code=exit_code)
# endregion


# ==========================
# LOOP COMMANDS
# ==========================
# region
@requireterm
async def loop_eval_command(user_command: UserCommand) -> CommandResponse:
    loop_name = user_command.get_arg("loop") or loops.IntPairCommLoop.name
    if loop_name not in loops.PAIR_LOOPS:
        error_msg = f"Unknown loop '{loop_name}', expected one of {', '.join(loops.PAIR_LOOPS)}"
        raise UsageError(error_msg)

    loop = loops.PAIR_LOOPS[loop_name]()
    expression = user_command.get_term_text() or ""
    p, q = loops.evaluate_expression(expression, loop)

    payload = {"loop": loop_name, "expression": expression, "value": [p, q]}
    return CommandResponse(text=f"({p},{q})", payload=payload)


def _parse_target(user_command: UserCommand, w: term.LoopTerm) -> higman.Assignment:
    target = user_command.get_arg("target") or f"abelian:{max(term.max_generator(w), 1)}"
    kind, _, rank_text = target.partition(":")

    if kind != loops.FreeAbelianGroup.name or not rank_text.isdigit() or int(rank_text) < 1:
        error_msg = f"Unknown target '{target}', expected abelian:n with n >= 1"
        raise UsageError(error_msg)

    return higman.alpha_abelianization(int(rank_text))


@requireterm
async def higman_delta_command(user_command: UserCommand) -> CommandResponse:
    mode = user_command.get_mode()
    w = user_command.parse_term()
    alpha = _parse_target(user_command, w)
    term.check_alphabet(w, len(alpha.images))

    image = higman.delta(w, alpha, mode)
    payload = {
        "term": term.render(w),
        "mode": mode.value,
        "alpha": list(image.l),
        "psi": image.a.to_json(),
    }
    return CommandResponse(text=json.dumps(payload, indent=2, sort_keys=True), payload=payload)
# endregion


# ==========================
# VERIFICATION COMMANDS
# ==========================
# region
def _suite_options(user_command: UserCommand) -> verify.SuiteOptions:
    return verify.SuiteOptions(
        degree=user_command.get_degree() if user_command.is_explicit("degree") else None,
        leaves=user_command.get_leaves() if user_command.is_explicit("leaves") else None,
        grid=user_command.get_grid(),
        seed=user_command.get_seed(),
        samples=user_command.config.limits.samples.value,
    )


async def verify_command(user_command: UserCommand) -> CommandResponse:
    if user_command.get_arg("list"):
        names = verify.suite_names()
        return CommandResponse(text="\n".join(names), payload={"suites": names})

    suite = user_command.get_arg("suite")
    if not user_command.get_arg("all") and suite is None:
        error_msg = "verify needs --suite NAME, --all or --list"
        raise UsageError(error_msg)

    if suite is not None and suite not in verify.suite_names():
        error_msg = f"Unknown suite '{suite}', expected one of {', '.join(verify.suite_names())}"
        raise UsageError(error_msg)

    options = _suite_options(user_command)
    reports = verify.run_all(options) if suite is None else [verify.run_suite(suite, options)]
    passed = all(report.passed for report in reports)

    for report in reports:
        logger.info(f"Suite {report.name}: {'passed' if report.passed else 'failed'} in {report.wall_time:.2f}s")
        if user_command.get_arg("save"):
            report_path = common.PATH_REPORT_FOLDER / f"{report.name}.json"
            await common.write_json_to_file(report_path, report.to_json(include_timing=True))
            logger.debug(f"Saved report to {report_path}")

    payload = {"passed": passed, "suites": [report.to_json() for report in reports]}
    text = "\n".join(report.render() for report in reports)
    return CommandResponse(text=text, payload=payload,
                           exit_code=common.EXIT_OK if passed else common.EXIT_CHECK_FAILED)
# endregion


# Every command must be registered here, main.py builds one subparser per entry
COMMAND_LIST: list[tuple[str, command.CommandAnn]] = [
    ("reduce", reduce_command),
    ("magnus", magnus_command),
    ("dimension", dimension_command),
    ("scan", scan_command),
    ("loop-eval", loop_eval_command),
    ("higman-delta", higman_delta_command),
    ("verify", verify_command),
]
