"""Command-line front end.

Exit status: 0 positive verdict or suite pass, 1 negative verdict,
2 input error, 3 budget exceeded.  Output is a pure function of the
arguments and input file.
"""

from __future__ import annotations

import argparse
import enum
import json
import sys
import warnings
from dataclasses import dataclass
from typing import Any

from . import acceptance, generators, lca, lowdim
from .errors import (BudgetExceeded, InputError, NonIntegerDensityWarning, NotSpectral,
                     NotSpectralPair)
from .periodic import classify_pair, periodic_set_from_json
from .tiling import emit_tiling_svg, rasterized_tiling_check

EXIT_POSITIVE = 0
EXIT_NEGATIVE = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3
MIN_WORK_CAP = 10**4
SEED_MAX = 2**64 - 1


class Command(str, enum.Enum):
    CHECK = "check"
    CONSTRUCT = "construct"
    RECOGNIZE = "recognize"
    RENDER = "render"
    LCA_CHECK = "lca-check"
    UNCERTAINTY = "uncertainty"
    SUITE = "suite"


@dataclass(frozen=True)
class RunConfig:
    command: Command
    input_path: str | None = None
    seed: int = 0
    work_cap: int = 10**8
    output_format: str = "text"
    window: int = 2
    refine: int = 1
    trials: int = 1000

    def __post_init__(self):
        if self.work_cap < MIN_WORK_CAP:
            raise InputError(f"--work-cap must be at least {MIN_WORK_CAP}")
        if not 0 <= self.seed <= SEED_MAX:
            raise InputError("--seed must be an unsigned 64-bit integer")
        if self.window < 0 or self.refine < 1 or self.trials < 1:
            raise InputError("--window >= 0, --refine >= 1 and --trials >= 1 are required")


@dataclass
class Report:
    exit_code: int
    data: dict
    text: str
    svg: str | None = None


def _reject_float(text: str):
    raise InputError(f"bare JSON number {text} is not exact; write it as a string like \"1/2\"")


def load_json(path: str | None) -> Any:
    if path is None:
        raise InputError("--input is required for this command")
    try:
        if path == "-":
            raw = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                raw = fh.read()
        return json.loads(raw, parse_float=_reject_float)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON in {path}: {exc}") from exc


def _verdict_text(data: dict) -> str:
    lines = [f"status: {data['status']}", f"density: {data['density']}"]
    if "witness" in data:
        w = data["witness"]
        lines.append(f"witness: delta=({', '.join(w['delta'])}) k=({', '.join(map(str, w['k']))})"
                     f" vector=({', '.join(w['vector'])})")
    return "\n".join(lines)


def _check(cfg: RunConfig) -> Report:
    ps = periodic_set_from_json(load_json(cfg.input_path))
    verdict = classify_pair(ps, cfg.work_cap)
    tiles, grid = rasterized_tiling_check(ps, cfg.refine, cfg.work_cap)
    data = {"command": "check", **verdict.to_json(),
            "tiling": {"tiles": tiles, "q": grid.q, "group_order": grid.group_order,
                       "invariant_factors": list(grid.invariant_factors)},
            "oracle_agrees": verdict.positive == tiles}
    text = _verdict_text(data) + f"\ntiling oracle: {'tiles' if tiles else 'does not tile'}" \
        + ("" if data["oracle_agrees"] else "\nWARNING: oracle disagrees with classification")
    return Report(EXIT_POSITIVE if verdict.positive else EXIT_NEGATIVE, data, text)


def _construct(cfg: RunConfig) -> Report:
    form = lowdim.form_from_json(load_json(cfg.input_path))
    ps = lowdim.build(form, cfg.work_cap)
    verdict = classify_pair(ps, cfg.work_cap)
    data = {"command": "construct", "set": ps.to_json(), "verdict": verdict.to_json()}
    text = json.dumps(ps.to_json(), sort_keys=True) + "\n" + _verdict_text(verdict.to_json())
    return Report(EXIT_POSITIVE if verdict.positive else EXIT_NEGATIVE, data, text)


def _recognize(cfg: RunConfig) -> Report:
    ps = periodic_set_from_json(load_json(cfg.input_path))
    try:
        rec = lowdim.recognize(ps, cfg.work_cap)
    except NotSpectral as exc:
        data = {"command": "recognize", "kind": "NotSpectral", "reason": str(exc)}
        return Report(EXIT_NEGATIVE, data, f"not recognized: {exc}")
    data = {"command": "recognize", **rec.to_json()}
    text = f"kind: {rec.kind}\nform: {json.dumps(data['form'], sort_keys=True)}\n" \
        f"translation: ({', '.join(data['translation'])})\npermutation: {data['permutation']}"
    if rec.alternatives:
        text += f"\nalternative permutations: {data['alternatives']}"
    # a verified spectral set outside the catalog would be an internal error
    return Report(EXIT_POSITIVE if rec.form is not None else EXIT_NEGATIVE, data, text)


def _render(cfg: RunConfig) -> Report:
    ps = periodic_set_from_json(load_json(cfg.input_path))
    svg = emit_tiling_svg(ps, cfg.window)
    data = {"command": "render", "svg": svg}
    return Report(EXIT_POSITIVE, data, svg, svg)


def _measure_pair(cfg: RunConfig) -> tuple[lca.Measure, lca.Measure]:
    doc = load_json(cfg.input_path)
    try:
        group = lca.FiniteGroup(tuple(doc["group"]))
        mu = lca.measure_from_json(doc["mu"], group)
        nu = lca.measure_from_json(doc["nu"], group)
    except (KeyError, TypeError) as exc:
        raise InputError(f"measure pair JSON needs 'group', 'mu' and 'nu': {exc!r}") from exc
    return mu, nu


def _lca_check(cfg: RunConfig) -> Report:
    mu, nu = _measure_pair(cfg)
    spectral = lca.is_spectral_pair_measures(mu, nu)
    tiling = lca.is_tiling_pair_measures(mu, nu)
    data = {"command": "lca-check", "spectral": spectral, "tiling": tiling,
            "support_sizes": [len(mu.support), len(nu.support)]}
    text = f"spectral pair: {'yes' if spectral else 'no'}\ntiling pair: {'yes' if tiling else 'no'}"
    return Report(EXIT_POSITIVE if spectral or tiling else EXIT_NEGATIVE, data, text)


def _uncertainty(cfg: RunConfig) -> Report:
    mu, nu = _measure_pair(cfg)
    if not lca.is_spectral_pair_measures(mu, nu):
        raise NotSpectralPair("uncertainty trials need a spectral pair")
    g = mu.group
    worst = None
    violations = 0
    for trial in range(cfg.trials):
        rng = generators.trial_rng(cfg.seed, trial)
        f = generators.random_function(rng, mu)
        A = [x for x in g.elements if rng.random() < 0.5]
        B = [x for x in g.elements if rng.random() < 0.5]
        rep = lca.uncertainty_report(mu, nu, f, A, B, verified=True)
        violations += not rep.holds
        if worst is None or rep.lhs - rep.rhs > worst.lhs - worst.rhs:
            worst = rep
    data = {"command": "uncertainty", "trials": cfg.trials, "violations": violations,
            "tightest": worst.to_json()}
    text = f"trials: {cfg.trials}\nviolations: {violations}\n" \
        f"tightest: lhs={worst.lhs:.6g} rhs={worst.rhs:.6g}"
    return Report(EXIT_POSITIVE if violations == 0 else EXIT_NEGATIVE, data, text)


def _suite(cfg: RunConfig) -> Report:
    results = acceptance.run_all(cfg.seed)
    passed = all(r.passed for r in results)
    # timings stay out of the JSON report so it is reproducible byte for byte
    data = {"command": "suite", "seed": cfg.seed, "passed": passed,
            "criteria": [{k: v for k, v in r.to_json().items() if k != "seconds"}
                         for r in results]}
    text = "\n".join(r.line() for r in results) + f"\n{'PASS' if passed else 'FAIL'}"
    return Report(EXIT_POSITIVE if passed else EXIT_NEGATIVE, data, text)


HANDLERS = {
    Command.CHECK: _check,
    Command.CONSTRUCT: _construct,
    Command.RECOGNIZE: _recognize,
    Command.RENDER: _render,
    Command.LCA_CHECK: _lca_check,
    Command.UNCERTAINTY: _uncertainty,
    Command.SUITE: _suite,
}


def run(cfg: RunConfig) -> Report:
    """Execute one command, mapping library errors onto exit statuses."""
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", NonIntegerDensityWarning)
            return HANDLERS[cfg.command](cfg)
    except BudgetExceeded as exc:
        return Report(EXIT_BUDGET, {"command": cfg.command.value, "error": "BudgetExceeded",
                                    "message": str(exc), "needed": exc.needed, "cap": exc.cap},
                      f"budget exceeded: {exc}")
    except NotSpectralPair as exc:
        return Report(EXIT_NEGATIVE, {"command": cfg.command.value, "error": "NotSpectralPair",
                                      "message": str(exc)}, f"not a spectral pair: {exc}")
    except InputError as exc:
        return Report(EXIT_INPUT, {"command": cfg.command.value, "error": type(exc).__name__,
                                   "message": str(exc)}, f"input error: {exc}")


def render_report(report: Report, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report.data, sort_keys=True, indent=2) + "\n"
    if fmt == "svg":
        if report.svg is None:
            return report.text.rstrip("\n") + "\n"
        return report.svg
    return report.text.rstrip("\n") + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cubespectra",
        description="Verify and construct spectra and tilings of the unit cube by "
                    "periodic sets, and spectral pairs of measures on finite groups.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="JSON input file ('-' for stdin)")
    common.add_argument("--seed", type=int, default=0, help="PRNG seed (default 0)")
    common.add_argument("--work-cap", type=int, default=10**8,
                        help="budget for exact searches (default 1e8, minimum 1e4)")
    common.add_argument("--format", choices=("text", "json", "svg"), default=None,
                        help="output format (default text; svg for render)")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("check", parents=[common],
                   help="classify a periodic set and cross-check with the tiling oracle") \
        .add_argument("--refine", type=int, default=1, help="extra grid refinement factor")
    sub.add_parser("construct", parents=[common], help="build a periodic set from a form")
    sub.add_parser("recognize", parents=[common], help="recover catalog parameters (d <= 3)")
    sub.add_parser("render", parents=[common], help="SVG drawing of a planar cube tiling") \
        .add_argument("--window", type=int, default=2, help="lattice window radius")
    sub.add_parser("lca-check", parents=[common], help="spectral/tiling test for a measure pair")
    sub.add_parser("uncertainty", parents=[common], help="randomized uncertainty trials") \
        .add_argument("--trials", type=int, default=1000)
    sub.add_parser("suite", parents=[common], help="run the acceptance battery")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    command = Command(args.command)
    fmt = args.format or ("svg" if command is Command.RENDER else "text")
    try:
        cfg = RunConfig(command, args.input, args.seed, args.work_cap, fmt,
                        window=getattr(args, "window", 2), refine=getattr(args, "refine", 1),
                        trials=getattr(args, "trials", 1000))
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    report = run(cfg)
    sys.stdout.write(render_report(report, fmt))
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
