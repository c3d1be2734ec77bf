"""Command-line surface: validate, analyze, compare, oracle-check.

Exit codes are stable across subcommands: 0 success, 1 domain or
validation failure, 2 usage or I/O failure.  Machine outputs carry no
timestamps or environment state, so identical invocations write
byte-identical files.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .errors import ParseError, TrunkloadError
from .model import load_model_file, parse_model_document, validate_model
from .optimizer import (
    SolverParams,
    brute_force_oracle,
    equality_multipliers,
    solve_activation_qp,
)
from .pipeline import AnalysisResult, analyze_case, default_model
from .report import (
    activations_csv,
    comparison_csv,
    comparison_plot_columns,
    comparison_svg,
    compare_cases,
    render_comparison_text,
    render_report_text,
    report_to_json,
)
from .scenarios import CASES, PHASES, ScenarioConfig, load_scenario_file

ENV_DEFAULT_MODEL = "TRUNKLOAD_DEFAULT_MODEL"

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_USAGE = 2

FORMATS = ("table", "csv", "report", "plot")


def _resolve_model(path: str | None, lenient: bool):
    if path is None:
        path = os.environ.get(ENV_DEFAULT_MODEL)
    if path is None:
        return default_model()
    return load_model_file(path, lenient=lenient)


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--model", help="model document path (default: shipped model, "
                                   f"override with ${ENV_DEFAULT_MODEL})")
    p.add_argument("--lenient", action="store_true",
                   help="ignore unknown fields in documents")


def _add_scenario_options(p: argparse.ArgumentParser):
    p.add_argument("--scenario", help="scenario document path")
    p.add_argument("--case", action="append", choices=CASES,
                   help="walking case shorthand (repeatable for compare)")
    p.add_argument("--phase", help="phase within the case (default: the loaded phase)")
    p.add_argument("--injured-side", choices=("left", "right"), default=None)
    p.add_argument("--foot-fraction", type=float, default=None,
                   help="fraction of body weight on the injured foot (default 0.10)")
    p.add_argument("--crutch-share", type=float, default=None,
                   help="crutch share of remaining weight in shared phases (default 0.30)")
    p.add_argument("--body-weight", type=float, default=None, help="body weight in newtons")
    p.add_argument("--exponent", type=int, default=2, choices=(1, 2, 3),
                   help="activation cost power")
    p.add_argument("--out-dir", help="directory for output files")
    p.add_argument("--format", action="append", choices=FORMATS, dest="formats",
                   help="output formats (repeatable; default: table)")
    p.add_argument("--verbose", "-v", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trunkload",
        description="Trunk-muscle load analysis for normal and crutch-assisted walking.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_val = sub.add_parser("validate", help="check a model document against all invariants")
    _add_common(p_val)

    p_an = sub.add_parser("analyze", help="analyze one case snapshot")
    _add_common(p_an)
    _add_scenario_options(p_an)

    p_cmp = sub.add_parser("compare", help="analyze several cases and tabulate them")
    _add_common(p_cmp)
    _add_scenario_options(p_cmp)

    p_or = sub.add_parser("oracle-check", help="randomized solver-vs-grid-search check")
    p_or.add_argument("--instances", type=int, default=100)
    p_or.add_argument("--seed", type=int, default=42)
    p_or.add_argument("--max-muscles", type=int, default=4)
    p_or.add_argument("--max-coords", type=int, default=2)
    p_or.add_argument("--grid-step", type=float, default=0.05)
    p_or.add_argument("--exponent", type=int, default=2, choices=(1, 2, 3))
    return parser


# ---------------------------------------------------------------------------
# subcommands


def cmd_validate(args) -> int:
    path = args.model or os.environ.get(ENV_DEFAULT_MODEL)
    if path is None:
        model = default_model()
    else:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            print(f"error: cannot read model: {exc}", file=sys.stderr)
            return EXIT_USAGE
        try:
            model = parse_model_document(text, lenient=args.lenient)
        except ParseError as exc:
            print(f"parse error: {exc}", file=sys.stderr)
            return EXIT_USAGE
    violations = validate_model(model)
    if violations:
        for v in violations:
            print(f"violation: {v}")
        print(f"{len(violations)} violation(s)")
        return EXIT_DOMAIN
    print("OK")
    return EXIT_OK


def _configs_from_args(args, default_all: bool) -> list[ScenarioConfig]:
    overrides = {}
    if args.injured_side is not None:
        overrides["injured_side"] = args.injured_side
    if args.foot_fraction is not None:
        overrides["injured_foot_fraction"] = args.foot_fraction
    if args.crutch_share is not None:
        overrides["crutch_share"] = args.crutch_share
    if args.body_weight is not None:
        overrides["body_weight"] = args.body_weight

    if args.scenario:
        config, postures = load_scenario_file(args.scenario, lenient=args.lenient)
        fields = {
            "case": config.case,
            "injured_side": config.injured_side,
            "injured_foot_fraction": config.injured_foot_fraction,
            "crutch_share": config.crutch_share,
            "body_weight": config.body_weight,
            "phase": args.phase or config.phase,
        }
        fields.update(overrides)
        cfg = ScenarioConfig(**fields)
        table = postures.get(cfg.resolved_phase)
        return [(cfg, table)]

    cases = args.case or (list(CASES) if default_all else [CASES[0]])
    out = []
    for case in cases:
        fields = {"case": case, "phase": args.phase}
        if args.phase is not None and args.phase not in PHASES[case]:
            raise ParseError(f"phase {args.phase!r} is not a phase of case {case!r}")
        fields.update(overrides)
        out.append((ScenarioConfig(**fields), None))
    return out


def _write(out_dir: Path, name: str, content: str, verbose: bool):
    out_dir.mkdir(parents=True, exist_ok=True)
    target = out_dir / name
    target.write_text(content, encoding="utf-8")
    if verbose:
        print(f"wrote {target}")


def _emit_case_outputs(result: AnalysisResult, formats, out_dir: Path | None, verbose: bool):
    case, phase = result.config.case, result.config.resolved_phase
    stem = f"{case}_{phase}"
    if out_dir is None:
        return
    if "table" in formats:
        _write(out_dir, f"report_{stem}.txt", render_report_text(result.report), verbose)
    if "report" in formats:
        _write(out_dir, f"report_{stem}.json", report_to_json(result.report), verbose)
    if "csv" in formats:
        _write(
            out_dir, f"activations_{stem}.csv",
            activations_csv(result.solution, result.model, case, phase), verbose,
        )
    if "plot" in formats:
        table = compare_cases([result.report])
        _write(out_dir, f"activations_{stem}.svg", comparison_svg(table), verbose)
        _write(out_dir, f"activations_{stem}.cols", comparison_plot_columns(table), verbose)


def _run_analyses(args, configs) -> list[AnalysisResult]:
    model = _resolve_model(args.model, args.lenient)
    params = SolverParams(exponent=args.exponent)
    results = []
    for cfg, table in configs:
        results.append(analyze_case(model, cfg, params, posture_table=table))
    return results


def cmd_analyze(args) -> int:
    configs = _configs_from_args(args, default_all=False)
    if len(configs) != 1:
        print("error: analyze takes exactly one case; use compare for several",
              file=sys.stderr)
        return EXIT_USAGE
    formats = args.formats or ["table"]
    results = _run_analyses(args, configs)
    result = results[0]
    print(render_report_text(result.report), end="")
    if args.verbose:
        print(f"solver status: {result.solution.status} "
              f"({result.solution.iterations} iterations)")
        worst = float(np.max(np.abs(result.solution.reserves)))
        print(f"largest reserve torque: {worst:.3f} N*m")
    _emit_case_outputs(result, formats, Path(args.out_dir) if args.out_dir else None,
                       args.verbose)
    return EXIT_OK


def cmd_compare(args) -> int:
    configs = _configs_from_args(args, default_all=True)
    if len(configs) < 2:
        print("error: compare needs at least two cases (repeat --case)", file=sys.stderr)
        return EXIT_USAGE
    formats = args.formats or ["table"]
    results = _run_analyses(args, configs)
    table = compare_cases([r.report for r in results])
    print(render_comparison_text(table), end="")
    out_dir = Path(args.out_dir) if args.out_dir else None
    if out_dir is not None:
        if "table" in formats:
            _write(out_dir, "comparison.txt", render_comparison_text(table), args.verbose)
        if "csv" in formats:
            _write(out_dir, "comparison.csv", comparison_csv(table), args.verbose)
        if "plot" in formats:
            _write(out_dir, "comparison.svg", comparison_svg(table), args.verbose)
            _write(out_dir, "comparison.cols", comparison_plot_columns(table), args.verbose)
        for result in results:
            _emit_case_outputs(result, set(formats) - {"table"}, out_dir, args.verbose)
    return EXIT_OK


def cmd_oracle_check(args) -> int:
    step = args.grid_step
    if step > 0.1:
        print(f"warning: grid step {step} is coarse; feasibility slack grows with the "
              "step, so the agreement bound is loose. Clamping to 0.1.")
        step = 0.1
    if args.max_muscles > 6:
        print("error: exhaustive search is limited to 6 muscles", file=sys.stderr)
        return EXIT_USAGE
    rng = np.random.default_rng(args.seed)
    p = args.exponent
    worst = -np.inf
    for k in range(args.instances):
        nm = int(rng.integers(1, args.max_muscles + 1))
        nc = int(rng.integers(1, args.max_coords + 1))
        f_max = rng.uniform(200.0, 2000.0, nm)
        arms = rng.uniform(-0.1, 0.1, (nm, nc))
        a_star = rng.integers(0, int(round(1.0 / step)) + 1, nm) * step
        tau = (arms * f_max[:, None]).T @ a_star
        solution = solve_activation_qp(
            f_max, arms, tau, SolverParams(exponent=p, reserves_enabled=False)
        )
        oracle = brute_force_oracle(f_max, arms, tau, p=p, grid_step=step)
        lam = equality_multipliers(f_max, arms, solution.activations, p)
        slack_gain = float(np.sum(np.abs(lam) * oracle.residuals))
        round_penalty = p * nm * (step / 2.0) * (1.0 + step / 2.0) ** (p - 1)
        bound = 1e-3 + slack_gain + round_penalty
        gap = abs(solution.objective - oracle.objective)
        worst = max(worst, gap - bound)
        if gap > bound:
            print(f"instance {k}: |objective gap| {gap:.6g} exceeds bound {bound:.6g}")
            return EXIT_DOMAIN
    print(f"{args.instances} instances OK; worst gap-to-bound margin {-worst:.6g}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = {
        "validate": cmd_validate,
        "analyze": cmd_analyze,
        "compare": cmd_compare,
        "oracle-check": cmd_oracle_check,
    }[args.command]
    try:
        return handler(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TrunkloadError as exc:
        print(f"error: {exc.__class__.__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
