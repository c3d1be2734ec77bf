"""Aggregation of muscle activations into bilateral symmetry reports.

Group level is the mean activation of the group-side's elements at the
analyzed snapshot (peak also kept).  The asymmetry index

    AI = (left - right) / max(left, right, eps)

stays in [-1, 1] even when one side is silent; positive means
left-dominant.  Machine outputs are byte-stable for identical inputs.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, asdict

import numpy as np

from .errors import EmptyGroupError, EmptyInputError
from .model import Model, TRUNK_GROUPS
from .optimizer import ActivationSolution

AI_EPS = 1e-6
WARN_AI = 0.3
SEVERE_AI = 0.6


@dataclass(frozen=True)
class GroupActivation:
    group: str
    side: str
    level: float  # mean of member activations
    peak: float   # max of member activations


@dataclass(frozen=True)
class GroupSymmetry:
    group: str
    left: GroupActivation
    right: GroupActivation
    asymmetry: float


@dataclass(frozen=True)
class RiskFlag:
    group: str
    severity: str  # warn | severe
    asymmetry: float


@dataclass(frozen=True)
class SymmetryReport:
    case: str
    phase: str
    groups: tuple[GroupSymmetry, ...]
    trunk_mean: float
    flags: tuple[RiskFlag, ...]
    assumptions: dict


def group_activation(
    solution: ActivationSolution, model: Model, group: str, side: str
) -> GroupActivation:
    values = [
        float(solution.activations[i])
        for i, m in enumerate(model.muscles)
        if m.group == group and m.side == side
    ]
    if not values:
        raise EmptyGroupError(f"group {group!r} has no {side} elements")
    return GroupActivation(group=group, side=side, level=float(np.mean(values)), peak=max(values))


def asymmetry_index(left: float, right: float, eps: float = AI_EPS) -> float:
    return (left - right) / max(left, right, eps)


def risk_flags(
    groups: tuple[GroupSymmetry, ...], warn: float = WARN_AI, severe: float = SEVERE_AI
) -> tuple[RiskFlag, ...]:
    """Flag spine-attached groups whose bilateral imbalance crosses the cutoffs."""
    flags = []
    for g in groups:
        ai = abs(g.asymmetry)
        if ai >= severe:
            flags.append(RiskFlag(group=g.group, severity="severe", asymmetry=g.asymmetry))
        elif ai >= warn:
            flags.append(RiskFlag(group=g.group, severity="warn", asymmetry=g.asymmetry))
    return tuple(flags)


def build_report(
    solution: ActivationSolution,
    model: Model,
    case: str,
    phase: str,
    assumptions: dict | None = None,
    warn: float = WARN_AI,
    severe: float = SEVERE_AI,
) -> SymmetryReport:
    groups = []
    levels = []
    for gid in (g.id for g in model.groups if g.anatomical_name in TRUNK_GROUPS):
        left = group_activation(solution, model, gid, "left")
        right = group_activation(solution, model, gid, "right")
        groups.append(
            GroupSymmetry(
                group=gid,
                left=left,
                right=right,
                asymmetry=asymmetry_index(left.level, right.level),
            )
        )
        levels.extend([left.level, right.level])
    group_tuple = tuple(groups)
    return SymmetryReport(
        case=case,
        phase=phase,
        groups=group_tuple,
        trunk_mean=float(np.mean(levels)) if levels else 0.0,
        flags=risk_flags(group_tuple, warn=warn, severe=severe),
        assumptions=dict(assumptions or {}),
    )


# ---------------------------------------------------------------------------
# case comparison


@dataclass(frozen=True)
class ComparisonTable:
    cases: tuple[str, ...]                 # column keys: "case/phase"
    rows: tuple[tuple[str, str], ...]      # (group, side)
    levels: tuple[tuple[float, ...], ...]  # per row, one level per column
    trunk_means: tuple[float, ...]


def compare_cases(reports) -> ComparisonTable:
    reports = list(reports)
    if not reports:
        raise EmptyInputError("no reports to compare")
    cases = tuple(f"{r.case}/{r.phase}" for r in reports)
    rows: list[tuple[str, str]] = []
    for g in reports[0].groups:
        rows.append((g.group, "left"))
        rows.append((g.group, "right"))
    levels = []
    for group, side in rows:
        line = []
        for r in reports:
            match = next((g for g in r.groups if g.group == group), None)
            value = 0.0
            if match is not None:
                value = match.left.level if side == "left" else match.right.level
            line.append(value)
        levels.append(tuple(line))
    return ComparisonTable(
        cases=cases,
        rows=tuple(rows),
        levels=tuple(levels),
        trunk_means=tuple(r.trunk_mean for r in reports),
    )


# ---------------------------------------------------------------------------
# rendering


def _fmt_pct(x: float) -> str:
    return f"{round(100 * x):d}%"


def render_report_text(report: SymmetryReport) -> str:
    out = io.StringIO()
    head = f"{report.case} / {report.phase}"
    out.write(head + "\n" + "=" * len(head) + "\n")
    for key in sorted(report.assumptions):
        out.write(f"# {key} = {report.assumptions[key]}\n")
    out.write(f"{'group':<22}{'left':>8}{'right':>8}{'AI':>8}\n")
    for g in report.groups:
        out.write(
            f"{g.group:<22}{_fmt_pct(g.left.level):>8}{_fmt_pct(g.right.level):>8}"
            f"{g.asymmetry:>8.2f}\n"
        )
    out.write(f"{'trunk mean':<22}{_fmt_pct(report.trunk_mean):>8}\n")
    if report.flags:
        out.write("risk flags:\n")
        for fl in report.flags:
            out.write(f"  {fl.severity:<7} {fl.group} (AI {fl.asymmetry:+.2f})\n")
    else:
        out.write("risk flags: none\n")
    return out.getvalue()


def report_to_json(report: SymmetryReport) -> str:
    payload = {
        "case": report.case,
        "phase": report.phase,
        "trunk_mean": report.trunk_mean,
        "groups": [
            {
                "group": g.group,
                "left": asdict(g.left),
                "right": asdict(g.right),
                "asymmetry": g.asymmetry,
            }
            for g in report.groups
        ],
        "flags": [asdict(f) for f in report.flags],
        "assumptions": report.assumptions,
    }
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def activations_csv(solution: ActivationSolution, model: Model, case: str, phase: str) -> str:
    """Per-muscle tabular export; mean and peak coincide for one snapshot."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["muscle", "group", "side", "case", "phase", "activation_mean", "activation_peak"])
    for i, m in enumerate(model.muscles):
        a = repr(float(solution.activations[i]))
        writer.writerow([m.name, m.group, m.side, case, phase, a, a])
    return out.getvalue()


def comparison_csv(table: ComparisonTable) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["group", "side", *table.cases])
    for (group, side), line in zip(table.rows, table.levels):
        writer.writerow([group, side, *[repr(v) for v in line]])
    writer.writerow(["trunk_mean", "", *[repr(v) for v in table.trunk_means]])
    return out.getvalue()


def render_comparison_text(table: ComparisonTable) -> str:
    out = io.StringIO()
    width = max(12, *(len(c) for c in table.cases)) + 2
    out.write(f"{'group':<22}{'side':<7}" + "".join(f"{c:>{width}}" for c in table.cases) + "\n")
    for (group, side), line in zip(table.rows, table.levels):
        out.write(
            f"{group:<22}{side:<7}" + "".join(f"{_fmt_pct(v):>{width}}" for v in line) + "\n"
        )
    out.write(
        f"{'trunk mean':<22}{'':<7}"
        + "".join(f"{_fmt_pct(v):>{width}}" for v in table.trunk_means)
        + "\n"
    )
    return out.getvalue()


def comparison_plot_columns(table: ComparisonTable) -> str:
    """Plain whitespace columns for external plotting tools."""
    out = io.StringIO()
    out.write("# group side " + " ".join(table.cases) + "\n")
    for (group, side), line in zip(table.rows, table.levels):
        out.write(f"{group} {side} " + " ".join(repr(v) for v in line) + "\n")
    return out.getvalue()


def comparison_svg(table: ComparisonTable) -> str:
    """Grouped bar chart of activation levels, written as standalone SVG.

    Hand-rolled so repeated runs emit identical bytes.
    """
    n_rows = len(table.rows)
    n_cases = len(table.cases)
    bar = 9
    group_w = bar * n_cases + 8
    width = 90 + n_rows * group_w + 20
    height = 320
    base = 260
    scale = 200.0
    palette = ("#4477aa", "#ee6677", "#228833", "#ccbb44")

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        '<style>text{font-family:monospace;font-size:9px}</style>',
        f'<line x1="85" y1="{base}" x2="{width - 10}" y2="{base}" stroke="#000"/>',
        f'<line x1="85" y1="{base}" x2="85" y2="{base - scale}" stroke="#000"/>',
    ]
    for frac in (0.0, 0.25, 0.5, 0.75, 1.0):
        y = base - frac * scale
        parts.append(f'<line x1="82" y1="{y:.1f}" x2="85" y2="{y:.1f}" stroke="#000"/>')
        parts.append(f'<text x="78" y="{y + 3:.1f}" text-anchor="end">{int(frac * 100)}%</text>')
    for j, case in enumerate(table.cases):
        parts.append(
            f'<rect x="{95 + j * 120}" y="12" width="8" height="8" fill="{palette[j % len(palette)]}"/>'
        )
        parts.append(f'<text x="{106 + j * 120}" y="20">{case}</text>')
    for i, ((group, side), line) in enumerate(zip(table.rows, table.levels)):
        x0 = 90 + i * group_w
        for j, v in enumerate(line):
            h = max(0.0, min(1.0, v)) * scale
            parts.append(
                f'<rect x="{x0 + j * bar}" y="{base - h:.2f}" width="{bar - 1}" '
                f'height="{h:.2f}" fill="{palette[j % len(palette)]}"/>'
            )
        label = f"{group[:14]}.{side[0]}"
        parts.append(
            f'<text x="{x0 + group_w / 2:.1f}" y="{base + 10}" '
            f'transform="rotate(60 {x0 + group_w / 2:.1f} {base + 10})">{label}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
