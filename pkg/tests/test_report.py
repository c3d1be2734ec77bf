import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from trunkload.errors import EmptyGroupError, EmptyInputError
from trunkload.model import BodySegment, Model, MuscleElement, MuscleGroup
from trunkload.optimizer import ActivationSolution
from trunkload.pipeline import analyze_case
from trunkload.report import (
    GroupSymmetry,
    GroupActivation,
    activations_csv,
    asymmetry_index,
    comparison_csv,
    comparison_plot_columns,
    comparison_svg,
    compare_cases,
    group_activation,
    render_comparison_text,
    report_to_json,
    risk_flags,
)
from trunkload.scenarios import ScenarioConfig

unit = st.floats(min_value=0.0, max_value=1.0)


def _fake_solution(values):
    return ActivationSolution(
        activations=np.asarray(values, dtype=float),
        reserves=np.zeros(1),
        residuals=np.zeros(1),
        objective=0.0,
        status="optimal",
    )


def _tiny_model(n_left=2):
    muscles = tuple(
        MuscleElement(f"m{i}", "g", "left" if i < n_left else "right",
                      (("ground", (0, 0, 0)), ("ground", (1, 0, 0))), 100.0)
        for i in range(n_left + 1)
    )
    return Model(
        segments=(BodySegment("ground"),),
        joints=(),
        muscles=muscles,
        groups=(MuscleGroup("g", "other"),),
    )


def test_group_activation_singleton():
    m = _tiny_model(n_left=1)
    g = group_activation(_fake_solution([0.78, 0.0]), m, "g", "left")
    assert g.level == pytest.approx(0.78)
    assert g.peak == pytest.approx(0.78)


def test_group_activation_mean_and_peak():
    m = _tiny_model(n_left=2)
    g = group_activation(_fake_solution([1.0, 0.0, 0.3]), m, "g", "left")
    assert g.level == pytest.approx(0.5)
    assert g.peak == pytest.approx(1.0)


def test_group_activation_empty():
    m = _tiny_model(n_left=1)
    with pytest.raises(EmptyGroupError):
        group_activation(_fake_solution([0.5, 0.5]), m, "g", "midline")


def test_asymmetry_index_reference_value():
    assert asymmetry_index(0.78, 0.01) == pytest.approx(0.77 / 0.78, abs=1e-9)
    assert asymmetry_index(0.78, 0.01) == pytest.approx(0.9872, abs=1e-4)


@settings(max_examples=60, deadline=None)
@given(unit)
def test_asymmetry_zero_for_equal(x):
    assert asymmetry_index(x, x) == 0.0


def test_asymmetry_degenerate_zero():
    assert asymmetry_index(0.0, 0.0) == 0.0


@settings(max_examples=60, deadline=None)
@given(unit, unit)
def test_asymmetry_antisymmetric(a, b):
    assert asymmetry_index(a, b) == pytest.approx(-asymmetry_index(b, a), abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(
    st.floats(min_value=1e-3, max_value=1.0),
    st.floats(min_value=1e-3, max_value=1.0),
    st.floats(min_value=0.1, max_value=1.0),
)
def test_asymmetry_scale_invariant(a, b, k):
    assert asymmetry_index(k * a, k * b) == pytest.approx(asymmetry_index(a, b), abs=1e-9)


def test_asymmetry_bounds():
    assert -1.0 <= asymmetry_index(0.0, 1.0) <= 1.0
    assert asymmetry_index(1.0, 0.0) == 1.0


def _sym(group, left, right):
    return GroupSymmetry(
        group=group,
        left=GroupActivation(group, "left", left, left),
        right=GroupActivation(group, "right", right, right),
        asymmetry=asymmetry_index(left, right),
    )


def test_risk_flags_severity_and_boundaries():
    groups = (
        _sym("a", 0.78, 0.01),   # AI ~ 0.987 -> severe
        _sym("b", 0.5, 0.5),     # AI 0 -> nothing
        _sym("c", 0.13, 0.091),  # AI 0.3 exactly -> warn (inclusive)
    )
    flags = risk_flags(groups)
    severities = {f.group: f.severity for f in flags}
    assert severities["a"] == "severe"
    assert "b" not in severities
    assert severities["c"] == "warn"


def test_risk_flags_none_for_symmetric():
    assert risk_flags((_sym("a", 0.4, 0.4),)) == ()


def test_compare_cases_shapes(model):
    reports = [
        analyze_case(model, ScenarioConfig(case=c)).report
        for c in ("normal", "single_crutch", "double_crutch")
    ]
    table = compare_cases(reports)
    assert len(table.cases) == 3
    assert len(table.rows) == 16  # 8 groups x 2 sides
    assert table.trunk_means[0] < table.trunk_means[2] < table.trunk_means[1]


def test_compare_single_report(model):
    report = analyze_case(model, ScenarioConfig(case="normal")).report
    table = compare_cases([report])
    assert len(table.cases) == 1


def test_compare_empty_raises():
    with pytest.raises(EmptyInputError):
        compare_cases([])


def test_machine_outputs_deterministic(model):
    result = analyze_case(model, ScenarioConfig(case="single_crutch"))
    j1 = report_to_json(result.report)
    j2 = report_to_json(analyze_case(model, ScenarioConfig(case="single_crutch")).report)
    assert j1 == j2
    c1 = activations_csv(result.solution, result.model, "single_crutch", "shared_support")
    assert c1.splitlines()[0] == "muscle,group,side,case,phase,activation_mean,activation_peak"
    assert len(c1.splitlines()) == 1 + len(result.model.muscles)


def test_comparison_renderings(model):
    reports = [analyze_case(model, ScenarioConfig(case=c)).report
               for c in ("normal", "single_crutch")]
    table = compare_cases(reports)
    text = render_comparison_text(table)
    assert "trunk mean" in text
    csv_text = comparison_csv(table)
    assert csv_text.startswith("group,side,")
    svg = comparison_svg(table)
    assert svg.startswith("<svg") and svg.rstrip().endswith("</svg>")
    cols = comparison_plot_columns(table)
    assert cols.startswith("# group side ")


def test_single_crutch_report_matches_expected_laterality(model):
    report = analyze_case(model, ScenarioConfig(case="single_crutch")).report
    ql = next(g for g in report.groups if g.group == "quadratus_lumborum")
    assert ql.left.level > ql.right.level + 0.3
    assert any(f.group == "quadratus_lumborum" and f.severity == "severe"
               for f in report.flags)
