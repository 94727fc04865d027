"""Full-scale checks: large random suites and the trained experiment grids."""

from __future__ import annotations

import statistics

import pytest
from conftest import load_reference
from mvlift_harness import (
    build_experiment_data,
    check_end_to_end_gradients,
    check_loss_gradients,
    procrustes_selftest,
    results_csv,
    run_data_vs_loss_attribution,
    run_objective_comparison,
    run_view_count_ablation,
    run_view_selection_ablation,
)

pytestmark = pytest.mark.slow


def _median(table, cell_id: str, attribute: str) -> float:
    return statistics.median(
        getattr(row, attribute) for row in table.rows if row.cell_id == cell_id
    )


@pytest.fixture(scope="module")
def seven_view_tables():
    spec = load_reference("view-count-seven")
    data = build_experiment_data(spec)
    return (
        run_view_count_ablation(spec, data=data),
        run_data_vs_loss_attribution(spec, data=data),
    )


def test_procrustes_is_optimal_on_ordinary_and_mirrored_pairs():
    cases = procrustes_selftest(100, seed=0)
    assert len(cases) == 200
    assert all(case.passed for case in cases)


def test_every_gradient_matches_finite_differences():
    checks = check_loss_gradients(20) + check_end_to_end_gradients(20)
    failed = [check for check in checks if not check.passed]
    assert not failed


def test_consistency_improves_aligned_error_over_plain_2d():
    spec = load_reference("reference-two-view")
    data = build_experiment_data(spec)
    table = run_objective_comparison(spec, data=data)
    plain = _median(table, "01-L2D", "pa_mpjpe_mm")
    consistent = _median(table, "02-L2Dcon", "pa_mpjpe_mm")
    assert consistent <= 0.7 * plain
    assert results_csv(run_objective_comparison(spec, data=data)) == results_csv(table)


def test_second_view_gives_most_of_the_gain(seven_view_tables):
    ablation, _ = seven_view_tables
    one, two, three = (_median(ablation, f"views-{k}", "mpjpe_mm") for k in (1, 2, 3))
    assert one - two >= 3 * (two - three)


def test_more_views_without_consistency_stay_flat(seven_view_tables):
    ablation, attribution = seven_view_tables
    with_loss = _median(ablation, "views-1", "mpjpe_mm") - _median(ablation, "views-7", "mpjpe_mm")
    data_only = _median(attribution, "views-1", "mpjpe_mm") - _median(
        attribution, "views-7", "mpjpe_mm"
    )
    assert abs(data_only) <= 0.2 * abs(with_loss)
    assert all(row.lambda_con == 0.0 for row in attribution.rows)


def test_perpendicular_pair_beats_narrow_and_opposite_pairs():
    spec = load_reference("view-selection-six")
    table = run_view_selection_ablation(spec, data=build_experiment_data(spec))
    perpendicular = _median(table, "right+view3", "pa_mpjpe_mm")
    assert perpendicular < _median(table, "right+view1", "pa_mpjpe_mm")
    assert perpendicular < _median(table, "right+view5", "pa_mpjpe_mm")
