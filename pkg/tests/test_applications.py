import math
from fractions import Fraction as F

import numpy as np
import pytest

from analysis.applications import (
    SQRT2,
    application_reports,
    one_dimensional_table,
    square_illuminated_sets,
    optimality_curve,
    optimality_gap,
    sphere_alpha_threshold,
    sphere_rotation_curve,
    square_alternating_points,
    square_alternating_table,
    unit_ball,
    unit_square,
)
from analysis.arith import NOT_OBSERVABLE
from analysis.multid_geometry import illuminated_boundary, variable_threshold


def test_sphere_alpha_threshold_value():
    assert sphere_alpha_threshold() == pytest.approx(0.3388509965, abs=1e-9)


@pytest.mark.parametrize("alpha, expected", [(0.3, True), (0.33, True), (0.35, False), (0.5, False)])
def test_sphere_rotation_verdict(alpha, expected):
    report = variable_threshold(unit_ball(), sphere_rotation_curve(alpha))
    assert report.c0 == pytest.approx(1 + SQRT2)
    assert report.c_t == pytest.approx(1 + SQRT2)
    assert report.variation == pytest.approx(SQRT2 * math.pi, rel=1e-8)
    assert report.observable_by_criterion is expected


def test_sphere_rotation_stays_on_the_circle():
    curve = sphere_rotation_curve(0.3)
    positions = curve.position(np.linspace(0, curve.horizon, 7))
    assert np.allclose(np.linalg.norm(positions, axis=1), SQRT2)
    assert np.allclose(positions[:, 0], 0.0)


def test_square_alternating_table():
    rows = square_alternating_table(6)
    assert [row["N"] for row in rows] == list(range(1, 7))
    for row in rows:
        assert row["threshold"] == pytest.approx(row["closed_form"])
        assert row["t0_lower_bound"] == pytest.approx(SQRT2 * (row["N"] + 2) / (row["N"] + 1))
    assert np.array_equal(square_alternating_points(2), [[1, 1], [0, 0], [1, 1]])


def test_optimality_gap():
    gap = optimality_gap()
    length = math.hypot(0.5, 0.25) + math.hypot(0.25, 0.25) + math.hypot(0.25, 0.5)
    assert gap["curve_length"] == pytest.approx(length)
    assert gap["criterion_threshold"] == pytest.approx(2 * SQRT2 + length)
    assert gap["gap"] == pytest.approx(SQRT2 + length)
    assert gap["gap"] > 0


def test_optimality_curve_sees_the_whole_boundary_inside():
    curve = optimality_curve()
    for t in (0.5, 1.0, 1.5, 2.5):
        assert illuminated_boundary(unit_square(), curve.position(t)[0]).full


def test_one_dimensional_table():
    table = one_dimensional_table(full_period_modes=8)
    rows = {row["t0"]: row for row in table["constant_rate"]}
    assert rows[F(1, 2)]["t_opt"] == 2
    assert rows[F(1, 5)]["t_opt"] is NOT_OBSERVABLE
    assert rows[F(1, 5)]["oracle_t_opt"] is NOT_OBSERVABLE
    assert rows[F(2, 5)]["t_opt"] == F(14, 5)
    assert rows[F(2, 3)]["t_opt"] == 3
    assert rows[F(7, 4)]["t_opt"] == 3
    assert all(row["agreement"] for row in table["constant_rate"])
    assert [row["t_opt"] for row in table["single_exchange"]] == [F(3), F(5, 2), F(3)]
    assert all(row["agreement"] for row in table["single_exchange"])
    assert table["full_period_constant"] == pytest.approx(4.0, abs=1e-9)


def test_application_reports_bundle():
    reports = application_reports(square_max_n=3, full_period_modes=4)
    assert set(reports) == {"sphere_rotation", "square_alternating", "square_sweep", "square_illuminated",
                            "radius_max", "optimality", "one_dimensional"}
    assert reports["sphere_rotation"]["observable_by_criterion"]
    assert len(reports["square_alternating"]) == 3
    sweep = reports["square_sweep"]
    assert sweep["switch_time"] == 1.0
    assert [level["symdiff"] for level in sweep["levels"]] == pytest.approx([1.0, 1.0, 0.5, 0.25], abs=1e-12)
    assert reports["radius_max"]["square_from_corner"] == pytest.approx(SQRT2)
    assert reports["radius_max"]["ball_from_0_1_1"] == pytest.approx(1 + SQRT2)


def test_one_dimensional_table_cases_and_limits():
    table = one_dimensional_table(full_period_modes=4)
    cases = {row["t0"]: row["case"] for row in table["constant_rate"]}
    assert cases[F(1, 2)] == "HalfEvenM(m=1)"
    assert cases[F(2, 5)] == "TwoOverOddEvenH(h=2)"
    assert cases[F(1, 3)] == "OddDenominator(n=1)"
    assert cases[F(7, 4)] == "Large(n=1)"
    assert table["single_endpoint_t_opt"] == 2

    boundary = table["single_exchange"][2]
    assert boundary["t0"] == 1 and boundary["t_opt"] == 3
    assert boundary["reduced"][1]["interval"] == [F(2), F(3)]
    assert table["single_exchange"][0]["reduced"][1]["interval"] == [F(5, 2), F(3)]

    jumps = {row["kind"]: row for row in table["discontinuities"]}
    assert (jumps["lambda_n"]["left_limit"], jumps["lambda_n"]["right_limit"]) == (F(4), F(3))
    assert jumps["xi_m"]["location"] == F(3, 8)
    assert jumps["xi_m"]["left_limit"] == 4 + 2 * F(3, 8)
    assert jumps["xi_m"]["right_limit"] == 3 + 2 * F(3, 8)
    assert abs(jumps["xi_m"]["jump"]) == 1
    assert jumps["mu_m"]["jump"] == F(3, 4)


def test_square_illuminated_sets():
    sets = square_illuminated_sets(0.5)
    assert sets["d_0"] == ["y=0", "x=0"]
    assert sets["l_0"] == ["y=1", "x=0"]
