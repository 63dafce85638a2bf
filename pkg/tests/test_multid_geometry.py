import math

import numpy as np
import pytest

from analysis.applications import sphere_rotation_curve
from analysis.multid_geometry import (
    BallDomain,
    ObservationCurve,
    Partition,
    PolygonDomain,
    _cap_intersection_unit,
    alternating_threshold,
    cap_measure,
    curve_variation,
    illuminated_boundary,
    partition_sigma,
    radius_max,
    sigma_measure,
    symdiff_measure,
    variable_threshold,
)

SQUARE = PolygonDomain(np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]))
BALL3 = BallDomain(np.zeros(3), 1.0)
DISK = BallDomain(np.zeros(2), 1.0)

BOTTOM, RIGHT, TOP, LEFT = range(4)


def test_polygon_validation_and_normals():
    assert np.allclose(SQUARE.normals, [[0, -1], [1, 0], [0, 1], [-1, 0]])
    assert SQUARE.perimeter == pytest.approx(4.0)
    with pytest.raises(ValueError):
        PolygonDomain(np.array([[0.0, 0.0], [0.0, 1.0], [1.0, 1.0], [1.0, 0.0]]))
    with pytest.raises(ValueError):
        PolygonDomain(np.array([[0.0, 0.0], [1.0, 0.0]]))
    with pytest.raises(ValueError):
        PolygonDomain(np.array([[0.0, 0.0], [2.0, 0.0], [1.0, 0.5], [2.0, 2.0], [0.0, 2.0]]))


def test_illuminated_square_edges():
    assert illuminated_boundary(SQUARE, [2.0, -0.25]).edges == (TOP, LEFT)
    assert illuminated_boundary(SQUARE, [2.0, 0.25]).edges == (BOTTOM, TOP, LEFT)
    interior = illuminated_boundary(SQUARE, [0.5, 0.5])
    assert interior.full
    assert interior.measure == pytest.approx(4.0)
    # dall'angolo (0,0) i due lati adiacenti hanno (x − x0)·ν = 0
    assert illuminated_boundary(SQUARE, [0.0, 0.0]).edges == (RIGHT, TOP)


def test_illuminated_ball_caps():
    inside = illuminated_boundary(BALL3, [0.2, 0.0, 0.0])
    assert inside.full
    assert inside.measure == pytest.approx(4 * math.pi)
    outside = illuminated_boundary(BALL3, [0.0, 0.0, 2.0])
    assert np.allclose(outside.axis, [0, 0, -1])
    assert outside.aperture == pytest.approx(math.acos(-0.5))
    assert outside.measure == pytest.approx(3 * math.pi)


def test_cap_measure_dimensions():
    assert cap_measure(math.pi, 1.0, 2) == pytest.approx(2 * math.pi)
    assert cap_measure(math.pi / 2, 2.0, 3) == pytest.approx(8 * math.pi)
    total4 = 2 * math.pi**2
    assert cap_measure(math.pi / 2, 1.0, 4) == pytest.approx(total4 / 2)
    assert cap_measure(math.pi, 1.0, 4) == pytest.approx(total4)
    assert cap_measure(2 * math.pi / 3, 1.0, 4) > total4 / 2


def test_radius_max():
    assert radius_max(SQUARE, [0.0, 0.0]) == pytest.approx(math.sqrt(2))
    assert radius_max(SQUARE, [2.0, -0.5]) == pytest.approx(math.hypot(2.0, 1.5))
    assert radius_max(BALL3, [0.0, math.sqrt(2), 0.0]) == pytest.approx(1 + math.sqrt(2))


def test_cap_intersection_closed_cases():
    quarter = _cap_intersection_unit(np.array([math.pi / 2]), np.array([math.pi / 2]), np.array([math.pi / 2]))
    assert quarter[0] == pytest.approx(math.pi)
    opposite = _cap_intersection_unit(np.array([math.pi / 2]), np.array([math.pi / 2]), np.array([math.pi]))
    assert opposite[0] == pytest.approx(0.0, abs=1e-12)
    nested = _cap_intersection_unit(np.array([math.pi / 6]), np.array([math.pi / 3]), np.array([0.1]))
    assert nested[0] == pytest.approx(2 * math.pi * (1 - math.cos(math.pi / 6)))
    big = _cap_intersection_unit(np.array([2 * math.pi / 3]), np.array([2 * math.pi / 3]), np.array([0.0]))
    assert big[0] == pytest.approx(3 * math.pi)


@pytest.mark.parametrize("theta1, theta2, angle", [
    (math.pi / 3, math.pi / 4, math.pi / 4),
    (2 * math.pi / 3, math.pi / 4, math.pi / 2),
    (2 * math.pi / 3, 3 * math.pi / 4, 2.0),
])
def test_cap_intersection_against_monte_carlo(theta1, theta2, angle):
    rng = np.random.default_rng(42)
    points = rng.standard_normal((400_000, 3))
    points /= np.linalg.norm(points, axis=1)[:, None]
    a = np.array([0.0, 0.0, 1.0])
    b = np.array([math.sin(angle), 0.0, math.cos(angle)])
    inside = (points @ a >= math.cos(theta1)) & (points @ b >= math.cos(theta2))
    estimate = 4 * math.pi * inside.mean()
    exact = _cap_intersection_unit(np.array([theta1]), np.array([theta2]), np.array([angle]))[0]
    assert exact == pytest.approx(estimate, abs=0.05)


def test_alternating_threshold_square():
    points = np.array([[1.0, 1.0], [0.0, 0.0], [1.0, 1.0]])
    threshold, constant = alternating_threshold(SQUARE, points)
    assert threshold == pytest.approx(4 * math.sqrt(2))
    assert constant is None
    _, constant = alternating_threshold(SQUARE, points, horizon=6.0)
    assert constant == pytest.approx(2 * (6.0 - 4 * math.sqrt(2)))


def test_piecewise_constant_variation_matches_alternating_threshold():
    points = [[1.0, 1.0], [0.0, 0.0], [1.0, 1.0], [0.0, 0.0]]
    curve = ObservationCurve.piecewise_constant([0.0, 1.0, 2.0, 3.0, 8.0], points)
    report = variable_threshold(SQUARE, curve)
    threshold, _ = alternating_threshold(SQUARE, points, curve.horizon)
    assert report.threshold == threshold
    assert report.observable_by_criterion == (8.0 > threshold)
    assert np.allclose(curve.position([0.5, 1.0, 7.9, 8.0]), [[1, 1], [0, 0], [0, 0], [0, 0]])


def test_smooth_curve_length():
    def circle(t):
        t = np.asarray(t, dtype=float)
        return np.stack([np.cos(t), np.sin(t)], axis=-1)

    curve = ObservationCurve.smooth(circle, math.pi)
    assert curve_variation(curve) == pytest.approx(math.pi, rel=1e-7)
    sampled = ObservationCurve.sampled(np.linspace(0, math.pi, 81), circle(np.linspace(0, math.pi, 81)))
    assert curve_variation(sampled) == pytest.approx(math.pi, rel=1e-4)


def test_curve_validation():
    with pytest.raises(ValueError):
        ObservationCurve.polyline([0.0, 0.0], [[0, 0], [1, 1]])
    with pytest.raises(ValueError):
        ObservationCurve.polyline([1.0, 2.0], [[0, 0], [1, 1]])
    with pytest.raises(ValueError):
        ObservationCurve.piecewise_constant([0.0, 1.0], [[0, 0], [1, 1]])
    with pytest.raises(ValueError):
        ObservationCurve("spline", [0.0, 1.0], [[0, 0], [1, 1]])


def test_partition_constructors():
    assert Partition.dyadic(2.0, 2).times == (0.0, 0.5, 1.0, 1.5, 2.0)
    assert Partition.dyadic(2.0, 2).amplitude == 0.5
    with pytest.raises(ValueError):
        Partition((0.0, 1.0, 1.0))


def test_sweep_symdiff_refinement():
    curve = ObservationCurve.polyline([0.0, 2.0], [[2.0, -0.5], [2.0, 0.5]])
    values = [symdiff_measure(SQUARE, curve, Partition.dyadic(2.0, level)).value for level in range(5)]
    # il riferimento in t = 1 vede ancora y = 0: il lato inferiore resta spento
    assert values == pytest.approx([1.0, 1.0, 0.5, 0.25, 0.125], abs=1e-12)
    aligned = symdiff_measure(SQUARE, curve, Partition((0.0, 1.0 + 1e-9, 2.0)))
    assert aligned.value == pytest.approx(0.0, abs=1e-8)


def test_partition_sigma_cells():
    curve = ObservationCurve.polyline([0.0, 2.0], [[2.0, -0.5], [2.0, 0.5]])
    cells = partition_sigma(SQUARE, curve, Partition.dyadic(2.0, 1))
    assert [cell for cell, _ in cells] == [(0.0, 1.0), (1.0, 2.0)]
    assert cells[0][1].edges == (TOP, LEFT)


def test_symdiff_requires_spanning_partition():
    curve = ObservationCurve.polyline([0.0, 2.0], [[2.0, -0.5], [2.0, 0.5]])
    with pytest.raises(ValueError):
        symdiff_measure(SQUARE, curve, Partition((0.0, 1.0)))


def test_sigma_measure_constant_curve():
    curve = ObservationCurve.polyline([0.0, 3.0], [[2.0, -0.25], [2.0, -0.25]])
    result = sigma_measure(SQUARE, curve)
    assert result.value == pytest.approx(6.0)
    assert result.converged


def test_ball_symdiff_vanishes_for_static_curve_and_converges():
    static = ObservationCurve.polyline([0.0, 1.0], [[0.0, 0.0, 2.0], [0.0, 0.0, 2.0]])
    assert symdiff_measure(BALL3, static, Partition.dyadic(1.0, 0)).value == pytest.approx(0.0, abs=1e-12)

    def rotation(t):
        angle = np.asarray(t, dtype=float)
        return 2.0 * np.stack([np.cos(angle), np.sin(angle)], axis=-1)

    moving = ObservationCurve.smooth(rotation, 1.0)
    coarse = symdiff_measure(DISK, moving, Partition.dyadic(1.0, 1)).value
    fine = symdiff_measure(DISK, moving, Partition.dyadic(1.0, 3)).value
    assert 0 < fine < coarse


@pytest.mark.slow
def test_sphere_rotation_symdiff_decreases_with_refinement():
    curve = sphere_rotation_curve(0.3)
    values = [symdiff_measure(BALL3, curve, Partition.dyadic(curve.horizon, level)).value for level in range(4, 11)]
    assert all(fine < coarse for coarse, fine in zip(values, values[1:]))
    total = sigma_measure(BALL3, curve).value
    assert values[-1] <= 1e-3 * total


def test_disk_symdiff_matches_rotation_formula():
    def rotation(t):
        angle = np.asarray(t, dtype=float)
        return 2.0 * np.stack([np.cos(angle), np.sin(angle)], axis=-1)

    curve = ObservationCurve.smooth(rotation, 0.5)
    result = symdiff_measure(DISK, curve, Partition.dyadic(0.5, 0), rtol=1e-9, max_samples=8192)
    # arco che ruota di s: |A Δ A_s| = 2s finché s non supera l'apertura; ∫₀^T 2s ds = T²
    assert result.value == pytest.approx(0.25, rel=1e-6)
