# -*- coding: utf-8 -*-
"""
Applications - v1.0.0
Esempi risolti: rotazione sulla sfera, quadrato con osservazione alternata,
curva che attraversa il bordo del quadrato, non ottimalità della soglia e tabella
dei valori unidimensionali.
"""

import logging
import math
from fractions import Fraction
from typing import Any, Dict, List

import numpy as np

from analysis.arith import NOT_OBSERVABLE
from analysis.constant_rate import KIND_LAMBDA_N, KIND_MU, KIND_XI, cross_check, discontinuity_catalog
from analysis.multid_geometry import (
    BallDomain,
    ObservationCurve,
    Partition,
    PolygonDomain,
    alternating_threshold,
    illuminated_boundary,
    radius_max,
    symdiff_measure,
    variable_threshold,
)
from analysis.schedule_analysis import Schedule, Segment, optimal_time, single_exchange_topt
from analysis.spectral_1d import observability_constant

log = logging.getLogger(__name__)

SQRT2 = math.sqrt(2.0)


def unit_ball() -> BallDomain:
    return BallDomain(np.zeros(3), 1.0)


def unit_square() -> PolygonDomain:
    return PolygonDomain(np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]))


def sphere_rotation_curve(alpha: float) -> ObservationCurve:
    """φ(t) = √2 (0, cos(π/4 + αt), sin(π/4 + αt)), t ∈ [0, π/α]."""
    if alpha <= 0:
        raise ValueError(f"Velocità angolare non positiva: {alpha}")

    def phi(t: np.ndarray) -> np.ndarray:
        angle = math.pi / 4 + alpha * np.asarray(t, dtype=float)
        return SQRT2 * np.stack([np.zeros_like(angle), np.cos(angle), np.sin(angle)], axis=-1)

    return ObservationCurve.smooth(phi, math.pi / alpha)


def sphere_alpha_threshold() -> float:
    """Soglia su α: π/α > 2(1+√2) + √2π ⇔ α < π/(2(1+√2) + π√2)."""
    return math.pi / (2 * (1 + SQRT2) + math.pi * SQRT2)


def square_alternating_points(n: int) -> np.ndarray:
    """x_0, …, x_N alternati tra (1,1) e (0,0)."""
    corners = np.array([[1.0, 1.0], [0.0, 0.0]])
    return corners[np.arange(n + 1) % 2]


def square_alternating_table(max_n: int) -> List[Dict[str, Any]]:
    square = unit_square()
    rows = []
    for n in range(1, max_n + 1):
        threshold, _ = alternating_threshold(square, square_alternating_points(n))
        rows.append({
            "N": n,
            "threshold": threshold,
            "closed_form": SQRT2 * (n + 2),
            "t0_lower_bound": SQRT2 * (n + 2) / (n + 1),
        })
    return rows


def square_sweep_curve(beta: float) -> ObservationCurve:
    """φ(t) = (2, −½ + βt), t ∈ [0, 1/β]; Γ_φ(t) cambia in t = 1/(2β)."""
    if beta <= 0:
        raise ValueError(f"β non positivo: {beta}")
    return ObservationCurve.polyline([0.0, 1.0 / beta], [[2.0, -0.5], [2.0, 0.5]])


def optimality_curve() -> ObservationCurve:
    """Cammino chiuso dall'angolo (0,0), interno al quadrato per t ∈ (0, T)."""
    return ObservationCurve.polyline(
        [0.0, 1.0, 2.0, 3.0],
        [[0.0, 0.0], [0.5, 0.25], [0.25, 0.5], [0.0, 0.0]],
    )


def optimality_gap() -> Dict[str, float]:
    """Soglia del criterio (2√2 + L(φ)) contro la soglia nota √2."""
    report = variable_threshold(unit_square(), optimality_curve())
    return {
        "criterion_threshold": report.threshold,
        "curve_length": report.variation,
        "known_threshold": SQRT2,
        "gap": report.threshold - SQRT2,
    }


SINGLE_EXCHANGE_EXAMPLES = (Fraction(3, 2), Fraction(1, 2), Fraction(1))
CONSTANT_RATE_EXAMPLES = (
    Fraction(1, 2), Fraction(1, 4), Fraction(1, 5), Fraction(1, 3), Fraction(1),
    Fraction(2, 5), Fraction(2, 3), Fraction(7, 4), Fraction(3, 2), Fraction(5, 4),
)
# (tipo, posizione) dei salti riportati: λ_1, ξ (k=2, m=1), μ (k=1, m=1)
CATALOG_EXAMPLES = ((KIND_LAMBDA_N, Fraction(3, 2)), (KIND_XI, Fraction(3, 8)), (KIND_MU, Fraction(3, 4)))
SQUARE_EDGE_NAMES = ("y=0", "x=1", "y=1", "x=0")


def one_dimensional_table(full_period_modes: int = 32) -> Dict[str, Any]:
    """Valori di riferimento unidimensionali, forma chiusa e sweep affiancati."""
    constant_rate_rows = []
    for t0 in CONSTANT_RATE_EXAMPLES:
        check = cross_check(t0)
        constant_rate_rows.append({
            "t0": t0,
            "case": check.analysis.case.label,
            "t_opt": check.analysis.t_opt,
            "oracle_t_opt": check.oracle_t_opt if check.oracle_t_opt is not None else NOT_OBSERVABLE,
            "agreement": check.agreement,
        })

    single_exchange_rows = []
    for t0 in SINGLE_EXCHANGE_EXAMPLES:
        closed = single_exchange_topt(t0)
        oracle = optimal_time(Schedule.single_exchange(t0)).t_opt
        single_exchange_rows.append({
            "t0": t0,
            "t_opt": closed.t_opt,
            "oracle_t_opt": oracle,
            "agreement": closed.t_opt == oracle,
            "reduced": [{"endpoint": endpoint, "interval": list(interval)} for endpoint, interval in closed.reduced],
        })

    catalog = {(p.kind, p.location): p for p in discontinuity_catalog(Fraction(1, 10), Fraction(19, 10), max_order=2).points}
    discontinuities = []
    for kind, location in CATALOG_EXAMPLES:
        point = catalog[(kind, location)]
        discontinuities.append({
            "kind": kind,
            "location": location,
            "order": dict(point.order),
            "left_limit": point.left_limit,
            "right_limit": point.right_limit,
            "jump": point.jump,
        })

    # un solo estremo per sempre: basta un giro completo
    single_endpoint = optimal_time(Schedule((Segment(0, Fraction(0), None),)))
    full_period = Schedule((Segment(0, Fraction(0), Fraction(2)),))
    return {
        "constant_rate": constant_rate_rows,
        "single_exchange": single_exchange_rows,
        "single_endpoint_t_opt": single_endpoint.t_opt,
        "discontinuities": discontinuities,
        "full_period_constant": observability_constant(full_period, 2.0, full_period_modes),
    }


def square_illuminated_sets(beta: float = 0.5) -> Dict[str, List[str]]:
    """d_0 visto da (1,1) e l_0 visto dalla curva (2, −½ + βt) prima dello scambio."""
    square = unit_square()
    before_switch = square_sweep_curve(beta).position(0.25 / beta)[0]
    return {
        "d_0": [SQUARE_EDGE_NAMES[i] for i in illuminated_boundary(square, [1.0, 1.0]).edges],
        "l_0": [SQUARE_EDGE_NAMES[i] for i in illuminated_boundary(square, before_switch).edges],
    }


def application_reports(sphere_alpha: float = 0.3, square_max_n: int = 6, sweep_beta: float = 0.5,
                        full_period_modes: int = 32) -> Dict[str, Any]:
    """Raccolta completa degli esempi, usata da `multid --paper-examples`."""
    sphere = variable_threshold(unit_ball(), sphere_rotation_curve(sphere_alpha))
    sweep_curve = square_sweep_curve(sweep_beta)
    sweep_levels = []
    for level in range(0, 4):
        result = symdiff_measure(unit_square(), sweep_curve, Partition.dyadic(sweep_curve.horizon, level))
        sweep_levels.append({"level": level, "symdiff": result.value, "converged": result.converged})

    log.info(f"Esempi calcolati: α={sphere_alpha}, N fino a {square_max_n}")
    return {
        "sphere_rotation": {
            "alpha": sphere_alpha,
            "alpha_threshold": sphere_alpha_threshold(),
            "curve_length": sphere.variation,
            "c0": sphere.c0,
            "c_t": sphere.c_t,
            "threshold": sphere.threshold,
            "horizon": sphere.horizon,
            "observable_by_criterion": sphere.observable_by_criterion,
        },
        "square_alternating": square_alternating_table(square_max_n),
        "square_sweep": {"beta": sweep_beta, "switch_time": 1.0 / (2 * sweep_beta), "levels": sweep_levels},
        "square_illuminated": square_illuminated_sets(sweep_beta),
        "radius_max": {
            "square_from_corner": radius_max(unit_square(), [1.0, 1.0]),
            "ball_from_0_1_1": radius_max(unit_ball(), [0.0, 1.0, 1.0]),
        },
        "optimality": optimality_gap(),
        "one_dimensional": one_dimensional_table(full_period_modes),
    }
