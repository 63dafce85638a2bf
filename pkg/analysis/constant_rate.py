# -*- coding: utf-8 -*-
"""
Constant Rate - v1.0.0
Schedule a frequenza costante F = {{λ_k} × (kT_0, (k+1)T_0)}: classificazione dei
casi, T_opt in forma chiusa, catalogo delle discontinuità e mappa T_0 ↦ T_opt.
Tempi in unità di π.
"""

import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from tqdm import tqdm

from analysis.arith import (
    INFINITY,
    NOT_OBSERVABLE,
    InvariantViolation,
    Number,
    exact_ceil,
    exact_floor,
    integer_value,
    is_exact,
)
from analysis.circle_arcs import PERIOD, ArcSet
from analysis.schedule_analysis import Schedule, default_horizon, optimal_time

log = logging.getLogger(__name__)

LARGE = "Large"
HALF_EVEN_M = "HalfEvenM"
ODD_DENOMINATOR = "OddDenominator"
TWO_OVER_ODD_EVEN_H = "TwoOverOddEvenH"
TWO_OVER_ODD_ODD_H = "TwoOverOddOddH"
GEN_EVEN_EVEN = "GenEvenEven"
GEN_EVEN_ODD = "GenEvenOdd"
GEN_ODD_EVEN = "GenOddEven"
GEN_ODD_ODD = "GenOddOdd"

KIND_LAMBDA_N = "lambda_n"
KIND_PI_OVER_2N = "pi_over_2n"
KIND_PI_OVER_ODD = "pi_over_odd"
KIND_TWO_PI_OVER_ODD_EVEN = "two_pi_over_odd_even"
KIND_TWO_PI_OVER_ODD_ODD = "two_pi_over_odd_odd"
KIND_MU = "mu_m"
KIND_XI = "xi_m"


@dataclass(frozen=True)
class RateCase:
    kind: str
    params: Tuple[Tuple[str, int], ...] = ()

    def param(self, name: str) -> int:
        return dict(self.params)[name]

    @property
    def label(self) -> str:
        if not self.params:
            return self.kind
        inner = ",".join(f"{name}={value}" for name, value in self.params)
        return f"{self.kind}({inner})"


@dataclass(frozen=True)
class RateAnalysis:
    t0: Number
    N: int
    j: int
    case: RateCase
    t_opt: object


@dataclass(frozen=True)
class DiscontinuityPoint:
    location: Number
    kind: str
    order: Tuple[Tuple[str, int], ...]
    left_limit: Number
    right_limit: Number
    value_at: object

    @property
    def jump(self) -> Number:
        return self.right_limit - self.left_limit


@dataclass(frozen=True)
class DiscontinuityCatalog:
    points: Tuple[DiscontinuityPoint, ...]


@dataclass(frozen=True)
class MapPoint:
    t0: Number
    analysis: RateAnalysis


@dataclass(frozen=True)
class CrossCheck:
    t0: Number
    analysis: RateAnalysis
    oracle_t_opt: Optional[Number]
    oracle_segments: int
    agreement: bool
    oracle_uncovered: Optional[ArcSet] = None


def _validate(t0: Number) -> None:
    if not 0 < t0 < PERIOD:
        raise ValueError(f"T_0 deve essere in (0, 2π): {t0}π")


def _one(t0: Number) -> Number:
    return Fraction(1) if is_exact(t0) else 1.0


def classify(t0: Number) -> RateAnalysis:
    """
    Classifica T_0 in uno dei casi e calcola il corrispondente T_opt.

    Args:
        t0: T_0 in unità di π, in (0, 2)

    Returns:
        RateAnalysis con N = ⌊2π/T_0⌋, j = ⌊π/T_0⌋, caso e T_opt (o NOT_OBSERVABLE)
    """
    _validate(t0)
    one = _one(t0)
    N = exact_floor(PERIOD / t0)
    j = exact_floor(one / t0)

    if t0 > 1:
        n = exact_ceil(one / (t0 - 1)) - 1
        case = RateCase(LARGE, (("n", n),))
        return RateAnalysis(t0, N, j, case, (n + 2) * one)

    inverse = integer_value(one / t0)
    if inverse is not None:
        if inverse % 2 == 0:
            return RateAnalysis(t0, N, j, RateCase(HALF_EVEN_M, (("m", inverse // 2),)), 2 * one)
        return RateAnalysis(t0, N, j, RateCase(ODD_DENOMINATOR, (("n", (inverse - 1) // 2),)), NOT_OBSERVABLE)

    double_inverse = integer_value(PERIOD / t0)
    if double_inverse is not None:
        h = (double_inverse - 1) // 2
        if h % 2 == 0:
            return RateAnalysis(t0, N, j, RateCase(TWO_OVER_ODD_EVEN_H, (("h", h),)), 3 * one - t0 / 2)
        return RateAnalysis(t0, N, j, RateCase(TWO_OVER_ODD_ODD_H, (("h", h),)), 3 * one)

    if N % 2 == 0 and j % 2 == 0:
        return RateAnalysis(t0, N, j, RateCase(GEN_EVEN_EVEN), PERIOD + j * t0)

    if N % 2 == 0:
        gap = PERIOD - N * t0
        k_star = exact_ceil(t0 / gap)
        h_star = exact_ceil((one - j * t0 + t0) / gap)
        case = RateCase(GEN_EVEN_ODD, (("h*", h_star), ("k*", k_star)))
        if h_star == k_star + 1:
            return RateAnalysis(t0, N, j, case, one + t0 * (N * k_star + 1))
        if h_star == k_star:
            return RateAnalysis(t0, N, j, case, one + t0 * (N * k_star - j + 1))
        raise InvariantViolation(f"Soglie incoerenti per T_0={t0}π: h*={h_star}, k*={k_star}")

    if j % 2 == 0:
        excess = (N + 1) * t0 - PERIOD
        l_star = exact_ceil(t0 / excess)
        q_star = exact_ceil((one - j * t0) / excess)
        case = RateCase(GEN_ODD_EVEN, (("l*", l_star), ("q*", q_star)))
        if l_star == q_star:
            return RateAnalysis(t0, N, j, case, PERIOD * q_star + j * t0)
        if l_star == q_star + 1:
            return RateAnalysis(t0, N, j, case, PERIOD * q_star + j * t0 + one)
        raise InvariantViolation(f"Soglie incoerenti per T_0={t0}π: l*={l_star}, q*={q_star}")

    return RateAnalysis(t0, N, j, RateCase(GEN_ODD_ODD), N * t0 + one)


def topt_constant_rate(t0: Number):
    """T_opt in forma chiusa, oppure NOT_OBSERVABLE."""
    return classify(t0).t_opt


def cross_check(t0: Number, horizon: Optional[int] = None) -> CrossCheck:
    """
    Confronta la forma chiusa con lo sweep sullo schedule esplicito.
    Senza orizzonte esplicito, l'orizzonte copre anche il valore chiuso atteso.
    """
    analysis = classify(t0)
    if horizon is None:
        probe = Schedule.constant_rate(t0, 1)
        horizon = default_horizon(probe)
        if analysis.t_opt is not NOT_OBSERVABLE:
            horizon = max(horizon, math.ceil(analysis.t_opt / t0) + 2)
    schedule = Schedule.constant_rate(t0, horizon)
    report = optimal_time(schedule, horizon=horizon)

    if analysis.t_opt is NOT_OBSERVABLE:
        agreement = not report.observable
    elif not report.observable:
        agreement = False
    elif is_exact(t0):
        agreement = report.t_opt == analysis.t_opt
    else:
        agreement = abs(report.t_opt - analysis.t_opt) <= 1e-9 * max(1.0, abs(analysis.t_opt))

    if not agreement:
        log.warning(f"Disaccordo forma chiusa/sweep per T_0={t0}π: {analysis.t_opt} vs {report.t_opt}")
    return CrossCheck(t0, analysis, report.t_opt, report.segments_examined, agreement, report.uncovered)


# ----------------------------------------------------------------------
# Catalogo delle discontinuità


def _catalog_candidates(max_order: int) -> List[Dict]:
    one = Fraction(1)
    points: List[Dict] = []

    for n in range(1, max_order + 1):
        points.append(dict(location=Fraction(n + 2, n + 1), kind=KIND_LAMBDA_N, order=(("n", n),),
                           left=Fraction(n + 3), right=Fraction(n + 2)))

    for n in range(1, max_order + 1):
        t = Fraction(1, 2 * n)
        points.append(dict(location=t, kind=KIND_PI_OVER_2N, order=(("n", n),),
                           left=Fraction(3), right=3 - t))

    for n in range(0, max_order + 1):
        points.append(dict(location=Fraction(1, 2 * n + 1), kind=KIND_PI_OVER_ODD, order=(("n", n),),
                           left=INFINITY, right=INFINITY))

    for h in range(1, max_order + 1):
        t = Fraction(2, 2 * h + 1)
        shift = Fraction(2 * h, 2 * h + 1)
        if h % 2 == 0:
            points.append(dict(location=t, kind=KIND_TWO_PI_OVER_ODD_EVEN, order=(("h", h),),
                               left=3 + shift, right=Fraction(6 * h + 2, 2 * h + 1)))
        else:
            points.append(dict(location=t, kind=KIND_TWO_PI_OVER_ODD_ODD, order=(("h", h),),
                               left=Fraction(3), right=3 + shift))

    for k in range(1, max_order + 1):
        for m in range(1, max_order + 1):
            if k % 2 == 1:
                mu = one / (k + Fraction(1, m + 2))
                points.append(dict(location=mu, kind=KIND_MU, order=(("k", k), ("m", m)),
                                   left=1 + mu * (k * (m + 2) + 1), right=1 + mu * (k * (m + 3) + 1)))
            else:
                xi = one / (k + Fraction(m + 1, m + 2))
                points.append(dict(location=xi, kind=KIND_XI, order=(("k", k), ("m", m)),
                                   left=m + 3 + k * xi, right=m + 2 + k * xi))
    return points


def discontinuity_catalog(a: Number, b: Number, max_order: int = 6) -> DiscontinuityCatalog:
    """
    Punti di discontinuità di T_0 ↦ T_opt nell'intervallo aperto (a, b).
    Le famiglie sono infinite: max_order limita n, h, k, m.
    """
    if max_order < 1:
        raise ValueError(f"max_order deve essere positivo: {max_order}")
    points = []
    for candidate in _catalog_candidates(max_order):
        location = candidate["location"]
        if not a < location < b:
            continue
        points.append(DiscontinuityPoint(
            location=location,
            kind=candidate["kind"],
            order=candidate["order"],
            left_limit=candidate["left"],
            right_limit=candidate["right"],
            value_at=topt_constant_rate(location),
        ))
    points.sort(key=lambda p: p.location)
    log.info(f"Catalogo discontinuità: {len(points)} punti in ({a}, {b}) con ordine {max_order}")
    return DiscontinuityCatalog(tuple(points))


# ----------------------------------------------------------------------
# Mappa T_0 ↦ T_opt


def map_grid(a: Number, b: Number, step: Number) -> List[Number]:
    """Griglia a, a+step, … < b; un solo punto se a == b; i punti fuori da (0, 2) sono scartati."""
    if step <= 0:
        raise ValueError(f"Il passo deve essere positivo: {step}")
    if a > b:
        return []
    if a == b:
        grid = [a]
    else:
        count = math.ceil((b - a) / step)
        grid = [a + i * step for i in range(count)]
        grid = [t for t in grid if t < b]
    return [t for t in grid if 0 < t < PERIOD]


def topt_map(a: Number, b: Number, step: Number, max_workers: Optional[int] = None,
             show_progress: bool = False) -> List[MapPoint]:
    """
    Valuta topt_constant_rate sulla griglia in parallelo; l'ordine dei risultati
    segue la griglia indipendentemente dal completamento dei worker.
    """
    grid = map_grid(a, b, step)
    if not grid:
        return []
    workers = max_workers or min(os.cpu_count() or 4, 8)
    results: List[Optional[MapPoint]] = [None] * len(grid)

    with ThreadPoolExecutor(max_workers=workers) as executor:
        future_to_index = {executor.submit(classify, t0): index for index, t0 in enumerate(grid)}
        for future in tqdm(as_completed(future_to_index), total=len(grid), desc="Mappa T_opt",
                           unit="punti", disable=not show_progress):
            index = future_to_index[future]
            results[index] = MapPoint(grid[index], future.result())

    log.info(f"Mappa T_opt calcolata su {len(grid)} punti con {workers} worker")
    return [point for point in results if point is not None]
