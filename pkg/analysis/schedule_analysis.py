# -*- coding: utf-8 -*-
"""
Schedule Analysis - v1.0.0
Osservabilità con osservazione alternata agli estremi: condizione di copertura,
tempo ottimo T_opt tramite sweep esatto, schedule disgiunto F′.
Tutti i tempi sono in unità di π; λ = 0 per l'estremo x=0 e λ = 1 per x=π.
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from analysis.arith import (
    FLOAT_EPS,
    InvariantViolation,
    Number,
    all_exact,
    check_homogeneous,
    is_exact,
)
from analysis.circle_arcs import PERIOD, ArcSet, project_interval, quotient

log = logging.getLogger(__name__)

ENDPOINT_ZERO = 0
ENDPOINT_PI = 1
DEFAULT_HORIZON_FACTOR = 10

VERDICT_OBSERVABLE = "observable"
VERDICT_NOT_WITHIN_HORIZON = "not_observable_within_horizon"


@dataclass(frozen=True)
class Segment:
    """Osservazione all'estremo `endpoint` sull'intervallo aperto (start, end)."""

    endpoint: int
    start: Number
    end: Optional[Number] = None

    @property
    def bounded(self) -> bool:
        return self.end is not None

    @property
    def length(self) -> Number:
        if self.end is None:
            return math.inf
        return self.end - self.start

    def projection(self) -> ArcSet:
        return project_interval(self.start, self.end, self.endpoint)


@dataclass(frozen=True)
class Schedule:
    """
    Famiglia F = {{λ_k} × I_k}: intervalli consecutivi, solo l'ultimo può essere illimitato.
    """

    segments: Tuple[Segment, ...]

    def __post_init__(self):
        if not self.segments:
            raise ValueError("Lo schedule deve contenere almeno un segmento")
        values = [s.start for s in self.segments] + [s.end for s in self.segments if s.end is not None]
        check_homogeneous(values)
        tol = 0 if self.exact else FLOAT_EPS
        if self.segments[0].start < 0:
            raise ValueError(f"Il primo intervallo inizia prima di t=0: {self.segments[0].start}")
        for index, segment in enumerate(self.segments):
            if segment.endpoint not in (ENDPOINT_ZERO, ENDPOINT_PI):
                raise ValueError(f"Estremo non valido nel segmento {index}: {segment.endpoint}")
            if segment.end is None and index != len(self.segments) - 1:
                raise ValueError(f"Solo l'ultimo intervallo può essere illimitato (segmento {index})")
            if segment.end is not None and segment.end <= segment.start:
                raise ValueError(f"Intervallo vuoto nel segmento {index}: ({segment.start}, {segment.end})")
            if index > 0:
                previous = self.segments[index - 1]
                if abs(previous.end - segment.start) > tol:
                    raise ValueError(
                        f"Intervalli non consecutivi tra i segmenti {index - 1} e {index}: "
                        f"{previous.end} ≠ {segment.start}"
                    )

    @property
    def exact(self) -> bool:
        values = [s.start for s in self.segments] + [s.end for s in self.segments if s.end is not None]
        return all_exact(values)

    @property
    def unbounded(self) -> bool:
        return self.segments[-1].end is None

    def min_segment_length(self) -> Optional[Number]:
        lengths = [s.length for s in self.segments if s.bounded]
        return min(lengths) if lengths else None

    def finite_horizon(self) -> Number:
        """Fine dell'ultimo intervallo; per code illimitate, inizio dell'ultimo più un periodo."""
        last = self.segments[-1]
        return last.end if last.bounded else last.start + PERIOD

    def truncated(self, count: int) -> "Schedule":
        return Schedule(self.segments[:count])

    # ------------------------------------------------------------------
    # Costruttori

    @classmethod
    def alternating(cls, times: Sequence[Number], first_endpoint: int = ENDPOINT_ZERO,
                    unbounded_tail: bool = False) -> "Schedule":
        """
        Schedule alternato 0, π, 0, … sugli intervalli (times[k-1], times[k]) con times[-1] = 0.
        Con unbounded_tail aggiunge l'intervallo finale (times[-1], +∞).
        """
        edges = [Fraction(0) if all_exact(times) else 0.0] + list(times)
        segments = []
        for k in range(len(edges) - 1):
            segments.append(Segment((first_endpoint + k) % 2, edges[k], edges[k + 1]))
        if unbounded_tail:
            segments.append(Segment((first_endpoint + len(segments)) % 2, edges[-1], None))
        return cls(tuple(segments))

    @classmethod
    def constant_rate(cls, t0: Number, count: int) -> "Schedule":
        """I primi `count` segmenti di {{λ_k} × (kT_0, (k+1)T_0)}."""
        if count < 1:
            raise ValueError(f"Numero di segmenti non valido: {count}")
        return cls.alternating([t0 * (k + 1) for k in range(count)])

    @classmethod
    def single_exchange(cls, t0: Number) -> "Schedule":
        """Un solo scambio: (0, T_0) su x=0, poi (T_0, +∞) su x=π."""
        zero = Fraction(0) if is_exact(t0) else 0.0
        return cls((Segment(ENDPOINT_ZERO, zero, t0), Segment(ENDPOINT_PI, t0, None)))


@dataclass(frozen=True)
class GeneralizedSchedule:
    """Due famiglie indipendenti di intervalli osservati in x=0 e in x=π."""

    zero_intervals: Tuple[Tuple[Number, Optional[Number]], ...] = ()
    pi_intervals: Tuple[Tuple[Number, Optional[Number]], ...] = ()

    def __post_init__(self):
        for name, family in (("zero", self.zero_intervals), ("pi", self.pi_intervals)):
            for index, (a, b) in enumerate(family):
                if b is not None and b <= a:
                    raise ValueError(f"Intervallo vuoto nella famiglia {name}: ({a}, {b})")
                if index > 0:
                    prev_end = family[index - 1][1]
                    if prev_end is None or prev_end > a:
                        raise ValueError(f"Intervalli non ordinati o sovrapposti nella famiglia {name}")


@dataclass
class ObservabilityReport:
    observable: bool
    t_opt: Optional[Number]
    uncovered: ArcSet
    least_index_h: Optional[int]
    segments_examined: int = 0
    verdict: str = VERDICT_NOT_WITHIN_HORIZON


@dataclass(frozen=True)
class ReducedSegment:
    """Insieme I′_k ⊂ I_k: unione di intervalli la cui proiezione è J̃_k."""

    index: int
    endpoint: int
    intervals: Tuple[Tuple[Number, Number], ...]

    @property
    def length(self) -> Number:
        return sum((b - a for a, b in self.intervals), 0)


@dataclass(frozen=True)
class SingleExchangeResult:
    t_opt: Number
    reduced: Tuple[Tuple[int, Tuple[Number, Number]], ...]
    alternative: Optional[Tuple[Tuple[int, Optional[Tuple[Number, Number]]], ...]] = field(default=None)


# ----------------------------------------------------------------------
# Operazioni


def _union_of_projections(segments: Sequence[Segment], exact: bool) -> ArcSet:
    covered = ArcSet.empty(exact)
    for segment in segments:
        covered = covered.union(segment.projection())
    return covered


def is_observable_at(schedule: Schedule, n: int) -> bool:
    """Vero se le proiezioni dei segmenti 0..n ricoprono la circonferenza."""
    if not 0 <= n < len(schedule.segments):
        raise ValueError(f"Indice fuori dallo schedule: {n}")
    return _union_of_projections(schedule.segments[: n + 1], schedule.exact).covers_circle()


def default_horizon(schedule: Schedule, horizon_factor: int = DEFAULT_HORIZON_FACTOR) -> int:
    """10·⌈2π/min|I_k|⌉ segmenti (con il fattore di default)."""
    shortest = schedule.min_segment_length()
    if shortest is None:
        return len(schedule.segments)
    return horizon_factor * math.ceil(PERIOD / shortest)


def _first_cover_distance(uncovered: ArcSet, origin: Number) -> Number:
    """
    Distanza in senso orario da `origin` oltre la quale l'arco crescente
    [origin, origin + d) ha coperto tutto `uncovered`.
    """
    exact = uncovered.exact
    distance: Number = Fraction(0) if exact else 0.0
    for lo, hi in uncovered.pieces:
        offset = (lo - origin) % PERIOD
        if not exact and offset > PERIOD - FLOAT_EPS:
            offset = 0.0
        reach = offset + (hi - lo)
        needed = reach if reach <= PERIOD else PERIOD
        if needed > distance:
            distance = needed
    return distance


def optimal_time(schedule: Schedule, horizon: Optional[int] = None,
                 horizon_factor: int = DEFAULT_HORIZON_FACTOR) -> ObservabilityReport:
    """
    Calcola T_opt con uno sweep esatto sui segmenti.

    Args:
        schedule: schedule da analizzare
        horizon: numero massimo di segmenti esaminati; di default 10·⌈2π/min|I_k|⌉

    Returns:
        ObservabilityReport con T_opt, indice h e insieme residuo non coperto
    """
    exact = schedule.exact
    limit = horizon if horizon is not None else default_horizon(schedule, horizon_factor)
    segments = schedule.segments[:limit]
    uncovered = ArcSet.full(exact)

    for index, segment in enumerate(segments):
        projection = segment.projection()
        remaining = uncovered.difference(projection)
        log.debug(f"Segmento {index}: non coperto residuo {remaining.measure()}")
        if remaining.is_empty():
            origin = quotient(segment.start - segment.endpoint)
            t_opt = segment.start + _first_cover_distance(uncovered, origin)
            log.info(f"Copertura raggiunta al segmento h={index}, T_opt={t_opt}π")
            return ObservabilityReport(
                observable=True,
                t_opt=t_opt,
                uncovered=ArcSet.empty(exact),
                least_index_h=index,
                segments_examined=index + 1,
                verdict=VERDICT_OBSERVABLE,
            )
        uncovered = remaining

    log.info(f"Nessuna copertura entro {len(segments)} segmenti; misura residua {uncovered.measure()}π")
    return ObservabilityReport(
        observable=False,
        t_opt=None,
        uncovered=uncovered,
        least_index_h=None,
        segments_examined=len(segments),
        verdict=VERDICT_NOT_WITHIN_HORIZON,
    )


def single_exchange_topt(t0: Number) -> SingleExchangeResult:
    """T_opt in forma chiusa per lo schedule a singolo scambio."""
    if not 0 < t0 < PERIOD:
        raise ValueError(f"T_0 deve essere in (0, 2π): {t0}π")
    one = Fraction(1) if is_exact(t0) else 1.0
    zero = 0 * one
    if t0 > 1:
        return SingleExchangeResult(
            t_opt=3 * one,
            reduced=((ENDPOINT_ZERO, (zero, t0)), (ENDPOINT_PI, (one + t0, 3 * one))),
        )
    t_opt = PERIOD + t0
    return SingleExchangeResult(
        t_opt=t_opt,
        reduced=((ENDPOINT_ZERO, (zero, t0)), (ENDPOINT_PI, (2 * t0, t_opt))),
        alternative=((ENDPOINT_ZERO, None), (ENDPOINT_PI, (t0, t_opt))),
    )


def _lift(piece_lo: Number, piece_hi: Number, segment: Segment, origin: Number) -> Tuple[Number, Number]:
    offset = (piece_lo - origin) % PERIOD
    if not is_exact(offset) and offset > PERIOD - FLOAT_EPS:
        offset = 0.0
    start = segment.start + offset
    return start, start + (piece_hi - piece_lo)


def disjointify(schedule: Schedule, n: int) -> List[ReducedSegment]:
    """
    J̃_0 = Ĩ_0, J̃_k = Ĩ_k ∖ ∪_{j<k} J̃_j; ritorna le controimmagini I′_k ⊂ I_k.
    """
    if not is_observable_at(schedule, n):
        raise ValueError(f"Schedule non osservabile all'indice {n}: impossibile disgiungere")

    exact = schedule.exact
    covered = ArcSet.empty(exact)
    reduced: List[ReducedSegment] = []
    for index, segment in enumerate(schedule.segments[: n + 1]):
        piece_set = segment.projection().difference(covered)
        covered = covered.union(piece_set)
        origin = quotient(segment.start - segment.endpoint)

        intervals: List[Tuple[Number, Number]] = []
        for lo, hi in piece_set.pieces:
            # il pezzo va spezzato nel punto in cui la proiezione inizia
            if lo < origin < hi:
                parts = [(lo, origin), (origin, hi)]
            else:
                parts = [(lo, hi)]
            for part_lo, part_hi in parts:
                intervals.append(_lift(part_lo, part_hi, segment, origin))
        intervals.sort()
        merged: List[List[Number]] = []
        for a, b in intervals:
            if merged and a <= merged[-1][1]:
                merged[-1][1] = max(merged[-1][1], b)
            else:
                merged.append([a, b])
        reduced.append(ReducedSegment(index, segment.endpoint, tuple((a, b) for a, b in merged)))

    total = sum((r.length for r in reduced), 0)
    if exact and total != PERIOD:
        raise InvariantViolation(f"Somma delle controimmagini {total}π diversa da 2π")
    log.info(f"Schedule disgiunto calcolato su {n + 1} segmenti, somma {total}π")
    return reduced


def is_generalized_observable(b: GeneralizedSchedule) -> bool:
    """Copertura di ∪ r(I⁰) ∪ r(I^π − π)."""
    values = [v for a, e in b.zero_intervals + b.pi_intervals for v in (a, e) if v is not None]
    exact = check_homogeneous(values) if values else True
    covered = ArcSet.empty(exact)
    for a, e in b.zero_intervals:
        covered = covered.union(project_interval(a, e, ENDPOINT_ZERO))
    for a, e in b.pi_intervals:
        covered = covered.union(project_interval(a, e, ENDPOINT_PI))
    return covered.covers_circle()
