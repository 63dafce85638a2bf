# -*- coding: utf-8 -*-
"""
Circle Arcs - v1.0.0
Algebra degli archi su S¹ = R/(2πZ), in unità di π: la circonferenza è [0, 2).
Gli insiemi di archi sono normalizzati come pezzi lineari semiaperti [lo, hi)
su [0, 2], ordinati, disgiunti e mai adiacenti.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

from analysis.arith import FLOAT_EPS, Number, check_homogeneous, is_exact

PERIOD = 2

Piece = Tuple[Number, Number]


def quotient(t: Number) -> Number:
    """Mappa quoziente r: R → R/(2πZ); ritorna t mod 2π in [0, 2)."""
    if is_exact(t):
        return Fraction(t) % PERIOD
    r = t % PERIOD
    if r >= PERIOD:
        r = 0.0
    return r


@dataclass(frozen=True)
class Arc:
    """Arco semiaperto [lo, hi); se wraps è vero copre [lo, 2π) ∪ [0, hi)."""

    lo: Number
    hi: Number
    wraps: bool = False

    @property
    def measure(self) -> Number:
        if self.wraps:
            return self.hi - self.lo + PERIOD
        return self.hi - self.lo


def _tolerance(exact: bool) -> float:
    return 0 if exact else FLOAT_EPS


def _normalize(pieces: Iterable[Piece], exact: bool) -> Tuple[Piece, ...]:
    tol = _tolerance(exact)
    cleaned = []
    for lo, hi in pieces:
        if not exact:
            lo, hi = float(lo), float(hi)
            if lo < tol:
                lo = 0.0
            if hi > PERIOD - tol:
                hi = float(PERIOD)
        else:
            lo, hi = Fraction(lo), Fraction(hi)
        lo = max(lo, 0)
        hi = min(hi, PERIOD)
        if hi - lo > tol:
            cleaned.append((lo, hi))
    cleaned.sort()

    merged: List[List[Number]] = []
    for lo, hi in cleaned:
        if merged and lo <= merged[-1][1] + tol:
            if hi > merged[-1][1]:
                merged[-1][1] = hi
        else:
            merged.append([lo, hi])
    return tuple((lo, hi) for lo, hi in merged)


@dataclass(frozen=True)
class ArcSet:
    """Unione finita di archi disgiunti, in forma normale."""

    pieces: Tuple[Piece, ...] = ()
    exact: bool = True

    @classmethod
    def from_pieces(cls, pieces: Sequence[Piece], exact: Optional[bool] = None) -> "ArcSet":
        values = [v for piece in pieces for v in piece]
        if exact is None:
            exact = check_homogeneous(values)
        return cls(_normalize(pieces, exact), exact)

    @classmethod
    def from_arcs(cls, arcs: Iterable[Arc], exact: Optional[bool] = None) -> "ArcSet":
        pieces: List[Piece] = []
        for arc in arcs:
            if arc.wraps:
                pieces.extend([(arc.lo, PERIOD), (0, arc.hi)])
            else:
                pieces.append((arc.lo, arc.hi))
        return cls.from_pieces(pieces, exact)

    @classmethod
    def empty(cls, exact: bool = True) -> "ArcSet":
        return cls((), exact)

    @classmethod
    def full(cls, exact: bool = True) -> "ArcSet":
        if exact:
            return cls(((Fraction(0), Fraction(PERIOD)),), True)
        return cls(((0.0, float(PERIOD)),), False)

    # ------------------------------------------------------------------

    @property
    def arcs(self) -> List[Arc]:
        """Archi in forma canonica: i pezzi che toccano 2π e 0 formano un solo arco."""
        pieces = list(self.pieces)
        if len(pieces) >= 2 and pieces[0][0] == 0 and pieces[-1][1] == PERIOD:
            first = pieces.pop(0)
            last = pieces.pop()
            return [Arc(lo, hi) for lo, hi in pieces] + [Arc(last[0], first[1], True)]
        return [Arc(lo, hi) for lo, hi in pieces]

    def is_empty(self) -> bool:
        return not self.pieces

    def measure(self) -> Number:
        return sum((hi - lo for lo, hi in self.pieces), Fraction(0) if self.exact else 0.0)

    def covers_circle(self) -> bool:
        return self.complement().is_empty()

    def contains(self, angle: Number) -> bool:
        theta = quotient(angle)
        return any(lo <= theta < hi for lo, hi in self.pieces)

    def _combined_mode(self, other: "ArcSet") -> bool:
        values = [v for piece in self.pieces + other.pieces for v in piece]
        if not values:
            return self.exact and other.exact
        return check_homogeneous(values)

    def union(self, other: "ArcSet") -> "ArcSet":
        exact = self._combined_mode(other)
        return ArcSet(_normalize(self.pieces + other.pieces, exact), exact)

    def complement(self) -> "ArcSet":
        gaps: List[Piece] = []
        cursor: Number = Fraction(0) if self.exact else 0.0
        for lo, hi in self.pieces:
            if lo > cursor:
                gaps.append((cursor, lo))
            cursor = hi
        if cursor < PERIOD:
            gaps.append((cursor, Fraction(PERIOD) if self.exact else float(PERIOD)))
        return ArcSet(_normalize(gaps, self.exact), self.exact)

    def intersection(self, other: "ArcSet") -> "ArcSet":
        exact = self._combined_mode(other)
        result: List[Piece] = []
        i = j = 0
        a, b = self.pieces, other.pieces
        while i < len(a) and j < len(b):
            lo = max(a[i][0], b[j][0])
            hi = min(a[i][1], b[j][1])
            if hi > lo:
                result.append((lo, hi))
            if a[i][1] < b[j][1]:
                i += 1
            else:
                j += 1
        return ArcSet(_normalize(result, exact), exact)

    def difference(self, other: "ArcSet") -> "ArcSet":
        return self.intersection(other.complement())


def project_interval(a: Number, b: Optional[Number], shift: int) -> ArcSet:
    """
    Proiezione r(I − λ) dell'intervallo aperto I = (a, b) sulla circonferenza.

    Args:
        a: estremo sinistro in unità di π
        b: estremo destro; None o +inf per intervalli illimitati
        shift: λ in unità di π (0 oppure 1)
    """
    unbounded = b is None or (isinstance(b, float) and math.isinf(b))
    exact = is_exact(a) and (unbounded or is_exact(b))
    if unbounded:
        return ArcSet.full(exact)
    if b <= a:
        return ArcSet.empty(exact)
    length = b - a
    if length >= PERIOD:
        return ArcSet.full(exact)
    lo = quotient(a - shift)
    hi = lo + length
    if hi <= PERIOD:
        return ArcSet.from_pieces([(lo, hi)], exact)
    return ArcSet.from_pieces([(lo, PERIOD), (0, hi - PERIOD)], exact)
