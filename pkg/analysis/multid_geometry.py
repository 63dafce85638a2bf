# -*- coding: utf-8 -*-
"""
Multi-D Geometry - v1.0.0
Domini convessi (poligoni 2D, palle in R^d), frontiera illuminata Γ_φ(t),
variazione della curva di osservazione e soglie temporali del metodo dei
moltiplicatori; verifica numerica della convergenza Σ_φ^P → Σ_φ.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.special import betainc, gamma

from analysis.circle_arcs import project_interval

log = logging.getLogger(__name__)

CURVE_POLYLINE = "polyline"
CURVE_SAMPLED = "sampled"
CURVE_PIECEWISE_CONSTANT = "piecewise_constant"

EDGE_TOLERANCE = 1e-12
VARIATION_RTOL = 1e-8
SYMDIFF_RTOL = 1e-6


# ----------------------------------------------------------------------
# Domini


@dataclass(frozen=True, eq=False)
class PolygonDomain:
    """Poligono convesso con vertici in senso antiorario."""

    vertices: np.ndarray

    def __post_init__(self):
        vertices = np.asarray(self.vertices, dtype=float)
        if vertices.ndim != 2 or vertices.shape[1] != 2 or vertices.shape[0] < 3:
            raise ValueError(f"Servono almeno 3 vertici 2D, ricevuto shape {vertices.shape}")
        edges = np.roll(vertices, -1, axis=0) - vertices
        if np.any(np.linalg.norm(edges, axis=1) == 0):
            raise ValueError("Vertici ripetuti nel poligono")
        following = np.roll(edges, -1, axis=0)
        cross = edges[:, 0] * following[:, 1] - edges[:, 1] * following[:, 0]
        if np.any(cross < -EDGE_TOLERANCE):
            raise ValueError("Poligono non convesso o non orientato in senso antiorario")
        if np.sum(cross) <= 0:
            raise ValueError("Poligono degenere")
        object.__setattr__(self, "vertices", vertices)

    @property
    def dimension(self) -> int:
        return 2

    @property
    def edge_vectors(self) -> np.ndarray:
        return np.roll(self.vertices, -1, axis=0) - self.vertices

    @property
    def edge_lengths(self) -> np.ndarray:
        return np.linalg.norm(self.edge_vectors, axis=1)

    @property
    def midpoints(self) -> np.ndarray:
        return self.vertices + 0.5 * self.edge_vectors

    @property
    def normals(self) -> np.ndarray:
        """Normali esterne (e_y, −e_x)/|e| per l'orientamento antiorario."""
        e = self.edge_vectors
        return np.stack([e[:, 1], -e[:, 0]], axis=1) / self.edge_lengths[:, None]

    @property
    def perimeter(self) -> float:
        return float(np.sum(self.edge_lengths))


@dataclass(frozen=True, eq=False)
class BallDomain:
    center: np.ndarray
    radius: float

    def __post_init__(self):
        center = np.asarray(self.center, dtype=float)
        if center.ndim != 1 or center.shape[0] < 2:
            raise ValueError(f"Centro non valido: {self.center}")
        if not self.radius > 0:
            raise ValueError(f"Raggio non positivo: {self.radius}")
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "radius", float(self.radius))

    @property
    def dimension(self) -> int:
        return self.center.shape[0]

    @property
    def boundary_measure(self) -> float:
        d = self.dimension
        return float(2 * math.pi ** (d / 2) / gamma(d / 2) * self.radius ** (d - 1))


ConvexDomain = Union[PolygonDomain, BallDomain]


# ----------------------------------------------------------------------
# Curve


@dataclass(frozen=True, eq=False)
class ObservationCurve:
    """
    Curva φ: [0, T] → R^d.

    polyline: interpolazione lineare di (times, points);
    sampled: spline cubica dei campioni, oppure funzione analitica `function`;
    piecewise_constant: φ = points[i] su [times[i], times[i+1]), φ(T) = points[-1].
    """

    kind: str
    times: np.ndarray
    points: np.ndarray
    function: Optional[Callable[[np.ndarray], np.ndarray]] = field(default=None)

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        points = np.atleast_2d(np.asarray(self.points, dtype=float))
        if self.kind not in (CURVE_POLYLINE, CURVE_SAMPLED, CURVE_PIECEWISE_CONSTANT):
            raise ValueError(f"Tipo di curva non supportato: {self.kind}")
        if times.ndim != 1 or times.shape[0] < 2:
            raise ValueError("Servono almeno due istanti")
        if np.any(np.diff(times) <= 0):
            raise ValueError("Istanti della curva non strettamente crescenti")
        if times[0] != 0:
            raise ValueError(f"La curva deve iniziare in t=0, non in t={times[0]}")
        expected = times.shape[0] - 1 if self.kind == CURVE_PIECEWISE_CONSTANT else times.shape[0]
        if self.function is None and points.shape[0] != expected:
            raise ValueError(f"Numero di punti {points.shape[0]} incompatibile con {times.shape[0]} istanti")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "points", points)
        if self.kind == CURVE_SAMPLED and self.function is None:
            spline = CubicSpline(times, points, axis=0)
            object.__setattr__(self, "function", spline)

    @classmethod
    def polyline(cls, times: Sequence[float], points: Sequence[Sequence[float]]) -> "ObservationCurve":
        return cls(CURVE_POLYLINE, times, points)

    @classmethod
    def sampled(cls, times: Sequence[float], points: Sequence[Sequence[float]]) -> "ObservationCurve":
        return cls(CURVE_SAMPLED, times, points)

    @classmethod
    def smooth(cls, function: Callable[[np.ndarray], np.ndarray], horizon: float) -> "ObservationCurve":
        """Curva liscia analitica; `function` accetta un array di istanti e ritorna (n, d)."""
        ends = np.array([0.0, float(horizon)])
        return cls(CURVE_SAMPLED, ends, np.asarray(function(ends)), function)

    @classmethod
    def piecewise_constant(cls, times: Sequence[float], points: Sequence[Sequence[float]]) -> "ObservationCurve":
        return cls(CURVE_PIECEWISE_CONSTANT, times, points)

    @property
    def horizon(self) -> float:
        return float(self.times[-1])

    @property
    def dimension(self) -> int:
        return self.points.shape[1]

    def position(self, t) -> np.ndarray:
        """φ(t) per un array di istanti; ritorna shape (n, d)."""
        t = np.atleast_1d(np.asarray(t, dtype=float))
        if self.kind == CURVE_POLYLINE:
            return np.stack([np.interp(t, self.times, self.points[:, k]) for k in range(self.dimension)], axis=1)
        if self.kind == CURVE_PIECEWISE_CONSTANT:
            index = np.searchsorted(self.times, t, side="right") - 1
            index = np.clip(index, 0, self.points.shape[0] - 1)
            return self.points[index]
        return np.atleast_2d(np.asarray(self.function(t), dtype=float)).reshape(t.shape[0], -1)

    @property
    def start(self) -> np.ndarray:
        return self.position(0.0)[0]

    @property
    def end(self) -> np.ndarray:
        return self.position(self.horizon)[0]


@dataclass(frozen=True)
class Partition:
    times: Tuple[float, ...]

    def __post_init__(self):
        if len(self.times) < 2 or any(b <= a for a, b in zip(self.times, self.times[1:])):
            raise ValueError("La partizione deve essere strettamente crescente con almeno una cella")

    @classmethod
    def dyadic(cls, horizon: float, level: int) -> "Partition":
        cells = 2**level
        return cls(tuple(float(x) for x in np.linspace(0.0, horizon, cells + 1)))

    @classmethod
    def aligned(cls, curve: ObservationCurve) -> "Partition":
        return cls(tuple(float(x) for x in curve.times))

    @property
    def amplitude(self) -> float:
        return max(b - a for a, b in zip(self.times, self.times[1:]))


@dataclass(frozen=True, eq=False)
class IlluminatedSet:
    """Edges selezionati (poligono) oppure calotta (asse, apertura) sulla sfera."""

    domain: ConvexDomain
    edges: Tuple[int, ...] = ()
    axis: Optional[np.ndarray] = None
    aperture: float = 0.0

    @property
    def full(self) -> bool:
        if isinstance(self.domain, PolygonDomain):
            return len(self.edges) == self.domain.vertices.shape[0]
        return self.aperture >= math.pi

    @property
    def measure(self) -> float:
        if isinstance(self.domain, PolygonDomain):
            return float(np.sum(self.domain.edge_lengths[list(self.edges)]))
        return float(cap_measure(self.aperture, self.domain.radius, self.domain.dimension))


@dataclass(frozen=True)
class ThresholdReport:
    threshold: float
    horizon: float
    c0: float
    c_t: float
    variation: float
    observable_by_criterion: bool
    constant: Optional[float]


@dataclass(frozen=True)
class SymdiffResult:
    value: float
    samples_per_cell: int
    converged: bool


# ----------------------------------------------------------------------
# Frontiera illuminata e raggi


def illuminated_boundary(domain: ConvexDomain, x0: Sequence[float],
                         tolerance: float = EDGE_TOLERANCE) -> IlluminatedSet:
    """Γ = {x ∈ ∂Ω : (x − x0)·ν > 0}."""
    x0 = np.asarray(x0, dtype=float)
    if isinstance(domain, PolygonDomain):
        test = np.einsum("ij,ij->i", domain.midpoints - x0, domain.normals)
        return IlluminatedSet(domain, edges=tuple(int(i) for i in np.nonzero(test > tolerance)[0]))
    axis, aperture = _cap_parameters(domain, x0[None, :])
    return IlluminatedSet(domain, axis=axis[0], aperture=float(aperture[0]))


def _cap_parameters(domain: BallDomain, x0: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Per ogni riga di x0: asse (c − x0)/|c − x0| e apertura arccos(−R/|x0 − c|);
    sfera intera (apertura π) quando |x0 − c| ≤ R.
    """
    offset = x0 - domain.center
    distance = np.linalg.norm(offset, axis=1)
    inside = distance <= domain.radius
    safe = np.where(inside, 1.0, distance)
    axis = -offset / safe[:, None]
    axis[inside] = np.eye(domain.dimension)[0]
    aperture = np.where(inside, math.pi, np.arccos(np.clip(-domain.radius / safe, -1.0, 1.0)))
    return axis, aperture


def cap_measure(aperture, radius: float, dimension: int):
    """H^{d−1} di una calotta di apertura α sulla sfera di raggio R in R^d."""
    aperture = np.asarray(aperture, dtype=float)
    if dimension == 2:
        return 2 * aperture * radius
    if dimension == 3:
        return 2 * math.pi * radius**2 * (1 - np.cos(aperture))
    total = 2 * math.pi ** (dimension / 2) / gamma(dimension / 2) * radius ** (dimension - 1)
    half = 0.5 * betainc((dimension - 1) / 2, 0.5, np.sin(aperture) ** 2)
    fraction = np.where(aperture <= math.pi / 2, half, 1 - half)
    return total * fraction


def radius_max(domain: ConvexDomain, x0: Sequence[float]) -> float:
    """R = max{|x − x0| : x ∈ Ω̄}."""
    x0 = np.asarray(x0, dtype=float)
    if isinstance(domain, PolygonDomain):
        return float(np.max(np.linalg.norm(domain.vertices - x0, axis=1)))
    return float(np.linalg.norm(x0 - domain.center) + domain.radius)


# ----------------------------------------------------------------------
# Soglie


def _chord_sum(points: np.ndarray) -> float:
    total = 0.0
    for a, b in zip(points[:-1], points[1:]):
        total += float(np.linalg.norm(b - a))
    return total


def _threshold(c0: float, variation: float, c_t: float) -> float:
    return c0 + variation + c_t


def alternating_threshold(domain: ConvexDomain, points: Sequence[Sequence[float]],
                          horizon: Optional[float] = None) -> Tuple[float, Optional[float]]:
    """
    Soglia R_0 + Σ|x_{i+1} − x_i| + R_N e costante C_T = 2(T − soglia).
    C_T è None se T non è fornito o non supera la soglia.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if points.shape[0] < 1:
        raise ValueError("Serve almeno un punto")
    threshold = _threshold(radius_max(domain, points[0]), _chord_sum(points), radius_max(domain, points[-1]))
    constant = None
    if horizon is not None and horizon > threshold:
        constant = 2 * (horizon - threshold)
    return threshold, constant


def _refined_length(curve: ObservationCurve, rtol: float, max_level: int = 14) -> float:
    """Somma delle corde su griglie diadiche con estrapolazione di Richardson."""
    base = max(16, curve.times.shape[0] - 1)
    previous_estimate = None
    previous_chord = None
    for level in range(max_level):
        cells = base * 2**level
        grid = np.linspace(0.0, curve.horizon, cells + 1)
        positions = curve.position(grid)
        chord = float(np.sum(np.linalg.norm(np.diff(positions, axis=0), axis=1)))
        if previous_chord is not None:
            estimate = (4 * chord - previous_chord) / 3
            if previous_estimate is not None and abs(estimate - previous_estimate) <= rtol * max(abs(estimate), 1e-300):
                log.debug(f"Lunghezza convergente a livello {level}: {estimate}")
                return estimate
            previous_estimate = estimate
        previous_chord = chord
    log.warning(f"Lunghezza non convergente entro {max_level} livelli; ultimo valore {previous_estimate}")
    return previous_estimate


def curve_variation(curve: ObservationCurve, rtol: float = VARIATION_RTOL) -> float:
    """Variazione totale V₀^T(φ); per curve lisce coincide con la lunghezza."""
    if curve.kind in (CURVE_POLYLINE, CURVE_PIECEWISE_CONSTANT):
        return _chord_sum(curve.points)
    return _refined_length(curve, rtol)


def variable_threshold(domain: ConvexDomain, curve: ObservationCurve,
                       rtol: float = VARIATION_RTOL) -> ThresholdReport:
    """Soglia c_0 + V₀^T(φ) + c_T e verdetto T > soglia."""
    c0 = radius_max(domain, curve.start)
    c_t = radius_max(domain, curve.end)
    variation = curve_variation(curve, rtol)
    threshold = _threshold(c0, variation, c_t)
    horizon = curve.horizon
    observable = horizon > threshold
    return ThresholdReport(
        threshold=threshold,
        horizon=horizon,
        c0=c0,
        c_t=c_t,
        variation=variation,
        observable_by_criterion=observable,
        constant=2 * (horizon - threshold) if observable else None,
    )


# ----------------------------------------------------------------------
# Differenza simmetrica Σ_φ Δ Σ_φ^P


def _lens_area(theta1: np.ndarray, theta2: np.ndarray, gamma_: np.ndarray) -> np.ndarray:
    """Area sulla sfera unitaria dell'intersezione di due calotte con aperture ≤ π/2."""
    area = np.zeros(np.broadcast(theta1, theta2, gamma_).shape)
    theta1, theta2, gamma_ = np.broadcast_arrays(theta1, theta2, gamma_)
    disjoint = gamma_ >= theta1 + theta2
    nested = gamma_ <= np.abs(theta1 - theta2)
    smaller = np.minimum(theta1, theta2)
    area = np.where(nested, 2 * math.pi * (1 - np.cos(smaller)), area)
    lens = ~(disjoint | nested)
    if np.any(lens):
        t1, t2, g = theta1[lens], theta2[lens], gamma_[lens]
        s1, s2, sg = np.sin(t1), np.sin(t2), np.sin(g)
        c1, c2, cg = np.cos(t1), np.cos(t2), np.cos(g)
        a1 = np.arccos(np.clip((c2 - c1 * cg) / (s1 * sg), -1, 1))
        a2 = np.arccos(np.clip((c1 - c2 * cg) / (s2 * sg), -1, 1))
        a3 = np.arccos(np.clip((cg - c1 * c2) / (s1 * s2), -1, 1))
        area[lens] = 2 * math.pi - 2 * c1 * a1 - 2 * c2 * a2 - 2 * a3
    return area


def _unit_cap_area(theta):
    return 2 * math.pi * (1 - np.cos(theta))


def _cap_intersection_unit(theta1, theta2, gamma_) -> np.ndarray:
    """Intersezione di calotte di apertura qualsiasi, riducendosi a aperture ≤ π/2 per complemento."""
    theta1, theta2, gamma_ = np.broadcast_arrays(
        np.asarray(theta1, float), np.asarray(theta2, float), np.asarray(gamma_, float))
    sphere = 4 * math.pi
    cap = _unit_cap_area
    big1 = theta1 > math.pi / 2
    big2 = theta2 > math.pi / 2
    result = np.empty(theta1.shape)

    both_small = ~big1 & ~big2
    result[both_small] = _lens_area(theta1[both_small], theta2[both_small], gamma_[both_small])

    # A = S ∖ A′, con A′ di apertura π − θ1 attorno a −a
    only1 = big1 & ~big2
    t1c = math.pi - theta1[only1]
    result[only1] = cap(theta2[only1]) - _lens_area(t1c, theta2[only1], math.pi - gamma_[only1])

    only2 = ~big1 & big2
    t2c = math.pi - theta2[only2]
    result[only2] = cap(theta1[only2]) - _lens_area(theta1[only2], t2c, math.pi - gamma_[only2])

    both = big1 & big2
    t1c, t2c = math.pi - theta1[both], math.pi - theta2[both]
    result[both] = sphere - cap(t1c) - cap(t2c) + _lens_area(t1c, t2c, gamma_[both])
    return result


def _ball_symdiff(domain: BallDomain, axes_a, apertures_a, axes_b, apertures_b) -> np.ndarray:
    d = domain.dimension
    R = domain.radius
    if d == 2:
        out = np.empty(apertures_a.shape[0])
        for i in range(out.shape[0]):
            arcs = []
            for axis, aperture in ((axes_a[i], apertures_a[i]), (axes_b[i], apertures_b[i])):
                center = math.atan2(axis[1], axis[0]) / math.pi
                half = aperture / math.pi
                arcs.append(project_interval(center - half, center + half, 0))
            first, second = arcs
            out[i] = float(first.difference(second).measure() + second.difference(first).measure()) * math.pi * R
        return out
    if d == 3:
        cosine = np.clip(np.einsum("ij,ij->i", axes_a, axes_b), -1.0, 1.0)
        angle = np.arccos(cosine)
        inter = _cap_intersection_unit(apertures_a, apertures_b, angle)
        areas_a = 2 * math.pi * (1 - np.cos(apertures_a))
        areas_b = 2 * math.pi * (1 - np.cos(apertures_b))
        return np.maximum(areas_a + areas_b - 2 * inter, 0.0) * R**2
    raise ValueError(f"Differenza simmetrica tra calotte non supportata in dimensione {d}")


def _set_symdiff(domain: ConvexDomain, positions: np.ndarray, references: np.ndarray,
                 tolerance: float) -> np.ndarray:
    """|Γ(positions[i]) Δ Γ(references[i])| per ogni riga."""
    if isinstance(domain, PolygonDomain):
        normals, midpoints = domain.normals, domain.midpoints
        lit = np.einsum("nej,ej->ne", midpoints[None, :, :] - positions[:, None, :], normals) > tolerance
        ref = np.einsum("nej,ej->ne", midpoints[None, :, :] - references[:, None, :], normals) > tolerance
        return (lit ^ ref).astype(float) @ domain.edge_lengths
    axes_a, apertures_a = _cap_parameters(domain, positions)
    axes_b, apertures_b = _cap_parameters(domain, references)
    return _ball_symdiff(domain, axes_a, apertures_a, axes_b, apertures_b)


def _illuminated_measures(domain: ConvexDomain, positions: np.ndarray, tolerance: float) -> np.ndarray:
    if isinstance(domain, PolygonDomain):
        lit = np.einsum("nej,ej->ne", domain.midpoints[None, :, :] - positions[:, None, :], domain.normals) > tolerance
        return lit.astype(float) @ domain.edge_lengths
    _, apertures = _cap_parameters(domain, positions)
    return cap_measure(apertures, domain.radius, domain.dimension)


def _midpoint_samples(partition: Partition, q: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    edges = np.asarray(partition.times)
    widths = np.diff(edges)
    offsets = (np.arange(q) + 0.5) / q
    samples = edges[:-1, None] + widths[:, None] * offsets[None, :]
    weights = np.repeat(widths / q, q)
    cell_index = np.repeat(np.arange(widths.shape[0]), q)
    return samples.ravel(), weights, cell_index


def partition_sigma(domain: ConvexDomain, curve: ObservationCurve, partition: Partition,
                    tolerance: float = EDGE_TOLERANCE) -> List[Tuple[Tuple[float, float], IlluminatedSet]]:
    """Σ_φ^P come lista di celle (t_{j−1}, t_j) con l'insieme Γ_{φ,j} = Γ(φ(t_{j−1}))."""
    cells = []
    for a, b in zip(partition.times[:-1], partition.times[1:]):
        cells.append(((a, b), illuminated_boundary(domain, curve.position(a)[0], tolerance)))
    return cells


def _adaptive_integral(integrand: Callable[[int], float], rtol: float,
                       initial_samples: int, max_samples: int) -> SymdiffResult:
    q = initial_samples
    previous = integrand(q)
    while 2 * q <= max_samples:
        q *= 2
        current = integrand(q)
        if abs(current - previous) <= rtol * max(abs(current), 1e-300) or (current == 0 and previous == 0):
            return SymdiffResult(current, q, True)
        previous = current
    log.warning(f"Integrazione temporale non convergente con {q} campioni per cella")
    return SymdiffResult(previous, q, False)


def symdiff_measure(domain: ConvexDomain, curve: ObservationCurve, partition: Partition,
                    rtol: float = SYMDIFF_RTOL, initial_samples: int = 8, max_samples: int = 4096,
                    tolerance: float = EDGE_TOLERANCE) -> SymdiffResult:
    """
    (H^{d−1} ⊗ L¹)(Σ_φ Δ Σ_φ^P), integrando nel tempo con la regola del punto medio
    a Q campioni per cella; Q raddoppia finché due livelli concordano entro rtol.
    """
    if abs(partition.times[-1] - curve.horizon) > 1e-12 or partition.times[0] != 0:
        raise ValueError("La partizione deve coprire esattamente [0, T]")
    references = curve.position(np.asarray(partition.times[:-1]))

    def integrand(q: int) -> float:
        samples, weights, cell_index = _midpoint_samples(partition, q)
        values = _set_symdiff(domain, curve.position(samples), references[cell_index], tolerance)
        return float(values @ weights)

    result = _adaptive_integral(integrand, rtol, initial_samples, max_samples)
    log.info(f"Differenza simmetrica con {len(partition.times) - 1} celle: {result.value:.6e}")
    return result


def sigma_measure(domain: ConvexDomain, curve: ObservationCurve, rtol: float = SYMDIFF_RTOL,
                  initial_samples: int = 8, max_samples: int = 4096,
                  tolerance: float = EDGE_TOLERANCE) -> SymdiffResult:
    """∫₀^T H^{d−1}(Γ_φ(t)) dt."""
    partition = Partition((0.0, curve.horizon))

    def integrand(q: int) -> float:
        samples, weights, _ = _midpoint_samples(partition, q)
        return float(_illuminated_measures(domain, curve.position(samples), tolerance) @ weights)

    return _adaptive_integral(integrand, rtol, initial_samples, max_samples)
