# -*- coding: utf-8 -*-
"""
Spectral 1D - v1.0.0
Serie di Fourier troncate su Ω = (0, π): tracce al bordo, energia, identità di
Parseval, costante di osservabilità discreta e controesempio per schedule che
non ricoprono la circonferenza.

Le funzioni traccia lavorano in radianti; gli schedule restano in unità di π.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
import scipy.linalg
from scipy.integrate import cumulative_trapezoid, trapezoid

from analysis.circle_arcs import ArcSet
from analysis.schedule_analysis import Schedule

log = logging.getLogger(__name__)

MAX_TRUNCATION = 512


@dataclass(frozen=True, eq=False)
class FourierData:
    """Coefficienti û_0(j), û_1(j), j = 1..M dei dati iniziali nella base sin(jx)."""

    c0: np.ndarray
    c1: np.ndarray

    def __post_init__(self):
        c0 = np.asarray(self.c0, dtype=float)
        c1 = np.asarray(self.c1, dtype=float)
        if c0.shape != c1.shape or c0.ndim != 1:
            raise ValueError(f"Vettori di coefficienti incompatibili: {c0.shape} vs {c1.shape}")
        if not (np.all(np.isfinite(c0)) and np.all(np.isfinite(c1))):
            raise ValueError("Coefficienti non finiti")
        object.__setattr__(self, "c0", c0)
        object.__setattr__(self, "c1", c1)

    @property
    def m(self) -> int:
        return self.c0.shape[0]

    @property
    def modes(self) -> np.ndarray:
        return np.arange(1, self.m + 1, dtype=float)

    def trace_vector(self) -> np.ndarray:
        """x = (j·û_0(j), û_1(j)): coefficienti di u_x(0,t) nella base (cos jt, sin jt)."""
        return np.concatenate([self.modes * self.c0, self.c1])

    @classmethod
    def zeros(cls, m: int) -> "FourierData":
        return cls(np.zeros(m), np.zeros(m))

    @classmethod
    def random(cls, m: int, rng: np.random.Generator) -> "FourierData":
        return cls(rng.standard_normal(m), rng.standard_normal(m))


@dataclass(frozen=True, eq=False)
class QuadraticForms:
    energy_form: np.ndarray
    observed_form: np.ndarray


@dataclass(frozen=True, eq=False)
class Counterexample:
    support: Tuple[float, float]
    x: np.ndarray
    u0: np.ndarray
    u1: np.ndarray
    data: FourierData
    truncation_residue: float
    energy: float = 0.0


# ----------------------------------------------------------------------
# Tracce ed energia


def trace_at_zero(data: FourierData, t):
    """u_x(0,t) = Σ_j [ j û_0(j) cos(jt) + û_1(j) sin(jt) ]; t in radianti, scalare o array."""
    t_arr = np.asarray(t, dtype=float)
    phases = np.multiply.outer(t_arr, data.modes)
    value = np.cos(phases) @ (data.modes * data.c0) + np.sin(phases) @ data.c1
    return float(value) if np.ndim(value) == 0 else value


def trace_at_pi(data: FourierData, t):
    """u_x(π,t) = u_x(0, t−π)."""
    return trace_at_zero(data, np.asarray(t, dtype=float) - math.pi)


def energy(data: FourierData) -> float:
    """E_0 = (π/4) Σ_j ( j² û_0(j)² + û_1(j)² )."""
    return float(math.pi / 4 * np.sum(data.modes**2 * data.c0**2 + data.c1**2))


def _cos_integral(n: np.ndarray, alpha: float, beta: float) -> np.ndarray:
    safe = np.where(n == 0, 1.0, n)
    return np.where(n == 0, beta - alpha, (np.sin(n * beta) - np.sin(n * alpha)) / safe)


def _sin_integral(n: np.ndarray, alpha: float, beta: float) -> np.ndarray:
    safe = np.where(n == 0, 1.0, n)
    return np.where(n == 0, 0.0, (np.cos(n * alpha) - np.cos(n * beta)) / safe)


def gram_matrix(m: int, alpha: float, beta: float) -> np.ndarray:
    """
    Matrice 2M×2M di ∫_α^β f_p f_q dt per la base (cos jt)_{j≤M}, (sin jt)_{j≤M}.
    Integrali in forma chiusa; il caso risonante j = k ha un ramo dedicato.
    """
    j = np.arange(1, m + 1, dtype=float)
    diff = np.subtract.outer(j, j)
    total = np.add.outer(j, j)
    cc = 0.5 * (_cos_integral(diff, alpha, beta) + _cos_integral(total, alpha, beta))
    ss = 0.5 * (_cos_integral(diff, alpha, beta) - _cos_integral(total, alpha, beta))
    # ∫ cos(jt) sin(kt) = ½ ∫ [sin((k+j)t) + sin((k−j)t)]
    cs = 0.5 * (_sin_integral(total, alpha, beta) + _sin_integral(-diff, alpha, beta))
    gram = np.block([[cc, cs], [cs.T, ss]])
    return 0.5 * (gram + gram.T)


def parseval_check(data: FourierData) -> Tuple[float, float]:
    """(∫₀^{2π} |u_x(0,t)|² dt, 2(‖u_0′‖² + ‖u_1‖²))."""
    x = data.trace_vector()
    lhs = float(x @ gram_matrix(data.m, 0.0, 2 * math.pi) @ x)
    rhs = float(math.pi * np.sum(x**2))
    return lhs, rhs


def parseval_residual(data: FourierData) -> float:
    lhs, rhs = parseval_check(data)
    if rhs == 0:
        return abs(lhs)
    return abs(lhs - rhs) / rhs


# ----------------------------------------------------------------------
# Energia osservata e costante di osservabilità


def _segment_windows(schedule: Schedule, horizon: float):
    """Finestre (α, β) in radianti, già traslate di λπ e tagliate a (0, T)."""
    for segment in schedule.segments:
        start = float(segment.start)
        end = horizon if segment.end is None else min(float(segment.end), horizon)
        if end <= start:
            continue
        shift = float(segment.endpoint)
        yield segment, (start - shift) * math.pi, (end - shift) * math.pi


def observed_form(schedule: Schedule, horizon: float, m: int) -> np.ndarray:
    """Forma quadratica dell'energia osservata nelle coordinate x = (j·û_0, û_1)."""
    form = np.zeros((2 * m, 2 * m))
    for _, alpha, beta in _segment_windows(schedule, float(horizon)):
        form += gram_matrix(m, alpha, beta)
    return form


def observed_energy(data: FourierData, schedule: Schedule, horizon: float) -> float:
    """Σ_k ∫_{I_k ∩ (0,T)} |u_x(λ_k, t)|² dt, con T = horizon in unità di π."""
    if horizon <= 0:
        raise ValueError(f"Orizzonte non positivo: {horizon}")
    x = data.trace_vector()
    return float(x @ observed_form(schedule, horizon, data.m) @ x)


def quadratic_forms(schedule: Schedule, horizon: float, m: int) -> QuadraticForms:
    """Forme nelle coordinate dei coefficienti (û_0, û_1)."""
    j = np.arange(1, m + 1, dtype=float)
    scale = np.concatenate([j, np.ones(m)])
    weights = math.pi / 4 * scale**2
    observed = observed_form(schedule, horizon, m) * np.outer(scale, scale)
    return QuadraticForms(energy_form=np.diag(weights), observed_form=observed)


def observability_constant(schedule: Schedule, horizon: float, m: int) -> float:
    """
    Minimo del quoziente di Rayleigh generalizzato x'Q_obs x / x'Q_E x sullo spazio troncato.
    """
    if m < 1:
        raise ValueError(f"Ordine di troncamento non valido: {m}")
    if m > MAX_TRUNCATION:
        raise ValueError(f"Ordine di troncamento oltre il massimo {MAX_TRUNCATION}: {m}")
    forms = quadratic_forms(schedule, horizon, m)
    whitening = 1.0 / np.sqrt(np.diag(forms.energy_form))
    whitened = forms.observed_form * np.outer(whitening, whitening)
    whitened = 0.5 * (whitened + whitened.T)
    smallest = scipy.linalg.eigh(whitened, eigvals_only=True, subset_by_index=[0, 0])[0]
    c_min = max(0.0, float(smallest))
    log.info(f"Costante di osservabilità c_min={c_min:.6e} con M={m}, T={horizon}π")
    return c_min


# ----------------------------------------------------------------------
# Controesempio


def _choose_support(u_open: ArcSet) -> Tuple[float, float]:
    """Arco più lungo di U, spezzato in 0 e in π (unità di π)."""
    candidates = []
    for lo, hi in u_open.pieces:
        lo, hi = float(lo), float(hi)
        cuts = sorted({lo, hi} | {c for c in (1.0,) if lo < c < hi})
        candidates.extend(zip(cuts[:-1], cuts[1:]))
    candidates = [(lo, hi) for lo, hi in candidates if hi > lo]
    if not candidates:
        raise ValueError("Insieme U vuoto: nessun arco disponibile per il controesempio")
    return max(candidates, key=lambda piece: piece[1] - piece[0])


def _bump_derivative(s: np.ndarray, sharpness: float) -> np.ndarray:
    """d/ds exp(−p/(1−s²)) su |s| < 1, nulla altrove."""
    out = np.zeros_like(s)
    inside = np.abs(s) < 1
    one_minus = 1.0 - s[inside] ** 2
    bump = np.exp(-sharpness / one_minus)
    out[inside] = bump * (-2.0 * sharpness * s[inside] / one_minus**2)
    return out


def build_counterexample(u_open: ArcSet, modes: int = 256, sharpness: float = 16.0,
                         width_fraction: float = 0.5, quadrature_points: int = 8192) -> Counterexample:
    """
    Dati iniziali la cui traccia u_x(0,·) è supportata in U.

    ψ è la derivata di una bump C^∞ centrata nell'arco scelto (quindi a media nulla);
    ũ_1 = ½(ψ(x) − ψ(2π−x)), ũ_0′ = ½(ψ(x) + ψ(2π−x)) su (0, π), proiettati su M modi.
    """
    if modes < 1 or modes > MAX_TRUNCATION:
        raise ValueError(f"Numero di modi non valido: {modes}")
    if not 0 < width_fraction <= 1:
        raise ValueError(f"Frazione di ampiezza non valida: {width_fraction}")
    lo, hi = _choose_support(u_open)
    center = 0.5 * (lo + hi) * math.pi
    half_width = 0.5 * width_fraction * (hi - lo) * math.pi

    def psi(t: np.ndarray) -> np.ndarray:
        wrapped = np.mod(t, 2 * math.pi)
        return _bump_derivative((wrapped - center) / half_width, sharpness) / half_width

    fine = np.linspace(0.0, 2 * math.pi, 4 * quadrature_points + 1)
    norm = math.sqrt(trapezoid(psi(fine) ** 2, fine))
    if norm == 0:
        raise ValueError("Profilo nullo: supporto troppo stretto per la griglia di quadratura")

    x = np.linspace(0.0, math.pi, quadrature_points + 1)
    forward = psi(x) / norm
    mirrored = psi(2 * math.pi - x) / norm
    u1 = 0.5 * (forward - mirrored)
    u0_prime = 0.5 * (forward + mirrored)
    u0 = cumulative_trapezoid(u0_prime, x, initial=0.0)

    j = np.arange(1, modes + 1, dtype=float)
    phases = np.multiply.outer(j, x)
    c1 = 2.0 / math.pi * trapezoid(u1 * np.sin(phases), x, axis=1)
    j_c0 = 2.0 / math.pi * trapezoid(u0_prime * np.cos(phases), x, axis=1)
    data = FourierData(j_c0 / j, c1)

    # ‖ψ‖ = 1, quindi il residuo è 1 − ‖ψ_M‖²
    captured = math.pi * float(np.sum(data.trace_vector() ** 2))
    residue = max(0.0, 1.0 - captured)
    log.info(f"Controesempio su ({lo:.6f}π, {hi:.6f}π) con M={modes}: residuo di troncamento {residue:.3e}")
    return Counterexample(
        support=(center / math.pi - half_width / math.pi, center / math.pi + half_width / math.pi),
        x=x,
        u0=u0,
        u1=u1,
        data=data,
        truncation_residue=residue,
        energy=energy(data),
    )
