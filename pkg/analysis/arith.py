# -*- coding: utf-8 -*-
"""
Aritmetica dei tempi in unità di π - v1.0.0
Tempi, angoli ed estremi degli archi sono multipli di π: Fraction in modalità
esatta, float in modalità approssimata. Le due rappresentazioni non si mescolano.
"""

import math
from fractions import Fraction
from numbers import Integral
from typing import Iterable, Union

Number = Union[Fraction, int, float]

FLOAT_EPS = 1e-12
# Tolleranza per riconoscere quozienti interi in modalità float
SNAP_TOL = 1e-9
INFINITY = math.inf


class InvariantViolation(RuntimeError):
    """Violazione di un invariante interno (codice di uscita 3)."""


class _NotObservable:
    """Esito analitico: nessun tempo finito rende osservabile il sistema."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "NotObservable"

    def __reduce__(self):
        return (_NotObservable, ())


NOT_OBSERVABLE = _NotObservable()


def is_exact(value: Number) -> bool:
    return isinstance(value, (Fraction, Integral)) and not isinstance(value, bool)


def all_exact(values: Iterable[Number]) -> bool:
    return all(is_exact(v) for v in values)


def check_homogeneous(values: Iterable[Number]) -> bool:
    """
    Verifica che i valori non mescolino frazioni non intere e float.
    Ritorna True se la computazione è esatta.
    """
    has_float = False
    has_fraction = False
    for v in values:
        if isinstance(v, float):
            if math.isinf(v):
                continue
            has_float = True
        elif isinstance(v, Fraction) and v.denominator != 1:
            has_fraction = True
    if has_float and has_fraction:
        raise ValueError("Aritmetica esatta e float mescolate nella stessa computazione")
    return not has_float


def to_exact(value: Number) -> Number:
    if isinstance(value, float):
        return value
    return Fraction(value)


def to_float(value: Number) -> float:
    return float(value)


def snap_integer(x: Number) -> Number:
    """In modalità float, riporta all'intero vicino i valori entro SNAP_TOL."""
    if is_exact(x):
        return x
    nearest = round(x)
    if abs(x - nearest) <= SNAP_TOL * max(1.0, abs(x)):
        return nearest
    return x


def exact_floor(x: Number) -> int:
    return math.floor(snap_integer(x))


def exact_ceil(x: Number) -> int:
    return math.ceil(snap_integer(x))


def integer_value(x: Number):
    """Ritorna l'intero rappresentato da x, oppure None."""
    snapped = snap_integer(x)
    if is_exact(snapped):
        snapped = Fraction(snapped)
        return int(snapped) if snapped.denominator == 1 else None
    return None
