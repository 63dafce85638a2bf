# -*- coding: utf-8 -*-
"""
Time Parser - v1.0.0
Sintassi dei tempi: "p/q pi", "3pi/2", "pi/2", "2 pi", "pi" (multipli razionali di π)
oppure numeri, interpretati come radianti. Il risultato è in unità di π.
"""

import math
import re
from fractions import Fraction
from typing import Optional, Union

from analysis.arith import Number

MODE_EXACT = "exact"
MODE_FLOAT = "float"

_PI_PATTERN = re.compile(
    r"^\s*(?P<sign>[+-])?\s*(?P<num>\d+)?\s*(?:/\s*(?P<pre_den>\d+))?\s*\*?\s*pi\s*(?:/\s*(?P<post_den>\d+))?\s*$",
    re.IGNORECASE,
)
_UNBOUNDED = {"inf", "+inf", "infinity", "+infinity", "∞"}


class TimeParser:
    @staticmethod
    def parse(value: Union[str, int, float, None], mode: str = MODE_EXACT,
              allow_unbounded: bool = False) -> Optional[Number]:
        """
        Converte un tempo in unità di π.

        Args:
            value: stringa razionale-π, numero in radianti, oppure None/"inf" se ammesso
            mode: "exact" richiede multipli razionali di π; "float" converte tutto in float
            allow_unbounded: accetta None e "inf" come estremo illimitato

        Returns:
            Fraction (esatto), float (approssimato) oppure None per +∞
        """
        if mode not in (MODE_EXACT, MODE_FLOAT):
            raise ValueError(f"Modalità non valida: {mode}")
        if value is None or (isinstance(value, str) and value.strip().lower() in _UNBOUNDED) \
                or (isinstance(value, float) and math.isinf(value) and value > 0):
            if allow_unbounded:
                return None
            raise ValueError("Tempo illimitato non ammesso in questo contesto")

        if isinstance(value, bool):
            raise ValueError(f"Tempo non valido: {value!r}")

        if isinstance(value, str):
            match = _PI_PATTERN.match(value)
            if match:
                result = TimeParser._rational_pi(match)
                return result if mode == MODE_EXACT else float(result)
            try:
                value = float(value.strip())
            except ValueError:
                raise ValueError(f"Tempo non riconosciuto: {value!r}") from None

        if isinstance(value, (int, float)):
            if not math.isfinite(value):
                raise ValueError(f"Tempo non finito: {value!r}")
            if value == 0:
                return Fraction(0) if mode == MODE_EXACT else 0.0
            if mode == MODE_EXACT:
                raise ValueError(
                    f"Il tempo {value!r} (radianti) non è un multiplo razionale di π: usare la modalità float"
                )
            return float(value) / math.pi
        raise ValueError(f"Tempo non valido: {value!r}")

    @staticmethod
    def _rational_pi(match: "re.Match") -> Fraction:
        numerator = int(match.group("num")) if match.group("num") else 1
        pre_den = match.group("pre_den")
        post_den = match.group("post_den")
        if pre_den and post_den:
            raise ValueError(f"Doppio denominatore in {match.string!r}")
        denominator = int(pre_den or post_den or 1)
        if denominator == 0:
            raise ValueError(f"Denominatore nullo in {match.string!r}")
        result = Fraction(numerator, denominator)
        return -result if match.group("sign") == "-" else result

    @staticmethod
    def format(value) -> str:
        """Rende un tempo esatto come "p/q pi", "pi", "2 pi"; i float restano in radianti."""
        if value is None:
            return "inf"
        if isinstance(value, float):
            if math.isinf(value):
                return "inf" if value > 0 else "-inf"
            return repr(value * math.pi)
        value = Fraction(value)
        if value == 0:
            return "0"
        if value.denominator == 1:
            return "pi" if value.numerator == 1 else f"{value.numerator} pi"
        return f"{value.numerator}/{value.denominator} pi"

    @staticmethod
    def radians(value) -> float:
        if value is None:
            return math.inf
        return float(value) * math.pi
