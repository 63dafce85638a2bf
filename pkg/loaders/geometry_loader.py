# -*- coding: utf-8 -*-
"""
Geometry Loader - v1.0.0
Dominio convesso e curva di osservazione da JSON.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Tuple

from analysis.multid_geometry import (
    CURVE_PIECEWISE_CONSTANT,
    CURVE_POLYLINE,
    CURVE_SAMPLED,
    BallDomain,
    ConvexDomain,
    ObservationCurve,
    PolygonDomain,
)

log = logging.getLogger(__name__)


class GeometryLoader:
    @staticmethod
    def parse_domain(raw: Dict[str, Any]) -> ConvexDomain:
        kind = raw.get("kind")
        if kind == "polygon2d":
            return PolygonDomain(raw["vertices"])
        if kind == "ball":
            return BallDomain(raw["center"], raw["radius"])
        raise ValueError(f"Tipo di dominio non supportato: {kind!r}")

    @staticmethod
    def parse_curve(raw: Dict[str, Any]) -> ObservationCurve:
        kind = raw.get("kind")
        builders = {
            CURVE_POLYLINE: ObservationCurve.polyline,
            CURVE_SAMPLED: ObservationCurve.sampled,
            CURVE_PIECEWISE_CONSTANT: ObservationCurve.piecewise_constant,
        }
        if kind not in builders:
            raise ValueError(f"Tipo di curva non supportato: {kind!r}")
        return builders[kind](raw["times"], raw["points"])

    @staticmethod
    def from_dict(payload: Dict[str, Any]) -> Tuple[ConvexDomain, ObservationCurve]:
        try:
            domain = GeometryLoader.parse_domain(payload["domain"])
            curve = GeometryLoader.parse_curve(payload["curve"])
        except KeyError as e:
            raise ValueError(f"Geometria JSON: chiave mancante {e}") from None
        if curve.dimension != domain.dimension:
            raise ValueError(f"Dimensione della curva {curve.dimension} diversa da quella del dominio {domain.dimension}")
        log.info(f"Geometria caricata: {type(domain).__name__}, curva {curve.kind}")
        return domain, curve

    @staticmethod
    def load(file_path: str) -> Tuple[ConvexDomain, ObservationCurve]:
        with open(Path(file_path), "r", encoding="utf-8") as f:
            return GeometryLoader.from_dict(json.load(f))
