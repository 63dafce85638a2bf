# -*- coding: utf-8 -*-
"""
Report Writer - v1.0.0
Emissione dei report JSON e CSV su stdout o su file (UTF-8).
"""

import csv
import io
import json
import math
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence

import numpy as np

from analysis.arith import NOT_OBSERVABLE
from analysis.circle_arcs import ArcSet
from analysis.constant_rate import DiscontinuityCatalog, MapPoint
from loaders.time_parser import TimeParser

MAP_COLUMNS = ["t0", "t0_exact", "case", "topt", "topt_exact"]
CATALOG_COLUMNS = ["location", "kind", "left_limit", "right_limit", "value_at"]


class ReportWriter:
    @staticmethod
    def time_fields(name: str, value: Any, exact: bool) -> Dict[str, Any]:
        """Coppia {name: stringa esatta o None, name_radians: float}."""
        if value is NOT_OBSERVABLE or value is None:
            return {name: None, f"{name}_radians": None}
        radians = TimeParser.radians(value)
        return {
            name: TimeParser.format(value) if exact else None,
            f"{name}_radians": radians if math.isfinite(radians) else "inf",
        }

    @staticmethod
    def interval(lo: Any, hi: Any, exact: bool) -> List[Any]:
        """Coppia [lo, hi]: stringhe esatte oppure radianti."""
        if exact:
            return [TimeParser.format(lo), TimeParser.format(hi)]
        return [TimeParser.radians(lo), TimeParser.radians(hi)]

    @staticmethod
    def arcs(arc_set: ArcSet) -> List[List[Any]]:
        """Archi del residuo come coppie [lo, hi) già formattate."""
        return [ReportWriter.interval(lo, hi, arc_set.exact) for lo, hi in arc_set.pieces]

    @staticmethod
    def jsonable(value: Any) -> Any:
        if value is NOT_OBSERVABLE:
            return "NotObservable"
        if isinstance(value, Fraction):
            return TimeParser.format(value)
        if isinstance(value, dict):
            return {k: ReportWriter.jsonable(v) for k, v in value.items()}
        if isinstance(value, (list, tuple)):
            return [ReportWriter.jsonable(v) for v in value]
        if isinstance(value, np.ndarray):
            return [ReportWriter.jsonable(v) for v in value.tolist()]
        if isinstance(value, (np.floating, float)):
            value = float(value)
            return value if math.isfinite(value) else ("inf" if value > 0 else "-inf")
        if isinstance(value, np.integer):
            return int(value)
        if isinstance(value, np.bool_):
            return bool(value)
        return value

    @staticmethod
    def render_json(report: Dict[str, Any]) -> str:
        return json.dumps(ReportWriter.jsonable(report), indent=2, ensure_ascii=False) + "\n"

    @staticmethod
    def render_csv(columns: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow(row)
        return buffer.getvalue()

    @staticmethod
    def map_rows(points: Sequence[MapPoint]) -> List[List[Any]]:
        rows = []
        for point in points:
            exact = not isinstance(point.t0, float)
            topt = point.analysis.t_opt
            if topt is NOT_OBSERVABLE:
                topt_float, topt_exact = "inf", "NotObservable"
            else:
                topt_float = repr(TimeParser.radians(topt))
                topt_exact = TimeParser.format(topt) if exact else ""
            rows.append([
                repr(TimeParser.radians(point.t0)),
                TimeParser.format(point.t0) if exact else "",
                point.analysis.case.label,
                topt_float,
                topt_exact,
            ])
        return rows

    @staticmethod
    def catalog_rows(catalog: DiscontinuityCatalog) -> List[List[Any]]:
        rows = []
        for point in catalog.points:
            value = point.value_at
            rows.append([
                TimeParser.format(point.location),
                point.kind,
                TimeParser.format(point.left_limit),
                TimeParser.format(point.right_limit),
                "NotObservable" if value is NOT_OBSERVABLE else TimeParser.format(value),
            ])
        return rows

    @staticmethod
    def emit(text: str, output: Optional[str] = None) -> None:
        if output:
            path = Path(output)
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(text, encoding="utf-8")
        else:
            print(text, end="")
