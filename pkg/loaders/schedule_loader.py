# -*- coding: utf-8 -*-
"""
Schedule Loader - v1.0.0
Lettura degli schedule JSON:
{"segments": [{"endpoint": "0"|"pi", "from": ..., "to": ...}], "mode": "exact"|"float"}
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

from analysis.schedule_analysis import ENDPOINT_PI, ENDPOINT_ZERO, Schedule, Segment
from loaders.time_parser import MODE_EXACT, MODE_FLOAT, TimeParser

log = logging.getLogger(__name__)

_ENDPOINTS = {"0": ENDPOINT_ZERO, "pi": ENDPOINT_PI, "π": ENDPOINT_PI}


class ScheduleLoader:
    @staticmethod
    def parse_endpoint(raw: Any) -> int:
        key = str(raw).strip().lower()
        if key not in _ENDPOINTS:
            raise ValueError(f"Estremo non valido: {raw!r} (ammessi \"0\" e \"pi\")")
        return _ENDPOINTS[key]

    @staticmethod
    def from_dict(payload: Dict[str, Any], mode: Optional[str] = None) -> Tuple[Schedule, str]:
        """
        Costruisce lo schedule dal dizionario JSON.

        Args:
            payload: contenuto del file
            mode: modalità imposta dal chiamante; se None si usa "mode" del file (default exact)

        Returns:
            (Schedule, modalità effettiva)
        """
        if not isinstance(payload, dict) or "segments" not in payload:
            raise ValueError("Schedule JSON privo della chiave 'segments'")
        effective = mode or payload.get("mode", MODE_EXACT)
        if effective not in (MODE_EXACT, MODE_FLOAT):
            raise ValueError(f"Modalità non valida nello schedule: {effective!r}")

        raw_segments = payload["segments"]
        if not isinstance(raw_segments, list) or not raw_segments:
            raise ValueError("La lista 'segments' deve essere non vuota")
        segments = []
        for index, raw in enumerate(raw_segments):
            try:
                endpoint = ScheduleLoader.parse_endpoint(raw["endpoint"])
                start = TimeParser.parse(raw["from"], effective)
                end = TimeParser.parse(raw.get("to"), effective, allow_unbounded=True)
            except KeyError as e:
                raise ValueError(f"Segmento {index}: chiave mancante {e}") from None
            segments.append(Segment(endpoint, start, end))
        schedule = Schedule(tuple(segments))
        log.info(f"Schedule caricato: {len(segments)} segmenti, modalità {effective}")
        return schedule, effective

    @staticmethod
    def load(file_path: str, mode: Optional[str] = None) -> Tuple[Schedule, str]:
        path = Path(file_path)
        with open(path, "r", encoding="utf-8") as f:
            payload = json.load(f)
        return ScheduleLoader.from_dict(payload, mode)

    @staticmethod
    def to_dict(schedule: Schedule) -> Dict[str, Any]:
        """Forma canonica, usata anche per l'hash dello schedule."""
        return {
            "mode": MODE_EXACT if schedule.exact else MODE_FLOAT,
            "segments": [
                {
                    "endpoint": "pi" if s.endpoint == ENDPOINT_PI else "0",
                    "from": TimeParser.format(s.start),
                    "to": TimeParser.format(s.end),
                }
                for s in schedule.segments
            ],
        }
