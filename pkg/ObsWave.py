# -*- coding: utf-8 -*-
"""
ObsWave - Osservabilità dell'equazione delle onde con osservazione variabile - v1.0.0
Tempo ottimo di controllo, verifica spettrale, controesempi e soglie multi-D da riga di comando
"""

import argparse
import json
import logging
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass
from typing import Any, Dict, List, Optional

import numpy as np
import yaml
from tqdm import tqdm

from analysis.applications import application_reports
from analysis.arith import NOT_OBSERVABLE, InvariantViolation
from analysis.circle_arcs import PERIOD
from analysis.constant_rate import cross_check, discontinuity_catalog, topt_map
from analysis.multid_geometry import (
    CURVE_PIECEWISE_CONSTANT,
    Partition,
    alternating_threshold,
    sigma_measure,
    symdiff_measure,
    variable_threshold,
)
from analysis.schedule_analysis import Schedule, Segment, optimal_time, single_exchange_topt
from analysis.spectral_1d import (
    FourierData,
    build_counterexample,
    observability_constant,
    observed_energy,
    parseval_residual,
)
from config.config_loader import MODE_ENV_VAR, ConfigLoader
from loaders.geometry_loader import GeometryLoader
from loaders.schedule_loader import ScheduleLoader
from loaders.time_parser import MODE_EXACT, MODE_FLOAT, TimeParser
from loggingSetup.logging_setup import LoggingSetup
from reporting.hash_utils import HashUtils
from reporting.report_writer import CATALOG_COLUMNS, MAP_COLUMNS, ReportWriter

EXIT_OK = 0
EXIT_INPUT_ERROR = 2
EXIT_INVARIANT = 3

TABLE_COMMANDS = ("topt-map", "discontinuities")
HYPOTHESIS_LABEL = "hypothesis check (numerical)"


@dataclass
class RunConfig:
    command: str
    mode: str
    output_format: str
    truncation: int
    horizon: Optional[str]
    step: Optional[str]
    output: Optional[str]
    settings: Dict[str, Any]


def status(tag: str, message: str) -> None:
    print(f"[{tag}] {message}", file=sys.stderr)


def forced_mode(args: argparse.Namespace) -> Optional[str]:
    """Modalità imposta da flag o ambiente; altrimenti decide il file dello schedule."""
    return args.mode or (os.environ.get(MODE_ENV_VAR) or "").strip().lower() or None


def determine_worker_count(config: Dict[str, Any]) -> int:
    """
    Numero di worker per mappe e tabelle di raffinamento.
    """
    parallel_config = config.get("parallel_processing", {})
    if parallel_config.get("max_workers") is not None:
        return parallel_config["max_workers"]
    cpu_count = os.cpu_count() or 4
    cpu_multiplier = parallel_config.get("cpu_multiplier", 1.0)
    max_limit = parallel_config.get("max_workers_limit", 8)
    return max(1, min(int(cpu_count * cpu_multiplier), max_limit))


def initialize_logging(config: Dict[str, Any], log_file: Optional[str]) -> bool:
    try:
        LoggingSetup.setup_logging(log_file or config["log"])
        return True
    except Exception as e:
        status("WARN", f"Logging su file non disponibile: {e}")
        return False


def build_run_config(args: argparse.Namespace, config: Dict[str, Any]) -> RunConfig:
    mode = args.mode or config["mode"]
    if args.output_format:
        output_format = args.output_format
    elif args.command in TABLE_COMMANDS:
        output_format = "csv"
    else:
        output_format = config["output_format"]
    modes = getattr(args, "modes", None)
    truncation = modes if modes is not None else config["spectral"]["truncation"]
    max_truncation = config["spectral"].get("max_truncation", 512)
    if not 1 <= truncation <= max_truncation:
        raise ValueError(f"Ordine di troncamento M={truncation} fuori da [1, {max_truncation}]")
    return RunConfig(
        command=args.command,
        mode=mode,
        output_format=output_format,
        truncation=truncation,
        horizon=getattr(args, "horizon", None),
        step=getattr(args, "step", None),
        output=args.output,
        settings=config,
    )


# ----------------------------------------------------------------------
# Schedule di input


def load_schedule(args: argparse.Namespace, run: RunConfig, count_horizon=None) -> Schedule:
    """Schedule da file oppure schedule a frequenza costante troncato all'orizzonte."""
    if getattr(args, "schedule", None):
        schedule, _ = ScheduleLoader.load(args.schedule, forced_mode(args))
        return schedule
    t0 = TimeParser.parse(args.constant_rate, run.mode)
    if not 0 < t0 < PERIOD:
        raise ValueError(f"T_0 deve essere in (0, 2π): {args.constant_rate}")
    count = max(1, math.ceil(count_horizon / t0)) if count_horizon is not None else 1
    return Schedule.constant_rate(t0, count)


def clip_schedule(schedule: Schedule, horizon) -> Schedule:
    """Segmenti tagliati a (0, T)."""
    segments = []
    for segment in schedule.segments:
        if segment.start >= horizon:
            break
        end = horizon if segment.end is None or segment.end > horizon else segment.end
        segments.append(Segment(segment.endpoint, segment.start, end))
    if not segments:
        raise ValueError("Orizzonte anteriore al primo intervallo dello schedule")
    return Schedule(tuple(segments))


def resolve_horizon(run: RunConfig, schedule: Optional[Schedule] = None):
    mode = run.mode if schedule is None else (MODE_EXACT if schedule.exact else MODE_FLOAT)
    if run.horizon is not None:
        value = TimeParser.parse(run.horizon, mode)
    elif schedule is not None and not schedule.unbounded:
        value = schedule.finite_horizon()
    else:
        value = TimeParser.parse(run.settings["spectral"]["horizon"], mode)
    if value <= 0:
        raise ValueError(f"Orizzonte non positivo: {run.horizon}")
    return value


# ----------------------------------------------------------------------
# Comandi


def cmd_topt(args: argparse.Namespace, run: RunConfig) -> Dict[str, Any]:
    exact = run.mode == MODE_EXACT
    factor = run.settings["schedule"].get("horizon_factor", 10)

    if args.constant_rate is not None:
        t0 = TimeParser.parse(args.constant_rate, run.mode)
        check = cross_check(t0, horizon=args.horizon)
        analysis = check.analysis
        report = {
            "command": "topt",
            "source": "constant_rate",
            "mode": run.mode,
            **ReportWriter.time_fields("t0", t0, exact),
            "case": analysis.case.label,
            "N": analysis.N,
            "j": analysis.j,
            "observable": analysis.t_opt is not NOT_OBSERVABLE,
            **ReportWriter.time_fields("t_opt", analysis.t_opt, exact),
            "oracle": {
                "observable": check.oracle_t_opt is not None,
                **ReportWriter.time_fields("t_opt", check.oracle_t_opt, exact),
                "segments_examined": check.oracle_segments,
            },
            "agreement": check.agreement,
            "uncovered": ReportWriter.arcs(check.oracle_uncovered),
        }
        if not check.agreement:
            status("WARN", "Forma chiusa e sweep non concordano")
        return report

    if args.single_exchange is not None:
        t0 = TimeParser.parse(args.single_exchange, run.mode)
        closed = single_exchange_topt(t0)
        oracle = optimal_time(Schedule.single_exchange(t0), horizon=args.horizon, horizon_factor=factor)
        if exact:
            agreement = oracle.observable and oracle.t_opt == closed.t_opt
        else:
            agreement = oracle.observable and abs(oracle.t_opt - closed.t_opt) <= 1e-9
        return {
            "command": "topt",
            "source": "single_exchange",
            "mode": run.mode,
            **ReportWriter.time_fields("t0", t0, exact),
            "observable": True,
            **ReportWriter.time_fields("t_opt", closed.t_opt, exact),
            "reduced": [
                {"endpoint": "pi" if endpoint else "0", "interval": ReportWriter.interval(*interval, exact)}
                for endpoint, interval in closed.reduced
            ],
            "oracle": {
                "observable": oracle.observable,
                **ReportWriter.time_fields("t_opt", oracle.t_opt, exact),
                "least_index_h": oracle.least_index_h,
            },
            "agreement": agreement,
            "uncovered": ReportWriter.arcs(oracle.uncovered),
        }

    schedule, mode = ScheduleLoader.load(args.schedule, forced_mode(args))
    exact = schedule.exact
    result = optimal_time(schedule, horizon=args.horizon, horizon_factor=factor)
    return {
        "command": "topt",
        "source": "schedule",
        "mode": mode,
        "observable": result.observable,
        **ReportWriter.time_fields("t_opt", result.t_opt, exact),
        "least_index_h": result.least_index_h,
        "segments_examined": result.segments_examined,
        "verdict": result.verdict,
        "uncovered": ReportWriter.arcs(result.uncovered),
        "uncovered_measure_radians": TimeParser.radians(result.uncovered.measure()),
    }


def cmd_topt_map(args: argparse.Namespace, run: RunConfig, workers: int):
    a = TimeParser.parse(args.range_from, run.mode)
    b = TimeParser.parse(args.range_to, run.mode)
    step = TimeParser.parse(run.step or run.settings["topt_map"]["step"], run.mode)
    if not (0 < a < PERIOD and 0 < b <= PERIOD):
        raise ValueError(f"Intervallo fuori da (0, 2π): ({args.range_from}, {args.range_to})")
    points = topt_map(a, b, step, max_workers=workers, show_progress=True)
    rows = ReportWriter.map_rows(points)
    return MAP_COLUMNS, rows, {}


def cmd_discontinuities(args: argparse.Namespace, run: RunConfig):
    a = TimeParser.parse(args.range_from, run.mode)
    b = TimeParser.parse(args.range_to, run.mode)
    if a < 0 or b > PERIOD:
        raise ValueError(f"Intervallo fuori da (0, 2π): ({args.range_from}, {args.range_to})")
    max_order = args.max_order if args.max_order is not None else run.settings["discontinuities"]["max_order"]
    catalog = discontinuity_catalog(a, b, max_order=max_order)
    note = (f"famiglie troncate a n, h, k, m <= {max_order}: i punti lambda_n con n > {max_order} "
            f"si accumulano in π e non sono elencati")
    status("INFO", note)
    return CATALOG_COLUMNS, ReportWriter.catalog_rows(catalog), {"max_order": max_order, "note": note}


def cmd_verify(args: argparse.Namespace, run: RunConfig) -> Dict[str, Any]:
    if args.schedule:
        schedule = load_schedule(args, run)
        horizon = resolve_horizon(run, schedule)
    else:
        horizon = resolve_horizon(run)
        schedule = load_schedule(args, run, count_horizon=horizon)
    clipped = clip_schedule(schedule, horizon)
    covering = optimal_time(clipped, horizon=len(clipped.segments)).observable

    c_min = observability_constant(schedule, float(horizon), run.truncation)
    rng = np.random.default_rng(run.settings["spectral"].get("parseval_seed", 0))
    residual = parseval_residual(FourierData.random(run.truncation, rng))
    return {
        "command": "verify",
        "c_min": c_min,
        "m": run.truncation,
        "schedule_hash": HashUtils.schedule_hash(schedule),
        "parseval_residual": residual,
        **ReportWriter.time_fields("horizon", horizon, schedule.exact),
        "covering": covering,
        "note": "c_min is the constant restricted to the truncated span",
    }


def cmd_counterexample(args: argparse.Namespace, run: RunConfig) -> Dict[str, Any]:
    spectral = run.settings["spectral"]
    modes = args.modes if args.modes is not None else spectral["counterexample_modes"]
    if args.schedule:
        schedule = load_schedule(args, run)
        horizon = resolve_horizon(run, schedule)
    else:
        horizon = resolve_horizon(run)
        schedule = load_schedule(args, run, count_horizon=horizon)
    clipped = clip_schedule(schedule, horizon)
    result = optimal_time(clipped, horizon=len(clipped.segments))
    report: Dict[str, Any] = {
        "command": "counterexample",
        "m": modes,
        "schedule_hash": HashUtils.schedule_hash(schedule),
        **ReportWriter.time_fields("horizon", horizon, schedule.exact),
        "uncovered": ReportWriter.arcs(result.uncovered),
    }
    if result.observable:
        status("INFO", "Lo schedule ricopre la circonferenza: nessun controesempio")
        report["data_built"] = False
        return report

    example = build_counterexample(
        result.uncovered,
        modes=modes,
        sharpness=spectral.get("bump_sharpness", 16.0),
        width_fraction=spectral.get("bump_width_fraction", 0.5),
        quadrature_points=spectral.get("quadrature_points", 8192),
    )
    e0 = example.energy
    observed = observed_energy(example.data, clipped, float(horizon))
    report.update({
        "data_built": True,
        "support_radians": [s * math.pi for s in example.support],
        "energy": e0,
        "observed_energy": observed,
        "observed_over_energy": observed / e0,
        "truncation_residue": example.truncation_residue,
    })
    return report


def _refinement_row(domain, curve, level: int, multid: Dict[str, Any]) -> Dict[str, Any]:
    partition = Partition.dyadic(curve.horizon, level)
    result = symdiff_measure(
        domain, curve, partition,
        rtol=multid.get("symdiff_rtol", 1e-6),
        initial_samples=multid.get("symdiff_initial_samples", 8),
        max_samples=multid.get("symdiff_max_samples", 4096),
        tolerance=multid.get("edge_tolerance", 1e-12),
    )
    return {"level": level, "cells": 2**level, "amplitude": partition.amplitude,
            "symdiff": result.value, "samples_per_cell": result.samples_per_cell, "converged": result.converged}


def cmd_multid(args: argparse.Namespace, run: RunConfig, workers: int) -> Dict[str, Any]:
    multid = run.settings["multid"]
    if not args.geometry and not args.paper_examples:
        raise ValueError("Specificare --geometry oppure --paper-examples")
    report: Dict[str, Any] = {"command": "multid"}

    if args.geometry:
        domain, curve = GeometryLoader.load(args.geometry)
        threshold = variable_threshold(domain, curve, rtol=multid.get("variation_rtol", 1e-8))
        report.update({
            "threshold": threshold.threshold,
            "horizon": threshold.horizon,
            "c0": threshold.c0,
            "c_t": threshold.c_t,
            "variation": threshold.variation,
            "verdict": "observable_by_criterion" if threshold.observable_by_criterion else "bound_not_applicable",
            "C_T": threshold.constant,
        })
        if curve.kind == CURVE_PIECEWISE_CONSTANT:
            alternating, _ = alternating_threshold(domain, curve.points, curve.horizon)
            report["alternating_threshold"] = alternating

        levels = args.partition_levels
        if levels is not None:
            rows: List[Optional[Dict[str, Any]]] = [None] * (levels + 1)
            with ThreadPoolExecutor(max_workers=workers) as executor:
                future_to_level = {
                    executor.submit(_refinement_row, domain, curve, level, multid): level
                    for level in range(levels + 1)
                }
                for future in tqdm(as_completed(future_to_level), total=len(future_to_level),
                                   desc="Raffinamento partizioni", unit="livelli", file=sys.stderr):
                    rows[future_to_level[future]] = future.result()
            total = sigma_measure(domain, curve, rtol=multid.get("symdiff_rtol", 1e-6))
            report["symdiff_refinement"] = {
                "label": HYPOTHESIS_LABEL,
                "sigma_measure": total.value,
                "levels": rows,
            }

    if args.paper_examples:
        report["paper_examples"] = application_reports(
            sphere_alpha=multid.get("sphere_alpha", 0.3),
            square_max_n=multid.get("square_max_n", 6),
            sweep_beta=multid.get("sweep_beta", 0.5),
            full_period_modes=run.settings["spectral"].get("full_period_modes", 32),
        )
    return report


# ----------------------------------------------------------------------
# Entry point


def parse_arguments(argv=None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(
        description="Osservabilità dell'equazione delle onde 1D/multi-D con osservazione variabile"
    )
    parser.add_argument("--config", default=str(ConfigLoader.default_path()), help="File di configurazione YAML")
    parser.add_argument("--mode", choices=["exact", "float"], help="Aritmetica esatta o float")
    parser.add_argument("--format", dest="output_format", choices=["json", "csv"], help="Formato di output")
    parser.add_argument("--output", help="File di output (default stdout)")
    parser.add_argument("--log-file", help="File di log (default dalla configurazione)")
    subparsers = parser.add_subparsers(dest="command", required=True)

    topt = subparsers.add_parser("topt", help="Tempo ottimo di controllo")
    source = topt.add_mutually_exclusive_group(required=True)
    source.add_argument("--schedule", help="Schedule JSON")
    source.add_argument("--constant-rate", help="T_0 dello schedule a frequenza costante")
    source.add_argument("--single-exchange", help="T_0 dello schedule a singolo scambio")
    topt.add_argument("--horizon", type=int, help="Numero massimo di segmenti esaminati")

    topt_map_parser = subparsers.add_parser("topt-map", help="Mappa T_0 ↦ T_opt")
    topt_map_parser.add_argument("--from", dest="range_from", required=True)
    topt_map_parser.add_argument("--to", dest="range_to", required=True)
    topt_map_parser.add_argument("--step")

    catalog = subparsers.add_parser("discontinuities", help="Catalogo delle discontinuità")
    catalog.add_argument("--from", dest="range_from", required=True)
    catalog.add_argument("--to", dest="range_to", required=True)
    catalog.add_argument("--max-order", type=int)

    for name, help_text in (("verify", "Costante di osservabilità troncata"),
                            ("counterexample", "Controesempio per schedule non ricoprenti")):
        sub = subparsers.add_parser(name, help=help_text)
        group = sub.add_mutually_exclusive_group(required=True)
        group.add_argument("--schedule", help="Schedule JSON")
        group.add_argument("--constant-rate", help="T_0 dello schedule a frequenza costante")
        sub.add_argument("--modes", type=int, help="Ordine di troncamento M")
        sub.add_argument("--horizon", help="Orizzonte T (es. \"2 pi\")")

    multid = subparsers.add_parser("multid", help="Soglie del metodo dei moltiplicatori")
    multid.add_argument("--geometry", help="Dominio e curva JSON")
    multid.add_argument("--partition-levels", type=int, help="Livelli diadici per la verifica di convergenza")
    multid.add_argument("--paper-examples", action="store_true", help="Emette la raccolta degli esempi risolti")

    return parser.parse_args(argv)


def run_command(args: argparse.Namespace, run: RunConfig) -> str:
    workers = determine_worker_count(run.settings)
    if run.command == "topt-map":
        columns, rows, meta = cmd_topt_map(args, run, workers)
    elif run.command == "discontinuities":
        columns, rows, meta = cmd_discontinuities(args, run)
    else:
        handlers = {
            "topt": lambda: cmd_topt(args, run),
            "verify": lambda: cmd_verify(args, run),
            "counterexample": lambda: cmd_counterexample(args, run),
            "multid": lambda: cmd_multid(args, run, workers),
        }
        report = handlers[run.command]()
        if run.output_format == "csv":
            flat = {k: v for k, v in ReportWriter.jsonable(report).items() if not isinstance(v, (dict, list))}
            return ReportWriter.render_csv(list(flat), [list(flat.values())])
        return ReportWriter.render_json(report)

    if run.output_format == "json":
        return ReportWriter.render_json({**meta, "columns": columns, "rows": rows})
    return ReportWriter.render_csv(columns, rows)


def main(argv=None) -> int:
    args = parse_arguments(argv)
    try:
        config = ConfigLoader.load_config(args.config)
        ConfigLoader.validate_config(config)
        initialize_logging(config, args.log_file)
        run = build_run_config(args, config)
        logging.info(f"Comando {run.command} avviato in modalità {run.mode}")
        status("START", f"ObsWave {run.command} ({run.mode})")
        text = run_command(args, run)
        ReportWriter.emit(text, run.output)
        status("SUCCESS", f"Comando {run.command} completato")
        return EXIT_OK
    except InvariantViolation as e:
        logging.error(f"Invariante violato: {e}")
        status("ERROR", f"Invariante interno violato: {e}")
        return EXIT_INVARIANT
    except (ValueError, KeyError, FileNotFoundError, json.JSONDecodeError, yaml.YAMLError) as e:
        logging.error(f"Errore di input: {e}")
        status("ERROR", f"Input non valido: {e}")
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
