"""
Command-line entry point.

    dressed-rf rates    --temps 0:60:15
    dressed-rf spectrum --model polaron --mode double --temp 30
    dressed-rf sweep    --model weak --model polaron --temps 0:60:15 --plot
    dressed-rf print-config --config run.ini
    dressed-rf cache clear

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from pathlib import Path

from . import __version__
from .config import RunConfig, load_config, parse_bool, parse_temperatures
from .engine import RATE_COLUMNS, DriveMode, rate_table, temperature_sweep, thermal_spectrum
from .errors import ConfigError, NumericalError
from .rates import RateModel
from .storage import TableCache, default_cache_dir, write_rate_table, write_spectrum

log = logging.getLogger("dressed_rf")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3


def _tag(t: float) -> str:
    return f"{t:g}".replace("-", "m")


def spectrum_filename(model: str, mode: str, temperature: float, fmt: str, prefix="spectrum") -> str:
    return f"{prefix}_{model}_{mode}_T{_tag(temperature)}K.{fmt}"


def _cache(cfg: RunConfig) -> TableCache:
    if os.environ.get("DRESSED_RF_CACHE"):
        directory = default_cache_dir()
    else:
        directory = cfg.cache_dir or default_cache_dir()
    return TableCache(directory, cfg.quad)


def _run_meta(cfg: RunConfig) -> dict:
    return {"package_version": __version__, "units": "rad/ns", "phi_power": cfg.bath.phi_power}


def cmd_rates(cfg: RunConfig) -> int:
    cfg = cfg.resolved()
    cache = _cache(cfg)
    scenario = cfg.scenario(RateModel.FULL_POLARON, DriveMode.DOUBLE)
    rows = rate_table(scenario, cache)
    path = cfg.output_dir / f"rates.{cfg.format}"
    meta = {**_run_meta(cfg), "alpha_ns2": cfg.bath.alpha, "omega_c_rad_per_ns": cfg.bath.omega_c,
            "omega_rabi_half": cfg.drive.omega_rabi_half, "g_half": cfg.drive.g_half}
    write_rate_table(rows, RATE_COLUMNS, path, cfg.format, meta)
    print(path)
    return EXIT_OK


def cmd_spectrum(cfg: RunConfig) -> int:
    cfg = cfg.resolved()
    cache = _cache(cfg)
    for model in cfg.models:
        for mode in cfg.modes:
            scenario = cfg.scenario(model, mode)
            for t in cfg.temperatures:
                spec = thermal_spectrum(scenario, t, cache)
                spec.metadata.update(_run_meta(cfg))
                name = spectrum_filename(model.value, mode.value, t, cfg.format)
                print(write_spectrum(spec, cfg.output_dir / name, cfg.format))
    return EXIT_OK


def cmd_sweep(cfg: RunConfig) -> int:
    cfg = cfg.resolved(sweep=True)
    cache = _cache(cfg)
    everything = {}
    index = {"metadata": _run_meta(cfg), "files": [], "plots": []}
    for model in cfg.models:
        for mode in cfg.modes:
            spectra = temperature_sweep(cfg.scenario(model, mode), cache, workers=cfg.workers)
            for t, spec in zip(cfg.temperatures, spectra):
                spec.metadata.update(_run_meta(cfg))
                name = spectrum_filename(model.value, mode.value, t, cfg.format, prefix="sweep")
                write_spectrum(spec, cfg.output_dir / name, cfg.format)
                everything[(model.value, mode.value, t)] = spec
                index["files"].append({"model": model.value, "mode": mode.value,
                                       "temperature_k": t, "file": name})
    if cfg.emit_plot:
        from .plotting import LINESTYLES, plot_comparison, plot_sweep

        for model in cfg.models:
            subset = {(mo, t): s for (m, mo, t), s in everything.items() if m == model.value}
            p = plot_sweep(subset, model.value, cfg.output_dir / f"sweep_{model.value}.svg")
            index["plots"].append(p.name)
        p = plot_comparison(everything, cfg.output_dir / "comparison.svg")
        index["plots"].append(p.name)
        index["linestyles"] = dict(LINESTYLES)
    path = cfg.output_dir / "sweep_index.json"
    path.write_text(json.dumps(index, indent=1, sort_keys=True) + "\n")
    print(path)
    return EXIT_OK


def cmd_print_config(cfg: RunConfig) -> int:
    print(json.dumps(cfg.describe(), indent=2, sort_keys=True))
    return EXIT_OK


def cmd_cache_clear(cfg: RunConfig) -> int:
    cache = _cache(cfg)
    n = cache.clear()
    print(f"removed {n} cache entries from {cache.directory}")
    return EXIT_OK


def _temps_arg(text):
    try:
        return parse_temperatures(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _bool_arg(text):
    try:
        return parse_bool(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="INI run configuration")
    common.add_argument("--model", action="append", choices=[m.value for m in RateModel],
                        help="damping model (repeatable)")
    common.add_argument("--mode", action="append", choices=[m.value for m in DriveMode],
                        help="single or double drive (repeatable)")
    common.add_argument("--temp", action="append", type=float, metavar="K",
                        help="temperature in K (repeatable)")
    common.add_argument("--temps", type=_temps_arg, metavar="START:STOP:STEP",
                        help="inclusive temperature range in K")
    common.add_argument("--out", type=Path, metavar="DIR", help="output directory")
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--plot", action="store_true", default=None, help="write SVG figures (sweep)")
    common.add_argument("--normalize", type=_bool_arg, metavar="{true,false}")
    common.add_argument("--phi-power", type=int, choices=(1, 2))
    common.add_argument("--workers", type=int, help="processes for temperature sweeps")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(
        prog="dressed-rf",
        description="Resonance fluorescence of a singly or doubly dressed quantum dot with phonon damping.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("rates", parents=[common], help="damping-rate table versus temperature")
    sub.add_parser("spectrum", parents=[common], help="one spectrum per model, mode and temperature")
    sub.add_parser("sweep", parents=[common], help="temperature sweep, optionally with plots")
    sub.add_parser("print-config", parents=[common], help="echo resolved internal parameters")
    cache = sub.add_parser("cache", help="manage the correlation-table cache")
    cache_sub = cache.add_subparsers(dest="cache_command", required=True)
    cache_sub.add_parser("clear", parents=[common], help="delete all cached tables")
    return parser


def _overrides(args) -> dict:
    out = {}
    if args.model:
        out["models"] = tuple(RateModel.parse(m) for m in dict.fromkeys(args.model))
    if args.mode:
        out["modes"] = tuple(DriveMode(m) for m in dict.fromkeys(args.mode))
    if args.temps is not None or args.temp:
        out["temperatures"] = tuple(args.temps or ()) + tuple(args.temp or ())
    if args.out is not None:
        out["output_dir"] = args.out
    if args.format is not None:
        out["format"] = args.format
    if args.plot:
        out["emit_plot"] = True
    if args.normalize is not None:
        out["normalize"] = args.normalize
    if args.phi_power is not None:
        out["bath.phi_power"] = args.phi_power
    if args.workers is not None:
        out["workers"] = args.workers
    return out


COMMANDS = {
    "rates": cmd_rates,
    "spectrum": cmd_spectrum,
    "sweep": cmd_sweep,
    "print-config": cmd_print_config,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    handler = cmd_cache_clear if args.command == "cache" else COMMANDS[args.command]
    start = time.perf_counter()
    try:
        cfg = load_config(args.config, _overrides(args))
        code = handler(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    log.info("%s finished in %.2f s", args.command, time.perf_counter() - start)
    return code


if __name__ == "__main__":
    sys.exit(main())
