"""
Run configuration: INI file with unit-suffixed keys, merged with CLI flags.

Every physical key names its unit.  ``*_ghz_linear`` keys are linear
frequencies of a full splitting (2 Omega = 2 pi f), converted here to the
internal half splitting in rad/ns, so ``rabi_2omega_ghz_linear = 5`` gives
Omega = 5 pi rad/ns.  Unknown sections and keys are errors.
"""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

from .bath import REFERENCE_BATH, BathParams
from .dressed import REFERENCE_DRIVE, DriveConfig
from .engine import DriveMode, GridSpec, ScenarioConfig
from .errors import ConfigError
from .quadrature import DEFAULT_SETTINGS, QuadSettings
from .rates import RateModel

__all__ = ["RunConfig", "load_config", "parse_temperatures", "parse_bool", "SCHEMA"]

SWEEP_TEMPERATURES = (0.0, 15.0, 30.0, 45.0, 60.0)


def parse_bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"expected true or false, got {text!r}")


def parse_temperature_range(text: str) -> tuple[float, ...]:
    """``start:stop:step`` in K, stop included when it lies on the grid."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"expected start:stop:step, got {text!r}")
    start, stop, step = (float(p) for p in parts)
    if not step > 0:
        raise ValueError("temperature step must be > 0")
    if stop < start:
        return ()
    n = math.floor((stop - start) / step + 1e-9) + 1
    return tuple(round(start + k * step, 12) for k in range(n))


def parse_temperatures(text: str) -> tuple[float, ...]:
    """Comma list of K values, or a ``start:stop:step`` range."""
    text = text.strip()
    if ":" in text:
        return parse_temperature_range(text)
    return tuple(float(t) for t in text.replace(",", " ").split())


def _list(kind):
    def parse(text):
        return tuple(kind(t) for t in text.replace(",", " ").split())
    return parse


def _ghz_linear(text):
    # full splitting 2X = 2 pi f  ->  half splitting X = pi f
    return math.pi * float(text)


def _format(text):
    t = text.strip().lower()
    if t not in ("csv", "json"):
        raise ValueError(f"format must be csv or json, got {text!r}")
    return t


def _path(text):
    return Path(text.strip()).expanduser()


def _phi_power(text):
    p = int(text)
    if p not in (1, 2):
        raise ValueError("phi_power must be 1 or 2")
    return p


#: section -> key -> (parser, RunConfig field path)
SCHEMA = {
    "drive": {
        "rabi_2omega_ghz_linear": (_ghz_linear, "drive.omega_rabi_half"),
        "weak_2g_ghz_linear": (_ghz_linear, "drive.g_half"),
        "photon_number": (int, "drive.M"),
        "mixing_angle_rad": (float, "drive.theta"),
        "gamma_rad_per_ns": (float, "drive.gamma_rad"),
        "laser_omega_rad_per_ns": (float, "drive.omega_L"),
    },
    "bath": {
        "alpha_ns2": (float, "bath.alpha"),
        "omega_c_rad_per_ns": (float, "bath.omega_c"),
        "phi_power": (_phi_power, "bath.phi_power"),
    },
    "scenario": {
        "models": (_list(RateModel.parse), "models"),
        "modes": (_list(lambda t: DriveMode(t.strip().lower())), "modes"),
        "temperatures_k": (parse_temperatures, "temperatures"),
        "normalize": (parse_bool, "normalize"),
        "workers": (int, "workers"),
    },
    "grid": {
        "detuning_min_rad_per_ns": (float, "grid.min_detuning"),
        "detuning_max_rad_per_ns": (float, "grid.max_detuning"),
        "points": (int, "grid.points"),
    },
    "quad": {
        "rel_tol": (float, "quad.rel_tol"),
        "abs_tol": (float, "quad.abs_tol"),
        "max_subdivisions": (int, "quad.max_subdivisions"),
        "tail_cutoff_factor": (float, "quad.tail_cutoff_factor"),
    },
    "io": {
        "output_dir": (_path, "output_dir"),
        "format": (_format, "format"),
        "emit_plot": (parse_bool, "emit_plot"),
        "cache_dir": (_path, "cache_dir"),
    },
}


@dataclass(frozen=True)
class RunConfig:
    """Everything one CLI invocation needs.

    ``models``, ``modes`` and ``temperatures`` may be None, meaning "use the
    subcommand's default".
    """

    drive: DriveConfig = REFERENCE_DRIVE
    bath: BathParams = REFERENCE_BATH
    models: tuple | None = None
    modes: tuple | None = None
    temperatures: tuple | None = None
    normalize: bool = True
    grid: GridSpec | None = None
    quad: QuadSettings = DEFAULT_SETTINGS
    output_dir: Path = Path("out")
    format: str = "csv"
    emit_plot: bool = False
    cache_dir: Path | None = None
    workers: int = 1
    sources: dict = field(default_factory=dict, compare=False)

    def resolved(self, sweep: bool = False) -> "RunConfig":
        """Fill subcommand defaults; a single spectrum is weak/double at 0 K."""
        models = self.models or ((tuple(RateModel)) if sweep else (RateModel.WEAK,))
        modes = self.modes or ((DriveMode.SINGLE, DriveMode.DOUBLE) if sweep else (DriveMode.DOUBLE,))
        temps = self.temperatures if self.temperatures is not None else (
            SWEEP_TEMPERATURES if sweep else (0.0,))
        if not temps:
            raise ConfigError("empty temperature list" + self._where("temperatures"))
        if any(not 0 <= t <= 300 for t in temps):
            raise ConfigError("temperatures must lie in [0, 300] K" + self._where("temperatures"))
        return replace(self, models=tuple(models), modes=tuple(modes), temperatures=tuple(temps))

    def _where(self, name):
        src = self.sources.get(name)
        return f" ({src})" if src else ""

    def scenario(self, model: RateModel, mode: DriveMode) -> ScenarioConfig:
        return ScenarioConfig(
            drive=self.drive,
            bath=self.bath,
            model=model,
            drive_mode=mode,
            temperatures=self.temperatures,
            grid=self.grid,
            normalize=self.normalize,
            quad=self.quad,
        )

    def describe(self) -> dict:
        """Resolved internal values (angular units) for ``print-config``."""
        d, b, q = self.drive, self.bath, self.quad
        grid = self.grid or GridSpec.around(d)
        return {
            "drive": {
                "omega_rabi_half_rad_per_ns": d.omega_rabi_half,
                "g_half_rad_per_ns": d.g_half,
                "photon_number": d.M,
                "mixing_angle_rad": d.theta,
                "gamma_rad_per_ns": d.gamma_rad,
                "laser_omega_rad_per_ns": d.omega_L,
            },
            "bath": {
                "alpha_ns2": b.alpha,
                "omega_c_rad_per_ns": b.omega_c,
                "phi_power": b.phi_power,
            },
            "scenario": {
                "models": None if self.models is None else [m.value for m in self.models],
                "modes": None if self.modes is None else [m.value for m in self.modes],
                "temperatures_k": None if self.temperatures is None else list(self.temperatures),
                "normalize": self.normalize,
                "workers": self.workers,
            },
            "grid": {
                "detuning_min_rad_per_ns": grid.min_detuning,
                "detuning_max_rad_per_ns": grid.max_detuning,
                "points": grid.points,
            },
            "quad": {
                "rel_tol": q.rel_tol,
                "abs_tol": q.abs_tol,
                "max_subdivisions": q.max_subdivisions,
                "tail_cutoff_factor": q.tail_cutoff_factor,
            },
            "io": {
                "output_dir": str(self.output_dir),
                "format": self.format,
                "emit_plot": self.emit_plot,
                "cache_dir": None if self.cache_dir is None else str(self.cache_dir),
            },
        }


def _key_lines(text: str) -> dict:
    """(section, key) -> line number, for diagnostics."""
    out, section = {}, None
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip()
        elif line and line[0] not in "#;" and ("=" in line or ":" in line):
            key = line.split("=", 1)[0].split(":", 1)[0].strip().lower()
            out.setdefault((section, key), no)
    return out


def _read_values(path: Path) -> tuple[dict, dict]:
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    parser = configparser.ConfigParser(interpolation=None, delimiters=("=",), inline_comment_prefixes=(";",))
    try:
        parser.read_string(text, source=str(path))
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from None
    lines = _key_lines(text)
    values, sources = {}, {}
    for section in parser.sections():
        if section not in SCHEMA:
            known = ", ".join(SCHEMA)
            raise ConfigError(f"{path}: unknown section [{section}]; expected one of {known}")
        for key, raw in parser.items(section):
            where = f"{path}:{lines.get((section, key), '?')}"
            if key not in SCHEMA[section]:
                known = ", ".join(SCHEMA[section])
                raise ConfigError(f"{where}: unknown key '{key}' in [{section}]; expected one of {known}")
            conv, target = SCHEMA[section][key]
            try:
                values[target] = conv(raw)
            except ValueError as exc:
                raise ConfigError(f"{where}: bad value for [{section}] {key} = {raw!r}: {exc}") from None
            sources[target.split(".")[0]] = f"{where} [{section}] {key}"
    return values, sources


def build_config(values: dict, sources: dict | None = None) -> RunConfig:
    """Assemble a RunConfig from flat ``field.path -> value`` overrides."""
    sources = sources or {}
    groups: dict[str, dict] = {}
    top = {}
    for target, v in values.items():
        head, _, tail = target.partition(".")
        if tail:
            groups.setdefault(head, {})[tail] = v
        else:
            top[target] = v

    def make(name, base, build):
        if name not in groups:
            return base
        try:
            return build(groups[name])
        except ValueError as exc:
            where = f" ({sources[name]})" if name in sources else ""
            raise ConfigError(f"invalid [{name}] settings{where}: {exc}") from None

    drive = make("drive", REFERENCE_DRIVE, lambda g: replace(REFERENCE_DRIVE, **g))
    bath = make("bath", REFERENCE_BATH, lambda g: replace(REFERENCE_BATH, **g))
    quad = make("quad", DEFAULT_SETTINGS, lambda g: replace(DEFAULT_SETTINGS, **g))

    def grid_from(g):
        auto = GridSpec.around(drive)
        return GridSpec(g.get("min_detuning", auto.min_detuning),
                        g.get("max_detuning", auto.max_detuning),
                        g.get("points", auto.points))

    grid = make("grid", None, grid_from)
    if top.get("workers", 1) < 1:
        raise ConfigError("workers must be >= 1")
    return RunConfig(drive=drive, bath=bath, grid=grid, quad=quad, sources=sources, **top)


def load_config(path=None, overrides: dict | None = None) -> RunConfig:
    """Defaults, then the INI file at ``path``, then ``overrides``.

    ``DRESSED_RF_CACHE`` (read by the cache itself) wins over ``cache_dir``.
    """
    values, sources = ({}, {}) if path is None else _read_values(Path(path))
    for k, v in (overrides or {}).items():
        values[k] = v
        sources[k.split(".")[0]] = "command line"
    return build_config(values, sources)
