"""
Spectrum and rate-table files, and the on-disk correlation-table cache.

Floats are written with ``repr`` (shortest round-trip form) so that a file
read back gives the exact same doubles, and so that identical runs give
identical bytes.
"""

from __future__ import annotations

import hashlib
import io
import json
import logging
import os
import tempfile
from dataclasses import asdict
from pathlib import Path

import numpy as np

from .bath import TABLE_DECAY, TABLE_TAU_LIMIT, BathParams, CorrelationTable, build_correlation_table
from .dressed import Spectrum
from .quadrature import DEFAULT_SETTINGS, QuadSettings

__all__ = [
    "CACHE_FORMAT_VERSION",
    "TableCache",
    "default_cache_dir",
    "write_spectrum",
    "read_spectrum",
    "write_rate_table",
    "read_rate_table",
]

log = logging.getLogger(__name__)

#: bump on any change to the payload layout or to how tables are built
CACHE_FORMAT_VERSION = 1


def _fmt(v) -> str:
    return repr(float(v))


def _atomic_write(path: Path, data: bytes) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# -- spectra ------------------------------------------------------------------

def _csv_bytes(spectrum: Spectrum) -> bytes:
    lines = [f"# {k} = {json.dumps(v, sort_keys=True)}" for k, v in sorted(spectrum.metadata.items())]
    lines.append("detuning,intensity")
    lines += [f"{_fmt(d)},{_fmt(v)}" for d, v in zip(spectrum.detunings, spectrum.values)]
    return ("\n".join(lines) + "\n").encode()


def _json_bytes(spectrum: Spectrum) -> bytes:
    doc = {
        "metadata": spectrum.metadata,
        "detuning": [float(v) for v in spectrum.detunings],
        "intensity": [float(v) for v in spectrum.values],
    }
    return (json.dumps(doc, sort_keys=True, indent=1) + "\n").encode()


def write_spectrum(spectrum: Spectrum, path, fmt: str = "csv") -> Path:
    """Write ``spectrum`` as CSV (``#`` metadata header) or JSON."""
    path = Path(path)
    if fmt == "csv":
        _atomic_write(path, _csv_bytes(spectrum))
    elif fmt == "json":
        _atomic_write(path, _json_bytes(spectrum))
    else:
        raise ValueError(f"unknown format {fmt!r}")
    return path


def read_spectrum(path) -> Spectrum:
    """Inverse of :func:`write_spectrum`; the format is taken from the suffix."""
    path = Path(path)
    text = path.read_text()
    if path.suffix == ".json":
        doc = json.loads(text)
        return Spectrum(np.array(doc["detuning"], dtype=float),
                        np.array(doc["intensity"], dtype=float),
                        doc["metadata"])
    meta, rows = {}, []
    for line in text.splitlines():
        if line.startswith("#"):
            key, _, value = line[1:].partition("=")
            meta[key.strip()] = json.loads(value)
        elif line and not line.startswith("detuning"):
            rows.append([float(v) for v in line.split(",")])
    data = np.array(rows, dtype=float).reshape(-1, 2)
    return Spectrum(data[:, 0], data[:, 1], meta)


# -- rate tables --------------------------------------------------------------

def write_rate_table(rows: list[dict], columns, path, fmt: str = "csv", metadata=None) -> Path:
    path = Path(path)
    metadata = metadata or {}
    if fmt == "json":
        doc = {"metadata": metadata, "columns": list(columns),
               "rows": [{c: float(r[c]) for c in columns} for r in rows]}
        _atomic_write(path, (json.dumps(doc, sort_keys=True, indent=1) + "\n").encode())
        return path
    if fmt != "csv":
        raise ValueError(f"unknown format {fmt!r}")
    lines = [f"# {k} = {json.dumps(v, sort_keys=True)}" for k, v in sorted(metadata.items())]
    lines.append(",".join(columns))
    lines += [",".join(_fmt(r[c]) for c in columns) for r in rows]
    _atomic_write(path, ("\n".join(lines) + "\n").encode())
    return path


def read_rate_table(path) -> list[dict]:
    path = Path(path)
    if path.suffix == ".json":
        return json.loads(path.read_text())["rows"]
    lines = [ln for ln in path.read_text().splitlines() if ln and not ln.startswith("#")]
    header = lines[0].split(",")
    return [dict(zip(header, map(float, ln.split(",")))) for ln in lines[1:]]


# -- correlation-table cache --------------------------------------------------

def default_cache_dir() -> Path:
    env = os.environ.get("DRESSED_RF_CACHE")
    if env:
        return Path(env)
    base = os.environ.get("XDG_CACHE_HOME") or Path.home() / ".cache"
    return Path(base) / "dressed_rf"


class TableCache:
    """Content-addressed store of correlation tables.

    The key hashes the bath (including temperature and ``phi_power``), the
    quadrature settings, the table-building constants and the format
    version.  Entries are ``.npz`` files written via temp-file + rename, so
    concurrent writers cannot leave a half-written entry behind.  Calling
    the cache returns the stored table or builds and stores it.
    """

    prefix = "phi-"

    def __init__(self, directory=None, settings: QuadSettings | None = None):
        self.directory = Path(directory) if directory is not None else default_cache_dir()
        self.settings = settings or DEFAULT_SETTINGS
        self.hits = 0
        self.misses = 0

    def key(self, bath: BathParams) -> str:
        payload = {
            "bath": asdict(bath),
            "quad": asdict(self.settings),
            "table_decay": TABLE_DECAY,
            "table_tau_limit": TABLE_TAU_LIMIT,
            "format_version": CACHE_FORMAT_VERSION,
        }
        blob = json.dumps(payload, sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()

    def path(self, bath: BathParams) -> Path:
        return self.directory / f"{self.prefix}{self.key(bath)}.npz"

    def load(self, bath: BathParams) -> CorrelationTable | None:
        path = self.path(bath)
        if not path.exists():
            return None
        try:
            with np.load(path, allow_pickle=False) as npz:
                if int(npz["format_version"]) != CACHE_FORMAT_VERSION:
                    return None
                return CorrelationTable(
                    tau_grid=npz["tau_grid"],
                    phi_values=npz["phi_values"],
                    decay_scale=float(npz["decay_scale"]),
                    built_for=bath,
                    b_factor=float(npz["b_factor"]),
                )
        except (OSError, KeyError, ValueError) as exc:
            log.warning("ignoring unreadable cache entry %s: %s", path, exc)
            return None

    def store(self, table: CorrelationTable) -> Path:
        buf = io.BytesIO()
        np.savez(
            buf,
            tau_grid=table.tau_grid,
            phi_values=table.phi_values,
            decay_scale=np.float64(table.decay_scale),
            b_factor=np.float64(table.b_factor),
            format_version=np.int64(CACHE_FORMAT_VERSION),
        )
        path = self.path(table.built_for)
        _atomic_write(path, buf.getvalue())
        return path

    def __call__(self, bath: BathParams) -> CorrelationTable:
        table = self.load(bath)
        if table is not None:
            self.hits += 1
            return table
        self.misses += 1
        table = build_correlation_table(bath, self.settings)
        try:
            self.store(table)
        except OSError as exc:
            log.warning("could not write cache entry: %s", exc)
        return table

    def clear(self) -> int:
        """Delete every cache entry; returns how many were removed."""
        if not self.directory.is_dir():
            return 0
        n = 0
        for p in self.directory.glob(f"{self.prefix}*.npz"):
            p.unlink()
            n += 1
        return n
