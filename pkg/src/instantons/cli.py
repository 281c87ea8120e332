"""Command-line front end.

Modes
-----
``kink``      infinite-size report (kink action, Omega_inf, optional amplitude at ``--L``)
``finite``    one finite-size report at ``--L`` or ``--temperature``
``sweep``     one row per size over ``--sweep min,max,steps``
``validate``  run every numerical anchor and print one PASS/FAIL line each

Exit status: 0 success, 1 configuration error, 2 numerical failure (in
``validate``: at least one check failed). Sweep points that fail are
reported in their row and do not change the exit status.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .fluctuation import DEFAULT_GRID, DeterminantMismatchError
from .background import NoInstantonError, SingularPointError
from .model import DoubleWellParams, temperature_to_size
from .propagator import TunnelingReport, amplitude_finite, infinite_size_report

__all__ = ["ConfigError", "RunConfig", "SweepRow", "CSV_COLUMNS", "load_config", "run", "main"]

MODES = ("kink", "finite", "sweep", "validate")
FORMATS = ("csv", "json")
SPACINGS = ("linear", "log")
METHODS = ("spectral", "gelfand_yaglom", "both")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SweepRange:
    min: float
    max: float
    steps: int
    spacing: str = "log"
    variable: str = "L"

    def points(self) -> list[float]:
        if self.spacing == "log":
            pts = np.geomspace(self.min, self.max, self.steps)
        else:
            pts = np.linspace(self.min, self.max, self.steps)
        return [float(x) for x in pts]


@dataclass(frozen=True)
class RunConfig:
    """Everything a run needs; serialisable to and from JSON."""

    params: DoubleWellParams = field(default_factory=DoubleWellParams)
    mode: str = "finite"
    L: float | None = None
    temperature: float | None = None
    sweep: SweepRange | None = None
    grid: int = DEFAULT_GRID
    method: str = "both"
    tolerance: float = 0.02
    kB: float = 1.0
    format: str = "json"
    out: str | None = None
    workers: int = 1

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.format not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}, got {self.format!r}")
        if self.method not in METHODS:
            raise ConfigError(f"method must be one of {METHODS}, got {self.method!r}")
        if self.grid < 64:
            raise ConfigError(f"grid must be at least 64 points, got {self.grid}")
        if not self.tolerance > 0.0:
            raise ConfigError("tolerance must be positive")
        if not self.kB > 0.0:
            raise ConfigError("kB must be positive")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        for name in ("L", "temperature"):
            v = getattr(self, name)
            if v is not None and not (v > 0.0 and math.isfinite(v)):
                raise ConfigError(f"{name} must be positive and finite, got {v!r}")
        if self.L is not None and self.temperature is not None:
            raise ConfigError("give either L or temperature, not both")
        if self.mode == "finite" and self.L is None and self.temperature is None:
            raise ConfigError("finite mode needs L or temperature")
        if self.mode == "sweep":
            sw = self.sweep
            if sw is None:
                raise ConfigError("sweep mode needs a sweep range min,max,steps")
            if not (0.0 < sw.min < sw.max and math.isfinite(sw.max)):
                raise ConfigError(f"sweep range needs 0 < min < max, got {sw.min!r}, {sw.max!r}")
            if sw.steps < 2:
                raise ConfigError(f"sweep needs at least 2 steps, got {sw.steps}")
            if sw.spacing not in SPACINGS:
                raise ConfigError(f"spacing must be one of {SPACINGS}, got {sw.spacing!r}")
            if sw.variable not in ("L", "T"):
                raise ConfigError(f"sweep variable must be L or T, got {sw.variable!r}")

    def size(self) -> float | None:
        if self.temperature is not None:
            return temperature_to_size(self.params, self.temperature, self.kB)
        return self.L

    def sizes(self) -> list[float]:
        pts = self.sweep.points()
        if self.sweep.variable == "T":
            pts = [temperature_to_size(self.params, T, self.kB) for T in pts]
        return sorted(pts)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


CSV_COLUMNS = (
    "status", "L", "T", "E", "kappa", "s_squared", "action", "zero_mode_norm_sq",
    "det_ratio", "omega_tunnel", "amplitude", "omega_infinity", "omega_infinity_well",
    "diagnostics",
)


@dataclass
class SweepRow:
    status: str
    L: float
    T: float = math.nan
    E: float = math.nan
    kappa: float = math.nan
    s_squared: float = math.nan
    action: float = math.nan
    zero_mode_norm_sq: float = math.nan
    det_ratio: float = math.nan
    omega_tunnel: float = math.nan
    amplitude: float = math.nan
    omega_infinity: float = math.nan
    omega_infinity_well: float = math.nan
    diagnostics: str = ""

    @classmethod
    def from_report(cls, r: TunnelingReport) -> "SweepRow":
        diag = list(r.warnings)
        if r.det_ratio is not None and r.det_ratio.cross_check is not None:
            diag.insert(0, f"det cross-check {r.det_ratio.cross_check!r}")
        return cls(
            status="ok", L=r.L, T=r.temperature, E=r.E, kappa=r.kappa, s_squared=r.s_squared,
            action=r.action, zero_mode_norm_sq=r.zero_mode_norm_sq,
            det_ratio=r.det_ratio.ratio if r.det_ratio is not None else math.nan,
            omega_tunnel=r.omega_tunnel, amplitude=r.amplitude, omega_infinity=r.omega_infinity,
            omega_infinity_well=r.omega_infinity_well, diagnostics="; ".join(diag),
        )


# --- config parsing ---------------------------------------------------------

_PARAM_FLAGS = {"mass": "M", "omega": "omega", "delta": "delta", "hbar": "hbar"}


def _parse_sweep(text: str) -> tuple[float, float, int]:
    parts = text.split(",")
    if len(parts) != 3:
        raise ConfigError(f"--sweep expects min,max,steps, got {text!r}")
    try:
        return float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise ConfigError(f"--sweep expects min,max,steps, got {text!r}") from exc


def load_config(data: dict | None = None, overrides: dict | None = None) -> RunConfig:
    """Build a :class:`RunConfig` from a JSON-like dict and flag overrides.

    ``overrides`` take precedence; ``None`` values are ignored.
    """
    data = dict(data or {})
    overrides = {k: v for k, v in (overrides or {}).items() if v is not None}
    known = {f.name for f in dataclasses.fields(RunConfig)}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")

    params = dict(data.pop("params", None) or {})
    for flag, name in _PARAM_FLAGS.items():
        if flag in overrides:
            params[name] = overrides.pop(flag)
    bad = set(params) - {"M", "omega", "delta", "hbar"}
    if bad:
        raise ConfigError(f"unknown params keys: {sorted(bad)}")

    sweep = data.pop("sweep", None)
    sweep = dict(sweep) if sweep else None
    if "sweep" in overrides:
        lo, hi, n = _parse_sweep(overrides.pop("sweep"))
        sweep = {**(sweep or {}), "min": lo, "max": hi, "steps": n}
    for key, target in (("spacing", "spacing"), ("sweep_variable", "variable")):
        if key in overrides:
            sweep = {**(sweep or {}), target: overrides.pop(key)}

    merged = {**data, **overrides}
    # A flag for one of L / temperature replaces the other from the file.
    if "L" in overrides and "temperature" not in overrides:
        merged.pop("temperature", None)
    if "temperature" in overrides and "L" not in overrides:
        merged.pop("L", None)
    try:
        p = DoubleWellParams(**params)
        sw = None
        if sweep is not None:
            missing = {"min", "max", "steps"} - set(sweep)
            if missing:
                raise ConfigError(f"sweep range is missing {sorted(missing)}")
            sw = SweepRange(min=float(sweep["min"]), max=float(sweep["max"]), steps=int(sweep["steps"]),
                            spacing=sweep.get("spacing", "log"), variable=sweep.get("variable", "L"))
        for key in ("L", "temperature", "tolerance", "kB"):
            if merged.get(key) is not None:
                merged[key] = float(merged[key])
        for key in ("grid", "workers"):
            if key in merged:
                merged[key] = int(merged[key])
        return RunConfig(params=p, sweep=sw, **merged)
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


# --- evaluation -------------------------------------------------------------

_POINT_ERRORS = (NoInstantonError, SingularPointError, DeterminantMismatchError, ArithmeticError, ValueError)


def _sweep_point(args) -> SweepRow:
    p, L, grid, method, tolerance, kB = args
    try:
        report = amplitude_finite(p, L, n_points=grid, method=method, kB=kB, tolerance=tolerance)
    except _POINT_ERRORS as exc:
        return SweepRow(status=f"error: {type(exc).__name__}: {exc}", L=L, T=p.hbar / (kB * L))
    return SweepRow.from_report(report)


def run_sweep(cfg: RunConfig) -> list[SweepRow]:
    tasks = [(cfg.params, L, cfg.grid, cfg.method, cfg.tolerance, cfg.kB) for L in cfg.sizes()]
    if cfg.workers == 1 or len(tasks) == 1:
        return [_sweep_point(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
        # map keeps submission order, which is ascending L.
        return list(pool.map(_sweep_point, tasks))


# --- output -----------------------------------------------------------------

def _fmt(v) -> str:
    if isinstance(v, float):
        return "" if math.isnan(v) else format(v, ".17g")
    return str(v)


def rows_to_csv(rows: list[SweepRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        d = dataclasses.asdict(r)
        w.writerow([_fmt(d[c]) for c in CSV_COLUMNS])
    return buf.getvalue()


def _jsonable(obj):
    if isinstance(obj, float):
        if math.isnan(obj):
            return None
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        return obj
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if dataclasses.is_dataclass(obj):
        return _jsonable(dataclasses.asdict(obj))
    return obj


def to_json(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2) + "\n"


def _emit(text: str, cfg: RunConfig, stdout) -> None:
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        stdout.write(text)


def run(cfg: RunConfig, stdout=None, stderr=None) -> int:
    """Execute a validated configuration; returns the exit status."""
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    p = cfg.params

    if cfg.mode == "validate":
        from .validation import format_result, run_checks

        results = run_checks(p)
        for r in results:
            stdout.write(format_result(r) + "\n")
        n_fail = sum(not r.passed for r in results)
        stdout.write(f"{len(results) - n_fail} passed, {n_fail} failed\n")
        if cfg.out:
            text = to_json(results) if cfg.format == "json" else _checks_csv(results)
            with open(cfg.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        return EXIT_OK if n_fail == 0 else EXIT_NUMERIC

    if cfg.mode == "sweep":
        rows = run_sweep(cfg)
        text = rows_to_csv(rows) if cfg.format == "csv" else to_json({"config": cfg, "rows": rows})
        _emit(text, cfg, stdout)
        return EXIT_OK

    try:
        if cfg.mode == "kink":
            report = infinite_size_report(p, cfg.size(), kB=cfg.kB)
        else:
            report = amplitude_finite(p, cfg.size(), n_points=cfg.grid, method=cfg.method,
                                      kB=cfg.kB, tolerance=cfg.tolerance)
    except _POINT_ERRORS as exc:
        stderr.write(f"numerical failure: {type(exc).__name__}: {exc}\n")
        return EXIT_NUMERIC
    if cfg.format == "csv":
        text = rows_to_csv([SweepRow.from_report(report)])
    else:
        text = to_json(report.to_dict())
    _emit(text, cfg, stdout)
    return EXIT_OK


def _checks_csv(results) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    cols = ("name", "passed", "measured", "target", "tolerance", "description", "detail")
    w.writerow(cols)
    for r in results:
        w.writerow([_fmt(getattr(r, c)) for c in cols])
    return buf.getvalue()


class _Parser(argparse.ArgumentParser):
    # Bad flags are configuration errors (exit 1), not argparse's exit 2.
    def error(self, message):
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="instantons", description="Double-well tunneling amplitudes at finite and infinite size.")
    ap.add_argument("mode", nargs="?", choices=MODES, help="what to compute (default: from config, else finite)")
    ap.add_argument("--config", help="JSON config file; flags override its values")
    ap.add_argument("--mass", type=float)
    ap.add_argument("--omega", type=float)
    ap.add_argument("--delta", type=float)
    ap.add_argument("--hbar", type=float)
    ap.add_argument("--L", type=float, help="Euclidean time extent")
    ap.add_argument("--temperature", type=float, help="temperature, mapped to L = hbar / (kB T)")
    ap.add_argument("--kB", type=float)
    ap.add_argument("--sweep", help="min,max,steps of the swept variable")
    ap.add_argument("--spacing", choices=SPACINGS)
    ap.add_argument("--sweep-variable", choices=("L", "T"), dest="sweep_variable")
    ap.add_argument("--grid", type=int, help="finite-difference grid points")
    ap.add_argument("--method", choices=METHODS)
    ap.add_argument("--tolerance", type=float, help="allowed relative disagreement of determinant routes")
    ap.add_argument("--format", choices=FORMATS)
    ap.add_argument("--out", help="output file (default stdout)")
    ap.add_argument("--workers", type=int)
    return ap


def main(argv=None, stdout=None, stderr=None) -> int:
    stderr = sys.stderr if stderr is None else stderr
    try:
        ns = build_parser().parse_args(argv)
        data = {}
        if ns.config:
            try:
                with open(ns.config, encoding="utf-8") as fh:
                    data = json.load(fh)
            except (OSError, json.JSONDecodeError) as exc:
                raise ConfigError(f"cannot read config {ns.config!r}: {exc}") from exc
            if not isinstance(data, dict):
                raise ConfigError("config file must hold a JSON object")
        overrides = {k: v for k, v in vars(ns).items() if k != "config"}
        cfg = load_config(data, overrides)
    except ConfigError as exc:
        stderr.write(f"config error: {exc}\n")
        return EXIT_CONFIG
    return run(cfg, stdout=stdout, stderr=stderr)


if __name__ == "__main__":
    sys.exit(main())
