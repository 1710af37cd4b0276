"""Experiment configuration, presets, the k_eff validation table and file output.

Configuration files are flat UTF-8 ``key = value`` lines; ``#`` starts a
comment.  A ``preset`` line (anywhere in the file) selects the starting values,
every other line overrides one field.
"""

from __future__ import annotations

import csv
import dataclasses
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields
from typing import Iterable, Optional, Sequence

import numpy as np

from . import analytic
from .fluid_sim import FluidRunConfig, simulate_fluid, slowest_decay_rate
from .model_core import (AnnulusFluid, BearingGeometry, ConfigurationError, DampingLaw,
                         DampingVariant, InertiaParams, PDGains, RampProfile, SimulationTrace)
from .rigid_sim import RigidRunConfig, detect_boundedness, simulate_rigid


@dataclass(frozen=True)
class ExperimentConfig:
    model: str = "rigid"
    preset: Optional[str] = None
    wheel_inertia: float = 0.0625
    stool_inertia: float = 0.625
    damping: str = "constant"
    damping_scale: float = 2 * math.pi
    damping_table: str = ""
    proportional_gain: float = 1.0
    derivative_gain: float = 3.0
    steady_rate: float = 2.0
    # None means "auto": fluid runs derive the horizon from the slowest decay rate
    stop_time: Optional[float] = 2.0
    end_time: Optional[float] = 30.0
    rtol: float = 1e-9
    atol: float = 1e-12
    max_step: float = math.inf
    samples_per_second: float = 200.0
    density: float = 1014.7
    kinematic_viscosity: float = 1.17e-6
    inner_radius: float = 0.135
    outer_radius: float = 0.1351
    grid_points: int = 200
    sample_interval: Optional[float] = None
    initial_interval: float = 1e-4
    field_stride: int = 50
    integrator: str = "BDF"
    bearing_thickness: float = 0.01
    bearing_height: float = 0.01
    rate_tolerance: float = 1e-4
    hold_window: float = 1.0
    settle_band: float = 1e-3
    trace_out: str = ""
    table_out: str = ""
    plot_out: str = ""

    # typed views ---------------------------------------------------------
    def inertias(self) -> InertiaParams:
        return InertiaParams(self.wheel_inertia, self.stool_inertia)

    def law(self) -> DampingLaw:
        variant = DampingVariant(self.damping)
        if variant is DampingVariant.TABULATED:
            angles, values = _parse_table(self.damping_table)
            return DampingLaw.tabulated(angles, values)
        return DampingLaw(variant, self.damping_scale)

    def gains(self) -> PDGains:
        return PDGains(self.proportional_gain, self.derivative_gain)

    def fluid(self) -> AnnulusFluid:
        return AnnulusFluid(self.density, self.kinematic_viscosity,
                            self.inner_radius, self.outer_radius)

    def bearing(self) -> BearingGeometry:
        return BearingGeometry(self.inner_radius, self.bearing_thickness, self.bearing_height)

    def rigid_run(self) -> RigidRunConfig:
        if self.stop_time is None or self.end_time is None:
            raise ConfigurationError("rigid runs need numeric stop_time and end_time")
        return RigidRunConfig(self.inertias(), self.law(), self.gains(),
                              RampProfile(self.steady_rate, self.stop_time), self.end_time,
                              self.rtol, self.atol, self.max_step, self.samples_per_second)

    def fluid_run(self) -> FluidRunConfig:
        stop, end, interval = self.stop_time, self.end_time, self.sample_interval
        if stop is None or end is None:
            auto_stop, auto_end = auto_horizon(self)
            stop = auto_stop if stop is None else stop
            end = auto_end if end is None else end
        if interval is None:
            interval = end / 20000.0
        return FluidRunConfig(self.inertias(), self.fluid(), self.gains(),
                              RampProfile(self.steady_rate, stop), self.grid_points, end,
                              self.rtol, self.atol, interval, self.initial_interval,
                              self.field_stride, self.integrator)


def _parse_table(text: str) -> tuple[list[float], list[float]]:
    angles, values = [], []
    for item in filter(None, (p.strip() for p in text.split(","))):
        try:
            a, v = item.split(":")
            angles.append(float(a))
            values.append(float(v))
        except ValueError:
            raise ConfigurationError(f"damping_table entry {item!r} is not 'angle:value'")
    return angles, values


TABLE3 = dict(model="fluid", wheel_inertia=6e-3, stool_inertia=1.96, kinematic_viscosity=1.17e-6,
              density=1.0147e3, steady_rate=60 * math.pi, proportional_gain=1.0,
              derivative_gain=100.0, inner_radius=0.135, outer_radius=0.1351, grid_points=200,
              stop_time=None, end_time=None, rtol=1e-8,
              # the limit angle is approached exponentially; 1e-4 rad/s leaves ~1e-3 rad of creep
              rate_tolerance=1e-6)

# (R_i, R_o) in cm and reference boundedness angles (rad): PDE model, k_eff, % error
APPENDIX_ROWS = [
    (13.5, 13.51, 6.16, 6.16, 0.00),
    (13.5, 13.68, 108.7, 109.5, 0.74),
    (13.5, 13.75, 149.8, 151.3, 1.00),
    (13.5, 14.0, 291.7, 297.1, 1.85),
    (13.5, 14.5, 553.8, 573.7, 3.59),
    (13.5, 15.0, 790.3, 831.9, 5.26),
    (13.5, 15.5, 1004, 1073, 6.87),
    (13.5, 20.0, 2265, 2704, 19.38),
    (13.5, 27.0, 3123, 4160, 33.21),
    (27.0, 27.02, 1.54, 1.54, 0.00),
    (27.0, 27.36, 27.19, 27.37, 0.66),
    (27.0, 27.5, 37.47, 37.81, 0.91),
    (27.0, 28.0, 72.96, 74.28, 1.81),
    (27.0, 29.0, 138.5, 143.4, 3.54),
    (27.0, 30.0, 197.6, 208, 5.26),
    (27.0, 31.0, 251.1, 268.4, 6.89),
    (27.0, 40.0, 566.3, 675.9, 19.35),
    (27.0, 54.0, 780.8, 1039.9, 33.18),
]

_FIG_INERTIAS = dict(wheel_inertia=0.0625, stool_inertia=0.625)
_FIG10 = dict(model="rigid", **_FIG_INERTIAS, damping="constant", damping_scale=2 * math.pi,
              proportional_gain=1.0, steady_rate=2.0, stop_time=2.0, end_time=30.0)
_FIG13 = dict(model="rigid", **_FIG_INERTIAS, damping_scale=1.0, proportional_gain=1.0,
              derivative_gain=1.0, steady_rate=2.0, stop_time=2.0, end_time=30.0)

PRESETS: dict[str, dict] = {
    "table-3": dict(TABLE3),
    # restart-energy case: inner diameter 0.1 m, bearing 0.01 m thick and high, water-like fluid
    "table-1": dict(model="fluid", wheel_inertia=0.0625, stool_inertia=0.9375, density=1000.0,
                    kinematic_viscosity=1e-6, inner_radius=0.05, outer_radius=0.06,
                    bearing_thickness=0.01, bearing_height=0.01, steady_rate=2.0,
                    proportional_gain=1.0, derivative_gain=3.0, stop_time=20.0, end_time=60.0,
                    sample_interval=0.01),
    "fig-10-overshoot": dict(_FIG10, derivative_gain=3.0),
    "fig-10-oscillation": dict(_FIG10, derivative_gain=1.0),
    "fig-11-overshoot": dict(_FIG10, derivative_gain=3.0),
    "fig-11-oscillation": dict(_FIG10, derivative_gain=1.0),
    "fig-13-constant": dict(_FIG13, damping="constant"),
    "fig-13-raised-cosine": dict(_FIG13, damping="raised-cosine"),
    "fig-13-cosine-squared": dict(_FIG13, damping="cosine-squared"),
}
for _i, (_ri, _ro, *_rest) in enumerate(APPENDIX_ROWS, start=1):
    PRESETS[f"appendix-row-{_i}"] = dict(TABLE3, inner_radius=_ri / 100, outer_radius=_ro / 100)

FIG13_PRESETS = ("fig-13-constant", "fig-13-raised-cosine", "fig-13-cosine-squared")

_FIELD_TYPES = {f.name: f.type for f in fields(ExperimentConfig)}
_OPTIONAL_FLOATS = {"stop_time", "end_time", "sample_interval"}
_INTS = {"grid_points", "field_stride"}
_STRINGS = {"model", "preset", "damping", "damping_table", "integrator", "trace_out",
            "table_out", "plot_out"}


def _convert(key: str, raw: str, line: int):
    if key in _STRINGS:
        return raw
    if key in _OPTIONAL_FLOATS and raw.lower() == "auto":
        return None
    try:
        if key in _INTS:
            return int(raw)
        return float(raw)
    except ValueError:
        kind = "integer" if key in _INTS else "number"
        raise ConfigurationError(f"line {line}: {key} = {raw!r} is not a valid {kind}")


def _validate(config: ExperimentConfig, lines: dict[str, int]) -> None:
    def where(*keys: str) -> str:
        hit = [lines[k] for k in keys if k in lines]
        return f"line {max(hit)}: " if hit else ""

    groups = [
        (("wheel_inertia", "stool_inertia"), config.inertias),
        (("density", "kinematic_viscosity", "inner_radius", "outer_radius"), config.fluid),
        (("proportional_gain", "derivative_gain"), config.gains),
        (("damping", "damping_scale", "damping_table"), config.law),
        (("inner_radius", "bearing_thickness", "bearing_height"), config.bearing),
    ]
    for keys, build in groups:
        try:
            build()
        except ConfigurationError as exc:
            raise ConfigurationError(f"{where(*keys)}{exc}") from None
        except ValueError as exc:
            raise ConfigurationError(f"{where(*keys)}{exc}") from None
    if config.model not in ("rigid", "fluid"):
        raise ConfigurationError(f"{where('model')}model must be 'rigid' or 'fluid'")
    if config.grid_points < 16:
        raise ConfigurationError(f"{where('grid_points')}grid_points must be >= 16 (N >= 16)")
    if config.stop_time is not None:
        try:
            RampProfile(config.steady_rate, config.stop_time)
        except ConfigurationError as exc:
            raise ConfigurationError(f"{where('steady_rate', 'stop_time')}{exc}") from None
    if config.stop_time is not None and config.end_time is not None \
            and not config.end_time > config.stop_time:
        raise ConfigurationError(f"{where('stop_time', 'end_time')}end_time must be > stop_time")
    if config.model == "rigid" and (config.stop_time is None or config.end_time is None):
        raise ConfigurationError(f"{where('stop_time', 'end_time')}rigid runs need numeric "
                                 "stop_time and end_time")
    if not 0 < config.rtol <= 1e-2:
        raise ConfigurationError(f"{where('rtol')}rtol must lie in (0, 1e-2]")
    if not config.atol > 0:
        raise ConfigurationError(f"{where('atol')}atol must be > 0")
    for key in ("samples_per_second", "initial_interval", "max_step", "rate_tolerance",
                "hold_window", "settle_band"):
        if not getattr(config, key) > 0:
            raise ConfigurationError(f"{where(key)}{key} must be > 0")
    if config.sample_interval is not None and not config.sample_interval > 0:
        raise ConfigurationError(f"{where('sample_interval')}sample_interval must be > 0")
    if config.field_stride < 1:
        raise ConfigurationError(f"{where('field_stride')}field_stride must be >= 1")
    if config.integrator not in ("BDF", "Radau", "LSODA"):
        raise ConfigurationError(f"{where('integrator')}integrator must be BDF, Radau or LSODA")


def parse_config(text: str) -> ExperimentConfig:
    """Parse and validate a flat ``key = value`` configuration."""
    entries: list[tuple[int, str, str]] = []
    for number, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"line {number}: expected 'key = value', got {raw_line.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _FIELD_TYPES:
            raise ConfigurationError(f"line {number}: unknown key {key!r}")
        entries.append((number, key, value))

    values: dict = {}
    lines: dict[str, int] = {}
    for number, key, value in entries:
        if key == "preset":
            if value not in PRESETS:
                raise ConfigurationError(f"line {number}: unknown preset {value!r}")
            values.update(PRESETS[value])
            values["preset"] = value
            lines["preset"] = number
    for number, key, value in entries:
        if key == "preset":
            continue
        values[key] = _convert(key, value, number)
        lines[key] = number
    config = ExperimentConfig(**values)
    _validate(config, lines)
    return config


def _render_value(value) -> str:
    if value is None:
        return "auto"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def render_config(config: ExperimentConfig) -> str:
    """Render every field; ``parse_config(render_config(c)) == c``."""
    out = []
    if config.preset is not None:
        out.append(f"preset = {config.preset}")
    for f in fields(ExperimentConfig):
        if f.name == "preset":
            continue
        value = getattr(config, f.name)
        if f.name in _STRINGS and value == "":
            continue
        out.append(f"{f.name} = {_render_value(value)}")
    return "\n".join(out) + "\n"


def preset_config(name: str) -> ExperimentConfig:
    return parse_config(f"preset = {name}\n")


def load_config(path: str) -> ExperimentConfig:
    try:
        with open(path, encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path!r}: {exc.strerror}") from None
    return parse_config(text)


def auto_horizon(config: ExperimentConfig) -> tuple[float, float]:
    """Spin and total durations long enough for the stool to settle, then recover.

    The spin phase lasts until the slowest stool-fluid mode has decayed the
    initial stool rate below ``rate_tolerance`` with a 30% margin; the
    recovery phase is as long again.
    """
    probe = FluidRunConfig(config.inertias(), config.fluid(), config.gains(),
                           RampProfile(config.steady_rate, 1.0), config.grid_points, 2.0)
    sigma = slowest_decay_rate(probe)
    inertias = config.inertias()
    initial_rate = inertias.wheel_inertia * abs(config.steady_rate) / inertias.total
    spin = 1.3 * math.log(max(10 * initial_rate / config.rate_tolerance, math.e)) / sigma
    spin += config.hold_window
    return spin, 2 * spin


# validation table -----------------------------------------------------------

@dataclass(frozen=True)
class ValidationRow:
    inner_cm: float
    outer_cm: float
    gap_percent: float
    angle_pde: Optional[float]
    angle_keff: float
    percent_error: Optional[float]

    @property
    def settled(self) -> bool:
        return self.angle_pde is not None


def _row_config(base: ExperimentConfig, inner_cm: float, outer_cm: float) -> ExperimentConfig:
    cfg = dataclasses.replace(base, model="fluid", inner_radius=inner_cm / 100,
                              outer_radius=outer_cm / 100, stop_time=None, end_time=None)
    spin, _ = auto_horizon(cfg)
    # only the spin phase matters here; a short tail satisfies end > stop
    return dataclasses.replace(cfg, stop_time=spin, end_time=spin * 1.0001,
                               sample_interval=cfg.sample_interval or spin / 20000.0)


def validation_row(base: ExperimentConfig, inner_cm: float, outer_cm: float) -> ValidationRow:
    cfg = _row_config(base, inner_cm, outer_cm)
    trace = simulate_fluid(cfg.fluid_run())
    report = detect_boundedness(trace, cfg.rate_tolerance, cfg.hold_window)
    keff = abs(analytic.boundedness_angle(cfg.inertias(), cfg.steady_rate, cfg.fluid()))
    gap = (outer_cm - inner_cm) / inner_cm * 100
    if report.angle is None:
        return ValidationRow(inner_cm, outer_cm, gap, None, keff, None)
    pde = abs(report.angle)
    return ValidationRow(inner_cm, outer_cm, gap, pde, keff, abs(keff - pde) / pde * 100)


def _row_task(args):
    return validation_row(*args)


def run_validation_table(base: ExperimentConfig, pairs: Sequence[tuple[float, float]],
                         jobs: int = 1) -> list[ValidationRow]:
    """Boundedness angles from the PDE model and from k_eff for each (R_i, R_o) pair in cm."""
    tasks = [(base, float(ri), float(ro)) for ri, ro in pairs]
    if jobs <= 1 or len(tasks) <= 1:
        return [_row_task(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_row_task, tasks))


def read_pairs_csv(path: str) -> list[tuple[float, float]]:
    pairs = []
    try:
        with open(path, newline="", encoding="utf-8") as handle:
            for number, row in enumerate(csv.reader(handle), start=1):
                if not row or row[0].strip().startswith("#"):
                    continue
                try:
                    pairs.append((float(row[0]), float(row[1])))
                except (ValueError, IndexError):
                    if number == 1:
                        continue  # header
                    raise ConfigurationError(f"{path}:{number}: expected 'R_i_cm,R_o_cm'")
    except OSError as exc:
        raise ConfigurationError(f"cannot read pairs file {path!r}: {exc.strerror}") from None
    return pairs


# output ---------------------------------------------------------------------

TRACE_COLUMNS = ["time", "wheel_angle", "wheel_rate", "stool_angle", "stool_rate", "torque_u",
                 "tau", "desired_angle", "ke", "ie", "le"]
FLUID_COLUMNS = ["fluid_ke", "fluid_diss"]
TABLE_COLUMNS = ["R_i_cm", "R_o_cm", "gap_percent", "angle_pde", "angle_keff", "percent_error",
                 "settled"]


def _fmt(value) -> str:
    if value is None:
        return ""
    return repr(float(value))


def _open_for_write(path: str):
    try:
        return open(path, "w", newline="", encoding="utf-8")
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write {path!r}: {exc.strerror}") from None


def trace_columns(trace: SimulationTrace) -> list[str]:
    cols = list(TRACE_COLUMNS)
    if trace.model == "fluid":
        cols += FLUID_COLUMNS
        if trace.radii is not None:
            cols += [f"v_{i}" for i in range(len(trace.radii))]
    return cols


def emit_trace_csv(trace: SimulationTrace, path: str) -> None:
    """Write one row per sample; fluid fields appear on the stored-field rows only."""
    cols = trace_columns(trace)
    n = len(trace)
    columns = {name: getattr(trace, name) for name in TRACE_COLUMNS + FLUID_COLUMNS}
    stored = {}
    if trace.model == "fluid" and trace.velocity is not None:
        for k, i in enumerate(trace.metadata.get("field_indices", [])):
            stored[int(i)] = trace.velocity[k]
    with _open_for_write(path) as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(cols)
        for i in range(n):
            row = []
            for name in TRACE_COLUMNS + (FLUID_COLUMNS if trace.model == "fluid" else []):
                data = columns[name]
                row.append(_fmt(data[i]) if data is not None else "")
            if trace.model == "fluid" and trace.radii is not None:
                field_row = stored.get(i)
                row += ([_fmt(v) for v in field_row] if field_row is not None
                        else [""] * len(trace.radii))
            writer.writerow(row)


def read_trace_csv(path: str) -> dict[str, np.ndarray]:
    """Columns of a trace CSV as float arrays (empty cells become NaN)."""
    try:
        with open(path, newline="", encoding="utf-8") as handle:
            reader = csv.reader(handle)
            header = next(reader, None)
            if header is None:
                raise ConfigurationError(f"{path}: empty trace file")
            rows = [[float(x) if x != "" else math.nan for x in row] for row in reader]
    except OSError as exc:
        raise ConfigurationError(f"cannot read trace {path!r}: {exc.strerror}") from None
    except ValueError as exc:
        raise ConfigurationError(f"{path}: malformed number ({exc})") from None
    data = np.array(rows, dtype=float).reshape(len(rows), len(header))
    return {name: data[:, j] for j, name in enumerate(header)}


def emit_table_csv(rows: Iterable[ValidationRow], path: str) -> None:
    with _open_for_write(path) as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(TABLE_COLUMNS)
        for r in rows:
            writer.writerow([_fmt(r.inner_cm), _fmt(r.outer_cm), _fmt(r.gap_percent),
                             _fmt(r.angle_pde), _fmt(r.angle_keff), _fmt(r.percent_error),
                             "1" if r.settled else "0"])


@dataclass
class PlotSeries:
    label: str
    x: Sequence[float]
    y: Sequence[float]
    dash: str = ""


_COLORS = ["#1f4e9c", "#c0392b", "#27864a", "#8e44ad", "#d35400", "#2c3e50"]


def emit_plot_svg(series: Sequence[PlotSeries], path: str, title: str = "",
                  xlabel: str = "time (s)", ylabel: str = "") -> None:
    """Polyline chart on a fixed 640x400 viewport."""
    width, height, left, right, top, bottom = 640, 400, 70, 20, 30, 50
    xs = np.concatenate([np.asarray(s.x, float) for s in series]) if series else np.zeros(1)
    ys = np.concatenate([np.asarray(s.y, float) for s in series]) if series else np.zeros(1)
    ok = np.isfinite(xs) & np.isfinite(ys)
    xs, ys = (xs[ok], ys[ok]) if ok.any() else (np.zeros(1), np.zeros(1))
    x0, x1 = float(xs.min()), float(xs.max())
    y0, y1 = float(ys.min()), float(ys.max())
    if x1 == x0:
        x1 = x0 + 1.0
    if y1 == y0:
        y0, y1 = y0 - 1.0, y1 + 1.0
    pw, ph = width - left - right, height - top - bottom

    def px(x):
        return left + (x - x0) / (x1 - x0) * pw

    def py(y):
        return top + (y1 - y) / (y1 - y0) * ph

    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
             f'viewBox="0 0 {width} {height}">',
             f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
             f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>']
    if y0 < 0 < y1:
        parts.append(f'<line x1="{left}" y1="{py(0):.2f}" x2="{left + pw}" y2="{py(0):.2f}" '
                     'stroke="black" stroke-dasharray="6,4"/>')
    for k in range(5):
        xv = x0 + (x1 - x0) * k / 4
        yv = y0 + (y1 - y0) * k / 4
        parts.append(f'<text x="{px(xv):.2f}" y="{top + ph + 18}" font-size="11" '
                     f'text-anchor="middle">{xv:.4g}</text>')
        parts.append(f'<text x="{left - 6}" y="{py(yv) + 4:.2f}" font-size="11" '
                     f'text-anchor="end">{yv:.4g}</text>')
    for k, s in enumerate(series):
        x = np.asarray(s.x, float)
        y = np.asarray(s.y, float)
        keep = np.isfinite(x) & np.isfinite(y)
        points = " ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in zip(x[keep], y[keep]))
        dash = f' stroke-dasharray="{s.dash}"' if s.dash else ""
        color = _COLORS[k % len(_COLORS)]
        parts.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5"{dash} '
                     f'points="{points}"/>')
        parts.append(f'<text x="{left + 10}" y="{top + 16 + 14 * k}" font-size="12" '
                     f'fill="{color}">{_escape(s.label)}</text>')
    parts.append(f'<text x="{width / 2:.1f}" y="18" font-size="14" text-anchor="middle">'
                 f'{_escape(title)}</text>')
    parts.append(f'<text x="{width / 2:.1f}" y="{height - 8}" font-size="12" '
                 f'text-anchor="middle">{_escape(xlabel)}</text>')
    parts.append(f'<text x="14" y="{height / 2:.1f}" font-size="12" text-anchor="middle" '
                 f'transform="rotate(-90 14 {height / 2:.1f})">{_escape(ylabel)}</text>')
    parts.append("</svg>")
    with _open_for_write(path) as handle:
        handle.write("\n".join(parts) + "\n")


def _escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def run_experiment(config: ExperimentConfig) -> SimulationTrace:
    if config.model == "rigid":
        return simulate_rigid(config.rigid_run())
    return simulate_fluid(config.fluid_run())


def fig13_series(duration: Optional[float] = None) -> list[PlotSeries]:
    """Stool angle under the three closed-form damping laws."""
    out = []
    for name, dash in zip(FIG13_PRESETS, ("", "8,4", "2,3")):
        cfg = preset_config(name)
        if duration is not None:
            cfg = dataclasses.replace(cfg, end_time=duration)
        trace = run_experiment(cfg)
        out.append(PlotSeries(cfg.damping, trace.time, trace.stool_angle, dash))
    return out


def ensure_parent(path: str) -> None:
    parent = os.path.dirname(os.path.abspath(path))
    os.makedirs(parent, exist_ok=True)
