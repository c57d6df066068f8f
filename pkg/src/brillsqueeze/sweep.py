"""Grid sweeps, optimum search and figure presets."""

from __future__ import annotations

import concurrent.futures
import csv
import dataclasses
import datetime
import io
import math
import os
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .analytic import analytic_prediction
from .errors import ConfigError, HeatingRegimeError, InfeasibleError, ParameterError
from .model import SystemParams
from .observables import report_from_solution, solve_point, variance_db

__all__ = [
    "METRICS",
    "DEFAULT_OUTPUTS",
    "PRESETS",
    "Axis",
    "Series",
    "SweepConfig",
    "SweepResult",
    "Optimum",
    "run_sweep",
    "optimize_squeezing",
    "figure_preset",
    "format_number",
]

METRICS = (
    "stable",
    "spectral_abscissa",
    "variance",
    "variance_db",
    "n_eff",
    "analytic_variance",
    "analytic_variance_db",
)
DEFAULT_OUTPUTS = ("stable", "variance", "variance_db", "n_eff", "analytic_variance_db")
_COVARIANCE_METRICS = {"variance", "variance_db", "n_eff"}
_ANALYTIC_METRICS = {"analytic_variance", "analytic_variance_db"}
_PARAM_NAMES = SystemParams.field_names()


@dataclass(frozen=True)
class Axis:
    name: str
    min: float
    max: float
    count: int
    spacing: str = "linear"

    def __post_init__(self):
        if self.name not in _PARAM_NAMES:
            raise ConfigError(f"unknown axis parameter {self.name!r}; valid: {', '.join(_PARAM_NAMES)}")
        if not (math.isfinite(self.min) and math.isfinite(self.max)):
            raise ConfigError(f"axis {self.name}: bounds must be finite")
        if isinstance(self.count, bool) or not isinstance(self.count, (int, np.integer)) or self.count < 1:
            raise ConfigError(f"axis {self.name}: count must be a positive integer")
        if self.min > self.max:
            raise ConfigError(f"axis {self.name}: min > max")
        if self.spacing not in ("linear", "log"):
            raise ConfigError(f"axis {self.name}: spacing must be 'linear' or 'log'")
        if self.spacing == "log" and self.min <= 0:
            raise ConfigError(f"axis {self.name}: log spacing needs min > 0")

    def values(self):
        if self.count == 1 or self.min == self.max:
            return np.full(self.count, float(self.min))
        if self.spacing == "log":
            return np.geomspace(self.min, self.max, self.count)
        return np.linspace(self.min, self.max, self.count)


@dataclass(frozen=True)
class Series:
    """A named set of parameter overrides; each series repeats the grid."""

    label: str
    overrides: tuple = ()

    def __post_init__(self):
        for name, _ in self.overrides:
            if name not in _PARAM_NAMES:
                raise ConfigError(f"series {self.label!r}: unknown parameter {name!r}")


@dataclass(frozen=True)
class SweepConfig:
    base: SystemParams
    axes: tuple
    outputs: tuple = DEFAULT_OUTPUTS
    resonance_lock: bool = True
    series: tuple = ()
    name: str = "custom"

    def __post_init__(self):
        object.__setattr__(self, "axes", tuple(self.axes))
        object.__setattr__(self, "outputs", tuple(self.outputs))
        object.__setattr__(self, "series", tuple(self.series))
        if not 1 <= len(self.axes) <= 2:
            raise ConfigError("a sweep needs one or two axes")
        names = [a.name for a in self.axes]
        if len(set(names)) != len(names):
            raise ConfigError("axis names must be distinct")
        if not self.outputs:
            raise ConfigError("at least one output metric is required")
        for m in self.outputs:
            if m not in METRICS:
                raise ConfigError(f"unknown output {m!r}; valid: {', '.join(METRICS)}")
        labels = [s.label for s in self.series]
        if len(set(labels)) != len(labels):
            raise ConfigError("series labels must be distinct")
        for s in self.series:
            clash = set(names) & {k for k, _ in s.overrides}
            if clash:
                raise ConfigError(f"series {s.label!r} overrides swept parameter(s) {sorted(clash)}")

    @property
    def shape(self):
        return tuple(a.count for a in self.axes)

    def grid(self):
        """Axis-value tuples in row-major order (last axis fastest)."""
        values = [a.values() for a in self.axes]
        mesh = np.meshgrid(*values, indexing="ij")
        return list(zip(*(m.ravel().tolist() for m in mesh)))

    def point_params(self, axis_values, series=None):
        changes = dict(series.overrides) if series is not None else {}
        changes.update({a.name: v for a, v in zip(self.axes, axis_values)})
        if self.resonance_lock:
            for name in ("Delta_1", "Delta_b"):
                if name not in changes:
                    changes[name] = None
        return self.base.replace(**changes)


@dataclass
class SweepResult:
    columns: tuple
    rows: list
    metadata: dict = field(default_factory=dict)

    def column(self, name):
        i = self.columns.index(name)
        return [row[i] for row in self.rows]

    def data_section(self):
        """Header row plus data rows, exactly as written after the metadata."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for row in self.rows:
            w.writerow([format_number(v) for v in row])
        return buf.getvalue()

    def to_csv(self, stream):
        for key, value in self.metadata.items():
            stream.write(f"# {key}: {value}\n")
        stream.write(self.data_section())


def format_number(value):
    """Positional decimal with 12 significant digits; blanks for missing."""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, str):
        return value
    x = float(value)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return np.format_float_positional(x, precision=12, unique=False, fractional=False, trim="-")


def _metric_row(p, outputs):
    need_cov = bool(_COVARIANCE_METRICS & set(outputs))
    sol = solve_point(p, need_covariance=need_cov)
    report = report_from_solution(sol)
    values = {"stable": report.stable, "spectral_abscissa": report.spectral_abscissa}
    values.update(variance=report.variance, variance_db=report.variance_db, n_eff=report.n_eff)
    if _ANALYTIC_METRICS & set(outputs):
        var = None
        if report.stable:
            try:
                var = analytic_prediction(p).variance
            except HeatingRegimeError:
                var = None
        values["analytic_variance"] = var
        values["analytic_variance_db"] = variance_db(var) if var is not None else None
    return tuple(values[m] for m in outputs)


def _evaluate_chunk(params, outputs):
    return [_metric_row(p, outputs) for p in params]


def _default_workers():
    return max(1, min(8, os.cpu_count() or 1))


def _evaluate_all(params, outputs, workers):
    if workers is None:
        workers = _default_workers()
    if workers <= 1 or len(params) < 64:
        return _evaluate_chunk(params, outputs)
    n_chunks = min(len(params), 4 * workers)
    bounds = np.linspace(0, len(params), n_chunks + 1).astype(int)
    chunks = [params[bounds[i] : bounds[i + 1]] for i in range(n_chunks)]
    rows = []
    with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
        for part in pool.map(_evaluate_chunk, chunks, [outputs] * n_chunks):
            rows.extend(part)
    return rows


def _metadata(config):
    meta = {
        "tool": f"brillsqueeze {__version__}",
        "generated": datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds"),
        "config": config.name,
        "resonance_lock": format_number(config.resonance_lock),
    }
    for key, value in config.base.as_dict().items():
        meta[f"base.{key}"] = "locked" if value is None else format_number(value)
    for i, a in enumerate(config.axes):
        meta[f"axis{i}"] = f"{a.name} {a.spacing} {format_number(a.min)} {format_number(a.max)} {a.count}"
    for s in config.series:
        meta[f"series.{s.label}"] = " ".join(f"{k}={format_number(v)}" for k, v in s.overrides)
    return meta


def _build_points(config):
    grid = config.grid()
    series = config.series or (None,)
    params, keys = [], []
    try:
        for s in series:
            for vals in grid:
                params.append(config.point_params(vals, s))
                keys.append(((s.label,) if s is not None else ()) + tuple(vals))
    except ParameterError as exc:
        raise ConfigError(f"invalid grid point: {exc}") from exc
    return params, keys


def run_sweep(config: SweepConfig, workers=None) -> SweepResult:
    """Evaluate every grid point of ``config``.

    Unstable points yield rows with ``stable=false`` and blank metrics.
    Rows are ordered series-major, then row-major over the axes, whatever
    the number of worker processes.
    """
    params, keys = _build_points(config)
    rows = _evaluate_all(params, config.outputs, workers)
    columns = (("series",) if config.series else ()) + tuple(a.name for a in config.axes) + config.outputs
    return SweepResult(
        columns=columns,
        rows=[k + r for k, r in zip(keys, rows)],
        metadata=_metadata(config),
    )


@dataclass(frozen=True)
class Optimum:
    values: dict
    variance_db: float
    params: SystemParams
    evaluations: int


def optimize_squeezing(config: SweepConfig, levels=4, shrink=4.0, workers=None) -> Optimum:
    """Maximise ``variance_db`` over the axis bounds of ``config``.

    A coarse grid (the axis counts) is followed by ``levels`` refinements,
    each re-gridding a window ``shrink`` times narrower around the incumbent,
    kept inside the original bounds. Unstable points are never selected.
    Ties go to the first point in row-major order.
    """
    if len(config.series) > 1:
        raise ConfigError("optimize accepts at most one series")
    series = config.series[0] if config.series else None
    outputs = ("stable", "variance_db")
    log = [a.spacing == "log" for a in config.axes]
    lo = [math.log10(a.min) if lg else a.min for a, lg in zip(config.axes, log)]
    hi = [math.log10(a.max) if lg else a.max for a, lg in zip(config.axes, log)]
    span = [h - l for l, h in zip(lo, hi)]
    window = list(zip(lo, hi))
    best = None
    evaluations = 0
    for level in range(levels + 1):
        axes = tuple(
            dataclasses.replace(
                a,
                min=10 ** w[0] if lg else w[0],
                max=10 ** w[1] if lg else w[1],
                count=a.count if w[1] > w[0] else 1,
            )
            for a, w, lg in zip(config.axes, window, log)
        )
        sub = dataclasses.replace(config, axes=axes, outputs=outputs, series=())
        grid = sub.grid()
        try:
            params = [sub.point_params(v, series) for v in grid]
        except ParameterError as exc:
            raise ConfigError(f"invalid grid point: {exc}") from exc
        rows = _evaluate_all(params, outputs, workers)
        evaluations += len(rows)
        for vals, p, (stable, db) in zip(grid, params, rows):
            if stable and db is not None and (best is None or db > best[0]):
                best = (db, vals, p)
        if best is None:
            raise InfeasibleError("no stable point inside the search bounds")
        if level == levels:
            break
        centre = [math.log10(v) if lg else v for v, lg in zip(best[1], log)]
        new_window = []
        for c, (wl, wh), l, h in zip(centre, window, lo, hi):
            half = (wh - wl) / (2.0 * shrink)
            a, b = c - half, c + half
            if a < l:
                a, b = l, min(h, l + 2 * half)
            if b > h:
                a, b = max(l, h - 2 * half), h
            new_window.append((a, b))
        window = new_window
    db, vals, p = best
    return Optimum(
        values={a.name: v for a, v in zip(config.axes, vals)},
        variance_db=db,
        params=p,
        evaluations=evaluations,
    )


def _fig_base(**changes):
    return SystemParams(
        g_c1=1e-4,
        kappa_1=0.02,
        gamma_b=0.4,
        gamma_m=1e-4,
        eta=1e-4,
        n_m=100.0,
        G_c=0.15,
        G_b=0.124,
    ).replace(**changes)


_BSBS_SERIES = (Series("G_b=0", (("G_b", 0.0),)), Series("G_b=0.124", (("G_b", 0.124),)))

PRESETS = {
    "fig2a": lambda: SweepConfig(
        base=_fig_base(),
        axes=(Axis("Delta_b", 2.5, 4.5, 201), Axis("G_b", 0.0, 0.3, 201)),
        outputs=("stable", "variance_db"),
        name="fig2a",
    ),
    "fig2b": lambda: SweepConfig(
        base=_fig_base(),
        axes=(Axis("Delta_b", 2.5, 4.5, 201), Axis("G_b", 0.0, 0.3, 201)),
        outputs=("stable", "n_eff"),
        name="fig2b",
    ),
    "fig3a": lambda: SweepConfig(
        base=_fig_base(),
        axes=(Axis("G_c", 0.0, 0.3, 151), Axis("G_b", 0.0, 0.3, 151)),
        outputs=("stable", "variance_db"),
        name="fig3a",
    ),
    "fig3b": lambda: SweepConfig(
        base=_fig_base(),
        axes=(Axis("gamma_b", 1e-3, 10.0, 161, "log"),),
        outputs=("stable", "variance", "variance_db"),
        series=(
            Series("C", (("G_c", 0.05), ("G_b", 0.08))),
            Series("D", (("G_c", 0.15), ("G_b", 0.124))),
            Series("E", (("G_c", 0.25), ("G_b", 0.154))),
        ),
        name="fig3b",
    ),
    "fig4": lambda: SweepConfig(
        base=_fig_base(),
        axes=(Axis("n_m", 0.0, 1000.0, 101),),
        outputs=("stable", "variance", "variance_db"),
        series=_BSBS_SERIES,
        name="fig4",
    ),
    "fig5": lambda: SweepConfig(
        base=_fig_base(),
        axes=(Axis("eta", 0.0, 1e-4, 101),),
        outputs=("stable", "variance", "variance_db"),
        series=_BSBS_SERIES,
        name="fig5",
    ),
}


def figure_preset(name) -> SweepConfig:
    try:
        return PRESETS[name]()
    except KeyError:
        raise ConfigError(f"unknown preset {name!r}; valid presets: {', '.join(PRESETS)}") from None
