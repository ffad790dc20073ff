"""Command-line front end: named computations, figure recipes, CSV output.

Usage:
    rydcorr <command> [figure-name] [flags]

Commands: steady, spectrum, g2, g15, g3, g25, ampratio, figure, trajectories.
Parameters default to the reference set (omega1=0.2, omega2=5, v12=1,
gamma2=1e-4, gamma_ph=1e-4, all in units of gamma1); a flat "key = value"
config file can override them and flags override both.

Every run writes CSV series (header line, then "tau,value" rows with 12
significant digits) and a flat key=value manifest echoing the parameters,
grids, tool version and the state-invariant checks performed along the run.
Output bytes are deterministic for identical configurations; wall time and
timestamp live on dedicated manifest lines so they can be filtered out.

Exit codes: 0 success, 2 configuration error, 3 numerical-invariant failure,
4 I/O failure.
"""

from __future__ import annotations

import argparse
import math
import sys
import time
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__, algebra
from .correlators import CorrelationSeries, amplitude_ratio, g2, g15, g25, g3
from .errors import (
    BadValueError,
    ConfigError,
    InvariantViolationError,
    IoFailureError,
    MissingCommandError,
    RydcorrError,
    UnknownFigureError,
    UnknownKeyError,
)
from .liouville import (
    DIM_PAIR,
    Liouvillian,
    build_adjoint_liouvillian,
    build_liouvillian,
    conjugation_defect,
    spectrum,
    state_residuals,
    steady_state,
)
from .model import ModelParams, sigma
from .trajectories import mcwf_run, write_clicks_csv

COMMANDS = ("steady", "spectrum", "g2", "g15", "g3", "g25", "ampratio", "figure", "trajectories")
FIGURES = ("fig2", "fig3a", "fig3b", "fig4", "fig5", "fig6", "fig7", "fig8")

CONFIG_KEYS = {
    "omega1", "omega2", "v12", "gamma2", "gammaph", "theta", "t_sep",
    "tau_min", "tau_max", "dtau", "atoms", "seed", "trajectories",
    "duration", "step", "out",
}

TRACE_TOL = 1e-9
HERM_TOL = 1e-10
EIG_FLOOR = -1e-9


@dataclass
class RunConfig:
    """Fully resolved run description (flags > config file > defaults)."""

    command: str
    params: ModelParams
    figure: str | None = None
    atoms: tuple = ()
    theta: float = math.pi / 2
    t_sep: float = 10.0
    tau_min: float | None = None
    tau_max: float | None = None
    dtau: float | None = None
    seed: int = 1
    trajectories: int = 100
    duration: float = 200.0
    step: float | None = None
    out: str | None = None


def _parse_number(key, text):
    try:
        return float(text)
    except ValueError:
        raise BadValueError(f"{key} must be numeric, got {text!r}") from None


def _parse_atoms(text):
    try:
        atoms = tuple(int(x) for x in str(text).split(","))
    except ValueError:
        raise BadValueError(f"atoms must be comma-separated integers, got {text!r}") from None
    if not atoms or any(a not in (1, 2) for a in atoms):
        raise BadValueError(f"atom indices must be 1 or 2, got {text!r}")
    return atoms


def read_config_file(path) -> dict:
    """Flat 'key = value' lines; '#' starts a comment; unknown keys rejected."""
    values = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise BadValueError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise BadValueError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, val = line.partition("=")
        key = key.strip().lower()
        if key not in CONFIG_KEYS:
            raise UnknownKeyError(f"{path}:{lineno}: unknown config key {key!r}")
        values[key] = val.strip()
    return values


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rydcorr",
        description="Correlation functions of the fluorescence from two Rydberg-interacting atoms",
    )
    parser.add_argument("command", nargs="?", choices=COMMANDS)
    parser.add_argument("figure_name", nargs="?")
    parser.add_argument("--omega1", type=float)
    parser.add_argument("--omega2", type=float)
    parser.add_argument("--v12", type=float)
    parser.add_argument("--gamma2", type=float)
    parser.add_argument("--gammaph", type=float)
    parser.add_argument("--theta", type=float)
    parser.add_argument("--t-sep", dest="t_sep", type=float)
    parser.add_argument("--tau-min", dest="tau_min", type=float)
    parser.add_argument("--tau-max", dest="tau_max", type=float)
    parser.add_argument("--dtau", type=float)
    parser.add_argument("--atoms")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--trajectories", type=int)
    parser.add_argument("--duration", type=float)
    parser.add_argument("--step", type=float)
    parser.add_argument("--out")
    parser.add_argument("--config")
    parser.add_argument("--version", action="version", version=f"rydcorr {__version__}")
    return parser


def parse_config(argv) -> RunConfig:
    """Resolve argv (+ optional config file) into a validated RunConfig."""
    args = _build_parser().parse_args(argv)
    if args.command is None:
        raise MissingCommandError(f"no command given; expected one of {', '.join(COMMANDS)}")

    merged = {}
    if args.config:
        merged.update(read_config_file(args.config))
    for key in CONFIG_KEYS:
        flag = getattr(args, key, None)
        if flag is not None:
            merged[key] = flag

    def number(key, default):
        if key not in merged:
            return default
        v = merged[key]
        return v if isinstance(v, float) else _parse_number(key, v)

    def integer(key, default):
        if key not in merged:
            return default
        v = merged[key]
        try:
            return int(v)
        except (TypeError, ValueError):
            raise BadValueError(f"{key} must be an integer, got {v!r}") from None

    try:
        params = ModelParams(
            omega1=number("omega1", 0.2),
            omega2=number("omega2", 5.0),
            v12=number("v12", 1.0),
            gamma2=number("gamma2", 1e-4),
            gamma_ph=number("gammaph", 1e-4),
        )
    except ValueError as exc:
        raise BadValueError(str(exc)) from exc

    default_atoms = {"g2": (1, 2), "g15": (1, 1), "g3": (1, 1, 2), "g25": (1, 1, 2),
                     "ampratio": (1, 2, 2)}
    atoms = merged.get("atoms")
    atoms = _parse_atoms(atoms) if atoms is not None else default_atoms.get(args.command, ())
    arity = {"g2": 2, "g15": 2, "g3": 3, "g25": 3, "ampratio": 3}.get(args.command)
    if arity is not None and len(atoms) != arity:
        raise BadValueError(f"{args.command} needs {arity} atom indices, got {atoms}")

    cfg = RunConfig(
        command=args.command,
        params=params,
        figure=args.figure_name,
        atoms=atoms,
        theta=number("theta", math.pi / 2),
        t_sep=number("t_sep", 10.0),
        tau_min=number("tau_min", None),
        tau_max=number("tau_max", None),
        dtau=number("dtau", None),
        seed=integer("seed", 1),
        trajectories=integer("trajectories", 100),
        duration=number("duration", 200.0),
        step=number("step", None),
        out=merged.get("out"),
    )
    if cfg.command == "figure":
        if cfg.figure is None:
            raise BadValueError("figure command needs a figure name, e.g. 'rydcorr figure fig2'")
        if cfg.figure not in FIGURES:
            raise UnknownFigureError(f"unknown figure {cfg.figure!r}; choose from {', '.join(FIGURES)}")
    elif cfg.figure is not None:
        raise BadValueError(f"unexpected positional argument {cfg.figure!r} for {cfg.command}")
    if cfg.t_sep <= 0:
        raise BadValueError(f"t_sep must be positive, got {cfg.t_sep}")
    if cfg.dtau is not None and cfg.dtau <= 0:
        raise BadValueError(f"dtau must be positive, got {cfg.dtau}")
    if cfg.trajectories < 1:
        raise BadValueError(f"trajectories must be >= 1, got {cfg.trajectories}")
    if cfg.duration <= 0:
        raise BadValueError(f"duration must be positive, got {cfg.duration}")
    return cfg


# --- output ----------------------------------------------------------------

def _fmt(x: float) -> str:
    return f"{x:.11e}"


def _params_echo(p: ModelParams) -> str:
    items = [
        ("omega1", p.omega1), ("omega2", p.omega2), ("v12", p.v12),
        ("gamma1", p.gamma1), ("gamma2", p.gamma2), ("gamma_ph", p.gamma_ph),
    ]
    def show(v):
        v = complex(v)
        return f"{v.real:.12g}" if v.imag == 0 else f"{v.real:.12g}{v.imag:+.12g}j"
    return ";".join(f"{k}={show(v)}" for k, v in items)


def write_csv(series: CorrelationSeries, path, params: ModelParams | None = None) -> None:
    """One series per file: a '#' metadata line, a column header, then tau,value rows."""
    if series.tau_grid.size == 0:
        raise ValueError("refusing to write an empty series")
    atoms = ",".join(str(a) for a in series.atoms)
    theta = "" if series.theta is None else f"{series.theta:.12g}"
    t_sep = "" if series.T is None else f"{series.T:.12g}"
    params = _params_echo(params) if params is not None else ""
    try:
        with open(path, "w", newline="\n") as fh:
            fh.write(
                f"# kind={series.kind}, atoms={atoms}, theta={theta}, T={t_sep}, params={params}\n"
            )
            fh.write("tau,value\n")
            for t, v in zip(series.tau_grid, series.values):
                fh.write(f"{_fmt(t)},{_fmt(v)}\n")
    except OSError as exc:
        raise IoFailureError(f"cannot write {path}: {exc}") from exc


def _write_manifest(path, entries, volatile) -> None:
    try:
        with open(path, "w", newline="\n") as fh:
            for k, v in entries:
                fh.write(f"{k} = {v}\n")
            for k, v in volatile:
                fh.write(f"{k} = {v}\n")
    except OSError as exc:
        raise IoFailureError(f"cannot write {path}: {exc}") from exc


def _bool_word(ok: bool) -> str:
    return "pass" if ok else "fail"


class InvariantLog:
    """Worst-case state/effect residuals seen along a run, for the manifest."""

    def __init__(self):
        self.max_trace_dev = 0.0
        self.max_herm = 0.0
        self.min_eig = 0.0
        self.checked = 0

    def add_state(self, m):
        r = state_residuals(m)
        self.max_trace_dev = max(self.max_trace_dev, r["trace_dev"])
        self.max_herm = max(self.max_herm, r["hermiticity"])
        self.min_eig = min(self.min_eig, r["min_eig"])
        self.checked += 1

    def add_effect(self, m):
        r = state_residuals(m)
        self.max_herm = max(self.max_herm, r["hermiticity"])
        self.min_eig = min(self.min_eig, r["min_eig"])
        self.checked += 1

    @property
    def ok(self) -> bool:
        return (self.max_trace_dev <= TRACE_TOL and self.max_herm <= HERM_TOL
                and self.min_eig >= EIG_FLOOR)

    def entries(self):
        return [
            ("invariant.states_checked", str(self.checked)),
            ("invariant.max_trace_dev", _fmt(self.max_trace_dev)),
            ("invariant.max_hermiticity_residual", _fmt(self.max_herm)),
            ("invariant.min_eigenvalue", _fmt(self.min_eig)),
            ("invariant.overall", _bool_word(self.ok)),
        ]


def _audit_conditional_path(lv: Liouvillian, i: int, grid, log: InvariantLog,
                            lv_adj: Liouvillian | None = None, k: int | None = None,
                            T: float | None = None) -> None:
    """Re-walk the forward conditioned state (and backward effect) of a recipe,
    recording the density/effect-matrix residuals at every grid point."""
    rho = steady_state(lv)
    log.add_state(rho)
    p = np.trace(sigma(i, 2, 2).matrix @ rho).real
    x = sigma(i, 1, 2).matrix @ rho @ sigma(i, 2, 1).matrix / p
    prev = 0.0
    for t in grid:
        if t < 0:
            continue
        dt = t - prev
        if dt > 0:
            x = algebra.devectorize(lv.propagator(dt) @ algebra.vectorize(x), DIM_PAIR, DIM_PAIR)
        prev = t
        log.add_state(x / max(np.trace(x).real, 1e-300))
    if lv_adj is not None and k is not None and T is not None:
        e = sigma(k, 2, 2).matrix
        log.add_effect(e)
        prev = T
        for t in grid[::-1]:
            dt = prev - t
            if dt > 0:
                e = algebra.devectorize(lv_adj.propagator(dt) @ algebra.vectorize(e),
                                        DIM_PAIR, DIM_PAIR)
            prev = t
            log.add_effect(e)


def _default_dtau(p: ModelParams) -> float:
    return (2 * math.pi / p.rabi) / 40.0


def _grid(lo, hi, dt):
    n = max(1, int(round((hi - lo) / dt)))
    return np.linspace(lo, hi, n + 1)


def _series_entries(cfg: RunConfig, grid) -> list:
    return [
        ("tau_min", f"{grid[0]:.12g}"),
        ("tau_max", f"{grid[-1]:.12g}"),
        ("points", str(len(grid))),
    ]


# --- commands ---------------------------------------------------------------

def _out_path(cfg: RunConfig, default_name: str) -> Path:
    return Path(cfg.out) if cfg.out else Path(default_name)


def _manifest_path(out: Path) -> Path:
    return out.with_suffix(".manifest") if out.suffix else out / "run.manifest"


def _run_series_command(cfg: RunConfig):
    p = cfg.params
    lv = build_liouvillian(p)
    dtau = cfg.dtau if cfg.dtau is not None else _default_dtau(p)
    theta = cfg.theta
    log = InvariantLog()
    entries = [("command", cfg.command), ("atoms", ",".join(map(str, cfg.atoms)))]

    if cfg.command == "g2":
        lo = cfg.tau_min if cfg.tau_min is not None else 0.0
        hi = cfg.tau_max if cfg.tau_max is not None else 25.0
        if lo < 0:
            raise BadValueError("g2 needs tau >= 0")
        grid = _grid(lo, hi, dtau)
        series = [g2(lv, *cfg.atoms, grid)]
        _audit_conditional_path(lv, cfg.atoms[0], grid, log)
    elif cfg.command == "g15":
        lo = cfg.tau_min if cfg.tau_min is not None else -25.0
        hi = cfg.tau_max if cfg.tau_max is not None else 25.0
        grid = _grid(lo, hi, dtau)
        series = [g15(lv, *cfg.atoms, theta, grid)]
        entries.append(("theta", f"{theta:.12g}"))
        _audit_conditional_path(lv, cfg.atoms[0], grid, log)
    elif cfg.command in ("g3", "g25"):
        T = cfg.t_sep
        lo = cfg.tau_min if cfg.tau_min is not None else 0.0
        hi = cfg.tau_max if cfg.tau_max is not None else T
        grid = _grid(lo, hi, dtau)
        lv_adj = build_adjoint_liouvillian(p)
        if cfg.command == "g3":
            series = [g3(lv, *cfg.atoms, grid, T)]
        else:
            series = [g25(lv, *cfg.atoms, theta, grid, T)]
            entries.append(("theta", f"{theta:.12g}"))
        entries.append(("t_sep", f"{T:.12g}"))
        _audit_conditional_path(lv, cfg.atoms[0], grid, log, lv_adj, cfg.atoms[2], T)
    else:  # ampratio
        lo = cfg.tau_min if cfg.tau_min is not None else 10.0
        hi = cfg.tau_max if cfg.tau_max is not None else 18.0
        dT = cfg.dtau if cfg.dtau is not None else (2 * math.pi / p.rabi) / 16.0
        if lo <= 0:
            raise BadValueError("ampratio needs a positive T grid")
        grid = _grid(lo, hi, dT)
        series = list(amplitude_ratio(lv, *cfg.atoms, theta, grid))
        entries.append(("theta", f"{theta:.12g}"))
        _audit_conditional_path(lv, cfg.atoms[0], _grid(0.0, hi, dtau), log)

    entries.extend(_series_entries(cfg, grid))
    out = _out_path(cfg, f"{cfg.command}.csv")
    outputs = []
    if cfg.command == "ampratio":
        for tag, s in zip(("max", "min", "mean"), series):
            path = out.with_name(f"{out.stem}_{tag}{out.suffix or '.csv'}")
            write_csv(s, path, params=p)
            outputs.append(path)
    else:
        write_csv(series[0], out, params=p)
        outputs.append(out)
    return entries, log, outputs, _manifest_path(out)


def _run_steady(cfg: RunConfig):
    lv = build_liouvillian(cfg.params)
    rho = steady_state(lv)
    log = InvariantLog()
    log.add_state(rho)
    out = _out_path(cfg, "steady.csv")
    try:
        with open(out, "w", newline="\n") as fh:
            fh.write(f"# kind=steady_state, params={_params_echo(cfg.params)}\n")
            fh.write("row,col,re,im\n")
            for r in range(DIM_PAIR):
                for c in range(DIM_PAIR):
                    fh.write(f"{r},{c},{_fmt(rho[r, c].real)},{_fmt(rho[r, c].imag)}\n")
    except OSError as exc:
        raise IoFailureError(f"cannot write {out}: {exc}") from exc
    entries = [("command", "steady")]
    for a in (1, 2):
        pop = np.trace(sigma(a, 2, 2).matrix @ rho).real
        entries.append((f"excited_population_atom{a}", _fmt(pop)))
    entries.append(("rydberg_pair_population", _fmt(rho[8, 8].real)))
    return entries, log, [out], _manifest_path(out)


def _run_spectrum(cfg: RunConfig):
    lv = build_liouvillian(cfg.params)
    spec = spectrum(lv)
    log = InvariantLog()
    rho = steady_state(lv)
    log.add_state(rho)
    out = _out_path(cfg, "spectrum.csv")
    try:
        with open(out, "w", newline="\n") as fh:
            fh.write(f"# kind=spectrum, params={_params_echo(cfg.params)}\n")
            fh.write("index,re,im\n")
            for n, w in enumerate(spec.eigenvalues):
                fh.write(f"{n},{_fmt(w.real)},{_fmt(w.imag)}\n")
    except OSError as exc:
        raise IoFailureError(f"cannot write {out}: {exc}") from exc
    w = spec.eigenvalues
    zero_modes = spec.stationary_count
    max_real = float(w.real.max())
    conj_defect = conjugation_defect(w)
    mode0 = algebra.devectorize(spec.right_modes[:, 0], DIM_PAIR, DIM_PAIR)
    steady_match = float(np.max(np.abs(mode0 - rho)))
    entries = [
        ("command", "spectrum"),
        ("stationary_modes", str(zero_modes)),
        ("max_real_part", _fmt(max_real)),
        ("conjugation_defect", _fmt(conj_defect)),
        ("zero_mode_vs_steady_state", _fmt(steady_match)),
    ]
    ok = zero_modes == 1 and max_real <= 1e-10 and conj_defect <= 1e-8 and steady_match <= 1e-8
    entries.append(("invariant.spectrum", _bool_word(ok)))
    if not ok:
        raise InvariantViolationError("spectrum structure checks failed; see manifest")
    return entries, log, [out], _manifest_path(out)


def _run_trajectories(cfg: RunConfig):
    p = cfg.params
    step = cfg.step if cfg.step is not None else 0.005 / max(1.0, p.rabi)
    batch = mcwf_run(p, duration=cfg.duration, step=step, seed=cfg.seed,
                     count=cfg.trajectories)
    out = _out_path(cfg, "clicks.csv")
    write_clicks_csv(batch, out)
    lv = build_liouvillian(p)
    rho = steady_state(lv)
    log = InvariantLog()
    log.add_state(rho)
    n_clicks = sum(len(r) for r in batch.records)
    entries = [
        ("command", "trajectories"),
        ("seed", str(batch.seed)),
        ("trajectories", str(batch.count)),
        ("duration", f"{batch.duration:.12g}"),
        ("step", f"{batch.step:.12g}"),
        ("clicks_total", str(n_clicks)),
        ("click_rate_per_atom", _fmt(n_clicks / (2 * batch.count * batch.duration))),
        ("steady_emission_rate", _fmt(np.trace(sigma(1, 2, 2).matrix @ rho).real)),
    ]
    return entries, log, [out], _manifest_path(out)


def run_figure(name: str, cfg: RunConfig):
    """Produce the CSV series for one named figure recipe."""
    if name not in FIGURES:
        raise UnknownFigureError(f"unknown figure {name!r}")
    p = cfg.params
    dtau = cfg.dtau if cfg.dtau is not None else _default_dtau(p)
    theta = cfg.theta
    out_dir = Path(cfg.out) if cfg.out else Path(name)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise IoFailureError(f"cannot create {out_dir}: {exc}") from exc

    log = InvariantLog()
    entries = [("command", "figure"), ("figure", name)]
    outputs = []

    def emit(tag, series, params):
        path = out_dir / f"{tag}.csv"
        write_csv(series, path, params=params)
        outputs.append(path)

    if name == "fig2":
        lv = build_liouvillian(p)
        grid = _grid(0.0, 25.0, dtau)
        emit("fig2_g2_12", g2(lv, 1, 2, grid), p)
        _audit_conditional_path(lv, 1, grid, log)
    elif name == "fig3a":
        lv = build_liouvillian(p)
        grid = _grid(-25.0, 25.0, dtau)
        emit("fig3a_g15_11", g15(lv, 1, 1, theta, grid), p)
        _audit_conditional_path(lv, 1, grid, log)
    elif name == "fig3b":
        grid = _grid(-25.0, 25.0, dtau)
        for v12 in (0.0, 0.5, 1.0):
            panel = replace(p, v12=v12)
            lv = build_liouvillian(panel)
            emit(f"fig3b_g15_12_v{v12:g}", g15(lv, 1, 2, theta, grid), panel)
            _audit_conditional_path(lv, 1, grid, log)
    elif name in ("fig4", "fig5", "fig6", "fig7"):
        lv = build_liouvillian(p)
        lv_adj = build_adjoint_liouvillian(p)
        three_time = {"fig4": ("g3", (1, 1, 2), (5.0, 10.0, 15.0)),
                      "fig5": ("g3", (1, 2, 2), (5.0, 10.0, 15.0)),
                      "fig6": ("g25", (1, 1, 2), (5.0, 10.0, 20.0)),
                      "fig7": ("g25", (1, 2, 2), (5.0, 10.0, 20.0))}
        kind, atoms, Ts = three_time[name]
        for T in Ts:
            grid = _grid(0.0, T, dtau)
            if kind == "g3":
                series = g3(lv, *atoms, grid, T)
            else:
                series = g25(lv, *atoms, theta, grid, T)
            emit(f"{name}_{kind}_{''.join(map(str, atoms))}_T{T:g}", series, p)
            _audit_conditional_path(lv, atoms[0], grid, log, lv_adj, atoms[2], T)
    else:  # fig8
        lv = build_liouvillian(p)
        dT = (2 * math.pi / p.rabi) / 16.0
        Ts = _grid(10.0, 18.0, dT)
        hi, lo, mean = amplitude_ratio(lv, 1, 2, 2, theta, Ts)
        for tag, s in (("max", hi), ("min", lo), ("mean", mean)):
            emit(f"fig8_ampratio_122_{tag}", s, p)
        _audit_conditional_path(lv, 1, _grid(0.0, float(Ts[-1]), dtau), log)

    entries.append(("outputs", ";".join(str(o.name) for o in outputs)))
    return entries, log, outputs, out_dir / f"{name}.manifest"


def run(cfg: RunConfig) -> int:
    """Execute a resolved configuration; returns the process exit code."""
    t0 = time.monotonic()
    if cfg.command == "steady":
        entries, log, outputs, manifest = _run_steady(cfg)
    elif cfg.command == "spectrum":
        entries, log, outputs, manifest = _run_spectrum(cfg)
    elif cfg.command == "figure":
        entries, log, outputs, manifest = run_figure(cfg.figure, cfg)
    elif cfg.command == "trajectories":
        entries, log, outputs, manifest = _run_trajectories(cfg)
    else:
        entries, log, outputs, manifest = _run_series_command(cfg)

    head = [("tool", "rydcorr"), ("version", __version__)]
    for part in _params_echo(cfg.params).split(";"):
        k, _, v = part.partition("=")
        head.append((f"param.{k}", v))
    tail = [("outputs", ";".join(str(o) for o in outputs))]
    tail.extend(log.entries())
    volatile = [
        ("wall_time_s", f"{time.monotonic() - t0:.3f}"),
        ("timestamp_utc", datetime.now(timezone.utc).isoformat()),
    ]
    _write_manifest(manifest, head + entries + tail, volatile)
    if not log.ok:
        print(f"rydcorr: numerical invariant failure; see {manifest}", file=sys.stderr)
        return 3
    return 0


def main(argv=None) -> int:
    try:
        cfg = parse_config(sys.argv[1:] if argv is None else argv)
        return run(cfg)
    except ConfigError as exc:
        print(f"rydcorr: {exc}", file=sys.stderr)
        return 2
    except IoFailureError as exc:
        print(f"rydcorr: {exc}", file=sys.stderr)
        return 4
    except RydcorrError as exc:
        print(f"rydcorr: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
