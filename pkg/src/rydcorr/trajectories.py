"""Monte Carlo wave-function unraveling of the master equation.

Pure-state trajectories evolve under the non-Hermitian drift
H - (i/2) sum_c C_c^+ C_c with first-order jump sampling over the six
channels; a jump applies the channel operator and renormalizes. Only the
lower-transition channels (C1 of each atom) are recorded as detector clicks;
upper-level decay and dephasing cause jumps but no clicks.

Randomness is counter-based and splittable: trajectory n of a batch with
seed s draws from Philox4x64-10 keyed by the 128-bit pair (s, n), consuming
exactly one uniform per step, so batches are reproducible bit-for-bit for a
fixed (seed, params, duration, step) regardless of how the loop is chunked.

The ensemble is an independent statistical oracle for the regression engine:
``estimate_g2`` turns recorded click pairs into a normalized delay histogram
with stationary-window edge correction and per-bin standard errors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import algebra
from .correlators import CorrelationSeries
from .errors import (
    InsufficientStatisticsError,
    IoFailureError,
    NormUnderflowError,
    StepTooLargeError,
)
from .model import DIM_PAIR, ModelParams, jump_operators, pair_hamiltonian

__all__ = [
    "ClickRecord",
    "TrajectoryBatch",
    "mcwf_run",
    "estimate_g2",
    "write_clicks_csv",
]

CLICK_CHANNELS = (0, 3)  # C1 of atom 1, C1 of atom 2 in the fixed channel order
MAX_JUMP_PROBABILITY = 0.1
RNG_CHUNK_STEPS = 2048


@dataclass(frozen=True)
class ClickRecord:
    """One detected lower-transition photon."""

    channel: int
    atom: int
    time: float


@dataclass(frozen=True)
class TrajectoryBatch:
    """Click records plus ensemble population diagnostics for one reproducible run."""

    seed: int
    count: int
    duration: float
    step: float
    params: ModelParams
    records: tuple = field(repr=False)
    sample_times: np.ndarray = field(repr=False)
    level_mean: dict = field(repr=False)  # {"atom1": (S,3), "atom2": (S,3)} ensemble means
    level_sem: dict = field(repr=False)   # matching standard errors of the mean
    # per-trajectory level populations time-averaged over the late half of the
    # run, (count, 3) per atom; their spread gives an honest standard error
    # even when the ensemble mean is carried by a few rare trajectories
    late_half_mean: dict = field(repr=False)

    def late_population(self, atom: int, level: int):
        """Late-half time-averaged population: ensemble (mean, standard error)."""
        vals = self.late_half_mean[f"atom{atom}"][:, level - 1]
        sem = vals.std(ddof=1) / math.sqrt(self.count) if self.count > 1 else 0.0
        return float(vals.mean()), float(sem)

    def clicks_of_atom(self, atom: int) -> list:
        """Per-trajectory arrays of click times for one atom."""
        return [
            np.array([r.time for r in rec if r.atom == atom], dtype=float)
            for rec in self.records
        ]


def _channel_atom(channel: int) -> int:
    return 1 if channel < 3 else 2


def _ground_state() -> np.ndarray:
    psi = np.zeros(DIM_PAIR, dtype=complex)
    psi[0] = 1.0
    return psi


def mcwf_run(p: ModelParams, duration: float, step: float, seed: int,
             count: int = 1, initial: np.ndarray | None = None,
             sample_every: int | None = None) -> TrajectoryBatch:
    """Run ``count`` trajectories of the given duration.

    ``step`` must resolve the coherent dynamics (step <= 0.01 / max(1, rabi));
    it is bisected further, before the run, whenever the worst-case jump
    probability per step dt * max_psi <psi|sum C^+C|psi> would exceed 0.1.
    ``initial`` is a normalized 9-component state vector (default: both atoms
    in the ground state). Population statistics are sampled every
    ``sample_every`` steps (default: ~200 samples per run).
    """
    if duration <= 0:
        raise ValueError("duration must be positive")
    if count < 1:
        raise ValueError("count must be >= 1")
    limit = 0.01 / max(1.0, p.rabi)
    if step > limit * (1 + 1e-12):
        raise StepTooLargeError(f"step {step} exceeds coherent-resolution limit {limit:.3e}")

    n_steps = max(1, int(round(duration / step)))
    dt = duration / n_steps

    h = pair_hamiltonian(p).matrix
    cs = [c.matrix for c in jump_operators(p)]
    decay_sum = sum(c.conj().T @ c for c in cs)
    # all six C^+C are diagonal in the product basis, which makes the
    # per-channel jump probabilities a cheap weighted sum of |psi|^2
    if np.max(np.abs(decay_sum - np.diag(np.diag(decay_sum)))) > 1e-12:
        raise ValueError("jump-rate matrix unexpectedly non-diagonal")
    rate_weights = np.stack([np.diag(c.conj().T @ c).real for c in cs])  # (6, 9)

    while dt * float(np.diag(decay_sum).real.max()) > MAX_JUMP_PROBABILITY:
        n_steps *= 2
        dt = duration / n_steps

    u_eff = algebra.expm((-1j * h - 0.5 * decay_sum) * dt)
    u_eff_t = np.ascontiguousarray(u_eff.T)
    jump_ops_t = [np.ascontiguousarray(c.T) for c in cs]
    total_weight = rate_weights.sum(axis=0) * dt  # (9,)
    channel_weight = rate_weights * dt            # (6, 9)

    if initial is None:
        psi0 = _ground_state()
    else:
        psi0 = np.asarray(initial, dtype=complex).ravel()
        if psi0.size != DIM_PAIR:
            raise ValueError(f"initial state must have {DIM_PAIR} components")
        nrm = np.linalg.norm(psi0)
        if nrm <= 0:
            raise ValueError("initial state must be nonzero")
        psi0 = psi0 / nrm

    if sample_every is None:
        sample_every = max(1, n_steps // 200)

    atom1_groups = [slice(3 * l, 3 * l + 3) for l in range(3)]
    atom2_idx = [np.arange(l, DIM_PAIR, 3) for l in range(3)]

    generators = [
        np.random.Generator(np.random.Philox(key=np.array([seed, t], dtype=np.uint64)))
        for t in range(count)
    ]

    psi = np.tile(psi0, (count, 1))
    click_traj: list[np.ndarray] = []
    click_channel: list[np.ndarray] = []
    click_time: list[float] = []

    sample_times = []
    mean_rows = {"atom1": [], "atom2": []}
    sem_rows = {"atom1": [], "atom2": []}
    late_sums = {"atom1": np.zeros((count, 3)), "atom2": np.zeros((count, 3))}
    late_samples = 0
    half_time = duration / 2.0

    def take_sample(t_now):
        nonlocal late_samples
        absq = psi.real ** 2 + psi.imag ** 2
        sample_times.append(t_now)
        late = t_now >= half_time
        if late:
            late_samples += 1
        for name, pops in (
            ("atom1", np.stack([absq[:, g].sum(axis=1) for g in atom1_groups], axis=1)),
            ("atom2", np.stack([absq[:, ix].sum(axis=1) for ix in atom2_idx], axis=1)),
        ):
            mean_rows[name].append(pops.mean(axis=0))
            sem_rows[name].append(pops.std(axis=0, ddof=1) / math.sqrt(count) if count > 1
                                  else np.zeros(3))
            if late:
                late_sums[name] += pops

    uniforms = np.empty((count, min(RNG_CHUNK_STEPS, n_steps)))
    chunk_start = 0
    chunk_len = 0
    for s in range(n_steps):
        if s % sample_every == 0:
            take_sample(s * dt)
        if s - chunk_start >= chunk_len:
            chunk_start = s
            chunk_len = min(RNG_CHUNK_STEPS, n_steps - s)
            for n, gen in enumerate(generators):
                uniforms[n, :chunk_len] = gen.random(chunk_len)
        u = uniforms[:, s - chunk_start]

        absq = psi.real ** 2 + psi.imag ** 2
        p_tot = absq @ total_weight
        jumped = u < p_tot
        if jumped.any():
            rows = np.nonzero(jumped)[0]
            cum = np.cumsum(absq[rows] @ channel_weight.T, axis=1)
            channel = (u[rows, None] < cum).argmax(axis=1)
            t_click = (s + 1) * dt
            for c in np.unique(channel):
                rr = rows[channel == c]
                phi = psi[rr] @ jump_ops_t[c]
                norms = np.linalg.norm(phi, axis=1)
                if np.any(norms < 1e-150):
                    raise NormUnderflowError(f"jump on channel {c} produced a null state")
                psi[rr] = phi / norms[:, None]
                if c in CLICK_CHANNELS:
                    click_traj.append(rr.copy())
                    click_channel.append(np.full(rr.size, c, dtype=np.int64))
                    click_time.append(t_click)
            rest = ~jumped
            if rest.any():
                sub = psi[rest] @ u_eff_t
                sub /= np.linalg.norm(sub, axis=1)[:, None]
                psi[rest] = sub
        else:
            psi = psi @ u_eff_t
            psi /= np.linalg.norm(psi, axis=1)[:, None]
    take_sample(n_steps * dt)

    per_traj: list[list[ClickRecord]] = [[] for _ in range(count)]
    for rr, chs, t_click in zip(click_traj, click_channel, click_time):
        for idx, c in zip(rr, chs):
            per_traj[idx].append(ClickRecord(channel=int(c), atom=_channel_atom(int(c)),
                                             time=float(t_click)))
    records = tuple(tuple(lst) for lst in per_traj)

    return TrajectoryBatch(
        seed=seed, count=count, duration=duration, step=dt, params=p, records=records,
        sample_times=np.array(sample_times),
        level_mean={k: np.array(v) for k, v in mean_rows.items()},
        level_sem={k: np.array(v) for k, v in sem_rows.items()},
        late_half_mean={k: v / max(late_samples, 1) for k, v in late_sums.items()},
    )


def estimate_g2(batch: TrajectoryBatch, i: int, j: int, tau_grid, bin_width: float,
                t_min: float = 0.0) -> CorrelationSeries:
    """Statistical g2 estimate from ordered click pairs (atom i first, atom j later).

    Bins are centered on ``tau_grid`` with width ``bin_width``; counts are
    normalized by the measured rate product, the bin width and the available
    stationary window (duration - t_min - tau), and tagged with Poisson
    standard errors. Pairs whose first click falls before ``t_min`` are
    discarded so an initial transient can be excluded.
    """
    centers = np.asarray(tau_grid, dtype=float)
    if centers.ndim != 1 or centers.size == 0 or np.any(np.diff(centers) <= 0):
        raise ValueError("tau_grid must be a strictly increasing 1-D array")
    if bin_width <= 0:
        raise ValueError("bin_width must be positive")
    window = batch.duration - t_min
    avail = window - centers
    if np.any(avail <= 0):
        raise ValueError("tau_grid extends beyond the stationary window")

    clicks_i = batch.clicks_of_atom(i)
    clicks_j = batch.clicks_of_atom(j)
    n_i = sum(int(np.sum(t >= t_min)) for t in clicks_i)
    n_j = sum(int(np.sum(t >= t_min)) for t in clicks_j)
    if n_i == 0 or n_j == 0:
        raise InsufficientStatisticsError("no clicks on one of the atoms in the window")
    rate_i = n_i / (batch.count * window)
    rate_j = n_j / (batch.count * window)

    expected = batch.count * rate_i * rate_j * bin_width * avail
    if np.any(expected < 50):
        worst = float(expected.min())
        raise InsufficientStatisticsError(
            f"expected only {worst:.1f} uncorrelated pairs in the thinnest bin; "
            "widen the bins or run more trajectories"
        )

    counts = np.zeros(centers.size)
    lo = centers - bin_width / 2.0
    hi = centers + bin_width / 2.0
    for ta, tb in zip(clicks_i, clicks_j):
        ta = ta[ta >= t_min]
        if ta.size == 0 or tb.size == 0:
            continue
        delays = tb[None, :] - ta[:, None]
        delays = delays[delays > 0]
        if delays.size:
            counts += ((delays[:, None] >= lo[None, :]) & (delays[:, None] < hi[None, :])).sum(axis=0)

    norm = batch.count * rate_i * rate_j * bin_width * avail
    values = counts / norm
    stderr = np.sqrt(np.maximum(counts, 1.0)) / norm
    return CorrelationSeries(kind="g2", atoms=(i, j), tau_grid=centers, values=values,
                             stderr=stderr)


def write_clicks_csv(batch: TrajectoryBatch, path) -> None:
    """Dump the click records, one line per click: trajectory_index,channel,atom,time."""
    try:
        with open(path, "w", newline="\n") as fh:
            fh.write("trajectory_index,channel,atom,time\n")
            for idx, rec in enumerate(batch.records):
                for r in rec:
                    fh.write(f"{idx},{r.channel},{r.atom},{r.time:.11e}\n")
    except OSError as exc:
        raise IoFailureError(f"cannot write click records to {path}: {exc}") from exc
