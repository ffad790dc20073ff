"""Steady-state multi-time correlation functions of the emitted light.

Everything here is built on one primitive: between operator insertions the
(unnormalized) conditional matrix evolves under the master-equation
generator, and each insertion multiplies it from the left and/or right.
A photon count on atom i inserts the pair (s12_i, s21_i); a homodyne
amplitude insertion multiplies by s21_j on the right only, which is the
ordering the time-ordered, normally ordered field correlators reduce to.

Provided correlators (all normalized by products of stationary one-time
expectations, so uncorrelated signals give 1):

* ``g2``  -- count at t, count at t+tau.
* ``g15`` -- count and quadrature amplitude; separate operator orderings for
  the amplitude measured after (tau > 0) and before (tau < 0) the count.
* ``g3``  -- counts at t and t+tau, count at t+T.
* ``g25`` -- count at t, amplitude at t+tau, count at t+T.
* ``amplitude_ratio`` -- g25 normalized by g2(T), summarized around tau = T/2.

``dominant_frequency`` estimates the leading angular frequency of a series
from its periodogram (used to verify the oscillation-frequency structure).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import algebra
from .errors import (
    DegenerateQuadratureError,
    InvariantViolationError,
    NoOscillationError,
    TooFewSamplesError,
    UnorderedEventsError,
    ZeroEmissionRateError,
)
from .liouville import DIM_PAIR, Liouvillian, steady_state
from .model import PairOperator, sigma

__all__ = [
    "EventInsertion",
    "CorrelationSeries",
    "multitime_correlator",
    "count_event",
    "amplitude_event",
    "g2",
    "g15",
    "g3",
    "g25",
    "amplitude_ratio",
    "dominant_frequency",
]

SERIES_KINDS = ("g2", "g15", "g3", "g25", "amplitude_ratio")
EMISSION_RATE_FLOOR = 1e-14
IMAG_RESIDUE_TOL = 1e-10


@dataclass(frozen=True)
class EventInsertion:
    """One insertion: at ``time``, the conditional matrix X becomes left @ X @ right."""

    time: float
    left: PairOperator
    right: PairOperator

    def __post_init__(self):
        if not (np.isfinite(self.time) and self.time >= 0):
            raise ValueError(f"event time must be finite and >= 0, got {self.time}")


def count_event(time: float, atom: int) -> EventInsertion:
    """Photon count on one atom: X -> s12 X s21."""
    return EventInsertion(time, left=sigma(atom, 1, 2), right=sigma(atom, 2, 1))


def amplitude_event(time: float, atom: int) -> EventInsertion:
    """One-sided amplitude insertion: X -> X s21 (identity on the left)."""
    eye = PairOperator(np.eye(DIM_PAIR, dtype=complex), label="I")
    return EventInsertion(time, left=eye, right=sigma(atom, 2, 1))


@dataclass(frozen=True)
class CorrelationSeries:
    """A correlator sampled on a strictly increasing delay grid."""

    kind: str
    atoms: tuple
    tau_grid: np.ndarray
    values: np.ndarray
    theta: float | None = None
    T: float | None = None
    stderr: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.kind not in SERIES_KINDS:
            raise ValueError(f"unknown series kind {self.kind!r}")
        grid = np.asarray(self.tau_grid, dtype=float)
        vals = np.asarray(self.values, dtype=float)
        if grid.ndim != 1 or grid.size == 0 or grid.shape != vals.shape:
            raise ValueError("tau_grid and values must be equal-length 1-D arrays")
        if not np.all(np.isfinite(grid)) or not np.all(np.isfinite(vals)):
            raise ValueError("series contains non-finite entries")
        if grid.size > 1 and not np.all(np.diff(grid) > 0):
            raise ValueError("tau_grid must be strictly increasing")
        if self.kind == "g2" and len(self.atoms) == 2 and self.atoms[0] == self.atoms[1]:
            at_zero = np.isclose(grid, 0.0, atol=1e-15)
            if np.any(at_zero) and np.max(np.abs(vals[at_zero])) > 1e-10:
                raise InvariantViolationError("same-atom g2 must vanish at tau = 0")
        grid.flags.writeable = False
        vals.flags.writeable = False
        object.__setattr__(self, "tau_grid", grid)
        object.__setattr__(self, "values", vals)


def multitime_correlator(lv: Liouvillian, rho0: np.ndarray, events, observable: PairOperator,
                         t_obs: float | None = None) -> complex:
    """Generic time-ordered correlator, unnormalized.

    Starting from rho0, propagates across each inter-event gap, applies the
    insertion sandwiches in time order, propagates to ``t_obs`` (default: the
    last event time) and returns Tr(observable @ X).
    """
    events = list(events)
    times = [ev.time for ev in events]
    if any(b < a for a, b in zip(times, times[1:])):
        raise UnorderedEventsError(f"event times must be non-decreasing, got {times}")
    last = times[-1] if times else 0.0
    if t_obs is None:
        t_obs = last
    if t_obs < last:
        raise UnorderedEventsError(f"observable time {t_obs} precedes last event at {last}")

    x = np.asarray(rho0, dtype=complex)
    now = 0.0
    for ev in events:
        gap = ev.time - now
        if gap > 0:
            x = algebra.devectorize(lv.propagator(gap) @ algebra.vectorize(x), DIM_PAIR, DIM_PAIR)
        x = ev.left.matrix @ x @ ev.right.matrix
        now = ev.time
    if t_obs > now:
        x = algebra.devectorize(lv.propagator(t_obs - now) @ algebra.vectorize(x), DIM_PAIR, DIM_PAIR)
    return complex(np.trace(observable.matrix @ x))


# --- shared plumbing -------------------------------------------------------

def _expect(op: np.ndarray, rho: np.ndarray) -> complex:
    return complex(np.trace(op @ rho))


def _emission_rate(rho: np.ndarray, atom: int) -> float:
    p = _expect(sigma(atom, 2, 2).matrix, rho).real
    if p < EMISSION_RATE_FLOOR:
        raise ZeroEmissionRateError(
            f"stationary excited population of atom {atom} is {p:.3e}; "
            "the correlator normalization is undefined (dark-state parameters)"
        )
    return p


def _quadrature_mean(rho: np.ndarray, atom: int, theta: float) -> float:
    p = _emission_rate(rho, atom)
    q = (np.exp(1j * theta) * _expect(sigma(atom, 2, 1).matrix, rho)).real
    if abs(q) < 1e-12 * math.sqrt(p):
        raise DegenerateQuadratureError(
            f"mean quadrature of atom {atom} at theta={theta} is {q:.3e}"
        )
    return q


def _check_grid(grid, lo=None, hi=None):
    g = np.asarray(grid, dtype=float)
    if g.ndim != 1 or g.size == 0:
        raise ValueError("tau grid must be a nonempty 1-D array")
    if g.size > 1 and not np.all(np.diff(g) > 0):
        raise ValueError("tau grid must be strictly increasing")
    if lo is not None and g[0] < lo - 1e-12:
        raise ValueError(f"tau grid starts below {lo}")
    if hi is not None and g[-1] > hi + 1e-12:
        raise ValueError(f"tau grid ends above {hi}")
    return g


def _forward_chain(lv: Liouvillian, x0: np.ndarray, grid: np.ndarray) -> np.ndarray:
    """Vectorized states at the grid times, evolved from x0 at time grid[0] - grid[0].

    Returns an array of shape (len(grid), 81); grid[0] may be > 0, in which
    case the first entry is x0 propagated by grid[0].
    """
    out = np.empty((grid.size, DIM_PAIR * DIM_PAIR), dtype=complex)
    v = algebra.vectorize(x0)
    prev = 0.0
    for n, t in enumerate(grid):
        dt = t - prev
        if dt > 0:
            v = lv.propagator(dt) @ v
        out[n] = v
        prev = t
    return out


def _suffix_propagate(lv: Liouvillian, rows: np.ndarray, grid: np.ndarray, t_end: float) -> np.ndarray:
    """Finish each row's evolution from its own grid time to t_end.

    Row k enters at time grid[k]; on return, row k has been propagated by
    (t_end - grid[k]). Rows are processed with shared per-segment propagators
    so a uniform grid costs one matrix exponential.
    """
    w = rows.copy()
    for m in range(1, grid.size):
        dt = grid[m] - grid[m - 1]
        if dt > 0:
            w[:m] = w[:m] @ lv.propagator(dt).T
    tail = t_end - grid[-1]
    if tail > 0:
        w = w @ lv.propagator(tail).T
    return w


def _real_with_guard(values: np.ndarray, what: str) -> np.ndarray:
    scale = max(1.0, float(np.max(np.abs(values.real))) if values.size else 1.0)
    worst = float(np.max(np.abs(values.imag))) if values.size else 0.0
    if worst > IMAG_RESIDUE_TOL * scale:
        raise InvariantViolationError(f"{what}: imaginary residue {worst:.3e} exceeds tolerance")
    return values.real.copy()


def _sandwich_traces(obs: np.ndarray, rows: np.ndarray) -> np.ndarray:
    """Tr(obs @ devec(row)) for every row, without materializing the matrices."""
    # Tr(A @ X) = vec(A.T) . vec(X) under column stacking
    probe = obs.T.flatten(order="F")
    return rows @ probe


# --- named correlators -----------------------------------------------------

def g2(lv: Liouvillian, i: int, j: int, tau_grid) -> CorrelationSeries:
    """Intensity-intensity correlation: count on atom i, count on atom j a delay tau later."""
    grid = _check_grid(tau_grid, lo=0.0)
    rho = steady_state(lv)
    p_i = _emission_rate(rho, i)
    p_j = _emission_rate(rho, j)
    jumped = sigma(i, 1, 2).matrix @ rho @ sigma(i, 2, 1).matrix
    rows = _forward_chain(lv, jumped, grid)
    raw = _sandwich_traces(sigma(j, 2, 2).matrix, rows)
    vals = _real_with_guard(raw, f"g2_{i}{j}") / (p_i * p_j)
    return CorrelationSeries(kind="g2", atoms=(i, j), tau_grid=grid, values=vals)


def g15(lv: Liouvillian, i: int, j: int, theta: float, tau_grid) -> CorrelationSeries:
    """Intensity-amplitude correlation across positive and negative delays.

    For tau >= 0 the quadrature of atom j is measured a delay tau after a
    count on atom i; for tau < 0 the amplitude measurement comes first and
    normal ordering leads to a different operator arrangement.
    """
    grid = _check_grid(tau_grid)
    rho = steady_state(lv)
    p_i = _emission_rate(rho, i)
    q_j = _quadrature_mean(rho, j, theta)
    phase = np.exp(1j * theta)
    s21_j = sigma(j, 2, 1).matrix

    vals = np.empty(grid.size, dtype=float)
    pos = grid >= 0
    if np.any(pos):
        jumped = sigma(i, 1, 2).matrix @ rho @ sigma(i, 2, 1).matrix
        rows = _forward_chain(lv, jumped, grid[pos])
        raw = _sandwich_traces(s21_j, rows)
        vals[pos] = (phase * raw).real / (p_i * q_j)
    neg = ~pos
    if np.any(neg):
        # amplitude first: evolve rho_ss @ s21_j forward by |tau|
        s_grid = -grid[neg][::-1]
        rows = _forward_chain(lv, rho @ s21_j, s_grid)
        raw = _sandwich_traces(sigma(i, 2, 2).matrix, rows)
        vals[neg] = ((phase * raw).real / (p_i * q_j))[::-1]
    return CorrelationSeries(kind="g15", atoms=(i, j), tau_grid=grid, values=vals, theta=theta)


def g3(lv: Liouvillian, i: int, j: int, k: int, tau_grid, T: float) -> CorrelationSeries:
    """Three-time intensity correlation: counts on atoms i, j, k at t, t+tau, t+T."""
    grid = _check_grid(tau_grid, lo=0.0, hi=T)
    rho = steady_state(lv)
    norm = _emission_rate(rho, i) * _emission_rate(rho, j) * _emission_rate(rho, k)
    s12_j = sigma(j, 1, 2).matrix
    s21_j = sigma(j, 2, 1).matrix

    jumped = sigma(i, 1, 2).matrix @ rho @ sigma(i, 2, 1).matrix
    states = _forward_chain(lv, jumped, grid)
    rows = np.empty_like(states)
    for n in range(grid.size):
        x = algebra.devectorize(states[n], DIM_PAIR, DIM_PAIR)
        rows[n] = algebra.vectorize(s12_j @ x @ s21_j)
    rows = _suffix_propagate(lv, rows, grid, T)
    raw = _sandwich_traces(sigma(k, 2, 2).matrix, rows)
    vals = _real_with_guard(raw, f"g3_{i}{j}{k}") / norm
    return CorrelationSeries(kind="g3", atoms=(i, j, k), tau_grid=grid, values=vals, T=T)


def g25(lv: Liouvillian, i: int, j: int, k: int, theta: float, tau_grid, T: float) -> CorrelationSeries:
    """Intensity-amplitude-intensity correlation: counts at t and t+T bracket an
    amplitude measurement on atom j at t+tau."""
    grid = _check_grid(tau_grid, lo=0.0, hi=T)
    rho = steady_state(lv)
    p_i = _emission_rate(rho, i)
    p_k = _emission_rate(rho, k)
    q_j = _quadrature_mean(rho, j, theta)
    phase = np.exp(1j * theta)
    s21_j = sigma(j, 2, 1).matrix

    jumped = sigma(i, 1, 2).matrix @ rho @ sigma(i, 2, 1).matrix
    states = _forward_chain(lv, jumped, grid)
    rows = np.empty_like(states)
    for n in range(grid.size):
        x = algebra.devectorize(states[n], DIM_PAIR, DIM_PAIR)
        rows[n] = algebra.vectorize(x @ s21_j)
    rows = _suffix_propagate(lv, rows, grid, T)
    raw = _sandwich_traces(sigma(k, 2, 2).matrix, rows)
    vals = (phase * raw).real / (p_i * p_k * q_j)
    return CorrelationSeries(kind="g25", atoms=(i, j, k), tau_grid=grid, values=vals,
                             theta=theta, T=T)


def amplitude_ratio(lv: Liouvillian, i: int, j: int, k: int, theta: float, T_grid,
                    window: float | None = None, dtau: float | None = None):
    """g25 normalized by g2(T), summarized in a window around tau = T/2.

    For every T in ``T_grid`` the ratio g25_ijk(tau, T, theta) / g2_ik(T) is
    evaluated on a fine tau grid inside [T/2 - window, T/2 + window] (clipped
    to [0, T]) and reduced to its max, min and mean. Returns three series
    (max, min, mean) over the T grid.
    """
    Ts = _check_grid(T_grid, lo=0.0)
    if Ts[0] <= 0:
        raise ValueError("T grid must be strictly positive")
    period = 2 * math.pi / lv.params.rabi
    if window is None:
        window = period
    if dtau is None:
        dtau = period / 40.0

    g2_at_T = g2(lv, i, k, Ts).values
    highs = np.empty(Ts.size)
    lows = np.empty(Ts.size)
    means = np.empty(Ts.size)
    for n, T in enumerate(Ts):
        lo = max(0.0, T / 2.0 - window)
        hi = min(T, T / 2.0 + window)
        m = max(2, int(round((hi - lo) / dtau)) + 1)
        tau = np.linspace(lo, hi, m)
        ratio = g25(lv, i, j, k, theta, tau, T).values / g2_at_T[n]
        highs[n] = ratio.max()
        lows[n] = ratio.min()
        means[n] = ratio.mean()

    def series(vals):
        return CorrelationSeries(kind="amplitude_ratio", atoms=(i, j, k), tau_grid=Ts,
                                 values=vals, theta=theta)

    return series(highs), series(lows), series(means)


def dominant_frequency(series: CorrelationSeries, half: str = "all") -> float:
    """Angular frequency of the strongest periodogram peak of (values - mean).

    ``half`` selects the negative-tau or positive-tau part of the grid (or all
    of it); the peak bin is refined by quadratic interpolation. Raises
    TooFewSamplesError below 16 samples and NoOscillationError when no peak
    stands above 3x the median periodogram level.
    """
    if half not in ("negative", "positive", "all"):
        raise ValueError(f"half must be 'negative', 'positive' or 'all', got {half!r}")
    grid = series.tau_grid
    vals = series.values
    if half == "negative":
        mask = grid < 0
    elif half == "positive":
        mask = grid > 0
    else:
        mask = np.ones(grid.size, dtype=bool)
    grid = grid[mask]
    vals = vals[mask]
    if grid.size < 16:
        raise TooFewSamplesError(f"{grid.size} samples in selected half, need >= 16")
    steps = np.diff(grid)
    dt = steps.mean()
    if np.max(np.abs(steps - dt)) > 1e-9 * max(dt, 1e-300):
        raise ValueError("dominant_frequency requires a uniform grid")

    x = vals - vals.mean()
    windowed = x * np.hanning(x.size)
    power = np.abs(np.fft.rfft(windowed)) ** 2
    if power.size < 3:
        raise TooFewSamplesError("too few frequency bins")
    nonzero = power[1:]
    peak = int(np.argmax(nonzero)) + 1
    floor = float(np.median(nonzero))
    if power[peak] <= 0 or power[peak] < 3.0 * floor:
        raise NoOscillationError("no periodogram peak above 3x the median level")

    # quadratic refinement on log power; clamp at the spectrum edges
    if 1 <= peak < power.size - 1:
        with np.errstate(divide="ignore"):
            logs = np.log(np.maximum(power[peak - 1:peak + 2], 1e-300))
        denom = logs[0] - 2 * logs[1] + logs[2]
        shift = 0.5 * (logs[0] - logs[2]) / denom if denom != 0 else 0.0
        shift = float(np.clip(shift, -0.5, 0.5))
    else:
        shift = 0.0
    return 2 * math.pi * (peak + shift) / (x.size * dt)
