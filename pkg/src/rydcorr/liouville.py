"""Lindblad generator of the two-atom master equation, its adjoint, and their use.

The density matrix obeys d(rho)/dt = L rho with

    L rho = -i [H, rho] + sum_c ( C_c rho C_c^+ - {C_c^+ C_c, rho} / 2 ),

represented as an 81x81 matrix acting on column-stacked 9x9 matrices
(``vec(A X B) = kron(B.T, A) vec(X)``). The adjoint generator, which governs
the backward propagation of effect matrices, flips the commutator sign and
sandwiches with the daggers swapped:

    L+ E = +i [H, E] + sum_c ( C_c^+ E C_c - {C_c^+ C_c, E} / 2 ),

and equals the conjugate transpose of L as a matrix.

The steady state is solved exactly from the bordered linear system obtained
by replacing the redundant first row of L (a diagonal-population row, which
is a linear combination of the others by trace preservation) with the trace
functional.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from . import algebra
from .errors import (
    DegenerateSteadyStateError,
    InvariantViolationError,
    NearDefectiveError,
    NegativeDurationError,
    NotPositiveError,
)
from .model import DIM_PAIR, ModelParams, jump_operators, pair_hamiltonian

__all__ = [
    "Liouvillian",
    "LiouvillianSpectrum",
    "build_liouvillian",
    "build_adjoint_liouvillian",
    "steady_state",
    "propagate",
    "spectrum",
    "apply_generator",
    "state_residuals",
    "check_state",
    "check_effect",
    "conjugation_defect",
]

DIM_SUPER = DIM_PAIR * DIM_PAIR

STEADY_RESIDUAL_TOL = 1e-10
STEADY_NULLSPACE_RTOL = 1e-10
POSITIVITY_FLOOR = -1e-8

TRACE_TOL = 1e-9
HERMITICITY_TOL = 1e-10
STATE_EIG_FLOOR = -1e-9


@dataclass(frozen=True, eq=False)
class Liouvillian:
    """An 81x81 generator with its parameters and a per-instance propagator cache."""

    matrix: np.ndarray = field(repr=False)
    params: ModelParams
    adjoint: bool = False
    _propagators: dict = field(default_factory=dict, repr=False, compare=False)
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (DIM_SUPER, DIM_SUPER):
            raise ValueError(f"generator must be {DIM_SUPER}x{DIM_SUPER}, got {m.shape}")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    def propagator(self, dt: float) -> np.ndarray:
        """exp(L dt), cached per duration so uniform grids reuse one exponential."""
        if dt < 0:
            raise NegativeDurationError(f"duration must be >= 0, got {dt}")
        key = float(dt)
        prop = self._propagators.get(key)
        if prop is None:
            prop = algebra.expm(self.matrix * key)
            prop.flags.writeable = False
            self._propagators[key] = prop
        return prop


def _assemble(h: np.ndarray, sandwiches: list[np.ndarray], decays: list[np.ndarray],
              commutator_sign: complex) -> np.ndarray:
    eye = np.eye(DIM_PAIR, dtype=complex)
    gen = commutator_sign * (np.kron(eye, h) - np.kron(h.T, eye))
    for sand, cdc in zip(sandwiches, decays):
        gen += sand - 0.5 * (np.kron(eye, cdc) + np.kron(cdc.T, eye))
    return gen


def build_liouvillian(p: ModelParams) -> Liouvillian:
    """Forward generator of the master equation."""
    h = pair_hamiltonian(p).matrix
    cs = [c.matrix for c in jump_operators(p)]
    sandwiches = [np.kron(c.conj(), c) for c in cs]
    decays = [c.conj().T @ c for c in cs]
    return Liouvillian(_assemble(h, sandwiches, decays, -1j), params=p, adjoint=False)


def build_adjoint_liouvillian(p: ModelParams) -> Liouvillian:
    """Adjoint generator (backward effect-matrix evolution); equals L^H as a matrix."""
    h = pair_hamiltonian(p).matrix
    cs = [c.matrix for c in jump_operators(p)]
    sandwiches = [np.kron(c.T, c.conj().T) for c in cs]
    decays = [c.conj().T @ c for c in cs]
    return Liouvillian(_assemble(h, sandwiches, decays, +1j), params=p, adjoint=True)


def apply_generator(lv: Liouvillian, x: np.ndarray) -> np.ndarray:
    """Action of the generator on a 9x9 matrix (devectorized matrix product)."""
    return algebra.devectorize(lv.matrix @ algebra.vectorize(x), DIM_PAIR, DIM_PAIR)


def _hermitize(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + m.conj().T)


def steady_state(lv: Liouvillian) -> np.ndarray:
    """Unique trace-one stationary density matrix of the forward generator.

    Solved from the bordered system (first row of L replaced by the trace
    functional) with one step of iterative refinement; the null-space
    dimension is verified from the singular values first.
    """
    cached = lv._cache.get("steady")
    if cached is not None:
        return cached.copy()

    mat = lv.matrix
    svals = np.linalg.svd(mat, compute_uv=False)
    null_dim = int(np.sum(svals <= STEADY_NULLSPACE_RTOL * max(svals[0], 1.0)))
    if null_dim != 1:
        raise DegenerateSteadyStateError(
            f"generator null space has dimension {null_dim}, expected 1"
        )

    trace_row = np.zeros(DIM_SUPER, dtype=complex)
    trace_row[:: DIM_PAIR + 1] = 1.0
    bordered = mat.copy()
    bordered[0, :] = trace_row
    rhs = np.zeros(DIM_SUPER, dtype=complex)
    rhs[0] = 1.0
    lu = scipy.linalg.lu_factor(bordered)
    vec = scipy.linalg.lu_solve(lu, rhs)
    # one refinement pass tightens the residual when slow rates make L stiff
    vec += scipy.linalg.lu_solve(lu, rhs - bordered @ vec)

    rho = _hermitize(algebra.devectorize(vec, DIM_PAIR, DIM_PAIR))
    rho /= np.trace(rho).real

    residual = np.linalg.norm(mat @ algebra.vectorize(rho))
    if residual > STEADY_RESIDUAL_TOL:
        raise DegenerateSteadyStateError(
            f"stationary solve residual {residual:.3e} exceeds {STEADY_RESIDUAL_TOL:.1e}"
        )
    min_eig = float(np.linalg.eigvalsh(rho).min())
    if min_eig < POSITIVITY_FLOOR:
        raise NotPositiveError(
            f"stationary matrix has eigenvalue {min_eig:.3e} < {POSITIVITY_FLOOR:.1e}"
        )
    rho.flags.writeable = False
    lv._cache["steady"] = rho
    return rho.copy()


def propagate(lv: Liouvillian, x: np.ndarray, t: float) -> np.ndarray:
    """Evolve a 9x9 matrix for duration t under the generator.

    Pass the forward generator for density matrices and the adjoint generator
    for effect matrices (the duration is then the remaining time-to-go).
    """
    if t < 0:
        raise NegativeDurationError(f"duration must be >= 0, got {t}")
    x = np.asarray(x, dtype=complex)
    if t == 0:
        return x.copy()
    return algebra.devectorize(lv.propagator(t) @ algebra.vectorize(x), DIM_PAIR, DIM_PAIR)


@dataclass(frozen=True)
class LiouvillianSpectrum:
    """Full eigensystem of the generator.

    ``eigenvalues`` are sorted by descending real part, so the stationary mode
    comes first; ``right_modes``/``left_modes`` hold vectorized matrices as
    columns, with left modes scaled biorthogonally (l_m^H r_n = delta_mn) and
    the stationary right mode scaled to devectorize to the trace-one steady
    state when it is unique.
    """

    eigenvalues: np.ndarray
    right_modes: np.ndarray = field(repr=False)
    left_modes: np.ndarray = field(repr=False)

    @property
    def stationary_count(self) -> int:
        return int(np.sum(np.abs(self.eigenvalues) <= 1e-10))


def spectrum(lv: Liouvillian) -> LiouvillianSpectrum:
    """Eigenvalues and biorthogonal mode pairs of the generator."""
    dec = algebra.eig(lv.matrix, left=True)
    w = dec.eigenvalues
    vr = dec.right_eigenvectors.copy()
    vl = dec.left_eigenvectors.copy()

    overlaps = np.einsum("ij,ij->j", vl.conj(), vr)
    if np.min(np.abs(overlaps)) < 1e-12:
        raise NearDefectiveError("left/right eigenvector overlap too small to biorthogonalize")
    vl = vl / overlaps.conj()[np.newaxis, :]

    zero = np.abs(w) <= 1e-10
    if int(np.sum(zero)) == 1 and not lv.adjoint:
        k = int(np.nonzero(zero)[0][0])
        rho0 = algebra.devectorize(vr[:, k], DIM_PAIR, DIM_PAIR)
        tr = np.trace(rho0)
        if abs(tr) > 1e-14:
            vr[:, k] = vr[:, k] / tr
            vl[:, k] = vl[:, k] * np.conj(tr)
    return LiouvillianSpectrum(eigenvalues=w, right_modes=vr, left_modes=vl)


def conjugation_defect(eigenvalues: np.ndarray) -> float:
    """How far the eigenvalue multiset is from being closed under conjugation.

    Returns the largest distance from any conjugated eigenvalue to its nearest
    eigenvalue; exact closure gives 0.
    """
    w = np.asarray(eigenvalues, dtype=complex)
    dist = np.abs(w.conj()[:, np.newaxis] - w[np.newaxis, :])
    return float(dist.min(axis=1).max())


def state_residuals(m: np.ndarray) -> dict:
    """Diagnostics for a would-be density matrix: trace, Hermiticity, positivity."""
    m = np.asarray(m, dtype=complex)
    herm = float(np.max(np.abs(m - m.conj().T)))
    trace_dev = float(abs(np.trace(m) - 1.0))
    min_eig = float(np.linalg.eigvalsh(_hermitize(m)).min())
    return {"trace_dev": trace_dev, "hermiticity": herm, "min_eig": min_eig}


def check_state(m: np.ndarray, where: str = "state") -> dict:
    """Assert the density-matrix invariants; returns the residuals on success."""
    r = state_residuals(m)
    if r["hermiticity"] > HERMITICITY_TOL:
        raise InvariantViolationError(f"{where}: Hermiticity residual {r['hermiticity']:.3e}")
    if r["trace_dev"] > TRACE_TOL:
        raise InvariantViolationError(f"{where}: trace deviates from 1 by {r['trace_dev']:.3e}")
    if r["min_eig"] < STATE_EIG_FLOOR:
        raise NotPositiveError(f"{where}: minimum eigenvalue {r['min_eig']:.3e}")
    return r


def check_effect(m: np.ndarray, where: str = "effect") -> dict:
    """Assert the effect-matrix invariants (Hermitian, PSD; no trace condition)."""
    r = state_residuals(m)
    if r["hermiticity"] > HERMITICITY_TOL:
        raise InvariantViolationError(f"{where}: Hermiticity residual {r['hermiticity']:.3e}")
    if r["min_eig"] < STATE_EIG_FLOOR:
        raise NotPositiveError(f"{where}: minimum eigenvalue {r['min_eig']:.3e}")
    return r
