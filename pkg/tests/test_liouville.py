import numpy as np
import pytest

from rydcorr import (
    ModelParams,
    build_adjoint_liouvillian,
    build_liouvillian,
    propagate,
    spectrum,
    steady_state,
)
from rydcorr.errors import NegativeDurationError
from rydcorr.liouville import apply_generator, check_state, conjugation_defect, state_residuals
from rydcorr.model import dark_state, jump_operators, pair_hamiltonian, sigma

RNG = np.random.default_rng(42)


def random_hermitian(scale=1.0):
    m = RNG.standard_normal((9, 9)) + 1j * RNG.standard_normal((9, 9))
    return scale * (m + m.conj().T) / 2


def random_density():
    m = RNG.standard_normal((9, 9)) + 1j * RNG.standard_normal((9, 9))
    rho = m @ m.conj().T
    return rho / np.trace(rho).real


def lindblad_direct(p, rho):
    """Element-wise evaluation of the master equation right side."""
    h = pair_hamiltonian(p).matrix
    out = -1j * (h @ rho - rho @ h)
    for c in jump_operators(p):
        m = c.matrix
        cd = m.conj().T
        out += m @ rho @ cd - 0.5 * (cd @ m @ rho + rho @ cd @ m)
    return out


def adjoint_direct(p, x):
    h = pair_hamiltonian(p).matrix
    out = 1j * (h @ x - x @ h)
    for c in jump_operators(p):
        m = c.matrix
        cd = m.conj().T
        out += cd @ x @ m - 0.5 * (cd @ m @ x + x @ cd @ m)
    return out


def assemble(h, cs):
    eye = np.eye(9)
    g = -1j * (np.kron(eye, h) - np.kron(h.T, eye))
    for c in cs:
        cdc = c.conj().T @ c
        g += np.kron(c.conj(), c) - 0.5 * (np.kron(eye, cdc) + np.kron(cdc.T, eye))
    return g


def test_action_matches_direct_commutator_form(lv, params):
    for _ in range(20):
        rho = random_hermitian()
        assert np.max(np.abs(apply_generator(lv, rho) - lindblad_direct(params, rho))) < 1e-12


def test_trace_preservation(lv):
    for _ in range(10):
        assert abs(np.trace(apply_generator(lv, random_hermitian()))) < 1e-13


def test_hermiticity_preservation(lv):
    for _ in range(10):
        out = apply_generator(lv, random_hermitian())
        assert np.max(np.abs(out - out.conj().T)) < 1e-12


def test_adjoint_annihilates_identity(lv_adj):
    out = apply_generator(lv_adj, np.eye(9))
    assert np.max(np.abs(out)) < 1e-14


def test_adjoint_duality(lv, lv_adj):
    for _ in range(20):
        rho = random_hermitian()
        e = random_hermitian()
        lhs = np.trace(e @ apply_generator(lv, rho))
        rhs = np.trace(apply_generator(lv_adj, e) @ rho)
        assert abs(lhs - rhs) < 1e-12


def test_adjoint_action_matches_direct_form(lv_adj, params):
    for _ in range(10):
        x = random_hermitian()
        assert np.max(np.abs(apply_generator(lv_adj, x) - adjoint_direct(params, x))) < 1e-12


def test_adjoint_is_conjugate_transpose(lv, lv_adj):
    assert np.max(np.abs(lv_adj.matrix - lv.matrix.conj().T)) == 0.0


def test_adjoint_spectrum_is_conjugate(lv, lv_adj):
    w = np.linalg.eigvals(lv.matrix)
    wa = np.linalg.eigvals(lv_adj.matrix).conj()
    # eigenvalues agree as multisets up to numerical noise
    dist = np.abs(w[:, None] - wa[None, :])
    assert dist.min(axis=1).max() < 1e-10
    assert dist.min(axis=0).max() < 1e-10


def test_dephasing_form_equivalence(params):
    h = pair_hamiltonian(params).matrix
    literal = [c.matrix for c in jump_operators(params)]
    shifted = list(literal)
    for j, idx in ((1, 2), (2, 5)):
        shifted[idx] = 2 * np.sqrt(params.gamma_ph) * sigma(j, 3, 3).matrix
    a = assemble(h, literal)
    b = assemble(h, shifted)
    assert np.max(np.abs(a - b)) < 1e-12
    assert np.max(np.abs(a - build_liouvillian(params).matrix)) < 1e-14


def test_steady_state_contract(lv, rho_ss):
    assert np.trace(rho_ss).real == pytest.approx(1.0, abs=1e-12)
    assert np.linalg.norm(lv.matrix @ rho_ss.flatten(order="F")) < 1e-10
    r = state_residuals(rho_ss)
    assert r["hermiticity"] < 1e-12
    assert r["min_eig"] > -1e-9


def test_steady_state_dark_limit():
    p = ModelParams(gamma2=0.0, gamma_ph=0.0, v12=0.0)
    rho = steady_state(build_liouvillian(p))
    _, dd = dark_state(p)
    assert np.max(np.abs(rho - np.outer(dd, dd.conj()))) < 1e-8
    for j in (1, 2):
        assert abs(np.trace(sigma(j, 2, 2).matrix @ rho)) < 1e-12


def test_blockade_suppresses_double_rydberg(params):
    rho_int = steady_state(build_liouvillian(params))
    rho_free = steady_state(build_liouvillian(ModelParams(v12=0.0)))
    assert rho_int[8, 8].real < rho_free[8, 8].real


def test_propagate_zero_duration(lv, rho_ss):
    assert np.array_equal(propagate(lv, rho_ss, 0.0), rho_ss)


def test_propagate_fixed_point(lv, rho_ss):
    for t in (0.5, 3.0, 12.0):
        assert np.max(np.abs(propagate(lv, rho_ss, t) - rho_ss)) < 1e-12


def test_propagate_semigroup(lv):
    rho = random_density()
    one = propagate(lv, rho, 1.7)
    two = propagate(lv, propagate(lv, rho, 0.9), 0.8)
    assert np.max(np.abs(one - two)) < 1e-10


def test_propagate_rejects_negative(lv, rho_ss):
    with pytest.raises(NegativeDurationError):
        propagate(lv, rho_ss, -0.1)


def test_propagation_preserves_state_invariants(lv):
    rho = sigma(1, 1, 2).matrix @ steady_state(lv) @ sigma(1, 2, 1).matrix
    rho = rho / np.trace(rho).real
    for t in np.linspace(0.1, 8.0, 20):
        check_state(propagate(lv, rho, t), where=f"t={t}")


def test_spectrum_structure(lv, rho_ss):
    spec = spectrum(lv)
    w = spec.eigenvalues
    assert spec.stationary_count == 1
    assert w.real.max() <= 1e-10
    assert conjugation_defect(w) < 1e-8
    mode0 = spec.right_modes[:, 0].reshape(9, 9, order="F")
    assert np.max(np.abs(mode0 - rho_ss)) < 1e-8


def test_spectrum_biorthogonal(lv):
    spec = spectrum(lv)
    overlap = spec.left_modes.conj().T @ spec.right_modes
    assert np.max(np.abs(np.diag(overlap) - 1.0)) < 1e-9
