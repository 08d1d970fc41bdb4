import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm
from scipy.stats import unitary_group

from conftest import random_series
from fqsp.approx import TargetFunction
from fqsp.complement import complementary_series
from fqsp.exceptions import PipelineError
from fqsp.fourier import FourierSeries
from fqsp.pulses import pulses_from_angles, reconstruct, synthesize_pulses
from fqsp.qsim import (
    BlockEncodingResult,
    assemble_circuit,
    diag_hamiltonian,
    eigendecompose,
    exact_function_of_H,
    extract_block,
    load_matrix,
    oracle_unitary,
    random_hermitian,
    remap_interval,
    run_pipeline,
    save_matrix,
    spectral_norm,
    success_probability,
    tfim_hamiltonian,
)

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)


def random_pulses(rng, q):
    g = random_series(rng, q // 2)
    return g, synthesize_pulses(g, complementary_series(g))


def test_eigendecompose_diag_and_pauli():
    dec = eigendecompose(np.diag([-1.0, 1.0]))
    assert np.allclose(dec.lambdas, [-1, 1])
    assert np.allclose(np.abs(dec.vectors), np.eye(2))
    dec = eigendecompose(PAULI_X)
    assert np.allclose(dec.lambdas, [-1, 1])
    assert np.allclose(np.abs(dec.vectors), np.full((2, 2), 1 / math.sqrt(2)))


def test_eigendecompose_reconstruction(rng):
    H = random_hermitian(8, rng, norm=None)
    dec = eigendecompose(H)
    assert np.all(np.diff(dec.lambdas) >= 0)
    V = dec.vectors
    assert np.allclose(V.conj().T @ V, np.eye(8), atol=1e-10)
    assert np.max(np.abs(dec.function(dec.lambdas) - H)) <= 1e-10 * max(1, spectral_norm(H))


def test_eigendecompose_rejects_non_hermitian():
    with pytest.raises(ValueError):
        eigendecompose(np.array([[0, 1], [0, 0]]))
    with pytest.raises(ValueError):
        eigendecompose(np.zeros((2, 3)))


def test_oracle_examples(rng):
    assert np.allclose(oracle_unitary(PAULI_X, 0.0, 0.0), np.eye(4))
    assert np.allclose(oracle_unitary(np.array([[1.0]]), math.pi, 0.0), np.diag([1, -1]))
    H = random_hermitian(4, rng)
    O = oracle_unitary(H, 0.8, 0.3)
    assert np.allclose(O @ O.conj().T, np.eye(8), atol=1e-12)
    # ancilla-one block is the time evolution from scipy's expm
    assert np.allclose(O[1::2, 1::2], np.exp(-0.3j) * expm(-0.8j * H), atol=1e-12)
    assert np.allclose(O[0::2, 1::2], 0)


def test_assemble_q0_is_ancilla_gate(rng):
    p = pulses_from_angles([tuple(rng.uniform(-2, 2, 4))])
    U = assemble_circuit(diag_hamiltonian([0.3, -0.2]), 1.0, 0.0, p)
    assert np.allclose(U, np.kron(np.eye(2), reconstruct(0.0, p)))


def test_assemble_diagonal_matches_per_eigenvalue_product(rng):
    lam = np.array([-0.9, -0.1, 0.4, 1.0])
    _, p = random_pulses(rng, 6)
    t, Lam = 0.9, 0.2
    U = assemble_circuit(diag_hamiltonian(lam), t, Lam, p)
    for i, l in enumerate(lam):
        sub = U[2 * i: 2 * i + 2, 2 * i: 2 * i + 2]
        assert np.allclose(sub, reconstruct(l * t + Lam, p), atol=1e-10)


def test_assemble_rejects_odd_q(rng):
    p = pulses_from_angles([(0, 0, 0, 0)] * 2)
    with pytest.raises(ValueError):
        assemble_circuit(np.eye(2), 1.0, 0.0, p)


def test_assembled_circuit_unitary(rng):
    H = random_hermitian(8, rng)
    _, p = random_pulses(rng, 8)
    U = assemble_circuit(H, 1.0, 0.0, p)
    assert np.allclose(U @ U.conj().T, np.eye(16), atol=1e-10)
    assert spectral_norm(extract_block(U)) <= 1 + 1e-10


def test_extract_block_examples():
    assert np.allclose(extract_block(np.eye(6)), np.eye(3))
    U = np.kron(PAULI_X, PAULI_X)
    assert np.allclose(extract_block(U), 0)


def test_block_equals_series_of_H(rng):
    H = random_hermitian(8, rng)
    g, p = random_pulses(rng, 10)
    block = extract_block(assemble_circuit(H, 1.0, 0.0, p))
    assert spectral_norm(block - exact_function_of_H(H, 1.0, 0.0, g)) <= 1e-8


def test_alternation_needed_and_phase_residue(rng):
    lam = np.array([-0.7, 0.1, 0.8])
    g, p = random_pulses(rng, 6)
    t = 1.0
    block = extract_block(assemble_circuit(diag_hamiltonian(lam), t, 0.0, p, alternate=False))
    dec = eigendecompose(diag_hamiltonian(lam))
    good = exact_function_of_H(None, t, 0.0, g, decomposition=dec)
    assert spectral_norm(block - good) > 1e-3
    # each oracle carries exp(-i x/2); without alternation the omega<0 steps miss it twice
    for i, l in enumerate(lam):
        x = l * t
        direct = reconstruct(x, p)[0, 0]
        assert block[i, i] != pytest.approx(direct)


def test_basis_invariance(rng):
    H = random_hermitian(4, rng)
    W = unitary_group.rvs(4, random_state=7)
    _, p = random_pulses(rng, 6)
    b1 = extract_block(assemble_circuit(H, 1.0, 0.0, p))
    b2 = extract_block(assemble_circuit(W @ H @ W.conj().T, 1.0, 0.0, p))
    assert np.allclose(W @ b1 @ W.conj().T, b2, atol=1e-8)


def test_exact_function_examples():
    assert np.allclose(exact_function_of_H(np.diag([0.2, -0.4]), 1.0, 0.0, FourierSeries(0, [1.0])), np.eye(2))
    cos_series = FourierSeries.from_dict({-1: 0.5, 1: 0.5})
    out = exact_function_of_H(np.diag([1.0, -1.0]), 1.0, 0.0, cos_series)
    assert np.allclose(out, np.diag([math.cos(1), math.cos(1)]))
    out = exact_function_of_H(np.zeros((1, 1)), 1.0, 0.0, TargetFunction.exponential(2.0), 1.0)
    assert out[0, 0] == pytest.approx(math.exp(-2))


def test_success_probability(rng):
    psi = rng.normal(size=4) + 1j * rng.normal(size=4)
    psi /= np.linalg.norm(psi)
    assert success_probability(np.eye(4), psi) == pytest.approx(1.0)
    B = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    brute = sum(abs(sum(B[i, j] * psi[j] for j in range(4))) ** 2 for i in range(4))
    assert success_probability(B, psi) == pytest.approx(brute, rel=1e-12)
    assert success_probability(B, np.exp(0.7j) * psi) == pytest.approx(brute, rel=1e-12)
    with pytest.raises(ValueError):
        success_probability(B, 2 * psi)


def test_success_probability_eigenvector():
    H = tfim_hamiltonian(3)
    dec = eigendecompose(H)
    f = TargetFunction.exponential(1.5)
    A = exact_function_of_H(H, 1.0, 0.0, f, 0.4, decomposition=dec)
    psi = dec.vectors[:, 2]
    assert success_probability(A, psi) == pytest.approx(0.16 * f(dec.lambdas[2]) ** 2, abs=1e-12)


def test_remap_examples():
    assert remap_interval(-1, 1, math.pi / 2) == pytest.approx((math.pi / 2, 0.0))
    t, Lam = remap_interval(0, 1, math.pi / 2)
    assert (t, Lam) == pytest.approx((math.pi, -math.pi / 2))
    assert 0 * t + Lam == pytest.approx(-math.pi / 2)
    assert 1 * t + Lam == pytest.approx(math.pi / 2)
    t_small, _ = remap_interval(0.2, 0.2 + 1e-9, 1.0)
    assert t_small > 1e8
    with pytest.raises(ValueError):
        remap_interval(1, 1, 1.0)


def test_tfim_generator():
    H = tfim_hamiltonian(4)
    assert H.shape == (16, 16)
    assert np.max(np.abs(np.linalg.eigvalsh(H))) == pytest.approx(1.0)
    raw = tfim_hamiltonian(2, normalize=False)
    z = np.diag([1.0, -1.0])
    expected = -np.kron(z, z) - np.kron(PAULI_X, np.eye(2)) - np.kron(np.eye(2), PAULI_X)
    assert np.allclose(raw, expected)


def test_random_hermitian_seeded():
    a = random_hermitian(5, np.random.default_rng(3))
    b = random_hermitian(5, np.random.default_rng(3))
    assert np.array_equal(a, b)
    assert spectral_norm(a) == pytest.approx(1.0)


def test_matrix_json_round_trip(tmp_path, rng):
    H = random_hermitian(3, rng)
    save_matrix(H, tmp_path / "h.json")
    assert np.array_equal(load_matrix(tmp_path / "h.json"), H)


def test_pipeline_zero_hamiltonian():
    f = TargetFunction.exponential(1.0)
    res = run_pipeline(np.zeros((2, 2)), f, 1e-3)
    assert np.allclose(res.block, res.alpha * math.exp(-1) * np.eye(2), atol=1e-3)
    assert res.err_vs_series <= 1e-8


def test_pipeline_random_three_qubit(rng):
    H = random_hermitian(8, rng)
    f = TargetFunction.exponential(2.0)
    res = run_pipeline(H, f, 1e-3, "analytic_extension")
    assert res.err_vs_target <= 1e-3 and res.err_vs_series <= 1e-8
    psi = np.ones(8) / math.sqrt(8)
    p = success_probability(res.block, psi)
    vals = res.alpha ** 2 * f(eigendecompose(H).lambdas) ** 2
    assert vals.min() - 2e-3 <= p <= vals.max() + 2e-3


@pytest.mark.parametrize("method", ["taylor_fourier", "linear_extension"])
def test_pipeline_other_methods(rng, method):
    H = random_hermitian(4, rng)
    f = TargetFunction.exponential(1.0)
    res = run_pipeline(H, f, 1e-2, method)
    assert res.err_vs_target <= 1e-2 and res.err_vs_series <= 1e-8


def test_pipeline_requires_remap_for_large_norm():
    with pytest.raises(ValueError, match="interval"):
        run_pipeline(np.diag([0.0, 3.0]), TargetFunction.exponential(1.0), 1e-2)
    res = run_pipeline(np.diag([0.0, 3.0]), TargetFunction.exponential(1.0), 1e-2,
                       interval=(0.0, 3.0), x0=math.pi / 2)
    assert res.err_vs_target <= 1e-2


def test_pipeline_stage_labels():
    with pytest.raises(PipelineError) as info:
        run_pipeline(np.eye(2) * 0.5, TargetFunction.exponential(30.0), 1e-6, q_max=8)
    assert info.value.stage == "approx"


def test_result_json(tmp_path):
    res = run_pipeline(np.diag([0.5]), TargetFunction.exponential(1.0), 1e-2)
    res.save(tmp_path / "r.json")
    import json

    back = BlockEncodingResult.from_json_dict(json.loads((tmp_path / "r.json").read_text()))
    assert np.array_equal(back.block, res.block)
    assert (back.q, back.alpha, back.t, back.Lambda) == (res.q, res.alpha, res.t, res.Lambda)


@settings(max_examples=15, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), d=st.sampled_from([1, 2, 3, 5, 8]),
       q=st.sampled_from([0, 2, 6, 12]), t=st.floats(0.1, 3.0), Lambda=st.floats(-1.0, 1.0))
def test_block_encoding_properties(seed, d, q, t, Lambda):
    rng = np.random.default_rng(seed)
    H = random_hermitian(d, rng)
    g, p = random_pulses(rng, q)
    U = assemble_circuit(H, t, Lambda, p)
    assert np.allclose(U.conj().T @ U, np.eye(2 * d), atol=1e-10)
    block = extract_block(U)
    assert spectral_norm(block) <= 1 + 1e-10
    assert spectral_norm(block - exact_function_of_H(H, t, Lambda, g)) <= 1e-8
    # conjugating H conjugates the block
    W = unitary_group.rvs(d, random_state=rng) if d > 1 else np.array([[np.exp(0.3j)]])
    moved = extract_block(assemble_circuit(W @ H @ W.conj().T, t, Lambda, p))
    assert spectral_norm(moved - W @ block @ W.conj().T) <= 1e-8
    psi = rng.normal(size=d) + 1j * rng.normal(size=d)
    psi /= np.linalg.norm(psi)
    assert success_probability(block, np.exp(1.1j) * psi) == pytest.approx(success_probability(block, psi))
