"""Dense-matrix simulation of the operator-level circuit.

The system register is combined with one ancilla qubit; joint basis index is
``system_index * 2 + ancilla_bit`` so operators are built as
``np.kron(system_op, ancilla_op)``. The oracle is a controlled time evolution

    O = 1 (x) |0><0| + exp(-i Lambda) exp(-i t H) (x) |1><1|,

and each pulse interleaves ancilla rotations with ``O`` or ``O^dagger``
according to the sign of its omega. Restricted to an eigenvector with
eigenvalue ``lambda``, ``O`` acts as ``exp(-i x/2) exp(i x Z / 2)`` with
``x = lambda t + Lambda``; alternating ``O`` and ``O^dagger`` cancels the
global phases, so the ancilla-zero block equals ``sum_lambda s(x_lambda) |lambda><lambda|``.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from .approx import (
    DEFAULT_Q_MAX,
    ApproxResult,
    TargetFunction,
    analytic_extension_series,
    linear_extension_series,
    taylor_fourier_series,
)
from .complement import complementary_series
from .exceptions import FqspError, PipelineError
from .fourier import DEFAULT_GRID_POINTS, FourierSeries
from .pulses import PulseSequence, kappa_part, rotation_part, synthesize_pulses

logger = logging.getLogger(__name__)

__all__ = [
    "EigenDecomposition",
    "BlockEncodingResult",
    "as_hermitian",
    "eigendecompose",
    "oracle_unitary",
    "assemble_circuit",
    "extract_block",
    "exact_function_of_H",
    "spectral_norm",
    "success_probability",
    "remap_interval",
    "run_pipeline",
    "diag_hamiltonian",
    "random_hermitian",
    "tfim_hamiltonian",
    "save_matrix",
    "load_matrix",
]

MAX_DIM = 1024
NORM_SLACK = 1e-12
SERIES_TOL = 1e-8

_P0 = np.diag([1.0, 0.0]).astype(complex)
_P1 = np.diag([0.0, 1.0]).astype(complex)


@dataclass(frozen=True)
class EigenDecomposition:
    lambdas: np.ndarray
    vectors: np.ndarray

    def function(self, values) -> np.ndarray:
        """``V diag(values) V^dagger``."""
        return (self.vectors * np.asarray(values)) @ self.vectors.conj().T


def as_hermitian(H, max_dim: int = MAX_DIM) -> np.ndarray:
    """Validate and return ``H`` as a complex square Hermitian array."""
    H = np.asarray(H, dtype=complex)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ValueError(f"Hamiltonian must be square, got shape {H.shape}")
    if H.shape[0] > max_dim:
        raise ValueError(f"dimension {H.shape[0]} exceeds the cap of {max_dim}")
    if not np.all(np.isfinite(H)):
        raise ValueError("Hamiltonian entries must be finite")
    scale = float(np.max(np.abs(H))) if H.size else 0.0
    if float(np.max(np.abs(H - H.conj().T), initial=0.0)) > 1e-12 * max(scale, 1e-300):
        raise ValueError("Hamiltonian is not Hermitian")
    return H


def eigendecompose(H) -> EigenDecomposition:
    H = as_hermitian(H)
    lambdas, vectors = np.linalg.eigh(0.5 * (H + H.conj().T))
    return EigenDecomposition(lambdas, vectors)


def spectral_norm(M) -> float:
    """Largest singular value."""
    return float(np.linalg.norm(np.asarray(M), 2))


def _decomp(H, decomposition):
    return decomposition if decomposition is not None else eigendecompose(H)


def oracle_unitary(H, t: float, Lambda: float = 0.0, decomposition: EigenDecomposition | None = None) -> np.ndarray:
    """Controlled ``exp(-i Lambda) exp(-i t H)`` on the joint register."""
    dec = _decomp(H, decomposition)
    evolution = dec.function(np.exp(-1j * (dec.lambdas * t + Lambda)))
    d = dec.lambdas.size
    return np.kron(np.eye(d), _P0) + np.kron(evolution, _P1)


def assemble_circuit(
    H,
    t: float,
    Lambda: float,
    pulses: PulseSequence,
    decomposition: EigenDecomposition | None = None,
    alternate: bool = True,
) -> np.ndarray:
    """Full circuit unitary for a pulse sequence.

    Pulse 0 is a plain ancilla gate. Each later pulse ``k`` applies the
    ``kappa`` rotation, then ``O`` (positive omega) or ``O^dagger`` (negative
    omega), then the remaining ancilla rotation. ``alternate=False`` uses
    ``O`` throughout and exists only to expose the phase bookkeeping.
    """
    if pulses.q % 2:
        raise ValueError(f"pulse sequence must have even q, got {pulses.q}")
    dec = _decomp(H, decomposition)
    d = dec.lambdas.size
    eye = np.eye(d)
    oracle = oracle_unitary(H, t, Lambda, dec)
    oracle_dag = oracle.conj().T
    xi0 = pulses.xis[0]
    u = np.kron(eye, rotation_part(xi0) @ kappa_part(xi0))
    for omega, xi in zip(pulses.omegas[1:], pulses.xis[1:]):
        o = oracle if (omega > 0 or not alternate) else oracle_dag
        u = np.kron(eye, kappa_part(xi)) @ u
        u = o @ u
        u = np.kron(eye, rotation_part(xi)) @ u
    return u


def extract_block(U) -> np.ndarray:
    """Ancilla-zero block ``<0|U|0>``."""
    U = np.asarray(U)
    if U.ndim != 2 or U.shape[0] != U.shape[1] or U.shape[0] % 2:
        raise ValueError("expected a square matrix of even dimension")
    return U[0::2, 0::2]


def exact_function_of_H(
    H,
    t: float,
    Lambda: float,
    fn,
    alpha: float = 1.0,
    decomposition: EigenDecomposition | None = None,
) -> np.ndarray:
    """``sum_lambda v(lambda) |lambda><lambda|``.

    ``v = fn(lambda t + Lambda)`` for a :class:`FourierSeries` and
    ``v = alpha fn(lambda)`` for any other callable (``t`` and ``Lambda`` are
    then unused).
    """
    dec = _decomp(H, decomposition)
    if isinstance(fn, FourierSeries):
        values = fn(dec.lambdas * t + Lambda)
    else:
        values = alpha * np.asarray(fn(dec.lambdas), dtype=complex)
    return dec.function(values)


def success_probability(block, psi) -> float:
    """Post-selection probability ``||block psi||^2``."""
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    if abs(np.linalg.norm(psi) - 1.0) > 1e-10:
        raise ValueError("state vector must have unit norm")
    return float(np.linalg.norm(np.asarray(block) @ psi) ** 2)


def remap_interval(lambda_minus: float, lambda_plus: float, x0: float) -> tuple[float, float]:
    """``(t, Lambda)`` sending ``[lambda_minus, lambda_plus]`` affinely onto ``[-x0, x0]``."""
    if not lambda_minus < lambda_plus:
        raise ValueError("interval must satisfy lambda_minus < lambda_plus")
    if not 0 < x0 <= math.pi:
        raise ValueError(f"x0 must lie in (0, pi], got {x0}")
    half_width = 0.5 * (lambda_plus - lambda_minus)
    centre = 0.5 * (lambda_plus + lambda_minus)
    t = x0 / half_width
    if t > 1e8:
        logger.warning("remap: interval width %.3g gives oracle time t=%.3g", 2 * half_width, t)
    return t, -x0 * centre / half_width


@dataclass
class BlockEncodingResult:
    block: np.ndarray
    err_vs_series: float
    err_vs_target: float
    q: int
    alpha: float
    t: float
    Lambda: float = 0.0
    approx: ApproxResult | None = field(default=None, repr=False)
    pulses: PulseSequence | None = field(default=None, repr=False)
    series: FourierSeries | None = field(default=None, repr=False)
    decomposition: EigenDecomposition | None = field(default=None, repr=False)

    def to_json_dict(self) -> dict:
        return {
            "q": self.q,
            "alpha": self.alpha,
            "t": self.t,
            "Lambda": self.Lambda,
            "err_vs_series": self.err_vs_series,
            "err_vs_target": self.err_vs_target,
            "block": matrix_to_json_dict(self.block),
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "BlockEncodingResult":
        return cls(
            block=matrix_from_json_dict(data["block"]),
            err_vs_series=float(data["err_vs_series"]),
            err_vs_target=float(data["err_vs_target"]),
            q=int(data["q"]),
            alpha=float(data["alpha"]),
            t=float(data["t"]),
            Lambda=float(data["Lambda"]),
        )

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_json_dict()) + "\n")


def _approximate(f, eps, method, x0, delta, q_max, grid_points, growth_bound):
    if method == "analytic_extension":
        return analytic_extension_series(
            f, eps, x0=1.0 if x0 is None else x0, q_max=q_max,
            grid_points=grid_points, growth_bound=growth_bound,
        )
    if method == "linear_extension":
        return linear_extension_series(
            f, math.pi / 2 if x0 is None else x0, eps, q_max=q_max, grid_points=grid_points
        )
    if method == "taylor_fourier":
        if x0 is not None:
            delta = math.pi / 2 - x0
        return taylor_fourier_series(f, eps, delta)
    raise ValueError(f"unknown method {method!r}")


def run_pipeline(
    H,
    f: TargetFunction,
    eps: float,
    method: str = "analytic_extension",
    *,
    interval: tuple[float, float] | None = None,
    x0: float | None = None,
    delta: float | None = None,
    growth_bound: float | str | None = "matched",
    margin: float = 1e-6,
    q_max: int = DEFAULT_Q_MAX,
    grid_points: int = DEFAULT_GRID_POINTS,
) -> BlockEncodingResult:
    """Approximate, complement, synthesize, assemble and read off the block.

    Without ``interval`` the spectrum of ``H`` must lie in ``[-1, 1]`` and the
    series variable is ``lambda t`` with ``t`` set by the method. With
    ``interval = (lambda_minus, lambda_plus)`` the target is approximated in
    the normalized variable and the oracle uses :func:`remap_interval`.

    ``growth_bound`` applies to the analytic extension (see
    :func:`~fqsp.approx.analytic_extension_series`). ``margin`` shrinks the series by ``1 / (1 + margin)`` before the
    complement; ``alpha`` in the result includes that factor.

    Raises:
        ValueError: invalid inputs, including ``||H|| > 1`` without ``interval``.
        PipelineError: a numerical stage failed; ``stage`` names it.
    """
    if not 0 < eps < 1:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    dec = eigendecompose(H)
    if interval is None:
        norm = float(np.max(np.abs(dec.lambdas))) if dec.lambdas.size else 0.0
        if norm > 1.0 + NORM_SLACK:
            raise ValueError(
                f"||H|| = {norm:.6g} exceeds 1; pass interval=(lambda_min, lambda_max) "
                "to remap the spectrum"
            )
        target = f
    else:
        lo, hi = map(float, interval)
        if not lo < hi:
            raise ValueError("interval must satisfy lambda_minus < lambda_plus")
        if dec.lambdas.size and (dec.lambdas[0] < lo - 1e-12 or dec.lambdas[-1] > hi + 1e-12):
            raise ValueError("spectrum of H leaves the remap interval")
        target = f.affine(0.5 * (lo + hi), 0.5 * (hi - lo))

    try:
        res = _approximate(target, eps, method, x0, delta, q_max, grid_points, growth_bound)
    except FqspError as exc:
        raise PipelineError("approx", exc) from exc

    if interval is None:
        t, Lambda = res.t, 0.0
    else:
        t, Lambda = remap_interval(lo, hi, res.t)

    series = res.series.scaled(1.0 / (1.0 + margin))
    alpha = res.alpha / (1.0 + margin)
    try:
        h = complementary_series(series)
    except FqspError as exc:
        raise PipelineError("complement", exc) from exc
    try:
        pulses = synthesize_pulses(series, h)
    except FqspError as exc:
        raise PipelineError("pulses", exc) from exc

    U = assemble_circuit(H, t, Lambda, pulses, dec)
    block = extract_block(U)
    err_series = spectral_norm(block - exact_function_of_H(H, t, Lambda, series, decomposition=dec))
    err_target = spectral_norm(block - exact_function_of_H(H, t, Lambda, f, alpha, decomposition=dec))
    if err_series > SERIES_TOL:
        raise PipelineError("circuit", f"block deviates from the series by {err_series:.3g}")
    return BlockEncodingResult(block, err_series, err_target, pulses.q, alpha, t, Lambda,
                               approx=res, pulses=pulses, series=series, decomposition=dec)


# ---------------------------------------------------------------------------
# Hamiltonians and matrix files


def diag_hamiltonian(values) -> np.ndarray:
    return np.diag(np.asarray(values, dtype=float)).astype(complex)


def random_hermitian(d: int, rng: np.random.Generator, norm: float | None = 1.0) -> np.ndarray:
    """GUE-style Hermitian matrix, rescaled to spectral norm ``norm`` (left as drawn if None)."""
    if d < 1:
        raise ValueError("dimension must be positive")
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    H = 0.5 * (a + a.conj().T)
    if norm is not None:
        H *= norm / max(spectral_norm(H), 1e-300)
    return H


def tfim_hamiltonian(n: int, coupling: float = 1.0, field: float = 1.0, normalize: bool = True) -> np.ndarray:
    """Open transverse-field Ising chain ``-J sum Z_i Z_{i+1} - h sum X_i``.

    With ``normalize`` the matrix is divided by its largest eigenvalue modulus.
    """
    if not 1 <= n <= 10:
        raise ValueError("tfim supports 1..10 sites")
    x = np.array([[0, 1], [1, 0]], dtype=complex)
    z = np.diag([1.0, -1.0]).astype(complex)

    def site_op(ops: dict[int, np.ndarray]) -> np.ndarray:
        out = np.eye(1, dtype=complex)
        for i in range(n):
            out = np.kron(out, ops.get(i, np.eye(2)))
        return out

    H = np.zeros((2**n, 2**n), dtype=complex)
    for i in range(n - 1):
        H -= coupling * site_op({i: z, i + 1: z})
    for i in range(n):
        H -= field * site_op({i: x})
    if normalize:
        H /= max(float(np.max(np.abs(np.linalg.eigvalsh(H)))), 1e-300)
    return H


def matrix_to_json_dict(M) -> dict:
    M = np.asarray(M, dtype=complex)
    return {
        "dim": int(M.shape[0]),
        "entries": [[[float(v.real), float(v.imag)] for v in row] for row in M],
    }


def matrix_from_json_dict(data: dict) -> np.ndarray:
    M = np.array([[complex(re, im) for re, im in row] for row in data["entries"]], dtype=complex)
    if M.shape != (int(data["dim"]), int(data["dim"])):
        raise ValueError(f"matrix shape {M.shape} does not match dim={data['dim']}")
    return M


def save_matrix(M, path) -> None:
    Path(path).write_text(json.dumps(matrix_to_json_dict(M)) + "\n")


def load_matrix(path) -> np.ndarray:
    return matrix_from_json_dict(json.loads(Path(path).read_text()))


HAMILTONIAN_KINDS: dict[str, Callable] = {
    "diag": diag_hamiltonian,
    "random_hermitian": random_hermitian,
    "tfim": tfim_hamiltonian,
}
