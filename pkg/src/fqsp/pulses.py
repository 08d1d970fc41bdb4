"""Single-qubit gate sequences whose top-left entry is a prescribed Fourier series.

Each basic gate is

    R(x, omega, xi) = e^{i(zeta+eta)Z/2} e^{-i phi Y} e^{i(zeta-eta)Z/2} e^{i omega x Z} e^{-i kappa Y}

and a sequence ``xi_0 .. xi_q`` is multiplied with index 0 applied first.
Synthesis runs backwards: the last gate is stripped off the target SU(2)
series, which lowers its frequency band by one half, until a constant matrix
remains.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple, Sequence

import numpy as np

from .exceptions import SynthesisError
from .fourier import DEFAULT_GRID_POINTS, FourierSeries, GridReport, grid

__all__ = [
    "Xi",
    "PulseSequence",
    "FIRST_OMEGA_SIGN",
    "alternating_omegas",
    "basic_gate",
    "gate_coefficients",
    "synthesize_pulses",
    "reconstruct",
    "verify_pulses",
]

# sign of omega_1; later omegas alternate
FIRST_OMEGA_SIGN = 1
DEGENERATE_TOL = 1e-13


class Xi(NamedTuple):
    zeta: float
    eta: float
    phi: float
    kappa: float


def alternating_omegas(q: int, first_sign: int = FIRST_OMEGA_SIGN) -> tuple[float, ...]:
    """``(0, s/2, -s/2, s/2, ...)`` of length ``q + 1``."""
    return (0.0,) + tuple(first_sign * (-1) ** (k + 1) * 0.5 for k in range(1, q + 1))


@dataclass(frozen=True)
class PulseSequence:
    omegas: tuple[float, ...]
    xis: tuple[Xi, ...]

    def __post_init__(self):
        omegas = tuple(float(w) for w in self.omegas)
        xis = tuple(Xi(*map(float, xi)) for xi in self.xis)
        if len(omegas) != len(xis) or not omegas:
            raise ValueError("omegas and xis must be non-empty and of equal length")
        if omegas[0] != 0.0:
            raise ValueError("omega_0 must be 0")
        for k in range(1, len(omegas)):
            if abs(omegas[k]) != 0.5:
                raise ValueError(f"|omega_{k}| must be 1/2")
            if k > 1 and omegas[k] != -omegas[k - 1]:
                raise ValueError("omegas must alternate in sign")
        if not all(math.isfinite(v) for xi in xis for v in xi):
            raise ValueError("pulse angles must be finite")
        object.__setattr__(self, "omegas", omegas)
        object.__setattr__(self, "xis", xis)

    @property
    def q(self) -> int:
        return len(self.omegas) - 1

    def to_json_dict(self) -> dict:
        return {
            "q": self.q,
            "omegas": list(self.omegas),
            "xis": [xi._asdict() for xi in self.xis],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "PulseSequence":
        xis = [Xi(d["zeta"], d["eta"], d["phi"], d["kappa"]) for d in data["xis"]]
        seq = cls(tuple(data["omegas"]), tuple(xis))
        if "q" in data and int(data["q"]) != seq.q:
            raise ValueError("q does not match the number of pulses")
        return seq

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_json_dict()) + "\n")

    @classmethod
    def load(cls, path) -> "PulseSequence":
        return cls.from_json_dict(json.loads(Path(path).read_text()))


def _rz(theta):
    return np.diag([np.exp(0.5j * theta), np.exp(-0.5j * theta)])


def _ry(phi):
    c, s = math.cos(phi), math.sin(phi)
    return np.array([[c, -s], [s, c]], dtype=complex)


def rotation_part(xi: Xi) -> np.ndarray:
    """The x-independent left factor ``e^{i(zeta+eta)Z/2} e^{-i phi Y} e^{i(zeta-eta)Z/2}``."""
    zeta, eta, phi, _ = xi
    return _rz(zeta + eta) @ _ry(phi) @ _rz(zeta - eta)


def kappa_part(xi: Xi) -> np.ndarray:
    return _ry(xi[3])


def basic_gate(x: float, omega: float, xi) -> np.ndarray:
    """Explicit 2x2 matrix of one gate."""
    xi = Xi(*xi)
    return rotation_part(xi) @ _rz(2.0 * omega * x) @ kappa_part(xi)


def gate_coefficients(xi) -> tuple[complex, complex, complex, complex]:
    """``(a_plus, a_minus, b_plus, b_minus)`` of a gate with ``omega = 1/2``.

    Its top row is ``(a_+ z + a_- / z, b_+ z + b_- / z)`` with ``z = exp(ix/2)``.
    """
    zeta, eta, phi, kappa = xi
    ez, ee = np.exp(1j * zeta), np.exp(1j * eta)
    cp, sp, ck, sk = math.cos(phi), math.sin(phi), math.cos(kappa), math.sin(kappa)
    return cp * ck * ez, -sp * sk * ee, -cp * sk * ez, -sp * ck * ee


def _shift_mul(arr: np.ndarray, lo: complex, hi: complex) -> np.ndarray:
    """Multiply a half-integer band by ``lo / z + hi z``; the band grows by one."""
    out = np.zeros(arr.size + 1, dtype=complex)
    out[:-1] += lo * arr
    out[1:] += hi * arr
    return out


def _peel_angles(g: np.ndarray, h: np.ndarray, sign: int) -> Xi:
    c_t, c_b, d_t, d_b = g[-1], g[0], h[-1], h[0]
    first = abs(c_t) ** 2 + abs(d_b) ** 2
    second = abs(c_b) ** 2 + abs(d_t) ** 2
    if max(abs(c_t), abs(c_b), abs(d_t), abs(d_b)) < DEGENERATE_TOL:
        return Xi(0.0, 0.0, 0.0, 0.0)
    if first >= second:
        theta = np.angle(c_t) + np.angle(d_b)
        phi = math.atan2(-abs(d_b), abs(c_t)) if sign > 0 else math.atan2(abs(c_t), abs(d_b))
    else:
        theta = np.angle(c_b) + np.angle(d_t) + math.pi
        phi = math.atan2(-abs(c_b), abs(d_t)) if sign > 0 else math.atan2(abs(d_t), abs(c_b))
    theta = math.remainder(float(theta), 2.0 * math.pi)
    return Xi(0.5 * theta, 0.5 * theta, phi, math.pi / 4)


def _peel(g: np.ndarray, h: np.ndarray, xi: Xi, sign: int):
    """Coefficients of ``R^dagger U`` and the norm of the dropped edge terms."""
    a_p, a_m, b_p, b_m = gate_coefficients(xi)
    # conj(a(x)) and b(x) for this gate, as (1/z, z) coefficient pairs
    if sign > 0:
        ac_lo, ac_hi, b_lo, b_hi = np.conj(a_p), np.conj(a_m), b_m, b_p
    else:
        ac_lo, ac_hi, b_lo, b_hi = np.conj(a_m), np.conj(a_p), b_p, b_m
    g_bar = np.conj(g[::-1])
    h_bar = np.conj(h[::-1])
    g_new = _shift_mul(g, ac_lo, ac_hi) + _shift_mul(h_bar, b_lo, b_hi)
    h_new = _shift_mul(h, ac_lo, ac_hi) - _shift_mul(g_bar, b_lo, b_hi)
    dropped = math.sqrt(sum(abs(v) ** 2 for v in (g_new[0], g_new[-1], h_new[0], h_new[-1])))
    return g_new[1:-1], h_new[1:-1], dropped


def synthesize_pulses(
    g: FourierSeries,
    h: FourierSeries,
    *,
    first_sign: int = FIRST_OMEGA_SIGN,
    tol: float = 1e-8,
    check_input: bool = True,
) -> PulseSequence:
    """Pulse sequence whose product has top row ``(g(x), h(x))``.

    Args:
        g: target top-left entry, half order ``q/2``.
        h: complementary top-right entry with ``|g|^2 + |h|^2 = 1``.
        first_sign: sign of ``omega_1``.
        tol: accepted grid error of the reconstructed ``g``.
        check_input: verify the unitarity identity before peeling.

    Raises:
        ValueError: mismatched orders or ``(g, h)`` not unitary within ``tol``.
        SynthesisError: reconstruction misses ``g`` by more than ``tol``;
            ``residuals`` holds the dropped edge norm of every peel step.
    """
    if g.half_order != h.half_order:
        raise ValueError("g and h must share the same half order")
    if first_sign not in (1, -1):
        raise ValueError("first_sign must be +1 or -1")
    if check_input:
        x = grid((-np.pi, np.pi), DEFAULT_GRID_POINTS)
        dev = float(np.max(np.abs(np.abs(g(x)) ** 2 + np.abs(h(x)) ** 2 - 1.0)))
        if dev > tol:
            raise ValueError(f"(g, h) violate |g|^2 + |h|^2 = 1 by {dev:.3g}")

    q = g.q
    omegas = alternating_omegas(q, first_sign)
    gc = np.array(g.coefficients, dtype=complex)
    hc = np.array(h.coefficients, dtype=complex)
    xis: list[Xi] = [Xi(0, 0, 0, 0)] * (q + 1)
    residuals = []
    for k in range(q, 0, -1):
        sign = 1 if omegas[k] > 0 else -1
        xi = _peel_angles(gc, hc, sign)
        gc, hc, dropped = _peel(gc, hc, xi, sign)
        norm = math.sqrt(float(np.sum(np.abs(gc) ** 2) + np.sum(np.abs(hc) ** 2)))
        if norm > 0:
            gc, hc = gc / norm, hc / norm
        xis[k] = xi
        residuals.append(dropped)

    g0, h0 = complex(gc[0]), complex(hc[0])
    xis[0] = Xi(float(np.angle(g0)), float(np.angle(h0)), math.atan2(-abs(h0), abs(g0)), 0.0)
    pulses = PulseSequence(omegas, tuple(xis))
    report = verify_pulses(pulses, g)
    if report.max_abs_error > tol:
        raise SynthesisError(
            f"reconstruction error {report.max_abs_error:.3g} exceeds {tol:g}",
            residuals=residuals[::-1],
        )
    return pulses


def reconstruct(x, pulses: PulseSequence) -> np.ndarray:
    """Gate product ``R_q ... R_1 R_0`` at a scalar ``x`` (2x2) or an array of points (n, 2, 2)."""
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    u = np.broadcast_to(np.eye(2, dtype=complex), (xs.size, 2, 2)).copy()
    for omega, xi in zip(pulses.omegas, pulses.xis):
        left, right = rotation_part(xi), kappa_part(xi)
        phase = np.exp(1j * omega * xs)
        mid = np.zeros((xs.size, 2, 2), dtype=complex)
        mid[:, 0, 0] = phase
        mid[:, 1, 1] = np.conj(phase)
        u = left @ mid @ right @ u
    return u[0] if np.ndim(x) == 0 else u


def verify_pulses(pulses: PulseSequence, g: FourierSeries, points: int = DEFAULT_GRID_POINTS) -> GridReport:
    """Sup over ``[-pi, pi]`` of ``|<0|R(x)|0> - g(x)|``."""
    x = grid((-np.pi, np.pi), points)
    err = np.abs(reconstruct(x, pulses)[:, 0, 0] - g(x))
    i = int(np.argmax(err))
    return GridReport(points, (-np.pi, np.pi), float(err[i]), float(x[i]))


def verify_complement(pulses: PulseSequence, h: FourierSeries, points: int = DEFAULT_GRID_POINTS) -> GridReport:
    """Sup over ``[-pi, pi]`` of ``|<0|R(x)|1> - h(x)|``."""
    x = grid((-np.pi, np.pi), points)
    err = np.abs(reconstruct(x, pulses)[:, 0, 1] - h(x))
    i = int(np.argmax(err))
    return GridReport(points, (-np.pi, np.pi), float(err[i]), float(x[i]))


def pulses_from_angles(xis: Sequence, first_sign: int = FIRST_OMEGA_SIGN) -> PulseSequence:
    """Pulse sequence with alternating omegas for the given angle quadruples."""
    xis = tuple(Xi(*xi) for xi in xis)
    return PulseSequence(alternating_omegas(len(xis) - 1, first_sign), xis)
