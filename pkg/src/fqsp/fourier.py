"""Truncated Fourier series on the 2*pi-periodic circle.

A :class:`FourierSeries` stores the coefficients ``c_m`` of

    s(x) = sum_{m=-h}^{h} c_m exp(i m x)

in ascending order of ``m`` (``h`` is the half order). Everything else in the
package consumes and produces this type.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np
from scipy.optimize import minimize_scalar

__all__ = [
    "FourierSeries",
    "GridReport",
    "evaluate",
    "coefficients_by_quadrature",
    "sup_error_on_grid",
    "sup_norm",
    "l1_norm",
]

DEFAULT_GRID_POINTS = 1001


@dataclass(frozen=True, eq=False)
class FourierSeries:
    half_order: int
    coefficients: np.ndarray

    def __post_init__(self):
        coeffs = np.array(self.coefficients, dtype=complex).reshape(-1)
        if self.half_order < 0:
            raise ValueError(f"half_order must be non-negative, got {self.half_order}")
        if coeffs.size != 2 * self.half_order + 1:
            raise ValueError(
                f"expected {2 * self.half_order + 1} coefficients for half_order "
                f"{self.half_order}, got {coeffs.size}"
            )
        if not np.all(np.isfinite(coeffs)):
            raise ValueError("coefficients must be finite")
        coeffs.setflags(write=False)
        object.__setattr__(self, "half_order", int(self.half_order))
        object.__setattr__(self, "coefficients", coeffs)

    @classmethod
    def from_coefficients(cls, coefficients) -> "FourierSeries":
        coeffs = np.asarray(coefficients, dtype=complex).reshape(-1)
        if coeffs.size % 2 == 0:
            raise ValueError("coefficient list must have odd length")
        return cls((coeffs.size - 1) // 2, coeffs)

    @classmethod
    def from_dict(cls, mapping: dict[int, complex], half_order: int | None = None) -> "FourierSeries":
        """Build a series from a sparse ``{m: c_m}`` mapping."""
        if half_order is None:
            half_order = max((abs(m) for m in mapping), default=0)
        coeffs = np.zeros(2 * half_order + 1, dtype=complex)
        for m, c in mapping.items():
            coeffs[m + half_order] = c
        return cls(half_order, coeffs)

    @classmethod
    def zero(cls, half_order: int = 0) -> "FourierSeries":
        return cls(half_order, np.zeros(2 * half_order + 1, dtype=complex))

    @property
    def q(self) -> int:
        """Query complexity (twice the half order)."""
        return 2 * self.half_order

    @property
    def frequencies(self) -> np.ndarray:
        return np.arange(-self.half_order, self.half_order + 1)

    def coefficient(self, m: int) -> complex:
        if abs(m) > self.half_order:
            return 0j
        return complex(self.coefficients[m + self.half_order])

    def __call__(self, x):
        return evaluate(self, x)

    def __eq__(self, other):
        if not isinstance(other, FourierSeries):
            return NotImplemented
        return self.half_order == other.half_order and np.array_equal(self.coefficients, other.coefficients)

    def __hash__(self):
        return hash((self.half_order, self.coefficients.tobytes()))

    def __add__(self, other: "FourierSeries") -> "FourierSeries":
        h = max(self.half_order, other.half_order)
        return FourierSeries(h, self.padded(h).coefficients + other.padded(h).coefficients)

    def __sub__(self, other: "FourierSeries") -> "FourierSeries":
        return self + other.scaled(-1.0)

    def __mul__(self, scalar: complex) -> "FourierSeries":
        return self.scaled(scalar)

    __rmul__ = __mul__

    def scaled(self, factor: complex) -> "FourierSeries":
        return FourierSeries(self.half_order, self.coefficients * factor)

    def padded(self, half_order: int) -> "FourierSeries":
        """Same function, stored with a larger half order."""
        if half_order < self.half_order:
            raise ValueError("cannot pad to a smaller half order; use truncated()")
        extra = half_order - self.half_order
        return FourierSeries(half_order, np.pad(self.coefficients, extra))

    def truncated(self, half_order: int) -> "FourierSeries":
        """Drop every harmonic with ``|m| > half_order``."""
        if half_order >= self.half_order:
            return self.padded(half_order)
        cut = self.half_order - half_order
        return FourierSeries(half_order, self.coefficients[cut:-cut])

    def conj(self) -> "FourierSeries":
        """Series of the pointwise complex conjugate, ``conj(s(x))``."""
        return FourierSeries(self.half_order, np.conj(self.coefficients[::-1]))

    def effective_half_order(self, tol: float = 0.0) -> int:
        """Largest ``|m|`` whose coefficient exceeds ``tol`` in modulus."""
        big = np.nonzero(np.abs(self.coefficients) > tol)[0]
        if big.size == 0:
            return 0
        return int(np.max(np.abs(big - self.half_order)))

    def to_json_dict(self) -> dict:
        return {
            "half_order": self.half_order,
            "coefficients": [[float(c.real), float(c.imag)] for c in self.coefficients],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "FourierSeries":
        coeffs = [complex(re, im) for re, im in data["coefficients"]]
        return cls(int(data["half_order"]), np.array(coeffs, dtype=complex))

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_json_dict()) + "\n")

    @classmethod
    def load(cls, path) -> "FourierSeries":
        return cls.from_json_dict(json.loads(Path(path).read_text()))


@dataclass(frozen=True)
class GridReport:
    grid_points: int
    interval: tuple[float, float]
    max_abs_error: float
    argmax_x: float

    def to_json_dict(self) -> dict:
        return {
            "grid_points": self.grid_points,
            "interval": list(self.interval),
            "max_abs_error": self.max_abs_error,
            "argmax_x": self.argmax_x,
        }


def evaluate(series: FourierSeries, x):
    """Evaluate ``sum_m c_m exp(i m x)`` at a scalar or array of points."""
    x_arr = np.asarray(x, dtype=float)
    flat = x_arr.reshape(-1)
    h = series.half_order
    # Horner in z = exp(ix), then multiply by z^{-h}
    z = np.exp(1j * flat)
    acc = np.zeros(flat.shape, dtype=complex)
    for c in series.coefficients[::-1]:
        acc = acc * z + c
    out = acc * np.exp(-1j * h * flat)
    if x_arr.ndim == 0:
        return complex(out[0])
    return out.reshape(x_arr.shape)


def coefficients_by_quadrature(
    g: Callable[[np.ndarray], np.ndarray], half_order: int, quad_points: int | None = None
) -> FourierSeries:
    """Truncated Fourier series of ``g`` via the equispaced trapezoidal rule.

    ``g`` is sampled at ``quad_points`` nodes on ``[-pi, pi)`` and must accept
    a numpy array. For a 2*pi-periodic analytic ``g`` this converges
    exponentially in ``quad_points``.

    Raises:
        ValueError: if ``quad_points < 4 * half_order + 4`` (aliasing).
    """
    if quad_points is None:
        quad_points = 8 * half_order + 8
    if quad_points < 4 * half_order + 4:
        raise ValueError(
            f"quad_points={quad_points} below 4*half_order+4={4 * half_order + 4}; "
            "coefficients would alias"
        )
    n = int(quad_points)
    x = -np.pi + 2.0 * np.pi * np.arange(n) / n
    samples = np.asarray(g(x), dtype=complex) * np.ones(n)
    spectrum = np.fft.fft(samples) / n
    m = np.arange(-half_order, half_order + 1)
    # nodes start at -pi, which contributes exp(i m pi) = (-1)^m
    coeffs = spectrum[m % n] * np.where(m % 2 == 0, 1.0, -1.0)
    return FourierSeries(half_order, coeffs)


def grid(interval: tuple[float, float] = (-np.pi, np.pi), points: int = DEFAULT_GRID_POINTS) -> np.ndarray:
    return np.linspace(interval[0], interval[1], points)


def sup_error_on_grid(
    series: FourierSeries,
    reference: Callable[[np.ndarray], np.ndarray],
    interval: tuple[float, float] = (-np.pi, np.pi),
    points: int = DEFAULT_GRID_POINTS,
) -> GridReport:
    if points < 2:
        raise ValueError("need at least two grid points")
    x = grid(interval, points)
    err = np.abs(evaluate(series, x) - np.asarray(reference(x), dtype=complex))
    i = int(np.argmax(err))
    return GridReport(points, (float(interval[0]), float(interval[1])), float(err[i]), float(x[i]))


def sup_norm(series: FourierSeries, oversample: int = 16, min_points: int = 4096, refine: int = 8) -> float:
    """Max of ``|s(x)|`` over the full period.

    A uniform grid with at least ``oversample`` points per harmonic locates
    the peaks; the ``refine`` largest grid maxima are then polished with a
    bounded scalar search between their neighbours.
    """
    n = max(min_points, oversample * (2 * series.half_order + 1))
    n = 1 << int(np.ceil(np.log2(n)))
    buf = np.zeros(n, dtype=complex)
    m = series.frequencies
    buf[m % n] = series.coefficients
    values = np.abs(np.fft.ifft(buf) * n)
    best = float(np.max(values))
    if refine <= 0 or series.half_order == 0:
        return best
    step = 2.0 * np.pi / n
    is_peak = (values >= np.roll(values, 1)) & (values >= np.roll(values, -1))
    peaks = np.nonzero(is_peak)[0]
    peaks = peaks[np.argsort(values[peaks])[::-1][:refine]]
    neg = lambda x: -abs(evaluate(series, x))
    for j in peaks:
        x = j * step
        res = minimize_scalar(neg, bounds=(x - step, x + step), method="bounded",
                              options={"xatol": 1e-12})
        best = max(best, -float(res.fun))
    return best


def l1_norm(series: FourierSeries) -> float:
    return float(np.sum(np.abs(series.coefficients)))
