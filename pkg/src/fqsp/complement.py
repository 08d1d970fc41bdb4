"""Complementary series: given ``g`` with ``|g| <= 1``, find ``h`` of the same order
with ``|g|^2 + |h|^2 = 1`` on the whole circle.

The non-negative trigonometric polynomial ``1 - |g|^2`` is written as a
Laurent polynomial ``G(z)``. Its roots come in pairs ``(r, 1/r*)``; keeping the
half inside the unit disk gives a polynomial whose modulus squared on the
circle equals ``G``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.optimize import linear_sum_assignment

from .exceptions import ComplementError
from .fourier import DEFAULT_GRID_POINTS, FourierSeries, GridReport, grid, sup_norm

logger = logging.getLogger(__name__)

__all__ = [
    "LaurentPolynomial",
    "build_G",
    "poly_roots",
    "complement_roots",
    "complementary_series",
    "unitarity_report",
    "write_roots_csv",
]

PAIRING_TOL = 1e-6
UNITARITY_TOL = 1e-8
# outer coefficients of G are products of two tail coefficients of g; trimming
# them any harder narrows h relative to g and destabilizes pulse synthesis
TRIM_REL = 1e-20


@dataclass(frozen=True)
class LaurentPolynomial:
    """``G(z) = sum_{k=-order}^{order} a_k z^k`` with coefficients in ascending ``k``."""

    order: int
    coefficients: np.ndarray

    def __post_init__(self):
        coeffs = np.array(self.coefficients, dtype=complex).reshape(-1)
        if coeffs.size != 2 * self.order + 1:
            raise ValueError(f"expected {2 * self.order + 1} coefficients, got {coeffs.size}")
        coeffs.setflags(write=False)
        object.__setattr__(self, "coefficients", coeffs)

    def coefficient(self, k: int) -> complex:
        if abs(k) > self.order:
            return 0j
        return complex(self.coefficients[k + self.order])

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return np.polynomial.polynomial.polyval(z, self.coefficients) * z ** (-self.order)

    def on_circle(self, x) -> np.ndarray:
        return self(np.exp(1j * np.asarray(x, dtype=float)))


def build_G(g: FourierSeries) -> LaurentPolynomial:
    """Laurent polynomial with ``G(exp(ix)) = 1 - |g(x)|^2``.

    ``a_k = -sum_l c_l conj(c_{l-k})`` for ``k != 0`` and ``a_0 = 1 - sum |c_l|^2``.
    """
    c = g.coefficients
    a = -np.convolve(c, np.conj(c[::-1]))
    a[2 * g.half_order] += 1.0
    return LaurentPolynomial(2 * g.half_order, a)


def _scaled_residuals(coeffs: np.ndarray, r: np.ndarray) -> np.ndarray:
    """Backward errors ``|p(r)| / sum_k |a_k| |r|^k`` for ``|r| <= 1``."""
    value = np.abs(np.polynomial.polynomial.polyval(r, coeffs))
    denom = np.polynomial.polynomial.polyval(np.abs(r), np.abs(coeffs))
    return np.divide(value, denom, out=np.zeros_like(value), where=denom > 0)


def _polish(a: np.ndarray, r: np.ndarray, steps: int) -> tuple[np.ndarray, np.ndarray]:
    """Newton polishing of roots in the closed unit disk.

    A step is kept per root only while it lowers that root's backward error.
    """
    da = np.polynomial.polynomial.polyder(a)
    res = _scaled_residuals(a, r)
    for _ in range(steps):
        dp = np.polynomial.polynomial.polyval(r, da)
        with np.errstate(divide="ignore", invalid="ignore"):
            cand = r - np.polynomial.polynomial.polyval(r, a) / dp
        cand = np.where(np.isfinite(cand), cand, r)
        cand_res = _scaled_residuals(a, cand)
        better = cand_res < res
        if not np.any(better):
            break
        r = np.where(better, cand, r)
        res = np.where(better, cand_res, res)
    return r, res


def poly_roots(coeffs, tol: float = 1e-8, polish_steps: int = 4) -> np.ndarray:
    """All roots of ``sum_k coeffs[k] z^k`` (ascending order), with multiplicity.

    Companion-matrix eigenvalues followed by Newton polishing that is only
    accepted when it lowers the backward error. Roots outside the unit disk
    are polished as roots ``1/r`` of the reversed polynomial so that no power
    of ``|r|`` overflows.

    Raises:
        ValueError: degree below one after trimming leading zeros.
        ComplementError: some root's scaled residual exceeds ``tol``.
    """
    a = np.asarray(coeffs, dtype=complex).reshape(-1)
    nz = np.nonzero(a)[0]
    if nz.size == 0 or nz[-1] == 0:
        raise ValueError("polynomial must have degree >= 1")
    a = a[: nz[-1] + 1]
    # the real eigensolver is several times faster
    companion_input = a.real if not np.any(a.imag) else a
    roots = np.roots(companion_input[::-1]).astype(complex)
    residuals = np.empty(roots.size)
    outside = np.abs(roots) > 1.0
    roots[~outside], residuals[~outside] = _polish(a, roots[~outside], polish_steps)
    flipped, residuals[outside] = _polish(a[::-1], 1.0 / roots[outside], polish_steps)
    roots[outside] = 1.0 / flipped
    if np.any(residuals > tol):
        raise ComplementError(
            f"root finding did not converge (max scaled residual {residuals.max():.3g})",
            report=residuals,
        )
    return roots


def _sort_roots(roots: np.ndarray) -> np.ndarray:
    # total order: modulus, then phase
    order = np.lexsort((np.angle(roots), np.abs(roots)))
    return roots[order]


def _trimmed(G: LaurentPolynomial) -> tuple[np.ndarray, int]:
    """Coefficients of ``z^n G(z)`` with vanishing outer orders removed, and the trim count."""
    a = np.array(G.coefficients)
    thr = TRIM_REL * float(np.max(np.abs(a)))
    s = 0
    while s < G.order and abs(a[-1 - s]) <= thr and abs(a[s]) <= thr:
        s += 1
    return a[s: a.size - s], s


def complement_roots(g: FourierSeries) -> np.ndarray:
    """Sorted roots of ``z^n G(z)`` after trimming (useful for diagnostics)."""
    a, _ = _trimmed(build_G(g))
    if a.size <= 1:
        return np.zeros(0, dtype=complex)
    return _sort_roots(poly_roots(a))


def _check_pairing(inner: np.ndarray, outer: np.ndarray) -> float:
    mirrored = 1.0 / np.conj(outer)
    cost = np.abs(inner[:, None] - mirrored[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(np.max(cost[rows, cols])) if rows.size else 0.0


def unitarity_report(g: FourierSeries, h: FourierSeries, points: int = DEFAULT_GRID_POINTS) -> GridReport:
    """Sup over ``[-pi, pi]`` of ``| |g|^2 + |h|^2 - 1 |``."""
    x = grid((-np.pi, np.pi), points)
    dev = np.abs(np.abs(g(x)) ** 2 + np.abs(h(x)) ** 2 - 1.0)
    i = int(np.argmax(dev))
    return GridReport(points, (-np.pi, np.pi), float(dev[i]), float(x[i]))


def complementary_series(g: FourierSeries, margin: float = 0.0, *, tol: float = UNITARITY_TOL) -> FourierSeries:
    """Series ``h`` with the half order of ``g`` and ``|g|^2 + |h|^2 = 1``.

    With ``margin > 0`` the complement is built for ``g / (1 + margin)``,
    which moves paired roots away from the unit circle when ``max |g|``
    approaches one; the caller must then use the scaled ``g``.

    The overall phase is fixed by making the constant prefactor of the root
    product real and positive.

    Raises:
        ValueError: ``max |g| > 1`` or ``margin`` outside ``[0, 0.1]``.
        ComplementError: root pairing or the unitarity check fails.
    """
    if not 0.0 <= margin <= 0.1:
        raise ValueError(f"margin must lie in [0, 0.1], got {margin}")
    if margin > 0:
        g = g.scaled(1.0 / (1.0 + margin))
    h_order = g.half_order
    if not np.any(g.coefficients):
        return FourierSeries.from_dict({0: 1.0}, h_order)
    peak = sup_norm(g)
    if peak > 1.0 + 1e-12:
        raise ValueError(f"max |g| = {peak:.15g} exceeds 1; rescale the series first")

    G = build_G(g)
    a, s = _trimmed(G)
    n = G.order - s
    if n == 0:
        # |g|^2 is constant on the circle
        h = FourierSeries.from_dict({0: np.sqrt(max(a[0].real, 0.0))}, h_order)
    else:
        roots = _sort_roots(poly_roots(a))
        inner, outer = roots[:n], roots[n:]
        mismatch = _check_pairing(inner, outer)
        if mismatch > PAIRING_TOL:
            raise ComplementError(f"roots do not pair under r -> 1/r* (mismatch {mismatch:.3g})")
        # |G| on the circle = |a_n| prod |1 - conj(r) z|^2 / prod |r|
        log_scale = 0.5 * (np.log(abs(a[-1])) - np.sum(np.log(np.abs(inner))))
        phase = np.exp(1j * np.angle(np.prod(-inner / np.abs(inner))))
        shift = n // 2
        # evaluate the product on the circle and read coefficients off an FFT;
        # this avoids cancellation in an expanded monomial basis
        npts = 1 << int(np.ceil(np.log2(2 * (n + 1))))
        z = np.exp(2j * np.pi * np.arange(npts) / npts)
        vals = np.prod(1.0 - np.conj(inner)[:, None] * z[None, :], axis=0)
        poly = np.fft.fft(vals)[: n + 1] / npts
        coeffs = np.exp(log_scale) * phase * poly
        h = FourierSeries.from_dict({k - shift: coeffs[k] for k in range(n + 1)}, h_order)

    report = unitarity_report(g, h)
    if report.max_abs_error > tol:
        raise ComplementError(
            f"unitarity check failed: max deviation {report.max_abs_error:.3g} at x={report.argmax_x:.4f}",
            report=report,
        )
    return h


def write_roots_csv(roots, path=None) -> str:
    """Debug dump of roots as ``re,im,modulus`` rows."""
    lines = ["re,im,modulus"]
    for r in np.asarray(roots, dtype=complex):
        lines.append(f"{float(r.real)!r},{float(r.imag)!r},{float(abs(r))!r}")
    text = "\n".join(lines) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text
