"""Shift and scale a spectrum in [0, 1] onto the approximation window.

Run with ``python demos/04_remapped_spectrum.py``.
"""

import math

import numpy as np

from fqsp import TargetFunction, run_pipeline
from fqsp.qsim import remap_interval

rng = np.random.default_rng(1)
lams = np.sort(rng.uniform(0, 1, size=8))
lams[0], lams[-1] = 0.0, 1.0
V, _ = np.linalg.qr(rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8)))
H = V @ np.diag(lams) @ V.conj().T

t, Lambda = remap_interval(0.0, 1.0, math.pi / 2)
print(f"oracle time t = {t:.6f}, phase offset Lambda = {Lambda:.6f}")
print(f"lambda = 0 -> {0 * t + Lambda:+.6f}, lambda = 1 -> {1 * t + Lambda:+.6f}")

f = TargetFunction.exponential(3.0)
res = run_pipeline(H, f, 1e-3, interval=(0.0, 1.0), x0=math.pi / 2)
print(f"q = {res.q}, alpha = {res.alpha:.4f}, error vs alpha f(H) = {res.err_vs_target:.2e}")
