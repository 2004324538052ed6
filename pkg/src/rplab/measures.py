"""Diagnostics for complex Gaussian weights.

A complex multiplier ``v = Kre + i Lim`` with positive real part defines a
Gaussian weight whose normalization, relative to the real-part theory, picks
up one factor ``sqrt(1 + lambda(k)^2)`` per sampled mode, where
``lambda = Lim / Kre``.  This module computes that growth (and flags
divergence), the exact real/imaginary splitting of the inverse symbol, and
coarse continuum bounds used in time-zero estimates:

* ``normalization_growth``: z = prod_k (1 + lambda_k^2)^(1/2), via log1p for
  stability; ``diverged`` is set when log z exceeds the floating-point range.
* ``decompose``: 1 / v = 1 / g - i y with g = (Kre^2 + Lim^2) / Kre and
  y = Lim / (Kre^2 + Lim^2); exact whenever Kre > 0.
* ``estimate_bounds``: (M1, M2, M3) with M1 <= Kre (k^2 + m_ref^2) <= M2 and
  |lambda| <= M3 over the grid's modes.
* ``time_zero_ratio``: the mode-sum time-zero bound
  (1/ext_0) sum_k0 |v| <= sqrt(1 + M3^2) M2 / (2 sqrt(kbar^2 + m_ref^2)),
  weighted by |h(kbar)|^2 over transverse modes; the ratio tends to 1 from
  below for the free field as the time axis is refined.
* ``hadamard_exponential_gap``: min eig of (exp entrywise of K) - I for a
  Hermitian K; positivity of this gap is a *claim to test*, not a theorem —
  it genuinely fails for some positive semidefinite K, and the function
  simply reports what it finds.
"""

from __future__ import annotations

import numpy as np

from .errors import HermitianPartNotPositive
from .grid import Grid
from .multiplier import Multiplier


def normalization_growth(lambdas, *, log_threshold: float = 709.0) -> dict:
    """Growth factor z = prod (1 + lambda^2)^(1/2) over the given mode ratios."""
    lam = np.asarray(lambdas, dtype=float).reshape(-1)
    log_z = float(0.5 * np.sum(np.log1p(lam * lam)))
    diverged = bool(log_z > log_threshold)
    return {
        "z": float(np.inf) if diverged else float(np.exp(log_z)),
        "log_z": log_z,
        "modes": int(lam.size),
        "diverged": diverged,
    }


def mode_lambda(grid: Grid, mult: Multiplier) -> np.ndarray:
    """lambda(k) = Im v / Re v on the grid's mode mesh (Re v must be > 0)."""
    v = mult.symbol_on(grid)
    if np.min(v.real) <= 0:
        raise HermitianPartNotPositive(
            f"symbol real part reaches {np.min(v.real):.3e}; "
            "the ratio Im/Re is not a usable mode weight"
        )
    return v.imag / v.real


def decompose(symbol: np.ndarray) -> tuple[np.ndarray, np.ndarray, float]:
    """Split 1/v = 1/g - i y; returns (g, y, identity defect)."""
    v = np.asarray(symbol, dtype=complex)
    kre, lim = v.real, v.imag
    if np.min(kre) <= 0:
        raise HermitianPartNotPositive(
            f"symbol real part reaches {np.min(kre):.3e}; splitting undefined"
        )
    g = (kre * kre + lim * lim) / kre
    y = lim / (kre * kre + lim * lim)
    defect = float(np.max(np.abs(1.0 / v - (1.0 / g - 1j * y))))
    return g, y, defect


def estimate_bounds(grid: Grid, mult: Multiplier,
                    mass_ref: float | None = None) -> tuple[float, float, float]:
    """(M1, M2, M3): range of Re v * (k^2 + m_ref^2) and the max of |Im/Re|
    over the grid's raw momentum modes."""
    if mass_ref is None:
        mass_ref = mult.mass
    if mass_ref is None:
        raise ValueError("no reference mass available; pass mass_ref")
    v = mult.symbol_on(grid)
    if np.min(v.real) <= 0:
        raise HermitianPartNotPositive("symbol real part is not positive")
    ks = grid.momentum_mesh()
    scale = sum(k * k for k in ks) + mass_ref**2
    weighted = v.real * scale
    lam = np.abs(v.imag / v.real)
    return float(np.min(weighted)), float(np.max(weighted)), float(np.max(lam))


def time_zero_ratio(grid: Grid, mult: Multiplier, weights: np.ndarray | None = None,
                    *, time_axis: int = 0, mass_ref: float | None = None) -> dict:
    """Mode-sum time-zero bound (see module docstring).

    `weights` are complex amplitudes h(kbar) over the transverse mode mesh
    (entering as |h|^2; ones by default).  Returns lhs, rhs and their ratio;
    lhs <= rhs is the bound.
    """
    if mass_ref is None:
        mass_ref = mult.mass
    if mass_ref is None:
        raise ValueError("no reference mass available; pass mass_ref")
    m1, m2, m3 = estimate_bounds(grid, mult, mass_ref)
    v = mult.symbol_on(grid)
    ext0 = grid.axis(time_axis).extent
    trans = [j for j in range(grid.ndim) if j != time_axis]
    kbar = np.meshgrid(*[grid.axis(j).momenta for j in trans], indexing="ij") if trans else []
    mu = np.sqrt(sum(k * k for k in kbar) + mass_ref**2) if trans else np.sqrt(mass_ref**2)
    if weights is None:
        w = np.ones_like(np.asarray(mu, dtype=float))
    else:
        w = np.abs(np.asarray(weights, dtype=complex)) ** 2
    time_sums = np.sum(np.abs(v), axis=time_axis) / ext0
    lhs = float(np.sum(w * time_sums))
    rhs = float(np.sqrt(1.0 + m3 * m3) * m2 * np.sum(w / (2.0 * mu)))
    return {"lhs": lhs, "rhs": rhs, "ratio": lhs / rhs, "bounds": [m1, m2, m3]}


def hadamard_exponential_gap(kernel: np.ndarray) -> float:
    """min eig of exp(K) (entrywise) minus the identity, for Hermitian K."""
    k = np.asarray(kernel)
    e = np.exp(k)
    w = np.linalg.eigvalsh((e + e.conj().T) / 2 - np.eye(k.shape[0]))
    return float(w[0])
