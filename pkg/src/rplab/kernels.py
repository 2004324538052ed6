"""Closed-form one-dimensional covariance kernels and kernel-table utilities.

All covariance matrices in this package are assembled from *offset tables*: an
array ``T`` whose axis ``j`` has length ``2 n_j - 1`` and holds kernel values
at site differences ``r_j in [-(n_j - 1), n_j - 1]`` (entry ``r + n_j - 1``).
For a circle axis the table is periodic in ``r`` with period ``n_j``; for a
line axis it simply decays.  The dense covariance matrix is then
``M[i, i'] = vol * T[idx(i) - idx(i')]``.

The kernels below are exact inverse Fourier transforms of their symbols:

``free_kernel``     exp(-mu |t|) / (2 mu)            <->  1 / (k^2 + mu^2)
``power_kernel``    poly(mu |t|) exp(-mu |t|)       <->  1 / (k^2 + mu^2)^p
``chain_kernel``    amp * ratio^|r|  on the integer lattice with spacing a,
                    cosh(mu_eff a) = 1 + w^2 a^2 / 2  <->  1 / (khat^2 + w^2)
``drift_kernel``    amp * rplus^r (r >= 0), amp * rminus^(-r) (r < 0): the
                    chain kernel of a field carrying a uniform drift b.
"""

from __future__ import annotations

from math import comb, factorial

import numpy as np

from .errors import GridMismatch, NoDecay, OracleTooLarge
from .grid import Grid

# Dense matrices above this many sites are refused (N^2 complex entries).
MAX_DENSE_SITES = 4600


def offsets(n: int) -> np.ndarray:
    """Site differences covered by an offset table of an n-site axis."""
    return np.arange(-(n - 1), n)


# ---------------------------------------------------------------------------
# closed-form kernels
# ---------------------------------------------------------------------------

def free_kernel(t: np.ndarray, mu) -> np.ndarray:
    """exp(-mu |t|) / (2 mu); inverse transform of 1/(k^2 + mu^2)."""
    t = np.asarray(t, dtype=float)
    mu = np.asarray(mu, dtype=float)
    return np.exp(-mu * np.abs(t)) / (2.0 * mu)


def power_kernel(t: np.ndarray, mu, p: int) -> np.ndarray:
    """Inverse transform of 1/(k^2 + mu^2)^p for integer p >= 1.

    K_p(t) = exp(-mu s) / ((2 mu)^(2p-1) (p-1)!) *
             sum_{j=0}^{p-1} (2p-2-j)! / (j! (p-1-j)!) (2 mu s)^j,  s = |t|.
    """
    if int(p) != p or p < 1:
        raise ValueError(f"power must be a positive integer, got {p}")
    p = int(p)
    t = np.asarray(t, dtype=float)
    mu = np.asarray(mu, dtype=float)
    s = 2.0 * mu * np.abs(t)
    acc = np.zeros(np.broadcast(s, mu).shape)
    for j in range(p - 1, -1, -1):
        c = factorial(2 * p - 2 - j) / (factorial(j) * factorial(p - 1 - j))
        acc = acc * s + c
    return np.exp(-np.abs(t) * mu) * acc / ((2.0 * mu) ** (2 * p - 1) * factorial(p - 1))


def chain_rate(wsq, spacing: float):
    """Decay rate mu_eff of the nearest-neighbour chain with squared mass wsq:
    cosh(mu_eff a) = 1 + wsq a^2 / 2."""
    wsq = np.asarray(wsq, dtype=float)
    if np.any(wsq <= 0):
        raise NoDecay("chain kernel needs a strictly positive squared mass")
    return np.arccosh(1.0 + wsq * spacing * spacing / 2.0) / spacing


def chain_coefficients(wsq, spacing: float):
    """(amp, ratio, mu_eff) of the chain kernel amp * ratio^|r|."""
    mu = chain_rate(wsq, spacing)
    amp = spacing / (2.0 * np.sinh(mu * spacing))
    return amp, np.exp(-mu * spacing), mu


def chain_kernel(r: np.ndarray, wsq, spacing: float) -> np.ndarray:
    """Exact kernel of 1/(khat^2 + wsq) on the infinite chain, at integer
    site differences r."""
    amp, ratio, _ = chain_coefficients(wsq, spacing)
    return amp * ratio ** np.abs(np.asarray(r))


def drift_coefficients(wsq, drift_b, spacing: float):
    """(amp, rplus, rminus) of the drifted chain kernel.

    rplus = exp(-(mu_eff + b) a), rminus = exp(-(mu_eff - b) a); both must be
    inside the unit disk for the kernel to decay, i.e. |b| < mu_eff.
    """
    amp, _, mu = chain_coefficients(wsq, spacing)
    b = np.asarray(drift_b, dtype=float)
    if np.any(np.abs(b) >= mu):
        raise NoDecay("drift rate reaches the decay rate; kernel would not decay")
    return amp, np.exp(-(mu + b) * spacing), np.exp(-(mu - b) * spacing)


def drift_kernel(r: np.ndarray, wsq, drift_b, spacing: float) -> np.ndarray:
    """Drifted chain kernel: amp * rplus^r for r >= 0, amp * rminus^(-r) else."""
    amp, rp, rm = drift_coefficients(wsq, drift_b, spacing)
    r = np.asarray(r)
    return np.where(r >= 0, amp * rp ** np.abs(r), amp * rm ** np.abs(r))


# ---------------------------------------------------------------------------
# table machinery
# ---------------------------------------------------------------------------

def fold_table(table: np.ndarray, axis: int, n_new: int) -> np.ndarray:
    """Periodize an offset table along `axis` to period ``n_new`` sites.

    Every output offset ``s`` receives the sum of the input values at *all*
    offsets ``s + w n_new`` available in the input window, so the folded
    table is exactly periodic; the only error is the omitted tail outside
    the window.
    """
    n_old = (table.shape[axis] + 1) // 2
    if n_new > n_old:
        raise GridMismatch(
            f"cannot fold to {n_new} sites: table only covers {n_old}"
        )
    out_off = np.arange(-(n_new - 1), n_new)
    out_shape = list(table.shape)
    out_shape[axis] = 2 * n_new - 1
    out = np.zeros(out_shape, dtype=table.dtype)
    wmax = (n_old - 1 + n_new - 1) // n_new
    for w in range(-wmax, wmax + 1):
        src_off = out_off + w * n_new
        ok = (src_off >= -(n_old - 1)) & (src_off <= n_old - 1)
        if not ok.any():
            continue
        src = np.take(table, src_off[ok] + n_old - 1, axis=axis)
        sel = [slice(None)] * table.ndim
        sel[axis] = ok
        out[tuple(sel)] += src
    return out


def window_decay(table: np.ndarray, axis: int, width: int = 4) -> float:
    """Relative size of the kernel at the window edge.

    The images omitted by :func:`fold_table` start just outside the window,
    so for a kernel decaying in |offset| their magnitude is bounded by the
    values at the outermost `width` offsets on each side.  Returns
    ``max |edge| / max |table|``.
    """
    n_old = (table.shape[axis] + 1) // 2
    edge = min(width, n_old)
    lead = np.take(table, np.arange(edge), axis=axis)
    trail = np.take(table, np.arange(table.shape[axis] - edge, table.shape[axis]), axis=axis)
    top = float(np.max(np.abs(table)))
    if top == 0.0:
        return 0.0
    return float(max(np.max(np.abs(lead)), np.max(np.abs(trail))) / top)


def periodic_to_offsets(periodic: np.ndarray) -> np.ndarray:
    """Expand a kernel given on residues (shape n_1 x ... x n_d, value at
    difference r mod n) into the offset-table layout."""
    out = periodic
    for axis, n in enumerate(periodic.shape):
        out = np.take(out, offsets(n) % n, axis=axis)
    return out


def assemble(grid: Grid, table: np.ndarray) -> np.ndarray:
    """Dense covariance matrix ``M[i, i'] = vol * table[idx(i) - idx(i')]``
    from an offset table (periodic along circle axes)."""
    expect = tuple(2 * n - 1 for n in grid.shape)
    if table.shape != expect:
        raise GridMismatch(f"offset table shape {table.shape} != expected {expect}")
    if grid.nsites > MAX_DENSE_SITES:
        raise OracleTooLarge(
            f"dense covariance for {grid.nsites} sites exceeds the cap of "
            f"{MAX_DENSE_SITES}; use a per-mode method instead"
        )
    idx = grid.site_index
    flat = table.reshape(-1)
    lin = np.zeros((grid.nsites, grid.nsites), dtype=np.int64)
    stride = 1
    for j in range(grid.ndim - 1, -1, -1):
        n = grid.shape[j]
        d = idx[j][:, None] - idx[j][None, :] + (n - 1)
        lin += d * stride
        stride *= 2 * n - 1
    return grid.vol * flat[lin]


def bz_refined_table(symbol_1d, axis_n: int, spacing: float, refine: int = 32) -> np.ndarray:
    """Offset table of a lattice-periodic 1-d symbol on the infinite chain.

    Samples the symbol on a `refine`-times finer momentum grid over one
    Brillouin zone and inverse-transforms; the quadrature error decays
    geometrically in `refine` for symbols analytic on the zone.
    """
    m = refine * (2 * axis_n - 1)
    k = 2 * np.pi * np.fft.fftfreq(m, d=spacing)
    vals = np.asarray(symbol_1d(k), dtype=complex)
    ker = np.fft.ifft(vals) / spacing
    return np.take(ker, offsets(axis_n) % m)
