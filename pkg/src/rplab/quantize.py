"""Transfer-operator extraction from reflection-positive time kernels.

For every transverse momentum sector ``kbar`` (one mode of each circle axis
transverse to the time axis), the positive-time slab functions
``delta_{t_i}``, ``t_i = (i + 1/2) a_0``, carry the Gram form

    G[i, j] = K(t_i + t_j; kbar)

(the one-dimensional time kernel of the covariance, evaluated across the
reflection).  When the Gram matrix is positive semidefinite, its numerical
range defines the quotient Hilbert space of the sector; time translation by
``s`` steps compresses to the transfer matrix

    R(s) = B* H_s B,    H_s[i, j] = K(t_i + t_j + s a_0; kbar),

with ``B`` the whitening map of the kept Gram eigenpairs.  A healthy
quantization has ``|R(1)| <= 1`` (contraction), ``R(1)^2 = R(2)``
(semigroup), and a ground-state energy per sector
``h = -log lambda_max(R(1)) / a_0`` that tracks the dispersion reference
``sqrt(khat_bar^2 + m^2)`` ever better as the time spacing is refined.

The time axis must be a line axis: a periodized (circle) time direction
carries an order-one wraparound branch in its kernel, which adds an expanding
direction to the Gram form and makes the compression no contraction; the
construction therefore refuses it.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .errors import (
    GridMismatch,
    HamiltonianUndefined,
    NoSpatialAxis,
    NotACovariance,
    ZeroSpace,
)
from .grid import Grid
from .multiplier import Multiplier


@dataclass
class ModeRecord:
    """Per-sector quantization figures."""

    kbar: tuple[float, ...]        # transverse momentum components (raw)
    quotient_dim: int
    min_h: float                   # ground-state energy of the sector
    dispersion_ref: float          # sqrt(lattice kbar^2 + mass_ref^2)
    rel_error: float               # |min_h - ref| / ref
    contraction_norm: float        # |R(1)|
    semigroup_defect: float        # |R(1) R(1) - R(2)|

    def csv_row(self) -> list:
        return [
            " ".join(f"{k:.12g}" for k in self.kbar),
            self.quotient_dim,
            f"{self.min_h:.17g}",
            f"{self.dispersion_ref:.17g}",
            f"{self.rel_error:.17g}",
        ]


@dataclass
class QuantizationResult:
    modes: list[ModeRecord]
    time_axis: int
    rank_tol: float
    tol: float

    CSV_HEADER = ["kbar", "quotient_dim", "min_h", "dispersion_ref", "rel_error"]

    @property
    def contractive(self) -> bool:
        return all(m.contraction_norm <= 1.0 + self.tol for m in self.modes)

    @property
    def semigroup_ok(self) -> bool:
        return all(m.semigroup_defect <= self.tol for m in self.modes)

    @property
    def max_rel_error(self) -> float:
        return max(m.rel_error for m in self.modes)

    def to_dict(self) -> dict:
        return {
            "time_axis": self.time_axis,
            "rank_tol": self.rank_tol,
            "tol": self.tol,
            "contractive": self.contractive,
            "semigroup_ok": self.semigroup_ok,
            "max_rel_error": self.max_rel_error,
            "modes": [
                {
                    "kbar": list(m.kbar),
                    "quotient_dim": m.quotient_dim,
                    "min_h": m.min_h,
                    "dispersion_ref": m.dispersion_ref,
                    "rel_error": m.rel_error,
                    "contraction_norm": m.contraction_norm,
                    "semigroup_defect": m.semigroup_defect,
                }
                for m in self.modes
            ],
        }


def quantize(grid: Grid, mult: Multiplier, *, time_axis: int = 0,
             rank_tol: float = 1e-10, tol: float = 1e-8,
             mass_ref: float | None = None) -> QuantizationResult:
    """Quantize the covariance of `mult` sector by sector (see module doc)."""
    tax = grid.axis(time_axis)
    if tax.is_circle:
        raise GridMismatch(
            "quantization needs a line time axis: a periodized time kernel "
            "carries a wraparound branch that breaks the transfer contraction"
        )
    trans = [j for j in range(grid.ndim) if j != time_axis]
    if not trans:
        raise NoSpatialAxis(
            "quantization needs at least one transverse axis to label sectors"
        )
    for j in trans:
        if not grid.axis(j).is_circle:
            raise GridMismatch(f"transverse axis {j} must be a circle axis")
    if mass_ref is None:
        mass_ref = mult.mass
    if mass_ref is None:
        raise HamiltonianUndefined(
            "no reference mass available for the dispersion comparison; "
            "pass mass_ref explicitly"
        )

    a0 = tax.spacing
    nplus = tax.n // 2
    # kernel values at 1 .. 2 nplus + 2 steps across the reflection
    steps = np.arange(1, 2 * nplus + 3)
    kern = mult.time_kernels(grid, time_axis, steps)
    kern = kern.reshape(steps.size, -1)  # (steps, sectors) in C order

    raw = [grid.axis(j).momenta for j in trans]
    lat = [grid.axis(j).lattice_momenta for j in trans]
    i = np.arange(nplus)
    ij = i[:, None] + i[None, :]  # t_i + t_j = (i + j + 1) a0

    modes: list[ModeRecord] = []
    for sector, mix in enumerate(product(*[range(grid.axis(j).n) for j in trans])):
        k = kern[:, sector]
        gram = k[ij]          # steps i + j + 1
        h1 = k[ij + 1]        # one more time step
        h2 = k[ij + 2]
        norm = float(np.linalg.norm(gram, 2))
        if norm == 0.0:
            raise ZeroSpace(f"sector {mix}: Gram form vanishes")
        herm = float(np.linalg.norm(gram - gram.conj().T, 2)) / norm
        if herm > tol:
            raise NotACovariance(
                f"sector {mix}: Gram form is not Hermitian (defect {herm:.3e})"
            )
        w, u = np.linalg.eigh((gram + gram.conj().T) / 2)
        if w[0] < -tol * w[-1]:
            raise NotACovariance(
                f"sector {mix}: Gram form is not positive "
                f"(min eig {w[0]:.3e} vs max {w[-1]:.3e}); "
                "time reflection positivity fails"
            )
        keep = w > rank_tol * w[-1]
        dim = int(np.count_nonzero(keep))
        if dim == 0:
            raise ZeroSpace(f"sector {mix}: quotient space has rank zero")
        basis = u[:, keep] / np.sqrt(w[keep])
        r1 = basis.conj().T @ h1 @ basis
        r2 = basis.conj().T @ h2 @ basis
        contraction = float(np.linalg.norm(r1, 2))
        semigroup = float(np.linalg.norm(r1 @ r1 - r2, 2))
        lam = np.linalg.eigvals(r1)
        lam_max = float(np.max(lam.real))
        if lam_max <= 0.0:
            raise HamiltonianUndefined(
                f"sector {mix}: transfer matrix has no positive eigenvalue"
            )
        min_h = -np.log(lam_max) / a0
        kbar = tuple(float(raw[t][m]) for t, m in enumerate(mix))
        khat_sq = sum(float(lat[t][m]) ** 2 for t, m in enumerate(mix))
        ref = float(np.sqrt(khat_sq + mass_ref**2))
        modes.append(
            ModeRecord(
                kbar=kbar,
                quotient_dim=dim,
                min_h=float(min_h),
                dispersion_ref=ref,
                rel_error=abs(min_h - ref) / ref,
                contraction_norm=contraction,
                semigroup_defect=semigroup,
            )
        )
    return QuantizationResult(modes=modes, time_axis=time_axis,
                              rank_tol=rank_tol, tol=tol)
