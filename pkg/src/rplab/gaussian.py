"""Gaussian expectation machinery for (possibly complex) lattice covariances.

The field is the centred Gaussian with symmetric covariance matrix
``M[i,j] = vol * K(x_i - x_j)``; the pairing of two lattice functions is the
volume-weighted bilinear form ``C(f, g) = vol * f^T M g`` (no conjugation:
the covariance is symmetric, not Hermitian), the characteristic functional is
``S(f) = E exp(i Phi(f)) = exp(-C(f, f) / 2)``, and moments follow the
pairing (Wick) recursion.

``reflection_identity`` evaluates both sides of the algebraic identity that
links reflection positivity of the covariance to positivity of the Gaussian
state: for functions ``f_j`` and coefficients ``c_j``,

  sum_{j,j'} conj(c_j) c_j' S(f_j' - theta conj(f_j))
    = sum_{j,j'} conj(d_j) d_j' exp(<f_j, theta D f_j'>),

with ``d_j = c_j exp(-C(f_j, f_j)/2)`` and ``<f, theta D g>`` the
volume-weighted sesquilinear reflection form.  The identity is exact whenever
the covariance is reflection covariant (``P conj(M) P = M``); when the
reflection block is also positive, the right-hand side is manifestly a
positive quadratic expression.
"""

from __future__ import annotations

import numpy as np

from .errors import NotACovariance, SupportError
from .grid import Grid
from .rp_check import symmetry_defect


class GaussianField:
    """Centred Gaussian expectation for a symmetric covariance matrix."""

    def __init__(self, matrix: np.ndarray, grid: Grid, *, sym_tol: float = 1e-10):
        matrix = np.asarray(matrix)
        if matrix.shape != (grid.nsites, grid.nsites):
            raise NotACovariance(
                f"covariance shape {matrix.shape} does not match the grid"
            )
        defect = symmetry_defect(matrix)
        if defect > sym_tol:
            raise NotACovariance(
                f"covariance is not symmetric: relative defect {defect:.3e}"
            )
        self.matrix = matrix
        self.grid = grid

    # -- bilinear structure -------------------------------------------------
    def pairing(self, f: np.ndarray, g: np.ndarray) -> complex:
        """C(f, g) = vol * f^T M g (bilinear; equals the two-point moment)."""
        return complex(self.grid.vol * (f @ self.matrix @ g))

    def characteristic(self, f: np.ndarray) -> complex:
        """S(f) = exp(-C(f, f) / 2)."""
        return complex(np.exp(-0.5 * self.pairing(f, f)))

    # -- moments --------------------------------------------------------------
    def moment(self, fs) -> complex:
        """n-point moment E[Phi(f_1) ... Phi(f_n)] by the pairing recursion:
        pair the first slot with each later slot and recurse.  Odd n gives 0."""
        fs = list(fs)
        n = len(fs)
        if n == 0:
            return 1.0 + 0j
        if n % 2 == 1:
            return 0.0 + 0j
        first, rest = fs[0], fs[1:]
        total = 0.0 + 0j
        for j, g in enumerate(rest):
            total += self.pairing(first, g) * self.moment(rest[:j] + rest[j + 1:])
        return total

    def moment_single(self, f: np.ndarray, n: int) -> complex:
        """E[Phi(f)^n] in closed form: (n-1)!! q^{n/2} for even n, else 0."""
        if n % 2 == 1:
            return 0.0 + 0j
        q = self.pairing(f, f)
        value = 1.0 + 0j
        for m in range(1, n, 2):
            value *= m
        return value * q ** (n // 2)

    # -- reflection structure ---------------------------------------------
    def reflection_form(self, f: np.ndarray, g: np.ndarray, axis: int = 0) -> complex:
        """<f, theta D g> = vol * conj(f)^T (P M) g."""
        refl = self.grid.reflection(axis)
        return complex(self.grid.vol * (f.conj() @ self.matrix[refl] @ g))

    def reflection_identity(self, fs, cs, axis: int = 0) -> tuple[complex, complex]:
        """Both sides of the reflection identity (see module docstring)."""
        fs = [np.asarray(f, dtype=complex) for f in fs]
        cs = np.asarray(cs, dtype=complex)
        refl = self.grid.reflection(axis)
        lhs = 0.0 + 0j
        for j, fj in enumerate(fs):
            theta_fj = fj.conj()[refl]
            for jp, fjp in enumerate(fs):
                lhs += cs[j].conjugate() * cs[jp] * self.characteristic(fjp - theta_fj)
        ds = np.array(
            [c * np.exp(-0.5 * self.pairing(f, f)) for c, f in zip(cs, fs)]
        )
        rhs = 0.0 + 0j
        for j, fj in enumerate(fs):
            for jp, fjp in enumerate(fs):
                rhs += ds[j].conjugate() * ds[jp] * np.exp(self.reflection_form(fj, fjp, axis))
        return lhs, rhs

    def positivity_matrix(self, fs, axis: int = 0,
                          require_positive_support: bool = True) -> np.ndarray:
        """Gram-type matrix G[j, j'] = S(f_j' - theta conj(f_j)); its positive
        semidefiniteness is the state-level reflection positivity statement.
        Functions must live on the positive half of the reflection axis."""
        fs = [np.asarray(f, dtype=complex) for f in fs]
        if require_positive_support:
            pos = set(self.grid.positive_half(axis).tolist())
            for j, f in enumerate(fs):
                bad = np.nonzero(f)[0]
                if any(int(i) not in pos for i in bad):
                    raise SupportError(
                        f"function {j} has support outside the positive half "
                        f"of axis {axis}"
                    )
        refl = self.grid.reflection(axis)
        out = np.empty((len(fs), len(fs)), dtype=complex)
        for j, fj in enumerate(fs):
            theta_fj = fj.conj()[refl]
            for jp, fjp in enumerate(fs):
                out[j, jp] = self.characteristic(fjp - theta_fj)
        return out


def random_positive_half(matrix: np.ndarray, grid: Grid, axis: int, count: int,
                         rng: np.random.Generator, target: float = 0.8) -> list[np.ndarray]:
    """Random complex functions supported on the positive half of `axis`,
    scaled so |C(f, f)| is about `target` (keeps exponentials well inside
    double precision)."""
    pos = grid.positive_half(axis)
    out = []
    for _ in range(count):
        f = np.zeros(grid.nsites, dtype=complex)
        f[pos] = rng.normal(size=pos.size) + 1j * rng.normal(size=pos.size)
        q = abs(grid.vol * (f @ matrix @ f))
        if q > 0:
            f *= (target / q) ** 0.5
        out.append(f)
    return out
