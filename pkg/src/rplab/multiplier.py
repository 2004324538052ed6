"""Covariance multipliers (momentum-space symbols) and covariance assembly.

A multiplier ``v(k)`` defines a translation-invariant covariance on a grid.
Matrices are synthesized *kernel first*:

* If every axis is a circle and the symbol is periodic on the grid's
  Brillouin zone, the covariance is the exact lattice Fourier object:
  ``kernel = ifftn(symbol) / vol``.

* Otherwise the kernel is resolved along one distinguished axis (the unique
  line axis, or axis 0): for every transverse mode ``kbar`` the family
  supplies its exact one-dimensional kernel along that axis, and the
  transverse inverse Fourier transform assembles the full kernel.  A line
  axis means an infinite axis observed through a finite window, so its kernel
  values are the honest infinite-volume ones; a circle axis gets the image
  sum (periodization) of those values.

Subclass :class:`Multiplier` to add a family: implement ``symbol_on`` and,
to support grids with a line axis (and quantization), ``time_kernels``.
"""

from __future__ import annotations

import numpy as np

from . import kernels
from .errors import GridMismatch, NoDecay
from .grid import Grid


class Multiplier:
    """Base class for covariance multiplier families."""

    name = "multiplier"
    #: reference mass for dispersion comparisons; None when the family has no
    #: natural mass scale.
    mass: float | None = None

    def symbol_on(self, grid: Grid) -> np.ndarray:
        """Symbol values on the grid's momentum mode mesh (shape grid.shape)."""
        raise NotImplementedError

    def is_lattice_periodic(self, grid: Grid) -> bool:
        """Whether the symbol is periodic on the grid's Brillouin zone (so
        that mode sampling is exact)."""
        return False

    def time_kernels(self, grid: Grid, axis: int, steps: np.ndarray) -> np.ndarray:
        """Exact 1-d kernels along `axis` at integer site differences `steps`
        for every transverse mode: shape ``(len(steps), *transverse_shape)``
        where transverse_shape is grid.shape with `axis` removed."""
        raise GridMismatch(
            f"{self.name} supplies no kernel resolution along an axis; "
            "it can only be used on all-circle grids"
        )

    # -- helpers for subclasses -------------------------------------------
    @staticmethod
    def transverse_mesh(grid: Grid, axis: int, lattice: bool) -> list[np.ndarray]:
        """Mode meshes of all axes except `axis` (raw or lattice momenta)."""
        arrs = [
            (ax.lattice_momenta if lattice else ax.momenta)
            for j, ax in enumerate(grid.axes)
            if j != axis
        ]
        if not arrs:
            return []
        return list(np.meshgrid(*arrs, indexing="ij"))


class FreeField(Multiplier):
    """v(k) = 1 / (k^2 + m^2) with continuum momenta."""

    name = "free_field"

    def __init__(self, mass: float):
        if not mass > 0:
            raise ValueError(f"free field needs mass > 0, got {mass}")
        self.mass = float(mass)

    def symbol_on(self, grid: Grid) -> np.ndarray:
        ks = grid.momentum_mesh()
        return 1.0 / (sum(k * k for k in ks) + self.mass**2) + 0j

    def time_kernels(self, grid: Grid, axis: int, steps: np.ndarray) -> np.ndarray:
        kbar = self.transverse_mesh(grid, axis, lattice=False)
        mu = np.sqrt(sum(k * k for k in kbar) + self.mass**2)
        t = np.asarray(steps)[(...,) + (None,) * np.ndim(mu)] * grid.axis(axis).spacing
        return kernels.free_kernel(t, mu)


class PowerCovariance(Multiplier):
    """v(k) = 1 / (k^2 + m^2)^p with continuum momenta and integer p >= 1.

    For p >= 2 this is a covariance whose site-reflection positivity fails;
    p = 1 coincides with the free field."""

    name = "power"

    def __init__(self, mass: float, power: int):
        if not mass > 0:
            raise ValueError(f"power covariance needs mass > 0, got {mass}")
        if int(power) != power or power < 1:
            raise ValueError(f"power must be a positive integer, got {power}")
        self.mass = float(mass)
        self.power = int(power)

    def symbol_on(self, grid: Grid) -> np.ndarray:
        ks = grid.momentum_mesh()
        return (sum(k * k for k in ks) + self.mass**2) ** (-float(self.power)) + 0j

    def time_kernels(self, grid: Grid, axis: int, steps: np.ndarray) -> np.ndarray:
        kbar = self.transverse_mesh(grid, axis, lattice=False)
        mu = np.sqrt(sum(k * k for k in kbar) + self.mass**2)
        t = np.asarray(steps)[(...,) + (None,) * np.ndim(mu)] * grid.axis(axis).spacing
        return kernels.power_kernel(t, mu, self.power)


class LatticeFreeField(Multiplier):
    """v(k) = 1 / (khat^2 + m^2) with lattice momenta khat = (2/a) sin(k a/2);
    the exact nearest-neighbour difference-operator covariance."""

    name = "lattice_free_field"

    def __init__(self, mass: float):
        if not mass > 0:
            raise ValueError(f"lattice free field needs mass > 0, got {mass}")
        self.mass = float(mass)

    def is_lattice_periodic(self, grid: Grid) -> bool:
        return True

    def symbol_on(self, grid: Grid) -> np.ndarray:
        ks = grid.lattice_momentum_mesh()
        return 1.0 / (sum(k * k for k in ks) + self.mass**2) + 0j

    def time_kernels(self, grid: Grid, axis: int, steps: np.ndarray) -> np.ndarray:
        kbar = self.transverse_mesh(grid, axis, lattice=True)
        wsq = sum(k * k for k in kbar) + self.mass**2
        r = np.asarray(steps)[(...,) + (None,) * np.ndim(wsq)]
        return kernels.chain_kernel(r, wsq, grid.axis(axis).spacing)


class DriftFreeField(Multiplier):
    """Lattice free field carrying a uniform drift along one spatial axis.

    Per spatial mode kbar the kernel along axis 0 is
    ``amp * rplus^r`` (r >= 0) and ``amp * rminus^(-r)`` (r < 0) with
    ``rplus/rminus = exp(-(mu_eff +/- b) a_0)`` and drift rate
    ``b = drift * sin(k_d a_d) / a_d`` along the drift axis.  The odd drift
    rate makes the covariance genuinely complex in momentum space while
    keeping it symmetric and reflection-covariant in every axis.  Requires
    |drift| < 1 so the kernel always decays."""

    name = "drift_free_field"

    def __init__(self, mass: float, drift: float, drift_axis: int = 1):
        if not mass > 0:
            raise ValueError(f"drift free field needs mass > 0, got {mass}")
        if not abs(drift) < 1:
            raise ValueError(f"drift free field needs |drift| < 1, got {drift}")
        if drift_axis == 0:
            raise ValueError("drift axis must differ from the kernel axis 0")
        self.mass = float(mass)
        self.drift = float(drift)
        self.drift_axis = int(drift_axis)

    def is_lattice_periodic(self, grid: Grid) -> bool:
        return True

    def _transverse_params(self, grid: Grid):
        """(wsq, b) on the transverse mode mesh of axis 0."""
        if grid.ndim < 2 or not 1 <= self.drift_axis < grid.ndim:
            raise GridMismatch(
                f"drift free field needs a grid with a drift axis {self.drift_axis}"
            )
        lat = self.transverse_mesh(grid, 0, lattice=True)
        raw = self.transverse_mesh(grid, 0, lattice=False)
        wsq = sum(k * k for k in lat) + self.mass**2
        ax = grid.axis(self.drift_axis)
        kd = raw[self.drift_axis - 1]
        b = self.drift * np.sin(kd * ax.spacing) / ax.spacing
        return wsq, b

    def symbol_on(self, grid: Grid) -> np.ndarray:
        wsq, b = self._transverse_params(grid)
        a0 = grid.axis(0).spacing
        amp, rp, rm = kernels.drift_coefficients(wsq, b, a0)
        theta = grid.axis(0).momenta * a0
        ph = np.exp(-1j * theta)[(...,) + (None,) * np.ndim(wsq)]
        return a0 * amp * (1.0 / (1.0 - rp * ph) + rm / ph / (1.0 - rm / ph))

    def time_kernels(self, grid: Grid, axis: int, steps: np.ndarray) -> np.ndarray:
        if axis != 0:
            raise GridMismatch("drift free field resolves kernels along axis 0 only")
        wsq, b = self._transverse_params(grid)
        r = np.asarray(steps)[(...,) + (None,) * np.ndim(wsq)]
        return kernels.drift_kernel(r, wsq, b, grid.axis(0).spacing)


class ExplicitSymbol(Multiplier):
    """Multiplier given by an explicit callable ``fn(grid) -> ndarray`` of
    symbol values on the mode mesh.  Declared lattice-periodic symbols can be
    used on all-circle grids; nothing else is assumed about them."""

    def __init__(self, fn, lattice_periodic: bool = True, name: str = "explicit",
                 mass: float | None = None):
        self.fn = fn
        self.lattice_periodic = bool(lattice_periodic)
        self.name = name
        self.mass = mass

    def is_lattice_periodic(self, grid: Grid) -> bool:
        return self.lattice_periodic

    def symbol_on(self, grid: Grid) -> np.ndarray:
        return np.asarray(self.fn(grid), dtype=complex)


# ---------------------------------------------------------------------------
# covariance assembly
# ---------------------------------------------------------------------------

#: window growth factors tried when periodizing a resolved kernel onto a circle
_WINDOW_FACTORS = (8, 16, 32, 64, 128)
#: image tails below this relative size are accepted as machine-negligible
_WINDOW_TOL = 1e-15


def resolved_table(grid: Grid, mult: Multiplier, axis: int) -> np.ndarray:
    """Offset kernel table built by resolving `mult` along `axis`."""
    ax = grid.axis(axis)
    if ax.is_circle:
        for wfac in _WINDOW_FACTORS:
            n_win = wfac * ax.n
            tk = mult.time_kernels(grid, axis, kernels.offsets(n_win))
            # conservative: require the kernel negligible a whole period early
            tail = kernels.window_decay(tk, 0, width=ax.n)
            if tail <= _WINDOW_TOL:
                break
        else:
            raise NoDecay(
                f"kernel tail along circle axis {axis} is still {tail:.2e} of "
                f"its peak at a window of {_WINDOW_FACTORS[-1]} periods; "
                "periodization refused"
            )
        tk = kernels.fold_table(tk, 0, ax.n)
    else:
        tk = mult.time_kernels(grid, axis, kernels.offsets(ax.n))

    trans = [j for j in range(grid.ndim) if j != axis]
    if trans:
        nbar = int(np.prod([grid.shape[j] for j in trans]))
        vbar = float(np.prod([grid.extents[j] for j in trans]))
        tk = np.fft.ifftn(np.asarray(tk, dtype=complex), axes=range(1, tk.ndim))
        tk = tk * (nbar / vbar)
    table = np.moveaxis(np.asarray(tk, dtype=complex), 0, axis)
    for j in trans:
        table = np.take(table, kernels.offsets(grid.shape[j]) % grid.shape[j], axis=j)
    return table


def kernel_table(grid: Grid, mult: Multiplier, resolved_axis: int | None = None) -> np.ndarray:
    """Offset kernel table of the covariance of `mult` on `grid`.

    All-circle grids with a lattice-periodic symbol use the exact spectral
    construction; everything else resolves the kernel along one axis (the
    unique line axis, or `resolved_axis`, or axis 0).
    """
    lines = grid.line_axes()
    all_circle = not lines
    if all_circle and mult.is_lattice_periodic(grid):
        v = mult.symbol_on(grid)
        if v.shape != grid.shape:
            raise GridMismatch(f"symbol shape {v.shape} != grid shape {grid.shape}")
        ker = np.fft.ifftn(np.asarray(v, dtype=complex)) / grid.vol
        return kernels.periodic_to_offsets(ker)
    if len(lines) > 1:
        raise GridMismatch(
            "kernel resolution supports at most one line axis; "
            f"grid has line axes {lines}"
        )
    if resolved_axis is None:
        resolved_axis = lines[0] if lines else 0
    if lines and resolved_axis != lines[0]:
        raise GridMismatch(
            f"the resolved axis must be the line axis {lines[0]}, got {resolved_axis}"
        )
    return resolved_table(grid, mult, resolved_axis)


def covariance_matrix(grid: Grid, mult: Multiplier,
                      resolved_axis: int | None = None) -> np.ndarray:
    """Dense covariance matrix ``M[i, i'] = vol * K(x_i - x_i')`` of `mult`
    on `grid`."""
    return kernels.assemble(grid, kernel_table(grid, mult, resolved_axis))


def symbol_reflection_defect(grid: Grid, mult: Multiplier, axis: int = 0) -> float:
    """Reflection covariance of the symbol: max |conj(v(-theta k)) - v(k)|
    relative to max |v|, where theta flips momentum component `axis`."""
    v = mult.symbol_on(grid)
    refl = v[np.ix_(*grid.mode_reflection(axis))].conj()
    return float(np.max(np.abs(refl - v)) / np.max(np.abs(v)))
