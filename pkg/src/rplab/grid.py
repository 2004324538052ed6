"""Finite reflection-symmetric lattices.

An :class:`Axis` is a one-dimensional arrangement of ``n`` sites with spacing
``a`` placed at half-offset positions ``x_i = (i + 1/2) a - ext/2`` where
``ext = n a``.  The site set is symmetric under ``x -> -x`` and contains no
fixed point, so the reflection is the index reversal ``i -> n - 1 - i`` and
the "positive half" (``x > 0``) is exactly the upper half of the indices.

An axis is either a ``"circle"`` (the sites discretize a circle of
circumference ``ext``; kernels are periodic) or a ``"line"`` (the sites are a
finite observation window into an infinite axis; kernels decay).

A :class:`Grid` is a tensor product of axes.  Sites are enumerated in C order
of their index tuples.  Momentum modes per axis are ``k_m = 2 pi f_m / ext``
with integer frequencies ``f_m`` in FFT order; ``lattice_momenta`` are the
associated difference-operator momenta ``(2/a) sin(k a / 2)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import GridMismatch

LINE = "line"
CIRCLE = "circle"


@dataclass(frozen=True)
class Axis:
    """One lattice axis: ``kind`` is ``"line"`` or ``"circle"``, ``n`` the
    (even) number of sites, ``spacing`` the lattice constant."""

    kind: str
    n: int
    spacing: float

    def __post_init__(self) -> None:
        if self.kind not in (LINE, CIRCLE):
            raise GridMismatch(f"axis kind must be 'line' or 'circle', got {self.kind!r}")
        if self.n < 2 or self.n % 2 != 0:
            raise GridMismatch(f"axis needs an even number of sites >= 2, got n={self.n}")
        if not self.spacing > 0:
            raise GridMismatch(f"axis spacing must be positive, got {self.spacing}")

    @property
    def extent(self) -> float:
        return self.n * self.spacing

    @property
    def is_circle(self) -> bool:
        return self.kind == CIRCLE

    @cached_property
    def coords(self) -> np.ndarray:
        """Site positions, symmetric about 0 with no site at 0."""
        return (np.arange(self.n) + 0.5) * self.spacing - self.extent / 2

    @cached_property
    def frequencies(self) -> np.ndarray:
        """Integer FFT frequencies f_m (FFT ordering)."""
        return np.fft.fftfreq(self.n, d=1.0 / self.n).astype(int)

    @cached_property
    def momenta(self) -> np.ndarray:
        """Momentum modes k_m = 2 pi f_m / extent (FFT ordering)."""
        return 2 * np.pi * self.frequencies / self.extent

    @cached_property
    def lattice_momenta(self) -> np.ndarray:
        """Difference-operator momenta khat_m = (2/a) sin(k_m a / 2)."""
        return 2 * np.sin(self.momenta * self.spacing / 2) / self.spacing

    @cached_property
    def reflection(self) -> np.ndarray:
        """Index permutation implementing x -> -x (an involution without
        fixed points)."""
        return np.arange(self.n)[::-1].copy()

    @cached_property
    def mode_negation(self) -> np.ndarray:
        """Index permutation sending mode m to the mode with frequency
        ``-f_m`` (mod n); the half-sized mode is self-paired."""
        return (-np.arange(self.n)) % self.n

    def dft_matrix(self) -> np.ndarray:
        """Unitary DFT adapted to the half-offset sites.

        Returns F with ``F[m, i] = phase_m exp(-2 pi i f_m i / n) / sqrt(n)``
        where ``phase_m = exp(i pi f_m (n - 1) / n)``, i.e. the matrix of
        ``f -> (1/sqrt(n)) sum_i f(x_i) exp(-i k_m x_i)``.
        """
        f = self.frequencies
        phase = np.exp(1j * np.pi * f * (self.n - 1) / self.n)
        i = np.arange(self.n)
        return phase[:, None] * np.exp(-2j * np.pi * np.outer(f, i) / self.n) / np.sqrt(self.n)


@dataclass(frozen=True)
class Grid:
    """Tensor product of axes; sites enumerated in C order."""

    axes: tuple[Axis, ...]

    def __post_init__(self) -> None:
        if not self.axes:
            raise GridMismatch("a grid needs at least one axis")
        object.__setattr__(self, "axes", tuple(self.axes))

    # -- constructors -----------------------------------------------------
    @staticmethod
    def of(*axes: Axis) -> "Grid":
        return Grid(tuple(axes))

    @staticmethod
    def line(n: int, spacing: float) -> "Grid":
        return Grid((Axis(LINE, n, spacing),))

    @staticmethod
    def circle(n: int, spacing: float) -> "Grid":
        return Grid((Axis(CIRCLE, n, spacing),))

    # -- basic geometry ----------------------------------------------------
    @property
    def ndim(self) -> int:
        return len(self.axes)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(ax.n for ax in self.axes)

    @property
    def nsites(self) -> int:
        return int(np.prod(self.shape))

    @property
    def vol(self) -> float:
        """Volume of one lattice cell (product of spacings); the quadrature
        weight of every site sum."""
        return float(np.prod([ax.spacing for ax in self.axes]))

    @property
    def extents(self) -> tuple[float, ...]:
        return tuple(ax.extent for ax in self.axes)

    def axis(self, j: int) -> Axis:
        if not 0 <= j < self.ndim:
            raise GridMismatch(f"axis {j} out of range for a {self.ndim}-axis grid")
        return self.axes[j]

    def line_axes(self) -> list[int]:
        return [j for j, ax in enumerate(self.axes) if not ax.is_circle]

    # -- site bookkeeping ---------------------------------------------------
    @cached_property
    def site_index(self) -> np.ndarray:
        """Array (ndim, nsites): index tuple of every site in C order."""
        return np.stack(np.unravel_index(np.arange(self.nsites), self.shape))

    def coords(self) -> np.ndarray:
        """Array (nsites, ndim) of site positions."""
        return np.stack(
            [self.axes[j].coords[self.site_index[j]] for j in range(self.ndim)], axis=1
        )

    def reflection(self, axis: int = 0) -> np.ndarray:
        """Site permutation reversing the given axis (x_axis -> -x_axis)."""
        ax = self.axis(axis)
        idx = self.site_index.copy()
        idx[axis] = ax.n - 1 - idx[axis]
        return np.ravel_multi_index(tuple(idx), self.shape)

    def positive_half(self, axis: int = 0) -> np.ndarray:
        """Sites with positive coordinate along the given axis."""
        ax = self.axis(axis)
        return np.where(self.site_index[axis] >= ax.n // 2)[0]

    # -- momentum bookkeeping -----------------------------------------------
    def momentum_mesh(self) -> list[np.ndarray]:
        """ndim arrays of shape `shape` holding each momentum component."""
        return list(np.meshgrid(*[ax.momenta for ax in self.axes], indexing="ij"))

    def lattice_momentum_mesh(self) -> list[np.ndarray]:
        return list(np.meshgrid(*[ax.lattice_momenta for ax in self.axes], indexing="ij"))

    def mode_reflection(self, axis: int = 0) -> tuple[np.ndarray, ...]:
        """Per-axis index maps realizing k -> -theta_axis k on the mode mesh,
        i.e. negation of every momentum component except `axis`."""
        self.axis(axis)
        return tuple(
            np.arange(ax.n) if j == axis else ax.mode_negation
            for j, ax in enumerate(self.axes)
        )

    def describe(self) -> dict:
        """JSON-friendly description of the grid."""
        return {
            "axes": [
                {"kind": ax.kind, "n": ax.n, "spacing": ax.spacing} for ax in self.axes
            ],
            "nsites": self.nsites,
        }
