"""Axis periodization: fold a covariance kernel onto a shorter circle.

Folding replaces a line axis (a finite window into an infinite axis) by a
circle of a smaller extent: every folded kernel value is the image sum of the
window values over shifts by the new period, taken per offset so the result
is exactly periodic.  The only approximation is the tail of the kernel
outside the window; ``decay_tol`` bounds the accepted relative size of the
kernel near the window edge, and a kernel that is still large there raises
:class:`~rplab.errors.NoDecay`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import GridMismatch, NoDecay
from .grid import CIRCLE, Axis, Grid
from .multiplier import Multiplier, kernel_table


@dataclass
class CompactifyResult:
    """Folded covariance: the new grid, its dense matrix, and bookkeeping."""

    grid: Grid
    matrix: np.ndarray
    axis: int
    images: int            # number of whole periods the window covered
    edge_ratio: float      # relative kernel magnitude at the window edge


def compactify(grid: Grid, mult: Multiplier, axis: int, new_extent: float,
               *, decay_tol: float = 1e-8) -> CompactifyResult:
    """Fold `axis` (a line axis) of the covariance of `mult` onto a circle of
    extent `new_extent`, which must be an even multiple of the axis spacing
    no larger than the window."""
    ax = grid.axis(axis)
    if ax.is_circle:
        raise GridMismatch(f"axis {axis} is already a circle; nothing to fold")
    n_new_f = new_extent / ax.spacing
    n_new = int(round(n_new_f))
    if abs(n_new_f - n_new) > 1e-9 or n_new < 2 or n_new % 2 != 0:
        raise GridMismatch(
            f"new extent {new_extent} is not an even multiple of the axis "
            f"spacing {ax.spacing}"
        )
    if n_new > ax.n:
        raise GridMismatch(
            f"new extent {new_extent} exceeds the available window {ax.extent}"
        )

    table = kernel_table(grid, mult)
    edge = kernels.window_decay(table, axis)
    if edge > decay_tol:
        raise NoDecay(
            f"kernel is still {edge:.2e} of its peak within one new period of "
            f"the window edge; enlarge the window or accept a larger decay_tol"
        )
    folded = kernels.fold_table(table, axis, n_new)

    new_axes = list(grid.axes)
    new_axes[axis] = Axis(CIRCLE, n_new, ax.spacing)
    new_grid = Grid(tuple(new_axes))
    matrix = kernels.assemble(new_grid, folded)
    return CompactifyResult(
        grid=new_grid,
        matrix=matrix,
        axis=axis,
        images=(ax.n - 1 + n_new - 1) // n_new * 2 + 1,
        edge_ratio=edge,
    )
