"""DEM conditioning, D8 routing, flow accumulation and the RUSLE LS factor."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import HydrologyError, ParameterError
from .grid import Grid, assert_aligned

# ESRI flow-direction codes, indexed like the kernels (E, SE, S, SW, W, NW, N, NE)
D8_CODES = (1, 2, 4, 8, 16, 32, 64, 128)
OUTLET_CODE = 0
DIRECTION_NODATA = 255.0
DIRECTION_NAMES = ("E", "SE", "S", "SW", "W", "NW", "N", "NE")

_CODE_TO_INDEX = {code: k for k, code in enumerate(D8_CODES)}
_CODE_TO_INDEX[OUTLET_CODE] = kernels.OUTLET

#: slope length at which L is capped (m)
DEFAULT_MAX_SLOPE_LENGTH = 333.0
RUSLE_UNIT_PLOT_LENGTH = 22.13


@dataclass(frozen=True, eq=False)
class FlowDirGrid:
    """D8 directions as ESRI codes (1=E ... 128=NE), ``0`` marks an outlet."""

    grid: Grid

    @classmethod
    def from_index(cls, index: np.ndarray, like: Grid) -> "FlowDirGrid":
        codes = np.full(index.shape, DIRECTION_NODATA, dtype=np.float64)
        for k, code in enumerate(D8_CODES):
            codes[index == k] = code
        codes[index == kernels.OUTLET] = OUTLET_CODE
        return cls(like.with_values(codes, nodata=DIRECTION_NODATA))

    @property
    def index(self) -> np.ndarray:
        """Kernel encoding: 0..7 direction, 8 outlet, -1 nodata."""
        out = np.full(self.grid.shape, kernels.NODIR, dtype=np.int8)
        valid = self.grid.valid
        for code, k in _CODE_TO_INDEX.items():
            out[valid & (self.grid.values == code)] = k
        bad = valid & (out == kernels.NODIR)
        if bad.any():
            r, c = np.argwhere(bad)[0]
            raise HydrologyError(f"invalid flow-direction code {self.grid.values[r, c]!r} at ({r}, {c})")
        return out

    def graph(self) -> tuple[np.ndarray, np.ndarray]:
        """``(order, down)``: upstream-first cell order and downstream index."""
        return kernels.active().flow_graph(self.index)


def fill_pits(dem: Grid) -> Grid:
    """Priority-flood depression filling.

    Raises every cell to the lowest spill elevation reachable from the grid
    edge or a nodata boundary; cells outside depressions are untouched.
    """
    valid = dem.valid
    if not valid.any():
        raise HydrologyError("DEM has no valid cells")
    filled = kernels.active().fill_depressions(dem.values, valid)
    return dem.with_values(np.where(valid, filled, dem.nodata))


def flow_direction_d8(dem: Grid) -> FlowDirGrid:
    """Steepest-descent D8 directions on a pit-filled DEM.

    Drops are divided by ``cellsize`` (cardinal) or ``cellsize*sqrt(2)``
    (diagonal); ties go to the first of E, SE, S, SW, W, NW, N, NE. A cell
    with no lower neighbour is an outlet if it touches the grid edge or
    nodata; otherwise it is a flat cell and drains toward the nearest
    equal-elevation cell that already has an exit.
    """
    valid = dem.valid
    if not valid.any():
        raise HydrologyError("DEM has no valid cells")
    index = kernels.active().d8_directions(dem.values, valid, float(dem.cellsize))
    return FlowDirGrid.from_index(index, dem)


def flow_accumulation(dirs: FlowDirGrid, weights: Grid | None = None) -> Grid:
    """Upstream cell count (itself included), or upstream sum of ``weights``."""
    order, down = dirs.graph()
    valid = dirs.grid.valid
    if weights is None:
        w = valid.astype(np.float64)
    else:
        assert_aligned(dirs.grid, weights)
        w = np.where(weights.valid & valid, weights.values, 0.0)
    acc = kernels.active().accumulate(w, order, down).reshape(dirs.grid.shape)
    return dirs.grid.with_values(np.where(valid, acc, dirs.grid.nodata))


def outlet_mask(dirs: FlowDirGrid) -> np.ndarray:
    return dirs.grid.valid & (dirs.grid.values == OUTLET_CODE)


def slope_tangent(dem: Grid) -> np.ndarray:
    """tan(slope) from central differences, one-sided next to edges or nodata."""
    z = np.where(dem.valid, dem.values, 0.0)
    v = dem.valid
    cs = dem.cellsize
    zp = np.pad(z, 1)
    vp = np.pad(v, 1, constant_values=False)

    def axis_gradient(z_lo, v_lo, z_hi, v_hi):
        both = v_lo & v_hi
        return np.where(
            both,
            (z_hi - z_lo) / (2.0 * cs),
            np.where(v_hi, (z_hi - z) / cs, np.where(v_lo, (z - z_lo) / cs, 0.0)),
        )

    gx = axis_gradient(zp[1:-1, :-2], vp[1:-1, :-2], zp[1:-1, 2:], vp[1:-1, 2:])
    gy = axis_gradient(zp[:-2, 1:-1], vp[:-2, 1:-1], zp[2:, 1:-1], vp[2:, 1:-1])
    return np.hypot(gx, gy)


def slope_steepness_factor(tan_slope):
    """McCool S factor: gentle branch below tan = 0.09, steep branch above."""
    tan_slope = np.asarray(tan_slope, dtype=np.float64)
    sin_t = np.sin(np.arctan(tan_slope))
    return np.where(tan_slope < 0.09, 10.8 * sin_t + 0.03, 16.8 * sin_t - 0.50)


def slope_length_factor(accum, cellsize, max_slope_length=DEFAULT_MAX_SLOPE_LENGTH):
    length = np.minimum(np.asarray(accum, dtype=np.float64) * cellsize, max_slope_length)
    return np.sqrt(length / RUSLE_UNIT_PLOT_LENGTH)


def compute_ls(dem: Grid, accum: Grid, max_slope_length: float = DEFAULT_MAX_SLOPE_LENGTH) -> Grid:
    """RUSLE LS = L * S with contributing length ``accum * cellsize``."""
    assert_aligned(dem, accum)
    if not max_slope_length > 0:
        raise ParameterError("max_slope_length must be > 0")
    s = slope_steepness_factor(slope_tangent(dem))
    valid = dem.valid & accum.valid
    acc = np.where(valid, accum.values, 1.0)
    ls = slope_length_factor(acc, dem.cellsize, max_slope_length) * s
    return dem.with_values(np.where(valid, np.maximum(ls, 0.0), dem.nodata))
