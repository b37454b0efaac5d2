"""RUSLE soil loss and cascade sediment routing.

Each cell passes on its own generated load plus the share of its incoming
load that it does not trap: ``out = generated + incoming * (1 - trap_eff)``.
Trapping only acts on through-flow, so a cell never traps the sediment it
generates itself. This replaces a connectivity-index delivery ratio with a
model that can be checked by hand.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from . import kernels
from .accounts import ServiceQuantity
from .classes import ClassTable, optimal_scenario_params  # noqa: F401  (re-export)
from .errors import AccountError, ParameterError
from .grid import Grid, LandCoverGrid, assert_aligned, cell_area_ha
from .hydrology import FlowDirGrid


def _lookup(landcover: LandCoverGrid, table: Mapping[int, float], what: str) -> np.ndarray:
    """Per-cell parameter array, NaN on nodata cells."""
    ids = landcover.class_index()
    out = np.full(ids.shape, np.nan)
    for c in landcover.classes:
        if c not in table:
            raise ParameterError(f"class {c} has no {what} entry")
        out[ids == c] = table[c]
    return out


def _check_fraction(table: Mapping[int, float], what: str) -> None:
    for c, v in table.items():
        if not 0.0 <= v <= 1.0:
            raise ParameterError(f"{what} for class {c} is {v}, outside [0, 1]")


@dataclass(frozen=True, eq=False)
class RusleInputs:
    r_factor: Grid  # MJ mm ha-1 h-1 yr-1
    k_factor: Grid  # t ha h ha-1 MJ-1 mm-1
    ls: Grid
    c_factor: Mapping[int, float]
    p_factor: Mapping[int, float]

    def __post_init__(self):
        assert_aligned(self.r_factor, self.k_factor)
        assert_aligned(self.r_factor, self.ls)
        for name in ("r_factor", "k_factor"):
            g = getattr(self, name)
            if np.any(g.values[g.valid] < 0):
                raise ParameterError(f"{name} has negative cells")
        _check_fraction(self.c_factor, "c_factor")
        _check_fraction(self.p_factor, "p_factor")

    @classmethod
    def from_table(cls, r_factor: Grid, k_factor: Grid, ls: Grid, table: ClassTable) -> "RusleInputs":
        return cls(r_factor, k_factor, ls, table.column("c_factor"), table.column("p_factor"))


def soil_loss(inputs: RusleInputs, landcover: LandCoverGrid) -> Grid:
    """Annual soil loss per cell (t/cell/yr): ``R*K*LS*C*P`` times cell area."""
    lc = landcover.grid
    assert_aligned(inputs.r_factor, lc)
    c = _lookup(landcover, inputs.c_factor, "c_factor")
    p = _lookup(landcover, inputs.p_factor, "p_factor")
    r, k, ls = inputs.r_factor, inputs.k_factor, inputs.ls
    valid = r.valid & k.valid & ls.valid & lc.valid
    with np.errstate(invalid="ignore"):
        a = r.values * k.values * ls.values * c * p * cell_area_ha(lc)
    return r.with_values(np.where(valid, a, r.nodata))


@dataclass(frozen=True, eq=False)
class SedimentResult:
    generated: Grid  # t/cell/yr
    trapped: Grid  # t/cell/yr
    exported_at_outlets: float  # t/yr
    per_class_trapped: dict[int, float]

    @property
    def total_generated(self) -> float:
        return float(self.generated.values[self.generated.valid].sum())

    @property
    def total_trapped(self) -> float:
        return float(self.trapped.values[self.trapped.valid].sum())


def route_sediment(
    loss: Grid,
    dirs: FlowDirGrid,
    trap_eff: Mapping[int, float],
    landcover: LandCoverGrid,
) -> SedimentResult:
    """Route soil loss down the D8 graph, trapping through-flow by class.

    Cells with no soil-loss value generate nothing; cells with no class
    trap nothing. Both still pass through-flow downstream.
    """
    assert_aligned(loss, dirs.grid)
    assert_aligned(loss, landcover.grid)
    _check_fraction(trap_eff, "trap_eff")
    eff = np.nan_to_num(_lookup(landcover, trap_eff, "trap_eff"), nan=0.0)
    in_graph = dirs.grid.valid
    gen = np.where(in_graph & loss.valid, loss.values, 0.0)
    if np.any(gen < 0):
        raise ParameterError("soil loss must be non-negative")

    order, down = dirs.graph()
    trapped, exported = kernels.active().route(gen, eff, order, down)
    trapped = trapped.reshape(loss.shape)

    ids = landcover.class_index()
    per_class = {c: float(trapped[ids == c].sum()) for c in landcover.classes}
    nodata = loss.nodata
    return SedimentResult(
        generated=loss.with_values(np.where(in_graph, gen, nodata)),
        trapped=loss.with_values(np.where(in_graph, trapped, nodata)),
        exported_at_outlets=float(exported),
        per_class_trapped=per_class,
    )


def filtration_service(result: SedimentResult, asset_mask: LandCoverGrid) -> dict[int, ServiceQuantity]:
    """Sediment trapped inside the reporting boundary, per asset class."""
    assert_aligned(result.trapped, asset_mask.grid)
    inside = asset_mask.valid
    if not inside.any():
        raise AccountError("asset mask is empty")
    ids = asset_mask.class_index()
    trapped = np.where(result.trapped.valid, result.trapped.values, 0.0)
    a = cell_area_ha(asset_mask.grid)
    out = {}
    for c in asset_mask.classes:
        cells = ids == c
        out[c] = ServiceQuantity(float(trapped[cells].sum()), int(cells.sum()) * a)
    return out
