"""Carbon stock lookup by land-cover class across three biomass pools.

Litter and soil carbon are not modelled, so stocks are a lower bound.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .accounts import ServiceQuantity
from .classes import ClassTable
from .errors import AccountError, ParameterError
from .grid import LandCoverGrid

#: t CO2-e per t C as used in the published accounts
C_TO_CO2 = 3.67
#: molar-mass ratio, available as an alternative conversion
C_TO_CO2_MOLAR = 44.0 / 12.0


@dataclass(frozen=True)
class CarbonPools:
    above_ground: float  # t C/ha
    below_ground: float
    dead: float

    def __post_init__(self):
        for name in ("above_ground", "below_ground", "dead"):
            if getattr(self, name) < 0:
                raise ParameterError(f"carbon pool {name} must be >= 0")

    @property
    def density(self) -> float:
        return self.above_ground + self.below_ground + self.dead


def pools_from_table(table: ClassTable) -> dict[int, CarbonPools]:
    return {
        c: CarbonPools(r.carbon_above, r.carbon_below, r.carbon_dead) for c, r in table.items()
    }


@dataclass(frozen=True)
class CarbonStockResult:
    per_class: dict[int, ServiceQuantity]  # quantity in t C

    @property
    def portfolio_total(self) -> float:
        return sum(q.quantity for q in self.per_class.values())

    @property
    def area_ha(self) -> float:
        return sum(q.area_ha for q in self.per_class.values())


def carbon_storage(landcover: LandCoverGrid, pools: Mapping[int, CarbonPools]) -> CarbonStockResult:
    """Class stock = summed pool density x class area."""
    areas = landcover.areas_ha()
    per_class = {}
    for c in landcover.classes:
        if c not in pools:
            raise ParameterError(f"class {c} has no carbon pool entry")
        per_class[c] = ServiceQuantity(pools[c].density * areas[c], areas[c])
    return CarbonStockResult(per_class)


def sequestration(t0: CarbonStockResult, t1: CarbonStockResult) -> dict[int, float]:
    """Signed change in stored carbon per class (t C); negative is a loss."""
    if set(t0.per_class) != set(t1.per_class):
        raise AccountError(
            f"class sets differ: {sorted(t0.per_class)} vs {sorted(t1.per_class)}"
        )
    return {c: t1.per_class[c].quantity - t0.per_class[c].quantity for c in t0.per_class}


def co2_equivalent(t_c, factor: float = C_TO_CO2):
    return t_c * factor
