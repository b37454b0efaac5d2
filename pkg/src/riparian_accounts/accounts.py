"""Ecosystem extent and physical flow accounts."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .errors import AccountError
from .grid import LandCoverGrid, assert_aligned
from .render import BLANK, Column, Table

PER_HA_CONVENTIONS = ("area_weighted", "class_mean")


@dataclass(frozen=True)
class ServiceQuantity:
    """A class-level quantity together with the area that produced it."""

    quantity: float
    area_ha: float

    @property
    def per_ha(self) -> float | None:
        return self.quantity / self.area_ha if self.area_ha > 0 else None


def portfolio_total(per_class: Mapping[int, ServiceQuantity]) -> float:
    return sum(q.quantity for q in per_class.values())


# ---------------------------------------------------------------- extent

@dataclass(frozen=True)
class ExtentRow:
    class_id: int | None
    name: str
    opening_ha: float
    additions_ha: float
    losses_ha: float
    closing_ha: float

    @property
    def change_ha(self) -> float:
        return self.closing_ha - self.opening_ha


@dataclass(frozen=True)
class ExtentAccount:
    rows: tuple[ExtentRow, ...]
    periods: tuple[str, str]

    @property
    def totals(self) -> ExtentRow:
        return ExtentRow(
            None,
            "Total",
            sum(r.opening_ha for r in self.rows),
            sum(r.additions_ha for r in self.rows),
            sum(r.losses_ha for r in self.rows),
            sum(r.closing_ha for r in self.rows),
        )

    def to_table(self) -> Table:
        p0, p1 = self.periods
        cols = [
            Column("class_id", "Class", "text"),
            Column("asset_type", "Asset type", "text"),
            Column("opening_ha", f"Opening balance {p0}"),
            Column("additions_ha", "Additions"),
            Column("losses_ha", "Losses"),
            Column("closing_ha", f"Closing balance {p1}"),
            Column("change_ha", "Change"),
        ]

        def as_dict(r: ExtentRow):
            return {
                "class_id": BLANK if r.class_id is None else r.class_id,
                "asset_type": r.name,
                "opening_ha": r.opening_ha,
                "additions_ha": r.additions_ha,
                "losses_ha": r.losses_ha,
                "closing_ha": r.closing_ha,
                "change_ha": r.change_ha,
            }

        return Table(
            "Asset extent account (ha)",
            cols,
            [as_dict(r) for r in self.rows],
            as_dict(self.totals),
            metadata={"account": "extent", "unit": "ha", "periods": list(self.periods)},
        )


def build_extent_account(
    t0: LandCoverGrid,
    t1: LandCoverGrid,
    names: Mapping[int, str],
    periods: tuple[str, str] = ("opening", "closing"),
) -> ExtentAccount:
    """Opening and closing class areas with net additions and losses."""
    assert_aligned(t0.grid, t1.grid)
    a0 = t0.areas_ha()
    a1 = t1.areas_ha()
    class_ids = list(dict.fromkeys([*names, *a0, *a1]))
    rows = []
    for c in class_ids:
        opening = a0.get(c, 0.0)
        closing = a1.get(c, 0.0)
        rows.append(
            ExtentRow(
                c,
                names.get(c, str(c)),
                opening,
                max(0.0, closing - opening),
                max(0.0, opening - closing),
                closing,
            )
        )
    return ExtentAccount(tuple(rows), tuple(periods))


# ---------------------------------------------------------- physical flow

@dataclass(frozen=True)
class FlowRow:
    class_id: int | None
    name: str
    baseline_qty: float
    scenario_qty: float
    area_ha: float
    baseline_per_ha: float | None
    scenario_per_ha: float | None

    @property
    def change_qty(self) -> float:
        return self.scenario_qty - self.baseline_qty

    @property
    def change_per_ha(self) -> float | None:
        if self.baseline_per_ha is None or self.scenario_per_ha is None:
            return None
        return self.scenario_per_ha - self.baseline_per_ha


@dataclass(frozen=True)
class PhysicalFlowAccount:
    service: str
    unit: str
    periods: tuple[str, str]
    rows: tuple[FlowRow, ...]
    per_ha_total: str = "area_weighted"
    per_ha_decimals: int = 1

    def row(self, class_id: int) -> FlowRow:
        for r in self.rows:
            if r.class_id == class_id:
                return r
        raise AccountError(f"class {class_id} not in {self.service} account")

    def _per_ha_summary(self, attr: str, qty: float, area: float) -> float | None:
        if self.per_ha_total == "area_weighted":
            return qty / area if area > 0 else None
        vals = [getattr(r, attr) for r in self.rows if getattr(r, attr) is not None]
        return sum(vals) / len(vals) if vals else None

    @property
    def totals(self) -> FlowRow:
        b = sum(r.baseline_qty for r in self.rows)
        s = sum(r.scenario_qty for r in self.rows)
        area = sum(r.area_ha for r in self.rows)
        return FlowRow(
            None,
            "Total",
            b,
            s,
            area,
            self._per_ha_summary("baseline_per_ha", b, area),
            self._per_ha_summary("scenario_per_ha", s, area),
        )

    @property
    def change_per_ha_total(self) -> float | None:
        t = self.totals
        if self.per_ha_total == "area_weighted":
            return t.change_qty / t.area_ha if t.area_ha > 0 else None
        vals = [r.change_per_ha for r in self.rows if r.change_per_ha is not None]
        return sum(vals) / len(vals) if vals else None

    def baseline(self) -> dict[int, float]:
        return {r.class_id: r.baseline_qty for r in self.rows}

    def scenario(self) -> dict[int, float]:
        return {r.class_id: r.scenario_qty for r in self.rows}

    def to_table(self) -> Table:
        p0, p1 = self.periods
        u = self.unit
        d = self.per_ha_decimals
        cols = [
            Column("class_id", "Class", "text"),
            Column("asset_type", "Asset type", "text"),
            Column("baseline_per_ha", f"{p0} {u}/ha", decimals=d),
            Column("baseline_qty", f"{p0} {u}"),
            Column("scenario_per_ha", f"{p1} {u}/ha", decimals=d),
            Column("scenario_qty", f"{p1} {u}"),
            Column("area_ha", "Area ha"),
            Column("change_per_ha", f"Change {u}/ha", decimals=d),
            Column("change_qty", f"Change {u}"),
        ]

        def as_dict(r: FlowRow, change_per_ha):
            return {
                "class_id": BLANK if r.class_id is None else r.class_id,
                "asset_type": r.name,
                "baseline_per_ha": r.baseline_per_ha,
                "baseline_qty": r.baseline_qty,
                "scenario_per_ha": r.scenario_per_ha,
                "scenario_qty": r.scenario_qty,
                "area_ha": r.area_ha,
                "change_per_ha": change_per_ha,
                "change_qty": r.change_qty,
            }

        label = self.service.replace("_", " ")
        return Table(
            f"Physical flow account: {label} ({u})",
            cols,
            [as_dict(r, r.change_per_ha) for r in self.rows],
            as_dict(self.totals, self.change_per_ha_total),
            metadata={
                "service": self.service,
                "unit": u,
                "periods": list(self.periods),
                "per_ha_total": self.per_ha_total,
            },
        )


def build_physical_flow_account(
    service: str,
    baseline: Mapping[int, float],
    scenario: Mapping[int, float],
    areas: Mapping[int, float],
    names: Mapping[int, str] | None = None,
    periods: tuple[str, str] = ("baseline", "scenario"),
    unit: str = "t",
    per_ha_total: str = "area_weighted",
    per_ha_decimals: int = 1,
) -> PhysicalFlowAccount:
    """Assemble per-class baseline, scenario and change rows.

    ``per_ha_total`` picks the totals-row per-hectare figure: portfolio
    quantity over portfolio area (``area_weighted``) or the plain mean of
    the class per-hectare values (``class_mean``).
    """
    if per_ha_total not in PER_HA_CONVENTIONS:
        raise AccountError(f"per_ha_total must be one of {PER_HA_CONVENTIONS}, got {per_ha_total!r}")
    keys = set(baseline)
    if keys != set(scenario) or keys != set(areas):
        raise AccountError(
            f"{service}: class keys differ between baseline {sorted(baseline)}, "
            f"scenario {sorted(scenario)} and areas {sorted(areas)}"
        )
    names = names or {}
    rows = []
    for c in baseline:
        area = float(areas[c])
        b = float(baseline[c])
        s = float(scenario[c])
        rows.append(
            FlowRow(
                c,
                names.get(c, str(c)),
                b,
                s,
                area,
                b / area if area > 0 else None,
                s / area if area > 0 else None,
            )
        )
    return PhysicalFlowAccount(service, unit, tuple(periods), tuple(rows), per_ha_total, per_ha_decimals)


def from_service_quantities(
    service: str,
    baseline: Mapping[int, ServiceQuantity],
    scenario: Mapping[int, ServiceQuantity],
    **kwargs,
) -> PhysicalFlowAccount:
    areas = {c: q.area_ha for c, q in baseline.items()}
    for c, q in scenario.items():
        if c in areas and not np.isclose(areas[c], q.area_ha, rtol=1e-12, atol=0.0):
            raise AccountError(f"{service}: class {c} area differs between baseline and scenario")
    return build_physical_flow_account(
        service,
        {c: q.quantity for c, q in baseline.items()},
        {c: q.quantity for c, q in scenario.items()},
        areas,
        **kwargs,
    )
