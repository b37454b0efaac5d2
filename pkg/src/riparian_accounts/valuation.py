"""Monetary valuation: avoided-cost flows, annuity NPV and carbon prices.

All arithmetic is unrounded; currency is rounded only when rendered.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

from .accounts import PhysicalFlowAccount
from .errors import AccountError, ParameterError
from .render import BLANK, Column, Table

SEDIMENT = "sediment_filtration"
CARBON = "carbon_storage"
TIMINGS = ("ordinary", "due")
BENEFICIARIES = ("business", "society")

DEFAULT_BENEFICIARY = {SEDIMENT: "business", CARBON: "society"}


@dataclass(frozen=True)
class ValuationParams:
    sediment_unit_cost: float = 250.0  # AU$/t
    discount_rate: float = 0.07
    horizon_years: int = 100
    annuity_timing: str = "due"
    carbon_price: float = 37.0  # AU$/t CO2-e
    scc_prices: tuple[float, ...] = (73.0, 274.0)
    c_to_co2: float = 3.67
    beneficiary: Mapping[str, str] = field(default_factory=lambda: dict(DEFAULT_BENEFICIARY))

    def __post_init__(self):
        if not self.discount_rate > 0:
            raise ParameterError(f"discount_rate must be > 0, got {self.discount_rate}")
        if int(self.horizon_years) != self.horizon_years or self.horizon_years < 1:
            raise ParameterError(f"horizon_years must be an integer >= 1, got {self.horizon_years}")
        if self.annuity_timing not in TIMINGS:
            raise ParameterError(f"annuity_timing must be one of {TIMINGS}, got {self.annuity_timing!r}")
        for name in ("sediment_unit_cost", "carbon_price", "c_to_co2"):
            if not getattr(self, name) >= 0:
                raise ParameterError(f"{name} must be >= 0")
        if any(not p >= 0 for p in self.scc_prices):
            raise ParameterError("scc_prices must be >= 0")
        for service, who in self.beneficiary.items():
            if who not in BENEFICIARIES:
                raise ParameterError(f"beneficiary for {service} must be one of {BENEFICIARIES}, got {who!r}")
        object.__setattr__(self, "horizon_years", int(self.horizon_years))
        object.__setattr__(self, "scc_prices", tuple(float(p) for p in self.scc_prices))
        object.__setattr__(self, "beneficiary", dict(self.beneficiary))

    def beneficiary_of(self, service: str) -> str:
        try:
            return self.beneficiary[service]
        except KeyError:
            raise ParameterError(f"no beneficiary classification for service {service!r}") from None


def flow_value(tonnes: float, unit_cost: float) -> float:
    """Avoided cost of the sediment filtered in one year (AU$/yr)."""
    if tonnes < 0:
        raise ParameterError(f"tonnes must be >= 0, got {tonnes}")
    return tonnes * unit_cost


def annuity_factor(r: float, T: int, timing: str = "ordinary") -> float:
    """Present value of 1 per year for ``T`` years at rate ``r``.

    ``ordinary`` pays at period ends, ``due`` at period starts.
    """
    if not r > 0:
        raise ParameterError(f"discount rate must be > 0, got {r}")
    if T < 1:
        raise ParameterError(f"horizon must be >= 1 year, got {T}")
    if timing not in TIMINGS:
        raise ParameterError(f"timing must be one of {TIMINGS}, got {timing!r}")
    # expm1/log1p keep precision for small r
    ordinary = -math.expm1(-T * math.log1p(r)) / r
    return ordinary * (1.0 + r) if timing == "due" else ordinary


def npv_asset_value(annual_flow: float, params: ValuationParams) -> float:
    if annual_flow < 0:
        raise ParameterError(f"annual flow must be >= 0, got {annual_flow}")
    return annual_flow * annuity_factor(params.discount_rate, params.horizon_years, params.annuity_timing)


def _price(params: ValuationParams, price_mode: str, scc_index: int) -> float:
    if price_mode == "market":
        return params.carbon_price
    if price_mode == "scc_index":
        if not 0 <= scc_index < len(params.scc_prices):
            raise ParameterError(
                f"scc index {scc_index} out of range for {len(params.scc_prices)} SCC prices"
            )
        return params.scc_prices[scc_index]
    raise ParameterError(f"price_mode must be 'market' or 'scc_index', got {price_mode!r}")


def carbon_stock_value(
    t_c: float, params: ValuationParams, price_mode: str = "market", scc_index: int = 0
) -> float:
    """Stored carbon (t C) converted to CO2-e and priced."""
    if t_c < 0:
        raise ParameterError(f"carbon stock must be >= 0, got {t_c}")
    return t_c * params.c_to_co2 * _price(params, price_mode, scc_index)


def carbon_flow_value(t_c: float, params: ValuationParams, price_mode: str = "market", scc_index: int = 0) -> float:
    """Signed value of a change in carbon stock."""
    return t_c * params.c_to_co2 * _price(params, price_mode, scc_index)


# --------------------------------------------------------------- account

@dataclass(frozen=True)
class MonetaryRow:
    class_id: int | None
    name: str
    sediment_baseline: float
    sediment_scenario: float
    carbon_baseline: float
    carbon_scenario: float

    @property
    def sediment_change(self) -> float:
        return self.sediment_scenario - self.sediment_baseline

    @property
    def carbon_change(self) -> float:
        return self.carbon_scenario - self.carbon_baseline

    def value(self, service: str, which: str) -> float:
        prefix = "sediment" if service == SEDIMENT else "carbon"
        return getattr(self, f"{prefix}_{which}")


@dataclass(frozen=True)
class MonetaryAccount:
    periods: tuple[str, str]
    rows: tuple[MonetaryRow, ...]
    params: ValuationParams

    @property
    def totals(self) -> MonetaryRow:
        return MonetaryRow(
            None,
            "Total",
            sum(r.sediment_baseline for r in self.rows),
            sum(r.sediment_scenario for r in self.rows),
            sum(r.carbon_baseline for r in self.rows),
            sum(r.carbon_scenario for r in self.rows),
        )

    def period_key(self, period: str) -> str:
        """``baseline`` or ``scenario`` for a period label."""
        if period == self.periods[0]:
            return "baseline"
        if period == self.periods[1]:
            return "scenario"
        raise AccountError(f"period {period!r} not in account periods {self.periods}")

    def to_table(self) -> Table:
        p0, p1 = self.periods
        cols = [
            Column("class_id", "Class", "text"),
            Column("asset", "Asset", "text"),
            Column("sediment_baseline", f"Sediment filtration {p0}", "money"),
            Column("sediment_scenario", f"Sediment filtration {p1}", "money"),
            Column("sediment_change", "Sediment filtration change", "money"),
            Column("carbon_baseline", f"Carbon storage {p0}", "money"),
            Column("carbon_scenario", f"Carbon storage {p1}", "money"),
            Column("carbon_change", "Carbon storage change", "money"),
        ]

        def as_dict(r: MonetaryRow):
            return {
                "class_id": BLANK if r.class_id is None else r.class_id,
                "asset": r.name,
                "sediment_baseline": r.sediment_baseline,
                "sediment_scenario": r.sediment_scenario,
                "sediment_change": r.sediment_change,
                "carbon_baseline": r.carbon_baseline,
                "carbon_scenario": r.carbon_scenario,
                "carbon_change": r.carbon_change,
            }

        return Table(
            "Monetary natural capital account (AU$)",
            cols,
            [as_dict(r) for r in self.rows],
            as_dict(self.totals),
            metadata={"account": "monetary", "unit": "AU$", "periods": list(self.periods)},
        )


def build_monetary_account(
    physical: Mapping[str, PhysicalFlowAccount], params: ValuationParams
) -> MonetaryAccount:
    """Value the sediment flow (AU$/yr) and carbon stock (AU$) per class."""
    for service in (SEDIMENT, CARBON):
        if service not in physical:
            raise AccountError(f"physical account for {service!r} missing")
    sed = physical[SEDIMENT]
    carb = physical[CARBON]
    if sed.periods != carb.periods:
        raise AccountError(f"period labels differ: {sed.periods} vs {carb.periods}")
    sed_ids = [r.class_id for r in sed.rows]
    carb_ids = [r.class_id for r in carb.rows]
    if set(sed_ids) != set(carb_ids):
        raise AccountError(f"class sets differ between services: {sed_ids} vs {carb_ids}")
    rows = []
    for c in sed_ids:
        s = sed.row(c)
        k = carb.row(c)
        rows.append(
            MonetaryRow(
                c,
                s.name,
                flow_value(s.baseline_qty, params.sediment_unit_cost),
                flow_value(s.scenario_qty, params.sediment_unit_cost),
                carbon_stock_value(k.baseline_qty, params),
                carbon_stock_value(k.scenario_qty, params),
            )
        )
    return MonetaryAccount(sed.periods, tuple(rows), params)
