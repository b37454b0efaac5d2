"""Financial-statement disclosures built from the monetary account.

Three disclosure alternatives are supported:

``balance_sheet_item``
    a "natural capital" line under non-current assets, carrying only the
    items whose benefit accrues to the business, plus supporting notes;
``notes_only``
    the two notes on their own;
``voluntary``
    an environmental profit and loss statement, a natural capital balance
    sheet, and both notes.

A value missing from the inputs renders as ``n/a``; a cell that does not
apply to a line (carbon in the business column, say) renders blank.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .accounts import PhysicalFlowAccount
from .errors import AccountError
from .render import BLANK, Column, Table
from .valuation import (
    CARBON,
    SEDIMENT,
    MonetaryAccount,
    ValuationParams,
    annuity_factor,
    carbon_stock_value,
    npv_asset_value,
)

ALTERNATIVES = ("balance_sheet_item", "notes_only", "voluntary")


@dataclass(frozen=True)
class StatementLine:
    label: str
    unit: str | None
    measure: float | None
    value_to_business: float | None
    value_to_society: float | None
    beneficiary: str | None = None  # column holding this line's value

    @property
    def total(self) -> float | None:
        if self.value_to_business is None and self.value_to_society is None:
            return None
        return (self.value_to_business or 0.0) + (self.value_to_society or 0.0)


def _line(label: str, unit: str, measure, value, beneficiary: str) -> StatementLine:
    return StatementLine(
        label,
        unit,
        measure,
        value if beneficiary == "business" else None,
        value if beneficiary == "society" else None,
        beneficiary,
    )


@dataclass(frozen=True)
class Statement:
    title: str
    periods: tuple[str, ...]  # display order
    lines: Mapping[str, tuple[StatementLine, ...]]
    total_label: str

    def _column_total(self, period: str, who: str):
        applicable = [ln for ln in self.lines[period] if ln.beneficiary == who]
        if not applicable:
            return BLANK
        values = [ln.value_to_business if who == "business" else ln.value_to_society for ln in applicable]
        if any(v is None for v in values):
            return None
        return sum(values)

    def total_line(self, period: str) -> StatementLine:
        b = self._column_total(period, "business")
        s = self._column_total(period, "society")
        return StatementLine(
            self.total_label,
            None,
            None,
            None if b is BLANK else b,
            None if s is BLANK else s,
        )

    def to_table(self) -> Table:
        cols = [Column("line", "", "text")]
        for p in self.periods:
            cols += [
                Column(f"{p}_measure", f"{p} Measure", "number"),
                Column(f"{p}_business", f"{p} Value to business", "money"),
                Column(f"{p}_society", f"{p} Value to society", "money"),
                Column(f"{p}_total", f"{p} Total", "money"),
            ]
        first = self.periods[0]
        rows = []
        for i, ln in enumerate(self.lines[first]):
            row = {"line": ln.label}
            for p in self.periods:
                cell = self.lines[p][i]
                row[f"{p}_measure"] = cell.measure
                row[f"{p}_business"] = cell.value_to_business if cell.beneficiary == "business" else BLANK
                row[f"{p}_society"] = cell.value_to_society if cell.beneficiary == "society" else BLANK
                row[f"{p}_total"] = cell.total
            rows.append(row)
        totals = {"line": self.total_label}
        for p in self.periods:
            b = self._column_total(p, "business")
            s = self._column_total(p, "society")
            present = [v for v in (b, s) if v is not BLANK and v is not None]
            totals[f"{p}_measure"] = BLANK
            totals[f"{p}_business"] = b
            totals[f"{p}_society"] = s
            totals[f"{p}_total"] = sum(present) if present else None
        return Table(self.title, cols, rows, totals, metadata={"periods": list(self.periods)})


@dataclass(frozen=True)
class Note:
    number: int
    title: str
    text: str
    table: Table

    def to_table(self) -> Table:
        t = self.table
        return Table(
            f"Note {self.number}: {self.title}",
            t.columns,
            t.rows,
            t.totals,
            metadata={"note": self.number, **t.metadata},
            preamble=self.text,
        )


@dataclass(frozen=True)
class StatementSet:
    env_pnl: Statement
    balance_sheet: Statement
    notes: tuple[Note, ...]


def _resolve_periods(monetary: MonetaryAccount, periods) -> tuple[str, ...]:
    if periods is None:
        return (monetary.periods[1], monetary.periods[0])
    periods = tuple(periods)
    for p in periods:
        monetary.period_key(p)
    return periods


def _check_physical(physical: Mapping[str, PhysicalFlowAccount], monetary: MonetaryAccount):
    for service in (SEDIMENT, CARBON):
        if service not in physical:
            raise AccountError(f"physical account for {service!r} missing")
        if physical[service].periods != monetary.periods:
            raise AccountError(
                f"{service} periods {physical[service].periods} differ from monetary {monetary.periods}"
            )
    return physical[SEDIMENT], physical[CARBON]


def _qty(account: PhysicalFlowAccount, key: str) -> float:
    t = account.totals
    return t.baseline_qty if key == "baseline" else t.scenario_qty


def build_env_pnl(
    monetary: MonetaryAccount,
    physical: Mapping[str, PhysicalFlowAccount],
    periods=None,
) -> Statement:
    """Environmental income for each period.

    Sequestration is the stock change from the first to the second period,
    so it is only defined for the second; the first shows n/a.
    """
    params = monetary.params
    sed, carb = _check_physical(physical, monetary)
    periods = _resolve_periods(monetary, periods)
    totals = monetary.totals
    lines = {}
    for p in periods:
        key = monetary.period_key(p)
        sediment = _line(
            "Sediment filtration (tonnes) (Note 1)",
            "t",
            _qty(sed, key),
            totals.value(SEDIMENT, key),
            params.beneficiary_of(SEDIMENT),
        )
        if key == "scenario":
            seq_t = carb.totals.change_qty * params.c_to_co2
            seq_v = totals.carbon_change
        else:
            seq_t = seq_v = None
        carbon = _line(
            "Carbon sequestration (tonnes CO2-e) (Note 2)",
            "t CO2-e",
            seq_t,
            seq_v,
            params.beneficiary_of(CARBON),
        )
        lines[p] = (sediment, carbon)
    return Statement("Environmental profit and loss statement", periods, lines, "Total environmental income/(loss)")


def build_balance_sheet(
    monetary: MonetaryAccount,
    valuation: ValuationParams | None,
    physical: Mapping[str, PhysicalFlowAccount],
    periods=None,
) -> Statement:
    """Natural capital assets at each period end.

    Sediment filtration is carried at the present value of its annual
    avoided cost; carbon storage at the market value of the stock.
    """
    if valuation is None:
        raise AccountError("valuation parameters are required for the balance sheet")
    sed, carb = _check_physical(physical, monetary)
    periods = _resolve_periods(monetary, periods)
    totals = monetary.totals
    lines = {}
    for p in periods:
        key = monetary.period_key(p)
        sediment = _line(
            "Sediment filtration (tonnes), Note 1",
            "t/yr",
            _qty(sed, key),
            npv_asset_value(totals.value(SEDIMENT, key), valuation),
            valuation.beneficiary_of(SEDIMENT),
        )
        carbon = _line(
            "Carbon storage (tonnes CO2-e), Note 2",
            "t CO2-e",
            _qty(carb, key) * valuation.c_to_co2,
            totals.value(CARBON, key),
            valuation.beneficiary_of(CARBON),
        )
        lines[p] = (sediment, carbon)
    return Statement("Natural capital balance sheet", periods, lines, "Total natural capital assets")


def _note1_text(params: ValuationParams) -> str:
    factor = annuity_factor(params.discount_rate, params.horizon_years, params.annuity_timing)
    return (
        "Sediment retained by the riparian land assets is modelled per cell: RUSLE soil loss\n"
        "is routed down the D8 flow network and each land-cover class retains a fixed share of\n"
        "the sediment passing through it. Retained sediment is valued at the avoided cost of\n"
        f"removing it from stormwater infrastructure, AU${params.sediment_unit_cost:,.2f} per tonne.\n"
        f"The asset value discounts that annual saving over {params.horizon_years} years at\n"
        f"{params.discount_rate:.2%} per year ({params.annuity_timing} annuity, factor {factor:.4f})."
    )


def _note2_text(params: ValuationParams, stock_t_c: float) -> str:
    scc = " and ".join(f"AU${p:,.0f}" for p in params.scc_prices)
    scc_values = " to ".join(
        f"AU${carbon_stock_value(stock_t_c, params, 'scc_index', i):,.0f}" for i in range(len(params.scc_prices))
    )
    text = (
        "Biomass carbon is the sum of above-ground, below-ground and dead-wood pools for each\n"
        "land-cover class multiplied by class area. Litter and soil carbon are excluded, so the\n"
        f"stock is a lower bound. Tonnes of carbon convert to CO2-e at {params.c_to_co2:g} t CO2-e\n"
        f"per t C and are measured at fair value using a market price of AU${params.carbon_price:,.2f}\n"
        "per t CO2-e. Sequestration over the period is the closing stock less the opening stock."
    )
    if params.scc_prices:
        text += f"\nAt social-cost-of-carbon prices of {scc} per t CO2-e the stock is worth {scc_values}."
    return text


def build_notes(
    physical: Mapping[str, PhysicalFlowAccount],
    monetary: MonetaryAccount,
    params: ValuationParams,
    period: str | None = None,
) -> tuple[Note, Note]:
    """Per-class physical quantities with their values, for one period."""
    sed, carb = _check_physical(physical, monetary)
    period = monetary.periods[0] if period is None else period
    key = monetary.period_key(period)
    mrows = {r.class_id: r for r in monetary.rows}

    def pick(row):
        return row.baseline_qty if key == "baseline" else row.scenario_qty

    n1_rows = [
        {"asset": r.name, "tonnes": pick(r), "value": mrows[r.class_id].value(SEDIMENT, key)}
        for r in sed.rows
    ]
    n1 = Table(
        f"Physical quantity of sediment filtered, {period}",
        [Column("asset", "Asset", "text"), Column("tonnes", "Tonnes of sediment"), Column("value", "AU$", "money")],
        n1_rows,
        {"asset": "Total", "tonnes": _qty(sed, key), "value": monetary.totals.value(SEDIMENT, key)},
        metadata={"period": period},
    )
    n2_rows = [
        {
            "asset": r.name,
            "t_c": pick(r),
            "t_co2e": pick(r) * params.c_to_co2,
            "value": mrows[r.class_id].value(CARBON, key),
        }
        for r in carb.rows
    ]
    stock = _qty(carb, key)
    n2 = Table(
        f"Physical quantity of biomass carbon, {period}",
        [
            Column("asset", "Asset", "text"),
            Column("t_c", "Tonnes biomass carbon"),
            Column("t_co2e", "Tonnes CO2-e"),
            Column("value", "AU$", "money"),
        ],
        n2_rows,
        {"asset": "Total", "t_c": stock, "t_co2e": stock * params.c_to_co2, "value": monetary.totals.value(CARBON, key)},
        metadata={"period": period},
    )
    return (
        Note(1, "Sediment filtration", _note1_text(params), n1),
        Note(2, "Carbon storage and sequestration", _note2_text(params, stock), n2),
    )


def build_statement_set(
    monetary: MonetaryAccount,
    physical: Mapping[str, PhysicalFlowAccount],
    params: ValuationParams,
) -> StatementSet:
    return StatementSet(
        build_env_pnl(monetary, physical),
        build_balance_sheet(monetary, params, physical),
        build_notes(physical, monetary, params),
    )


def _service_name(label: str) -> str:
    return label.split(" (")[0].lower()


def _note_ref(label: str) -> str:
    return "Note 2" if "Note 2" in label else "Note 1"


def natural_capital_line_item(balance_sheet: Statement) -> Statement:
    """Balance-sheet extract recognising only business-benefit assets."""
    lines = {}
    for p in balance_sheet.periods:
        recognised = [ln for ln in balance_sheet.lines[p] if ln.beneficiary == "business"]
        lines[p] = tuple(
            StatementLine(
                f"Natural capital: riparian land assets, {_service_name(ln.label)} ({_note_ref(ln.label)})",
                ln.unit,
                ln.measure,
                ln.value_to_business,
                None,
                "business",
            )
            for ln in recognised
        )
    return Statement(
        "Statement of financial position (extract): non-current assets",
        balance_sheet.periods,
        lines,
        "Total natural capital",
    )


def select_disclosure(alternative: str, statements: StatementSet) -> dict[str, Table]:
    """Documents to publish for a disclosure alternative, keyed by file stem."""
    if alternative not in ALTERNATIVES:
        raise AccountError(f"unknown disclosure alternative {alternative!r}; expected one of {ALTERNATIVES}")
    notes = {f"note{n.number}": n.to_table() for n in statements.notes}
    if alternative == "notes_only":
        return notes
    if alternative == "balance_sheet_item":
        return {"balance_sheet": natural_capital_line_item(statements.balance_sheet).to_table(), **notes}
    return {
        "env_pnl": statements.env_pnl.to_table(),
        "balance_sheet": statements.balance_sheet.to_table(),
        **notes,
    }
