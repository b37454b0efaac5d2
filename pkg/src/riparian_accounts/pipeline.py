"""End-to-end run: extent, physical models, valuation and statements."""
from __future__ import annotations

import os
import shutil
import tempfile
from dataclasses import dataclass
from pathlib import Path

from .accounts import ExtentAccount, PhysicalFlowAccount, build_extent_account, from_service_quantities
from .carbon import carbon_storage, pools_from_table
from .config import Inputs, RunConfig
from .erosion import RusleInputs, filtration_service, route_sediment, soil_loss
from .hydrology import compute_ls, fill_pits, flow_accumulation, flow_direction_d8
from .render import Table
from .statements import StatementSet, build_statement_set, select_disclosure
from .valuation import CARBON, SEDIMENT, MonetaryAccount, build_monetary_account

COMMANDS = ("extent", "physical", "monetary", "statements", "all")
FORMATS = ("txt", "csv", "json")


@dataclass(frozen=True)
class PhysicalResults:
    sediment: PhysicalFlowAccount
    carbon: PhysicalFlowAccount
    exported_baseline: float  # t/yr leaving the catchment
    exported_scenario: float

    def accounts(self) -> dict[str, PhysicalFlowAccount]:
        return {SEDIMENT: self.sediment, CARBON: self.carbon}


def run_extent(cfg: RunConfig, inputs: Inputs) -> ExtentAccount:
    assets = cfg.assets(inputs)
    names = {c: inputs.classes[c].name for c in assets}
    return build_extent_account(
        inputs.landcover.masked(assets),
        inputs.landcover_closing.masked(assets),
        names,
        cfg.periods,
    )


def run_physical(cfg: RunConfig, inputs: Inputs) -> PhysicalResults:
    """Baseline and scenario sediment filtration and carbon stock.

    The scenario reuses the baseline rasters and land cover; only the class
    parameters change.
    """
    table = inputs.classes
    optimal = inputs.scenario_classes
    lc = inputs.landcover

    filled = fill_pits(inputs.dem)
    dirs = flow_direction_d8(filled)
    accum = flow_accumulation(dirs)
    ls = compute_ls(filled, accum, cfg.max_slope_length)
    loss = soil_loss(RusleInputs.from_table(inputs.r_factor, inputs.k_factor, ls, table), lc)
    loss_s = soil_loss(RusleInputs.from_table(inputs.r_factor, inputs.k_factor, ls, optimal), lc)
    base = route_sediment(loss, dirs, table.column("trap_eff"), lc)
    scen = route_sediment(loss_s, dirs, optimal.column("trap_eff"), lc)

    assets = cfg.assets(inputs)
    mask = lc.masked(assets)
    names = table.names()
    common = dict(names=names, periods=cfg.periods, per_ha_total=cfg.per_ha_total)

    def ordered(d):
        return {c: d[c] for c in assets if c in d}

    sediment = from_service_quantities(
        SEDIMENT,
        ordered(filtration_service(base, mask)),
        ordered(filtration_service(scen, mask)),
        per_ha_decimals=1,
        **common,
    )
    carbon = from_service_quantities(
        CARBON,
        ordered(carbon_storage(mask, pools_from_table(table)).per_class),
        ordered(carbon_storage(mask, pools_from_table(optimal)).per_class),
        per_ha_decimals=0,
        **common,
    )
    return PhysicalResults(sediment, carbon, base.exported_at_outlets, scen.exported_at_outlets)


def run_monetary(cfg: RunConfig, physical: PhysicalResults) -> MonetaryAccount:
    return build_monetary_account(physical.accounts(), cfg.valuation)


def run_statements(cfg: RunConfig, physical: PhysicalResults, monetary: MonetaryAccount) -> StatementSet:
    return build_statement_set(monetary, physical.accounts(), cfg.valuation)


def build_documents(cfg: RunConfig, command: str, alternative: str | None = None) -> dict[str, Table]:
    """Every output table a command produces, keyed by file stem."""
    if command not in COMMANDS:
        raise ValueError(f"unknown command {command!r}; expected one of {COMMANDS}")
    inputs = cfg.load_inputs()
    docs: dict[str, Table] = {}
    if command in ("extent", "all"):
        docs["extent"] = run_extent(cfg, inputs).to_table()
    if command == "extent":
        return docs
    physical = run_physical(cfg, inputs)
    if command in ("physical", "all"):
        docs["physical_sediment_filtration"] = physical.sediment.to_table()
        docs["physical_carbon_storage"] = physical.carbon.to_table()
    if command == "physical":
        return docs
    monetary = run_monetary(cfg, physical)
    if command in ("monetary", "all"):
        docs["monetary"] = monetary.to_table()
    if command == "monetary":
        return docs
    statements = run_statements(cfg, physical, monetary)
    docs.update(select_disclosure(alternative or cfg.alternative, statements))
    return docs


def write_documents(docs: dict[str, Table], out_dir: Path, formats=FORMATS) -> list[Path]:
    """Write atomically: render into a temp dir, then move into ``out_dir``.

    If rendering fails nothing in ``out_dir`` is touched.
    """
    for fmt in formats:
        if fmt not in FORMATS:
            raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")
    out_dir = Path(out_dir)
    out_dir.parent.mkdir(parents=True, exist_ok=True)
    tmp = Path(tempfile.mkdtemp(prefix=".natcap-", dir=out_dir.parent))
    try:
        names = []
        for stem, table in docs.items():
            for fmt in formats:
                name = f"{stem}.{fmt}"
                with open(tmp / name, "w", encoding="utf-8", newline="\n") as fh:
                    fh.write(table.render(fmt))
                names.append(name)
        out_dir.mkdir(exist_ok=True)
        written = []
        for name in names:
            os.replace(tmp / name, out_dir / name)
            written.append(out_dir / name)
        return written
    finally:
        shutil.rmtree(tmp, ignore_errors=True)


def run_pipeline(
    cfg: RunConfig,
    command: str,
    out_dir: Path | None = None,
    formats=FORMATS,
    alternative: str | None = None,
) -> list[Path]:
    docs = build_documents(cfg, command, alternative)
    return write_documents(docs, out_dir or cfg.output_dir, formats)
