"""Run configuration: an INI file with ``key = value`` sections.

Relative paths are resolved against the directory holding the file.

.. code-block:: ini

    [inputs]
    dem = dem.asc
    r_factor = r_factor.asc
    k_factor = k_factor.asc
    landcover = landcover.asc
    # landcover_closing = landcover_2023.asc   (defaults to landcover)
    class_table = classes.csv
    # scenario_class_table = classes_2023.csv  (defaults to the native-maximum substitution)

    [assets]
    classes = 1, 2, 3

    [periods]
    baseline = 2013
    scenario = 2023

    [valuation]
    sediment_unit_cost = 250
    discount_rate = 0.07
    horizon_years = 100
    annuity_timing = due
    carbon_price = 37
    scc_prices = 73, 274
    c_to_co2 = 3.67

    [hydrology]
    max_slope_length = 333

    [reporting]
    alternative = voluntary
    output_dir = out
    per_ha_total = area_weighted
"""
from __future__ import annotations

import configparser
from dataclasses import dataclass, field
from pathlib import Path

from .accounts import PER_HA_CONVENTIONS
from .classes import ClassTable, load_class_table, optimal_scenario_params
from .errors import AccountingError, ConfigError
from .grid import Grid, LandCoverGrid, assert_aligned, format_value, load_grid
from .hydrology import DEFAULT_MAX_SLOPE_LENGTH
from .statements import ALTERNATIVES
from .valuation import ValuationParams

_SCHEMA = {
    "inputs": {"dem", "r_factor", "k_factor", "landcover", "landcover_closing", "class_table", "scenario_class_table"},
    "assets": {"classes"},
    "periods": {"baseline", "scenario"},
    "valuation": {
        "sediment_unit_cost",
        "discount_rate",
        "horizon_years",
        "annuity_timing",
        "carbon_price",
        "scc_prices",
        "c_to_co2",
    },
    "hydrology": {"max_slope_length"},
    "reporting": {"alternative", "output_dir", "per_ha_total"},
}
_REQUIRED_INPUTS = ("dem", "r_factor", "k_factor", "landcover", "class_table")


@dataclass(frozen=True)
class Inputs:
    dem: Grid
    r_factor: Grid
    k_factor: Grid
    landcover: LandCoverGrid
    landcover_closing: LandCoverGrid
    classes: ClassTable
    scenario_classes: ClassTable


@dataclass(frozen=True)
class RunConfig:
    dem: Path
    r_factor: Path
    k_factor: Path
    landcover: Path
    class_table: Path
    landcover_closing: Path | None = None
    scenario_class_table: Path | None = None
    asset_classes: tuple[int, ...] | None = None
    periods: tuple[str, str] = ("baseline", "scenario")
    valuation: ValuationParams = field(default_factory=ValuationParams)
    max_slope_length: float = DEFAULT_MAX_SLOPE_LENGTH
    alternative: str = "voluntary"
    output_dir: Path = Path("natcap_out")
    per_ha_total: str = "area_weighted"

    def load_inputs(self) -> Inputs:
        """Read every input file and check geometry and class coverage."""
        try:
            dem = load_grid(self.dem)
            r = load_grid(self.r_factor)
            k = load_grid(self.k_factor)
            lc_grid = load_grid(self.landcover)
            lc1_grid = load_grid(self.landcover_closing) if self.landcover_closing else lc_grid
            table = load_class_table(self.class_table)
            scenario = load_class_table(self.scenario_class_table) if self.scenario_class_table else None
            for name, g in (("r_factor", r), ("k_factor", k), ("landcover", lc_grid), ("landcover_closing", lc1_grid)):
                try:
                    assert_aligned(dem, g)
                except AccountingError as exc:
                    raise ConfigError(f"inputs.{name} is not aligned with inputs.dem: {exc}") from None
            lc = LandCoverGrid.from_grid(lc_grid)
            lc1 = LandCoverGrid.from_grid(lc1_grid)
        except (ValueError, OSError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(str(exc)) from exc
        for label, cover in (("landcover", lc), ("landcover_closing", lc1)):
            missing = sorted(set(cover.classes) - set(table))
            if missing:
                raise ConfigError(f"inputs.{label}: classes {missing} missing from class table {self.class_table}")
        if self.asset_classes is not None:
            missing = sorted(set(self.asset_classes) - set(table))
            if missing:
                raise ConfigError(f"assets.classes: {missing} not in class table")
        if scenario is None:
            try:
                scenario = optimal_scenario_params(table)
            except AccountingError as exc:
                raise ConfigError(f"inputs.class_table: {exc}; supply inputs.scenario_class_table") from None
        elif set(scenario) != set(table):
            raise ConfigError(
                f"inputs.scenario_class_table classes {sorted(scenario)} differ from inputs.class_table {sorted(table)}"
            )
        return Inputs(dem, r, k, lc, lc1, table, scenario)

    def assets(self, inputs: Inputs) -> tuple[int, ...]:
        if self.asset_classes is not None:
            return self.asset_classes
        return tuple(c for c in inputs.classes if c in set(inputs.landcover.classes))


def _floats(text: str, key: str) -> tuple[float, ...]:
    try:
        return tuple(float(x) for x in text.replace(",", " ").split())
    except ValueError:
        raise ConfigError(f"{key}: expected a list of numbers, got {text!r}") from None


def _number(section, key: str, cast=float):
    text = section[key]
    try:
        v = float(text)
    except ValueError:
        raise ConfigError(f"{section.name}.{key}: expected a number, got {text!r}") from None
    if cast is int:
        if not v.is_integer():
            raise ConfigError(f"{section.name}.{key}: expected an integer, got {text!r}")
        return int(v)
    return v


def parse_config(text: str, base_dir: Path) -> RunConfig:
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse config: {exc}") from None
    for sec in cp.sections():
        if sec not in _SCHEMA:
            raise ConfigError(f"unknown section [{sec}]")
        for key in cp[sec]:
            if key not in _SCHEMA[sec]:
                raise ConfigError(f"unknown key {sec}.{key}")
    if "inputs" not in cp:
        raise ConfigError("missing section [inputs]")
    inp = cp["inputs"]

    def path(key, required=True):
        if key not in inp or not inp[key].strip():
            if required:
                raise ConfigError(f"missing required key inputs.{key}")
            return None
        p = Path(inp[key].strip())
        p = p if p.is_absolute() else (base_dir / p)
        p = Path(p).resolve()
        if not p.is_file():
            raise ConfigError(f"inputs.{key}: file not found: {p}")
        return p

    paths = {k: path(k) for k in _REQUIRED_INPUTS}
    kwargs: dict = dict(
        paths,
        landcover_closing=path("landcover_closing", required=False),
        scenario_class_table=path("scenario_class_table", required=False),
    )

    if "assets" in cp and "classes" in cp["assets"]:
        try:
            kwargs["asset_classes"] = tuple(int(x) for x in cp["assets"]["classes"].replace(",", " ").split())
        except ValueError:
            raise ConfigError(f"assets.classes: expected integers, got {cp['assets']['classes']!r}") from None
        if not kwargs["asset_classes"]:
            raise ConfigError("assets.classes is empty")

    if "periods" in cp:
        p = cp["periods"]
        kwargs["periods"] = (p.get("baseline", "baseline").strip(), p.get("scenario", "scenario").strip())
        if kwargs["periods"][0] == kwargs["periods"][1]:
            raise ConfigError("periods.baseline and periods.scenario must differ")

    vals: dict = {}
    if "valuation" in cp:
        v = cp["valuation"]
        for key in ("sediment_unit_cost", "discount_rate", "carbon_price", "c_to_co2"):
            if key in v:
                vals[key] = _number(v, key)
        if "horizon_years" in v:
            vals["horizon_years"] = _number(v, "horizon_years", int)
        if "annuity_timing" in v:
            vals["annuity_timing"] = v["annuity_timing"].strip()
        if "scc_prices" in v:
            vals["scc_prices"] = _floats(v["scc_prices"], "valuation.scc_prices")
    try:
        kwargs["valuation"] = ValuationParams(**vals)
    except AccountingError as exc:
        raise ConfigError(f"valuation: {exc}") from None

    if "hydrology" in cp and "max_slope_length" in cp["hydrology"]:
        kwargs["max_slope_length"] = _number(cp["hydrology"], "max_slope_length")
        if not kwargs["max_slope_length"] > 0:
            raise ConfigError("hydrology.max_slope_length must be > 0")

    if "reporting" in cp:
        rep = cp["reporting"]
        if "alternative" in rep:
            kwargs["alternative"] = rep["alternative"].strip()
            if kwargs["alternative"] not in ALTERNATIVES:
                raise ConfigError(f"reporting.alternative must be one of {ALTERNATIVES}")
        if "output_dir" in rep:
            out = Path(rep["output_dir"].strip())
            kwargs["output_dir"] = (out if out.is_absolute() else base_dir / out).resolve()
        if "per_ha_total" in rep:
            kwargs["per_ha_total"] = rep["per_ha_total"].strip()
            if kwargs["per_ha_total"] not in PER_HA_CONVENTIONS:
                raise ConfigError(f"reporting.per_ha_total must be one of {PER_HA_CONVENTIONS}")
    if "output_dir" not in kwargs:
        kwargs["output_dir"] = (base_dir / "natcap_out").resolve()
    return RunConfig(**kwargs)


def load_config(path, validate_inputs: bool = True) -> RunConfig:
    """Parse and validate a run configuration file."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror or exc}") from None
    cfg = parse_config(text, path.parent.resolve())
    if validate_inputs:
        cfg.load_inputs()
    return cfg


def dump_config(cfg: RunConfig) -> str:
    """Serialize to INI text that :func:`parse_config` reads back unchanged."""
    v = cfg.valuation
    lines = [
        "[inputs]",
        f"dem = {cfg.dem}",
        f"r_factor = {cfg.r_factor}",
        f"k_factor = {cfg.k_factor}",
        f"landcover = {cfg.landcover}",
    ]
    if cfg.landcover_closing is not None:
        lines.append(f"landcover_closing = {cfg.landcover_closing}")
    lines.append(f"class_table = {cfg.class_table}")
    if cfg.scenario_class_table is not None:
        lines.append(f"scenario_class_table = {cfg.scenario_class_table}")
    if cfg.asset_classes is not None:
        lines += ["", "[assets]", "classes = " + ", ".join(str(c) for c in cfg.asset_classes)]
    lines += [
        "",
        "[periods]",
        f"baseline = {cfg.periods[0]}",
        f"scenario = {cfg.periods[1]}",
        "",
        "[valuation]",
        f"sediment_unit_cost = {format_value(v.sediment_unit_cost)}",
        f"discount_rate = {format_value(v.discount_rate)}",
        f"horizon_years = {v.horizon_years}",
        f"annuity_timing = {v.annuity_timing}",
        f"carbon_price = {format_value(v.carbon_price)}",
        "scc_prices = " + ", ".join(format_value(p) for p in v.scc_prices),
        f"c_to_co2 = {format_value(v.c_to_co2)}",
        "",
        "[hydrology]",
        f"max_slope_length = {format_value(cfg.max_slope_length)}",
        "",
        "[reporting]",
        f"alternative = {cfg.alternative}",
        f"output_dir = {cfg.output_dir}",
        f"per_ha_total = {cfg.per_ha_total}",
    ]
    return "\n".join(lines) + "\n"
