"""Synthetic 60 x 60 riparian catchment used as the bundled example.

The nine reporting classes carry the published asset areas (1 ha cells).
Per-class parameters are *calibrated*: trap efficiencies are solved so that
trapped sediment matches a target per class, and carbon densities are set
so that class stocks match target tonnages. Nothing here recovers the
original rasters or parameters; it only gives the pipeline a catchment
whose figures are of the published magnitude.

Two configurations are written. ``config.ini`` reads an explicit 2023
scenario table (``classes_2023.csv``) calibrated to per-class 2023 targets.
``config_native_max.ini`` derives the scenario by the native-maximum
substitution; a bushland strip's cover factor is tuned so that its
portfolio total also lands on the 2023 target.

Regenerate the bundled files with ``python scripts/build_fixture.py``.
"""
from __future__ import annotations

from dataclasses import replace
from importlib import resources
from pathlib import Path

import numpy as np

from .classes import ClassParameterRow, ClassTable, optimal_scenario_params, write_class_table
from .erosion import RusleInputs, filtration_service, route_sediment, soil_loss
from .grid import Grid, LandCoverGrid, save_grid
from .hydrology import compute_ls, fill_pits, flow_accumulation, flow_direction_d8

NROWS = NCOLS = 60
CELLSIZE = 100.0
XLL, YLL = 300000.0, 6260000.0
NODATA = -9999.0
SEED = 2013
CHANNEL_COL = 30
REACH_START_ROW = 19

# class_id, name, native, area_ha,
# trapped t/yr and carbon t C targets for the baseline, then for the scenario
ASSET_CLASSES = (
    (1, "Cumberland Shale Plains Woodland", True, 58, 12378 / 250, 3987, 18485 / 250, 12446),
    (2, "Cumberland Red Gum Riverflat Forest", True, 141, 37500 / 250, 22382, 55650 / 250, 31581),
    (3, "Cumberland Shale-Sandstone Ironbark Forest", True, 26, 8150 / 250, 2230, 15085 / 250, 5590),
    (4, "Coastal Valleys Swamp Oak Riparian Forest", True, 9, 1260 / 250, 516, 2458 / 250, 1916),
    (5, "Sydney Turpentine Ironbark Forest", True, 9, 373 / 250, 535, 642 / 250, 1713),
    (6, "Grass", False, 68, 25744 / 250, 9744, 37822 / 250, 12220),
    (7, "Non-vegetated still waterbody", False, 39, 17458 / 250, 6955, 22595 / 250, 9455),
    (8, "Watercourse", False, 12, 6485 / 250, 1935, 9658 / 250, 3201),
    (9, "Medium Density Urban Fabric", False, 7, 1110 / 250, 511, 1119 / 250, 835),
)
BASELINE_SEDIMENT = {a[0]: a[4] for a in ASSET_CLASSES}
BASELINE_CARBON = {a[0]: a[5] for a in ASSET_CLASSES}
SCENARIO_SEDIMENT = {a[0]: a[6] for a in ASSET_CLASSES}
SCENARIO_CARBON = {a[0]: a[7] for a in ASSET_CLASSES}
ASSET_AREAS = {a[0]: a[3] for a in ASSET_CLASSES}
UPSLOPE_RESIDENTIAL = 10
UPSLOPE_GRAZING = 11
UPSLOPE_BUSHLAND = 12
OPTIMAL_TARGET_T = 163513 / 250
# Swamp oak patch on the western fringe of the reach, fed by a bushland strip
SWAMP_OAK_ROWS = (50, 59)
SWAMP_OAK_COL = CHANNEL_COL - 4

# (c_factor, p_factor, share of carbon in above / below / dead pools)
_COVER = {
    1: (0.006, 1.0, (0.62, 0.25, 0.13)),
    2: (0.004, 1.0, (0.66, 0.22, 0.12)),
    3: (0.006, 1.0, (0.60, 0.28, 0.12)),
    4: (0.005, 1.0, (0.58, 0.30, 0.12)),
    5: (0.006, 1.0, (0.64, 0.24, 0.12)),
    6: (0.030, 1.0, (0.30, 0.60, 0.10)),
    7: (0.0, 1.0, (0.20, 0.70, 0.10)),
    8: (0.0, 1.0, (0.25, 0.65, 0.10)),
    9: (0.010, 1.0, (0.50, 0.35, 0.15)),
}
_UPSLOPE_ROWS = (
    ClassParameterRow(UPSLOPE_RESIDENTIAL, "Upslope low density residential", False, 0.002, 1.0, 0.02, 12.0, 6.0, 2.0),
    ClassParameterRow(UPSLOPE_GRAZING, "Upslope cleared grazing land", False, 0.005, 0.8, 0.05, 10.0, 30.0, 1.0),
    ClassParameterRow(UPSLOPE_BUSHLAND, "Upslope remnant bushland", False, 0.001, 1.0, 0.1, 60.0, 25.0, 8.0),
)


def _grid(values) -> Grid:
    return Grid(NCOLS, NROWS, XLL, YLL, CELLSIZE, NODATA, np.asarray(values, dtype=np.float64))


def synthetic_rasters() -> dict[str, Grid]:
    """DEM, erosivity, erodibility and land cover for the fixture valley."""
    rng = np.random.default_rng(SEED)
    r, c = np.mgrid[0:NROWS, 0:NCOLS]
    d = np.abs(c - CHANNEL_COL)
    dem = 20.0 + 0.9 * (NROWS - 1 - r) + 4.0 * d + 0.15 * d**2 + rng.uniform(-1.0, 1.0, (NROWS, NCOLS))
    dem = np.round(dem, 3)
    r_factor = np.round(1450.0 + 120.0 * np.sin(np.pi * c / (NCOLS - 1)) + 1.5 * r, 3)
    k_factor = np.round(0.032 + 0.012 * r / (NROWS - 1), 5)

    lc = np.where(c < 20, UPSLOPE_RESIDENTIAL, UPSLOPE_GRAZING).astype(np.float64)
    band = (d <= 4) & (r >= REACH_START_ROW)
    lc[(r >= 48) & (c == CHANNEL_COL)] = 8
    lc[(r >= REACH_START_ROW) & (r < 48) & (c == CHANNEL_COL)] = 7
    lc[(r >= 38) & (r < 48) & (c == CHANNEL_COL - 1)] = 7
    oak = (r >= SWAMP_OAK_ROWS[0]) & (r < SWAMP_OAK_ROWS[1])
    lc[oak & (c == SWAMP_OAK_COL)] = 4
    lc[oak & (c < SWAMP_OAK_COL)] = UPSLOPE_BUSHLAND
    rest = band & ~np.isin(lc, (4, 7, 8))
    fill = np.concatenate([np.full(a[3], a[0], dtype=np.float64) for a in ASSET_CLASSES if a[0] not in (4, 7, 8)])
    assert fill.size == rest.sum(), (fill.size, rest.sum())
    lc[rest] = rng.permutation(fill)
    return {
        "dem": _grid(dem),
        "r_factor": _grid(r_factor),
        "k_factor": _grid(k_factor),
        "landcover": _grid(lc),
    }


def _with_carbon(row: ClassParameterRow, carbon_t: float) -> ClassParameterRow:
    fa, fb, _ = _COVER[row.class_id][2]
    density = carbon_t / ASSET_AREAS[row.class_id]
    above, below = density * fa, density * fb
    return replace(row, carbon_above=above, carbon_below=below, carbon_dead=density - above - below)


def initial_class_table() -> ClassTable:
    rows = []
    for cid, name, native, *_ in ASSET_CLASSES:
        c_f, p_f, _ = _COVER[cid]
        row = ClassParameterRow(cid, name, native, c_f, p_f, 0.1, 0.0, 0.0, 0.0)
        rows.append(_with_carbon(row, BASELINE_CARBON[cid]))
    return ClassTable([*rows, *_UPSLOPE_ROWS])


def _soil_loss(rasters: dict[str, Grid], table: ClassTable):
    lc = LandCoverGrid.from_grid(rasters["landcover"])
    filled = fill_pits(rasters["dem"])
    dirs = flow_direction_d8(filled)
    ls = compute_ls(filled, flow_accumulation(dirs))
    loss = soil_loss(RusleInputs.from_table(rasters["r_factor"], rasters["k_factor"], ls, table), lc)
    return lc, dirs, loss


def calibrate_trap_efficiencies(
    rasters: dict[str, Grid],
    table: ClassTable,
    targets=BASELINE_SEDIMENT,
    tol: float = 1e-13,
    max_iter: int = 1000,
) -> ClassTable:
    """Solve asset-class trap efficiencies for target trapped tonnes.

    Fixed-point iteration ``e <- e * target / trapped``; trapping in a class
    rises monotonically with its own efficiency, so this converges quickly
    when the targets are attainable.
    """
    lc, dirs, loss = _soil_loss(rasters, table)
    mask = lc.masked(list(ASSET_AREAS))
    eff = table.column("trap_eff")
    for _ in range(max_iter):
        got = filtration_service(route_sediment(loss, dirs, eff, lc), mask)
        worst = max(abs(got[c].quantity / t - 1.0) for c, t in targets.items())
        if worst < tol:
            break
        for c, t in targets.items():
            eff[c] = min(eff[c] * t / got[c].quantity, 1.0)
    else:
        raise RuntimeError(f"calibration did not converge (worst relative error {worst:.3g})")
    return ClassTable(replace(row, trap_eff=eff[c]) for c, row in table.items())


def optimal_total(rasters: dict[str, Grid], table: ClassTable) -> float:
    lc, dirs, loss = _soil_loss(rasters, table)
    eff = optimal_scenario_params(table).column("trap_eff")
    got = filtration_service(route_sediment(loss, dirs, eff, lc), lc.masked(list(ASSET_AREAS)))
    return sum(q.quantity for q in got.values())


def calibrate_baseline(rasters: dict[str, Grid], table: ClassTable, bracket=(3e-4, 2e-3), tol: float = 1e-10) -> ClassTable:
    """Calibrate baseline trapping per class, then the optimal-scenario total.

    The bushland strip's cover factor sets the load reaching the swamp oak
    patch and hence the native maximum trap efficiency; it is bisected (in
    log space) until the optimal-scenario total hits its target.
    """
    def solve(c_bush: float) -> tuple[ClassTable, float]:
        t = ClassTable(replace(row, c_factor=c_bush) if c == UPSLOPE_BUSHLAND else row for c, row in table.items())
        t = calibrate_trap_efficiencies(rasters, t)
        return t, optimal_total(rasters, t) - OPTIMAL_TARGET_T

    lo, hi = np.log(bracket[0]), np.log(bracket[1])
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        t, err = solve(float(np.exp(mid)))
        if abs(err) < tol * OPTIMAL_TARGET_T:
            return t
        # higher bushland loss lowers the native maximum and the optimal total
        if err > 0:
            lo = mid
        else:
            hi = mid
    raise RuntimeError("optimal-scenario calibration did not converge")


CONFIG_TEXT = """\
# Bundled synthetic catchment; parameters are calibrated, not observed.
[inputs]
dem = dem.asc
r_factor = r_factor.asc
k_factor = k_factor.asc
landcover = landcover.asc
class_table = classes.csv

[assets]
classes = 1, 2, 3, 4, 5, 6, 7, 8, 9

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
output_dir = natcap_out
per_ha_total = area_weighted
"""


def calibrate_scenario(rasters: dict[str, Grid], baseline: ClassTable) -> ClassTable:
    """Scenario table: 2023 carbon densities and re-solved trap efficiencies."""
    table = ClassTable(_with_carbon(row, SCENARIO_CARBON[c]) if c in SCENARIO_CARBON else row for c, row in baseline.items())
    return calibrate_trap_efficiencies(rasters, table, SCENARIO_SEDIMENT)


def write_fixture(directory) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    rasters = synthetic_rasters()
    baseline = calibrate_baseline(rasters, initial_class_table())
    scenario = calibrate_scenario(rasters, baseline)
    for name, g in rasters.items():
        save_grid(g, directory / f"{name}.asc")
    (directory / "classes.csv").write_text(write_class_table(baseline), encoding="utf-8")
    (directory / "classes_2023.csv").write_text(write_class_table(scenario), encoding="utf-8")
    explicit = CONFIG_TEXT.replace("class_table = classes.csv\n", "class_table = classes.csv\nscenario_class_table = classes_2023.csv\n")
    (directory / "config.ini").write_text(explicit, encoding="utf-8")
    (directory / "config_native_max.ini").write_text(CONFIG_TEXT, encoding="utf-8")


def fixture_dir() -> Path:
    """Directory of the bundled fixture inside the installed package."""
    return Path(str(resources.files("riparian_accounts") / "data" / "fixture"))


def fixture_config(native_max: bool = False) -> Path:
    return fixture_dir() / ("config_native_max.ini" if native_max else "config.ini")
