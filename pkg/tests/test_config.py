from pathlib import Path

import pytest

from riparian_accounts.config import dump_config, load_config, parse_config
from riparian_accounts.errors import ConfigError
from riparian_accounts.valuation import ValuationParams

MINIMAL = """\
[inputs]
dem = dem.asc
r_factor = r_factor.asc
k_factor = k_factor.asc
landcover = landcover.asc
class_table = classes.csv
"""


def write(dirpath: Path, text: str, name="run.ini") -> Path:
    p = dirpath / name
    p.write_text(text)
    return p


class TestParse:
    def test_minimal_gets_defaults(self, fixture_copy):
        cfg = load_config(write(fixture_copy, MINIMAL))
        assert cfg.valuation == ValuationParams()
        assert cfg.periods == ("baseline", "scenario")
        assert cfg.alternative == "voluntary"
        assert cfg.per_ha_total == "area_weighted"
        assert cfg.output_dir == (fixture_copy / "natcap_out").resolve()
        assert cfg.asset_classes is None and cfg.scenario_class_table is None

    def test_relative_paths_resolve_against_config_dir(self, fixture_copy, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        cfg = load_config(write(fixture_copy, MINIMAL))
        assert cfg.dem == (fixture_copy / "dem.asc").resolve()

    def test_missing_required_key(self, fixture_copy):
        with pytest.raises(ConfigError, match="inputs.dem"):
            parse_config(MINIMAL.replace("dem = dem.asc\n", ""), fixture_copy)

    def test_missing_file(self, fixture_copy):
        with pytest.raises(ConfigError, match="file not found"):
            parse_config(MINIMAL.replace("dem.asc", "nope.asc"), fixture_copy)

    def test_missing_config(self, tmp_path):
        with pytest.raises(ConfigError, match="cannot read config"):
            load_config(tmp_path / "absent.ini")

    @pytest.mark.parametrize("extra, msg", [("[extras]\nx = 1\n", r"unknown section \[extras\]"), ("[valuation]\nprice = 3\n", "unknown key valuation.price")])
    def test_unknown_names(self, fixture_copy, extra, msg):
        with pytest.raises(ConfigError, match=msg):
            parse_config(MINIMAL + extra, fixture_copy)

    @pytest.mark.parametrize(
        "extra, msg",
        [
            ("[valuation]\ndiscount_rate = seven\n", "valuation.discount_rate"),
            ("[valuation]\nhorizon_years = 2.5\n", "integer"),
            ("[valuation]\ndiscount_rate = -0.5\n", "valuation"),
            ("[valuation]\nannuity_timing = sometimes\n", "valuation"),
            ("[reporting]\nalternative = leaflet\n", "reporting.alternative"),
            ("[reporting]\nper_ha_total = median\n", "reporting.per_ha_total"),
            ("[hydrology]\nmax_slope_length = 0\n", "max_slope_length"),
            ("[periods]\nbaseline = 2013\nscenario = 2013\n", "must differ"),
            ("[assets]\nclasses = a, b\n", "assets.classes"),
        ],
    )
    def test_bad_values(self, fixture_copy, extra, msg):
        with pytest.raises(ConfigError, match=msg):
            parse_config(MINIMAL + extra, fixture_copy)

    def test_syntax_error(self, fixture_copy):
        with pytest.raises(ConfigError, match="cannot parse"):
            parse_config("dem = x\n", fixture_copy)


class TestInputs:
    def test_trap_eff_above_one_fails(self, fixture_copy):
        p = fixture_copy / "classes.csv"
        lines = p.read_text().splitlines()
        fields = lines[1].split(",")
        fields[5] = "1.5"
        lines[1] = ",".join(fields)
        p.write_text("\n".join(lines) + "\n")
        with pytest.raises(ConfigError, match="trap_eff = 1.5"):
            load_config(write(fixture_copy, MINIMAL))

    def test_missing_landcover_class(self, fixture_copy):
        p = fixture_copy / "classes.csv"
        lines = p.read_text().splitlines()
        p.write_text("\n".join(ln for ln in lines if not ln.startswith("12,")) + "\n")
        with pytest.raises(ConfigError, match=r"classes \[12\] missing"):
            load_config(write(fixture_copy, MINIMAL))

    def test_misaligned_raster(self, fixture_copy):
        p = fixture_copy / "k_factor.asc"
        p.write_text(p.read_text().replace("cellsize 100", "cellsize 50", 1))
        with pytest.raises(ConfigError, match="inputs.k_factor is not aligned"):
            load_config(write(fixture_copy, MINIMAL))

    def test_asset_not_in_table(self, fixture_copy):
        with pytest.raises(ConfigError, match=r"\[42\]"):
            load_config(write(fixture_copy, MINIMAL + "[assets]\nclasses = 1, 42\n"))

    def test_scenario_table_class_mismatch(self, fixture_copy):
        p = fixture_copy / "classes_2023.csv"
        lines = p.read_text().splitlines()
        p.write_text("\n".join(lines[:-1]) + "\n")
        text = MINIMAL + "scenario_class_table = classes_2023.csv\n"
        with pytest.raises(ConfigError, match="differ"):
            load_config(write(fixture_copy, text))

    def test_default_scenario_is_native_max(self, fixture_copy):
        cfg = load_config(write(fixture_copy, MINIMAL))
        inputs = cfg.load_inputs()
        native_trap = max(r.trap_eff for r in inputs.classes.rows() if r.native)
        assert inputs.scenario_classes[1].trap_eff == native_trap

    def test_assets_default_to_landcover_classes(self, fixture_copy):
        cfg = load_config(write(fixture_copy, MINIMAL))
        assert cfg.assets(cfg.load_inputs()) == tuple(range(1, 13))


class TestEcho:
    def test_round_trip(self, fixture_cfg, tmp_path):
        text = dump_config(fixture_cfg)
        again = load_config(write(tmp_path, text))
        assert again == fixture_cfg
        assert dump_config(again) == text

    def test_round_trip_non_default(self, fixture_copy, tmp_path):
        extra = "[valuation]\ndiscount_rate = 0.035\nscc_prices = 50\nannuity_timing = ordinary\n[reporting]\nalternative = notes_only\n"
        cfg = load_config(write(fixture_copy, MINIMAL + extra))
        assert load_config(write(tmp_path, dump_config(cfg))) == cfg
