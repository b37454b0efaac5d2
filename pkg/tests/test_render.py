import json

import pytest

from riparian_accounts.render import BLANK, NA_TEXT, Column, Table, format_money, format_number

COLS = [Column("name", "Name", "text"), Column("t", "Tonnes", decimals=1), Column("v", "Value", "money")]


def table(**kw):
    return Table("Demo", COLS, [{"name": "a", "t": 1.25, "v": 1234.4}, {"name": "b", "t": None, "v": BLANK}], {"name": "Total", "t": 1.25, "v": 1234.4}, **kw)


class TestFormatting:
    @pytest.mark.parametrize("v, text", [(1234.4, "$1,234"), (-1234.6, "($1,235)"), (-0.4, "$0"), (0, "$0"), (1e6, "$1,000,000")])
    def test_money(self, v, text):
        assert format_money(v) == text

    @pytest.mark.parametrize("v, d, text", [(1.25, 1, "1.2"), (-0.04, 1, "0.0"), (-3.0, 0, "(3)"), (12345.678, 0, "12,346")])
    def test_number(self, v, d, text):
        assert format_number(v, d) == text


class TestTable:
    def test_text_layout(self):
        lines = table().to_text().splitlines()
        assert lines[:2] == ["Demo", "===="]
        assert lines[2].split() == ["Name", "Tonnes", "Value"]
        assert lines[4].split() == ["a", "1.2", "$1,234"]
        assert lines[5].split() == ["b", NA_TEXT]  # blank money cell prints nothing
        assert lines[-1].split() == ["Total", "1.2", "$1,234"]

    def test_csv_unrounded_and_markers(self):
        rows = table().to_csv().splitlines()
        assert rows[0] == "name,t,v"
        assert rows[1] == "a,1.25,1234.4"
        assert rows[2] == "b,n/a,"

    def test_json(self):
        d = json.loads(table(metadata={"unit": "t"}).to_json())
        assert d["unit"] == "t"
        assert d["rows"][0] == {"name": "a", "t": 1.25, "v": 1234.4}
        assert d["rows"][1] == {"name": "b", "t": None}
        assert d["totals"]["v"] == 1234.4

    def test_preamble(self):
        t = table(preamble="Some words.")
        assert t.to_text().splitlines()[2] == "Some words."
        assert json.loads(t.to_json())["text"] == "Some words."

    def test_render_dispatch(self):
        t = table()
        assert t.render("csv") == t.to_csv()
        with pytest.raises(ValueError, match="xlsx"):
            t.render("xlsx")

    def test_blank_is_singleton(self):
        assert BLANK is type(BLANK)()
