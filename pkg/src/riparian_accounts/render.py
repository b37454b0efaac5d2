"""Plain-text, CSV and JSON rendering of account and statement tables.

Text output rounds for presentation (whole dollars, whole tonnes, per-ha to
one decimal by default). CSV and JSON carry unrounded values so every
printed figure can be traced back to the account cell it came from.

A value that exists in principle but is not available prints as ``n/a``
(``null`` in JSON); a cell that does not apply to its row is blank (the key
is left out in JSON).
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Any, Sequence

NA_TEXT = "n/a"


class _NotApplicable:
    """Cell that has no meaning for its row (rendered blank, unlike n/a)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "BLANK"


BLANK = _NotApplicable()


@dataclass(frozen=True)
class Column:
    key: str
    header: str
    kind: str = "number"  # text | int | number | money
    decimals: int = 0


def format_money(v: float) -> str:
    # "-0" would read as a loss
    r = round(v)
    if r == 0:
        return "$0"
    if r < 0:
        return f"(${-r:,.0f})"
    return f"${r:,.0f}"


def format_number(v: float, decimals: int = 0) -> str:
    r = round(v, decimals) + 0.0  # folds -0.0 into 0.0
    if r < 0:
        return f"({-r:,.{decimals}f})"
    return f"{r:,.{decimals}f}"


def format_cell(value: Any, col: Column) -> str:
    if value is BLANK:
        return ""
    if value is None:
        return NA_TEXT
    if col.kind == "text":
        return str(value)
    if col.kind == "int":
        return str(int(value))
    if col.kind == "money":
        return format_money(float(value))
    return format_number(float(value), col.decimals)


def _plain(value: Any):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


@dataclass
class Table:
    title: str
    columns: Sequence[Column]
    rows: list[dict]
    totals: dict | None = None
    metadata: dict = field(default_factory=dict)
    preamble: str = ""

    def to_text(self) -> str:
        header = [c.header for c in self.columns]
        body = [[format_cell(r.get(c.key, BLANK), c) for c in self.columns] for r in self.rows]
        if self.totals is not None:
            body.append([format_cell(self.totals.get(c.key, BLANK), c) for c in self.columns])
        widths = [max(len(h), *(len(b[i]) for b in body)) if body else len(h) for i, h in enumerate(header)]

        def line(cells):
            out = []
            for i, (cell, col) in enumerate(zip(cells, self.columns)):
                out.append(cell.ljust(widths[i]) if col.kind == "text" else cell.rjust(widths[i]))
            return "  ".join(out).rstrip()

        rule = "  ".join("-" * w for w in widths)
        parts = [self.title, "=" * len(self.title)]
        if self.preamble:
            parts += [self.preamble.rstrip(), ""]
        parts += [line(header), rule]
        parts += [line(b) for b in body[: len(self.rows)]]
        if self.totals is not None:
            parts += [rule, line(body[-1])]
        return "\n".join(parts) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([c.key for c in self.columns])
        rows = list(self.rows) + ([self.totals] if self.totals is not None else [])
        for r in rows:
            out = []
            for c in self.columns:
                v = _plain(r.get(c.key, BLANK))
                if v is BLANK:
                    out.append("")
                elif v is None:
                    out.append(NA_TEXT)
                else:
                    out.append(repr(v) if isinstance(v, float) else str(v))
            w.writerow(out)
        return buf.getvalue()

    def to_dict(self) -> dict:
        def clean(r):
            cells = ((c.key, _plain(r.get(c.key, BLANK))) for c in self.columns)
            return {k: v for k, v in cells if v is not BLANK}

        d = {"title": self.title}
        d.update(self.metadata)
        if self.preamble:
            d["text"] = self.preamble
        d["columns"] = [{"key": c.key, "header": c.header} for c in self.columns]
        d["rows"] = [clean(r) for r in self.rows]
        d["totals"] = clean(self.totals) if self.totals is not None else None
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"

    def render(self, fmt: str) -> str:
        if fmt == "txt":
            return self.to_text()
        if fmt == "csv":
            return self.to_csv()
        if fmt == "json":
            return self.to_json()
        raise ValueError(f"unknown format {fmt!r}; expected txt, csv or json")
