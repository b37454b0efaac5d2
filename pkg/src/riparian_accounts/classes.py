"""Per-land-cover-class parameter table and the optimal-scenario rule.

The table is a CSV file whose header is exactly :data:`FIELDS`.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, fields, replace
from typing import Iterable, Iterator, Mapping

from .errors import ParameterError

FIELDS = (
    "class_id",
    "name",
    "native",
    "c_factor",
    "p_factor",
    "trap_eff",
    "carbon_above",
    "carbon_below",
    "carbon_dead",
)
CARBON_POOLS = ("carbon_above", "carbon_below", "carbon_dead")
_FRACTIONS = ("c_factor", "p_factor", "trap_eff")

_TRUE = {"true", "yes", "1", "y", "t"}
_FALSE = {"false", "no", "0", "n", "f"}


@dataclass(frozen=True)
class ClassParameterRow:
    class_id: int
    name: str
    native: bool
    c_factor: float
    p_factor: float
    trap_eff: float
    carbon_above: float  # t C/ha
    carbon_below: float
    carbon_dead: float

    def __post_init__(self):
        for f in _FRACTIONS:
            v = getattr(self, f)
            if not (math.isfinite(v) and 0.0 <= v <= 1.0):
                raise ParameterError(f"class {self.class_id} ({self.name}): {f} = {v} outside [0, 1]")
        for f in CARBON_POOLS:
            v = getattr(self, f)
            if not (math.isfinite(v) and v >= 0.0):
                raise ParameterError(f"class {self.class_id} ({self.name}): {f} = {v} is negative")

    @property
    def carbon_density(self) -> float:
        """Total carbon across the three pools (t C/ha)."""
        return self.carbon_above + self.carbon_below + self.carbon_dead


class ClassTable(Mapping[int, ClassParameterRow]):
    """Ordered, read-only mapping ``class_id -> ClassParameterRow``."""

    def __init__(self, rows: Iterable[ClassParameterRow]):
        self._rows: dict[int, ClassParameterRow] = {}
        for row in rows:
            if row.class_id in self._rows:
                raise ParameterError(f"duplicate class_id {row.class_id}")
            self._rows[row.class_id] = row

    def __getitem__(self, class_id: int) -> ClassParameterRow:
        try:
            return self._rows[class_id]
        except KeyError:
            raise ParameterError(f"class {class_id} missing from parameter table") from None

    def __iter__(self) -> Iterator[int]:
        return iter(self._rows)

    def __len__(self) -> int:
        return len(self._rows)

    def __eq__(self, other):
        if isinstance(other, ClassTable):
            return list(self._rows.values()) == list(other._rows.values())
        return NotImplemented

    def __repr__(self):
        return f"ClassTable({list(self._rows.values())!r})"

    def rows(self) -> list[ClassParameterRow]:
        return list(self._rows.values())

    def names(self) -> dict[int, str]:
        return {k: r.name for k, r in self._rows.items()}

    def column(self, field: str) -> dict[int, float]:
        return {k: getattr(r, field) for k, r in self._rows.items()}

    def require(self, class_ids: Iterable[int]) -> None:
        missing = sorted(set(class_ids) - set(self._rows))
        if missing:
            raise ParameterError(f"classes {missing} missing from parameter table")


def _parse_bool(text: str, where: str) -> bool:
    t = text.strip().lower()
    if t in _TRUE:
        return True
    if t in _FALSE:
        return False
    raise ParameterError(f"{where}: cannot read {text!r} as a boolean")


def read_class_table(text: str) -> ClassTable:
    reader = csv.reader(io.StringIO(text))
    try:
        header = [h.strip() for h in next(reader)]
    except StopIteration:
        raise ParameterError("class table is empty") from None
    if tuple(header) != FIELDS:
        raise ParameterError(f"class table header must be {','.join(FIELDS)}; got {','.join(header)}")
    rows = []
    for lineno, rec in enumerate(reader, start=2):
        if not rec or all(not x.strip() for x in rec):
            continue
        if len(rec) != len(FIELDS):
            raise ParameterError(f"class table line {lineno}: expected {len(FIELDS)} fields, got {len(rec)}")
        where = f"class table line {lineno}"
        try:
            values = dict(zip(FIELDS, rec))
            rows.append(
                ClassParameterRow(
                    class_id=int(values["class_id"]),
                    name=values["name"].strip(),
                    native=_parse_bool(values["native"], where),
                    **{f: float(values[f]) for f in FIELDS[3:]},
                )
            )
        except ValueError as exc:
            if isinstance(exc, ParameterError):
                raise
            raise ParameterError(f"{where}: {exc}") from None
    if not rows:
        raise ParameterError("class table has no rows")
    return ClassTable(rows)


def write_class_table(table: ClassTable) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(FIELDS)
    for row in table.rows():
        rec = []
        for f in fields(row):
            v = getattr(row, f.name)
            if isinstance(v, bool):
                rec.append("true" if v else "false")
            elif isinstance(v, float):
                rec.append(repr(v))
            else:
                rec.append(str(v))
        w.writerow(rec)
    return buf.getvalue()


def load_class_table(path) -> ClassTable:
    with open(path, encoding="utf-8", newline="") as fh:
        return read_class_table(fh.read())


def optimal_scenario_params(base: ClassTable) -> ClassTable:
    """Lift every native class to the best native performance.

    Native ``trap_eff`` becomes the maximum ``trap_eff`` over native
    classes, and each carbon pool becomes that pool's native maximum.
    Non-native classes are returned unchanged.
    """
    native = [r for r in base.rows() if r.native]
    if not native:
        raise ParameterError("optimal scenario needs at least one native class")
    best = {"trap_eff": max(r.trap_eff for r in native)}
    for pool in CARBON_POOLS:
        best[pool] = max(getattr(r, pool) for r in native)
    return ClassTable(replace(r, **best) if r.native else r for r in base.rows())
