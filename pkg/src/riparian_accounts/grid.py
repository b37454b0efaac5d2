"""Raster data model and ESRI ASCII grid serialization.

Row 0 is the northernmost row; every module indexes cells as ``(row, col)``.
No coordinate reference system is carried: rasters are co-registered by
assertion (:func:`assert_aligned`), never reprojected.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

from .errors import AlignmentError, GridFormatError

HEADER_KEYS = ("ncols", "nrows", "xllcorner", "yllcorner", "cellsize", "nodata_value")
_HEADER_NAMES = ("ncols", "nrows", "xllcorner", "yllcorner", "cellsize", "NODATA_value")


@dataclass(frozen=True, eq=False)
class Grid:
    """Single-band raster.

    ``values`` is a read-only ``(nrows, ncols)`` float64 array. A cell is
    valid iff its value differs from ``nodata``.
    """

    ncols: int
    nrows: int
    xll: float
    yll: float
    cellsize: float
    nodata: float
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.ncols < 1 or self.nrows < 1:
            raise ValueError(f"grid dimensions must be positive, got {self.nrows}x{self.ncols}")
        if not self.cellsize > 0:
            raise ValueError(f"cellsize must be > 0, got {self.cellsize}")
        values = np.array(self.values, dtype=np.float64)
        if values.size != self.ncols * self.nrows:
            raise ValueError(
                f"values length {values.size} != ncols*nrows = {self.ncols * self.nrows}"
            )
        values = values.reshape(self.nrows, self.ncols)
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @classmethod
    def from_array(cls, array, cellsize=1.0, xll=0.0, yll=0.0, nodata=-9999.0) -> "Grid":
        array = np.asarray(array, dtype=np.float64)
        if array.ndim != 2:
            raise ValueError("expected a 2-D array")
        nrows, ncols = array.shape
        return cls(ncols, nrows, float(xll), float(yll), float(cellsize), float(nodata), array)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    @property
    def valid(self) -> np.ndarray:
        """Boolean mask of cells holding data."""
        return self.values != self.nodata

    def with_values(self, values, nodata: float | None = None) -> "Grid":
        """Same geometry, new cell values."""
        return Grid(
            self.ncols,
            self.nrows,
            self.xll,
            self.yll,
            self.cellsize,
            self.nodata if nodata is None else float(nodata),
            values,
        )

    def __eq__(self, other):
        if not isinstance(other, Grid):
            return NotImplemented
        return (
            self.ncols == other.ncols
            and self.nrows == other.nrows
            and self.xll == other.xll
            and self.yll == other.yll
            and self.cellsize == other.cellsize
            and self.nodata == other.nodata
            and np.array_equal(self.values, other.values)
        )

    __hash__ = None


@dataclass(frozen=True, eq=False)
class LandCoverGrid:
    """Grid of integer class identifiers."""

    grid: Grid
    classes: tuple[int, ...]

    def __post_init__(self):
        present = set(self._present())
        missing = present - set(self.classes)
        if missing:
            raise ValueError(f"land-cover values {sorted(missing)} not in class list")
        object.__setattr__(self, "classes", tuple(int(c) for c in self.classes))

    def _present(self) -> list[int]:
        vals = self.grid.values[self.grid.valid]
        if vals.size and not np.all(vals == np.round(vals)):
            raise ValueError("land-cover classes must be integers")
        return [int(v) for v in np.unique(vals)]

    @classmethod
    def from_grid(cls, grid: Grid, classes: Iterable[int] | None = None) -> "LandCoverGrid":
        """Wrap ``grid``; the class list defaults to the identifiers present."""
        if classes is None:
            vals = grid.values[grid.valid]
            classes = sorted(int(v) for v in np.unique(vals))
        return cls(grid, tuple(classes))

    @property
    def valid(self) -> np.ndarray:
        return self.grid.valid

    def class_index(self) -> np.ndarray:
        """Integer array of class ids, ``-1`` on nodata cells."""
        out = np.full(self.grid.shape, -1, dtype=np.int64)
        v = self.grid.valid
        out[v] = self.grid.values[v].astype(np.int64)
        return out

    def cell_counts(self) -> dict[int, int]:
        ids = self.class_index()
        return {c: int(np.count_nonzero(ids == c)) for c in self.classes}

    def areas_ha(self) -> dict[int, float]:
        a = cell_area_ha(self.grid)
        return {c: n * a for c, n in self.cell_counts().items()}

    def masked(self, keep: Iterable[int]) -> "LandCoverGrid":
        """Restrict to the classes in ``keep``; other cells become nodata."""
        keep = [int(k) for k in keep]
        inside = np.isin(self.class_index(), keep)
        values = np.where(inside, self.grid.values, self.grid.nodata)
        return LandCoverGrid(self.grid.with_values(values), tuple(c for c in self.classes if c in keep))


def cell_area_ha(g: Grid) -> float:
    """Area of one cell in hectares (cellsize in metres)."""
    return g.cellsize * g.cellsize / 10000.0


def assert_aligned(a: Grid, b: Grid, rtol: float = 1e-6) -> None:
    """Raise :class:`AlignmentError` unless ``a`` and ``b`` share geometry."""
    if a.ncols != b.ncols:
        raise AlignmentError(f"ncols mismatch: {a.ncols} vs {b.ncols}")
    if a.nrows != b.nrows:
        raise AlignmentError(f"nrows mismatch: {a.nrows} vs {b.nrows}")
    for name in ("cellsize", "xll", "yll"):
        x, y = getattr(a, name), getattr(b, name)
        if not math.isclose(x, y, rel_tol=rtol):
            raise AlignmentError(f"{name} mismatch: {x!r} vs {y!r}")


def combine(func: Callable[..., np.ndarray], *grids: Grid, nodata: float | None = None) -> Grid:
    """Apply ``func`` cellwise to aligned grids, propagating nodata.

    ``func`` receives the full value arrays; cells invalid in any input are
    set to nodata in the output.
    """
    first = grids[0]
    for g in grids[1:]:
        assert_aligned(first, g)
    nodata = first.nodata if nodata is None else nodata
    valid = np.logical_and.reduce([g.valid for g in grids])
    with np.errstate(all="ignore"):
        out = np.asarray(func(*[g.values for g in grids]), dtype=np.float64)
    out = np.where(valid, out, nodata)
    return first.with_values(out, nodata=nodata)


def format_value(v: float) -> str:
    """Shortest text that re-parses to exactly ``v``."""
    v = float(v)
    if v.is_integer() and abs(v) < 1e16:
        return str(int(v))
    return repr(v)


def write_ascii_grid(g: Grid) -> str:
    lines = [
        f"ncols {g.ncols}",
        f"nrows {g.nrows}",
        f"xllcorner {format_value(g.xll)}",
        f"yllcorner {format_value(g.yll)}",
        f"cellsize {format_value(g.cellsize)}",
        f"NODATA_value {format_value(g.nodata)}",
    ]
    for row in g.values:
        lines.append(" ".join(format_value(v) for v in row))
    return "\n".join(lines) + "\n"


def read_ascii_grid(text: str) -> Grid:
    """Parse ESRI ASCII grid text.

    The six header lines must appear in the canonical order; keys are
    case-insensitive.
    """
    lines = text.splitlines()
    header = []
    for i, key in enumerate(HEADER_KEYS):
        if i >= len(lines):
            raise GridFormatError(f"line {i + 1}: missing header key {_HEADER_NAMES[i]!r}")
        parts = lines[i].split()
        if len(parts) != 2 or parts[0].lower() != key:
            raise GridFormatError(
                f"line {i + 1}: expected header key {_HEADER_NAMES[i]!r}, got {lines[i].strip()!r}"
            )
        token = parts[1]
        try:
            value = float(token)
        except ValueError:
            raise GridFormatError(f"line {i + 1}: non-numeric header value {token!r}") from None
        if key in ("ncols", "nrows"):
            if not value.is_integer() or value < 1:
                raise GridFormatError(f"line {i + 1}: {key} must be a positive integer, got {token!r}")
            value = int(value)
        header.append(value)
    ncols, nrows, xll, yll, cellsize, nodata = header
    if not cellsize > 0:
        raise GridFormatError(f"line 5: cellsize must be > 0, got {cellsize!r}")

    expected = ncols * nrows
    values = np.empty(expected, dtype=np.float64)
    n = 0
    for lineno, line in enumerate(lines[6:], start=7):
        for token in line.split():
            if n >= expected:
                raise GridFormatError(f"expected {expected} values, got more (line {lineno})")
            try:
                values[n] = float(token)
            except ValueError:
                raise GridFormatError(f"line {lineno}: non-numeric token {token!r}") from None
            n += 1
    if n != expected:
        raise GridFormatError(f"expected {expected} values, got {n}")
    return Grid(ncols, nrows, xll, yll, cellsize, nodata, values)


def load_grid(path) -> Grid:
    with open(path, encoding="ascii") as fh:
        text = fh.read()
    try:
        return read_ascii_grid(text)
    except GridFormatError as exc:
        raise GridFormatError(f"{path}: {exc}") from None


def save_grid(g: Grid, path) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(write_ascii_grid(g))
