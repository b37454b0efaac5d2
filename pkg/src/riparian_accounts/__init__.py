"""Riparian natural capital accounting.

Models sediment filtration (RUSLE soil loss routed down a D8 network with
per-class trapping) and carbon storage (three-pool lookup by land cover),
values both, and renders extent, physical and monetary accounts plus
financial-statement disclosures.
"""
from .grid import Grid, LandCoverGrid, assert_aligned, cell_area_ha, read_ascii_grid, write_ascii_grid
from .kernels import backend_name, set_backend

__all__ = [
    "Grid",
    "LandCoverGrid",
    "assert_aligned",
    "backend_name",
    "cell_area_ha",
    "read_ascii_grid",
    "set_backend",
    "write_ascii_grid",
]
__version__ = "0.1.0"
