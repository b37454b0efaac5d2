"""Backend selection for the hot loops.

The compiled extension is used when it imports; otherwise the pure-Python
kernels are used. Set ``RIPARIAN_KERNELS=python`` to force the fallback at
import, or call :func:`set_backend` (tests and the benchmark run both).
"""
from __future__ import annotations

import os
from types import ModuleType

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

OUTLET = _pykernels.OUTLET
NODIR = _pykernels.NODIR
DR = _pykernels.DR
DC = _pykernels.DC

_BACKENDS = {"python": _pykernels}
if _ckernels is not None:
    _BACKENDS["cython"] = _ckernels

_active: ModuleType = _ckernels if _ckernels is not None else _pykernels


def available() -> list[str]:
    return sorted(_BACKENDS)


def backend_name() -> str:
    return "cython" if _active is _ckernels and _ckernels is not None else "python"


def set_backend(name: str) -> None:
    global _active
    try:
        _active = _BACKENDS[name]
    except KeyError:
        raise ValueError(f"backend {name!r} not available; choose from {available()}") from None


def active() -> ModuleType:
    return _active


if os.environ.get("RIPARIAN_KERNELS"):
    set_backend(os.environ["RIPARIAN_KERNELS"])
