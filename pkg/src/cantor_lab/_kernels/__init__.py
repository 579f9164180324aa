"""Backend selection for the hot loops.

The compiled module is used when it imports; ``CANTOR_LAB_PURE=1`` forces the
numpy fallback.
"""

from __future__ import annotations

import os
from types import ModuleType

from . import _pykernels

try:
    from . import _ckernels  # type: ignore[attr-defined]
except ImportError:  # extension not built
    _ckernels = None


def get_backend(name: str | None = None) -> ModuleType:
    if name is None:
        name = "python" if os.environ.get("CANTOR_LAB_PURE") == "1" or _ckernels is None else "cython"
    if name == "python":
        return _pykernels
    if name == "cython":
        if _ckernels is None:
            raise ImportError("compiled kernels are not available")
        return _ckernels
    raise ValueError(f"unknown backend {name!r}")


_active = get_backend()
BACKEND = "cython" if _active is _ckernels and _ckernels is not None else "python"
HAVE_COMPILED = _ckernels is not None

ruler_word = _active.ruler_word
rewrite_grid = _active.rewrite_grid
relation_profiles = _active.relation_profiles
transform_relations = _active.transform_relations

__all__ = [
    "BACKEND",
    "HAVE_COMPILED",
    "get_backend",
    "ruler_word",
    "rewrite_grid",
    "relation_profiles",
    "transform_relations",
]
