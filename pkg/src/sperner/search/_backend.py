"""Kernel backend selection.

SPERNER_BACKEND picks the implementation: "compiled" insists on the
extension module, "pure" forces the Python kernels, "auto" (default)
prefers compiled and falls back silently.
"""

from __future__ import annotations

import os

from . import _kernels_py


def _load():
    choice = os.environ.get("SPERNER_BACKEND", "auto").strip().lower()
    if choice == "pure":
        return _kernels_py
    try:
        from . import _kernels  # type: ignore[attr-defined]

        return _kernels
    except ImportError:
        if choice == "compiled":
            raise ImportError(
                "SPERNER_BACKEND=compiled but the extension module is not "
                "built; reinstall with Cython available or unset the variable"
            )
        return _kernels_py


kernels = _load()

BACKEND: str = kernels.BACKEND
