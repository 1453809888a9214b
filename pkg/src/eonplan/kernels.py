"""Kernel backend selection: compiled extension with pure-Python fallback.

The compiled module is preferred when importable. Set the environment
variable ``EONPLAN_PURE=1`` to force the numpy implementations (used by the
benchmark and the backend-equivalence tests).
"""

from __future__ import annotations

import os

from eonplan import _kernels_py

try:
    from eonplan import _core
except ImportError:  # extension not built on this platform
    _core = None

_FORCE_PURE = os.environ.get("EONPLAN_PURE", "") not in ("", "0")

if _core is not None and not _FORCE_PURE:
    BACKEND = "compiled"
    nli_bracket = _core.nli_bracket
    first_free_window = _core.first_free_window
else:
    BACKEND = "pure-python"
    nli_bracket = _kernels_py.nli_bracket
    first_free_window = _kernels_py.first_free_window


def backend_name() -> str:
    return BACKEND
