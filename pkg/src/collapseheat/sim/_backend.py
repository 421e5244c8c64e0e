"""Pick the compiled kernels when available, else the numpy fallback.

Set ``COLLAPSEHEAT_PURE_PYTHON=1`` to force the fallback at import time.
"""

import os
from types import ModuleType

from . import _fallback

try:
    if os.environ.get("COLLAPSEHEAT_PURE_PYTHON", "") not in ("", "0"):
        raise ImportError("pure-Python backend requested")
    from . import _kernels as _compiled
except ImportError:
    _compiled = None

BACKENDS = {"numpy": _fallback}
if _compiled is not None:
    BACKENDS["cython"] = _compiled

DEFAULT_BACKEND = "cython" if _compiled is not None else "numpy"


def get_backend(name: str | None = None) -> ModuleType:
    name = DEFAULT_BACKEND if name is None else name
    try:
        return BACKENDS[name]
    except KeyError:
        raise ValueError(f"backend {name!r} unavailable; have {sorted(BACKENDS)}") from None
