"""Kernel selection.

The compiled extension is preferred; setting ``DSGCHAIN_PURE_PYTHON=1``
or a failed build falls back to ``_pykernels``.
"""

import os

from . import _pykernels

try:
    if os.environ.get("DSGCHAIN_PURE_PYTHON", "") not in ("", "0"):
        raise ImportError("pure-Python kernels requested")
    from . import _kernels
except ImportError:
    _kernels = None

BACKENDS = {"python": _pykernels}
if _kernels is not None:
    BACKENDS["compiled"] = _kernels

DEFAULT = "compiled" if _kernels is not None else "python"


def get(name=None):
    """Return the kernel module called ``name`` (default: the fastest available)."""
    name = name or DEFAULT
    try:
        return BACKENDS[name]
    except KeyError:
        raise ValueError(f"backend {name!r} not available (have {sorted(BACKENDS)})") from None
