"""Backend selection for the quadrature kernel.

The compiled extension is used when it imports; setting
``MOLHEAT_PURE_PYTHON=1`` forces the numpy implementation.
"""

import os

from . import _core_py

if os.environ.get("MOLHEAT_PURE_PYTHON", "") not in ("", "0"):
    _impl = _core_py
else:
    try:
        from . import _core as _impl
    except ImportError:
        _impl = _core_py

BACKEND = "compiled" if _impl is not _core_py else "python"

integrate = _impl.integrate
reflection_coefficients = _impl.reflection_coefficients


def get_backend(name):
    """Return the kernel module called ``name`` ("compiled" or "python")."""
    if name == "python":
        return _core_py
    if name == "compiled":
        from . import _core
        return _core
    raise ValueError(f"unknown backend {name!r}")
