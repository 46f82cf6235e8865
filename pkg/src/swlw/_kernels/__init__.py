"""Backend selection for the hot numerical kernels.

Two implementations with identical signatures and arithmetic:

* ``_numba``     -- @njit-compiled loops (default when numba imports cleanly)
* ``_reference`` -- pure numpy/Python fallback

Selection is controlled by the ``SWLW_BACKEND`` environment variable:
``"numba"`` forces the compiled backend (ImportError if numba is missing),
``"numpy"`` forces the fallback, unset/empty picks numba when available.
"""

import os

_requested = os.environ.get("SWLW_BACKEND", "").strip().lower()
if _requested not in ("", "numba", "numpy"):
    raise ValueError(
        f"SWLW_BACKEND must be 'numba' or 'numpy', got {_requested!r}"
    )

from . import _reference

if _requested == "numpy":
    _active = _reference
    HAS_NUMBA = False
else:
    try:
        from . import _numba as _active  # noqa: F401
        HAS_NUMBA = True
    except ImportError:
        if _requested == "numba":
            raise
        _active = _reference
        HAS_NUMBA = False

BACKEND_NAME = "numba" if HAS_NUMBA else "numpy"

thomas = _active.thomas
cn_newton = _active.cn_newton
silf_update = _active.silf_update


def get_backends():
    """Return {name: module} for every importable backend (benchmark hook)."""
    backends = {"numpy": _reference}
    try:
        from . import _numba
        backends["numba"] = _numba
    except ImportError:
        pass
    return backends
