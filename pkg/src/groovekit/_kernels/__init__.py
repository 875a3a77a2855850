"""Hot numerical kernels, compiled when possible.

The Cython extension ``_ckernels`` is used if it was built; otherwise, or
when ``GROOVEKIT_PURE_PYTHON=1`` is set, the numpy reference in
``_pykernels`` is used. ``BACKEND`` names the active choice.
"""
import os

from . import _pykernels as python_backend

compiled_backend = None
if os.environ.get("GROOVEKIT_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as compiled_backend
    except ImportError:
        compiled_backend = None

_active = compiled_backend if compiled_backend is not None else python_backend
BACKEND = "cython" if compiled_backend is not None else "python"

quartic_series = _active.quartic_series
pfq_series = _active.pfq_series
dawson = _active.dawson
ibp_y1 = _active.ibp_y1

__all__ = ["BACKEND", "quartic_series", "pfq_series", "dawson", "ibp_y1",
           "python_backend", "compiled_backend"]
