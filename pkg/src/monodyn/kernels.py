"""Backend selection for the hot loops.

The compiled GMP/Cython kernels are used when importable; setting the
environment variable ``MONODYN_PURE=1`` forces the pure-Python versions.
``BACKEND`` names the active choice ("compiled" or "python").
"""

import os

from . import _pykernels

_FUNCS = (
    "taylor_shift1",
    "sign_variations",
    "descartes_unit",
    "IntPoly",
    "cubic_orbit",
    "cubic_periods",
    "cubic_limits",
)


def load(name=None):
    """Return a namespace module for backend ``name`` ("compiled" or "python")."""
    if name == "python":
        return _pykernels
    if name == "compiled":
        from . import _ckernels

        return _ckernels
    raise ValueError(f"unknown kernel backend {name!r}")


def available():
    names = ["python"]
    try:
        load("compiled")
    except ImportError:
        pass
    else:
        names.insert(0, "compiled")
    return names


if os.environ.get("MONODYN_PURE", "") not in ("", "0"):
    BACKEND = "python"
else:
    BACKEND = available()[0]

_impl = load(BACKEND)
taylor_shift1 = _impl.taylor_shift1
sign_variations = _impl.sign_variations
descartes_unit = _impl.descartes_unit
IntPoly = _impl.IntPoly
cubic_orbit = _impl.cubic_orbit
cubic_periods = _impl.cubic_periods
cubic_limits = _impl.cubic_limits
