"""Backend selection for the hot kernels.

The compiled extension is used when it imports; otherwise the numpy
reference implementation is used.  Setting ``BILLIARD_ZETA_PURE=1``
forces the pure-Python backend.
"""
import os

from . import _pykernels

NONE, POINT, PHASE = _pykernels.NONE, _pykernels.POINT, _pykernels.PHASE

_impl = _pykernels
backend = "python"
if os.environ.get("BILLIARD_ZETA_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _impl  # noqa: F811
        backend = "cython"
    except ImportError:  # pragma: no cover - depends on build
        _impl = _pykernels

solve_chain = _impl.solve_chain
front_chain = _impl.front_chain


def get_backend(name=None):
    """Return the kernel module for ``name`` ('cython', 'python' or current)."""
    if name is None:
        return _impl
    if name == "python":
        return _pykernels
    if name == "cython":
        from . import _kernels
        return _kernels
    raise ValueError(f"unknown backend {name!r}")
