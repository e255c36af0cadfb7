"""Solver kernels: compiled extension when built, pure-Python fallback otherwise.

Set ``QIPWSD_BACKEND=python`` to force the fallback, ``QIPWSD_BACKEND=cython``
to fail loudly when the extension is missing.
"""
import os

from . import _pykernels

_choice = os.environ.get("QIPWSD_BACKEND", "auto").lower()

if _choice == "python":
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl
    except ImportError:
        if _choice == "cython":
            raise
        _impl = _pykernels

BACKEND = _impl.BACKEND
evaluate = _impl.evaluate
brute_force = _impl.brute_force
branch_and_bound = _impl.branch_and_bound
chain_dp = _impl.chain_dp
coordinate_ascent = _impl.coordinate_ascent
tie_tol = _pykernels.tie_tol


def available_backends():
    """Backend modules importable in this environment, keyed by name."""
    out = {"python": _pykernels}
    try:
        from . import _ckernels
    except ImportError:
        pass
    else:
        out["cython"] = _ckernels
    return out
