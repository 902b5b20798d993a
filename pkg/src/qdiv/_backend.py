"""Backend selection for the ascent kernel.

The compiled extension (_fastascent, Cython + LAPACK) is used when it built
successfully, the environment variable QDIV_PURE_PYTHON is unset, and the
kernel f is one of the built-in families. Everything else falls back to the
pure-numpy implementation in _ascent. Both run the same algorithm and agree
up to floating-point noise.
"""

from __future__ import annotations

import os

import numpy as np

from . import _ascent

if os.environ.get("QDIV_PURE_PYTHON", "") not in ("", "0"):
    _fast = None
else:
    try:
        from . import _fastascent as _fast
    except ImportError:
        _fast = None


def compiled_available() -> bool:
    return _fast is not None


def backend_name(builtin_code=None) -> str:
    if _fast is not None and builtin_code is not None:
        return "compiled"
    return "pure"


def ascend(W, mu, h0, f, max_iters, grad_tol, fd_step, force_pure=False):
    """Run the tau-ascent with the best available backend for ``f``.

    ``f`` is an FDescriptor; custom kernels always take the pure path since
    the compiled core cannot call back into Python.
    """
    code = f.builtin_code
    if _fast is not None and code is not None and not force_pure:
        return _fast.ascend(
            np.ascontiguousarray(W, dtype=np.complex128),
            np.ascontiguousarray(mu, dtype=np.float64),
            h0, code[0], code[1], max_iters, grad_tol, fd_step,
        )
    return _ascent.ascend(W, mu, h0, f.fn, max_iters, grad_tol, fd_step)
