"""Small-tensor kernels with a compiled backend and a NumPy fallback.

The compiled module is used when it was built and imports cleanly. Setting
the environment variable ``MAGLAB_PURE_PYTHON=1`` forces the fallback.
Both backends accept float64 arrays; inputs are made C-contiguous here so
the compiled signatures can rely on it.
"""

import os

import numpy as np

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

BACKENDS = {"python": _pykernels}
if _ckernels is not None:
    BACKENDS["cython"] = _ckernels

if os.environ.get("MAGLAB_PURE_PYTHON") == "1" or _ckernels is None:
    BACKEND = "python"
else:
    BACKEND = "cython"

_impl = BACKENDS[BACKEND]


def _c(a):
    return np.ascontiguousarray(a, dtype=float)


def christoffel(ginv, dg):
    return _impl.christoffel(_c(ginv), _c(dg))


def riemann(gamma, dgamma):
    return _impl.riemann(_c(gamma), _c(dgamma))


def quadratic(gamma, u, w):
    return _impl.quadratic(_c(gamma), _c(u), _c(w))


def poly_value(c0, c1, c2, c3, x):
    return _impl.poly_value(c0, c1, c2, c3, _c(x))


def poly_grad(c0, c1, c2, c3, x):
    return _impl.poly_grad(c0, c1, c2, c3, _c(x))


def poly_hess(c0, c1, c2, c3, x):
    return _impl.poly_hess(c0, c1, c2, c3, _c(x))
