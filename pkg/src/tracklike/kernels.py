"""Kernel backend selection.

The hot numeric loops (matrix products, activations, Adam updates) exist
twice: a compiled Cython extension (tracklike._ckernels) and a pure-Python
fallback (tracklike._pykernels). The compiled backend is picked when the
extension imported successfully; set TRACKLIKE_BACKEND=python or =c to force
one. Both produce bit-identical results, the compiled one is just orders of
magnitude faster (see benchmarks/bench_backends.py).
"""

from __future__ import annotations

import os

from . import _pykernels

try:
    from . import _ckernels
except ImportError:
    _ckernels = None

_BACKENDS = {"python": _pykernels}
if _ckernels is not None:
    _BACKENDS["c"] = _ckernels


def available_backends() -> tuple[str, ...]:
    return tuple(sorted(_BACKENDS))


def set_backend(name: str) -> None:
    global _impl
    if name not in _BACKENDS:
        raise RuntimeError(
            f"kernel backend '{name}' not available (have: {', '.join(available_backends())})"
        )
    _impl = _BACKENDS[name]


def active_backend() -> str:
    return _impl.NAME


_impl = None
set_backend(os.environ.get("TRACKLIKE_BACKEND", "c" if _ckernels is not None else "python"))


# Thin forwarders so set_backend() takes effect for callers that imported
# this module once.

def matmul(a, b, out, n, m, p):
    _impl.matmul(a, b, out, n, m, p)


def matmul_tn(a, b, out, n, m, p):
    _impl.matmul_tn(a, b, out, n, m, p)


def affine_nt(x, w, bias, out, n, m, p):
    _impl.affine_nt(x, w, bias, out, n, m, p)


def relu_inplace(a, count):
    _impl.relu_inplace(a, count)


def sigmoid_inplace(a, count):
    _impl.sigmoid_inplace(a, count)


def act_backward_inplace(delta, act_out, count, kind):
    _impl.act_backward_inplace(delta, act_out, count, kind)


def col_sums(a, out, n, m):
    _impl.col_sums(a, out, n, m)


def all_finite(a, count) -> bool:
    return bool(_impl.all_finite(a, count))


def adam_update(w, g, m0, m1, count, alpha, beta1, beta2, eps, corr0, corr1):
    _impl.adam_update(w, g, m0, m1, count, alpha, beta1, beta2, eps, corr0, corr1)
