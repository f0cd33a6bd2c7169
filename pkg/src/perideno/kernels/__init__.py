"""Integer kernels behind the exact polynomial layer.

Two interchangeable backends exist: ``numba`` (default, compiled loops) and
``numpy`` (pure vectorised fallback).  Set ``PERIDENO_KERNELS=numpy`` to force
the fallback, or call :func:`use_backend` at runtime.  Kernels only ever see
int64 data; callers are responsible for keeping values inside int64 (see
:data:`INT64_SAFE`).
"""
import os
from types import ModuleType

import numpy as np

from . import _numpy

INT64_SAFE = 2**62

_BACKENDS: dict[str, ModuleType] = {"numpy": _numpy}


def _load(name):
    if name not in _BACKENDS:
        if name != "numba":
            raise ValueError(f"unknown kernel backend {name!r}")
        from . import _numba  # noqa: PLC0415  (numba import is slow)
        _BACKENDS["numba"] = _numba
    return _BACKENDS[name]


def available_backends():
    names = ["numpy"]
    try:
        _load("numba")
        names.append("numba")
    except ImportError:
        pass
    return names


def use_backend(name):
    """Select the active backend; returns the previous name."""
    global _impl, BACKEND
    prev = BACKEND
    _impl = _load(name)
    BACKEND = name
    return prev


BACKEND = "numpy"
_impl = _numpy
try:
    use_backend(os.environ.get("PERIDENO_KERNELS", "numba").strip().lower() or "numba")
except ImportError:
    use_backend("numpy")


def sort_sign(exps):
    """Sort each row decreasingly; also return the sign of the sorting
    permutation, or 0 when the row has a repeated entry."""
    return _impl.sort_sign(exps)


def geometric_lattice(starts, budgets, gammas, degs, flips):
    """Enumerate ``start - sum m_k gamma_k`` over all ``m >= 0`` with
    ``sum m_k degs[s, k] <= budgets[s]``.

    Returns ``(exps, signs, origin)`` where ``signs`` is
    ``(-1) ** sum(m_k * flips_k)`` and ``origin`` the start row index.
    """
    return _impl.geometric_lattice(starts, budgets, gammas, degs, flips)


def merge(keys, coeffs):
    """Sum coefficients of equal keys; drop zeros.  Output sorted by key."""
    return _impl.merge(keys, coeffs)


def convolve(exps_a, ca, deg_a, exps_b, cb, deg_b, cutoff):
    return _impl.convolve(exps_a, ca, deg_a, exps_b, cb, deg_b, cutoff)


class RowPacker:
    """Mixed-radix encoding of bounded int64 rows into single int64 keys."""

    def __init__(self, lo, hi):
        self.lo = np.asarray(lo, dtype=np.int64)
        spans = [int(h) - int(l) + 1 for l, h in zip(lo, hi)]
        strides, total = [], 1
        for s in spans:
            strides.append(total)
            total *= s
        if total >= INT64_SAFE:
            raise OverflowError("weight box too large to pack into int64 keys")
        self.spans = np.asarray(spans, dtype=np.int64)
        self.strides = np.asarray(strides, dtype=np.int64)

    @classmethod
    def covering(cls, *arrays):
        rows = [a for a in arrays if len(a)]
        if not rows:
            n = arrays[0].shape[1]
            return cls([0] * n, [0] * n)
        lo = np.min([a.min(axis=0) for a in rows], axis=0)
        hi = np.max([a.max(axis=0) for a in rows], axis=0)
        return cls(lo, hi)

    def pack(self, exps):
        return (np.asarray(exps, dtype=np.int64) - self.lo) @ self.strides

    def unpack(self, keys):
        keys = np.asarray(keys, dtype=np.int64)
        out = np.empty((len(keys), len(self.spans)), dtype=np.int64)
        rest = keys.copy()
        for i, s in enumerate(self.spans):
            out[:, i] = rest % s
            rest //= s
        return out + self.lo


def merge_rows(exps, coeffs):
    """Merge duplicate exponent rows (summing int64 coefficients)."""
    exps = np.asarray(exps, dtype=np.int64)
    coeffs = np.asarray(coeffs, dtype=np.int64)
    if len(exps) == 0:
        return exps, coeffs
    try:
        packer = RowPacker.covering(exps)
    except OverflowError:
        uniq, inv = np.unique(exps, axis=0, return_inverse=True)
        acc = np.zeros(len(uniq), dtype=np.int64)
        np.add.at(acc, inv.reshape(-1), coeffs)
        nz = acc != 0
        return uniq[nz], acc[nz]
    keys, vals = merge(packer.pack(exps), coeffs)
    return packer.unpack(keys), vals
