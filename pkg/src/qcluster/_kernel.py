"""Compiled inner loop for torus products with machine-size coefficients.

The product is accumulated into a dense ``(a, b, e)`` box whose bounds are
computed exactly from the pairwise twists.  The caller guarantees through the
l1 bound that every partial sum fits in a signed 64-bit integer, and falls
back to exact big-integer arithmetic otherwise.
"""
from __future__ import annotations

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover - the big-integer path is used instead
    njit = None

__all__ = ["AVAILABLE", "FlatForm", "multiply_flat", "MAX_CELLS"]

# dense boxes above this many cells go to the big-integer path
MAX_CELLS = 60_000_000


class FlatForm:
    """Exponent pairs with CSR-style pointers into flat (e, c) arrays."""

    __slots__ = ("a", "b", "ptr", "e", "c", "emin", "emax")

    def __init__(self, terms):
        n = len(terms)
        self.a = np.empty(n, dtype=np.int64)
        self.b = np.empty(n, dtype=np.int64)
        self.ptr = np.empty(n + 1, dtype=np.int64)
        self.emin = np.empty(n, dtype=np.int64)
        self.emax = np.empty(n, dtype=np.int64)
        es, cs = [], []
        self.ptr[0] = 0
        for i, ((a, b), f) in enumerate(terms.items()):
            self.a[i] = a
            self.b[i] = b
            keys = list(f.terms)
            es.extend(keys)
            cs.extend(f.terms.values())
            self.ptr[i + 1] = len(es)
            self.emin[i] = keys[0]
            self.emax[i] = keys[-1]
        self.e = np.array(es, dtype=np.int64)
        self.c = np.array(cs, dtype=np.int64)


def _convolve(xa, xb, xptr, xe, xc, ya, yb, yptr, ye, yc, amin, bmin, emin, out):
    for i in range(xa.shape[0]):
        a = xa[i]
        b = xb[i]
        for j in range(ya.shape[0]):
            c = ya[j]
            d = yb[j]
            shift = a * d - b * c - emin
            ia = a + c - amin
            ib = b + d - bmin
            for p in range(xptr[i], xptr[i + 1]):
                ep = xe[p] + shift
                cp = xc[p]
                for r in range(yptr[j], yptr[j + 1]):
                    out[ia, ib, ep + ye[r]] += cp * yc[r]


AVAILABLE = njit is not None
if AVAILABLE:
    _convolve = njit(cache=True, nogil=True)(_convolve)


def multiply_flat(x: FlatForm, y: FlatForm):
    """Product as ``(a, b) -> {e: c}``, or None when the dense box is too large."""
    twist = np.outer(x.a, y.b) - np.outer(x.b, y.a)
    emin = int((x.emin[:, None] + y.emin[None, :] + twist).min())
    emax = int((x.emax[:, None] + y.emax[None, :] + twist).max())
    amin = int(x.a.min() + y.a.min())
    bmin = int(x.b.min() + y.b.min())
    shape = (
        int(x.a.max() + y.a.max()) - amin + 1,
        int(x.b.max() + y.b.max()) - bmin + 1,
        emax - emin + 1,
    )
    if shape[0] * shape[1] * shape[2] > MAX_CELLS:
        return None
    out = np.zeros(shape, dtype=np.int64)
    _convolve(x.a, x.b, x.ptr, x.e, x.c, y.a, y.b, y.ptr, y.e, y.c, amin, bmin, emin, out)

    ia, ib, ie = np.nonzero(out)
    if not len(ia):
        return {}
    vals = out[ia, ib, ie].tolist()
    exps = (ie + emin).tolist()
    key = ia * shape[1] + ib
    # nonzero() returns C order, so each (a, b) is a contiguous run
    cuts = [0, *(np.flatnonzero(np.diff(key)) + 1).tolist(), len(key)]
    ia = (ia + amin).tolist()
    ib = (ib + bmin).tolist()
    result = {}
    for s, t in zip(cuts, cuts[1:]):
        result[(ia[s], ib[s])] = dict(zip(exps[s:t], vals[s:t]))
    return result
