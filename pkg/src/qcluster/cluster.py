"""Cluster variables of the rank-two quantum cluster algebra with exchange
polynomials ``q^(1/2) X_k + 1`` (k odd) and ``q^2 X_k^4 + 1`` (k even).

Everything is generated without polynomial division: the exchange relations
are solved using inverses of frame generators only, the imaginary element
``X_delta`` comes from a four-term window formula, and the remaining variables
follow from the even ladder and the odd exchange relation.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Union

from .qcoeff import ONE, QLaurent, qpow
from .torus import ONE_T, ZERO_T, TorusElement, t_monomial

__all__ = [
    "Frame",
    "as_frame",
    "exchange_rhs",
    "cluster_var",
    "x_delta",
    "x_delta_from_window",
    "chebyshev",
    "cluster_monomial",
    "parity_bracket",
]


@dataclass(frozen=True, order=True)
class Frame:
    """Frame based at ``s``: ``X_s -> X^(1,0)`` and ``X_{s+1} -> X^(0,1)``."""

    s: int = 1

    def __post_init__(self):
        if not isinstance(self.s, int):
            raise TypeError(f"frame index must be an integer, got {self.s!r}")


FrameLike = Union[Frame, int]


def as_frame(frame: FrameLike) -> Frame:
    return frame if isinstance(frame, Frame) else Frame(int(frame))


def parity_bracket(n: int) -> int:
    """1 for odd n, 2 for even n."""
    return 1 if n % 2 else 2


def exchange_rhs(k: int, xk: TorusElement) -> TorusElement:
    """Right-hand side of ``X_{k-1} X_{k+1} = ...`` given ``X_k``."""
    if k % 2:
        return xk.shift(1) + ONE_T
    return (xk ** 4).shift(4) + ONE_T


class _FrameCache:
    """Memo table for one frame; fills happen under a lock so readers see whole values."""

    def __init__(self, frame: Frame):
        self.frame = frame
        self.vars: dict[int, TorusElement] = {}
        self.delta: TorusElement | None = None
        self.cheb: dict[tuple[str, int], TorusElement] = {}
        self.lock = threading.RLock()
        self._seed()

    def _seed(self):
        s = self.frame.s
        v = self.vars
        v[s] = t_monomial(1, 0)
        v[s + 1] = t_monomial(0, 1)
        v[s + 2] = v[s].inverse() * exchange_rhs(s + 1, v[s + 1])
        v[s - 1] = exchange_rhs(s, v[s]) * v[s + 1].inverse()
        v[s + 3] = v[s + 1].inverse() * exchange_rhs(s + 2, v[s + 2])
        self.delta = x_delta_from_window(s, v.__getitem__)

    def even(self, m: int) -> TorusElement:
        v = self.vars
        if m in v:
            return v[m]
        hi = max(k for k in v if k % 2 == 0)
        lo = min(k for k in v if k % 2 == 0)
        d = self.delta
        while m > hi:
            # X_{2n+2} = q^{-1/2} X_{2n} X_delta - q^{-1} X_{2n-2}
            v[hi + 2] = (v[hi] * d).shift(-1) - v[hi - 2].shift(-2)
            hi += 2
        while m < lo:
            # X_{2n-2} = q^{1/2} X_{2n} X_delta - q X_{2n+2}
            v[lo - 2] = (v[lo] * d).shift(1) - v[lo + 2].shift(2)
            lo -= 2
        return v[m]

    def var(self, m: int) -> TorusElement:
        with self.lock:
            if m in self.vars:
                return self.vars[m]
            if m % 2 == 0:
                return self.even(m)
            left, right = self.even(m - 1), self.even(m + 1)
            # exchange at odd m: X_{m-1} X_{m+1} = q^{1/2} X_m + 1
            val = (left * right - ONE_T).shift(-1)
            self.vars[m] = val
            return val

    def chebyshev(self, kind: str, n: int) -> TorusElement:
        if n < 0:
            return ZERO_T
        if n == 0:
            return ONE_T
        with self.lock:
            key = (kind, n)
            if key in self.cheb:
                return self.cheb[key]
            d = self.delta
            if n == 1:
                val = d
            elif n == 2:
                val = d * d - ONE_T * (2 if kind == "F" else 1)
            else:
                val = self.chebyshev(kind, n - 1) * d - self.chebyshev(kind, n - 2)
            self.cheb[key] = val
            return val


_caches: dict[Frame, _FrameCache] = {}
_caches_lock = threading.Lock()


def _cache(frame: FrameLike) -> _FrameCache:
    frame = as_frame(frame)
    c = _caches.get(frame)
    if c is None:
        with _caches_lock:
            c = _caches.get(frame)
            if c is None:
                c = _FrameCache(frame)
                _caches[frame] = c
    return c


def clear_caches() -> None:
    with _caches_lock:
        _caches.clear()


def cluster_var(m: int, frame: FrameLike = 1) -> TorusElement:
    """Laurent expansion of ``X_m`` in ``frame``.

    >>> print(cluster_var(3, Frame(1)))
    (-1,0) + (-1,4)
    """
    return _cache(frame).var(m)


def x_delta(frame: FrameLike = 1) -> TorusElement:
    return _cache(frame).delta


def x_delta_from_window(t: int, var) -> TorusElement:
    """``X_delta`` computed from ``X_t, ..., X_{t+3}`` where ``var(k)`` returns ``X_k``.

    Even ``t`` uses ``q X_t^2 X_{t+3} - q^2 (q X_{t+1} + q^{-1/2} + q^{1/2}) X_{t+2}^2``;
    odd ``t`` uses ``q^{-1} X_{t+3}^2 X_t - q^{-2} (q^{-1} X_{t+2} + q^{-1/2} + q^{1/2}) X_{t+1}^2``.
    """
    if isinstance(var, (Frame, int)):
        frame = var
        var = lambda k: cluster_var(k, frame)  # noqa: E731
    x0, x1, x2, x3 = (var(t + i) for i in range(4))
    mid = ONE_T.scale(qpow(-1) + qpow(1))
    if t % 2 == 0:
        return (x0 * x0 * x3).shift(2) - ((x1.shift(2) + mid) * x2 * x2).shift(4)
    return (x3 * x3 * x0).shift(-2) - ((x2.shift(-2) + mid) * x1 * x1).shift(-4)


def chebyshev(kind: str, n: int, frame: FrameLike = 1) -> TorusElement:
    """``F_n(X_delta)`` (kind ``"F"``) or ``S_n(X_delta)`` (kind ``"S"``); zero for n < 0."""
    kind = kind.upper()
    if kind not in ("F", "S"):
        raise ValueError(f"kind must be 'F' or 'S', got {kind!r}")
    return _cache(frame).chebyshev(kind, n)


def cluster_monomial(m: int, a: int, b: int, frame: FrameLike = 1) -> TorusElement:
    """``q^{-ab/2} X_m^a X_{m+1}^b``."""
    if a < 0 or b < 0:
        raise ValueError(f"cluster monomial exponents must be nonnegative, got ({a}, {b})")
    out = ONE_T
    if a:
        xm = cluster_var(m, frame)
        for _ in range(a):
            out = out * xm
    if b:
        xn = cluster_var(m + 1, frame)
        for _ in range(b):
            out = out * xn
    return out.shift(-a * b)


def scalar(c: Union[QLaurent, int] = ONE) -> TorusElement:
    return TorusElement.scalar(c)
