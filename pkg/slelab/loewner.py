"""
Discrete Loewner evolution by composition of vertical slit maps.

A slit (u, delta) removes the segment {u + iy : 0 < y < 2 sqrt(delta)} and maps
the rest of the closed upper half-plane by

    g(z) = u + sqrt((z - u)^2 + 4 delta)

with the branch chosen so that g(z) - u has the sign of Re(z - u) and Im g >= 0.
Real points keep the real branch; the slit base u itself maps to u + 2 sqrt(delta)
unless the left prime end is requested.
"""

import cmath
import math
import warnings
from typing import Optional, Tuple, Union

import numpy as np

from .dataclasses import ComplexPoint, ConformalChain, DrivingPath, ElementarySlit
from .exceptions import InvalidParameterError, NumericWarning, SlitDomainError

ArrayOrPoint = Union[ComplexPoint, np.ndarray]

_CANCEL_EPS = 64.0 * np.finfo(float).eps


# ---------- elementary maps ----------

def _forward_point(z: complex, u: float, delta: float) -> complex:
    zp = complex(z) - u
    a = 2.0 * math.sqrt(delta)
    x, y = zp.real, zp.imag

    if y < 0.0:
        raise SlitDomainError(f"point {z} lies below the real axis")

    if y == 0.0:
        r = math.hypot(x, a)
        return complex(u + (-r if x < 0.0 else r), 0.0)

    if x == 0.0 and y < a:
        raise SlitDomainError(f"point {z} lies on the open slit at u={u}, height {a}")

    q = zp * zp + a * a
    if q != 0 and abs(q) <= _CANCEL_EPS * (abs(zp) ** 2 + a * a):
        warnings.warn(
            f"cancellation near the slit tip for z={z}, u={u}, delta={delta}",
            NumericWarning,
            stacklevel=3,
        )

    s = cmath.sqrt(zp - 1j * a) * cmath.sqrt(zp + 1j * a)
    if abs(s.real) >= abs(s.imag):
        if x != 0.0 and (s.real < 0.0) != (x < 0.0):
            s = -s
    elif s.imag < 0.0:
        s = -s

    return complex(u + s.real, max(s.imag, 0.0))


def _inverse_point(w: complex, u: float, delta: float) -> complex:
    wp = complex(w) - u
    wp = complex(wp.real, max(wp.imag, 0.0) + 0.0)
    a = 2.0 * math.sqrt(delta)
    s = cmath.sqrt(wp - a) * cmath.sqrt(wp + a)
    return complex(u + s.real, max(s.imag, 0.0) + 0.0)


def forward_values(z: np.ndarray, u: float, delta: float) -> np.ndarray:
    zp = z - u
    a = 2.0 * math.sqrt(delta)
    x, y = zp.real, zp.imag

    if np.any(y < 0.0):
        raise SlitDomainError("points below the real axis")
    if np.any((x == 0.0) & (y > 0.0) & (y < a)):
        raise SlitDomainError(f"points on the open slit at u={u}, height {a}")

    s = np.sqrt(zp - 1j * a) * np.sqrt(zp + 1j * a)
    by_real = np.abs(s.real) >= np.abs(s.imag)
    flip = np.where(
        by_real,
        (x != 0.0) & ((s.real < 0.0) != (x < 0.0)),
        s.imag < 0.0,
    )
    s = np.where(flip, -s, s)

    on_axis = y == 0.0
    if np.any(on_axis):
        r = np.hypot(x, a)
        s = np.where(on_axis, np.where(x < 0.0, -r, r) + 0j, s)

    return (u + s.real) + 1j * np.maximum(s.imag, 0.0)


def inverse_values(w: np.ndarray, u: float, delta: float) -> np.ndarray:
    a = 2.0 * math.sqrt(delta)
    wp = (w.real - u) + 1j * (np.maximum(w.imag, 0.0) + 0.0)
    s = np.sqrt(wp - a) * np.sqrt(wp + a)
    return (u + s.real) + 1j * (np.maximum(s.imag, 0.0) + 0.0)


def slit_forward(z: ComplexPoint, s: ElementarySlit) -> complex:
    """Image of z under the slit map; the tip u + 2i sqrt(delta) maps to u."""
    return _forward_point(z, s.u, s.delta)


def slit_inverse(w: ComplexPoint, s: ElementarySlit) -> complex:
    """
    Preimage of w. Real w with |w - u| < 2 sqrt(delta) land on the slit, both
    sides giving the same point.
    """
    return _inverse_point(w, s.u, s.delta)


# ---------- chains ----------

def _check_range(c: ConformalChain, lo: int, hi: int):
    if not 0 <= lo <= hi <= len(c):
        raise InvalidParameterError(f"slit range [{lo}, {hi}) outside chain of length {len(c)}")


def chain_forward(c: ConformalChain, z: ArrayOrPoint, from_index: int = 0,
                  to_index: Optional[int] = None) -> ArrayOrPoint:
    """Apply slits [from_index, to_index) in order; accepts a point or an array."""
    to_index = len(c) if to_index is None else to_index
    _check_range(c, from_index, to_index)

    us = c.u[from_index:to_index].tolist()
    ds = c.delta[from_index:to_index].tolist()

    if np.ndim(z):
        out = np.array(z, dtype=complex)
        for u, d in zip(us, ds):
            out = forward_values(out, u, d)
        return out

    out = complex(z)
    for u, d in zip(us, ds):
        out = _forward_point(out, u, d)
    return out


def chain_pullback(c: ConformalChain, w: ArrayOrPoint, down_to_index: int = 0) -> ArrayOrPoint:
    """Apply inverse slits from the end of the chain down to ``down_to_index``."""
    _check_range(c, down_to_index, len(c))

    us = c.u[down_to_index:][::-1].tolist()
    ds = c.delta[down_to_index:][::-1].tolist()

    if np.ndim(w):
        out = np.array(w, dtype=complex)
        for u, d in zip(us, ds):
            out = inverse_values(out, u, d)
        return out

    out = complex(w)
    for u, d in zip(us, ds):
        out = _inverse_point(out, u, d)
    return out


def half_plane_capacity(c: ConformalChain) -> float:
    return 2.0 * c.total_time


def concat(c1: ConformalChain, c2: ConformalChain) -> ConformalChain:
    """Chain applying c1 first, then c2."""
    return ConformalChain(
        np.concatenate([c1.u, c2.u]),
        np.concatenate([c1.delta, c2.delta]),
        c1.total_time + c2.total_time,
    )


def build_chain(path: DrivingPath) -> ConformalChain:
    """Slits (u_k, dt) for every completed step of the driving path."""
    n = path.steps
    return ConformalChain(path.u[:n], np.full(n, path.dt), n * path.dt)


def capacity_coefficient(c: ConformalChain, z: ComplexPoint) -> complex:
    """
    Estimate of z (g(z) - z), which tends to the half-plane capacity as z -> oo.

    The displacement of each slit is accumulated as 4 delta / (s + z') to avoid
    the cancellation in s - z'.
    """
    re_parts, im_parts = [], []
    cur = complex(z)
    for u, d in zip(c.u.tolist(), c.delta.tolist()):
        nxt = _forward_point(cur, u, d)
        step = 4.0 * d / ((nxt - u) + (cur - u))
        re_parts.append(step.real)
        im_parts.append(step.imag)
        cur = nxt
    return complex(z) * complex(math.fsum(re_parts), math.fsum(im_parts))


# ---------- real line ----------

def real_slit_image(x: float, u: float, delta: float, side: int = 1) -> float:
    """
    Image of a real point. The base point x == u is split into prime ends:
    side > 0 maps it to u + 2 sqrt(delta), side < 0 to u - 2 sqrt(delta).
    """
    xp = x - u
    r = math.hypot(xp, 2.0 * math.sqrt(delta))
    if xp > 0.0 or (xp == 0.0 and side > 0):
        return u + r
    return u - r


def real_flow(c: ConformalChain, x: float, from_index: int = 0,
              to_index: Optional[int] = None, side: int = 1) -> float:
    """Flow a real point through slits [from_index, to_index)."""
    to_index = len(c) if to_index is None else to_index
    _check_range(c, from_index, to_index)
    out = float(x)
    for u, d in zip(c.u[from_index:to_index].tolist(), c.delta[from_index:to_index].tolist()):
        out = real_slit_image(out, u, d, side)
    return out


def hull_base_images(c: ConformalChain) -> Tuple[float, float]:
    """
    Images (O_L, O_R) of the outermost base points of the hull; the whole hull
    boundary maps onto [O_L, O_R]. Undefined for the empty chain.
    """
    if not len(c):
        raise InvalidParameterError("the empty chain has no hull")

    left = right = None
    for u, d in zip(c.u.tolist(), c.delta.tolist()):
        a = 2.0 * math.sqrt(d)
        if left is None:
            left, right = u - a, u + a
            continue
        left = min(real_slit_image(left, u, d, -1), u - a)
        right = max(real_slit_image(right, u, d, 1), u + a)
    return left, right
