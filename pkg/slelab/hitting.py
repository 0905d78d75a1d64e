"""
Boundary hitting probabilities for kappa > 4.

F(x) is the regularized incomplete Beta function with both parameters 1 - 4/kappa.
On [0, x] with x <= 1/2 the endpoint singularity u^(-4/kappa) is absorbed into a
Gauss-Jacobi weight after the substitution u = x (1 + t) / 2; the remaining
factor (1 - u)^(-4/kappa) is smooth there. Larger x use F(x) = 1 - F(1 - x).
"""

import math
import warnings
from functools import lru_cache
from typing import Callable, List, Optional, Tuple

import numpy as np
from scipy.special import roots_jacobi

from .dataclasses import HittingEstimate, HittingQuery, Trace
from .driving import noise_generator
from .exceptions import InvalidParameterError, UnresolvedTrialsWarning

QUADRATURE_NODES = 64
NORMAL_CHUNK = 1024


@lru_cache(maxsize=64)
def _jacobi_rule(nodes: int, alpha: float) -> Tuple[np.ndarray, np.ndarray]:
    t, w = roots_jacobi(nodes, 0.0, -alpha)
    return t, w


def _half_integral(alpha: float, x: float, nodes: int) -> float:
    """Integral of u^-alpha (1-u)^-alpha over [0, x], x <= 1/2."""
    if x == 0.0:
        return 0.0
    t, w = _jacobi_rule(nodes, alpha)
    smooth = (1.0 - 0.5 * x * (1.0 + t)) ** (-alpha)
    return (0.5 * x) ** (1.0 - alpha) * float(np.dot(w, smooth))


def beffara_z(kappa: float, nodes: int = QUADRATURE_NODES) -> float:
    """Normalization Z_kappa, the integral over [0, 1]."""
    if not kappa > 4:
        raise InvalidParameterError(f"F needs kappa > 4, got {kappa}")
    return 2.0 * _half_integral(4.0 / kappa, 0.5, nodes)


def beffara_F(kappa: float, x: float, nodes: int = QUADRATURE_NODES) -> float:
    """Probability that the curve visits [c, oo) before (-oo, a], at x = -a / (c - a)."""
    if not kappa > 4:
        raise InvalidParameterError(f"F needs kappa > 4, got {kappa}")
    if not 0.0 <= x <= 1.0:
        raise InvalidParameterError(f"F is defined on [0, 1], got x={x}")

    alpha = 4.0 / kappa
    z = 2.0 * _half_integral(alpha, 0.5, nodes)
    if x <= 0.5:
        return _half_integral(alpha, x, nodes) / z
    return 1.0 - _half_integral(alpha, 1.0 - x, nodes) / z


def mc_hitting(q: HittingQuery, n_traces: int, steps: int, horizon: float, seed: int,
               beffara: Callable[[float, float], float] = beffara_F) -> HittingEstimate:
    """
    Monte Carlo estimate of the hitting probability.

    Each trial tracks Y^a = g_t(a) - U_t and Y^c = g_t(c) - U_t through the slit
    maps of its driving path. A point is swallowed once its Y comes within
    sqrt(kappa dt) of 0 or changes sign; the trial scores 1 when c goes first,
    with simultaneous swallowing decided by the deeper of the two.
    """
    if n_traces < 1 or steps < 1 or not horizon > 0:
        raise InvalidParameterError("n_traces, steps and horizon must be positive")

    dt = horizon / steps
    scale = math.sqrt(q.kappa * dt)
    tol = scale
    slit_sq = 4.0 * dt
    gen = noise_generator(seed)

    ya = np.full(n_traces, float(q.a))
    yc = np.full(n_traces, float(q.c))
    active = np.ones(n_traces, dtype=bool)
    c_first = np.zeros(n_traces, dtype=bool)

    done = 0
    while done < steps and active.any():
        block = min(NORMAL_CHUNK, steps - done)
        noise = gen.standard_normal((block, n_traces))
        for row in noise:
            live = np.flatnonzero(active)
            if not live.size:
                break
            du = scale * row[live]
            a_new = -np.sqrt(ya[live] ** 2 + slit_sq) - du
            c_new = np.sqrt(yc[live] ** 2 + slit_sq) - du
            ya[live] = a_new
            yc[live] = c_new

            depth_a = -a_new
            depth_c = c_new
            hit_a = depth_a <= tol
            hit_c = depth_c <= tol
            resolved = hit_a | hit_c
            if resolved.any():
                winner_c = hit_c & (~hit_a | (depth_c <= depth_a))
                idx = live[resolved]
                c_first[idx] = winner_c[resolved]
                active[idx] = False
        done += block

    unresolved = int(active.sum())
    n = n_traces - unresolved
    if unresolved:
        warnings.warn(
            f"{unresolved} of {n_traces} trials unresolved at horizon {horizon}",
            UnresolvedTrialsWarning,
            stacklevel=2,
        )

    p_hat = float(c_first.sum()) / n if n else math.nan
    stderr = math.sqrt(p_hat * (1.0 - p_hat) / n) if n else math.nan
    return HittingEstimate(
        p_hat=p_hat,
        stderr=stderr,
        n_traces=n_traces,
        f_theory=beffara(q.kappa, q.x),
        z_kappa=beffara_z(q.kappa),
        unresolved=unresolved,
    )


def recursion_lower_bound(n: int) -> float:
    """1 / (n + 1), the equality case of P(n) >= P(n-1) / (1 + P(n-1)) from P(1) = 1/2."""
    if int(n) != n or n < 1:
        raise InvalidParameterError(f"n must be a positive integer, got {n}")
    return 1.0 / (n + 1)


def recursion_bound_sequence(n: int) -> List[float]:
    """Lower bounds for P(1), ..., P(n) by iterating x -> x / (1 + x) from 1/2."""
    if int(n) != n or n < 1:
        raise InvalidParameterError(f"n must be a positive integer, got {n}")
    out = [0.5]
    while len(out) < n:
        x = out[-1]
        out.append(x / (1.0 + x))
    return out


def geometric_hit_side(trace: Trace, a: float, c: float, delta: float) -> int:
    """+1 if the samples reach [c, oo) within delta of the axis before (-oo, a], -1 for the reverse, 0 if neither."""
    pts = trace.points
    near = pts.imag <= delta
    right = np.flatnonzero(near & (pts.real >= c))
    left = np.flatnonzero(near & (pts.real <= a))
    first_right = int(right[0]) if right.size else None
    first_left = int(left[0]) if left.size else None

    if first_right is None and first_left is None:
        return 0
    if first_left is None or (first_right is not None and first_right < first_left):
        return 1
    return -1


def driving_hit_side(u: np.ndarray, dt: float, kappa: float, a: float, c: float,
                     tol: Optional[float] = None) -> int:
    """Swallowing order for one driving path: +1 if c goes first, -1 for a, 0 if neither."""
    tol = math.sqrt(kappa * dt) if tol is None else tol
    ya, yc = float(a), float(c)
    slit_sq = 4.0 * dt
    for k in range(len(u) - 1):
        du = float(u[k + 1] - u[k])
        ya = -math.sqrt(ya * ya + slit_sq) - du
        yc = math.sqrt(yc * yc + slit_sq) - du
        hit_a, hit_c = -ya <= tol, yc <= tol
        if hit_a or hit_c:
            return 1 if hit_c and (not hit_a or yc <= -ya) else -1
    return 0
