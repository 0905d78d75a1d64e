"""
Driving processes: sqrt(kappa) B_t for SLE_kappa, and the Euler-Maruyama
SDE system for SLE_kappa(rho) with force points.

Noise comes from a Philox counter-based generator keyed by (seed, level): level 0
is the coarse Gaussian stream, level L+1 holds the Brownian-bridge midpoints
that refine a level-L path.
"""

import math
from typing import List, Optional, Sequence

import numpy as np

from .dataclasses import DrivingPath, ForcePoint
from .enums import Side
from .exceptions import InvalidParameterError, StepSizeError

SEED_LIMIT = 1 << 64
STABILITY_FACTOR = 2.0
CONTINUATION_WEIGHT = -2.0


def noise_generator(seed: int, level: int = 0) -> np.random.Generator:
    """Deterministic generator for the (seed, level) noise stream."""
    seed = int(seed)
    if not 0 <= seed < SEED_LIMIT:
        raise InvalidParameterError(f"seed must be a 64-bit unsigned integer, got {seed}")
    if level < 0:
        raise InvalidParameterError(f"noise level must be nonnegative, got {level}")
    return np.random.Generator(np.random.Philox(key=seed + (int(level) << 64)))


def _check_common(kappa: float, horizon: float, steps: int):
    if not kappa > 0:
        raise InvalidParameterError(f"kappa must be positive, got {kappa}")
    if not horizon > 0:
        raise InvalidParameterError(f"horizon must be positive, got {horizon}")
    if int(steps) != steps or steps < 1:
        raise InvalidParameterError(f"steps must be a positive integer, got {steps}")


def _increments(kappa: float, dt: float, steps: int, seed: int) -> np.ndarray:
    return math.sqrt(kappa * dt) * noise_generator(seed).standard_normal(int(steps))


def sample_sle_driving(kappa: float, horizon: float, steps: int, seed: int) -> DrivingPath:
    """U_0 = 0 with i.i.d. N(0, kappa dt) increments from the seed's level-0 stream."""
    _check_common(kappa, horizon, steps)
    dt = horizon / steps
    u = np.concatenate(([0.0], np.cumsum(_increments(kappa, dt, steps, seed))))
    return DrivingPath(kappa=kappa, dt=dt, u=u, noise_seed=int(seed))


def _ordered(fps: Sequence[ForcePoint]) -> List[int]:
    """Force-point indices per side, nearest to the driving point first."""
    order = []
    for side in (Side.LEFT, Side.RIGHT):
        idx = [i for i, fp in enumerate(fps) if fp.side is side]
        idx.sort(key=lambda i: abs(fps[i].x))
        order.append(idx)
    return order


def _partial_sums(fps: Sequence[ForcePoint]) -> np.ndarray:
    """Cumulative weight of each force point and the ones nearer on its side."""
    sums = np.zeros(len(fps))
    for idx in _ordered(fps):
        total = 0.0
        for i in idx:
            total += fps[i].rho
            sums[i] = total
    return sums


def _validate_force_points(fps: Sequence[ForcePoint]):
    for idx in _ordered(fps):
        xs = [abs(fps[i].x) for i in idx]
        if len(set(xs)) != len(xs):
            raise InvalidParameterError("force points on one side must be distinct")


def sample_sle_rho_driving(kappa: float, fps: Sequence[ForcePoint], horizon: float,
                           steps: int, seed: int,
                           tol_collision: Optional[float] = None) -> DrivingPath:
    """
    Euler-Maruyama for dU = sqrt(kappa) dB + sum rho_j / (U - V_j) dt with the
    force points following dV = 2 / (V - U) dt.

    Within ``tol_collision`` (default sqrt(kappa dt)) of the driving point a force
    point moves by the exact slit image and the drift denominator is clamped.
    A surviving force point that the driving value jumps across reflects U (or,
    for zero weight, is carried along with U). Sampling stops at the first
    collision whose partial weight sum is <= -2.

    A drift step longer than STABILITY_FACTOR collision tolerances raises
    StepSizeError.
    """
    _check_common(kappa, horizon, steps)
    fps = tuple(fps)
    _validate_force_points(fps)

    dt = horizon / steps
    eps_c = math.sqrt(kappa * dt) if tol_collision is None else float(tol_collision)
    if not eps_c > 0:
        raise InvalidParameterError(f"collision tolerance must be positive, got {eps_c}")
    bound = STABILITY_FACTOR * eps_c
    incr = _increments(kappa, dt, steps, seed).tolist()

    rhos = [fp.rho for fp in fps]
    signs = [fp.side.sign for fp in fps]
    sums = _partial_sums(fps).tolist()
    ordered = [i for idx in _ordered(fps) for i in idx]
    two_dt = 2.0 * dt
    slit_sq = 4.0 * dt

    u = 0.0
    v = [fp.x for fp in fps]
    us = [u]
    vs = [list(v)]
    continuation = None

    def _stops(k: int) -> bool:
        for i in ordered:
            crossed = signs[i] * (v[i] - u) < 0.0
            if (crossed or abs(u - v[i]) <= eps_c) and sums[i] <= CONTINUATION_WEIGHT:
                return True
        return False

    if _stops(0):
        continuation = 0.0

    k = 0
    while continuation is None and k < steps:
        drift = 0.0
        for i in range(len(fps)):
            if rhos[i] == 0.0:
                continue
            d = u - v[i]
            if abs(d) < eps_c:
                d = -signs[i] * eps_c
            drift += rhos[i] / d

        if abs(drift * dt) > bound:
            raise StepSizeError(
                f"drift step {drift * dt:.3g} exceeds stability bound {bound:.3g} at step {k}",
                step=k,
            )

        for i in range(len(fps)):
            d = v[i] - u
            if abs(d) < eps_c:
                v[i] = u + signs[i] * math.sqrt(d * d + slit_sq)
            else:
                v[i] = v[i] + two_dt / d

        u_next = u + incr[k]
        if drift:
            u_next += drift * dt
        u = u_next

        for i in ordered:
            if signs[i] * (v[i] - u) >= 0.0 or sums[i] <= CONTINUATION_WEIGHT:
                continue
            if rhos[i] == 0.0:
                v[i] = u
            else:
                u = 2.0 * v[i] - u

        k += 1
        us.append(u)
        vs.append(list(v))
        if _stops(k):
            continuation = k * dt

    v_arr = np.array(vs, dtype=float).T if fps else None
    return DrivingPath(
        kappa=kappa,
        dt=dt,
        u=np.array(us, dtype=float),
        noise_seed=int(seed),
        v=v_arr,
        force_points=fps,
        continuation_time=continuation,
    )


def detect_continuation_threshold(path: DrivingPath, fps: Sequence[ForcePoint],
                                  tol_collision: Optional[float] = None) -> Optional[float]:
    """Earliest grid time where a force point of partial weight <= -2 meets the driving value."""
    fps = tuple(fps)
    if not fps or path.u.size == 0:
        return None
    if path.v.shape[0] != len(fps):
        raise InvalidParameterError("path was not sampled with these force points")

    tol = math.sqrt(path.kappa * path.dt) if tol_collision is None else float(tol_collision)
    sums = _partial_sums(fps)
    signs = np.array([fp.side.sign for fp in fps], dtype=float)[:, None]

    gap = path.v - path.u[None, :]
    hit = (np.abs(gap) <= tol) | (signs * gap < 0.0)
    hit &= (sums <= CONTINUATION_WEIGHT)[:, None]

    steps = np.flatnonzero(hit.any(axis=0))
    if not steps.size:
        return None
    return float(steps[0] * path.dt)


def refine_driving(path: DrivingPath) -> DrivingPath:
    """
    Halve the step by Brownian-bridge midpoints drawn from the next noise level.

    Coarse samples are kept exactly, so pairs of refined increments sum to the
    coarse ones.
    """
    if path.force_points:
        raise InvalidParameterError("only plain SLE driving paths can be refined")
    if path.steps < 1:
        raise InvalidParameterError("cannot refine an empty path")

    n = path.steps
    coarse = np.diff(path.u)
    bridge = 0.5 * math.sqrt(path.kappa * path.dt) * noise_generator(
        path.noise_seed, path.refinement + 1
    ).standard_normal(n)

    u = np.empty(2 * n + 1)
    u[0::2] = path.u
    u[1::2] = path.u[:-1] + (0.5 * coarse + bridge)

    return DrivingPath(
        kappa=path.kappa,
        dt=0.5 * path.dt,
        u=u,
        noise_seed=path.noise_seed,
        refinement=path.refinement + 1,
    )


def rescale_driving(path: DrivingPath, lam: float) -> DrivingPath:
    """Brownian scaling lam * U(t / lam^2)."""
    if not lam > 0:
        raise InvalidParameterError(f"scale must be positive, got {lam}")
    fps = tuple(ForcePoint(lam * fp.x, fp.rho, fp.side) for fp in path.force_points)
    return DrivingPath(
        kappa=path.kappa,
        dt=lam * lam * path.dt,
        u=lam * path.u,
        noise_seed=path.noise_seed,
        v=lam * path.v if fps else None,
        force_points=fps,
        continuation_time=None if path.continuation_time is None
        else lam * lam * path.continuation_time,
        refinement=path.refinement,
    )
