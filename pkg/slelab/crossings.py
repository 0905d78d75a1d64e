"""
Left-right crossings about 0 for space-filling traces, marked points under the
excursion-end map, and the future-curve counts N_k.
"""

import dataclasses
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .bubbles import diameter, nth_at_least
from .dataclasses import (
    ConformalChain,
    CountVector,
    CrossingTimes,
    DrivingPath,
    ExcursionRecord,
    MarkedPointSet,
    Trace,
)
from .enums import Side
from .exceptions import InvalidParameterError, NotFoundError, SlitDomainError
from .loewner import hull_base_images, real_flow
from .trace import compute_trace

AXIS_GAP_FACTOR = 4.0
ORIGIN_FACTOR = 2.0


def default_tolerances(trace: Trace) -> Tuple[float, float]:
    """(delta, delta0): four median sample gaps, and twice that."""
    gaps = trace.gaps()
    tol_axis = AXIS_GAP_FACTOR * float(np.median(gaps)) if gaps.size else 0.0
    return tol_axis, ORIGIN_FACTOR * tol_axis


def crossing_times(trace: Trace, tol_axis: Optional[float] = None,
                   tol_origin: Optional[float] = None,
                   initial_side: Optional[Side] = None) -> CrossingTimes:
    """
    A sample hits the axis when Im <= tol_axis and |Re| > tol_origin; a crossing
    is recorded at each hit on the opposite side from the previous hit.
    ``initial_side`` seeds the previous hit.
    """
    d_axis, d_origin = default_tolerances(trace)
    tol_axis = d_axis if tol_axis is None else float(tol_axis)
    tol_origin = d_origin if tol_origin is None else float(tol_origin)
    if tol_axis < 0 or tol_origin < 0:
        raise InvalidParameterError("crossing tolerances must be nonnegative")

    pts = trace.points
    hits = np.flatnonzero((pts.imag <= tol_axis) & (np.abs(pts.real) > tol_origin))

    taus, sides, indices, endpoints = [], [], [], []
    previous = None if initial_side is None else Side(initial_side)
    for i in hits.tolist():
        x = float(pts[i].real)
        side = Side.from_sign(x)
        if previous is not None and side is not previous:
            taus.append(float(trace.times[i]))
            sides.append(side)
            indices.append(i)
            endpoints.append(x)
        previous = side

    return CrossingTimes(
        taus=tuple(taus),
        sides=tuple(sides),
        tol_axis=tol_axis,
        tol_origin=tol_origin,
        indices=tuple(indices),
        endpoints=tuple(endpoints),
    )


def excursions(ct: CrossingTimes, trace: Trace) -> List[ExcursionRecord]:
    """All excursions; excursion j runs from tau_{j-1} (tau_0 = start) to tau_j."""
    return [_excursion(ct, trace, j) for j in range(1, len(ct) + 1)]


def _excursion(ct: CrossingTimes, trace: Trace, j: int) -> ExcursionRecord:
    start = 0 if j == 1 else ct.indices[j - 2]
    end = ct.indices[j - 1]
    return ExcursionRecord(
        j=j,
        interval=(float(trace.times[start]), ct.taus[j - 1]),
        diam=diameter(trace.points[start:end + 1]),
        start_index=start,
        end_index=end,
        side=ct.sides[j - 1],
    )


def select_excursion(ct: CrossingTimes, trace: Trace, r: float, n: int) -> ExcursionRecord:
    """
    The n-th excursion with diameter >= r. Excursions are examined in time order,
    so nothing after the selected tau_J is read.
    """
    if not r > 0:
        raise InvalidParameterError(f"r must be positive, got {r}")
    if n < 1:
        raise InvalidParameterError(f"n must be at least 1, got {n}")

    seen = 0
    for j in range(1, len(ct) + 1):
        exc = _excursion(ct, trace, j)
        if exc.diam >= r:
            seen += 1
            if seen == n:
                return exc
    raise NotFoundError(f"only {seen} of {n} excursions reach diameter {r}")


def excursion_index(diameters: Sequence[float], r: float, n: int) -> int:
    """1-based index j of the n-th excursion with diameter >= r."""
    return nth_at_least(diameters, r, n) + 1


def cluster_landings(values: Sequence[float], times: Sequence[float], tol_origin: float,
                     eps_sep: float) -> Tuple[Tuple[float, ...], Tuple[float, ...]]:
    """
    Landings are mapped values below -tol_origin. A landing within eps_sep of the
    previous landing continues its cluster, otherwise it opens a new one; each
    cluster is represented by its first landing, in time order.
    """
    xs, sigmas = [], []
    previous = None
    for value, t in zip(values, times):
        if value >= -tol_origin:
            continue
        if previous is None or abs(value - previous) > eps_sep:
            xs.append(float(value))
            sigmas.append(float(t))
        previous = value
    return tuple(xs), tuple(sigmas)


def mapped_tips(path: DrivingPath, ks: np.ndarray, end_step: int) -> np.ndarray:
    """
    Images under g at grid time end_step, minus u_{end_step-1}, of the trace
    samples at grid indices ks (1 <= k <= end_step). The sample at k sits at the
    tip of slit k-1, whose image at time t_k is u_{k-1}.
    """
    ks = np.asarray(ks, dtype=np.int64)
    if ks.size and (ks.min() < 1 or ks.max() > end_step):
        raise InvalidParameterError("sample indices must lie in [1, end_step]")

    order = np.argsort(ks, kind="stable")
    sorted_ks = ks[order]
    vals = path.u[sorted_ks - 1].astype(float)
    us = path.u.tolist()
    slit_sq = 4.0 * path.dt

    # samples with k <= j still pass through slit j; they form a prefix
    stop = 0
    first = int(sorted_ks[0]) if ks.size else end_step
    for j in range(first, end_step):
        while stop < sorted_ks.size and sorted_ks[stop] <= j:
            stop += 1
        xp = vals[:stop] - us[j]
        r = np.sqrt(xp * xp + slit_sq)
        vals[:stop] = us[j] + np.where(xp >= 0.0, r, -r)

    out = np.empty_like(vals)
    out[order] = vals - us[end_step - 1]
    return out


def marked_points(trace: Trace, path: DrivingPath, exc: ExcursionRecord,
                  eps_sep: Optional[float] = None,
                  tol_origin: Optional[float] = None) -> MarkedPointSet:
    """
    Marked points X_k of excursion J: samples in (tau_{J-1}, tau_J] are mapped by
    the time-tau_J map minus U at tau_J, oriented so that the excursion ends on
    the positive side, and their landings on (-oo, -tol_origin) are clustered.
    Only samples up to tau_J are read.
    """
    _, d_origin = default_tolerances(trace)
    tol_origin = d_origin if tol_origin is None else float(tol_origin)
    eps_sep = tol_origin if eps_sep is None else float(eps_sep)
    if not eps_sep > 0:
        raise InvalidParameterError(f"eps_sep must be positive, got {eps_sep}")

    lo, hi = exc.start_index + 1, exc.end_index + 1
    ks = trace.steps[lo:hi]
    end_step = int(trace.steps[exc.end_index])
    mirrored = exc.side is Side.LEFT

    if end_step < 1 or not ks.size:
        return MarkedPointSet(exc.j, (), (), exc.interval[1], end_step, mirrored)

    values = mapped_tips(path, ks, end_step)
    if mirrored:
        values = -values

    xs, sigmas = cluster_landings(values.tolist(), trace.times[lo:hi].tolist(), tol_origin, eps_sep)
    return MarkedPointSet(
        J=exc.j,
        xs=xs,
        sigma_times=sigmas,
        tau=exc.interval[1],
        tau_step=end_step,
        mirrored=mirrored,
    )


def bin_endpoints(xs: Sequence[float], endpoints: Sequence[float]) -> Tuple[Tuple[int, ...], int]:
    """
    Counts per interval between xs[k-1] and xs[k] (half-open except the last) and
    the number of endpoints outside every interval. Intervals of non-monotone
    marked points can overlap; an endpoint goes to the first one containing it.
    """
    xs = np.asarray(xs, dtype=float)
    ends = np.asarray(endpoints, dtype=float)
    nbins = max(xs.size - 1, 0)
    if not nbins:
        return (), int(ends.size)

    lo = np.minimum(xs[:-1], xs[1:])
    hi = np.maximum(xs[:-1], xs[1:])
    inside = (ends[:, None] >= lo) & (ends[:, None] < hi)
    inside[:, -1] |= ends == hi[-1]

    hit = inside.any(axis=1)
    first = np.argmax(inside, axis=1)
    counts = np.bincount(first[hit], minlength=nbins)
    return tuple(int(c) for c in counts), int((~hit).sum())


def future_path(path: DrivingPath, mps: MarkedPointSet, future_horizon: float) -> DrivingPath:
    """
    Driving of the slits after tau_J in the frame of the time-tau_J map, mirrored
    with the marked points: U~_m = u_{K+m} - u_{K-1}, truncated to the available
    samples.
    """
    if not future_horizon > 0:
        raise InvalidParameterError(f"future horizon must be positive, got {future_horizon}")
    base = mps.tau_step - 1
    if base < 0:
        raise InvalidParameterError("marked points were taken before the first step")

    m = int(round(future_horizon / path.dt))
    stop = min(base + m + 2, path.u.size)
    u = path.u[base + 1:stop] - path.u[base]
    if mps.mirrored:
        u = -u
    return DrivingPath(kappa=path.kappa, dt=path.dt, u=u, noise_seed=path.noise_seed)


def future_trace(path: DrivingPath, mps: MarkedPointSet, future_horizon: float,
                 sample_stride: int = 1) -> Trace:
    """
    Trace of the re-based future curve. Sample 0 is the tip at tau_J, whose image
    is exactly 0; the first future slit sits one driving increment away from it.
    """
    ftrace = compute_trace(future_path(path, mps, future_horizon), sample_stride)
    points = ftrace.points.copy()
    points[0] = 0j
    return dataclasses.replace(ftrace, points=points)


def crossing_counts(trace: Trace, path: DrivingPath, mps: MarkedPointSet, future_horizon: float,
                    tol_axis: Optional[float] = None,
                    tol_origin: Optional[float] = None) -> CountVector:
    """
    N_k: landing endpoints on (-oo, 0) of the crossings of the re-based future
    curve, binned by the marked points. The future curve starts as if it had
    just hit the positive side.
    """
    fpath = future_path(path, mps, future_horizon)
    if fpath.steps < 1:
        counts, _ = bin_endpoints(mps.xs, ())
        return CountVector(counts, 0.0, 0, 0, ())

    stride = int(trace.steps[1] - trace.steps[0]) if len(trace) > 1 else 1
    ftrace = future_trace(path, mps, future_horizon, max(stride, 1))

    d_axis, d_origin = default_tolerances(trace)
    tol_axis = d_axis if tol_axis is None else tol_axis
    tol_origin = d_origin if tol_origin is None else tol_origin
    ct = crossing_times(ftrace, tol_axis, tol_origin, initial_side=Side.RIGHT)

    ends = tuple(x for x, side in zip(ct.endpoints, ct.sides) if side is Side.LEFT)
    counts, outside = bin_endpoints(mps.xs, ends)
    return CountVector(
        counts=counts,
        horizon=fpath.horizon,
        outside=outside,
        total=len(ends),
        endpoints=ends,
    )


def harmonic_measure_from_infinity(chain: ConformalChain, interval: Tuple[float, float]) -> float:
    """
    Length of the image of [x0, x1] on the real line. The left end flows as a left
    prime end and the right end as a right one, so [u, u] of a single slit
    measures both sides of the slit.
    """
    x0, x1 = float(interval[0]), float(interval[1])
    if x1 < x0:
        raise InvalidParameterError(f"interval [{x0}, {x1}] is reversed")

    left = real_flow(chain, x0, side=-1)
    right = real_flow(chain, x1, side=1)

    if len(chain):
        base_lo, base_hi = hull_base_images(chain)
        for name, image in (("left", left), ("right", right)):
            if base_lo < image < base_hi:
                raise SlitDomainError(f"{name} endpoint of [{x0}, {x1}] lies in the hull base")
    return right - left


def outer_boundary_measure(chain: ConformalChain) -> float:
    """Harmonic measure from infinity of the whole hull boundary."""
    lo, hi = hull_base_images(chain)
    return hi - lo


def shift_matches(n1: Sequence[int], n2: Sequence[int], max_shift: int,
                  min_overlap: int = 1) -> List[int]:
    """Shifts l with n1[k] == n2[k + l] on the whole common window."""
    a = list(n1)
    b = list(n2)
    out = []
    for shift in range(-int(max_shift), int(max_shift) + 1):
        ks = [k for k in range(len(a)) if 0 <= k + shift < len(b)]
        if len(ks) >= min_overlap and all(a[k] == b[k + shift] for k in ks):
            out.append(shift)
    return out
