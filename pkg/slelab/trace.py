"""Trace reconstruction from a driving path, and polyline traces for fixtures."""

import math
from typing import Sequence

import numpy as np

from .dataclasses import DrivingPath, Trace
from .exceptions import InvalidParameterError
from .loewner import inverse_values


def sample_indices(steps: int, stride: int) -> np.ndarray:
    """Grid indices 0, stride, 2 stride, ... with the final index always included."""
    if int(stride) != stride or stride < 1:
        raise InvalidParameterError(f"sample stride must be a positive integer, got {stride}")
    idx = np.arange(0, steps + 1, int(stride), dtype=np.int64)
    if idx[-1] != steps:
        idx = np.append(idx, steps)
    return idx


def compute_trace(path: DrivingPath, sample_stride: int = 1) -> Trace:
    """
    Trace samples eta(t_k) for the selected grid indices k.

    eta(0) = U_0. For k >= 1 the sample is the tip of the k-slit hull: the point
    u_{k-1} + 2i sqrt(dt) pulled back through slits k-2, ..., 0. Its image under
    g_{t_k} is u_{k-1}.
    """
    n = path.steps
    idx = sample_indices(n, sample_stride)
    points = np.empty(idx.size, dtype=complex)
    points[0] = path.u[0]

    if idx.size > 1:
        ks = idx[1:]
        w = path.u[ks - 1] + 2j * math.sqrt(path.dt)
        us = path.u.tolist()

        # ks is ascending, so the samples with k >= j + 2 form a suffix
        start = ks.size
        for j in range(n - 2, -1, -1):
            while start > 0 and ks[start - 1] >= j + 2:
                start -= 1
            if start < ks.size:
                w[start:] = inverse_values(w[start:], us[j], path.dt)

        points[1:] = w

    return Trace(times=idx * path.dt, points=points, kappa=path.kappa, steps=idx)


def polyline_trace(vertices: Sequence[complex], spacing: float, kappa: float = 0.0) -> Trace:
    """
    Trace sampled along straight segments between vertices at roughly ``spacing``,
    one unit of time per unit of length.
    """
    if not spacing > 0:
        raise InvalidParameterError(f"spacing must be positive, got {spacing}")
    verts = np.asarray(vertices, dtype=complex)
    if verts.size < 2:
        raise InvalidParameterError("a polyline needs at least two vertices")

    pieces = [verts[:1]]
    for p, q in zip(verts[:-1], verts[1:]):
        m = max(int(math.ceil(abs(q - p) / spacing)), 1)
        pieces.append(p + (q - p) * (np.arange(1, m + 1) / m))

    points = np.concatenate(pieces)
    times = np.concatenate(([0.0], np.cumsum(np.abs(np.diff(points)))))
    return Trace(times=times, points=points, kappa=kappa)
