"""
Bubble decomposition of a sampled trace.

The trace and the real axis are rasterized on a grid whose row 0 is the axis.
Rows up to the axis band count as the axis: Loewner samples stay at least
2 sqrt(dt) above it, so a touch shows up as a dip into the band. Free pixels
are flood-filled with 4-connectivity, so the 8-connected curve separates them.
Components reaching the left, right or top edge of the crop are the unbounded
domains; every other component is a bubble, including regions closed off
between the curve and the axis.
"""

import math
from collections import Counter
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy import ndimage
from scipy.spatial import ConvexHull
from scipy.spatial.distance import pdist

try:
    from scipy.spatial import QhullError
except ImportError:  # scipy < 1.10
    from scipy.spatial.qhull import QhullError

from .dataclasses import Box, Bubble, BubbleSequence, IndicatorSequence, Trace
from .enums import BubbleType
from .exceptions import InsufficientDataError, InvalidParameterError, NotFoundError, ResolutionError

CROP_MARGIN = 4
NOISE_DIAMETER = 3.0
AXIS_BAND_FACTOR = 2.0
_CLOSURE = np.ones((3, 3), dtype=bool)


def diameter(points) -> float:
    """Largest pairwise distance; hull vertices are compared for larger sets."""
    pts = np.asarray(points)
    if np.iscomplexobj(pts) or pts.ndim == 1:
        pts = np.column_stack([np.real(pts).ravel(), np.imag(pts).ravel()])
    pts = np.asarray(pts, dtype=float).reshape(-1, 2)

    if pts.shape[0] == 0:
        raise InvalidParameterError("diameter of an empty point set")
    if pts.shape[0] == 1:
        return 0.0

    if pts.shape[0] > 8:
        try:
            pts = pts[ConvexHull(pts).vertices]
        except QhullError:
            # collinear or repeated points
            pass
    return float(pdist(pts).max())


def nth_at_least(values: Sequence[float], threshold: float, n: int) -> int:
    """Position of the n-th value (1-based n) that is >= threshold."""
    if n < 1:
        raise InvalidParameterError(f"n must be at least 1, got {n}")
    seen = 0
    for i, value in enumerate(values):
        if value >= threshold:
            seen += 1
            if seen == n:
                return i
    raise NotFoundError(f"only {seen} of the required {n} values reach {threshold}")


# ---------- raster ----------

def default_axis_band(trace: Trace) -> float:
    """
    AXIS_BAND_FACTOR sqrt(kappa dt_s) for a Loewner trace sampled every dt_s;
    0 for drawn polylines (kappa 0), which touch the axis exactly.
    """
    if trace.kappa <= 0 or len(trace) < 2:
        return 0.0
    dt_s = float(np.median(np.diff(trace.times)))
    return AXIS_BAND_FACTOR * math.sqrt(trace.kappa * dt_s)


def _densify(trace: Trace, spacing: float) -> Tuple[np.ndarray, np.ndarray]:
    pts, times = trace.points, trace.times
    if pts.size < 2:
        return pts.copy(), times.copy()

    seg = np.diff(pts)
    n = np.maximum(np.ceil(np.abs(seg) / spacing).astype(np.int64), 1)
    offsets = np.repeat(np.cumsum(n) - n, n)
    frac = (np.arange(int(n.sum())) - offsets) / np.repeat(n, n)

    dense = np.repeat(pts[:-1], n) + np.repeat(seg, n) * frac
    dense_t = np.repeat(times[:-1], n) + np.repeat(np.diff(times), n) * frac
    return np.append(dense, pts[-1]), np.append(dense_t, times[-1])


class _Raster:
    """Earliest-visit time grid of a trace; rows 0 to band_rows are the real axis."""

    def __init__(self, trace: Trace, box: Box, resolution: float, band: float = 0.0):
        self.res = resolution
        self.band_rows = int(math.floor(band / resolution))
        pts, times = _densify(trace, 0.5 * resolution)

        keep = (
            (pts.real >= box.xmin) & (pts.real <= box.xmax)
            & (pts.imag >= 0.0) & (pts.imag <= box.ymax)
        )
        pts, times = pts[keep], times[keep]
        if not pts.size:
            pts, times = np.array([0j]), np.array([0.0])

        margin = CROP_MARGIN * resolution
        self.x0 = max(box.xmin, float(pts.real.min()) - margin)
        x1 = min(box.xmax, float(pts.real.max()) + margin)
        ytop = min(box.ymax, float(pts.imag.max()) + margin)

        ncols = int(round((x1 - self.x0) / resolution)) + 1
        nrows = int(round(ytop / resolution)) + 1

        cols = np.clip(np.rint((pts.real - self.x0) / resolution).astype(np.int64), 0, ncols - 1)
        rows = np.clip(np.rint(pts.imag / resolution).astype(np.int64), 0, nrows - 1)

        self.tgrid = np.full((nrows, ncols), np.inf)
        np.minimum.at(self.tgrid, (rows, cols), times)
        self.curve = np.isfinite(self.tgrid)

    def x_of(self, cols: np.ndarray) -> np.ndarray:
        return self.x0 + cols * self.res

    def complement_labels(self) -> np.ndarray:
        """
        Labels of the bounded complement components. The axis rows are blocked;
        components reaching the left, right or top edge are outer and get label 0.
        """
        free = ~self.curve
        free[:self.band_rows + 1, :] = False
        labels, count = ndimage.label(free)

        outer = np.zeros(count + 1, dtype=bool)
        outer[np.concatenate([labels[:, 0], labels[:, -1], labels[-1, :]])] = True
        outer[0] = True
        labels[outer[labels]] = 0
        return labels


def _window(sl: Tuple[slice, slice], grow: int, shape: Tuple[int, int]) -> Tuple[slice, slice]:
    return tuple(
        slice(max(s.start - grow, 0), min(s.stop + grow, n)) for s, n in zip(sl, shape)
    )


def extract_bubbles(trace: Trace, box: Optional[Box] = None, resolution: float = 1.0 / 512,
                    anchor_diameter: float = 1.0,
                    axis_band: Optional[float] = None) -> BubbleSequence:
    """
    Bubbles of the trace in formation order (earliest adjacent trace time, then
    leftmost pixel), with the anchor set to the first type-3 bubble whose
    diameter reaches ``anchor_diameter``. A bubble touches the axis where its
    closure reaches a row within ``axis_band`` of it (default_axis_band if None).
    """
    box = box or Box()
    if not resolution > 0:
        raise InvalidParameterError(f"resolution must be positive, got {resolution}")
    band = default_axis_band(trace) if axis_band is None else float(axis_band)
    if band < 0:
        raise InvalidParameterError(f"axis band must be nonnegative, got {band}")

    gaps = trace.gaps()
    if gaps.size and float(np.median(gaps)) < 2.0 * resolution:
        raise ResolutionError(
            f"median sample gap {float(np.median(gaps)):.3g} is below twice the "
            f"resolution {resolution:.3g}"
        )

    raster = _Raster(trace, box, resolution, band)
    labels = raster.complement_labels()
    shape = labels.shape

    found = []
    for label_id, sl in enumerate(ndimage.find_objects(labels), start=1):
        if sl is None:
            continue
        win = _window(sl, 2, shape)
        mask = labels[win] == label_id

        closure = ndimage.binary_dilation(mask, structure=_CLOSURE)
        rows, cols = np.nonzero(closure)
        rows = rows + win[0].start
        cols = cols + win[1].start
        diam = diameter(np.column_stack([raster.x_of(cols), rows * resolution]))
        if diam < NOISE_DIAMETER * resolution:
            continue

        formed = float(raster.tgrid[rows, cols].min())

        # contact with the axis rows, curve-covered or not
        xs = raster.x_of(cols[rows <= raster.band_rows])
        neg = bool(np.any(xs < -resolution))
        pos = bool(np.any(xs > resolution))

        found.append((formed, int(cols.min()), label_id, diam, neg, pos))

    found.sort(key=lambda item: (item[0], item[1]))
    bubbles = tuple(
        Bubble(
            order_index=i,
            type_code=BubbleType.classify(neg, pos),
            diameter=diam,
            touches_negative_axis=neg,
            touches_positive_axis=pos,
            component_id=label_id,
            formation_time=formed,
        )
        for i, (formed, _, label_id, diam, neg, pos) in enumerate(found)
    )

    anchor = next(
        (i for i, b in enumerate(bubbles)
         if b.type_code is BubbleType.BOTH and b.diameter >= anchor_diameter),
        None,
    )
    return BubbleSequence(bubbles, anchor)


# ---------- sequences ----------

def indicator_sequence(bs: BubbleSequence) -> IndicatorSequence:
    """
    Bit i is 1 when a type-1 or type-2 bubble forms between type-3 bubbles i and
    i+1. The offset is the anchor's rank among type-3 bubbles (0 without anchor).
    """
    bits = []
    offset = 0
    type3_seen = 0
    between = None

    for i, bubble in enumerate(bs.bubbles):
        if bubble.type_code is BubbleType.BOTH:
            if bs.anchor == i:
                offset = type3_seen
            if between is not None:
                bits.append(int(between))
            between = False
            type3_seen += 1
        elif bubble.type_code in (BubbleType.POSITIVE, BubbleType.NEGATIVE) and between is not None:
            between = True

    if type3_seen < 2:
        raise InsufficientDataError(f"need at least 2 type-3 bubbles, found {type3_seen}")

    return IndicatorSequence(tuple(bits), offset)


def k_r_n(bs: BubbleSequence, r: float, n: int) -> int:
    """Index among the type-3 bubbles of the n-th one with diameter >= r."""
    if not r > 0:
        raise InvalidParameterError(f"r must be positive, got {r}")
    return nth_at_least([b.diameter for b in bs.type3()], r, n)


def window_identity_statistic(pairs: Sequence[Tuple[Sequence[int], Sequence[int]]]
                              ) -> Tuple[float, float, float]:
    """
    Fraction of identical window pairs, the fraction predicted by independent
    draws from the pooled window frequencies, and the binomial sigma of that
    prediction.
    """
    pairs = [(tuple(a), tuple(b)) for a, b in pairs]
    if not pairs:
        raise InsufficientDataError("no window pairs")

    same = sum(a == b for a, b in pairs) / len(pairs)
    pooled = Counter(w for pair in pairs for w in pair)
    total = 2 * len(pairs)
    predicted = math.fsum((count / total) ** 2 for count in pooled.values())
    sigma = math.sqrt(predicted * (1.0 - predicted) / len(pairs))
    return same, predicted, sigma
