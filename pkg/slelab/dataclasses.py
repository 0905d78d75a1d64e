"""Storage for dataclases"""

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from .enums import BubbleType, Side
from .exceptions import InvalidParameterError

# Points of the closed upper half-plane travel as plain Python/numpy complex values.
ComplexPoint = Union[complex, np.complexfloating]


@dataclass(frozen=True)
class ElementarySlit:
    """Vertical slit map with constant driving value u over capacity time delta."""
    u: float
    delta: float

    def __post_init__(self):
        if not self.delta > 0:
            raise InvalidParameterError(f"slit delta must be positive, got {self.delta}")

    @property
    def height(self) -> float:
        """Euclidean height 2*sqrt(delta) of the removed segment."""
        return 2.0 * math.sqrt(self.delta)


@dataclass(frozen=True, eq=False)
class ConformalChain:
    """
    Ordered composition of elementary slit maps, stored column-wise.

    ``total_time`` is the compensated sum of the deltas unless given explicitly
    (concatenation passes the sum of the two parts).
    """
    u: np.ndarray
    delta: np.ndarray
    total_time: float = None

    def __post_init__(self):
        u = np.ascontiguousarray(self.u, dtype=float).reshape(-1)
        delta = np.ascontiguousarray(self.delta, dtype=float).reshape(-1)

        if u.shape != delta.shape:
            raise InvalidParameterError("slit arrays u and delta differ in length")
        if delta.size and not np.all(delta > 0):
            raise InvalidParameterError("slit deltas must be positive")

        u.flags.writeable = False
        delta.flags.writeable = False
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "delta", delta)

        if self.total_time is None:
            object.__setattr__(self, "total_time", math.fsum(delta.tolist()))

    @classmethod
    def empty(cls) -> "ConformalChain":
        """The identity map."""
        return cls(np.empty(0), np.empty(0), 0.0)

    @classmethod
    def from_slits(cls, slits: Sequence[ElementarySlit]) -> "ConformalChain":
        return cls(
            np.array([s.u for s in slits], dtype=float),
            np.array([s.delta for s in slits], dtype=float),
        )

    @property
    def slits(self) -> list:
        return [ElementarySlit(float(u), float(d)) for u, d in zip(self.u, self.delta)]

    def __len__(self) -> int:
        return int(self.u.size)


@dataclass(frozen=True)
class ForcePoint:
    """Marked boundary point of an SLE_kappa(rho) process."""
    x: float
    rho: float
    side: Side

    def __post_init__(self):
        side = Side(self.side)
        object.__setattr__(self, "side", side)
        if side.sign * self.x < 0:
            raise InvalidParameterError(
                f"force point x={self.x} lies on the wrong side for {side.value}"
            )


@dataclass(frozen=True, eq=False)
class DrivingPath:
    """
    Sampled driving function on a uniform capacity-time grid.

    ``v`` holds one row per force point, aligned with ``u``. ``refinement`` is
    the number of midpoint refinements applied to the level-0 noise stream.
    """
    kappa: float
    dt: float
    u: np.ndarray
    noise_seed: int
    v: np.ndarray = None
    force_points: Tuple[ForcePoint, ...] = ()
    continuation_time: Optional[float] = None
    refinement: int = 0

    def __post_init__(self):
        u = np.ascontiguousarray(self.u, dtype=float).reshape(-1)
        n_fp = len(self.force_points)

        if self.v is None:
            if n_fp:
                raise InvalidParameterError("force points given without trajectories")
            v = np.empty((0, u.size))
        else:
            v = np.ascontiguousarray(self.v, dtype=float)
            if v.size != n_fp * u.size:
                raise InvalidParameterError("one v row per force point is required")
            v = v.reshape(n_fp, u.size)

        u.flags.writeable = False
        v.flags.writeable = False
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "force_points", tuple(self.force_points))

    @property
    def steps(self) -> int:
        """Number of completed steps (slits)."""
        return max(int(self.u.size) - 1, 0)

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.u.size) * self.dt

    @property
    def horizon(self) -> float:
        return self.steps * self.dt


@dataclass(frozen=True, eq=False)
class Trace:
    """Time-ordered samples of the curve; ``steps`` are indices into the driving grid."""
    times: np.ndarray
    points: np.ndarray
    kappa: float
    steps: np.ndarray = None

    def __post_init__(self):
        times = np.ascontiguousarray(self.times, dtype=float).reshape(-1)
        points = np.ascontiguousarray(self.points, dtype=complex).reshape(-1)
        if times.shape != points.shape:
            raise InvalidParameterError("trace times and points differ in length")

        steps = self.steps
        if steps is None:
            steps = np.arange(times.size)
        steps = np.ascontiguousarray(steps, dtype=np.int64).reshape(-1)

        object.__setattr__(self, "times", times)
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "steps", steps)

    def __len__(self) -> int:
        return int(self.points.size)

    def gaps(self) -> np.ndarray:
        """Euclidean distances between consecutive samples."""
        return np.abs(np.diff(self.points))


@dataclass(frozen=True)
class Box:
    """Raster window [xmin, xmax] x [0, ymax]."""
    xmin: float = -8.0
    xmax: float = 8.0
    ymax: float = 8.0

    def __post_init__(self):
        if not (self.xmin < 0 < self.xmax and self.ymax > 0):
            raise InvalidParameterError(f"box must straddle the origin: {self}")


@dataclass(frozen=True)
class Bubble:
    order_index: int
    type_code: BubbleType
    diameter: float
    touches_negative_axis: bool
    touches_positive_axis: bool
    component_id: int
    formation_time: float = 0.0

    def __post_init__(self):
        expected = BubbleType.classify(self.touches_negative_axis, self.touches_positive_axis)
        if BubbleType(self.type_code) is not expected:
            raise InvalidParameterError(
                f"type code {self.type_code} inconsistent with axis flags ({expected})"
            )
        object.__setattr__(self, "type_code", expected)


@dataclass(frozen=True)
class BubbleSequence:
    """Bubbles in formation order with the index of the anchor bubble."""
    bubbles: Tuple[Bubble, ...]
    anchor: Optional[int] = None

    @property
    def types(self) -> Tuple[int, ...]:
        return tuple(int(b.type_code) for b in self.bubbles)

    def type3(self) -> list:
        """Type-3 bubbles in formation order."""
        return [b for b in self.bubbles if b.type_code is BubbleType.BOTH]

    @classmethod
    def from_types(cls, types: Sequence[int], diameters: Optional[Sequence[float]] = None,
                   anchor_diameter: float = 1.0) -> "BubbleSequence":
        """Build a sequence from type codes (and diameters), anchoring it the usual way."""
        if diameters is None:
            diameters = [1.0] * len(types)
        bubbles = []
        for i, (code, diam) in enumerate(zip(types, diameters)):
            code = BubbleType(code)
            bubbles.append(Bubble(
                order_index=i,
                type_code=code,
                diameter=float(diam),
                touches_negative_axis=code in (BubbleType.NEGATIVE, BubbleType.BOTH),
                touches_positive_axis=code in (BubbleType.POSITIVE, BubbleType.BOTH),
                component_id=i + 1,
                formation_time=float(i),
            ))
        anchor = next(
            (i for i, b in enumerate(bubbles)
             if b.type_code is BubbleType.BOTH and b.diameter >= anchor_diameter),
            None,
        )
        return cls(tuple(bubbles), anchor)


@dataclass(frozen=True)
class IndicatorSequence:
    """One bit per consecutive pair of type-3 bubbles; anchor_offset is the anchor's type-3 rank."""
    bits: Tuple[int, ...]
    anchor_offset: int = 0

    def window(self, length: int) -> Tuple[int, ...]:
        """Up to ``length`` bits starting at the anchor."""
        return tuple(self.bits[self.anchor_offset:self.anchor_offset + length])


@dataclass(frozen=True)
class CrossingTimes:
    """
    Left-right crossings about 0. ``sides`` is the half-axis hit at each crossing,
    ``indices`` the trace sample index and ``endpoints`` the real landing point.
    """
    taus: Tuple[float, ...]
    sides: Tuple[Side, ...]
    tol_axis: float
    tol_origin: float
    indices: Tuple[int, ...] = ()
    endpoints: Tuple[float, ...] = ()

    def __len__(self) -> int:
        return len(self.taus)


@dataclass(frozen=True)
class ExcursionRecord:
    j: int
    interval: Tuple[float, float]
    diam: float
    start_index: int = 0
    end_index: int = 0
    side: Side = Side.RIGHT


@dataclass(frozen=True)
class MarkedPointSet:
    """
    Marked points of excursion J under the time-tau_J map, oriented so they lie
    on the negative axis. ``tau_step`` is the driving-grid index of tau_J.
    """
    J: int
    xs: Tuple[float, ...]
    sigma_times: Tuple[float, ...]
    tau: float = 0.0
    tau_step: int = 0
    mirrored: bool = False

    @property
    def increasing(self) -> bool:
        """Marked points move strictly toward 0 in time order."""
        return all(a < b for a, b in zip(self.xs, self.xs[1:]))


@dataclass(frozen=True)
class CountVector:
    """N_k for the intervals [xs[k-1], xs[k]] plus the conservation bookkeeping."""
    counts: Tuple[int, ...]
    horizon: float
    outside: int = 0
    total: int = 0
    endpoints: Tuple[float, ...] = ()


@dataclass(frozen=True)
class HittingQuery:
    kappa: float
    a: float
    c: float

    def __post_init__(self):
        if not self.kappa > 4:
            raise InvalidParameterError(f"hitting probabilities need kappa > 4, got {self.kappa}")
        if not self.a < 0 < self.c:
            raise InvalidParameterError(f"need a < 0 < c, got a={self.a}, c={self.c}")

    @property
    def x(self) -> float:
        """Argument -a/(c-a) of the hitting formula."""
        return -self.a / (self.c - self.a)


@dataclass(frozen=True)
class HittingEstimate:
    p_hat: float
    stderr: float
    n_traces: int
    f_theory: float
    z_kappa: float
    unresolved: int = 0


@dataclass(frozen=True)
class Tolerances:
    """Detection tolerances; None means derive from the sampled data."""
    tol_axis: Optional[float] = None
    tol_origin: Optional[float] = None
    eps_sep: Optional[float] = None
    tol_collision: Optional[float] = None


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved, flat run configuration."""
    task: str
    kappa: float
    horizon: float
    steps: int
    seeds: Tuple[int, ...]
    resolution: float = 1.0 / 512
    box: Box = field(default_factory=Box)
    tolerances: Tolerances = field(default_factory=Tolerances)
    r: float = 1.0
    n: int = 1
    stride: int = 1
    a: float = -1.0
    c: float = 1.0
    n_traces: int = 2000
    future_horizon: float = 0.25
    window: int = 6
    anchor_diameter: float = 1.0
    rho_left: Optional[float] = None
    rho_right: Optional[float] = None
    output_dir: str = "slelab-out"


@dataclass(frozen=True)
class ReportRow:
    """One observable value of one seed (long format)."""
    seed: int
    name: str
    value: Optional[float]
    index: int = 0
    kappa: float = 0.0
    horizon: float = 0.0
    steps: int = 0
    error: str = ""
