"""
Acceptance suite behind ``slelab verify``.

Each criterion is a method of Verifier returning a CriterionResult. Ensemble
runs shared by several criteria are cached on the Verifier, and every random
input derives from fixed seeds, so the printed table is reproducible.
"""

import math
import time
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .bubbles import extract_bubbles, indicator_sequence, window_identity_statistic
from .config_ingest import expand_seeds
from .crossings import crossing_times
from .dataclasses import ConformalChain, HittingQuery, ReportRow, RunConfig
from .driving import noise_generator, sample_sle_driving
from .enums import Side, TaskTags
from .ensemble import Ensemble
from .exceptions import InsufficientDataError, InvalidParameterError
from .hitting import beffara_F, mc_hitting
from .logger import get_logger
from .loewner import build_chain, capacity_coefficient, chain_forward, chain_pullback, concat, half_plane_capacity
from .report import csv_text, summary_text
from .trace import polyline_trace

BeffaraFn = Callable[[float, float], float]

FIXTURE_SPACING = 0.05
FIXTURE_RESOLUTION = 1.0 / 64

# name -> (vertices, expected type codes, expected indicator bits or None)
BUBBLE_FIXTURES = {
    "single-loop": (
        [0, -1, -1 + 1j, 2 + 1j, 2, 0, 2, 2 + 1j, 2 + 3j],
        (3,),
        None,
    ),
    "framed-pockets": (
        [0, -1, -1 + 1j, 1 + 1j, 1, 0, 1, 1 + 1j, 1 + 1.5j,
         1.75 + 1.5j, 1.75 + 0.75j, 1.5 + 0.75j, 1.5, 2, 2 + 0.75j, 1.75 + 0.75j, 1.75 + 1.5j,
         3 + 2j, 3, 4, 4 + 3j, -4 + 3j, -4, -3, -3 + 2j, 3 + 2j,
         3, 4, 4 + 3j, 4 + 5j],
        (3, 2, 1, 1, 1, 3),
        (1,),
    ),
    "axis-pocket": (
        [0, 1j, -1 + 1j, -1, -2, -2 + 2j, -3 + 2j],
        (2,),
        None,
    ),
    "vertical-segment": (
        [0, 2j],
        (),
        None,
    ),
}

CROSSING_FIXTURE = (
    [0, -0.5 + 0.5j, -1, 1j, 1, -0.5 + 1j, -2, -2 + 1j],
    0.05,
    0.1,
    (Side.RIGHT, Side.LEFT),
)

SYMMETRY_KAPPAS = (4.5, 5.0, 6.0, 8.0, 16.0)
BOUND_KAPPAS = (5.0, 6.0, 8.0, 12.0)
HITTING_QUERIES = ((-1.0, 1.0), (-1.0, 2.0), (-2.0, 1.0))

# hull height stays below 0.1, so every test point with Im z >= 0.1 is outside it
ROUNDTRIP_HORIZON = 2e-3

CRITERION_NAMES = (
    "beffara-symmetry",
    "arcsine-law",
    "mc-vs-formula",
    "recursion-bound",
    "loewner-roundtrip",
    "bubble-fixtures",
    "indicator-nondegenerate",
    "crossing-count-mode",
    "window-identity",
    "determinism",
)


@dataclass(frozen=True)
class Scale:
    """Sizes of every randomized criterion."""
    name: str
    sample_points: int
    mc_traces: int
    mc_steps: int
    mc_horizon: float
    bubble_seeds: int
    pair_count: int
    bubble_steps: int
    bubble_stride: int
    crossing_seeds: int
    crossing_steps: int
    crossing_stride: int
    determinism_traces: int
    determinism_steps: int


FULL = Scale(
    name="full",
    sample_points=1000,
    mc_traces=2000,
    mc_steps=100_000,
    mc_horizon=50.0,
    bubble_seeds=200,
    pair_count=200,
    bubble_steps=100_000,
    bubble_stride=8,
    crossing_seeds=200,
    crossing_steps=20_000,
    crossing_stride=4,
    determinism_traces=200,
    determinism_steps=2000,
)

QUICK = Scale(
    name="quick",
    sample_points=1000,
    mc_traces=200,
    mc_steps=2000,
    mc_horizon=20.0,
    bubble_seeds=4,
    pair_count=4,
    bubble_steps=4000,
    bubble_stride=4,
    crossing_seeds=4,
    crossing_steps=2000,
    crossing_stride=2,
    determinism_traces=50,
    determinism_steps=500,
)

SCALES = {s.name: s for s in (FULL, QUICK)}


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0


def _values_by_seed(rows: Sequence[ReportRow], name: str) -> Dict[int, List[Tuple[int, float]]]:
    out: Dict[int, List[Tuple[int, float]]] = {}
    for row in rows:
        if row.name == name and not row.error:
            out.setdefault(row.seed, []).append((row.index, row.value))
    return out


class Verifier:
    """
    Runs the acceptance criteria at a given scale.

    Args:
        scale (Scale): Problem sizes.
        beffara (callable): F(kappa, x) under test; replaced to inject faults.
        workers (int): Process count for the ensemble-backed criteria.
        base_seed (int): Root of every seed list.
    """

    def __init__(self, scale: Scale = FULL, beffara: BeffaraFn = beffara_F, workers: int = 1,
                 base_seed: int = 0):
        self.scale = scale
        self.beffara = beffara
        self.workers = workers
        self.base_seed = base_seed
        self.lg = get_logger("verify")
        self._cache: Dict[str, List[ReportRow]] = {}

        checks = (
            self.beffara_symmetry,
            self.arcsine_law,
            self.mc_vs_formula,
            self.recursion_bound,
            self.loewner_roundtrip,
            self.bubble_fixtures,
            self.indicator_nondegenerate,
            self.crossing_count_mode,
            self.window_identity,
            self.determinism,
        )
        self.criteria = tuple(
            (number, name, check)
            for number, (name, check) in enumerate(zip(CRITERION_NAMES, checks), start=1)
        )


    @property
    def names(self) -> Tuple[str, ...]:
        return CRITERION_NAMES


    def _seeds(self, offset: int, count: int) -> Tuple[int, ...]:
        return expand_seeds(self.base_seed + offset, count)


    def _rng(self, offset: int) -> np.random.Generator:
        return noise_generator(self.base_seed + offset, level=1)


    # ---------- closed-form criteria ----------

    def beffara_symmetry(self) -> Tuple[bool, str]:
        xs = self._rng(1).random(self.scale.sample_points)
        worst = 0.0
        for kappa in SYMMETRY_KAPPAS:
            for x in xs.tolist():
                worst = max(worst, abs(self.beffara(kappa, x) + self.beffara(kappa, 1.0 - x) - 1.0))
        return worst <= 1e-12, f"max |F(x)+F(1-x)-1| = {worst:.3e}"


    def arcsine_law(self) -> Tuple[bool, str]:
        xs = np.linspace(0.0, 1.0, self.scale.sample_points)
        worst = max(
            abs(self.beffara(8.0, x) - 2.0 / math.pi * math.asin(math.sqrt(x)))
            for x in xs.tolist()
        )
        return worst <= 1e-8, f"max deviation from (2/pi) arcsin(sqrt x) = {worst:.3e}"


    def recursion_bound(self) -> Tuple[bool, str]:
        failures = []
        for kappa in BOUND_KAPPAS:
            for n in range(1, 101):
                x = 1.0 / (n + 1)
                f = self.beffara(kappa, x)
                ok = f > x if n >= 2 else f >= x - 1e-15
                if not ok:
                    failures.append(f"kappa={kappa} n={n}")
        if failures:
            return False, "bound violated at " + ", ".join(failures[:5])
        return True, f"F(1/(n+1)) >= 1/(n+1) for {len(BOUND_KAPPAS)} kappas, n <= 100"


    # ---------- Monte Carlo ----------

    def mc_vs_formula(self) -> Tuple[bool, str]:
        s = self.scale
        parts, ok = [], True
        for i, (a, c) in enumerate(HITTING_QUERIES):
            q = HittingQuery(6.0, a, c)
            est = mc_hitting(q, s.mc_traces, s.mc_steps, s.mc_horizon,
                             self._seeds(3, len(HITTING_QUERIES))[i], beffara=self.beffara)
            tol = max(3.0 * est.stderr, 0.02)
            err = abs(est.p_hat - est.f_theory)
            ok &= bool(err <= tol)
            parts.append(f"({a:g},{c:g}): |{est.p_hat:.4f}-{est.f_theory:.4f}|={err:.4f}<={tol:.4f}?")
        return ok, "; ".join(parts)


    # ---------- Loewner core ----------

    def loewner_roundtrip(self) -> Tuple[bool, str]:
        path = sample_sle_driving(6.0, ROUNDTRIP_HORIZON, 1000, self._seeds(5, 1)[0])
        chain = build_chain(path)

        rng = self._rng(5)
        z = rng.uniform(-1.0, 1.0, 100) + 1j * (0.1 + rng.random(100))
        back = chain_pullback(chain, chain_forward(chain, z))
        roundtrip = float(np.max(np.abs(back - z)))

        half = len(chain) // 2
        c1 = ConformalChain(chain.u[:half], chain.delta[:half])
        c2 = ConformalChain(chain.u[half:], chain.delta[half:])
        additive = half_plane_capacity(concat(c1, c2)) == half_plane_capacity(c1) + half_plane_capacity(c2)

        coeff = capacity_coefficient(chain, 1e3j)
        norm_err = abs(coeff - half_plane_capacity(chain))

        ok = roundtrip <= 1e-9 and additive and norm_err <= 1e-6
        return ok, (
            f"horizon {ROUNDTRIP_HORIZON:g}: roundtrip {roundtrip:.2e}, additivity {'exact' if additive else 'broken'}, "
            f"normalization {norm_err:.2e}"
        )


    # ---------- bubbles ----------

    def bubble_fixtures(self) -> Tuple[bool, str]:
        failures = []
        for name, (verts, types, bits) in BUBBLE_FIXTURES.items():
            trace = polyline_trace(verts, FIXTURE_SPACING)
            bs = extract_bubbles(trace, resolution=FIXTURE_RESOLUTION, anchor_diameter=0.5)
            if bs.types != types:
                failures.append(f"{name}: types {bs.types} != {types}")
                continue
            if bits is not None:
                got = indicator_sequence(bs).bits
                if got != bits:
                    failures.append(f"{name}: bits {got} != {bits}")

        verts, tol_axis, tol_origin, sides = CROSSING_FIXTURE
        ct = crossing_times(polyline_trace(verts, FIXTURE_SPACING), tol_axis, tol_origin)
        if ct.sides != sides:
            failures.append(f"crossings: sides {[s.value for s in ct.sides]}")

        if failures:
            return False, "; ".join(failures)
        return True, f"{len(BUBBLE_FIXTURES)} bubble fixtures and the crossing fixture match"


    def _bubble_rows(self) -> List[ReportRow]:
        if "bubbles" not in self._cache:
            s = self.scale
            count = max(s.bubble_seeds, 2 * s.pair_count)
            cfg = RunConfig(
                task=TaskTags.BUBBLES.value,
                kappa=6.0,
                horizon=1.0,
                steps=s.bubble_steps,
                seeds=self._seeds(7, count),
                stride=s.bubble_stride,
                window=6,
                anchor_diameter=0.1,
            )
            self._cache["bubbles"] = Ensemble(cfg, workers=self.workers).run()
        return self._cache["bubbles"]


    def indicator_nondegenerate(self) -> Tuple[bool, str]:
        rows = self._bubble_rows()
        seeds = set(self._seeds(7, max(self.scale.bubble_seeds, 2 * self.scale.pair_count))
                    [:self.scale.bubble_seeds])
        bits = [
            v for seed, vals in _values_by_seed(rows, "indicator_bit").items() if seed in seeds
            for _, v in vals
        ]
        if not bits:
            return False, "no consecutive type-3 pairs observed"
        p = math.fsum(bits) / len(bits)
        return 0.02 < p < 0.98, f"P[E=1] = {p:.3f} over {len(bits)} pairs"


    def window_identity(self) -> Tuple[bool, str]:
        rows = self._bubble_rows()
        windows = {
            seed: tuple(int(v) for _, v in sorted(vals))
            for seed, vals in _values_by_seed(rows, "window_bit").items()
        }
        order = self._seeds(7, max(self.scale.bubble_seeds, 2 * self.scale.pair_count))
        full = [windows[s] for s in order if len(windows.get(s, ())) == 6]
        pairs = list(zip(full[0::2], full[1::2]))[:self.scale.pair_count]

        try:
            same, predicted, sigma = window_identity_statistic(pairs)
        except InsufficientDataError:
            return False, "no complete length-6 window pairs"
        ok = same < 0.5 and abs(same - predicted) <= 3.0 * sigma
        return ok, f"identical {same:.3f} vs predicted {predicted:.3f} +- {sigma:.3f} over {len(pairs)} pairs"


    # ---------- crossings ----------

    def crossing_count_mode(self) -> Tuple[bool, str]:
        s = self.scale
        cfg = RunConfig(
            task=TaskTags.CROSSINGS.value,
            kappa=8.0,
            horizon=1.0,
            steps=s.crossing_steps,
            seeds=self._seeds(8, s.crossing_seeds),
            stride=s.crossing_stride,
            r=0.5,
            n=1,
            future_horizon=0.5,
        )
        rows = Ensemble(cfg, workers=self.workers).run()
        n1 = [
            int(v) for vals in _values_by_seed(rows, "n_k").values()
            for index, v in vals if index == 1
        ]
        if not n1:
            return False, "no seed produced N_1"
        counts = np.bincount(n1)
        mode_mass = float(counts.max()) / len(n1)
        return mode_mass <= 0.95, f"mode N_1 = {int(counts.argmax())} with mass {mode_mass:.3f} over {len(n1)} seeds"


    # ---------- determinism ----------

    def determinism(self) -> Tuple[bool, str]:
        s = self.scale
        cfg = RunConfig(
            task=TaskTags.HITPROB.value,
            kappa=6.0,
            horizon=20.0,
            steps=s.determinism_steps,
            seeds=self._seeds(10, 3),
            n_traces=s.determinism_traces,
        )
        first = Ensemble(cfg, workers=1).run()
        second = Ensemble(cfg, workers=max(self.workers, 2)).run()
        same_csv = csv_text(first) == csv_text(second)
        same_summary = summary_text(first, cfg) == summary_text(second, cfg)

        fixture = BUBBLE_FIXTURES["framed-pockets"][0]
        runs = [
            extract_bubbles(polyline_trace(fixture, FIXTURE_SPACING), resolution=FIXTURE_RESOLUTION)
            for _ in range(2)
        ]
        same_bubbles = runs[0] == runs[1]

        ok = same_csv and same_summary and same_bubbles
        return ok, f"csv {same_csv}, summary {same_summary}, bubbles {same_bubbles}"


    # ---------- driver ----------

    def run(self, only: Optional[Sequence[str]] = None) -> List[CriterionResult]:
        """Run the selected criteria (all by default) in order."""
        if only:
            unknown = sorted(set(only) - set(self.names))
            if unknown:
                raise InvalidParameterError(f"unknown criteria: {', '.join(unknown)}")

        results = []
        for number, name, check in self.criteria:
            if only and name not in only:
                continue
            start = time.perf_counter()
            try:
                passed, detail = check()
            except Exception as e:  # pylint: disable=broad-except
                passed, detail = False, f"{type(e).__name__}: {e}"
            elapsed = time.perf_counter() - start
            self.lg.info("criterion %s %s: %s in %.1fs", number, name, "pass" if passed else "FAIL", elapsed)
            results.append(CriterionResult(number, name, bool(passed), detail, elapsed))
        return results


def run_verify(scale: str = "full", only: Optional[Sequence[str]] = None,
               beffara: BeffaraFn = beffara_F, workers: int = 1) -> List[CriterionResult]:
    if scale not in SCALES:
        raise InvalidParameterError(f"unknown scale {scale!r}, expected one of {sorted(SCALES)}")
    return Verifier(SCALES[scale], beffara=beffara, workers=workers).run(only)


def format_table(results: Sequence[CriterionResult]) -> str:
    """Pass/fail table without timings, so identical runs print identical tables."""
    width = max([len(r.name) for r in results] + [9])
    lines = [f"{'#':>2}  {'criterion':<{width}}  result  detail"]
    for r in results:
        lines.append(f"{r.number:>2}  {r.name:<{width}}  {'PASS' if r.passed else 'FAIL':<6}  {r.detail}")
    return "\n".join(lines)


def cmd_verify(scale: str = "full", only: Optional[Sequence[str]] = None,
               beffara: BeffaraFn = beffara_F, workers: int = 1) -> int:
    """Print the table; 0 when every selected criterion passes, 2 otherwise."""
    results = run_verify(scale, only, beffara, workers)
    print(format_table(results))
    failed = [r.name for r in results if not r.passed]
    if failed:
        print("failed: " + ", ".join(failed))
        return 2
    return 0
