"""Ensemble task objects."""

from typing import List

import numpy as np

from .bubbles import extract_bubbles, indicator_sequence
from .crossings import crossing_counts, crossing_times, marked_points, select_excursion
from .dataclasses import DrivingPath, HittingQuery, ReportRow
from .enums import BubbleType, TaskTags
from .exceptions import InsufficientDataError
from .hitting import mc_hitting
from .loewner import build_chain, half_plane_capacity
from .models import Task
from .trace import compute_trace

__all__ = [
    "Simulate",
    "Bubbles",
    "Crossings",
    "HitProb",
]


class Simulate(Task):
    """Driving path and trace summary."""
    task_type = TaskTags.SIMULATE

    def _run(self, seed: int) -> List[ReportRow]:
        path = self.driving(seed)
        trace = compute_trace(path, self.config.stride)
        tip = trace.points[-1]

        rows = [
            self.row(seed, "steps_done", path.steps),
            self.row(seed, "hcap", half_plane_capacity(build_chain(path))),
            self.row(seed, "u_final", path.u[-1]),
            self.row(seed, "tip_re", tip.real),
            self.row(seed, "tip_im", tip.imag),
            self.row(seed, "max_height", float(trace.points.imag.max())),
        ]
        if path.continuation_time is not None:
            rows.append(self.row(seed, "continuation_time", path.continuation_time))
        return rows


class Bubbles(Task):
    """Bubble types, indicator bits and the anchored window."""
    task_type = TaskTags.BUBBLES

    def _run(self, seed: int) -> List[ReportRow]:
        cfg = self.config
        trace = compute_trace(self.driving(seed), cfg.stride)
        bs = extract_bubbles(trace, cfg.box, cfg.resolution, cfg.anchor_diameter)

        types = np.bincount(np.array(bs.types, dtype=np.int64), minlength=4)
        rows = [self.row(seed, "bubble_count", len(bs.bubbles))]
        rows += [self.row(seed, "type_count", types[code], index=code) for code in range(4)]
        rows.append(self.row(
            seed, "type3_large_count",
            sum(1 for b in bs.bubbles if b.type_code is BubbleType.BOTH and b.diameter >= 0.1),
        ))
        if bs.anchor is not None:
            rows.append(self.row(seed, "anchor", bs.anchor))

        try:
            ind = indicator_sequence(bs)
        except InsufficientDataError:
            rows.append(self.row(seed, "indicator_length", 0))
            return rows

        rows.append(self.row(seed, "indicator_length", len(ind.bits)))
        rows.append(self.row(seed, "anchor_offset", ind.anchor_offset))
        rows += [self.row(seed, "indicator_bit", bit, index=i) for i, bit in enumerate(ind.bits)]
        rows += [
            self.row(seed, "window_bit", bit, index=i)
            for i, bit in enumerate(ind.window(cfg.window))
        ]
        return rows


class Crossings(Task):
    """Crossings, selected excursion, marked points and future counts N_k."""
    task_type = TaskTags.CROSSINGS

    def _run(self, seed: int) -> List[ReportRow]:
        cfg = self.config
        tol = cfg.tolerances
        extra = int(round(cfg.future_horizon * cfg.steps / cfg.horizon))
        full = self.driving(seed, cfg.horizon + extra * cfg.horizon / cfg.steps, cfg.steps + extra)
        past = DrivingPath(full.kappa, full.dt, full.u[:cfg.steps + 1], full.noise_seed)
        trace = compute_trace(past, cfg.stride)

        ct = crossing_times(trace, tol.tol_axis, tol.tol_origin)
        rows = [self.row(seed, "crossing_count", len(ct))]

        exc = select_excursion(ct, trace, cfg.r, cfg.n)
        rows += [
            self.row(seed, "excursion_j", exc.j),
            self.row(seed, "excursion_diam", exc.diam),
            self.row(seed, "tau", exc.interval[1]),
        ]

        mps = marked_points(trace, full, exc, tol.eps_sep, ct.tol_origin)
        rows += [self.row(seed, "marked_point", x, index=k) for k, x in enumerate(mps.xs, start=1)]

        cv = crossing_counts(trace, full, mps, cfg.future_horizon, ct.tol_axis, ct.tol_origin)
        rows += [self.row(seed, "n_k", n, index=k) for k, n in enumerate(cv.counts, start=1)]
        rows += [
            self.row(seed, "n_outside", cv.outside),
            self.row(seed, "n_total", cv.total),
        ]
        return rows


class HitProb(Task):
    """Monte Carlo hitting probability against the closed form."""
    task_type = TaskTags.HITPROB

    def _run(self, seed: int) -> List[ReportRow]:
        cfg = self.config
        est = mc_hitting(
            HittingQuery(cfg.kappa, cfg.a, cfg.c), cfg.n_traces, cfg.steps, cfg.horizon, seed
        )
        return [
            self.row(seed, "p_hat", est.p_hat),
            self.row(seed, "stderr", est.stderr),
            self.row(seed, "f_theory", est.f_theory),
            self.row(seed, "z_kappa", est.z_kappa),
            self.row(seed, "unresolved", est.unresolved),
        ]
