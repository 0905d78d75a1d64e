"""Base class for ensemble tasks."""

import abc
import dataclasses
from logging import Logger
from typing import List, Optional

from .dataclasses import DrivingPath, ForcePoint, ReportRow, RunConfig
from .driving import sample_sle_driving, sample_sle_rho_driving
from .enums import Side
from .logger import LOG_LEVEL_DEBUG, LOG_LEVEL_INFO, get_logger


class Task:
    """Parent object for per-seed pipelines."""
    task_type = ""
    lg: Logger

    def __init__(self, config: RunConfig, debug: bool = False):
        log_level = LOG_LEVEL_DEBUG if debug else LOG_LEVEL_INFO
        self._init_logger(log_level)

        self.config = config
        self.lg.debug("task initialized: %s", self.task_type)


    def __str__(self):
        return f"slelab task of type: {self.task_type}"


    def _init_logger(self, log_level: int):
        """Initialises a logger for the task."""
        self.lg = get_logger(f"task-{self.task_type}", level=log_level)


    @abc.abstractmethod
    def _run(self, seed: int) -> List[ReportRow]:
        """Compute the observables of one seed (to be implemented by subclasses)."""


    def row(self, seed: int, name: str, value: Optional[float], index: int = 0) -> ReportRow:
        """A result row stamped with the run metadata."""
        return ReportRow(
            seed=int(seed),
            name=name,
            value=None if value is None else float(value),
            index=int(index),
            kappa=self.config.kappa,
            horizon=self.config.horizon,
            steps=self.config.steps,
        )


    def error_row(self, seed: int, exc: BaseException) -> ReportRow:
        return dataclasses.replace(
            self.row(seed, "error", None), error=f"{type(exc).__name__}: {exc}"
        )


    def driving(self, seed: int, horizon: Optional[float] = None,
                steps: Optional[int] = None) -> DrivingPath:
        """Driving path of the seed; SLE_kappa(rho) when a force-point weight is configured."""
        cfg = self.config
        horizon = cfg.horizon if horizon is None else horizon
        steps = cfg.steps if steps is None else steps

        fps = []
        if cfg.rho_left is not None:
            fps.append(ForcePoint(0.0, cfg.rho_left, Side.LEFT))
        if cfg.rho_right is not None:
            fps.append(ForcePoint(0.0, cfg.rho_right, Side.RIGHT))

        if not fps:
            return sample_sle_driving(cfg.kappa, horizon, steps, seed)
        return sample_sle_rho_driving(
            cfg.kappa, fps, horizon, steps, seed, cfg.tolerances.tol_collision
        )


    def run_seed(self, seed: int) -> List[ReportRow]:
        """Run one seed; a failure becomes a single error row."""
        self.lg.debug("running seed: %s", seed)
        try:
            rows = self._run(seed)
        except Exception as e:  # pylint: disable=broad-except
            self.lg.warning("seed %s failed: %s", seed, e)
            return [self.error_row(seed, e)]

        self.lg.debug("seed %s produced %s rows", seed, len(rows))
        return rows
