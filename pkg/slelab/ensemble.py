"""Main ensemble object."""

import dataclasses
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from pathlib import Path
from typing import Dict, List, Optional

from tqdm import tqdm

from .constants import TASK_OBJECT_MAP
from .dataclasses import ReportRow, RunConfig
from .enums import TaskTags
from .exceptions import ConfigError, InvalidTaskError
from .logger import LOG_LEVEL_DEBUG, LOG_LEVEL_INFO, get_logger
from .report import write_reports


def _run_seed(config: RunConfig, debug: bool, seed: int) -> List[ReportRow]:
    """Process-pool entry point: one fresh task object per seed."""
    task = TASK_OBJECT_MAP[TaskTags(config.task)](config, debug=debug)
    return task.run_seed(seed)


class Ensemble:
    """
    Runs one task over every seed of a config and collects the rows in seed order.

    Args:
        config (RunConfig): Resolved run configuration.
        workers (int): Process count; 1 runs in-process.
        debug (bool): Debug logging for the ensemble and its tasks.
        progress (bool): Show a tqdm bar over seeds.

    Raises:
        InvalidTaskError: If the config names an unknown task.
        ConfigError: If workers is not positive.
    """

    rows: List[ReportRow]

    def __init__(self, config: RunConfig, workers: int = 1, debug: bool = False,
                 progress: bool = False):

        if not TaskTags.valid_task_check(config.task):
            raise InvalidTaskError(f"invalid task: {config.task}")
        if workers < 1:
            raise ConfigError(f"workers must be positive, got {workers}")

        self.config = config
        self.workers = workers
        self.debug = debug
        self.progress = progress
        self.rows = []
        self.lg = get_logger("ensemble", LOG_LEVEL_DEBUG if debug else LOG_LEVEL_INFO)


    def run(self) -> List[ReportRow]:
        """Execute the task for all seeds; a failing seed contributes an error row."""
        seeds = list(self.config.seeds)
        job = partial(_run_seed, self.config, self.debug)
        self.lg.info(
            "running %s over %s seeds with %s worker(s)", self.config.task, len(seeds), self.workers
        )

        if self.workers == 1:
            results = map(job, seeds)
            results = self._progress(results, len(seeds))
            per_seed = list(results)
        else:
            with ProcessPoolExecutor(max_workers=self.workers) as pool:
                results = pool.map(job, seeds)
                per_seed = list(self._progress(results, len(seeds)))

        self.rows = [row for rows in per_seed for row in rows]
        errors = sum(1 for r in self.rows if r.error)
        if errors:
            self.lg.warning("%s of %s seeds failed", errors, len(seeds))
        self.lg.info("collected %s rows", len(self.rows))
        return self.rows


    def _progress(self, results, total: int):
        if not self.progress:
            return results
        return tqdm(results, total=total, desc=self.config.task, unit="seed")


    def write(self, out_dir: Optional[str] = None) -> Dict[str, Path]:
        """Write the report files; runs the ensemble first if needed."""
        if not self.rows:
            self.run()
        target = self.config.output_dir if out_dir is None else out_dir
        paths = write_reports(target, self.rows, self.config)
        self.lg.info("wrote reports to %s", target)
        return paths


def run_ensemble(config: RunConfig, task: Optional[str] = None, workers: int = 1,
                 out_dir: Optional[str] = None, progress: bool = False,
                 debug: bool = False) -> Dict[str, Path]:
    """Run ``task`` (default: the config's own) over the config's seeds and write the reports."""
    if task is not None and task != config.task:
        if not TaskTags.valid_task_check(task):
            raise InvalidTaskError(f"invalid task: {task}")
        config = dataclasses.replace(config, task=TaskTags(task).value)
    return Ensemble(config, workers=workers, debug=debug, progress=progress).write(out_dir)
