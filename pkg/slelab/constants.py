"""Storage for all constant values for easier configuration."""

from .enums import TaskTags

from .tasks import (
    Simulate,
    Bubbles,
    Crossings,
    HitProb,
)

__all__ = [
    "TaskTags",
    "TASK_OBJECT_MAP",
    "DEFAULT_CONFIG",
    "CONFIG_KEYS",
    "valid_task_key",
]


TASK_OBJECT_MAP = {
    TaskTags.SIMULATE: Simulate,
    TaskTags.BUBBLES: Bubbles,
    TaskTags.CROSSINGS: Crossings,
    TaskTags.HITPROB: HitProb,
}


# Flat config keys with their defaults. None tolerances are derived from the data;
# seeds default to the (base_seed, seed_count) expansion.
DEFAULT_CONFIG = {
    "task": TaskTags.SIMULATE.value,
    "kappa": 6.0,
    "horizon": 1.0,
    "steps": 10000,
    "seeds": None,
    "base_seed": 0,
    "seed_count": 8,
    "resolution": 1.0 / 512,
    "box_xmin": -8.0,
    "box_xmax": 8.0,
    "box_ymax": 8.0,
    "tol_axis": None,
    "tol_origin": None,
    "eps_sep": None,
    "tol_collision": None,
    "r": 1.0,
    "n": 1,
    "stride": 1,
    "a": -1.0,
    "c": 1.0,
    "n_traces": 2000,
    "future_horizon": 0.25,
    "window": 6,
    "anchor_diameter": 1.0,
    "rho_left": None,
    "rho_right": None,
    "output_dir": "slelab-out",
}

CONFIG_KEYS = frozenset(DEFAULT_CONFIG)

MIN_STEPS = 10


def valid_task_key(key: str) -> bool:
    """Check if the key is a valid task tag."""
    return TaskTags.valid_task_check(key)
