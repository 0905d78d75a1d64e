"""Configuration file ingest functions"""

import hashlib
import json
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

import numpy as np

from .constants import CONFIG_KEYS, DEFAULT_CONFIG, MIN_STEPS, valid_task_key
from .dataclasses import Box, RunConfig, Tolerances
from .driving import SEED_LIMIT
from .exceptions import ConfigError, InvalidParameterError, InvalidTaskError

_FLOAT_KEYS = ("kappa", "horizon", "resolution", "r", "a", "c", "future_horizon", "anchor_diameter")
_INT_KEYS = ("steps", "n", "stride", "n_traces", "window")
_OPTIONAL_FLOAT_KEYS = ("tol_axis", "tol_origin", "eps_sep", "tol_collision", "rho_left", "rho_right")


def parse_config_file(path: str, overrides: Optional[Dict[str, Any]] = None) -> RunConfig:
    """
    Loads and parses a flat JSON config file from the given path into a RunConfig.

    The path is sanitized, expanded, and validated before reading; ``overrides``
    (None values ignored) take precedence over the file.
    Raises FileNotFoundError if the file does not exist.
    """

    safe_path = Path(path).expanduser().resolve(strict=False)

    if not safe_path.is_file():
        raise FileNotFoundError(f"Config file not found: {safe_path}")

    with safe_path.open("r", encoding="UTF-8") as f:
        try:
            json_data = json.load(f)
        except json.JSONDecodeError as e:
            raise ConfigError(f"{safe_path}: not valid JSON ({e})") from e

    if not isinstance(json_data, dict):
        raise ConfigError(f"{safe_path}: expected a flat JSON object")

    return parse_config_dict(merge_layers(json_data, overrides or {}))


def merge_layers(*layers: Dict[str, Any]) -> Dict[str, Any]:
    """Merge dicts left to right, skipping None values of later layers."""
    out: Dict[str, Any] = {}
    for layer in layers:
        for key, value in layer.items():
            if value is None and key in out:
                continue
            out[key] = value
    # an explicit seed list replaces the expansion keys
    if "seeds" in out and out["seeds"] is not None:
        out.pop("base_seed", None)
        out.pop("seed_count", None)
    return out


def expand_seeds(base_seed: int, count: int) -> Tuple[int, ...]:
    """Child seeds of SeedSequence(base_seed): the first ``count`` uint64 state words."""
    if count < 1:
        raise ConfigError(f"seed_count must be positive, got {count}")
    state = np.random.SeedSequence(int(base_seed)).generate_state(int(count), np.uint64)
    return tuple(int(s) for s in state)


def _parse_seeds(values: Dict[str, Any]) -> Tuple[int, ...]:
    seeds = values.get("seeds")
    if seeds is not None:
        if "base_seed" in values or "seed_count" in values:
            raise ConfigError("give either seeds or base_seed/seed_count, not both")
        if isinstance(seeds, str):
            seeds = [s for s in seeds.replace(",", " ").split() if s]
        try:
            seeds = tuple(int(s) for s in seeds)
        except (TypeError, ValueError) as e:
            raise ConfigError(f"seeds must be integers: {seeds!r}") from e
    else:
        seeds = expand_seeds(
            int(values.get("base_seed", DEFAULT_CONFIG["base_seed"])),
            int(values.get("seed_count", DEFAULT_CONFIG["seed_count"])),
        )

    if not seeds:
        raise ConfigError("at least one seed is required")
    if len(set(seeds)) != len(seeds):
        raise ConfigError("seeds must be distinct")
    if any(not 0 <= s < SEED_LIMIT for s in seeds):
        raise ConfigError("seeds must be 64-bit unsigned integers")
    return seeds


def _cast(key: str, value: Any, kind):
    try:
        out = kind(value)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"{key}: cannot read {value!r} as {kind.__name__}") from e
    if kind is int and out != value and not isinstance(value, str):
        raise ConfigError(f"{key}: expected an integer, got {value!r}")
    return out


def parse_config_dict(config_json: Dict[str, Any]) -> RunConfig:
    """
    Parses a flat config dictionary into a validated RunConfig.

    Missing keys take their defaults; raises ConfigError for unknown keys or
    invalid values and InvalidTaskError for unknown task tags.
    """

    unknown = sorted(set(config_json) - CONFIG_KEYS)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")

    values = {k: v for k, v in DEFAULT_CONFIG.items() if k not in ("seeds", "base_seed", "seed_count")}
    values.update({k: v for k, v in config_json.items() if v is not None or k in _OPTIONAL_FLOAT_KEYS})
    for key in ("seeds", "base_seed", "seed_count"):
        if config_json.get(key) is not None:
            values[key] = config_json[key]

    task = str(values["task"])
    if not valid_task_key(task):
        raise InvalidTaskError(f"invalid task: {task}")

    for key in _FLOAT_KEYS:
        values[key] = _cast(key, values[key], float)
    for key in _INT_KEYS:
        values[key] = _cast(key, values[key], int)
    for key in _OPTIONAL_FLOAT_KEYS:
        if values.get(key) is not None:
            values[key] = _cast(key, values[key], float)

    checks = (
        (values["kappa"] > 0, "kappa must be positive"),
        (values["horizon"] > 0, "horizon must be positive"),
        (values["steps"] >= MIN_STEPS, f"steps must be at least {MIN_STEPS}"),
        (values["resolution"] > 0, "resolution must be positive"),
        (values["r"] > 0, "r must be positive"),
        (values["n"] >= 1, "n must be at least 1"),
        (values["stride"] >= 1, "stride must be at least 1"),
        (values["n_traces"] >= 1, "n_traces must be at least 1"),
        (values["window"] >= 1, "window must be at least 1"),
        (values["future_horizon"] > 0, "future_horizon must be positive"),
    )
    for ok, message in checks:
        if not ok:
            raise ConfigError(message)

    try:
        box = Box(
            _cast("box_xmin", values["box_xmin"], float),
            _cast("box_xmax", values["box_xmax"], float),
            _cast("box_ymax", values["box_ymax"], float),
        )
    except InvalidParameterError as e:
        raise ConfigError(str(e)) from e

    return RunConfig(
        task=task,
        kappa=values["kappa"],
        horizon=values["horizon"],
        steps=values["steps"],
        seeds=_parse_seeds(values),
        resolution=values["resolution"],
        box=box,
        tolerances=Tolerances(
            values.get("tol_axis"), values.get("tol_origin"),
            values.get("eps_sep"), values.get("tol_collision"),
        ),
        r=values["r"],
        n=values["n"],
        stride=values["stride"],
        a=values["a"],
        c=values["c"],
        n_traces=values["n_traces"],
        future_horizon=values["future_horizon"],
        window=values["window"],
        anchor_diameter=values["anchor_diameter"],
        rho_left=values.get("rho_left"),
        rho_right=values.get("rho_right"),
        output_dir=str(values["output_dir"]),
    )


def config_to_dict(config: RunConfig) -> Dict[str, Any]:
    """Flat dictionary form of a config with an explicit seed list."""
    return {
        "task": config.task,
        "kappa": config.kappa,
        "horizon": config.horizon,
        "steps": config.steps,
        "seeds": list(config.seeds),
        "resolution": config.resolution,
        "box_xmin": config.box.xmin,
        "box_xmax": config.box.xmax,
        "box_ymax": config.box.ymax,
        "tol_axis": config.tolerances.tol_axis,
        "tol_origin": config.tolerances.tol_origin,
        "eps_sep": config.tolerances.eps_sep,
        "tol_collision": config.tolerances.tol_collision,
        "r": config.r,
        "n": config.n,
        "stride": config.stride,
        "a": config.a,
        "c": config.c,
        "n_traces": config.n_traces,
        "future_horizon": config.future_horizon,
        "window": config.window,
        "anchor_diameter": config.anchor_diameter,
        "rho_left": config.rho_left,
        "rho_right": config.rho_right,
        "output_dir": config.output_dir,
    }


def serialize_config(config: RunConfig) -> str:
    """Exact resolved config as sorted JSON; parse_config_dict(json.loads(...)) restores it."""
    return json.dumps(config_to_dict(config), sort_keys=True, indent=2) + "\n"


def config_hash(config: RunConfig) -> str:
    """SHA-256 of the resolved config, ignoring where the results are written."""
    flat = config_to_dict(config)
    flat.pop("output_dir")
    return hashlib.sha256(json.dumps(flat, sort_keys=True).encode("UTF-8")).hexdigest()
