import dataclasses
import json

import pytest

from slelab.config_ingest import (
    config_hash,
    expand_seeds,
    merge_layers,
    parse_config_dict,
    parse_config_file,
    serialize_config,
)
from slelab.constants import DEFAULT_CONFIG
from slelab.dataclasses import Box, Tolerances
from slelab.exceptions import ConfigError, InvalidTaskError


def test_defaults():
    cfg = parse_config_dict({})
    assert cfg.task == "simulate"
    assert cfg.steps == DEFAULT_CONFIG["steps"]
    assert cfg.seeds == expand_seeds(0, 8)
    assert cfg.box == Box()
    assert cfg.tolerances == Tolerances()


def test_seed_expansion():
    seeds = expand_seeds(12, 5)
    assert seeds == expand_seeds(12, 5)
    assert len(set(seeds)) == 5
    assert all(0 <= s < 2 ** 64 for s in seeds)
    # growing the ensemble keeps the earlier seeds
    assert expand_seeds(12, 8)[:5] == seeds


def test_explicit_seeds_verbatim():
    cfg = parse_config_dict({"seeds": [5, 3, 9]})
    assert cfg.seeds == (5, 3, 9)
    assert parse_config_dict({"seeds": "5, 3 9"}).seeds == (5, 3, 9)


def test_roundtrip():
    cfg = parse_config_dict({
        "task": "crossings",
        "kappa": 8,
        "steps": 2000,
        "seeds": [1, 2],
        "tol_axis": 0.01,
        "rho_right": -1.0,
        "box_xmin": -4,
    })
    assert parse_config_dict(json.loads(serialize_config(cfg))) == cfg


@pytest.mark.parametrize("bad", [
    {"unknown_key": 1},
    {"steps": 5},
    {"steps": 100.5},
    {"kappa": -1},
    {"resolution": 0},
    {"seeds": [1, 1]},
    {"seeds": []},
    {"seeds": [2 ** 64]},
    {"seeds": [1], "base_seed": 3},
    {"seed_count": 0},
    {"box_xmin": 1.0},
    {"kappa": "six"},
])
def test_invalid_configs(bad):
    with pytest.raises(ConfigError):
        parse_config_dict(bad)


def test_invalid_task():
    with pytest.raises(InvalidTaskError):
        parse_config_dict({"task": "render"})


def test_config_file_with_overrides(tmp_path):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"task": "bubbles", "kappa": 6.0, "base_seed": 4, "seed_count": 2}))

    cfg = parse_config_file(str(path), {"steps": 200, "kappa": None})
    assert cfg.task == "bubbles"
    assert cfg.kappa == 6.0
    assert cfg.steps == 200
    assert cfg.seeds == expand_seeds(4, 2)

    cfg = parse_config_file(str(path), {"seeds": [7]})
    assert cfg.seeds == (7,)


def test_config_file_errors(tmp_path):
    with pytest.raises(FileNotFoundError):
        parse_config_file(str(tmp_path / "missing.json"))

    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    with pytest.raises(ConfigError):
        parse_config_file(str(broken))

    listed = tmp_path / "list.json"
    listed.write_text("[1, 2]")
    with pytest.raises(ConfigError):
        parse_config_file(str(listed))


def test_merge_layers():
    merged = merge_layers({"kappa": 6.0, "base_seed": 1}, {"kappa": None, "seeds": [3]})
    assert merged == {"kappa": 6.0, "seeds": [3]}


def test_config_hash():
    cfg = parse_config_dict({"seeds": [1, 2]})
    assert config_hash(cfg) == config_hash(dataclasses.replace(cfg, output_dir="elsewhere"))
    assert config_hash(cfg) != config_hash(dataclasses.replace(cfg, kappa=7.0))
    assert len(config_hash(cfg)) == 64
