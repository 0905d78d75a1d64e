import json

import pytest

from slelab.cli import EXIT_IO, EXIT_OK, EXIT_USAGE, main


def test_hitprob_run(tmp_path):
    out = tmp_path / "hit"
    code = main(["hitprob", "--kappa", "6", "--seeds", "1,2", "--steps", "200",
                 "--horizon", "10", "--out", str(out)])
    assert code == EXIT_OK
    assert (out / "results.csv").is_file()
    snapshot = json.loads((out / "config.snapshot").read_text())
    assert snapshot["seeds"] == [1, 2]
    assert snapshot["task"] == "hitprob"


def test_config_file_and_override(tmp_path):
    config = tmp_path / "run.json"
    config.write_text(json.dumps({"task": "hitprob", "kappa": 8.0, "steps": 100, "horizon": 5.0,
                                  "n_traces": 16, "seeds": [4]}))
    out = tmp_path / "sim"
    assert main(["simulate", "--config", str(config), "--out", str(out)]) == EXIT_OK

    snapshot = json.loads((out / "config.snapshot").read_text())
    assert snapshot["task"] == "simulate"
    assert snapshot["kappa"] == 8.0


def test_usage_errors(tmp_path):
    with pytest.raises(SystemExit) as err:
        main(["render"])
    assert err.value.code == EXIT_USAGE

    with pytest.raises(SystemExit) as err:
        main(["simulate", "--kappa", "six"])
    assert err.value.code == EXIT_USAGE

    assert main(["simulate", "--steps", "5", "--out", str(tmp_path)]) == EXIT_USAGE
    assert main(["simulate", "--workers", "0"]) == EXIT_USAGE


def test_io_errors(tmp_path):
    assert main(["simulate", "--config", str(tmp_path / "missing.json")]) == EXIT_IO

    blocker = tmp_path / "file"
    blocker.write_text("x")
    assert main(["simulate", "--steps", "20", "--seeds", "1", "--out", str(blocker)]) == EXIT_IO


def test_verify_subcommand(capsys):
    assert main(["verify", "--quick", "--only", "recursion-bound"]) == EXIT_OK
    assert "recursion-bound" in capsys.readouterr().out

    with pytest.raises(SystemExit) as err:
        main(["verify", "--only", "nothing"])
    assert err.value.code == EXIT_USAGE
