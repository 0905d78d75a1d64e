import csv
import dataclasses
import json
import warnings

import pytest

from slelab.dataclasses import HittingQuery, ReportRow, RunConfig
from slelab.ensemble import Ensemble, run_ensemble
from slelab.exceptions import ConfigError, InvalidTaskError, UnresolvedTrialsWarning
from slelab.hitting import mc_hitting
from slelab.report import CSV_COLUMNS, SCHEMA_VERSION, csv_text, summarize, write_reports


def _rows_by_name(rows):
    return {(r.seed, r.name, r.index): r for r in rows}


def test_hitprob_row_matches_library_call(hitprob_config):
    cfg = dataclasses.replace(hitprob_config, seeds=(3,))
    rows = _rows_by_name(Ensemble(cfg).run())

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UnresolvedTrialsWarning)
        est = mc_hitting(HittingQuery(6.0, -1.0, 1.0), cfg.n_traces, cfg.steps, cfg.horizon, 3)
    assert rows[(3, "p_hat", 0)].value == est.p_hat
    assert rows[(3, "f_theory", 0)].value == est.f_theory
    assert rows[(3, "unresolved", 0)].value == est.unresolved


def test_worker_count_does_not_change_bytes(hitprob_config, tmp_path):
    run_ensemble(hitprob_config, workers=1, out_dir=str(tmp_path / "one"))
    run_ensemble(hitprob_config, workers=2, out_dir=str(tmp_path / "two"))

    for name in ("results.csv", "summary.json", "config.snapshot"):
        assert (tmp_path / "one" / name).read_bytes() == (tmp_path / "two" / name).read_bytes()


def test_rows_in_seed_order(hitprob_config):
    rows = Ensemble(hitprob_config, workers=2).run()
    seen = []
    for r in rows:
        if r.seed not in seen:
            seen.append(r.seed)
    assert tuple(seen) == hitprob_config.seeds


def test_failing_seed_becomes_error_row():
    cfg = RunConfig(task="crossings", kappa=8.0, horizon=0.1, steps=200, seeds=(1, 2), r=100.0)
    rows = Ensemble(cfg).run()

    assert [r.seed for r in rows] == [1, 2]
    assert all(r.name == "error" for r in rows)
    assert all(r.error.startswith("NotFoundError") for r in rows)
    assert all(r.value is None for r in rows)


@pytest.mark.parametrize("task,names", [
    ("simulate", {"steps_done", "hcap", "u_final", "tip_re", "tip_im", "max_height"}),
    ("bubbles", {"bubble_count", "type_count", "type3_large_count", "indicator_length"}),
])
def test_task_rows(task, names):
    cfg = RunConfig(task=task, kappa=6.0, horizon=0.25, steps=2000, seeds=(17,), stride=4,
                    resolution=1.0 / 256)
    rows = Ensemble(cfg).run()
    assert not any(r.error for r in rows)
    assert names <= {r.name for r in rows}
    assert all(r.kappa == 6.0 and r.steps == 2000 for r in rows)


def test_simulate_capacity():
    cfg = RunConfig(task="simulate", kappa=6.0, horizon=1.0, steps=64, seeds=(1,))
    rows = _rows_by_name(Ensemble(cfg).run())
    assert rows[(1, "hcap", 0)].value == 2.0
    assert rows[(1, "steps_done", 0)].value == 64


def test_rho_config_runs():
    cfg = RunConfig(task="simulate", kappa=6.0, horizon=1.0, steps=100, seeds=(1,), rho_right=-2.0)
    rows = _rows_by_name(Ensemble(cfg).run())
    assert rows[(1, "continuation_time", 0)].value == 0.0
    assert rows[(1, "steps_done", 0)].value == 0


def test_bad_ensemble_arguments(hitprob_config):
    with pytest.raises(ConfigError):
        Ensemble(hitprob_config, workers=0)
    with pytest.raises(InvalidTaskError):
        Ensemble(dataclasses.replace(hitprob_config, task="render"))
    with pytest.raises(InvalidTaskError):
        run_ensemble(hitprob_config, task="render")


def test_report_files(hitprob_config, tmp_path):
    paths = run_ensemble(hitprob_config, out_dir=str(tmp_path))

    with paths["results"].open(newline="") as f:
        table = list(csv.reader(f))
    assert tuple(table[0]) == CSV_COLUMNS
    assert all(row[0] == str(SCHEMA_VERSION) for row in table[1:])

    summary = json.loads(paths["summary"].read_text())
    assert summary["schema_version"] == SCHEMA_VERSION
    assert len(summary["config_hash"]) == 64
    assert summary["error_count"] == 0
    assert summary["observables"]["p_hat"]["count"] == 3

    assert json.loads(paths["snapshot"].read_text())["seeds"] == [3, 5, 8]


def test_unwritable_output(hitprob_config, tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    with pytest.raises(OSError, match="file"):
        write_reports(str(blocker), [], hitprob_config)


def test_summary_skips_errors_and_nan():
    rows = [
        ReportRow(1, "x", 1.0),
        ReportRow(2, "x", 3.0),
        ReportRow(3, "x", float("nan")),
        ReportRow(4, "error", None, error="NotFoundError: none"),
        ReportRow(1, "bit", 1.0, index=2),
    ]
    out = summarize(rows)
    assert out["x"] == {"mean": 2.0, "stderr": 1.0, "count": 2}
    assert out["bit[2]"]["count"] == 1
    assert "error" not in out


def test_csv_values_read_back_exactly():
    text = csv_text([ReportRow(1, "x", 0.1 + 0.2, kappa=6.0, horizon=1.0, steps=10)])
    row = list(csv.reader(text.splitlines()))[1]
    assert float(row[CSV_COLUMNS.index("value")]) == 0.1 + 0.2
    assert row[CSV_COLUMNS.index("error")] == ""
