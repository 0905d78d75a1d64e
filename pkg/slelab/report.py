"""Result files: long-format CSV rows, JSON summary and the config snapshot."""

import csv
import io
import json
import math
from pathlib import Path
from typing import Dict, Iterable, List, Optional

from .config_ingest import config_hash, serialize_config
from .dataclasses import ReportRow, RunConfig

SCHEMA_VERSION = 1

CSV_COLUMNS = ("schema_version", "seed", "kappa", "horizon", "steps", "name", "index", "value", "error")

RESULTS_FILE = "results.csv"
SUMMARY_FILE = "summary.json"
SNAPSHOT_FILE = "config.snapshot"


def _fmt(value: Optional[float]) -> str:
    if value is None:
        return ""
    return repr(float(value))


def csv_text(rows: Iterable[ReportRow]) -> str:
    """CSV body with a header; floats are written with repr so they read back exactly."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow((
            SCHEMA_VERSION,
            row.seed,
            _fmt(row.kappa),
            _fmt(row.horizon),
            row.steps,
            row.name,
            row.index,
            _fmt(row.value),
            row.error,
        ))
    return buf.getvalue()


def summarize(rows: Iterable[ReportRow]) -> Dict[str, Dict[str, float]]:
    """
    Mean, standard error and count per observable name (index folded in as name[index]
    when nonzero). Error rows and non-finite values are skipped.
    """
    groups: Dict[str, List[float]] = {}
    for row in rows:
        if row.error or row.value is None or not math.isfinite(row.value):
            continue
        key = row.name if row.index == 0 else f"{row.name}[{row.index}]"
        groups.setdefault(key, []).append(float(row.value))

    out = {}
    for key in sorted(groups):
        vals = groups[key]
        n = len(vals)
        mean = math.fsum(vals) / n
        if n > 1:
            var = math.fsum((v - mean) ** 2 for v in vals) / (n - 1)
            stderr = math.sqrt(var / n)
        else:
            stderr = None
        out[key] = {"mean": mean, "stderr": stderr, "count": n}
    return out


def summary_text(rows: List[ReportRow], config: RunConfig) -> str:
    body = {
        "schema_version": SCHEMA_VERSION,
        "config_hash": config_hash(config),
        "task": config.task,
        "seed_count": len(config.seeds),
        "error_count": sum(1 for r in rows if r.error),
        "observables": summarize(rows),
    }
    return json.dumps(body, sort_keys=True, indent=2) + "\n"


def _write(path: Path, text: str):
    try:
        with path.open("w", encoding="UTF-8", newline="") as f:
            f.write(text)
    except OSError as e:
        raise OSError(e.errno, f"cannot write {path}: {e.strerror}", str(path)) from e


def write_reports(out_dir: str, rows: List[ReportRow], config: RunConfig) -> Dict[str, Path]:
    """
    Writes results.csv, summary.json and config.snapshot under out_dir.

    Raises OSError naming the offending path.
    """
    target = Path(out_dir).expanduser()
    try:
        target.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise OSError(e.errno, f"cannot create output directory {target}: {e.strerror}", str(target)) from e

    paths = {
        "results": target / RESULTS_FILE,
        "summary": target / SUMMARY_FILE,
        "snapshot": target / SNAPSHOT_FILE,
    }
    _write(paths["results"], csv_text(rows))
    _write(paths["summary"], summary_text(rows, config))
    _write(paths["snapshot"], serialize_config(config))
    return paths
