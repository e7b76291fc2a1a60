"""JSON and CSV serialisation of command results and prune reports."""
from __future__ import annotations

import io
import json
from typing import Any, Sequence

import pandas as pd

from ..errors import InvalidParameter
from ..pruning.pruner import PruneReport
from ..utils import dumps_json

REPORT_CSV_COLUMNS: list[str] = ["layer", "kept", "total", "pr_percent", "err_mean", "err_max"]


def report_to_json(report: PruneReport) -> str:
    return dumps_json(report.as_dict())


def report_from_json(text: str) -> PruneReport:
    try:
        return PruneReport.from_dict(json.loads(text))
    except (json.JSONDecodeError, TypeError) as exc:
        raise InvalidParameter(f"malformed prune report: {exc}") from exc


def records_to_csv(records: Sequence[dict[str, Any]], columns: Sequence[str]) -> str:
    """RFC-4180 CSV with a header row and the given column order."""
    frame = pd.DataFrame.from_records(list(records), columns=list(columns))
    buffer = io.StringIO()
    frame.to_csv(buffer, index=False, lineterminator="\n")
    return buffer.getvalue()


def report_to_csv(report: PruneReport) -> str:
    """
    One row per pruned layer plus a final 'total' row carrying the
    network-level pruning ratio and the mean / max of the layer errors.
    """
    rows = [
        {
            "layer": str(layer.layer),
            "kept": layer.kept,
            "total": layer.total,
            "pr_percent": layer.pr_percent,
            "err_mean": layer.err_mean,
            "err_max": layer.err_max,
        }
        for layer in report.layers
    ]
    rows.append({
        "layer": "total",
        "kept": sum(layer.kept for layer in report.layers),
        "total": sum(layer.total for layer in report.layers),
        "pr_percent": report.pr_percent,
        "err_mean": (sum(layer.err_mean for layer in report.layers) / len(report.layers)
                     if report.layers else 0.0),
        "err_max": max((layer.err_max for layer in report.layers), default=0.0),
    })
    return records_to_csv(rows, REPORT_CSV_COLUMNS)


def report_frame(csv_text: str) -> pd.DataFrame:
    """Parse CSV produced by this module back into a DataFrame."""
    return pd.read_csv(io.StringIO(csv_text), dtype={"layer": str})
