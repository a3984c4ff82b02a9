# ------------------------------------------------------------------------------
# File: exports.py
#
# Purpose:
#     Standardised output layer. Every table the lab produces is turned into a
#     pandas DataFrame and wrapped in an OutputEnvelope, which is emitted as
#     CSV or JSON on a text stream.
#
# Behaviour:
#     - Exact rationals are written as str(Fraction): "2/3", integers as "1".
#       Floats never stand in for exact values.
#     - JSON uses sorted keys and fixed indentation, so parsing an emission and
#       re-emitting it reproduces the same bytes.
#     - CSV emissions start with a single "# format_version=... command=..."
#       line; read them back with pandas.read_csv(..., comment="#").
# ------------------------------------------------------------------------------

from __future__ import annotations

import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Iterable, List, TextIO, Union

import pandas as pd

from necklace_lab.config import LAB_CONFIG
from necklace_lab.counting import CountReport
from necklace_lab.errors import InputError
from necklace_lab.exactdist import DistTable, MomentPair, ProcessCountTable
from necklace_lab.montecarlo import SimSummary

FORMATS = ("csv", "json")


def format_rational(q: Union[int, Fraction]) -> str:
    return str(Fraction(q))


def parse_rational(text: str) -> Fraction:
    return Fraction(text)


@dataclass
class OutputEnvelope:
    command: str
    parameters: Dict[str, Any]
    payload: Union[List[Dict[str, Any]], Dict[str, Any]]
    format_version: str = field(default_factory=lambda: LAB_CONFIG["format_version"])

    def to_dict(self) -> Dict[str, Any]:
        return {
            "command": self.command,
            "format_version": self.format_version,
            "parameters": self.parameters,
            "payload": self.payload,
        }


# ==============================================================================
# DataFrame builders
# ==============================================================================


def dist_table_frame(table: DistTable) -> pd.DataFrame:
    rows = [
        {"n": n, "k": k, "value": format_rational(p)}
        for n in range(2, table.n_max + 1)
        for k, p in sorted(table.row(n).items())
    ]
    return pd.DataFrame(rows, columns=["n", "k", "value"])


def process_count_frame(table: ProcessCountTable) -> pd.DataFrame:
    rows = [
        {"n": n, "k": k, "value": c}
        for n in range(2, table.n_max + 1)
        for k, c in sorted(table.row(n).items())
    ]
    return pd.DataFrame(rows, columns=["n", "k", "value"])


def moments_frame(white: Iterable[MomentPair], black: Iterable[MomentPair]) -> pd.DataFrame:
    rows = []
    for color, pairs in (("white", white), ("black", black)):
        for m in pairs:
            rows.append(
                {
                    "n": m.n,
                    "color": color,
                    "mean": format_rational(m.mean),
                    "variance": format_rational(m.variance),
                }
            )
    frame = pd.DataFrame(rows, columns=["n", "color", "mean", "variance"])
    return frame.sort_values(["n", "color"], ascending=[True, False], kind="stable")


def count_report_frame(reports: Iterable[CountReport]) -> pd.DataFrame:
    rows = [
        {
            "n": r.n,
            "exact_count": str(r.exact_count),
            "estimate": r.asymptotic_estimate,
            "relative_error": r.relative_error,
            "normalized_error": r.normalized_error,
            "brute_force": "" if r.brute_force is None else str(r.brute_force),
        }
        for r in reports
    ]
    return pd.DataFrame(
        rows,
        columns=[
            "n",
            "exact_count",
            "estimate",
            "relative_error",
            "normalized_error",
            "brute_force",
        ],
    )


def histogram_frame(summary: SimSummary) -> pd.DataFrame:
    rows = [
        {"n": summary.n, "k": k, "count": c, "fraction": c / summary.replications}
        for k, c in sorted(summary.histogram.items())
    ]
    return pd.DataFrame(rows, columns=["n", "k", "count", "fraction"])


def frame_records(frame: pd.DataFrame) -> List[Dict[str, Any]]:
    """DataFrame rows as plain-Python dicts (numpy scalars unwrapped)."""
    return [
        {k: (v.item() if hasattr(v, "item") else v) for k, v in rec.items()}
        for rec in frame.to_dict(orient="records")
    ]


# ==============================================================================
# Emission
# ==============================================================================


def dumps_json(envelope: OutputEnvelope) -> str:
    return json.dumps(envelope.to_dict(), indent=2, sort_keys=True) + "\n"


def emit(envelope: OutputEnvelope, fmt: str, stream: TextIO, frame: pd.DataFrame = None) -> None:
    """
    Write an envelope to `stream`.

    Parameters:
        fmt: "json" or "csv".
        frame: table written for CSV; defaults to the payload rows.
    """
    if fmt not in FORMATS:
        raise InputError(f"Unknown format '{fmt}'; choose from {FORMATS}.")
    if fmt == "json":
        stream.write(dumps_json(envelope))
        return
    if frame is None:
        if not isinstance(envelope.payload, list):
            raise InputError(f"Command '{envelope.command}' has no tabular payload.")
        frame = pd.DataFrame(envelope.payload)
    stream.write(
        f"# format_version={envelope.format_version} command={envelope.command}\n"
    )
    buffer = io.StringIO()
    frame.to_csv(buffer, index=False, lineterminator="\n")
    stream.write(buffer.getvalue())
