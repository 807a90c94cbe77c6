"""Figure specifications: what to draw, from which report file, to which image.

Rendering never recomputes mathematics.  Every number drawn or printed comes
from the report produced by the verification CLI; geometry below true pixel
scale (sides like 2^-16) is drawn in a symbolic log-warped layout, and every
warped figure says so in an annotation.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

FIGURE_IDS = (
    "cantor-hierarchy",
    "sparse-tower",
    "patch-geometry",
    "inner-tower",
    "morrey-growth",
    "sparse-divergence",
    "energy-decay",
)


@dataclass(frozen=True)
class FigureStyle:
    width: float = 7.0
    height: float = 7.0
    dpi: int = 144
    line_width: float = 1.4
    shrink_ratio: float = 0.3  # display side of a child square / parent side
    font_size: float = 9.0


@dataclass(frozen=True)
class FigureSpec:
    figure_id: str
    input_path: str
    output_path: str
    style: FigureStyle = field(default_factory=FigureStyle)

    def __post_init__(self):
        if self.figure_id not in FIGURE_IDS:
            raise ValueError(
                f"unknown figure id {self.figure_id!r}; expected one of {', '.join(FIGURE_IDS)}"
            )


class ReportFormatError(ValueError):
    """The input file does not match the report schema this renderer expects."""


def load_report(path: str) -> dict:
    """Load a report: JSON verification reports or the sparse-profile CSV.

    CSV inputs are wrapped into the same shape as the JSON ``datasets`` block
    so the renderers have a single source format.
    """
    p = Path(path)
    if not p.exists():
        raise ReportFormatError(f"report file not found: {path}")
    if p.suffix.lower() == ".csv":
        with open(p, newline="") as fh:
            rows = list(csv.DictReader(fh))
        if not rows or "generation" not in rows[0] or "cumulative" not in rows[0]:
            raise ReportFormatError(
                f"{path}: CSV input must be a tower-profile table with "
                "'generation' and 'cumulative' columns"
            )
        return {
            "schema": "cantoreuler-report-v1",
            "datasets": {
                "sparse_divergence": [
                    {
                        "generation": int(r["generation"]),
                        "contribution": r["contribution"],
                        "cumulative": r["cumulative"],
                    }
                    for r in rows
                ]
            },
        }
    try:
        doc = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise ReportFormatError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(doc, dict) or doc.get("schema") != "cantoreuler-report-v1":
        raise ReportFormatError(
            f"{path}: expected schema 'cantoreuler-report-v1', got {doc.get('schema')!r}"
        )
    return doc


def require_dataset(doc: dict, key: str, figure_id: str):
    datasets = doc.get("datasets", {})
    if key not in datasets:
        raise ReportFormatError(
            f"report lacks dataset {key!r} needed by figure {figure_id!r}; "
            "generate it with the verify-all subcommand"
        )
    return datasets[key]
