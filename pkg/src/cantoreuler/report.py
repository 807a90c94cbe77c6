"""Run configuration, check records, and deterministic report emission.

Reports are machine-readable first: every numeric value ships as strings in
up to three renderings (decimal, exact rational "p/q", and a log2-domain
form "log2=..." for magnitudes no numeric JSON type can hold).  For a fixed
configuration and seed the emitted bytes are identical across runs: keys are
sorted, column orders fixed, floats rendered with repr, and files written
atomically (temp file + rename).
"""

from __future__ import annotations

import dataclasses
import json
import os
import tempfile
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional

from .extscalar import ExtScalar


@dataclass(frozen=True)
class RunConfig:
    max_generation: int = 4
    patch_c: Fraction = Fraction(2)
    morrey_alpha: Fraction = Fraction(1)
    log_base: str = "2"
    morrey_depth: int = 1024
    output_format: str = "json"
    output_path: Optional[str] = None
    seed: int = 0

    def __post_init__(self):
        if not (0 <= self.max_generation <= 6):
            raise ValueError("max_generation must be in 0..6")
        if self.morrey_depth < 1:
            raise ValueError("morrey_depth must be >= 1")
        if self.log_base not in ("2", "e"):
            raise ValueError("log_base must be '2' or 'e'")
        if self.output_format not in ("json", "csv"):
            raise ValueError("output_format must be 'json' or 'csv'")

    def to_dict(self) -> dict[str, str]:
        return {
            "max_generation": str(self.max_generation),
            "patch_c": frac_str(self.patch_c),
            "morrey_alpha": frac_str(self.morrey_alpha),
            "log_base": self.log_base,
            "morrey_depth": str(self.morrey_depth),
            "output_format": self.output_format,
            "seed": str(self.seed),
        }


# ---------------------------------------------------------------------------
# value rendering
# ---------------------------------------------------------------------------


def frac_str(f: Fraction) -> str:
    f = Fraction(f)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def frac_decimal(f: Fraction, max_digits: int = 24) -> str:
    """Exact decimal when the denominator is 2^a 5^b and short enough, else repr(float)."""
    f = Fraction(f)
    den = f.denominator
    a = 0
    while den % 2 == 0:
        den //= 2
        a += 1
    b = 0
    while den % 5 == 0:
        den //= 5
        b += 1
    if den == 1 and max(a, b) <= max_digits:
        scale = 10 ** max(a, b)
        digits = f.numerator * scale // f.denominator
        sign = "-" if digits < 0 else ""
        digits = abs(digits)
        if max(a, b) == 0:
            return f"{sign}{digits}"
        s = str(digits).rjust(max(a, b) + 1, "0")
        whole, frac_part = s[: -max(a, b)], s[-max(a, b):]
        return f"{sign}{whole}.{frac_part}"
    return repr(float(f))


def log2_str(v: float) -> str:
    """Scientific-style rendering of a log2-domain value with explicit marker."""
    s = f"{v:.6e}"
    mant, exp = s.split("e")
    exp_i = int(exp)
    return f"log2={mant}e{exp_i}"


def ext_value(e: ExtScalar) -> dict[str, str]:
    out: dict[str, str] = {"log2": ""}
    if e.sign == 0:
        out["decimal"] = "0"
        out["log2"] = "log2=-inf"
        return out
    out["log2"] = log2_str(e.log2() if e.sign > 0 else float("nan"))
    try:
        out["decimal"] = repr(e.to_float())
    except OverflowError:
        out["decimal"] = f"{'-' if e.sign < 0 else ''}2^{e.log2():.6f}"
    return out


def render_value(
    value: Any,
) -> dict[str, str]:
    """Uniform rendering: rationals get exact strings, wide values log2 forms."""
    if isinstance(value, Fraction):
        return {"rational": frac_str(value), "decimal": frac_decimal(value)}
    if isinstance(value, int):
        return {"rational": str(value), "decimal": str(value)}
    if isinstance(value, float):
        return {"decimal": repr(value)}
    if isinstance(value, ExtScalar):
        return ext_value(value)
    if isinstance(value, bool):
        return {"decimal": "true" if value else "false"}
    return {"decimal": str(value)}


# ---------------------------------------------------------------------------
# checks and reports
# ---------------------------------------------------------------------------


@dataclass
class Check:
    """One verified identity or threshold with full value renderings."""

    check_id: str
    anchor: str
    relation: str
    computed: Any
    expected: str
    passed: bool
    note: str = ""

    def to_dict(self) -> dict[str, Any]:
        return {
            "anchor": self.anchor,
            "computed": render_value(self.computed),
            "expected": self.expected,
            "id": self.check_id,
            "note": self.note,
            "passed": self.passed,
            "relation": self.relation,
        }


@dataclass
class VerificationReport:
    config: RunConfig
    checks: list[Check] = field(default_factory=list)
    datasets: dict[str, Any] = field(default_factory=dict)

    @property
    def status(self) -> str:
        return "pass" if all(c.passed for c in self.checks) else "fail"

    def add(self, check: Check) -> None:
        self.checks.append(check)

    def failed_checks(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_json_bytes(self) -> bytes:
        doc = {
            "checks": [c.to_dict() for c in self.checks],
            "config": self.config.to_dict(),
            "datasets": self.datasets,
            "schema": "cantoreuler-report-v1",
            "status": self.status,
        }
        return (json.dumps(doc, sort_keys=True, indent=2) + "\n").encode()

    CSV_COLUMNS = ("id", "anchor", "relation", "expected", "decimal", "rational", "log2", "passed")

    def to_csv_bytes(self) -> bytes:
        lines = [",".join(self.CSV_COLUMNS)]
        for c in self.checks:
            rendered = render_value(c.computed)
            row = [
                c.check_id,
                _csv_quote(c.anchor),
                c.relation,
                _csv_quote(c.expected),
                rendered.get("decimal", ""),
                rendered.get("rational", ""),
                rendered.get("log2", ""),
                "true" if c.passed else "false",
            ]
            lines.append(",".join(row))
        return ("\n".join(lines) + "\n").encode()


def _csv_quote(s: str) -> str:
    if any(ch in s for ch in ",\"\n"):
        return '"' + s.replace('"', '""') + '"'
    return s


def emit_report(report: VerificationReport, path: str, fmt: Optional[str] = None) -> str:
    """Atomically write the report; returns the path written."""
    fmt = fmt or report.config.output_format
    data = report.to_json_bytes() if fmt == "json" else report.to_csv_bytes()
    return atomic_write(path, data)


def atomic_write(path: str, data: bytes) -> str:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    try:
        fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-report-")
        try:
            with os.fdopen(fd, "wb") as fh:
                fh.write(data)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
    except OSError as exc:
        raise OSError(f"failed writing report to {path!r}: {exc}") from exc
    return path


def rows_to_csv_bytes(header: list[str], rows: list[list[str]]) -> bytes:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_csv_quote(x) for x in row))
    return ("\n".join(lines) + "\n").encode()
