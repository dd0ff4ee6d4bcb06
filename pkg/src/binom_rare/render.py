"""Presentation helpers: rounding conventions, band colors, CSV/JSON output.

All rounding for display lives here; the library itself always returns
full-precision values.  Conventions: sample sizes at 2 significant digits
in scientific form, coverage as one-decimal percent, margins of error at
two decimals.  Data files are deterministic: LF line endings, '.' decimal
separator, scientific notation for small magnitudes, and no timestamps.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from decimal import Decimal, ROUND_HALF_UP
from dataclasses import dataclass

from .evaluation import ToleranceBand

__all__ = [
    "ReportRow",
    "fmt_n_sig2",
    "fmt_pct",
    "fmt_two_dec",
    "canon_num",
    "Cell",
    "render_csv",
    "render_json",
    "render_text_table",
    "color_enabled",
    "NO_COLOR_ENV",
]

NO_COLOR_ENV = "BINOM_RARE_NO_COLOR"

_ANSI_RESET = "\x1b[0m"
_BAND_ANSI = {
    ToleranceBand.TARGET: "\x1b[32m",                 # green
    ToleranceBand.ACCEPTABLE: "\x1b[33m",             # yellow
    ToleranceBand.MINIMALLY_ACCEPTABLE: "\x1b[38;5;208m",  # orange (256-color)
    ToleranceBand.UNACCEPTABLE: "\x1b[31m",           # red
}


def fmt_n_sig2(n: int | float) -> str:
    """Sample size at 2 significant digits in scientific form, e.g. '2.2e+02'.

    Ties round half up (865 -> 8.7e+02), matching the reference rounding.
    """
    d = Decimal(n) if isinstance(n, int) else Decimal(repr(float(n)))
    if d == 0:
        return "0.0e+00"
    exp = d.adjusted()
    mant = d.scaleb(-exp).quantize(Decimal("1.0"), rounding=ROUND_HALF_UP)
    if mant >= 10:
        mant = mant.scaleb(-1).quantize(Decimal("1.0"), rounding=ROUND_HALF_UP)
        exp += 1
    return f"{mant}e{exp:+03d}"


def fmt_pct(value: float) -> str:
    """Probability as one-decimal percent text."""
    return f"{100.0 * value:.1f}"


def fmt_two_dec(value: float) -> str:
    return f"{value:.2f}"


def canon_num(value) -> str:
    """Canonical, round-trip-exact text for a number.

    Integers render as integers; floats use the shortest repr, switching to
    scientific notation when |v| < 1e-3 as data-file convention.  The output
    parses back to exactly the same value, so re-rendering a parsed file is
    byte-identical.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not numeric cells")
    if isinstance(value, int):
        return str(value)
    v = float(value)
    if math.isnan(v) or math.isinf(v):
        raise ValueError(f"non-finite value in data output: {value!r}")
    if v == 0.0:
        return "0"
    if abs(v) >= 1e-3:
        if v == int(v) and abs(v) < 1e16:
            return str(int(v))
        return repr(v)
    for prec in range(17):
        s = f"{v:.{prec}e}"
        if float(s) == v:
            return s
    return f"{v:.17e}"


@dataclass(frozen=True)
class Cell:
    """One table cell: display text plus an optional band for coloring."""

    text: str
    band: ToleranceBand | None = None


def _cell_text(cell) -> str:
    return cell.text if isinstance(cell, Cell) else str(cell)


def _cell_band(cell):
    return cell.band if isinstance(cell, Cell) else None


def color_enabled(no_color_flag: bool, stream) -> bool:
    if no_color_flag or os.environ.get(NO_COLOR_ENV):
        return False
    return bool(getattr(stream, "isatty", lambda: False)())


def _colorize(text: str, band: ToleranceBand | None, enabled: bool) -> str:
    if not enabled or band is None:
        return text
    return f"{_BAND_ANSI[band]}{text}{_ANSI_RESET}"


def render_csv(header: list[str], rows: list[list], comments: list[str] | None = None) -> str:
    """CSV with LF endings; trailing '# ' comment lines carry any summary."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell_text(c) for c in row])
    for line in comments or []:
        buf.write(f"# {line}\n")
    return buf.getvalue()


def render_json(meta: dict, rows: list[dict]) -> str:
    return json.dumps({"meta": meta, "rows": rows}, indent=2) + "\n"


def render_text_table(header: list[str], rows: list[list],
                      colors: bool = False, footer: list[str] | None = None) -> str:
    """Fixed-width aligned table for terminals."""
    texts = [[_cell_text(c) for c in row] for row in rows]
    widths = [len(h) for h in header]
    for row in texts:
        for i, t in enumerate(row):
            widths[i] = max(widths[i], len(t))
    lines = ["  ".join(h.ljust(widths[i]) for i, h in enumerate(header)),
             "  ".join("-" * w for w in widths)]
    for row, text_row in zip(rows, texts):
        parts = []
        for i, cell in enumerate(row):
            parts.append(_colorize(text_row[i].ljust(widths[i]), _cell_band(cell), colors))
        lines.append("  ".join(parts))
    for line in footer or []:
        lines.append(line)
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ReportRow:
    """One reporting row: a design point with its interval and performance."""

    estimator: str
    n: int
    p: float
    alpha: float
    lower: float | None = None
    upper: float | None = None
    cpr: float | None = None
    eps_r: float | None = None
    coverage_band: str | None = None
    moe_band: str | None = None

    def to_dict(self) -> dict:
        return {
            "estimator": self.estimator,
            "n": self.n,
            "p": self.p,
            "alpha": self.alpha,
            "lower": self.lower,
            "upper": self.upper,
            "cpr": self.cpr,
            "eps_r": self.eps_r,
            "coverage_band": self.coverage_band,
            "moe_band": self.moe_band,
        }

    CSV_HEADER = ("estimator", "n", "p", "alpha", "lower", "upper",
                  "cpr", "eps_r", "coverage_band", "moe_band")

    def to_csv_cells(self, coverage_band_obj=None, moe_band_obj=None) -> list:
        opt = lambda v: "" if v is None else canon_num(v)
        return [
            self.estimator,
            str(self.n),
            canon_num(self.p),
            canon_num(self.alpha),
            opt(self.lower),
            opt(self.upper),
            opt(self.cpr),
            opt(self.eps_r),
            Cell(self.coverage_band or "", coverage_band_obj),
            Cell(self.moe_band or "", moe_band_obj),
        ]
