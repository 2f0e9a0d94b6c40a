"""Per-context rows and the chi summary, with CSV/JSON persistence."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field

from .contextuality import NchvAnalysis
from .geometry import IncidenceConfiguration
from .simulator import ContextStats

CSV_COLUMNS = ("context", "sign", "count_plus", "count_minus", "mean", "std")
DETERMINISTIC = "deterministic"


@dataclass(frozen=True)
class ContextRow:
    context: str
    sign: int
    count_plus: int
    count_minus: int

    @property
    def stats(self) -> ContextStats:
        return ContextStats(self.count_plus, self.count_minus)

    @property
    def mean(self) -> float:
        return self.stats.mean

    @property
    def std(self) -> float:
        return self.stats.std


@dataclass
class Summary:
    M: int
    S: int
    chi: float
    sigma_chi: float
    P: int | None = None
    P_certainty: str | None = None
    b_nchv: int | None = None
    b_qm: int | None = None
    # float, or "deterministic" when sigma_chi == 0
    violation_sigmas: float | str | None = None


def summarize(rows, analysis: NchvAnalysis | None = None) -> Summary:
    chi = sum(r.sign * r.mean for r in rows)
    sigma = math.sqrt(sum(r.std**2 for r in rows))
    s = Summary(M=len(rows), S=sum(1 for r in rows if r.sign == 1), chi=chi, sigma_chi=sigma)
    if analysis is not None:
        s.P, s.P_certainty, s.b_nchv, s.b_qm = analysis.P, analysis.P_certainty, analysis.b_nchv, analysis.b_qm
        s.violation_sigmas = violation_sigmas(chi, sigma, analysis.b_nchv)
    return s


def violation_sigmas(chi: float, sigma_chi: float, b_nchv: int) -> float | str:
    if sigma_chi == 0.0:
        return DETERMINISTIC
    return (chi - b_nchv) / sigma_chi


@dataclass
class ExperimentReport:
    rows: list[ContextRow]
    summary: Summary
    meta: dict = field(default_factory=dict)

    @classmethod
    def build(cls, config: IncidenceConfiguration, stats, analysis: NchvAnalysis | None = None, meta=None):
        rows = [
            ContextRow(c.name, c.sign, s.count_plus, s.count_minus) for c, s in zip(config.contexts, stats, strict=True)
        ]
        return cls(rows, summarize(rows, analysis), dict(meta or {}))

    @property
    def chi(self) -> float:
        return self.summary.chi

    @property
    def sigma_chi(self) -> float:
        return self.summary.sigma_chi

    @property
    def violation(self):
        return self.summary.violation_sigmas

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in self.rows:
            w.writerow([r.context, r.sign, r.count_plus, r.count_minus, f"{r.mean:.4f}", f"{r.std:.4f}"])
        return buf.getvalue()

    def to_json(self) -> str:
        doc = {
            "meta": self.meta,
            "rows": [dict(asdict(r), mean=r.mean, std=r.std) for r in self.rows],
            "summary": asdict(self.summary),
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"


class ReportFormatError(ValueError):
    pass


def read_rows_csv(text: str, check_rounding: bool = True) -> list[ContextRow]:
    """Parse a rows CSV; the mean/std columns must agree with the counts at 4 decimals."""
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
        raise ReportFormatError(f"expected columns {','.join(CSV_COLUMNS)}")
    rows = []
    for rec in reader:
        try:
            row = ContextRow(rec["context"], int(rec["sign"]), int(rec["count_plus"]), int(rec["count_minus"]))
            mean, std = float(rec["mean"]), float(rec["std"])
        except ValueError as e:
            raise ReportFormatError(f"bad row {rec}: {e}") from None
        if row.sign not in (1, -1) or row.count_plus < 0 or row.count_minus < 0 or row.stats.n_exp == 0:
            raise ReportFormatError(f"bad row {rec}")
        if check_rounding and (abs(mean - row.mean) > 5.001e-5 or abs(std - row.std) > 5.001e-5):
            raise ReportFormatError(f"row {row.context}: mean/std columns disagree with the counts")
        rows.append(row)
    return rows
