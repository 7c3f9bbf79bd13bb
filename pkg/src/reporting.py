"""
HeckMort - Reporting
JSON report records and text summary tables for verification runs.
"""

import json
from fractions import Fraction
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import pandas as pd
from pydantic import BaseModel, Field

from series_core import QSeries, VerificationReport

FractionPair = Tuple[int, int]


def fraction_pair(value: Fraction) -> FractionPair:
    return (value.numerator, value.denominator)


class MismatchRecord(BaseModel):
    """First differing coefficient"""
    exponent: FractionPair = Field(description="Reduced exponent as [numerator, denominator]")
    lhs: str
    rhs: str


class ReportRecord(BaseModel):
    """One verified identity"""
    identity: str
    status: str = Field(description="Verified, Mismatch or Inconclusive")
    checked_order: FractionPair
    first_mismatch: Optional[MismatchRecord] = None
    elapsed_ms: int = Field(ge=0)

    @classmethod
    def from_report(cls, report: VerificationReport) -> "ReportRecord":
        mismatch = None
        if report.first_mismatch is not None:
            m = report.first_mismatch
            mismatch = MismatchRecord(
                exponent=fraction_pair(m.exponent), lhs=str(m.lhs), rhs=str(m.rhs)
            )
        return cls(
            identity=report.label,
            status=report.status.value,
            checked_order=fraction_pair(report.checked_to),
            first_mismatch=mismatch,
            elapsed_ms=int(round(report.elapsed * 1000)),
        )


def report_records(reports: Iterable[VerificationReport]) -> List[ReportRecord]:
    return [ReportRecord.from_report(report) for report in reports]


def reports_json(reports: Iterable[VerificationReport]) -> str:
    """The JSON report array; elapsed_ms is the only run-dependent field"""
    payload = [record.model_dump(mode="json") for record in report_records(reports)]
    return json.dumps(payload, indent=2, sort_keys=True)


def write_reports(path: Union[str, Path], reports: Sequence[VerificationReport]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(reports_json(reports) + "\n", encoding="utf-8")
    return path


def summary_table(reports: Sequence[VerificationReport]) -> pd.DataFrame:
    """One row per report, ready for DataFrame.to_string"""
    rows = []
    for report in reports:
        m = report.first_mismatch
        rows.append(
            {
                "identity": report.label,
                "status": report.status.value,
                "checked to": f"q^{report.checked_to}",
                "first mismatch": "" if m is None else f"q^{m.exponent}: {m.lhs} != {m.rhs}",
                "ms": int(round(report.elapsed * 1000)),
            }
        )
    return pd.DataFrame(
        rows, columns=["identity", "status", "checked to", "first mismatch", "ms"]
    )


def format_summary(reports: Sequence[VerificationReport]) -> str:
    if not reports:
        return "No identities checked"
    table = summary_table(reports)
    verified = int((table["status"] == "Verified").sum())
    return f"{table.to_string(index=False)}\n\n{verified}/{len(table)} verified"


# Series output


def series_text(series: QSeries) -> str:
    """Canonical text form, ascending exponents"""
    return series.to_text()


def series_json(series: QSeries) -> str:
    return json.dumps(series.to_json_obj(), indent=2, sort_keys=True)
