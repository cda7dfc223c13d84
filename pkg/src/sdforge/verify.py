"""Rebuild every published code from its table row and check its parameters."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .analysis import CodeReport, Family, analyze
from .catalog import TableRow
from .constructions import generator


@dataclass
class RowResult:
    row: TableRow
    report: CodeReport
    construction: str
    failures: list[str]

    @property
    def passed(self) -> bool:
        return not self.failures

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        r = self.report
        if r.family is Family.TYPE_II:
            got = f"alpha={r.alpha}"
        elif r.family is not None:
            got = f"{r.family.value} gamma={r.gamma} beta={r.beta}"
        else:
            got = f"self_dual={r.self_dual} d={r.min_distance}"
        note = "; ".join(self.failures)
        return f"{status} {self.row.id:<4} {self.construction:<5} {got}" + (f"  [{note}]" if note else "")


def verify_row(row: TableRow, as_printed: bool = False, with_a16: bool = False) -> RowResult:
    cid = row.printed_construction if (as_printed and row.printed_construction) else row.construction
    g = generator(cid, row.candidate)
    report = analyze(g, with_a16=with_a16)
    report.construction = cid
    report.candidate = format(row.candidate, "09x")
    failures = []
    if not report.self_dual:
        failures.append("not self-dual")
    elif report.min_distance != 12:
        failures.append(f"d={report.min_distance}")
    else:
        want_ii = row.family is Family.TYPE_II
        if report.doubly_even != want_ii:
            failures.append(f"type {'II' if report.doubly_even else 'I'} != {'II' if want_ii else 'I'}")
        elif report.params() != row.expected():
            failures.append(f"expected {row.expected()}, got {report.params()}")
    return RowResult(row, report, cid, failures)


def verify_tables(
    rows: Iterable[TableRow],
    as_printed: bool = False,
    with_a16: bool = False,
    on_result: Optional[callable] = None,
) -> list[RowResult]:
    out = []
    for row in rows:
        res = verify_row(row, as_printed=as_printed, with_a16=with_a16)
        out.append(res)
        if on_result:
            on_result(res)
    return out
