from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any, Iterable, Optional

PASS = "pass"
FAIL = "fail"
SKIPPED = "skipped"

# Every check record points at one of these statements.
ANCHORS = frozenset(
    {
        "lattice.gram",
        "lattice.chiral_norms",
        "lattice.maximality",
        "lattice.recognition",
        "lattice.rational_family",
        "cocycle.identity",
        "cocycle.commutator",
        "cocycle.diagonal",
        "cocycle.bimultiplicative",
        "cocycle.coboundary",
        "twisted.product",
        "twisted.commutation",
        "twisted.unitarity",
        "fock.basis",
        "fock.unitarity",
        "heisenberg.commutator",
        "heisenberg.adjoint",
        "heisenberg.energy_bound",
        "virasoro.current",
        "virasoro.commutator",
        "virasoro.adjoint",
        "sugawara.lowest_weight",
        "parity.operator",
        "smearing.commutator",
        "vertex.exponential_commutation",
        "vertex.pre_vertex",
        "vertex.primary",
        "vertex.locality",
        "shift.definition",
        "shift.commutation",
        "shift.adjoint",
        "shift.offset_exchange",
        "shift.virasoro",
        "parity.equivalence",
        "field.definition",
        "field.smearing",
        "field.fourier",
        "spin.integrality",
        "character.table",
        "classify.pipeline",
        "fusion.rule",
        "braiding.scalar",
        "functor.object_map",
        "functor.tensorator",
        "functor.unit",
        "functor.braided",
        "functor.nu_phase",
    }
)


@dataclass(frozen=True)
class CheckRecord:
    id: str
    anchor: str
    status: str  # pass | fail | skipped
    witness: Optional[dict[str, Any]] = None
    detail: str = ""
    timing: float = 0.0

    @property
    def passed(self) -> bool:
        return self.status != FAIL


@dataclass(frozen=True)
class Report:
    suite: str
    checks: tuple[CheckRecord, ...] = ()
    notes: tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[CheckRecord]:
        return [c for c in self.checks if c.status == FAIL]

    def find(self, check_id: str) -> CheckRecord:
        for c in self.checks:
            if c.id == check_id:
                return c
        raise KeyError(check_id)

    def merged(self, other: "Report") -> "Report":
        return Report(suite=self.suite, checks=self.checks + other.checks, notes=self.notes + other.notes)


def _known_anchor(anchor: str) -> str:
    anchor = str(anchor)
    if anchor not in ANCHORS:
        raise ValueError(f"unknown anchor {anchor!r}")
    return anchor


class ReportBuilder:
    def __init__(self, suite: str) -> None:
        self._suite = str(suite)
        self._checks: list[CheckRecord] = []
        self._notes: list[str] = []
        self._t0 = time.perf_counter()

    def check(
        self,
        check_id: str,
        anchor: str,
        ok: bool,
        *,
        witness: Optional[dict[str, Any]] = None,
        detail: str = "",
    ) -> bool:
        anchor = _known_anchor(anchor)
        now = time.perf_counter()
        status = PASS if ok else FAIL
        if not ok and witness is None:
            witness = {"reason": detail or "no witness recorded"}
        self._checks.append(
            CheckRecord(
                id=str(check_id),
                anchor=str(anchor),
                status=status,
                witness=witness,
                detail=str(detail),
                timing=float(now - self._t0),
            )
        )
        self._t0 = now
        return bool(ok)

    def skip(self, check_id: str, anchor: str, *, detail: str = "") -> None:
        self._checks.append(CheckRecord(id=str(check_id), anchor=_known_anchor(anchor), status=SKIPPED, detail=str(detail)))

    def note(self, text: str) -> None:
        self._notes.append(str(text))

    def extend(self, report: Report, *, prefix: str = "") -> None:
        for c in report.checks:
            self._checks.append(
                CheckRecord(
                    id=f"{prefix}{c.id}",
                    anchor=c.anchor,
                    status=c.status,
                    witness=c.witness,
                    detail=c.detail,
                    timing=c.timing,
                )
            )
        self._notes.extend(report.notes)

    def build(self) -> Report:
        return Report(suite=self._suite, checks=tuple(self._checks), notes=tuple(self._notes))


def report_to_dict(report: Report, *, timings: bool = False) -> dict[str, Any]:
    d = asdict(report)
    for c in d["checks"]:
        if not timings:
            c.pop("timing", None)
        else:
            c["timing"] = round(float(c["timing"]), 6)
        if not c.get("detail"):
            c.pop("detail", None)
    d["name"] = d.pop("suite")
    d["checks"] = list(d["checks"])
    d["notes"] = list(d["notes"])
    return d


def summarize(reports: Iterable[Report]) -> dict[str, Any]:
    reports = list(reports)
    counts = {PASS: 0, FAIL: 0, SKIPPED: 0}
    for r in reports:
        for c in r.checks:
            counts[c.status] = counts.get(c.status, 0) + 1
    return {
        "suites": len(reports),
        "checks": sum(counts.values()),
        "passed": counts[PASS],
        "failed": counts[FAIL],
        "skipped": counts[SKIPPED],
        "ok": counts[FAIL] == 0,
    }


def run_to_dict(config_echo: dict[str, Any], reports: Iterable[Report], *, timings: bool = False) -> dict[str, Any]:
    reports = list(reports)
    return {
        "config": config_echo,
        "suites": [report_to_dict(r, timings=timings) for r in reports],
        "summary": summarize(reports),
    }


def dumps_run(payload: dict[str, Any]) -> str:
    return json.dumps(payload, ensure_ascii=False, indent=2, sort_keys=True) + "\n"


def write_json_report(payload: dict[str, Any], path: Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps_run(payload), encoding="utf-8")


def format_text_summary(reports: Iterable[Report]) -> str:
    lines: list[str] = []
    for r in reports:
        failed = r.failures
        mark = "ok" if not failed else f"{len(failed)} failed"
        lines.append(f"{r.suite}: {len(r.checks)} checks, {mark}")
        for c in failed:
            lines.append(f"  FAIL {c.id} [{c.anchor}] witness={json.dumps(c.witness, sort_keys=True)}")
        for n in r.notes:
            lines.append(f"  note: {n}")
    return "\n".join(lines)
