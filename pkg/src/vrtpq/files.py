"""Config, trace, report and CSV I/O.

CSV files use ',' delimiters, '\\n' line endings and 9 significant digits so
that output is byte-stable across runs and platforms.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Sequence

from .dispatch import Case, DispatchDecision, DispatchPolicy, Thresholds
from .errors import ConfigError, DomainError, TraceError
from .pu import SubstationParams
from .sim import DipTrace, Mode, SimRecord, SimSummary, UpsConfig

SIG_DIGITS = 9


def fmt(value: Any) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        text = f"{value:.{SIG_DIGITS}g}"
        return "0" if text == "-0" else text
    return str(value)


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(v) for v in row])


def read_csv(path: Path) -> tuple[list[str], list[list[str]]]:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        return [], []
    return rows[0], rows[1:]


# -- config -------------------------------------------------------------------


@dataclass(frozen=True)
class RunConfig:
    substation: SubstationParams = field(default_factory=SubstationParams.reference)
    ups: UpsConfig = field(default_factory=UpsConfig)
    policy: DispatchPolicy = field(default_factory=DispatchPolicy)
    output_dir: Path = Path(".")

    def to_dict(self) -> dict:
        return {
            "substation": dataclasses.asdict(self.substation),
            "ups": dataclasses.asdict(self.ups),
            "policy": dataclasses.asdict(self.policy),
            "output_dir": str(self.output_dir),
        }


_SECTIONS = {"substation": SubstationParams, "ups": UpsConfig, "policy": DispatchPolicy}


def _line_of(text: str, key: str, after: int = 0) -> int | None:
    m = re.compile(r'"' + re.escape(key) + r'"\s*:').search(text, after)
    if m is None:
        return None
    return text.count("\n", 0, m.start()) + 1


def _section_offset(text: str, section: str) -> int:
    m = re.search(r'"' + re.escape(section) + r'"\s*:', text)
    return m.start() if m else 0


def parse_config(text: str) -> RunConfig:
    """Parse and validate a JSON run config; unknown keys are errors."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc.msg} (column {exc.colno})", line=exc.lineno) from None
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object", line=1)

    allowed = set(_SECTIONS) | {"output_dir"}
    for key in doc:
        if key not in allowed:
            raise ConfigError(f"unknown key {key!r}", line=_line_of(text, key))

    built = {}
    for section, cls in _SECTIONS.items():
        body = doc.get(section, {})
        offset = _section_offset(text, section)
        if not isinstance(body, dict):
            raise ConfigError(f"{section!r} must be an object", line=_line_of(text, section))
        names = {f.name for f in dataclasses.fields(cls)}
        for key, value in body.items():
            line = _line_of(text, key, offset)
            if key not in names:
                raise ConfigError(f"unknown key {section}.{key}", line=line)
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ConfigError(f"{section}.{key} must be a number", line=line)
            if not math.isfinite(value):
                raise ConfigError(f"{section}.{key} must be finite", line=line)
        kwargs = {k: float(v) for k, v in body.items()}
        try:
            if cls is SubstationParams:
                base = dataclasses.asdict(SubstationParams.reference())
                base.update(kwargs)
                kwargs = base
            built[section] = cls(**kwargs)
        except DomainError as exc:
            raise ConfigError(f"{section}: {exc}", line=_line_of(text, section)) from None

    out = doc.get("output_dir", ".")
    if not isinstance(out, str):
        raise ConfigError("output_dir must be a string", line=_line_of(text, "output_dir"))
    return RunConfig(output_dir=Path(out), **built)


def load_config(path: Path | str | None) -> RunConfig:
    if path is None:
        return RunConfig()
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    return parse_config(text)


# -- reports ------------------------------------------------------------------


def _decision_to_dict(d: DispatchDecision) -> dict:
    out = dataclasses.asdict(d)
    out["case"] = d.case.value
    out["disconnect"] = d.disconnect
    return out


def _decision_from_dict(data: dict) -> DispatchDecision:
    data = dict(data)
    data.pop("disconnect", None)
    data["case"] = Case(data["case"])
    return DispatchDecision(**data)


@dataclass(frozen=True)
class Report:
    thresholds: Thresholds
    decisions: tuple[DispatchDecision, ...] = ()
    provenance: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "thresholds": dataclasses.asdict(self.thresholds),
            "decisions": [_decision_to_dict(d) for d in self.decisions],
            "provenance": self.provenance,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Report":
        return cls(
            thresholds=Thresholds(**data["thresholds"]),
            decisions=tuple(_decision_from_dict(d) for d in data["decisions"]),
            provenance=data.get("provenance", {}),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "Report":
        return cls.from_dict(json.loads(text))


def summary_to_json(summary: SimSummary) -> str:
    return json.dumps(dataclasses.asdict(summary), indent=2) + "\n"


def summary_from_json(text: str) -> SimSummary:
    return SimSummary(**json.loads(text))


# -- traces and logs ----------------------------------------------------------

TRACE_HEADER = ["t_s", "vs_pu"]
LOG_HEADER = ["t", "vs", "case", "vl_effective", "q_cmd", "p_vrt_cmd", "mode", "on_grid"]


def parse_trace(text: str) -> DipTrace:
    """Parse a ``t_s,vs_pu`` CSV. Row numbers in errors are file line numbers."""
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or [c.strip() for c in rows[0]] != TRACE_HEADER:
        raise TraceError("header must be exactly 't_s,vs_pu'", row=1)
    t, vs = [], []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 2:
            raise TraceError(f"expected 2 columns, got {len(row)}", row=lineno)
        try:
            tv, vv = float(row[0]), float(row[1])
        except ValueError:
            raise TraceError(f"non-numeric value in {row!r}", row=lineno) from None
        if not (math.isfinite(tv) and math.isfinite(vv)):
            raise TraceError("non-finite value", row=lineno)
        if vv < 0:
            raise TraceError(f"negative voltage {vv}", row=lineno)
        if t and tv <= t[-1]:
            raise TraceError(f"time {tv} does not increase", row=lineno)
        t.append(tv)
        vs.append(vv)
    if not t:
        raise TraceError("trace has no samples", row=2)
    return DipTrace(t=tuple(t), vs=tuple(vs))


def read_trace(path: Path | str) -> DipTrace:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise TraceError(f"cannot read {path}: {exc.strerror}") from None
    return parse_trace(text)


def write_trace(path: Path, trace: DipTrace) -> None:
    write_csv(path, TRACE_HEADER, trace.samples)


def write_log(path: Path, log: Sequence[SimRecord]) -> None:
    write_csv(path, LOG_HEADER, (
        (r.t, r.vs, r.case, r.vl_effective, r.q_cmd, r.p_vrt_cmd, r.mode.value, r.on_grid)
        for r in log
    ))


def read_log(path: Path) -> list[SimRecord]:
    header, rows = read_csv(path)
    if header != LOG_HEADER:
        raise TraceError("unexpected log header", row=1)
    return [
        SimRecord(t=float(r[0]), vs=float(r[1]), case=r[2], vl_effective=float(r[3]),
                  q_cmd=float(r[4]), p_vrt_cmd=float(r[5]), mode=Mode(r[6]), on_grid=r[7] == "1")
        for r in rows
    ]
