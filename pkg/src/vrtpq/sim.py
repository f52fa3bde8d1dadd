"""Discrete-time replay of a source-voltage trace through dispatch and a UPS model.

Samples are zero-order held: the value at ``t[k]`` applies until ``t[k+1]``.
Timers measure how long a condition has held, from the first sample at which
it became true, and reset as soon as a sample clears it.

UPS state machine::

    OnGrid --(load voltage outside window for transfer_delay,
              or no feasible operating point)--> Emergency
    Emergency --(vs >= reconnect_threshold)--> ReconnectWait
    ReconnectWait --(vs drops below threshold)--> Emergency
    ReconnectWait --(held for reconnect_delay)--> OnGrid
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from .dispatch import Case, DispatchPolicy, dispatch
from .errors import DomainError, TraceError, VoltageCollapse
from .geometry import uncompensated_load_voltage
from .pu import PerUnit, SubstationParams

# Absorbs rounding when accumulated sample intervals should equal a delay.
TIME_TOL = 1e-9

NO_COMP = "NoCompNeeded"


class Mode(str, Enum):
    ON_GRID = "OnGrid"
    EMERGENCY = "Emergency"
    RECONNECT_WAIT = "ReconnectWait"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class DipTrace:
    t: tuple[float, ...]
    vs: tuple[float, ...]

    def __post_init__(self):
        if len(self.t) != len(self.vs):
            raise TraceError("t and vs lengths differ")
        if not self.t:
            raise TraceError("trace has no samples")
        for i, (t, v) in enumerate(zip(self.t, self.vs)):
            if not (math.isfinite(t) and math.isfinite(v)):
                raise TraceError("non-finite value", row=i + 1)
            if v < 0:
                raise TraceError(f"negative voltage {v}", row=i + 1)
            if i and t <= self.t[i - 1]:
                raise TraceError(f"time {t} does not increase", row=i + 1)

    @classmethod
    def from_samples(cls, samples: Iterable[tuple[float, float]]) -> "DipTrace":
        samples = list(samples)
        return cls(t=tuple(float(s[0]) for s in samples), vs=tuple(float(s[1]) for s in samples))

    @property
    def samples(self) -> list[tuple[float, float]]:
        return list(zip(self.t, self.vs))

    @property
    def duration(self) -> float:
        return self.t[-1] - self.t[0]

    def __len__(self) -> int:
        return len(self.t)


def rectangular_dip(depth: PerUnit, start: float, duration: float, total: float,
                    dt: float = 1e-3, nominal: PerUnit = 1.0) -> DipTrace:
    """Nominal voltage with one flat dip to ``depth`` over [start, start + duration)."""
    n = int(round(total / dt)) + 1
    t = np.arange(n) * dt
    vs = np.where((t >= start - TIME_TOL) & (t < start + duration - TIME_TOL), depth, nominal)
    return DipTrace(t=tuple(t.tolist()), vs=tuple(vs.tolist()))


@dataclass(frozen=True)
class UpsConfig:
    v_low: PerUnit = 0.85
    v_high: PerUnit = 1.15
    transfer_delay: float = 0.02
    reconnect_threshold: PerUnit = 0.9
    reconnect_delay: float = 10.0

    def __post_init__(self):
        if not self.v_low < self.reconnect_threshold <= self.v_high:
            raise DomainError("need v_low < reconnect_threshold <= v_high")
        if self.transfer_delay < 0 or self.reconnect_delay < 0:
            raise DomainError("delays must be >= 0")


@dataclass(frozen=True)
class SimState:
    mode: Mode = Mode.ON_GRID
    window_timer: float = 0.0
    compensation_active: bool = False
    # whether the current mode's timing condition held at the previous sample
    timing: bool = False
    t_last: float | None = None


@dataclass(frozen=True)
class SimRecord:
    t: float
    vs: PerUnit
    case: str
    vl_effective: PerUnit
    q_cmd: PerUnit
    p_vrt_cmd: PerUnit
    mode: Mode
    on_grid: bool


@dataclass(frozen=True)
class SimSummary:
    time_off_grid: float
    max_abs_q: PerUnit
    max_p_vrt: PerUnit
    nongrid_energy: float
    disconnect_count: int
    deepest_vs: PerUnit


def _load_voltage(vs, params):
    """Uncompensated load voltage, or None on collapse."""
    try:
        return uncompensated_load_voltage(vs, params.p_load, params.x)
    except VoltageCollapse:
        return None


def _advance(timing: bool, timer: float, dt: float) -> float:
    return timer + dt if timing else 0.0


def step(state: SimState, sample: tuple[float, float], params: SubstationParams,
         ups: UpsConfig, policy: DispatchPolicy | None = None,
         compensation_enabled: bool = True) -> tuple[SimState, SimRecord]:
    policy = policy or DispatchPolicy()
    t, vs = float(sample[0]), float(sample[1])
    if state.t_last is not None and t < state.t_last:
        raise TraceError(f"sample time {t} precedes previous sample {state.t_last}")
    dt = 0.0 if state.t_last is None else t - state.t_last

    decision = None
    trip = False
    if compensation_enabled and vs > 0:
        decision = dispatch(vs, params, policy)
        case = decision.case.value
        if decision.case is Case.INFEASIBLE:
            trip = True
            vl = _load_voltage(vs, params)
        else:
            vl = params.v_l
    else:
        case = Case.INFEASIBLE.value if compensation_enabled else NO_COMP
        vl = _load_voltage(vs, params)
        if compensation_enabled:
            trip = True
    if vl is None:
        trip = True
        vl = 0.0
    out_of_window = not (ups.v_low <= vl <= ups.v_high)

    mode, timer, timing = state.mode, state.window_timer, state.timing
    if mode is Mode.ON_GRID:
        if trip:
            mode, timer, timing = Mode.EMERGENCY, 0.0, False
        elif out_of_window:
            timer = _advance(timing, timer, dt)
            timing = True
            if timer >= ups.transfer_delay - TIME_TOL:
                mode, timer, timing = Mode.EMERGENCY, 0.0, False
        else:
            timer, timing = 0.0, False
    elif mode is Mode.EMERGENCY:
        if vs >= ups.reconnect_threshold:
            mode, timer, timing = Mode.RECONNECT_WAIT, 0.0, True
            if ups.reconnect_delay <= TIME_TOL:
                mode, timer, timing = Mode.ON_GRID, 0.0, False
    else:
        if vs >= ups.reconnect_threshold:
            timer = _advance(timing, timer, dt)
            timing = True
            if timer >= ups.reconnect_delay - TIME_TOL:
                mode, timer, timing = Mode.ON_GRID, 0.0, False
        else:
            mode, timer, timing = Mode.EMERGENCY, 0.0, False

    on_grid = mode is Mode.ON_GRID
    active = on_grid and decision is not None and decision.case is not Case.INFEASIBLE
    q_cmd = decision.q_total if active else 0.0
    p_vrt = decision.p_vrt if active else 0.0

    new_state = SimState(mode=mode, window_timer=timer, compensation_active=active,
                         timing=timing, t_last=t)
    record = SimRecord(t=t, vs=vs, case=case, vl_effective=vl, q_cmd=q_cmd,
                       p_vrt_cmd=p_vrt, mode=mode, on_grid=on_grid)
    return new_state, record


def run(trace: DipTrace | Sequence[tuple[float, float]], params: SubstationParams,
        ups: UpsConfig | None = None, policy: DispatchPolicy | None = None,
        compensation_enabled: bool = True) -> list[SimRecord]:
    if not isinstance(trace, DipTrace):
        trace = DipTrace.from_samples(trace)
    ups = ups or UpsConfig()
    policy = policy or DispatchPolicy()
    state = SimState()
    log = []
    for sample in trace.samples:
        state, record = step(state, sample, params, ups, policy, compensation_enabled)
        log.append(record)
    return log


def summarize(log: Sequence[SimRecord]) -> SimSummary:
    if not log:
        raise ValueError("cannot summarize an empty log")
    t = np.array([r.t for r in log])
    p_vrt = np.array([r.p_vrt_cmd for r in log])
    off = np.array([not r.on_grid for r in log])
    # zero-order hold: record k covers [t[k], t[k+1])
    time_off = float(np.sum(np.diff(t)[off[:-1]]))
    # initial state is OnGrid, so an off-grid first record counts as a disconnect
    prev_on = np.concatenate(([True], ~off[:-1]))
    disconnects = int(np.sum(prev_on & off))
    return SimSummary(
        time_off_grid=time_off,
        max_abs_q=float(max(abs(r.q_cmd) for r in log)),
        max_p_vrt=float(p_vrt.max()),
        nongrid_energy=float(np.trapezoid(p_vrt, t)) if len(log) > 1 else 0.0,
        disconnect_count=disconnects,
        deepest_vs=float(min(r.vs for r in log)),
    )
