"""Ride-through dispatch: feasibility thresholds, case selection, P/Q commands.

Three regimes by source voltage vs, bounded by two thresholds:

* vs >= vs_m: reactive power alone holds the load voltage (``QOnly``).
* vs_min < vs < vs_m: grid active power is cut back along the power circle
  and a non-grid resource supplies the difference (``DualPQ``).
* vs <= vs_min: even P = 0 needs more than S_max of reactive power; the load
  has to leave the grid (``Infeasible``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import DispatchConsistencyError, DomainError, InfeasibleLoad
from .geometry import q_axis_crossing, q_intersection, vs_theoretical_min
from .pu import PerUnit, SubstationParams, q_on_circle


class Case(str, Enum):
    QONLY = "QOnly"
    DUALPQ = "DualPQ"
    INFEASIBLE = "Infeasible"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Thresholds:
    vs_m: PerUnit
    vs_min: PerUnit
    vs_theory: PerUnit


@dataclass(frozen=True)
class DispatchPolicy:
    """Free choices left open by the method.

    q_selection_fraction places the Case-2 reactive power between the
    Q-axis crossing (0) and the S_max intersection (1). The default 0.4
    gives Q = -1.21 at vs = 0.76 for the reference substation.
    """

    q_selection_fraction: float = 0.4
    boundary_epsilon: PerUnit = 1e-9

    def __post_init__(self):
        if not 0.0 <= self.q_selection_fraction <= 1.0:
            raise DomainError("q_selection_fraction must lie in [0, 1]")
        if not self.boundary_epsilon >= 0:
            raise DomainError("boundary_epsilon must be >= 0")


@dataclass(frozen=True)
class DispatchDecision:
    case: Case
    vs: PerUnit
    q_total: PerUnit = 0.0
    p_grid: PerUnit = 0.0
    p_vrt: PerUnit = 0.0
    s_grid: PerUnit = 0.0
    s_nongrid: PerUnit = 0.0
    delta: float = 0.0
    # Arc end points, only for DualPQ
    q_min: PerUnit | None = None
    q_ints: PerUnit | None = None

    @property
    def disconnect(self) -> bool:
        return self.case is Case.INFEASIBLE


def vs_min_threshold(params) -> PerUnit:
    """Source voltage whose power circle touches the S_max circle at (0, -S_max).

    Only ``x``, ``s_max`` and ``v_l`` are read from ``params``.
    """
    vl = params.v_l
    return (vl * vl - params.x * params.s_max) / vl


def vs_m_threshold(params: SubstationParams) -> PerUnit:
    """Source voltage whose power circle meets the load line on the S_max circle."""
    p, s, x, vl = params.p_load, params.s_max, params.x, params.v_l
    if p > s:
        raise InfeasibleLoad(f"p_load={p:g} exceeds s_max={s:g}")
    q = -math.sqrt((s - p) * (s + p))
    return x / vl * math.hypot(p, q + vl * vl / x)


def thresholds(params: SubstationParams) -> Thresholds:
    return Thresholds(
        vs_m=vs_m_threshold(params),
        vs_min=vs_min_threshold(params),
        vs_theory=vs_theoretical_min(params.p_load, params.v_l, params.x),
    )


def classify(vs: PerUnit, params: SubstationParams, policy: DispatchPolicy | None = None) -> Case:
    # ties go to QOnly at vs_m and to Infeasible at vs_min
    if not vs > 0:
        raise DomainError(f"vs must be positive, got {vs}")
    eps = (policy or DispatchPolicy()).boundary_epsilon
    if vs >= vs_m_threshold(params) - eps:
        return Case.QONLY
    if vs <= vs_min_threshold(params) + eps:
        return Case.INFEASIBLE
    return Case.DUALPQ


def _angle(p: PerUnit, q: PerUnit, vl: PerUnit, x: PerUnit) -> float:
    # sin δ ∝ p·x, cos δ ∝ q·x + vl², common factor vs·vl
    return math.atan2(p * x, q * x + vl * vl)


def dispatch_case1(vs: PerUnit, params: SubstationParams) -> DispatchDecision:
    """Hold v_l with reactive power only; the grid keeps carrying p_load."""
    p, vl, x = params.p_load, params.v_l, params.x
    q = q_on_circle(vs, vl, x, p)
    return DispatchDecision(
        case=Case.QONLY,
        vs=vs,
        q_total=q,
        p_grid=p,
        p_vrt=0.0,
        s_grid=math.hypot(p, q),
        s_nongrid=abs(q),
        delta=_angle(p, q, vl, x),
    )


def dispatch_case2(vs: PerUnit, params: SubstationParams, policy: DispatchPolicy | None = None) -> DispatchDecision:
    """Pick Q on the arc inside the S_max circle, then split P between grid and resource."""
    policy = policy or DispatchPolicy()
    p_load, vl, x = params.p_load, params.v_l, params.x
    q_min = q_axis_crossing(vs, vl, x)
    q_ints = q_intersection(vs, params)
    # arc width Q_min - Q_ints in product form; the power circle's top point
    # (0, Q_min) sits at height r above the centre, so r - (q + V_L²/X) is
    # exactly fraction * width
    a = x * params.s_max / vl
    width = (a - (vl - vs)) * (a + (vl - vs)) / (2.0 * x)
    f = policy.q_selection_fraction
    q = q_min - f * width
    drop = f * width
    r = vs * vl / x
    p_grid = math.sqrt(max(drop * (2.0 * r - drop), 0.0))
    if p_grid > p_load * (1.0 + 1e-9) + 1e-12:
        raise DispatchConsistencyError(
            f"grid power {p_grid:g} exceeds load {p_load:g} at vs={vs:g}; "
            "vs is not in the dual-PQ band"
        )
    p_grid = min(p_grid, p_load)
    p_vrt = p_load - p_grid
    # moves p_grid by at most one ulp and makes p_grid + p_vrt == p_load exact
    p_grid = p_load - p_vrt
    return DispatchDecision(
        case=Case.DUALPQ,
        vs=vs,
        q_total=q,
        p_grid=p_grid,
        p_vrt=p_vrt,
        s_grid=math.hypot(p_grid, q),
        s_nongrid=math.hypot(p_vrt, q),
        delta=_angle(p_grid, q, vl, x),
        q_min=q_min,
        q_ints=q_ints,
    )


def dispatch(vs: PerUnit, params: SubstationParams, policy: DispatchPolicy | None = None) -> DispatchDecision:
    policy = policy or DispatchPolicy()
    case = classify(vs, params, policy)
    if case is Case.QONLY:
        return dispatch_case1(vs, params)
    if case is Case.DUALPQ:
        return dispatch_case2(vs, params, policy)
    return DispatchDecision(case=Case.INFEASIBLE, vs=vs)
