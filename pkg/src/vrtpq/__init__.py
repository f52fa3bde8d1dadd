"""Per-unit circle-diagram analysis and dual PQ voltage ride-through for large loads."""

from __future__ import annotations

__version__ = "0.1.0"

from ._accel import backend
from .dispatch import (Case, DispatchDecision, DispatchPolicy, Thresholds, classify, dispatch,
                       dispatch_case1, dispatch_case2, thresholds, vs_m_threshold,
                       vs_min_threshold)
from .errors import (ConfigError, DispatchConsistencyError, DomainError, EmptyCurve,
                     InfeasibleLoad, InfeasiblePower, TraceError, VoltageCollapse, VrtError)
from .geometry import (CircleLocus, PowerCircle, SCurvePoint, circle_family, circle_of,
                       q_axis_crossing, q_intersection, s_curve, s_max_circle,
                       uncompensated_load_voltage, vs_theoretical_min)
from .pu import (OperatingPoint, SubstationParams, apparent_power, operating_point,
                 q_on_circle, receiving_end_pq, solve_delta)
from .sim import (DipTrace, Mode, SimRecord, SimState, SimSummary, UpsConfig, rectangular_dip,
                  run, step, summarize)
