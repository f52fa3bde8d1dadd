"""PQ-plane geometry: power circles, the S_max circle and their landmarks.

Only numeric loci are produced here; rendering lives in :mod:`vrtpq.svg`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels
from .errors import DomainError, EmptyCurve, VoltageCollapse
from .pu import EDGE_RTOL, HALF_PI, PerUnit, SubstationParams, q_on_circle


@dataclass(frozen=True)
class PowerCircle:
    vs: PerUnit
    center_q: PerUnit
    radius: PerUnit


@dataclass(frozen=True, eq=False)
class CircleLocus:
    """Sampled arc on the PQ plane.

    For a power circle ``angle`` holds the power angle δ of each point; for
    the S_max circle it is the polar angle measured from the +P axis and
    ``vs`` is None.
    """

    vs: PerUnit | None
    angle: np.ndarray
    p: np.ndarray
    q: np.ndarray

    @property
    def points(self) -> list[tuple[float, float]]:
        return list(zip(self.p.tolist(), self.q.tolist()))

    def __len__(self) -> int:
        return int(self.p.shape[0])


@dataclass(frozen=True)
class SCurvePoint:
    vs: PerUnit
    q: PerUnit
    s: PerUnit


def circle_of(vs: PerUnit, vl: PerUnit, x: PerUnit) -> PowerCircle:
    if not (vs > 0 and vl > 0 and x > 0):
        raise DomainError("vs, vl and x must be positive")
    return PowerCircle(vs=vs, center_q=-vl * vl / x, radius=vs * vl / x)


def power_circle_locus(vs: PerUnit, vl: PerUnit, x: PerUnit, n_points: int) -> CircleLocus:
    """Stable quarter arc (δ from 0 to 90°) sampled uniformly in δ."""
    if n_points < 2:
        raise DomainError("n_points must be >= 2")
    circle_of(vs, vl, x)
    delta = np.linspace(0.0, HALF_PI, n_points)
    p, q = kernels.locus_pq(vs, vl, x, delta)
    return CircleLocus(vs=vs, angle=delta, p=p, q=q)


def circle_family(params: SubstationParams, vs_list: Sequence[PerUnit], n_points: int) -> list[CircleLocus]:
    return [power_circle_locus(vs, params.v_l, params.x, n_points) for vs in vs_list]


def s_max_circle(s_max: PerUnit, n_points: int) -> CircleLocus:
    """Right half of the origin-centred S_max circle, from (0, -S) to (0, +S)."""
    if not s_max > 0:
        raise DomainError("s_max must be positive")
    if n_points < 2:
        raise DomainError("n_points must be >= 2")
    theta = np.linspace(-HALF_PI, HALF_PI, n_points)
    p = s_max * np.cos(theta)
    q = s_max * np.sin(theta)
    # cos(±π/2) is ~6e-17, not 0
    p[0] = p[-1] = 0.0
    if n_points % 2 == 1:
        q[n_points // 2] = 0.0
    return CircleLocus(vs=None, angle=theta, p=p, q=q)


def q_intersection(vs: PerUnit, params) -> PerUnit:
    """Q where the power circle of ``vs`` meets the S_max circle.

    ``params`` only needs ``x``, ``s_max`` and ``v_l`` attributes.
    """
    x, s_max, vl = params.x, params.s_max, params.v_l
    return (vs * vs - vl * vl - x * x * s_max * s_max / (vl * vl)) / (2.0 * x)


def q_axis_crossing(vs: PerUnit, vl: PerUnit, x: PerUnit) -> PerUnit:
    """Q where the power circle crosses P = 0 (δ = 0)."""
    if not (vs > 0 and vl > 0 and x > 0):
        raise DomainError("vs, vl and x must be positive")
    return vl * (vs - vl) / x


def vs_theoretical_min(p: PerUnit, vl: PerUnit, x: PerUnit) -> PerUnit:
    """Lowest source voltage that can still transfer ``p`` (δ = 90°)."""
    if p < 0:
        raise DomainError("p must be >= 0")
    return p * x / vl


def s_curve(params: SubstationParams, vs_lo: PerUnit, vs_hi: PerUnit, n: int) -> list[SCurvePoint]:
    """Apparent power needed to hold v_l at p_load, sampled over source voltage.

    Samples below the δ = 90° limit are dropped, not clamped.
    """
    if not vs_lo < vs_hi:
        raise DomainError("vs_lo must be < vs_hi")
    if n < 2:
        raise DomainError("n must be >= 2")
    if vs_lo <= 0:
        raise DomainError("vs_lo must be positive")
    p, vl, x = params.p_load, params.v_l, params.x
    floor = vs_theoretical_min(p, vl, x) * (1.0 - EDGE_RTOL)
    out = []
    for vs in np.linspace(vs_lo, vs_hi, n).tolist():
        if vs < floor:
            continue
        q = q_on_circle(vs, vl, x, p)
        out.append(SCurvePoint(vs=vs, q=q, s=math.hypot(p, q)))
    if not out:
        raise EmptyCurve(
            f"no source voltage in [{vs_lo:g}, {vs_hi:g}] can transfer p_load={p:g}"
        )
    return out


def uncompensated_load_voltage(vs: PerUnit, p: PerUnit, x: PerUnit) -> PerUnit:
    """Load-bus voltage with zero reactive power, high-voltage branch.

    Solves u² - vs²·u + p²x² = 0 for u = v_l².
    """
    if p < 0:
        raise DomainError("p must be >= 0")
    if vs < 0 or x <= 0:
        raise DomainError("vs must be >= 0 and x > 0")
    disc = vs ** 4 - 4.0 * (p * x) ** 2
    if disc < 0:
        raise VoltageCollapse(
            f"no operating point: vs={vs:g} cannot carry p={p:g} through x={x:g}"
        )
    u = 0.5 * (vs * vs + math.sqrt(disc))
    return math.sqrt(u)
