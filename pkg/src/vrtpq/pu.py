"""Per-unit phasor power flow across a single series reactance.

All quantities are per unit on the substation MVA/kV base. Angles are in
radians. Reactive power follows the load convention: leading (capacitive)
Q is negative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .errors import DomainError, InfeasiblePower

PerUnit = float

HALF_PI = 0.5 * math.pi

# Relative slack accepted when p·x equals vs·vl up to rounding (δ = 90°).
EDGE_RTOL = 1e-12


def _check_finite(**values: float) -> None:
    for name, v in values.items():
        if not math.isfinite(v):
            raise DomainError(f"{name} must be finite, got {v!r}")


@dataclass(frozen=True)
class SubstationParams:
    """Single-reactance substation feeding a constant-power load.

    x: equivalent series reactance; s_max: short-term apparent-power limit;
    p_load: load active power; v_l: target load voltage.
    """

    x: PerUnit
    s_max: PerUnit
    p_load: PerUnit
    v_l: PerUnit = 1.0

    def __post_init__(self):
        _check_finite(x=self.x, s_max=self.s_max, v_l=self.v_l, p_load=self.p_load)
        if self.x <= 0:
            raise DomainError(f"x must be > 0, got {self.x}")
        if self.s_max <= 0:
            raise DomainError(f"s_max must be > 0, got {self.s_max}")
        if self.v_l <= 0:
            raise DomainError(f"v_l must be > 0, got {self.v_l}")
        if not 0 <= self.p_load <= self.s_max:
            raise DomainError(f"p_load must lie in [0, s_max], got {self.p_load}")
        if self.x * self.s_max >= self.v_l ** 2:
            raise DomainError(
                f"x*s_max = {self.x * self.s_max:g} must be below v_l^2 = {self.v_l ** 2:g}"
            )

    @classmethod
    def reference(cls) -> "SubstationParams":
        """X=0.2, S_max=1.3, P_load=0.9, V_L=1 (all pu)."""
        return cls(x=0.2, s_max=1.3, p_load=0.9, v_l=1.0)

    def with_load_voltage(self, v_l: PerUnit) -> "SubstationParams":
        """Same substation held at a different target load voltage."""
        return replace(self, v_l=v_l)


@dataclass(frozen=True)
class OperatingPoint:
    p: PerUnit
    q: PerUnit
    delta: float
    s: PerUnit


def receiving_end_pq(vs: PerUnit, vl: PerUnit, x: PerUnit, delta: float) -> tuple[PerUnit, PerUnit]:
    """Load-side active and reactive power for a given power angle."""
    _check_finite(vs=vs, vl=vl, x=x, delta=delta)
    if vs <= 0 or vl <= 0 or x <= 0:
        raise DomainError("vs, vl and x must be positive")
    if not 0 <= delta <= HALF_PI:
        raise DomainError(f"delta must lie in [0, pi/2], got {delta}")
    p = vs * vl * math.sin(delta) / x
    q = vl * (vs * math.cos(delta) - vl) / x
    return p, q


def solve_delta(p: PerUnit, vs: PerUnit, vl: PerUnit, x: PerUnit) -> float:
    """Stable power angle that transfers ``p``; raises InfeasiblePower past 90°."""
    _check_finite(p=p, vs=vs, vl=vl, x=x)
    if p < 0:
        raise DomainError(f"p must be >= 0, got {p}")
    if vs <= 0 or vl <= 0 or x <= 0:
        raise DomainError("vs, vl and x must be positive")
    ratio = p * x / (vs * vl)
    if ratio > 1.0 + EDGE_RTOL:
        raise InfeasiblePower(
            f"p={p:g} exceeds the 90-degree transfer limit vs*vl/x={vs * vl / x:g}"
        )
    return math.asin(min(ratio, 1.0))


def apparent_power(p: PerUnit, q: PerUnit) -> PerUnit:
    return math.hypot(p, q)


def q_on_circle(vs: PerUnit, vl: PerUnit, x: PerUnit, p: PerUnit) -> PerUnit:
    """Q on the stable (δ ≤ 90°) branch of the power circle at active power ``p``.

    Uses (r - p)(r + p) rather than r² - p² so that the result keeps full
    relative accuracy until δ gets very close to 90°.
    """
    _check_finite(vs=vs, vl=vl, x=x, p=p)
    if vs <= 0 or vl <= 0 or x <= 0:
        raise DomainError("vs, vl and x must be positive")
    r = vs * vl / x
    a = abs(p)
    if a > r * (1.0 + EDGE_RTOL):
        raise InfeasiblePower(f"|p|={a:g} is outside the power circle of radius {r:g}")
    root = math.sqrt(max((r - a) * (r + a), 0.0))
    return root - vl * vl / x


def operating_point(vs: PerUnit, vl: PerUnit, x: PerUnit, p: PerUnit) -> OperatingPoint:
    """Full operating point holding ``vl`` while transferring ``p``."""
    q = q_on_circle(vs, vl, x, p)
    return OperatingPoint(p=p, q=q, delta=solve_delta(p, vs, vl, x), s=apparent_power(p, q))
