from __future__ import annotations

import os

import pytest
from hypothesis import settings
from hypothesis import strategies as st

from vrtpq import DispatchPolicy, SubstationParams

settings.register_profile("default", deadline=None)
settings.register_profile("stress", deadline=None, max_examples=3000)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture
def params():
    return SubstationParams.reference()


@pytest.fixture
def policy():
    return DispatchPolicy()


@st.composite
def substations(draw, ordered=False):
    """Random valid substations. ``ordered`` also requires x*(p_load + s_max) < v_l²,
    the region where the 90° limit sits below vs_min."""
    vl = draw(st.floats(0.8, 1.2))
    x = draw(st.floats(0.02, 0.5))
    cap = min(3.0, 0.95 * vl * vl / x)
    s_max = draw(st.floats(0.1, cap))
    p_hi = s_max
    if ordered:
        p_hi = min(s_max, 0.95 * (vl * vl / x - s_max))
    # with p_load near 0, vs_m - vs_min is O(p_load²) and drops below float resolution
    p_lo = 0.01 * s_max if ordered else 0.0
    p_load = draw(st.floats(p_lo, max(p_hi, p_lo)))
    return SubstationParams(x=x, s_max=s_max, p_load=p_load, v_l=vl)


_CRITERIA = pytest.StashKey[list]()


@pytest.fixture
def criterion(request):
    """Record one PASS/FAIL line for the acceptance summary, then assert."""
    lines = request.config.stash.setdefault(_CRITERIA, [])

    def record(label: str, ok: bool, detail: str) -> None:
        line = f"{label}: {'PASS' if ok else 'FAIL'}  {detail}"
        lines.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_CRITERIA, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
