"""Acceptance gate for the reference substation (X=0.2, V_L=1, P=0.9, S_max=1.3).

Each test prints one PASS/FAIL line; the lines are also collected in the
terminal summary. Every timed run must finish in under one second.
"""

import math
import time

import numpy as np
import pytest

from vrtpq import (Case, DispatchPolicy, Mode, SubstationParams, circle_family, circle_of,
                   dispatch, q_on_circle, rectangular_dip, run, s_curve, s_max_circle,
                   summarize, thresholds, vs_m_threshold)
from vrtpq.errors import DomainError
from vrtpq.files import write_log
from vrtpq.kernels import sweep_q

REF = SubstationParams(x=0.2, s_max=1.3, p_load=0.9, v_l=1.0)
BUDGET_S = 1.0
N_DRAWS = 1000


class Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0


def _random_valid_params(rng, n):
    """Uniform draws from the whole valid domain:
    0 < p_load < s_max and x*s_max < v_l²."""
    out = []
    while len(out) < n:
        vl = rng.uniform(0.8, 1.2)
        x = rng.uniform(0.02, 0.5)
        s_max = rng.uniform(0.05, 1.0) * min(3.0, vl * vl / x)
        p_load = rng.uniform(0.01, 1.0) * s_max
        try:
            out.append(SubstationParams(x=x, s_max=s_max, p_load=p_load, v_l=vl))
        except DomainError:
            continue
    return out


def test_c1_thresholds(criterion):
    th = thresholds(REF)
    ok = (th.vs_min == 0.74
          and abs(th.vs_m - 0.832) <= 0.005
          # 0.9*0.2 rounds to 0.18000000000000002 in binary floating point
          and th.vs_theory == pytest.approx(0.18, rel=0, abs=1e-15))
    criterion("C1 thresholds", ok,
              f"vs_min={th.vs_min!r} vs_m={th.vs_m:.6f} vs_theory={th.vs_theory!r}")


def test_c2_case1(criterion):
    d = dispatch(0.86, REF)
    ok = d.case is Case.QONLY and abs(d.q_total + 0.79) <= 0.01 and d.p_vrt == 0.0
    criterion("C2 case-1 at vs=0.86", ok, f"case={d.case} Q={d.q_total:.5f} P_vrt={d.p_vrt}")


def test_c3_case2(criterion):
    d = dispatch(0.76, REF, DispatchPolicy(q_selection_fraction=0.4))
    checks = {
        "Q_ints": (d.q_ints, -1.225, 1e-3),
        "Q_min": (d.q_min, -1.200, 1e-3),
        "Q": (d.q_total, -1.21, 1e-3),
        "P_grid": (d.p_grid, 0.275, 0.001),
        "P_vrt": (d.p_vrt, 0.625, 0.001),
        "S_nongrid": (d.s_nongrid, 1.36, 0.005),
    }
    ok = d.case is Case.DUALPQ and all(abs(v - want) <= tol for v, want, tol in checks.values())
    criterion("C3 case-2 at vs=0.76", ok, " ".join(f"{k}={v:.5f}" for k, (v, _, _) in checks.items()))


def test_c4_case3(criterion):
    cases = {vs: dispatch(vs, REF).case for vs in (0.74, 0.70, 0.50)}
    ok = all(c is Case.INFEASIBLE for c in cases.values())
    criterion("C4 case-3", ok, " ".join(f"{vs}:{c}" for vs, c in cases.items()))


def test_c5_scurve(criterion):
    with Timer() as tm:
        full = s_curve(REF, 0.1, 1.8, 171)
        fine = s_curve(REF, 1.0, 1.03, 30_001)
    best = min(fine, key=lambda pt: pt.s)
    ok = (abs(best.vs - 1.016) <= 0.005 and abs(best.s - 0.90) <= 1e-6
          and full[0].vs >= 0.18 and tm.elapsed < BUDGET_S)
    criterion("C5 s-curve minimum", ok,
              f"min at vs={best.vs:.6f} S={best.s:.9f}; domain starts {full[0].vs:g}; {tm.elapsed:.3f}s")


def test_c6_circle_family(criterion):
    vs_list = [round(0.1 * k, 10) for k in range(1, 14)]
    with Timer() as tm:
        family = circle_family(REF, vs_list, 1001)
        s_circle = s_max_circle(REF.s_max, 1001)
    worst = 0.0
    n_points = 0
    for locus in family:
        r = locus.vs * REF.v_l / REF.x
        lhs = locus.p ** 2 + (locus.q + REF.v_l ** 2 / REF.x) ** 2
        worst = max(worst, float(np.max(np.abs(lhs - r * r) / (r * r))))
        n_points += len(locus)
    centers = {circle_of(vs, REF.v_l, REF.x).center_q for vs in vs_list}
    s_radius = np.hypot(s_circle.p, s_circle.q)
    ok = (centers == {-5.0} and np.allclose(s_radius, 1.3, rtol=1e-12)
          and n_points >= 10_000 and worst <= 1e-9 and tm.elapsed < BUDGET_S)
    criterion("C6 circle family", ok,
              f"{len(family)} loci, {n_points} points, worst rel residual {worst:.2e}, "
              f"centers {sorted(centers)}, S radius {float(s_radius.max()):.12g}; {tm.elapsed:.3f}s")


def test_c7a_threshold_ordering_all_valid(criterion):
    rng = np.random.default_rng(7)
    bad = []
    for prm in _random_valid_params(rng, N_DRAWS):
        th = thresholds(prm)
        if not th.vs_theory < th.vs_min < th.vs_m:
            bad.append((prm, th))
    detail = f"{N_DRAWS - len(bad)}/{N_DRAWS} draws ordered"
    if bad:
        prm, th = bad[0]
        detail += (f"; e.g. x={prm.x:.3f} s_max={prm.s_max:.3f} p_load={prm.p_load:.3f} "
                   f"v_l={prm.v_l:.3f}: vs_theory={th.vs_theory:.4f} vs_min={th.vs_min:.4f} "
                   f"vs_m={th.vs_m:.4f}")
    criterion("C7a threshold ordering (whole valid domain)", not bad, detail)


def test_c7b_threshold_ordering_ordered_region(criterion):
    # the region x*(p_load + s_max) < v_l² where the 90° limit lies below vs_min
    rng = np.random.default_rng(8)
    drawn = bad = 0
    while drawn < N_DRAWS:
        (prm,) = _random_valid_params(rng, 1)
        if prm.x * (prm.p_load + prm.s_max) >= prm.v_l ** 2:
            continue
        drawn += 1
        th = thresholds(prm)
        bad += not th.vs_theory < th.vs_min < th.vs_m
    criterion("C7b threshold ordering (x*(p_load+s_max) < v_l^2)", bad == 0,
              f"{N_DRAWS - bad}/{N_DRAWS} draws ordered")


def test_c7c_feasibility_and_conservation(criterion):
    rng = np.random.default_rng(9)
    th = thresholds(REF)
    worst_excess = -math.inf
    not_conserved = 0
    with Timer() as tm:
        for _ in range(N_DRAWS):
            vs = rng.uniform(th.vs_min, th.vs_m)
            f = rng.uniform(0.0, 1.0)
            d = dispatch(vs, REF, DispatchPolicy(q_selection_fraction=f))
            assert d.case is Case.DUALPQ
            worst_excess = max(worst_excess, d.s_grid - REF.s_max)
            not_conserved += d.p_grid + d.p_vrt != REF.p_load
    ok = worst_excess <= 1e-9 and not_conserved == 0 and tm.elapsed < BUDGET_S
    criterion("C7c feasibility + conservation", ok,
              f"max s_grid - s_max = {worst_excess:.3e}; {not_conserved} non-exact sums; {tm.elapsed:.3f}s")


def test_c7d_boundary_continuity(criterion):
    vs_m = vs_m_threshold(REF)
    above = dispatch(vs_m, REF)
    below = dispatch(vs_m * (1 - 1e-8), REF, DispatchPolicy(q_selection_fraction=1.0))
    ok = (above.case is Case.QONLY and below.case is Case.DUALPQ
          and abs(above.s_grid - REF.s_max) <= 1e-6 and abs(below.s_grid - REF.s_max) <= 1e-6)
    criterion("C7d boundary continuity at vs_m", ok,
              f"s_grid at vs_m {above.s_grid:.9f} ({above.case}), just below {below.s_grid:.9f} ({below.case})")


def test_c8_oracle_equivalence(criterion):
    rng = np.random.default_rng(10)
    n = N_DRAWS
    vl = rng.uniform(0.8, 1.2, n)
    x = rng.uniform(0.02, 0.5, n)
    vs = rng.uniform(0.1, 1.5, n)
    r = vs * vl / x
    p = rng.uniform(0.0, 1.0, n) * r
    step = 1e-6
    closed = np.array([q_on_circle(*args) for args in zip(vs, vl, x, p)])
    sweep_q(vs[:1], vl[:1], x[:1], p[:1], step=0.1)  # compile outside the timed run
    with Timer() as tm:
        q_grid, _ = sweep_q(vs, vl, x, p, step=step)
    err = np.abs(closed - q_grid)
    tol = r * step
    ok = bool(np.all(err <= tol)) and tm.elapsed < BUDGET_S
    criterion("C8 closed form vs delta sweep", ok,
              f"max err/tol {float(np.max(err / tol)):.3f} over {n} tuples at {step:g} rad; {tm.elapsed:.3f}s")


def _quadratic_load_voltage(vs, p, x):
    # u = V_L²: u² - vs²·u + p²x² = 0, stable (high) root
    roots = np.roots([1.0, -vs * vs, (p * x) ** 2])
    return math.sqrt(max(roots.real))


def test_c9_simulator(criterion, tmp_path):
    dip = rectangular_dip(0.86, 0.05, 0.150, 0.5)
    deep = rectangular_dip(0.50, 0.05, 0.150, 11.0)
    with Timer() as tm:
        comp = summarize(run(dip, REF))
        nocomp_log = run(dip, REF, compensation_enabled=False)
        deep_log = run(deep, REF)
    nocomp = summarize(nocomp_log)
    deep_sum = summarize(deep_log)

    vl_oracle = _quadratic_load_voltage(0.86, REF.p_load, REF.x)
    vl_sim = min(rec.vl_effective for rec in nocomp_log)
    transfer = any(rec.mode is Mode.EMERGENCY for rec in nocomp_log)

    dip_end = 0.05 + 0.150
    reconnect_t = next(rec.t for rec in deep_log if rec.t > dip_end and rec.on_grid)
    waited = reconnect_t - dip_end

    paths = []
    for name in ("a.csv", "b.csv"):
        write_log(tmp_path / name, run(deep, REF))
        paths.append(tmp_path / name)
    identical = paths[0].read_bytes() == paths[1].read_bytes()

    ok = (comp.time_off_grid == 0.0
          and transfer and nocomp.time_off_grid > 0
          and abs(vl_sim - vl_oracle) <= 1e-12 and vl_oracle < 0.85
          and deep_sum.disconnect_count == 1
          and waited >= 10.0 - 1e-9
          and identical and tm.elapsed < BUDGET_S)
    criterion("C9 simulator", ok,
              f"comp off-grid {comp.time_off_grid}; no-comp V_L {vl_sim:.6f} (oracle {vl_oracle:.6f}) "
              f"off-grid {nocomp.time_off_grid:.3f}s; deep dip disconnects {deep_sum.disconnect_count}, "
              f"reconnect {waited:.3f}s after recovery; byte-identical {identical}; {tm.elapsed:.3f}s")
