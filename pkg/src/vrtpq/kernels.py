"""Array kernels for the hot loops.

Each kernel has a numba implementation (``_*_nb``) and a numpy one
(``_*_np``). The public wrapper picks one according to
:data:`vrtpq._accel.USE_NUMBA`; both are importable directly so they can be
cross-checked and benchmarked.

The δ-grid sweep is deliberately brute force: it evaluates the receiving-end
active power at every grid angle and keeps the closest one, with no use of
monotonicity or closed forms. It is the independent reference for the
closed-form circle solution.
"""

from __future__ import annotations

import math

import numpy as np

from ._accel import USE_NUMBA, njit

HALF_PI = 0.5 * math.pi


def delta_grid(step: float) -> np.ndarray:
    """Uniform grid on [0, π/2] with spacing ``step``; π/2 is always included."""
    if not step > 0:
        raise ValueError("step must be positive")
    n = int(math.floor(HALF_PI / step))
    grid = np.arange(n + 1, dtype=np.float64) * step
    if grid[-1] < HALF_PI:
        grid = np.append(grid, HALF_PI)
    return grid


# -- receiving-end P/Q along δ ------------------------------------------------


@njit(cache=True)
def _locus_pq_nb(vs, vl, x, delta):
    n = delta.shape[0]
    p = np.empty(n)
    q = np.empty(n)
    k = vs * vl / x
    for i in range(n):
        p[i] = k * math.sin(delta[i])
        q[i] = vl * (vs * math.cos(delta[i]) - vl) / x
    return p, q


def _locus_pq_np(vs, vl, x, delta):
    p = vs * vl * np.sin(delta) / x
    q = vl * (vs * np.cos(delta) - vl) / x
    return p, q


def locus_pq(vs: float, vl: float, x: float, delta: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Load-side (P, Q) at each angle in ``delta`` for fixed voltages and reactance."""
    delta = np.ascontiguousarray(delta, dtype=np.float64)
    if USE_NUMBA:
        return _locus_pq_nb(float(vs), float(vl), float(x), delta)
    return _locus_pq_np(float(vs), float(vl), float(x), delta)


# -- circle identity residual -------------------------------------------------


@njit(cache=True)
def _circle_residual_nb(p, q, vs, vl, x):
    n = p.shape[0]
    out = np.empty(n)
    c = vl * vl / x
    r2 = (vs * vl / x) ** 2
    for i in range(n):
        out[i] = abs(p[i] * p[i] + (q[i] + c) ** 2 - r2) / r2
    return out


def _circle_residual_np(p, q, vs, vl, x):
    c = vl * vl / x
    r2 = (vs * vl / x) ** 2
    return np.abs(p * p + (q + c) ** 2 - r2) / r2


def circle_residual(p: np.ndarray, q: np.ndarray, vs: float, vl: float, x: float) -> np.ndarray:
    """Relative residual of P² + (Q + V_L²/X)² = (V_S·V_L/X)² per point."""
    p = np.ascontiguousarray(p, dtype=np.float64)
    q = np.ascontiguousarray(q, dtype=np.float64)
    if USE_NUMBA:
        return _circle_residual_nb(p, q, float(vs), float(vl), float(x))
    return _circle_residual_np(p, q, float(vs), float(vl), float(x))


# -- brute-force δ sweep ------------------------------------------------------


# Independent running minima per lane keep the argmin loop free of a
# loop-carried branch, so LLVM can vectorize it. Ties resolve to the lowest
# index, matching np.argmin.
_LANES = 128


@njit(cache=True)
def _argmin_abs_nb(k, target, sin_grid):
    n = sin_grid.shape[0]
    best = np.full(_LANES, np.inf)
    idx = np.zeros(_LANES, np.int64)
    blocks = n // _LANES
    for b in range(blocks):
        base = b * _LANES
        for lane in range(_LANES):
            err = abs(k * sin_grid[base + lane] - target)
            better = err < best[lane]
            best[lane] = err if better else best[lane]
            idx[lane] = base + lane if better else idx[lane]
    best_v = np.inf
    best_i = 0
    for lane in range(_LANES):
        if best[lane] < best_v or (best[lane] == best_v and idx[lane] < best_i):
            best_v = best[lane]
            best_i = idx[lane]
    for i in range(blocks * _LANES, n):
        err = abs(k * sin_grid[i] - target)
        if err < best_v:
            best_v = err
            best_i = i
    return best_i


@njit(cache=True)
def _sweep_q_nb(vs, vl, x, p, sin_grid, cos_grid, grid):
    m = vs.shape[0]
    q_out = np.empty(m)
    d_out = np.empty(m)
    for j in range(m):
        i = _argmin_abs_nb(vs[j] * vl[j] / x[j], p[j], sin_grid)
        q_out[j] = vl[j] * (vs[j] * cos_grid[i] - vl[j]) / x[j]
        d_out[j] = grid[i]
    return q_out, d_out


def _sweep_q_np(vs, vl, x, p, sin_grid, cos_grid, grid):
    m = vs.shape[0]
    q_out = np.empty(m)
    d_out = np.empty(m)
    work = np.empty_like(sin_grid)
    for j in range(m):
        k = vs[j] * vl[j] / x[j]
        np.multiply(sin_grid, k, out=work)
        work -= p[j]
        np.abs(work, out=work)
        best_i = int(np.argmin(work))
        q_out[j] = vl[j] * (vs[j] * cos_grid[best_i] - vl[j]) / x[j]
        d_out[j] = grid[best_i]
    return q_out, d_out


def sweep_q(vs, vl, x, p, step: float = 1e-6, use_numba: bool | None = None):
    """Brute-force Q (and δ) for target active powers by scanning a δ grid.

    All inputs broadcast to a common 1-D shape. For each tuple the grid angle
    whose receiving-end P is closest to the target is chosen; its Q error
    against the exact solution is at most ``(vs·vl/x)·step``.
    """
    vs, vl, x, p = (np.ascontiguousarray(a, dtype=np.float64).ravel()
                    for a in np.broadcast_arrays(vs, vl, x, p))
    grid = delta_grid(step)
    sin_grid = np.sin(grid)
    cos_grid = np.cos(grid)
    if use_numba is None:
        use_numba = USE_NUMBA
    kernel = _sweep_q_nb if use_numba else _sweep_q_np
    return kernel(vs, vl, x, p, sin_grid, cos_grid, grid)
