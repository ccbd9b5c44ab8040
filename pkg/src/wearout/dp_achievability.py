"""Achievability: longest path over the (cumulative length, cumulative
weight) trellis of constant-composition blocks."""

import logging
from dataclasses import dataclass

import numpy as np

from . import kernels
from .code_size import log_m_ccc_table
from .prob_core import alive_cap, binom_cdf_table
from .schedule import BlockPlan, Schedule, evaluate_schedule, monotonicity_report

log = logging.getLogger(__name__)


@dataclass
class DPTable:
    """Filled trellis. ``values[N, H]`` is the best expected log-volume (bits)
    of block sequences with total length N and total weight H, -inf when no
    such sequence exists; backpointers hold the last block (n, h)."""

    values: np.ndarray
    back_n: np.ndarray
    back_h: np.ndarray
    h_cap: int
    log_m: np.ndarray       # L[n, h]
    alive: np.ndarray       # binom_cdf(S, H, gamma) for H <= h_cap
    params: object
    curve: np.ndarray = None
    curve_h: np.ndarray = None

    @property
    def n_max(self):
        return self.values.shape[0] - 1


def _best_over_weights(values, n_max):
    """curve[N] = max over 0 < H < N of values[N, H] (0 when empty)."""
    curve = np.zeros(n_max + 1)
    arg = np.zeros(n_max + 1, dtype=np.int64)
    h_cap = values.shape[1] - 1
    for N in range(2, n_max + 1):
        top = min(N - 1, h_cap)
        row = values[N, 1:top + 1]
        if row.size == 0:
            continue
        i = int(np.argmax(row))
        if row[i] > curve[N]:
            curve[N] = row[i]
            arg[N] = i + 1
    return curve, arg


def solve_achievability(n_max, eta, channel, params, prune_tol=1e-12, third_order=0.0):
    """Fill the achievability trellis up to total length ``n_max``.

    Returns ``(curve, table)`` where ``curve[N]`` is the best expected
    log-volume in bits for total length N (index 0 unused, 0.0).
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if not 0.0 < eta < 1.0:
        raise ValueError("eta must lie in (0, 1)")
    if not 0.0 <= prune_tol < 1.0:
        raise ValueError("prune_tol must lie in [0, 1)")
    h_cap = alive_cap(params, prune_tol, n_max)
    L = log_m_ccc_table(n_max, h_cap, eta, channel, third_order)
    B = binom_cdf_table(params.s_threshold, h_cap, params.gamma)
    V, bn, bh = kernels.achievability_fill(L, B, n_max, h_cap)
    table = DPTable(V, bn, bh, h_cap, L, B, params)
    table.curve, table.curve_h = _best_over_weights(V, n_max)
    log.debug("achievability n_max=%d h_cap=%d backend=%s", n_max, h_cap, kernels.USE_NUMBA)
    return table.curve, table


def traceback(table, N):
    """Block schedule attaining ``curve[N]``; blocks in transmission order."""
    if table.curve is None or not 0 <= N <= table.n_max:
        raise ValueError(f"N={N} outside the solved range 0..{table.n_max}")
    H = int(table.curve_h[N])
    blocks = []
    n_left = N
    if H > 0:
        while n_left > 0:
            n, h = int(table.back_n[n_left, H]), int(table.back_h[n_left, H])
            if n <= 0:
                raise RuntimeError(f"broken backpointer at ({n_left}, {H})")
            blocks.append((n, h, H))
            n_left -= n
            H -= h
    blocks.reverse()
    plans = tuple(BlockPlan(n, h, float(table.log_m[n, h]), float(table.alive[cum]))
                  for n, h, cum in blocks)
    sched = Schedule(plans, float(table.curve[N]), "ccc")
    if plans:
        log.info("N=%d schedule %s monotone=%s", N, sched.schedule_string(),
                 monotonicity_report(sched))
    return sched


def recompute(schedule, params):
    return evaluate_schedule(schedule, params)


def solve_single_block(n_max, eta, channel, params, third_order=0.0):
    """Best single block: curve[N] = max over 1 <= h < N of
    binom_cdf(S, h, gamma) * log_m_ccc(N, h). Also returns the argmax h."""
    L = log_m_ccc_table(n_max, n_max, eta, channel, third_order)
    B = binom_cdf_table(params.s_threshold, n_max, params.gamma)
    curve = np.zeros(n_max + 1)
    arg = np.zeros(n_max + 1, dtype=np.int64)
    for N in range(2, n_max + 1):
        vals = B[1:N] * L[N, 1:N]
        i = int(np.argmax(vals))
        if vals[i] > 0.0:
            curve[N], arg[N] = vals[i], i + 1
    return curve, arg
