"""Converse: an upper bound on the alive probability of any codebook with a
given average weight, and the quantized-weight dynamic program built on it."""

import logging
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .code_size import log_m_avg_table
from .majorization import inv_codebook_size, lcrc_max_exact, lcrc_max_relaxed
from .prob_core import alive_cap, be_constant, f_be, f_n, w_be
from .schedule import BlockPlan, Schedule

log = logging.getLogger(__name__)

EXACT_COMBOS = 10 ** 6
# floor(log_m) edges used to bucket relaxed bounds; each value is evaluated
# at M = 2**edge <= true M, which can only raise the bound
LOG_M_EDGES = np.array(list(range(0, 17)) + [18, 20, 24, 28, 32, 40], dtype=float)


def codebook_size(log_m):
    """M = floor(2**log_m) as a float. A 1e-9 nudge keeps log2(M) from
    rounding down to M - 1."""
    if log_m < 0:
        raise ValueError("log_m must be non-negative")
    return float(math.floor(2.0 ** log_m + 1e-9)) if log_m < 1000 else math.inf


def alive_upper(log_m, n_total, w_star, params, exact_combos=EXACT_COMBOS):
    """Upper bound on the average alive probability of M = floor(2**log_m)
    codewords of length ``n_total`` with average weight ``w_star``.

    Sum of the LCRC maximizations of the Gaussian and Berry-Esseen
    envelopes, clamped at 1. The exact integer search is used when
    ``M * (n_total + 1) <= exact_combos``, the continuous relaxation otherwise.
    """
    if n_total < 1:
        raise ValueError("n_total must be >= 1")
    if not 0.0 <= w_star <= n_total:
        raise ValueError(f"w_star={w_star} outside [0, {n_total}]")
    if w_star == 0.0:
        return 1.0
    M = codebook_size(log_m)
    fn = lambda w: f_n(w, params)                  # noqa: E731
    fb = lambda w: f_be(w, params.gamma)           # noqa: E731
    if M * (n_total + 1) <= exact_combos:
        m = int(M)
        total = lcrc_max_exact(fn, m, w_star, 0, n_total).objective \
            + lcrc_max_exact(fb, m, w_star, 0, n_total).objective
        return min(1.0, total / m)
    total = lcrc_max_relaxed(fn, log_m, w_star, 0, n_total).objective \
        + lcrc_max_relaxed(fb, log_m, w_star, 0, n_total).objective
    return min(1.0, total)


@dataclass
class ConverseTables:
    """Filled converse trellis over (cumulative length N, quantized weight W)."""

    values: np.ndarray
    back_n: np.ndarray
    back_k: np.ndarray
    w_cap: int
    log_m: np.ndarray       # A[n, k] = log_m_avg(n, k + 1)
    Mf: np.ndarray
    eidx: np.ndarray
    bidx: np.ndarray
    p_exact: np.ndarray     # [codebook index, N, W], nan where not used
    p_relax: np.ndarray     # [bucket, N, W], monotone-repaired
    Ms: np.ndarray
    exact_combos: int
    params: object
    curve: np.ndarray = None
    curve_w: np.ndarray = None

    @property
    def n_max(self):
        return self.values.shape[0] - 1

    def alive(self, n, k, N, W):
        """The alive bound the fill used for block (n, k) ending at (N, W)."""
        e = self.eidx[n, k]
        if e >= 0 and N < self.p_exact.shape[1] and self.Mf[n, k] * (N + 1) <= self.exact_combos:
            return float(self.p_exact[e, N, W])
        return float(self.p_relax[self.bidx[n, k], N, W])


def _suffix_max(P):
    """Make every row non-increasing in W by raising earlier entries."""
    out = P.copy()
    valid = np.isfinite(out)
    filled = np.where(valid, out, -np.inf)
    rep = np.maximum.accumulate(filled[..., ::-1], axis=-1)[..., ::-1]
    out[valid] = rep[valid]
    return out


def _bucket_index(A):
    idx = np.searchsorted(LOG_M_EDGES, A, side="right") - 1
    return np.clip(idx, 0, LOG_M_EDGES.size - 1).astype(np.int64)


def _envelope_params(params):
    s, g = float(params.s_threshold), float(params.gamma)
    return s, g, be_constant(g), w_be(g)


def build_converse_tables(n_max, eta, channel, params, prune_tol=1e-12, exact_combos=1024,
                          dz=1.0 / 16.0, iters=40):
    """Log-size table and alive-bound tables shared by the converse solvers
    (the trellis arrays are left empty)."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if not 0.0 < eta < 1.0:
        raise ValueError("eta must lie in (0, 1)")
    if not 0.0 <= prune_tol < 1.0:
        raise ValueError("prune_tol must lie in [0, 1)")
    w_cap = alive_cap(params, prune_tol, n_max)
    A = log_m_avg_table(n_max, w_cap, eta, channel)
    with np.errstate(over="ignore"):
        Mf = np.floor(np.exp2(np.minimum(A, 1000.0)) + 1e-9)
    s, g, c0, wb = _envelope_params(params)

    small = Mf * 2 <= exact_combos
    Ms = np.unique(np.concatenate([[1.0], Mf[small]])).astype(np.int64)
    eidx = np.full(A.shape, -1, dtype=np.int64)
    eidx[small] = np.searchsorted(Ms, Mf[small].astype(np.int64))
    n_exact = int(min(n_max, max(exact_combos - 1, 0)))
    fint_n = f_n(np.arange(n_exact + 1, dtype=float), params)
    fint_be = f_be(np.arange(n_exact + 1, dtype=float), g)
    p_exact = kernels.exact_table(Ms, n_exact, w_cap, float(exact_combos), s, g, c0, wb,
                                  fint_n, fint_be)

    bidx = _bucket_index(A)
    used = np.unique(bidx)
    inv_ms = np.array([inv_codebook_size(LOG_M_EDGES[q]) for q in range(LOG_M_EDGES.size)])
    zgrid = np.arange(0, int(math.ceil(w_cap / dz)) + 2) * dz
    fz_n = f_n(zgrid, params)
    fz_be = f_be(zgrid, g)
    p_relax = np.ones((LOG_M_EDGES.size, n_max + 1, w_cap + 1))
    p_relax[used] = kernels.relaxed_table(inv_ms[used], n_max, w_cap, s, g, c0, wb,
                                          fz_n, fz_be, dz, iters)
    p_relax = _suffix_max(p_relax)
    p_exact = _suffix_max(p_exact)
    empty = np.zeros((0, 0))
    return ConverseTables(empty, empty, empty, w_cap, A, Mf, eidx, bidx, p_exact, p_relax,
                          Ms, exact_combos, params)


def solve_converse(n_max, eta, channel, params, prune_tol=1e-12, exact_combos=1024,
                   dz=1.0 / 16.0, iters=40):
    """Fill the converse trellis up to total length ``n_max``.

    Returns ``(curve, tables)``; ``curve[N]`` upper-bounds the expected
    log-volume (bits) of any schedule of total length N under the same
    code-size approximation. ``exact_combos`` bounds ``M * (N + 1)`` for
    the exact alive bound; larger codebooks use the relaxation.
    """
    t = build_converse_tables(n_max, eta, channel, params, prune_tol, exact_combos, dz, iters)
    w_cap = t.w_cap
    t.values, t.back_n, t.back_k = kernels.converse_fill(
        t.log_m, t.Mf, t.eidx, t.bidx, t.p_exact, t.p_relax, float(exact_combos), n_max, w_cap)
    V, tables = t.values, t
    curve = np.zeros(n_max + 1)
    arg = np.zeros(n_max + 1, dtype=np.int64)
    for N in range(2, n_max + 1):
        top = min(N - 1, w_cap)
        row = V[N, 1:top + 1]
        if row.size == 0:
            continue
        i = int(np.argmax(row))
        if row[i] > curve[N]:
            curve[N], arg[N] = row[i], i + 1
    tables.curve, tables.curve_w = curve, arg
    log.debug("converse n_max=%d w_cap=%d exact codebooks=%d", n_max, w_cap, t.Ms.size)
    return curve, tables


def traceback_converse(tables, N):
    """Block sequence attaining the converse curve at N. Each block's ``h``
    is its quantized weight increment k and ``alive_prob`` the bound used."""
    if tables.curve is None or not 0 <= N <= tables.n_max:
        raise ValueError(f"N={N} outside the solved range 0..{tables.n_max}")
    W = int(tables.curve_w[N])
    steps = []
    n_left = N
    if W > 0:
        while n_left > 0:
            n, k = int(tables.back_n[n_left, W]), int(tables.back_k[n_left, W])
            if n <= 0:
                raise RuntimeError(f"broken backpointer at ({n_left}, {W})")
            steps.append((n, k, n_left, W))
            n_left -= n
            W -= k
    steps.reverse()
    plans = tuple(BlockPlan(n, k, float(tables.log_m[n, k]), tables.alive(n, k, Nc, Wc))
                  for n, k, Nc, Wc in steps)
    return Schedule(plans, float(tables.curve[N]), "converse",
                    meta={"cumulative": [(Nc, Wc) for _, _, Nc, Wc in steps]})


def evaluate_converse_schedule(schedule):
    """Recompute the converse objective from the stored per-block bounds."""
    return math.fsum(b.alive_prob * b.log_m for b in schedule.blocks)


def solve_single_block_converse(n_max, eta, channel, params, prune_tol=1e-12,
                                exact_combos=1024, dz=1.0 / 16.0, iters=40):
    """Converse restricted to one block: max over 0 < W < N of
    alive_bound(N, W) * log_m_avg(N, W + 1)."""
    t = build_converse_tables(n_max, eta, channel, params, prune_tol, exact_combos, dz, iters)
    curve = np.zeros(n_max + 1)
    for N in range(2, n_max + 1):
        best = 0.0
        for W in range(1, min(N - 1, t.w_cap) + 1):
            L = t.log_m[N, W]
            if L > 0.0:
                best = max(best, t.alive(N, W, N, W) * L)
        curve[N] = best
    return curve
