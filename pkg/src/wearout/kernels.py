"""Hot loops of the two dynamic programs and of the alive-bound tables.

Every kernel exists twice: ``*_nb`` is compiled with numba, ``*_np`` is
vectorized numpy. The public names (no suffix) point at one of them
according to :mod:`wearout._accel`. Both paths perform the same floating
point operations in the DP fills, so their values and backpointers agree
exactly; the envelope tables agree to rounding of ``erfc``.
"""

import math

import numpy as np
from scipy.special import erfc as _erfc

from ._accel import USE_NUMBA, njit
from .prob_core import f_be_scalar, f_n_scalar

NEG_INF = -np.inf
_GOLD = (math.sqrt(5.0) - 1.0) / 2.0


# --------------------------------------------------------------------------
# achievability fill
# --------------------------------------------------------------------------

@njit
def achievability_fill_nb(L, B, n_max, h_cap):
    V = np.full((n_max + 1, h_cap + 1), -np.inf)
    back_n = np.zeros((n_max + 1, h_cap + 1), dtype=np.int64)
    back_h = np.zeros((n_max + 1, h_cap + 1), dtype=np.int64)
    V[0, 0] = 0.0
    for N in range(1, n_max + 1):
        for H in range(1, min(N, h_cap) + 1):
            bH = B[H]
            best = -np.inf
            bn = 0
            bh = 0
            for n in range(N, 0, -1):
                for h in range(min(n, H), 0, -1):
                    prev = V[N - n, H - h]
                    if prev == -np.inf:
                        continue
                    cand = prev + bH * L[n, h]
                    if cand > best:
                        best = cand
                        bn = n
                        bh = h
            V[N, H] = best
            back_n[N, H] = bn
            back_h[N, H] = bh
    return V, back_n, back_h


def achievability_fill_np(L, B, n_max, h_cap):
    V = np.full((n_max + 1, h_cap + 1), NEG_INF)
    back_n = np.zeros((n_max + 1, h_cap + 1), dtype=np.int64)
    back_h = np.zeros((n_max + 1, h_cap + 1), dtype=np.int64)
    V[0, 0] = 0.0
    Lz = np.where(np.isfinite(L), L, 0.0)
    for N in range(1, n_max + 1):
        Lrev = Lz[N:0:-1]                 # row i <-> n = N - i
        Lok = np.isfinite(L[N:0:-1])
        for H in range(1, min(N, h_cap) + 1):
            prev = V[:N, :H]              # col c <-> h = H - c
            lsub = Lrev[:, H:0:-1]
            ok = Lok[:, H:0:-1] & np.isfinite(prev)
            cand = np.where(ok, prev + B[H] * lsub, NEG_INF)
            idx = int(np.argmax(cand))
            i, c = divmod(idx, H)
            best = cand[i, c]
            V[N, H] = best
            if best > NEG_INF:
                back_n[N, H] = N - i
                back_h[N, H] = H - c
    return V, back_n, back_h


# --------------------------------------------------------------------------
# converse fill
# --------------------------------------------------------------------------

@njit
def converse_fill_nb(A, Mf, eidx, bidx, Pexact, Prelax, combos, n_max, w_cap):
    V = np.full((n_max + 1, w_cap + 1), -np.inf)
    back_n = np.zeros((n_max + 1, w_cap + 1), dtype=np.int64)
    back_k = np.zeros((n_max + 1, w_cap + 1), dtype=np.int64)
    V[0, 0] = 0.0
    n_exact = Pexact.shape[1] - 1
    for N in range(1, n_max + 1):
        for W in range(0, min(N, w_cap) + 1):
            best = -np.inf
            bn = 0
            bk = 0
            for n in range(N, 0, -1):
                for k in range(min(n, W), -1, -1):
                    prev = V[N - n, W - k]
                    if prev == -np.inf:
                        continue
                    L = A[n, k]
                    term = 0.0
                    if L > 0.0:
                        e = eidx[n, k]
                        if e >= 0 and N <= n_exact and Mf[n, k] * (N + 1) <= combos:
                            P = Pexact[e, N, W]
                        else:
                            P = Prelax[bidx[n, k], N, W]
                        term = P * L
                    cand = prev + term
                    if cand > best:
                        best = cand
                        bn = n
                        bk = k
            V[N, W] = best
            back_n[N, W] = bn
            back_k[N, W] = bk
    return V, back_n, back_k


def converse_fill_np(A, Mf, eidx, bidx, Pexact, Prelax, combos, n_max, w_cap):
    V = np.full((n_max + 1, w_cap + 1), NEG_INF)
    back_n = np.zeros((n_max + 1, w_cap + 1), dtype=np.int64)
    back_k = np.zeros((n_max + 1, w_cap + 1), dtype=np.int64)
    V[0, 0] = 0.0
    n_exact = Pexact.shape[1] - 1
    eclip = np.maximum(eidx, 0)
    for N in range(1, n_max + 1):
        rows = slice(N, 0, -1)            # row i <-> n = N - i
        n_col = np.arange(N, 0, -1)[:, None]
        for W in range(0, min(N, w_cap) + 1):
            cols = slice(W, None, -1) if W > 0 else slice(0, 1)   # col c <-> k = W - c
            prev = V[:N, :W + 1]
            k_row = np.arange(W, -1, -1)[None, :]
            lsub = A[rows, cols]
            use_exact = (eidx[rows, cols] >= 0) & (Mf[rows, cols] * (N + 1) <= combos)
            if N <= n_exact:
                p_e = Pexact[:, N, W][eclip[rows, cols]]
            else:
                p_e = 0.0
                use_exact = np.zeros_like(use_exact)
            p_r = Prelax[:, N, W][bidx[rows, cols]]
            P = np.where(use_exact, p_e, p_r)
            term = np.where(lsub > 0.0, P * lsub, 0.0)
            ok = (k_row <= n_col) & np.isfinite(prev)
            cand = np.where(ok, prev + term, NEG_INF)
            idx = int(np.argmax(cand))
            i, c = divmod(idx, W + 1)
            best = cand[i, c]
            V[N, W] = best
            if best > NEG_INF:
                back_n[N, W] = N - i
                back_k[N, W] = W - c
    return V, back_n, back_k


# --------------------------------------------------------------------------
# relaxed alive-bound table
# --------------------------------------------------------------------------

@njit
def _env(w, kind, s, gamma, c0, wb):
    if kind == 0:
        return f_n_scalar(w, s, gamma)
    return f_be_scalar(w, gamma, c0, wb)


@njit
def _chord(z, xp, b, fb, kind, s, gamma, c0, wb):
    return ((b - xp) * _env(z, kind, s, gamma, c0, wb) + (xp - z) * fb) / (b - z)


@njit
def relaxed_point_nb(x_star, b, inv_m, kind, s, gamma, c0, wb, fz, dz, iters):
    """Relaxed per-codeword bound for one envelope, using the chord form:
    the best two-level split is a chord from (z, f(z)) to (b, f(b))."""
    f0 = _env(0.0, kind, s, gamma, c0, wb)
    xp = x_star - (b + 1.0) * inv_m
    if xp <= 0.0:
        return f0 + f0 * inv_m
    fb = _env(b, kind, s, gamma, c0, wb)
    best = _env(xp, kind, s, gamma, c0, wb)
    ibest = -1
    i = 0
    while i < fz.shape[0]:
        z = i * dz
        if z >= xp:
            break
        g = ((b - xp) * fz[i] + (xp - z) * fb) / (b - z)
        if g > best:
            best = g
            ibest = i
        i += 1
    if ibest >= 0:
        lo = max(0.0, (ibest - 1) * dz)
        hi = min((ibest + 1) * dz, xp)
    else:
        lo = max(0.0, xp - dz)
        hi = xp
    if iters > 0 and hi > lo:
        x1 = hi - _GOLD * (hi - lo)
        x2 = lo + _GOLD * (hi - lo)
        g1 = _chord(x1, xp, b, fb, kind, s, gamma, c0, wb)
        g2 = _chord(x2, xp, b, fb, kind, s, gamma, c0, wb)
        for _ in range(iters):
            if g1 > best:
                best = g1
            if g2 > best:
                best = g2
            if g1 >= g2:
                hi = x2
                x2 = x1
                g2 = g1
                x1 = hi - _GOLD * (hi - lo)
                g1 = _chord(x1, xp, b, fb, kind, s, gamma, c0, wb)
            else:
                lo = x1
                x1 = x2
                g1 = g2
                x2 = lo + _GOLD * (hi - lo)
                g2 = _chord(x2, xp, b, fb, kind, s, gamma, c0, wb)
        if g1 > best:
            best = g1
        if g2 > best:
            best = g2
    return best + f0 * inv_m


@njit
def relaxed_table_nb(inv_ms, n_max, w_cap, s, gamma, c0, wb, fz_n, fz_be, dz, iters):
    nb = inv_ms.shape[0]
    P = np.zeros((nb, n_max + 1, w_cap + 1))
    for q in range(nb):
        for N in range(1, n_max + 1):
            b = float(N)
            for W in range(0, min(N, w_cap) + 1):
                v = relaxed_point_nb(float(W), b, inv_ms[q], 0, s, gamma, c0, wb, fz_n, dz, iters) \
                    + relaxed_point_nb(float(W), b, inv_ms[q], 1, s, gamma, c0, wb, fz_be, dz, iters)
                P[q, N, W] = min(1.0, v)
    return P


def _env_np(w, kind, s, gamma, c0, wb):
    w = np.asarray(w, dtype=float)
    if kind == 0:
        safe = np.where(w > 0, w, 1.0)
        return np.where(w > 0, 0.5 * _erfc((safe * gamma - s) / np.sqrt(2.0 * safe * gamma * (1.0 - gamma))), 1.0)
    safe = np.where(w > wb, w, max(wb, 1e-300))
    return np.where(w > wb, c0 / np.sqrt(safe * gamma * (1.0 - gamma)), 1.0)


def relaxed_row_np(xs, b, inv_m, kind, s, gamma, c0, wb, fz, dz, iters):
    """Vector form of :func:`relaxed_point_nb` over many ``x_star`` at one ``b``."""
    xs = np.asarray(xs, dtype=float)
    f0 = float(_env_np(0.0, kind, s, gamma, c0, wb))
    fb = float(_env_np(b, kind, s, gamma, c0, wb))
    xp = xs - (b + 1.0) * inv_m
    live = xp > 0.0
    xpl = np.where(live, xp, 1.0)
    best = _env_np(xpl, kind, s, gamma, c0, wb)
    zmax = int(min(fz.shape[0], math.ceil(max(float(xpl.max()), 0.0) / dz) + 1))
    z = np.arange(zmax) * dz
    inside = z[None, :] < xpl[:, None]
    with np.errstate(divide="ignore", invalid="ignore"):   # z == b only outside the mask
        g = ((b - xpl[:, None]) * fz[None, :zmax] + (xpl[:, None] - z[None, :]) * fb) / (b - z[None, :])
    g = np.where(inside, g, -np.inf)
    ib = np.argmax(g, axis=1)
    gb = g[np.arange(xs.size), ib]
    better = gb > best
    best = np.where(better, gb, best)
    lo = np.where(better, np.maximum(0.0, (ib - 1) * dz), np.maximum(0.0, xpl - dz))
    hi = np.where(better, np.minimum((ib + 1) * dz, xpl), xpl)

    def chord(zz):
        with np.errstate(divide="ignore", invalid="ignore"):
            return ((b - xpl) * _env_np(zz, kind, s, gamma, c0, wb) + (xpl - zz) * fb) / (b - zz)

    if iters > 0:
        x1 = hi - _GOLD * (hi - lo)
        x2 = lo + _GOLD * (hi - lo)
        g1, g2 = chord(x1), chord(x2)
        for _ in range(iters):
            best = np.maximum(best, np.maximum(g1, g2))
            left = g1 >= g2
            hi, lo = np.where(left, x2, hi), np.where(left, lo, x1)
            x1, x2 = (np.where(left, hi - _GOLD * (hi - lo), x2),
                      np.where(left, x1, lo + _GOLD * (hi - lo)))
            g1, g2 = np.where(left, chord(x1), g2), np.where(left, g1, chord(x2))
        best = np.maximum(best, np.maximum(g1, g2))
    return np.where(live, best, f0) + f0 * inv_m


def relaxed_table_np(inv_ms, n_max, w_cap, s, gamma, c0, wb, fz_n, fz_be, dz, iters):
    nb = inv_ms.shape[0]
    P = np.zeros((nb, n_max + 1, w_cap + 1))
    for q in range(nb):
        for N in range(1, n_max + 1):
            ws = np.arange(0, min(N, w_cap) + 1, dtype=float)
            v = relaxed_row_np(ws, float(N), inv_ms[q], 0, s, gamma, c0, wb, fz_n, dz, iters) \
                + relaxed_row_np(ws, float(N), inv_ms[q], 1, s, gamma, c0, wb, fz_be, dz, iters)
            P[q, N, :ws.size] = np.minimum(1.0, v)
    return P


# --------------------------------------------------------------------------
# exact alive-bound table (small codebooks)
# --------------------------------------------------------------------------

@njit
def exact_point_nb(x_star, b_int, M, kind, s, gamma, c0, wb, fint):
    """Exact integer maximization of j f(b) + f(k) + (M-j-1) f(z), divided by M."""
    b = float(b_int)
    fb = fint[b_int]
    total = M * x_star
    best = -np.inf
    for j in range(M):
        rest = M - j - 1
        for k in range(0, b_int + 1):
            if rest > 0:
                z = (total - j * b - k - 1.0) / rest
                if z < 0.0:
                    z = 0.0
                if k + 1.0 < z:
                    continue
                v = j * fb + fint[k] + rest * _env(z, kind, s, gamma, c0, wb)
            else:
                if k + 1.0 < total - j * b:
                    continue
                v = j * fb + fint[k]
            if v > best:
                best = v
    return best / M


@njit
def exact_table_nb(Ms, n_exact, w_cap, combos, s, gamma, c0, wb, fint_n, fint_be):
    ne = Ms.shape[0]
    P = np.full((ne, n_exact + 1, w_cap + 1), np.nan)
    for e in range(ne):
        M = Ms[e]
        for N in range(1, n_exact + 1):
            if M * (N + 1) > combos:
                break
            for W in range(0, min(N, w_cap) + 1):
                v = exact_point_nb(float(W), N, M, 0, s, gamma, c0, wb, fint_n) \
                    + exact_point_nb(float(W), N, M, 1, s, gamma, c0, wb, fint_be)
                P[e, N, W] = min(1.0, v)
    return P


def exact_rows_np(ws, b_int, M, kind, s, gamma, c0, wb, fint):
    """Vector form of :func:`exact_point_nb` over many ``x_star``."""
    ws = np.asarray(ws, dtype=float)[:, None, None]
    b = float(b_int)
    fb = fint[b_int]
    j = np.arange(M, dtype=float)[None, :, None]
    k = np.arange(b_int + 1, dtype=float)[None, None, :]
    rest = M - j - 1.0
    total = M * ws
    with np.errstate(divide="ignore", invalid="ignore"):
        z = np.maximum((total - j * b - k - 1.0) / np.where(rest > 0, rest, 1.0), 0.0)
    feas = np.where(rest > 0, k + 1.0 >= z, k + 1.0 >= total - j * b)
    fz = np.where(rest > 0, _env_np(z, kind, s, gamma, c0, wb), 0.0)
    v = j * fb + fint[:b_int + 1][None, None, :] + rest * fz
    v = np.where(feas, v, -np.inf)
    return v.reshape(v.shape[0], -1).max(axis=1) / M


def exact_table_np(Ms, n_exact, w_cap, combos, s, gamma, c0, wb, fint_n, fint_be):
    ne = Ms.shape[0]
    P = np.full((ne, n_exact + 1, w_cap + 1), np.nan)
    for e in range(ne):
        M = int(Ms[e])
        for N in range(1, n_exact + 1):
            if M * (N + 1) > combos:
                break
            ws = np.arange(0, min(N, w_cap) + 1)
            v = exact_rows_np(ws, N, M, 0, s, gamma, c0, wb, fint_n) \
                + exact_rows_np(ws, N, M, 1, s, gamma, c0, wb, fint_be)
            P[e, N, :ws.size] = np.minimum(1.0, v)
    return P


if USE_NUMBA:
    achievability_fill = achievability_fill_nb
    converse_fill = converse_fill_nb
    relaxed_table = relaxed_table_nb
    exact_table = exact_table_nb
else:
    achievability_fill = achievability_fill_np
    converse_fill = converse_fill_np
    relaxed_table = relaxed_table_np
    exact_table = exact_table_np
