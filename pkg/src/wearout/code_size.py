"""Normal approximations of the largest code size on the alive channel.

All information quantities are in bits.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .prob_core import q_inv

_GOLD = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class AliveChannel:
    """Binary-input transition matrix of the channel while it is alive.

    Rows are indexed by the input symbol (0, 1); columns by outputs. The
    dead state erases everything and needs no matrix here.
    """

    p_a: np.ndarray = field(repr=False)
    epsilon: float = None   # set only for the BSC constructor

    def __post_init__(self):
        p = np.asarray(self.p_a, dtype=float)
        if p.ndim != 2 or p.shape[0] != 2:
            raise ValueError("p_a must be a 2 x |Y| matrix")
        if np.any(p < 0) or np.any(p > 1):
            raise ValueError("entries of p_a must lie in [0, 1]")
        if np.any(np.abs(p.sum(axis=1) - 1.0) > 1e-12):
            raise ValueError("rows of p_a must sum to 1")
        p.setflags(write=False)
        object.__setattr__(self, "p_a", p)

    @classmethod
    def bsc(cls, epsilon):
        """BSC(epsilon) with an unused erasure column, as the alive law."""
        if not 0.0 < epsilon < 1.0:
            raise ValueError("epsilon must lie in (0, 1)")
        e = float(epsilon)
        return cls(np.array([[1 - e, e, 0.0], [e, 1 - e, 0.0]]), epsilon=e)

    @property
    def is_bsc(self):
        return self.epsilon is not None


@dataclass(frozen=True)
class InputType:
    n: int
    h: int

    def __post_init__(self):
        if self.n < 1 or not 0 <= self.h <= self.n:
            raise ValueError("need n >= 1 and 0 <= h <= n")

    @property
    def p_one(self):
        return self.h / self.n


def h2(p):
    """Binary entropy in bits (array-friendly)."""
    p = np.asarray(p, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = -np.where(p > 0, p * np.log2(np.where(p > 0, p, 1.0)), 0.0) \
              - np.where(p < 1, (1 - p) * np.log2(np.where(p < 1, 1 - p, 1.0)), 0.0)
    return float(out) if out.ndim == 0 else out


def _info_stats(p_one, channel):
    """Mutual information and conditional information variance for input
    distributions P(1) = p_one (any shape)."""
    W = channel.p_a
    p = np.asarray(p_one, dtype=float)
    px = np.stack([1.0 - p, p], axis=-1)                 # (..., 2)
    py = px @ W                                          # (..., |Y|)
    with np.errstate(divide="ignore", invalid="ignore"):
        dens = np.where(W > 0, np.log2(W / py[..., None, :]), 0.0)   # (..., 2, |Y|)
    dens = np.where(np.isfinite(dens), dens, 0.0)
    cond_mean = np.sum(W * dens, axis=-1)                # (..., 2)
    cond_sq = np.sum(W * dens * dens, axis=-1)
    mi = np.sum(px * cond_mean, axis=-1)
    var = np.sum(px * np.maximum(cond_sq - cond_mean ** 2, 0.0), axis=-1)
    mi = np.maximum(mi, 0.0)
    return mi, var


def mutual_information(p_one, channel):
    """I(P; p_a) in bits for P(1) = p_one."""
    if np.any(np.asarray(p_one) < 0) or np.any(np.asarray(p_one) > 1):
        raise ValueError("p_one must lie in [0, 1]")
    mi, _ = _info_stats(p_one, channel)
    return float(mi) if np.ndim(mi) == 0 else mi


def cond_info_variance(p_one, channel):
    """Conditional information variance rho(P; p_a) in bits^2."""
    if np.any(np.asarray(p_one) < 0) or np.any(np.asarray(p_one) > 1):
        raise ValueError("p_one must lie in [0, 1]")
    _, var = _info_stats(p_one, channel)
    return float(var) if np.ndim(var) == 0 else var


def bsc_mutual_information(p_one, epsilon):
    """Closed form h2(eps + p(1 - 2 eps)) - h2(eps)."""
    return h2(epsilon + np.asarray(p_one) * (1 - 2 * epsilon)) - h2(epsilon)


def _argmax_input(beta, channel, tol=1e-10):
    """Best P(1) in [0, beta]; mutual information is concave in P(1)."""
    beta = min(max(float(beta), 0.0), 1.0)
    if channel.is_bsc:
        return min(beta, 0.5)
    lo, hi = 0.0, beta
    x1, x2 = hi - _GOLD * (hi - lo), lo + _GOLD * (hi - lo)
    g1, g2 = mutual_information(x1, channel), mutual_information(x2, channel)
    while hi - lo > tol:
        if g1 >= g2:
            hi, x2, g2 = x2, x1, g1
            x1 = hi - _GOLD * (hi - lo)
            g1 = mutual_information(x1, channel)
        else:
            lo, x1, g1 = x1, x2, g2
            x2 = lo + _GOLD * (hi - lo)
            g2 = mutual_information(x2, channel)
    cand = [0.0, 0.5 * (lo + hi), beta]
    return max(cand, key=lambda p: mutual_information(p, channel))


def capacity_cost(beta, channel):
    """C(beta) = max over P(1) <= beta of I(P; p_a)."""
    if not 0.0 <= beta <= 1.0:
        raise ValueError("beta must lie in [0, 1]")
    return mutual_information(_argmax_input(beta, channel), channel)


def dispersion_cost(beta, channel):
    """Conditional information variance at the cost-constrained optimal input."""
    if not 0.0 <= beta <= 1.0:
        raise ValueError("beta must lie in [0, 1]")
    return cond_info_variance(_argmax_input(beta, channel), channel)


def _normal_approx(n, info, var, qinv):
    # zero information means one distinguishable message, whatever the log n term says
    if info <= 0.0:
        return 0.0
    return n * info - math.sqrt(n * var) * qinv + 0.5 * math.log2(n)


def log_m_ccc(n, h, eta, channel, third_order=0.0):
    """log2 of the largest constant-composition code of length n and weight h
    at error eta, by the normal approximation; never below 0."""
    if n < 1 or not 0 <= h <= n:
        raise ValueError("need n >= 1 and 0 <= h <= n")
    info, var = _info_stats(h / n, channel)
    info, var = float(info), float(var)
    if info <= 0.0:
        return 0.0
    return max(0.0, _normal_approx(n, info, var, q_inv(eta)) + third_order)


def _log_m_avg_raw(n, w, eta, channel, qinv=None):
    beta = min(1.0, max(0.0, w / n))
    p = _argmax_input(beta, channel)
    info, var = _info_stats(p, channel)
    qinv = q_inv(eta) if qinv is None else qinv
    return max(0.0, _normal_approx(n, float(info), float(var), qinv))


def log_m_avg(n, w_star, eta, channel):
    """log2 of the largest code of length n with average weight <= w_star.

    The raw normal approximation is not monotone in the budget near zero
    weight (the dispersion term grows faster than the capacity term), so
    the value is the running maximum of the raw approximation over the
    integer budgets ``w' <= w_star``. A fractional budget therefore counts
    as its floor; the dynamic programs only use integer budgets.
    """
    if n < 1 or w_star < 0:
        raise ValueError("need n >= 1 and w_star >= 0")
    qinv = q_inv(eta)
    best = 0.0
    for w in range(0, int(math.floor(w_star + 1e-12)) + 1):
        best = max(best, _log_m_avg_raw(n, w, eta, channel, qinv))
    return best


def log_m_ccc_table(n_max, h_max, eta, channel, third_order=0.0):
    """Array L[n, h] = log_m_ccc(n, h) for 1 <= n <= n_max, h <= min(n, h_max);
    -inf where h > n."""
    L = np.full((n_max + 1, h_max + 1), -np.inf)
    qinv = q_inv(eta)
    ns = np.arange(1, n_max + 1)
    for h in range(0, h_max + 1):
        valid = ns[ns >= h]
        if valid.size == 0:
            continue
        info, var = _info_stats(h / valid, channel)
        raw = valid * info - np.sqrt(valid * var) * qinv + 0.5 * np.log2(valid)
        vals = np.where(info > 0.0, np.maximum(raw + third_order, 0.0), 0.0)
        L[valid, h] = vals
    return L


def log_m_avg_table(n_max, w_max, eta, channel):
    """Array A[n, k] = log_m_avg(n, k + 1) for 1 <= n <= n_max, 0 <= k <= w_max."""
    qinv = q_inv(eta)
    A = np.zeros((n_max + 1, w_max + 1))
    for n in range(1, n_max + 1):
        ws = np.arange(0, w_max + 2)
        betas = np.minimum(1.0, ws / n)
        if channel.is_bsc:
            ps = np.minimum(betas, 0.5)
        else:
            ps = np.array([_argmax_input(bt, channel) for bt in betas])
        info, var = _info_stats(ps, channel)
        raw = n * info - np.sqrt(n * var) * qinv + 0.5 * math.log2(n)
        raw = np.where(info > 0.0, np.maximum(raw, 0.0), 0.0)
        A[n, :] = np.maximum.accumulate(raw)[1:]
    return A
