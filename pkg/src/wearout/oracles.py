"""Brute-force references for the dynamic programs and the alive bound.

These enumerate everything and share no code with the DP kernels; they
are only usable at toy sizes.
"""

import itertools
import math
from functools import lru_cache

from .code_size import log_m_avg, log_m_ccc
from .prob_core import binom_cdf


def block_sequences(N, min_weight=1):
    """All ordered lists of (n, h) with sum n = N, n >= 1, min_weight <= h <= n."""
    if N == 0:
        yield ()
        return
    for n in range(1, N + 1):
        for h in range(min_weight, n + 1):
            for rest in block_sequences(N - n, min_weight):
                yield ((n, h),) + rest


def achievability_brute(N, eta, channel, params, third_order=0.0):
    """max over block sequences of total length N and total weight 0 < H < N."""
    L = lru_cache(maxsize=None)(lambda n, h: log_m_ccc(n, h, eta, channel, third_order))
    best = 0.0
    for seq in block_sequences(N):
        H = sum(h for _, h in seq)
        if not 0 < H < N:
            continue
        cum, terms = 0, []
        for n, h in seq:
            cum += h
            terms.append(binom_cdf(params.s_threshold, cum, params.gamma) * L(n, h))
        best = max(best, math.fsum(terms))
    return best


def single_block_brute(N, eta, channel, params, third_order=0.0):
    vals = [binom_cdf(params.s_threshold, h, params.gamma) * log_m_ccc(N, h, eta, channel, third_order)
            for h in range(1, N)]
    return max([0.0] + vals)


def converse_brute(N, eta, channel, params, alive_fn, w_cap=None):
    """Converse objective maximized over all (n_i, k_i) sequences.

    ``alive_fn(log_m, N_i, W_i)`` is the per-block alive bound. It is
    raised to its maximum over W' in [W_i, min(N_i, w_cap)], the same
    monotone repair the DP applies.
    """
    w_cap = N if w_cap is None else w_cap
    A = lru_cache(maxsize=None)(lambda n, k: log_m_avg(n, k + 1, eta, channel))
    P = lru_cache(maxsize=None)(alive_fn)

    @lru_cache(maxsize=None)
    def repaired(lm, Nc, Wc):
        return max(P(lm, Nc, w) for w in range(Wc, min(Nc, w_cap) + 1))

    best = 0.0
    for seq in block_sequences(N, min_weight=0):
        W = sum(k for _, k in seq)
        if not 0 < W < N or W > w_cap:
            continue
        Nc, Wc, terms = 0, 0, []
        for n, k in seq:
            Nc += n
            Wc += k
            lm = A(n, k)
            if lm > 0.0:
                terms.append(repaired(lm, Nc, Wc) * lm)
        best = max(best, math.fsum(terms))
    return best


def weight_tuples(m, n_total):
    return itertools.product(range(n_total + 1), repeat=m)


def average_alive(weights, params):
    return math.fsum(binom_cdf(params.s_threshold, w, params.gamma) for w in weights) / len(weights)


def lcrc_brute(f, m, total, b):
    """max of sum f(x_i) over integer tuples in [0, b]^m with sum ``total``."""
    best = -math.inf
    for xs in itertools.combinations_with_replacement(range(b + 1), m):
        if sum(xs) == total:
            best = max(best, math.fsum(float(f(float(x))) for x in xs))
    return best
