"""Probability kernels: binomial alive probability, Gaussian tail, and the
normal / Berry-Esseen envelopes that upper bound the binomial CDF.
"""

import math
from dataclasses import dataclass
from statistics import NormalDist

import numpy as np
from scipy.special import erfc as _erfc_vec

from ._accel import njit

SQRT2 = math.sqrt(2.0)
# absolute constant of the Berry-Esseen bound for sums of Bernoulli variables
BE_ABS_CONST = (math.sqrt(10.0) + 3.0) / (6.0 * math.sqrt(2.0 * math.pi))


@dataclass(frozen=True)
class DamageParams:
    """Damage model: every transmitted '1' damages the channel with
    probability ``gamma``; the channel dies once the damage count exceeds
    ``s_threshold``."""

    gamma: float
    s_threshold: int

    def __post_init__(self):
        if not 0.0 < self.gamma < 1.0:
            raise ValueError(f"gamma must lie in (0, 1), got {self.gamma}")
        if int(self.s_threshold) != self.s_threshold or self.s_threshold < 0:
            raise ValueError(f"s_threshold must be a non-negative integer, got {self.s_threshold}")
        object.__setattr__(self, "s_threshold", int(self.s_threshold))


def binom_pmf(d, h, gamma):
    """Pr[Bin(h, gamma) = d]."""
    if d < 0 or d > h:
        return 0.0
    if gamma == 0.0:
        return 1.0 if d == 0 else 0.0
    if gamma == 1.0:
        return 1.0 if d == h else 0.0
    logp = (math.lgamma(h + 1) - math.lgamma(d + 1) - math.lgamma(h - d + 1)
            + d * math.log(gamma) + (h - d) * math.log1p(-gamma))
    return math.exp(logp)


def binom_cdf(s, h, gamma):
    """Pr[Bin(h, gamma) <= s], i.e. the probability that the channel is
    still alive after ``h`` ones have been sent.

    Direct summation of log-space terms; accurate to ~1e-13 absolute for
    h up to a few thousand.
    """
    s = int(s)
    h = int(h)
    if not 0.0 <= gamma <= 1.0:
        raise ValueError(f"gamma must lie in [0, 1], got {gamma}")
    if s < 0:
        return 0.0
    if h <= s:
        return 1.0
    if gamma == 0.0:
        return 1.0
    if gamma == 1.0:
        return 0.0
    lg, lq = math.log(gamma), math.log1p(-gamma)
    lh = math.lgamma(h + 1)
    total = math.fsum(
        math.exp(lh - math.lgamma(d + 1) - math.lgamma(h - d + 1) + d * lg + (h - d) * lq)
        for d in range(s + 1)
    )
    return min(1.0, total)


def binom_cdf_table(s, h_max, gamma):
    """``binom_cdf(s, h, gamma)`` for h = 0..h_max as an array."""
    return np.array([binom_cdf(s, h, gamma) for h in range(h_max + 1)])


def alive_cap(params, prune_tol, n_max):
    """Largest cumulative weight kept by the DPs.

    Returns the first H with ``binom_cdf(S, H, gamma) < prune_tol`` (that
    state is still kept, later ones are dropped), capped at ``n_max``.
    ``prune_tol <= 0`` disables pruning.
    """
    if prune_tol <= 0.0:
        return n_max
    for h in range(params.s_threshold, n_max + 1):
        if binom_cdf(params.s_threshold, h, params.gamma) < prune_tol:
            return h
    return n_max


def q_func(x):
    """Gaussian tail Q(x) = Pr[Z > x]."""
    return 0.5 * math.erfc(x / SQRT2)


def q_inv(eta):
    """Inverse of the Gaussian tail function."""
    if not 0.0 < eta < 1.0:
        raise ValueError(f"q_inv needs eta in (0, 1), got {eta}")
    x = -NormalDist().inv_cdf(eta)
    for _ in range(2):
        # Newton on Q(x) - eta; Q'(x) = -phi(x)
        phi = math.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)
        if phi == 0.0:
            break
        x += (q_func(x) - eta) / phi
    return x


def be_constant(gamma, scale=1.0):
    """C0(gamma): numerator of the Berry-Esseen term for Bernoulli(gamma)."""
    return scale * BE_ABS_CONST * (gamma * gamma + (1.0 - gamma) * (1.0 - gamma))


def w_be(gamma, scale=1.0):
    """Largest w at which the raw Berry-Esseen term is still >= 1."""
    c0 = be_constant(gamma, scale)
    return c0 * c0 / (gamma * (1.0 - gamma))


def _scalar_or_array(w, out):
    return float(out) if np.ndim(w) == 0 else out


def f_n(w, params):
    """Normal envelope: 1 at w = 0, else Phi((S - w*gamma) / sqrt(w*gamma*(1-gamma)))."""
    g, s = params.gamma, params.s_threshold
    wa = np.asarray(w, dtype=float)
    safe = np.where(wa > 0.0, wa, 1.0)
    arg = (safe * g - s) / np.sqrt(2.0 * safe * g * (1.0 - g))
    out = np.where(wa > 0.0, 0.5 * _erfc_vec(arg), 1.0)
    return _scalar_or_array(w, out)


def f_be(w, gamma, *, scale=1.0):
    """Berry-Esseen envelope, pinned at 1 up to ``w_be(gamma)``.

    ``scale`` multiplies the Berry-Esseen constant; it exists only for
    fault-injection in the self-test.
    """
    c0 = be_constant(gamma, scale)
    wb = w_be(gamma, scale)
    wa = np.asarray(w, dtype=float)
    safe = np.where(wa > wb, wa, max(wb, 1e-300))
    out = np.where(wa > wb, c0 / np.sqrt(safe * gamma * (1.0 - gamma)), 1.0)
    return _scalar_or_array(w, out)


def be_envelope(w, params, *, scale=1.0):
    """f_n(w) + f_be(w); upper bounds ``binom_cdf(S, w, gamma)`` at integer w."""
    return f_n(w, params) + f_be(w, params.gamma, scale=scale)


# scalar forms used inside compiled kernels

@njit
def f_n_scalar(w, s, gamma):
    if w <= 0.0:
        return 1.0
    return 0.5 * math.erfc((w * gamma - s) / math.sqrt(2.0 * w * gamma * (1.0 - gamma)))


@njit
def f_be_scalar(w, gamma, c0, wb):
    if w <= wb:
        return 1.0
    return c0 / math.sqrt(w * gamma * (1.0 - gamma))
