"""Monte Carlo check of schedule alive probabilities, plus the damage-count
feedback identity."""

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .prob_core import binom_cdf, binom_pmf

Z_GATE = 4.0
_CHUNK = 1 << 18


@dataclass(frozen=True)
class SimResult:
    trials: int
    per_block_alive_counts: Tuple[int, ...]
    empirical_expected_log_volume: float
    confidence_half_widths: Tuple[float, ...]
    seed: int

    @property
    def alive_fractions(self):
        return tuple(c / self.trials for c in self.per_block_alive_counts)


def _substreams(seed, n_chunks):
    # chunk i always gets the i-th spawned child, whatever order chunks run in
    children = np.random.SeedSequence(int(seed)).spawn(n_chunks)
    return [np.random.Generator(np.random.Philox(c)) for c in children]


def simulate_schedule(schedule, params, trials, seed=0, z=Z_GATE):
    """Draw the damage of every block's ones and count how often each block
    finishes with cumulative damage at most S.

    Only the number of damaging events matters, so each block contributes
    one Binomial(h, gamma) draw per trial.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    hs = np.array([b.h for b in schedule.blocks], dtype=np.int64)
    counts = np.zeros(hs.size, dtype=np.int64)
    n_chunks = max(1, -(-trials // _CHUNK))
    for i, rng in enumerate(_substreams(seed, n_chunks)):
        size = min(_CHUNK, trials - i * _CHUNK)
        if hs.size == 0:
            break
        dmg = rng.binomial(hs[None, :], params.gamma, size=(size, hs.size))
        alive = np.cumsum(dmg, axis=1) <= params.s_threshold
        counts += alive.sum(axis=0)
    fr = counts / trials
    vol = math.fsum(float(f) * b.log_m for f, b in zip(fr, schedule.blocks))
    half = tuple(float(z * math.sqrt(p * (1.0 - p) / trials)) for p in fr)
    return SimResult(trials, tuple(int(c) for c in counts), vol, half, int(seed))


def check_against_exact(result, schedule, params, z=Z_GATE):
    """Per-block flags: is the exact alive probability within ``z`` binomial
    standard deviations (computed at the exact value) of the empirical one."""
    out = []
    cum = 0
    for c, b in zip(result.per_block_alive_counts, schedule.blocks):
        cum += b.h
        p = binom_cdf(params.s_threshold, cum, params.gamma)
        sd = math.sqrt(p * (1.0 - p) / result.trials)
        emp = c / result.trials
        out.append(abs(emp - p) <= z * sd + 1e-15)
    return out


def feedback_identity(w1, w2, params):
    """Alive probability after two blocks computed by conditioning on the
    damage of the first block, and directly. Returns (lhs, rhs)."""
    if w1 < 0 or w2 < 0:
        raise ValueError("weights must be non-negative")
    s, g = params.s_threshold, params.gamma
    lhs = math.fsum(binom_pmf(d, w1, g) * binom_cdf(s - d, w2, g)
                    for d in range(0, min(s, w1) + 1))
    return lhs, binom_cdf(s, w1 + w2, g)


def feedback_sweep(w_max, s_values, gammas, tol=1e-12):
    """Largest |lhs - rhs| over the grid and the list of failing points."""
    from .prob_core import DamageParams
    worst, bad = 0.0, []
    for g in gammas:
        for s in s_values:
            p = DamageParams(g, s)
            for w1 in range(w_max + 1):
                for w2 in range(w_max + 1):
                    lhs, rhs = feedback_identity(w1, w2, p)
                    d = abs(lhs - rhs)
                    worst = max(worst, d)
                    if d > tol:
                        bad.append((w1, w2, s, g, d))
    return worst, bad
