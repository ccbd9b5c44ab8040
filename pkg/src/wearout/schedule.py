"""Block schedules and their expected log-volume."""

import math
from dataclasses import dataclass, field
from typing import List, Tuple

from .prob_core import binom_cdf


class ScheduleError(ValueError):
    pass


@dataclass(frozen=True)
class BlockPlan:
    n: int
    h: int
    log_m: float
    alive_prob: float = math.nan


@dataclass(frozen=True)
class Schedule:
    """Blocks in transmission order (first block first).

    For converse schedules ``h`` is the quantized weight increment of the
    block and ``alive_prob`` the bound used by the converse DP.
    """

    blocks: Tuple[BlockPlan, ...] = ()
    expected_log_volume: float = 0.0
    kind: str = "ccc"
    meta: dict = field(default_factory=dict, compare=False)

    @property
    def total_n(self):
        return sum(b.n for b in self.blocks)

    @property
    def total_h(self):
        return sum(b.h for b in self.blocks)

    @property
    def num_blocks(self):
        return len(self.blocks)

    def pairs(self) -> List[Tuple[int, int]]:
        return [(b.n, b.h) for b in self.blocks]

    def schedule_string(self):
        return ";".join(f"{b.n}:{b.h}" for b in self.blocks)


def check_schedule(schedule):
    for b in schedule.blocks:
        if b.n < 1 or b.h < 0 or b.h > b.n:
            raise ScheduleError(f"invalid block (n={b.n}, h={b.h})")
        if not b.log_m >= 0.0:
            raise ScheduleError(f"negative or NaN log size in block {b}")


def evaluate_schedule(schedule, params):
    """sum_j binom_cdf(S, weight sent through block j, gamma) * log_m_j."""
    check_schedule(schedule)
    terms = []
    cum = 0
    for b in schedule.blocks:
        cum += b.h
        terms.append(binom_cdf(params.s_threshold, cum, params.gamma) * b.log_m)
    return math.fsum(terms)


def evaluate_pairs(pairs, log_m_fn, params):
    """Same objective for bare (n, h) pairs, with ``log_m_fn(n, h)``."""
    blocks = tuple(BlockPlan(n, h, log_m_fn(n, h)) for n, h in pairs)
    return evaluate_schedule(Schedule(blocks), params)


def monotonicity_report(schedule):
    """Whether block lengths and weights are non-increasing along the schedule."""
    ns = [b.n for b in schedule.blocks]
    hs = [b.h for b in schedule.blocks]
    return {
        "lengths_non_increasing": all(x >= y for x, y in zip(ns, ns[1:])),
        "weights_non_increasing": all(x >= y for x, y in zip(hs, hs[1:])),
        "lengths": ns,
        "weights": hs,
    }
