"""Desk-scale property and oracle suite behind ``wearout selftest``."""

import math
import time

import numpy as np

from . import oracles
from .code_size import AliveChannel, bsc_mutual_information, mutual_information
from .dp_achievability import solve_achievability
from .dp_converse import alive_upper, solve_converse
from .majorization import lcrc_max_exact
from .prob_core import DamageParams, binom_cdf_table, f_be, f_n, q_func, q_inv
from .simulator import feedback_sweep


def check_envelope(be_scale=1.0, w_max=1000):
    """Binomial CDF under the Gaussian + Berry-Esseen envelope on a grid."""
    w = np.arange(0, w_max + 1, dtype=float)
    bad = 0
    for g in (0.1, 0.3, 0.5, 0.7, 0.9):
        for s in (1, 5, 20):
            p = DamageParams(g, s)
            env = f_n(w, p) + f_be(w, g, scale=be_scale)
            bad += int(np.sum(binom_cdf_table(s, w_max, g) > env))
    return bad == 0, f"{bad} violations"


def check_q_inv():
    xs = np.linspace(-6, 6, 121)
    err = max(abs(q_inv(q_func(x)) - x) for x in xs)
    return err < 1e-8, f"max round-trip error {err:.2e}"


def check_mutual_information():
    ps = np.linspace(0, 1, 101)
    err = 0.0
    for e in (0.05, 0.11, 0.3):
        ch = AliveChannel.bsc(e)
        err = max(err, float(np.max(np.abs(mutual_information(ps, ch) - bsc_mutual_information(ps, e)))))
    return err < 1e-10, f"max |generic - closed form| {err:.2e}"


def check_lcrc(m_max=4, b_max=5):
    bad = 0
    for s, g in ((2, 0.5), (1, 0.3)):
        p = DamageParams(g, s)
        for fn in (lambda w: f_n(w, p), lambda w: f_be(w, g)):
            for m in range(1, m_max + 1):
                for b in range(1, b_max + 1):
                    for total in range(0, m * b + 1):
                        ex = lcrc_max_exact(fn, m, total / m, 0, b).objective
                        if ex < oracles.lcrc_brute(fn, m, total, b) - 1e-9:
                            bad += 1
    return bad == 0, f"{bad} violations"


def check_alive_upper(m_max=3, n_max=5):
    bad = 0
    for s, g in ((1, 0.5), (2, 0.3)):
        p = DamageParams(g, s)
        for m in range(1, m_max + 1):
            for N in range(1, n_max + 1):
                for ws in oracles.weight_tuples(m, N):
                    ub = alive_upper(math.log2(m), N, sum(ws) / m, p)
                    if ub < oracles.average_alive(ws, p) - 1e-12 or ub > 1.0:
                        bad += 1
    return bad == 0, f"{bad} violations"


def check_dp_oracles(n_ach=8, n_conv=6):
    ch = AliveChannel.bsc(0.11)
    p = DamageParams(0.5, 2)
    worst = 0.0
    for eta, t3 in ((1e-3, 0.0), (0.3, 0.0), (1e-3, 3.0)):
        c, _ = solve_achievability(n_ach, eta, ch, p, third_order=t3)
        for N in range(1, n_ach + 1):
            worst = max(worst, abs(c[N] - oracles.achievability_brute(N, eta, ch, p, t3)))
    c, _ = solve_converse(n_conv, 0.3, ch, p, prune_tol=0.0, exact_combos=10 ** 6)
    fn = lambda lm, N, W: alive_upper(lm, N, W, p)      # noqa: E731
    for N in range(1, n_conv + 1):
        worst = max(worst, abs(c[N] - oracles.converse_brute(N, 0.3, ch, p, fn)))
    return worst <= 1e-9, f"max |dp - brute| {worst:.2e}"


def check_feedback(w_max=20):
    worst, bad = feedback_sweep(w_max, range(0, 11), (0.1, 0.5, 0.9))
    return not bad, f"max |lhs - rhs| {worst:.2e}"


def run(be_scale=1.0, budget_s=120.0, log=print):
    """Run every check; returns True when all pass within the time budget."""
    checks = [
        ("envelope", lambda: check_envelope(be_scale)),
        ("q_inv", check_q_inv),
        ("mutual_information", check_mutual_information),
        ("lcrc_exact", check_lcrc),
        ("alive_upper", check_alive_upper),
        ("dp_oracles", check_dp_oracles),
        ("feedback", check_feedback),
    ]
    t0 = time.perf_counter()
    ok_all = True
    for name, fn in checks:
        ok, detail = fn()
        ok_all &= ok
        log(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
    elapsed = time.perf_counter() - t0
    in_budget = elapsed <= budget_s
    log(f"{'PASS' if in_budget else 'FAIL'} runtime: {elapsed:.1f}s (budget {budget_s:.0f}s)")
    return ok_all and in_budget
