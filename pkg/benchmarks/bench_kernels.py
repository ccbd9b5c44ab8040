"""Time the numba and numpy versions of each hot kernel on the same inputs
and check that they agree.

    python benchmarks/bench_kernels.py [--n-max 120] [--repeat 3]
"""

import argparse
import math
import time

import numpy as np

from wearout import kernels
from wearout.code_size import AliveChannel, log_m_avg_table, log_m_ccc_table
from wearout.dp_converse import build_converse_tables
from wearout.prob_core import DamageParams, alive_cap, be_constant, binom_cdf_table, f_be, f_n, w_be


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return min(times), out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n-max", type=int, default=120)
    ap.add_argument("--repeat", type=int, default=3)
    a = ap.parse_args()

    ch = AliveChannel.bsc(0.11)
    p = DamageParams(0.5, 5)
    n = a.n_max
    cap = alive_cap(p, 1e-12, n)
    L = log_m_ccc_table(n, cap, 1e-3, ch)
    B = binom_cdf_table(5, cap, 0.5)
    t = build_converse_tables(n, 1e-3, ch, p)
    s, g, c0, wb = 5.0, 0.5, be_constant(0.5), w_be(0.5)
    dz = 1.0 / 16.0
    zg = np.arange(0, int(math.ceil(cap / dz)) + 2) * dz
    fz_n, fz_be = f_n(zg, p), f_be(zg, g)
    inv_ms = 2.0 ** -np.arange(0, 17, 4, dtype=float)
    fint = np.arange(n + 1, dtype=float)

    cases = {
        "achievability_fill": lambda k: k(L, B, n, cap),
        "converse_fill": lambda k: k(t.log_m, t.Mf, t.eidx, t.bidx, t.p_exact, t.p_relax,
                                     1024.0, n, cap),
        "relaxed_table": lambda k: k(inv_ms, n, cap, s, g, c0, wb, fz_n, fz_be, dz, 40),
        "exact_table": lambda k: k(t.Ms[:8], min(n, 100), cap, 1024.0, s, g, c0, wb,
                                   f_n(fint, p), f_be(fint, g)),
    }
    print(f"n_max={n} weight cap={cap} repeat={a.repeat}")
    print(f"{'kernel':20s} {'numba s':>10s} {'numpy s':>10s} {'speedup':>8s} {'max |diff|':>11s}")
    for name, call in cases.items():
        nb = getattr(kernels, name + "_nb")
        npk = getattr(kernels, name + "_np")
        call(nb)                                   # compile outside the timing
        t_nb, out_nb = best_of(lambda: call(nb), a.repeat)
        t_np, out_np = best_of(lambda: call(npk), a.repeat)
        first_nb = out_nb[0] if isinstance(out_nb, tuple) else out_nb
        first_np = out_np[0] if isinstance(out_np, tuple) else out_np
        both = np.isfinite(first_nb) & np.isfinite(first_np)
        diff = float(np.max(np.abs(first_nb[both] - first_np[both]))) if both.any() else 0.0
        same_mask = bool(np.array_equal(np.isfinite(first_nb), np.isfinite(first_np)))
        print(f"{name:20s} {t_nb:10.4f} {t_np:10.4f} {t_np / max(t_nb, 1e-9):8.1f} "
              f"{diff:11.2e}{'' if same_mask else '  (finite masks differ)'}")


if __name__ == "__main__":
    main()
