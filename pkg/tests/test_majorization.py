import itertools
import math

import numpy as np
import pytest

from wearout import kernels
from wearout.majorization import (InfeasibleError, KaramataPreconditionError, inv_codebook_size,
                                  karamata_check, lcrc_max_exact, lcrc_max_relaxed,
                                  majorizes, majorizing_sequence)
from wearout.oracles import lcrc_brute
from wearout.prob_core import DamageParams, be_constant, f_be, f_n, w_be


def test_majorizing_sequence_examples():
    np.testing.assert_allclose(majorizing_sequence(4, 0, 4, 2.5), [4, 4, 2, 0])
    np.testing.assert_allclose(majorizing_sequence(3, 0, 3, 3), [3, 3, 3])
    np.testing.assert_allclose(majorizing_sequence(5, 0, 3, 1.4), [3, 3, 1, 0, 0])


def test_majorizing_sequence_majorizes_random_tuples():
    rng = np.random.default_rng(11)
    top = majorizing_sequence(5, 0, 3, 1.4)
    assert abs(top.sum() - 7.0) < 1e-9
    n = 0
    while n < 200:
        x = np.sort(rng.uniform(0, 3, 5))[::-1]
        x *= 7.0 / x.sum()
        if x.max() > 3:
            continue
        assert majorizes(top, x)
        n += 1


def test_majorizing_sequence_domain():
    with pytest.raises(ValueError):
        majorizing_sequence(3, 1, 2, 2.5)
    with pytest.raises(ValueError):
        majorizing_sequence(3, 2, 2, 2)


def test_karamata_examples():
    sq = lambda x: x * x          # noqa: E731
    assert karamata_check([3, 0], [2, 1], sq)
    assert karamata_check([2, 2], [2, 2], sq)
    assert karamata_check([4, 4, 2, 0], [3, 3, 2, 2], math.exp)
    with pytest.raises(KaramataPreconditionError):
        karamata_check([1, 2], [2, 1], sq)            # not ordered
    with pytest.raises(KaramataPreconditionError):
        karamata_check([3, 1], [2, 1], sq)            # unequal sums
    with pytest.raises(KaramataPreconditionError):
        karamata_check([2, 2, 0], [3, 1, 0], sq)      # prefix dominance fails


def test_lcrc_exact_small_case():
    # m = 1: the single point sits at x*
    p = DamageParams(0.5, 2)
    f = lambda w: f_n(w, p)       # noqa: E731
    sol = lcrc_max_exact(f, 1, 3.0, 0, 6)
    assert sol.j_count == 0 and sol.k_weight >= 2
    assert sol.objective >= f(3.0) - 1e-12


def test_lcrc_exact_all_at_b():
    f = lambda w: np.exp(-np.asarray(w, float))   # noqa: E731
    sol = lcrc_max_exact(f, 3, 4.0, 0, 4)
    assert sol.objective >= 3 * math.exp(-4) - 1e-12


def test_lcrc_exact_infeasible():
    with pytest.raises(ValueError):
        lcrc_max_exact(lambda w: w, 0, 1.0, 0, 3)
    with pytest.raises(ValueError):
        lcrc_max_exact(lambda w: w, 2, 1.0, 3, 3)
    # mean above b cannot be met by any (j, k)
    with pytest.raises(InfeasibleError):
        lcrc_max_exact(lambda w: np.asarray(w, float) * 0, 2, 9.0, 0, 3)


@pytest.mark.parametrize("s,g", [(2, 0.5), (5, 0.3)])
def test_lcrc_exact_dominates_brute_force(s, g):
    p = DamageParams(g, s)
    for f in (lambda w: f_n(w, p), lambda w: f_be(w, g)):
        for m in range(1, 6):
            for b in range(1, 7):
                for total in range(0, m * b + 1):
                    ex = lcrc_max_exact(f, m, total / m, 0, b).objective
                    assert ex >= lcrc_brute(f, m, total, b) - 1e-9


def test_inv_codebook_size():
    assert inv_codebook_size(0.0) == 1.0
    assert inv_codebook_size(0.99) == 1.0
    assert inv_codebook_size(2.0) == 0.25
    assert inv_codebook_size(1.6) == 1.0 / 3.0
    assert inv_codebook_size(100.0) == 2.0 ** -100
    with pytest.raises(ValueError):
        inv_codebook_size(-1.0)


def test_relaxed_dominates_exact_per_codeword():
    rng = np.random.default_rng(5)
    count = 0
    while count < 100:
        s = int(rng.integers(1, 8))
        g = float(rng.choice([0.2, 0.5, 0.8]))
        p = DamageParams(g, s)
        M = int(rng.integers(1, 40))
        log_m = math.log2(M) + 1e-12
        b = int(rng.integers(2, 30))
        x = float(rng.uniform(0, b))
        for f in (lambda w: f_n(w, p), lambda w: f_be(w, g)):
            try:
                ex = lcrc_max_exact(f, M, x, 0, b).objective
            except ValueError:
                continue
            rel = lcrc_max_relaxed(f, log_m, x, 0, b).objective
            assert rel >= ex / M - 1e-9
        count += 1


def test_relaxed_kernel_matches_phi_search():
    """The DP's chord-form table and the phi-grid search give the same value."""
    g, s = 0.5, 5
    p = DamageParams(g, s)
    c0, wb = be_constant(g), w_be(g)
    dz = 1.0 / 16.0
    zg = np.arange(0, 200 * 16 + 2) * dz
    for kind, f, fz in ((0, lambda w: f_n(w, p), f_n(zg, p)), (1, lambda w: f_be(w, g), f_be(zg, g))):
        for log_m in (3.0, 8.0, 20.0):
            for b in (10, 60, 150):
                for x in (0.5, 3.0, 7.0, 9.5):
                    ref = lcrc_max_relaxed(f, log_m, x, 0, b, grid_size=20001).objective
                    got = kernels.relaxed_point_nb(x, float(b), inv_codebook_size(log_m), kind,
                                                   float(s), g, c0, wb, fz, dz, 60)
                    assert got >= ref - 1e-7
                    assert got <= ref + 1e-4


def test_exact_kernel_matches_reference():
    g, s = 0.5, 2
    p = DamageParams(g, s)
    c0, wb = be_constant(g), w_be(g)
    fint = f_n(np.arange(0, 9, dtype=float), p)
    for M in (1, 2, 3, 5):
        for N in range(1, 9):
            for W in range(0, N + 1):
                ref = lcrc_max_exact(lambda w: f_n(w, p), M, float(W), 0, N).objective / M
                got = kernels.exact_point_nb(float(W), N, M, 0, float(s), g, c0, wb, fint)
                assert got == pytest.approx(ref, abs=1e-12)
