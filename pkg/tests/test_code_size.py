import math

import numpy as np
import pytest

from wearout.code_size import (AliveChannel, InputType, bsc_mutual_information, capacity_cost,
                               cond_info_variance, dispersion_cost, h2, log_m_avg,
                               log_m_avg_table, log_m_ccc, log_m_ccc_table, mutual_information)

import oracle_values as ov


def test_channel_validation():
    with pytest.raises(ValueError):
        AliveChannel(np.array([[0.5, 0.6], [0.5, 0.5]]))
    with pytest.raises(ValueError):
        AliveChannel(np.array([[1.0, 0.0]]))
    with pytest.raises(ValueError):
        AliveChannel.bsc(0.0)
    ch = AliveChannel.bsc(0.2)
    assert ch.is_bsc and ch.p_a.shape == (2, 3)
    with pytest.raises(ValueError):
        ch.p_a[0, 0] = 0.3


def test_input_type():
    assert InputType(10, 3).p_one == 0.3
    with pytest.raises(ValueError):
        InputType(3, 4)


def test_mutual_information_examples(bsc):
    assert mutual_information(0.0, bsc) == 0.0
    assert mutual_information(0.5, bsc) == pytest.approx(ov.CAP_011, abs=1e-12)
    assert mutual_information(0.5, AliveChannel.bsc(0.5)) == pytest.approx(0.0, abs=1e-15)
    assert mutual_information(0.2, bsc) == pytest.approx(ov.I_02_011, abs=1e-12)


def test_mutual_information_generic_matches_closed_form():
    ps = np.linspace(0, 1, 1001)
    for e in (0.05, 0.11, 0.3):
        ch = AliveChannel.bsc(e)
        assert np.max(np.abs(mutual_information(ps, ch) - bsc_mutual_information(ps, e))) <= 1e-10


def test_mutual_information_symmetric_and_peaked(bsc):
    ps = np.round(np.arange(0, 1.0005, 0.001), 3)
    mi = mutual_information(ps, bsc)
    np.testing.assert_allclose(mi, mi[::-1], atol=1e-12)
    assert ps[np.argmax(mi)] == 0.5


def test_cond_info_variance_examples(bsc):
    assert cond_info_variance(0.0, bsc) == 0.0
    assert cond_info_variance(0.5, AliveChannel.bsc(0.5)) == pytest.approx(0.0, abs=1e-15)
    assert cond_info_variance(0.5, bsc) == pytest.approx(ov.RHO_HALF_011, abs=1e-12)
    assert cond_info_variance(0.2, bsc) == pytest.approx(ov.V_02_011, abs=1e-12)
    assert cond_info_variance(0.03, bsc) == pytest.approx(ov.V_003_011, abs=1e-12)


def test_domain_errors(bsc):
    with pytest.raises(ValueError):
        mutual_information(1.2, bsc)
    with pytest.raises(ValueError):
        cond_info_variance(-0.1, bsc)
    with pytest.raises(ValueError):
        capacity_cost(1.5, bsc)
    with pytest.raises(ValueError):
        log_m_ccc(10, 11, 1e-3, bsc)


def test_capacity_cost(bsc):
    assert capacity_cost(0.0, bsc) == 0.0
    assert capacity_cost(0.5, bsc) == pytest.approx(ov.CAP_011, abs=1e-12)
    assert capacity_cost(0.7, bsc) == capacity_cost(0.5, bsc)
    betas = np.linspace(0, 1, 101)
    assert np.all(np.diff([capacity_cost(b, bsc) for b in betas]) >= -1e-15)


def test_dispersion_cost(bsc):
    assert dispersion_cost(0.0, bsc) == 0.0
    assert dispersion_cost(0.7, bsc) == cond_info_variance(0.5, bsc)
    assert dispersion_cost(0.2, bsc) == pytest.approx(cond_info_variance(0.2, bsc), abs=1e-15)
    # grid search confirms the constrained optimum sits at the boundary
    grid = np.linspace(0, 0.2, 2001)
    assert grid[np.argmax(mutual_information(grid, bsc))] == pytest.approx(0.2)


def test_generic_capacity_cost_on_asymmetric_channel():
    z = AliveChannel(np.array([[1.0, 0.0], [0.3, 0.7]]))      # Z channel
    grid = np.linspace(0, 1, 200001)
    best = float(np.max(mutual_information(grid, z)))
    assert capacity_cost(1.0, z) == pytest.approx(best, abs=1e-9)
    assert capacity_cost(0.1, z) == pytest.approx(mutual_information(0.1, z), abs=1e-9)


def test_log_m_ccc_examples(bsc):
    n = 64
    assert log_m_ccc(n, 0, 1e-3, bsc, third_order=-0.5 * math.log2(n)) == 0.0
    assert log_m_ccc(n, 0, 1e-3, bsc) == 0.0
    assert log_m_ccc(200, 100, 1e-3, bsc) == pytest.approx(ov.LOG_M_CCC_200_100, abs=1e-9)
    assert log_m_ccc(200, 100, 1e-3, bsc) >= log_m_ccc(200, 10, 1e-3, bsc)
    assert log_m_ccc(1, 1, 1e-3, bsc) == 0.0


def test_log_m_ccc_table_matches_scalar(bsc):
    T = log_m_ccc_table(60, 30, 1e-3, bsc, third_order=1.5)
    for n in range(1, 61):
        for h in range(0, 31):
            if h > n:
                assert T[n, h] == -np.inf
            else:
                assert T[n, h] == pytest.approx(log_m_ccc(n, h, 1e-3, bsc, 1.5), abs=1e-11)


def test_log_m_avg_examples(bsc):
    assert log_m_avg(200, 0, 1e-3, bsc) >= 0.0
    assert log_m_avg(200, 100, 1e-3, bsc) == pytest.approx(ov.LOG_M_CCC_200_100, abs=1e-9)
    assert log_m_avg(200, 90, 1e-3, bsc) <= log_m_avg(200, 100, 1e-3, bsc)
    assert log_m_avg(200, 150, 1e-3, bsc) == log_m_avg(200, 100, 1e-3, bsc)


def test_log_m_avg_monotone_in_budget(bsc):
    for n in (5, 30, 120):
        vals = [log_m_avg(n, w, 1e-3, bsc) for w in np.arange(0, n + 0.01, 0.5)]
        assert np.all(np.diff(vals) >= 0)


def test_log_m_avg_table_matches_scalar(bsc):
    A = log_m_avg_table(40, 20, 1e-3, bsc)
    for n in range(1, 41):
        for k in range(0, 21):
            assert A[n, k] == pytest.approx(log_m_avg(n, k + 1, 1e-3, bsc), abs=1e-11)


def test_zero_information_gives_zero(bsc):
    useless = AliveChannel.bsc(0.5)
    for n in (1, 10, 100):
        assert log_m_ccc(n, n // 2, 0.1, useless) == 0.0
        assert log_m_avg(n, n / 2, 0.1, useless) == 0.0


def test_h2():
    assert h2(0.0) == 0.0 and h2(1.0) == 0.0 and h2(0.5) == 1.0
