import pytest

from wearout.code_size import AliveChannel
from wearout.prob_core import DamageParams

DEFAULT_EPS, DEFAULT_GAMMA, DEFAULT_S, DEFAULT_ETA, DEFAULT_N = 0.11, 0.5, 5, 1e-3, 400


@pytest.fixture(scope="session")
def bsc():
    return AliveChannel.bsc(DEFAULT_EPS)


@pytest.fixture(scope="session")
def default_params():
    return DamageParams(DEFAULT_GAMMA, DEFAULT_S)


@pytest.fixture(scope="session")
def default_curves(bsc, default_params):
    """Full-scale runs shared by the curve-shape test."""
    import time

    from wearout.dp_achievability import solve_achievability, solve_single_block
    from wearout.dp_converse import solve_converse
    t0 = time.perf_counter()
    ach, atab = solve_achievability(DEFAULT_N, DEFAULT_ETA, bsc, default_params, prune_tol=1e-12)
    single, _ = solve_single_block(DEFAULT_N, DEFAULT_ETA, bsc, default_params)
    conv, ctab = solve_converse(DEFAULT_N, DEFAULT_ETA, bsc, default_params, prune_tol=1e-12)
    return {"ach": ach, "atab": atab, "single": single, "conv": conv, "ctab": ctab,
            "seconds": time.perf_counter() - t0}


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(results, key=lambda k: (int(k.rstrip("abcd")), k)):
        ok, detail = results[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'}  {detail}")
