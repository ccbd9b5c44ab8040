"""Majorization tools and the bounded LCRC maximization.

The bound here controls sums ``sum_i f(x_i)`` over tuples ``x`` in
``[a, b]^m`` with a fixed mean, for ``f`` non-increasing and
left-concave/right-convex. The maximizing shape puts ``j`` points at
``b``, one point at ``k`` and the rest at a common value ``z``.
"""

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

_CHUNK = 1 << 20


class KaramataPreconditionError(ValueError):
    """Raised when the inputs of :func:`karamata_check` are not a majorizing pair."""


class InfeasibleError(ValueError):
    pass


@dataclass(frozen=True)
class LcrcSolution:
    j_count: float          # integer j (exact) or fraction phi = j/M (relaxed)
    k_weight: Optional[int]  # None in relaxed mode
    z: float
    objective: float        # exact: the sum; relaxed: per-codeword value
    per_codeword: float
    mode: str


def majorizing_sequence(m, c, b, x_star):
    """The tuple in ``[c, b]^m`` with mean ``x_star`` that majorizes every
    other such tuple: ``j`` copies of ``b``, one remainder, then ``c``."""
    if not c < b:
        raise ValueError("need c < b")
    if not c - 1e-12 <= x_star <= b + 1e-12:
        raise ValueError(f"x_star={x_star} outside [{c}, {b}]")
    total = m * x_star
    j = int(math.floor(m * (x_star - c) / (b - c) + 1e-12))
    if j >= m:
        return np.full(m, float(b))
    r = total - j * b - (m - j - 1) * c
    out = np.full(m, float(c))
    out[:j] = b
    out[j] = min(max(r, c), b)
    return out


def majorizes(a_seq, b_seq, tol=1e-9):
    """True if sorted-descending ``a_seq`` majorizes ``b_seq`` (equal sums)."""
    a = np.sort(np.asarray(a_seq, dtype=float))[::-1]
    b = np.sort(np.asarray(b_seq, dtype=float))[::-1]
    if a.shape != b.shape or abs(a.sum() - b.sum()) > tol:
        return False
    return bool(np.all(np.cumsum(a)[:-1] >= np.cumsum(b)[:-1] - tol))


def karamata_check(a_seq, b_seq, f, tol=1e-9):
    """Check ``sum f(a) >= sum f(b)`` for a majorizing pair and convex ``f``.

    Raises :class:`KaramataPreconditionError` if the pair is not ordered,
    has unequal sums or prefix dominance fails; returns the inequality
    outcome otherwise.
    """
    a = np.asarray(a_seq, dtype=float)
    b = np.asarray(b_seq, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise KaramataPreconditionError("sequences must be 1-D and of equal length")
    if np.any(np.diff(a) > tol) or np.any(np.diff(b) > tol):
        raise KaramataPreconditionError("sequences must be non-increasing")
    if abs(a.sum() - b.sum()) > tol:
        raise KaramataPreconditionError("sequences must have equal sums")
    if np.any(np.cumsum(a) < np.cumsum(b) - tol):
        raise KaramataPreconditionError("prefix sums of a_seq must dominate those of b_seq")
    lhs = math.fsum(float(f(x)) for x in a)
    rhs = math.fsum(float(f(x)) for x in b)
    return lhs >= rhs - tol


def lcrc_max_exact(f: Callable, m: int, x_star: float, a: int, b: float) -> LcrcSolution:
    """Maximize ``j f(b) + f(k) + (m-j-1) f(z)`` over the integer set.

    ``z = max((m x* - j b - k - 1) / (m - j - 1), a)`` and a pair (j, k) is
    admissible when ``k + 1 >= z``. When ``m - j - 1 == 0`` the third group
    is empty and admissibility becomes ``k + 1 >= m x* - j b``.
    ``f`` must accept numpy arrays. Ties go to the smallest j, then k.
    """
    m = int(m)
    a = int(a)
    if m < 1:
        raise ValueError("m must be positive")
    if not a < b:
        raise ValueError("need a < b")
    ks = np.arange(a, int(math.floor(b)) + 1, dtype=float)
    fk = np.asarray(f(ks), dtype=float)
    fb = float(f(float(b)))
    total = m * x_star
    rows = max(1, _CHUNK // ks.size)

    best_val, best_j, best_k, best_z = -math.inf, -1, -1, math.nan
    for j0 in range(0, m, rows):
        js = np.arange(j0, min(m, j0 + rows), dtype=float)[:, None]
        rest = m - js - 1.0
        num = total - js * b - ks[None, :] - 1.0
        with np.errstate(divide="ignore", invalid="ignore"):
            z = np.where(rest > 0, np.maximum(num / np.where(rest > 0, rest, 1.0), a), math.nan)
        feas = np.where(rest > 0, ks[None, :] + 1.0 >= z, ks[None, :] + 1.0 >= total - js * b)
        if not feas.any():
            continue
        fz = np.where(rest > 0, np.asarray(f(np.where(rest > 0, z, a)), dtype=float), 0.0)
        obj = js * fb + fk[None, :] + rest * fz
        obj = np.where(feas, obj, -math.inf)
        idx = int(np.argmax(obj))
        v = float(obj.flat[idx])
        if v > best_val:
            r, c = divmod(idx, ks.size)
            best_val, best_j, best_k = v, int(js[r, 0]), int(ks[c])
            best_z = float(z[r, c]) if rest[r, 0] > 0 else math.nan
    if best_j < 0:
        raise InfeasibleError("admissible (j, k) set is empty")
    return LcrcSolution(best_j, best_k, best_z, best_val, best_val / m, "exact")


def inv_codebook_size(log_m):
    """1/M for M = floor(2**log_m); plain 2**-log_m once M is beyond float integers."""
    if log_m < 0:
        raise ValueError("log_m must be non-negative")
    if log_m < 60:
        return 1.0 / max(1.0, math.floor(2.0 ** log_m))
    return 2.0 ** (-log_m)


_GOLD = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_max(g, lo, hi, iters):
    x1 = hi - _GOLD * (hi - lo)
    x2 = lo + _GOLD * (hi - lo)
    g1, g2 = g(x1), g(x2)
    best_x, best_v = (x1, g1) if g1 >= g2 else (x2, g2)
    for _ in range(iters):
        if g1 >= g2:
            hi, x2, g2 = x2, x1, g1
            x1 = hi - _GOLD * (hi - lo)
            g1 = g(x1)
        else:
            lo, x1, g1 = x1, x2, g2
            x2 = lo + _GOLD * (hi - lo)
            g2 = g(x2)
        for x, v in ((x1, g1), (x2, g2)):
            if v > best_v:
                best_x, best_v = x, v
    return best_x, best_v


def lcrc_max_relaxed(f: Callable, log_m: float, x_star: float, a: int, b: float,
                     grid_size: int = 4096, refine_iters: int = 40) -> LcrcSolution:
    """Per-codeword continuous relaxation of :func:`lcrc_max_exact` for
    codebooks too large to enumerate (``M = 2**log_m``).

    Maximizes ``phi f(b) + (1 - phi) f(z(phi)) + f(a)/M`` over
    ``phi in [0, min(1, x*/b)]`` with
    ``z(phi) = max((x* - phi b - (b + 1)/M) / (1 - phi), a)``. Every
    admissible integer pair of the exact problem maps into this family with
    a larger value, so the result bounds ``exact / M`` from above. Assumes
    ``f >= 0`` and non-increasing.
    """
    if grid_size < 2:
        raise ValueError("grid_size too small")
    inv_m = inv_codebook_size(log_m)
    fa = float(f(float(a)))
    fb = float(f(float(b)))
    shift = (b + 1.0) * inv_m
    phi_max = min(1.0, x_star / b) if b > 0 else 0.0
    phi_max = max(phi_max, 0.0)

    def zlow(phi):
        den = 1.0 - phi
        if den <= 0.0:
            return float(a)
        return max((x_star - phi * b - shift) / den, float(a))

    def value(phi):
        return phi * fb + (1.0 - phi) * float(f(zlow(phi)))

    phis = np.linspace(0.0, phi_max, grid_size)
    den = 1.0 - phis
    with np.errstate(divide="ignore", invalid="ignore"):
        z = np.where(den > 0, np.maximum((x_star - phis * b - shift) / np.where(den > 0, den, 1.0), a), a)
    vals = phis * fb + den * np.asarray(f(z), dtype=float)
    i = int(np.argmax(vals))
    best_phi, best_v = float(phis[i]), float(vals[i])
    if refine_iters > 0 and phi_max > 0:
        lo = float(phis[max(i - 1, 0)])
        hi = float(phis[min(i + 1, grid_size - 1)])
        if hi > lo:
            p, v = _golden_max(value, lo, hi, refine_iters)
            if v > best_v:
                best_phi, best_v = p, v
    total = best_v + fa * inv_m
    return LcrcSolution(best_phi, None, zlow(best_phi), total, total, "relaxed")
