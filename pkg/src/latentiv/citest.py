"""Conditional independence tests and the special functions behind them.

Two test families are provided:

- an exact t-test on the Pearson partial correlation, for continuous data
  with one conditioning variable (``ci_test_cor``), and
- an asymptotic conditional-mutual-information G-test on contingency
  counts, for categorical data (``ci_test_mi``).

The Student-t and chi-square tail probabilities are computed from scratch
via the regularized incomplete beta and gamma functions (continued
fractions / series, absolute error target 1e-10), so results do not depend
on an external statistics library.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import Config, DegenerateData, NearSingular, NonFinite, TestKind

__all__ = [
    "CiResult",
    "partial_correlation",
    "ci_test_cor",
    "conditional_mutual_information",
    "ci_test_mi",
    "student_t_two_sided_p",
    "chi_square_sf",
    "discretize_for_mi",
]

_NEAR_SINGULAR_TOL = 1e-12
_MAXIT = 500
_EPS = 1e-15
_FPMIN = 1e-300


@dataclass(frozen=True)
class CiResult:
    """Outcome of one conditional independence test."""

    statistic: float
    dof: float
    p_value: float
    test_kind: TestKind


# ---------------------------------------------------------------------------
# Special functions
# ---------------------------------------------------------------------------


def _betacf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta function (Lentz's method)."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _FPMIN:
        d = _FPMIN
    d = 1.0 / d
    h = d
    for m in range(1, _MAXIT + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return h


def _regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    ln_front = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    front = math.exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def _regularized_gamma_p_series(a: float, x: float) -> float:
    """Lower regularized gamma P(a, x) by series; use for x < a + 1."""
    ap = a
    total = 1.0 / a
    delta = total
    for _ in range(1_000_000):
        ap += 1.0
        delta *= x / ap
        total += delta
        if abs(delta) < abs(total) * _EPS:
            break
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))


def _regularized_gamma_q_cf(a: float, x: float) -> float:
    """Upper regularized gamma Q(a, x) by continued fraction; use for x >= a + 1."""
    b = x + 1.0 - a
    c = 1.0 / _FPMIN
    d = 1.0 / b
    h = d
    for i in range(1, 1_000_000):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = b + an / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return math.exp(-x + a * math.log(x) - math.lgamma(a)) * h


def student_t_two_sided_p(t: float, dof: float) -> float:
    """Two-sided tail probability of the Student-t distribution.

    Uses the identity p = I_{dof/(dof+t^2)}(dof/2, 1/2); monotone decreasing
    in |t|, p(0) = 1, p(+/-inf) = 0.
    """
    if dof < 1:
        raise ValueError(f"dof must be >= 1, got {dof}")
    if math.isnan(t):
        raise ValueError("t statistic is NaN")
    if math.isinf(t):
        return 0.0
    x = dof / (dof + t * t)
    p = _regularized_incomplete_beta(0.5 * dof, 0.5, x)
    return min(1.0, max(0.0, p))


def chi_square_sf(g: float, dof: float) -> float:
    """Chi-square survival function via the regularized upper incomplete gamma."""
    if dof <= 0:
        raise ValueError(f"dof must be positive, got {dof}")
    if g < 0:
        raise ValueError(f"statistic must be >= 0, got {g}")
    a = 0.5 * dof
    x = 0.5 * g
    if x == 0.0:
        return 1.0
    if x < a + 1.0:
        q = 1.0 - _regularized_gamma_p_series(a, x)
    else:
        q = _regularized_gamma_q_cf(a, x)
    return min(1.0, max(0.0, q))


# ---------------------------------------------------------------------------
# Partial correlation test (continuous)
# ---------------------------------------------------------------------------


def _checked_vector(v, name: str) -> np.ndarray:
    arr = np.asarray(v, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be a vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NonFinite(f"{name} contains NaN or infinite entries")
    return arr


def _pearson(a: np.ndarray, b: np.ndarray) -> float:
    am = a - a.mean()
    bm = b - b.mean()
    return float((am * bm).sum() / math.sqrt(float((am * am).sum()) * float((bm * bm).sum())))


def partial_correlation(x, y, z) -> float:
    """Pearson correlation of x and y after linearly removing z.

    Computed as (r_xy - r_xz r_yz) / sqrt((1 - r_xz^2)(1 - r_yz^2)) and
    clamped to [-1, 1]. Raises ``DegenerateData`` on constant inputs and
    ``NearSingular`` when z is (numerically) collinear with x or y.
    """
    ax, ay, az = _checked_vector(x, "x"), _checked_vector(y, "y"), _checked_vector(z, "z")
    n = len(ax)
    if not (len(ay) == n and len(az) == n):
        raise ValueError("x, y, z must have equal lengths")
    if n < 4:
        raise ValueError(f"need at least 4 samples, got {n}")
    for arr, name in ((ax, "x"), (ay, "y"), (az, "z")):
        if np.all(arr == arr[0]):
            raise DegenerateData(f"{name} is constant")

    r_xy = _pearson(ax, ay)
    r_xz = _pearson(ax, az)
    r_yz = _pearson(ay, az)
    denom_x = 1.0 - r_xz * r_xz
    denom_y = 1.0 - r_yz * r_yz
    if denom_x < _NEAR_SINGULAR_TOL or denom_y < _NEAR_SINGULAR_TOL:
        raise NearSingular("conditioning variable is collinear with x or y")
    r = (r_xy - r_xz * r_yz) / math.sqrt(denom_x * denom_y)
    return min(1.0, max(-1.0, r))


def ci_test_cor(x, y, z, cfg: Config | None = None) -> CiResult:
    """Exact t-test of the partial correlation of x and y given z.

    t = r sqrt(dof / (1 - r^2)) with dof = n - 3; two-sided p-value from the
    Student-t distribution. |r| at the degenerate limit 1 yields p = 0.
    The ``cfg`` argument is accepted for interface symmetry with
    ``ci_test_mi`` and is not consulted.
    """
    r = partial_correlation(x, y, z)
    n = len(np.asarray(x))
    dof = float(n - 3)
    if abs(r) >= 1.0 - _NEAR_SINGULAR_TOL:
        return CiResult(
            statistic=math.copysign(math.inf, r),
            dof=dof,
            p_value=0.0,
            test_kind=TestKind.PARTIAL_CORRELATION,
        )
    t = r * math.sqrt(dof / (1.0 - r * r))
    return CiResult(
        statistic=t,
        dof=dof,
        p_value=student_t_two_sided_p(t, dof),
        test_kind=TestKind.PARTIAL_CORRELATION,
    )


# ---------------------------------------------------------------------------
# Conditional mutual information test (categorical)
# ---------------------------------------------------------------------------


def _codes(v, name: str) -> tuple[np.ndarray, int]:
    arr = np.asarray(v)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be a vector, got shape {arr.shape}")
    if len(arr) == 0:
        raise ValueError(f"{name} is empty")
    uniq, inverse = np.unique(arr, return_inverse=True)
    return inverse, len(uniq)


def conditional_mutual_information(x, y, z) -> float:
    """Plug-in conditional mutual information of x and y given z, in nats.

    Empirical cell probabilities; cells with zero joint count contribute
    nothing. Always >= 0.
    """
    cx, kx = _codes(x, "x")
    cy, ky = _codes(y, "y")
    cz, kz = _codes(z, "z")
    n = len(cx)
    if not (len(cy) == n and len(cz) == n):
        raise ValueError("x, y, z must have equal lengths")

    counts = np.zeros((kx, ky, kz), dtype=np.float64)
    np.add.at(counts, (cx, cy, cz), 1.0)
    n_z = counts.sum(axis=(0, 1))  # (kz,)
    n_xz = counts.sum(axis=1)  # (kx, kz)
    n_yz = counts.sum(axis=0)  # (ky, kz)

    positive = counts > 0
    ratio = np.ones_like(counts)
    np.divide(
        counts * n_z[None, None, :],
        n_xz[:, None, :] * n_yz[None, :, :],
        out=ratio,
        where=positive,
    )
    mi = float((counts[positive] * np.log(ratio[positive])).sum()) / n
    return max(mi, 0.0)


def ci_test_mi(x, y, z, cfg: Config | None = None) -> CiResult:
    """Asymptotic G-test of conditional independence from contingency counts.

    G^2 = 2 N MI(x; y | z); degrees of freedom (|x|-1)(|y|-1)|z| from the
    observed level counts; p-value from the chi-square survival function.
    Zero degrees of freedom yield p = 1.
    """
    mi = conditional_mutual_information(x, y, z)
    n = len(np.asarray(x))
    _, kx = _codes(x, "x")
    _, ky = _codes(y, "y")
    _, kz = _codes(z, "z")
    g2 = 2.0 * n * mi
    dof = float((kx - 1) * (ky - 1) * kz)
    p = 1.0 if dof == 0 else chi_square_sf(g2, dof)
    return CiResult(
        statistic=g2, dof=dof, p_value=p, test_kind=TestKind.CONDITIONAL_MUTUAL_INFORMATION
    )


def discretize_for_mi(v, level_cap: int = 20) -> np.ndarray:
    """Map a real vector to integer levels for the MI test.

    Vectors with at most ``level_cap`` distinct values keep one level per
    distinct value (in sorted-value order). Denser vectors are binned by
    equal frequency into ``level_cap`` levels, with equal values always
    sharing a level. Deterministic.
    """
    if level_cap < 2:
        raise ValueError(f"level_cap must be >= 2, got {level_cap}")
    arr = np.asarray(v, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"expected a vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NonFinite("input contains NaN or infinite entries")
    uniq, inverse, counts = np.unique(arr, return_inverse=True, return_counts=True)
    if len(uniq) <= level_cap:
        return inverse.astype(np.int64)
    n = len(arr)
    first_sorted_position = np.cumsum(counts) - counts
    level_of_uniq = (first_sorted_position * level_cap) // n
    return level_of_uniq[inverse].astype(np.int64)
