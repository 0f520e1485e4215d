"""Special-function kernels: Kummer 1F1, spherical Bessel j_l and its zeros,
and Gauss-Legendre quadrature.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.special import gammaln, jv

from . import kernels
from .errors import AccuracyError, BracketError, ConvergenceError, DomainError

L_MAX = 16
ZERO_COUNT_MAX = 64
TERMINATING_ATOL = 1e-12
# longer polynomials cancel as badly as the series, so use the general path
TERMINATING_NMAX = 64
MAX_DIGIT_LOSS = 10.0
# power-series cancellation ratio above which the Bessel expansion is tried
_SWITCH_RATIO = 1e3
_BESSEL_NMAX = 2000


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Nodes and weights on ``[a, b]``.

    ``order`` is the number of Gauss points per panel; a composite rule with
    ``panels > 1`` is exact for piecewise polynomials of degree ``2*order - 1``.
    """

    nodes: np.ndarray
    weights: np.ndarray
    order: int
    a: float
    b: float
    panels: int = field(default=1)

    def integrate(self, values) -> float:
        return float(np.dot(self.weights, values))

    def __len__(self) -> int:
        return self.nodes.size


@lru_cache(maxsize=64)
def _reference_rule(order: int) -> tuple[np.ndarray, np.ndarray]:
    n = order
    i = np.arange(1, n + 1)
    x = np.cos(np.pi * (i - 0.25) / (n + 0.5))
    eps = np.finfo(float).eps
    for _ in range(100):
        p_prev = np.ones_like(x)
        p = x.copy()
        for k in range(2, n + 1):
            p_prev, p = p, ((2 * k - 1) * x * p - (k - 1) * p_prev) / k
        dp = n * (x * p - p_prev) / (x * x - 1.0)
        dx = p / dp
        x = x - dx
        if np.max(np.abs(dx)) <= 4 * eps:
            break
    else:
        raise ConvergenceError(f"Legendre root iteration did not converge for order {order}")
    # final derivative at the converged nodes
    p_prev = np.ones_like(x)
    p = x.copy()
    for k in range(2, n + 1):
        p_prev, p = p, ((2 * k - 1) * x * p - (k - 1) * p_prev) / k
    dp = n * (x * p - p_prev) / (x * x - 1.0)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    order_idx = np.argsort(x)
    x, w = x[order_idx], w[order_idx]
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_legendre(order: int, a: float, b: float) -> QuadratureRule:
    """Gauss-Legendre rule with ``order`` points mapped affinely onto ``[a, b]``."""
    if order < 2:
        raise DomainError("quadrature order must be >= 2")
    if not a < b:
        raise DomainError("need a < b")
    x, w = _reference_rule(int(order))
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    return QuadratureRule(mid + half * x, half * w, int(order), float(a), float(b))


def composite_gauss_legendre(order: int, a: float, b: float, panels: int) -> QuadratureRule:
    """``panels`` equal sub-intervals, each carrying an ``order``-point rule."""
    if panels < 1:
        raise DomainError("need at least one panel")
    edges = np.linspace(a, b, panels + 1)
    parts = [gauss_legendre(order, lo, hi) for lo, hi in zip(edges[:-1], edges[1:])]
    nodes = np.concatenate([p.nodes for p in parts])
    weights = np.concatenate([p.weights for p in parts])
    return QuadratureRule(nodes, weights, int(order), float(a), float(b), int(panels))


# --------------------------------------------------------------------------
# Kummer confluent hypergeometric function
# --------------------------------------------------------------------------

def _check_kummer_args(b: float, x) -> None:
    if b <= 0 and abs(b - round(b)) < TERMINATING_ATOL:
        raise DomainError(f"1F1 undefined for nonpositive integer b={b}")
    if np.any(np.asarray(x) < 0):
        raise DomainError("1F1 kernel only covers x >= 0")


def terminating_index(a: float) -> int | None:
    """Return n when ``a`` sits within tolerance of the nonpositive integer -n.

    Only degrees up to ``TERMINATING_NMAX`` qualify.
    """
    n = round(-a)
    if 0 <= n <= TERMINATING_NMAX and abs(a + n) <= TERMINATING_ATOL:
        return int(n)
    return None


def _kummer_polynomial(n: int, b: float, x: np.ndarray) -> np.ndarray:
    """1F1(-n; b; x) by the three-term recurrence in the first parameter.

    This is the Laguerre recurrence up to normalisation; unlike the explicit
    alternating sum it does not cancel catastrophically for large ``x``.
    """
    prev = np.ones_like(x)
    if n == 0:
        return prev
    cur = 1.0 - x / b
    for k in range(1, n):
        prev, cur = cur, ((2 * k + b - x) * cur - k * prev) / (b + k)
    return cur


def _kummer_bessel(a: float, b: float, x: np.ndarray):
    """1F1 as a series of Bessel functions J_{b-1+n}(2 sqrt(kappa x)).

    With kappa = b/2 - a > 0 the terms decay quickly when kappa*x is large,
    which is exactly where the power series cancels badly.
    Returns ``(values, abs_sums, converged)``.
    """
    kappa = 0.5 * b - a
    y = 2.0 * np.sqrt(kappa * x)
    q = np.sqrt(x / (4.0 * kappa))
    s = np.zeros_like(x)
    mag = np.zeros_like(x)
    quiet = np.zeros(x.shape, dtype=np.int64)
    active = np.ones(x.shape, dtype=bool)
    coef = [1.0, 0.0, 0.5 * b]
    qn = np.ones_like(x)
    n = 0
    while active.any() and n < _BESSEL_NMAX:
        if n >= 3:
            coef.append(((n + b - 2) * coef[n - 2] + (2 * a - b) * coef[n - 3]) / n)
        t = coef[n] * qn[active] * jv(b - 1 + n, y[active])
        s[active] += t
        mag[active] += np.abs(t)
        small = (n > 3) & (n + b - 1 > y[active]) & (np.abs(t) < 1e-17 * np.abs(s[active]))
        quiet[active] = np.where(small, quiet[active] + 1, 0)
        active &= quiet < 3
        qn = qn * q
        n += 1
    with np.errstate(divide="ignore"):
        log_pre = gammaln(b) + 0.5 * x - (b - 1) * np.log(0.5 * y)
    pre = np.exp(log_pre)
    return s * pre, mag * pre, not active.any()


def _kummer_general(a: float, b: float, x: np.ndarray, a_int: int = 0):
    """Power series, replaced by the Bessel expansion where that is better conditioned."""
    values, mags, ok = kernels.kummer_series(a, b, x, a_int=a_int)
    if not ok:
        raise ConvergenceError(f"1F1 series did not converge for a={a_int}+{a}, b={b}")
    a_full = a_int + a
    if 0.5 * b - a_full <= 0:
        return values, mags
    with np.errstate(divide="ignore", invalid="ignore"):
        lossy = (mags > _SWITCH_RATIO * np.abs(values)) & (x > 0)
    if not lossy.any():
        return values, mags
    alt, alt_mags, alt_ok = _kummer_bessel(a_full, b, x[lossy])
    if not alt_ok:
        return values, mags
    with np.errstate(divide="ignore", invalid="ignore"):
        better = alt_mags / np.abs(alt) < mags[lossy] / np.abs(values[lossy])
    idx = np.flatnonzero(lossy)[better]
    values = values.copy()
    mags = mags.copy()
    values[idx] = alt[better]
    mags[idx] = alt_mags[better]
    return values, mags


def _split_terminating(a: float, a_int: int | None) -> int | None:
    # a plain float parameter snaps to a nearby integer; an explicit split is exact
    if a_int is None:
        return terminating_index(a)
    if a == 0.0 and -TERMINATING_NMAX <= a_int <= 0:
        return -a_int
    return None


def kummer_1f1_array(a: float, b: float, x, *, a_int: int | None = None) -> np.ndarray:
    """Vectorised 1F1(a_int + a; b; x) without the accuracy guard.

    Passing the integer part separately keeps ``a`` exact near the
    nonpositive integers, where the function is most sensitive to it; the
    terminating polynomial is then used only when ``a`` is exactly 0.
    """
    _check_kummer_args(b, x)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    n = _split_terminating(a, a_int)
    if n is not None:
        return _kummer_polynomial(n, b, x)
    return _kummer_general(a, b, x, a_int or 0)[0]


def kummer_1f1(a: float, b: float, x: float, *, max_digit_loss: float = MAX_DIGIT_LOSS) -> float:
    """Kummer's 1F1(a; b; x) for real parameters and ``x >= 0``.

    Sums the power series with compensated accumulation; when that cancels
    badly and ``a < b/2`` a Bessel-function expansion is used instead. When
    ``a`` is (to within 1e-12) a nonpositive integer the exact terminating
    polynomial is returned. Raises :class:`AccuracyError` if cancellation
    in the chosen series costs more than ``max_digit_loss`` decimal digits.
    """
    _check_kummer_args(b, x)
    n = terminating_index(a)
    if n is not None:
        return float(_kummer_polynomial(n, b, np.array([float(x)]))[0])
    values, mags = _kummer_general(a, b, np.array([float(x)]))
    value = float(values[0])
    if value == 0.0 or mags[0] / abs(value) > 10.0 ** max_digit_loss:
        raise AccuracyError(
            f"1F1({a}, {b}, {x}): series cancellation exceeds {max_digit_loss} digits"
        )
    return value


def kummer_1f1_with_bound(a: float, b: float, x: float, *, a_int: int | None = None) -> tuple[float, float]:
    """Return ``(value, absolute_error_bound)`` of 1F1(a_int + a; b; x) without
    raising on cancellation."""
    _check_kummer_args(b, x)
    n = _split_terminating(a, a_int)
    if n is not None:
        return float(_kummer_polynomial(n, b, np.array([float(x)]))[0]), 0.0
    values, mags = _kummer_general(a, b, np.array([float(x)]), a_int or 0)
    return float(values[0]), float(8 * np.finfo(float).eps * mags[0])


# --------------------------------------------------------------------------
# Spherical Bessel functions
# --------------------------------------------------------------------------

def _check_order(l: int) -> None:
    if l < 0 or l > L_MAX:
        raise DomainError(f"spherical Bessel order {l} outside 0..{L_MAX}")


def spherical_bessel_j(l: int, x: float) -> float:
    """j_l(x) for integer ``0 <= l <= L_MAX`` and ``x >= 0``."""
    _check_order(l)
    if x < 0:
        raise DomainError("x must be nonnegative")
    j, _ = kernels.sph_jn(l, [x])
    return float(j[0])


def spherical_bessel_j_array(l: int, x, derivative: bool = False):
    """Vectorised j_l; with ``derivative=True`` returns ``(j_l, j_l')``."""
    _check_order(l)
    j, dj = kernels.sph_jn(l, x)
    return (j, dj) if derivative else j


@lru_cache(maxsize=4096)
def bessel_zero(l: int, k: int) -> float:
    """k-th positive zero of j_l, by a pi/8 sign-change scan plus bisection."""
    _check_order(l)
    if k < 1 or k > ZERO_COUNT_MAX:
        raise DomainError(f"zero index {k} outside 1..{ZERO_COUNT_MAX}")
    step = math.pi / 8
    x_end = (k + l / 2 + 3) * math.pi
    x_lo = step
    f_lo = spherical_bessel_j(l, x_lo)
    found = 0
    while x_lo < x_end:
        x_hi = x_lo + step
        f_hi = spherical_bessel_j(l, x_hi)
        if f_lo == 0.0:
            found += 1
            if found == k:
                return x_lo
        elif f_lo * f_hi < 0.0:
            found += 1
            if found == k:
                return _bisect_zero(l, x_lo, x_hi, f_lo)
        x_lo, f_lo = x_hi, f_hi
    raise BracketError(f"zero {k} of j_{l} not found below x={x_end:.3f}")


def _bisect_zero(l: int, lo: float, hi: float, f_lo: float) -> float:
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi) or hi - lo <= 2e-16 * hi:
            break
        f_mid = spherical_bessel_j(l, mid)
        if f_mid == 0.0:
            return mid
        if (f_mid < 0.0) == (f_lo < 0.0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
