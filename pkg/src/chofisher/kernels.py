"""Hot numerical loops, each with a numba and a pure-numpy implementation.

The public wrappers pick the numba path when it is available (see
:mod:`chofisher._accel`) and accept ``use_numba=`` to force either one, which
is what the benchmark and the cross-path tests do.
"""
from __future__ import annotations

import math

import numpy as np

from ._accel import HAVE_NUMBA, njit

# term-ratio stopping threshold for the Kummer series
_SERIES_RTOL = 1e-17
_SERIES_KMAX = 200_000
_RESCALE = 1e250


# --------------------------------------------------------------------------
# Kummer series
# --------------------------------------------------------------------------

@njit
def _kummer_scalar(a0, da, b, x):
    # a = a0 + da with a0 integral, so the factor (a + k) keeps da exactly at k = -a0
    s = 1.0
    comp = 0.0
    t = 1.0
    abs_sum = 1.0
    quiet = 0
    k = 0
    while k < _SERIES_KMAX:
        ratio = ((a0 + k) + da) / (b + k) * x / (k + 1.0)
        t *= ratio
        if t == 0.0:
            return s, abs_sum, 1
        # Kahan-compensated accumulation
        y = t - comp
        tmp = s + y
        comp = (tmp - s) - y
        s = tmp
        abs_sum += abs(t)
        k += 1
        if k > 2.0 * x and abs(ratio) < 0.5 and abs(t) < _SERIES_RTOL * abs(s):
            quiet += 1
            if quiet >= 3:
                return s, abs_sum, 1
        else:
            quiet = 0
    return s, abs_sum, 0


@njit
def _kummer_nb(a0, da, b, x):
    n = x.shape[0]
    out = np.empty(n)
    mag = np.empty(n)
    ok = True
    for i in range(n):
        v, m, flag = _kummer_scalar(a0, da, b, x[i])
        out[i] = v
        mag[i] = m
        if flag == 0:
            ok = False
    return out, mag, ok


def _kummer_np(a0, da, b, x):
    x = np.asarray(x, dtype=float)
    s = np.ones_like(x)
    comp = np.zeros_like(x)
    t = np.ones_like(x)
    abs_sum = np.ones_like(x)
    quiet = np.zeros(x.shape, dtype=np.int64)
    active = np.ones(x.shape, dtype=bool)
    k = 0
    while active.any() and k < _SERIES_KMAX:
        ratio = ((a0 + k) + da) / (b + k) * x / (k + 1.0)
        t = np.where(active, t * ratio, t)
        y = t - comp
        tmp = s + y
        comp = np.where(active, (tmp - s) - y, comp)
        s = np.where(active, tmp, s)
        abs_sum = np.where(active, abs_sum + np.abs(t), abs_sum)
        k += 1
        small = (k > 2.0 * x) & (np.abs(ratio) < 0.5) & (np.abs(t) < _SERIES_RTOL * np.abs(s))
        quiet = np.where(small, quiet + 1, 0)
        active &= (quiet < 3) & (t != 0.0)
    return s, abs_sum, not active.any()


def kummer_series(a: float, b: float, x, use_numba: bool | None = None, *, a_int: int = 0):
    """Sum the Kummer series for 1F1(a_int + a; b; x) at every point of ``x``.

    Splitting off an integer part ``a_int`` lets a parameter such as
    -3 + 1e-19 be represented exactly. Returns ``(values, abs_sums,
    converged)`` where ``abs_sums`` is the sum of term magnitudes, a bound on
    the rounding-error amplification.
    """
    x = np.ascontiguousarray(np.atleast_1d(np.asarray(x, dtype=float)))
    if _pick(use_numba):
        return _kummer_nb(float(a_int), float(a), float(b), x)
    return _kummer_np(float(a_int), float(a), float(b), x)


# --------------------------------------------------------------------------
# Spherical Bessel j_l and its derivative
# --------------------------------------------------------------------------

_SMALL_X = 0.1


@njit
def _sph_series(l, x):
    """Ascending series: (sum_k t_k, sum_k (l + 2k) t_k, x^l / (2l+1)!!)."""
    pre = 1.0
    for i in range(1, l + 1):
        pre *= x / (2 * i + 1)
    u = -0.5 * x * x
    t = 1.0
    s = 1.0
    sd = float(l)
    for k in range(1, 40):
        t *= u / (k * (2 * l + 2 * k + 1))
        s += t
        sd += (l + 2 * k) * t
        if abs(t) < 1e-17 * abs(s):
            break
    return s, sd, pre


@njit
def _sph_jn_scalar(l, x):
    """Return (j_l(x), j_l'(x))."""
    if x == 0.0:
        if l == 0:
            return 1.0, 0.0
        if l == 1:
            return 0.0, 1.0 / 3.0
        return 0.0, 0.0
    if x < _SMALL_X:
        # the downward recurrence would overflow; j_0' = -j_1
        s, sd, pre = _sph_series(l, x)
        if l == 0:
            s1, _, pre1 = _sph_series(1, x)
            return s, -s1 * pre1
        return s * pre, sd * (pre / x)
    if x > l + 1.0:
        s = math.sin(x)
        c = math.cos(x)
        jm = s / x
        j = s / (x * x) - c / x
        if l == 0:
            return jm, -j
        for n in range(1, l):
            jm, j = j, (2 * n + 1) / x * j - jm
        jp = (2 * l + 1) / x * j - jm
        return j, l / x * j - jp
    # Miller downward recurrence, normalised against j_0
    start = l + 21 + int(x)
    fp = 0.0
    f = 1.0
    jl = 0.0
    jl1 = 0.0
    if start == l + 1:
        jl1 = f
    for n in range(start, 0, -1):
        fm = (2 * n + 1) / x * f - fp
        fp = f
        f = fm
        if n - 1 == l + 1:
            jl1 = f
        elif n - 1 == l:
            jl = f
        if abs(f) > _RESCALE:
            f /= _RESCALE
            fp /= _RESCALE
            jl /= _RESCALE
            jl1 /= _RESCALE
    # normalise against whichever of j_0, j_1 is larger (j_0 vanishes at k*pi)
    j0 = math.sin(x) / x
    j1 = math.sin(x) / (x * x) - math.cos(x) / x
    if abs(j0) >= abs(j1):
        scale = j0 / f
    else:
        scale = j1 / fp
    jl *= scale
    jl1 *= scale
    return jl, l / x * jl - jl1


@njit
def _sph_jn_nb(l, x):
    n = x.shape[0]
    j = np.empty(n)
    dj = np.empty(n)
    for i in range(n):
        j[i], dj[i] = _sph_jn_scalar(l, x[i])
    return j, dj


def _sph_series_np(l, x):
    pre = np.ones_like(x)
    for i in range(1, l + 1):
        pre = pre * x / (2 * i + 1)
    u = -0.5 * x * x
    t = np.ones_like(x)
    total = np.ones_like(x)
    total_d = np.full_like(x, float(l))
    for k in range(1, 40):
        t = t * u / (k * (2 * l + 2 * k + 1))
        total = total + t
        total_d = total_d + (l + 2 * k) * t
        if np.all(np.abs(t) < 1e-17 * np.abs(total)):
            break
    return total, total_d, pre


def _sph_jn_np(l, x):
    x = np.asarray(x, dtype=float)
    j = np.zeros_like(x)
    dj = np.zeros_like(x)
    zero = x == 0.0
    if l == 0:
        j[zero] = 1.0
    elif l == 1:
        dj[zero] = 1.0 / 3.0

    up = x > l + 1.0
    if up.any():
        xu = x[up]
        s, c = np.sin(xu), np.cos(xu)
        jm = s / xu
        jc = s / (xu * xu) - c / xu
        if l == 0:
            j[up], dj[up] = jm, -jc
        else:
            for n in range(1, l):
                jm, jc = jc, (2 * n + 1) / xu * jc - jm
            jp = (2 * l + 1) / xu * jc - jm
            j[up], dj[up] = jc, l / xu * jc - jp

    tiny = ~zero & (x < _SMALL_X)
    if tiny.any():
        xt = x[tiny]
        total, total_d, pre = _sph_series_np(l, xt)
        if l == 0:
            t1, _, pre1 = _sph_series_np(1, xt)
            j[tiny], dj[tiny] = total, -t1 * pre1
        else:
            j[tiny], dj[tiny] = total * pre, total_d * (pre / xt)

    down = ~up & ~zero & ~tiny
    if down.any():
        xd = x[down]
        start = l + 21 + int(xd.max())
        fp = np.zeros_like(xd)
        f = np.ones_like(xd)
        jl = np.zeros_like(xd)
        jl1 = np.zeros_like(xd)
        for n in range(start, 0, -1):
            fm = (2 * n + 1) / xd * f - fp
            fp, f = f, fm
            if n - 1 == l + 1:
                jl1 = f.copy()
            elif n - 1 == l:
                jl = f.copy()
            big = np.abs(f) > _RESCALE
            if big.any():
                scale = np.where(big, 1.0 / _RESCALE, 1.0)
                f, fp, jl, jl1 = f * scale, fp * scale, jl * scale, jl1 * scale
        j0 = np.sin(xd) / xd
        j1 = np.sin(xd) / (xd * xd) - np.cos(xd) / xd
        scale = np.where(np.abs(j0) >= np.abs(j1), j0 / f, j1 / fp)
        jl, jl1 = jl * scale, jl1 * scale
        j[down] = jl
        dj[down] = l / xd * jl - jl1
    return j, dj


def sph_jn(l: int, x, use_numba: bool | None = None):
    """Vectorised ``(j_l(x), j_l'(x))`` for ``x >= 0``."""
    x = np.ascontiguousarray(np.atleast_1d(np.asarray(x, dtype=float)))
    if _pick(use_numba):
        return _sph_jn_nb(int(l), x)
    return _sph_jn_np(int(l), x)


# --------------------------------------------------------------------------
# Spherical Bessel (Hankel) transform sums
# --------------------------------------------------------------------------

@njit
def _bessel_sums_nb(l, p, r, f, fd):
    """out[c, i] = sum_j j_l(p_i r_j) f[c, j];  dout with j_l' and fd."""
    nc = f.shape[0]
    npts = p.shape[0]
    nr = r.shape[0]
    out = np.zeros((nc, npts))
    dout = np.zeros((nc, npts))
    for i in range(npts):
        for jj in range(nr):
            jv, djv = _sph_jn_scalar(l, p[i] * r[jj])
            for c in range(nc):
                out[c, i] += jv * f[c, jj]
                dout[c, i] += djv * fd[c, jj]
    return out, dout


def _bessel_sums_np(l, p, r, f, fd):
    arg = np.multiply.outer(p, r)
    jv, djv = _sph_jn_np(l, arg.ravel())
    jv = jv.reshape(arg.shape)
    djv = djv.reshape(arg.shape)
    return f @ jv.T, fd @ djv.T


def bessel_sums(l: int, p, r, f, fd, use_numba: bool | None = None):
    """Weighted sums against ``j_l(p r)`` and ``j_l'(p r)``.

    ``f`` and ``fd`` are ``(ncols, len(r))`` arrays of pre-weighted samples.
    """
    p = np.ascontiguousarray(p, dtype=float)
    r = np.ascontiguousarray(r, dtype=float)
    f = np.ascontiguousarray(np.atleast_2d(f), dtype=float)
    fd = np.ascontiguousarray(np.atleast_2d(fd), dtype=float)
    if _pick(use_numba):
        return _bessel_sums_nb(int(l), p, r, f, fd)
    return _bessel_sums_np(int(l), p, r, f, fd)


# --------------------------------------------------------------------------
# Sturm-sequence bisection for symmetric tridiagonal matrices
# --------------------------------------------------------------------------

@njit
def _sturm_count(d, e2, x):
    q = d[0] - x
    count = 1 if q < 0.0 else 0
    for i in range(1, d.shape[0]):
        if q == 0.0:
            q = 1e-300
        q = d[i] - x - e2[i - 1] / q
        if q < 0.0:
            count += 1
    return count


@njit
def _tridiag_lowest_nb(d, e2, k, lo, hi, rtol):
    eig = np.empty(k)
    for idx in range(k):
        a = lo
        b = hi
        for _ in range(400):
            if b - a <= rtol * max(1.0, abs(a), abs(b)):
                break
            mid = 0.5 * (a + b)
            if _sturm_count(d, e2, mid) > idx:
                b = mid
            else:
                a = mid
        eig[idx] = 0.5 * (a + b)
    return eig


def _tridiag_lowest_np(d, e2, k, lo, hi, rtol):
    a = np.full(k, lo)
    b = np.full(k, hi)
    target = np.arange(k)
    for _ in range(400):
        if np.all(b - a <= rtol * np.maximum(1.0, np.maximum(np.abs(a), np.abs(b)))):
            break
        mid = 0.5 * (a + b)
        q = d[0] - mid
        count = (q < 0.0).astype(np.int64)
        for i in range(1, d.shape[0]):
            q = np.where(q == 0.0, 1e-300, q)
            q = d[i] - mid - e2[i - 1] / q
            count += q < 0.0
        above = count > target
        b = np.where(above, mid, b)
        a = np.where(above, a, mid)
    return 0.5 * (a + b)


def tridiag_lowest(d, e, k: int, rtol: float = 1e-15, use_numba: bool | None = None):
    """Lowest ``k`` eigenvalues of the symmetric tridiagonal (d, e) by bisection."""
    d = np.ascontiguousarray(d, dtype=float)
    e = np.ascontiguousarray(e, dtype=float)
    e2 = e * e
    # Gershgorin bounds
    off = np.zeros_like(d)
    off[:-1] += np.abs(e)
    off[1:] += np.abs(e)
    lo = float(np.min(d - off))
    hi = float(np.max(d + off))
    if _pick(use_numba):
        return _tridiag_lowest_nb(d, e2, int(k), lo, hi, rtol)
    return _tridiag_lowest_np(d, e2, int(k), lo, hi, rtol)


def _pick(use_numba: bool | None) -> bool:
    if use_numba is None:
        return HAVE_NUMBA
    if use_numba and not HAVE_NUMBA:
        raise RuntimeError("numba path requested but numba is unavailable or disabled")
    return bool(use_numba)
