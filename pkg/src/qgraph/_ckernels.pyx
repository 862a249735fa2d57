# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the kernels in ``_pykernels`` (same signatures)."""
import numpy as np
cimport numpy as cnp
from libc.math cimport exp, log, sqrt, cos, sin, fabs, fmod, fmin, fmax, INFINITY, M_PI

cnp.import_array()

cdef double TWO_PI = 2.0 * M_PI


cdef inline void _split_points(double x, double y, double tail_a, double tail_k,
                               double* t_left, double* t_right) noexcept nogil:
    cdef double ax = fabs(x), ay = fabs(y)
    if ax > 0.0:
        t_right[0] = log(fmax(tail_a / ax, sqrt(tail_k * ay / ax)))
    else:
        t_right[0] = INFINITY
    if ay > 0.0:
        t_left[0] = -log(fmax(tail_a / ay, sqrt(tail_k * ax / ay)))
    else:
        t_left[0] = -INFINITY


cdef inline void _ray(double x, double y, double c, const double[::1] lg_x, const double[::1] lg_w,
                      double* re, double* im) noexcept nogil:
    # int_c^{c + i sign(x) oo} exp(2 pi i (x s + y/s)) ds/s
    cdef double sig = 1.0 if x > 0 else -1.0
    cdef double scale = TWO_PI * fabs(x)
    cdef double sr, si, d, qr, qi, mag, ang, fr, fi, acc_r = 0.0, acc_i = 0.0
    cdef Py_ssize_t k
    for k in range(lg_x.shape[0]):
        sr = c
        si = sig * lg_x[k] / scale
        d = sr * sr + si * si
        # y/s and 1/s
        qr = y * sr / d
        qi = -y * si / d
        mag = exp(-TWO_PI * qi)
        ang = TWO_PI * qr
        fr = mag * cos(ang)
        fi = mag * sin(ang)
        # multiply by 1/s = (sr - i si)/d
        acc_r += lg_w[k] * (fr * sr + fi * si) / d
        acc_i += lg_w[k] * (fi * sr - fr * si) / d
    ang = TWO_PI * fmod(x * c, 1.0)
    # prefactor i*sig/scale * exp(i ang)
    fr = -sig / scale * sin(ang)
    fi = sig / scale * cos(ang)
    re[0] = fr * acc_r - fi * acc_i
    im[0] = fr * acc_i + fi * acc_r


cdef inline void _right_tail(double x, double y, double t0, double t1,
                             const double[::1] lg_x, const double[::1] lg_w,
                             double* re, double* im) noexcept nogil:
    cdef double r0, i0, r1, i1
    _ray(x, y, exp(t0), lg_x, lg_w, &r0, &i0)
    _ray(x, y, exp(t1), lg_x, lg_w, &r1, &i1)
    re[0] = r0 - r1
    im[0] = i0 - i1


cdef void _osc(double x, double y, double a, double b,
               const double[::1] gl_x, const double[::1] gl_w,
               const double[::1] lg_x, const double[::1] lg_w,
               double beta, double tail_a, double tail_k,
               double* re, double* im, long* panels, bint want_imag) noexcept nogil:
    cdef double t_left, t_right, lo, hi, t, t_next, g, w, half, mid, et, ph, ax, ay, r, i
    cdef double acc_r = 0.0, acc_i = 0.0
    cdef Py_ssize_t k
    cdef long n = 0
    re[0] = 0.0
    im[0] = 0.0
    panels[0] = 0
    if not a < b:
        return
    ax = fabs(x)
    ay = fabs(y)
    _split_points(x, y, tail_a, tail_k, &t_left, &t_right)
    lo = fmax(a, t_left)
    hi = fmin(b, t_right)
    if lo < hi:
        t = lo
        while t < hi:
            g = TWO_PI * (ax * exp(t) + ay * exp(-t))
            if g * 0.5 <= beta:
                w = 0.5
            else:
                w = beta / g
            t_next = fmin(t + w, hi)
            half = 0.5 * (t_next - t)
            mid = 0.5 * (t_next + t)
            for k in range(gl_x.shape[0]):
                et = exp(mid + half * gl_x[k])
                ph = TWO_PI * (x * et + y / et)
                acc_r += half * gl_w[k] * cos(ph)
                if want_imag:
                    acc_i += half * gl_w[k] * sin(ph)
            t = t_next
            n += 1
    if t_right < b:
        _right_tail(x, y, fmax(t_right, a), b, lg_x, lg_w, &r, &i)
        acc_r += r
        acc_i += i
    if t_left > a:
        _right_tail(y, x, fmax(-t_left, -b), -a, lg_x, lg_w, &r, &i)
        acc_r += r
        acc_i += i
    re[0] = acc_r
    im[0] = acc_i
    panels[0] = n


def osc_integral(double x, double y, double a, double b,
                 const double[::1] gl_x, const double[::1] gl_w,
                 const double[::1] lg_x, const double[::1] lg_w,
                 double beta, double tail_a, double tail_k):
    """Return ``(I, panels)`` with ``I = int_a^b exp(i phi(t)) dt``."""
    cdef double re, im
    cdef long panels
    _osc(x, y, a, b, gl_x, gl_w, lg_x, lg_w, beta, tail_a, tail_k, &re, &im, &panels, 1)
    return complex(re, im), panels


cdef inline double _mu_hat(double x, double y, double T,
                           const double[::1] gl_x, const double[::1] gl_w,
                           const double[::1] lg_x, const double[::1] lg_w,
                           double beta, double tail_a, double tail_k) noexcept nogil:
    cdef double cx = x, cy = y, re, im
    cdef long panels
    if x == 0.0 and y == 0.0:
        return 1.0
    # lexicographic max over (x,y), (y,x), (-x,-y), (-y,-x)
    if (y > cx) or (y == cx and x > cy):
        cx, cy = y, x
    if (-x > cx) or (-x == cx and -y > cy):
        cx, cy = -x, -y
    if (-y > cx) or (-y == cx and -x > cy):
        cx, cy = -y, -x
    _osc(cx, cy, -T, T, gl_x, gl_w, lg_x, lg_w, beta, tail_a, tail_k, &re, &im, &panels, 0)
    return re / (2.0 * T)


def mu_hat_point(double x, double y, double T,
                 const double[::1] gl_x, const double[::1] gl_w,
                 const double[::1] lg_x, const double[::1] lg_w,
                 double beta, double tail_a, double tail_k):
    return _mu_hat(x, y, T, gl_x, gl_w, lg_x, lg_w, beta, tail_a, tail_k)


def mu_hat_many(xs, ys, double T,
                const double[::1] gl_x, const double[::1] gl_w,
                const double[::1] lg_x, const double[::1] lg_w,
                double beta, double tail_a, double tail_k):
    """``out[i] = mu_hat_T(xs[i], ys[i])``."""
    cdef const double[::1] xv = np.ascontiguousarray(xs, dtype=np.float64)
    cdef const double[::1] yv = np.ascontiguousarray(ys, dtype=np.float64)
    if xv.shape[0] != yv.shape[0]:
        raise ValueError("xs and ys differ in length")
    out = np.empty(xv.shape[0], dtype=np.float64)
    cdef double[::1] ov = out
    cdef Py_ssize_t i
    with nogil:
        for i in range(xv.shape[0]):
            ov[i] = _mu_hat(xv[i], yv[i], T, gl_x, gl_w, lg_x, lg_w, beta, tail_a, tail_k)
    return out


def mu_hat_grid(xs, ys, double T,
                const double[::1] gl_x, const double[::1] gl_w,
                const double[::1] lg_x, const double[::1] lg_w,
                double beta, double tail_a, double tail_k):
    """``out[i, j] = mu_hat_T(xs[i], ys[j])``."""
    cdef const double[::1] xv = np.ascontiguousarray(xs, dtype=np.float64)
    cdef const double[::1] yv = np.ascontiguousarray(ys, dtype=np.float64)
    out = np.empty((xv.shape[0], yv.shape[0]), dtype=np.float64)
    cdef double[:, ::1] ov = out
    cdef Py_ssize_t i, j
    with nogil:
        for i in range(xv.shape[0]):
            for j in range(yv.shape[0]):
                ov[i, j] = _mu_hat(xv[i], yv[j], T, gl_x, gl_w, lg_x, lg_w, beta, tail_a, tail_k)
    return out


cdef inline long long _inv_mod(long long a, long long m) noexcept nogil:
    cdef long long t = 0, new_t = 1, r = m, new_r = a % m, q, tmp
    while new_r != 0:
        q = r // new_r
        tmp = t - q * new_t
        t = new_t
        new_t = tmp
        tmp = r - q * new_r
        r = new_r
        new_r = tmp
    if t < 0:
        t += m
    return t


def unit_phase_counts(long long p, int M, long long cx, int ex, long long cy, int ey, int sign):
    """Histogram of ``sign * (phase(cx u / p^ex) + phase(cy u^-1 / p^ey))`` over (Z/p^M)^*."""
    cdef long long mod = 1, mod_x = 1, mod_y = 1, sx = 1, sy = 1, u, idx
    cdef int k
    if ex > M or ey > M:
        raise ValueError("phase depth exceeds the working modulus")
    for k in range(M):
        mod *= p
    if mod >= 2147483648:
        raise OverflowError(f"modulus {p}^{M} exceeds the kernel budget")
    for k in range(max(ex, 0)):
        mod_x *= p
    for k in range(max(ey, 0)):
        mod_y *= p
    sx = mod // mod_x
    sy = mod // mod_y
    cx = ((cx % mod_x) + mod_x) % mod_x
    cy = ((cy % mod_y) + mod_y) % mod_y
    counts = np.zeros(mod, dtype=np.int64)
    cdef long long[::1] cv = counts
    with nogil:
        for u in range(1, mod):
            if u % p == 0:
                continue
            idx = 0
            if ex > 0:
                idx += (cx * (u % mod_x) % mod_x) * sx
            if ey > 0:
                idx += (cy * _inv_mod(u % mod_y, mod_y) % mod_y) * sy
            idx = (sign * idx) % mod
            if idx < 0:
                idx += mod
            cv[idx] += 1
    return counts
