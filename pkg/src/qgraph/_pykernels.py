"""Pure-Python/numpy implementations of the hot kernels.

The compiled module ``_ckernels`` exposes the same three functions with the
same signatures; :mod:`qgraph.backend` picks one at import time.
"""
from __future__ import annotations

import math

import numpy as np

TWO_PI = 2.0 * math.pi


# -- real oscillatory integral ----------------------------------------------
#
# I(a, b) = int_a^b exp(i phi(t)) dt,   phi(t) = 2 pi (x e^t + y e^-t).
# Middle region: GL panels whose width keeps the phase change per panel
# below `beta`.  Outer regions, where one exponential dominates, are done
# in s = e^t by rotating the contour onto vertical rays (Gauss-Laguerre).

def _split_points(x: float, y: float, tail_a: float, tail_k: float):
    ax, ay = abs(x), abs(y)
    if ax > 0.0:
        t_right = math.log(max(tail_a / ax, math.sqrt(tail_k * ay / ax)))
    else:
        t_right = math.inf
    if ay > 0.0:
        t_left = -math.log(max(tail_a / ay, math.sqrt(tail_k * ax / ay)))
    else:
        t_left = -math.inf
    return t_left, t_right


def _ray(x, y, c, lg_x, lg_w):
    # int_c^{c + i sign(x) oo} exp(2 pi i (x s + y/s)) ds/s
    sig = 1.0 if x > 0 else -1.0
    scale = TWO_PI * abs(x)
    s = c + 1j * sig * lg_x / scale
    vals = np.exp(1j * TWO_PI * (y / s)) / s
    ph = TWO_PI * math.fmod(x * c, 1.0)
    return 1j * sig / scale * complex(math.cos(ph), math.sin(ph)) * np.dot(lg_w, vals)


def _right_tail(x, y, t0, t1, lg_x, lg_w):
    return _ray(x, y, math.exp(t0), lg_x, lg_w) - _ray(x, y, math.exp(t1), lg_x, lg_w)


def _panel_edges(x, y, a, b, beta):
    ax, ay = abs(x), abs(y)
    edges = [a]
    t = a
    while t < b:
        g = TWO_PI * (ax * math.exp(t) + ay * math.exp(-t))
        w = 0.5 if g * 0.5 <= beta else beta / g
        t = min(t + w, b)
        edges.append(t)
    return np.asarray(edges)


def _middle(x, y, a, b, gl_x, gl_w, beta):
    edges = _panel_edges(x, y, a, b, beta)
    lo, hi = edges[:-1], edges[1:]
    half = 0.5 * (hi - lo)
    tt = (0.5 * (hi + lo))[:, None] + half[:, None] * gl_x[None, :]
    et = np.exp(tt)
    ph = TWO_PI * (x * et + y / et)
    w = half[:, None] * gl_w[None, :]
    return complex(np.sum(w * np.cos(ph)), np.sum(w * np.sin(ph))), len(lo)


def osc_integral(x, y, a, b, gl_x, gl_w, lg_x, lg_w, beta, tail_a, tail_k):
    """Return ``(I, panels)`` with ``I = int_a^b exp(i phi(t)) dt``."""
    if not a < b:
        return 0j, 0
    t_left, t_right = _split_points(x, y, tail_a, tail_k)
    total = 0j
    panels = 0
    lo, hi = max(a, t_left), min(b, t_right)
    if lo < hi:
        mid, panels = _middle(x, y, lo, hi, gl_x, gl_w, beta)
        total += mid
    if t_right < b:
        total += _right_tail(x, y, max(t_right, a), b, lg_x, lg_w)
    if t_left > a:
        # t -> -t exchanges the roles of x and y
        total += _right_tail(y, x, max(-t_left, -b), -a, lg_x, lg_w)
    return total, panels


def canonical_pair(x: float, y: float) -> tuple[float, float]:
    """Representative of {(x,y), (y,x), (-x,-y), (-y,-x)}; mu_hat is constant on it."""
    return max((x, y), (y, x), (-x, -y), (-y, -x))


def mu_hat_point(x, y, T, gl_x, gl_w, lg_x, lg_w, beta, tail_a, tail_k):
    if x == 0.0 and y == 0.0:
        return 1.0
    x, y = canonical_pair(x, y)
    val, _ = osc_integral(x, y, -T, T, gl_x, gl_w, lg_x, lg_w, beta, tail_a, tail_k)
    return val.real / (2.0 * T)


def mu_hat_many(xs, ys, T, gl_x, gl_w, lg_x, lg_w, beta, tail_a, tail_k):
    """``out[i] = mu_hat_T(xs[i], ys[i])``."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.shape != ys.shape:
        raise ValueError("xs and ys differ in length")
    return np.array([mu_hat_point(float(x), float(y), T, gl_x, gl_w, lg_x, lg_w, beta, tail_a, tail_k)
                     for x, y in zip(xs, ys)])


def mu_hat_grid(xs, ys, T, gl_x, gl_w, lg_x, lg_w, beta, tail_a, tail_k):
    """``out[i, j] = mu_hat_T(xs[i], ys[j])``."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    out = np.empty((len(xs), len(ys)))
    for i, x in enumerate(xs):
        for j, y in enumerate(ys):
            out[i, j] = mu_hat_point(float(x), float(y), T, gl_x, gl_w, lg_x, lg_w, beta, tail_a, tail_k)
    return out


# -- unit-group character sums ------------------------------------------------

def _unit_inverses(units: np.ndarray, p: int, mod: int) -> np.ndarray:
    inv_p = np.zeros(p, dtype=np.int64)
    for r in range(1, p):
        inv_p[r] = pow(r, -1, p)
    x = inv_p[units % p]
    prec = 1
    m = p
    while m < mod:
        # Newton step doubles the number of correct p-adic digits
        prec *= 2
        m = min(p**prec, mod)
        x = x * ((2 - units % m * x) % m) % m
    return x % mod


def unit_phase_counts(p: int, M: int, cx: int, ex: int, cy: int, ey: int, sign: int):
    """Histogram of ``sign * (phase(cx u / p^ex) + phase(cy u^-1 / p^ey))`` over (Z/p^M)^*.

    Entry ``j`` of the result counts the units ``u`` whose phase numerator at
    level ``M`` is ``j``.  Requires ``ex, ey <= M`` and ``p**M < 2**31``.
    """
    mod = p**M
    if mod >= 2**31:
        raise OverflowError(f"modulus {p}^{M} exceeds the kernel budget")
    if ex > M or ey > M:
        raise ValueError("phase depth exceeds the working modulus")
    u = np.arange(mod, dtype=np.int64)
    u = u[u % p != 0]
    idx = np.zeros_like(u)
    if ex > 0:
        idx += (cx % p**ex * u % p**ex) * p ** (M - ex)
    if ey > 0:
        inv = _unit_inverses(u, p, p**ey)
        idx += (cy % p**ey * inv % p**ey) * p ** (M - ey)
    idx = (sign * idx) % mod
    return np.bincount(idx, minlength=mod).astype(np.int64)
