"""Fourier transform of the chopped real hyperbola measure.

    mu_hat_T(x, y) = (1/2T) * int_{-T}^{T} cos(2 pi (x e^t + y e^-t)) dt

The middle of the range uses Gauss-Legendre panels sized to the local phase
speed; the two tails, where one exponential dominates and the phase runs
to ~1e11 at the default extents, are integrated along rotated contours.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from qgraph import backend
from qgraph._pykernels import canonical_pair

GL_ORDER = 16
LAGUERRE_ORDER = 40
PANEL_BETA = 5.0
TAIL_A = 4.0
TAIL_K = 8.0
DEFAULT_TOL = 1e-9
MAX_PANELS = 1_000_000


class QuadratureError(ArithmeticError):
    """The requested tolerance was not reached; carries the achieved estimate."""

    def __init__(self, message: str, estimate: float):
        super().__init__(message)
        self.estimate = estimate


class VdcPreconditionError(ValueError):
    """The phase second derivative vanishes somewhere on the interval."""


@dataclass(frozen=True)
class QuadratureRule:
    """Node sets and tuning constants handed to the kernels."""

    gl_order: int = GL_ORDER
    laguerre_order: int = LAGUERRE_ORDER
    beta: float = PANEL_BETA
    tail_a: float = TAIL_A
    tail_k: float = TAIL_K

    def args(self):
        return _nodes(self.gl_order, self.laguerre_order) + (self.beta, self.tail_a, self.tail_k)


_NODE_CACHE: dict = {}


def _nodes(gl_order: int, laguerre_order: int):
    key = (gl_order, laguerre_order)
    if key not in _NODE_CACHE:
        gx, gw = np.polynomial.legendre.leggauss(gl_order)
        lx, lw = np.polynomial.laguerre.laggauss(laguerre_order)
        _NODE_CACHE[key] = tuple(np.ascontiguousarray(a, dtype=np.float64) for a in (gx, gw, lx, lw))
    return _NODE_CACHE[key]


DEFAULT_RULE = QuadratureRule()
# coarser panels, more tail nodes: used only to estimate the error of DEFAULT_RULE
CHECK_RULE = QuadratureRule(beta=PANEL_BETA / 2, laguerre_order=56)


@dataclass(frozen=True)
class RealChoppedMeasure:
    """Normalized dt/(2T) on the arc ``{(e^t, e^-t) : |t| <= T}`` and its reflection."""

    T: float

    def __post_init__(self):
        if not self.T > 0:
            raise ValueError("T must be positive")

    def mu_hat(self, x: float, y: float, tol: float = DEFAULT_TOL) -> float:
        return real_mu_hat(self.T, x, y, tol)


def oscillatory_integral(x: float, y: float, a: float, b: float, rule: QuadratureRule = DEFAULT_RULE):
    """``int_a^b exp(2 pi i (x e^t + y e^-t)) dt`` and the number of middle panels used."""
    return backend.kernels.osc_integral(float(x), float(y), float(a), float(b), *rule.args())


def real_mu_hat_estimate(T: float, x: float, y: float):
    """Return ``(value, error_estimate, panels)`` for mu_hat_T(x, y)."""
    if not T > 0:
        raise ValueError("T must be positive")
    x, y = float(x), float(y)
    if not (math.isfinite(x) and math.isfinite(y)):
        raise ValueError("non-finite argument")
    if x == 0.0 and y == 0.0:
        return 1.0, 0.0, 0
    cx, cy = canonical_pair(x, y)
    val, panels = oscillatory_integral(cx, cy, -T, T, DEFAULT_RULE)
    check, _ = oscillatory_integral(cx, cy, -T, T, CHECK_RULE)
    return val.real / (2 * T), abs(val.real - check.real) / (2 * T), panels


def real_mu_hat(T: float, x: float, y: float, tol: float = DEFAULT_TOL) -> float:
    """mu_hat_T(x, y) to absolute error ``tol``; raises QuadratureError otherwise."""
    if tol < 1e-12:
        raise ValueError("tol must be at least 1e-12")
    value, err, panels = real_mu_hat_estimate(T, x, y)
    if panels > MAX_PANELS:
        raise QuadratureError(f"panel budget exceeded ({panels} panels)", err)
    if err > tol:
        raise QuadratureError(f"error estimate {err:.3g} above tolerance {tol:.3g}", err)
    return value


def real_mu_hat_many(T: float, xs, ys, rule: QuadratureRule = DEFAULT_RULE) -> np.ndarray:
    """Elementwise mu_hat_T over paired coordinate arrays (no error estimate)."""
    xs = np.ascontiguousarray(xs, dtype=np.float64).ravel()
    ys = np.ascontiguousarray(ys, dtype=np.float64).ravel()
    return backend.kernels.mu_hat_many(xs, ys, float(T), *rule.args())


def phase_curvature_floor(x: float, y: float, a: float, b: float) -> float:
    """Minimum of ``|phi''| = 2 pi |x e^t + y e^-t|`` over ``[a, b]``."""
    if not a < b:
        raise ValueError("empty interval")

    def f(t):
        return abs(x * math.exp(t) + y * math.exp(-t))

    if x == 0.0 or y == 0.0:
        low = min(f(a), f(b))
    elif x * y > 0:
        t_star = min(max(0.5 * math.log(y / x), a), b)
        low = f(t_star)
    else:
        t_zero = 0.5 * math.log(-y / x)
        low = 0.0 if a <= t_zero <= b else min(f(a), f(b))
    return 2 * math.pi * low


def vdc_envelope_check(x: float, y: float, interval) -> bool:
    """Check ``|int_a^b e^{i phi}| <= 8 / sqrt(lambda)`` with lambda = min |phi''|."""
    a, b = map(float, interval)
    lam = phase_curvature_floor(x, y, a, b)
    if lam <= 0.0:
        raise VdcPreconditionError("phi'' vanishes on the interval; split it first")
    val, _ = oscillatory_integral(x, y, a, b)
    return abs(val) <= 8.0 / math.sqrt(lam)
