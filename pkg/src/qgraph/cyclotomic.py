"""Exact sums of p-power roots of unity.

Elements of Q(zeta_{p^L}) are kept as integer coefficient vectors over the
power basis ``zeta^j, 0 <= j < phi(p^L)`` with one common denominator.  The
reduction uses ``Phi_{p^L}(z) = sum_{i<p} z^(i p^(L-1))``, so two sums are
equal exactly when their reduced vectors agree after lifting to a common level.
"""
from __future__ import annotations

import math
from fractions import Fraction

import numpy as np


def _phi(p: int, level: int) -> int:
    return 1 if level == 0 else p**level - p ** (level - 1)


def reduce_counts(counts: np.ndarray, p: int, level: int) -> np.ndarray:
    """Reduce a full-length (``p**level``) coefficient vector to the power basis."""
    counts = np.asarray(counts, dtype=np.int64)
    if level == 0:
        return counts.reshape(1).copy()
    block = p ** (level - 1)
    c = counts.reshape(p, block)
    return (c[: p - 1] - c[p - 1]).reshape(-1)


class CyclotomicSum:
    """``(1/denom) * sum_j coeffs[j] * exp(2 pi i j / p**level)`` in reduced form."""

    __slots__ = ("p", "level", "coeffs", "denom")

    def __init__(self, p: int, level: int, coeffs, denom: int = 1):
        coeffs = np.asarray(coeffs, dtype=np.int64)
        if coeffs.shape != (_phi(p, level),):
            raise ValueError("coefficient vector is not reduced for this level")
        if denom <= 0:
            raise ValueError("denominator must be positive")
        self.p, self.level, self.coeffs, self.denom = p, level, coeffs, int(denom)

    @classmethod
    def from_counts(cls, p: int, level: int, counts, denom: int = 1) -> CyclotomicSum:
        return cls(p, level, reduce_counts(counts, p, level), denom)

    @classmethod
    def rational(cls, p: int, q) -> CyclotomicSum:
        q = Fraction(q)
        return cls(p, 0, np.array([q.numerator], dtype=np.int64), q.denominator)

    @classmethod
    def zero(cls, p: int) -> CyclotomicSum:
        return cls.rational(p, 0)

    # -- structure ----------------------------------------------------
    def lift(self, level: int) -> CyclotomicSum:
        """Same element written over ``zeta_{p**level}``."""
        if level < self.level:
            raise ValueError("cannot lower the level")
        if level == self.level:
            return self
        out = np.zeros(_phi(self.p, level), dtype=np.int64)
        out[:: self.p ** (level - self.level)][: len(self.coeffs)] = self.coeffs
        return CyclotomicSum(self.p, level, out, self.denom)

    def _aligned(self, other: CyclotomicSum):
        if other.p != self.p:
            raise ValueError("sums over different primes")
        level = max(self.level, other.level)
        a, b = self.lift(level), other.lift(level)
        den = math.lcm(a.denom, b.denom)
        return level, a.coeffs * (den // a.denom), b.coeffs * (den // b.denom), den

    def _wrap(self, other):
        if isinstance(other, CyclotomicSum):
            return other
        if isinstance(other, (int, Fraction)):
            return CyclotomicSum.rational(self.p, other)
        return NotImplemented

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other):
        other = self._wrap(other)
        if other is NotImplemented:
            return other
        level, a, b, den = self._aligned(other)
        return CyclotomicSum(self.p, level, a + b, den)

    __radd__ = __add__

    def __neg__(self) -> CyclotomicSum:
        return CyclotomicSum(self.p, self.level, -self.coeffs, self.denom)

    def __sub__(self, other):
        other = self._wrap(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def scale(self, q) -> CyclotomicSum:
        q = Fraction(q)
        return CyclotomicSum(self.p, self.level, self.coeffs * q.numerator, self.denom * q.denominator)

    def conjugate(self) -> CyclotomicSum:
        if self.level == 0:
            return self
        n = self.p**self.level
        full = np.zeros(n, dtype=np.int64)
        full[: len(self.coeffs)] = self.coeffs
        conj = np.empty_like(full)
        conj[(-np.arange(n)) % n] = full
        return CyclotomicSum.from_counts(self.p, self.level, conj, self.denom)

    def __eq__(self, other) -> bool:
        other = self._wrap(other)
        if other is NotImplemented:
            return NotImplemented
        _, a, b, _ = self._aligned(other)
        return bool(np.array_equal(a, b))

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.coeffs.any()

    def is_real(self) -> bool:
        return self == self.conjugate()

    def as_rational(self) -> Fraction | None:
        """The value as a Fraction when the sum lies in Q, else None."""
        if self.coeffs[1:].any():
            return None
        return Fraction(int(self.coeffs[0]), self.denom)

    # -- numerics -----------------------------------------------------
    def __complex__(self) -> complex:
        if self.level == 0:
            return complex(int(self.coeffs[0]) / self.denom)
        j = np.nonzero(self.coeffs)[0]
        ang = 2.0 * np.pi * j / self.p**self.level
        c = self.coeffs[j].astype(float)
        return complex(np.dot(c, np.cos(ang)), np.dot(c, np.sin(ang))) / self.denom

    def __float__(self) -> float:
        z = complex(self)
        if abs(z.imag) > 1e-9 * max(1.0, abs(z.real)):
            raise ValueError(f"cyclotomic sum is not real: {z}")
        return z.real

    def __repr__(self) -> str:
        q = self.as_rational()
        if q is not None:
            return f"CyclotomicSum({q}, p={self.p})"
        return f"CyclotomicSum(~{complex(self):.12g}, p={self.p}, level={self.level})"
