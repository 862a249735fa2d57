"""Exact p-adic scalars, norms and the Tate character.

A :class:`PadicNumber` is stored as ``p**v * unit`` where ``unit`` is an
integer known modulo ``p**prec``.  Arithmetic follows the capped-relative
model: every result carries the number of significant digits that are still
determined by the inputs, so loss of precision is visible instead of silent.
Operations that need digits that are not known raise :class:`PrecisionError`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

DEFAULT_PRECISION = 64
INFINITE_VALUATION = math.inf


class PrecisionError(ArithmeticError):
    """Raised when an operation needs p-adic digits that are not known."""


@lru_cache(maxsize=4096)
def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def valuation(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def rational_valuation(q, p: int):
    q = Fraction(q)
    if q == 0:
        return INFINITE_VALUATION
    return valuation(q.numerator, p) - valuation(q.denominator, p)


def split_rational(q, p: int) -> tuple[int, Fraction]:
    """Return ``(v, u)`` with ``q = p**v * u`` and ``u`` a p-adic unit."""
    q = Fraction(q)
    if q == 0:
        raise ValueError("zero has no unit part")
    v = rational_valuation(q, p)
    return v, q / Fraction(p) ** v


def parse_rational(text: str) -> Fraction:
    """Parse ``"a/b"``, ``"a"`` or a decimal literal into a Fraction."""
    text = text.strip()
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"cannot parse rational {text!r}") from exc


def _check_prime(p: int) -> None:
    if not isinstance(p, int) or not is_prime(p):
        raise ValueError(f"{p!r} is not a prime")


class PadicNumber:
    """Element of Q_p with a finite window of significant digits.

    Parameters
    ----------
    p : int
        The prime.
    v : int or math.inf
        Valuation.  ``math.inf`` marks the exact zero.
    unit : int
        Unit part, reduced modulo ``p**prec``.  Zero for the zero states.
    prec : int
        Number of significant digits known.  ``prec == 0`` with a finite
        ``v`` denotes a value indistinguishable from zero, ``O(p**v)``.
    cap : int
        The precision window used when coercing exact constants.
    """

    __slots__ = ("p", "v", "unit", "prec", "cap")

    def __init__(self, p: int, v, unit: int, prec: int, cap: int = DEFAULT_PRECISION):
        self.p = p
        self.cap = cap
        if v == INFINITE_VALUATION:
            self.v, self.unit, self.prec = INFINITE_VALUATION, 0, cap
            return
        if prec < 0:
            raise PrecisionError("negative precision")
        unit %= p**prec
        if prec > 0 and unit % p == 0:
            raise ValueError("unit part must not be divisible by p")
        self.v, self.unit, self.prec = int(v), unit, prec

    # -- construction -------------------------------------------------
    @classmethod
    def zero(cls, p: int, cap: int = DEFAULT_PRECISION) -> PadicNumber:
        return cls(p, INFINITE_VALUATION, 0, cap, cap)

    @classmethod
    def from_rational(cls, q, p: int, prec: int = DEFAULT_PRECISION) -> PadicNumber:
        q = Fraction(q)
        if q == 0:
            return cls.zero(p, prec)
        v, u = split_rational(q, p)
        mod = p**prec
        unit = u.numerator * pow(u.denominator, -1, mod) % mod
        return cls(p, v, unit, prec, prec)

    def _coerce(self, other) -> PadicNumber:
        if isinstance(other, PadicNumber):
            if other.p != self.p:
                raise ValueError(f"cannot combine {self.p}-adic and {other.p}-adic numbers")
            return other
        if isinstance(other, (int, Rational)):
            return PadicNumber.from_rational(other, self.p, self.cap)
        return NotImplemented

    # -- properties ---------------------------------------------------
    @property
    def is_exact_zero(self) -> bool:
        return self.v == INFINITE_VALUATION

    def is_zero(self) -> bool:
        """True for the exact zero and for values known only as O(p**v)."""
        return self.v == INFINITE_VALUATION or self.prec == 0

    @property
    def absolute_precision(self):
        """Exponent ``A`` such that the value is known modulo ``p**A``."""
        if self.is_exact_zero:
            return INFINITE_VALUATION
        return self.v + self.prec

    @property
    def digits(self) -> tuple[int, ...]:
        """Base-p digits ``d0, d1, ...`` of the unit part (``d0 != 0``)."""
        out = []
        u = self.unit
        for _ in range(self.prec if not self.is_exact_zero else 0):
            u, d = divmod(u, self.p)
            out.append(d)
        return tuple(out)

    def norm(self) -> float:
        if self.is_exact_zero:
            return 0.0
        if self.prec == 0:
            raise PrecisionError(f"norm of O({self.p}^{self.v}) is undetermined")
        return float(Fraction(self.p) ** (-self.v))

    def unit_mod(self, k: int) -> int:
        """Unit part modulo ``p**k``; needs ``k <= prec``."""
        if k > self.prec:
            raise PrecisionError(f"need {k} unit digits, only {self.prec} known")
        return self.unit % self.p**k

    def to_fraction(self) -> Fraction:
        """The rational ``p**v * unit`` (the integer representative of the unit)."""
        if self.is_exact_zero:
            return Fraction(0)
        return Fraction(self.p) ** self.v * self.unit

    # -- arithmetic ---------------------------------------------------
    def __neg__(self) -> PadicNumber:
        if self.is_exact_zero or self.prec == 0:
            return self
        return PadicNumber(self.p, self.v, -self.unit, self.prec, self.cap)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_exact_zero:
            return other
        if other.is_exact_zero:
            return self
        vmin = min(self.v, other.v)
        absprec = min(self.absolute_precision, other.absolute_precision)
        span = absprec - vmin
        if span <= 0:
            return PadicNumber(self.p, absprec, 0, 0, self.cap)
        mod = self.p**span
        s = (self.unit * self.p ** (self.v - vmin) + other.unit * self.p ** (other.v - vmin)) % mod
        if s == 0:
            return PadicNumber(self.p, absprec, 0, 0, self.cap)
        shift = valuation(s, self.p)
        return PadicNumber(self.p, vmin + shift, s // self.p**shift, span - shift, self.cap)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_exact_zero or other.is_exact_zero:
            return PadicNumber.zero(self.p, self.cap)
        prec = min(self.prec, other.prec)
        if prec == 0:
            absprec = min(self.v + other.absolute_precision, other.v + self.absolute_precision)
            return PadicNumber(self.p, absprec, 0, 0, self.cap)
        return PadicNumber(self.p, self.v + other.v, self.unit * other.unit, prec, self.cap)

    __rmul__ = __mul__

    def inverse(self) -> PadicNumber:
        if self.is_exact_zero:
            raise ZeroDivisionError("inverse of zero")
        if self.prec == 0:
            raise PrecisionError(f"cannot invert O({self.p}^{self.v})")
        return PadicNumber(self.p, -self.v, pow(self.unit, -1, self.p**self.prec), self.prec, self.cap)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, k: int) -> PadicNumber:
        if k < 0:
            return self.inverse() ** (-k)
        out = PadicNumber.from_rational(1, self.p, self.cap)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        try:
            other = self._coerce(other)
        except ValueError:
            return False
        if other is NotImplemented:
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        return hash((self.p, self.v, self.unit % self.p ** min(self.prec, 8)))

    # -- display ------------------------------------------------------
    def __repr__(self) -> str:
        if self.is_exact_zero:
            return f"PadicNumber(0, p={self.p})"
        if self.prec == 0:
            return f"PadicNumber(O({self.p}^{self.v}))"
        return f"PadicNumber({self.serialize(8)})"

    def serialize(self, ndigits: int | None = None) -> str:
        """Debug form ``p^v * (d0 d1 d2 ...)_p``."""
        if self.is_exact_zero:
            return "0"
        ds = self.digits if ndigits is None else self.digits[:ndigits]
        return f"{self.p}^{self.v} * ({' '.join(map(str, ds))})_{self.p}"

    def to_json(self) -> dict:
        if self.is_exact_zero:
            return {"p": self.p, "v": None, "digits": []}
        return {"p": self.p, "v": self.v, "digits": list(self.digits)}

    @classmethod
    def from_json(cls, data: dict) -> PadicNumber:
        p = data["p"]
        if data["v"] is None:
            return cls.zero(p)
        ds = data["digits"]
        unit = sum(d * p**i for i, d in enumerate(ds))
        return cls(p, data["v"], unit, len(ds), max(len(ds), DEFAULT_PRECISION))


def padic_from_rational(a: int, b: int, p: int, N: int = DEFAULT_PRECISION) -> PadicNumber:
    """p-adic expansion of ``a/b`` truncated to ``N`` significant digits."""
    _check_prime(p)
    if b == 0:
        raise ZeroDivisionError("zero denominator")
    return PadicNumber.from_rational(Fraction(a, b), p, N)


@dataclass(frozen=True)
class CharacterPhase:
    """The phase ``numerator / p**level`` mod 1; the value is exp(2 pi i phase)."""

    p: int
    numerator: int
    level: int

    def __post_init__(self):
        object.__setattr__(self, "numerator", self.numerator % self.p**self.level)

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.numerator, self.p**self.level)

    def __add__(self, other: CharacterPhase) -> CharacterPhase:
        if other.p != self.p:
            raise ValueError("phases of different primes")
        level = max(self.level, other.level)
        num = self.numerator * self.p ** (level - self.level) + other.numerator * self.p ** (level - other.level)
        return CharacterPhase(self.p, num, level).reduced()

    def __neg__(self) -> CharacterPhase:
        return CharacterPhase(self.p, -self.numerator, self.level)

    def reduced(self) -> CharacterPhase:
        num, level = self.numerator, self.level
        while level > 0 and num % self.p == 0:
            num //= self.p
            level -= 1
        return CharacterPhase(self.p, num, level)

    def value(self) -> complex:
        return complex(math.cos(2 * math.pi * self.fraction), math.sin(2 * math.pi * self.fraction))


def tate_character(x: PadicNumber) -> CharacterPhase:
    """Phase of the Tate character: ``r_x / p**n_x`` with kernel Z_p."""
    if x.is_exact_zero or (x.prec == 0 and x.v >= 0):
        return CharacterPhase(x.p, 0, 0)
    if x.v >= 0:
        return CharacterPhase(x.p, 0, 0)
    n = -x.v
    return CharacterPhase(x.p, x.unit_mod(n), n).reduced()


def digit_truncation(x: PadicNumber, m: int) -> tuple[int, ...]:
    """Digits ``(b_{-m}, ..., b_0)`` of the p-adic expansion of ``x``."""
    if m < 0:
        raise ValueError("m must be non-negative")
    if x.is_exact_zero:
        return (0,) * (m + 1)
    if x.v > 0:
        return (0,) * (m + 1)
    if x.absolute_precision <= 0:
        raise PrecisionError(f"digits up to exponent 0 unknown (known modulo {x.p}^{x.absolute_precision})")
    out = []
    for j in range(-m, 1):
        i = j - x.v
        out.append(0 if i < 0 else (x.unit // x.p**i) % x.p)
    return tuple(out)


def norm(x) -> float:
    """``p**-v`` for p-adic input, ``|x|`` for real scalars."""
    if isinstance(x, PadicNumber):
        return x.norm()
    x = float(x)
    if not math.isfinite(x):
        raise ValueError("non-finite real scalar")
    return abs(x)


def sqrt_mod_prime(a: int, p: int) -> int | None:
    """A square root of ``a`` modulo an odd prime, or None (Tonelli-Shanks)."""
    a %= p
    if a == 0:
        return 0
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return r


def is_square(x: PadicNumber) -> bool:
    if x.is_exact_zero:
        return True
    if x.prec == 0:
        raise PrecisionError("squareness of O(p^v) is undetermined")
    if x.v % 2:
        return False
    if x.p == 2:
        if x.prec < 3:
            raise PrecisionError("need 3 unit digits to decide squares in Q_2")
        return x.unit % 8 == 1
    return pow(x.unit % x.p, (x.p - 1) // 2, x.p) == 1


def padic_sqrt(x: PadicNumber) -> PadicNumber:
    """Square root by Hensel lifting; raises ValueError for non-squares."""
    if x.is_exact_zero:
        return x
    if not is_square(x):
        raise ValueError("not a square in Q_p")
    p = x.p
    if p == 2:
        # bitwise lift: r**2 == unit mod 2**k, r fixed modulo 2**(k-1)
        r = 1
        for k in range(3, x.prec):
            if (r * r - x.unit) % 2 ** (k + 1):
                r += 2 ** (k - 1)
        prec = x.prec - 1
        return PadicNumber(2, x.v // 2, r % 2**prec, prec, x.cap)
    mod = p**x.prec
    r = sqrt_mod_prime(x.unit, p)
    k = 1
    while k < x.prec:
        k = min(2 * k, x.prec)
        m = p**k
        r = (r - (r * r - x.unit) * pow(2 * r, -1, m)) % m
    return PadicNumber(p, x.v // 2, r % mod, x.prec, x.cap)


def residue_digits_to_int(digits, p: int) -> int:
    return sum(d * p**i for i, d in enumerate(digits))
