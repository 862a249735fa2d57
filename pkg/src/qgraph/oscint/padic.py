"""Exact Fourier transform of the chopped p-adic hyperbola measure.

Everything here is an exact element of Q(zeta_{p^L}) (a CyclotomicSum).
Two independent routes are provided:

* ``J1_exact`` splits the annulus into shells and reduces each shell to a
  closed-form rational or to one twisted character sum ``F(r, w)``.
* ``J1_bruteforce`` sums the character directly over residue classes of
  every shell, with one guard digit beyond the depth that fixes the phase.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from qgraph import backend
from qgraph.cyclotomic import CyclotomicSum
from qgraph.localfield import PadicNumber, PrecisionError, is_prime

# both budgets keep p**M inside the int32 histogram of the kernels
MAX_MODULUS = 2**31 - 1


class OddPrimeError(ValueError):
    """The p-adic oscillatory integrals are implemented for odd p only."""


def _check_odd(p: int) -> None:
    if p == 2:
        raise OddPrimeError("p-adic oscillatory integrals are restricted to odd primes; p=2 is rejected")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")


def _as_padic(x, p: int) -> PadicNumber:
    if isinstance(x, PadicNumber):
        if x.p != p:
            raise ValueError("arguments over different primes")
        return x
    return PadicNumber.from_rational(Fraction(x), p)


def _neg_valuation(x: PadicNumber) -> int:
    if x.is_exact_zero:
        raise ValueError("valuation of zero")
    if x.prec == 0:
        raise PrecisionError("argument is O(p^v); its valuation is unknown")
    return -x.v


@dataclass(frozen=True)
class PadicChoppedMeasure:
    """ds/||s|| on ``{p^-T <= ||s|| <= p^T}`` pushed to the hyperbola, normalized by L/2."""

    p: int
    T: int
    L: Fraction = field(init=False)

    def __post_init__(self):
        _check_odd(self.p)
        if self.T < 1:
            raise ValueError("T must be a positive integer")
        object.__setattr__(self, "L", (4 * self.T + 2) * (1 - Fraction(1, self.p)))

    @property
    def annulus_mass(self) -> Fraction:
        """Exact ``sum_k |C_k| / p^k`` over the window, which must equal L/2."""
        q = Fraction(self.p)
        return sum(((q**k - q ** (k - 1)) / q**k for k in range(-self.T, self.T + 1)), Fraction(0))

    @property
    def floor(self) -> Fraction:
        return -4 / self.L


# -- closed-form pieces --------------------------------------------------------

def ball_character_integral(a: PadicNumber, k: int) -> Fraction:
    """``int_{p^k Z_p} psi(a s) ds``: ``p^-k`` if ``v(a) + k >= 0`` else 0."""
    if a.is_exact_zero or a.v + k >= 0:
        return Fraction(a.p) ** -k
    if a.prec == 0:
        raise PrecisionError("argument too imprecise to locate its valuation")
    return Fraction(0)


def shell_value(p: int, n: int, k: int) -> Fraction:
    """``int_{C_k} psi(a s) ds/||s||`` for ``||a|| = p^n``."""
    if k <= -n:
        return 1 - Fraction(1, p)
    if k == 1 - n:
        return Fraction(-1, p)
    return Fraction(0)


def shell_character_integral(a: PadicNumber, k: int) -> Fraction:
    """Shell integral of ``psi(a s)`` against ds/||s|| over ``||s|| = p^k``."""
    if a.is_zero():
        raise ValueError("a = 0: the shell integral is the shell measure 1 - 1/p")
    return shell_value(a.p, _neg_valuation(a), k)


# -- twisted shell sums ----------------------------------------------------------

@lru_cache(maxsize=65536)
def _F_cached(p: int, r: int, m: int, w_unit: int) -> CyclotomicSum:
    # s = p^-r u: phase(s) needs u mod p^r, phase(w/s) needs u^-1 mod p^(m-r)
    depth = max(r, m - r, 0)
    if depth == 0:
        return CyclotomicSum.rational(p, 1 - Fraction(1, p))
    counts = backend.kernels.unit_phase_counts(p, depth, 1, r, w_unit, m - r, 1)
    return CyclotomicSum.from_counts(p, depth, counts, p**depth)


def F_kernel_exact(r: int, w: PadicNumber) -> CyclotomicSum:
    """``F(r, w) = int_{C_r} psi(s) psi(w/s) ds/||s||`` as an exact cyclotomic sum."""
    _check_odd(w.p)
    if w.is_zero():
        raise ValueError("F(r, w) needs w != 0")
    if r < 1:
        raise ValueError("r must be a positive integer")
    m = _neg_valuation(w)
    p = w.p
    depth = max(r, m - r, 0)
    if p**depth > MAX_MODULUS:
        raise OverflowError(f"modulus {p}^{depth} exceeds the kernel budget")
    w_unit = w.unit_mod(max(m - r, 0))
    return _F_cached(p, r, m, w_unit)


def F_kernel(r: int, w: PadicNumber) -> float:
    """Real value of F(r, w); asserts reality and ``|F| <= 1 - 1/p``."""
    value = F_kernel_exact(r, w)
    if not value.is_real():
        raise AssertionError(f"F({r}, {w}) is not real")
    out = float(value)
    if abs(out) > 1 - 1 / w.p + 1e-12:
        raise AssertionError(f"|F({r}, w)| = {abs(out)} exceeds 1 - 1/p")
    return out


# -- J1 -------------------------------------------------------------------------

def _check_args(x, y, T):
    p = x.p if isinstance(x, PadicNumber) else y.p if isinstance(y, PadicNumber) else None
    if p is None:
        raise TypeError("at least one argument must be a PadicNumber")
    _check_odd(p)
    if int(T) != T or T < 1:
        raise ValueError("T must be a positive integer")
    return p, _as_padic(x, p), _as_padic(y, p), int(T)


def J1_exact(x, y, T: int, use_sally: bool = True) -> CyclotomicSum:
    """``int_{p^-T <= ||s|| <= p^T} conj psi(x s + y / s) ds/||s||`` by shell decomposition.

    With ``use_sally`` the twisted shells ``F(r, a)`` with ``r != m/2`` are
    skipped (they vanish); otherwise every one is summed.
    """
    p, x, y, T = _check_args(x, y, T)
    total = CyclotomicSum.zero(p)
    if x.is_zero() and y.is_zero():
        return CyclotomicSum.rational(p, (2 * T + 1) * (1 - Fraction(1, p)))
    if x.is_zero() or y.is_zero():
        # s -> 1/s maps the symmetric window to itself, so J1(0, y) = J1(y, 0)
        n = _neg_valuation(y if x.is_zero() else x)
        return CyclotomicSum.rational(p, sum(shell_value(p, n, k) for k in range(-T, T + 1)))

    a = x * y
    n = _neg_valuation(a)
    n2 = _neg_valuation(y)
    lo, hi = -(T + n2), T - n2
    rational = Fraction(0)
    for k in range(lo, hi + 1):
        if k >= 0:
            # ||1/t|| <= 1: only psi(a t) oscillates
            rational += shell_value(p, n, k)
        elif k <= -n:
            # ||a t|| <= 1: t -> 1/t turns psi(1/t) into psi(t) on C_{-k}
            rational += shell_value(p, 0, -k)
        else:
            r = k + n
            if use_sally and 2 * r != n:
                continue
            total = total + F_kernel_exact(r, a).conjugate()
    total = total + rational
    _assert_floor(total, "J1_exact")
    return total


def _assert_floor(value: CyclotomicSum, label: str) -> None:
    if float(value) < -2 - 1e-12:
        raise AssertionError(f"{label} = {float(value)} is below -2")


def J1_bruteforce(x, y, T: int, max_modulus: int = MAX_MODULUS) -> CyclotomicSum:
    """Direct residue-class summation of the same integral (independent oracle)."""
    p, x, y, T = _check_args(x, y, T)
    total = CyclotomicSum.zero(p)
    for k in range(-T, T + 1):
        # s = p^-k u: x s has valuation v(x) - k, y/s has valuation v(y) + k
        if x.is_zero():
            ex, cx = 0, 0
        else:
            ex = k - x.v
            cx = x.unit_mod(ex) if ex > 0 else 0
        if y.is_zero():
            ey, cy = 0, 0
        else:
            ey = -k - y.v
            cy = y.unit_mod(ey) if ey > 0 else 0
        M = max(1, ex, ey) + 1
        if p**M > max_modulus:
            raise OverflowError(f"shell {k} needs modulus {p}^{M}, above the budget")
        counts = backend.kernels.unit_phase_counts(p, M, cx, max(ex, 0), cy, max(ey, 0), -1)
        total = total + CyclotomicSum.from_counts(p, M, counts, p**M)
    if not total.is_real():
        raise AssertionError("J1 oracle produced a non-real sum")
    return total


def padic_mu_hat_exact(x, y, T: int) -> CyclotomicSum:
    """``2 J1 / L`` as an exact cyclotomic sum."""
    p, x, y, T = _check_args(x, y, T)
    measure = PadicChoppedMeasure(p, T)
    value = J1_exact(x, y, T).scale(2 / measure.L)
    if float(value) < float(measure.floor) - 1e-12:
        raise AssertionError(f"mu_hat = {float(value)} is below -4/L")
    return value


def padic_mu_hat(x, y, T: int) -> float:
    return float(padic_mu_hat_exact(x, y, T))
