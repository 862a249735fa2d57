import math
import random
from fractions import Fraction

import numpy as np
import pytest
from scipy.integrate import quad

from qgraph.localfield import PadicNumber
from qgraph.oscint import (
    F_kernel,
    F_kernel_exact,
    J1_bruteforce,
    J1_exact,
    OddPrimeError,
    PadicChoppedMeasure,
    QuadratureError,
    RealChoppedMeasure,
    VdcPreconditionError,
    ball_character_integral,
    oscillatory_integral,
    padic_mu_hat,
    padic_mu_hat_exact,
    real_mu_hat,
    real_mu_hat_estimate,
    real_mu_hat_many,
    shell_character_integral,
    vdc_envelope_check,
)
from qgraph.oscint.padic import shell_value
from qgraph.oscint.real import CHECK_RULE


def P(q, p):
    return PadicNumber.from_rational(Fraction(q), p)


# -- real ----------------------------------------------------------------------------------

def test_real_origin_and_symmetries():
    for T in (0.5, 5, 20):
        assert real_mu_hat(T, 0, 0) == pytest.approx(1, abs=1e-12)
    rng = random.Random(0)
    for _ in range(30):
        T = rng.uniform(0.5, 20)
        x, y = rng.uniform(-50, 50), rng.uniform(-50, 50)
        v = real_mu_hat(T, x, y)
        assert -1 <= v <= 1
        assert real_mu_hat(T, y, x) == pytest.approx(v, abs=1e-9)
        assert real_mu_hat(T, -x, -y) == pytest.approx(v, abs=1e-9)


def test_real_against_adaptive_quad():
    # small T and small arguments keep scipy's adaptive quadrature reliable
    for T, x, y in [(1.0, 0.3, -0.7), (2.0, 1.5, 0.2), (0.5, -3.0, 2.0)]:
        ref, _ = quad(lambda t: math.cos(2 * math.pi * (x * math.exp(t) + y * math.exp(-t))),
                      -T, T, limit=400, epsabs=1e-13)
        assert real_mu_hat(T, x, y) == pytest.approx(ref / (2 * T), abs=1e-10)


def test_real_rules_agree_on_large_arguments():
    rng = np.random.default_rng(1)
    xs, ys = rng.uniform(-1e4, 1e4, 20), rng.uniform(-1e4, 1e4, 20)
    a = real_mu_hat_many(20.0, xs, ys)
    b = real_mu_hat_many(20.0, xs, ys, CHECK_RULE)
    assert np.max(np.abs(a - b)) < 1e-9


def test_real_estimate_and_errors():
    value, err, panels = real_mu_hat_estimate(10.0, 3.0, -2.0)
    assert err < 1e-9 and panels > 0
    with pytest.raises(ValueError):
        real_mu_hat(10.0, 1, 1, tol=1e-13)
    with pytest.raises(ValueError):
        RealChoppedMeasure(0)
    assert issubclass(QuadratureError, ArithmeticError)
    assert RealChoppedMeasure(5).mu_hat(0, 0) == pytest.approx(1)


def test_oscillatory_integral_matches_quad():
    re_ref, _ = quad(lambda t: math.cos(2 * math.pi * 5 * math.exp(t)), 0, 1, limit=400)
    im_ref, _ = quad(lambda t: math.sin(2 * math.pi * 5 * math.exp(t)), 0, 1, limit=400)
    z, panels = oscillatory_integral(5.0, 0.0, 0.0, 1.0)
    assert z.real == pytest.approx(re_ref, abs=1e-10)
    assert z.imag == pytest.approx(im_ref, abs=1e-10)


def test_vdc_examples():
    assert vdc_envelope_check(5.0, 0.0, (0.0, 1.0))
    # min |phi| = pi/2 with x = y = 1/8 at t = 0
    assert vdc_envelope_check(0.125, 0.125, (-1.0, 1.0))
    with pytest.raises(VdcPreconditionError):
        vdc_envelope_check(0.0, 0.0, (0.0, 1.0))
    with pytest.raises(VdcPreconditionError):
        vdc_envelope_check(1.0, -1.0, (-1.0, 1.0))


def test_vdc_random_triples():
    rng = random.Random(5)
    checked = 0
    while checked < 1000:
        x, y = rng.uniform(-20, 20), rng.uniform(-20, 20)
        a = rng.uniform(-3, 3)
        b = a + rng.uniform(0.01, 2)
        try:
            assert vdc_envelope_check(x, y, (a, b))
        except VdcPreconditionError:
            continue
        checked += 1


# -- p-adic closed forms ------------------------------------------------------------------

def test_ball_character_integral_examples():
    assert ball_character_integral(P(4, 3), 0) == 1
    assert ball_character_integral(P(Fraction(1, 9), 3), 1) == 0
    assert ball_character_integral(P(Fraction(1, 9), 3), 2) == Fraction(1, 9)


def test_shell_character_integral_examples():
    one = P(1, 5)
    assert shell_character_integral(one, 0) == Fraction(4, 5)
    assert shell_character_integral(one, 1) == Fraction(-1, 5)
    assert shell_character_integral(one, 2) == 0
    with pytest.raises(ValueError):
        shell_character_integral(PadicNumber.zero(5), 0)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_annulus_mass_identity(p):
    for T in (1, 2, 5):
        m = PadicChoppedMeasure(p, T)
        assert m.annulus_mass == m.L / 2
        assert m.floor == -4 / m.L


def test_measure_rejects_p2_and_bad_T():
    with pytest.raises(OddPrimeError, match="odd"):
        PadicChoppedMeasure(2, 1)
    with pytest.raises(ValueError):
        PadicChoppedMeasure(3, 0)
    with pytest.raises(OddPrimeError):
        J1_exact(P(1, 2), P(1, 2), 1)


# -- F kernel ------------------------------------------------------------------------------

def _F_direct(p, r, w):
    # phase of s + w/s over units u mod p^M with s = p^-r u
    m = -w.v
    M = max(r, m - r) + 1
    total = 0j
    for u in range(p**M):
        if u % p == 0:
            continue
        s = PadicNumber(p, -r, u, M + 4)
        ph = (s + w / s)
        frac = Fraction(0)
        if ph.v < 0:
            frac = Fraction(ph.unit_mod(-ph.v), p ** (-ph.v))
        total += complex(math.cos(2 * math.pi * frac), math.sin(2 * math.pi * frac))
    return total / p**M


@pytest.mark.parametrize("p", [3, 5])
def test_F_kernel_against_direct_float_sum(p):
    rng = random.Random(p)
    for _ in range(15):
        m = rng.randint(2, 4)
        r = rng.randint(1, m - 1)
        w = PadicNumber(p, -m, rng.choice([u for u in range(1, p**3) if u % p]), 20)
        assert F_kernel(r, w) == pytest.approx(_F_direct(p, r, w).real, abs=1e-9)


def test_F_kernel_sally_regime_and_bound():
    p = 3
    for m in range(2, 6):
        for r in range(1, m):
            for u in (1, 2, 4, 5, 7):
                w = PadicNumber(p, -m, u, 20)
                val = F_kernel_exact(r, w)
                if m % 2 or 2 * r != m:
                    assert val.is_zero()
                assert abs(F_kernel(r, w)) <= 1 - 1 / p + 1e-12


def test_F_kernel_errors():
    with pytest.raises(ValueError):
        F_kernel(1, PadicNumber.zero(3))
    with pytest.raises(ValueError):
        F_kernel(0, P(Fraction(1, 9), 3))
    with pytest.raises(OddPrimeError):
        F_kernel(1, P(Fraction(1, 4), 2))


# -- J1 ------------------------------------------------------------------------------------

def test_worked_value():
    x, y = P(1, 3), PadicNumber.zero(3)
    assert J1_exact(x, y, 2).as_rational() == Fraction(5, 3)
    assert J1_bruteforce(x, y, 2).as_rational() == Fraction(5, 3)
    assert padic_mu_hat_exact(x, y, 2).as_rational() == Fraction(1, 2)
    assert J1_exact(PadicNumber.zero(3), x, 2).as_rational() == Fraction(5, 3)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_origin(p):
    for T in (1, 3):
        z = PadicNumber.zero(p)
        assert J1_exact(z, z, T).as_rational() == (2 * T + 1) * (1 - Fraction(1, p))
        assert padic_mu_hat(z, 0, T) == pytest.approx(1)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_J1_exact_matches_oracle_random(p):
    rng = random.Random(10 + p)
    for _ in range(40):
        T = rng.randint(1, 3)
        x = Fraction(rng.randint(1, 60), rng.randint(1, 60)) * p ** rng.randint(-2, 1)
        y = Fraction(rng.randint(-60, 60), rng.randint(1, 60)) * p ** rng.randint(-2, 1)
        ex = J1_exact(P(x, p), P(y, p), T)
        assert ex == J1_bruteforce(P(x, p), P(y, p), T)
        assert ex == J1_exact(P(x, p), P(y, p), T, use_sally=False)
        assert float(ex) >= -2


def test_J1_accepts_rational_companion_and_rejects_plain():
    assert J1_exact(P(1, 3), 0, 2) == J1_exact(P(1, 3), P(0, 3), 2)
    with pytest.raises(TypeError):
        J1_exact(1, 0, 2)
    with pytest.raises(OverflowError):
        J1_bruteforce(P(Fraction(1, 3**20), 3), P(1, 3), 1)


def test_shell_value_closed_form_by_brute_force():
    p = 5
    for n in range(0, 3):
        a = P(Fraction(1, p**n), p)
        for k in range(-3, 4):
            # integral over C_k of psi(a s) ds/||s|| via one guard digit
            ex = max(k + n, 0)
            M = ex + 1
            total = 0j
            for u in range(p**M):
                if u % p:
                    phase = Fraction(u % p**ex, p**ex) if ex > 0 else 0
                    total += complex(math.cos(2 * math.pi * phase), math.sin(2 * math.pi * phase))
            assert float(shell_value(p, n, k)) == pytest.approx((total / p**M).real, abs=1e-12)
