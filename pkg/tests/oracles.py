"""Brute-force oracles shared by the unit and acceptance tests."""
import itertools
import random
from fractions import Fraction

import numpy as np

from qgraph.localfield import split_rational


def residue_depth(p: int) -> int:
    # a primitive zero mod p^2 (odd p) or 2^5 Hensel-lifts once valuations are reduced to {0, 1}
    return 3 if p != 2 else 5


def _normalized_coefficient(a: Fraction, p: int, mod: int) -> int:
    # x -> p^-floor(v/2) x leaves p^(v mod 2) * unit
    v, u = split_rational(a, p)
    return p ** (v % 2) * u.numerator * pow(u.denominator, -1, mod) % mod


def residue_isotropic(diag, p: int, k: int | None = None) -> bool:
    """Whether sum a_i x_i^2 = 0 has a primitive solution mod p^k (set reachability)."""
    k = k or residue_depth(p)
    mod = p**k
    xs = np.arange(mod)
    unit = xs % p != 0
    # A: sums with every coordinate divisible by p so far; B: at least one unit coordinate
    A = np.zeros(mod, dtype=bool)
    A[0] = True
    B = np.zeros(mod, dtype=bool)
    for a in diag:
        c = _normalized_coefficient(Fraction(a), p, mod)
        vals = c * xs * xs % mod
        U = np.unique(vals[unit])
        Z = np.unique(vals[~unit])
        newA = np.zeros(mod, dtype=bool)
        newB = np.zeros(mod, dtype=bool)
        for s in Z:
            newA |= np.roll(A, s)
            newB |= np.roll(B, s)
        for s in U:
            newB |= np.roll(A, s) | np.roll(B, s)
        A, B = newA, newB
    return bool(B[0])


def sign_isotropic(diag, height: int = 2) -> bool:
    """Real isotropy via a sign change of Q on small integer vectors."""
    c = np.array([float(a) for a in diag])
    grid = np.array(list(itertools.product(range(-height, height + 1), repeat=len(diag))))
    values = (grid * grid) @ c
    return bool(values.min() < 0 < values.max())


def random_diagonal_corpus(count: int, seed: int, dims=(2, 3, 4, 5)):
    """Small-height nonzero rational coefficient vectors, biased toward interesting primes."""
    rng = random.Random(seed)
    nums = [1, 2, 3, 5, 6, 7, 10, 14, 15, 21]
    out = []
    for _ in range(count):
        n = rng.choice(dims)
        diag = []
        for _ in range(n):
            a = Fraction(rng.choice(nums) * rng.choice((1, -1)), rng.choice((1, 1, 1, 2, 3, 5, 7)))
            diag.append(a)
        out.append(diag)
    return out
