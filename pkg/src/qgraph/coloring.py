"""Explicit finite colorings of quadratic graphs and clique certificates.

For an anisotropic form the unit sphere ``S = {Q(v) = 1}`` sits in an
annulus of the max-norm.  Over R a dilated box coloring
``x -> floor(x_i) mod m`` is proper; over Q_p the digits of exponents
``-m..0`` of each coordinate give a proper coloring with ``p^((m+1)n)``
colors.  Propriety is checked by sampling edges ``(w, w + d)``, ``d in S``.
"""
from __future__ import annotations

import math
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from qgraph.localfield import (
    PadicNumber,
    digit_truncation,
    is_prime,
    is_square,
    padic_sqrt,
    split_rational,
)
from qgraph.qform import ANISOTROPIC, ISOTROPIC, QuadraticSpace, diagonalize, isotropy_classify, qp

SAMPLER_PRECISION = 24


class EmptySphereError(ValueError):
    """Q(v) = 1 has no solution at this place, so the graph has no edges."""


@dataclass(frozen=True)
class AnnulusRadii:
    """Max-norm window containing the difference set.

    Real: ``c1 <= ||d||_inf <= c2``.  p-adic: ``p^k1 <= ||d||_inf <= p^k2``.
    """

    kind: str
    c1: float
    c2: float
    p: int | None = None
    k1: int | None = None
    k2: int | None = None

    @classmethod
    def padic(cls, p: int, k1: int, k2: int) -> AnnulusRadii:
        if k1 > k2:
            raise ValueError("empty shell window")
        return cls("padic", float(p) ** k1, float(p) ** k2, p, k1, k2)

    def contains(self, d) -> bool:
        if self.kind == "real":
            r = float(np.max(np.abs(d)))
            return self.c1 - 1e-12 <= r <= self.c2 + 1e-12
        k = max(-x.v for x in d if not x.is_zero())
        return self.k1 <= k <= self.k2

    def scaled(self, lam) -> AnnulusRadii:
        """Radii of ``lam * S``: real ``lam > 0``, p-adic ``lam`` a power exponent shift ``j`` for ``p^-j``."""
        if self.kind == "real":
            return AnnulusRadii("real", self.c1 * lam, self.c2 * lam)
        return AnnulusRadii.padic(self.p, self.k1 + lam, self.k2 + lam)


# -- annulus computation -------------------------------------------------------

def _real_radii(Q: QuadraticSpace) -> AnnulusRadii:
    G = np.array([[float(a) for a in row] for row in Q.gram])
    eig = np.linalg.eigvalsh(G)
    if eig[-1] <= 0:
        raise EmptySphereError("negative definite form: Q(v) = 1 has no real solution")
    if eig[0] < 0:
        raise ValueError("indefinite form is isotropic over R")
    # ||v||_2^2 lies in [1/lmax, 1/lmin]; ||v||_inf in [||v||_2/sqrt(n), ||v||_2]
    lo, hi = eig[0], eig[-1]
    return AnnulusRadii("real", 1.0 / math.sqrt(Q.n * hi), 1.0 / math.sqrt(lo))


def _cancellation_depth_2adic(diag, depth: int = 8) -> int:
    """Largest ``v(Q(x)) - min_i v(a_i x_i^2)`` over Q_2^n, by residue enumeration.

    Coefficients are first reduced to valuation 0 or 1 by square factors.
    Raises if a class reaches ``depth`` (the form would be isotropic).
    """
    mod = 2**depth
    coeffs = []
    for a in diag:
        e, u = split_rational(a, 2)
        coeffs.append(2 ** (e % 2) * u.numerator * pow(u.denominator, -1, mod) % mod)
    # states: (Q mod 2^depth, min term valuation capped at depth)
    states = {(0, depth)}
    for a in coeffs:
        terms = {}
        for x in range(mod):
            t = a * x * x % mod
            tv = depth if t == 0 else (t & -t).bit_length() - 1
            terms[t, tv] = True
        states = {((s + t) % mod, min(sv, tv)) for s, sv in states for t, tv in terms}
    worst = 0
    for s, sv in states:
        if sv > 1:
            continue
        qv = depth if s == 0 else (s & -s).bit_length() - 1
        if qv >= depth:
            raise ValueError("cancellation reaches the enumeration depth; form looks isotropic")
        worst = max(worst, qv - sv)
    return worst


def cancellation_depth(diag, p: int) -> int:
    """Bound on ``v(Q(x)) - min_i v(a_i x_i^2)`` for an anisotropic diagonal form."""
    if p != 2:
        # anisotropic => both residue forms (even / odd valuations) are anisotropic mod p
        return 0
    return _cancellation_depth_2adic(diag)


def _padic_radii(Q: QuadraticSpace) -> tuple[AnnulusRadii, bool]:
    p = Q.place.p
    P, diag = diagonalize(Q)
    # an anisotropic Q represents 1 exactly when Q + <-1> is isotropic
    if isotropy_classify(QuadraticSpace.diagonal(Q.place, list(diag) + [-1])) != ISOTROPIC:
        raise EmptySphereError(f"Q(v) = 1 has no solution over Q_{p}")
    e = [split_rational(a, p)[0] for a in diag]
    D = cancellation_depth(diag, p)
    # Q(z) = 1 forces the minimal term valuation s into [-D, 0]; the shell of z is
    # max_i (e_i - s_i) / 2 with s_i >= s, attained by a term with s_i = s
    lows = [(ei - s) // 2 for ei in e for s in range(-D, 1) if (ei - s) % 2 == 0]
    if not lows:
        raise EmptySphereError(f"Q(v) = 1 has no solution over Q_{p}")
    k1 = min(lows)
    k2 = max((ei + D) // 2 for ei in e)
    diagonal = all(Q.gram[i][j] == 0 for i in range(Q.n) for j in range(Q.n) if i != j)
    if not diagonal:
        # v = P z: widen the window by the p-adic sizes of P and P^-1
        Pinv = _inverse(P)
        grow = max(-split_rational(a, p)[0] for row in P for a in row if a != 0)
        shrink = max(-split_rational(a, p)[0] for row in Pinv for a in row if a != 0)
        k1, k2 = k1 - shrink, k2 + grow
    return AnnulusRadii.padic(p, k1, k2), not diagonal


def _inverse(P):
    n = len(P)
    A = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(P)]
    for c in range(n):
        piv = next(r for r in range(c, n) if A[r][c] != 0)
        A[c], A[piv] = A[piv], A[c]
        A[c] = [a / A[c][c] for a in A[c]]
        for r in range(n):
            if r != c and A[r][c] != 0:
                f = A[r][c]
                A[r] = [a - f * b for a, b in zip(A[r], A[c])]
    return [row[n:] for row in A]


def sphere_annulus(Q: QuadraticSpace) -> AnnulusRadii:
    """Max-norm window of the unit sphere of an anisotropic form."""
    if isotropy_classify(Q) != ANISOTROPIC:
        raise ValueError("sphere_annulus needs an anisotropic form")
    if Q.place.kind == "R":
        return _real_radii(Q)
    if Q.place.kind == "Qp":
        return _padic_radii(Q)[0]
    raise ValueError(f"no annulus at place {Q.place}")


def chopped_hyperbola_annulus(T, p: int | None = None) -> AnnulusRadii:
    """Window of ``{(s, 1/s)}`` with ``|log ||s|| | <= T`` (real) or ``||s|| in [p^-T, p^T]``."""
    if p is None:
        return AnnulusRadii("real", 1.0, math.exp(T))
    return AnnulusRadii.padic(p, 0, int(T))


# -- colorings -----------------------------------------------------------------------

@dataclass(frozen=True)
class ColoringScheme:
    kind: str
    n: int
    m: int
    dilation: float
    p: int | None = None
    radii: AnnulusRadii | None = field(default=None, compare=False)

    @property
    def colors(self) -> int:
        if self.kind == "real-box":
            return self.m**self.n
        return self.p ** ((self.m + 1) * self.n)

    def color(self, x) -> tuple:
        """Color of a point (floats for real-box, PadicNumbers or rationals for padic-digit)."""
        if self.kind == "real-box":
            return tuple(int(math.floor(self.dilation * float(a))) % self.m for a in x)
        j = int(self.dilation)
        out = []
        for a in x:
            if not isinstance(a, PadicNumber):
                a = PadicNumber.from_rational(Fraction(a), self.p)
            out.append(digit_truncation(_shift(a, -j), self.m))
        return tuple(out)

    def color_array(self, X: np.ndarray) -> np.ndarray:
        """Vectorized real-box colors, one row per point."""
        return np.mod(np.floor(self.dilation * X), self.m).astype(np.int64)

    def to_json(self) -> dict:
        out = {"kind": self.kind, "n": self.n, "m": self.m, "colors": self.colors, "dilation": self.dilation}
        if self.p is not None:
            out["p"] = self.p
            out["dilation"] = f"p^-{int(self.dilation)}"
        if self.radii is not None:
            r = self.radii
            out["radii"] = {"c1": r.c1, "c2": r.c2} if r.kind == "real" else {"k1": r.k1, "k2": r.k2}
        return out


def _shift(a: PadicNumber, j: int) -> PadicNumber:
    """``a * p^j`` without touching the digits."""
    if a.is_exact_zero:
        return a
    return PadicNumber(a.p, a.v + j, a.unit, a.prec, a.cap)


def build_box_coloring(radii: AnnulusRadii, n: int, m: int | None = None) -> ColoringScheme:
    """Dilate so ``c1 = 1``, then color by ``floor(x_i) mod m`` with the least ``m > c2 + 2``."""
    if radii.kind != "real":
        raise ValueError("box coloring needs real radii")
    lam = 1.0 / radii.c1
    scaled = radii.scaled(lam)
    if m is None:
        m = math.floor(scaled.c2 + 2) + 1
    return ColoringScheme("real-box", n, m, lam, radii=scaled)


def build_digit_coloring(radii: AnnulusRadii, n: int, p: int | None = None, m: int | None = None) -> ColoringScheme:
    """Dilate by ``p^-j`` so the window starts at ``p^1``, then keep digits ``-m..0``."""
    if radii.kind != "padic":
        raise ValueError("digit coloring needs p-adic radii")
    p = p or radii.p
    if p != radii.p:
        raise ValueError("prime mismatch")
    j = 1 - radii.k1
    scaled = radii.scaled(j)
    if m is None:
        # least m with p^m >= c2 = p^k2
        m = scaled.k2
    return ColoringScheme("padic-digit", n, m, j, p, radii=scaled)


def undersized(scheme: ColoringScheme) -> ColoringScheme:
    """A deliberately too small parameter, used as a negative control."""
    if scheme.kind == "real-box":
        m = max(1, math.ceil(scheme.radii.c2 - 1))
    else:
        m = max(0, scheme.m - 1)
    return ColoringScheme(scheme.kind, scheme.n, m, scheme.dilation, scheme.p, scheme.radii)


# -- samplers ------------------------------------------------------------------------------

class RealSphereSampler:
    """Points of ``{Q = 1}`` for a positive definite form: ``g / sqrt(Q(g))``, g Gaussian."""

    def __init__(self, Q: QuadraticSpace):
        self.G = np.array([[float(a) for a in row] for row in Q.gram])
        self.n = Q.n

    def draw(self, rng: np.random.Generator, k: int) -> np.ndarray:
        g = rng.standard_normal((k, self.n))
        q = np.einsum("ki,ij,kj->k", g, self.G, g)
        return g / np.sqrt(q)[:, None]


class RealHyperbolaSampler:
    """``(s, 1/s)`` with ``s = +-e^t``, t uniform on ``[-T, T]``."""

    n = 2

    def __init__(self, T: float):
        self.T = T

    def draw(self, rng: np.random.Generator, k: int) -> np.ndarray:
        s = np.exp(rng.uniform(-self.T, self.T, k)) * rng.choice([-1.0, 1.0], k)
        return np.stack([s, 1.0 / s], axis=1)


def _random_unit(rng: random.Random, p: int, prec: int) -> int:
    while True:
        u = rng.randrange(1, p**prec)
        if u % p:
            return u


class PadicSphereSampler:
    """Points of ``{Q = 1}`` over Q_p: random v rescaled by ``sqrt(1/Q(v))`` (Hensel lift)."""

    def __init__(self, Q: QuadraticSpace, prec: int = SAMPLER_PRECISION, max_tries: int = 10_000):
        self.Q = Q
        self.p = Q.place.p
        self.n = Q.n
        self.prec = prec
        self.max_tries = max_tries
        # Gram entries converted once; Q(v) is evaluated for every draw
        self._terms = [(i, j, PadicNumber.from_rational(g, self.p, prec))
                       for i, row in enumerate(Q.gram) for j, g in enumerate(row) if g != 0]
        # wide enough for any term to dominate after the final rescaling
        vals = [t.v for _, _, t in self._terms]
        self.spread = 1 + (max(vals) - min(vals) + 1) // 2

    def _q(self, v):
        total = PadicNumber.zero(self.p, self.prec)
        for i, j, g in self._terms:
            total = total + v[i] * v[j] * g
        return total

    def draw_one(self, rng: random.Random):
        p, prec = self.p, self.prec
        for _ in range(self.max_tries):
            v = []
            for _ in range(self.n):
                if rng.random() < 0.15:
                    v.append(PadicNumber.zero(p, prec))
                else:
                    v.append(PadicNumber(p, rng.randint(-self.spread, self.spread), _random_unit(rng, p, prec), prec, prec))
            q = self._q(v)
            if q.is_zero():
                continue
            inv = 1 / q
            if is_square(inv):
                r = padic_sqrt(inv)
                return [a * r for a in v]
        raise RuntimeError("sphere sampler exhausted its budget")

    def draw(self, rng: random.Random, k: int):
        return [self.draw_one(rng) for _ in range(k)]


class PadicHyperbolaSampler:
    """``(s, 1/s)`` with ``||s|| = p^k``, k uniform in ``[-T, T]``, random unit digits."""

    n = 2

    def __init__(self, p: int, T: int, prec: int = SAMPLER_PRECISION):
        self.p, self.T, self.prec = p, T, prec

    def draw_one(self, rng: random.Random):
        k = rng.randint(-self.T, self.T)
        s = PadicNumber(self.p, -k, _random_unit(rng, self.p, self.prec), self.prec, self.prec)
        return [s, 1 / s]

    def draw(self, rng: random.Random, k: int):
        return [self.draw_one(rng) for _ in range(k)]


# -- propriety check -----------------------------------------------------------------------

@dataclass
class VerificationReport:
    samples: int
    violations: int
    colors: int
    seed: int
    example: list | None = None

    @property
    def ok(self) -> bool:
        return self.violations == 0

    def to_json(self) -> dict:
        return {"samples": self.samples, "violations": self.violations, "colors": self.colors,
                "seed": self.seed, "proper": self.ok, "example": self.example}


def _chunks(samples: int, size: int):
    out = []
    while samples > 0:
        out.append(min(size, samples))
        samples -= size
    return out


def _real_chunk(scheme, sampler, seed, k):
    rng = np.random.default_rng(seed)
    d = sampler.draw(rng, k)
    # base points spread over many color periods
    span = 4.0 * scheme.m / scheme.dilation
    w = rng.uniform(-span, span, (k, scheme.n))
    same = np.all(scheme.color_array(w) == scheme.color_array(w + d), axis=1)
    bad = np.nonzero(same)[0]
    example = None
    if len(bad):
        i = bad[0]
        example = [w[i].tolist(), (w[i] + d[i]).tolist()]
    return int(same.sum()), example


def _padic_chunk(scheme, sampler, seed, k):
    rng = random.Random(seed)
    p, prec = scheme.p, sampler.prec
    bad, example = 0, None
    for d in sampler.draw(rng, k):
        w = [PadicNumber(p, rng.randint(-scheme.m - 2, 2), _random_unit(rng, p, prec), prec, prec)
             for _ in range(scheme.n)]
        if scheme.color(w) == scheme.color([a + b for a, b in zip(w, d)]):
            bad += 1
            if example is None:
                example = [[a.serialize(6) for a in w], [a.serialize(6) for a in d]]
    return bad, example


def verify_proper(scheme: ColoringScheme, sampler, samples: int, seed: int = 0,
                  workers: int = 1, chunk: int = 5000) -> VerificationReport:
    """Sample edges ``(w, w + d)`` and count monochromatic ones.

    Chunks get seeds from one SeedSequence, so the count does not depend on
    ``workers``.
    """
    if samples < 1:
        raise ValueError("samples must be positive")
    sizes = _chunks(samples, chunk)
    seeds = [int(s.generate_state(1)[0]) for s in np.random.SeedSequence(seed).spawn(len(sizes))]
    work = _real_chunk if scheme.kind == "real-box" else _padic_chunk
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        results = list(pool.map(lambda a: work(scheme, sampler, *a), zip(seeds, sizes)))
    violations = sum(r[0] for r in results)
    example = next((r[1] for r in results if r[1] is not None), None)
    return VerificationReport(samples, violations, scheme.colors, seed, example)


def sampled_radii_ok(radii: AnnulusRadii, sampler, samples: int, seed: int = 0) -> bool:
    """Every sampled difference vector lies in the claimed window."""
    if radii.kind == "real":
        pts = sampler.draw(np.random.default_rng(seed), samples)
        r = np.max(np.abs(pts), axis=1)
        return bool(np.all(r >= radii.c1 - 1e-12) and np.all(r <= radii.c2 + 1e-12))
    rng = random.Random(seed)
    return all(radii.contains(d) for d in sampler.draw(rng, samples))


# -- cliques -------------------------------------------------------------------------------

@dataclass
class CliqueCertificate:
    vertices: list
    values: dict

    @property
    def size(self) -> int:
        return len(self.vertices)

    def max_error(self) -> float:
        return max((abs(v - 1.0) for v in self.values.values()), default=0.0)

    def to_json(self) -> dict:
        return {"size": self.size, "vertices": self.vertices,
                "max_error": self.max_error(),
                "values": {f"{i},{j}": v for (i, j), v in self.values.items()}}


def simplex_clique(n: int, tol: float = 1e-9) -> CliqueCertificate:
    """Vertices of a unit-side regular simplex in R^n: a clique of size n + 1 for sum x_i^2."""
    if n < 1:
        raise ValueError("n must be positive")
    verts = [np.zeros(n)]
    for i in range(1, n + 1):
        c = np.mean(verts, axis=0)
        r2 = float(np.sum((c - verts[0]) ** 2))
        v = c.copy()
        v[i - 1] = math.sqrt(1.0 - r2)
        verts.append(v)
    values = {}
    for i in range(n + 1):
        for j in range(i + 1, n + 1):
            values[i, j] = float(np.sum((verts[i] - verts[j]) ** 2))
    cert = CliqueCertificate([v.tolist() for v in verts], values)
    if cert.max_error() > tol:
        raise AssertionError(f"simplex pairwise values off by {cert.max_error()}")
    return cert


def clique_upper(n: int) -> int:
    return n + 1


# -- table for x^2 + y^2 over Q_p, p = 3 mod 4 -----------------------------------------------

def sum_of_squares_table(max_p: int = 50) -> list[dict]:
    """Digit-coloring color counts of ``x^2 + y^2`` over Q_p for primes ``p = 3 mod 4``."""
    rows = []
    for p in range(3, max_p + 1):
        if not (is_prime(p) and p % 4 == 3):
            continue
        Q = QuadraticSpace.diagonal(qp(p), [1, 1])
        scheme = build_digit_coloring(sphere_annulus(Q), 2)
        rows.append({"p": p, "m": scheme.m, "colors": scheme.colors})
    return rows
