"""Embedding of the hyperbola graph into the regular graph on GL_2.

Two invertible matrices are adjacent in the regular graph when
``det(A + B) = 0``.  The map ``(x, y) -> a_{x,y}`` sends hyperbola-graph
edges, ``(x2 - x1)(y2 - y1) = 1``, exactly to such pairs.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class RegularVertex:
    """A 2x2 matrix ``((a, b), (c, d))`` with exact rational entries."""

    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction

    @property
    def det(self) -> Fraction:
        return self.a * self.d - self.b * self.c

    def __add__(self, other: RegularVertex) -> RegularVertex:
        return RegularVertex(self.a + other.a, self.b + other.b, self.c + other.c, self.d + other.d)

    def rows(self):
        return ((self.a, self.b), (self.c, self.d))


def embed(x, y) -> RegularVertex:
    """``a_{x,y} = ((1 - 4xy, -2x), (2y, 1))``, a product of two unipotents (det 1)."""
    x, y = Fraction(x), Fraction(y)
    v = RegularVertex(1 - 4 * x * y, -2 * x, 2 * y, Fraction(1))
    assert v.det == 1
    return v


def det_sum(p1, p2) -> Fraction:
    """``det(a_{x1,y1} + a_{x2,y2})``, checked against ``4 - 4(x2 - x1)(y2 - y1)``."""
    (x1, y1), (x2, y2) = ((Fraction(a), Fraction(b)) for a, b in (p1, p2))
    value = (embed(x1, y1) + embed(x2, y2)).det
    expected = 4 - 4 * (x2 - x1) * (y2 - y1)
    if value != expected:
        raise AssertionError(f"det identity fails at {p1}, {p2}: {value} != {expected}")
    return value


def adjacency(x1, y1, x2, y2) -> bool:
    """Hyperbola-graph adjacency ``(x2 - x1)(y2 - y1) = 1``."""
    return (Fraction(x2) - Fraction(x1)) * (Fraction(y2) - Fraction(y1)) == 1


def in_alternative_form(v: RegularVertex) -> bool:
    """Whether ``v`` has the shape ``((s, t), (u, 1))`` with ``s - t u = 1``."""
    return v.d == 1 and v.a - v.b * v.c == 1


def compute_Cn(n: int) -> int:
    """``sum_{k=0}^{n} k! * binom(n, k)^2``."""
    if n < 1:
        raise ValueError("n must be positive")
    return sum(math.factorial(k) * math.comb(n, k) ** 2 for k in range(n + 1))


def random_rational(rng: random.Random, height: int = 20) -> Fraction:
    return Fraction(rng.randint(-height, height), rng.randint(1, height))


@dataclass
class RegularCheckReport:
    samples: int
    failures: int
    adjacent_pairs: int
    records: list

    def to_json(self, max_records: int = 10) -> dict:
        return {"samples": self.samples, "failures": self.failures,
                "adjacent_pairs": self.adjacent_pairs, "records": self.records[:max_records]}


def random_quadruples(samples: int, seed: int = 0, height: int = 20):
    """Random rational ``(x1, y1, x2, y2)``; every fourth one is forced onto an edge."""
    rng = random.Random(seed)
    for i in range(samples):
        x1, y1, x2 = (random_rational(rng, height) for _ in range(3))
        if i % 4 == 0:
            dx = random_rational(rng, height) or Fraction(1)
            x2 = x1 + dx
            y2 = y1 + 1 / dx
        else:
            y2 = random_rational(rng, height)
        yield x1, y1, x2, y2


def check_pair(x1, y1, x2, y2) -> dict:
    """``{x1, y1, x2, y2, det, adjacent, ok}`` for one quadruple."""
    record = {"x1": str(x1), "y1": str(y1), "x2": str(x2), "y2": str(y2)}
    try:
        det = det_sum((x1, y1), (x2, y2))
    except AssertionError:
        return {**record, "det": None, "adjacent": adjacency(x1, y1, x2, y2), "ok": False}
    adj = adjacency(x1, y1, x2, y2)
    ok = adj == (det == 0) and in_alternative_form(embed(x1, y1)) and in_alternative_form(embed(x2, y2))
    return {**record, "det": str(det), "adjacent": adj, "ok": ok}


def check_identity(samples: int, seed: int = 0, height: int = 20) -> RegularCheckReport:
    """Check the det identity and the adjacency correspondence on random rational quadruples."""
    records = [check_pair(*q) for q in random_quadruples(samples, seed, height)]
    failures = sum(not r["ok"] for r in records)
    adjacent = sum(r["adjacent"] for r in records)
    return RegularCheckReport(samples, failures, adjacent, records)
