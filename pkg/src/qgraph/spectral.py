"""Hoffman-type chromatic lower bounds from the extremes of mu_hat_T.

``chi >= 1 - sup / inf`` where ``sup = 1`` (a probability measure) and
``inf`` is either the analytic floor or a searched minimum.  Searched
minima are always labeled as estimates together with their search spec.
"""
from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np
from scipy.optimize import minimize

from qgraph.localfield import PadicNumber
from qgraph.oscint.padic import J1_exact, OddPrimeError, PadicChoppedMeasure
from qgraph.oscint.real import DEFAULT_RULE, real_mu_hat_many
from qgraph import backend

SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)


def hoffman_bound(inf: float, sup: float = 1.0) -> float:
    """``1 - sup / inf``; needs ``inf < 0 < sup``."""
    if not inf < 0:
        raise ValueError("inf must be negative: the measure shows no sign change")
    if not sup > 0:
        raise ValueError("sup must be positive")
    return 1 - sup / inf


def real_floor(T: float) -> float:
    """Analytic lower bound ``-8 sqrt(2/pi) / T`` for the real mu_hat_T."""
    return -8 * SQRT_2_OVER_PI / T


def real_analytic_bound(T: float) -> float:
    return 1 + T / (8 * SQRT_2_OVER_PI)


def padic_floor(p: int, T: int) -> Fraction:
    return PadicChoppedMeasure(p, T).floor


def padic_analytic_bound(T: int) -> Fraction:
    """``1 + (2T + 1) / 4``, valid for every odd p."""
    return 1 + Fraction(2 * T + 1, 4)


@dataclass(frozen=True)
class GridSpec:
    lo: float = -50.0
    hi: float = 50.0
    resolution: int = 400
    refine_starts: int = 8

    def axis(self) -> np.ndarray:
        xs = np.linspace(self.lo, self.hi, self.resolution)
        if self.lo == -self.hi:
            # exact antisymmetry, so grid images under (x,y) -> (-x,-y) are grid points
            xs = (xs - xs[::-1]) / 2
        return xs


@dataclass(frozen=True)
class CorpusSpec:
    """Valuations in ``[-T - margin, T + margin]`` plus zero; units enumerated mod ``p**depth``."""

    margin: int = 2
    depth: int = 2


@dataclass
class SpectralBoundReport:
    place: str
    T: float
    sup_mu_hat: float
    inf_estimate: float | None
    method: str
    witness: tuple | None
    analytic_bound: float
    analytic_floor: float
    searched_bound: float | None
    floor_ok: bool
    p: int | None = None
    search: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def to_json(self) -> dict:
        out = asdict(self)
        out["witness"] = list(self.witness) if self.witness is not None else None
        return out


def _representatives(n: int, symmetric: bool):
    """Index pairs, one per orbit of (i,j) -> (j,i), (n-1-i, n-1-j)."""
    i, j = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    i, j = i.ravel(), j.ravel()
    if not symmetric:
        return i, j
    keys = np.stack([i * n + j, j * n + i, (n - 1 - i) * n + (n - 1 - j), (n - 1 - j) * n + (n - 1 - i)])
    keep = keys[0] == keys.min(axis=0)
    return i[keep], j[keep]


def _parallel_mu_hat(T, xs, ys, workers: int, rule=DEFAULT_RULE) -> np.ndarray:
    if workers <= 1 or len(xs) < 2 * workers:
        return real_mu_hat_many(T, xs, ys, rule)
    parts = np.array_split(np.arange(len(xs)), 4 * workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        chunks = list(pool.map(lambda idx: real_mu_hat_many(T, xs[idx], ys[idx], rule), parts))
    return np.concatenate(chunks)


def real_grid_minimum(T: float, grid: GridSpec = GridSpec(), workers: int = 1):
    """Coarse minimum of mu_hat_T over the grid: ``(value, (x, y), points_evaluated)``."""
    xs = grid.axis()
    n = len(xs)
    symmetric = bool(np.all(xs == -xs[::-1]))
    ii, jj = _representatives(n, symmetric)
    vals = _parallel_mu_hat(T, xs[ii], xs[jj], workers)
    k = int(np.argmin(vals))
    return float(vals[k]), (float(xs[ii[k]]), float(xs[jj[k]])), len(vals), (xs, ii, jj, vals)


def _refine(T: float, starts, step: float):
    kern = backend.kernels
    args = DEFAULT_RULE.args()

    def f(z):
        return kern.mu_hat_point(float(z[0]), float(z[1]), float(T), *args)

    best_val, best_pt = math.inf, None
    for x0 in starts:
        simplex = np.array([x0, x0 + [step, 0.0], x0 + [0.0, step]])
        res = minimize(f, x0, method="Nelder-Mead",
                       options={"initial_simplex": simplex, "xatol": 1e-7, "fatol": 1e-12, "maxiter": 400})
        if res.fun < best_val:
            best_val, best_pt = float(res.fun), (float(res.x[0]), float(res.x[1]))
    return best_val, best_pt


def real_chopped_bound(T: float, grid: GridSpec = GridSpec(), workers: int = 1) -> SpectralBoundReport:
    """Grid search plus Nelder-Mead refinement for inf mu_hat_T over R^2."""
    if not T > 0:
        raise ValueError("T must be positive")
    t0 = time.perf_counter()
    coarse, witness, evaluated, (xs, ii, jj, vals) = real_grid_minimum(T, grid, workers)
    inf_est, point = coarse, witness
    if grid.refine_starts > 0:
        order = np.argsort(vals, kind="stable")[: grid.refine_starts]
        starts = [np.array([xs[ii[k]], xs[jj[k]]]) for k in order]
        step = float(xs[1] - xs[0]) if len(xs) > 1 else 1.0
        refined, rpoint = _refine(T, starts, step)
        if refined < inf_est:
            inf_est, point = refined, rpoint
    floor = real_floor(T)
    notes = []
    searched = None
    if inf_est < 0:
        searched = hoffman_bound(inf_est)
    else:
        notes.append("bound not established numerically: no negative value found")
    return SpectralBoundReport(
        place="R", T=T, sup_mu_hat=1.0, inf_estimate=inf_est, method="grid", witness=point,
        analytic_bound=real_analytic_bound(T), analytic_floor=floor, searched_bound=searched,
        floor_ok=inf_est >= floor - 1e-6,
        search={"extent": [grid.lo, grid.hi], "resolution": grid.resolution,
                "refine_starts": grid.refine_starts, "points_evaluated": evaluated,
                "coarse_min": coarse, "coarse_witness": list(witness), "workers": workers,
                "backend": backend.NAME, "seconds": round(time.perf_counter() - t0, 3)},
        notes=notes,
    )


# -- p-adic corpus ----------------------------------------------------------------------------

def _units(p: int, depth: int):
    return [u for u in range(1, p**depth) if u % p]


def padic_corpus(p: int, T: int, spec: CorpusSpec = CorpusSpec()):
    """Deterministic corpus stratified by valuation pair, unit parts mod ``p**depth``.

    Yields ``(vx, ux, vy, uy)`` meaning ``x = p**vx * ux``; ``vx is None`` marks x = 0.
    """
    vals = [None] + list(range(-T - spec.margin, T + spec.margin + 1))
    units = _units(p, spec.depth)
    for vx in vals:
        for vy in vals:
            for ux in ([0] if vx is None else units):
                for uy in ([0] if vy is None else units):
                    yield vx, ux, vy, uy


def corpus_point(p: int, point) -> tuple[Fraction, Fraction]:
    vx, ux, vy, uy = point
    q = Fraction(p)
    return (Fraction(0) if vx is None else q**vx * ux,
            Fraction(0) if vy is None else q**vy * uy)


def _j1_key(p: int, T: int, point):
    """Data that determines J1 through the shell decomposition (memo key)."""
    vx, ux, vy, uy = point
    if vx is None or vy is None:
        return ("axis", vy if vx is None else vx)
    n = -(vx + vy)
    # the only twisted shell that survives is k = -n/2, inside [-T + v(y), T + v(y)]
    if n >= 2 and n % 2 == 0 and -T + vy <= -n // 2 <= T + vy:
        return ("twisted", n, vy, ux * uy % p ** (n // 2))
    return ("plain", n, vy)


def padic_chopped_bound(p: int, T: int, spec: CorpusSpec = CorpusSpec()) -> SpectralBoundReport:
    """Minimum of the exact mu_hat_T over the stratified corpus."""
    if p == 2:
        raise OddPrimeError("p-adic bounds are restricted to odd primes; p=2 is rejected")
    measure = PadicChoppedMeasure(p, T)
    t0 = time.perf_counter()
    memo = {}
    best, witness, pairs = None, None, 0
    j1_violations = floor_violations = 0
    scale = 2 / measure.L
    for point in padic_corpus(p, T, spec):
        pairs += 1
        key = _j1_key(p, T, point)
        if key not in memo:
            x, y = corpus_point(p, point)
            j1 = J1_exact(PadicNumber.from_rational(x, p), PadicNumber.from_rational(y, p), T)
            j1f = float(j1)
            mu = float(j1.scale(scale))
            j1_violations += j1f < -2 - 1e-12
            floor_violations += mu < float(measure.floor) - 1e-12
            memo[key] = mu
        mu = memo[key]
        if best is None or mu < best:
            best, witness = mu, tuple(str(c) for c in corpus_point(p, point))
    if pairs == 0:
        raise ValueError("empty corpus")
    searched = hoffman_bound(best) if best < 0 else None
    return SpectralBoundReport(
        place=f"Qp:{p}", p=p, T=T, sup_mu_hat=1.0, inf_estimate=best, method="exact-corpus",
        witness=witness, analytic_bound=float(padic_analytic_bound(T)),
        analytic_floor=float(measure.floor), searched_bound=searched,
        floor_ok=j1_violations == 0 and floor_violations == 0,
        search={"valuations": [-T - spec.margin, T + spec.margin], "unit_depth": spec.depth,
                "pairs": pairs, "distinct_values": len(memo), "L": str(measure.L),
                "J1_violations": j1_violations, "floor_violations": floor_violations,
                "seconds": round(time.perf_counter() - t0, 3)},
        notes=[] if searched else ["bound not established on the corpus: no negative value found"],
    )


def bound_table(place: str, Ts, p: int | None = None, grid: GridSpec | None = None,
                corpus: CorpusSpec | None = None, workers: int = 1, search: bool = True) -> list[dict]:
    """Rows ``(T, analytic_bound, searched_bound)``; searched bound is None when not computed."""
    rows = []
    for T in Ts:
        if place == "R":
            analytic = real_analytic_bound(T)
            searched = real_chopped_bound(T, grid or GridSpec(), workers).searched_bound if search else None
        else:
            analytic = float(padic_analytic_bound(T))
            searched = padic_chopped_bound(p, T, corpus or CorpusSpec()).searched_bound if search else None
        rows.append({"T": T, "analytic_bound": analytic, "searched_bound": searched})
    return rows
