# Primitive periodic-orbit catalogs and the statistics built on them:
# weighted orbit counting against the logarithmic integral, windowed
# orbit sums, and the cumulative weighted counting functions.

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .sft import SubshiftError, primitive_classes


class OrbitError(SubshiftError):
    pass


class CatalogBudget(OrbitError):
    pass


class EmptyWindow(OrbitError):
    pass


class HorizonTooSmall(OrbitError):
    pass


@dataclass(frozen=True)
class OrbitRecord:
    """One primitive orbit class: canonical word, period, and the cycle
    sums of the roof tau (lam), the counting weight f (lam_f), the
    observable g (lam_g) and minus the normalised weight (lam_u)."""

    word: tuple
    n: int
    lam: float
    lam_f: float
    lam_g: float
    lam_u: float


def _cycle_sum(p, word):
    n = len(word)
    d = p.depth
    if d == 1:
        idx = p._index()
        return sum(p.table[idx[(a,)]] for a in word)
    reps = (n + d - 1 + n - 1) // n
    ext = (tuple(word) * reps)[: n + d - 1]
    return sum(p.value_on_word(ext[j: j + d]) for j in range(n))


@dataclass(frozen=True)
class OrbitCatalog:
    """All primitive orbit classes with roof length lam <= horizon.

    Completeness below the horizon follows from the period cap
    floor(horizon / min tau), so every window query inside the horizon is
    exact."""

    spec: object
    horizon: float
    n_cap: int
    records: tuple  # sorted by lam
    lams: np.ndarray

    def window(self, lo, hi):
        # closed on both ends; boundary orbits included
        i = bisect_left(self.lams, lo)
        j = bisect_right(self.lams, hi)
        return self.records[i:j]

    def up_to(self, T):
        return self.records[: bisect_right(self.lams, T)]


def build_catalog(spec, tau, f=None, g=None, f_u=None, horizon=10.0,
                  max_orbits=2000000):
    """Enumerate every primitive orbit class with roof sum at most the
    horizon, storing the cycle sums needed downstream."""
    tau_min = min(tau.table)
    if tau_min <= 0:
        raise OrbitError("roof function must be strictly positive")
    n_cap = int(math.floor(horizon / tau_min))
    if n_cap < 1:
        raise OrbitError("horizon shorter than the fastest orbit")
    if tau.depth == 1:
        # roof is positive, so partial sums only grow: safe to prune
        idx = tau._index()
        cost = {a: tau.table[idx[(a,)]] for a in range(1, spec.k + 1)}

        def prune(partial):
            return sum(cost[a] for a in partial) > horizon
    else:
        prune = None
    recs = []
    for n in range(1, n_cap + 1):
        for w in primitive_classes(spec, n, prune=prune):
            lam = _cycle_sum(tau, w)
            if lam > horizon:
                continue
            lam_f = _cycle_sum(f, w) if f is not None else 0.0
            lam_g = _cycle_sum(g, w) if g is not None else 0.0
            lam_u = -_cycle_sum(f_u, w) if f_u is not None else 0.0
            recs.append(OrbitRecord(word=w, n=n, lam=lam, lam_f=lam_f,
                                    lam_g=lam_g, lam_u=lam_u))
            if len(recs) > max_orbits:
                raise CatalogBudget("orbit budget of %d exceeded at n_cap %d"
                                    % (max_orbits, n_cap))
    recs.sort(key=lambda r: (r.lam, r.n, r.word))
    return OrbitCatalog(spec=spec, horizon=float(horizon), n_cap=n_cap,
                        records=tuple(recs),
                        lams=np.array([r.lam for r in recs]))


def li(x):
    """Logarithmic integral from 2 to x by adaptive quadrature."""
    if x < 2.0:
        raise OrbitError("logarithmic integral needs x >= 2")
    if x == 2.0:
        return 0.0
    val, err = quad(lambda y: 1.0 / math.log(y), 2.0, x, limit=400)
    return float(val)


@dataclass(frozen=True)
class CountingPoint:
    T: float
    value: float
    target: float
    ratio: float


def weighted_orbit_count(catalog, pr, T):
    """Sum of exp(lam_f) over orbits with lam <= T against li(e^(pr T))."""
    if T > catalog.horizon:
        raise OrbitError("T beyond the catalog horizon")
    recs = catalog.up_to(T)
    if len(recs) < 10:
        raise HorizonTooSmall("only %d orbits below T=%g" % (len(recs), T))
    value = float(sum(math.exp(r.lam_f) for r in recs))
    target = li(math.exp(pr * T))
    return CountingPoint(T=T, value=value, target=target,
                         ratio=value / target if target else math.inf)


def counting_ratio_series(catalog, pr, T_grid):
    return [weighted_orbit_count(catalog, pr, T) for T in T_grid]


def delta_schedule(kind, T):
    """Window widths: 'const' -> 1, 'sqrt' -> 4/sqrt(T), 'inv' -> 1/T,
    'exp' -> e^(-T) (allowed, but statistically empty at desk scale)."""
    if kind == "const":
        return 1.0
    if kind == "sqrt":
        return 4.0 / math.sqrt(T)
    if kind == "inv":
        return 1.0 / T
    if kind == "exp":
        return math.exp(-T)
    raise OrbitError("unknown window schedule %r" % kind)


@dataclass(frozen=True)
class WindowPoint:
    T: float
    delta: float
    value: float
    target: float
    rel_err: float
    n_orbits: int


def windowed_orbit_sum(catalog, T, delta, target):
    """(1/delta) * sum over the window [T - delta/2, T + delta/2] of
    lam_g * exp(-lam_u), compared with the expected Gibbs ratio."""
    if T + delta / 2 > catalog.horizon:
        raise OrbitError("window sticks out beyond the catalog horizon")
    recs = catalog.window(T - delta / 2, T + delta / 2)
    if not recs:
        raise EmptyWindow("no orbit lies in the window around T=%g" % T)
    value = float(sum(r.lam_g * math.exp(-r.lam_u) for r in recs)) / delta
    rel = abs(value - target) / abs(target) if target else math.inf
    return WindowPoint(T=T, delta=delta, value=value, target=target,
                       rel_err=rel, n_orbits=len(recs))


def window_series(catalog, T_grid, kind, target):
    return [windowed_orbit_sum(catalog, T, delta_schedule(kind, T), target)
            for T in T_grid]


def exponential_window_report(catalog, T_grid):
    """Probe e^(-T) windows and report how many are empty.

    Exponentially shrinking windows are narrower than the gaps of the
    length spectrum at any reachable T, so they carry no statistics; this
    records that fact instead of pretending to estimate with them."""
    empty = 0
    for T in T_grid:
        delta = delta_schedule("exp", T)
        if T + delta / 2 > catalog.horizon:
            empty += 1
            continue
        if not catalog.window(T - delta / 2, T + delta / 2):
            empty += 1
    return {"kind": "exp", "probed": len(T_grid), "empty": empty,
            "out_of_statistical_reach": empty == len(T_grid)}


@dataclass(frozen=True)
class CumulativePoint:
    T: float
    literal: float
    chebyshev: float


def cumulative_weighted_count(catalog, pr, T):
    """Cumulative counting function over orbit repetitions m with
    exp(m * pr * lam) <= T, in two weight readings.

    literal: each included pair adds lam * exp(pr * lam); its integral
    grows like T^3, and T/2 times the slope tends to T^2/2 * (1/pr).
    chebyshev: each pair adds pr * lam (the log of the orbit norm), the
    classical prime-counting weight whose integral is T^2/2 to leading
    order."""
    if pr <= 0:
        raise OrbitError("needs a positive growth rate")
    lit = 0.0
    cheb = 0.0
    for r in catalog.records:
        m = int(math.floor(math.log(T) / (pr * r.lam))) if T > 1 else 0
        if m > 0:
            lit += m * r.lam * math.exp(pr * r.lam)
            cheb += m * pr * r.lam
    return CumulativePoint(T=T, literal=lit, chebyshev=cheb)


def cumulative_integrated(catalog, pr, T, steps=200):
    """Trapezoid integral of the cumulative count from 0 to T, reported
    next to T^2/2 for both weight readings."""
    grid = np.linspace(0.0, T, steps + 1)
    lits, chebs = [0.0], [0.0]
    for t in grid[1:]:
        cp = cumulative_weighted_count(catalog, pr, t)
        lits.append(cp.literal)
        chebs.append(cp.chebyshev)
    lit = float(np.trapezoid(lits, grid))
    cheb = float(np.trapezoid(chebs, grid))
    return {"T": T, "literal": lit, "chebyshev": cheb, "half_T2": T * T / 2.0}
