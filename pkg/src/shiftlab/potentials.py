# Locally constant potentials: depth-d tables over admissible words,
# Birkhoff sums, Holder seminorms, parameter-scaled norms, depth averaging
# and the periodic-orbit cohomology obstruction.

import math
from dataclasses import dataclass

import numpy as np

from .sft import (InadmissibleWord, SubshiftError, enumerate_words,
                  is_admissible, periodic_point, primitive_classes)


class PotentialError(SubshiftError):
    pass


@dataclass(frozen=True)
class Potential:
    """Real potential constant on cylinders of length `depth`."""

    spec: object
    depth: int
    table: tuple  # values aligned with enumerate_words(spec, depth)
    words: tuple

    @staticmethod
    def from_table(spec, depth, mapping):
        words = enumerate_words(spec, depth)
        missing = [w for w in words if tuple(w) not in mapping]
        if missing:
            raise PotentialError("table misses admissible words, first: %r" % (missing[0],))
        extra = [w for w in mapping if tuple(w) not in set(words)]
        if extra:
            raise PotentialError("table lists inadmissible words, first: %r" % (extra[0],))
        vals = tuple(float(mapping[w]) for w in words)
        return Potential(spec, depth, vals, tuple(words))

    @staticmethod
    def constant(spec, c, depth=1):
        words = enumerate_words(spec, depth)
        return Potential(spec, depth, tuple(float(c) for _ in words), tuple(words))

    def __post_init__(self):
        object.__setattr__(self, "_idx", {w: i for i, w in enumerate(self.words)})

    def _index(self):
        return self._idx

    def value_on_word(self, word):
        """Value on the cylinder of `word`; words shorter than the depth are
        extended periodically (skipping forbidden junctions by falling back
        to the least admissible successor)."""
        if len(word) < self.depth:
            word = _extend_word(self.spec, word, self.depth)
        key = tuple(word[: self.depth])
        idx = self._index()
        if key not in idx:
            raise InadmissibleWord("word not admissible at depth %d: %r" % (self.depth, key))
        return self.table[idx[key]]

    def eval_point(self, x):
        return self.value_on_word(x.first(self.depth))

    def as_mapping(self):
        return dict(zip(self.words, self.table))


def _extend_word(spec, word, depth):
    out = list(word)
    j = 0
    while len(out) < depth:
        cand = word[j % len(word)]
        if spec.allows(out[-1], cand):
            out.append(cand)
        else:
            out.append(spec.successors(out[-1])[0])
        j += 1
    return tuple(out)


def birkhoff_sum(p, x, n):
    """Sum of p along the first n shift iterates of x."""
    total = 0.0
    y = x
    for _ in range(n):
        total += p.eval_point(y)
        y = y.shift()
    return total


def birkhoff_cycle(p, word):
    """Birkhoff sum of p over the periodic orbit of a cyclic word."""
    x = periodic_point(p.spec, word)
    return birkhoff_sum(p, x, len(word))


def holder_seminorm(p, nu, metric):
    """Exact Holder seminorm of a depth-d table.

    The supremum over point pairs reduces to word pairs: cylinders sharing a
    prefix of length m realise distance theta^m, and pairs with different
    first symbols sit at distance 1.
    """
    if not (0.0 < nu <= 1.0):
        raise PotentialError("exponent must lie in (0, 1]")
    best = 0.0
    words, vals = p.words, p.table
    th = metric.theta
    for i in range(len(words)):
        for j in range(i + 1, len(words)):
            m = _common(words[i], words[j])
            r = abs(vals[i] - vals[j]) / (th ** m) ** nu
            if r > best:
                best = r
    return best


def _common(u, v):
    m = 0
    for a, b in zip(u, v):
        if a != b:
            break
        m += 1
    return m


def table_sup(values):
    return float(np.max(np.abs(np.asarray(values))))


def table_seminorm(spec, words, values, nu, metric):
    """Holder seminorm of an arbitrary (possibly complex) cylinder table."""
    vals = np.asarray(values)
    best = 0.0
    th = metric.theta
    for i in range(len(words)):
        for j in range(i + 1, len(words)):
            m = _common(words[i], words[j])
            r = abs(vals[i] - vals[j]) / (th ** m) ** nu
            if r > best:
                best = r
    return float(best)


@dataclass(frozen=True)
class NormReport:
    sup: float
    seminorm: float
    scale: float
    total: float


def lip_scaled_norm(spec, words, values, b, metric):
    """sup-norm plus Lipschitz seminorm divided by the frequency scale |b|.

    The scale is clamped below at 1 so the norm stays finite on the lattice
    and low-frequency diagnostics."""
    scale = max(1.0, abs(b))
    sup = table_sup(values)
    semi = table_seminorm(spec, words, values, 1.0, metric)
    return NormReport(sup=sup, seminorm=semi, scale=scale, total=sup + semi / scale)


def holder_scaled_norm(spec, words, values, beta, b, metric):
    scale = max(1.0, abs(b))
    sup = table_sup(values)
    semi = table_seminorm(spec, words, values, beta, metric)
    return NormReport(sup=sup, seminorm=semi, scale=scale, total=sup + semi / scale)


def average_depth_for(t, metric):
    """Cylinder depth m(t) = ceil(log t / log(1/theta)) used when smoothing
    a potential at frequency scale t."""
    if t <= 1.0:
        return 1
    return max(1, math.ceil(math.log(t) / math.log(1.0 / metric.theta)))


@dataclass(frozen=True)
class AveragingReport:
    smoothed: Potential
    depth: int
    sup_error: float
    sup_bound: float
    semi_drop: dict


def average_to_depth(p, t, metric, alpha=1.0, betas=()):
    """Replace p by its average over cylinders of depth m(t).

    Certifies the sup-norm error against |p|_alpha * theta^(m*alpha) (which
    is <= |p|_alpha / t^alpha by the choice of m) and reports the measured
    Holder seminorms of the difference at the requested exponents beta.
    """
    m = average_depth_for(t, metric)
    if m >= p.depth:
        return AveragingReport(p, p.depth, 0.0, 0.0, {b: 0.0 for b in betas})
    spec = p.spec
    coarse = enumerate_words(spec, m)
    sums = {w: [0.0, 0] for w in coarse}
    for w, v in zip(p.words, p.table):
        acc = sums[w[:m]]
        acc[0] += v
        acc[1] += 1
    mapping = {w: acc[0] / acc[1] for w, acc in sums.items()}
    smoothed = Potential.from_table(spec, m, mapping)
    diff = [v - mapping[w[:m]] for w, v in zip(p.words, p.table)]
    sup_err = table_sup(diff)
    semi_alpha = holder_seminorm(p, alpha, metric)
    bound = semi_alpha * metric.theta ** (m * alpha)
    drops = {b: table_seminorm(spec, p.words, diff, b, metric) for b in betas}
    return AveragingReport(smoothed, m, sup_err, bound, drops)


@dataclass(frozen=True)
class CohomologyReport:
    max_deviation: float
    witness: tuple
    mean: float


def cohomology_obstruction(p, q, n_max):
    """Compare Birkhoff sums of p and q over all primitive orbits up to
    period n_max.

    The maximal deviation |p^n - q^n| over these orbits vanishes exactly
    when p - q has zero periodic sums at this resolution (the necessary
    condition for p - q being a coboundary); the worst orbit word is
    returned as a witness, together with the per-period rate on a fixed
    point for reference.
    """
    spec = p.spec
    devs = []
    fix1 = primitive_classes(spec, 1)
    if not fix1:
        raise PotentialError("need a fixed point to anchor the comparison")
    base_word = fix1[0]
    base = birkhoff_cycle(p, base_word) - birkhoff_cycle(q, base_word)
    for n in range(1, n_max + 1):
        for w in primitive_classes(spec, n):
            d = birkhoff_cycle(p, w) - birkhoff_cycle(q, w)
            devs.append((abs(d), w))
    worst = max(devs, key=lambda r: r[0])
    return CohomologyReport(max_deviation=worst[0], witness=worst[1], mean=base)
