# Core symbolic-dynamics layer: transition matrices, admissible words,
# periodic orbits, eventually-periodic points and the theta-metric.
#
# Symbols are 1-based (1..k).  A transition from i to j is allowed when
# A[i-1][j-1] == 1.  A point of the shift space is represented as an
# eventually periodic symbol sequence (finite prefix + repeating tail),
# which is enough to hold every base point the higher layers ever need.

from dataclasses import dataclass
from math import gcd

import numpy as np


class SubshiftError(ValueError):
    pass


class ZeroRowOrColumn(SubshiftError):
    pass


class ReducibleMatrix(SubshiftError):
    pass


class PeriodicMatrix(SubshiftError):
    pass


class InadmissibleWord(SubshiftError):
    pass


@dataclass(frozen=True)
class SubshiftSpec:
    """A k-symbol subshift of finite type with a primitive 0/1 matrix."""

    k: int
    matrix: tuple  # k rows of k ints, row i lists allowed successors of i+1
    primitivity_exponent: int

    def allows(self, i, j):
        return self.matrix[i - 1][j - 1] == 1

    def successors(self, i):
        return tuple(j + 1 for j, a in enumerate(self.matrix[i - 1]) if a)

    def predecessors(self, j):
        return tuple(i + 1 for i in range(self.k) if self.matrix[i][j - 1])

    def as_array(self):
        return np.array(self.matrix, dtype=np.int64)


def validate_subshift(k, matrix):
    """Check a 0/1 matrix and wrap it as a SubshiftSpec.

    Rejects matrices with a zero row or column, reducible matrices, and
    irreducible-but-periodic matrices (each with a distinct error type).
    """
    A = np.array(matrix, dtype=np.int64)
    if A.shape != (k, k):
        raise SubshiftError("matrix must be %d x %d, got %r" % (k, k, A.shape))
    if not np.isin(A, (0, 1)).all():
        raise SubshiftError("matrix entries must be 0 or 1")
    if (A.sum(axis=1) == 0).any() or (A.sum(axis=0) == 0).any():
        raise ZeroRowOrColumn("matrix has a zero row or column")

    # reachability closure for irreducibility
    reach = (np.linalg.matrix_power(A + np.eye(k, dtype=np.int64), k) > 0)
    if not reach.all():
        raise ReducibleMatrix("matrix is not irreducible")

    # period = gcd of return-time lengths at state 0
    period = 0
    P = np.eye(k, dtype=object)
    A_obj = A.astype(object)
    for n in range(1, 2 * k * k + 1):
        P = P @ A_obj
        if P[0, 0] > 0:
            period = gcd(period, n)
            if period == 1:
                break
    if period != 1:
        raise PeriodicMatrix("matrix is irreducible but periodic (period %d)" % period)

    # smallest exponent with a strictly positive power; Wielandt caps it
    cap = (k - 1) ** 2 + 1
    P = A.copy()
    expo = None
    for n in range(1, cap + 1):
        if (P > 0).all():
            expo = n
            break
        P = (P @ A > 0).astype(np.int64)
    if expo is None:
        raise PeriodicMatrix("no positive power up to the Wielandt bound")
    return SubshiftSpec(k=k, matrix=tuple(tuple(int(x) for x in row) for row in A),
                        primitivity_exponent=expo)


def is_admissible(spec, word):
    """True when consecutive symbols of the word are allowed transitions."""
    for i in range(len(word) - 1):
        if not spec.allows(word[i], word[i + 1]):
            return False
    return all(1 <= a <= spec.k for a in word)


def is_cyclically_admissible(spec, word):
    return is_admissible(spec, word) and spec.allows(word[-1], word[0])


def enumerate_words(spec, n):
    """All admissible words of length n, lexicographic order."""
    if n < 1:
        raise SubshiftError("word length must be >= 1")
    out = []
    stack = [(a,) for a in range(spec.k, 0, -1)]
    while stack:
        w = stack.pop()
        if len(w) == n:
            out.append(w)
            continue
        for b in reversed(spec.successors(w[-1])):
            stack.append(w + (b,))
    return out


def enumerate_periodic_words(spec, n):
    """All cyclically admissible words of length n (one per periodic point)."""
    return [w for w in enumerate_words(spec, n) if spec.allows(w[-1], w[0])]


def count_fixed_points(spec, n):
    """Number of period-n points, computed as trace(A^n) in exact integers."""
    A = spec.as_array().astype(object)
    return int(np.trace(np.linalg.matrix_power(A, n)))


def primitive_classes(spec, n, prune=None):
    """Primitive period-n orbit classes, one canonical word per class.

    The canonical representative is the lexicographically least rotation.
    Generation walks admissible pre-necklaces only (the classic necklace
    recursion with transition pruning), so the cost stays proportional to
    the admissible tree rather than the full k^n cube.

    An optional prune(partial_word) callback may cut a subtree; it must be
    monotone (once true, true for every extension)."""
    if n < 1:
        raise SubshiftError("period must be >= 1")
    out = []
    a = [1] * (n + 1)  # a[0] anchors the recursion at the least symbol

    def rec(t, p):
        if t > n:
            if p == n and spec.allows(a[n], a[1]):
                out.append(tuple(a[1:n + 1]))
            return
        prev = a[t - 1]
        c = a[t - p]
        if t == 1 or spec.allows(prev, c):
            a[t] = c
            if prune is None or not prune(a[1:t + 1]):
                rec(t + 1, p)
        for j in range(c + 1, spec.k + 1):
            if t > 1 and not spec.allows(prev, j):
                continue
            a[t] = j
            if prune is None or not prune(a[1:t + 1]):
                rec(t + 1, t)

    rec(1, 1)
    return out


def mobius(n):
    m, out = n, 1
    p = 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            out = -out
        p += 1 if p == 2 else 2
    if m > 1:
        out = -out
    return out


@dataclass(frozen=True)
class Point:
    """Eventually periodic point: prefix then tail repeated forever."""

    prefix: tuple
    tail: tuple

    def __post_init__(self):
        if not self.tail:
            raise SubshiftError("tail must be nonempty")

    def symbol(self, i):
        if i < len(self.prefix):
            return self.prefix[i]
        return self.tail[(i - len(self.prefix)) % len(self.tail)]

    def first(self, n):
        return tuple(self.symbol(i) for i in range(n))

    def shift(self):
        if self.prefix:
            return Point(self.prefix[1:], self.tail)
        return Point((), self.tail[1:] + self.tail[:1])

    def canonical(self):
        # reduce the tail to its primitive period, then absorb prefix
        # symbols that merely repeat the tail
        t = self.tail
        for d in range(1, len(t)):
            if len(t) % d == 0 and t == t[:d] * (len(t) // d):
                t = t[:d]
                break
        p = self.prefix
        while p and p[-1] == t[-1]:
            p = p[:-1]
            t = t[-1:] + t[:-1]
        return Point(p, t)

    def equals(self, other):
        return self.canonical() == other.canonical()


def check_point(spec, x):
    """Validate that an eventually periodic point lies in the shift space."""
    seq = x.prefix + x.tail + x.tail[:1]
    if not is_admissible(spec, seq):
        raise InadmissibleWord("point sequence hits a forbidden transition")
    return x


def periodic_point(spec, word):
    if not is_cyclically_admissible(spec, word):
        raise InadmissibleWord("word is not cyclically admissible: %r" % (word,))
    return Point((), tuple(word))


def point_in_cylinder(spec, word):
    """A deterministic point of the cylinder [word]: extend along the
    lexicographically least admissible continuation until a state repeats,
    then close the loop."""
    if not is_admissible(spec, word):
        raise InadmissibleWord("cylinder word is not admissible: %r" % (word,))
    seq = list(word)
    seen = {}
    for i, a in enumerate(seq):
        seen[a] = i
    while True:
        nxt = spec.successors(seq[-1])[0]
        if nxt in seen:
            j = seen[nxt]
            return Point(tuple(seq[:j]), tuple(seq[j:]))
        seq.append(nxt)
        seen[nxt] = len(seq) - 1


@dataclass(frozen=True)
class SymbolicMetric:
    """d(x, y) = theta^m with m the length of the common leading word."""

    theta: float

    def __post_init__(self):
        if not (0.0 < self.theta < 1.0):
            raise SubshiftError("theta must lie in (0, 1)")

    def common_prefix_len(self, x, y, cap=None):
        if cap is None:
            cap = len(x.prefix) + len(y.prefix) + _lcm(len(x.tail), len(y.tail))
        for i in range(cap):
            if x.symbol(i) != y.symbol(i):
                return i
        return None  # equal as infinite sequences

    def distance(self, x, y):
        m = self.common_prefix_len(x, y)
        if m is None:
            return 0.0
        return self.theta ** m

    def word_distance(self, u, v):
        """Distance scale for two distinct words read as cylinder depths."""
        m = 0
        for a, b in zip(u, v):
            if a != b:
                break
            m += 1
        return self.theta ** m


def _lcm(a, b):
    return a * b // gcd(a, b)


def cylinder_diameter(spec, metric, word):
    """Diameter of the cylinder [word] under the theta-metric.

    Points of the cylinder agree on the word and on every forced
    continuation after it; the diameter is theta^(first branch position).
    A cylinder whose continuation is forced forever is a single point
    (diameter 0).
    """
    if not is_admissible(spec, word):
        raise InadmissibleWord("cylinder word is not admissible: %r" % (word,))
    depth = len(word)
    state = word[-1]
    seen = set()
    while True:
        succ = spec.successors(state)
        if len(succ) > 1:
            return metric.theta ** depth
        if state in seen:
            return 0.0
        seen.add(state)
        state = succ[0]
        depth += 1


def big_distance(spec, metric, x, y):
    """Diameter of the smallest cylinder containing both points.

    Returns 0 for equal points and 1 when the first symbols differ, and is
    always >= the plain theta-metric distance.
    """
    m = metric.common_prefix_len(x, y)
    if m is None:
        return 0.0
    if m == 0:
        return 1.0
    return cylinder_diameter(spec, metric, x.first(m))


def golden_mean_spec():
    return validate_subshift(2, [[1, 1], [1, 0]])


def full_shift_spec(k=2):
    return validate_subshift(k, [[1] * k for _ in range(k)])
