# Finite transfer-matrix realisation of the weighted transfer operator on
# depth-n cylinder functions, leading eigendata (real and complex via
# continuation), pressure, normalisation, and the pressure-equation solvers.

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .sft import SubshiftError, enumerate_words
from .potentials import Potential


class TransferError(SubshiftError):
    pass


class NoConvergence(TransferError):
    pass


class EigenvalueCollision(TransferError):
    pass


@dataclass(frozen=True)
class TransferMatrix:
    """Weighted word-graph matrix: rows are target words, columns sources.

    Entry [u, v] is exp(q(edge word)) where the edge word is the source
    word followed by the target's last symbol, and q = f - s*tau + z*g.
    The realisation is exact when depth + 1 >= every potential depth;
    otherwise edge words are extended periodically and `exact` is False.
    """

    spec: object
    depth: int
    words: tuple
    mat: np.ndarray
    exact: bool

    def apply(self, h):
        return self.mat @ np.asarray(h)

    def index(self, word):
        return self.words.index(word)


def build_matrix(spec, depth, f, tau=None, g=None, s=0.0, z=0.0):
    """Assemble the transfer matrix of q = f - s*tau + z*g at the given
    cylinder depth."""
    if depth < 1:
        raise TransferError("depth must be >= 1")
    words = tuple(enumerate_words(spec, depth))
    idx = {w: i for i, w in enumerate(words)}
    n = len(words)
    complex_weights = isinstance(s, complex) or isinstance(z, complex)
    mat = np.zeros((n, n), dtype=complex if complex_weights else float)
    max_depth = max(p.depth for p in (f, tau, g) if p is not None)
    exact = depth + 1 >= max_depth
    for v in words:
        j = idx[v]
        for b in spec.successors(v[-1]):
            u = v[1:] + (b,)
            edge = v + (b,)
            q = f.value_on_word(edge)
            if tau is not None and s != 0:
                q = q - s * tau.value_on_word(edge)
            if g is not None and z != 0:
                q = q + z * g.value_on_word(edge)
            mat[idx[u], j] += cmath.exp(q) if complex_weights else math.exp(q)
    return TransferMatrix(spec=spec, depth=depth, words=words, mat=mat, exact=exact)


@dataclass(frozen=True)
class RPFData:
    """Leading eigentriple of a nonnegative transfer matrix.

    lam is the leading eigenvalue, h the positive right eigenvector with
    integral one against the probability left eigenvector nu, and gibbs is
    the invariant product measure h * nu on depth-n cylinders.
    """

    matrix: TransferMatrix
    lam: float
    h: np.ndarray
    nu: np.ndarray
    gibbs: np.ndarray
    residual: float

    @property
    def words(self):
        return self.matrix.words

    @property
    def depth(self):
        return self.matrix.depth


def _power_leading(M, tol, max_iter):
    n = M.shape[0]
    v = np.full(n, 1.0 / n)
    lam = 1.0
    for _ in range(max_iter):
        w = M @ v
        lam = float(np.linalg.norm(w))
        if lam == 0.0:
            raise NoConvergence("matrix annihilated the positive cone")
        w /= lam
        if float(np.max(np.abs(M @ w - lam * w))) < tol * max(1.0, lam):
            return lam, w
        v = w
    raise NoConvergence("power iteration did not reach tolerance %g" % tol)


def rpf(spec, f, depth=None, tol=1e-13, max_iter=200000):
    """Ruelle-Perron-Frobenius data for the real weight exp(f)."""
    if depth is None:
        depth = max(1, f.depth - 1)
    M = build_matrix(spec, depth, f)
    lam, h = _power_leading(M.mat, tol, max_iter)
    _, nu = _power_leading(M.mat.T, tol, max_iter)
    if np.min(h) <= 0 or np.min(nu) < 0:
        h = np.abs(h)
        nu = np.abs(nu)
    nu = nu / nu.sum()
    h = h / float(h @ nu)
    gibbs = h * nu
    res = max(float(np.max(np.abs(M.mat @ h - lam * h))),
              float(np.max(np.abs(M.mat.T @ nu - lam * nu))))
    return RPFData(matrix=M, lam=lam, h=h, nu=nu, gibbs=gibbs, residual=res)


def pressure(spec, f, depth=None):
    """Topological pressure of f as log of the leading eigenvalue."""
    return math.log(rpf(spec, f, depth=depth).lam)


def pressure_via_zn(spec, q, n_max):
    """Convergence diagnostic (1/n) log Z_n(q) for n = 1..n_max.

    Z_n is the weighted fixed-point sum of the n-th power, computed from
    the eigenvalues of the transfer matrix at a depth making it exact."""
    if n_max < 1:
        raise TransferError("n_max must be >= 1")
    M = build_matrix(spec, max(1, q.depth - 1), q)
    eig = np.linalg.eigvals(M.mat.astype(complex))
    out = []
    for n in range(1, n_max + 1):
        zn = complex(np.sum(eig ** n)).real
        if zn <= 0:
            raise TransferError("Z_%d is not positive" % n)
        out.append(math.log(zn) / n)
    return out


def pressure_weighted(spec, f, tau, g, a, c, depth=None):
    """Pressure of the real combination f - a*tau + c*g."""
    if depth is None:
        depth = max(1, max(p.depth for p in (f, tau, g) if p is not None) - 1)
    q = combine(f, tau, g, a, c, depth + 1)
    return pressure(spec, q, depth=depth)


def combine(f, tau, g, a, c, depth):
    """Materialise f - a*tau + c*g as a single table at the given depth."""
    spec = f.spec
    words = enumerate_words(spec, depth)
    mapping = {}
    for w in words:
        v = f.value_on_word(w)
        if tau is not None and a != 0:
            v -= a * tau.value_on_word(w)
        if g is not None and c != 0:
            v += c * g.value_on_word(w)
        mapping[w] = v
    return Potential.from_table(spec, depth, mapping)


def equilibrium_integral(data, p):
    """Integral of a locally constant p against the Gibbs measure of an
    RPF datum.  Depth up to data.depth is exact on the cylinder weights;
    depth data.depth + 1 uses the one-step refinement of the measure."""
    n = data.depth
    if p.depth <= n:
        vals = np.array([p.value_on_word(w) for w in data.words])
        return float(data.gibbs @ vals)
    if p.depth == n + 1:
        spec = data.matrix.spec
        idx = {w: i for i, w in enumerate(data.words)}
        total = 0.0
        for v in data.words:
            j = idx[v]
            for b in spec.successors(v[-1]):
                u = v[1:] + (b,)
                i = idx[u]
                mass = data.h[j] * data.matrix.mat[i, j] * data.nu[i] / data.lam
                total += mass * p.value_on_word(v + (b,))
        return float(total)
    raise TransferError("potential depth %d exceeds measure resolution %d + 1"
                        % (p.depth, n))


@dataclass(frozen=True)
class NormalizedPotential:
    """Table for f - P*tau + log h - log h(shifted) - log lam.

    The associated transfer operator fixes the constant function one, and
    its adjoint fixes the Gibbs measure itself.
    """

    potential: Potential
    lam: float
    pressure_in: float
    source: RPFData


def normalize(spec, f, tau, P, depth=None):
    if depth is None:
        depth = max(1, max(f.depth, tau.depth if tau is not None else 1) - 1)
    q = combine(f, tau, None, P, 0.0, depth + 1)
    data = rpf(spec, q, depth=depth)
    idx = {w: i for i, w in enumerate(data.words)}
    mapping = {}
    for v in data.words:
        j = idx[v]
        for b in spec.successors(v[-1]):
            u = v[1:] + (b,)
            edge = v + (b,)
            mapping[edge] = (q.value_on_word(edge)
                             + math.log(data.h[j]) - math.log(data.h[idx[u]])
                             - math.log(data.lam))
    pot = Potential.from_table(spec, depth + 1, mapping)
    return NormalizedPotential(potential=pot, lam=data.lam, pressure_in=P, source=data)


def solve_pressure_root(spec, f, tau, depth=None, bracket_step=1.0, tol=1e-14):
    """Unique root of a -> pressure(f - a*tau) for a positive roof tau."""
    tau_vals = np.asarray(tau.table)
    if np.min(tau_vals) <= 0:
        raise TransferError("roof function must be strictly positive")

    def F(a):
        return pressure_weighted(spec, f, tau, None, a, 0.0, depth=depth)

    lo = 0.0
    hi = 0.0
    f0 = F(0.0)
    step = bracket_step
    if f0 > 0:
        while True:
            hi += step
            if F(hi) < 0:
                lo = hi - step
                break
            step *= 2.0
    elif f0 < 0:
        while True:
            lo -= step
            if F(lo) > 0:
                hi = lo + step
                break
            step *= 2.0
    else:
        return 0.0
    return float(brentq(F, lo, hi, xtol=tol, rtol=8.8817841970012523e-16))


def _eig_nearest(mat, seed):
    """Dense eigensolve picking the eigenvalue nearest the seed; also
    returns the distance to the runner-up as a collision monitor."""
    if mat.shape[0] > 4096:
        raise TransferError("dense eigensolve capped at dimension 4096")
    vals = np.linalg.eigvals(mat)
    order = np.argsort(np.abs(vals - seed))
    best = vals[order[0]]
    sep = abs(vals[order[1]] - best) if len(vals) > 1 else math.inf
    return complex(best), float(sep)


def leading_eig_continued(spec, depth, f, tau, g, s, z, steps=16, max_refine=12):
    """Leading eigenvalue of the complex-weight matrix, continued along a
    straight parameter path from the real Perron datum.

    Returns (eigenvalue, gap) where gap is the smallest observed distance
    to the rest of the spectrum along the path.
    """
    a, b = (s.real, s.imag) if isinstance(s, complex) else (float(s), 0.0)
    c, w = (z.real, z.imag) if isinstance(z, complex) else (float(z), 0.0)
    q0 = combine(f, tau, g, a, c, depth + 1)
    seed = rpf(spec, q0, depth=depth).lam
    if b == 0.0 and w == 0.0:
        return complex(seed), math.inf
    cur = complex(seed)
    gap = math.inf
    t = 0.0
    dt = 1.0 / steps
    refine = 0
    while t < 1.0 - 1e-15:
        t_next = min(1.0, t + dt)
        M = build_matrix(spec, depth, f, tau, g,
                         s=complex(a, b * t_next), z=complex(c, w * t_next))
        cand, sep = _eig_nearest(M.mat, cur)
        if abs(cand - cur) > 0.49 * sep and refine < max_refine:
            dt *= 0.5
            refine += 1
            continue
        if abs(cand - cur) > 0.49 * sep:
            raise EigenvalueCollision("cannot separate the continued branch")
        cur = cand
        gap = min(gap, sep)
        t = t_next
    return cur, gap


def pressure_complex(spec, f, tau, g, s, z, depth=None):
    """Continued log of the leading eigenvalue (principal at the real seed)."""
    if depth is None:
        depth = max(1, max(p.depth for p in (f, tau, g) if p is not None) - 1)
    lam, _ = leading_eig_continued(spec, depth, f, tau, g, s, z)
    return cmath.log(lam)


def solve_s_for_z(spec, f, tau, g, z, depth=None, steps=8, tol=1e-12):
    """Continue the root s(z) of pressure(f - s*tau + z*g) = 0 from the
    real root at z = 0.  Returns complex s."""
    if depth is None:
        depth = max(1, max(p.depth for p in (f, tau, g) if p is not None) - 1)
    s = complex(solve_pressure_root(spec, f, tau, depth=depth))
    zc = complex(z)
    for k in range(1, steps + 1):
        zk = zc * (k / steps)
        s = _newton_s(spec, f, tau, g, s, zk, depth, tol)
    return s


def _newton_s(spec, f, tau, g, s, z, depth, tol, max_iter=60):
    h = 1e-6
    for _ in range(max_iter):
        lam, _ = leading_eig_continued(spec, depth, f, tau, g, s, z)
        F = lam - 1.0
        if abs(F) < tol:
            return s
        lam_p, _ = leading_eig_continued(spec, depth, f, tau, g, s + h, z)
        lam_m, _ = leading_eig_continued(spec, depth, f, tau, g, s - h, z)
        dF = (lam_p - lam_m) / (2 * h)
        if dF == 0:
            raise NoConvergence("flat derivative in the pressure-equation solve")
        s = s - F / dF
    raise NoConvergence("pressure-equation iteration stalled")
