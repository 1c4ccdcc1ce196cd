# Empirical contraction harness: iterated-operator norms in the
# frequency-scaled Lipschitz metrics across parameter regimes, log-linear
# decay fits, cone and two-term inequality checks with fitted constants,
# and the lattice diagnostics.

import math
from dataclasses import dataclass

import numpy as np

from .sft import SubshiftError, cylinder_diameter, enumerate_words
from .potentials import table_seminorm, table_sup
from .transfer import build_matrix


class DecayError(SubshiftError):
    pass


class ConeViolation(DecayError):
    pass


class NonPositive(DecayError):
    pass


B_LEADING = "B_LEADING"
W_LEADING = "W_LEADING"
LATTICE_CONTROL = "LATTICE_CONTROL"


@dataclass(frozen=True)
class RegimeSpec:
    kind: str
    B: float
    nu: float
    b0_or_w0: float
    grid: tuple  # (a, b, c, w) tuples

    def __post_init__(self):
        if self.kind not in (B_LEADING, W_LEADING, LATTICE_CONTROL):
            raise DecayError("unknown regime kind %r" % self.kind)
        for a, b, c, w in self.grid:
            if self.kind == B_LEADING:
                if not (abs(w) <= self.B * abs(b) ** self.nu and abs(b) >= self.b0_or_w0):
                    raise DecayError("grid point (%g,%g,%g,%g) outside the "
                                     "b-leading regime" % (a, b, c, w))
            elif self.kind == W_LEADING:
                if not (abs(b) <= self.B * abs(w) and abs(w) >= self.b0_or_w0):
                    raise DecayError("grid point (%g,%g,%g,%g) outside the "
                                     "w-leading regime" % (a, b, c, w))
            elif self.kind != LATTICE_CONTROL:
                raise DecayError("unknown regime kind %r" % self.kind)


def word_pair_distance(spec, metric, u, v):
    """Diameter of the smallest cylinder around representatives of two
    distinct word cylinders; 1 across different first symbols."""
    m = 0
    for a, b in zip(u, v):
        if a != b:
            break
        m += 1
    if m == 0:
        return 1.0
    return cylinder_diameter(spec, metric, u[:m])


def scaled_norm(spec, words, values, scale, metric):
    """sup plus Lipschitz seminorm over the frequency scale (clamped at 1)."""
    s = max(1.0, abs(scale))
    return table_sup(values) + table_seminorm(spec, words, values, 1.0, metric) / s


def test_bank(spec, depth, metric, seed=0, n_random=8):
    """Deterministic probe functions: constants, cylinder indicators, and
    random Lipschitz tables (seeded)."""
    words = enumerate_words(spec, depth)
    dim = len(words)
    rng = np.random.default_rng(seed)
    bank = [np.ones(dim, dtype=complex)]
    for i in range(dim):
        e = np.zeros(dim, dtype=complex)
        e[i] = 1.0
        bank.append(e)
    for _ in range(n_random):
        v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        bank.append(v)
    return words, bank


@dataclass(frozen=True)
class PointDecay:
    a: float
    b: float
    c: float
    w: float
    norms: tuple          # envelope over the bank, m = 1..m_max
    rho: float
    log_c: float
    residual: float


@dataclass(frozen=True)
class DecayFit:
    points: tuple
    rho_global: float
    c_global: float
    eps: float
    fit_start: int


def _fit_loglinear(ms, vals):
    xs = np.array(ms, dtype=float)
    ys = np.log(np.maximum(np.array(vals, dtype=float), 1e-300))
    slope, intercept = np.polyfit(xs, ys, 1)
    resid = float(np.max(np.abs(ys - (slope * xs + intercept))))
    return float(slope), float(intercept), resid


def measure_decay(spec, f0, tau, g, regime, depth, m_max, metric, seed=0,
                  fit_start=3):
    """Norm-decay sweep of L^m built from the normalized weight f0 minus
    i*b*tau plus (c+i*w)*g over the regime grid.

    Per grid point the envelope max_h |L^m h| / |h| (in the scaled
    Lipschitz norm) is fitted log-linearly on m >= fit_start; the global
    fit takes the worst rho and regresses log C on log of the frequency
    scale for the epsilon exponent."""
    words, bank = test_bank(spec, depth, metric, seed=seed)
    pts = []
    for a, b, c, w in regime.grid:
        if a != 0.0:
            raise DecayError("fold a into the normalized weight before the sweep")
        M = build_matrix(spec, depth, f0, tau, g,
                         s=complex(0.0, b), z=complex(c, w))
        scale = max(1.0, abs(b), abs(w))
        env = []
        its = [(v, scaled_norm(spec, words, v, scale, metric)) for v in bank]
        cur = [v for v, _ in its]
        for m in range(1, m_max + 1):
            cur = [M.mat @ v for v in cur]
            env.append(max(scaled_norm(spec, words, u, scale, metric) / n0
                           for u, (_, n0) in zip(cur, its)))
        ms = list(range(fit_start, m_max + 1))
        slope, intercept, resid = _fit_loglinear(ms, env[fit_start - 1:])
        pts.append(PointDecay(a=a, b=b, c=c, w=w, norms=tuple(env),
                              rho=math.exp(slope), log_c=intercept,
                              residual=resid))
    rho_global = max(p.rho for p in pts)
    logs = [(math.log(max(1.0, abs(p.b), abs(p.w))), p.log_c) for p in pts]
    if len({x for x, _ in logs}) > 1:
        eps = float(np.polyfit([x for x, _ in logs], [y for _, y in logs], 1)[0])
    else:
        eps = 0.0
    c_global = math.exp(max(p.log_c for p in pts))
    return DecayFit(points=tuple(pts), rho_global=rho_global,
                    c_global=c_global, eps=eps, fit_start=fit_start)


def spectral_radius(spec, f0, tau, g, b, w, c=0.0, depth=6):
    """Independent dense eigensolve of the same weighted matrix."""
    M = build_matrix(spec, depth, f0, tau, g, s=complex(0.0, b), z=complex(c, w))
    if M.mat.shape[0] > 4096:
        raise DecayError("dense eigensolve capped at dimension 4096")
    return float(np.max(np.abs(np.linalg.eigvals(M.mat))))


def cone_membership(spec, words, h, A, metric):
    """Exact check of |h(u) - h(u')| <= A * h(u') * D(u, u') over all
    same-first-symbol cylinder pairs at the working depth."""
    h = np.asarray(h, dtype=float)
    if np.min(h) <= 0:
        raise NonPositive("cone functions must be strictly positive")
    worst = (0.0, None)
    ok = True
    for i in range(len(words)):
        for j in range(len(words)):
            if i == j or words[i][0] != words[j][0]:
                continue
            Dij = word_pair_distance(spec, metric, words[i], words[j])
            if Dij == 0.0:
                continue
            r = abs(h[i] - h[j]) / (h[j] * Dij)
            if r > worst[0]:
                worst = (r, (words[i], words[j]))
            if r > A * (1 + 1e-12):
                ok = False
    return ok, worst


def cone_parameter(spec, words, h, metric):
    ok, worst = cone_membership(spec, words, h, math.inf, metric)
    return worst[0]


def scale_regular_probe(spec, depth, metric, amplitudes=None):
    """Positive cone probe with roughness at every cylinder scale:
    exp(sum_j theta^j xi(w_j)).  Unlike a generic random table, its pair
    differences decay at the metric rate theta under iteration, which is
    what the two-term inequality's geometric component models."""
    if amplitudes is None:
        amplitudes = {a: 0.3 if a % 2 else -0.2 for a in range(1, spec.k + 1)}
    words = enumerate_words(spec, depth)
    th = metric.theta
    return np.array([math.exp(sum(th ** j * amplitudes[w[j]]
                                  for j in range(len(w)))) for w in words])


@dataclass(frozen=True)
class LYReport:
    A0: float
    E: float
    t: float
    gamma_hat: float
    ratios: tuple         # sup pair ratio per m = 1..m_max
    slope: float
    pass_table: tuple


def lasota_yorke_check(spec, f0, tau, g, a, c, t_depth, m_max, metric,
                       H=None, E=None, gamma_hat=None, depth=4, seed=0):
    """Two-term inequality check for the real weighted operator.

    For a cone function H the sup over same-symbol pairs of
    |M^m H(u) - M^m H(u')| / (M^m H(u') D(u,u')) is bounded by
    A0*(E/gamma_hat^m + t*e^(A0 t)); the minimal feasible A0 is found by
    bisection and the decaying component's log-slope is fitted."""
    if a != 0.0:
        raise DecayError("fold a into the normalized weight before the check")
    words = enumerate_words(spec, depth)
    if gamma_hat is None:
        gamma_hat = (1.0 / metric.theta) ** 0.5
    t = float(max(1.0, t_depth))
    M = build_matrix(spec, depth, f0, tau, g, s=0.0, z=float(c))
    if H is None:
        rng = np.random.default_rng(seed)
        u = rng.normal(scale=0.4, size=len(words))
        H = np.exp(u)
    H = np.asarray(H, dtype=float)
    if np.min(H) <= 0:
        raise ConeViolation("test function left the positive cone")
    if E is None:
        E = cone_parameter(spec, words, H, metric)
    else:
        ok, worst = cone_membership(spec, words, H, E, metric)
        if not ok:
            raise ConeViolation("H outside the E-cone, worst ratio %g" % worst[0])

    pair_d = {}
    for i in range(len(words)):
        for j in range(len(words)):
            if i != j and words[i][0] == words[j][0]:
                d = word_pair_distance(spec, metric, words[i], words[j])
                if d > 0:
                    pair_d[(i, j)] = d

    ratios = []
    cur = H.copy()
    for m in range(1, m_max + 1):
        cur = M.mat @ cur
        r = max(abs(cur[i] - cur[j]) / (cur[j] * d)
                for (i, j), d in pair_d.items())
        ratios.append(r)

    def feasible(A0):
        return all(r <= A0 * (E / gamma_hat ** m + t * math.exp(A0 * t))
                   for m, r in enumerate(ratios, start=1))

    lo, hi = 0.0, 1.0
    while not feasible(hi):
        hi *= 2.0
        if hi > 1e12:
            raise DecayError("no feasible constant below 1e12")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if feasible(mid):
            hi = mid
        else:
            lo = mid
    A0 = hi

    # slope of the decaying component, measured where the ratio is above
    # the numerical floor
    ms = [m for m, r in enumerate(ratios, start=1) if r > 1e-12]
    slope = float("nan")
    if len(ms) >= 3:
        xs = np.array(ms, dtype=float)
        ys = np.log([ratios[m - 1] for m in ms])
        slope = float(np.polyfit(xs, ys, 1)[0])
    passes = tuple(r <= A0 * (E / gamma_hat ** m + t * math.exp(A0 * t))
                   for m, r in enumerate(ratios, start=1))
    return LYReport(A0=A0, E=E, t=t, gamma_hat=gamma_hat, ratios=tuple(ratios),
                    slope=slope, pass_table=passes)


@dataclass(frozen=True)
class RatioCondition:
    A_min: float
    L_lip: float
    mu_hat: float
    d_shift: float
    satisfied: bool


def _ratio_value(g, tau, d):
    gv = np.asarray(g.table) + d * np.asarray(_align(tau, g))
    variation = float(np.max(gv) - np.min(gv))
    rate = float(np.min(gv / np.asarray(_align(tau, g))))
    return variation, rate


def _align(tau, g):
    # tau values on g's word list (depths may differ)
    return [tau.value_on_word(w) for w in g.words]


def ratio_condition_apply(g, tau, mu_hat):
    """Smallest nonnegative shift d with variation(g + d*tau) over the
    pointwise minimum of (g + d*tau)/tau at most mu_hat.

    Returns the shifted observable data and the (b, w) -> (b + d*w, w)
    frequency remap; the two weightings define the same operator."""
    if min(tau.table) <= 0:
        raise DecayError("roof function must be strictly positive")

    def ratio(d):
        var, rate = _ratio_value(g, tau, d)
        if rate <= 0:
            return math.inf
        return var / rate

    if ratio(0.0) <= mu_hat:
        d = 0.0
    else:
        hi = 1.0
        while ratio(hi) > mu_hat:
            hi *= 2.0
            if hi > 1e9:
                var, rate = _ratio_value(g, tau, hi)
                return RatioCondition(A_min=rate, L_lip=var, mu_hat=mu_hat,
                                      d_shift=hi, satisfied=False)
        lo = hi / 2.0
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if ratio(mid) <= mu_hat:
                hi = mid
            else:
                lo = mid
        d = hi
    var, rate = _ratio_value(g, tau, d)
    return RatioCondition(A_min=rate, L_lip=var, mu_hat=mu_hat, d_shift=d,
                          satisfied=var <= mu_hat * rate * (1 + 1e-9))


def shifted_observable(g, tau, d):
    """Materialise g + d*tau as a table at g's depth (or tau's if deeper)."""
    from .potentials import Potential
    depth = max(g.depth, tau.depth)
    words = enumerate_words(g.spec, depth)
    mapping = {w: g.value_on_word(w) + d * tau.value_on_word(w) for w in words}
    return Potential.from_table(g.spec, depth, mapping)


def thm6_regime_sweep(spec, f0, tau, g, B, w_grid, depth, m_max, metric,
                      mu_hat=1.0, seed=0, fit_start=3):
    """Decay fit in the w-leading regime after the ratio-condition shift."""
    cond = ratio_condition_apply(g, tau, mu_hat)
    g2 = shifted_observable(g, tau, cond.d_shift)
    w0 = min(abs(w) for w in w_grid)
    # remapped points: original (b=0, w) becomes (b = d*w, w) on g2
    grid = tuple((0.0, cond.d_shift * w, 0.0, w) for w in w_grid)
    regime = RegimeSpec(kind=W_LEADING, B=max(B, cond.d_shift + 1e-9), nu=1.0,
                        b0_or_w0=w0, grid=grid)
    # the shifted weight keeps the operator identical: -i(b+dw)tau + iwg2
    # with b = 0 equals +iw g on the original observable
    words, bank = test_bank(spec, depth, metric, seed=seed)
    pts = []
    for a, b, c, w in regime.grid:
        M = build_matrix(spec, depth, f0, tau, g2,
                         s=complex(0.0, b), z=complex(0.0, w))
        scale = max(1.0, abs(w))
        its = [(v, scaled_norm(spec, words, v, scale, metric)) for v in bank]
        cur = [v for v, _ in its]
        env = []
        for m in range(1, m_max + 1):
            cur = [M.mat @ v for v in cur]
            env.append(max(scaled_norm(spec, words, u, scale, metric) / n0
                           for u, (_, n0) in zip(cur, its)))
        ms = list(range(fit_start, m_max + 1))
        slope, intercept, resid = _fit_loglinear(ms, env[fit_start - 1:])
        pts.append(PointDecay(a=a, b=b, c=c, w=w, norms=tuple(env),
                              rho=math.exp(slope), log_c=intercept,
                              residual=resid))
    rho_global = max(p.rho for p in pts)
    logs = [(math.log(max(1.0, abs(p.w))), p.log_c) for p in pts]
    eps = float(np.polyfit([x for x, _ in logs], [y for _, y in logs], 1)[0]) \
        if len({x for x, _ in logs}) > 1 else 0.0
    return DecayFit(points=tuple(pts), rho_global=rho_global,
                    c_global=math.exp(max(p.log_c for p in pts)), eps=eps,
                    fit_start=fit_start), cond


def lattice_diagnostic(spec, f0, tau, b, depth=4, n_max=8, tol=1e-9):
    """Leading-modulus test for L_{f0 - i b tau} against the periodic-orbit
    lattice criterion: modulus 1 iff every cycle sum of b*tau is a
    multiple of 2*pi (up to n_max)."""
    from .potentials import birkhoff_cycle
    from .sft import primitive_classes
    M = build_matrix(spec, depth, f0, tau, None, s=complex(0.0, b), z=0.0)
    mod = float(np.max(np.abs(np.linalg.eigvals(M.mat))))
    worst = 0.0
    for n in range(1, n_max + 1):
        for word in primitive_classes(spec, n):
            phase = b * birkhoff_cycle(tau, word)
            frac = abs(phase / (2 * math.pi) - round(phase / (2 * math.pi)))
            worst = max(worst, frac)
    lattice = worst < tol
    return {"b": b, "modulus": mod, "max_phase_frac": worst,
            "lattice": lattice, "consistent": lattice == (abs(mod - 1.0) < 1e-6)}
