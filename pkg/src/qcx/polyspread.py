"""Spreading measures of the Rakhmanov densities of Hermite and Laguerre polynomials.

The density attached to an orthonormal polynomial p_n with weight w is
rho_n(x) = w(x) p_n(x)^2. Its moments, entropic moments W_q = int rho^q,
Renyi/Shannon/Fisher lengths and the variational Shannon bounds are
collected here. Entropic moments have up to three independent routes:
Bell-polynomial expansion, a terminating multivariable hypergeometric sum
(Laguerre only) and direct quadrature.
"""
import itertools
import math
from fractions import Fraction
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import optimize, stats

from . import bellpoly, specfun
from .quadrature import DEFAULT_CONFIG, density_measures, integrate, rakhmanov_density, xlogx

BELL_CAP = 60
# the float Bell sum alternates in sign; refuse when sum|t| / |sum t| exceeds this
BELL_FLOAT_MAX_COND = 1e7
ASYMPTOTIC_RATIO = math.pi * math.sqrt(2.0) / math.e


def _check_n(n):
    if int(n) != n or n < 0:
        raise ValueError("n must be a non-negative integer")
    if n > specfun.DEGREE_CAP:
        raise ValueError(f"degree {n} exceeds cap {specfun.DEGREE_CAP}")


def _check_alpha(alpha):
    if not alpha > -1:
        raise ValueError("alpha must exceed -1")


def _check_q_integer(q):
    if int(q) != q or q < 1:
        raise ValueError("the algebraic routes need an integer q >= 1")


# --- Hermite ----------------------------------------------------------------

def hermite_moment(n, k):
    """<x^k> of the Hermite density; a terminating 2F1(-n, -k/2; 1; 2) sum."""
    _check_n(n)
    if k < 0 or int(k) != k:
        raise ValueError("k must be a non-negative integer")
    if k % 2:
        return 0.0
    h = k // 2
    s = sum(math.comb(n, j) * math.comb(h, j) * 2 ** j for j in range(min(n, h) + 1))
    # k! / (2^k (k/2)!) * s is a rational number; keep it exact until the end
    num = math.factorial(k) * s
    den = 2 ** k * math.factorial(h)
    return num / den


def hermite_stddev(n):
    _check_n(n)
    return math.sqrt(n + 0.5)


def hermite_entropic_moment(n, q, method="bell", config=DEFAULT_CONFIG):
    """W_q of the Hermite density by Bell expansion or by quadrature."""
    _check_n(n)
    if method == "bell":
        _check_q_integer(q)
        if n * q > BELL_CAP:
            raise ValueError(f"Bell route capped at n*q <= {BELL_CAP}")
        # orthonormal coefficients are K * h_l with integer h_l (physicists'
        # Hermite); the power is expanded exactly and K^{2q} applied last
        d = bellpoly.poly_power_coeffs_exact(_hermite_integer_coeffs(n), 2 * q)
        # int x^{2j} exp(-q x^2) dx = sqrt(pi / q) (2j)! / (4^j j! q^j)
        s = sum(d[2 * j] * Fraction(math.factorial(2 * j), 4 ** j * math.factorial(j) * q ** j)
                for j in range(len(d) // 2 + 1) if 2 * j < len(d))
        # K^{2q} = (2^n n!)^{-q} pi^{-q/2}; the rational part stays exact
        s /= (2 ** n * math.factorial(n)) ** q
        return _to_float(s) * math.pi ** ((1.0 - q) / 2.0) / math.sqrt(q)
    if method == "bell-float":
        _check_q_integer(q)
        if n * q > BELL_CAP:
            raise ValueError(f"Bell route capped at n*q <= {BELL_CAP}")
        d = bellpoly.poly_power_coeffs(specfun.hermite_coeffs(n), 2 * q)
        # int x^{2j} exp(-q x^2) dx = Gamma(j + 1/2) / q^{j + 1/2}
        terms = [d[2 * j] * math.exp(math.lgamma(j + 0.5) - (j + 0.5) * math.log(q))
                 for j in range(len(d) // 2 + 1) if 2 * j < len(d)]
        return _checked_fsum(terms)
    if method == "gauss":
        _check_q_integer(q)
        return _gauss_power(specfun.hermite(n), q)
    if method == "quadrature":
        if not q > 0:
            raise ValueError("q must be positive")
        return _quad_power(rakhmanov_density(specfun.hermite(n)), q, config)
    raise ValueError(f"unknown method {method!r}")


def _hermite_integer_coeffs(n):
    out = [0] * (n + 1)
    for j in range(n // 2 + 1):
        l = n - 2 * j
        out[l] = (-1) ** j * math.factorial(n) * 2 ** l // (math.factorial(j) * math.factorial(l))
    return out


def _to_float(frac):
    # Fraction.__float__ rounds correctly even for huge numerators/denominators
    return float(frac)


def _rising(a, k):
    out = Fraction(1)
    for i in range(k):
        out *= a + i
    return out


def _gamma_tail(alpha, q):
    """Gamma(alpha q + 1) / (Gamma(alpha + 1)^q q^{alpha q + 1})."""
    return math.exp(math.lgamma(alpha * q + 1) - q * math.lgamma(alpha + 1)
                    - (alpha * q + 1) * math.log(q))


def _quad_power(dens, q, config):
    ev = dens.evaluator
    return integrate(lambda x: ev(x) ** q, dens.support, config, dens.singular_points,
                     dens.scale, dens.tail_decay, label=f"entropic moment q={q}")[0]


def _checked_fsum(terms):
    total = math.fsum(terms)
    cond = math.fsum(abs(t) for t in terms) / abs(total) if total else math.inf
    if cond > BELL_FLOAT_MAX_COND:
        raise ValueError(f"float Bell sum ill-conditioned (cond {cond:.1e}); use 'bell'")
    return total


def auto_method(n, q):
    """Exact Bell expansion when cheap, the exact Gauss rule for larger integer q, else quadrature."""
    if not float(q).is_integer():
        return "quadrature"
    return "bell" if n * q <= BELL_CAP else "gauss"


def _gauss_power(spec, q):
    """W_q for integer q by a Gauss rule exact for the polynomial part.

    rho^q = w(x)^q p_n(x)^{2q}; rescaling x so that w(x)^q becomes the weight
    of the same family (parameter q alpha for Laguerre) leaves a polynomial
    of degree 2qn, integrated exactly by qn + 1 nodes.
    """
    n = spec.degree
    if spec.family == specfun.HERMITE:
        y, log_s = specfun.gauss_rule_log(spec.family, 0.0, q * n + 1)
        jac = 1.0 / math.sqrt(q)
    else:
        y, log_s = specfun.gauss_rule_log(spec.family, q * spec.param, q * n + 1)
        jac = 1.0 / q
    x = y * jac
    with np.errstate(divide="ignore"):
        log_rho = 2.0 * np.log(np.abs(specfun.eval_poly(spec, x, weighted=True)))
    # the weight-free rule times rho(x)^q already carries the factor w(y) / w(x)^q
    terms = np.exp(log_s + q * log_rho)
    return jac * math.fsum(terms)


def hermite_renyi_length(n, q, method="bell", config=DEFAULT_CONFIG):
    if q == 1:
        raise ValueError("the Renyi length needs q != 1")
    w = hermite_entropic_moment(n, q, method, config)
    return w ** (-1.0 / (q - 1.0))


def hermite_shannon_entropy(n, config=DEFAULT_CONFIG):
    _check_n(n)
    d = rakhmanov_density(specfun.hermite(n))
    ev = d.evaluator
    return -integrate(lambda x: xlogx(ev(x)), d.support, config, d.singular_points, d.scale,
                      d.tail_decay, label=f"Hermite Shannon n={n}")[0]


def hermite_shannon_length(n, config=DEFAULT_CONFIG):
    """exp of the Shannon entropy of the Hermite density (quadrature)."""
    return math.exp(hermite_shannon_entropy(n, config))


def hermite_shannon_bound(n, k):
    """Upper bound on the Shannon length from the moment <x^k>, k even.

    The bound is the Shannon length of the maximum-entropy density
    proportional to exp(-c x^k) that shares the same k-th moment.
    """
    if k <= 0 or k % 2 or k > 40:
        raise ValueError("k must be even with 2 <= k <= 40")
    mk = hermite_moment(n, k)
    return 2.0 / k * math.gamma(1.0 / k) * (math.e * k * mk) ** (1.0 / k)


def hermite_optimal_bound(n, k_max=40):
    """(k_opt, bound) minimizing the moment bound over even k <= k_max."""
    best = None
    for k in range(2, k_max + 1, 2):
        b = hermite_shannon_bound(n, k)
        if best is None or b < best[1]:
            best = (k, b)
    return best


def hermite_fisher(n):
    """(F, delta_x) with F = 4n + 2 and delta_x = F^{-1/2}."""
    _check_n(n)
    f = 4.0 * n + 2.0
    return f, 1.0 / math.sqrt(f)


# --- Laguerre ---------------------------------------------------------------

def _lbinom(a, b):
    # log of the generalized binomial C(a, b) for a >= b >= 0
    return math.lgamma(a + 1) - math.lgamma(b + 1) - math.lgamma(a - b + 1)


def laguerre_moment(n, alpha, k):
    """<x^k> of the Laguerre density (finite double-binomial sum)."""
    _check_n(n)
    _check_alpha(alpha)
    if k < 0 or int(k) != k:
        raise ValueError("k must be a non-negative integer")
    k = int(k)
    pref = math.lgamma(n + 1) + math.lgamma(k + alpha + 1) - math.lgamma(n + alpha + 1)
    terms = []
    for r in range(max(0, n - k), n + 1):
        lg = pref + 2 * math.log(math.comb(k, n - r)) + _lbinom(k + alpha + r, r)
        terms.append(math.exp(lg))
    return math.fsum(terms)


def laguerre_stddev(n, alpha):
    _check_n(n)
    _check_alpha(alpha)
    return math.sqrt(2.0 * n * n + 2.0 * (alpha + 1) * n + alpha + 1)


def laguerre_fisher(n, alpha):
    """(F, delta_x); F is math.inf (and delta_x 0) where the integral diverges."""
    _check_n(n)
    _check_alpha(alpha)
    if alpha == 0:
        f = 4.0 * n + 1.0
    elif alpha > 1:
        f = ((2.0 * n + 1.0) * alpha + 1.0) / (alpha * alpha - 1.0)
    else:
        return math.inf, 0.0
    return f, 1.0 / math.sqrt(f)


def _lauricella_sum(n, alpha, q):
    """Terminating F_A sum, exact in rational arithmetic for the binary alpha.

    Only 2q indices run: the remaining variable of the F_A has a zero
    numerator parameter and contributes its index-0 term alone.
    """
    a = Fraction(alpha)
    # (-n)_m / ((alpha + 1)_m m!) = (-1)^m C(n, m) / (alpha + 1)_m
    coef = [(-1) ** m * math.comb(n, m) / _rising(a + 1, m) for m in range(n + 1)]
    c = a * q + 1
    rising_c = [_rising(c, s) for s in range(2 * q * n + 1)]
    total = Fraction(0)
    for ms in itertools.product(range(n + 1), repeat=2 * q):
        s = sum(ms)
        t = rising_c[s] / Fraction(q) ** s
        for m in ms:
            t *= coef[m]
        total += t
    return total


def laguerre_entropic_moment(n, alpha, q, method="bell", config=DEFAULT_CONFIG):
    """W_q of the Laguerre density by Bell, Lauricella or quadrature route."""
    _check_n(n)
    _check_alpha(alpha)
    if method == "bell":
        _check_q_integer(q)
        if n * q > BELL_CAP:
            raise ValueError(f"Bell route capped at n*q <= {BELL_CAP}")
        # orthonormal coefficients are K * a_k with rational a_k =
        # (-1)^k C(n, k) / (alpha + 1)_k, exact for the binary value of alpha
        a = Fraction(alpha)
        coeffs = []
        poch = Fraction(1)
        for k in range(n + 1):
            coeffs.append((-1) ** k * math.comb(n, k) / poch)
            poch *= a + 1 + k
        d = bellpoly.poly_power_coeffs_exact(coeffs, 2 * q)
        # int x^{alpha q + k} exp(-q x) dx = Gamma(alpha q + 1) (alpha q + 1)_k / q^{alpha q + 1 + k}
        s = Fraction(0)
        poch = Fraction(1)
        for k, dk in enumerate(d):
            s += dk * poch / Fraction(q) ** k
            poch *= a * q + 1 + k
        # K^2 = Gamma(n + alpha + 1) / (n! Gamma(alpha + 1)^2) = (alpha + 1)_n / (n! Gamma(alpha + 1))
        s *= (_rising(a + 1, n) / math.factorial(n)) ** q
        return _to_float(s) * _gamma_tail(alpha, q)
    if method == "bell-float":
        _check_q_integer(q)
        if n * q > BELL_CAP:
            raise ValueError(f"Bell route capped at n*q <= {BELL_CAP}")
        d = bellpoly.poly_power_coeffs(specfun.laguerre_coeffs(n, alpha), 2 * q)
        base = alpha * q + 1
        terms = [dk * math.exp(math.lgamma(base + k) - (base + k) * math.log(q))
                 for k, dk in enumerate(d)]
        return _checked_fsum(terms)
    if method == "lauricella":
        _check_q_integer(q)
        if n > 3 or q > 3:
            raise ValueError("Lauricella route restricted to n <= 3, q <= 3")
        a = Fraction(alpha)
        # [n!/Gamma(n+alpha+1)]^q C(n+alpha, n)^{2q} = ((alpha+1)_n / n!)^q / Gamma(alpha+1)^q
        s = _lauricella_sum(n, alpha, q) * (_rising(a + 1, n) / math.factorial(n)) ** q
        return _to_float(s) * _gamma_tail(alpha, q)
    if method == "gauss":
        _check_q_integer(q)
        return _gauss_power(specfun.laguerre(n, alpha), q)
    if method == "quadrature":
        if not q > 0:
            raise ValueError("q must be positive")
        return _quad_power(rakhmanov_density(specfun.laguerre(n, alpha)), q, config)
    raise ValueError(f"unknown method {method!r}")


def laguerre_renyi_length(n, alpha, q, method="bell", config=DEFAULT_CONFIG):
    if q == 1:
        raise ValueError("the Renyi length needs q != 1")
    w = laguerre_entropic_moment(n, alpha, q, method, config)
    return w ** (-1.0 / (q - 1.0))


def laguerre_log_mean(n, alpha, config=DEFAULT_CONFIG):
    """<ln x> of the Laguerre density by quadrature."""
    d = rakhmanov_density(specfun.laguerre(n, alpha))
    ev = d.evaluator

    def f(x):
        out = np.zeros_like(x)
        pos = x > 0
        out[pos] = np.log(x[pos]) * ev(x[pos])
        return out

    return integrate(f, d.support, config, d.singular_points, d.scale, d.tail_decay,
                     label=f"Laguerre <ln x> n={n} alpha={alpha}")[0]


def laguerre_shannon_length(n, alpha, config=DEFAULT_CONFIG):
    """(N, E, J) with S = E + J and N = exp(S).

    E = -int w p^2 ln p^2 is obtained by quadrature; J = -int rho ln w has
    the closed form 2n + alpha + 1 - alpha psi(alpha + n + 1).
    """
    _check_n(n)
    _check_alpha(alpha)
    from .quadrature import entropic_integral_E

    e_part = -entropic_integral_E(specfun.laguerre(n, alpha), 0, config)
    j_part = 2.0 * n + alpha + 1.0 - alpha * specfun.digamma(alpha + n + 1.0)
    return math.exp(e_part + j_part), e_part, j_part


def laguerre_shannon_bound(n, alpha, b, m, log_mean=None, config=DEFAULT_CONFIG):
    """Shannon-length bound from <x^b> and <ln x> (maximum entropy with the
    prior x^m exp(-c x^b)). ``log_mean`` may be supplied to avoid recomputing
    <ln x>; it is unused when m = 0."""
    if not b > 0:
        raise ValueError("b must be positive")
    if not m > -1:
        raise ValueError("m must exceed -1")
    return math.exp(_log_bound(n, alpha, b, m, log_mean, config))


def _log_bound(n, alpha, b, m, log_mean=None, config=DEFAULT_CONFIG):
    beta = (1.0 + m) / b
    lm = _laguerre_moment_real(n, alpha, b)
    out = (math.lgamma(beta) + beta - math.log(b) - beta * math.log(beta) + beta * math.log(lm))
    if m != 0:
        if log_mean is None:
            log_mean = laguerre_log_mean(n, alpha, config)
        out -= m * log_mean
    return out


def _laguerre_moment_real(n, alpha, b):
    if float(b).is_integer():
        return laguerre_moment(n, alpha, int(b))
    raise ValueError("only integer moment orders are supported")


def laguerre_optimal_bound(n, alpha, vary_m=True, b_max=40, m_grid=(-0.9, 6.0, 0.001),
                           config=DEFAULT_CONFIG):
    """(b_opt, m_opt, bound): integer b in [1, b_max], m on a grid then refined.

    With ``vary_m=False`` the m = 0 family is optimized over b only.
    """
    log_moments = np.array([math.log(laguerre_moment(n, alpha, b)) for b in range(1, b_max + 1)])
    if not vary_m:
        vals = [_log_bound(n, alpha, b, 0.0) for b in range(1, b_max + 1)]
        i = int(np.argmin(vals))
        return i + 1, 0.0, math.exp(vals[i])
    lnx = laguerre_log_mean(n, alpha, config)
    lo, hi, step = m_grid
    ms = lo + step * np.arange(int(round((hi - lo) / step)) + 1)
    from scipy.special import gammaln

    def table(b, mm):
        beta = (1.0 + mm) / b
        return gammaln(beta) + beta - math.log(b) - beta * np.log(beta) + beta * log_moments[b - 1] - mm * lnx

    best = None
    for b in range(1, b_max + 1):
        v = table(b, ms)
        j = int(np.argmin(v))
        if best is None or v[j] < best[2]:
            best = (b, float(ms[j]), float(v[j]))
    b, m0, _ = best
    a_, c_ = max(-0.9, m0 - step), min(hi, m0 + step)
    res = optimize.minimize_scalar(lambda mm: float(table(b, np.array([mm]))[0]),
                                   bounds=(a_, c_), method="bounded",
                                   options={"xatol": 1e-9})
    m_opt = float(res.x) if res.fun <= best[2] else m0
    return b, m_opt, math.exp(min(res.fun, best[2]))


# --- fits and reports -------------------------------------------------------

def fit_shannon_vs_stddev(family, alpha=0.0, n_range=range(0, 101), config=DEFAULT_CONFIG):
    """(slope, intercept, r) of the least-squares line N = slope * dx + intercept."""
    ns = list(n_range)
    if len(ns) < 3:
        raise ValueError("need at least three degrees for a fit")
    if family == "hermite":
        xs = [hermite_stddev(n) for n in ns]
        ys = [hermite_shannon_length(n, config) for n in ns]
    elif family == "laguerre":
        xs = [laguerre_stddev(n, alpha) for n in ns]
        ys = [laguerre_shannon_length(n, alpha, config)[0] for n in ns]
    else:
        raise ValueError(f"unknown family {family!r}")
    res = stats.linregress(xs, ys)
    return float(res.slope), float(res.intercept), float(res.rvalue)


def hermite_asymptotic_wq(q):
    """Large-n limit of W_q (2n + 1)^{(q-1)/2} for 0 < q < 4/3."""
    return ((2.0 / math.pi) ** q * math.gamma(q + 0.5) * math.gamma(1.0 - q / 2.0)
            / (math.gamma(q + 1.0) * math.gamma(1.5 - q / 2.0)))


@dataclass
class SpreadingReport:
    moments: dict = field(default_factory=dict)
    std_dev: float = math.nan
    entropic_moments: dict = field(default_factory=dict)
    renyi_lengths: dict = field(default_factory=dict)
    shannon_entropy: float = math.nan
    shannon_length: float = math.nan
    shannon_asymptotic: float = math.nan
    shannon_bounds: list = field(default_factory=list)
    fisher_info: float = math.nan
    fisher_length: float = math.nan
    method_tags: dict = field(default_factory=dict)


def hermite_report(n, q_list=(2, 3), k_list=(2, 4), config=DEFAULT_CONFIG):
    rep = SpreadingReport()
    for k in k_list:
        rep.moments[k] = hermite_moment(n, k)
    rep.std_dev = hermite_stddev(n)
    for q in q_list:
        method = auto_method(n, q)
        rep.entropic_moments[q] = hermite_entropic_moment(n, q, method, config)
        rep.renyi_lengths[q] = rep.entropic_moments[q] ** (-1.0 / (q - 1.0))
        rep.method_tags[f"W_{q}"] = method
    rep.shannon_entropy = hermite_shannon_entropy(n, config)
    rep.shannon_length = math.exp(rep.shannon_entropy)
    rep.shannon_asymptotic = ASYMPTOTIC_RATIO * rep.std_dev
    k, c = hermite_optimal_bound(n)
    rep.shannon_bounds.append(({"k": k}, c))
    rep.fisher_info, rep.fisher_length = hermite_fisher(n)
    rep.method_tags.update(moments="closed-form", shannon="quadrature", fisher="closed-form")
    return rep


def laguerre_report(n, alpha, q_list=(2, 3), k_list=(1, 2), config=DEFAULT_CONFIG):
    rep = SpreadingReport()
    for k in k_list:
        rep.moments[k] = laguerre_moment(n, alpha, k)
    rep.std_dev = laguerre_stddev(n, alpha)
    for q in q_list:
        method = auto_method(n, q)
        rep.entropic_moments[q] = laguerre_entropic_moment(n, alpha, q, method, config)
        rep.renyi_lengths[q] = rep.entropic_moments[q] ** (-1.0 / (q - 1.0))
        rep.method_tags[f"W_{q}"] = method
    big_n, e_part, j_part = laguerre_shannon_length(n, alpha, config)
    rep.shannon_entropy = e_part + j_part
    rep.shannon_length = big_n
    rep.shannon_asymptotic = ASYMPTOTIC_RATIO * rep.std_dev
    b0, _, c0 = laguerre_optimal_bound(n, alpha, vary_m=False)
    rep.shannon_bounds.append(({"b": b0, "m": 0.0}, c0))
    b1, m1, c1 = laguerre_optimal_bound(n, alpha, vary_m=True, config=config)
    rep.shannon_bounds.append(({"b": b1, "m": m1}, c1))
    rep.fisher_info, rep.fisher_length = laguerre_fisher(n, alpha)
    rep.method_tags.update(moments="closed-form", shannon="quadrature+closed-form",
                           fisher="closed-form")
    return rep


def oscillator_rescale(report, lam):
    """Map a Hermite report to the oscillator of frequency parameter ``lam``.

    The oscillator density is the Hermite density of x sqrt(lam), so
    lengths scale by lam^{-1/2}.
    """
    if not lam > 0:
        raise ValueError("lambda must be positive")
    s = lam ** -0.5
    return replace(
        report,
        moments={k: v * lam ** (-k / 2.0) for k, v in report.moments.items()},
        std_dev=report.std_dev * s,
        entropic_moments={q: w * lam ** ((q - 1.0) / 2.0) for q, w in report.entropic_moments.items()},
        renyi_lengths={q: v * s for q, v in report.renyi_lengths.items()},
        shannon_entropy=report.shannon_entropy - math.log(math.sqrt(lam)),
        shannon_length=report.shannon_length * s,
        shannon_asymptotic=report.shannon_asymptotic * s,
        shannon_bounds=[(p, v * s) for p, v in report.shannon_bounds],
        fisher_info=report.fisher_info * lam,
        fisher_length=report.fisher_length * s,
        method_tags=dict(report.method_tags),
    )


def measure_check(family, n, alpha=0.0, q_list=(2,), config=DEFAULT_CONFIG):
    """Generic quadrature measures of a Rakhmanov density (validation aid)."""
    spec = specfun.hermite(n) if family == "hermite" else specfun.laguerre(n, alpha)
    return density_measures(rakhmanov_density(spec), q_list, config)
