"""Klein-Gordon particle in a Coulomb well: charge density and its measures.

Atomic units throughout, with the particle mass m0 and c = 1/alpha kept
explicit. The radial variable of the wavefunction is s = beta r, and the
Lorentz-invariant charge density carries the weight (eps + gamma c / r) / (m0 c^2).

The non-relativistic reference is the hydrogenic orbital of a particle with
mass m0, obtained from the three-dimensional formulas with Z -> m0 Z for
all lengths.
"""
import math
from dataclasses import dataclass

import numpy as np

from . import hydrogen3d, specfun
from .quadrature import DEFAULT_CONFIG, integrate, xlogx

C_LIGHT = 137.035999084
PION_MASS = 273.132054


@dataclass(frozen=True)
class KGOrbital:
    n: int
    l: int
    m: int = 0
    Z: float = 1.0
    m0: float = PION_MASS

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError("n must be a positive integer")
        if int(self.l) != self.l or not 0 <= self.l <= self.n - 1:
            raise ValueError("need 0 <= l <= n - 1")
        if int(self.m) != self.m or abs(self.m) > self.l:
            raise ValueError("need |m| <= l")
        if not self.Z > 0 or not self.m0 > 0:
            raise ValueError("Z and m0 must be positive")
        if not self.gamma < self.l + 0.5:
            raise ValueError(f"supercritical coupling: Z alpha = {self.gamma:.6g} >= l + 1/2")

    @property
    def gamma(self):
        return self.Z / C_LIGHT


@dataclass(frozen=True)
class KGDerived:
    lprime: float
    energy: float  # eps, the total energy including m0 c^2
    beta: float
    norm_sq: float  # N^2 of the radial function u(s)
    eps_over_beta: float


def kg_derived(orb):
    g = orb.gamma
    c = C_LIGHT
    mc2 = orb.m0 * c * c
    lp = math.sqrt((orb.l + 0.5) ** 2 - g * g) - 0.5
    nu = orb.n - orb.l + lp
    eps = mc2 / math.sqrt(1.0 + (g / nu) ** 2)
    # 1 - (eps/mc2)^2 = (g/nu)^2 / (1 + (g/nu)^2), written without cancellation
    t = g / nu
    beta = 2.0 * orb.m0 * c * t / math.sqrt(1.0 + t * t)
    eob = eps / beta
    norm_sq = mc2 / (2.0 * eob * nu + g * c)
    return KGDerived(lp, eps, beta, norm_sq, eob)


def _spec(orb, d):
    return specfun.laguerre(orb.n - orb.l - 1, 2.0 * d.lprime + 1.0)


def kg_radial_u(orb, s, d=None):
    """u(s) = N s^{l'+1} e^{-s/2} L~(s) (signed)."""
    d = d or kg_derived(orb)
    s = np.asarray(s, dtype=float)
    p = specfun.eval_poly(_spec(orb, d), s, weighted=True)  # s^{l'+1/2} e^{-s/2} L~
    return math.sqrt(d.norm_sq) * np.sqrt(s) * p


def kg_charge_density(orb, r):
    """Angle-reduced radial charge density P(r), with int_0^inf P dr = 1."""
    d = kg_derived(orb)
    r = np.asarray(r, dtype=float)
    mc2 = orb.m0 * C_LIGHT ** 2
    u = kg_radial_u(orb, d.beta * r, d)
    with np.errstate(divide="ignore", invalid="ignore"):
        return (d.energy + orb.gamma * C_LIGHT / r) / mc2 * u * u


def kg_nli_density(orb, r):
    """Diagnostic non-Lorentz-invariant density |psi|^2 reduced to r: u(beta r)^2."""
    d = kg_derived(orb)
    u = kg_radial_u(orb, d.beta * np.asarray(r, dtype=float), d)
    return u * u


def kg_nli_norm(orb):
    """int u(beta r)^2 dr for the rest-frame observer (differs from 1)."""
    d = kg_derived(orb)
    return d.norm_sq * kg_I_integral(orb.n, orb.l, d.lprime, 0) / d.beta


def kg_I_integral(n, l, lprime, k):
    """int_0^inf x^{2l'+k+2} e^{-x} [L~^{(2l'+1)}_{n-l-1}(x)]^2 dx as a finite sum."""
    if int(k) != k or k < -1:
        raise ValueError("k must be an integer >= -1")
    nr = n - l - 1
    terms = []
    for j in range(max(0, nr - k - 1), nr + 1):
        b = nr - j
        if b > k + 1:
            continue
        lb = math.lgamma(k + 2) - math.lgamma(b + 1) - math.lgamma(k + 2 - b)
        terms.append(math.exp(2 * lb + math.lgamma(2 * lprime + k + j + 3) - math.lgamma(j + 1)))
    return math.exp(math.lgamma(nr + 1) - math.lgamma(nr + 2 * lprime + 2)) * math.fsum(terms)


def kg_r_moment(orb, k):
    """<r^k> of the charge density for integer k >= 0."""
    if int(k) != k or k < 0:
        raise ValueError("k must be a non-negative integer")
    d = kg_derived(orb)
    mc2 = orb.m0 * C_LIGHT ** 2
    i_k = kg_I_integral(orb.n, orb.l, d.lprime, k)
    i_km1 = kg_I_integral(orb.n, orb.l, d.lprime, k - 1)
    return d.norm_sq / mc2 * d.beta ** (-k) * (d.eps_over_beta * i_k + orb.gamma * C_LIGHT * i_km1)


def kg_variance(orb):
    r1 = kg_r_moment(orb, 1)
    return kg_r_moment(orb, 2) - r1 * r1


def _circular_lprime(orb):
    if orb.l != orb.n - 1:
        raise ValueError("closed forms hold for circular states l = n - 1 only")
    return kg_derived(orb).lprime


def circular_centroid(orb):
    lp, g = _circular_lprime(orb), orb.gamma
    mc2 = orb.m0 * C_LIGHT ** 2
    return (C_LIGHT / (4.0 * mc2) / (g * math.sqrt(1.0 + (g / (lp + 1)) ** 2))
            * ((2 * lp + 2) * (2 * lp + 3) + 4 * g * g))


def circular_second_moment(orb):
    lp, g = _circular_lprime(orb), orb.gamma
    a = 1.0 / (orb.m0 * C_LIGHT)
    return a * a / (2 * g * g) * (lp + 1) * (2 * lp + 3) * ((lp + 1) * (lp + 2) + g * g)


def circular_variance(orb):
    lp, g = _circular_lprime(orb), orb.gamma
    a = 1.0 / (orb.m0 * C_LIGHT)
    return (a * a * (lp + 1) / (4 * g * g)
            * ((lp + 1) * (2 * lp + 3) * ((lp + 1) ** 2 + 2 * g * g) + 2 * g ** 4)
            / ((lp + 1) ** 2 + g * g))


# --- quadrature-based measures --------------------------------------------------

def _s_integral(orb, d, f, config, label, edge=None):
    """int_0^inf f(s) ds with the Laguerre zeros as breakpoints.

    ``edge`` is the exponent a of f ~ s^a at the origin. For a < 1 the first
    panel [0, s0] is mapped by s = s0 t^q with q = 1/(a+1), which turns the
    algebraic endpoint behaviour into a bounded smooth one.
    """
    zeros = specfun.poly_zeros(_spec(orb, d))
    if edge is None or edge >= 1.0:
        return integrate(f, (0.0, math.inf), config, zeros, label=label)[0]
    if not edge > -1.0:
        raise ValueError("non-integrable endpoint exponent")
    s0 = float(zeros[0]) if len(zeros) else 1.0
    q = 1.0 / (edge + 1.0)

    def g(t):
        t = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = f(s0 * t ** q) * s0 * q * t ** (q - 1.0)
        return np.where(t > 0, out, 0.0)

    head = integrate(g, (0.0, 1.0), config, label=label)[0]
    tail = integrate(f, (s0, math.inf), config, zeros[1:], label=label)[0]
    return head + tail


def _density_in_s(orb, d):
    """f^2(s) = rho_radial / r^2 as a function of s, so rho = f^2 |Y|^2."""
    mc2 = orb.m0 * C_LIGHT ** 2
    sp = _spec(orb, d)

    def f2(s):
        p = specfun.eval_poly(sp, s, weighted=True)
        # u^2 / r^2 = N^2 s p^2 beta^2 / s^2 = N^2 beta^2 p^2 / s
        with np.errstate(divide="ignore", invalid="ignore"):
            w = (d.eps_over_beta + orb.gamma * C_LIGHT / s) / mc2 * d.beta
            return w * d.norm_sq * d.beta ** 2 * p * p / s

    return f2


def kg_norm_quadrature(orb, config=DEFAULT_CONFIG):
    d = kg_derived(orb)
    return _s_integral(orb, d, lambda s: kg_charge_density(orb, s / d.beta) / d.beta, config,
                       "KG charge normalization", edge=2 * d.lprime)


def kg_moment_quadrature(orb, k, config=DEFAULT_CONFIG):
    d = kg_derived(orb)
    return _s_integral(orb, d, lambda s: (s / d.beta) ** k * kg_charge_density(orb, s / d.beta) / d.beta,
                       config, f"KG <r^{k}>", edge=2 * d.lprime + k)


def kg_I_quadrature(orb, k, config=DEFAULT_CONFIG):
    d = kg_derived(orb)
    sp = _spec(orb, d)

    def f(x):
        p = specfun.eval_poly(sp, x, weighted=True)
        return x ** (k + 1) * p * p

    return _s_integral(orb, d, f, config, f"I({k})", edge=2 * d.lprime + k + 2)


def kg_shannon(orb, config=DEFAULT_CONFIG):
    """(S, N): Shannon entropy of the charge density and its entropic power."""
    d = kg_derived(orb)
    f2 = _density_in_s(orb, d)
    b3 = d.beta ** 3

    def rad(s):
        # -int f^2 ln f^2 r^2 dr with r = s / beta
        v = f2(s)
        return -(s * s / b3) * xlogx(v)

    s_r = _s_integral(orb, d, rad, config, f"KG radial entropy {orb}", edge=2 * d.lprime + 1)
    s_y = hydrogen3d.shannon(hydrogen3d.Orbital3D(orb.l + 1, orb.l, orb.m), config)[2]
    s = s_r + s_y
    return s, math.exp(2.0 * s / 3.0) / (2.0 * math.pi * math.e)


def kg_fisher_diverges(orb):
    """True when int |grad rho|^2 / rho diverges at the origin.

    Near r = 0 the charge density behaves as r^p with p = 2l' - 1 (the
    Coulomb term of the weight dominates), and the Fisher integrand as
    r^p; the integral diverges when p <= -1, i.e. l' <= 0, which is every
    l = 0 state.
    """
    return kg_derived(orb).lprime <= 0.0


def kg_disequilibrium_diverges(orb):
    """True when int rho^2 diverges at the origin (rho^2 r^2 ~ r^{4l'})."""
    return 4.0 * kg_derived(orb).lprime <= -1.0


def _radial_amplitude(orb, d):
    """Signed f(r) = sqrt(rho_radial)/r and df/dr for the gradient integral."""
    mc2 = orb.m0 * C_LIGHT ** 2
    sp = _spec(orb, d)
    gc = orb.gamma * C_LIGHT
    pref = math.sqrt(d.norm_sq / mc2) * d.beta

    def f(r):
        r = np.asarray(r, dtype=float)
        s = np.maximum(d.beta * r, 1e-100)
        rr = s / d.beta
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            p, dp = specfun.eval_poly(sp, s, derivative=True, weighted=True)
            w = d.energy + gc / rr  # eps + gamma c / r
            sw = np.sqrt(w)
            # f = pref * sqrt(w) * p / sqrt(s)
            val = pref * sw * p / np.sqrt(s)
            dw = -gc / (rr * rr)
            dval = pref * (0.5 * dw / sw * p / np.sqrt(s)
                           + sw * d.beta * (dp / np.sqrt(s) - 0.5 * p / (s * np.sqrt(s))))
        tail = s > 1.0
        val = np.where(tail & ~np.isfinite(val), 0.0, val)
        dval = np.where(tail & ~np.isfinite(dval), 0.0, dval)
        return val, dval

    return f


def kg_fisher(orb, config=DEFAULT_CONFIG):
    """Fisher information of the charge density, or None when it diverges."""
    if kg_fisher_diverges(orb):
        return None
    d = kg_derived(orb)
    zeros = specfun.poly_zeros(_spec(orb, d)) / d.beta
    return hydrogen3d.fisher_quadrature(_radial_amplitude(orb, d), orb.l, orb.m, config,
                                        zeros=zeros, scale=1.0 / d.beta)


def kg_disequilibrium(orb, config=DEFAULT_CONFIG):
    """int rho^2 d^3r, or None when it diverges."""
    if kg_disequilibrium_diverges(orb):
        return None
    d = kg_derived(orb)
    f2 = _density_in_s(orb, d)
    b3 = d.beta ** 3
    rad = _s_integral(orb, d, lambda s: (s * s / b3) * f2(s) ** 2, config, f"KG <rho> {orb}",
                      edge=4 * d.lprime)
    return rad * hydrogen3d.angular_disequilibrium(orb.l, orb.m)


# --- Schroedinger reference and report ------------------------------------------

def schrodinger_reference(orb):
    """Hydrogenic orbital of a particle with mass m0 (lengths scale as 1/(m0 Z))."""
    return hydrogen3d.Orbital3D(orb.n, orb.l, orb.m, orb.Z * orb.m0)


@dataclass
class KGReport:
    moments: dict
    centroid: float
    variance: float
    shannon: float
    shannon_power: float
    fisher: object  # float or None when divergent
    fisher_divergent: bool
    disequilibrium: object  # float or None when divergent
    c_fs: object
    c_sc: object
    sch_centroid: float
    sch_variance: float
    sch_shannon_power: float
    sch_fisher: float
    sch_c_fs: float
    sch_c_sc: float
    ratio_centroid: float
    ratio_variance: float
    ratio_shannon_power: float
    ratio_fisher: object  # I_Sch / I_KG
    zeta_fs: object
    zeta_sc: object


def kg_complexities(orb, config=DEFAULT_CONFIG):
    """(C_FS, C_SC, zeta_FS, zeta_SC); entries are None where undefined."""
    r = kg_report(orb, config, moments=())
    return r.c_fs, r.c_sc, r.zeta_fs, r.zeta_sc


def kg_report(orb, config=DEFAULT_CONFIG, moments=(0, 1, 2, 3)):
    mom = {k: kg_r_moment(orb, k) for k in moments}
    r1 = kg_r_moment(orb, 1)
    var = kg_variance(orb)
    s, n_pow = kg_shannon(orb, config)
    fi = kg_fisher(orb, config)
    dis = kg_disequilibrium(orb, config)
    c_fs = None if fi is None else fi * n_pow
    c_sc = None if dis is None else dis * math.exp(s)

    ref = schrodinger_reference(orb)
    s_sch = hydrogen3d.shannon(ref, config)[0]
    n_sch = math.exp(2.0 * s_sch / 3.0) / (2.0 * math.pi * math.e)
    i_sch = hydrogen3d.fisher(ref)
    _, cfs_sch, csc_sch = hydrogen3d.complexities(ref, config)
    r1_sch = hydrogen3d.r_expectation(ref)
    var_sch = hydrogen3d.variance(ref)
    return KGReport(
        moments=mom, centroid=r1, variance=var, shannon=s, shannon_power=n_pow,
        fisher=fi, fisher_divergent=fi is None, disequilibrium=dis, c_fs=c_fs, c_sc=c_sc,
        sch_centroid=r1_sch, sch_variance=var_sch, sch_shannon_power=n_sch, sch_fisher=i_sch,
        sch_c_fs=cfs_sch, sch_c_sc=csc_sch,
        ratio_centroid=r1 / r1_sch, ratio_variance=var / var_sch, ratio_shannon_power=n_pow / n_sch,
        ratio_fisher=None if fi is None else i_sch / fi,
        zeta_fs=None if c_fs is None else 1.0 - cfs_sch / c_fs,
        zeta_sc=None if c_sc is None else 1.0 - csc_sch / c_sc,
    )
