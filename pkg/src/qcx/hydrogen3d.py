"""Spreading measures and complexities of three-dimensional hydrogenic orbitals.

Closed forms cover energy, variance, Fisher information, <r> and the
disequilibrium. The Shannon entropy is assembled from closed-form
constants plus entropic integrals of the Laguerre and Gegenbauer
polynomials that build the orbital, and every closed form has a
quadrature counterpart here for validation.
"""
import math
from dataclasses import dataclass

import numpy as np

from . import specfun
from .quadrature import DEFAULT_CONFIG, entropic_integral_E, integrate, xlogx


@dataclass(frozen=True)
class Orbital3D:
    n: int
    l: int
    m: int = 0
    Z: float = 1.0

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError("n must be a positive integer")
        if int(self.l) != self.l or not 0 <= self.l <= self.n - 1:
            raise ValueError("need 0 <= l <= n - 1")
        if int(self.m) != self.m or abs(self.m) > self.l:
            raise ValueError("need |m| <= l")
        if not self.Z > 0:
            raise ValueError("Z must be positive")


def energy(orb):
    return -orb.Z ** 2 / (2.0 * orb.n ** 2)


def variance(orb):
    n, l = orb.n, orb.l
    return (n * n * (n * n + 2) - l * l * (l + 1) ** 2) / (4.0 * orb.Z ** 2)


def fisher(orb):
    return 4.0 * orb.Z ** 2 * (orb.n - abs(orb.m)) / orb.n ** 3


def r_expectation(orb):
    return (3 * orb.n ** 2 - orb.l * (orb.l + 1)) / (2.0 * orb.Z)


# --- densities ----------------------------------------------------------------

def _radial_spec(orb):
    return specfun.laguerre(orb.n - orb.l - 1, 2 * orb.l + 1)


def _angular_spec(l, m):
    return specfun.gegenbauer(l - abs(m), abs(m) + 0.5)


def scaled_radial_density(orb, x):
    """Radial density in the variable x = 2 Z r / n: x w(x) L~^2(x) / (2n)."""
    x = np.asarray(x, dtype=float)
    s = specfun.eval_poly(_radial_spec(orb), x, weighted=True)
    return x * s * s / (2.0 * orb.n)


def radial_density(orb, r):
    """D(r) = r^2 R_{nl}(r)^2, normalized on [0, inf)."""
    k = 2.0 * orb.Z / orb.n
    return k * scaled_radial_density(orb, k * np.asarray(r, dtype=float))


def radial_wavefunction(orb, r):
    """R_{nl}(r) (sign as given by the orthonormal Laguerre polynomial)."""
    r = np.asarray(r, dtype=float)
    k = 2.0 * orb.Z / orb.n
    x = k * r
    spec = _radial_spec(orb)
    s = specfun.eval_poly(spec, x, weighted=True)
    # x w L~^2/(2n) * k = r^2 R^2, with sqrt(w) L~ = s
    with np.errstate(divide="ignore", invalid="ignore"):
        out = s * np.sqrt(k / (2.0 * orb.n)) * np.sqrt(x) / np.where(r > 0, r, np.nan)
    # at the origin s / sqrt(x) = x^l e^{-x/2} L~, finite only for l = 0
    at0 = k * math.sqrt(k / (2.0 * orb.n)) * float(specfun.eval_poly(spec, 0.0)) if orb.l == 0 else 0.0
    return np.where(r == 0, at0, out)


def theta_amplitude(l, m, theta):
    """Signed Theta(theta) with int Theta^2 sin(theta) dtheta = 1."""
    c = np.cos(np.asarray(theta, dtype=float))
    return specfun.eval_poly(_angular_spec(l, m), c) * np.sin(theta) ** abs(m)


def ylm_squared(l, m, theta):
    """|Y_lm(theta, phi)|^2 (independent of phi)."""
    return theta_amplitude(l, m, theta) ** 2 / (2.0 * math.pi)


def angular_density(orb, theta):
    """Theta density on [0, pi]: 2 pi |Y_lm|^2 sin(theta), integrating to 1."""
    return ylm_squared(orb.l, orb.m, theta) * 2.0 * math.pi * np.sin(theta)


def density(orb, r, theta):
    """Full probability density |psi|^2 at (r, theta)."""
    return radial_wavefunction(orb, r) ** 2 * ylm_squared(orb.l, orb.m, theta)


# --- disequilibrium -------------------------------------------------------------

def _log_comb(a, b):
    return math.lgamma(a + 1) - math.lgamma(b + 1) - math.lgamma(a - b + 1)


def radial_disequilibrium(orb):
    """int R^4 r^2 dr as a finite sum evaluated in log space."""
    n, l = orb.n, orb.l
    nr = n - l - 1
    terms = []
    for k in range(nr + 1):
        lg = (2 * _log_comb(2 * nr - 2 * k, nr - k) + _log_comb(2 * k, k)
              + math.lgamma(4 * l + 2 * k + 3) - 2 * math.lgamma(2 * l + k + 2))
        terms.append(math.exp(lg))
    log_pref = (2 - 4 * n) * math.log(2.0) - 5 * math.log(n)
    return orb.Z ** 3 * math.exp(log_pref) * math.fsum(terms)


def angular_disequilibrium(l, m):
    """int |Y_lm|^4 dOmega via the linearization of |Y_lm|^2 in 3j symbols."""
    terms = []
    for lp in range(0, 2 * l + 1, 2):  # odd l' vanish with zero projections
        a = specfun.wigner3j(l, l, lp, 0, 0, 0)
        b = specfun.wigner3j(l, l, lp, m, m, -2 * m)
        terms.append((2 * lp + 1) * (a * b) ** 2)
    return (2 * l + 1) ** 2 / (4.0 * math.pi) * math.fsum(terms)


def disequilibrium(orb):
    """(total, radial part, angular part) of <rho> = int rho^2."""
    rad = radial_disequilibrium(orb)
    ang = angular_disequilibrium(orb.l, orb.m)
    return rad * ang, rad, ang


# --- Shannon entropy ------------------------------------------------------------

def radial_constant(n, l):
    """Closed-form part of the radial entropy at Z = 1 (without the E_1 term)."""
    return (math.log(n ** 4 / 4.0) + (3.0 * n * n - l * (l + 1)) / n
            - 2.0 * l * ((2.0 * n - 2.0 * l - 1.0) / (2.0 * n) + specfun.digamma(n + l + 1.0)))


def angular_constant(l, m):
    """Closed-form part of the angular entropy (without the E_0 term)."""
    am = abs(m)
    out = math.log(2.0 * math.pi) + 2.0 * am * math.log(2.0)
    if am:
        out -= 2.0 * am * (specfun.digamma(l + am + 1.0) - specfun.digamma(l + 0.5)
                           - 1.0 / (2.0 * l + 1.0))
    return out


def log_total_constant(n, l, m):
    """A(n, l, m): the full closed-form constant of the entropy decomposition."""
    return radial_constant(n, l) + angular_constant(l, m)


def shannon(orb, config=DEFAULT_CONFIG):
    """(S, S_radial, S_angular) from the decomposition

    S = A(n,l,m) - E_1 / (2n) - E_0 - 3 ln Z,

    with E_1 the weighted entropic integral of L~^{(2l+1)}_{n-l-1} and E_0
    that of C~^{(|m|+1/2)}_{l-|m|} (both taken without a leading minus).
    """
    e1 = entropic_integral_E(_radial_spec(orb), 1, config)
    e0 = entropic_integral_E(_angular_spec(orb.l, orb.m), 0, config)
    s_r = radial_constant(orb.n, orb.l) - e1 / (2.0 * orb.n) - 3.0 * math.log(orb.Z)
    s_y = angular_constant(orb.l, orb.m) - e0
    return s_r + s_y, s_r, s_y


def shannon_direct(orb, config=DEFAULT_CONFIG):
    """(S, S_radial, S_angular) by direct quadrature of -rho ln rho.

    The density factorizes as R^2(r) |Y|^2(theta), so the integral over
    space splits exactly into -int r^2 R^2 ln R^2 dr and
    -int |Y|^2 ln |Y|^2 dOmega; both are integrated in their own variables
    without the polynomial decomposition.
    """
    k = 2.0 * orb.Z / orb.n
    zeros = specfun.poly_zeros(_radial_spec(orb)) / k

    def rad(r):
        d = radial_density(orb, r)
        out = np.zeros_like(d)
        pos = (d > 0) & (r > 0)
        out[pos] = -d[pos] * (np.log(d[pos]) - 2.0 * np.log(r[pos]))
        return out

    s_r = integrate(rad, (0.0, math.inf), config, zeros, scale=1.0 / k,
                    label=f"direct radial entropy {orb}")[0]
    tz = np.arccos(specfun.poly_zeros(_angular_spec(orb.l, orb.m)))

    def ang(t):
        y2 = ylm_squared(orb.l, orb.m, t)
        return -2.0 * math.pi * np.sin(t) * xlogx(y2)

    s_y = integrate(ang, (0.0, math.pi), config, tz, label=f"direct angular entropy {orb}")[0]
    return s_r + s_y, s_r, s_y


# --- complexities ---------------------------------------------------------------

def complexities(orb, config=DEFAULT_CONFIG):
    """(C_CR, C_FS, C_SC)."""
    n, l, m = orb.n, orb.l, orb.m
    c_cr = (n - abs(m)) / n ** 3 * (n * n * (n * n + 2) - l * l * (l + 1) ** 2)
    s, _, _ = shannon(orb, config)
    c_fs = fisher(orb) * math.exp(2.0 * s / 3.0) / (2.0 * math.pi * math.e)
    c_sc = disequilibrium(orb)[0] * math.exp(s)
    return c_cr, c_fs, c_sc


def complexity_bounds(orb, config=DEFAULT_CONFIG):
    """(B_FS, B_SC, xi_FS, xi_SC): upper bounds from <r> and relative gaps."""
    n, l, m = orb.n, orb.l, orb.m
    t = 3 * n * n - l * (l + 1)
    b_fs = 2.0 * math.e / (9.0 * math.pi ** (1.0 / 3.0)) * (n - abs(m)) / n ** 3 * t * t
    d = disequilibrium(Orbital3D(n, l, m, 1.0))[0]
    b_sc = math.pi * math.e ** 3 / 27.0 * t ** 3 * d
    _, c_fs, c_sc = complexities(orb, config)
    return b_fs, b_sc, (b_fs - c_fs) / c_fs, (b_sc - c_sc) / c_sc


@dataclass
class HydroMeasures:
    energy: float
    variance: float
    fisher: float
    r_mean: float
    shannon: float
    shannon_radial: float
    shannon_angular: float
    disequilibrium: float
    c_cr: float
    c_fs: float
    c_sc: float
    b_fs: float
    b_sc: float
    xi_fs: float
    xi_sc: float


def measures(orb, config=DEFAULT_CONFIG):
    s, s_r, s_y = shannon(orb, config)
    c_cr, c_fs, c_sc = complexities(orb, config)
    b_fs, b_sc, xi_fs, xi_sc = complexity_bounds(orb, config)
    return HydroMeasures(energy(orb), variance(orb), fisher(orb), r_expectation(orb), s, s_r, s_y,
                         disequilibrium(orb)[0], c_cr, c_fs, c_sc, b_fs, b_sc, xi_fs, xi_sc)


# --- quadrature counterparts ----------------------------------------------------

def _radial_integral(orb, f, config, label):
    # integrate in x = 2 Z r / n so the grid does not depend on Z
    k = 2.0 * orb.Z / orb.n
    zeros = specfun.poly_zeros(_radial_spec(orb))
    g = lambda x: f(x / k) / k
    return integrate(g, (0.0, math.inf), config, zeros, label=label)[0]


def _angular_integral(orb, f, config, label):
    tz = np.arccos(specfun.poly_zeros(_angular_spec(orb.l, orb.m)))
    return integrate(f, (0.0, math.pi), config, tz, label=label)[0]


def quadrature_measures(orb, config=DEFAULT_CONFIG):
    """Definitional integrals: norm, <r>, variance, disequilibrium, Fisher."""
    norm = _radial_integral(orb, lambda r: radial_density(orb, r), config, "norm")
    r1 = _radial_integral(orb, lambda r: r * radial_density(orb, r), config, "<r>")
    r2 = _radial_integral(orb, lambda r: r * r * radial_density(orb, r), config, "<r^2>")
    rad4 = _radial_integral(
        orb, lambda r: np.where(r > 0, radial_density(orb, r) ** 2 / np.where(r > 0, r, 1.0) ** 2, 0.0),
        config, "radial disequilibrium")
    ang4 = _angular_integral(
        orb, lambda t: 2.0 * math.pi * np.sin(t) * ylm_squared(orb.l, orb.m, t) ** 2, config,
        "angular disequilibrium")
    fi = fisher_quadrature(radial_amplitude_fn(orb), orb.l, orb.m, config,
                           zeros=specfun.poly_zeros(_radial_spec(orb)) * orb.n / (2.0 * orb.Z),
                           scale=orb.n / (2.0 * orb.Z))
    return dict(norm=norm, r_mean=r1, variance=r2 - r1 * r1, disequilibrium=rad4 * ang4, fisher=fi)


def radial_amplitude_fn(orb):
    """Signed f(r) = R(r) with its derivative, for gradient integrals."""
    spec = _radial_spec(orb)
    k = 2.0 * orb.Z / orb.n
    c = math.sqrt(k / (2.0 * orb.n))

    def f(r):
        r = np.asarray(r, dtype=float)
        x = np.maximum(k * r, 1e-100)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            s, ds = specfun.eval_poly(spec, x, derivative=True, weighted=True)
            # R = c sqrt(x) s / r = c k s / sqrt(x)
            sx = np.sqrt(x)
            val = c * k * s / sx
            dval = c * k * k * (ds / sx - 0.5 * s / (x * sx))
        # far tail: the weight underflows before the polynomial overflows
        tail = x > 1.0
        val = np.where(tail & ~np.isfinite(val), 0.0, val)
        dval = np.where(tail & ~np.isfinite(dval), 0.0, dval)
        return val, dval

    return f


def angular_fisher_factor(l, m, config=DEFAULT_CONFIG):
    """4 int (d Theta / d theta)^2 sin(theta) dtheta for the signed Theta."""
    spec = _angular_spec(l, m)
    am = abs(m)

    def integrand(t):
        c, s = np.cos(t), np.sin(t)
        p, dp = specfun.eval_poly(spec, c, derivative=True)
        with np.errstate(divide="ignore", invalid="ignore"):
            dtheta = -s * dp * s ** am + (p * am * s ** (am - 1) * c if am else 0.0)
        return 4.0 * dtheta ** 2 * s

    tz = np.arccos(specfun.poly_zeros(spec))
    return integrate(integrand, (0.0, math.pi), config, tz, label="angular Fisher factor")[0]


def fisher_quadrature(radial_fn, l, m, config=DEFAULT_CONFIG, zeros=(), scale=1.0):
    """Fisher information of rho = f(r)^2 |Y_lm|^2 from a signed radial amplitude.

    With a product density the gradient integral separates exactly:
    I = 4 int f'^2 r^2 dr + 4 <r^-2>_f int (dTheta/dtheta)^2 sin dtheta,
    where <r^-2>_f = int f^2 dr.
    """
    def rad(r):
        _, df = radial_fn(r)
        return (2.0 * r * df) ** 2

    i_rad = integrate(rad, (0.0, math.inf), config, zeros, scale=scale, label="radial Fisher")[0]
    if l == 0:
        return i_rad
    inv_r2 = integrate(lambda r: radial_fn(r)[0] ** 2, (0.0, math.inf), config, zeros,
                       scale=scale, label="<r^-2>")[0]
    return i_rad + inv_r2 * angular_fisher_factor(l, m, config)


# --- relative measures and fits -------------------------------------------------

def relative_complexities(orb, config=DEFAULT_CONFIG):
    """(zeta_CR, zeta_FS, zeta_SC): complexities divided by their ground-state values."""
    gs = complexities(Orbital3D(1, 0, 0, orb.Z), config)
    return tuple(c / g for c, g in zip(complexities(orb, config), gs))


def fisher_shannon_quadratic_fit(l=0, m=0, n_max=20, config=DEFAULT_CONFIG):
    """Least-squares fit zeta_FS(n, l, m) = a n^2 + b n + c over n = l+1..n_max.

    Returns (a, b, c, R) with R the correlation between data and fit.
    """
    ns = np.arange(l + 1, n_max + 1)
    if len(ns) < 3:
        raise ValueError("need at least three values of n")
    z = np.array([relative_complexities(Orbital3D(int(k), l, m), config)[1] for k in ns])
    a, b, c = np.polyfit(ns, z, 2)
    r = float(np.corrcoef(np.polyval((a, b, c), ns), z)[0, 1])
    return float(a), float(b), float(c), r
