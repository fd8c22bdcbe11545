"""LMC shape complexity of D-dimensional hydrogenic states.

Position and momentum densities factor into a radial part and a
hyperspherical harmonic. The harmonic is a product of Gegenbauer factors in
the polar angles, so every angular integral reduces to a product of 1D
integrals. Radial momentum integrals are mapped onto [-1, 1] with
y = (1 - u^2) / (1 + u^2), u = eta p / Z.

Ground states (n = 1) and circular states (all mu_i = n - 1) also have
closed forms, returned with method tag "closed-form".
"""
import math
from dataclasses import dataclass, field

import numpy as np

from . import specfun
from .quadrature import DEFAULT_CONFIG, entropic_integral_E, integrate, xlogx

_psi = specfun.digamma
_lg = math.lgamma


@dataclass(frozen=True)
class DOrbital:
    D: int
    n: int
    mu: tuple = ()
    Z: float = 1.0

    def __post_init__(self):
        if int(self.D) != self.D or self.D < 2:
            raise ValueError("D must be an integer >= 2")
        if int(self.n) != self.n or self.n < 1:
            raise ValueError("n must be a positive integer")
        mu = tuple(int(v) for v in self.mu) if len(self.mu) else (0,) * (self.D - 1)
        if len(mu) != self.D - 1:
            raise ValueError(f"need {self.D - 1} hyperangular quantum numbers")
        if any(v != int(v) for v in self.mu):
            raise ValueError("hyperangular quantum numbers must be integers")
        object.__setattr__(self, "mu", mu)
        chain = list(mu[:-1]) + [abs(mu[-1])]
        if any(a < b for a, b in zip(chain, chain[1:])) or chain[-1] < 0:
            raise ValueError("need mu_1 >= mu_2 >= ... >= |mu_{D-1}| >= 0")
        if self.l > self.n - 1:
            raise ValueError("need l = mu_1 <= n - 1")
        if not self.Z > 0:
            raise ValueError("Z must be positive")

    @property
    def l(self):
        return abs(self.mu[0]) if self.D == 2 else self.mu[0]

    @property
    def eta(self):
        return self.n + (self.D - 3) / 2.0

    @property
    def grand_l(self):
        return self.l + (self.D - 3) / 2.0

    @property
    def is_ground(self):
        return self.n == 1

    @property
    def is_circular(self):
        return all(abs(v) == self.n - 1 for v in self.mu)


def ground(D, Z=1.0):
    return DOrbital(D, 1, (0,) * (D - 1), Z)


def circular(D, n, Z=1.0):
    return DOrbital(D, n, (n - 1,) * (D - 1), Z)


def energy_d(orb):
    return -orb.Z ** 2 / (2.0 * orb.eta ** 2)


# --- building blocks ------------------------------------------------------------

def _radial_spec(orb):
    return specfun.laguerre(orb.n - orb.l - 1, 2 * orb.l + orb.D - 2)


def _momentum_spec(orb):
    return specfun.gegenbauer(orb.n - orb.l - 1, orb.grand_l + 1.0)


def _angular_specs(orb):
    """(spec, exponent of sin) for each polar angle theta_1 .. theta_{D-2}."""
    D, mu = orb.D, orb.mu
    out = []
    for j in range(1, D - 1):
        hi = mu[j - 1]
        lo = abs(mu[j]) if j == D - 2 else mu[j]
        alpha = (D - j - 1) / 2.0
        out.append((specfun.gegenbauer(hi - lo, alpha + lo), lo, D - j - 1))
    return out


def _length_scale(orb):
    # lambda = eta / (2 Z); r = lambda x
    return orb.eta / (2.0 * orb.Z)


def radial_wavefunction_sq(orb, r):
    """R_{nl}(r)^2 with int r^{D-1} R^2 dr = 1."""
    lam = _length_scale(orb)
    x = np.asarray(r, dtype=float) / lam
    spec = _radial_spec(orb)
    s = specfun.eval_poly(spec, x, weighted=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = lam ** (-orb.D) / (2.0 * orb.eta) * s * s * x ** (2.0 - orb.D)
    # at the origin s^2 x^{2-D} = x^{2l} e^{-x} p^2, finite only for l = 0
    at0 = lam ** (-orb.D) / (2.0 * orb.eta) * float(specfun.eval_poly(spec, 0.0)) ** 2 if orb.l == 0 else 0.0
    return np.where(x == 0, at0, out)


def hyperspherical_sq(orb, angles):
    """|Y_{l,{mu}}|^2 at polar angles (theta_1, ..., theta_{D-2}); phi-independent."""
    angles = list(angles)
    specs = _angular_specs(orb)
    if len(angles) != len(specs):
        raise ValueError(f"need {len(specs)} polar angles")
    val = 1.0 / (2.0 * math.pi)
    for (spec, lo, _), t in zip(specs, angles):
        t = np.asarray(t, dtype=float)
        val = val * (specfun.eval_poly(spec, np.cos(t)) * np.sin(t) ** lo) ** 2
    return val


def position_density_d(orb, r, angles=()):
    return radial_wavefunction_sq(orb, r) * hyperspherical_sq(orb, angles)


def momentum_radial_sq(orb, p):
    """M_{nl}(p)^2 with int p^{D-1} M^2 dp = 1."""
    p = np.asarray(p, dtype=float)
    u = orb.eta * p / orb.Z
    y = (1.0 - u * u) / (1.0 + u * u)
    c = specfun.eval_poly(_momentum_spec(orb), y)
    l, L = orb.l, orb.grand_l
    return (orb.eta / orb.Z) ** orb.D * (1.0 - y) ** l * (1.0 + y) ** (2 * L + 4 - l) * c * c


def momentum_density_d(orb, p, angles=()):
    return momentum_radial_sq(orb, p) * hyperspherical_sq(orb, angles)


# --- integrals ------------------------------------------------------------------

def _laguerre_integral(orb, f, config, label):
    zeros = specfun.poly_zeros(_radial_spec(orb))
    return integrate(f, (0.0, math.inf), config, zeros, label=label)[0]


def _gegen_integral(spec, f, config, label):
    return integrate(f, (-1.0, 1.0), config, specfun.poly_zeros(spec), label=label)[0]


def k1(orb, config=DEFAULT_CONFIG):
    """int r^{D-1} R^4 dr, the radial factor of <rho>."""
    spec = _radial_spec(orb)
    lam = _length_scale(orb)

    def f(x):
        s = specfun.eval_poly(spec, x, weighted=True)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            lg = 4.0 * np.log(np.abs(s)) + (3.0 - orb.D) * np.log(x)
            return np.where(np.isfinite(lg), np.exp(lg), 0.0)

    val = _laguerre_integral(orb, f, config, f"K1 {orb}")
    return val * lam ** (-orb.D) / (4.0 * orb.eta ** 2)


def k2(orb, config=DEFAULT_CONFIG):
    """int |Y|^4 dOmega as a product of per-angle quartic Gegenbauer integrals."""
    out = 1.0 / (2.0 * math.pi)
    for spec, lo, _ in _angular_specs(orb):
        lam = spec.param

        def f(t, spec=spec, lo=lo, lam=lam):
            c = specfun.eval_poly(spec, t)
            return c ** 4 * (1.0 - t * t) ** (2 * lo + lam - lo - 0.5)

        out *= _gegen_integral(spec, f, config, f"K2 factor {spec}")
    return out


def k3(orb, config=DEFAULT_CONFIG):
    """int p^{D-1} M^4 dp in the y variable."""
    spec = _momentum_spec(orb)
    l, L = orb.l, orb.grand_l

    def f(y):
        c = specfun.eval_poly(spec, y)
        return ((1.0 - y * y) ** (L + 0.5) * (1.0 - y) ** l * (1.0 + y) ** (2 * L + 5 - l)
                * c ** 4)

    return (orb.eta / orb.Z) ** orb.D * _gegen_integral(spec, f, config, f"K3 {orb}")


def disequilibrium_position(orb, config=DEFAULT_CONFIG):
    """(<rho>, K1, K2)."""
    a, b = k1(orb, config), k2(orb, config)
    return a * b, a, b


def disequilibrium_momentum(orb, config=DEFAULT_CONFIG):
    """(<gamma>, K3, K2)."""
    a, b = k3(orb, config), k2(orb, config)
    return a * b, a, b


# --- entropies ------------------------------------------------------------------

def radial_constant_d(n, l, D):
    """Closed-form part of the radial position entropy at Z = 1."""
    eta = n + (D - 3) / 2.0
    L = l + (D - 3) / 2.0
    out = D * math.log(eta / 2.0) + math.log(2.0 * eta) + (3 * eta * eta - L * (L + 1)) / eta
    if l:
        out -= 2.0 * l * ((2 * eta - 2 * L - 1) / (2 * eta) + _psi(eta + L + 1))
    return out


def momentum_constant_d(n, l, D):
    """Closed-form part of the radial momentum entropy at Z = 1."""
    eta = n + (D - 3) / 2.0
    L = l + (D - 3) / 2.0
    # at eta = 1/2 (D = 2, n = 1) the ratio is 0/0; its limit, fixed by direct
    # quadrature of the momentum entropy, is 1/2
    den = 4 * eta * eta - 1
    ratio = 0.5 if den == 0 else 2 * eta * (2 * L + 1) / den
    return (-D * math.log(eta) + (2 * L + 4) * math.log(2.0)
            - (2 * L + 4) * (_psi(eta + L + 1) - _psi(eta))
            + (L + 2) / eta
            - (D + 1) * (1 - ratio))


def angular_constant_d(orb):
    """Closed-form part of S[Y] (without the Gegenbauer entropic integrals)."""
    D, mu = orb.D, orb.mu
    out = math.log(2.0 * math.pi)
    for j in range(1, D - 1):
        hi = mu[j - 1]
        lo = abs(mu[j]) if j == D - 2 else mu[j]
        if lo == 0:
            continue
        a = (D - j - 1) / 2.0
        out -= 2.0 * lo * (_psi(2 * a + hi + lo) - _psi(a + hi) - math.log(2.0)
                           - 1.0 / (2.0 * (a + hi)))
    return out


def shannon_angular_d(orb, config=DEFAULT_CONFIG):
    e = math.fsum(entropic_integral_E(spec, 0, config) for spec, _, _ in _angular_specs(orb))
    return angular_constant_d(orb) - e


def shannon_position_d(orb, config=DEFAULT_CONFIG):
    """(S, S_radial, S_angular) of the position density."""
    e1 = entropic_integral_E(_radial_spec(orb), 1, config)
    s_r = radial_constant_d(orb.n, orb.l, orb.D) - e1 / (2.0 * orb.eta) - orb.D * math.log(orb.Z)
    s_y = shannon_angular_d(orb, config)
    return s_r + s_y, s_r, s_y


def shannon_momentum_d(orb, config=DEFAULT_CONFIG):
    """(S, S_radial, S_angular) of the momentum density."""
    e0 = entropic_integral_E(_momentum_spec(orb), 0, config)
    s_r = momentum_constant_d(orb.n, orb.l, orb.D) - e0 + orb.D * math.log(orb.Z)
    s_y = shannon_angular_d(orb, config)
    return s_r + s_y, s_r, s_y


def shannon_position_direct(orb, config=DEFAULT_CONFIG):
    """Position entropy by direct quadrature of -rho ln rho, per factor."""
    lam = _length_scale(orb)

    def rad(x):
        r = lam * x
        w = radial_wavefunction_sq(orb, r)
        return -lam * r ** (orb.D - 1) * np.where(w > 0, xlogx(w), 0.0)

    s_r = _laguerre_integral(orb, rad, config, f"direct radial entropy {orb}")
    return s_r + _angular_direct(orb, config), s_r


def shannon_momentum_direct(orb, config=DEFAULT_CONFIG):
    """Momentum entropy by direct quadrature of -gamma ln gamma, per factor."""
    spec = _momentum_spec(orb)
    l, L = orb.l, orb.grand_l
    logk = orb.D * math.log(orb.eta / orb.Z)

    def rad(y):
        c = specfun.eval_poly(spec, y)
        dens = (1.0 + y) * (1.0 - y * y) ** (L + 0.5) * c * c
        with np.errstate(divide="ignore", invalid="ignore"):
            lm = (logk + l * np.log1p(-y) + (2 * L + 4 - l) * np.log1p(y) + np.log(c * c))
            return np.where(dens > 0, -dens * lm, 0.0)

    s_r = _gegen_integral(spec, rad, config, f"direct momentum entropy {orb}")
    return s_r + _angular_direct(orb, config), s_r


def _angular_direct(orb, config):
    # -int |Y|^2 ln |Y|^2 = ln 2pi - sum_j int g_j ln g_j, g_j the per-angle density
    out = math.log(2.0 * math.pi)
    for spec, lo, _ in _angular_specs(orb):
        lam = spec.param

        def f(t, spec=spec, lo=lo, lam=lam):
            c = specfun.eval_poly(spec, t)
            a2 = c * c * (1.0 - t * t) ** lo
            w = (1.0 - t * t) ** (lam - lo - 0.5)
            return -w * xlogx(a2)

        out += _gegen_integral(spec, f, config, f"direct angular entropy {spec}")
    return out


# --- closed forms ---------------------------------------------------------------

def gs_position_disequilibrium(D, Z=1.0):
    return Z ** D / ((D - 1.0) ** D * math.pi ** ((D - 1) / 2.0) * math.gamma((D + 1) / 2.0))


def gs_angular_entropy(D):
    return math.log(2.0 * math.pi ** (D / 2.0)) - _lg(D / 2.0)


def gs_position_entropy(D, Z=1.0):
    return (D * math.log((D - 1.0) / 2.0) + (D - 1) / 2.0 * math.log(math.pi)
            + _lg((D + 1) / 2.0) + D - D * math.log(Z))


def gs_position_complexity(D):
    return (math.e / 2.0) ** D


def gs_momentum_disequilibrium(D, Z=1.0):
    lg = (D * math.log((2.0 * D - 2.0) / Z) - (D + 2) / 2.0 * math.log(math.pi)
          + 2 * _lg((D + 1) / 2.0) + _lg(2 + 1.5 * D) - _lg(2 * D + 2.0))
    return math.exp(lg)


def gs_momentum_entropy(D, Z=1.0):
    return ((D + 1) / 2.0 * math.log(math.pi) - D * math.log(D - 1.0) - _lg((D + 1) / 2.0)
            + (D + 1) * (_psi(D + 1.0) - _psi(D / 2.0 + 1)) + D * math.log(Z))


def gs_momentum_complexity(D):
    lg = (D * math.log(2.0) + _lg((D + 1) / 2.0) + _lg(2 + 1.5 * D)
          - 0.5 * math.log(math.pi) - _lg(2 * D + 2.0)
          + (D + 1) * (_psi(D + 1.0) - _psi((D + 2) / 2.0)))
    return math.exp(lg)


def cs_position_disequilibrium(D, n, Z=1.0):
    lg = (D * math.log(Z) + _lg(n - 0.5) + _lg(2 * n + (D - 3) / 2.0)
          - (2 * n - 2) * math.log(2.0) - D / 2.0 * math.log(math.pi)
          - D * math.log(2 * n + D - 3.0) - _lg(n) - 2 * _lg(n + (D - 1) / 2.0))
    return math.exp(lg)


def cs_momentum_disequilibrium(D, n, Z=1.0):
    lg = ((4 * n + D - 4) * math.log(2.0) + D * math.log(2 * n + D - 3.0)
          + 2 * _lg(n + (D - 1) / 2.0) + _lg(2 * n - 1.0) + _lg(2 * n + 1.5 * D)
          - D * math.log(Z) - (D + 2) / 2.0 * math.log(math.pi) - 2 * _lg(n) - _lg(4 * n + 2 * D - 2.0))
    return math.exp(lg)


def _cs_exponent(D, n):
    return 2 * n + D - 2 - (n - 1) * (_psi(n) + _psi(n + (D - 1) / 2.0))


def cs_position_entropy(D, n, Z=1.0):
    return (_cs_exponent(D, n) - D * math.log(2.0) + D * math.log(2 * n + D - 3.0)
            + (D - 1) / 2.0 * math.log(math.pi) + _lg(n) + _lg(n + (D - 1) / 2.0) - D * math.log(Z))


def cs_momentum_exponent(D, n):
    """The function A(n, D) entering the circular momentum entropy."""
    return ((2 * n + D - 1.0) / (2 * n + D - 3) - (D + 1.0) / (2 * n + D - 2) - (n - 1) * _psi(n)
            - (D + 1) / 2.0 * _psi(n + (D - 2) / 2.0) + (n + (D - 1) / 2.0) * _psi(n + (D - 3) / 2.0))


def cs_momentum_entropy(D, n, Z=1.0):
    return (cs_momentum_exponent(D, n) + (D + 1) * math.log(2.0) + D * math.log(Z)
            + (D + 1) / 2.0 * math.log(math.pi) + _lg(n) - D * math.log(2 * n + D - 3.0)
            - _lg(n + (D - 1) / 2.0))


def cs_position_complexity(D, n):
    lg = (_lg(n - 0.5) + _lg(2 * n + (D - 3) / 2.0) - (2 * n + D - 2) * math.log(2.0)
          - 0.5 * math.log(math.pi) - _lg(n + (D - 1) / 2.0) + _cs_exponent(D, n))
    return math.exp(lg)


def cs_momentum_complexity(D, n):
    lg = ((4 * n + 2 * D - 3) * math.log(2.0) + _lg(n + (D - 1) / 2.0) + _lg(2 * n - 1.0)
          + _lg(2 * n + 1.5 * D) - 0.5 * math.log(math.pi) - _lg(n) - _lg(4 * n + 2 * D - 2.0)
          + cs_momentum_exponent(D, n))
    return math.exp(lg)


# --- complexities ---------------------------------------------------------------

@dataclass
class SpaceComplexity:
    complexity: float
    disequilibrium: float
    shannon: float
    radial_factor: float  # K1 (position) or K3 (momentum); nan for closed forms
    angular_factor: float  # K2; nan for closed forms
    method: str


@dataclass
class DualComplexity:
    position: SpaceComplexity
    momentum: SpaceComplexity
    method_tags: dict = field(default_factory=dict)

    @property
    def product(self):
        return self.position.complexity * self.momentum.complexity


def _closed_form(orb, space):
    D, n, Z = orb.D, orb.n, orb.Z
    if orb.is_ground:
        if space == "position":
            return gs_position_complexity(D), gs_position_disequilibrium(D, Z), gs_position_entropy(D, Z)
        return gs_momentum_complexity(D), gs_momentum_disequilibrium(D, Z), gs_momentum_entropy(D, Z)
    if space == "position":
        return cs_position_complexity(D, n), cs_position_disequilibrium(D, n, Z), cs_position_entropy(D, n, Z)
    return cs_momentum_complexity(D, n), cs_momentum_disequilibrium(D, n, Z), cs_momentum_entropy(D, n, Z)


def lmc_position_d(orb, config=DEFAULT_CONFIG, method="auto"):
    """Position LMC complexity <rho> exp(S[rho]).

    ``method`` is "auto" (closed form for ground and circular states),
    "closed-form" or "quadrature".
    """
    return _lmc(orb, "position", config, method)


def lmc_momentum_d(orb, config=DEFAULT_CONFIG, method="auto"):
    """Momentum LMC complexity <gamma> exp(S[gamma])."""
    return _lmc(orb, "momentum", config, method)


def _lmc(orb, space, config, method):
    if method not in ("auto", "closed-form", "quadrature"):
        raise ValueError(f"unknown method {method!r}")
    special = orb.is_ground or orb.is_circular
    if method == "closed-form" and not special:
        raise ValueError("closed forms exist only for ground and circular states")
    if special and method != "quadrature":
        c, d, s = _closed_form(orb, space)
        return SpaceComplexity(c, d, s, math.nan, math.nan, "closed-form")
    if space == "position":
        d, kr, ka = disequilibrium_position(orb, config)
        s = shannon_position_d(orb, config)[0]
    else:
        d, kr, ka = disequilibrium_momentum(orb, config)
        s = shannon_momentum_d(orb, config)[0]
    return SpaceComplexity(d * math.exp(s), d, s, kr, ka, "quadrature")


def dual_complexity(orb, config=DEFAULT_CONFIG, method="auto"):
    pos = lmc_position_d(orb, config, method)
    mom = lmc_momentum_d(orb, config, method)
    return DualComplexity(pos, mom, {"position": pos.method, "momentum": mom.method})


# --- asymptotics ----------------------------------------------------------------

def asymptotics_d(kind, regime, space, D, n=1):
    """Leading asymptotic value of the LMC complexity.

    kind: "ground" or "circular"; regime: "large_D" (D -> infinity at fixed
    n) or "rydberg" (n -> infinity at fixed D, circular only).
    """
    if kind not in ("ground", "circular"):
        raise ValueError(f"unknown kind {kind!r}")
    if regime not in ("large_D", "rydberg"):
        raise ValueError(f"unknown regime {regime!r}")
    if space not in ("position", "momentum"):
        raise ValueError(f"unknown space {space!r}")
    if kind == "ground":
        if regime == "rydberg":
            raise ValueError("the Rydberg regime applies to circular states only")
        if space == "position":
            return gs_position_complexity(D)
        # Stirling expansion of the exact ground-state form
        return math.exp(1.5 * (D + 1) * math.log(3.0) - (2 * D + 1.5) * math.log(2.0) - 0.5)
    if regime == "rydberg":
        return (math.e / 2.0) ** ((D - 1) / 2.0)
    if space == "position":
        lg = ((D + 2 * n - 2) * math.log(math.e / 2.0) + (1 - n) * _psi(n) + _lg(n - 0.5)
              - 0.5 * math.log(math.pi))
        return math.exp(lg)
    lg = (D * math.log(3.0 ** 1.5 / 4.0) + (2 * n - 0.5) * math.log(3.0) + _lg(2 * n - 1.0)
          - (4 * n - 2.5) * math.log(2.0) - _lg(n) + (1 - n) * _psi(n) - 0.5)
    return math.exp(lg)
