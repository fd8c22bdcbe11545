"""Adaptive 1D quadrature and the generic density-measure engine.

Integrals run over panels of fixed-order Gauss-Legendre rules refined by
bisection of the worst panel. Known zeros of the integrand's density are
used as panel edges, and infinite supports are truncated once the
integrand has fallen below a fixed fraction of its peak.
"""
import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import integrate as sp_integrate

from . import specfun

_X40, _W40 = leggauss(40)
_X20, _W20 = leggauss(20)
_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class QuadConfig:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-8
    max_subdivisions: int = 5000
    tail_cutoff_ratio: float = 1e-18

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0 and self.tail_cutoff_ratio > 0):
            raise ValueError("tolerances must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be at least 1")


DEFAULT_CONFIG = QuadConfig()


class NonConvergenceError(RuntimeError):
    """Raised when an integral misses its tolerance within the panel budget."""

    def __init__(self, message, partial=None, error=None, label=None):
        super().__init__(message)
        self.partial = partial
        self.error = error
        self.label = label


def _vectorize(f):
    probe = np.array([0.25, 0.5])

    def g(x):
        return np.asarray(f(x), dtype=float)

    try:
        r = np.asarray(f(probe), dtype=float)
        if r.shape == probe.shape:
            return g
    except Exception:
        pass
    vf = np.vectorize(lambda t: float(f(t)))
    return lambda x: np.asarray(vf(x), dtype=float)


def _panels(f, lo, hi):
    """Evaluate a batch of panels in one vectorized call; returns (values, errors)."""
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    x40 = mid[:, None] + half[:, None] * _X40[None, :]
    x20 = mid[:, None] + half[:, None] * _X20[None, :]
    y = f(np.concatenate([x40.ravel(), x20.ravel()]))
    k = x40.size
    y40 = y[:k].reshape(x40.shape)
    y20 = y[k:].reshape(x20.shape)
    i40 = half * (y40 @ _W40)
    i20 = half * (y20 @ _W20)
    l1 = half * (np.abs(y40) @ _W40)
    err = np.abs(i40 - i20)
    # error below the round-off floor of a panel cannot be improved
    err = np.where(err <= 100.0 * _EPS * l1, 0.0, err)
    err = np.where(np.isfinite(i40) & np.isfinite(i20), err, np.inf)
    return i40, err


def _adaptive(f, edges, config, label):
    lo = np.array([a for a, b in zip(edges[:-1], edges[1:]) if b > a], dtype=float)
    hi = np.array([b for a, b in zip(edges[:-1], edges[1:]) if b > a], dtype=float)
    val, err = _panels(f, lo, hi)
    splits = 0
    while True:
        total = math.fsum(val)
        err_total = math.fsum(err)
        tol = max(config.abs_tol, config.rel_tol * abs(total))
        if err_total <= tol:
            break
        width = hi - lo
        splittable = (err > 0) & (width > 4 * _EPS * np.maximum(np.abs(lo), np.abs(hi)))
        # refine every panel carrying more than its share of the tolerance
        pick = splittable & (err > 0.5 * tol / len(val))
        if not np.any(pick):
            if not np.any(splittable) and np.all(np.isfinite(err)):
                break
            pick = splittable & (err >= np.max(err[splittable])) if np.any(splittable) else pick
            if not np.any(pick):
                break
        splits += int(np.count_nonzero(pick))
        if splits > config.max_subdivisions:
            raise NonConvergenceError(
                f"integral {label or ''} did not converge in {config.max_subdivisions} subdivisions"
                f" (value {total!r}, error {err_total!r})",
                partial=total, error=err_total, label=label,
            )
        plo, phi = lo[pick], hi[pick]
        pmid = 0.5 * (plo + phi)
        nlo = np.concatenate([plo, pmid])
        nhi = np.concatenate([pmid, phi])
        nval, nerr = _panels(f, nlo, nhi)
        keep = ~pick
        lo = np.concatenate([lo[keep], nlo])
        hi = np.concatenate([hi[keep], nhi])
        val = np.concatenate([val[keep], nval])
        err = np.concatenate([err[keep], nerr])
        order = np.argsort(lo, kind="stable")
        lo, hi, val, err = lo[order], hi[order], val[order], err[order]
    value = math.fsum(val)
    error = math.fsum(err)
    if not math.isfinite(value):
        raise NonConvergenceError(f"integral {label or ''} is not finite", partial=value,
                                  error=math.inf, label=label)
    return value, error


def _tail_cutoff(f, start, direction, peak, ratio, scale):
    """Point beyond ``start`` where |f| has dropped below ratio * peak for good."""
    step = scale
    x = start + direction * step
    below = 0
    for _ in range(200):
        v = abs(float(f(np.array([x]))[0]))
        if v < ratio * peak or v == 0.0:
            below += 1
            if below >= 2:
                return x
        else:
            below = 0
        step *= 1.5
        x = x + direction * step
    raise NonConvergenceError("tail did not decay below the cutoff", label="tail")


def _tail_estimate(f, cut, direction, decay, scale):
    v = abs(float(f(np.array([cut]))[0]))
    if v == 0.0:
        return 0.0
    if decay == "rational":
        return v * abs(cut) if cut != 0 else v * scale
    d = 1e-3 * scale
    w = abs(float(f(np.array([cut - direction * d]))[0]))
    if w > v > 0:
        rate = math.log(w / v) / d
        return v / rate
    return v * scale


def integrate(f, interval, config=DEFAULT_CONFIG, breakpoints=(), scale=None,
              tail_decay="exponential", label=None, strategy="panels"):
    """Integrate f over ``interval``; returns (value, error_estimate).

    ``breakpoints`` are interior points used as initial panel edges (zeros
    of a density, kinks, integrable singularities). Infinite ends are
    truncated where |f| < config.tail_cutoff_ratio times its observed peak.
    ``strategy="uniform"`` ignores the breakpoints and integrates uniform
    chunks of the truncated range with QUADPACK instead; it serves as an
    independent cross-check.
    """
    g = _vectorize(f)
    a, b = float(interval[0]), float(interval[1])
    if not a < b:
        raise ValueError("interval must satisfy a < b")
    bps = sorted(float(x) for x in breakpoints if a < x < b)
    if scale is None:
        scale = 1.0
    finite_pts = [p for p in (a, b) if math.isfinite(p)] + bps
    if not finite_pts:
        finite_pts = [0.0]
    lo_anchor, hi_anchor = min(finite_pts), max(finite_pts)
    if not math.isfinite(a) or not math.isfinite(b):
        span_lo = lo_anchor if math.isfinite(a) else lo_anchor - 10 * scale
        span_hi = hi_anchor if math.isfinite(b) else hi_anchor + 10 * scale
        if span_hi <= span_lo:
            span_hi = span_lo + scale
        grid = np.linspace(span_lo, span_hi, 801)
        peak = float(np.max(np.abs(g(grid))))
        if not math.isfinite(peak):
            peak = float(np.nanmax(np.where(np.isfinite(g(grid)), np.abs(g(grid)), 0.0)))
        if peak == 0.0:
            peak = 1e-300
    tail_err = 0.0
    if not math.isfinite(b):
        b = _tail_cutoff(g, hi_anchor, +1, peak, config.tail_cutoff_ratio, scale)
        tail_err += _tail_estimate(g, b, +1, tail_decay, scale)
    if not math.isfinite(a):
        a = _tail_cutoff(g, lo_anchor, -1, peak, config.tail_cutoff_ratio, scale)
        tail_err += _tail_estimate(g, a, -1, tail_decay, scale)
    if strategy == "uniform":
        return _quadpack_uniform(g, a, b, config, label, tail_err)
    if strategy != "panels":
        raise ValueError(f"unknown strategy {strategy!r}")
    edges = [a] + [x for x in bps if a < x < b] + [b]
    value, err = _adaptive(g, edges, config, label)
    return value, err + tail_err


def _quadpack_uniform(g, a, b, config, label, tail_err, chunks=16):
    pts = np.linspace(a, b, chunks + 1)
    vals, errs = [], []
    for lo, hi in zip(pts[:-1], pts[1:]):
        v, e = sp_integrate.quad(lambda t: float(g(np.array([t]))[0]), lo, hi,
                                 epsabs=config.abs_tol / chunks, epsrel=config.rel_tol,
                                 limit=config.max_subdivisions)
        vals.append(v)
        errs.append(e)
    value = math.fsum(vals)
    err = math.fsum(errs) + tail_err
    if err > 10 * max(config.abs_tol, config.rel_tol * abs(value)):
        raise NonConvergenceError(f"integral {label or ''} (uniform strategy) did not converge",
                                  partial=value, error=err, label=label)
    return value, err


def xlogx(p):
    """p ln p with the analytic limit 0 at p = 0."""
    p = np.asarray(p, dtype=float)
    out = np.zeros_like(p)
    pos = p > 0
    out[pos] = p[pos] * np.log(p[pos])
    return out


# --- entropic integrals of orthonormal polynomials -------------------------

def entropic_integral_E(spec, weight_power, config=DEFAULT_CONFIG, strategy="panels"):
    """Integral of x^i w(x) p(x)^2 ln p(x)^2 over the support, i = weight_power.

    No leading minus sign is applied. ``spec`` must be orthonormal. The
    range is split at the zeros of p and the integrand is 0 at those zeros.
    """
    if spec.normalization != "orthonormal":
        raise ValueError("entropic integrals require an orthonormal spec")
    if weight_power not in (0, 1):
        raise ValueError("weight_power must be 0 or 1")
    if weight_power == 1 and spec.family != specfun.LAGUERRE:
        raise ValueError("weight_power 1 is only defined for the Laguerre family")

    def integrand(x):
        s = specfun.eval_poly(spec, x, weighted=True)
        rho = s * s
        lw = specfun.log_weight(spec, x)
        out = np.zeros_like(rho)
        pos = rho > 0
        out[pos] = rho[pos] * (np.log(rho[pos]) - lw[pos])
        if weight_power:
            out = out * x
        return out

    zeros = specfun.poly_zeros(spec)
    n = spec.degree
    if spec.family == specfun.LAGUERRE:
        sc = max(1.0, 0.1 * (n + spec.param + 1))
    elif spec.family == specfun.HERMITE:
        sc = max(1.0, 0.2 * math.sqrt(2 * n + 1))
    else:
        sc = 1.0
    val, _ = integrate(integrand, spec.support, config, breakpoints=zeros, scale=sc,
                       tail_decay="gaussian" if spec.family == specfun.HERMITE else "exponential",
                       label=f"E_{weight_power}[{spec.family} n={n} param={spec.param}]",
                       strategy=strategy)
    return val


def rakhmanov_density(spec):
    """Density w(x) p(x)^2 of an orthonormal polynomial, as a Density1D."""
    if spec.normalization != "orthonormal":
        raise ValueError("Rakhmanov densities need an orthonormal spec")

    def ev(x):
        s = specfun.eval_poly(spec, x, weighted=True)
        return s * s

    def deriv(x):
        s, ds = specfun.eval_poly(spec, x, derivative=True, weighted=True)
        return 2.0 * s * ds

    n = spec.degree
    if spec.family == specfun.LAGUERRE:
        sc = max(1.0, 0.1 * (n + spec.param + 1))
    elif spec.family == specfun.HERMITE:
        sc = max(1.0, 0.2 * math.sqrt(2 * n + 1))
    else:
        sc = 1.0
    return Density1D(ev, spec.support, tuple(specfun.poly_zeros(spec)),
                     "gaussian" if spec.family == specfun.HERMITE else "exponential",
                     derivative=deriv, scale=sc)


# --- generic measures -------------------------------------------------------

@dataclass(frozen=True)
class Density1D:
    """A probability density on an interval.

    ``singular_points`` are interior points where the density vanishes or is
    not smooth; they become panel edges. ``derivative`` optionally gives the
    exact first derivative for the Fisher integral. ``scale`` is a typical
    length of the density used for step sizes.
    """

    evaluator: object
    support: tuple = (-math.inf, math.inf)
    singular_points: tuple = ()
    tail_decay: str = "exponential"
    derivative: object = None
    scale: float = 1.0

    def __post_init__(self):
        if self.tail_decay not in ("exponential", "gaussian", "rational"):
            raise ValueError(f"unknown tail decay {self.tail_decay!r}")


@dataclass
class MeasureSet:
    norm: float
    mean: float
    variance: float
    shannon: float
    shannon_power: float
    fisher: float
    fisher_divergent: bool
    disequilibrium: float
    entropic_moments: dict = field(default_factory=dict)
    renyi: dict = field(default_factory=dict)
    tsallis: dict = field(default_factory=dict)


def _edge_exponent(ev, edge, direction, scale):
    # local power p in rho ~ |x - edge|^p
    e1, e2 = 1e-6 * scale, 1e-8 * scale
    v1 = float(ev(np.array([edge + direction * e1]))[0])
    v2 = float(ev(np.array([edge + direction * e2]))[0])
    if v1 <= 0 or v2 <= 0:
        return None
    return math.log(v1 / v2) / math.log(e1 / e2)


def fisher_diverges_at_edges(d):
    """True if the density behaves like |x - edge|^p with p <= 1, p != 0."""
    ev = _vectorize(d.evaluator)
    for edge, direction in ((d.support[0], 1), (d.support[1], -1)):
        if not math.isfinite(edge):
            continue
        p = _edge_exponent(ev, edge, direction, d.scale)
        if p is None:
            continue
        if abs(p) < 1e-3:
            continue
        if p <= 1 + 1e-3:
            return True
    return False


def _fd_derivative(ev, support, h):
    a, b = support

    def deriv(x):
        x = np.asarray(x, dtype=float)
        out = np.empty_like(x)
        inner = (x - h > a) & (x + h < b)
        xi = x[inner]
        out[inner] = (ev(xi + h) - ev(xi - h)) / (2 * h)
        left = x - h <= a
        xl = x[left]
        out[left] = (-3 * ev(xl) + 4 * ev(xl + h) - ev(xl + 2 * h)) / (2 * h)
        right = ~inner & ~left
        xr = x[right]
        out[right] = (3 * ev(xr) - 4 * ev(xr - h) + ev(xr - 2 * h)) / (2 * h)
        return out

    return deriv


def fisher_information(d, config=DEFAULT_CONFIG):
    """(I, divergent) for a Density1D."""
    if fisher_diverges_at_edges(d):
        return math.inf, True
    ev = _vectorize(d.evaluator)
    if d.derivative is not None:
        dv = _vectorize(d.derivative)
    else:
        dv = _fd_derivative(ev, d.support, 1e-5 * d.scale)

    def integrand(x):
        r = ev(x)
        dr = dv(x)
        out = np.zeros_like(r)
        pos = r > 0
        out[pos] = dr[pos] ** 2 / r[pos]
        return out

    val, _ = integrate(integrand, d.support, config, d.singular_points, d.scale,
                       d.tail_decay, label="fisher")
    return val, False


def density_measures(d, q_list=(), config=DEFAULT_CONFIG, fisher=True):
    """Variance, Shannon, Fisher, disequilibrium, Renyi and Tsallis of ``d``."""
    for q in q_list:
        if not q > 0 or q == 1:
            raise ValueError("entropic orders must be positive and different from 1")
    ev = _vectorize(d.evaluator)
    kw = dict(config=config, breakpoints=d.singular_points, scale=d.scale,
              tail_decay=d.tail_decay)

    def moment(fun, label):
        return integrate(fun, d.support, label=label, **kw)[0]

    norm = moment(ev, "norm")
    if abs(norm - 1.0) > 1e-6:
        raise ValueError(f"density is not normalized (integral {norm!r})")
    mean = moment(lambda x: x * ev(x), "mean")
    second = moment(lambda x: x * x * ev(x), "second moment")
    variance = second - mean * mean
    shannon = -moment(lambda x: xlogx(ev(x)), "shannon")
    diseq = moment(lambda x: ev(x) ** 2, "disequilibrium")
    if fisher:
        fi, div = fisher_information(d, config)
    else:
        fi, div = math.nan, False
    wq, renyi, tsallis = {}, {}, {}
    for q in q_list:
        w = moment(lambda x, q=q: ev(x) ** q, f"entropic moment q={q}")
        wq[q] = w
        renyi[q] = math.log(w) / (1.0 - q)
        tsallis[q] = (1.0 - w) / (q - 1.0)
    return MeasureSet(norm, mean, variance, shannon, math.exp(shannon), fi, div, diseq,
                      wq, renyi, tsallis)
