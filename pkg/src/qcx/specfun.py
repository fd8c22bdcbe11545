"""Classical orthogonal polynomials, gamma-type functions and Wigner 3j symbols.

Polynomials are evaluated by their three-term recurrences. The explicit
expansion coefficients are only meant for the combinatorial (Bell) routes,
since power-basis evaluation loses all accuracy at moderate degree.
"""
import math
from dataclasses import dataclass

import numpy as np
from scipy import linalg, special

DEGREE_CAP = 200

HERMITE = "hermite"
LAGUERRE = "laguerre"
GEGENBAUER = "gegenbauer"
FAMILIES = (HERMITE, LAGUERRE, GEGENBAUER)


@dataclass(frozen=True)
class OrthoPolySpec:
    """A member of one of the classical families.

    ``param`` is alpha for Laguerre and lambda for Gegenbauer (ignored for
    Hermite). ``normalization`` is ``"classical"`` or ``"orthonormal"``.
    """

    family: str
    degree: int
    param: float = 0.0
    normalization: str = "orthonormal"

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.normalization not in ("classical", "orthonormal"):
            raise ValueError(f"unknown normalization {self.normalization!r}")
        if int(self.degree) != self.degree or self.degree < 0:
            raise ValueError("degree must be a non-negative integer")
        if self.degree > DEGREE_CAP:
            raise ValueError(f"degree {self.degree} exceeds cap {DEGREE_CAP}")
        if self.family == LAGUERRE and not self.param > -1:
            raise ValueError("Laguerre requires alpha > -1")
        if self.family == GEGENBAUER:
            if not self.param > -0.5:
                raise ValueError("Gegenbauer requires lambda > -1/2")
            if self.param == 0:
                raise ValueError("Gegenbauer lambda = 0 is not supported")

    @property
    def support(self):
        if self.family == HERMITE:
            return (-math.inf, math.inf)
        if self.family == LAGUERRE:
            return (0.0, math.inf)
        return (-1.0, 1.0)


def hermite(n, normalization="orthonormal"):
    return OrthoPolySpec(HERMITE, n, 0.0, normalization)


def laguerre(n, alpha, normalization="orthonormal"):
    return OrthoPolySpec(LAGUERRE, n, float(alpha), normalization)


def gegenbauer(n, lam, normalization="orthonormal"):
    return OrthoPolySpec(GEGENBAUER, n, float(lam), normalization)


def _gegenbauer_jacobi(k, lam):
    # off-diagonal entry of the Jacobi matrix, x p_k = a_{k+1} p_{k+1} + a_k p_{k-1}
    if k == 0:
        return 0.0
    return math.sqrt(k * (k + 2 * lam - 1) / (4.0 * (k + lam) * (k + lam - 1)))


def _recurrence(spec, k):
    """Coefficients (a, b, c) of p_{k+1} = (a x + b) p_k - c p_{k-1}."""
    t = spec.param
    if spec.family == HERMITE:
        if spec.normalization == "classical":
            return 2.0, 0.0, 2.0 * k
        return math.sqrt(2.0 / (k + 1)), 0.0, math.sqrt(k / (k + 1))
    if spec.family == LAGUERRE:
        if spec.normalization == "classical":
            return -1.0 / (k + 1), (2 * k + 1 + t) / (k + 1), (k + t) / (k + 1)
        d = math.sqrt((k + 1) * (k + 1 + t))
        return -1.0 / d, (2 * k + 1 + t) / d, math.sqrt(k * (k + t)) / d
    if spec.normalization == "classical":
        return 2.0 * (k + t) / (k + 1), 0.0, (k + 2 * t - 1) / (k + 1)
    a_next = _gegenbauer_jacobi(k + 1, t)
    return 1.0 / a_next, 0.0, _gegenbauer_jacobi(k, t) / a_next


def log_weight(spec, x):
    """Natural log of the orthogonality weight at x."""
    x = np.asarray(x, dtype=float)
    if spec.family == HERMITE:
        return -x * x
    if spec.family == LAGUERRE:
        if spec.param == 0:
            return -x
        with np.errstate(divide="ignore"):
            return spec.param * np.log(x) - x
    if spec.param == 0.5:
        return np.zeros_like(x)
    with np.errstate(divide="ignore"):
        return (spec.param - 0.5) * np.log1p(-x * x)


def _seed(spec):
    if spec.normalization == "classical":
        return 1.0
    if spec.family == HERMITE:
        return math.pi ** -0.25
    if spec.family == LAGUERRE:
        return math.exp(-0.5 * math.lgamma(spec.param + 1.0))
    lam = spec.param
    log_h0 = 0.5 * math.log(math.pi) + math.lgamma(lam + 0.5) - math.lgamma(lam + 1.0)
    return math.exp(-0.5 * log_h0)


def eval_poly(spec, x, derivative=False, weighted=False):
    """Evaluate the polynomial described by ``spec`` at ``x``.

    With ``weighted=True`` the result is multiplied by sqrt(weight(x)); the
    factor is folded into the seed of the recurrence so no overflow occurs
    where the polynomial is large and the weight tiny. With
    ``derivative=True`` a pair (value, d value / dx) is returned; the
    derivative is taken of the (possibly weighted) function.
    """
    scalar = np.ndim(x) == 0
    x = np.asarray(x, dtype=float)
    seed = _seed(spec)
    if weighted:
        half_lw = 0.5 * log_weight(spec, x)
        p0 = seed * np.exp(half_lw)
    else:
        p0 = np.full_like(x, seed)
    p_prev = np.zeros_like(x)
    p = p0
    dp_prev = np.zeros_like(x)
    dp = np.zeros_like(x)
    for k in range(spec.degree):
        a, b, c = _recurrence(spec, k)
        p_next = (a * x + b) * p - c * p_prev
        if derivative:
            dp_next = (a * x + b) * dp + a * p - c * dp_prev
            dp_prev, dp = dp, dp_next
        p_prev, p = p, p_next
    if derivative and weighted:
        # d/dx [s(x) P(x)] = s P' + s' P with s'/s = 0.5 d(log w)/dx; NaN at a
        # singular edge of the weight, where the derivative is undefined
        with np.errstate(invalid="ignore"):
            dp = dp + _half_dlogw(spec, x) * p
    if scalar:
        return (float(p), float(dp)) if derivative else float(p)
    return (p, dp) if derivative else p


def _half_dlogw(spec, x):
    if spec.family == HERMITE:
        return -x
    if spec.family == LAGUERRE:
        with np.errstate(divide="ignore", invalid="ignore"):
            return 0.5 * (spec.param / x - 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        return -(spec.param - 0.5) * x / (1.0 - x * x)


def poly_zeros(spec):
    """Real zeros of the polynomial, ascending."""
    n = spec.degree
    if n == 0:
        return np.empty(0)
    if spec.family == HERMITE:
        z = special.roots_hermite(n)[0]
    elif spec.family == LAGUERRE:
        z = special.roots_genlaguerre(n, spec.param)[0]
    else:
        z = special.roots_gegenbauer(n, spec.param)[0]
    return np.sort(np.asarray(z, dtype=float))


def gauss_rule_log(family, param, npts):
    """Nodes and log of weight-free Gauss weights for ``npts`` points.

    Returns (x_i, log(lambda_i / w(x_i))) so that int w f ~ sum lambda_i f(x_i)
    can be evaluated as sum exp(log_s_i + log(w f)(x_i)) without the tiny
    weights underflowing. The Christoffel sum 1 / sum_k p_k(x_i)^2 is run on
    the orthonormal recurrence with per-node rescaling. The degree cap does
    not apply here.
    """
    if npts < 1:
        raise ValueError("need at least one node")
    proto = OrthoPolySpec(family, 0, param)
    # nodes are the eigenvalues of the Jacobi matrix: x p_k = p_{k+1}/a - (b/a) p_k + (c/a) p_{k-1}
    coef = [_recurrence(proto, k) for k in range(npts)]
    diag = np.array([-b / a for a, b, _ in coef])
    off = np.array([1.0 / a for a, _, _ in coef[:-1]])
    x = np.sort(linalg.eigh_tridiagonal(diag, off, eigvals_only=True))
    p_prev = np.zeros_like(x)
    p = np.full_like(x, _seed(proto))
    total = p * p
    log_scale = np.zeros_like(x)
    for k in range(npts - 1):
        a, b, c = _recurrence(proto, k)
        p_prev, p = p, (a * x + b) * p - c * p_prev
        total += p * p
        big = total > 1e200
        if np.any(big):
            f = np.where(big, 1e-100, 1.0)
            p, p_prev, total = p * f, p_prev * f, total * f * f
            log_scale += np.where(big, 100.0 * math.log(10.0), 0.0)
    log_s = -(np.log(total) + 2.0 * log_scale + log_weight(proto, x))
    return x, log_s


def hermite_coeffs(n):
    """Power-basis coefficients c_0..c_n of the orthonormal Hermite polynomial."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n > DEGREE_CAP:
        raise ValueError(f"degree {n} exceeds cap {DEGREE_CAP}")
    log_norm = 0.5 * (n * math.log(2.0) + math.lgamma(n + 1) + 0.5 * math.log(math.pi))
    out = [0.0] * (n + 1)
    for j in range(n // 2 + 1):
        l = n - 2 * j
        lg = (math.lgamma(n + 1) + l * math.log(2.0) - math.lgamma(j + 1)
              - math.lgamma(l + 1) - log_norm)
        out[l] = (-1) ** j * math.exp(lg)
    return out


def laguerre_coeffs(n, alpha):
    """Power-basis coefficients c_0..c_n of the orthonormal Laguerre polynomial."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n > DEGREE_CAP:
        raise ValueError(f"degree {n} exceeds cap {DEGREE_CAP}")
    if not alpha > -1:
        raise ValueError("Laguerre requires alpha > -1")
    half = 0.5 * (math.lgamma(n + alpha + 1) - math.lgamma(n + 1))
    out = []
    for k in range(n + 1):
        lg = (half + math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)
              - math.lgamma(alpha + k + 1))
        out.append((-1) ** k * math.exp(lg))
    return out


def digamma(x):
    """Digamma function for x > 0."""
    if np.any(np.asarray(x) <= 0):
        raise ValueError("digamma requires a positive argument")
    r = special.psi(x)
    return float(r) if np.ndim(r) == 0 else r


def log_gamma(x):
    """ln Gamma(x) for x > 0."""
    if np.any(np.asarray(x) <= 0):
        raise ValueError("log_gamma requires a positive argument")
    r = special.gammaln(x)
    return float(r) if np.ndim(r) == 0 else r


def _lfact(k):
    return math.lgamma(k + 1)


def wigner3j(l1, l2, l3, m1, m2, m3):
    """Wigner 3j symbol for integer arguments (Racah single sum).

    Returns 0 whenever a selection rule is violated.
    """
    if m1 + m2 + m3 != 0:
        return 0.0
    if abs(m1) > l1 or abs(m2) > l2 or abs(m3) > l3 or min(l1, l2, l3) < 0:
        return 0.0
    if l3 > l1 + l2 or l3 < abs(l1 - l2):
        return 0.0
    if m1 == m2 == m3 == 0 and (l1 + l2 + l3) % 2:
        return 0.0
    log_pref = 0.5 * (
        _lfact(l1 + l2 - l3) + _lfact(l1 - l2 + l3) + _lfact(-l1 + l2 + l3)
        - _lfact(l1 + l2 + l3 + 1)
        + _lfact(l1 + m1) + _lfact(l1 - m1) + _lfact(l2 + m2) + _lfact(l2 - m2)
        + _lfact(l3 + m3) + _lfact(l3 - m3)
    )
    kmin = max(0, l2 - l3 - m1, l1 - l3 + m2)
    kmax = min(l1 + l2 - l3, l1 - m1, l2 + m2)
    logs, signs = [], []
    for k in range(kmin, kmax + 1):
        logs.append(-(_lfact(k) + _lfact(l3 - l2 + k + m1) + _lfact(l3 - l1 + k - m2)
                      + _lfact(l1 + l2 - l3 - k) + _lfact(l1 - k - m1) + _lfact(l2 - k + m2)))
        signs.append(-1.0 if k % 2 else 1.0)
    if not logs:
        return 0.0
    top = max(logs)
    total = math.fsum(s * math.exp(lg - top) for s, lg in zip(signs, logs))
    phase = -1.0 if (l1 - l2 - m3) % 2 else 1.0
    return phase * total * math.exp(top + log_pref)
