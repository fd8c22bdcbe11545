"""Partial Bell polynomials and integer powers of polynomials."""
import math
from fractions import Fraction

LOG_SCALE_THRESHOLD = 1e100


def enumerate_partitions(m, l, max_part=None):
    """Multi-indices (j_1, ..., j_{m-l+1}) with sum j_i = l and sum i*j_i = m.

    Each tuple encodes a partition of m into exactly l parts, j_i being the
    multiplicity of part i. ``max_part`` optionally drops partitions that
    use a part larger than it (their Bell weight is zero when the argument
    vector vanishes beyond that index).
    """
    if l < 1 or l > m:
        raise ValueError(f"need 1 <= l <= m, got m={m}, l={l}")
    width = m - l + 1
    top = width if max_part is None else min(width, max_part)
    out = []
    counts = [0] * width

    def descend(part, parts_left, total_left):
        # fill multiplicities of part sizes part, part-1, ..., 1
        if part == 1:
            if parts_left == total_left:
                counts[0] = parts_left
                out.append(tuple(counts))
                counts[0] = 0
            return
        # remaining parts_left - j parts of size >= 1 need total >= parts_left - j
        jmax = min(parts_left, total_left // part)
        for j in range(jmax, -1, -1):
            rest_parts = parts_left - j
            rest_total = total_left - j * part
            if rest_total < rest_parts or rest_total > rest_parts * (part - 1):
                continue
            counts[part - 1] = j
            descend(part - 1, rest_parts, rest_total)
        counts[part - 1] = 0

    if top < 1:
        return out
    descend(top, l, m)
    return out


def _check_args(m, l, args):
    if len(args) < m - l + 1:
        raise ValueError(f"B_{{{m},{l}}} needs at least {m - l + 1} arguments")


def bell_partial_log(m, l, args):
    """(log |B_{m,l}|, sign) evaluated term by term in log space."""
    _check_args(m, l, args)
    logx = []
    sgnx = []
    for i, a in enumerate(args[: m - l + 1], start=1):
        a = float(a)
        if a == 0.0:
            logx.append(None)
            sgnx.append(0)
        else:
            logx.append(math.log(abs(a)) - math.lgamma(i + 1))
            sgnx.append(1 if a > 0 else -1)
    nonzero = [i + 1 for i, s in enumerate(sgnx) if s]
    if not nonzero:
        return -math.inf, 0
    logs, signs = [], []
    lfm = math.lgamma(m + 1)
    for js in enumerate_partitions(m, l, max_part=max(nonzero)):
        lg = lfm
        sign = 1
        for i, j in enumerate(js):
            if j == 0:
                continue
            if sgnx[i] == 0:
                sign = 0
                break
            lg += j * logx[i] - math.lgamma(j + 1)
            if sgnx[i] < 0 and j % 2:
                sign = -sign
        if sign:
            logs.append(lg)
            signs.append(sign)
    if not logs:
        return -math.inf, 0
    top = max(logs)
    total = math.fsum(s * math.exp(lg - top) for s, lg in zip(signs, logs))
    if total == 0.0:
        return -math.inf, 0
    return top + math.log(abs(total)), (1 if total > 0 else -1)


def _partition_weight(m, js):
    # m! / prod(j_i! (i!)^{j_i}), an integer
    den = 1
    for i, j in enumerate(js, start=1):
        if j:
            den *= math.factorial(j) * math.factorial(i) ** j
    return math.factorial(m) // den


def bell_partial(m, l, args):
    """Partial Bell polynomial B_{m,l}(x_1, ..., x_{m-l+1}).

    Plain compensated summation is used for moderate arguments; if any
    argument exceeds 1e100 in magnitude the terms are accumulated in
    log-magnitude/sign form instead.
    """
    _check_args(m, l, args)
    xs = [float(a) for a in args[: m - l + 1]]
    if any(abs(a) > LOG_SCALE_THRESHOLD for a in xs):
        lg, sign = bell_partial_log(m, l, xs)
        return 0.0 if sign == 0 else sign * math.exp(lg)
    nonzero = [i + 1 for i, a in enumerate(xs) if a != 0.0]
    if not nonzero:
        return 0.0
    terms = []
    for js in enumerate_partitions(m, l, max_part=max(nonzero)):
        t = float(_partition_weight(m, js))
        for i, j in enumerate(js):
            if j:
                t *= xs[i] ** j
        terms.append(t)
    return math.fsum(terms)


def bell_partial_exact(m, l, args):
    """Exact B_{m,l} for integer or Fraction arguments."""
    _check_args(m, l, args)
    xs = [Fraction(a) for a in args[: m - l + 1]]
    nonzero = [i + 1 for i, a in enumerate(xs) if a != 0]
    if not nonzero:
        return Fraction(0)
    total = Fraction(0)
    for js in enumerate_partitions(m, l, max_part=max(nonzero)):
        t = Fraction(_partition_weight(m, js))
        for i, j in enumerate(js):
            if j:
                t *= xs[i] ** j
        total += t
    return total


def poly_power_coeffs(coeffs, p):
    """Coefficients of P(x)^p, where P has power-basis coefficients ``coeffs``.

    The coefficient of x^k is p!/(k+p)! B_{k+p,p}(c_0, 2! c_1, ..., (k+1)! c_k).
    When the factorial-weighted arguments or partition weights would
    overflow a double, each term is carried in log space instead.
    """
    if len(coeffs) == 0:
        raise ValueError("empty coefficient list")
    if p < 1 or int(p) != p:
        raise ValueError("p must be a positive integer")
    c = [float(v) for v in coeffs]
    n = len(c) - 1
    if p == 1:
        return list(c)
    # log |(i)! c_{i-1}| and signs, i = 1..n+1
    lx, sx = [], []
    for i in range(1, n + 2):
        v = c[i - 1]
        if v == 0.0:
            lx.append(None)
            sx.append(0)
        else:
            lx.append(math.lgamma(i + 1) + math.log(abs(v)))
            sx.append(1 if v > 0 else -1)
    nonzero = [i + 1 for i, s in enumerate(sx) if s]
    if not nonzero:
        return [0.0] * (n * p + 1)
    if max(lx[i - 1] for i in nonzero) < math.log(LOG_SCALE_THRESHOLD) and n * p + p <= 170:
        args = [math.factorial(i) * c[i - 1] for i in range(1, n + 2)]
        out = []
        try:
            for k in range(n * p + 1):
                m = k + p
                xs = (args + [0.0] * m)[: m - p + 1]
                out.append(bell_partial(m, p, xs) * math.factorial(p) / math.factorial(m))
        except OverflowError:
            out = [math.inf]
        if all(math.isfinite(v) for v in out):
            return out
    out = []
    for k in range(n * p + 1):
        m = k + p
        logs, signs = [], []
        base = math.lgamma(p + 1)
        for js in enumerate_partitions(m, p, max_part=min(max(nonzero), n + 1)):
            lg = base
            sign = 1
            for i, j in enumerate(js):
                if j == 0:
                    continue
                if i >= len(sx) or sx[i] == 0:
                    sign = 0
                    break
                # (x_i / i!)^j / j!, with x_i / i! = c_{i-1}
                lg += j * (lx[i] - math.lgamma(i + 2)) - math.lgamma(j + 1)
                if sx[i] < 0 and j % 2:
                    sign = -sign
            if sign:
                logs.append(lg)
                signs.append(sign)
        if not logs:
            out.append(0.0)
            continue
        top = max(logs)
        total = math.fsum(s * math.exp(lg - top) for s, lg in zip(signs, logs))
        out.append(total * math.exp(top))
    return out


def poly_power_coeffs_exact(coeffs, p):
    """Exact coefficients of P(x)^p for integer or Fraction coefficients.

    Same Bell-polynomial relation as :func:`poly_power_coeffs`. With
    x_i = i! c_{i-1} each partition term reduces to p! prod c_i^{j_i} / j_i!,
    so the sum runs over multiplicities of the n + 1 coefficient slots only.
    Denominators are cleared first and the sum is done in integers.
    """
    if len(coeffs) == 0:
        raise ValueError("empty coefficient list")
    if p < 1 or int(p) != p:
        raise ValueError("p must be a positive integer")
    p = int(p)
    c = [Fraction(v) for v in coeffs]
    n = len(c) - 1
    if p == 1:
        return list(c)
    den = math.lcm(*(v.denominator for v in c))
    ci = [int(v * den) for v in c]
    fact = [math.factorial(j) for j in range(p + 1)]
    # powers[i][j] = c_i^j
    powers = [[1] * (p + 1) for _ in ci]
    for i, v in enumerate(ci):
        for j in range(1, p + 1):
            powers[i][j] = powers[i][j - 1] * v
    nz = [i for i, v in enumerate(ci) if v != 0]
    out = []
    for k in range(n * p + 1):
        total = 0
        # slots i = n..0; j_i copies of c_i, sum j = p, sum i j = k

        def descend(idx, parts, weight, prod, jfact):
            nonlocal total
            i = nz[idx]
            if idx == 0:
                if parts * i == weight and (i or weight == 0):
                    total += fact[p] // (jfact * fact[parts]) * prod * powers[i][parts]
                return
            lo_i = nz[0]
            for j in range(min(parts, weight // i if i else parts), -1, -1):
                rp, rw = parts - j, weight - j * i
                # the remaining slots all lie in [lo_i, i)
                if rw < rp * lo_i or rw > rp * nz[idx - 1]:
                    continue
                descend(idx - 1, rp, rw, prod * powers[i][j], jfact * fact[j])

        descend(len(nz) - 1, p, k, 1, 1)
        out.append(Fraction(total, den ** p))
    return out
