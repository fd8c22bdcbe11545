"""Command-line front end: single-state reports, sweeps and figure/table presets.

Every command writes CSV (UTF-8, LF line endings, header row). Rows are
computed by independent jobs, optionally in a process pool, and always
written in job order, so the output does not depend on the worker count.
"""
import argparse
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import hydrod, hydrogen3d, kleingordon, polyspread
from .quadrature import DEFAULT_CONFIG, NonConvergenceError, QuadConfig

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NONCONVERGENCE = 3


class UsageError(ValueError):
    pass


# --- configuration --------------------------------------------------------------

def resolve_config(tol_abs=None, tol_rel=None, environ=None):
    """Quadrature tolerances: flag > QCX_TOL_ABS / QCX_TOL_REL > defaults."""
    env = os.environ if environ is None else environ

    def pick(flag, name, default):
        if flag is not None:
            return float(flag)
        if env.get(name):
            try:
                return float(env[name])
            except ValueError:
                raise UsageError(f"{name} must be a real number, got {env[name]!r}")
        return default

    a = pick(tol_abs, "QCX_TOL_ABS", DEFAULT_CONFIG.abs_tol)
    r = pick(tol_rel, "QCX_TOL_REL", DEFAULT_CONFIG.rel_tol)
    try:
        return QuadConfig(abs_tol=a, rel_tol=r)
    except ValueError as exc:
        raise UsageError(str(exc))


def _config(tol):
    return QuadConfig(abs_tol=tol[0], rel_tol=tol[1])


# --- row jobs -------------------------------------------------------------------
# Each job takes keyword parameters plus ``tol`` = (abs, rel) and returns a dict.

def job_hydrogen(n, Z=1.0, l=0, m=0, tol=None):
    cfg = _config(tol)
    orb = hydrogen3d.Orbital3D(int(n), int(l), int(m), float(Z))
    h = hydrogen3d.measures(orb, cfg)
    zcr, zfs, zsc = hydrogen3d.relative_complexities(orb, cfg)
    return dict(Z=Z, n=n, l=l, m=m, energy=h.energy, variance=h.variance, fisher=h.fisher,
                r_mean=h.r_mean, shannon=h.shannon, shannon_radial=h.shannon_radial,
                shannon_angular=h.shannon_angular, disequilibrium=h.disequilibrium,
                c_cr=h.c_cr, c_fs=h.c_fs, c_sc=h.c_sc, zeta_cr=zcr, zeta_fs=zfs, zeta_sc=zsc,
                b_fs=h.b_fs, b_sc=h.b_sc, xi_fs=h.xi_fs, xi_sc=h.xi_sc)


def _parse_mu(mu, D, n, state):
    if state == "ground":
        return (0,) * (D - 1)
    if state == "circular":
        return (n - 1,) * (D - 1)
    if mu is None or mu == "":
        raise UsageError("give --mu, --ground or --circular")
    if isinstance(mu, str):
        parts = mu.replace(";", ",").replace(" ", ",").split(",")
        try:
            return tuple(int(p) for p in parts if p != "")
        except ValueError:
            raise UsageError(f"bad --mu {mu!r}")
    return tuple(int(v) for v in mu)


def job_hydrod(D, n=1, Z=1.0, mu=None, state="", space="both", method="auto", tol=None):
    cfg = _config(tol)
    D, n = int(D), int(n)
    orb = hydrod.DOrbital(D, n, _parse_mu(mu, D, n, state), float(Z))
    row = dict(D=D, n=n, mu=" ".join(str(v) for v in orb.mu), Z=Z, energy=hydrod.energy_d(orb))
    if space in ("position", "momentum"):
        fn = hydrod.lmc_position_d if space == "position" else hydrod.lmc_momentum_d
        r = fn(orb, cfg, method)
        row.update(space=space, complexity=r.complexity, disequilibrium=r.disequilibrium,
                   shannon=r.shannon, method=r.method)
        return row
    if space != "both":
        raise UsageError(f"unknown space {space!r}")
    dc = hydrod.dual_complexity(orb, cfg, method)
    row.update(c_position=dc.position.complexity, disequilibrium_position=dc.position.disequilibrium,
               shannon_position=dc.position.shannon, c_momentum=dc.momentum.complexity,
               disequilibrium_momentum=dc.momentum.disequilibrium,
               shannon_momentum=dc.momentum.shannon, product=dc.product,
               method=dc.position.method)
    return row


KG_FIELDS = ("centroid", "variance", "shannon", "shannon_power", "fisher", "fisher_divergent",
             "disequilibrium", "c_fs", "c_sc", "sch_centroid", "sch_variance", "sch_shannon_power",
             "sch_fisher", "sch_c_fs", "sch_c_sc", "ratio_centroid", "ratio_variance",
             "ratio_shannon_power", "ratio_fisher", "zeta_fs", "zeta_sc")


def job_kleingordon(Z, n, l=0, m=0, m0=kleingordon.PION_MASS, fields=KG_FIELDS, tol=None, **labels):
    cfg = _config(tol)
    orb = kleingordon.KGOrbital(int(n), int(l), int(m), float(Z), float(m0))
    rep = kleingordon.kg_report(orb, cfg, moments=())
    d = kleingordon.kg_derived(orb)
    row = dict(labels)
    row.update(Z=Z, n=n, l=l, m=m)
    if fields == KG_FIELDS:
        row.update(m0=m0, lprime=d.lprime, energy=d.energy)
    for f in fields:
        row[f] = getattr(rep, f)
    return row


def job_polylen(n, family="hermite", alpha=0.0, q=(2,), bounds=False, tol=None):
    cfg = _config(tol)
    n = int(n)
    alpha = float(alpha)
    row = dict(family=family, n=n)
    qs = [int(v) if float(v).is_integer() else float(v) for v in q]
    if family == "hermite":
        row.update(std_dev=polyspread.hermite_stddev(n), fisher_length=polyspread.hermite_fisher(n)[1])
        for qq in qs:
            row[f"renyi_{_qname(qq)}"] = polyspread.hermite_renyi_length(n, qq, polyspread.auto_method(n, qq), cfg)
        row["shannon_length"] = polyspread.hermite_shannon_length(n, cfg)
        if bounds:
            k, c = polyspread.hermite_optimal_bound(n)
            row.update(k_opt=k, bound=c)
    elif family == "laguerre":
        row["alpha"] = alpha
        row.update(std_dev=polyspread.laguerre_stddev(n, alpha),
                   fisher_length=polyspread.laguerre_fisher(n, alpha)[1])
        for qq in qs:
            row[f"renyi_{_qname(qq)}"] = polyspread.laguerre_renyi_length(n, alpha, qq, polyspread.auto_method(n, qq), cfg)
        row["shannon_length"] = polyspread.laguerre_shannon_length(n, alpha, cfg)[0]
        if bounds:
            b0, _, c0 = polyspread.laguerre_optimal_bound(n, alpha, vary_m=False)
            b1, m1, c1 = polyspread.laguerre_optimal_bound(n, alpha, vary_m=True, config=cfg)
            row.update(b_opt_m0=b0, bound_m0=c0, b_opt=b1, m_opt=m1, bound=c1,
                       ratio_bound_m0=c0 / row["shannon_length"], ratio_bound=c1 / row["shannon_length"])
    else:
        raise UsageError(f"unknown family {family!r}")
    row["shannon_asymptotic"] = polyspread.ASYMPTOTIC_RATIO * row["std_dev"]
    return row


def _qname(q):
    return str(int(q)) if float(q).is_integer() else repr(float(q))


def job_hydrogen_fit(l, m, n_max=20, tol=None):
    a, b, c, r = hydrogen3d.fisher_shannon_quadratic_fit(int(l), int(m), int(n_max), _config(tol))
    return dict(state=f"(n {l} {m})", n_max=n_max, a=a, b=b, c=c, R=r)


def job_dim_circular(D, ns=(1, 2, 3)):
    row = dict(D=D)
    for n in ns:
        row[f"c_position_n{n}"] = hydrod.cs_position_complexity(int(D), int(n))
    for n in ns:
        row[f"c_momentum_n{n}"] = hydrod.cs_momentum_complexity(int(D), int(n))
    row["product_n1"] = row[f"c_position_n{ns[0]}"] * row[f"c_momentum_n{ns[0]}"]
    return row


def job_circular_vs_n(n, Ds=(2, 5, 15)):
    row = dict(n=n)
    for D in Ds:
        row[f"c_position_D{D}"] = hydrod.cs_position_complexity(int(D), int(n))
    return row


def job_hermite_table(n):
    k, c = polyspread.hermite_optimal_bound(int(n))
    return dict(n=n, k_opt=k, c_kn=c)


def job_laguerre_table(n, alpha, vary_m, tol=None):
    b, m, c = polyspread.laguerre_optimal_bound(int(n), float(alpha), vary_m=vary_m, config=_config(tol))
    row = dict(n=n, alpha=alpha, b_opt=b)
    if vary_m:
        row["m_opt"] = m
    row["bound"] = c
    return row


JOBS = {
    "hydrogen": job_hydrogen,
    "hydrod": job_hydrod,
    "kleingordon": job_kleingordon,
    "polylen": job_polylen,
    "hydrogen_fit": job_hydrogen_fit,
    "dim_circular": job_dim_circular,
    "circular_vs_n": job_circular_vs_n,
    "hermite_table": job_hermite_table,
    "laguerre_table": job_laguerre_table,
}

_NEEDS_TOL = {"hydrogen", "hydrod", "kleingordon", "polylen", "hydrogen_fit", "laguerre_table"}


def run_job(job):
    name, params, tol = job
    kw = dict(params)
    if name in _NEEDS_TOL:
        kw["tol"] = tol
    return JOBS[name](**kw)


# --- CSV ------------------------------------------------------------------------

def format_value(v, precision):
    if v is None:
        return "nan"
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        if v.is_integer() and abs(v) < 1e15:
            return str(int(v))
        return format(v, f".{precision}g")
    s = str(v)
    if any(c in s for c in ',"\n'):
        s = '"' + s.replace('"', '""') + '"'
    return s


def render_csv(rows, precision, columns=None):
    if columns is None:
        columns = []
        for r in rows:
            for k in r:
                if k not in columns:
                    columns.append(k)
    lines = [",".join(columns)]
    for r in rows:
        lines.append(",".join("" if c not in r else format_value(r[c], precision) for c in columns))
    return "\n".join(lines) + "\n", columns


def compute_rows(jobs, workers=1):
    """Run jobs in order; on non-convergence return (rows so far, error)."""
    rows = []
    if workers <= 1 or len(jobs) <= 1:
        for job in jobs:
            try:
                rows.append(run_job(job))
            except NonConvergenceError as exc:
                return rows, exc
        return rows, None
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(run_job, job) for job in jobs]
        for fut in futures:
            try:
                rows.append(fut.result())
            except NonConvergenceError as exc:
                for f in futures:
                    f.cancel()
                return rows, exc
    return rows, None


def plot_script(csv_path, columns, x_column, title):
    """A gnuplot script plotting every numeric column against ``x_column``."""
    xi = columns.index(x_column) + 1
    ys = [i + 1 for i, c in enumerate(columns) if c != x_column]
    lines = [
        f"# {title}",
        "set datafile separator ','",
        "set key autotitle columnhead",
        f"set xlabel '{x_column}'",
        f"set title '{title}'",
        "plot " + ", \\\n     ".join(f"'{csv_path}' using {xi}:{y} with linespoints" for y in ys),
        "",
    ]
    return "\n".join(lines)


# --- presets --------------------------------------------------------------------

_ZETA = ("zeta_fs", "zeta_sc")
_Z_SWEEP = (1, 5, 10, 15, 20, 25, 30, 35, 40, 45, 50, 55, 60, 65, 68)


def _kg(Z, n, l, m=0, fields=("ratio_centroid", "ratio_variance"), **labels):
    return ("kleingordon", dict(Z=Z, n=n, l=l, m=m, fields=tuple(fields), **labels))


def _preset_jobs(name):
    """(jobs, columns or None, x column) for a named preset."""
    hcols = ["n", "l", "m", "variance", "fisher", "disequilibrium", "shannon",
             "c_cr", "c_fs", "c_sc", "zeta_fs", "zeta_cr", "zeta_sc"]
    if name == "fig-1.1":
        return [("hydrogen", dict(Z=1, n=n, l=0, m=0)) for n in range(1, 11)], hcols, "n"
    if name == "fig-1.4":
        return [("hydrogen", dict(Z=1, n=20, l=17, m=m)) for m in range(0, 18)], hcols, "m"
    if name == "fig-1.5":
        return [("hydrogen", dict(Z=1, n=20, l=l, m=1)) for l in range(1, 20)], hcols, "l"
    if name == "table-1.1":
        return [("hydrogen_fit", dict(l=0, m=0)), ("hydrogen_fit", dict(l=3, m=1))], None, None
    if name == "fig-2.1":
        return [("dim_circular", dict(D=D)) for D in range(2, 51)], None, "D"
    if name == "fig-2.3":
        return [("circular_vs_n", dict(n=n)) for n in range(1, 21)], None, "n"
    if name == "fig-3.3":
        jobs = [_kg(68, n, 0, state="S") for n in range(1, 9)]
        jobs += [_kg(68, n, n - 1, state="circular") for n in range(1, 9)]
        return jobs, None, "n"
    if name == "fig-3.4":
        return [_kg(68, n, l) for n in range(1, 7) for l in range(n)], None, "l"
    if name == "fig-3.5":
        return [_kg(Z, n, l, state=s) for s, n, l in (("1S", 1, 0), ("2S", 2, 0), ("2P", 2, 1))
                for Z in _Z_SWEEP], None, "Z"
    if name == "fig-3.6":
        f = ("ratio_shannon_power",)
        jobs = [_kg(68, n, 0, fields=f, panel="n", state="S") for n in range(1, 9)]
        jobs += [_kg(68, n, n - 1, fields=f, panel="n", state="circular") for n in range(1, 9)]
        jobs += [_kg(Z, n, l, fields=f, panel="Z", state=s)
                 for s, n, l in (("1S", 1, 0), ("2S", 2, 0), ("2P", 2, 1)) for Z in _Z_SWEEP]
        return jobs, None, "n"
    if name == "fig-3.7":
        f = ("ratio_fisher",)
        jobs = [_kg(68, n, l, fields=f, panel="n") for l in (1, 2, 3) for n in range(l + 1, 9)]
        jobs += [_kg(Z, n, l, fields=f, panel="Z", state=s)
                 for s, n, l in (("2P", 2, 1), ("3P", 3, 1), ("3D", 3, 2)) for Z in _Z_SWEEP]
        return jobs, None, "n"
    if name == "fig-3.8":
        jobs = [_kg(68, n, l, fields=("ratio_shannon_power",), panel="shannon")
                for n in range(2, 7) for l in range(n)]
        jobs += [_kg(68, n, l, fields=("ratio_fisher",), panel="fisher")
                 for n in range(2, 7) for l in range(1, n)]
        return jobs, None, "l"
    if name == "fig-3.9":
        return [_kg(68, 5, l, m, fields=("ratio_fisher",)) for l in range(1, 5)
                for m in range(0, l + 1)], None, "m"
    if name == "fig-3.10":
        return [_kg(Z, 1, 0, fields=("c_fs", "sch_c_fs", "fisher_divergent", "zeta_fs"))
                for Z in _Z_SWEEP], None, "Z"
    if name == "fig-3.11":
        return [_kg(Z, n, 0, fields=("fisher_divergent", "zeta_fs")) for Z in (1, 30, 50, 68)
                for n in range(1, 9)], None, "n"
    if name == "fig-3.12":
        return [_kg(Z, n, l, fields=("c_fs", "sch_c_fs", "zeta_fs")) for Z in (68, 30)
                for n in range(1, 7) for l in range(n)], None, "l"
    if name == "fig-3.13":
        return [_kg(Z, 1, 0, fields=("c_sc", "sch_c_sc", "zeta_sc")) for Z in _Z_SWEEP], None, "Z"
    if name == "fig-3.14":
        return [_kg(Z, n, 0, fields=("c_sc", "sch_c_sc", "zeta_sc")) for Z in (1, 30, 50, 68)
                for n in range(1, 9)], None, "n"
    if name == "fig-3.15":
        return [_kg(Z, n, l, fields=("c_sc", "sch_c_sc", "zeta_sc")) for Z in (68, 30)
                for n in range(1, 7) for l in range(n)], None, "l"
    if name == "table-4.1":
        return [("hermite_table", dict(n=n)) for n in range(0, 13)], None, "n"
    if name in ("table-4.2", "table-4.3", "table-4.4", "table-4.5"):
        alpha = 0.0 if name in ("table-4.2", "table-4.3") else 5.0
        vary = name in ("table-4.3", "table-4.5")
        return [("laguerre_table", dict(n=n, alpha=alpha, vary_m=vary)) for n in range(0, 11)], None, "n"
    if name in ("fig-4.1", "fig-4.3"):
        cols = ["n", "std_dev", "renyi_2", "renyi_3", "renyi_4", "renyi_5"]
        return ([("polylen", dict(family="hermite", n=n, q=(2, 3, 4, 5))) for n in range(0, 101)],
                cols, "n" if name == "fig-4.1" else "std_dev")
    if name == "fig-4.2":
        return ([("polylen", dict(family="hermite", n=n, q=(), bounds=True)) for n in range(0, 101)],
                ["n", "shannon_length", "k_opt", "bound"], "n")
    if name == "fig-4.4":
        return ([("polylen", dict(family="hermite", n=n, q=())) for n in range(0, 101)],
                ["n", "std_dev", "shannon_length", "shannon_asymptotic"], "std_dev")
    if name in ("fig-4.5", "fig-4.6"):
        alpha = 0.0 if name == "fig-4.5" else 5.0
        return ([("polylen", dict(family="laguerre", n=n, alpha=alpha, q=(), bounds=True))
                 for n in range(0, 11)],
                ["n", "alpha", "shannon_length", "b_opt_m0", "bound_m0", "b_opt", "m_opt", "bound",
                 "ratio_bound_m0", "ratio_bound"], "n")
    if name in ("fig-4.7", "fig-4.8"):
        alpha = 0.0 if name == "fig-4.7" else 5.0
        return ([("polylen", dict(family="laguerre", n=n, alpha=alpha, q=(2,))) for n in range(0, 11)],
                ["n", "alpha", "std_dev", "fisher_length", "renyi_2", "shannon_length"], "n")
    if name == "fig-4.9":
        return ([("polylen", dict(family="laguerre", n=n, alpha=a, q=())) for a in (0.0, 5.0)
                 for n in range(0, 21)],
                ["alpha", "n", "std_dev", "shannon_length"], "std_dev")
    raise UsageError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")


PRESETS = (["fig-1.1", "fig-1.4", "fig-1.5", "table-1.1", "fig-2.1", "fig-2.3"]
           + [f"fig-3.{i}" for i in range(3, 16)]
           + [f"table-4.{i}" for i in range(1, 6)]
           + [f"fig-4.{i}" for i in range(1, 10)])


# --- argument parsing -----------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _precision(text):
    try:
        p = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("precision must be an integer")
    if not 4 <= p <= 17:
        raise argparse.ArgumentTypeError("precision must lie in [4, 17]")
    return p


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("expected an integer")
    if v < 1:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return v


def _number(text):
    v = float(text)
    return int(v) if v.is_integer() and "." not in text and "e" not in text.lower() else v


def parse_values(text):
    """Axis values: 'a:b' (inclusive integers), 'a:b:step', or a comma list."""
    text = text.strip()
    try:
        if ":" in text:
            parts = text.split(":")
            if len(parts) == 2:
                a, b = int(parts[0]), int(parts[1])
                if b < a:
                    raise ValueError
                return list(range(a, b + 1))
            if len(parts) == 3:
                a, b, s = (float(p) for p in parts)
                if s <= 0:
                    raise ValueError
                k = int(math.floor((b - a) / s + 1e-9))
                return [_number(repr(round(a + i * s, 12))) for i in range(k + 1)]
            raise ValueError
        values = [_number(p) for p in text.split(",") if p.strip()]
        if not values:
            raise ValueError
        return values
    except ValueError:
        raise UsageError(f"bad axis values {text!r}")


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=_precision, default=12, help="significant digits (4-17)")
    common.add_argument("--output", "-o", default=None, help="CSV file (default: standard output)")
    common.add_argument("--plot-script", default=None, help="also write a gnuplot script here")
    common.add_argument("--tol-abs", type=float, default=None, help="absolute quadrature tolerance")
    common.add_argument("--tol-rel", type=float, default=None, help="relative quadrature tolerance")

    p = _Parser(prog="qcx", description="Spreading measures and complexities of quantum systems.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    h = sub.add_parser("hydrogen", parents=[common], help="3D hydrogenic orbital")
    h.add_argument("--Z", type=float, default=1.0)
    h.add_argument("--n", type=int, required=True)
    h.add_argument("--l", type=int, default=0)
    h.add_argument("--m", type=int, default=0)

    d = sub.add_parser("hydrod", parents=[common], help="D-dimensional hydrogenic state")
    d.add_argument("--D", type=int, required=True)
    d.add_argument("--n", type=int, default=1)
    d.add_argument("--Z", type=float, default=1.0)
    g = d.add_mutually_exclusive_group()
    g.add_argument("--mu", default=None, help="hyperangular quantum numbers, e.g. 2,1,0")
    g.add_argument("--ground", action="store_true", help="ground state (forces n = 1)")
    g.add_argument("--circular", action="store_true", help="circular state of level n")
    d.add_argument("--space", choices=("position", "momentum", "both"), default="both")
    d.add_argument("--method", choices=("auto", "closed-form", "quadrature"), default="auto")

    k = sub.add_parser("kleingordon", parents=[common], help="Klein-Gordon Coulomb state")
    k.add_argument("--Z", type=float, required=True)
    k.add_argument("--n", type=int, required=True)
    k.add_argument("--l", type=int, default=0)
    k.add_argument("--m", type=int, default=0)
    k.add_argument("--m0", type=float, default=kleingordon.PION_MASS, help="particle mass (a.u.)")

    pl = sub.add_parser("polylen", parents=[common], help="spreading lengths of Hermite/Laguerre")
    pl.add_argument("family", choices=("hermite", "laguerre"))
    pl.add_argument("--n", type=int, required=True)
    pl.add_argument("--alpha", type=float, default=0.0)
    pl.add_argument("--q", default="2", help="Renyi orders, comma separated")
    pl.add_argument("--bounds", action="store_true", help="add optimal Shannon-length bounds")

    s = sub.add_parser("sweep", parents=[common], help="sweep one parameter of a target")
    s.add_argument("target", choices=("hydrogen", "hydrod", "kleingordon", "polylen"))
    s.add_argument("--axis", required=True, help="parameter to vary")
    s.add_argument("--values", required=True, help="'a:b', 'a:b:step' or a comma list")
    s.add_argument("--set", action="append", default=[], metavar="NAME=VALUE",
                   help="fixed parameter (repeatable)")
    s.add_argument("--columns", default=None, help="comma-separated output columns")
    s.add_argument("--workers", type=_positive_int, default=1)

    pr = sub.add_parser("preset", parents=[common], help="reproduce a figure or table")
    pr.add_argument("name", choices=PRESETS)
    pr.add_argument("--workers", type=_positive_int, default=1)
    return p


_SWEEP_PARAMS = {
    "hydrogen": {"Z", "n", "l", "m"},
    "hydrod": {"D", "n", "Z", "mu", "state", "space", "method"},
    "kleingordon": {"Z", "n", "l", "m", "m0"},
    "polylen": {"family", "n", "alpha", "q", "bounds"},
}


def _sweep_jobs(args):
    allowed = _SWEEP_PARAMS[args.target]
    if args.axis not in allowed:
        raise UsageError(f"axis {args.axis!r} is not a parameter of {args.target}")
    fixed = {}
    for item in args.set:
        if "=" not in item:
            raise UsageError(f"--set expects NAME=VALUE, got {item!r}")
        key, val = item.split("=", 1)
        if key not in allowed:
            raise UsageError(f"{key!r} is not a parameter of {args.target}")
        if key == args.axis:
            raise UsageError(f"axis {key!r} cannot also be fixed")
        if key in ("mu", "state", "space", "method", "family"):
            fixed[key] = val
        elif key == "q":
            fixed[key] = tuple(float(v) for v in val.split(","))
        elif key == "bounds":
            fixed[key] = val.lower() in ("1", "true", "yes")
        else:
            try:
                fixed[key] = _number(val)
            except ValueError:
                raise UsageError(f"bad value for {key}: {val!r}")
    values = sorted(parse_values(args.values))
    jobs = [(args.target, {**fixed, args.axis: v}) for v in values]
    return jobs


def _validate(jobs, tol):
    """Construct the domain objects of every job up front so bad input exits 2."""
    for name, params in jobs:
        try:
            if name == "hydrogen":
                hydrogen3d.Orbital3D(int(params["n"]), int(params.get("l", 0)), int(params.get("m", 0)),
                                     float(params.get("Z", 1.0)))
            elif name == "hydrod":
                D, n = int(params["D"]), int(params.get("n", 1))
                hydrod.DOrbital(D, n, _parse_mu(params.get("mu"), D, n, params.get("state", "")),
                                float(params.get("Z", 1.0)))
            elif name == "kleingordon":
                kleingordon.KGOrbital(int(params["n"]), int(params.get("l", 0)), int(params.get("m", 0)),
                                      float(params["Z"]), float(params.get("m0", kleingordon.PION_MASS)))
            elif name == "polylen":
                if params.get("family") not in ("hermite", "laguerre"):
                    raise UsageError(f"unknown family {params.get('family')!r}")
                if int(params["n"]) < 0:
                    raise UsageError("n must be non-negative")
        except KeyError as exc:
            raise UsageError(f"missing parameter {exc.args[0]!r} for {name}")
        except (TypeError, ValueError) as exc:
            raise UsageError(str(exc))


def _emit(text, path):
    if path is None:
        sys.stdout.buffer.write(text.encode("utf-8"))
        sys.stdout.flush()
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args.tol_abs, args.tol_rel)
        tol = (cfg.abs_tol, cfg.rel_tol)
        columns, x_col, workers = None, None, 1
        if args.command == "hydrogen":
            jobs = [("hydrogen", dict(Z=args.Z, n=args.n, l=args.l, m=args.m))]
        elif args.command == "hydrod":
            state = "ground" if args.ground else "circular" if args.circular else ""
            n = 1 if args.ground else args.n
            jobs = [("hydrod", dict(D=args.D, n=n, Z=args.Z, mu=args.mu, state=state,
                                    space=args.space, method=args.method))]
        elif args.command == "kleingordon":
            jobs = [("kleingordon", dict(Z=args.Z, n=args.n, l=args.l, m=args.m, m0=args.m0))]
        elif args.command == "polylen":
            try:
                qs = tuple(float(v) for v in args.q.split(",") if v.strip())
            except ValueError:
                raise UsageError(f"bad --q {args.q!r}")
            if any(not q > 0 or q == 1 for q in qs):
                raise UsageError("Renyi orders must be positive and different from 1")
            jobs = [("polylen", dict(family=args.family, n=args.n, alpha=args.alpha, q=qs,
                                     bounds=args.bounds))]
        elif args.command == "sweep":
            jobs = _sweep_jobs(args)
            columns = args.columns.split(",") if args.columns else None
            x_col, workers = args.axis, args.workers
        else:
            jobs, columns, x_col = _preset_jobs(args.name)
            workers = args.workers
        _validate(jobs, tol)
    except UsageError as exc:
        print(f"qcx: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    full_jobs = [(name, params, tol) for name, params in jobs]
    try:
        rows, err = compute_rows(full_jobs, workers)
    except (UsageError, ValueError) as exc:
        print(f"qcx: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if columns is not None and rows:
        known = [k for k in rows[0]]
        unknown = [c for c in columns if c not in known]
        if unknown:
            print(f"qcx: error: unknown column(s) {','.join(unknown)}; available: {','.join(known)}",
                  file=sys.stderr)
            return EXIT_USAGE
    text, cols = render_csv(rows, args.precision, columns)
    if rows or err is None:
        _emit(text, args.output)
    if err is not None:
        print(f"qcx: error: quadrature did not converge: {err.label or err}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    if args.plot_script:
        csv_ref = args.output or "data.csv"
        title = args.name if args.command == "preset" else args.command
        x = x_col if x_col in cols else cols[0]
        with open(args.plot_script, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(plot_script(csv_ref, cols, x, title))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
