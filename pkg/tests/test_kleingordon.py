import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate as si

from qcx import hydrogen3d as H
from qcx import kleingordon as K
from qcx.kleingordon import C_LIGHT, KGOrbital


def states(n_max, Z):
    for n in range(1, n_max + 1):
        for l in range(n):
            yield KGOrbital(n, l, 0, Z)


def test_validation():
    for args in [(0, 0), (2, 2), (2, 1, 2), (1, 0, 0, 0.0), (1, 0, 0, 1.0, -1.0), (1, 0, 0, 69.0)]:
        with pytest.raises(ValueError):
            KGOrbital(*args)
    KGOrbital(2, 1, 0, 100.0)  # l = 1 stays subcritical up to Z alpha < 3/2


def test_weak_coupling_limit():
    for n, l in [(1, 0), (2, 1), (3, 0), (4, 2)]:
        orb = KGOrbital(n, l, 0, 0.5)
        d = K.kg_derived(orb)
        g = orb.gamma
        assert d.lprime == pytest.approx(l - g * g / (2 * l + 1), abs=2 * g ** 4)
        mc2 = orb.m0 * C_LIGHT ** 2
        assert d.energy / mc2 == pytest.approx(1 - g * g / (2 * n * n), abs=g ** 4)


def test_eq_identity():
    for orb in states(4, 68.0):
        d = K.kg_derived(orb)
        rhs = C_LIGHT * (orb.n + d.lprime - orb.l) / (2 * orb.gamma)
        assert abs(d.eps_over_beta / rhs - 1) < 1e-12


def test_ground_energy_z68():
    orb = KGOrbital(1, 0, 0, 68.0)
    assert K.kg_derived(orb).energy / (orb.m0 * C_LIGHT ** 2) == pytest.approx(0.749, abs=5e-4)
    assert K.kg_derived(orb).energy < orb.m0 * C_LIGHT ** 2


@pytest.mark.parametrize("Z", [1.0, 30.0, 68.0])
def test_charge_normalisation(Z):
    for orb in states(4, Z):
        assert K.kg_r_moment(orb, 0) == pytest.approx(1.0, abs=1e-10)
        assert K.kg_norm_quadrature(orb) == pytest.approx(1.0, abs=1e-10)


def test_charge_normalisation_independent_quadrature():
    for orb in (KGOrbital(1, 0, 0, 68.0), KGOrbital(3, 1, 0, 50.0)):
        d = K.kg_derived(orb)
        # substitute r = t^4 to tame the r^{2l'} endpoint
        f = lambda t: 4 * t ** 3 * float(K.kg_charge_density(orb, t ** 4)) if t > 0 else 0.0
        val = si.quad(f, 0, (60 / d.beta) ** 0.25, epsabs=1e-13, epsrel=1e-12, limit=500)[0]
        assert val == pytest.approx(1.0, abs=1e-9)


def test_nonrelativistic_density():
    orb = KGOrbital(1, 0, 0, 0.1)
    ref = K.schrodinger_reference(orb)
    r = np.linspace(1e-6, 1.0, 20001)
    a = K.kg_charge_density(orb, r)
    b = H.radial_density(ref, r)
    assert np.max(np.abs(a - b)) < 1e-3


def test_relativistic_compression_near_origin():
    orb = KGOrbital(1, 0, 0, 68.0)
    ref = K.schrodinger_reference(orb)
    r = np.array([1e-6, 1e-5, 1e-4]) / orb.m0
    assert np.all(K.kg_charge_density(orb, r) > H.radial_density(ref, r))


def test_nli_density_diagnostic():
    orb = KGOrbital(1, 0, 0, 68.0)
    d = K.kg_derived(orb)
    f = lambda t: 4 * t ** 3 * float(K.kg_nli_density(orb, t ** 4)) if t > 0 else 0.0
    val = si.quad(f, 0, (60 / d.beta) ** 0.25, epsabs=1e-13, epsrel=1e-12, limit=500)[0]
    assert K.kg_nli_norm(orb) == pytest.approx(val, rel=1e-9)
    assert abs(K.kg_nli_norm(orb) - 1) > 1e-2
    assert K.kg_nli_norm(KGOrbital(1, 0, 0, 0.1)) == pytest.approx(1.0, abs=1e-5)


# --- I integral and moments -------------------------------------------------------------

def test_I_integral_examples():
    for orb in states(4, 68.0):
        d = K.kg_derived(orb)
        assert K.kg_I_integral(orb.n, orb.l, d.lprime, 0) == pytest.approx(2 * (orb.n + d.lprime - orb.l), rel=1e-13)
    for n in range(1, 6):
        orb = KGOrbital(n, n - 1, 0, 40.0)
        lp = K.kg_derived(orb).lprime
        assert K.kg_I_integral(n, n - 1, lp, 1) == pytest.approx((2 * lp + 2) * (2 * lp + 3), rel=1e-13)
    with pytest.raises(ValueError):
        K.kg_I_integral(2, 0, 0.0, -2)


@pytest.mark.parametrize("nr", range(0, 4))
@pytest.mark.parametrize("k", range(-1, 4))
def test_I_integral_quadrature(nr, k):
    for l, Z in [(0, 68.0), (1, 30.0), (2, 1.0)]:
        orb = KGOrbital(nr + l + 1, l, 0, Z)
        lp = K.kg_derived(orb).lprime
        assert K.kg_I_quadrature(orb, k) == pytest.approx(K.kg_I_integral(orb.n, l, lp, k), rel=1e-9)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_moments_vs_quadrature(k):
    for orb in states(3, 68.0):
        assert K.kg_moment_quadrature(orb, k) == pytest.approx(K.kg_r_moment(orb, k), rel=1e-9)


def test_moment_argument_checks():
    with pytest.raises(ValueError):
        K.kg_r_moment(KGOrbital(1, 0), -1)
    with pytest.raises(ValueError):
        K.circular_centroid(KGOrbital(3, 1))


@pytest.mark.parametrize("Z", [1.0, 30.0, 68.0, 120.0])
def test_circular_closed_forms(Z):
    for n in range(2 if Z > 68.5 else 1, 9):
        orb = KGOrbital(n, n - 1, 0, Z)
        assert K.circular_centroid(orb) == pytest.approx(K.kg_r_moment(orb, 1), rel=1e-10)
        assert K.circular_second_moment(orb) == pytest.approx(K.kg_r_moment(orb, 2), rel=1e-10)
        assert K.circular_variance(orb) == pytest.approx(K.kg_variance(orb), rel=1e-10)


def test_variance_consistency():
    for orb in states(4, 50.0):
        assert K.kg_variance(orb) == K.kg_r_moment(orb, 2) - K.kg_r_moment(orb, 1) ** 2


def test_m_independence():
    for n, l in [(2, 1), (3, 2), (4, 3)]:
        base = KGOrbital(n, l, 0, 68.0)
        for m in range(-l, l + 1):
            orb = KGOrbital(n, l, m, 68.0)
            for k in range(4):
                assert K.kg_r_moment(orb, k) == K.kg_r_moment(base, k)
            assert K.kg_variance(orb) == K.kg_variance(base)


def test_nonrelativistic_ratios():
    for n in range(1, 4):
        for l in range(min(n, 3)):
            r = K.kg_report(KGOrbital(n, l, 0, 0.1))
            for ratio in (r.ratio_centroid, r.ratio_variance, r.ratio_shannon_power):
                assert ratio == pytest.approx(1.0, abs=1e-3)


def test_z68_trends():
    circ = [K.kg_report(KGOrbital(n, n - 1, 0, 68.0)).ratio_centroid for n in range(1, 9)]
    assert all(b > a for a, b in zip(circ, circ[1:]))
    assert all(c < 1 for c in circ)
    s_states = [K.kg_report(KGOrbital(n, 0, 0, 68.0)) for n in range(1, 9)]
    for attr in ("ratio_centroid", "ratio_variance", "ratio_shannon_power"):
        vals = [getattr(r, attr) for r in s_states]
        assert all(v < 1 for v in vals)
        assert all(b > a for a, b in zip(vals, vals[1:]))


# --- entropy, Fisher, complexities ------------------------------------------------------

def test_schrodinger_reference_entropy():
    for Z in (0.5, 1.0, 68.0):
        orb = KGOrbital(1, 0, 0, Z)
        ref = K.schrodinger_reference(orb)
        assert H.shannon(ref)[0] == pytest.approx(3 + math.log(math.pi) - 3 * math.log(orb.m0 * Z), abs=1e-10)


@pytest.mark.parametrize("orb", [KGOrbital(1, 0, 0, 68.0), KGOrbital(2, 1, 1, 68.0), KGOrbital(3, 0, 0, 30.0)])
def test_shannon_independent_quadrature(orb):
    d = K.kg_derived(orb)

    def f(t):
        if t == 0:
            return 0.0
        r = t ** 4
        p = float(K.kg_charge_density(orb, r))
        return -4 * t ** 3 * p * math.log(p / (r * r)) if p > 0 else 0.0

    s_r = si.quad(f, 0, (80 / d.beta) ** 0.25, epsabs=1e-12, epsrel=1e-11, limit=1000)[0]
    s_y = H.shannon(H.Orbital3D(orb.l + 1, orb.l, orb.m))[2]
    assert K.kg_shannon(orb)[0] == pytest.approx(s_r + s_y, abs=1e-7)


def test_shannon_limit_ratio():
    r = K.kg_report(KGOrbital(1, 0, 0, 0.1))
    assert r.ratio_shannon_power == pytest.approx(1.0, abs=1e-3)


def test_fisher_divergence_flag():
    for Z in (0.1, 30.0, 68.0):
        for n in range(1, 5):
            orb = KGOrbital(n, 0, 0, Z)
            assert K.kg_fisher_diverges(orb)
            assert K.kg_fisher(orb) is None
    assert not K.kg_fisher_diverges(KGOrbital(2, 1, 0, 68.0))


@pytest.mark.parametrize("orb", [H.Orbital3D(n, l, m) for n in range(1, 4) for l in range(n)
                                 for m in range(0, min(l, 1) + 1)])
def test_fisher_pipeline_on_schrodinger(orb):
    k = orb.n / (2 * orb.Z)
    zeros = np.asarray(H.specfun.poly_zeros(H._radial_spec(orb))) * k
    val = H.fisher_quadrature(H.radial_amplitude_fn(orb), orb.l, orb.m, zeros=zeros, scale=k)
    assert val == pytest.approx(H.fisher(orb), rel=1e-6)


def test_fisher_nonrelativistic_limit():
    for n, l, m in [(2, 1, 0), (3, 2, 1), (4, 1, 1)]:
        orb = KGOrbital(n, l, m, 0.1)
        assert K.kg_fisher(orb) == pytest.approx(H.fisher(K.schrodinger_reference(orb)), rel=1e-3)


def test_fisher_ratio_z68():
    for n in range(2, 5):
        for l in range(1, n):
            for m in range(0, l + 1):
                r = K.kg_report(KGOrbital(n, l, m, 68.0), moments=())
                assert r.ratio_fisher < 1


def test_disequilibrium_divergence():
    assert K.kg_disequilibrium(KGOrbital(1, 0, 0, 68.0)) is None
    small = KGOrbital(1, 0, 0, 0.1)
    assert K.kg_disequilibrium(small) == pytest.approx(H.disequilibrium(K.schrodinger_reference(small))[0], rel=1e-3)


@pytest.mark.parametrize("Z", [1.0, 30.0, 50.0, 68.0])
def test_zeta_range_where_defined(Z):
    outside = []
    for n in range(1, 5):
        for l in range(n):
            for m in range(0, l + 1):
                c_fs, c_sc, z_fs, z_sc = K.kg_complexities(KGOrbital(n, l, m, Z))
                if l == 0:
                    assert c_fs is None and z_fs is None
                for name, z in (("fs", z_fs), ("sc", z_sc)):
                    if z is not None and not 0 <= z < 1:
                        outside.append((n, l, m, name, z))
    assert outside == []


def test_zeta_fs_sign_of_top_circular_state():
    # (4, 3, 3): the Fisher gain is slightly outweighed by the entropic-power loss
    for Z in (30.0, 68.0):
        r = K.kg_report(KGOrbital(4, 3, 3, Z), moments=())
        assert -1e-3 < r.zeta_fs < 0
        assert r.ratio_fisher < 1 and r.ratio_shannon_power < 1


def test_report_consistency():
    r = K.kg_report(KGOrbital(3, 2, 1, 68.0))
    assert r.moments[0] == pytest.approx(1.0)
    assert r.c_fs == pytest.approx(r.fisher * r.shannon_power)
    assert r.c_sc == pytest.approx(r.disequilibrium * math.exp(r.shannon))
    assert r.zeta_fs == pytest.approx(1 - r.sch_c_fs / r.c_fs)
    assert not r.fisher_divergent


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 6).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, n - 1))),
       st.floats(0.01, 68.0), st.floats(1.0, 500.0))
def test_closed_form_invariants(nl, Z, m0):
    n, l = nl
    orb = KGOrbital(n, l, 0, Z, m0)
    d = K.kg_derived(orb)
    assert 0 < d.energy < m0 * C_LIGHT ** 2
    assert K.kg_r_moment(orb, 0) == pytest.approx(1.0, abs=1e-10)
    assert K.kg_variance(orb) > 0
    rhs = C_LIGHT * (n + d.lprime - l) / (2 * orb.gamma)
    assert d.eps_over_beta == pytest.approx(rhs, rel=1e-12)
