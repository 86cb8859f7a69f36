"""Special functions, the multiplicative constant C, and closed-form
continuum correlators."""

import cmath
import math

import mpmath
import pytest

from mattis.core import ModelParams
from mattis.qft import (EULER_GAMMA, alpha1, c_constant,
                        density2pt_ir_g2zero, exp_integral_e1,
                        fermion2pt_ir_g2zero, fermion2pt_qft,
                        lnG_closed_g2zero, sigma)


def test_e1_reference_value():
    assert exp_integral_e1(1.0).real == pytest.approx(0.21938393439552,
                                                      abs=1e-13)
    assert exp_integral_e1(1.0).imag == 0.0


def test_e1_series_region_vs_mpmath():
    # points handled by the power series, including the band along the
    # negative real axis where the continued fraction stalls
    for z in (0.5 + 0.3j, -3.0 + 0.5j, 2.0j, -4.0 + 0.05j, 3.9,
              -5.0 + 1e-3j, 0.001 - 0.002j):
        ref = complex(mpmath.e1(mpmath.mpc(z)))
        assert exp_integral_e1(z) == pytest.approx(ref, rel=1e-11)


def test_e1_cf_region_vs_mpmath():
    # points handled by the continued fraction (independent route)
    for z in (5.0, 4.1 + 0.1j, -0.01 + 50.0j, 10.0 - 30.0j, 100.0 + 1.0j):
        ref = complex(mpmath.e1(mpmath.mpc(z)))
        assert exp_integral_e1(z) == pytest.approx(ref, rel=1e-12)


def test_e1_switchover_continuity():
    for k in range(20):
        th = 0.15 + 0.14 * k
        z1 = (4.0 - 1e-9) * cmath.exp(1j * th)
        z2 = (4.0 + 1e-9) * cmath.exp(1j * th)
        assert exp_integral_e1(z1) == pytest.approx(exp_integral_e1(z2),
                                                    rel=1e-8)


def test_e1_domain():
    with pytest.raises(ValueError):
        exp_integral_e1(0.0)
    with pytest.raises(ValueError):
        exp_integral_e1(-2.0)


def test_sigma_asymptotics():
    z = 1e-8 + 1e-8j
    assert sigma(z) / (math.e ** EULER_GAMMA * z) == pytest.approx(1.0,
                                                                   abs=1e-7)
    z = 50.0 + 10.0j
    assert sigma(z) == pytest.approx(1.0 - cmath.exp(-z) / z, abs=1e-16)


def test_c_constant_decoupled_is_one():
    for g1 in (-0.9, -0.5, 0.0, 0.5, 0.9):
        assert c_constant(g1, 0.0).value == 1.0


def test_c_constant_reference_point():
    res = c_constant(0.5, 0.5)
    assert res.value == pytest.approx(0.9138765720906009, rel=1e-10)
    alt = c_constant(0.5, 0.5, scheme="gauss")
    assert abs(res.value - alt.value) <= 1e-10


def test_c_constant_validation():
    with pytest.raises(ValueError):
        c_constant(1.2, 0.0)
    with pytest.raises(ValueError):
        c_constant(0.0, 1.5)
    with pytest.raises(ValueError):
        c_constant(0.0, 0.5, scheme="trapezoid")


def test_fermion_ir_free_case_exact():
    p = ModelParams()
    cf = fermion2pt_ir_g2zero(p, 1, 1, 1.5, 0.0, 0.8)
    assert cf.value == (1.0 / (2.0 * math.pi)) / (0.8 - 1.5j)
    assert cf.flavor_diagonal and cf.delta_transverse == "kronecker"


def test_fermion_ir_consistency_with_lng_closed():
    # exp(lnG(x) - lnG(0))/(2 pi a eps) reproduces the ir closed form in
    # the eps -> 0 limit; the defect is O(eps)
    p = ModelParams(gamma1=0.5, gamma2=0.0, l_over_a=101)
    r, x, t = 1, 1.2, 0.4
    devs = []
    for eps in (0.3, 0.03, 0.003):
        d = lnG_closed_g2zero(p, r, 1, x, t, eps) \
            - lnG_closed_g2zero(p, r, 1, 0.0, 0.0, eps)
        v = cmath.exp(d) / (2.0 * math.pi * p.a_tilde * eps)
        ir = fermion2pt_ir_g2zero(p, r, 1, x, t, eps).value
        devs.append(abs(v - ir) / abs(ir))
    assert devs[0] > devs[1] > devs[2]
    assert devs[2] < 2e-3


def test_fermion_qft_matches_rescaled_ir():
    # multiplicative renormalization: a*(e^gamma pi L0/a)^(K-1) * ir value
    # approaches the continuum closed form as the spacing shrinks
    x, t, eps, L0 = 30.0, 0.0, 1e-4, 1.0
    for a, tol in ((0.1, 1e-6), (0.02, 1e-7)):
        p = ModelParams(gamma1=0.5, gamma2=0.0, a_tilde=a)
        ir = fermion2pt_ir_g2zero(p, 1, 1, x, t, eps).value
        qv = fermion2pt_qft(p, 1, 1, x, t, L0, eps)
        ren = a * (math.e ** EULER_GAMMA * math.pi * L0 / a) ** (p.K - 1.0) \
            * ir
        assert abs(ren - qv.value) / abs(qv.value) < tol
        assert qv.delta_transverse == "dirac"


def test_fermion_closed_form_validation():
    p = ModelParams(gamma1=0.3, gamma2=0.2)
    with pytest.raises(ValueError):
        fermion2pt_ir_g2zero(p, 1, 1, 1.0, 0.0, 0.5)    # gamma2 != 0
    p0 = ModelParams()
    with pytest.raises(ValueError):
        fermion2pt_ir_g2zero(p0, 1, 1, 1.0, 0.0, -0.5)
    with pytest.raises(ValueError):
        fermion2pt_qft(p0, 1, 1, 1.0, 0.5j, 1.0, 0.5)   # wrong-sign imag t


def test_alpha1():
    z = 2.0 + 1.0j
    assert alpha1(z) == cmath.exp(-z) * (1.0 + z) / z ** 2
    assert abs(alpha1(40.0)) < 1e-15
    with pytest.raises(ValueError):
        alpha1(-1.0)


def test_density_ir_free_case_exact():
    p = ModelParams()
    cf = density2pt_ir_g2zero(p, 1, 1, 1, 1.5, 0.5, 0.3)
    expect = 1.0 / (4.0 * math.pi ** 2) / (0.3 - 1j * (1.5 - 0.5)) ** 2
    assert cf.value == pytest.approx(expect, rel=1e-15)


def test_density_ir_chirality_structure():
    # opposite chain indices kill the leading double-pole terms at gamma=0
    p = ModelParams()
    cf = density2pt_ir_g2zero(p, 1, -1, 1, 2.0, 0.0, 0.4)
    lead = 1.0 / (4.0 * math.pi ** 2) / (0.4 - 2.0j) ** 2
    assert abs(cf.value) < 1e-2 * abs(lead)
