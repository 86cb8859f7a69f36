"""Parameter validation, cutoff indicator, dispersion and mode
coefficients."""

import math

import numpy as np
import pytest

from mattis.core import (ModelParams, boson_index_range, chi,
                         fermion_half_indices, g_angular,
                         ground_state_energy, omega, omega_tilde, u_matrix,
                         v_coeff, v_coeff_grid, validate_params)


def test_validate_params():
    assert validate_params(ModelParams(gamma1=0.5, gamma2=0.5,
                                       l_over_a=11)) == []
    errs = validate_params(ModelParams(gamma1=1.0))
    assert any("gamma1" in e for e in errs)
    # 0.6 > |1 + (-0.5)| = 0.5
    errs = validate_params(ModelParams(gamma1=-0.5, gamma2=0.6))
    assert any("gamma2" in e for e in errs)
    errs = validate_params(ModelParams(l_over_a=10))
    assert any("odd" in e for e in errs)


def test_index_sets():
    p = ModelParams(l_over_a=7)
    n = boson_index_range(p)
    assert list(n) == [-3, -2, -1, 0, 1, 2, 3]
    m = fermion_half_indices(p)
    assert len(m) == 7
    # half-open window: left edge included, right edge excluded
    assert m[0] * p.dp >= -p.p_cut and m[-1] * p.dp < p.p_cut


def test_chi_window():
    p = ModelParams()
    assert chi(0.0, 0.0, p) == 1.0
    assert chi(p.p_cut, 0.0, p) == 0.0      # right endpoint excluded
    assert chi(-p.p_cut, 0.0, p) == 1.0     # left endpoint included
    arr = chi(np.array([0.0, p.p_cut]), np.array([0.0, 0.0]), p)
    assert list(arr) == [1.0, 0.0]


def test_omega_free_and_decoupled():
    p0 = ModelParams()
    assert omega(1, 0.3, -0.7, p0) == pytest.approx(0.3)
    assert omega(-1, 0.3, -0.7, p0) == pytest.approx(0.7)
    p9 = ModelParams(gamma1=0.9, gamma2=0.0)
    assert omega(1, 0.4, 0.2, p9) == pytest.approx(
        math.sqrt(1.0 - 0.81) * 0.4)


def test_omega_mixed_point():
    # p = (1, 1) inside the cutoff at gamma1 = gamma2 = 0.5
    p = ModelParams(gamma1=0.5, gamma2=0.5)
    assert omega(1, 1.0, 1.0, p) == pytest.approx(1.0, abs=1e-12)
    assert omega(-1, 1.0, 1.0, p) == pytest.approx(math.sqrt(0.5), abs=1e-12)


def test_omega_tilde():
    p = ModelParams(gamma1=0.5, gamma2=0.0)
    assert omega_tilde(1, 0.7, 0.1, p) == pytest.approx(p.v_tilde * 0.7)
    assert omega_tilde(-1, 0.7, 0.0, p) == 0.0
    p2 = ModelParams(gamma1=0.5, gamma2=0.5)
    assert omega_tilde(1, 2.0, 0.3, p2) == pytest.approx(
        math.sqrt(0.75) * math.sqrt(8.0 / 9.0) * 2.0)


def test_derived_constants():
    p = ModelParams(gamma1=0.5, gamma2=0.0)
    assert p.K == pytest.approx((1.0 / math.sqrt(3) + math.sqrt(3)) / 2.0)
    p2 = ModelParams(gamma1=0.5, gamma2=0.5)
    assert p2.A == pytest.approx(8.0 / 9.0)
    assert p2.K == pytest.approx(1.1226827987756232)


def test_u_matrix_branches():
    p = ModelParams(gamma1=0.5, gamma2=0.0)
    assert np.array_equal(u_matrix(0.4, 0.7, p), np.eye(2))
    p2 = ModelParams(gamma1=0.5, gamma2=0.5)
    # p on the diagonal: cos term vanishes, diagonal entries 1/sqrt(2)
    U = u_matrix(0.6, 0.6, p2)
    assert U[0, 0] == pytest.approx(1.0 / math.sqrt(2))
    assert U[1, 1] == pytest.approx(1.0 / math.sqrt(2))
    rng = np.random.default_rng(5)
    for _ in range(50):
        pp, pm = rng.uniform(-3, 3, size=2)
        U = u_matrix(pp, pm, p2)
        assert np.abs(U @ U.T - np.eye(2)).max() < 1e-12


def test_g_angular():
    assert g_angular(1, 0.0, 0.7) == pytest.approx(1.0)
    assert g_angular(-1, 0.0, 0.7) == pytest.approx(0.0)
    assert g_angular(1, math.pi / 4, 1.0) == pytest.approx(1 / math.sqrt(2))
    th = np.linspace(0.0, math.pi / 2, 101)
    for A in (0.2, 0.7, 1.0):
        gp, gm = g_angular(1, th, A), g_angular(-1, th, A)
        assert np.abs(gp ** 2 + gm ** 2 - 1.0).max() < 1e-14
        assert np.abs(gp * gm
                      - math.sqrt(A) * np.abs(np.sin(2 * th)) / 2).max() < 1e-14


def test_v_coeff_free():
    p = ModelParams()
    for ps in (0.5, -1.2):
        for r in (1, -1):
            v = v_coeff(1, r, 1, ps, 0.3, p)
            expect = abs(ps) * (1 + r * math.copysign(1, ps)) ** 2 \
                / (8 * math.pi)
            assert abs(v) ** 2 == pytest.approx(expect, abs=1e-14)
    # cross-flavor coefficient vanishes at gamma2 = 0
    assert v_coeff(-1, 1, 1, 0.5, 0.3, ModelParams(gamma1=0.4)) == 0.0


def test_v_coeff_outside_cutoff():
    # outside the window the coefficient is the free one, couplings ignored
    p1 = ModelParams(gamma1=0.6, gamma2=0.3)
    p0 = ModelParams()
    pp = 1.5 * p1.p_cut
    assert v_coeff(1, 1, 1, pp, 0.2, p1) == pytest.approx(
        v_coeff(1, 1, 1, pp, 0.2, p0))


def test_v_coeff_grid_matches_scalar():
    p = ModelParams(gamma1=0.5, gamma2=0.4)
    rng = np.random.default_rng(11)
    pp = rng.uniform(-4, 4, size=40)
    pm = rng.uniform(-4, 4, size=40)
    for sp in (1, -1):
        for r in (1, -1):
            for s in (1, -1):
                grid = v_coeff_grid(sp, r, s, pp, pm, p)
                for k in range(len(pp)):
                    ps = pp[k] if s == 1 else pm[k]
                    if ps == 0.0:
                        continue
                    assert grid[k] == pytest.approx(
                        v_coeff(sp, r, s, pp[k], pm[k], p), abs=1e-13)


def test_v_coeff_requires_ps():
    with pytest.raises(ValueError):
        v_coeff(1, 1, 1, 0.0, 0.3, ModelParams())


def test_ground_state_energy():
    assert ground_state_energy(ModelParams(l_over_a=5)) == 0.0
    # explicit brute-force sum at gamma1=0.5, gamma2=0, l=3
    p = ModelParams(gamma1=0.5, gamma2=0.0, l_over_a=3)
    expect = 0.0
    for s in (1, -1):
        for np_ in (-1, 0, 1):
            for nm in (-1, 0, 1):
                ps = p.dp * (np_ if s == 1 else nm)
                if ps == 0.0:
                    continue
                expect += 0.5 * (math.sqrt(0.75) - 1.0) * abs(ps)
    assert ground_state_energy(p) == pytest.approx(expect, abs=1e-13)
