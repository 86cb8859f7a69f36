"""Generic quadratic-form diagonalization and the model's momentum
blocks."""

import math

import numpy as np
import pytest

from mattis.bogoliubov import QuadraticForm, diagonalize, mattis_block
from mattis.core import ModelParams, omega


def test_identity_form():
    res = diagonalize(QuadraticForm(np.eye(3), np.eye(3), np.zeros(3)))
    assert np.allclose(res.lam, 1.0)
    assert res.ground_shift == 0.0
    assert np.allclose(res.shift, 0.0)


def test_commuting_diagonal():
    A = np.diag([1.0, 2.0, 3.0])
    B = np.diag([4.0, 5.0, 6.0])
    res = diagonalize(QuadraticForm(A, B, np.zeros(3)))
    expect = sorted(np.sqrt(np.diag(A) * np.diag(B)), reverse=True)
    assert np.allclose(res.lam, expect)


def test_validation():
    with pytest.raises(ValueError):
        QuadraticForm([[1.0, 2.0], [0.0, 1.0]], np.eye(2), np.zeros(2))
    with pytest.raises(ValueError):
        QuadraticForm(np.eye(2), -np.eye(2), np.zeros(2))


def test_linear_shift():
    B = np.array([[2.0, 0.5], [0.5, 1.0]])
    K = np.array([0.3, -0.7])
    res = diagonalize(QuadraticForm(np.eye(2), B, K))
    assert np.allclose(res.shift, np.linalg.solve(B, K))
    assert res.ground_shift == pytest.approx(-K @ np.linalg.solve(B, K))


def test_mattis_block_reference_point():
    # the (1,1) block at gamma1=gamma2=0.5 is the oracle for omega there
    p = ModelParams(gamma1=0.5, gamma2=0.5)
    form, lam0 = mattis_block(1.0, 1.0, p)
    res = diagonalize(form, lam0)
    assert res.lam[0] == pytest.approx(1.0, abs=1e-12)
    assert res.lam[1] == pytest.approx(math.sqrt(0.5), abs=1e-12)
    # squeezing parameters follow tanh(mu) = (lam-lam0)/(lam+lam0)
    assert np.allclose(np.tanh(res.mu), (res.lam - lam0) / (res.lam + lam0))


def test_mattis_block_gamma2_zero():
    p = ModelParams(gamma1=0.6, gamma2=0.0)
    form, lam0 = mattis_block(0.8, -0.5, p)
    res = diagonalize(form, lam0)
    expect = sorted([math.sqrt(1 - 0.36) * 0.8, math.sqrt(1 - 0.36) * 0.5],
                    reverse=True)
    assert np.allclose(res.lam, expect)


def test_mattis_block_outside_cutoff():
    p = ModelParams(gamma1=0.6, gamma2=0.4)
    pp, pm = 1.5 * p.p_cut, 0.3
    form, lam0 = mattis_block(pp, pm, p)
    res = diagonalize(form)
    assert np.allclose(sorted(res.lam, reverse=True),
                       sorted([pp, pm], reverse=True))


def test_mattis_block_off_axis_no_linear_term():
    p = ModelParams(gamma1=0.3, gamma2=0.5)
    form, _ = mattis_block(0.7, -0.2, p)
    assert np.all(form.K == 0.0)
    # on an axis the 1x1 block records the linear-coupling magnitude
    form1, _ = mattis_block(0.7, 0.0, p)
    assert form1.K[0] == pytest.approx(abs(0.5 * 0.7))


def test_random_blocks_match_omega():
    rng = np.random.default_rng(3)
    for _ in range(100):
        g1 = rng.uniform(-0.9, 0.9)
        g2 = rng.uniform(-0.9, 0.9) * abs(1 + g1)
        p = ModelParams(gamma1=g1, gamma2=g2)
        pp, pm = rng.uniform(-0.95, 0.95, size=2) * p.p_cut
        if abs(pp) < 1e-3 or abs(pm) < 1e-3:
            continue
        form, lam0 = mattis_block(pp, pm, p)
        res = diagonalize(form, lam0)
        oms = sorted([omega(1, pp, pm, p), omega(-1, pp, pm, p)],
                     reverse=True)
        assert np.allclose(p.v_F * res.lam, oms, rtol=1e-11, atol=1e-13)
