"""Correlation functions: Klein-factor combinatorics, boson-bilinear mode
sums (ln G), fermion N-point assembly, density two-point functions, and
zero-mode charge correlators.
"""

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .core import (ModelParams, boson_index_range, omega, v_coeff_grid)

_TAIL_REL = 1e-16
_CHUNK = 512


# -- Klein factor combinatorics --------------------------------------------

def _pairs(e1, e2):
    """Contraction condition for two Klein insertions (q, r, s, x)."""
    q1, r1, s1, x1 = e1
    q2, r2, s2, x2 = e2
    return q1 == -q2 and r1 == r2 and s1 == s2 and x1 == x2


def klein_vev(seq):
    """Vacuum expectation value of a product of Klein-factor insertions.

    seq is a sequence of (q, r, s, x) tuples, q = +/-1 the charge exponent
    sign.  Evaluated as the signed pairing sum (Wick-style recursion):
    contract the first insertion with each compatible partner, sign
    (-1)^(number of operators jumped over).
    """
    n = len(seq)
    if n == 0:
        return 1
    if n % 2 == 1:
        return 0
    total = 0
    first = seq[0]
    for k in range(1, n):
        if _pairs(first, seq[k]):
            rest = seq[1:k] + seq[k + 1:]
            total += (-1) ** (k - 1) * klein_vev(rest)
    return total


def klein_pairing_oracle(seq):
    """Independent check of klein_vev: enumerate all perfect matchings,
    keep those whose every pair contracts, sign each by its number of
    crossings."""
    n = len(seq)
    if n == 0:
        return 1
    if n % 2 == 1:
        return 0
    idx = list(range(n))

    def matchings(rem):
        if not rem:
            yield []
            return
        a = rem[0]
        for j in range(1, len(rem)):
            b = rem[j]
            for m in matchings(rem[1:j] + rem[j + 1:]):
                yield [(a, b)] + m

    total = 0
    for m in matchings(idx):
        if not all(_pairs(seq[a], seq[b]) for a, b in m):
            continue
        cross = 0
        for i in range(len(m)):
            for j in range(i + 1, len(m)):
                (a, b), (c, d) = m[i], m[j]
                if a < c < b < d or c < a < d < b:
                    cross += 1
        total += (-1) ** cross
    return total


# -- boson-bilinear mode sums ----------------------------------------------

def _check_time(t, beta):
    """Times may be real or purely imaginary t = -i*tau with 0<=tau<=beta."""
    t = complex(t)
    if t.imag == 0.0:
        return t
    if t.real == 0.0:
        tau = -t.imag
        if 0.0 <= tau <= beta:
            return t
    raise ValueError("t must be real or -i*tau with 0 <= tau <= beta")


def _kernel_block(params, beta, f1, f2, Pp, Pm, x_plus, x_minus, t, eps):
    """sum_s [conj(v1)v2 e^{i om t} n_B + v1(-p)conj(v2(-p)) e^{-i om t}
    (1+n_B)] e^{-i p.x} e^{-eps(|p_s1|+|p_s2|)/2}, elementwise over the
    momentum arrays."""
    r1, s1 = f1
    r2, s2 = f2
    ps1 = Pp if s1 == 1 else Pm
    ps2 = Pp if s2 == 1 else Pm
    out = np.zeros(Pp.shape, dtype=complex)
    for sp in (1, -1):
        om = omega(sp, Pp, Pm, params)
        v1 = v_coeff_grid(sp, r1, s1, Pp, Pm, params)
        v2 = v_coeff_grid(sp, r2, s2, Pp, Pm, params)
        v1m = v_coeff_grid(sp, r1, s1, -Pp, -Pm, params)
        v2m = v_coeff_grid(sp, r2, s2, -Pp, -Pm, params)
        if math.isinf(beta):
            nb = np.zeros_like(om)
            wplus = np.zeros(om.shape, dtype=complex)
        else:
            # om = 0 only on axis points whose v-coefficients vanish; guard
            # the Bose factor there (and let exp overflow mean n_B = 0)
            with np.errstate(over="ignore", divide="ignore"):
                nb = np.where(om > 0.0, 1.0 / np.expm1(beta * om), 0.0)
            wplus = np.exp(1j * om * t) * nb
        wminus = np.exp(-1j * om * t) * (1.0 + nb)
        out += np.conj(v1) * v2 * wplus + v1m * np.conj(v2m) * wminus
    phase = np.exp(-1j * (Pp * x_plus + Pm * x_minus))
    damp = np.exp(-eps * (np.abs(ps1) + np.abs(ps2)) / 2.0)
    return out * phase * damp


def _mode_sum(params, beta, f1, f2, x_plus, x_minus, t, eps, weight):
    """Sum weight(p)*kernel(p) over the momentum set shared by the two
    flavors: p_{s} != 0 for each involved flavor s, transverse components
    restricted to the cutoff window; the unbounded direction (equal
    flavors only) is truncated at 1e-16 relative."""
    t = _check_time(t, beta)
    if eps <= 0.0:
        raise ValueError("epsilon must be > 0")
    r1, s1 = f1
    r2, s2 = f2
    dp = params.dp
    n_in = boson_index_range(params)
    if s1 != s2:
        nz = n_in[n_in != 0].astype(float)
        Np, Nm = np.meshgrid(nz, nz, indexing="ij")
        Pp, Pm = dp * Np, dp * Nm
        ker = _kernel_block(params, beta, f1, f2, Pp, Pm,
                            x_plus, x_minus, t, eps)
        return complex(np.sum(weight(Pp, Pm) * ker))
    s = s1
    h = (params.l_over_a - 1) // 2
    nt = n_in.astype(float)  # transverse (bounded) direction, p_{-s}
    total = 0.0 + 0.0j
    absacc = 0.0
    start = 1
    while True:
        ns = np.arange(start, start + _CHUNK, dtype=float)
        ns = np.concatenate([ns, -ns])
        Ns, Nt = np.meshgrid(ns, nt, indexing="ij")
        if s == 1:
            Pp, Pm = dp * Ns, dp * Nt
        else:
            Pp, Pm = dp * Nt, dp * Ns
        ker = _kernel_block(params, beta, f1, f2, Pp, Pm,
                            x_plus, x_minus, t, eps)
        block = weight(Pp, Pm) * ker
        total += np.sum(block)
        babs = float(np.sum(np.abs(block)))
        absacc += babs
        start += _CHUNK
        if start > h + 1 and babs < _TAIL_REL * max(absacc, 1e-300):
            break
    return complex(total)


def ln_G(params, beta, f1, f2, x_plus, x_minus, t, epsilon):
    """Logarithm of the boson-exponential pair function G between flavors
    f1 = (r1, s1) and f2 = (r2, s2) at separation (x_plus, x_minus) and
    time t, with short-distance regulator epsilon > 0."""
    r1, s1 = f1
    r2, s2 = f2

    def weight(Pp, Pm):
        ps1 = Pp if s1 == 1 else Pm
        ps2 = Pp if s2 == 1 else Pm
        return 1.0 / (ps1 * ps2)

    val = _mode_sum(params, beta, f1, f2, x_plus, x_minus, t, epsilon, weight)
    return r1 * r2 * params.a_tilde * params.dp ** 2 * val


def norm_g(params, beta, f, epsilon):
    """Normalization g_{r,s}(eps) = 2 pi a_tilde eps * G_{f,f}(0, 0; eps)."""
    lg = ln_G(params, beta, f, f, 0.0, 0.0, 0.0, epsilon)
    return 2.0 * math.pi * params.a_tilde * epsilon * cmath.exp(lg)


def density_two_point(params, beta, f1, f2, x_plus, x_minus, t, epsilon):
    """Connected density-density correlator between flavors f1, f2 at
    separation x and relative time t (zero-mode part excluded; it is
    O(1/L) and available separately via zero_mode_nn)."""
    val = _mode_sum(params, beta, f1, f2, x_plus, x_minus, t, epsilon,
                    lambda Pp, Pm: 1.0)
    return val / (params.a_tilde * params.L ** 2)


@dataclass
class FermionCorrelator:
    """N-point fermion correlator: numeric amplitude together with the
    combinatorial Klein prefactor (delta constraints are already encoded
    in klein, which vanishes unless charges/flavors/transverse positions
    pair up)."""

    value: complex
    klein: int


def fermion_npoint(params, beta, insertions, epsilon):
    """Thermal N-point function of the (bosonized) fermion operators.

    insertions: sequence of (q, r, s, x_plus, x_minus, t); q = +1 for the
    operator, -1 for its adjoint.  Valid up to O(1/L) corrections (the
    zero-mode phase factors drop out in that order).
    """
    ins = list(insertions)
    seq = tuple((q, r, s, (x_minus if s == 1 else x_plus))
                for (q, r, s, x_plus, x_minus, t) in ins)
    kv = klein_vev(seq)
    if kv == 0:
        return FermionCorrelator(value=0.0j, klein=0)
    val = complex(kv)
    for (q, r, s, xp, xm, t) in ins:
        val /= cmath.sqrt(norm_g(params, beta, (r, s), epsilon))
    for j in range(len(ins)):
        for k in range(j + 1, len(ins)):
            qj, rj, sj, xpj, xmj, tj = ins[j]
            qk, rk, sk, xpk, xmk, tk = ins[k]
            lg = ln_G(params, beta, (rj, sj), (rk, sk),
                      xpj - xpk, xmj - xmk, tj - tk, epsilon)
            val *= cmath.exp(-qj * qk * lg)
    return FermionCorrelator(value=val, klein=kv)


# -- zero modes -------------------------------------------------------------

def zero_mode_nn(params, beta, f1, x1, f2, x2):
    """(1/L^2) <N_{r1,s1}(x1) N_{r2,s2}(x2)> for the zero-mode charges
    (leading order; corrections O(L^3 e^{-cL}))."""
    if math.isinf(beta):
        raise ValueError("needs finite beta")
    r1, s1 = f1
    r2, s2 = f2
    g1, g2, A = params.gamma1, params.gamma2, params.A
    pref = 1.0 / (4.0 * math.pi * beta * params.v_F * params.L)
    val = 0.0
    if s1 == s2 and x1 == x2:
        val += (1.0 / (A * (1.0 + g1)) + r1 * r2 / (1.0 - g1))
    if s1 == -s2:
        val -= (params.a_tilde / params.L) * g2 / (A * (1.0 + g1) ** 2)
    return pref * val


def zero_mode_generating(params, beta, m):
    """Generating function <exp((i/L) sum m_{r,s}(x) N_{r,s}(x))> of the
    zero-mode charge correlators, leading order in L.

    m: dict {(r, s, x): real coefficient}.
    """
    if math.isinf(beta):
        raise ValueError("needs finite beta")
    g1, g2, A = params.gamma1, params.gamma2, params.A
    pref = 1.0 / (8.0 * math.pi * beta * params.v_F * params.L)
    ex = 0.0
    for (r, s, x), mv in m.items():
        for (rp, sp, xp), mvp in m.items():
            if s == sp and x == xp:
                ex -= pref * (1.0 / (A * (1.0 + g1))
                              + r * rp / (1.0 - g1)) * mv * mvp
    # cross-flavor part: uniform over chiralities and positions (the
    # zero-mode coupling between the two chain families is rank-one)
    for (r, s, x), mv in m.items():
        for (rp, sp, xp), mvp in m.items():
            if sp == -s:
                ex += pref * (params.a_tilde / params.L) \
                    * g2 / (A * (1.0 + g1) ** 2) * mv * mvp
    return math.exp(ex)
