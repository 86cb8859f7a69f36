"""Closed-form renormalized observables in the infrared/continuum regime:
the sigma/E1 special functions, fermion two-point closed forms, the
multiplicative constant C(gamma1, gamma2), and the gamma2=0 density
two-point closed form.
"""

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate

EULER_GAMMA = 0.5772156649015328606

_SERIES_RADIUS = 4.0


def exp_integral_e1(z):
    """Exponential integral E1(z) = int_1^inf e^{-zt}/t dt for complex z
    off the branch cut (negative real axis, including 0).

    Power series for |z| <= 4, modified Lentz continued fraction beyond.
    The series is also used in a band along the negative real axis
    (|z| + Re z <= 12, where its terms do not cancel but the continued
    fraction stalls near the branch cut).
    """
    z = complex(z)
    if z == 0.0 or (z.imag == 0.0 and z.real < 0.0):
        raise ValueError("E1 undefined on the branch cut / at 0")
    if abs(z) <= _SERIES_RADIUS or (z.real < 0.0 and abs(z) + z.real <= 12.0):
        # E1 = -gamma - ln z + sum_{n>=1} (-1)^{n+1} z^n/(n n!)
        total = 0.0 + 0.0j
        term = 1.0 + 0.0j
        for n in range(1, 3000):
            term *= -z / n
            dt = -term / n
            total += dt
            if abs(dt) < 1e-18 * max(abs(total), 1e-30):
                break
        return -EULER_GAMMA - cmath.log(z) + total
    # continued fraction e^{-z}/(z+1- 1/(z+3- 4/(z+5- 9/(...))))
    tiny = 1e-280
    f = z + 1.0
    if f == 0.0:
        f = tiny
    C = f
    D = 0.0
    for n in range(1, 300):
        a = -float(n * n)
        b = z + 2.0 * n + 1.0
        D = b + a * D
        if D == 0.0:
            D = tiny
        C = b + a / C
        if C == 0.0:
            C = tiny
        D = 1.0 / D
        delta = C * D
        f *= delta
        if abs(delta - 1.0) < 1e-16:
            return cmath.exp(-z) / f
    raise RuntimeError(f"E1 continued fraction did not converge at z={z}")


def sigma(z):
    """sigma(z) = exp(-E1(z)); ~ e^gamma z for small z, ~ 1 - e^{-z}/z for
    large z in the right half-plane."""
    return cmath.exp(-exp_integral_e1(z))


# -- C(gamma1, gamma2) ------------------------------------------------------
#
# The theta-integrand below is the printed one rewritten so that every term
# carries an explicit (1-A) or (1-sqrt(A)) factor, using the exact
# identities w^2 - cos^2(2 theta) = (1-A) sin^2(2 theta) and
# g_+ g_- = sqrt(A) |sin 2theta|/2.  This removes the catastrophic
# cancellation of the raw bracket near theta = pi/2 (where it vanishes like
# cos^2 theta) and makes the integrand exactly zero when gamma2 = 0.


def _c_integrand(theta, g1, g2):
    A = 1.0 - (g2 / (1.0 + g1)) ** 2
    B = math.sqrt((1.0 - g1) / (1.0 + g1))
    sA = math.sqrt(A)
    K = 0.5 * (sA / B + B / sA)
    st, ct = math.sin(theta), math.cos(theta)
    s2 = 2.0 * st * ct
    c2 = ct * ct - st * st
    w = math.sqrt(1.0 - A * s2 * s2)
    if theta <= math.pi / 4.0:
        # c2 >= 0; d = w - c2 carries the (1-A) factor
        d = (1.0 - A) * s2 * s2 / (w + c2)
        ep = d / (1.0 + c2)
        u = math.sqrt(1.0 + ep)            # g_+ / cos(theta)
        gp = ct * u
        # T_plus - K cos(theta), term by term O(1-A)
        head = 0.5 * (1.0 - sA) * (1.0 / B - B / sA)
        head += -0.5 * B * ep / (u * (u + 1.0)) + 0.5 * ep / (B * (u + 1.0))
        head += -0.25 * (d / w) * (B / u + u / B)
        bracket = ct * head
        # T_minus, explicit (1-A) via d
        bmg = (B / sA) * ct * ct * u / st + sA * st / (u * B) if st > 0 else 0.0
        bracket += 0.25 * (d / w) * bmg
        return bracket / (ct * ct * ct)
    # theta > pi/4: c2 < 0
    ac = -c2
    dcc = (1.0 - A) * 4.0 * st * st / (w + ac)   # (w - |c2|)/cos^2
    ecc = dcc / (1.0 + ac)
    e = ecc * ct * ct
    u = math.sqrt(1.0 + e)                       # g_+ / sin(theta)
    gp = st * u
    alpha = B / sA
    phicc = 0.5 * alpha * ecc / (u + 1.0) \
        - 0.5 * ecc / (alpha * u * (u + 1.0)) \
        - 0.25 * (dcc / w) * (alpha * u + 1.0 / (alpha * u))
    tpluscc = 0.25 * (dcc / w) * (B * ct * ct / gp + gp / B)
    return (tpluscc + ct * phicc) / st


@dataclass
class CConstResult:
    value: float
    integral: float
    err_estimate: float


def _c_integral_adaptive(g1, g2, tol):
    i1, e1 = integrate.quad(_c_integrand, 0.0, math.pi / 4.0, args=(g1, g2),
                            epsabs=1e-14, epsrel=tol, limit=300)
    i2, e2 = integrate.quad(_c_integrand, math.pi / 4.0, math.pi / 2.0,
                            args=(g1, g2), epsabs=1e-14, epsrel=tol,
                            limit=300)
    return i1 + i2, e1 + e2


def _c_integral_gauss(g1, g2, tol):
    # composite fixed-order Gauss-Legendre with panel doubling
    prev = None
    npanel = 8
    while npanel <= 4096:
        xg, wg = np.polynomial.legendre.leggauss(24)
        total = 0.0
        for a, b in ((0.0, math.pi / 4.0), (math.pi / 4.0, math.pi / 2.0)):
            edges = np.linspace(a, b, npanel + 1)
            for lo, hi in zip(edges[:-1], edges[1:]):
                mid, hw = 0.5 * (lo + hi), 0.5 * (hi - lo)
                total += hw * sum(w * _c_integrand(mid + hw * x, g1, g2)
                                  for x, w in zip(xg, wg))
        if prev is not None and abs(total - prev) <= tol * max(abs(total), 1.0):
            return total, abs(total - prev)
        prev = total
        npanel *= 2
    raise RuntimeError("Gauss scheme did not converge; last error "
                       f"{abs(total - prev):.3e}")


@lru_cache(maxsize=256)
def c_constant(gamma1, gamma2, tol=1e-10, scheme="adaptive"):
    """Multiplicative constant C(gamma1, gamma2) = exp(-I) with I the
    angular integral of the dispersion-mismatch term; C(gamma1, 0) = 1.

    scheme 'adaptive' uses adaptive Gauss-Kronrod panels, 'gauss' a
    composite fixed-order Gauss-Legendre rule (independent node family).
    """
    if not abs(gamma1) < 1.0:
        raise ValueError("|gamma1| must be < 1")
    if not abs(gamma2) < abs(1.0 + gamma1):
        raise ValueError("|gamma2| must be < |1+gamma1|")
    if tol < 1e-14:
        raise ValueError("tol too small")
    if scheme == "adaptive":
        I, err = _c_integral_adaptive(gamma1, gamma2, tol)
    elif scheme == "gauss":
        I, err = _c_integral_gauss(gamma1, gamma2, tol)
    else:
        raise ValueError(f"unknown scheme {scheme!r}")
    return CConstResult(value=math.exp(-I), integral=I, err_estimate=err)


# -- closed-form two-point functions ----------------------------------------

@dataclass
class ClosedForm:
    """Numeric part of a closed-form correlator plus its distributional
    structure: the value never includes delta distributions; Kronecker
    deltas in flavors are reported as the flavor_diagonal flag and the
    transverse-position constraint as delta_transverse
    ('kronecker' = lattice delta delta_{x_{-s},0} already included as the
    on-chain case, 'dirac' = continuum delta(x_{-s}) NOT multiplied in)."""

    value: complex
    flavor_diagonal: bool = True
    delta_transverse: str = "kronecker"


def _check_zero_t(t):
    t = complex(t)
    if t.imag > 0.0 or (t.imag != 0.0 and t.real != 0.0):
        raise ValueError("t must be real or -i*tau, tau >= 0")
    return t


def fermion2pt_ir_g2zero(params, r, s, x_s, t, epsilon):
    """Closed-form zero-temperature fermion two-point function in the
    large-L limit at gamma2 = 0, on-chain (x_{-s} = 0); the finite lattice
    spacing enters through the sigma-function factor F."""
    if params.gamma2 != 0.0:
        raise ValueError("requires gamma2 = 0")
    if epsilon <= 0.0:
        raise ValueError("epsilon must be > 0")
    t = _check_zero_t(t)
    a = params.a_tilde
    vt = params.v_tilde
    K = params.K
    zm = epsilon - 1j * (r * x_s - vt * t)
    zp = epsilon + 1j * (r * x_s + vt * t)
    z0 = epsilon - 1j * (r * x_s - params.v_F * t)
    F = (sigma(math.pi / a * zm) ** ((K + 1.0) / 2.0)
         * sigma(math.pi / a * zp) ** ((K - 1.0) / 2.0)
         / sigma(math.pi / a * z0))
    den = (epsilon + 1j * vt * t) ** 2 + x_s ** 2
    if den.real <= 0.0 and den.imag == 0.0:
        raise ValueError("branch crossing in the power factor")
    val = ((1.0 / a) * (math.e ** EULER_GAMMA * math.pi) ** (1.0 - K)
           * F / (2.0 * math.pi) / zm * (a ** 2 / den) ** ((K - 1.0) / 2.0))
    return ClosedForm(value=val, delta_transverse="kronecker")


def fermion2pt_qft(params, r, s, x_s, t, L0, epsilon):
    """Renormalized fermion two-point function in the full continuum
    limit; L0 is the arbitrary renormalization length scale.  The value
    excludes the distributional delta(x_{-s}) prefactor."""
    if L0 <= 0.0 or epsilon <= 0.0:
        raise ValueError("L0 and epsilon must be > 0")
    t = _check_zero_t(t)
    veff = params.v_tilde * math.sqrt(params.A)
    K = params.K
    C = c_constant(params.gamma1, params.gamma2).value
    den = (epsilon + 1j * veff * t) ** 2 + x_s ** 2
    if den.real <= 0.0 and den.imag == 0.0:
        raise ValueError("branch crossing in the power factor")
    val = (C / (2.0 * math.pi)
           / (epsilon - 1j * (r * x_s - veff * t))
           * (L0 ** 2 / den) ** ((K - 1.0) / 2.0))
    return ClosedForm(value=val, delta_transverse="dirac")


def lnG_closed_g2zero(params, r, s, x_s, t, epsilon):
    """Finite-L closed form of ln G_{(r,s),(r,s)} at gamma2 = 0 and
    zero temperature, on-chain; accurate up to O(1/L) corrections."""
    if params.gamma2 != 0.0:
        raise ValueError("requires gamma2 = 0")
    if epsilon <= 0.0:
        raise ValueError("epsilon must be > 0")
    t = _check_zero_t(t)
    a = params.a_tilde
    vt = params.v_tilde
    K = params.K
    zm = epsilon - 1j * (r * x_s - vt * t)
    zp = epsilon + 1j * (r * x_s + vt * t)
    z0 = epsilon - 1j * (r * x_s - params.v_F * t)
    lnF = ((K + 1.0) / 2.0) * cmath.log(sigma(math.pi / a * zm)) \
        + ((K - 1.0) / 2.0) * cmath.log(sigma(math.pi / a * zp)) \
        - cmath.log(sigma(math.pi / a * z0))
    den = (epsilon + 1j * vt * t) ** 2 + x_s ** 2
    return (K * math.log(params.L / (2.0 * math.pi)) - cmath.log(zm)
            - ((K - 1.0) / 2.0) * cmath.log(den) + lnF)


def alpha1(z):
    """alpha_1(z) = int_1^inf t e^{-zt} dt = e^{-z}(1+z)/z^2, Re z > 0."""
    z = complex(z)
    if z.real <= 0.0:
        raise ValueError("alpha1 needs Re z > 0")
    return cmath.exp(-z) * (1.0 + z) / z ** 2


def density2pt_ir_g2zero(params, r1, r2, s, x_s, t, epsilon):
    """Closed-form zero-temperature density two-point function at
    gamma2 = 0 in the large-L limit, on-chain: returns
    lim a_tilde*<J J> including the short-distance correction terms
    built from alpha1."""
    if params.gamma2 != 0.0:
        raise ValueError("requires gamma2 = 0")
    if epsilon <= 0.0:
        raise ValueError("epsilon must be > 0")
    t = _check_zero_t(t)
    a = params.a_tilde
    B = params.B
    vt = params.v_tilde
    x = x_s
    lead = ((B + r1 * r2 / B + (r1 + r2))
            / (epsilon - 1j * (x - vt * t)) ** 2
            + (B + r1 * r2 / B - (r1 + r2))
            / (epsilon + 1j * (x + vt * t)) ** 2)
    corr = 0.0 + 0.0j
    pa = math.pi / a
    if r1 == r2:
        corr += 4.0 * alpha1(pa * (epsilon - 1j * (r1 * x - params.v_F * t)))
    for rt in (1, -1):
        corr -= ((B + r1 * r2 / B) + rt * (r1 + r2)) \
            * alpha1(pa * (epsilon - 1j * (rt * x - vt * t)))
    val = (1.0 / a) * (lead + pa ** 2 * corr) / (4.0 * (2.0 * math.pi) ** 2)
    return ClosedForm(value=val, delta_transverse="kronecker")
