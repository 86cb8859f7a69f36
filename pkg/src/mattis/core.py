"""Model parameters, momentum lattices and the exactly solvable dispersion.

Everything lives on a square lattice with spacing a_tilde inside a box of
side L = l_over_a * a_tilde (l_over_a an odd integer), with two chiral
flavor indices r, s = +/-1.  Momenta are generated from exact integer (or
half-integer) lattice indices times the scale 2*pi/L, so the momentum-cutoff
indicator chi is computed exactly on lattice points.
"""

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ModelParams:
    """Couplings and geometry of the model.

    v_F       Fermi velocity (> 0)
    gamma1    intra-node coupling, |gamma1| < 1
    gamma2    inter-node coupling, |gamma2| < |1 + gamma1|
    a_tilde   lattice spacing (> 0)
    l_over_a  L / a_tilde, odd positive integer
    """

    v_F: float = 1.0
    gamma1: float = 0.0
    gamma2: float = 0.0
    a_tilde: float = 1.0
    l_over_a: int = 11

    # -- derived quantities -------------------------------------------------

    @property
    def L(self):
        return self.l_over_a * self.a_tilde

    @property
    def A(self):
        """A = 1 - (gamma2/(1+gamma1))^2, in (0, 1]."""
        return 1.0 - (self.gamma2 / (1.0 + self.gamma1)) ** 2

    @property
    def v_tilde(self):
        """Renormalized velocity v_F*sqrt(1-gamma1^2)."""
        return self.v_F * math.sqrt(1.0 - self.gamma1 ** 2)

    @property
    def B(self):
        """B = sqrt((1-gamma1)/(1+gamma1)) = v_F(1-gamma1)/v_tilde."""
        return math.sqrt((1.0 - self.gamma1) / (1.0 + self.gamma1))

    @property
    def K(self):
        """Anomalous-dimension exponent (sqrt(A)/B + B/sqrt(A))/2.

        Reduces to (B + 1/B)/2 when gamma2 = 0 (A = 1).
        """
        sA = math.sqrt(self.A)
        return 0.5 * (sA / self.B + self.B / sA)

    @property
    def dp(self):
        """Momentum-lattice scale 2*pi/L."""
        return 2.0 * math.pi / self.L

    @property
    def p_cut(self):
        """Momentum cutoff pi/a_tilde."""
        return math.pi / self.a_tilde

    def require_valid(self):
        errs = validate_params(self)
        if errs:
            raise ValueError("; ".join(errs))
        return self


def validate_params(params):
    """Return a list of constraint violations (empty list means valid)."""
    errs = []
    if not (params.v_F > 0.0 and math.isfinite(params.v_F)):
        errs.append("v_F must be positive and finite")
    if not abs(params.gamma1) < 1.0:
        errs.append("|gamma1| must be < 1")
    if not abs(params.gamma2) < abs(1.0 + params.gamma1):
        errs.append("|gamma2| must be < |1 + gamma1|")
    if not (params.a_tilde > 0.0 and math.isfinite(params.a_tilde)):
        errs.append("a_tilde must be positive and finite")
    lov = params.l_over_a
    if not (isinstance(lov, (int, np.integer)) and lov >= 1 and lov % 2 == 1):
        errs.append("l_over_a must be an odd integer >= 1")
    return errs


# -- index sets -------------------------------------------------------------
#
# With l = l_over_a odd, the half-open momentum window -pi/a <= p < pi/a
# corresponds to integer boson indices n in {-(l-1)/2, ..., (l-1)/2} (the
# endpoints n = +/- l/2 are never integers) and to fermion indices
# m + 1/2 with m in {-(l+1)/2, ..., (l-3)/2}, exactly l values each.
# Position-space 1D sites are x = a*j, j in {-(l-1)/2, ..., (l-1)/2}.


def boson_index_range(params):
    """Integer indices n with -pi/a <= (2 pi/L) n < pi/a."""
    h = (params.l_over_a - 1) // 2
    return np.arange(-h, h + 1)


def fermion_half_indices(params):
    """Half-integers m+1/2 with -pi/a <= (2 pi/L)(m+1/2) < pi/a."""
    l = params.l_over_a
    return np.arange(-(l + 1) // 2, (l - 3) // 2 + 1) + 0.5


def site_range(params):
    """Integer site indices j, x = a_tilde*j, covering [-L/2, L/2)."""
    return boson_index_range(params)


def chi(p_plus, p_minus, params):
    """Sharp cutoff indicator: 1 where both components lie in [-pi/a, pi/a).

    Works elementwise on arrays; exact on lattice momenta since the boundary
    is never hit there (l_over_a is odd).
    """
    pc = params.p_cut
    inside = ((p_plus >= -pc) & (p_plus < pc)
              & (p_minus >= -pc) & (p_minus < pc))
    return np.where(inside, 1.0, 0.0) if isinstance(inside, np.ndarray) \
        else (1.0 if inside else 0.0)


# -- dispersion -------------------------------------------------------------

_RAD_CLAMP = 1e-12  # relative clamp on the tiny negative radicand roundoff


def omega(s, p_plus, p_minus, params):
    """Boson dispersion omega_s(p), s = +/-1, elementwise on arrays.

    Inside the cutoff with gamma2*p_+*p_- != 0 both branches mix; otherwise
    the dispersion is the decoupled one v_F*sqrt(1-gamma1^2*chi)|p_s|.
    """
    p_plus = np.asarray(p_plus, dtype=float)
    p_minus = np.asarray(p_minus, dtype=float)
    ch = np.asarray(chi(p_plus, p_minus, params), dtype=float)
    prod = params.gamma2 * ch * p_plus * p_minus
    p2 = p_plus ** 2 + p_minus ** 2
    rad = p2 ** 2 - params.A * (2.0 * p_plus * p_minus) ** 2
    rad = np.where(rad > -_RAD_CLAMP * p2 ** 2, np.maximum(rad, 0.0), rad)
    mixed = params.v_tilde * np.sqrt(0.5 * (p2 + s * np.sqrt(rad)))
    ps = p_plus if s == 1 else p_minus
    free = params.v_F * np.sqrt(1.0 - params.gamma1 ** 2 * ch) * np.abs(ps)
    out = np.where(prod != 0.0, mixed, free)
    return float(out) if out.ndim == 0 else out


def omega_tilde(s, p_plus, p_minus, params):
    """Effective low-energy dispersion v_tilde*sqrt(A)*|p_s|."""
    ps = np.asarray(p_plus if s == 1 else p_minus, dtype=float)
    out = params.v_tilde * math.sqrt(params.A) * np.abs(ps)
    return float(out) if out.ndim == 0 else out


def g_angular(s, theta, A):
    """Angular factor g_s(theta): omega_s = v_tilde*|p|*g_s(theta).

    g_s = sqrt((1 + s*sqrt(1 - A sin^2 2theta))/2); note
    g_+ g_- = sqrt(A)|sin 2theta|/2 and g_+^2 + g_-^2 = 1.
    """
    w = np.sqrt(np.maximum(1.0 - A * np.sin(2.0 * np.asarray(theta)) ** 2, 0.0))
    out = np.sqrt(0.5 * (1.0 + s * w))
    return float(out) if out.ndim == 0 else out


def u_matrix(p_plus, p_minus, params):
    """Orthogonal 2x2 mixing matrix U_{s,s'}(p), rows/cols ordered (+, -).

    Identity when gamma2*chi*p_+*p_- = 0; otherwise a rotation built from
    cos(2 angle) = (p_+^2 - p_-^2)/sqrt(|p|^4 - A(2 p_+ p_-)^2), with the
    off-diagonal signs tied to the sign of gamma2*p_+*p_-.
    """
    ch = chi(p_plus, p_minus, params)
    prod = params.gamma2 * ch * p_plus * p_minus
    if prod == 0.0:
        return np.eye(2)
    p2 = p_plus ** 2 + p_minus ** 2
    rad = p2 ** 2 - params.A * (2.0 * p_plus * p_minus) ** 2
    c = (p_plus ** 2 - p_minus ** 2) / math.sqrt(rad)
    a = math.sqrt(max(0.5 * (1.0 + c), 0.0))
    b = math.sqrt(max(0.5 * (1.0 - c), 0.0))
    if prod > 0.0:
        return np.array([[a, -b], [b, a]])
    return np.array([[a, b], [-b, a]])


def v_coeff(s_prime, r, s, p_plus, p_minus, params):
    """Mode-expansion coefficient v^{s'}_{r,s}(p) of the fermion densities.

    Requires p_s != 0.  Returns a complex number; identically zero whenever
    the U-matrix entry vanishes (which also protects the p-axis points where
    omega_{s'} would vanish).
    """
    ps = p_plus if s == 1 else p_minus
    if ps == 0.0:
        raise ValueError("v_coeff requires p_s != 0")
    u = u_matrix(p_plus, p_minus, params)[_idx(s), _idx(s_prime)]
    if u == 0.0:
        return 0.0j
    ch = chi(p_plus, p_minus, params)
    om = omega(s_prime, p_plus, p_minus, params)
    vg = params.v_F * (1.0 - params.gamma1 * ch)
    return 1j * math.sqrt(1.0 / (8.0 * math.pi)) * u * (
        ps * math.sqrt(vg / om) + r * math.sqrt(om / vg))


def _idx(s):
    """Array index for a sign label: s=+1 -> 0, s=-1 -> 1."""
    return 0 if s == 1 else 1


def v_coeff_grid(s_prime, r, s, p_plus, p_minus, params):
    """Vectorized v^{s'}_{r,s}(p) over arrays of momenta (p_s != 0 assumed).

    Handles all U-matrix branches elementwise and returns exact zeros where
    the mixing-matrix entry vanishes.
    """
    p_plus = np.asarray(p_plus, dtype=float)
    p_minus = np.asarray(p_minus, dtype=float)
    ch = np.asarray(chi(p_plus, p_minus, params), dtype=float)
    prod = params.gamma2 * ch * p_plus * p_minus
    p2 = p_plus ** 2 + p_minus ** 2
    rad = p2 ** 2 - params.A * (2.0 * p_plus * p_minus) ** 2
    rad = np.where(rad > -_RAD_CLAMP * p2 ** 2, np.maximum(rad, 0.0), rad)
    with np.errstate(divide="ignore", invalid="ignore"):
        c = np.where(prod != 0.0,
                     (p_plus ** 2 - p_minus ** 2) / np.sqrt(rad), 0.0)
    a = np.sqrt(np.maximum(0.5 * (1.0 + c), 0.0))
    b = np.sqrt(np.maximum(0.5 * (1.0 - c), 0.0))
    # entry U_{s,s'} by branch
    if s_prime == s:
        u = np.where(prod != 0.0, a, 1.0)
    else:
        # off-diagonal: sign pattern [[a, -b], [b, a]] for prod > 0,
        # transposed signs for prod < 0, zero when decoupled
        sign = np.where(prod > 0.0, -float(s), float(s))
        u = np.where(prod != 0.0, sign * b, 0.0)
    om = omega(s_prime, p_plus, p_minus, params)
    vg = params.v_F * (1.0 - params.gamma1 * ch)
    ps = p_plus if s == 1 else p_minus
    with np.errstate(divide="ignore", invalid="ignore"):
        amp = ps * np.sqrt(vg / om) + r * np.sqrt(om / vg)
    val = 1j * math.sqrt(1.0 / (8.0 * math.pi)) * u * np.where(u != 0.0, amp, 0.0)
    return val


def ground_state_energy(params):
    """E0 = (1/2) sum_{s, p in hat-Lambda*_s} (omega_s(p) - v_F|p_s|).

    The summand vanishes identically outside the cutoff, so only the finite
    chi = 1 grid (minus the p_s = 0 line for each s) contributes.
    """
    n = boson_index_range(params)
    Np, Nm = np.meshgrid(n, n, indexing="ij")
    Pp = params.dp * Np
    Pm = params.dp * Nm
    total = 0.0
    for s in (1, -1):
        ps = Pp if s == 1 else Pm
        mask = ps != 0.0
        om = omega(s, Pp, Pm, params)
        total += 0.5 * np.sum((om - params.v_F * np.abs(ps))[mask])
    return float(total)
