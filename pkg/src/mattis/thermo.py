"""Free energy: oscillator-mode lattice sums, zero-mode theta sums and the
continuum (small-lattice-spacing) limit via split momentum integrals.

The total grand-canonical free energy splits as
    Omega = E0 + Omega_B (oscillator modes) + Omega_Q (zero modes),
with Omega_Q expressible exactly as a multidimensional theta sum that is
Gaussian-approximable with a rigorous, computable error bound.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from .core import (ModelParams, boson_index_range, chi, g_angular,
                   ground_state_energy, omega)

_TAIL_REL = 1e-16


# -- oscillator modes -------------------------------------------------------

def boson_free_energy(params, beta):
    """Omega_B = sum over both flavors and p in the punctured momentum set
    of (1/beta) ln(1 - exp(-beta omega_s(p))).

    The direction transverse to the flavor is bounded (l values); the other
    one is summed until the tail is below 1e-16 relative.  Returns 0 at
    beta = inf.
    """
    if math.isinf(beta):
        return 0.0
    l = params.l_over_a
    n = boson_index_range(params)
    Np, Nm = np.meshgrid(n, n, indexing="ij")
    Pp, Pm = params.dp * Np, params.dp * Nm
    total = 0.0
    for s in (1, -1):
        ns = Np if s == 1 else Nm
        om = omega(s, Pp, Pm, params)
        mask = ns != 0
        total += np.sum(np.log1p(-np.exp(-beta * om[mask]))) / beta
    # outside the cutoff the dispersion is exactly v_F|p_s|, independent of
    # the transverse component and the flavor: 2 flavors * l transverse
    # values * 2 signs
    h = (l - 1) // 2
    nstart = h + 1
    chunk = 256
    tail = 0.0
    while True:
        nn = np.arange(nstart, nstart + chunk)
        t = np.sum(np.log1p(-np.exp(-beta * params.v_F * params.dp * nn))) / beta
        tail += t
        nstart += chunk
        if abs(t) < _TAIL_REL * max(abs(total + 4 * l * tail), 1e-300):
            break
    return float(total + 4 * l * tail)


# -- zero modes -------------------------------------------------------------

@dataclass
class ThetaSumSpec:
    """Data of a theta sum Z = sum_{nu in Z^M} exp(-nu^T H nu + i m^T nu)."""

    H: np.ndarray
    m: np.ndarray

    @property
    def M(self):
        return self.H.shape[0]

    @property
    def lam(self):
        """Smallest eigenvalue of H^{-1} = 1/(largest eigenvalue of H)."""
        return 1.0 / np.linalg.eigvalsh(self.H)[-1]

    @property
    def mu(self):
        """max_k |(H^{-1} m)_k|."""
        if not np.any(self.m):
            return 0.0
        return float(np.abs(np.linalg.solve(self.H, self.m)).max())


@dataclass
class ThetaSumResult:
    value: float
    gaussian: float
    bound: float          # guaranteed bound on Z/J - 1 (when preconditions hold)
    lam: float
    mu: float
    preconditions_ok: bool


def zero_mode_quadratic_form(params, beta, m=None):
    """Theta-sum data for the zero-mode partition function at inverse
    temperature beta.

    Variables are the M = 4*l integer charges nu_{r,s}(x) ordered
    (s=+, r=+, x...), (s=+, r=-, x...), (s=-, r=+, x...), (s=-, r=-, x...).
    The optional phase vector m (same ordering) yields the generating
    function of zero-mode charge correlators.
    """
    if math.isinf(beta):
        raise ValueError("zero-mode theta sum needs finite beta")
    l = params.l_over_a
    g1, g2, A = params.gamma1, params.gamma2, params.A
    M = 4 * l
    pref = params.v_F * math.pi / params.L
    alpha = 0.5 * pref * ((1.0 + g1) * A + (1.0 - g1))
    bet = 0.5 * pref * ((1.0 + g1) * A - (1.0 - g1))
    H = np.zeros((M, M))
    for sblk in range(2):           # s = +, -
        base = 2 * l * sblk
        for x in range(l):
            i, j = base + x, base + l + x   # (r=+, x), (r=-, x)
            H[i, i] += alpha
            H[j, j] += alpha
            H[i, j] += bet
            H[j, i] += bet
    cpref = params.v_F * math.pi * params.a_tilde / params.L ** 2
    u_p = np.zeros(M)
    u_m = np.zeros(M)
    u_p[:2 * l] = 1.0
    u_m[2 * l:] = 1.0
    H += cpref * (g2 ** 2 / (2.0 * (1.0 + g1))) * (np.outer(u_p, u_p)
                                                   + np.outer(u_m, u_m))
    H += cpref * (g2 / 2.0) * (np.outer(u_p, u_m) + np.outer(u_m, u_p))
    H *= beta
    mvec = np.zeros(M) if m is None else np.asarray(m, dtype=float)
    return ThetaSumSpec(H=H, m=mvec)


def _gaussian_value(spec):
    sign, logdet = np.linalg.slogdet(spec.H)
    if sign <= 0:
        raise ValueError("H must be positive definite")
    logJ = 0.5 * (spec.M * math.log(math.pi) - logdet)
    if np.any(spec.m):
        logJ -= 0.25 * float(spec.m @ np.linalg.solve(spec.H, spec.m))
    return math.exp(logJ)


def theta_bound(spec):
    """Computable bound on Z/J - 1, valid when lam > 2/pi^2 and
    mu <= 2*pi*lam: per-dimension tail t = 2*sum_{n>=1}
    exp(-lam pi^2 n^2 + mu pi n), total (1+t)^M - 1."""
    lam, mu = spec.lam, spec.mu
    t, n = 0.0, 1
    while True:
        term = 2.0 * math.exp(-lam * math.pi ** 2 * n ** 2 + mu * math.pi * n)
        t += term
        n += 1
        if term < 1e-18 * max(t, 1e-300) or n > 10000:
            break
    return math.expm1(spec.M * math.log1p(t))


def theta_sum(spec, mode="exact"):
    """Evaluate the theta sum either by direct enumeration ('exact', small
    dimension only) or by its Gaussian integral approximation ('gaussian').

    The reported bound on Z/J - 1 is guaranteed only when the
    preconditions lam > 2/pi^2 and mu <= 2*pi*lam hold.
    """
    J = _gaussian_value(spec)
    lam, mu = spec.lam, spec.mu
    ok = lam > 2.0 / math.pi ** 2 and mu <= 2.0 * math.pi * lam
    bound = theta_bound(spec)
    if mode == "gaussian":
        return ThetaSumResult(value=J, gaussian=J, bound=bound, lam=lam,
                              mu=mu, preconditions_ok=ok)
    if mode != "exact":
        raise ValueError(f"unknown mode {mode!r}")
    M = spec.M
    nmax = max(2, int(math.ceil(math.sqrt(32.0 / np.diag(spec.H).min()))))
    prev = None
    while True:
        if (2 * nmax + 1) ** M > 2e7:
            raise ValueError("exact theta sum infeasible at this dimension")
        axes = [np.arange(-nmax, nmax + 1)] * M
        grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)
        pts = grid.reshape(-1, M).astype(float)
        expo = -np.einsum("ij,jk,ik->i", pts, spec.H, pts)
        if np.any(spec.m):
            val = float(np.sum(np.exp(expo) * np.cos(pts @ spec.m)))
        else:
            val = float(np.sum(np.exp(expo)))
        if prev is not None and abs(val - prev) <= 1e-14 * abs(val):
            break
        prev = val
        nmax *= 2
    return ThetaSumResult(value=val, gaussian=J, bound=bound, lam=lam,
                          mu=mu, preconditions_ok=ok)


def zero_mode_partition_exact(params, beta):
    """Exact zero-mode partition function by structured summation.

    The quadratic form couples different sites only through the per-flavor
    integer totals S_s = sum_x (nu_+ + nu_-); the sum therefore factorizes
    into an l-fold convolution of a per-site generating function followed
    by a double sum over (S_+, S_-).  Exact up to truncation tails kept
    below 1e-14 relative.
    """
    if math.isinf(beta):
        raise ValueError("needs finite beta")
    l = params.l_over_a
    g1, g2, A = params.gamma1, params.gamma2, params.A
    pref = beta * params.v_F * math.pi / params.L

    def phi(a, b):
        return pref * (0.5 * (1.0 + g1) * A * (a + b) ** 2
                       + 0.5 * (1.0 - g1) * (a - b) ** 2)

    qmin = pref * min((1.0 + g1) * A, 1.0 - g1)
    n1 = max(2, int(math.ceil(math.sqrt(40.0 / qmin))))
    aa = np.arange(-n1, n1 + 1)
    Ag, Bg = np.meshgrid(aa, aa, indexing="ij")
    w = (Ag + Bg).ravel()
    ph = phi(Ag, Bg).ravel()
    g = np.zeros(4 * n1 + 1)
    np.add.at(g, w + 2 * n1, np.exp(-ph))
    N = g.copy()
    for _ in range(l - 1):
        N = np.convolve(N, g)
    # N[k] multiplies total S = k - offset
    off = (len(N) - 1) // 2
    S = np.arange(len(N)) - off
    c1 = beta * params.v_F * math.pi * params.a_tilde / params.L ** 2 \
        * g2 ** 2 / (2.0 * (1.0 + g1))
    c2 = beta * params.v_F * math.pi * params.a_tilde / params.L ** 2 * g2
    Sp = S[:, None].astype(float)
    Sm = S[None, :].astype(float)
    # work in log space: the coupling alone may be indefinite (only the
    # combination with the convolution decay is positive definite)
    with np.errstate(divide="ignore"):
        logN = np.where(N > 0.0, np.log(np.maximum(N, 1e-300)), -np.inf)
    logW = logN[:, None] + logN[None, :] - c1 * (Sp ** 2 + Sm ** 2) \
        - c2 * Sp * Sm
    top = logW.max()
    return float(math.exp(top) * np.sum(np.exp(logW - top)))


def zero_mode_free_energy(params, beta, mode="closed"):
    """Omega_Q = -(1/beta) ln Z_Q.

    mode 'closed' uses the asymptotic closed form
        -(2L/(a beta)) ln(L/(beta v_tilde sqrt(A))) - ln(A)/(2 beta),
    'gaussian' the Gaussian integral of the theta sum, 'exact' the
    structured exact theta sum.  Returns 0 at beta = inf (the zero-mode
    ground state is the nu = 0 state with zero energy).
    """
    if math.isinf(beta):
        return 0.0
    if mode == "closed":
        x = params.L / (beta * params.v_tilde * math.sqrt(params.A))
        return (-2.0 * params.L / (params.a_tilde * beta) * math.log(x)
                - math.log(params.A) / (2.0 * beta))
    if mode == "gaussian":
        spec = zero_mode_quadratic_form(params, beta)
        return -math.log(_gaussian_value(spec)) / beta
    if mode == "exact":
        return -math.log(zero_mode_partition_exact(params, beta)) / beta
    raise ValueError(f"unknown mode {mode!r}")


def free_energy(params, beta, zq_mode="closed"):
    """Total free energy E0 + Omega_B + Omega_Q by lattice summation."""
    return (ground_state_energy(params)
            + boson_free_energy(params, beta)
            + zero_mode_free_energy(params, beta, mode=zq_mode))


# -- continuum limit --------------------------------------------------------

def qft_free_energy_density(params, beta):
    """Small-spacing limit of a_tilde*(Omega - E0)/L^2:
    -pi/(3 v_tilde sqrt(A) beta^2)."""
    return -math.pi / (3.0 * params.v_tilde * math.sqrt(params.A) * beta ** 2)


def _polylog3(w):
    """Li_3(w) for 0 <= w <= 1."""
    if w < 0.5:
        # plain series
        tot, n, term = 0.0, 1, w
        while True:
            tot += term / n ** 3
            n += 1
            term *= w
            if term / n ** 3 < 1e-18 * max(tot, 1e-300):
                return tot
    import mpmath
    return float(mpmath.fp.polylog(3, w))


def _radial_ln_integral(y):
    """I1(y) = int_0^y x ln(1-e^-x) dx
             = -zeta(3) + y Li2(e^-y) + Li3(e^-y)."""
    if y <= 0.0:
        return 0.0
    z3 = special.zeta(3.0)
    if y > 700.0:
        return -z3
    w = math.exp(-y)
    li2 = float(special.spence(1.0 - w))
    return -z3 + y * li2 + _polylog3(w)


@dataclass
class SplitFreeEnergy:
    less: float      # lim Omega_</L^2 (modes inside the cutoff square)
    greater: float   # lim Omega_>/L^2 (modes outside)

    @property
    def total(self):
        return self.less + self.greater


def free_energy_split(params, beta, epsrel=1e-10):
    """Thermodynamic-limit free energy density lim Omega/L^2 split into
    inside- and outside-cutoff contributions, via principal-value angular
    integrals over one symmetry wedge and exact radial polylog forms.
    """
    if math.isinf(beta):
        return SplitFreeEnergy(0.0, 0.0)
    A = params.A
    vt = params.v_tilde
    pc = params.p_cut

    def integrand(theta):
        tot = 0.0
        gp = g_angular(1, theta, A)
        gm = math.sqrt(A) * math.sin(theta) * math.cos(theta) / gp
        for g in (gp, gm):
            X = beta * vt * g * pc / math.cos(theta)
            tot += _radial_ln_integral(X) / g ** 2
        return tot

    val, _ = integrate.quad(integrand, 0.0, math.pi / 4.0,
                            epsabs=0.0, epsrel=epsrel, limit=200)
    less = 2.0 / (math.pi ** 2 * beta ** 3 * vt ** 2) * val
    y = beta * params.v_F * pc
    li2 = float(special.spence(1.0 - math.exp(-y))) if y < 700 else 0.0
    greater = -2.0 / (math.pi * params.a_tilde * beta ** 2 * params.v_F) * li2
    return SplitFreeEnergy(less=less, greater=greater)
