"""Exact diagonalization cross-check for the bosonization identities.

A single chiral fermion branch (chirality r = +/-1) on a ring of length L
has momenta k in (2*pi/L)(Z + 1/2), truncated to a window of n_modes
values around k = 0.  On the subspace of states whose deviations from the
filled Dirac sea stay away from the window edges, the density-operator
commutation relations, the Kronig energy identity and the boson canonical
commutators must hold to machine precision; this module builds the sparse
operators and measures the deviations.
"""

import itertools
import math

import numpy as np
from scipy import sparse


class TruncatedChiralSpace:
    """Fixed-charge sector of a truncated chiral fermion branch.

    Modes i = 0..n_modes-1 carry momentum k_i = (2 pi / L)(i - n_modes/2
    + 1/2).  The Dirac sea fills every mode with r*k < 0; the basis is all
    occupations with sea particle number + charge particles (bitmask per
    state, bit i = mode i occupied).
    """

    def __init__(self, r, n_modes, L=2.0 * math.pi, charge=0):
        if r not in (1, -1):
            raise ValueError("r must be +-1")
        if n_modes % 2 != 0 or n_modes < 4:
            raise ValueError("n_modes must be even and >= 4")
        self.r = r
        self.n_modes = n_modes
        self.L = L
        self.dk = 2.0 * math.pi / L
        self.k = self.dk * (np.arange(n_modes) - n_modes / 2 + 0.5)
        self.sea = np.array([r * k < 0 for k in self.k])
        n_part = int(self.sea.sum()) + charge
        if not 0 <= n_part <= n_modes:
            raise ValueError("charge outside the truncated window")
        self.basis = [sum(1 << i for i in occ)
                      for occ in itertools.combinations(range(n_modes), n_part)]
        self.index = {b: i for i, b in enumerate(self.basis)}
        self.dim = len(self.basis)
        self.sea_mask = sum(1 << i for i in range(n_modes) if self.sea[i])

    def _hop(self, state, a, b):
        """Apply c^dag(a) c(b); returns (new_state, sign) or None.
        Jordan-Wigner sign: (-1)^(occupied modes below the acted one)."""
        if not (state >> b) & 1:
            return None
        sign = 1 - 2 * (bin(state & ((1 << b) - 1)).count("1") & 1)
        state ^= 1 << b
        if (state >> a) & 1:
            return None
        sign *= 1 - 2 * (bin(state & ((1 << a) - 1)).count("1") & 1)
        return state ^ (1 << a), sign

    def density(self, n):
        """Momentum-space density j(p) at p = n*dk (integer n): the sum of
        c^dag(k - p) c(k) over modes with both k and k - p in the window;
        at n = 0 the normal-ordered charge N - N_sea."""
        nm = self.n_modes
        if n == 0:
            diag = [bin(b).count("1") - int(self.sea.sum())
                    for b in self.basis]
            return sparse.diags(np.array(diag, dtype=float)).tocsr()
        rows, cols, vals = [], [], []
        for j, state in enumerate(self.basis):
            for ib in range(nm):
                ia = ib - n
                if not 0 <= ia < nm:
                    continue
                hop = self._hop(state, ia, ib)
                if hop is None:
                    continue
                new, sign = hop
                rows.append(self.index[new])
                cols.append(j)
                vals.append(float(sign))
        return sparse.csr_matrix((vals, (rows, cols)),
                                 shape=(self.dim, self.dim))

    def hamiltonian(self):
        """H0 = sum_k r k :c^dag(k) c(k): (diagonal, sea-subtracted)."""
        diag = np.empty(self.dim)
        for j, state in enumerate(self.basis):
            e = 0.0
            for i in range(self.n_modes):
                occ = (state >> i) & 1
                e += self.r * self.k[i] * (occ - int(self.sea[i]))
            diag[j] = e
        return sparse.diags(diag).tocsr()

    def boson(self, n):
        """Annihilation operator b(p) at p = n*dk > 0, built from the
        chirality-resolved density: b(p) = -i sqrt(2 pi/(L p)) j(r*p)."""
        if n <= 0:
            raise ValueError("boson modes are labelled by n > 0")
        p = n * self.dk
        return -1j * math.sqrt(2.0 * math.pi / (self.L * p)) \
            * self.density(self.r * n)

    def low_sector(self, margin):
        """Indices of basis states that keep every mode within `margin` of
        either window edge in its sea configuration."""
        nm = self.n_modes
        edge = 0
        for i in range(nm):
            if i < margin or i >= nm - margin:
                edge |= 1 << i
        sea_edge = self.sea_mask & edge
        return [j for j, b in enumerate(self.basis)
                if (b & edge) == sea_edge]


def _max_dev(op, cols):
    sub = op.tocsc()[:, cols]
    return 0.0 if sub.nnz == 0 else float(np.abs(sub.data).max())


def check_density_commutator(space, n_cut, margin=None):
    """Max deviation of [j(p), j(p')] - r*(L p / 2 pi) delta_{p+p',0} on
    the low sector, over |n|, |n'| <= n_cut."""
    if margin is None:
        margin = 2 * n_cut
    cols = space.low_sector(margin)
    eye = sparse.identity(space.dim, format="csr")
    dens = {n: space.density(n)
            for n in range(-n_cut, n_cut + 1) if n != 0}
    dens[0] = space.density(0)
    worst = 0.0
    for n1 in range(-n_cut, n_cut + 1):
        for n2 in range(-n_cut, n_cut + 1):
            comm = dens[n1] @ dens[n2] - dens[n2] @ dens[n1]
            if n1 + n2 == 0:
                comm = comm - space.r * n1 * eye
            worst = max(worst, _max_dev(comm, cols))
    return worst


def check_kronig(space, n_cut, margin=None):
    """Max deviation, on the low sector, of the quadratic density formula
    for the kinetic energy:
    H0 = (pi/L) [ j(0)^2 + 2 sum_{0 < r p <= K_cut} j(-p) j(p) ].

    The p-sum must cover every particle-hole distance available in the low
    sector, so the default margin shrinks the free inner region to
    n_cut + 1 modes."""
    if margin is None:
        margin = max(n_cut, -((n_cut + 1 - space.n_modes) // 2))
    cols = space.low_sector(margin)
    j0 = space.density(0)
    rhs = j0 @ j0
    for n in range(1, n_cut + 1):
        jp = space.density(space.r * n)
        jm = space.density(-space.r * n)
        rhs = rhs + 2.0 * (jm @ jp)
    rhs = (math.pi / space.L) * rhs
    return _max_dev(space.hamiltonian() - rhs, cols)


def check_boson_annihilates_sea(space, n_cut):
    """Max |b(p) |sea>| over 0 < n <= n_cut (exactly zero: the sea has no
    excitations for the lowering density to remove)."""
    vec = np.zeros(space.dim, dtype=complex)
    vec[space.index[space.sea_mask]] = 1.0
    worst = 0.0
    for n in range(1, n_cut + 1):
        worst = max(worst, float(np.abs(space.boson(n) @ vec).max()))
    return worst


def check_boson_ccr(space, n_cut, margin=None):
    """Max deviation of [b(p), b^dag(p')] = delta_{pp'} and
    [b(p), b(p')] = 0 on the low sector, over 0 < n, n' <= n_cut."""
    if margin is None:
        margin = 2 * n_cut
    cols = space.low_sector(margin)
    eye = sparse.identity(space.dim, format="csr", dtype=complex)
    bs = {n: space.boson(n) for n in range(1, n_cut + 1)}
    worst = 0.0
    for n1 in range(1, n_cut + 1):
        for n2 in range(1, n_cut + 1):
            bd = bs[n2].conj().T.tocsr()
            comm = bs[n1] @ bd - bd @ bs[n1]
            if n1 == n2:
                comm = comm - eye
            worst = max(worst, _max_dev(comm, cols))
            comm2 = bs[n1] @ bs[n2] - bs[n2] @ bs[n1]
            worst = max(worst, _max_dev(comm2, cols))
    return worst
