"""Generic diagonalization of quadratic boson Hamiltonians.

h = P^T A P + Z^T B Z + Z^T K + K^T Z with [Z, P] canonical; the spectrum
is obtained from C = A^{1/2} B A^{1/2} without assuming any special
structure, which makes this an independent oracle for the closed-form
dispersion of the model.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .core import ModelParams, chi, omega  # noqa: F401  (omega used in tests)

_SYM_TOL = 1e-12


@dataclass
class QuadraticForm:
    """Coefficient data (A, B symmetric; B positive definite; K a vector)."""

    A: np.ndarray
    B: np.ndarray
    K: np.ndarray

    def __post_init__(self):
        self.A = np.atleast_2d(np.asarray(self.A, dtype=float))
        self.B = np.atleast_2d(np.asarray(self.B, dtype=float))
        self.K = np.atleast_1d(np.asarray(self.K, dtype=float))
        for name, M in (("A", self.A), ("B", self.B)):
            scale = max(np.abs(M).max(), 1.0)
            if np.abs(M - M.T).max() > _SYM_TOL * scale:
                raise ValueError(f"{name} must be symmetric")
        if np.linalg.eigvalsh(self.B).min() <= 0.0:
            raise ValueError("B must be positive definite")
        if np.linalg.eigvalsh(self.A).min() < 0.0:
            raise ValueError("A must be positive semi-definite")


@dataclass
class DiagResult:
    lam: np.ndarray           # normal-mode frequencies, descending
    U: np.ndarray             # orthogonal eigenvector matrix of C (columns)
    ground_shift: float       # -K^T B^{-1} K
    shift: np.ndarray         # B^{-1} K (coordinate shift removing K)
    mu: np.ndarray = field(default=None)  # squeezing parameters, if lambda0 given


def diagonalize(form, lambda0=None):
    """Diagonalize the quadratic form; frequencies are sqrt(eig(A^1/2 B A^1/2)).

    Conventions: lam sorted descending; each eigenvector column is signed so
    its largest-magnitude entry is positive.  When lambda0 (the decoupled
    frequencies, matching the sorted order) is given, the squeezing
    parameters tanh(mu) = (lam - lambda0)/(lam + lambda0) are returned too.
    """
    A, B, K = form.A, form.B, form.K
    ea, Va = np.linalg.eigh(A)
    Asqrt = (Va * np.sqrt(np.maximum(ea, 0.0))) @ Va.T
    C = Asqrt @ B @ Asqrt
    lam2, U = np.linalg.eigh(C)
    lam = np.sqrt(np.maximum(lam2, 0.0))
    order = np.argsort(-lam, kind="stable")
    lam = lam[order]
    U = U[:, order]
    for j in range(U.shape[1]):
        k = np.argmax(np.abs(U[:, j]))
        if U[k, j] < 0.0:
            U[:, j] = -U[:, j]
    shift = np.linalg.solve(B, K)
    ground_shift = -float(K @ shift)
    mu = None
    if lambda0 is not None:
        lambda0 = np.asarray(lambda0, dtype=float)
        mu = np.arctanh((lam - lambda0) / (lam + lambda0))
    return DiagResult(lam=lam, U=U, ground_shift=ground_shift,
                      shift=shift, mu=mu)


def mattis_block(p_plus, p_minus, params):
    """Quadratic-form block of the model at momentum p (in units v_F = 1).

    Off the axes this is the 2x2 block coupling the two flavors s = +/-;
    on an axis (one component zero) it degenerates to the 1x1 block of the
    nonzero component, whose K coefficient magnitude gamma2*|p_s|*chi is
    recorded (the zero-mode charge it multiplies is factored out).

    Returns (QuadraticForm, lambda0) with lambda0 the decoupled frequencies
    |p_s| ordered (+, -) [or the single |p_s| on an axis], so that
    v_F * diagonalize(...).lam reproduces the dispersion.
    """
    if p_plus == 0.0 and p_minus == 0.0:
        raise ValueError("mattis_block needs p != 0")
    g1, g2 = params.gamma1, params.gamma2
    ch = chi(p_plus, p_minus, params)
    if p_plus == 0.0 or p_minus == 0.0:
        ps = p_plus if p_plus != 0.0 else p_minus
        A = [[1.0 - g1 * ch]]
        B = [[(1.0 + g1 * ch) * ps ** 2]]
        K = [abs(g2 * ps * ch)]
        return QuadraticForm(A, B, K), np.array([abs(ps)])
    pvec = np.array([p_plus, p_minus])
    A = (1.0 - g1 * ch) * np.eye(2)
    B = ((1.0 + g1 * ch) * np.eye(2)
         + g2 * ch * np.array([[0.0, 1.0], [1.0, 0.0]]))
    B = B * np.outer(pvec, pvec)
    K = np.zeros(2)
    lam0 = np.abs(pvec)
    if lam0[0] < lam0[1]:
        lam0 = lam0[::-1]
    return QuadraticForm(A, B, K), lam0
