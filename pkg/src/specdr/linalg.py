"""Dense spectral kernels shared by every method.

Symmetric EVD, exact SVD, QR orthonormalization, Gaussian-sketch randomized
SVD and SPD square roots. Results follow one deterministic sign convention:
each eigen/singular vector is flipped so that its entry of largest magnitude
is positive (ties go to the lowest index). For SVD pairs the right vector
(the principal axis) decides and the left vector follows.
"""
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from . import kernels
from .errors import (BadRank, DimensionMismatch, NonFinite, NonSymmetric,
                     NotSpd, RankDeficient)

SYMMETRY_TOL = 1e-10
SPD_TOL = 1e-12
RANK_TOL = 1e-12
DEFAULT_OVERSAMPLING = 5
_UINT64_MAX = 2 ** 64 - 1


def as_matrix(A, name="A"):
    """Validate ``A`` as a finite, non-empty 2-D float array."""
    A = np.asarray(A, dtype=np.float64)
    if A.ndim != 2:
        raise DimensionMismatch(f"{name} must be 2-D, got shape {A.shape}")
    if A.shape[0] < 1 or A.shape[1] < 1:
        raise DimensionMismatch(f"{name} is empty: shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise NonFinite(f"{name} contains NaN or Inf")
    return A


def check_symmetric(C, name="C", tol=SYMMETRY_TOL, exc=NonSymmetric):
    scale = np.max(np.abs(C)) if C.size else 0.0
    if C.shape[0] != C.shape[1]:
        raise exc(f"{name} must be square, got shape {C.shape}")
    if scale > 0 and np.max(np.abs(C - C.T)) > tol * scale:
        raise exc(f"{name} is not symmetric within {tol:g} relative")


def fix_signs(V, *others):
    """Flip columns of ``V`` (and matching columns of ``others``) in place."""
    if V.shape[0] == 0:
        return
    idx = np.argmax(np.abs(V), axis=0)
    flip = V[idx, np.arange(V.shape[1])] < 0
    if np.any(flip):
        V[:, flip] *= -1.0
        for W in others:
            W[:, flip] *= -1.0


@dataclass(frozen=True)
class SvdResult:
    """Thin SVD ``A ~ U @ diag(sigma) @ V.T`` with orthonormal ``U`` and ``V``."""
    U: np.ndarray
    sigma: np.ndarray
    V: np.ndarray

    @property
    def rank(self):
        return self.sigma.shape[0]

    def reconstruct(self):
        return (self.U * self.sigma) @ self.V.T


def sym_evd(C):
    """Eigen-decomposition of a symmetric matrix, eigenvalues descending.

    Returns
    -------
    lam : (p,) array
        Eigenvalues sorted in descending order; ties keep LAPACK's order.
    V : (p, p) array
        Orthonormal eigenvectors in columns, sign-normalized.
    """
    C = as_matrix(C, "C")
    check_symmetric(C)
    lam, V = np.linalg.eigh(C)
    order = np.argsort(-lam, kind="stable")
    lam = lam[order]
    V = np.ascontiguousarray(V[:, order])
    fix_signs(V)
    return lam, V


def svd_exact(A):
    """Thin SVD with ``k = min(n, p)`` triplets."""
    A = as_matrix(A)
    U, s, Vt = np.linalg.svd(A, full_matrices=False)
    V = np.ascontiguousarray(Vt.T)
    U = np.ascontiguousarray(U)
    fix_signs(V, U)
    return SvdResult(U, s, V)


def qr_orthonormalize(Y, drop_deficient=False):
    """Orthonormal basis of the column span of ``Y``.

    With ``drop_deficient=False`` every column must be independent and the
    result has as many columns as ``Y``. With ``drop_deficient=True`` a
    column-pivoted QR is used and only the numerically independent leading
    directions are kept; the result may then be narrower than ``Y``.

    Raises
    ------
    RankDeficient
        If a diagonal entry of ``R`` falls below ``1e-12 * max|R_ii|`` (strict
        mode), or if no direction survives (``Y`` is zero).
    """
    Y = as_matrix(Y, "Y")
    n, k = Y.shape
    if k > n:
        raise DimensionMismatch(f"cannot orthonormalize {k} columns in R^{n}")
    if drop_deficient:
        Q, R, _ = scipy.linalg.qr(Y, mode="economic", pivoting=True)
        diag = np.abs(np.diag(R))
        top = diag[0] if diag.size else 0.0
        if top == 0.0:
            raise RankDeficient("sketch has no column span")
        keep = int(np.sum(diag > RANK_TOL * top))
        return np.ascontiguousarray(Q[:, :keep])
    Q, R = np.linalg.qr(Y)
    diag = np.abs(np.diag(R))
    top = diag.max()
    if top == 0.0 or np.any(diag <= RANK_TOL * top):
        bad = int(np.argmin(diag))
        raise RankDeficient(f"column {bad} is (numerically) dependent on the previous ones")
    return Q


def _check_seed(seed):
    seed = int(seed)
    if not 0 <= seed <= _UINT64_MAX:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return seed


def gaussian_sketch(p, k_prime, seed):
    """``p x k_prime`` matrix of i.i.d. N(0, 1) draws, filled row-major.

    Draws come from SplitMix64 (counter form, starting at ``seed``) turned into
    normals by the Box-Muller transform on consecutive pairs.
    """
    if p < 1 or k_prime < 1:
        raise DimensionMismatch(f"sketch shape must be positive, got ({p}, {k_prime})")
    draws = kernels.gaussian_fill(p * k_prime, _check_seed(seed))
    return np.asarray(draws).reshape(p, k_prime)


def svd_grp(A, k, oversampling=DEFAULT_OVERSAMPLING, seed=0, power_iterations=0):
    """Randomized SVD by Gaussian random projection.

    Parameters
    ----------
    A : (n, p) array_like
    k : int
        Number of singular triplets to return.
    oversampling : int
        Extra sketch columns; the sketch width is ``min(k + oversampling,
        min(n, p))``.
    seed : int
        Seed of the sketch generator. A fixed seed gives identical results.
    power_iterations : int
        Subspace iterations ``(A A^T)^q A Omega`` before orthonormalization.
        Off by default.

    Returns
    -------
    SvdResult
        ``U`` is ``n x k``, ``V`` is ``p x k``.
    """
    A = as_matrix(A)
    n, p = A.shape
    k = int(k)
    if not 1 <= k <= min(n, p):
        raise BadRank(f"rank k={k} outside [1, {min(n, p)}]")
    if oversampling < 0:
        raise BadRank(f"oversampling must be >= 0, got {oversampling}")
    width = min(k + int(oversampling), min(n, p))
    omega = gaussian_sketch(p, width, seed)
    Q = qr_orthonormalize(A @ omega, drop_deficient=True)
    for _ in range(int(power_iterations)):
        Z = qr_orthonormalize(A.T @ Q, drop_deficient=True)
        Q = qr_orthonormalize(A @ Z, drop_deficient=True)
    if Q.shape[1] < k:
        raise RankDeficient(
            f"sketch spans only {Q.shape[1]} directions, fewer than k={k}")
    small = svd_exact(Q.T @ A)
    U = Q @ small.U[:, :k]
    return SvdResult(U, small.sigma[:k].copy(), np.ascontiguousarray(small.V[:, :k]))


@dataclass(frozen=True)
class SpdFactor:
    """SPD matrix with its SPD square root and inverse square root.

    Diagonal metrics keep only their diagonals (``diag`` is set and the dense
    attributes are built lazily on request).
    """
    dim: int
    diag: np.ndarray = None
    _matrix: np.ndarray = None
    _sqrt: np.ndarray = None
    _inv_sqrt: np.ndarray = None

    @classmethod
    def identity(cls, dim):
        return cls(dim, diag=np.ones(dim))

    @property
    def is_diagonal(self):
        return self.diag is not None

    @property
    def matrix(self):
        return np.diag(self.diag) if self.is_diagonal else self._matrix

    @property
    def sqrt(self):
        return np.diag(np.sqrt(self.diag)) if self.is_diagonal else self._sqrt

    @property
    def inv_sqrt(self):
        return np.diag(1.0 / np.sqrt(self.diag)) if self.is_diagonal else self._inv_sqrt

    def _left(self, dense, vec, X):
        X = np.asarray(X, dtype=np.float64)
        if X.shape[0] != self.dim:
            raise DimensionMismatch(
                f"metric of size {self.dim} applied to {X.shape[0]} rows")
        if self.is_diagonal:
            return vec.reshape((-1,) + (1,) * (X.ndim - 1)) * X
        return dense @ X

    def dot(self, X):
        """``matrix @ X``."""
        return self._left(self._matrix, self.diag, X)

    def sqrt_dot(self, X):
        """``sqrt @ X``."""
        vec = None if self.diag is None else np.sqrt(self.diag)
        return self._left(self._sqrt, vec, X)

    def inv_sqrt_dot(self, X):
        """``inv_sqrt @ X``."""
        vec = None if self.diag is None else 1.0 / np.sqrt(self.diag)
        return self._left(self._inv_sqrt, vec, X)


def spd_factor(P):
    """Factor an SPD metric.

    ``P`` may be a square matrix or a 1-D vector of positive weights (taken as
    a diagonal metric). Diagonal inputs use entrywise square roots.

    Raises
    ------
    NotSpd
        If an eigenvalue is not above ``1e-12`` times the largest one.
    """
    P = np.asarray(P, dtype=np.float64)
    if P.ndim == 1:
        w = P
    else:
        P = as_matrix(P, "metric")
        check_symmetric(P, "metric")
        off = P - np.diag(np.diag(P))
        w = np.diag(P).copy() if not np.any(off) else None
    if w is not None:
        if w.size < 1 or not np.all(np.isfinite(w)):
            raise NonFinite("metric weights must be finite and non-empty")
        top = w.max()
        if top <= 0 or np.any(w <= SPD_TOL * top):
            raise NotSpd(f"diagonal metric has a weight <= {SPD_TOL:g} x max")
        return SpdFactor(w.size, diag=np.array(w, dtype=np.float64))
    lam, V = np.linalg.eigh(P)
    top = lam[-1]
    if top <= 0 or lam[0] <= SPD_TOL * top:
        raise NotSpd(f"metric has eigenvalue {lam[0]:.3e} <= {SPD_TOL:g} x {top:.3e}")
    root = np.sqrt(lam)
    sq = (V * root) @ V.T
    isq = (V / root) @ V.T
    return SpdFactor(P.shape[0], _matrix=P.copy(),
                     _sqrt=0.5 * (sq + sq.T), _inv_sqrt=0.5 * (isq + isq.T))
