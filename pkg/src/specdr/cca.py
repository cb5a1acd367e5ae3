"""Canonical correlation analysis, reduced to a PCA of ``M A^T B Q``."""
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NotSpd, SingularBlock
from .linalg import as_matrix, spd_factor
from .pca import pca_core


@dataclass(frozen=True)
class CcaResult:
    """Canonical variates ``Y_a = A U_a``, ``Y_b = B U_b`` and correlations ``lam``."""
    Y_a: np.ndarray
    Y_b: np.ndarray
    U_a: np.ndarray
    U_b: np.ndarray
    lam: np.ndarray


def _gram_factor(X, block):
    try:
        return spd_factor(X.T @ X)
    except NotSpd as exc:
        raise SingularBlock(block, str(exc)) from None


def _check_blocks(A, B):
    A, B = as_matrix(A, "A"), as_matrix(B, "B")
    if A.shape[0] != B.shape[0]:
        raise DimensionMismatch(f"blocks have {A.shape[0]} and {B.shape[0]} rows")
    n = A.shape[0]
    for name, X in (("a", A), ("b", B)):
        if X.shape[1] > n:
            raise SingularBlock(name, f"{X.shape[1]} columns for {n} items")
    return A, B


def _warn_uncentered(A, B):
    for name, X in (("a", A), ("b", B)):
        scale = np.max(np.abs(X))
        if scale > 0 and np.max(np.abs(X.mean(axis=0))) > 1e-8 * scale:
            warnings.warn(f"block {name} is not column-centered; canonical "
                          "correlations then refer to uncentered cosines",
                          stacklevel=3)


def _left_vectors(Y, sigma):
    """Unit left singular vectors ``Y / sigma``, completed where ``sigma`` is ~0."""
    n, k = Y.shape
    tol = 1e-12 * (sigma[0] if sigma.size else 0.0)
    good = sigma > tol
    W = np.zeros((n, k))
    W[:, good] = Y[:, good] / sigma[good]
    missing = np.flatnonzero(~good)
    if missing.size:
        known = W[:, good]
        Q, _ = np.linalg.qr(np.hstack([known, np.eye(n)]), mode="complete")
        W[:, missing] = Q[:, known.shape[1]:known.shape[1] + missing.size]
    return W


def cca(A, B, method=None):
    """Canonical correlation analysis of two blocks on the same items.

    Parameters
    ----------
    A : (n, p) array_like
    B : (n, q) array_like
        Columns are expected centered; a warning is emitted otherwise.
    method : PcaMethod or str, optional
        Backend for the decomposition of ``R = (A^T A)^-1/2 A^T B (B^T B)^-1/2``.

    Returns
    -------
    CcaResult
        ``lam`` holds the ``min(p, q)`` canonical correlations (or the first
        ``rank`` of them), in descending order.

    Raises
    ------
    SingularBlock
        When ``A^T A`` or ``B^T B`` is numerically singular.
    """
    A, B = _check_blocks(A, B)
    _warn_uncentered(A, B)
    swapped = B.shape[1] > A.shape[1]
    if swapped:
        A, B = B, A
    Ma = _gram_factor(A, "b" if swapped else "a")
    Mb = _gram_factor(B, "a" if swapped else "b")
    T = A.T @ B
    R = Mb.inv_sqrt_dot(Ma.inv_sqrt_dot(T).T).T
    res = pca_core(R, method)
    lam = np.sqrt(res.lam)
    W_a = _left_vectors(res.Y, lam)
    U_a = Ma.inv_sqrt_dot(W_a)
    U_b = Mb.inv_sqrt_dot(res.V)
    Y_a, Y_b = A @ U_a, B @ U_b
    if swapped:
        Y_a, Y_b, U_a, U_b = Y_b, Y_a, U_b, U_a
    return CcaResult(Y_a, Y_b, U_a, U_b, lam)


def canonical_projectors(A, B):
    """Orthogonal projectors onto the column spans of ``A`` and ``B``."""
    A, B = _check_blocks(A, B)
    out = []
    for name, X in (("a", A), ("b", B)):
        Z = _gram_factor(X, name).inv_sqrt_dot(X.T).T
        P = Z @ Z.T
        out.append(0.5 * (P + P.T))
    return tuple(out)
