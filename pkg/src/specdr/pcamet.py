"""PCA under SPD inner products on the row and column spaces.

A metric ``N`` on ``R^n`` and ``P`` on ``R^p`` turn the problem into a plain
PCA of ``B = M A Q`` with ``M = N^(1/2)`` and ``Q = P^(1/2)``; results are
transported back with ``M^-1`` and ``Q^-1``.
"""
import numpy as np

from .errors import DimensionMismatch
from .linalg import SpdFactor, as_matrix, spd_factor
from .pca import PcaResult, pca_core


def as_metric(metric, dim):
    """Coerce ``None`` (identity), weights, a matrix or an :class:`SpdFactor`."""
    if metric is None:
        return SpdFactor.identity(dim)
    if not isinstance(metric, SpdFactor):
        metric = spd_factor(metric)
    if metric.dim != dim:
        raise DimensionMismatch(f"metric of size {metric.dim}, expected {dim}")
    return metric


def transport(A, N, P):
    """``M A Q``: the image of ``A`` under the metric isometry."""
    return P.sqrt_dot(N.sqrt_dot(A).T).T


def pca_met(A, N=None, P=None, method=None):
    """PCA of ``A`` with metric ``N`` on rows and ``P`` on columns.

    Parameters
    ----------
    A : (n, p) array_like
    N, P : SpdFactor, weights, SPD matrix or None
        ``None`` means the identity.
    method : PcaMethod or str, optional

    Returns
    -------
    PcaResult
        ``Y = M^-1 W`` and ``V = Q^-1 X`` where ``(W, lam, X)`` is the PCA of
        ``M A Q``. ``V`` is ``P``-orthonormal. ``total_inertia`` is
        ``||M A Q||^2`` and ``row_inertia`` holds ``||a_i||_P^2``.
    """
    A = as_matrix(A)
    n, p = A.shape
    N, P = as_metric(N, n), as_metric(P, p)
    B = transport(A, N, P)
    res = pca_core(B, method)
    Y = N.inv_sqrt_dot(res.Y)
    V = P.inv_sqrt_dot(res.V)
    AQ = P.sqrt_dot(A.T).T
    row_inertia = np.einsum("ij,ij->i", AQ, AQ)
    return PcaResult(Y, res.lam, V, res.total_inertia, row_inertia, res.method)


def weighted_center(A, row_weights):
    """Translate rows to their weighted barycenter ``g = sum(w_i a_i) / sum(w)``."""
    A = as_matrix(A)
    w = np.asarray(row_weights, dtype=np.float64)
    if w.shape != (A.shape[0],):
        raise DimensionMismatch(f"{w.size} weights for {A.shape[0]} rows")
    if not np.all(w > 0):
        raise ValueError("row weights must be strictly positive")
    g = (w @ A) / w.sum()
    return A - g, g


def transport_norm(A, N=None, P=None):
    """Frobenius norm of ``M A Q``, the norm of ``A`` for the metric ``N (x) P``."""
    A = as_matrix(A)
    n, p = A.shape
    return float(np.linalg.norm(transport(A, as_metric(N, n), as_metric(P, p))))
