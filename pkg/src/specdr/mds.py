"""Classical (Torgerson) multidimensional scaling."""
import warnings
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import (AsymmetricInput, BadRank, DimensionMismatch,
                     NegativeEntry, NonzeroDiagonal)
from .linalg import as_matrix, check_symmetric, svd_exact, svd_grp, sym_evd
from .pca import as_method

NEGATIVE_TOL = 1e-8


def check_distance_matrix(D):
    D = as_matrix(D, "D")
    check_symmetric(D, "D", exc=AsymmetricInput)
    if np.any(D < 0):
        i, j = np.argwhere(D < 0)[0]
        raise NegativeEntry(f"negative dissimilarity {D[i, j]:g} at ({i}, {j})")
    scale = np.max(D)
    if np.any(np.abs(np.diag(D)) > 1e-12 * max(scale, 1.0)):
        raise NonzeroDiagonal("distance matrix must have a zero diagonal")
    return D


def pairwise_distances(X):
    """Euclidean distances between the rows of ``X``."""
    X = as_matrix(X, "X")
    sq = np.asarray(kernels.pairwise_sq_dists(X))
    np.fill_diagonal(sq, 0.0)
    return np.sqrt(np.maximum(sq, 0.0))


def gram_from_distances(D):
    """Gram matrix of a centered cloud realizing the distances ``D``.

    ``g_ij = -1/2 (d_ij^2 - d_i.^2 - d_.j^2 + d_..^2)`` with row, column and
    grand means of the squared distances.
    """
    D = check_distance_matrix(D)
    G = np.asarray(kernels.double_center_sq(D))
    return 0.5 * (G + G.T)


@dataclass(frozen=True)
class MdsResult:
    """Embedding ``X`` (n x r') and the signed spectrum of the Gram matrix.

    ``lam`` lists every computed eigenvalue in descending order, negative ones
    included; ``n_negative`` counts those below ``-1e-8 * max(lam)`` and
    ``negative_mass`` is their share of ``sum(|lam|)``.
    """
    X: np.ndarray
    lam: np.ndarray
    n_negative: int
    negative_mass: float


def _signed_spectrum(G, method, r):
    if method.kind == "evd":
        return sym_evd(G)
    if method.kind == "svd":
        res = svd_exact(G)
    else:
        res = svd_grp(G, method.rank or r, method.oversampling, method.seed,
                      method.power_iterations)
    # SVD returns magnitudes; eigenvalue signs come from Rayleigh quotients
    signs = np.sign(np.einsum("ij,ij->j", res.U, G @ res.U))
    signs[signs == 0] = 1.0
    lam = res.sigma * signs
    order = np.argsort(-lam, kind="stable")
    return lam[order], res.U[:, order]


def mds(D, r, method="evd"):
    """Classical MDS of a dissimilarity matrix at dimension ``r``.

    Axes with negative eigenvalues are dropped; eigenvalues in the band
    ``[-1e-8 * max, 0]`` are treated as zero. When fewer than ``r``
    non-negative eigenvalues exist, fewer columns are returned and a warning
    is issued.
    """
    G = gram_from_distances(D)
    n = G.shape[0]
    r = int(r)
    if not 1 <= r < n:
        raise BadRank(f"embedding dimension r={r} outside [1, {n - 1}]")
    method = as_method(method)
    lam, U = _signed_spectrum(G, method, r)

    top = max(lam.max(), 0.0)
    negative = lam < -NEGATIVE_TOL * top
    total = np.abs(lam).sum()
    mass = float(np.abs(lam[negative]).sum() / total) if total > 0 else 0.0
    keep = np.flatnonzero(~negative)
    if keep.size < r:
        warnings.warn(f"only {keep.size} non-negative eigenvalues; "
                      f"returning {keep.size} of the {r} requested axes", stacklevel=2)
    keep = keep[:r]
    X = U[:, keep] * np.sqrt(np.maximum(lam[keep], 0.0))
    return MdsResult(X, lam, int(negative.sum()), mass)


def embedding_stress(D, X):
    """``||D - dist(X)||_F / ||D||_F``: 0 for an exact embedding, 1 for ``X = 0``."""
    D = as_matrix(D, "D")
    X = as_matrix(X, "X")
    if X.shape[0] != D.shape[0]:
        raise DimensionMismatch(f"{X.shape[0]} points for a {D.shape[0]}-point distance matrix")
    norm = np.linalg.norm(D)
    diff = np.linalg.norm(D - pairwise_distances(X))
    if norm == 0:
        return 0.0 if diff == 0 else float("inf")
    return float(diff / norm)
