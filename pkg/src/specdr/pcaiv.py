"""PCA with instrumental variables.

Components are constrained to a subspace ``E`` of the row space and axes to a
subspace ``F`` of the column space; the analysis is the PCA of the projection
of ``A`` onto ``E (x) F``.
"""
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, RankDeficient
from .linalg import SpdFactor, as_matrix, qr_orthonormalize
from .pca import PcaResult, pca_core
from .pcamet import pca_met


@dataclass(frozen=True)
class Subspace:
    """Span of the columns of ``basis`` in ``R^ambient_dim``."""
    basis: np.ndarray
    orthonormal: bool = False

    def __post_init__(self):
        B = as_matrix(self.basis, "basis")
        object.__setattr__(self, "basis", B)
        if self.orthonormal:
            G = B.T @ B
            if np.max(np.abs(G - np.eye(B.shape[1]))) > 1e-10:
                raise RankDeficient("basis flagged orthonormal but B^T B != I")

    @property
    def ambient_dim(self):
        return self.basis.shape[0]

    @property
    def dim(self):
        return self.basis.shape[1]

    @classmethod
    def full(cls, n):
        return cls(np.eye(n), orthonormal=True)

    def orthonormal_basis(self):
        if self.orthonormal:
            return self.basis
        return qr_orthonormalize(self.basis)


def _as_subspace(S):
    if S is None or isinstance(S, Subspace):
        return S
    return Subspace(S)


def projector(S):
    """Orthogonal projector onto ``S`` (ambient x ambient, symmetric, idempotent)."""
    U = _as_subspace(S).orthonormal_basis()
    P = U @ U.T
    return 0.5 * (P + P.T)


def metric_orthonormal_basis(S, metric):
    """Basis of ``S`` orthonormal for the inner product of ``metric``.

    The basis is transported by ``sqrt(metric)``, orthonormalized by QR and
    transported back.
    """
    S = _as_subspace(S)
    if metric.dim != S.ambient_dim:
        raise DimensionMismatch(
            f"metric of size {metric.dim} for a subspace of R^{S.ambient_dim}")
    Q = qr_orthonormalize(metric.sqrt_dot(S.basis))
    return metric.inv_sqrt_dot(Q)


def metric_projector(S, metric):
    """Projector ``U U^T N`` onto ``S``, orthogonal for the metric ``N``."""
    U = metric_orthonormal_basis(S, metric)
    return U @ metric.dot(U).T


@dataclass(frozen=True)
class PcaivResult:
    """PCA of the projected matrix and the quality of the projection.

    ``theta = ||projected|| / ||A||`` (norms in the metrics of the analysis).
    ``degenerate`` is set when ``A`` is zero, in which case ``theta = 0``.
    """
    pca: PcaResult
    theta: float
    projected: np.ndarray
    degenerate: bool = False

    def pca_quality(self, r):
        """``||Y_r|| / ||projected||``: norm share of the first ``r`` components."""
        total = self.pca.total_inertia
        if total <= 0:
            return 0.0
        return float(np.sqrt(np.sum(self.pca.lam[:r]) / total))

    def overall_quality(self, r):
        """``||Y_r|| / ||A||``, equal to ``pca_quality(r) * theta``."""
        return self.pca_quality(r) * self.theta


def _theta(projected_norm, full_norm):
    if full_norm == 0:
        return 0.0, True
    return float(projected_norm / full_norm), False


def pcaiv(A, E=None, F=None, method=None):
    """PCA of ``A`` with components in ``E`` and axes in ``F``.

    ``E`` and ``F`` are :class:`Subspace` objects or basis matrices; ``None``
    leaves that side unconstrained (identity projector). Non-orthonormal bases
    are orthonormalized by QR.
    """
    A = as_matrix(A)
    n, p = A.shape
    E, F = _as_subspace(E), _as_subspace(F)
    projected = A
    if E is not None:
        if E.ambient_dim != n:
            raise DimensionMismatch(f"E lives in R^{E.ambient_dim}, A has {n} rows")
        projected = projector(E) @ projected
    if F is not None:
        if F.ambient_dim != p:
            raise DimensionMismatch(f"F lives in R^{F.ambient_dim}, A has {p} columns")
        projected = projected @ projector(F)
    theta, degenerate = _theta(np.linalg.norm(projected), np.linalg.norm(A))
    return PcaivResult(pca_core(projected, method), theta, projected, degenerate)


def pcaiv_constrained_one_side(A, S, side, method=None):
    """PCAiv with a constraint on one side only.

    ``side="rows"`` constrains the components (``S`` in ``R^n``),
    ``side="columns"`` constrains the axes (``S`` in ``R^p``).
    """
    if side == "rows":
        return pcaiv(A, E=S, method=method)
    if side == "columns":
        return pcaiv(A, F=S, method=method)
    raise ValueError(f"side must be 'rows' or 'columns', got {side!r}")


def pcaiv_with_metrics(A, E=None, F=None, N=None, P=None, method=None):
    """PCAiv under SPD metrics ``N`` (rows) and ``P`` (columns).

    Projects with the metric-orthogonal projectors ``R = U U^T N`` and
    ``S = V V^T P`` into ``A' = R A S^T`` and runs the PCA with metrics of
    ``A'``. ``theta`` is the ratio of metric norms ``||A'||_NP / ||A||_NP``.
    """
    A = as_matrix(A)
    n, p = A.shape
    N = SpdFactor.identity(n) if N is None else N
    P = SpdFactor.identity(p) if P is None else P
    if N.dim != n or P.dim != p:
        raise DimensionMismatch(f"metrics of sizes ({N.dim}, {P.dim}) for a {n}x{p} matrix")
    E, F = _as_subspace(E), _as_subspace(F)
    projected = A
    if E is not None:
        if E.ambient_dim != n:
            raise DimensionMismatch(f"E lives in R^{E.ambient_dim}, A has {n} rows")
        projected = metric_projector(E, N) @ projected
    if F is not None:
        if F.ambient_dim != p:
            raise DimensionMismatch(f"F lives in R^{F.ambient_dim}, A has {p} columns")
        projected = projected @ metric_projector(F, P).T
    result = pca_met(projected, N, P, method)
    full = np.linalg.norm(P.sqrt_dot(N.sqrt_dot(A).T))
    theta, degenerate = _theta(np.sqrt(result.total_inertia), full)
    return PcaivResult(result, theta, projected, degenerate)
