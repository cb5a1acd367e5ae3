"""PCA core, standard pre-treatments and quality of representation."""
from dataclasses import dataclass, field

import numpy as np

from .errors import BadRank, EmptySpectrum, ZeroColumn
from .linalg import (DEFAULT_OVERSAMPLING, as_matrix, svd_exact, svd_grp,
                     sym_evd)

METHODS = ("evd", "svd", "grp")


@dataclass(frozen=True)
class PcaMethod:
    """Backend selection for :func:`pca_core`.

    ``rank=None`` keeps every component. The ``grp`` backend (randomized SVD)
    needs a finite rank.
    """
    kind: str = "svd"
    rank: int = None
    oversampling: int = DEFAULT_OVERSAMPLING
    seed: int = 0
    power_iterations: int = 0

    def __post_init__(self):
        kind = str(self.kind).lower()
        object.__setattr__(self, "kind", kind)
        if kind not in METHODS:
            raise BadRank(f"unknown method {self.kind!r}; expected one of {METHODS}")
        if self.rank is not None:
            if int(self.rank) < 1:
                raise BadRank(f"rank must be >= 1 or None (all), got {self.rank}")
            object.__setattr__(self, "rank", int(self.rank))
        if kind == "grp" and self.rank is None:
            raise BadRank("a finite rank must be prescribed for the grp backend")

    def with_rank(self, rank):
        return PcaMethod(self.kind, rank, self.oversampling, self.seed,
                         self.power_iterations)


def as_method(method=None, **kwargs):
    """Coerce ``None``, a backend name or a :class:`PcaMethod`."""
    if method is None:
        return PcaMethod(**kwargs)
    if isinstance(method, PcaMethod):
        return method
    return PcaMethod(kind=method, **kwargs)


@dataclass(frozen=True)
class PcaResult:
    """Components ``Y`` (n x k), eigenvalues ``lam`` (k) and axes ``V`` (p x k).

    ``total_inertia`` is the squared Frobenius norm of the decomposed matrix and
    ``row_inertia`` the squared norms of its rows; both are exact whatever
    the backend and feed :func:`quality_metrics`.
    """
    Y: np.ndarray
    lam: np.ndarray
    V: np.ndarray
    total_inertia: float
    row_inertia: np.ndarray = field(repr=False)
    method: PcaMethod = None

    @property
    def k(self):
        return self.lam.shape[0]

    @property
    def sigma(self):
        return np.sqrt(self.lam)


def pca_core(A, method=None):
    """PCA of ``A`` through EVD of ``A^T A``, exact SVD, or randomized SVD.

    Examples
    --------
    >>> res = pca_core([[1.0, 1.0], [1.0, 1.0]])
    >>> [round(float(v), 12) for v in res.lam]
    [4.0, 0.0]
    """
    A = as_matrix(A)
    method = as_method(method)
    n, p = A.shape
    k = method.rank
    if k is not None and k > min(n, p):
        raise BadRank(f"rank {k} exceeds min(n, p) = {min(n, p)}")

    if method.kind == "evd":
        C = A.T @ A
        lam, V = sym_evd(0.5 * (C + C.T))
        lam = np.maximum(lam, 0.0)
        Y = A @ V
    elif method.kind == "svd":
        res = svd_exact(A)
        lam, V = res.sigma ** 2, res.V
        Y = res.U * res.sigma
    else:
        res = svd_grp(A, k, method.oversampling, method.seed,
                      method.power_iterations)
        lam, V = res.sigma ** 2, res.V
        Y = res.U * res.sigma

    if k is not None:
        Y, lam, V = Y[:, :k], lam[:k], V[:, :k]
    row_inertia = np.einsum("ij,ij->i", A, A)
    return PcaResult(np.ascontiguousarray(Y), lam.copy(), np.ascontiguousarray(V),
                     float(row_inertia.sum()), row_inertia, method)


def center(A):
    """Translate the rows of ``A`` to their barycenter; returns ``(Abar, g)``."""
    A = as_matrix(A)
    g = A.mean(axis=0)
    return A - g, g


def scale_columns(A):
    """Divide each column by its Euclidean norm.

    Raises
    ------
    ZeroColumn
        For a column whose norm is below ``1e-12 * sqrt(n) * max|a|``.
    """
    A = as_matrix(A)
    norms = np.linalg.norm(A, axis=0)
    tol = 1e-12 * np.sqrt(A.shape[0]) * np.max(np.abs(A))
    bad = np.flatnonzero(norms <= tol)
    if bad.size:
        raise ZeroColumn(int(bad[0]))
    return A / norms


def pca_scaled_centered(A, method=None):
    """PCA of the centered, unit-norm-column version of ``A``.

    The decomposed matrix holds correlations in ``A'^T A'``, so the eigenvalues
    sum to the number of columns.
    """
    Abar, _ = center(A)
    return pca_core(scale_columns(Abar), method)


@dataclass(frozen=True)
class BicenterDecomposition:
    """``a_ij = mean + row_effects[i] + col_effects[j] + residuals[i, j]``."""
    mean: float
    row_effects: np.ndarray
    col_effects: np.ndarray
    residuals: np.ndarray

    def reconstruct(self):
        return (self.mean + self.row_effects[:, None] + self.col_effects[None, :]
                + self.residuals)


def bicenter(A):
    """Double averaging: split ``A`` into grand mean, row and column effects."""
    A = as_matrix(A)
    m = A.mean()
    row_means = A.mean(axis=1)
    col_means = A.mean(axis=0)
    R = A - row_means[:, None] - col_means[None, :] + m
    return BicenterDecomposition(float(m), row_means - m, col_means - m, R)


def pca_double_averaged(A, method=None):
    """PCA of the bicentered residuals (no scaling); returns ``(result, decomposition)``."""
    dec = bicenter(A)
    return pca_core(dec.residuals, method), dec


@dataclass(frozen=True)
class QualityReport:
    """Quality of representation of the cloud and of each item.

    Attributes
    ----------
    axis_quality : (k,) array
        Share of total inertia carried by each axis.
    cumulative_quality : (k,) array
        Share carried by the first ``r`` axes, ``r = 1..k``.
    item_axis_quality : (n, k) array
        Share of each item's squared norm carried by each axis.
    item_cumulative_quality : (n, k) array
        Cumulative sums of ``item_axis_quality`` along axes.
    degenerate_items : list of int
        Items with zero norm; their qualities are reported as 0.
    denominator : str
        ``"full spectrum"`` when the caller passed every eigenvalue,
        ``"total inertia"`` when the Frobenius norm of the decomposed matrix
        was used instead.
    """
    axis_quality: np.ndarray
    cumulative_quality: np.ndarray
    item_axis_quality: np.ndarray
    item_cumulative_quality: np.ndarray
    degenerate_items: list
    denominator: str

    def to_dict(self):
        return {
            "axis_quality": self.axis_quality.tolist(),
            "cumulative_quality": self.cumulative_quality.tolist(),
            "item_axis_quality": self.item_axis_quality.tolist(),
            "item_cumulative_quality": self.item_cumulative_quality.tolist(),
            "degenerate_items": list(self.degenerate_items),
            "denominator": self.denominator,
        }


def quality_metrics(result, full_lambda=None):
    if full_lambda is not None:
        total = float(np.sum(full_lambda))
        label = "full spectrum"
    else:
        total = result.total_inertia
        label = "total inertia"
    if total <= 0:
        varrho = np.zeros(result.k)
    else:
        varrho = result.lam / total

    Y = result.Y
    tiny = 1e-24 * max(result.total_inertia, np.finfo(float).tiny)
    degenerate = np.flatnonzero(result.row_inertia <= tiny)
    denom = result.row_inertia.copy()
    denom[degenerate] = 1.0
    psi = Y ** 2 / denom[:, None]
    psi[degenerate] = 0.0
    return QualityReport(varrho, np.cumsum(varrho), psi, np.cumsum(psi, axis=1),
                         degenerate.tolist(), label)


def rank_for_accuracy(lam, target):
    """Smallest rank ``r`` whose cumulative quality reaches ``target``."""
    lam = np.asarray(lam, dtype=np.float64)
    if not 0 < target <= 1:
        raise ValueError(f"target must lie in (0, 1], got {target}")
    total = lam.sum()
    if total <= 0:
        raise EmptySpectrum("spectrum sums to zero; no accuracy can be reached")
    rho = np.cumsum(lam) / total
    r = int(np.searchsorted(rho, target * (1 - 1e-12), side="left")) + 1
    return min(r, lam.size)
