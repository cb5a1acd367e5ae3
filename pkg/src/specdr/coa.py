"""Correspondence analysis of contingency tables."""
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import EmptyMargin, NegativeCount
from .linalg import as_matrix
from .pca import pca_core


@dataclass(frozen=True)
class ContingencyTable:
    """Nonnegative table with no empty row or column.

    Non-integer entries are accepted (pre-aggregated frequencies).
    """
    counts: np.ndarray

    def __post_init__(self):
        T = as_matrix(self.counts, "T")
        neg = np.argwhere(T < 0)
        if neg.size:
            i, j = neg[0]
            raise NegativeCount(f"negative entry {T[i, j]:g} at ({i}, {j})")
        for side, sums in (("row", T.sum(axis=1)), ("column", T.sum(axis=0))):
            empty = np.flatnonzero(sums <= 0)
            if empty.size:
                raise EmptyMargin(side, int(empty[0]))
        object.__setattr__(self, "counts", T)

    @property
    def grand_total(self):
        return float(self.counts.sum())

    def frequencies(self):
        return self.counts / self.counts.sum()

    def margins(self):
        F = self.frequencies()
        return F.sum(axis=1), F.sum(axis=0)


def drop_empty(T):
    """Remove all-zero rows and columns; returns ``(table, kept_rows, kept_cols)``."""
    T = as_matrix(T, "T")
    rows = np.flatnonzero(T.sum(axis=1) > 0)
    cols = np.flatnonzero(T.sum(axis=0) > 0)
    return T[np.ix_(rows, cols)], rows, cols


def _table(T):
    return T if isinstance(T, ContingencyTable) else ContingencyTable(T)


def standardized_residuals(T):
    """``(alpha_ij - r_i c_j) / sqrt(r_i c_j)`` together with the margins."""
    T = _table(T)
    F = T.frequencies()
    r, c = F.sum(axis=1), F.sum(axis=0)
    expected = np.outer(r, c)
    return (F - expected) / np.sqrt(expected), r, c


@dataclass(frozen=True)
class CoaResult:
    """Output of :func:`coa`.

    ``row_coords = D_r^(1/2) Z`` and ``col_coords = D_c^(1/2) X`` are the
    back-transported components and axes, where ``(Z, lam, X)`` is the PCA of
    the standardized residuals. ``row_principal`` and ``col_principal`` are the
    principal coordinates of the row and column profiles; they are centered
    under the margin weights.
    """
    row_coords: np.ndarray
    col_coords: np.ndarray
    lam: np.ndarray
    row_margins: np.ndarray
    col_margins: np.ndarray
    chi2_norm: float
    grand_total: float
    row_principal: np.ndarray
    col_principal: np.ndarray

    @property
    def chi2_statistic(self):
        return self.chi2_norm * self.grand_total


def coa(T, method=None):
    """Correspondence analysis of a contingency table."""
    T = _table(T)
    S, r, c = standardized_residuals(T)
    res = pca_core(S, method)
    sr, sc = np.sqrt(r), np.sqrt(c)
    row_coords = sr[:, None] * res.Y
    col_coords = sc[:, None] * res.V
    row_principal = res.Y / sr[:, None]
    col_principal = (res.V * res.sigma) / sc[:, None]
    return CoaResult(row_coords, col_coords, res.lam, r, c,
                     float(np.sum(S * S)), T.grand_total,
                     row_principal, col_principal)


def chi_square(T, scale="frequency"):
    """Chi-square distance of the table to its independence model.

    ``scale="frequency"`` gives ``sum (alpha_ij - r_i c_j)^2 / (r_i c_j)``;
    ``scale="count"`` multiplies by the grand total (Pearson's statistic).
    """
    T = _table(T)
    F = T.frequencies()
    r, c = F.sum(axis=1), F.sum(axis=0)
    expected = np.outer(r, c)
    value = float(np.sum((F - expected) ** 2 / expected))
    if scale == "frequency":
        return value
    if scale == "count":
        return value * T.grand_total
    raise ValueError(f"scale must be 'frequency' or 'count', got {scale!r}")


def row_profile_distances(T):
    """Squared chi-square distances between row profiles (I x I)."""
    T = _table(T)
    F = T.frequencies()
    r, c = F.sum(axis=1), F.sum(axis=0)
    profiles = (F / r[:, None]) / np.sqrt(c)[None, :]
    D = np.asarray(kernels.pairwise_sq_dists(profiles))
    np.fill_diagonal(D, 0.0)
    return D
