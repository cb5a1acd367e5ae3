"""Multiple correspondence / canonical analysis of several blocks.

The blocks ``A_1 .. A_m`` (same items) are concatenated after each one is
whitened by the inverse square root of its Gram matrix; the PCA of the result
is the analysis. Categorical variables enter through their indicator matrices.
"""
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NotSpd, SingularBlock
from .linalg import as_matrix, spd_factor
from .pca import PcaResult, pca_core


@dataclass(frozen=True)
class IndicatorMatrix:
    """0/1 matrix with one observed category per row."""
    Z: np.ndarray
    category_labels: list

    @property
    def counts(self):
        return self.Z.sum(axis=0)

    def codes(self):
        return [self.category_labels[j] for j in np.argmax(self.Z, axis=1)]


def indicator_from_categories(labels):
    """Indicator matrix of a categorical variable, categories in order of first appearance.

    >>> indicator_from_categories(["a", "b", "a"]).Z.tolist()
    [[1.0, 0.0], [0.0, 1.0], [1.0, 0.0]]
    """
    labels = list(labels)
    if not labels:
        raise DimensionMismatch("at least one item is required")
    index = {}
    for lab in labels:
        index.setdefault(lab, len(index))
    Z = np.zeros((len(labels), len(index)))
    Z[np.arange(len(labels)), [index[lab] for lab in labels]] = 1.0
    return IndicatorMatrix(Z, list(index))


def _block_array(X, name):
    if isinstance(X, IndicatorMatrix):
        X = X.Z
    return as_matrix(X, name)


@dataclass(frozen=True)
class McaResult:
    """PCA of the concatenated whitened blocks.

    ``block_slices[l]`` is the range of rows of ``pca.V`` (columns of
    ``transported``) that belong to block ``l``.
    """
    pca: PcaResult
    block_slices: list
    transported: np.ndarray

    @property
    def lam(self):
        return self.pca.lam

    def block_axes(self, block):
        return self.pca.V[self.block_slices[block]]


def mca(blocks, method=None):
    """MCA of a list of blocks sharing their rows.

    Each block ``A_l`` becomes ``A_l D_l^(1/2)`` with ``D_l = (A_l^T A_l)^-1``;
    the blocks are concatenated column-wise and passed to :func:`pca_core`.

    Raises
    ------
    SingularBlock
        When a block's Gram matrix is singular (e.g. an empty category).
    """
    arrays = [_block_array(X, f"block {i}") for i, X in enumerate(blocks)]
    if not arrays:
        raise DimensionMismatch("at least one block is required")
    n = arrays[0].shape[0]
    parts, slices, start = [], [], 0
    for i, X in enumerate(arrays):
        if X.shape[0] != n:
            raise DimensionMismatch(f"block {i} has {X.shape[0]} rows, expected {n}")
        try:
            factor = spd_factor(X.T @ X)
        except NotSpd as exc:
            raise SingularBlock(i, str(exc)) from None
        parts.append(factor.inv_sqrt_dot(X.T).T)
        slices.append(slice(start, start + X.shape[1]))
        start += X.shape[1]
    if start > n:
        raise DimensionMismatch(f"{start} columns in total for {n} items")
    R = np.hstack(parts)
    return McaResult(pca_core(R, method), slices, R)


def mca_from_categories(columns, method=None):
    """MCA of categorical variables given as sequences of codes."""
    return mca([indicator_from_categories(col) for col in columns], method)


def burt_table(A, B):
    """Blockwise Gram ``[[A^T A, A^T B], [B^T A, B^T B]]`` of two blocks."""
    A, B = _block_array(A, "A"), _block_array(B, "B")
    if A.shape[0] != B.shape[0]:
        raise DimensionMismatch(f"blocks have {A.shape[0]} and {B.shape[0]} rows")
    X = np.hstack([A, B])
    return X.T @ X
