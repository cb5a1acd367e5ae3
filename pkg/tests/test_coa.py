import numpy as np
import pytest

from specdr.coa import (ContingencyTable, chi_square, coa, drop_empty,
                        row_profile_distances, standardized_residuals)
from specdr.errors import EmptyMargin, NegativeCount
from specdr.pcamet import pca_met

from conftest import rel_err


def chi2_by_summation(T):
    T = np.asarray(T, float)
    F = T / T.sum()
    r, c = F.sum(1), F.sum(0)
    total = 0.0
    for i in range(F.shape[0]):
        for j in range(F.shape[1]):
            e = r[i] * c[j]
            total += (F[i, j] - e) ** 2 / e
    return total


class TestCoa:
    def test_independence(self):
        T = np.outer([3.0, 1.0, 2.0], [5.0, 2.0, 1.0, 4.0])
        res = coa(T)
        assert res.lam.sum() <= 1e-12
        assert np.all(res.lam <= 1e-12)

    def test_identity_table(self):
        S, _, _ = standardized_residuals([[1.0, 0.0], [0.0, 1.0]])
        np.testing.assert_allclose(S, [[0.5, -0.5], [-0.5, 0.5]])
        res = coa([[1.0, 0.0], [0.0, 1.0]])
        np.testing.assert_allclose(res.lam, [1.0, 0.0], atol=1e-12)
        assert res.chi2_norm == pytest.approx(1.0)

    def test_row_permutation(self, rng):
        T = rng.integers(1, 20, size=(5, 4)).astype(float)
        perm = rng.permutation(5)
        a, b = coa(T), coa(T[perm])
        np.testing.assert_allclose(a.lam, b.lam, rtol=1e-10, atol=1e-14)
        np.testing.assert_allclose(np.abs(a.row_coords[perm, :3]), np.abs(b.row_coords[:, :3]),
                                   atol=1e-10)

    def test_invariants(self, rng):
        T = rng.integers(1, 50, size=(6, 4)).astype(float)
        res = coa(T)
        assert res.row_margins.sum() == pytest.approx(1.0, abs=1e-12)
        assert res.col_margins.sum() == pytest.approx(1.0, abs=1e-12)
        np.testing.assert_allclose(res.lam.sum(), res.chi2_norm, rtol=1e-8)
        assert np.all(np.diff(res.lam) <= 0) and np.all(res.lam >= 0)

    def test_barycentric_margins(self, rng):
        T = rng.integers(1, 50, size=(6, 5)).astype(float)
        res = coa(T)
        np.testing.assert_allclose(res.row_margins @ res.row_principal, 0, atol=1e-8)
        np.testing.assert_allclose(res.col_margins @ res.col_principal, 0, atol=1e-8)
        live = res.lam > 1e-12
        np.testing.assert_allclose(res.row_coords.sum(axis=0), 0, atol=1e-8)
        np.testing.assert_allclose(res.col_coords[:, live].sum(axis=0), 0, atol=1e-8)

    def test_equals_pca_met(self, rng):
        T = rng.integers(1, 50, size=(5, 4)).astype(float)
        F = T / T.sum()
        r, c = F.sum(1), F.sum(0)
        ref = pca_met(F - np.outer(r, c), 1 / r, 1 / c)
        res = coa(T)
        assert rel_err(res.lam, ref.lam) <= 1e-8
        np.testing.assert_allclose(res.row_coords, ref.Y, atol=1e-8)
        np.testing.assert_allclose(res.col_coords, ref.V, atol=1e-8)

    def test_inertia_equality(self, rng):
        T = rng.integers(1, 40, size=(5, 6)).astype(float)
        F = T / T.sum()
        r, c = F.sum(1), F.sum(0)
        row_inertia = sum(r[i] * np.sum((F[i] / r[i] - c) ** 2 / c) for i in range(5))
        col_inertia = sum(c[j] * np.sum((F[:, j] / c[j] - r) ** 2 / r) for j in range(6))
        chi2 = coa(T).chi2_norm
        np.testing.assert_allclose(row_inertia, chi2, rtol=1e-8)
        np.testing.assert_allclose(col_inertia, chi2, rtol=1e-8)

    def test_principal_coords_reproduce_profile_distances(self, rng):
        T = rng.integers(1, 40, size=(6, 4)).astype(float)
        P = coa(T).row_principal
        d2 = np.sum((P[:, None] - P[None]) ** 2, axis=-1)
        np.testing.assert_allclose(d2, row_profile_distances(T), atol=1e-10)

    def test_fractional_counts(self):
        res = coa([[0.5, 1.25], [2.0, 0.25]])
        assert res.lam[0] > 0

    def test_errors(self):
        with pytest.raises(NegativeCount):
            ContingencyTable([[1.0, -1.0], [1.0, 1.0]])
        with pytest.raises(EmptyMargin) as exc:
            coa([[1.0, 0.0], [2.0, 0.0]])
        assert exc.value.side == "column" and exc.value.index == 1
        with pytest.raises(EmptyMargin):
            coa([[0.0, 0.0], [2.0, 1.0]])

    def test_drop_empty(self):
        T, rows, cols = drop_empty([[1.0, 0.0, 2.0], [0.0, 0.0, 0.0], [3.0, 0.0, 1.0]])
        np.testing.assert_array_equal(T, [[1, 2], [3, 1]])
        assert list(rows) == [0, 2] and list(cols) == [0, 2]


class TestChiSquare:
    def test_independence(self):
        assert chi_square(np.outer([1.0, 2.0], [3.0, 1.0, 1.0])) == pytest.approx(0, abs=1e-15)

    def test_identity(self):
        assert chi_square([[1.0, 0.0], [0.0, 1.0]]) == pytest.approx(1.0)
        assert chi_square([[1.0, 0.0], [0.0, 1.0]], scale="count") == pytest.approx(2.0)

    def test_transpose(self, rng):
        T = rng.integers(1, 30, size=(4, 6)).astype(float)
        assert chi_square(T) == pytest.approx(chi_square(T.T), rel=1e-12)

    def test_summation_oracle(self, rng):
        T = rng.integers(1, 30, size=(4, 3)).astype(float)
        assert chi_square(T) == pytest.approx(chi2_by_summation(T), rel=1e-12)
        assert coa(T).lam.sum() == pytest.approx(chi_square(T), rel=1e-8)

    def test_pearson_statistic(self, rng):
        from scipy.stats import chi2_contingency
        T = rng.integers(1, 30, size=(3, 4)).astype(float)
        stat = chi2_contingency(T, correction=False)[0]
        assert chi_square(T, scale="count") == pytest.approx(stat, rel=1e-10)


class TestProfileDistances:
    def test_duplicate_row(self):
        D = row_profile_distances([[1.0, 2.0, 3.0], [1.0, 2.0, 3.0], [4.0, 1.0, 1.0]])
        assert D[0, 1] == pytest.approx(0, abs=1e-15)

    def test_scaled_row(self):
        D = row_profile_distances([[1.0, 2.0, 3.0], [3.0, 6.0, 9.0], [4.0, 1.0, 1.0]])
        assert D[0, 1] == pytest.approx(0, abs=1e-15)

    def test_brute_force(self):
        T = np.array([[2.0, 1.0], [1.0, 4.0]])
        F = T / T.sum()
        r, c = F.sum(1), F.sum(0)
        d2 = sum((F[0, j] / r[0] - F[1, j] / r[1]) ** 2 / c[j] for j in range(2))
        D = row_profile_distances(T)
        assert D[0, 1] == pytest.approx(d2, rel=1e-12)
        np.testing.assert_array_equal(D, D.T)
        np.testing.assert_array_equal(np.diag(D), 0)
