import numpy as np
import pytest

from specdr.errors import DimensionMismatch, RankDeficient
from specdr.linalg import qr_orthonormalize, spd_factor
from specdr.pca import PcaMethod, pca_core
from specdr.pcaiv import (Subspace, metric_orthonormal_basis, metric_projector,
                          pcaiv, pcaiv_constrained_one_side,
                          pcaiv_with_metrics, projector)
from specdr.pcamet import pca_met

from conftest import rel_err


def gram_inverse_projector(B):
    # independent oracle: B (B^T B)^-1 B^T
    return B @ np.linalg.inv(B.T @ B) @ B.T


def noise_filter_fixture(rng, n=40, p=10, noise=20.0):
    Ebasis = rng.normal(size=(n, 3))
    Fbasis = rng.normal(size=(p, 3))
    R, S = gram_inverse_projector(Ebasis), gram_inverse_projector(Fbasis)
    signal = Ebasis @ rng.normal(size=(3, 2)) @ rng.normal(size=(2, 3)) @ Fbasis.T
    N = rng.normal(size=(n, p))
    N = noise * (N - R @ N @ S)  # orthogonal to E (x) F
    return signal + N, Ebasis, Fbasis, signal


class TestProjector:
    def test_axis(self):
        np.testing.assert_allclose(projector([[1.0], [0.0]]), [[1, 0], [0, 0]], atol=1e-15)

    def test_full_space(self, rng):
        np.testing.assert_allclose(projector(rng.normal(size=(4, 4))), np.eye(4), atol=1e-12)

    def test_diagonal_line(self):
        np.testing.assert_allclose(projector([[1.0], [1.0]]), [[0.5, 0.5], [0.5, 0.5]])

    def test_algebra(self, rng):
        for m in (1, 2, 4):
            B = rng.normal(size=(7, m))
            P = projector(B)
            np.testing.assert_allclose(P @ P, P, atol=1e-10)
            np.testing.assert_allclose(P, P.T)
            np.testing.assert_allclose(np.trace(P), m, atol=1e-8)
            ev = np.linalg.eigvalsh(P)
            assert np.all(np.minimum(np.abs(ev), np.abs(ev - 1)) <= 1e-8)
            np.testing.assert_allclose(P @ B, B, atol=1e-10)
            np.testing.assert_allclose(P, gram_inverse_projector(B), atol=1e-10)

    def test_rank_deficient(self):
        with pytest.raises(RankDeficient):
            projector([[1.0, 2.0], [1.0, 2.0], [0.0, 0.0]])


class TestPcaiv:
    def test_identity_bases(self, rng):
        A = rng.normal(size=(6, 4))
        out = pcaiv(A, Subspace(np.eye(6)), Subspace(np.eye(4)))
        assert out.theta == pytest.approx(1.0)
        np.testing.assert_allclose(out.pca.lam, pca_core(A).lam, rtol=1e-12)

    def test_one_dimensional_E(self, rng):
        A = rng.normal(size=(6, 4))
        out = pcaiv(A, rng.normal(size=(6, 1)))
        assert np.sum(out.pca.lam > 1e-12 * out.pca.lam[0]) == 1

    def test_noise_filtering(self, rng):
        A, Eb, Fb, signal = noise_filter_fixture(rng)
        out = pcaiv(A, Eb, Fb)
        assert out.theta < 0.5
        assert out.pca_quality(2) >= 0.999
        np.testing.assert_allclose(out.projected, signal, atol=1e-10)
        np.testing.assert_allclose(out.pca.lam[:2].sum() / out.pca.lam.sum(), 1.0)

    def test_quality_factorization(self, rng):
        A, Eb, Fb, _ = noise_filter_fixture(rng, noise=1.0)
        for out in (pcaiv(A, Eb, Fb), pcaiv(A, Eb), pcaiv(A, F=Fb), pcaiv(A)):
            np.testing.assert_allclose(np.linalg.norm(out.projected),
                                       out.theta * np.linalg.norm(A), rtol=1e-10)
            for r in range(1, out.pca.k + 1):
                Yr = np.linalg.norm(out.pca.Y[:, :r])
                np.testing.assert_allclose(Yr, out.pca_quality(r) * out.theta * np.linalg.norm(A),
                                           rtol=1e-8)
                np.testing.assert_allclose(Yr, out.overall_quality(r) * np.linalg.norm(A),
                                           rtol=1e-8)

    def test_orthonormalization_path_independence(self, rng):
        A = rng.normal(size=(12, 6))
        Eb, Fb = rng.normal(size=(12, 4)), rng.normal(size=(6, 3))
        a = pcaiv(A, Eb, Fb)
        b = pcaiv(A, Subspace(qr_orthonormalize(Eb), orthonormal=True),
                  Subspace(qr_orthonormalize(Fb), orthonormal=True))
        assert rel_err(a.pca.lam, b.pca.lam) <= 1e-8
        # Gram-inverse formula as oracle
        M = gram_inverse_projector(Eb) @ A @ gram_inverse_projector(Fb)
        assert rel_err(a.pca.lam, pca_core(M).lam) <= 1e-8

    def test_zero_matrix(self, rng):
        out = pcaiv(np.zeros((4, 3)), rng.normal(size=(4, 2)))
        assert out.theta == 0.0 and out.degenerate
        assert np.all(out.pca.lam == 0)

    def test_dimension_mismatch(self, rng):
        with pytest.raises(DimensionMismatch):
            pcaiv(rng.normal(size=(4, 3)), rng.normal(size=(5, 2)))

    def test_grp_backend(self, rng):
        A, Eb, Fb, _ = noise_filter_fixture(rng)
        out = pcaiv(A, Eb, Fb, PcaMethod("grp", rank=2, seed=3))
        ref = pcaiv(A, Eb, Fb)
        assert rel_err(out.pca.lam, ref.pca.lam[:2]) <= 1e-8


class TestOneSide:
    def test_no_constraints(self, rng):
        A = rng.normal(size=(5, 3))
        np.testing.assert_array_equal(pcaiv(A).pca.lam, pca_core(A).lam)

    def test_axes_support(self, rng):
        A = rng.normal(size=(8, 5))
        out = pcaiv_constrained_one_side(A, np.eye(5)[:, :2], "columns")
        lead = out.pca.lam > 1e-12
        assert np.all(np.abs(out.pca.V[2:, lead]) <= 1e-10)

    def test_equals_identity_basis(self, rng):
        A = rng.normal(size=(8, 5))
        Fb = rng.normal(size=(5, 2))
        a = pcaiv_constrained_one_side(A, Fb, "columns")
        b = pcaiv(A, np.eye(8), Fb)
        np.testing.assert_allclose(a.pca.lam, b.pca.lam, rtol=1e-10, atol=1e-12)
        c = pcaiv_constrained_one_side(A, rng.normal(size=(8, 3)), "rows")
        assert c.pca.k == 5

    def test_bad_side(self, rng):
        with pytest.raises(ValueError):
            pcaiv_constrained_one_side(np.eye(2), np.eye(2), "diagonal")


class TestWithMetrics:
    def test_identity_metrics(self, rng):
        A = rng.normal(size=(7, 4))
        Eb, Fb = rng.normal(size=(7, 3)), rng.normal(size=(4, 2))
        a = pcaiv_with_metrics(A, Eb, Fb)
        b = pcaiv(A, Eb, Fb)
        np.testing.assert_allclose(a.pca.lam, b.pca.lam, rtol=1e-10, atol=1e-12)
        np.testing.assert_allclose(a.theta, b.theta, rtol=1e-10)

    def test_metric_projector_idempotent(self, rng):
        X = rng.normal(size=(5, 5))
        P = spd_factor(X @ X.T + np.eye(5))
        V = metric_orthonormal_basis(rng.normal(size=(5, 2)), P)
        np.testing.assert_allclose(V.T @ P.matrix @ V, np.eye(2), atol=1e-10)
        S = V @ V.T @ P.matrix
        np.testing.assert_allclose(S @ S, S, atol=1e-10)

    def test_metric_projector_fixes_subspace(self, rng):
        X = rng.normal(size=(5, 5))
        P = spd_factor(X @ X.T + np.eye(5))
        B = rng.normal(size=(5, 2))
        S = metric_projector(B, P)
        np.testing.assert_allclose(S @ B, B, atol=1e-10)
        np.testing.assert_allclose(S @ S, S, atol=1e-10)

    def test_diagonal_weights_cross_check(self, rng):
        A = rng.normal(size=(8, 4))
        N, P = spd_factor(rng.uniform(0.5, 2, 8)), spd_factor(rng.uniform(0.5, 2, 4))
        Eb, Fb = rng.normal(size=(8, 3)), rng.normal(size=(4, 2))
        out = pcaiv_with_metrics(A, Eb, Fb, N, P)
        ref = pca_met(out.projected, N, P)
        np.testing.assert_allclose(out.pca.lam, ref.lam, rtol=1e-12)
        # explicit metric projectors from the definitions
        U = metric_orthonormal_basis(Eb, N)
        V = metric_orthonormal_basis(Fb, P)
        expected = U @ U.T @ N.matrix @ A @ P.matrix @ V @ V.T
        np.testing.assert_allclose(out.projected, expected, atol=1e-10)

    def test_quality_factorization_metric(self, rng):
        A = rng.normal(size=(8, 4))
        N, P = spd_factor(rng.uniform(0.5, 2, 8)), spd_factor(rng.uniform(0.5, 2, 4))
        out = pcaiv_with_metrics(A, rng.normal(size=(8, 3)), None, N, P)
        normA = np.linalg.norm(np.sqrt(N.diag)[:, None] * A * np.sqrt(P.diag))
        for r in range(1, out.pca.k + 1):
            Wr = np.sqrt(out.pca.lam[:r].sum())
            np.testing.assert_allclose(Wr, out.pca_quality(r) * out.theta * normA, rtol=1e-8)
