import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from lloydlab.linalg import (
    SymmetricMatrix,
    double_center,
    hollow,
    matrix_from_csv,
    matrix_to_csv,
    sym_eig,
    two_to_inf_norm,
)


def random_symmetric(n, rng, scale=1.0):
    a = rng.standard_normal((n, n)) * scale
    return (a + a.T) / 2.0


class TestSymmetricMatrix:
    def test_symmetrized_on_ingest(self):
        a = np.array([[1.0, 2.0 + 5e-11], [2.0, 3.0]])
        m = SymmetricMatrix(a)
        assert np.array_equal(m.entries, m.entries.T)

    def test_asymmetric_rejected(self):
        with pytest.raises(ValueError, match="symmetric"):
            SymmetricMatrix(np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_nonfinite_rejected(self):
        with pytest.raises(ValueError, match="finite"):
            SymmetricMatrix(np.array([[np.nan, 0.0], [0.0, 0.0]]))

    def test_nonsquare_rejected(self):
        with pytest.raises(ValueError):
            SymmetricMatrix(np.zeros((2, 3)))


class TestSymEig:
    def test_identity(self):
        es = sym_eig(np.eye(5), k=2)
        assert np.allclose(es.values, [1.0, 1.0])
        assert np.allclose(es.vectors.T @ es.vectors, np.eye(2), atol=1e-10)

    def test_two_by_two_hand_decomposition(self):
        es = sym_eig(np.array([[2.0, 1.0], [1.0, 2.0]]), k=2)
        assert np.allclose(es.values, [3.0, 1.0], atol=1e-12)
        inv_sqrt2 = 1.0 / np.sqrt(2.0)
        assert np.allclose(es.vectors[:, 0], [inv_sqrt2, inv_sqrt2], atol=1e-12)
        # sign convention: first of the tied largest-magnitude entries is nonnegative
        assert np.allclose(es.vectors[:, 1], [inv_sqrt2, -inv_sqrt2], atol=1e-12)

    def test_magnitude_ordering(self):
        es = sym_eig(np.diag([5.0, -7.0, 1.0]), k=1, ordering="magnitude-descending")
        assert es.values[0] == pytest.approx(-7.0)

    def test_algebraic_ordering_is_default(self):
        es = sym_eig(np.diag([5.0, -7.0, 1.0]), k=3)
        assert np.allclose(es.values, [5.0, 1.0, -7.0])

    def test_residual_and_orthonormality(self):
        rng = np.random.default_rng(0)
        for n in (3, 10, 40):
            a = random_symmetric(n, rng, scale=3.0)
            es = sym_eig(a, k=n)
            spectral = np.abs(es.values).max()
            resid = np.abs(a @ es.vectors - es.vectors * es.values).max()
            assert resid <= 1e-8 * (1.0 + spectral)
            gram = es.vectors.T @ es.vectors
            assert np.abs(gram - np.eye(n)).max() <= 1e-10

    def test_full_reconstruction(self):
        rng = np.random.default_rng(1)
        a = random_symmetric(30, rng)
        es = sym_eig(a, k=30)
        recon = (es.vectors * es.values) @ es.vectors.T
        spectral = np.abs(es.values).max()
        assert np.linalg.norm(a - recon, 2) <= 1e-7 * spectral

    def test_invalid_k_and_ordering(self):
        with pytest.raises(ValueError):
            sym_eig(np.eye(3), k=0)
        with pytest.raises(ValueError):
            sym_eig(np.eye(3), k=4)
        with pytest.raises(ValueError):
            sym_eig(np.eye(3), ordering="random")

    def test_deterministic_across_calls(self):
        rng = np.random.default_rng(2)
        a = random_symmetric(12, rng)
        e1, e2 = sym_eig(a), sym_eig(a)
        assert np.array_equal(e1.vectors, e2.vectors)


class TestHollow:
    def test_diagonal_matrix_becomes_zero(self):
        out = hollow(np.diag([1.0, 2.0, 3.0]))
        assert np.array_equal(out.entries, np.zeros((3, 3)))

    def test_example(self):
        out = hollow(np.array([[1.0, 2.0], [2.0, 3.0]]))
        assert np.array_equal(out.entries, np.array([[0.0, 2.0], [2.0, 0.0]]))

    @settings(max_examples=30, deadline=None)
    @given(
        arrays(
            np.float64,
            (4, 4),
            elements=st.floats(min_value=-50, max_value=50, allow_nan=False),
        )
    )
    def test_idempotence(self, a):
        sym = (a + a.T) / 2.0
        once = hollow(sym)
        twice = hollow(once)
        assert np.array_equal(once.entries, twice.entries)


class TestDoubleCenter:
    def test_zero_input(self):
        out = double_center(np.zeros((4, 4)))
        assert np.array_equal(out.entries, np.zeros((4, 4)))

    def test_collinear_points_hand_value(self):
        d2 = np.array([[0.0, 1.0, 4.0], [1.0, 0.0, 1.0], [4.0, 1.0, 0.0]])
        expected = np.array([[1.0, 0.0, -1.0], [0.0, 0.0, 0.0], [-1.0, 0.0, 1.0]])
        assert np.allclose(double_center(d2).entries, expected, atol=1e-12)

    def test_row_and_column_sums_vanish(self):
        rng = np.random.default_rng(3)
        x = rng.standard_normal((15, 4))
        d2 = ((x[:, None, :] - x[None, :, :]) ** 2).sum(axis=2)
        b = double_center(d2).entries
        assert np.abs(b.sum(axis=0)).max() <= 1e-10
        assert np.abs(b.sum(axis=1)).max() <= 1e-10

    def test_negative_entries_rejected(self):
        with pytest.raises(ValueError, match="nonnegative"):
            double_center(np.array([[0.0, -1.0], [-1.0, 0.0]]))

    def test_rank_r_psd_structure(self):
        rng = np.random.default_rng(4)
        r = 3
        x = rng.standard_normal((20, r))
        d2 = ((x[:, None, :] - x[None, :, :]) ** 2).sum(axis=2)
        vals = np.sort(np.linalg.eigvalsh(double_center(d2).entries))[::-1]
        assert vals[r - 1] > 0
        assert np.abs(vals[r:]).max() <= 1e-8 * vals[0]


class TestTwoToInfNorm:
    def test_zero(self):
        assert two_to_inf_norm(np.zeros((3, 2))) == 0.0

    def test_row_norms(self):
        assert two_to_inf_norm(np.array([[3.0, 4.0], [1.0, 0.0]])) == pytest.approx(5.0)

    def test_identity(self):
        assert two_to_inf_norm(np.eye(7)) == pytest.approx(1.0)


def test_matrix_csv_roundtrip(tmp_path):
    rng = np.random.default_rng(5)
    a = random_symmetric(6, rng)
    path = tmp_path / "mat.csv"
    matrix_to_csv(a, path)
    back = matrix_from_csv(path)
    assert np.allclose(back, a, atol=1e-12)
