import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tests import oracles
from trotterkit import linalg
from trotterkit.hamiltonian import pauli_matrix

I2 = np.eye(2)
Z = pauli_matrix("Z")


def random_matrix(rng, dim):
    return rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))


def random_hermitian(rng, dim):
    m = random_matrix(rng, dim)
    return (m + m.conj().T) / 2


def test_matmul_identity_and_involution():
    m = np.array([[1, 2j], [3, 4]])
    np.testing.assert_array_equal(linalg.matmul(I2, m), m)
    np.testing.assert_array_equal(linalg.matmul(Z, Z), I2)


def test_matmul_dimension_mismatch():
    with pytest.raises(ValueError, match="dimension mismatch"):
        linalg.matmul(np.eye(2), np.eye(3))


def test_reference_pair_does_not_commute():
    assert not np.allclose(linalg.matmul(oracles.B, oracles.C), linalg.matmul(oracles.C, oracles.B))
    assert linalg.spectral_norm(linalg.commutator(oracles.B, oracles.C)) == pytest.approx(
        oracles.NORM_COMMUTATOR_BC, rel=1e-12
    )


@pytest.mark.parametrize("bad", [np.ones((2, 3)), np.ones(4), [[np.nan, 0], [0, 1]], [[np.inf, 0], [0, 1]]])
def test_as_matrix_rejects(bad):
    with pytest.raises(ValueError):
        linalg.as_matrix(bad)


def test_dagger():
    np.testing.assert_array_equal(linalg.dagger(Z), Z)
    np.testing.assert_array_equal(linalg.dagger(1j * I2), -1j * I2)
    m = random_matrix(np.random.default_rng(1), 3)
    np.testing.assert_array_equal(linalg.dagger(linalg.dagger(m)), m)
    assert linalg.dagger(m)[0, 2] == np.conj(m[2, 0])


def test_kron():
    np.testing.assert_array_equal(linalg.kron(I2, I2), np.eye(4))
    np.testing.assert_array_equal(linalg.kron(Z, Z), np.diag([1, -1, -1, 1]))
    a = np.array([[1, 2], [3, 4]])
    k = linalg.kron(a, Z)
    np.testing.assert_array_equal(k[2:, :2], 3 * Z)


def test_commutator():
    m = np.array([[1, 2], [3, 4j]])
    np.testing.assert_array_equal(linalg.commutator(m, m), np.zeros((2, 2)))
    np.testing.assert_array_equal(linalg.commutator(Z, I2), np.zeros((2, 2)))
    with pytest.raises(ValueError):
        linalg.commutator(np.eye(2), np.eye(4))


def test_expm_examples():
    np.testing.assert_allclose(linalg.expm(np.zeros((3, 3))), np.eye(3), atol=0)
    t = 0.7
    np.testing.assert_allclose(
        linalg.expm(-1j * Z * t), np.diag([np.exp(-1j * t), np.exp(1j * t)]), atol=1e-15
    )


def test_expm_reference_matrix_against_high_precision_series():
    got = linalg.expm(oracles.A)
    assert linalg.spectral_norm(got - oracles.EXPM_A) / linalg.spectral_norm(oracles.EXPM_A) < 1e-13


@pytest.mark.parametrize("scale", [1e-3, 1.0, 10.0, 50.0])
def test_expm_relative_accuracy_up_to_norm_50(scale):
    rng = np.random.default_rng(int(scale * 1000))
    for _ in range(5):
        h = random_hermitian(rng, 6)
        h *= scale / linalg.spectral_norm(h)
        for z in (1.0, -1j):
            ref = oracles.expm_eig(h, z)
            err = linalg.spectral_norm(linalg.expm(z * h) - ref) / linalg.spectral_norm(ref)
            assert err <= 1e-12


def test_expm_overflow_is_reported():
    with pytest.raises(OverflowError, match="expm"):
        linalg.expm(np.diag([1e5, 0.0]))


def test_spectral_norm_examples():
    assert linalg.spectral_norm(Z) == pytest.approx(1.0, abs=1e-15)
    assert linalg.spectral_norm((2 - 3j) * np.eye(4)) == pytest.approx(abs(2 - 3j), rel=1e-15)
    assert linalg.spectral_norm(oracles.B) == pytest.approx(oracles.NORM_B, rel=1e-13)
    assert linalg.spectral_norm(oracles.B) == pytest.approx(oracles.spectral_norm_eig(oracles.B), abs=1e-10 * oracles.NORM_B)


def test_matrix_power():
    m = random_matrix(np.random.default_rng(3), 3)
    np.testing.assert_array_equal(linalg.matrix_power(m, 0), np.eye(3))
    np.testing.assert_array_equal(linalg.matrix_power(m, 1), m)
    np.testing.assert_array_equal(linalg.matrix_power(np.diag([2, 3]), 10), np.diag([1024, 59049]))
    np.testing.assert_allclose(linalg.matrix_power(m, 13), np.linalg.matrix_power(m, 13), rtol=1e-12)
    with pytest.raises(ValueError):
        linalg.matrix_power(m, -1)


def test_unitarity_of_hermitian_evolution():
    rng = np.random.default_rng(4)
    for dim in (2, 4, 8, 16):
        for t in (0.1, 1.0, 5.0):
            u = linalg.expm(-1j * t * random_hermitian(rng, dim))
            assert linalg.spectral_norm(u.conj().T @ u - np.eye(dim)) <= 1e-10


def test_kron_norm_multiplicative():
    rng = np.random.default_rng(5)
    for _ in range(100):
        a, b = random_matrix(rng, 2), random_matrix(rng, 2)
        lhs = linalg.spectral_norm(linalg.kron(a, b))
        assert lhs == pytest.approx(linalg.spectral_norm(a) * linalg.spectral_norm(b), rel=1e-9)


def test_kron_mixed_product():
    rng = np.random.default_rng(6)
    for da, db in [(2, 2), (2, 3), (3, 4)]:
        a, c = random_matrix(rng, da), random_matrix(rng, da)
        b, d = random_matrix(rng, db), random_matrix(rng, db)
        lhs = linalg.kron(a, b) @ linalg.kron(c, d)
        np.testing.assert_allclose(lhs, linalg.kron(a @ c, b @ d), rtol=0, atol=1e-12)


@settings(max_examples=50, deadline=None)
@given(
    st.lists(st.floats(-3, 3), min_size=4, max_size=4),
    st.lists(st.floats(-3, 3), min_size=4, max_size=4),
    st.integers(0, 2**32 - 1),
)
def test_commuting_exponentials_factor(p_diag, q_diag, seed):
    # simultaneously diagonalisable matrices commute
    rng = np.random.default_rng(seed)
    v, _ = np.linalg.qr(random_matrix(rng, 4))
    p = v @ np.diag(p_diag) @ v.conj().T
    q = v @ np.diag(q_diag) @ v.conj().T
    assert linalg.spectral_norm(linalg.commutator(p, q)) < 1e-12
    lhs = linalg.expm(-1j * p) @ linalg.expm(-1j * q)
    assert linalg.distance(lhs, linalg.expm(-1j * (p + q))) <= 1e-10


def test_spectral_norm_of_hermitian_is_largest_eigenvalue():
    rng = np.random.default_rng(7)
    for dim in (2, 5, 16):
        h = random_hermitian(rng, dim)
        assert linalg.spectral_norm(h) == pytest.approx(np.abs(np.linalg.eigvalsh(h)).max(), abs=1e-10)
