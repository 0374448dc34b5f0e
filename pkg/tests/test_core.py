import numpy as np
import pytest

from medgate.core import (DIM, SystemParams, basis_ket, check_density_matrix,
                          dag, flat_index, haar_product_pair, is_hermitian,
                          is_unitary, partial_trace, pauli_on, purity,
                          unpack_index)


def test_flat_index_round_trip():
    seen = set()
    for orb in (0, 1):
        for q in (0, 1):
            for c in (0, 1):
                for qp in (0, 1):
                    i = flat_index(orb, q, c, qp)
                    assert unpack_index(i) == (orb, q, c, qp)
                    seen.add(i)
    assert seen == set(range(DIM))


def test_flat_index_rejects_bad_bits():
    with pytest.raises(ValueError):
        flat_index(0, 2, 0, 0)
    with pytest.raises(ValueError):
        unpack_index(16)


def test_sigma_z_eigenvalue_on_spin_down():
    ket = basis_ket(0, 0, 0, 0)
    assert np.allclose(pauli_on("C", "z") @ ket, -ket)
    assert np.allclose(pauli_on("Q", "z") @ basis_ket(0, 1, 0, 0),
                       basis_ket(0, 1, 0, 0))


@pytest.mark.parametrize("site", ["Q", "C", "Q'"])
@pytest.mark.parametrize("axis", ["x", "y", "z"])
def test_pauli_embeddings_hermitian_unitary_involutive(site, axis):
    op = pauli_on(site, axis)
    assert is_hermitian(op)
    assert is_unitary(op)
    assert np.allclose(op @ op, np.eye(DIM))


def test_distinct_site_embeddings_commute():
    a = pauli_on("Q", "x")
    b = pauli_on("Q'", "x")
    assert np.abs(a @ b - b @ a).max() == 0.0


def test_pauli_on_rejects_unknown_labels():
    with pytest.raises(ValueError):
        pauli_on("X", "z")
    with pytest.raises(ValueError):
        pauli_on("Q", "w")


def test_partial_trace_product_state(rng):
    a = rng.normal(size=2) + 1j * rng.normal(size=2)
    a /= np.linalg.norm(a)
    b = rng.normal(size=3) + 1j * rng.normal(size=3)
    b /= np.linalg.norm(b)
    rho = np.outer(np.kron(a, b), np.kron(a, b).conj())
    red = partial_trace(rho, keep=(0,), dims=(2, 3))
    assert np.abs(red - np.outer(a, a.conj())).max() < 1e-12


def test_partial_trace_bell_state():
    bell = np.zeros(4, dtype=complex)
    bell[0] = bell[3] = 1 / np.sqrt(2)
    rho = np.outer(bell, bell.conj())
    red = partial_trace(rho, keep=(0,), dims=(2, 2))
    assert np.abs(red - np.eye(2) / 2).max() < 1e-12


def test_partial_trace_preserves_trace_and_linearity(rng):
    dims = (2, 2, 2, 2)
    for _ in range(5):
        a = rng.normal(size=(16, 16)) + 1j * rng.normal(size=(16, 16))
        b = rng.normal(size=(16, 16)) + 1j * rng.normal(size=(16, 16))
        keep = (1, 3)
        ra = partial_trace(a, keep, dims)
        rb = partial_trace(b, keep, dims)
        rab = partial_trace(2.0 * a - 0.5j * b, keep, dims)
        assert np.abs(rab - (2.0 * ra - 0.5j * rb)).max() < 1e-10
        assert abs(np.trace(ra) - np.trace(a)) < 1e-10


def test_partial_trace_rejects_bad_labels():
    rho = np.eye(4, dtype=complex) / 4
    with pytest.raises(ValueError):
        partial_trace(rho, keep=(2,), dims=(2, 2))
    with pytest.raises(ValueError):
        partial_trace(rho, keep=(0, 0), dims=(2, 2))


def test_purity_values():
    psi = np.zeros(16, dtype=complex)
    psi[3] = 1.0
    assert purity(np.outer(psi, psi.conj())) == pytest.approx(1.0)
    assert purity(np.eye(16) / 16) == pytest.approx(1 / 16)
    mixed = 0.5 * np.diag([1.0, 0, 0, 0]) + 0.5 * np.diag([0, 1.0, 0, 0])
    assert purity(mixed.astype(complex)) == pytest.approx(0.5)


def test_haar_pair_norms_and_sphere_moments():
    rng = np.random.default_rng(7)
    n = 100_000
    z1 = np.empty(n)
    for i in range(n):
        a, b = haar_product_pair(rng)
        if i < 100:
            assert abs(np.linalg.norm(a) - 1) < 1e-12
            assert abs(np.linalg.norm(b) - 1) < 1e-12
        z1[i] = abs(a[1]) ** 2 - abs(a[0]) ** 2  # <sigma_z>, up minus down
    # uniform-sphere moments: mean 0, second moment 1/3
    assert abs(z1.mean()) < 0.01
    assert abs((z1 ** 2).mean() - 1 / 3) < 0.01


def test_system_params_reduced_quantities():
    p = SystemParams(e_q=0.1, e_c=0.1, e_qp=0.1, j1=0.05, j2=0.025)
    assert p.r == pytest.approx(1.0)
    assert p.j1p == pytest.approx(1.0)
    assert p.j2p == pytest.approx(0.5)
    zero_ec = SystemParams(e_q=0.1, e_c=0.0, e_qp=0.1, j1=0.05, j2=0.05)
    with pytest.raises(ValueError):
        _ = zero_ec.r


def test_system_params_alpha_range():
    with pytest.raises(ValueError):
        SystemParams(e_q=0.1, e_c=0.1, e_qp=0.1, j1=0.0, j2=0.0, alpha=1.5)


def test_check_density_matrix():
    rho = np.eye(16, dtype=complex) / 16
    assert check_density_matrix(rho)
    bad = rho.copy()
    bad[0, 1] = 1.0
    with pytest.raises(ValueError):
        check_density_matrix(bad)
    with pytest.raises(ValueError):
        check_density_matrix(2 * rho)


def test_dag_is_conjugate_transpose(rng):
    a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    assert np.array_equal(dag(a), a.conj().T)
