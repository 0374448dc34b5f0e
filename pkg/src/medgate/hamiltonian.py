"""Rotating-frame Hamiltonians for the driven three-spin system.

Builders return dense complex matrices in the conventions of
:mod:`medgate.core` (orbital x Q x C x Q' ordering, spin-down Zeeman
energy +E). Exchange acts only in the excited orbital block, with
anisotropy alpha interpolating Heisenberg (0) to XY (1) coupling.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (DIM, SPIN_DIM, SystemParams, kron_all, pauli_on,
                   pauli_spin, sigma_z_total, spin_index)

_I2 = np.eye(2, dtype=complex)
_I8 = np.eye(SPIN_DIM, dtype=complex)

# orbital operators extended over the spin factors
PROJ_E = kron_all(np.diag([0.0, 1.0 + 0.0j]), _I2, _I2, _I2)
ORBITAL_FLIP = kron_all(np.array([[0, 1], [1, 0]], dtype=complex), _I2, _I2, _I2)
# optical coupling operator: (|e><g| + |g><e|)/2 tensored with spin identity
DRIVE = 0.5 * ORBITAL_FLIP

# Sigma_z = -1 subspace basis {|010>, |100>, |001>} and its Sigma_z = +1
# partner {|101>, |011>, |110>}, as spin-space indices
H1_BASIS = (spin_index(0, 1, 0), spin_index(1, 0, 0), spin_index(0, 0, 1))
H2_BASIS = (spin_index(1, 0, 1), spin_index(0, 1, 1), spin_index(1, 1, 0))
H1_LABELS = ("|010>", "|100>", "|001>")
H2_LABELS = ("|101>", "|011>", "|110>")


def _zeeman(params: SystemParams, dim):
    op = pauli_spin if dim == SPIN_DIM else pauli_on
    # spin-down carries +E_j (see core module docstring)
    return -(params.e_q * op("Q", "z") + params.e_c * op("C", "z")
             + params.e_qp * op("Q'", "z"))


def _exchange(params: SystemParams, dim):
    op = pauli_spin if dim == SPIN_DIM else pauli_on
    h = np.zeros((dim, dim), dtype=complex)
    for j, site in ((params.j1, "Q"), (params.j2, "Q'")):
        h += j * (op(site, "x") @ op("C", "x") + op(site, "y") @ op("C", "y")
                  + (1.0 - params.alpha) * op(site, "z") @ op("C", "z"))
    return h


def build_full(params: SystemParams, omega, delta=None):
    """Full 16-dim rotating-frame Hamiltonian at Rabi frequency omega.

    delta overrides params.delta when given; both exchange and detuning
    live only in the excited orbital block.
    """
    if delta is None:
        delta = params.delta
    h = _zeeman(params, DIM) + omega * DRIVE
    he_block = _exchange(params, DIM) + delta * np.eye(DIM)
    return h + PROJ_E @ he_block @ PROJ_E


def build_excited(params: SystemParams):
    """8-dim spin Hamiltonian of the excited orbital sector, Eq-form.

    Excludes the detuning offset: the dynamic gate runs on resonance and
    the analytic phases are defined without it. Commutes with Sigma_z
    for any alpha.
    """
    return _zeeman(params, SPIN_DIM) + _exchange(params, SPIN_DIM)


@dataclass(frozen=True)
class SubspaceBlocks:
    """Sigma_z blocks of the excited-sector Hamiltonian.

    h1 is in the basis {|010>, |100>, |001>} (Sigma_z = -1), h2 in
    {|101>, |011>, |110>} (Sigma_z = +1); h0 and h3 are the |000> and
    |111> energies.
    """

    h0: float
    h1: np.ndarray
    h2: np.ndarray
    h3: float
    basis_h1: tuple = H1_LABELS
    basis_h2: tuple = H2_LABELS


def subspace_blocks(params: SystemParams):
    """Analytic Sigma_z blocks, valid for equal qubit g-factors.

    h1 = E_C*[[R, J1', J2'], [J1', 1, 0], [J2', 0, 1]] and h2 its
    Sigma_z = +1 partner with the diagonal negated.
    """
    if params.e_q != params.e_qp:
        raise ValueError("analytic blocks assume E_Q == E_Q'; "
                         "use build_excited for the general case")
    ec = params.e_c
    r, j1p, j2p = params.r, params.j1p, params.j2p
    h1 = ec * np.array([[r, j1p, j2p], [j1p, 1.0, 0.0], [j2p, 0.0, 1.0]])
    h2 = ec * np.array([[-r, j1p, j2p], [j1p, -1.0, 0.0], [j2p, 0.0, -1.0]])
    h0 = ec * (r + 2.0)
    return SubspaceBlocks(h0=h0, h1=h1, h2=h2, h3=-h0)


def ate_vectors(params: SystemParams):
    """Orthonormal {|A>, |T>, |E>} for the Sigma_z = -1 block.

    |A> = |010>; |T> = (J1'|100> + J2'|001>)/N couples to |A>;
    |E> = (J2'|100> - J1'|001>)/N is an exact eigenvector with
    eigenvalue E_C.
    """
    j1p, j2p = params.j1p, params.j2p
    n = np.hypot(j1p, j2p)
    if n == 0.0:
        raise ValueError("rotation undefined for J1 = J2 = 0")
    a = np.array([1.0, 0.0, 0.0])
    t = np.array([0.0, j1p, j2p]) / n
    e = np.array([0.0, j2p, -j1p]) / n
    return a, t, e


def rotate_h1_to_ate(params: SystemParams):
    """Sigma_z = -1 block rewritten in the {|A>, |T>, |E>} basis.

    Block-diagonal: a coupled 2x2 [[R, q], [q, 1]]*E_C with
    q = sqrt(J1'^2 + J2'^2), plus the decoupled eigenvalue E_C.
    """
    blocks = subspace_blocks(params)
    a, t, e = ate_vectors(params)
    w = np.stack([a, t, e], axis=1)
    return w.T @ blocks.h1 @ w


def sigma_z_commutes(params: SystemParams):
    """Norm of [H_e, Sigma_z]; zero structurally for any alpha."""
    he = build_excited(params)
    sz = sigma_z_total(SPIN_DIM)
    return float(np.abs(he @ sz - sz @ he).max())
