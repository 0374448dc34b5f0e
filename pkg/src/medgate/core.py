"""Hilbert-space bookkeeping for the three-spin + orbital model.

The system is one optically active control spin C (orbital states |g>, |e>)
and two qubit spins Q, Q'. The full space is

    orbital (2)  x  Q (2)  x  C (2)  x  Q' (2)   ->   16 dimensions,

flattened as  index = 8*orbital + 4*Q + 2*C + Q'  with orbital g=0, e=1 and
spin bits 0=down, 1=up. Spin-up is the +1 eigenstate of sigma_z. The
restricted spin space (orbital traced out or pinned) uses the same spin
packing on 8 dimensions.

Zeeman sign convention used by every Hamiltonian builder in this package:
spin-down carries energy +E_j, spin-up -E_j (i.e. the Zeeman term is
-E_j * sigma_z^j). The Sigma_z = -1 ground-orbital block then reads
E_C*[[R, J1', J2'], [J1', 1, 0], [J2', 0, 1]] in the basis
{|010>, |100>, |001>}, which is the form all analytic gate phases assume.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DIM = 16
SPIN_DIM = 8

# sites of the three spins, in tensor order Q, C, Q'
SITE_Q, SITE_C, SITE_QP = 0, 1, 2
SITES = {"Q": SITE_Q, "C": SITE_C, "Qp": SITE_QP, "Q'": SITE_QP}

# logical qubit states |QQ'> with C=|0>, orbital |g>: |00>,|01>,|10>,|11>
LOGICAL_INDICES = (0, 1, 4, 5)

_I2 = np.eye(2, dtype=complex)
# single-spin operators in (|down>, |up>) ordering; up is the +1 eigenstate
_SX = np.array([[0, 1], [1, 0]], dtype=complex)
_SY = np.array([[0, 1j], [-1j, 0]], dtype=complex)
_SZ = np.array([[-1, 0], [0, 1]], dtype=complex)
_PAULI = {"x": _SX, "y": _SY, "z": _SZ}


def kron_all(*factors):
    """Kronecker product of a sequence of matrices, left to right."""
    out = np.array([[1.0 + 0.0j]])
    for f in factors:
        out = np.kron(out, f)
    return out


def flat_index(orbital, spin_q, spin_c, spin_qp):
    """Pack (orbital, Q, C, Q') occupation bits into the flat 16-dim index."""
    for b in (orbital, spin_q, spin_c, spin_qp):
        if b not in (0, 1):
            raise ValueError(f"basis bits must be 0 or 1, got {b}")
    return 8 * orbital + 4 * spin_q + 2 * spin_c + spin_qp


def unpack_index(index):
    """Inverse of flat_index: returns (orbital, Q, C, Q')."""
    if not 0 <= index < DIM:
        raise ValueError(f"index out of range: {index}")
    return (index >> 3) & 1, (index >> 2) & 1, (index >> 1) & 1, index & 1


def spin_index(spin_q, spin_c, spin_qp):
    """Flat index within the 8-dim three-spin space."""
    return 4 * spin_q + 2 * spin_c + spin_qp


def basis_ket(orbital, spin_q, spin_c, spin_qp):
    v = np.zeros(DIM, dtype=complex)
    v[flat_index(orbital, spin_q, spin_c, spin_qp)] = 1.0
    return v


def spin_ket(spin_q, spin_c, spin_qp):
    v = np.zeros(SPIN_DIM, dtype=complex)
    v[spin_index(spin_q, spin_c, spin_qp)] = 1.0
    return v


def pauli_on(site, axis):
    """Pauli operator on one spin, identity elsewhere (16x16).

    site is "Q", "C" or "Q'" (alias "Qp"); axis is "x", "y" or "z".
    Spin-up is the +1 eigenstate of the z operator.
    """
    if axis not in _PAULI:
        raise ValueError(f"unknown axis {axis!r}")
    s = SITES.get(site, site)
    if s not in (SITE_Q, SITE_C, SITE_QP):
        raise ValueError(f"unknown site {site!r}")
    ops = [_I2, _I2, _I2, _I2]
    ops[1 + s] = _PAULI[axis]
    return kron_all(*ops)


def pauli_spin(site, axis):
    """Pauli operator on one spin within the 8-dim three-spin space."""
    if axis not in _PAULI:
        raise ValueError(f"unknown axis {axis!r}")
    s = SITES.get(site, site)
    ops = [_I2, _I2, _I2]
    ops[s] = _PAULI[axis]
    return kron_all(*ops)


def sigma_z_total(dim=SPIN_DIM):
    """Total spin projection Sigma_z = sz_Q + sz_C + sz_Q' (8- or 16-dim)."""
    if dim == SPIN_DIM:
        return sum(pauli_spin(s, "z") for s in ("Q", "C", "Q'"))
    if dim == DIM:
        return sum(pauli_on(s, "z") for s in ("Q", "C", "Q'"))
    raise ValueError(f"dim must be {SPIN_DIM} or {DIM}")


@dataclass(frozen=True)
class SystemParams:
    """Static model parameters, all in angular-frequency ps^-1.

    e_q, e_c, e_qp are the Zeeman splittings of Q, C, Q'; j1 (j2) couples Q
    (Q') to the excited control; alpha interpolates Heisenberg (0) to XY (1);
    delta is the laser detuning entering the excited orbital block.
    """

    e_q: float
    e_c: float
    e_qp: float
    j1: float
    j2: float
    alpha: float = 1.0
    delta: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in [0, 1], got {self.alpha}")

    def _require_ec(self):
        if self.e_c == 0.0:
            raise ValueError("reduced quantities need E_C != 0")

    @property
    def r(self):
        """R = 2*E_Q/E_C - 1."""
        self._require_ec()
        return 2.0 * self.e_q / self.e_c - 1.0

    @property
    def j1p(self):
        """J1' = 2*J1/E_C."""
        self._require_ec()
        return 2.0 * self.j1 / self.e_c

    @property
    def j2p(self):
        """J2' = 2*J2/E_C."""
        self._require_ec()
        return 2.0 * self.j2 / self.e_c

    def with_(self, **changes):
        from dataclasses import replace

        return replace(self, **changes)


def params_from_reduced(e_c, r, j1p, j2p, alpha=1.0, delta=0.0):
    """Build SystemParams from (E_C, R, J1', J2') with E_Q = E_Q'."""
    e_q = 0.5 * e_c * (r + 1.0)
    return SystemParams(e_q=e_q, e_c=e_c, e_qp=e_q,
                        j1=0.5 * j1p * e_c, j2=0.5 * j2p * e_c,
                        alpha=alpha, delta=delta)


def dag(a):
    return a.conj().T


def partial_trace(rho, keep, dims):
    """Trace out all subsystem factors not listed in `keep`.

    rho is a density matrix on a tensor product with factor dimensions
    `dims` (left to right); `keep` lists the factor positions to retain,
    in their original order. Returns the reduced density matrix.
    """
    dims = tuple(int(d) for d in dims)
    n = len(dims)
    keep = tuple(sorted(int(k) for k in keep))
    if any(k < 0 or k >= n for k in keep) or len(set(keep)) != len(keep):
        raise ValueError(f"invalid subsystem labels {keep} for {n} factors")
    total = int(np.prod(dims))
    if rho.shape != (total, total):
        raise ValueError(f"rho shape {rho.shape} does not match dims {dims}")
    t = rho.reshape(dims + dims)
    # trace highest factor first; after each trace the ket/bra axis of
    # factor k sit at positions k and k + (remaining factor count)
    remaining = n
    for k in sorted(set(range(n)) - set(keep), reverse=True):
        t = np.trace(t, axis1=k, axis2=k + remaining)
        remaining -= 1
    d_keep = int(np.prod([dims[k] for k in keep])) if keep else 1
    return t.reshape(d_keep, d_keep)


def purity(rho):
    """tr(rho^2), real part."""
    return float(np.trace(rho @ rho).real)


def haar_state(dim, rng):
    """Haar-random pure state of the given dimension."""
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def haar_product_pair(rng):
    """Two independent Haar-random single-qubit states.

    Pass a seeded np.random.Generator; no global RNG state is touched.
    """
    return haar_state(2, rng), haar_state(2, rng)


def is_hermitian(a, tol=1e-12):
    return bool(np.abs(a - dag(a)).max() <= tol)


def is_unitary(a, tol=1e-12):
    return bool(np.abs(dag(a) @ a - np.eye(a.shape[0])).max() <= tol)


def check_density_matrix(rho, tol=1e-10):
    """Raise if rho is not Hermitian, unit-trace and PSD within tol."""
    if not is_hermitian(rho, tol):
        raise ValueError("density matrix is not Hermitian")
    tr = np.trace(rho).real
    if abs(tr - 1.0) > tol:
        raise ValueError(f"density matrix trace {tr} != 1")
    w = np.linalg.eigvalsh(rho)
    if w.min() < -tol:
        raise ValueError(f"density matrix has negative eigenvalue {w.min()}")
    return True
