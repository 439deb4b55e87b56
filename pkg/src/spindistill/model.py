"""Spin Hamiltonian, operators, and the joint eigenbasis.

Everything is built in the x-product basis: basis states are simultaneous
eigenstates of the central S^x and of every bath I^x_i, ordered so that
site index 0 is the central spin and bit value 0 means x-projection +1/2.
In this basis the total x-spin I^x_tot is diagonal from the start, so the
joint diagonalization of H_spin and I^x_tot reduces to independent
Hermitian blocks, one per total-m sector.

The Hamiltonian is

    H_spin = sum_i J_i S.I_i  +  h S^x  +  z h sum_i I^x_i

with hbar = 1 and all energies in units of J_Q.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field, replace

import numpy as np
import scipy.linalg

from .couplings import CouplingSet, generate_couplings
from .errors import CapacityError, DiagonalizationError, ParameterError

DEFAULT_T_REP = 4.0 * math.pi
DEFAULT_GAMMA = 1.25
DEFAULT_Z = 1e-3
DEFAULT_J_MAX = 0.02

#: refuse larger baths unless explicitly overridden (D = 4^(N+1) superoperator
#: entries grow to gigabytes beyond this)
MAX_BATH_SIZE = 6

# Single-site spin-1/2 matrices in the x eigenbasis, ordered (|+x>, |-x>).
# The ladder operators S^[+-] stay defined with respect to the z axis
# (the pulse couples |up_z> to the trion), hence their dense form here.
_SX = 0.5 * np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
_SY = 0.5 * np.array([[0.0, 1.0j], [-1.0j, 0.0]], dtype=complex)
_SZ = 0.5 * np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
_SP = _SX + 1.0j * _SY
_SM = _SX - 1.0j * _SY


@dataclass(frozen=True)
class ModelParams:
    """All physical parameters of the pulsed model, in units of J_Q.

    gamma is the Lindblad prefactor, so the trion decay rate is 2*gamma.
    epsilon (the trion energy) only matters for the brute-force integrator;
    the one-period map is independent of it.
    """

    couplings: CouplingSet
    h: float
    z: float = DEFAULT_Z
    gamma: float = DEFAULT_GAMMA
    t_rep: float = DEFAULT_T_REP
    epsilon: float = 0.0

    def __post_init__(self) -> None:
        if not (self.gamma > 0.0):
            raise ParameterError("gamma must be positive")
        if not (self.t_rep > 0.0):
            raise ParameterError("t_rep must be positive")
        if 2.0 * self.gamma * self.t_rep < 20.0:
            raise ParameterError(
                "2*gamma*t_rep >= 20 required: all trions must decay "
                "between consecutive pulses"
            )
        if not (self.z > 0.0):
            raise ParameterError("g-factor ratio z must be positive")
        if not math.isfinite(self.h):
            raise ParameterError("field h must be finite")

    @property
    def n_bath(self) -> int:
        return self.couplings.n

    @property
    def dim(self) -> int:
        """Hilbert dimension d = 2^(N+1) of central spin plus bath."""
        return 2 ** (self.couplings.n + 1)

    def with_field(self, h: float) -> "ModelParams":
        return replace(self, h=h)

    def fingerprint(self) -> str:
        """Stable hash of all parameters, used to tag derived artifacts."""
        payload = json.dumps(
            {
                "kind": self.couplings.kind,
                "values": [repr(v) for v in self.couplings.values],
                "h": repr(self.h),
                "z": repr(self.z),
                "gamma": repr(self.gamma),
                "t_rep": repr(self.t_rep),
                "epsilon": repr(self.epsilon),
            },
            sort_keys=True,
        )
        return hashlib.sha256(payload.encode()).hexdigest()[:16]


def default_params(
    n: int,
    h: float,
    kind: str = "uniform",
    j_max: float = DEFAULT_J_MAX,
    alpha: float | None = None,
    **kwargs,
) -> ModelParams:
    """Reference parameter set: T_rep = 4*pi, 2*gamma = 2.5, z = 1e-3."""
    couplings = CouplingSet.empty() if n == 0 else generate_couplings(kind, n, j_max, alpha)
    return ModelParams(couplings=couplings, h=h, **kwargs)


@dataclass
class SpinOperators:
    """Dense operator matrices in the x-product basis."""

    params: ModelParams
    dim: int
    sx: np.ndarray
    sy: np.ndarray
    sz: np.ndarray
    sp: np.ndarray
    sm: np.ndarray
    ix: list[np.ndarray] = field(repr=False, default_factory=list)
    ix_tot: np.ndarray = None
    overhauser: tuple[np.ndarray, np.ndarray, np.ndarray] = None
    h_spin: np.ndarray = None
    basis_tag: str = "xprod"


def _site_operator(op: np.ndarray, site: int, n_sites: int) -> np.ndarray:
    """Embed a single-site 2x2 operator into the full product space."""
    left = np.eye(2**site)
    right = np.eye(2 ** (n_sites - site - 1))
    return np.kron(np.kron(left, op), right).astype(complex)


def build_spin_operators(params: ModelParams, allow_large: bool = False) -> SpinOperators:
    """Assemble all spin operators and H_spin in the x-product basis."""
    n = params.n_bath
    if n > MAX_BATH_SIZE and not allow_large:
        raise CapacityError(
            f"bath size N={n} exceeds the default budget of {MAX_BATH_SIZE}; "
            "pass allow_large=True to override"
        )
    n_sites = n + 1
    d = 2**n_sites

    sx = _site_operator(_SX, 0, n_sites)
    sy = _site_operator(_SY, 0, n_sites)
    sz = _site_operator(_SZ, 0, n_sites)
    sp = _site_operator(_SP, 0, n_sites)
    sm = _site_operator(_SM, 0, n_sites)

    ix = [_site_operator(_SX, i + 1, n_sites) for i in range(n)]
    iy = [_site_operator(_SY, i + 1, n_sites) for i in range(n)]
    iz = [_site_operator(_SZ, i + 1, n_sites) for i in range(n)]

    j = params.couplings.values
    ax = sum((j[i] * ix[i] for i in range(n)), np.zeros((d, d), dtype=complex))
    ay = sum((j[i] * iy[i] for i in range(n)), np.zeros((d, d), dtype=complex))
    az = sum((j[i] * iz[i] for i in range(n)), np.zeros((d, d), dtype=complex))

    ix_tot = sx + sum(ix, np.zeros((d, d), dtype=complex))

    h_cs = sx @ ax + sy @ ay + sz @ az
    h_ez = params.h * sx
    h_nz = params.z * params.h * sum(ix, np.zeros((d, d), dtype=complex))
    h_spin = h_cs + h_ez + h_nz

    return SpinOperators(
        params=params,
        dim=d,
        sx=sx,
        sy=sy,
        sz=sz,
        sp=sp,
        sm=sm,
        ix=ix,
        ix_tot=ix_tot,
        overhauser=(ax, ay, az),
        h_spin=h_spin,
    )


@dataclass
class EigenBasis:
    """Joint eigenbasis of H_spin and I^x_tot.

    Columns of U are the eigenvectors expressed in the x-product basis;
    U^dag H U = diag(energies) and U^dag I^x_tot U = diag(m_values).
    States are sorted by (m ascending, E ascending).
    """

    energies: np.ndarray
    m_values: np.ndarray
    u: np.ndarray
    sector_index: np.ndarray
    params: ModelParams

    @property
    def dim(self) -> int:
        return self.energies.size

    def to_eigenbasis(self, mat_x: np.ndarray) -> np.ndarray:
        """Operator/state from the x-product basis into the eigenbasis."""
        return self.u.conj().T @ mat_x @ self.u

    def to_xproduct(self, mat_e: np.ndarray) -> np.ndarray:
        """Operator/state from the eigenbasis back to the x-product basis."""
        return self.u @ mat_e @ self.u.conj().T


def _sector_members(n_sites: int) -> list[tuple[float, np.ndarray]]:
    """x-product basis indices grouped by total m, ascending in m.

    m = (n_sites - 2*popcount)/2 because bit value 1 marks x-projection
    -1/2; the sector with k up-spins has dimension binomial(n_sites, k).
    """
    idx = np.arange(2**n_sites)
    popcount = np.array([bin(b).count("1") for b in idx])
    sectors = []
    for down in range(n_sites, -1, -1):
        members = idx[popcount == down]
        m = 0.5 * (n_sites - 2 * down)
        sectors.append((m, members))
    return sectors


def joint_eigenbasis(ops: SpinOperators) -> EigenBasis:
    """Diagonalize H_spin blockwise inside each m-sector.

    Degenerate energies inside one sector keep the diagonalizer's
    orthonormal choice; the combined list is stably sorted by (m, E).
    """
    n_sites = ops.params.n_bath + 1
    d = ops.dim
    h = ops.h_spin

    u = np.zeros((d, d), dtype=complex)
    energies = np.empty(d)
    m_values = np.empty(d)
    sector_index = np.empty(d, dtype=int)

    col = 0
    for k, (m, members) in enumerate(_sector_members(n_sites)):
        block = h[np.ix_(members, members)]
        evals, evecs = scipy.linalg.eigh(block)
        nsec = members.size
        u[members, col : col + nsec] = evecs
        energies[col : col + nsec] = evals
        m_values[col : col + nsec] = m
        sector_index[col : col + nsec] = k
        col += nsec

    h_diag = u.conj().T @ h @ u
    resid = np.linalg.norm(h_diag - np.diag(np.diag(h_diag)))
    if resid > 1e-9:
        raise DiagonalizationError(
            f"off-diagonal residual {resid:.3e} after block diagonalization"
        )

    return EigenBasis(
        energies=energies,
        m_values=m_values,
        u=u,
        sector_index=sector_index,
        params=ops.params,
    )


def dump_eigenbasis(basis: EigenBasis, path) -> None:
    """Debug dump of (E, m, U, couplings) as JSON."""
    data = {
        "energies": basis.energies.tolist(),
        "m_values": basis.m_values.tolist(),
        "unitary_re": basis.u.real.tolist(),
        "unitary_im": basis.u.imag.tolist(),
        "couplings": list(basis.params.couplings.values),
    }
    with open(path, "w") as fh:
        json.dump(data, fh)
