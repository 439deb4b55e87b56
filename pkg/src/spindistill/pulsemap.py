"""Closed-form assembly of the one-period superoperator.

The map M sends the spin density matrix just before one pulse to the one
just before the next.  In the joint eigenbasis of H_spin and I^x_tot its
matrix elements have closed form (pair indices mu = alpha*d + beta,
primed = row):

    M_{mu',mu} = 1/2 exp(-i (E_a' - E_b') T_rep) * {
          2 (S-S+)_{a'a} (S-S+)_{bb'}
        + 2 G_{a'b'}(0) [ (S+S-)_{a'a} (S+S-)_{bb'} + S-_{a'a} S+_{bb'} ]
        + G_{a'b'}(+1) P_{a'a} conj(Q_{b'b})
        + G_{a'b'}(-1) Q_{a'a} conj(P_{b'b}) }

with P = (S+ + 1)S-, Q = (S+ - 1)S- and the resolvent-like factors

    G_{ab}(tau) = gamma / (2 gamma - i [E_a - E_b + z h (m_b - m_a + tau)]).

The G factors come from integrating the decaying trion feed-back to
infinity, valid because 2*gamma*T_rep >= 20 keeps the cut-off error below
~2e-9.  Each elementary term is a Kronecker product over the (row-block,
column) structure, so assembly loops only over row blocks with the six
ingredient matrices precomputed once.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .density import DensityMatrix, unvec, vec
from .errors import BasisMismatchError, CapacityError
from .model import EigenBasis, ModelParams, SpinOperators

#: assembly refuses superoperators above this dimension unless overridden
#: (D = 4096 is ~268 MiB dense; the next size is ~4.3 GiB)
MAX_DENSE_DIM = 4096


def g_factor(
    alpha_idx: int, beta_idx: int, tau: int, basis: EigenBasis, params: ModelParams
) -> complex:
    """Trion feed-back factor G_{alpha beta}(tau), tau in {-1, 0, +1}.

    The denominator never vanishes for gamma > 0, and
    G(alpha, beta, tau) = conj(G(beta, alpha, -tau)).
    """
    e = basis.energies
    m = basis.m_values
    detune = e[alpha_idx] - e[beta_idx] + params.z * params.h * (
        m[beta_idx] - m[alpha_idx] + tau
    )
    return params.gamma / (2.0 * params.gamma - 1j * detune)


def _g_matrix(basis: EigenBasis, params: ModelParams, tau: int) -> np.ndarray:
    e = basis.energies
    m = basis.m_values
    detune = e[:, None] - e[None, :] + params.z * params.h * (
        m[None, :] - m[:, None] + tau
    )
    return params.gamma / (2.0 * params.gamma - 1j * detune)


@dataclass
class PulseSuperoperator:
    """Dense D x D one-period map over vectorized d x d matrices."""

    d: int
    entries: np.ndarray
    basis: EigenBasis
    params: ModelParams
    params_hash: str

    @property
    def dim(self) -> int:
        """Superoperator dimension D = d^2."""
        return self.d * self.d


def build_pulse_map(
    params: ModelParams,
    basis: EigenBasis,
    ops: SpinOperators,
    allow_large: bool = False,
) -> PulseSuperoperator:
    """Assemble M from the closed-form matrix elements.

    Deterministic: identical params produce bitwise identical matrices.
    """
    d = basis.dim
    dim = d * d
    if dim > MAX_DENSE_DIM and not allow_large:
        raise CapacityError(
            f"superoperator dimension D={dim} exceeds budget {MAX_DENSE_DIM}; "
            "pass allow_large=True to override"
        )

    sp = basis.to_eigenbasis(ops.sp)
    sm = basis.to_eigenbasis(ops.sm)
    sm_sp = sm @ sp
    sp_sm = sp @ sm
    eye = np.eye(d, dtype=complex)
    p_mat = (sp + eye) @ sm
    q_mat = (sp - eye) @ sm

    e = basis.energies
    phase = np.exp(-1j * (e[:, None] - e[None, :]) * params.t_rep)
    g0 = _g_matrix(basis, params, 0)
    gp = _g_matrix(basis, params, +1)
    gm = _g_matrix(basis, params, -1)

    sm_sp_t = sm_sp.T.copy()
    sp_sm_t = sp_sm.T.copy()
    sp_t = sp.T.copy()
    q_conj = q_mat.conj()
    p_conj = p_mat.conj()

    entries = np.empty((dim, dim), dtype=complex)
    for a in range(d):
        row_a = slice(a * d, (a + 1) * d)
        block = 2.0 * np.kron(sm_sp[a][None, :], sm_sp_t)
        block += (2.0 * g0[a])[:, None] * (
            np.kron(sp_sm[a][None, :], sp_sm_t) + np.kron(sm[a][None, :], sp_t)
        )
        block += gp[a][:, None] * np.kron(p_mat[a][None, :], q_conj)
        block += gm[a][:, None] * np.kron(q_mat[a][None, :], p_conj)
        entries[row_a] = (0.5 * phase[a])[:, None] * block

    return PulseSuperoperator(
        d=d,
        entries=entries,
        basis=basis,
        params=params,
        params_hash=params.fingerprint(),
    )


def apply_map(pmap: PulseSuperoperator, rho: DensityMatrix) -> DensityMatrix:
    """One pulse period: unvec(M vec(rho)).  Requires the eigenbasis tag."""
    if rho.basis != "eigen":
        raise BasisMismatchError(
            "apply_map acts in the eigenbasis; convert the state first"
        )
    if rho.dim != pmap.d:
        raise BasisMismatchError("state dimension does not match the map")
    out = unvec(pmap.entries @ vec(rho.matrix))
    return DensityMatrix(out, basis="eigen")


def save_pulse_map(pmap: PulseSuperoperator, path: str) -> None:
    """Binary dump (row-major little-endian complex128) plus JSON sidecar."""
    data = np.ascontiguousarray(pmap.entries).astype("<c16")
    with open(path, "wb") as fh:
        fh.write(data.tobytes())
    sidecar = {
        "d": pmap.d,
        "params": {
            "kind": pmap.params.couplings.kind,
            "couplings": list(pmap.params.couplings.values),
            "h": pmap.params.h,
            "z": pmap.params.z,
            "gamma": pmap.params.gamma,
            "t_rep": pmap.params.t_rep,
            "epsilon": pmap.params.epsilon,
        },
        "params_hash": pmap.params_hash,
    }
    with open(str(path) + ".json", "w") as fh:
        json.dump(sidecar, fh, indent=1)


def load_pulse_map_entries(path: str) -> tuple[np.ndarray, dict]:
    """Read back a dumped map; returns (entries, sidecar)."""
    with open(str(path) + ".json") as fh:
        sidecar = json.load(fh)
    d = sidecar["d"]
    raw = np.fromfile(path, dtype="<c16")
    return raw.reshape(d * d, d * d), sidecar
