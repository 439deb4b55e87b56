"""Brute-force reference dynamics with the trion kept explicit.

Validates the closed-form one-period map against a direct integration of
the full Lindblad equation on the (3 * 2^N)-dimensional space spanned by
the central states (up, down, trion) and the bath:

    d rho/dt = -i [H, rho] - gamma (c+c rho + rho c+c - 2 c rho c+)

with c = |up><T| and H = H_spin + epsilon |T><T| (spin operators act as
zero on the trion).  Integration is classic fixed-step 4th order; the
closed-form map rests on analytic solutions, so the two routes share
nothing but the Hamiltonian.

Trion-coherence blocks are evolved, not truncated: their irrelevance for
the reduced one-period map is a result to verify, not an assumption.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .density import DensityMatrix
from .errors import BasisMismatchError, CapacityError, ParameterError, RegimeViolationError
from .model import EigenBasis, ModelParams, SpinOperators, _SX, _SY, _SZ, _site_operator
from .observables import bath_polarization_x, central_polarization, von_neumann_entropy
from .pulsemap import PulseSuperoperator

#: the oracle exists to validate, not to scale
MAX_ORACLE_BATH = 3

DEFAULT_DT = 1e-3

# Central 3-level basis ordering: (up, down, T), z quantization.
_E = [[np.zeros((3, 3), dtype=complex) for _ in range(3)] for _ in range(3)]
for _i in range(3):
    for _j in range(3):
        _E[_i][_j][_i, _j] = 1.0


@dataclass
class TrionSpace:
    """Operators on the full central-3-level x bath space.

    The central factor uses the z basis (the pulse and the decay channel
    are diagonal constructions there); the bath keeps the x-product basis.
    ``embed`` maps spin-sector states from the model's x-product basis into
    the full space: rho_full = embed @ rho_x @ embed^dag.
    """

    params: ModelParams
    n_bath: int
    dim: int
    h_full: np.ndarray
    c_op: np.ndarray
    cdc: np.ndarray
    u_pulse: np.ndarray
    embed: np.ndarray


def build_trion_space(params: ModelParams, allow_large: bool = False) -> TrionSpace:
    n = params.n_bath
    if n > MAX_ORACLE_BATH and not allow_large:
        raise CapacityError(
            f"oracle restricted to N <= {MAX_ORACLE_BATH} by default "
            "(it validates, it does not scale)"
        )
    nb = 2**n
    eye_b = np.eye(nb, dtype=complex)

    sx3 = 0.5 * (_E[0][1] + _E[1][0])
    sy3 = 0.5 * (-1j * _E[0][1] + 1j * _E[1][0])
    sz3 = 0.5 * (_E[0][0] - _E[1][1])

    ix = [_site_operator(_SX, i, n) for i in range(n)]
    iy = [_site_operator(_SY, i, n) for i in range(n)]
    iz = [_site_operator(_SZ, i, n) for i in range(n)]

    j = params.couplings.values
    h_full = np.zeros((3 * nb, 3 * nb), dtype=complex)
    for i in range(n):
        h_full += j[i] * (
            np.kron(sx3, ix[i]) + np.kron(sy3, iy[i]) + np.kron(sz3, iz[i])
        )
    h_full += params.h * np.kron(sx3, eye_b)
    ix_bath = sum(ix, np.zeros((nb, nb), dtype=complex))
    h_full += params.z * params.h * np.kron(np.eye(3, dtype=complex), ix_bath)
    h_full += params.epsilon * np.kron(_E[2][2], eye_b)

    c_op = np.kron(_E[0][2], eye_b)
    cdc = np.kron(_E[2][2], eye_b)
    u_pulse = np.kron(_E[0][2] + _E[2][0] + _E[1][1], eye_b)

    # central x -> z (columns are the x eigenstates), then up/down -> 3-level
    h2 = np.array([[1.0, 1.0], [1.0, -1.0]]) / math.sqrt(2.0)
    lift = np.zeros((3, 2))
    lift[0, 0] = lift[1, 1] = 1.0
    embed = np.kron(lift @ h2, eye_b).astype(complex)

    return TrionSpace(
        params=params,
        n_bath=n,
        dim=3 * nb,
        h_full=h_full,
        c_op=c_op,
        cdc=cdc,
        u_pulse=u_pulse,
        embed=embed,
    )


@dataclass
class FullStateDensity:
    """Density matrix on the full trion-extended space."""

    matrix: np.ndarray
    n_bath: int

    @property
    def nb(self) -> int:
        return 2**self.n_bath

    def validate(self) -> "FullStateDensity":
        herm = np.linalg.norm(self.matrix - self.matrix.conj().T)
        if herm > 1e-10 * max(1.0, np.linalg.norm(self.matrix)):
            raise ParameterError(f"full state not Hermitian: residual {herm:.3e}")
        tr = np.trace(self.matrix)
        if abs(tr - 1.0) > 1e-9:
            raise ParameterError(f"full state trace {tr} differs from 1")
        return self

    def block(self, row: int, col: int) -> np.ndarray:
        """(row, col) central-index block; 2 is the trion."""
        nb = self.nb
        return self.matrix[row * nb : (row + 1) * nb, col * nb : (col + 1) * nb]

    def trion_population(self) -> float:
        return float(np.trace(self.block(2, 2)).real)

    def spin_block_x(self, space: TrionSpace) -> np.ndarray:
        """Spin-sector reduced matrix back in the model's x-product basis."""
        return space.embed.conj().T @ self.matrix @ space.embed


def embed_spin_state(rho_x: np.ndarray, space: TrionSpace) -> FullStateDensity:
    """Lift a trion-free spin state (x-product basis) into the full space."""
    full = space.embed @ rho_x @ space.embed.conj().T
    return FullStateDensity(matrix=full, n_bath=space.n_bath)


def apply_pulse_full(rho_full: FullStateDensity, space: TrionSpace) -> FullStateDensity:
    """Conjugate by the pulse unitary (it is also Hermitian and involutive)."""
    u = space.u_pulse
    return FullStateDensity(matrix=u @ rho_full.matrix @ u, n_bath=rho_full.n_bath)


def _lindblad_rhs(rho: np.ndarray, h: np.ndarray, c: np.ndarray, cdc: np.ndarray,
                  gamma: float) -> np.ndarray:
    comm = h @ rho - rho @ h
    diss = cdc @ rho + rho @ cdc - 2.0 * (c @ rho @ c.conj().T)
    return -1j * comm - gamma * diss


def _rk4_evolve(rho: np.ndarray, h: np.ndarray, c: np.ndarray, cdc: np.ndarray,
                gamma: float, duration: float, dt: float) -> np.ndarray:
    """Classic fixed-step RK4; the step is trimmed to land exactly on duration."""
    steps = max(1, round(duration / dt))
    if steps > 10**8:
        raise CapacityError(f"{steps} integrator steps exceed the step budget")
    step = duration / steps
    for _ in range(steps):
        k1 = _lindblad_rhs(rho, h, c, cdc, gamma)
        k2 = _lindblad_rhs(rho + 0.5 * step * k1, h, c, cdc, gamma)
        k3 = _lindblad_rhs(rho + 0.5 * step * k2, h, c, cdc, gamma)
        k4 = _lindblad_rhs(rho + step * k3, h, c, cdc, gamma)
        rho = rho + (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return rho


def evolve_lindblad(
    rho_full: FullStateDensity,
    duration: float,
    params: ModelParams,
    dt: float = DEFAULT_DT,
    space: TrionSpace | None = None,
    gamma: float | None = None,
) -> FullStateDensity:
    """Integrate the full Lindblad equation for the given duration.

    ``gamma`` overrides params.gamma for integrator diagnostics (e.g. the
    dissipation-free Larmor check); ModelParams itself cannot carry
    gamma = 0 because the pulsed regime requires 2*gamma*t_rep >= 20.
    """
    if duration <= 0.0:
        raise ParameterError("duration must be positive")
    if space is None:
        space = build_trion_space(params)
    g = params.gamma if gamma is None else gamma
    out = _rk4_evolve(
        rho_full.matrix.astype(complex), space.h_full, space.c_op, space.cdc,
        g, duration, dt,
    )
    return FullStateDensity(matrix=out, n_bath=rho_full.n_bath)


def one_period_reference(
    rho_s: DensityMatrix,
    params: ModelParams,
    dt: float = DEFAULT_DT,
    basis: EigenBasis | None = None,
    space: TrionSpace | None = None,
    trion_tol: float = 1e-8,
) -> DensityMatrix:
    """Pulse + integrated Lindblad period, reduced back to the spin sector.

    Accepts the state in either tagged basis; eigenbasis input requires the
    EigenBasis for the round trip.  Raises if the residual trion population
    after T_rep shows the decayed-trion regime is violated.
    """
    if space is None:
        space = build_trion_space(params)
    if rho_s.basis == "eigen":
        if basis is None:
            raise BasisMismatchError("eigenbasis input needs the EigenBasis")
        rho_x = basis.to_xproduct(rho_s.matrix)
    else:
        rho_x = rho_s.matrix

    full = embed_spin_state(rho_x, space)
    full = apply_pulse_full(full, space)
    full = evolve_lindblad(full, params.t_rep, params, dt=dt, space=space)

    residual = full.trion_population()
    if abs(residual) > trion_tol:
        raise RegimeViolationError(
            f"residual trion population {residual:.3e} after T_rep"
        )

    out_x = full.spin_block_x(space)
    if rho_s.basis == "eigen":
        return DensityMatrix(basis.to_eigenbasis(out_x), basis="eigen")
    return DensityMatrix(out_x, basis="xprod")


def iterate_pulses(
    rho0: DensityMatrix,
    n: int,
    params: ModelParams,
    stride: int = 1,
    pmap: PulseSuperoperator | None = None,
    basis: EigenBasis | None = None,
    ops: SpinOperators | None = None,
    engine: str = "map",
    dt: float = DEFAULT_DT,
) -> list[tuple]:
    """Observable trajectory over n pulse periods.

    Rows are (pulse_index, entropy, bath_px, central_px, central_py,
    central_pz, trion_residual) sampled every ``stride`` pulses (endpoint
    always included).  The default engine applies the exact one-period
    matrix; engine="integrator" runs the full Lindblad integration per
    period and is only sensible for small n.
    """
    if n < 0:
        raise ParameterError("pulse count must be >= 0")
    if n > 10**6:
        raise CapacityError("trajectories above 1e6 pulses are out of desk scale")
    if engine not in ("map", "integrator"):
        raise ParameterError(f"unknown engine {engine!r}")

    from .model import build_spin_operators, joint_eigenbasis
    from .pulsemap import build_pulse_map

    if ops is None:
        ops = build_spin_operators(params)
    if basis is None:
        basis = joint_eigenbasis(ops)
    if engine == "map" and pmap is None:
        pmap = build_pulse_map(params, basis, ops)
    space = build_trion_space(params) if engine == "integrator" else None

    if rho0.basis == "eigen":
        rho_e = rho0.matrix.copy()
    else:
        rho_e = basis.to_eigenbasis(rho0.matrix)

    d = basis.dim
    rows = []

    def record(k: int, rho_eig: np.ndarray, residual: float) -> None:
        rho_x = basis.to_xproduct(rho_eig)
        s = von_neumann_entropy(rho_x)
        px = bath_polarization_x(rho_x, ops) if params.n_bath > 0 else float("nan")
        cp = central_polarization(rho_x, ops)
        rows.append((k, s, px, cp[0], cp[1], cp[2], residual))

    record(0, rho_e, 0.0)
    residual = 0.0
    for k in range(1, n + 1):
        if engine == "map":
            rho_e = (pmap.entries @ rho_e.reshape(-1)).reshape(d, d)
        else:
            full = embed_spin_state(basis.to_xproduct(rho_e), space)
            full = apply_pulse_full(full, space)
            full = evolve_lindblad(full, params.t_rep, params, dt=dt, space=space)
            residual = full.trion_population()
            rho_e = basis.to_eigenbasis(full.spin_block_x(space))
        if k % stride == 0 or k == n:
            record(k, rho_e, residual)
    return rows


TRAJECTORY_HEADER = (
    "pulse_index,entropy,bath_px,central_px,central_py,central_pz,trion_residual"
)


def write_trajectory_csv(rows: list[tuple], path) -> None:
    with open(path, "w") as fh:
        fh.write(TRAJECTORY_HEADER + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _fmt(v) -> str:
    if isinstance(v, int):
        return str(v)
    return f"{v:.17g}"
