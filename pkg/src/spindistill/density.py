"""Density matrices with an explicit basis tag.

The one-period map acts on matrices expressed in the joint eigenbasis;
observables act in the x-product basis.  Mixing the two is a contract
error, so states carry a tag ("eigen" or "xprod") checked at use sites.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, PositivityError

HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-10
EIGENVALUE_FLOOR = -1e-9


@dataclass
class DensityMatrix:
    matrix: np.ndarray
    basis: str = "eigen"

    def __post_init__(self) -> None:
        self.matrix = np.asarray(self.matrix, dtype=complex)
        if self.basis not in ("eigen", "xprod"):
            raise ParameterError(f"unknown basis tag {self.basis!r}")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def validate(self, check_positivity: bool = True) -> "DensityMatrix":
        m = self.matrix
        herm = np.linalg.norm(m - m.conj().T)
        if herm > HERMITICITY_TOL * max(1.0, np.linalg.norm(m)):
            raise ParameterError(f"not Hermitian: residual {herm:.3e}")
        tr = np.trace(m)
        if abs(tr - 1.0) > TRACE_TOL:
            raise ParameterError(f"trace {tr} differs from 1")
        if check_positivity:
            lo = np.linalg.eigvalsh(0.5 * (m + m.conj().T)).min()
            if lo < EIGENVALUE_FLOOR:
                raise PositivityError(f"negative eigenvalue {lo:.3e}")
        return self


def maximally_mixed(d: int, basis: str = "eigen") -> DensityMatrix:
    """The completely disordered mixture 1/d."""
    return DensityMatrix(np.eye(d, dtype=complex) / d, basis=basis)


def random_density_matrix(
    d: int, rng: np.random.Generator, basis: str = "eigen"
) -> DensityMatrix:
    """Full-rank random state rho = A A^dag / Tr(A A^dag)."""
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    rho = a @ a.conj().T
    return DensityMatrix(rho / np.trace(rho).real, basis=basis)


def vec(mat: np.ndarray) -> np.ndarray:
    """Row-major flattening; pair (alpha, beta) lands at mu = alpha*d + beta."""
    return np.asarray(mat).reshape(-1)


def unvec(v: np.ndarray) -> np.ndarray:
    d = int(round(np.sqrt(v.size)))
    return np.asarray(v).reshape(d, d)
