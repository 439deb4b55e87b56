"""Scalar diagnostics of density matrices.

Entropy uses the natural logarithm with k_B = 1, so the completely
disordered (N+1)-spin mixture has S = (N+1) ln 2.  Polarizations are
normalized to saturate at 1: the bath value is (2/N) sum_i <I^x_i>, the
central value is the vector 2<S^{x,y,z}>.  All operators here live in the
x-product basis; convert eigenbasis states first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import PositivityError, UndefinedObservableError
from .model import SpinOperators

CLAMP_EIGENVALUE = 1e-14
POSITIVITY_FLOOR = -1e-6


@dataclass(frozen=True)
class ObservableSet:
    entropy: float
    bath_polarization_x: float
    central_polarization: tuple[float, float, float]
    entropy_reduction_per_spin: float


def von_neumann_entropy(rho: np.ndarray) -> float:
    """S = -Tr(rho ln rho) in units of k_B.

    Eigenvalues below 1e-14 (including roundoff negatives down to the
    -1e-6 positivity floor) are clamped to zero with 0 ln 0 := 0.
    """
    evals = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))
    lo = evals.min()
    if lo < POSITIVITY_FLOOR:
        raise PositivityError(f"eigenvalue {lo:.3e} below the positivity floor")
    p = evals[evals > CLAMP_EIGENVALUE]
    return float(-(p * np.log(p)).sum())


def bath_polarization_x(rho: np.ndarray, ops: SpinOperators) -> float:
    """Normalized x polarization of the bath, saturating at 1."""
    n = ops.params.n_bath
    if n == 0:
        raise UndefinedObservableError("bath polarization undefined for N = 0")
    total = sum(np.trace(rho @ ix).real for ix in ops.ix)
    return float(2.0 * total / n)


def central_polarization(rho: np.ndarray, ops: SpinOperators) -> tuple[float, float, float]:
    """(2<S^x>, 2<S^y>, 2<S^z>) of the central spin."""
    return (
        float(2.0 * np.trace(rho @ ops.sx).real),
        float(2.0 * np.trace(rho @ ops.sy).real),
        float(2.0 * np.trace(rho @ ops.sz).real),
    )


def initial_entropy(n_bath: int) -> float:
    """Entropy of the completely disordered (N+1)-spin mixture."""
    return (n_bath + 1) * math.log(2.0)


def observable_set(rho_x: np.ndarray, ops: SpinOperators) -> ObservableSet:
    """All diagnostics of a state given in the x-product basis."""
    n = ops.params.n_bath
    s = von_neumann_entropy(rho_x)
    px = bath_polarization_x(rho_x, ops) if n > 0 else float("nan")
    return ObservableSet(
        entropy=s,
        bath_polarization_x=px,
        central_polarization=central_polarization(rho_x, ops),
        entropy_reduction_per_spin=(s - initial_entropy(n)) / (n + 1),
    )
