"""Hyperfine coupling sets for the central spin model.

Three parametrized families are supported, all scaled so the largest
coupling equals ``j_max`` (in units of J_Q):

uniform
    J_i = j_max * (sqrt(5) - 2) * (sqrt(5) + 2*(i-1)/(N-1)), an equidistant
    ladder between J_min and j_max; the irrational spacing avoids accidental
    commensurabilities between different couplings.
exponential
    J_i = j_max * exp(-alpha * (i-1)/(N-1)).
gaussian
    J_i = j_max * exp(-alpha * ((i-1)/(N-1))**2).

For exponential and gaussian sets the minimum coupling sits at i = N and
equals j_max * exp(-alpha).  All parametrizations divide by N-1, so N = 1
is defined to return the single coupling [j_max].

A fourth kind, ``custom``, carries explicit values for experiments
(decoupled J = 0 spins, deliberately degenerate equal couplings) and only
requires the values to be finite and non-negative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ParameterError

KINDS = ("uniform", "exponential", "gaussian", "custom")

_SQRT5 = math.sqrt(5.0)


@dataclass(frozen=True)
class CouplingSet:
    """An ordered set of hyperfine couplings J_1..J_N in units of J_Q."""

    kind: str
    n: int
    j_max: float
    alpha: float | None
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ParameterError(f"unknown coupling kind {self.kind!r}")
        if self.n != len(self.values):
            raise ParameterError("N does not match the number of couplings")
        if any(not math.isfinite(v) for v in self.values):
            raise ParameterError("couplings must be finite")
        if self.kind == "custom":
            if any(v < 0.0 for v in self.values):
                raise ParameterError("custom couplings must be non-negative")
            return
        _check_generated(self)

    @classmethod
    def empty(cls) -> "CouplingSet":
        """Bath-free (N = 0) coupling set."""
        return cls(kind="custom", n=0, j_max=0.0, alpha=None, values=())

    @classmethod
    def custom(cls, values) -> "CouplingSet":
        """Explicit couplings; validation limited to finite, non-negative."""
        vals = tuple(float(v) for v in values)
        j_max = max(vals) if vals else 0.0
        return cls(kind="custom", n=len(vals), j_max=j_max, alpha=None, values=vals)

    @property
    def total(self) -> float:
        return sum(self.values)


def _check_generated(cs: CouplingSet) -> None:
    if cs.n < 1:
        raise ParameterError("generated coupling sets need N >= 1")
    if any(v <= 0.0 for v in cs.values):
        raise ParameterError("generated couplings must be positive")
    if abs(max(cs.values) - cs.j_max) > 1e-12 * cs.j_max:
        raise ParameterError("max coupling must equal j_max")
    if cs.n >= 2:
        diffs = [b - a for a, b in zip(cs.values, cs.values[1:])]
        if cs.kind == "uniform":
            if not all(d > 0.0 for d in diffs):
                raise ParameterError("uniform couplings must increase with i")
        else:
            if not all(d < 0.0 for d in diffs):
                raise ParameterError(f"{cs.kind} couplings must decrease with i")
            expected_min = cs.j_max * math.exp(-cs.alpha)
            if abs(min(cs.values) - expected_min) > 1e-12 * expected_min:
                raise ParameterError("minimum coupling must equal j_max*exp(-alpha)")


def generate_couplings(
    kind: str, n: int, j_max: float, alpha: float | None = None
) -> CouplingSet:
    """Build a coupling set of the given kind.

    ``alpha`` is the dimensionless decay parameter and is required for the
    exponential and gaussian kinds.  All kinds return [j_max] for N = 1.
    """
    if kind not in ("uniform", "exponential", "gaussian"):
        raise ParameterError(f"unknown coupling kind {kind!r}")
    if n < 1:
        raise ParameterError("bath size N must be >= 1")
    if not (j_max > 0.0) or not math.isfinite(j_max):
        raise ParameterError("j_max must be positive and finite")
    if kind == "uniform":
        if alpha is not None:
            raise ParameterError("uniform couplings take no alpha")
    else:
        if alpha is None or not (alpha > 0.0) or not math.isfinite(alpha):
            raise ParameterError(f"{kind} couplings need alpha > 0")

    if n == 1:
        values = (j_max,)
    elif kind == "uniform":
        values = tuple(
            j_max * (_SQRT5 - 2.0) * (_SQRT5 + 2.0 * i / (n - 1)) for i in range(n)
        )
    elif kind == "exponential":
        values = tuple(j_max * math.exp(-alpha * i / (n - 1)) for i in range(n))
    else:
        values = tuple(j_max * math.exp(-alpha * (i / (n - 1)) ** 2) for i in range(n))
    return CouplingSet(kind=kind, n=n, j_max=j_max, alpha=alpha, values=values)


def overhauser_max(couplings: CouplingSet) -> float:
    """Largest possible Overhauser field, half the sum of all couplings."""
    return 0.5 * couplings.total
