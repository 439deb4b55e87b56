import math

import pytest

from spindistill import CouplingSet, ParameterError, generate_couplings, overhauser_max

# frozen from arbitrary-precision evaluation of the defining formulas
UNIFORM_N2 = (0.5278640450004206, 1.0)
UNIFORM_N3_SUM = 2.2917960675006309


def test_uniform_n2_values():
    cs = generate_couplings("uniform", 2, 1.0)
    assert cs.values == pytest.approx(UNIFORM_N2, rel=1e-15)


def test_exponential_n3_values():
    cs = generate_couplings("exponential", 3, 1.0, alpha=1.0)
    expected = (1.0, math.exp(-0.5), math.exp(-1.0))
    assert cs.values == pytest.approx(expected, rel=1e-15)


def test_gaussian_n2_values():
    cs = generate_couplings("gaussian", 2, 0.02, alpha=0.5)
    assert cs.values == pytest.approx((0.02, 0.02 * math.exp(-0.5)), rel=1e-15)


@pytest.mark.parametrize("kind,alpha", [("uniform", None), ("exponential", 1.0), ("gaussian", 0.7)])
def test_n1_returns_jmax(kind, alpha):
    assert generate_couplings(kind, 1, 0.3, alpha).values == (0.3,)


@pytest.mark.parametrize("kind,alpha", [("uniform", None), ("exponential", 1.0), ("gaussian", 0.5)])
@pytest.mark.parametrize("n", [2, 3, 5, 6])
def test_invariants(kind, alpha, n):
    cs = generate_couplings(kind, n, 0.02, alpha)
    vals = cs.values
    assert max(vals) == pytest.approx(0.02, rel=1e-12)
    assert all(v > 0 for v in vals)
    # pairwise distinct
    assert len(set(vals)) == n
    diffs = [b - a for a, b in zip(vals, vals[1:])]
    if kind == "uniform":
        assert all(d > 0 for d in diffs)
    else:
        assert all(d < 0 for d in diffs)
        assert min(vals) == pytest.approx(0.02 * math.exp(-alpha), rel=1e-12)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(kind="uniform", n=0, j_max=1.0),
        dict(kind="uniform", n=3, j_max=0.0),
        dict(kind="uniform", n=3, j_max=-1.0),
        dict(kind="exponential", n=3, j_max=1.0),  # alpha missing
        dict(kind="gaussian", n=3, j_max=1.0, alpha=-0.5),
        dict(kind="lorentzian", n=3, j_max=1.0),
    ],
)
def test_invalid_parameters(kwargs):
    with pytest.raises(ParameterError):
        generate_couplings(**kwargs)


def test_overhauser_max_uniform_n3():
    cs = generate_couplings("uniform", 3, 0.02)
    assert overhauser_max(cs) == pytest.approx(0.5 * 0.02 * UNIFORM_N3_SUM, rel=1e-14)
    assert overhauser_max(cs) == pytest.approx(0.0229180, abs=1e-7)


def test_overhauser_max_single():
    assert overhauser_max(generate_couplings("gaussian", 1, 0.7, 1.0)) == pytest.approx(0.35)


def test_overhauser_max_exponential_n2():
    cs = generate_couplings("exponential", 2, 1.0, alpha=1.0)
    assert overhauser_max(cs) == pytest.approx(0.6839397205857212, rel=1e-14)


def test_custom_allows_zero_and_equal():
    cs = CouplingSet.custom([0.0, 0.01, 0.01])
    assert cs.values == (0.0, 0.01, 0.01)
    with pytest.raises(ParameterError):
        CouplingSet.custom([-0.1])


def test_empty_set():
    cs = CouplingSet.empty()
    assert cs.n == 0
    assert overhauser_max(cs) == 0.0
