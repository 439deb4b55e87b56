import json
import math

import numpy as np
import pytest

import spindistill as sd
from spindistill import (
    CapacityError,
    CouplingSet,
    ModelParams,
    ParameterError,
    build_spin_operators,
    default_params,
    joint_eigenbasis,
)


def decoupled_params(h=1.3, z=0.25):
    return ModelParams(couplings=CouplingSet.custom([0.0]), h=h, z=z)


def test_params_invariants():
    with pytest.raises(ParameterError):
        default_params(1, h=1.0, gamma=0.0)
    with pytest.raises(ParameterError):
        default_params(1, h=1.0, gamma=0.5, t_rep=1.0)  # 2*g*T = 1 < 20
    with pytest.raises(ParameterError):
        default_params(1, h=1.0, z=0.0)
    p = default_params(2, h=1.0)
    assert p.dim == 8
    assert 2 * p.gamma * p.t_rep >= 20


def test_n0_hamiltonian():
    p = default_params(0, h=0.8)
    ops = build_spin_operators(p)
    assert ops.dim == 2
    evals = np.linalg.eigvalsh(ops.h_spin)
    assert evals == pytest.approx([-0.4, 0.4], abs=1e-14)
    basis = joint_eigenbasis(ops)
    assert basis.energies == pytest.approx([-0.4, 0.4], abs=1e-14)
    assert basis.m_values == pytest.approx([-0.5, 0.5], abs=1e-14)


def test_n1_decoupled_spectrum():
    h, z = 1.3, 0.25
    ops = build_spin_operators(decoupled_params(h, z))
    evals = np.sort(np.linalg.eigvalsh(ops.h_spin))
    expected = np.sort([s * h / 2 + t * z * h / 2 for s in (-1, 1) for t in (-1, 1)])
    assert evals == pytest.approx(expected, abs=1e-12)


def test_commutes_with_total_x_spin():
    rng = np.random.default_rng(5)
    for _ in range(3):
        p = default_params(2, h=float(rng.uniform(0.1, 5.0)), z=float(rng.uniform(0.01, 0.9)))
        ops = build_spin_operators(p)
        comm = ops.h_spin @ ops.ix_tot - ops.ix_tot @ ops.h_spin
        assert np.linalg.norm(comm) <= 1e-12 * np.linalg.norm(ops.h_spin)


def test_ladder_identities():
    ops = build_spin_operators(default_params(2, h=1.0))
    d = ops.dim
    assert np.allclose(ops.sp.conj().T, ops.sm)
    assert np.allclose(ops.sp @ ops.sm + ops.sm @ ops.sp, np.eye(d), atol=1e-14)
    assert np.linalg.norm(ops.h_spin - ops.h_spin.conj().T) < 1e-14


def test_eigenbasis_properties():
    p = default_params(3, h=1.7)
    ops = build_spin_operators(p)
    basis = joint_eigenbasis(ops)
    d = basis.dim
    u = basis.u
    assert np.linalg.norm(u.conj().T @ u - np.eye(d)) <= 1e-12
    hd = u.conj().T @ ops.h_spin @ u
    assert np.linalg.norm(hd - np.diag(basis.energies)) <= 1e-10
    md = u.conj().T @ ops.ix_tot @ u
    assert np.linalg.norm(md - np.diag(basis.m_values)) <= 1e-10
    # completeness
    assert np.linalg.norm(u @ u.conj().T - np.eye(d)) <= 1e-12
    # m range and sector dimensions
    assert np.all(np.abs(basis.m_values) <= (p.n_bath + 1) / 2 + 1e-10)
    counts = {m: int(np.sum(basis.m_values == m)) for m in set(basis.m_values)}
    assert counts == {
        -2.0: 1, -1.0: 4, 0.0: 6, 1.0: 4, 2.0: 1
    }
    # round trip
    assert np.linalg.norm(u @ np.diag(basis.energies) @ u.conj().T - ops.h_spin) <= 1e-10
    # sorted by (m, E)
    order = np.lexsort((basis.energies, basis.m_values))
    assert np.all(order == np.arange(d))


def test_energies_stable_under_site_permutation():
    vals = [0.004, 0.011, 0.02]
    h = 2.1
    base = ModelParams(couplings=CouplingSet.custom(vals), h=h)
    perm = ModelParams(couplings=CouplingSet.custom(vals[::-1]), h=h)
    e1 = np.sort(joint_eigenbasis(build_spin_operators(base)).energies)
    e2 = np.sort(joint_eigenbasis(build_spin_operators(perm)).energies)
    assert e1 == pytest.approx(e2, abs=1e-10)


def test_capacity_guard():
    p = ModelParams(couplings=CouplingSet.custom([0.01] * 7), h=1.0)
    with pytest.raises(CapacityError):
        build_spin_operators(p)
    ops = build_spin_operators(p, allow_large=True)
    assert ops.dim == 256


def test_eigenbasis_dump(tmp_path):
    p = default_params(1, h=0.9)
    basis = joint_eigenbasis(build_spin_operators(p))
    path = tmp_path / "basis.json"
    sd.dump_eigenbasis(basis, path)
    data = json.loads(path.read_text())
    assert set(data) == {"energies", "m_values", "unitary_re", "unitary_im", "couplings"}
    assert data["energies"] == pytest.approx(list(basis.energies))
    assert data["couplings"] == pytest.approx(list(p.couplings.values))


def test_fingerprint_changes_with_params():
    a = default_params(2, h=1.0)
    assert a.fingerprint() == default_params(2, h=1.0).fingerprint()
    assert a.fingerprint() != a.with_field(1.0 + 1e-12).fingerprint()
