import math

import numpy as np
import pytest

import spindistill as sd
from spindistill import (
    CapacityError,
    CouplingSet,
    DegenerateFixedPointError,
    ModelParams,
    NonConvergentModeError,
    apply_map,
    build_pulse_map,
    build_spin_operators,
    convergence_pulses,
    default_params,
    full_spectrum,
    joint_eigenbasis,
    maximally_mixed,
    stationary_state,
    verify_convergence,
    verify_map_properties,
)
from spindistill.spectral import (
    SPECTRUM_CSV_HEADER,
    SpectralDecomposition,
    export_spectrum_csv,
    hermitian_basis_matrix,
    mode_sum_state,
)


def make_map(n=2, h=0.777, **kwargs):
    p = default_params(n, h=h, **kwargs)
    ops = build_spin_operators(p)
    basis = joint_eigenbasis(ops)
    return p, ops, basis, build_pulse_map(p, basis, ops)


def degenerate_map():
    p = ModelParams(couplings=CouplingSet.custom([0.01, 0.01]), h=1.3)
    ops = build_spin_operators(p)
    basis = joint_eigenbasis(ops)
    return p, build_pulse_map(p, basis, ops)


def synthetic_decomposition(lams, alphas, d=4):
    """Hand-built decomposition over an orthonormal Hermitian operator set."""
    dim = len(lams)
    ops = np.zeros((dim, d, d), dtype=complex)
    for k in range(dim):
        b = np.zeros((d, d), dtype=complex)
        if k < d:
            b[k, k] = 1.0
        else:
            i, j = divmod(k - d, d)
            b[i, j % d] = b[j % d, i] = 1 / math.sqrt(2)
        ops[k] = b
    return SpectralDecomposition(
        eigenvalues=np.asarray(lams, dtype=complex),
        eigenoperators=ops,
        alphas=np.asarray(alphas, dtype=complex),
        rho0=np.eye(d) / d,
        expansion_residual=0.0,
        eigenvector_condition=1.0,
    )


def test_stationary_state_is_fixed_point():
    p, ops, basis, pmap = make_map(n=2, h=1.9)
    stat = stationary_state(pmap)
    assert stat.degeneracy_count == 1
    out = apply_map(pmap, stat.v0)
    assert np.linalg.norm(out.matrix - stat.v0.matrix) <= 1e-9
    assert abs(np.trace(stat.v0.matrix) - 1.0) <= 1e-10
    assert stat.min_eigenvalue >= -1e-9


def test_stationary_degenerate_error_and_projection():
    # N=0, h=0: both pure central states are fixed points
    p = ModelParams(couplings=CouplingSet.empty(), h=0.0)
    ops = build_spin_operators(p)
    basis = joint_eigenbasis(ops)
    pmap = build_pulse_map(p, basis, ops)
    with pytest.raises(DegenerateFixedPointError):
        stationary_state(pmap)
    stat = stationary_state(pmap, on_degenerate="project")
    assert stat.degeneracy_count == 2
    assert abs(np.trace(stat.v0.matrix) - 1.0) <= 1e-10
    assert stat.min_eigenvalue >= -1e-9
    # the projection of the disordered state keeps both fixed weights
    out = apply_map(pmap, stat.v0)
    assert np.linalg.norm(out.matrix - stat.v0.matrix) <= 1e-9


def test_equal_couplings_degeneracy_detected():
    _, pmap = degenerate_map()
    with pytest.raises(DegenerateFixedPointError):
        stationary_state(pmap)
    spec = full_spectrum(pmap)
    assert spec.unit_indices().size > 1
    report = verify_map_properties(pmap, decomposition=spec)
    assert report.all_passed  # rigorous properties hold also when degenerate
    assert report.checks["obs_b_unit_nondegenerate"].value > 1


def test_full_spectrum_basic_structure():
    p, ops, basis, pmap = make_map(n=2)
    spec = full_spectrum(pmap)
    lam = spec.eigenvalues
    assert abs(lam[0] - 1.0) <= 1e-10
    assert np.all(np.abs(lam[1:]) < 1.0)
    assert np.max(np.abs(lam)) <= 1.0 + 1e-10
    # expansion reproduces rho0
    recon = np.tensordot(spec.alphas, spec.eigenoperators, axes=(0, 0))
    assert np.linalg.norm(recon - spec.rho0) <= 1e-8
    # eigenoperators are unit Frobenius norm
    norms = np.linalg.norm(spec.eigenoperators, axis=(1, 2))
    assert np.allclose(norms, 1.0, atol=1e-12)


def test_spectrum_conjugate_closure():
    _, _, _, pmap = make_map(n=2, h=2.2)
    spec = full_spectrum(pmap)
    lam = spec.eigenvalues
    dist = np.abs(lam[:, None] - lam.conj()[None, :]).min(axis=1)
    assert dist.max() <= 1e-9


def test_stationary_agrees_with_spectrum():
    p, ops, basis, pmap = make_map(n=2, h=1.0)
    stat = stationary_state(pmap)
    spec = full_spectrum(pmap)
    j0 = int(np.argmin(np.abs(spec.eigenvalues - 1.0)))
    v = spec.eigenoperators[j0]
    v = 0.5 * (v + v.conj().T)
    v /= np.trace(v).real
    assert np.linalg.norm(v - stat.v0.matrix) <= 1e-8


@pytest.mark.parametrize("n", [1, 2])
@pytest.mark.parametrize("h", [0.5, 1.234])
def test_property_suite_generic_points(n, h):
    _, _, _, pmap = make_map(n=n, h=h)
    report = verify_map_properties(pmap)
    assert report.all_passed, {
        k: (c.passed, c.value) for k, c in report.checks.items() if not c.passed
    }
    assert report.checks["obs_a_diagonalizable"].passed
    assert report.checks["obs_d_gap_positive"].passed


def test_property_report_serializable():
    _, _, _, pmap = make_map(n=1)
    report = verify_map_properties(pmap)
    d = report.to_dict()
    assert set(d["p1_unit_eigenvalue"]) == {"pass", "detail", "value"}


def test_convergence_pulses_frozen_example():
    # |alpha0/alpha_j| = 1, |lambda_j| = 0.99, p = 0.01 -> 459
    spec = synthetic_decomposition([1.0, 0.99], [0.5, 0.5])
    est = convergence_pulses(spec, 0.01)
    assert est.n_j == [(1, 459)]
    assert est.n_puls == 459


def test_convergence_pulses_clamp_to_one():
    # already below threshold at n = 0
    spec = synthetic_decomposition([1.0, 0.5], [1.0, 1e-6])
    est = convergence_pulses(spec, 0.01)
    assert est.n_j == [(1, 1)]


def test_convergence_pulses_guards():
    spec = synthetic_decomposition([1.0, 0.9, 0.8], [1.0, 1e-15, 0.3])
    est = convergence_pulses(spec, 0.01)
    assert est.excluded_small_alpha == 1
    assert len(est.n_j) == 1
    bad = synthetic_decomposition([1.0, 1.0 - 1e-15], [1.0, 0.5])
    with pytest.raises(NonConvergentModeError):
        convergence_pulses(bad, 0.01)


def test_verify_convergence_synthetic_single_mode():
    lam = 0.999
    spec = synthetic_decomposition([1.0, lam], [1.0, 0.8])
    v0 = spec.eigenoperators[0] * spec.alphas[0]
    est = convergence_pulses(spec, 0.01)

    class FakeMap:
        d = 4
        entries = None

    ok_at_npuls = np.linalg.norm(
        mode_sum_state(spec, est.n_puls) - v0
    ) <= 0.01 * np.linalg.norm(v0)
    viol_at_half = np.linalg.norm(
        mode_sum_state(spec, est.n_puls // 2) - v0
    ) > 0.01 * np.linalg.norm(v0)
    assert ok_at_npuls and viol_at_half


def test_verify_convergence_on_real_map():
    p, ops, basis, pmap = make_map(n=1, h=1.9)
    stat = stationary_state(pmap)
    spec = full_spectrum(pmap)
    est = convergence_pulses(spec, 0.01)
    assert verify_convergence(pmap, stat.v0, est.n_puls, 0.01, decomposition=spec)
    # n = 0 from the disordered start is not converged
    rho0 = maximally_mixed(pmap.d)
    if np.linalg.norm(rho0.matrix - stat.v0.matrix) > 0.01 * np.linalg.norm(stat.v0.matrix):
        assert not verify_convergence(pmap, stat.v0, 0, 0.01, decomposition=spec)


def test_power_consistency_mode_sum():
    p, ops, basis, pmap = make_map(n=2, h=0.9)
    spec = full_spectrum(pmap)
    x = maximally_mixed(pmap.d).matrix.reshape(-1)
    for n in (137, 1000):
        y = x.copy()
        for _ in range(n):
            y = pmap.entries @ y
        pred = mode_sum_state(spec, n)
        assert np.linalg.norm(y.reshape(pmap.d, pmap.d) - pred) <= 1e-7


def test_hermitian_basis_representation_is_real():
    for n, h in ((1, 0.8), (2, 1.6)):
        _, _, _, pmap = make_map(n=n, h=h)
        rep, residue = hermitian_basis_matrix(pmap)
        assert residue <= 1e-9
        assert rep.dtype == float


def test_spectrum_budget():
    from spindistill.pulsemap import PulseSuperoperator

    fake = PulseSuperoperator(
        d=45, entries=np.zeros((2025, 2025)), basis=None, params=None, params_hash=""
    )
    with pytest.raises(CapacityError):
        full_spectrum(fake)


def test_spectrum_csv_export(tmp_path):
    _, _, _, pmap = make_map(n=1)
    spec = full_spectrum(pmap)
    path = tmp_path / "spec.csv"
    export_spectrum_csv(spec, path)
    lines = path.read_text().splitlines()
    assert lines[0] == SPECTRUM_CSV_HEADER
    assert len(lines) == spec.dim + 1
    # unit mode has empty n_j cell
    assert lines[1].endswith(",")


def test_leading_modes_matches_dense():
    from spindistill.spectral import leading_modes

    _, _, _, pmap = make_map(n=2, h=1.6)
    spec = full_spectrum(pmap)
    vals, vecs = leading_modes(pmap, k=6)
    assert vals[0] == pytest.approx(1.0, abs=1e-9)
    dense = spec.eigenvalues[:6]
    # same leading moduli (phases/order may differ within conjugate pairs)
    assert np.sort(np.abs(vals)) == pytest.approx(np.sort(np.abs(dense)), abs=1e-9)
    assert vecs.shape == (6, 8, 8)
