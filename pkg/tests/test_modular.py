import numpy as np
import pytest

from povmlab.modular import (TraceWeight, build_gns, build_modular,
                             commutation_matrix, kms_residual, left_mult,
                             lemma_modular_residual, modtime_unitarity,
                             unvec, vec)
from povmlab.operators import adjoint, imag_power, opnorm, sqrtm_psd
from povmlab.oscillator import gibbs

rng = np.random.default_rng(37)


def rand_c(d):
    return rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))


def test_vec_roundtrip_and_left_mult():
    A, X = rand_c(4), rand_c(4)
    assert opnorm(unvec(vec(X), 4) - X) < 1e-15
    assert np.linalg.norm(left_mult(A) @ vec(X) - vec(A @ X)) < 1e-12


def test_commutation_matrix_transposes():
    X = rand_c(3)
    K = commutation_matrix(3)
    assert np.linalg.norm(K @ vec(X) - vec(X.T)) < 1e-15


def test_trace_weight_axioms_commuting():
    W = np.diag([0.5, 0.3, 0.2]).astype(complex)
    tw = TraceWeight(W, beta=1.0)
    samples = [np.diag(rng.standard_normal(3)).astype(complex)
               for _ in range(4)]
    rep = tw.axiom_report(samples)
    assert rep["homogeneity_residual"] < 1e-12
    assert rep["additivity_residual"] < 1e-12
    assert rep["tracial_ok"]


def test_trace_weight_noncommuting_samples_break_traciality():
    tw = TraceWeight(np.diag([0.9, 0.1]).astype(complex))
    rep = tw.axiom_report([np.array([[0.0, 1.0], [0.0, 0.0]])])
    assert not rep["tracial_ok"]


def test_trace_weight_rejects_nonpositive():
    with pytest.raises(ValueError):
        TraceWeight(np.diag([1.0, -0.5]))


def test_gns_state_identity_and_dims():
    units = [np.eye(2)[:, [i]] @ np.eye(2)[[j], :]
             for i in range(2) for j in range(2)]
    g = build_gns(units, np.diag([0.7, 0.3]).astype(complex))
    assert g.dim == 4 and g.faithful
    for A in units:
        lhs = g.state(A)
        rhs = np.vdot(g.omega_vec, g.represent(A) @ g.omega_vec)
        assert abs(lhs - rhs) < 1e-12
    pure = build_gns(units, np.diag([1.0, 0.0]).astype(complex))
    assert pure.dim == 2 and not pure.faithful
    for A in units:
        assert abs(pure.state(A)
                   - np.vdot(pure.omega_vec, pure.represent(A) @ pure.omega_vec)) < 1e-12


def test_gns_representation_is_multiplicative_when_faithful():
    units = [np.eye(2)[:, [i]] @ np.eye(2)[[j], :]
             for i in range(2) for j in range(2)]
    g = build_gns(units, np.diag([0.6, 0.4]).astype(complex))
    A, B = rand_c(2), rand_c(2)
    piA = adjoint(g.basis) @ left_mult(A) @ g.basis
    piB = adjoint(g.basis) @ left_mult(B) @ g.basis
    piAB = adjoint(g.basis) @ left_mult(A @ B) @ g.basis
    assert opnorm(piA @ piB - piAB) < 1e-12


def test_modular_closed_forms():
    T = gibbs(1.0, 5)
    triple = build_modular(T)
    assert triple.closed_form_residuals["delta_conjugation"] < 1e-8
    assert triple.closed_form_residuals["j_adjoint"] < 1e-8
    assert triple.closed_form_residuals["j_involution"] < 1e-8
    assert triple.closed_form_residuals["s_defining"] < 1e-8
    assert triple.min_delta_eigenvalue > 0


def test_flow_on_algebra_matches_carrier():
    T = gibbs(0.8, 4)
    triple = build_modular(T)
    A = rand_c(4)
    t = 0.6
    carrier = triple.flow(t, left_mult(A))
    algebra = left_mult(triple.flow(t, A))
    assert opnorm(carrier - algebra) < 1e-10


def test_sqrt_delta_swaps_sides():
    # Delta^{1/2}(A Omega) = Omega A with Omega = T^{1/2}
    T = gibbs(1.0, 4)
    triple = build_modular(T)
    sq = sqrtm_psd(T)
    for _ in range(5):
        A = rand_c(4)
        y = triple.delta_power(0.5) @ vec(A @ sq)
        assert np.linalg.norm(y - vec(sq @ A)) < 1e-8


def test_lemma_modular_residual():
    T = gibbs(1.0, 4)
    for _ in range(5):
        assert lemma_modular_residual(T, rand_c(4)) < 1e-8


def test_kms_residual_gibbs_and_tracial():
    T = gibbs(1.0, 6)
    for _ in range(10):
        assert kms_residual(T, rand_c(6), rand_c(6)) < 1e-12
    assert kms_residual(np.eye(6) / 6, rand_c(6), rand_c(6)) < 1e-12


def test_modtime_unitarity_commuting_weight():
    T = gibbs(1.0, 4)
    w = TraceWeight(T)
    rep = modtime_unitarity(w, T, [0.0, 0.5, 1.3],
                            [(rand_c(4), rand_c(4)) for _ in range(3)])
    assert rep["unitary"]
    assert all(g["residual"] < 1e-10 for g in rep["group_law"])


def test_modtime_detects_noncommuting_weight():
    W = np.diag([1.0, 2.0]).astype(complex)
    T = np.array([[2.0, 1.0], [1.0, 2.0]], dtype=complex)
    A = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
    rep = modtime_unitarity(TraceWeight(W), T, [1.0], [(A, A)])
    assert rep["max_isometry_residual"] >= 1e-3
    assert not rep["unitary"]


def test_build_modular_condition_guard():
    with pytest.raises(ValueError):
        build_modular(gibbs(5.0, 12))


def test_imag_power_flow_direction():
    # sigma_t(A) = T^{-it} A T^{it} for diagonal T acts entrywise by
    # (lam_i/lam_j)^{-it}; pin one entry to freeze the sign convention
    T = np.diag([0.75, 0.25]).astype(complex)
    triple = build_modular(T)
    A = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
    t = 0.4
    out = triple.flow(t, A)
    expected = np.exp(-1j * t * np.log(0.75 / 0.25))
    assert abs(out[0, 1] - expected) < 1e-12
