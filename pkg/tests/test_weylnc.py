import numpy as np
import pytest

from povmlab.operators import adjoint, opnorm
from povmlab.weylnc import (SymbolRep, conjugation_residual, htau_norm,
                            indicator_Q, make_lattice, nc_covariance_residual,
                            nc_effect, nc_integral, quantize,
                            weyl_relation_residual)
from povmlab.regions import equal_partition

rng = np.random.default_rng(61)


def selfdual_lattice(m):
    delta = float(np.sqrt(2 * np.pi / m))
    return make_lattice(m, delta, -delta * (m // 2))


def test_shift_is_unitary_and_matches_exp_q():
    lat = selfdual_lattice(16)
    S = lat.shift(2 * lat.delta)
    assert opnorm(S @ adjoint(S) - np.eye(16)) < 1e-12
    assert opnorm(S - lat.exp_Q(2 * lat.delta)) < 1e-12


def test_shift_rejects_misaligned():
    lat = selfdual_lattice(16)
    with pytest.raises(ValueError):
        lat.shift(0.3 * lat.delta)


def test_weyl_relation_exact_path():
    lat = selfdual_lattice(64)
    # s on the dual grid, t a lattice multiple: exact
    assert weyl_relation_residual(lat, lat.dual_spacing, lat.delta) < 1e-12
    assert weyl_relation_residual(lat, 3 * lat.dual_spacing, 2 * lat.delta) < 1e-12


def test_weyl_relation_wrap_defect_reported():
    lat = selfdual_lattice(16)
    # generic s: the wrap-around seam contributes a visible defect
    assert weyl_relation_residual(lat, 0.37, lat.delta) > 1e-3


def make_real_symbol(lat):
    coeffs = {}
    xs = lat.x_grid
    a0 = np.zeros(lat.m)
    for _ in range(3):
        j = int(rng.integers(1, 5))
        k = int(rng.integers(0, 5))
        amp = float(rng.standard_normal())
        coeffs[(j, k)] = coeffs.get((j, k), 0.0) + 0.5 * amp
        coeffs[(-j, -k)] = coeffs.get((-j, -k), 0.0) + 0.5 * amp
        a0 += amp * np.cos(j * lat.delta * xs)
    return SymbolRep(coeffs=coeffs, a0_pos=a0.copy(), a0_neg=a0.copy())


def test_real_symbol_quantizes_selfadjoint():
    lat = selfdual_lattice(32)
    a = make_real_symbol(lat)
    assert a.is_real()
    A = quantize(lat, a)
    assert opnorm(A - adjoint(A)) < 1e-12


def test_quantize_rejects_beyond_nyquist():
    lat = selfdual_lattice(16)
    with pytest.raises(ValueError):
        quantize(lat, SymbolRep(coeffs={(9, 0): 1.0}))


def test_conjugation_shift_identity():
    lat = selfdual_lattice(32)
    a = make_real_symbol(lat)
    for steps in (1, 3):
        t = steps * lat.dual_spacing
        assert conjugation_residual(lat, t, a) < 1e-10


def test_translation_invariance_of_integral_and_norm():
    lat = selfdual_lattice(32)
    a = make_real_symbol(lat)
    t = 2 * lat.dual_spacing
    at = a.translated(lat, t)
    assert abs(nc_integral(at, lat.x_length) - nc_integral(a, lat.x_length)) < 1e-13
    assert abs(htau_norm(at, lat.x_length) - htau_norm(a, lat.x_length)) < 1e-13


def test_channel_cancellation_is_exact_zero():
    lat = selfdual_lattice(16)
    a0 = rng.standard_normal(16)
    odd = SymbolRep(coeffs={}, a0_pos=a0, a0_neg=-a0)
    assert nc_integral(odd, lat.x_length) == 0.0


def test_indicator_q_is_projection_and_additive():
    lat = selfdual_lattice(32)
    parts = equal_partition(lat.q_region([]), 4)
    P = indicator_Q(lat, parts[0])
    assert opnorm(P @ P - P) < 1e-12
    total = sum(indicator_Q(lat, B) for B in parts)
    assert opnorm(total - np.eye(32)) < 1e-12


def test_nc_effects_form_povm():
    lat = selfdual_lattice(32)
    parts = equal_partition(lat.q_region([]), 4)
    effects = [nc_effect(lat, B) for B in parts]
    dim = 2 * len(lat.positive_sites)
    assert opnorm(sum(effects) - np.eye(dim)) < 1e-12


def test_nc_effect_rejects_misaligned():
    lat = selfdual_lattice(16)
    B = lat.q_region([(0.0, 0.4 * lat.dual_spacing)])
    with pytest.raises(ValueError):
        nc_effect(lat, B)


def test_nc_covariance_exact_path():
    lat = selfdual_lattice(64)
    B = equal_partition(lat.q_region([]), 4)[0]
    for steps in (1, 3):
        out = nc_covariance_residual(lat, steps * lat.dual_spacing, B)
        assert out["exact_path"]
        assert out["residual"] < 1e-12


def test_nc_covariance_interpolation_path_reports():
    lat = selfdual_lattice(16)
    B = equal_partition(lat.q_region([]), 4)[0]
    out = nc_covariance_residual(lat, 0.37 * lat.dual_spacing, B)
    assert not out["exact_path"]
    assert out["residual"] > 1e-6


def test_selfdual_spacing_aligns_both_grids():
    lat = selfdual_lattice(64)
    assert abs(lat.dual_spacing - lat.delta) < 1e-12
    assert abs(lat.x_length / lat.m - lat.delta) < 1e-12
