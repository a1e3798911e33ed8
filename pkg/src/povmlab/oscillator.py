"""Truncated Hardy-disc model of the harmonic-oscillator clock.

Everything lives on the monomial basis z^0..z^{d-1}, where the number
operator is diag(0..d-1).  Arc effects and the angle Toeplitz operator
have closed-form entries, and because N is diagonal while the effects are
Toeplitz, all covariance identities of this module are entrywise exact
under truncation; residuals below are pure rounding.

Arc convention: angles in [-pi, pi), half-open arcs, arg valued in
[-pi, pi).
"""

import numpy as np

from .operators import DEFAULT_TOL, adjoint, funcalc, opnorm
from .modular import build_modular, left_mult
from .regions import RegionSet


def number_operator(d: int) -> np.ndarray:
    if d < 1:
        raise ValueError("dimension must be at least 1")
    return np.diag(np.arange(d, dtype=float)).astype(complex)


def gibbs(beta: float, d: int) -> np.ndarray:
    """Gibbs density e^{-beta N} / Z on the truncated basis.

    beta = 0 is allowed as the explicit tracial flag I/d; negative beta is
    rejected.
    """
    if beta < 0:
        raise ValueError("inverse temperature must be nonnegative")
    if d < 1:
        raise ValueError("dimension must be at least 1")
    w = np.exp(-beta * np.arange(d))
    return np.diag(w / w.sum()).astype(complex)


def phase_effect(B: RegionSet, d: int) -> np.ndarray:
    """Arc effect with entries (E_B)_{mn} = (1/2pi) int_B e^{i(n-m)theta}.

    Closed form per arc [a, b): diagonal (b-a)/2pi, off-diagonal
    (e^{ik b} - e^{ik a}) / (2 pi i k) with k = n - m, summed over arcs.
    """
    if B.domain != "circle":
        raise ValueError("phase effects are defined on the circle")
    idx = np.arange(d)
    k = idx[None, :] - idx[:, None]          # k = n - m
    E = np.zeros((d, d), dtype=complex)
    for a, b in B.cells:
        with np.errstate(divide="ignore", invalid="ignore"):
            off = (np.exp(1j * k * b) - np.exp(1j * k * a)) / (2j * np.pi * k)
        np.fill_diagonal(off, (b - a) / (2 * np.pi))
        E += off
    return E


def covariance_residual(d: int, t: float, B: RegionSet) -> float:
    """|| e^{-itN} E_B e^{itN} - E_{rot_t B} ||, both sides in closed form."""
    n = np.arange(d)
    phase = np.exp(-1j * t * n)
    conj = phase[:, None] * phase_effect(B, d) * np.conj(phase)[None, :]
    return opnorm(conj - phase_effect(B.rotate(t), d))


def toeplitz_arg(d: int) -> np.ndarray:
    """Toeplitz operator of the angle function: F_{mn} = c_{m-n} with
    c_0 = 0 and c_k = (-1)^k i / k."""
    if d < 1:
        raise ValueError("dimension must be at least 1")
    F = np.zeros((d, d), dtype=complex)
    idx = np.arange(d)
    k = idx[:, None] - idx[None, :]          # k = m - n
    nz = k != 0
    F[nz] = ((-1.0) ** k[nz]) * 1j / k[nz]
    return F


def commutator_defect(d: int, tol: float = DEFAULT_TOL) -> dict:
    """Defect C = NF - FN + iI of the Heisenberg relation.

    C has exact entries i(-1)^{m-n}, i.e. C = i v v* for the alternating
    vector v_m = (-1)^m; the relation [N, F]h = -ih therefore holds
    exactly on vectors orthogonal to v.
    """
    if d < 2:
        raise ValueError("need dimension at least 2")
    N = number_operator(d)
    F = toeplitz_arg(d)
    C = N @ F - F @ N + 1j * np.eye(d)
    s = np.linalg.svd(C, compute_uv=False)
    v = ((-1.0) ** np.arange(d)).astype(complex)
    v_hat = v / np.linalg.norm(v)
    # range alignment: C v_hat should be i*d^{1/2}... i v (v* v_hat)
    u = C @ v_hat
    alignment = abs(np.vdot(v_hat, u)) / max(np.linalg.norm(u), 1e-300)
    # test vector orthogonal to the alternating vector
    h = np.zeros(d, dtype=complex)
    h[0] = h[1] = 1 / np.sqrt(2)
    ortho_residual = float(np.linalg.norm((N @ F - F @ N) @ h + 1j * h))
    return {
        "defect": C,
        "singular_values": s,
        "rank_one_ratio": float(s[1] / s[0]) if d > 1 else 0.0,
        "top_singular_value": float(s[0]),
        "alternating_alignment": float(alignment),
        "orthogonal_commutator_residual": ortho_residual,
        "rank_one": s[1] / s[0] <= tol,
    }


def weyl_failure_check(d: int, s: float, t: float) -> float:
    """Norm of e^{isN} e^{itF} - e^{-ist} e^{itF} e^{isN}: a negative
    control, bounded away from zero for generic s, t."""
    N = number_operator(d)
    F = toeplitz_arg(d)
    Es = funcalc(N, lambda x: np.exp(1j * s * x))
    Et = funcalc(F, lambda x: np.exp(1j * t * x))
    return opnorm(Es @ Et - np.exp(-1j * s * t) * Et @ Es)


def thermal_covariance_residual(beta: float, d: int, t: float,
                                B: RegionSet) -> float:
    """Residual of the thermal covariance of the phase POVM.

    Builds the modular triple of gibbs(beta, d) and compares the flow of
    E_B (acting on the carrier by left multiplication) against the rotated
    arc effect.  With sigma_t = Delta^{-it} . Delta^{it} the exact rotation
    is by -beta*t; that direction is frozen here (and by a regression
    test), making the identity entrywise exact.
    """
    if beta * d > 20:
        raise ValueError("conditioning guard: beta*d must be <= 20")
    triple = build_modular(gibbs(beta, d))
    flowed = triple.flow(t, left_mult(phase_effect(B, d)))
    target = left_mult(phase_effect(B.rotate(-beta * t), d))
    return opnorm(flowed - target)
