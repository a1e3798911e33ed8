"""Finite-dimensional Tomita-Takesaki engine.

The carrier is the Hilbert-Schmidt space of d x d matrices, flattened
row-major to C^{d^2}.  Antilinear maps are represented as a linear matrix
composed with entrywise conjugation in the canonical basis, which reduces
the antilinear polar decomposition S = J Delta^{1/2} to dense linear
algebra: Delta = M_S^T conj(M_S) and M_J = M_S conj(Delta^{-1/2}).

Conventions.  With reference vector Omega = T^{1/2} the closed forms are
Delta: X -> T X T^{-1} and J: X -> X*.  The modular flow is
sigma_t(A) = Delta^{-it} A Delta^{it}, which on algebra elements is
conjugation A -> T^{-it} A T^{it}.
"""

from dataclasses import dataclass, field

import numpy as np

from .operators import (DEFAULT_TOL, adjoint, as_operator, herm_spectrum,
                        hs_inner, imag_power, opnorm, require_square,
                        sqrtm_psd)


def vec(X) -> np.ndarray:
    return np.asarray(X, dtype=complex).reshape(-1)


def unvec(x, d: int) -> np.ndarray:
    return np.asarray(x, dtype=complex).reshape(d, d)


def commutation_matrix(d: int) -> np.ndarray:
    """K with K vec(X) = vec(X^T) for row-major vec."""
    K = np.zeros((d * d, d * d))
    for i in range(d):
        for j in range(d):
            K[i * d + j, j * d + i] = 1.0
    return K


def left_mult(A) -> np.ndarray:
    """pi(A): X -> A X on the carrier."""
    A = require_square(A)
    return np.kron(A, np.eye(A.shape[0]))


def _conj_action(A, B) -> np.ndarray:
    """Matrix of X -> A X B on the row-major carrier."""
    return np.kron(A, np.asarray(B).T)


# --------------------------------------------------------------------------
# traces and noncommutative L^2 inner products


@dataclass
class TraceWeight:
    """tau(A) = tr(A W) for a positive weight W; beta is an optional
    provenance tag for W = e^{-beta H}."""

    W: np.ndarray
    beta: float = None

    def __post_init__(self):
        self.W = require_square(self.W)
        lam = np.linalg.eigvalsh((self.W + adjoint(self.W)) / 2)
        if lam.min() < -1e-10 * max(1.0, lam.max()):
            raise ValueError(f"weight not positive (min eigenvalue {lam.min():.3e})")

    def tau(self, A) -> complex:
        return complex(np.trace(as_operator(A) @ self.W))

    def inner(self, A, B) -> complex:
        """<A, B>_tau = tr(B* A W)."""
        return complex(np.trace(adjoint(B) @ as_operator(A) @ self.W))

    def axiom_report(self, samples, tol: float = DEFAULT_TOL) -> dict:
        """Run the trace axioms on a sample set and report residuals.

        The model is finite, so semifiniteness is vacuous and the
        tracial axiom tau(A*A) = tau(AA*) holds only when the weight
        commutes with the samples; the check is reported, never assumed.
        """
        lin = 0.0
        tracial = 0.0
        for A in samples:
            A = as_operator(A)
            lin = max(lin, abs(self.tau(2.5 * A) - 2.5 * self.tau(A)))
            tracial = max(tracial,
                          abs(self.tau(adjoint(A) @ A) - self.tau(A @ adjoint(A))))
        B0 = adjoint(samples[0]) @ samples[0]
        B1 = adjoint(samples[-1]) @ samples[-1]
        add = abs(self.tau(B0 + B1) - self.tau(B0) - self.tau(B1))
        return {
            "scope": "finite-model check only",
            "homogeneity_residual": lin,
            "additivity_residual": add,
            "tracial_residual": tracial,
            "tracial_ok": tracial <= tol,
        }


# --------------------------------------------------------------------------
# GNS construction


@dataclass
class GnsRep:
    generators: list
    density: np.ndarray
    basis: np.ndarray          # d^2 x r, orthonormal columns spanning the quotient
    gram: np.ndarray
    pi_matrices: list          # represented left multiplications, r x r
    omega_vec: np.ndarray      # coordinates of the cyclic vector q(I)
    dim: int
    faithful: bool

    def state(self, A) -> complex:
        """omega(A) = tr(A T)."""
        return complex(np.trace(as_operator(A) @ self.density))

    def represent(self, A) -> np.ndarray:
        """Compression of left multiplication by A to the quotient basis."""
        return adjoint(self.basis) @ left_mult(A) @ self.basis


def build_gns(generators, T, tol: float = DEFAULT_TOL) -> GnsRep:
    """GNS representation of omega(A) = tr(A T) from a generating set.

    Concretely realised inside Hilbert-Schmidt space: q(A) = A T^{1/2},
    since <q(A), q(B)> = tr(B* A T) = omega(B* A).  The null ideal is
    quotiented by a rank-revealing SVD with threshold 1e-10 * sigma_max.
    """
    T = require_square(T)
    d = T.shape[0]
    if abs(np.trace(T) - 1.0) > 1e-8:
        raise ValueError(f"not unit trace: tr T = {np.trace(T)}")
    lam = np.linalg.eigvalsh((T + adjoint(T)) / 2)
    if lam.min() < -1e-10:
        raise ValueError(f"not positive: min eigenvalue {lam.min():.3e}")
    sqrtT = sqrtm_psd(T, max(tol, 1e-8))
    gens = [require_square(A) for A in generators]
    images = np.column_stack([vec(A @ sqrtT) for A in gens])
    gram = adjoint(images) @ images
    U, s, _ = np.linalg.svd(images, full_matrices=False)
    rank = int(np.sum(s > 1e-10 * max(s.max(), 1e-300)))
    basis = U[:, :rank]
    pis = [adjoint(basis) @ left_mult(A) @ basis for A in gens]
    omega_vec = adjoint(basis) @ vec(sqrtT)
    # faithful iff A -> A T^{1/2} is injective on the full matrix algebra
    faithful = bool(np.linalg.matrix_rank(sqrtT, tol=1e-10) == d)
    return GnsRep(generators=gens, density=T, basis=basis, gram=gram,
                  pi_matrices=pis, omega_vec=omega_vec, dim=rank,
                  faithful=faithful)


# --------------------------------------------------------------------------
# modular triple


@dataclass
class ModularTriple:
    """S = J Delta^{1/2} on the Hilbert-Schmidt carrier of a positive
    invertible density T, with Omega = T^{1/2}."""

    T: np.ndarray
    d: int
    S_mat: np.ndarray          # linear part of the antilinear S
    J_mat: np.ndarray          # linear part of the antilinear J
    Delta: np.ndarray          # positive d^2 x d^2 matrix
    log_Delta: np.ndarray
    condition_number: float
    min_delta_eigenvalue: float
    closed_form_residuals: dict = field(default_factory=dict)

    def apply_S(self, x) -> np.ndarray:
        return self.S_mat @ np.conj(np.asarray(x, dtype=complex))

    def apply_J(self, x) -> np.ndarray:
        return self.J_mat @ np.conj(np.asarray(x, dtype=complex))

    def delta_power(self, p: complex) -> np.ndarray:
        lam, V = np.linalg.eigh((self.Delta + adjoint(self.Delta)) / 2)
        return (V * np.exp(p * np.log(lam))) @ adjoint(V)

    def flow(self, t: float, A) -> np.ndarray:
        """Modular flow sigma_t = Delta^{-it} . Delta^{it}.

        Accepts an algebra element (d x d, returned as T^{-it} A T^{it})
        or an operator on the carrier (d^2 x d^2).
        """
        A = require_square(A)
        if A.shape == (self.d, self.d):
            U = imag_power(self.T, -t)
            return U @ A @ adjoint(U)
        if A.shape == (self.d ** 2, self.d ** 2):
            D = self.delta_power(-1j * t)
            return D @ A @ adjoint(D)
        raise ValueError(f"expected a {self.d} or {self.d**2} dimensional "
                         f"square operator, got {A.shape}")


def build_modular(T, tol: float = DEFAULT_TOL,
                  cond_max: float = 1e12) -> ModularTriple:
    """Modular triple of the state tr(. T) for a positive invertible T.

    S is defined by S(X Omega) = X* Omega, i.e. Y -> T^{-1/2} Y* T^{1/2};
    the antilinear polar decomposition then gives Delta and J, and the
    closed forms Delta: X -> T X T^{-1}, J: X -> X* are verified and the
    residuals recorded on the triple.
    """
    T = require_square(T)
    d = T.shape[0]
    lam = np.linalg.eigvalsh((T + adjoint(T)) / 2)
    if lam.min() <= 0:
        raise ValueError(f"density not invertible (min eigenvalue {lam.min():.3e})")
    cond = float(lam.max() / lam.min())
    if cond > cond_max:
        raise ValueError(f"density too ill-conditioned: cond(T) = {cond:.3e} "
                         f"> {cond_max:.1e}; reduce beta*d")
    sqrtT = sqrtm_psd(T, max(tol, 1e-8))
    isqrtT = np.linalg.inv(sqrtT)
    K = commutation_matrix(d)
    # S(Y) = T^{-1/2} (conj Y)^T T^{1/2}, linear in conj(Y)
    M_S = _conj_action(isqrtT, sqrtT) @ K
    Delta = M_S.T @ np.conj(M_S)
    spec = herm_spectrum(Delta, 1e-8)
    dmin = float(spec.eigenvalues.min())
    V = spec.eigenvectors
    inv_sqrt_Delta = (V / np.sqrt(spec.eigenvalues)) @ adjoint(V)
    log_Delta = (V * np.log(spec.eigenvalues)) @ adjoint(V)
    M_J = M_S @ np.conj(inv_sqrt_Delta)

    invT = np.linalg.inv(T)
    residuals = {
        "delta_conjugation": opnorm(Delta - _conj_action(T, invT)),
        "j_adjoint": 0.0,
        "j_involution": opnorm(M_J @ np.conj(M_J) - np.eye(d * d)),
        "s_defining": 0.0,
    }
    rng = np.random.default_rng(0)
    worst_j = 0.0
    worst_s = 0.0
    for _ in range(8):
        X = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        y = M_J @ np.conj(vec(X))
        worst_j = max(worst_j, float(np.linalg.norm(y - vec(adjoint(X)))))
        s = M_S @ np.conj(vec(X @ sqrtT))
        worst_s = max(worst_s, float(np.linalg.norm(s - vec(adjoint(X) @ sqrtT))))
    residuals["j_adjoint"] = worst_j
    residuals["s_defining"] = worst_s

    return ModularTriple(T=T, d=d, S_mat=M_S, J_mat=M_J, Delta=Delta,
                         log_Delta=log_Delta, condition_number=cond,
                         min_delta_eigenvalue=dmin,
                         closed_form_residuals=residuals)


def modular_flow(triple: ModularTriple, t: float, A) -> np.ndarray:
    return triple.flow(t, A)


def kms_residual(T, A, B) -> float:
    """|tr(T A B) - tr(T B . T A T^{-1})|; zero up to rounding by trace
    cyclicity, the finite-dimensional KMS identity."""
    T = require_square(T)
    A = require_square(A)
    B = require_square(B)
    lam = np.linalg.eigvalsh((T + adjoint(T)) / 2)
    if lam.min() <= 0:
        raise ValueError("density must be invertible")
    lhs = np.trace(T @ A @ B)
    rhs = np.trace(T @ B @ (T @ A @ np.linalg.inv(T)))
    return float(abs(lhs - rhs))


def modtime_unitarity(weight: TraceWeight, T, ts, samples,
                      tol: float = DEFAULT_TOL) -> dict:
    """Check that A -> T^{it} A T^{-it} is a unitary group on H_tau.

    Returns per-(t, pair) isometry residuals
    |<U_t A, U_t B>_tau - <A, B>_tau| and group-law residuals for
    consecutive times.
    """
    T = require_square(T)
    lam = np.linalg.eigvalsh((T + adjoint(T)) / 2)
    if lam.min() <= 0:
        raise ValueError("positive operator required for imaginary powers")

    def U(t, A):
        P = imag_power(T, t)
        return P @ A @ adjoint(P)

    iso = []
    for t in ts:
        for A, B in samples:
            r = abs(weight.inner(U(t, A), U(t, B)) - weight.inner(A, B))
            iso.append({"t": t, "residual": float(r)})
    group = []
    for t1, t2 in zip(ts, ts[1:]):
        A = samples[0][0]
        r = opnorm(U(t1, U(t2, A)) - U(t1 + t2, A))
        group.append({"t1": t1, "t2": t2, "residual": float(r)})
    worst = max((c["residual"] for c in iso), default=0.0)
    return {"isometry": iso, "group_law": group, "max_isometry_residual": worst,
            "unitary": worst <= max(tol, 1e-10)}


def lemma_modular_residual(T, A, tol: float = DEFAULT_TOL) -> float:
    """|| J Delta^{1/2} (A T^{1/2}) - A* T^{1/2} || via the modular triple."""
    triple = build_modular(T, tol)
    sqrtT = sqrtm_psd(triple.T, max(tol, 1e-8))
    x = vec(require_square(A) @ sqrtT)
    y = triple.apply_J(triple.delta_power(0.5) @ x)
    target = vec(adjoint(A) @ sqrtT)
    return opnorm(unvec(y - target, triple.d))
