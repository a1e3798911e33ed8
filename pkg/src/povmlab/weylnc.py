"""Log-frequency (Mellin) lattice model of the dilation-group calculus.

In the coordinate u = ln|xi| the dilation group becomes the translation
group and ln|D| becomes multiplication by u.  The lattice models the
u-picture directly on a circle of circumference m*delta, with two
channels for the sign of the original frequency.  On aligned data the
Weyl relation e^{isP} S(t) = e^{-ist} S(t) e^{isP}, the conjugation-shift
identity for quantized symbols, and the covariance of the half-line
effects are exact; misaligned inputs report the wrap-around defect.

Operator conventions.  S(t) shifts forward, (S(t)g)(u) = g(u + t), and
S(t) = e^{itQ}, so [Q, P] = -i; the symmetric (selfadjoint-for-real-
symbols) quantization is then

    a(Q, P) = sum_{jk} ahat_{jk} e^{i u_j v_k / 2} e^{i v_k P} e^{i u_j Q},

with u_j in delta*Z and v_k on the dual grid 2 pi / (m delta) * Z.
Conjugation by e^{itP} twists the coefficients by e^{-i t u_j}, i.e.
translates the symbol to a_t(x, xi) = a(x + t, xi).
"""

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .operators import DEFAULT_TOL, adjoint, opnorm
from .regions import RegionSet


@dataclass(frozen=True)
class MellinLattice:
    """m-point lattice u_j = u_min + j*delta on a circle of circumference
    m*delta, with two identical channels (+/- original frequency sign)."""

    m: int
    delta: float
    u_min: float

    def __post_init__(self):
        if self.m < 8 or self.m % 2 != 0:
            raise ValueError("lattice size must be even and at least 8")
        if self.delta <= 0:
            raise ValueError("spacing must be positive")
        r = self.u_min / self.delta
        if abs(r - round(r)) > 1e-9:
            raise ValueError("u_min must be a multiple of delta")

    @property
    def circumference(self) -> float:
        return self.m * self.delta

    @cached_property
    def u(self) -> np.ndarray:
        return self.u_min + self.delta * np.arange(self.m)

    @property
    def dual_spacing(self) -> float:
        return 2 * np.pi / self.circumference

    @cached_property
    def q(self) -> np.ndarray:
        """Spectrum of the shift generator Q: dual grid 2 pi k / (m delta),
        k = -m/2 .. m/2 - 1, in ascending order."""
        k = np.arange(-self.m // 2, self.m // 2)
        return self.dual_spacing * k

    @cached_property
    def q_eigenvectors(self) -> np.ndarray:
        """Columns phi_q(l) = e^{i q u_l} / sqrt(m), one per dual point."""
        return np.exp(1j * np.outer(self.u, self.q)) / np.sqrt(self.m)

    # single-channel operators -------------------------------------------

    def shift(self, t: float) -> np.ndarray:
        """S(t) for t in delta*Z: exact circular permutation (S g)_l =
        g_{l+j}."""
        j = t / self.delta
        if abs(j - round(j)) > 1e-9:
            raise ValueError("shift amount must be a lattice multiple")
        j = int(round(j)) % self.m
        S = np.zeros((self.m, self.m), dtype=complex)
        S[np.arange(self.m), (np.arange(self.m) + j) % self.m] = 1.0
        return S

    def exp_P(self, s: float) -> np.ndarray:
        """e^{isP} = diag(e^{i s u_l})."""
        return np.diag(np.exp(1j * s * self.u))

    def exp_Q(self, t: float) -> np.ndarray:
        """e^{itQ} through the dual basis; coincides with shift(t) for
        t in delta*Z."""
        Phi = self.q_eigenvectors
        return (Phi * np.exp(1j * t * self.q)) @ adjoint(Phi)

    def spectral_multiplier_Q(self, values) -> np.ndarray:
        """f(Q) = Phi diag(f(q)) Phi*."""
        Phi = self.q_eigenvectors
        return (Phi * np.asarray(values)) @ adjoint(Phi)

    @cached_property
    def positive_sites(self) -> np.ndarray:
        """Indices of lattice sites with u_j >= 0 (closed half-line)."""
        return np.flatnonzero(self.u >= -1e-12)

    # symbol-side grids ---------------------------------------------------

    @property
    def x_length(self) -> float:
        """Circumference of the symbol's x-circle (dual of the u-lattice
        frequencies): 2 pi / delta."""
        return 2 * np.pi / self.delta

    @cached_property
    def x_grid(self) -> np.ndarray:
        return (self.x_length / self.m) * np.arange(self.m)

    def q_region(self, cells) -> RegionSet:
        """Region on the Q-spectral circle [-pi/delta, pi/delta)."""
        return RegionSet.line(cells, length=self.x_length,
                              base=-np.pi / self.delta)


def make_lattice(m: int, delta: float, u_min: float) -> MellinLattice:
    return MellinLattice(m=m, delta=delta, u_min=u_min)


def weyl_relation_residual(lat: MellinLattice, s: float, t: float) -> float:
    """|| e^{isP} S(t) - e^{-ist} S(t) e^{isP} ||.

    Exact (rounding-level) for t in delta*Z and s on the dual grid;
    generic s reports the wrap-around boundary defect.
    """
    j = t / lat.delta
    St = lat.shift(t) if abs(j - round(j)) < 1e-9 else lat.exp_Q(t)
    Es = lat.exp_P(s)
    return opnorm(Es @ St - np.exp(-1j * s * t) * St @ Es)


@dataclass
class SymbolRep:
    """Band-limited symbol: Fourier coefficients ahat over lattice-
    compatible frequencies plus principal-symbol samples per channel.

    ``coeffs`` maps integer pairs (j, k) to ahat at x-frequency u = j*delta
    and xi-frequency v = k * 2 pi / (m delta).  ``a0_pos`` / ``a0_neg``
    sample the principal symbol a0(x, +1) / a0(x, -1) on the x-grid.
    """

    coeffs: dict = field(default_factory=dict)
    a0_pos: np.ndarray = None
    a0_neg: np.ndarray = None

    def is_real(self, tol: float = DEFAULT_TOL) -> bool:
        for (j, k), c in self.coeffs.items():
            if abs(np.conj(self.coeffs.get((-j, -k), 0.0)) - c) > tol:
                return False
        return True

    def translated(self, lat: MellinLattice, t: float) -> "SymbolRep":
        """a_t(x, xi) = a(x + t, xi): coefficient twist e^{-i u_j t} and a
        circular roll of the principal samples (t must lie on the x-grid)."""
        dx = lat.x_length / lat.m
        r = t / dx
        if abs(r - round(r)) > 1e-9:
            raise ValueError("translation must be a multiple of the x-grid spacing")
        r = int(round(r))
        coeffs = {(j, k): c * np.exp(-1j * j * lat.delta * t)
                  for (j, k), c in self.coeffs.items()}
        roll = lambda a: None if a is None else np.roll(a, -r)
        return SymbolRep(coeffs=coeffs, a0_pos=roll(self.a0_pos),
                         a0_neg=roll(self.a0_neg))


def quantize(lat: MellinLattice, a: SymbolRep) -> np.ndarray:
    """Weyl quantization on the lattice, block diagonal over the two
    channels (each channel carries the same m x m operator)."""
    O = np.zeros((lat.m, lat.m), dtype=complex)
    nyq = lat.m // 2
    for (j, k), c in a.coeffs.items():
        if abs(j) > nyq or abs(k) > nyq:
            raise ValueError(f"coefficient ({j}, {k}) beyond the lattice "
                             "Nyquist bounds")
        u = j * lat.delta
        v = k * lat.dual_spacing
        O += c * np.exp(0.5j * u * v) * (lat.exp_P(v) @ lat.shift(u))
    Z = np.zeros_like(O)
    return np.block([[O, Z], [Z, O]])


def nc_integral(a: SymbolRep, x_length: float) -> float:
    """Noncommutative integral 0.5 * int (a0(x,1) + a0(x,-1)) dx by the
    rectangle rule (exact for band-limited periodic integrands)."""
    if a.a0_pos is None or a.a0_neg is None:
        raise ValueError("principal symbol samples are required")
    m = len(a.a0_pos)
    dx = x_length / m
    return float(0.5 * dx * (np.sum(np.real(a.a0_pos))
                             + np.sum(np.real(a.a0_neg))))


def htau_norm(a: SymbolRep, x_length: float) -> float:
    """Norm in the trace inner product at symbol level:
    sqrt(0.5 * int (a0(x,1)^2 + a0(x,-1)^2) dx)."""
    if a.a0_pos is None or a.a0_neg is None:
        raise ValueError("principal symbol samples are required")
    m = len(a.a0_pos)
    dx = x_length / m
    return float(np.sqrt(0.5 * dx * (np.sum(np.abs(a.a0_pos) ** 2)
                                     + np.sum(np.abs(a.a0_neg) ** 2))))


def _half_line_projection_channel(lat: MellinLattice) -> np.ndarray:
    P = np.zeros((lat.m, lat.m))
    P[lat.positive_sites, lat.positive_sites] = 1.0
    return P


def indicator_Q(lat: MellinLattice, B: RegionSet) -> np.ndarray:
    """1_B(Q) on one channel: a projection, finitely additive in B."""
    if abs(B.period - lat.x_length) > 1e-9:
        raise ValueError("region must live on the Q-spectral circle")
    vals = np.array(B.indicator(lat.q))
    return lat.spectral_multiplier_Q(vals)


def nc_effect(lat: MellinLattice, B: RegionSet) -> np.ndarray:
    """Effect 1_{R+}(P) 1_B(Q) 1_{R+}(P) compressed to the range of the
    half-line projection, both channels stacked block diagonally.

    B must be aligned to the Q-spectral cells [q_k, q_k + dual_spacing).
    """
    if not B.is_aligned(lat.dual_spacing):
        raise ValueError("region is not aligned to the Q-spectral cells")
    C = indicator_Q(lat, B)
    pos = lat.positive_sites
    Ech = C[np.ix_(pos, pos)]
    Z = np.zeros_like(Ech)
    return np.block([[Ech, Z], [Z, Ech]])


def nc_covariance_residual(lat: MellinLattice, t: float, B: RegionSet) -> dict:
    """|| e^{itP} E_B e^{-itP} - E_{B+t} || on the compressed range.

    Exact for t on the Q-dual lattice; misaligned t is routed to the
    sampled-indicator interpolation path and its error reported.
    """
    pos = lat.positive_sites
    u_pos = lat.u[pos]
    phase = np.exp(1j * t * u_pos)
    phase2 = np.concatenate([phase, phase])
    E = nc_effect(lat, B)
    conj = (phase2[:, None] * E) * np.conj(phase2)[None, :]
    steps = t / lat.dual_spacing
    shifted = B.shifted(t)
    exact = abs(steps - round(steps)) < 1e-9 and shifted.is_aligned(lat.dual_spacing)
    if exact:
        target = nc_effect(lat, shifted)
    else:
        C = lat.spectral_multiplier_Q(np.array(shifted.indicator(lat.q)))
        Ech = C[np.ix_(pos, pos)]
        Z = np.zeros_like(Ech)
        target = np.block([[Ech, Z], [Z, Ech]])
    return {"residual": opnorm(conj - target), "exact_path": exact}


def conjugation_residual(lat: MellinLattice, t: float, a: SymbolRep) -> float:
    """|| e^{itP} a(Q,P) e^{-itP} - a_t(Q,P) || with a_t: (x, xi) ->
    a(x + t, xi); exact for t on the x-grid (= Q-dual lattice)."""
    dx = lat.x_length / lat.m
    r = t / dx
    if abs(r - round(r)) > 1e-9:
        raise ValueError("translation must lie on the x-grid for the exact path")
    phase = np.exp(1j * t * lat.u)
    phase2 = np.concatenate([phase, phase])
    A = quantize(lat, a)
    conj = (phase2[:, None] * A) * np.conj(phase2)[None, :]
    return opnorm(conj - quantize(lat, a.translated(lat, t)))
