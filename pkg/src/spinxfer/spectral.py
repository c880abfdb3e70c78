"""Eigensystems, propagators and the closed-form three-site solution."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import InvalidArgumentError, NoRealRootsError
from .spin import ChainSpec, build_hamiltonian, sector_codes


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Ascending eigenvalues with matching orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "eigenvalues", _frozen(self.eigenvalues))
        object.__setattr__(self, "eigenvectors", _frozen(self.eigenvectors))

    @property
    def dim(self) -> int:
        return self.eigenvalues.size

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T

    def projector(self, energy: float, tol: float = 1e-8) -> np.ndarray:
        """Projector onto the (possibly degenerate) eigenspace at ``energy``."""
        cols = self.eigenvectors[:, np.abs(self.eigenvalues - energy) <= tol]
        return cols @ cols.conj().T


def fix_phases(vectors: np.ndarray) -> np.ndarray:
    """Rotate each column so its largest-modulus entry is real and positive.

    Ties (within 1e-9) go to the lowest index.
    """
    vectors = np.array(vectors, dtype=complex)
    if vectors.ndim == 1:
        return fix_phases(vectors[:, None])[:, 0]
    mod = np.abs(vectors)
    # first entry within 1e-9 of the column maximum, so near-ties resolve stably
    idx = np.argmax(mod >= mod.max(axis=0) - 1e-9, axis=0)
    pivots = vectors[idx, np.arange(vectors.shape[1])]
    return vectors * (np.abs(pivots) / pivots)


def eigendecompose(h: np.ndarray) -> Spectrum:
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise InvalidArgumentError(f"expected a square matrix, got shape {h.shape}")
    scale = max(1.0, float(np.max(np.abs(h), initial=0.0)))
    if np.max(np.abs(h - h.conj().T), initial=0.0) > 1e-10 * scale:
        raise InvalidArgumentError("matrix is not Hermitian")
    evals, evecs = np.linalg.eigh(0.5 * (h + h.conj().T))
    return Spectrum(evals, fix_phases(evecs))


@lru_cache(maxsize=8)
def chain_spectrum(spec: ChainSpec) -> Spectrum:
    """Cached full spectrum of the chain Hamiltonian."""
    return eigendecompose(build_hamiltonian(spec))


def single_excitation_codes(n_sites: int) -> np.ndarray:
    """Codes of the one-excitation states ordered by site: |10..0>, |01..0>, ..."""
    return sector_codes(n_sites, 1 - n_sites / 2)[::-1]


def single_excitation_block(spec: ChainSpec) -> np.ndarray:
    """Hamiltonian restricted to one excitation, rows ordered by excited site."""
    idx = single_excitation_codes(spec.n_sites)
    return build_hamiltonian(spec)[np.ix_(idx, idx)]


def propagator_at(spectrum: Spectrum, t: float) -> np.ndarray:
    """U(t) = sum_j exp(-i E_j t) |v_j><v_j|."""
    v = spectrum.eigenvectors
    return (v * np.exp(-1j * spectrum.eigenvalues * t)) @ v.conj().T


def expm_oracle(h: np.ndarray, t: float) -> np.ndarray:
    """exp(-i h t) by scaling and squaring of a truncated Taylor series.

    Deliberately independent of any eigendecomposition; used to cross-check
    :func:`propagator_at`.
    """
    a = -1j * t * np.asarray(h, dtype=complex)
    dim = a.shape[0]
    norm = float(np.max(np.sum(np.abs(a), axis=0), initial=0.0))
    squarings = max(0, math.ceil(math.log2(norm / 0.25))) if norm > 0.25 else 0
    a = a / 2.0**squarings
    result = np.eye(dim, dtype=complex)
    term = np.eye(dim, dtype=complex)
    # ||a|| <= 1/4, so 20 terms leave a remainder far below double precision
    for k in range(1, 21):
        term = term @ a / k
        result = result + term
        if np.max(np.abs(term)) < 1e-18:
            break
    for _ in range(squarings):
        result = result @ result
    return result


def solve_cubic_trig(b: float, c: float, d: float) -> np.ndarray:
    """Ascending real roots of x^3 + b x^2 + c x + d = 0 (three-real-root case).

    Uses the trigonometric (Viete) form on the depressed cubic.
    """
    shift = b / 3.0
    p = c - b * b / 3.0
    q = 2.0 * b**3 / 27.0 - b * c / 3.0 + d
    if p == 0.0:
        if q == 0.0:
            return np.full(3, -shift)
        raise NoRealRootsError(f"cubic has one real root only (p=0, q={q!r})")
    disc = -(4.0 * p**3 + 27.0 * q * q)
    arg = (3.0 * q / (2.0 * p)) * math.sqrt(-3.0 / p) if p < 0 else math.inf
    if p > 0 or abs(arg) > 1.0 + 1e-12:
        raise NoRealRootsError(
            f"cubic has complex roots: discriminant {disc!r} < 0 (p={p!r}, q={q!r})"
        )
    phi = math.acos(max(-1.0, min(1.0, arg))) / 3.0
    r = 2.0 * math.sqrt(-p / 3.0)
    roots = [r * math.cos(phi - 2.0 * math.pi * k / 3.0) - shift for k in range(3)]
    return np.sort(np.array(roots))


def eta_cubic_coefficients(delta: float, omega: float) -> tuple[float, float, float]:
    """(b, c, d) of eta^3 + 2 delta eta^2 - (2 + omega^2) eta - 2 delta omega^2."""
    return 2.0 * delta, -(2.0 + omega * omega), -2.0 * delta * omega * omega


def cubic_eta_roots(delta: float, omega: float) -> np.ndarray:
    if not (math.isfinite(delta) and math.isfinite(omega)):
        raise InvalidArgumentError("coefficients must be finite")
    return solve_cubic_trig(*eta_cubic_coefficients(delta, omega))


def cubic_residual(eta, delta: float, omega: float) -> np.ndarray:
    b, c, d = eta_cubic_coefficients(delta, omega)
    eta = np.asarray(eta, dtype=float)
    return ((eta + b) * eta + c) * eta + d


def _b_coefficient(eta: np.ndarray, omega: float) -> np.ndarray:
    # without the square root the assembled vector is not an eigenvector
    u = eta * eta - omega * omega
    return u / np.sqrt(u * u + 2.0 * (eta * eta + omega * omega))


@dataclass(frozen=True, eq=False)
class AnalyticEigensystemN3:
    """Closed-form single-excitation eigenpairs of the delta = 0 three-site chain.

    Vector k is a_k|100> + b_k|010> + c_k|001> with energy (J/2) eta_k.
    """

    omega: float
    eta: np.ndarray
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    beta: np.ndarray

    def vectors(self) -> np.ndarray:
        """Columns in the site-ordered basis (|100>, |010>, |001>)."""
        return np.vstack([self.a, self.b.astype(complex), self.c])

    def energies(self, j: float) -> np.ndarray:
        return 0.5 * j * self.eta


def analytic_eigensystem_n3(omega: float) -> AnalyticEigensystemN3:
    omega = float(omega)
    eta = cubic_eta_roots(0.0, omega)
    # the middle root is exactly zero at delta = 0
    eta = np.where(np.abs(eta) < 1e-12 * max(1.0, abs(omega)), 0.0, eta)
    zero = eta == 0.0
    safe_eta = np.where(zero, 1.0, eta)
    # at eta = 0 the coefficient reduces to -|omega|/sqrt(omega^2 + 2), stable as omega -> 0
    b = np.where(zero, -abs(omega) / math.sqrt(omega * omega + 2.0), _b_coefficient(safe_eta, omega))
    # quadrant fixed by atan2 so cos(beta) carries the sign of eta
    beta = np.where(zero, math.copysign(0.5 * math.pi, 1.0 if omega >= 0 else -1.0), np.arctan2(omega, safe_eta))
    a = np.sqrt(np.clip((1.0 - b * b) / 2.0, 0.0, None)) * np.exp(-1j * beta)
    return AnalyticEigensystemN3(
        omega=omega, eta=_frozen(eta), a=_frozen(a), b=_frozen(b), c=_frozen(a.conj()), beta=_frozen(beta)
    )


@dataclass(frozen=True)
class TauElements:
    """Distinct entries of the three-site propagator in the one-excitation sector.

    With |100>, |010>, |001> ordering, the block reads
    [[tau1, tau2, tau3], [tau4, tau5, tau2], [tau6, tau4, tau1]].
    """

    tau1: complex
    tau2: complex
    tau3: complex
    tau4: complex
    tau5: complex
    tau6: complex

    def block(self) -> np.ndarray:
        t1, t2, t3, t4, t5, t6 = self.tau1, self.tau2, self.tau3, self.tau4, self.tau5, self.tau6
        return np.array([[t1, t2, t3], [t4, t5, t2], [t6, t4, t1]], dtype=complex)


def tau_elements(omega: float, t, j: float = 1.0, system: AnalyticEigensystemN3 | None = None) -> TauElements:
    """Evaluate the six sums over the closed-form eigenpairs (delta = 0).

    ``t`` may be a scalar or an array; each field then has the shape of ``t``.
    """
    es = analytic_eigensystem_n3(omega) if system is None else system
    phases = np.exp(-1j * np.multiply.outer(np.asarray(t, dtype=float), es.energies(j)))
    a, b, c = es.a, es.b, es.c

    def tau(w):
        out = phases @ w
        return complex(out) if np.ndim(out) == 0 else out

    return TauElements(
        tau1=tau(a * c), tau2=tau(a * b), tau3=tau(a * a), tau4=tau(b * c), tau5=tau(b * b), tau6=tau(c * c)
    )
