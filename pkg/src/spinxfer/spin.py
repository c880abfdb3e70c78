"""Basis conventions, the chain Hamiltonian and small state algebra.

Basis codes are integers in ``[0, 2**N)``. Site 1 is the most significant
bit; bit value 1 is the state |1> with sigma^z = +1 and bit value 0 is |0>
with sigma^z = -1. Arrays are stored in ascending code order. The listing
|111>, |110>, ..., |000> used for the printed N=3 propagator is descending
code order; see :func:`to_descending_order`.

Sites are labelled 1..N in every public function.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidArgumentError, InvalidSpecError, PreconditionError

# single-site matrices in the bit basis (index 0 -> |0>, index 1 -> |1>)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, 1j], [-1j, 0]], dtype=complex)
SIGMA_Z = np.array([[-1, 0], [0, 1]], dtype=complex)
IDENTITY2 = np.eye(2, dtype=complex)


@dataclass(frozen=True)
class ChainSpec:
    """Physical parameters of one open chain (hbar = 1)."""

    n_sites: int
    j: float = 1.0
    delta: float = 0.0
    omega: float = 0.0

    def __post_init__(self):
        if int(self.n_sites) != self.n_sites or self.n_sites < 2:
            raise InvalidSpecError(f"n_sites must be an integer >= 2, got {self.n_sites!r}")
        for name in ("j", "delta", "omega"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise InvalidSpecError(f"{name} must be finite, got {value!r}")
        object.__setattr__(self, "n_sites", int(self.n_sites))
        for name in ("j", "delta", "omega"):
            object.__setattr__(self, name, float(getattr(self, name)))

    @property
    def dim(self) -> int:
        return 2**self.n_sites


def _apply_pauli_string(codes: np.ndarray, n_sites: int, string: Sequence[tuple[int, str]]):
    """Action of a Pauli product on every basis code at once.

    Returns ``(targets, coeffs)`` with P|c> = coeffs[c] |targets[c]>.
    """
    targets = codes.copy()
    coeffs = np.ones(codes.shape, dtype=complex)
    for site, label in string:
        shift = n_sites - site
        bit = (codes >> shift) & 1
        if label == "x":
            targets ^= 1 << shift
        elif label == "y":
            targets ^= 1 << shift
            coeffs *= np.where(bit == 1, 1j, -1j)
        elif label == "z":
            coeffs *= 2 * bit - 1
        else:
            raise ValueError(label)
    return targets, coeffs


def hamiltonian_terms(spec: ChainSpec) -> list[tuple[float, tuple[tuple[int, str], ...]]]:
    """List of ``(coefficient, pauli_string)`` pairs making up H.

    The chiral three-spin term only runs over interior sites 2..N-1.
    """
    n, scale = spec.n_sites, spec.j / 4.0
    terms = []
    for i in range(1, n):
        terms.append((scale, ((i, "x"), (i + 1, "x"))))
        terms.append((scale, ((i, "y"), (i + 1, "y"))))
        if spec.delta != 0.0:
            terms.append((scale * spec.delta, ((i, "z"), (i + 1, "z"))))
    if spec.omega != 0.0:
        for i in range(2, n):
            terms.append((scale * spec.omega, ((i - 1, "x"), (i, "z"), (i + 1, "y"))))
            terms.append((-scale * spec.omega, ((i - 1, "y"), (i, "z"), (i + 1, "x"))))
    return terms


def build_hamiltonian(spec: ChainSpec) -> np.ndarray:
    """Dense Hamiltonian of the open XXZ chain with three-spin chiral exchange.

    H = (J/4) [ sum_i (XX + YY + delta ZZ)_{i,i+1}
                + omega sum_{interior i} (X_{i-1} Z_i Y_{i+1} - Y_{i-1} Z_i X_{i+1}) ]
    """
    if not isinstance(spec, ChainSpec):
        raise InvalidSpecError("expected a ChainSpec")
    dim = spec.dim
    codes = np.arange(dim)
    h = np.zeros((dim, dim), dtype=complex)
    for coeff, string in hamiltonian_terms(spec):
        targets, amps = _apply_pauli_string(codes, spec.n_sites, string)
        np.add.at(h, (targets, codes), coeff * amps)
    return h


def site_operator(ops: dict[int, np.ndarray], n_sites: int) -> np.ndarray:
    """Kronecker product with ``ops[site]`` on the given sites and identity elsewhere."""
    out = np.ones((1, 1), dtype=complex)
    for site in range(1, n_sites + 1):
        out = np.kron(out, ops.get(site, IDENTITY2))
    return out


def total_sz(n_sites: int) -> np.ndarray:
    """S^z = (1/2) sum_i sigma^z_i as a dense diagonal matrix."""
    return np.diag(sector_labels(n_sites)).astype(complex)


def popcount(code: int) -> int:
    return bin(int(code)).count("1")


def sector_index(code: int, n_sites: int) -> float:
    """S^z eigenvalue of a basis state: half of (#ones - #zeros)."""
    if not 0 <= code < 2**n_sites:
        raise InvalidArgumentError(f"code {code} out of range for {n_sites} sites")
    ones = popcount(code)
    return 0.5 * (ones - (n_sites - ones))


def sector_labels(n_sites: int) -> np.ndarray:
    codes = np.arange(2**n_sites)
    ones = np.array([popcount(c) for c in codes])
    return 0.5 * (2 * ones - n_sites)


def sector_codes(n_sites: int, sz: float) -> np.ndarray:
    """Ascending basis codes whose S^z equals ``sz``."""
    return np.flatnonzero(np.isclose(sector_labels(n_sites), sz))


def sector_blocks(h: np.ndarray, n_sites: int) -> dict[float, tuple[np.ndarray, np.ndarray]]:
    """Split an S^z-conserving operator into its magnetization blocks.

    Returns ``{sz: (codes, block)}`` ordered by increasing sz.
    """
    blocks = {}
    for m in range(n_sites + 1):
        sz = 0.5 * (2 * m - n_sites)
        idx = sector_codes(n_sites, sz)
        blocks[sz] = (idx, h[np.ix_(idx, idx)])
    return blocks


def to_descending_order(x: np.ndarray) -> np.ndarray:
    """Reorder a vector or matrix from ascending to descending code order.

    The map is an involution, so it also converts back.
    """
    x = np.asarray(x)
    if x.ndim == 1:
        return x[::-1].copy()
    if x.ndim == 2:
        return x[::-1, ::-1].copy()
    raise InvalidArgumentError("expected a vector or a square matrix")


from_descending_order = to_descending_order


def code_of(bits: str) -> int:
    """``'100'`` -> 4; site 1 is the leftmost character."""
    if not bits or set(bits) - {"0", "1"}:
        raise InvalidArgumentError(f"not a bit string: {bits!r}")
    return int(bits, 2)


def basis_state(bits: str) -> np.ndarray:
    psi = np.zeros(2 ** len(bits), dtype=complex)
    psi[code_of(bits)] = 1.0
    return psi


def qubit_state(theta: float, phi: float) -> np.ndarray:
    """cos(theta/2)|0> + sin(theta/2) e^{i phi}|1>."""
    return np.array([math.cos(theta / 2), math.sin(theta / 2) * np.exp(1j * phi)], dtype=complex)


def product_state(*factors: np.ndarray) -> np.ndarray:
    out = np.ones(1, dtype=complex)
    for f in factors:
        out = np.kron(out, np.asarray(f, dtype=complex))
    return out


def check_state(psi, tol: float = 1e-10) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    if psi.ndim != 1 or psi.size < 2 or psi.size & (psi.size - 1):
        raise InvalidArgumentError(f"state length must be a power of two >= 2, got shape {psi.shape}")
    norm2 = float(np.vdot(psi, psi).real)
    if abs(norm2 - 1.0) > tol:
        raise InvalidArgumentError(f"state is not normalized (|psi|^2 = {norm2!r})")
    return psi


def check_density(rho, tol: float = 1e-10) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise InvalidArgumentError(f"density matrix must be square, got shape {rho.shape}")
    if np.max(np.abs(rho - rho.conj().T)) > tol:
        raise InvalidArgumentError("density matrix is not Hermitian")
    if abs(np.trace(rho).real - 1.0) > tol:
        raise InvalidArgumentError("density matrix does not have unit trace")
    if np.linalg.eigvalsh(rho).min() < -1e-10:
        raise InvalidArgumentError("density matrix is not positive semidefinite")
    return rho


def _n_sites_of(dim: int) -> int:
    n = dim.bit_length() - 1
    if dim < 2 or 2**n != dim:
        raise InvalidArgumentError(f"dimension {dim} is not a power of two")
    return n


def _normalize_keep(keep: Iterable[int], n_sites: int) -> list[int]:
    keep = sorted(set(int(k) for k in keep))
    if not keep:
        raise InvalidArgumentError("keep-set must be nonempty")
    if keep[0] < 1 or keep[-1] > n_sites:
        raise InvalidArgumentError(f"sites must lie in 1..{n_sites}, got {keep}")
    return keep


def reduce_pure_batch(psis: np.ndarray, keep: Iterable[int]) -> np.ndarray:
    """Reduced density matrices for a stack of pure states of shape (M, 2**N)."""
    psis = np.asarray(psis, dtype=complex)
    n = _n_sites_of(psis.shape[-1])
    keep = _normalize_keep(keep, n)
    rest = [s for s in range(1, n + 1) if s not in keep]
    m = psis.shape[0]
    t = psis.reshape((m,) + (2,) * n)
    t = t.transpose([0] + keep + rest).reshape(m, 2 ** len(keep), 2 ** len(rest))
    return np.einsum("mar,mbr->mab", t, t.conj())


def partial_trace(x, keep: Iterable[int]) -> np.ndarray:
    """Reduced density matrix on the sites in ``keep`` (1-based).

    ``x`` is a pure state vector or a density matrix. Kept sites retain
    their relative order.
    """
    x = np.asarray(x, dtype=complex)
    if x.ndim == 1:
        return reduce_pure_batch(x[None, :], keep)[0]
    if x.ndim != 2 or x.shape[0] != x.shape[1]:
        raise InvalidArgumentError(f"expected a state vector or square matrix, got shape {x.shape}")
    n = _n_sites_of(x.shape[0])
    keep = _normalize_keep(keep, n)
    rest = [s for s in range(1, n + 1) if s not in keep]
    k, r = len(keep), len(rest)
    t = x.reshape((2,) * (2 * n))
    perm = [s - 1 for s in keep + rest] + [n + s - 1 for s in keep + rest]
    t = t.transpose(perm).reshape(2**k, 2**r, 2**k, 2**r)
    return np.einsum("arbr->ab", t)


def purity(rho: np.ndarray) -> float:
    return float(np.real(np.trace(rho @ rho)))


def state_fidelity(rho0: np.ndarray, rhot: np.ndarray) -> float:
    """Tr[rho_t rho_0] for a pure reference state ``rho0``.

    The trace shortcut equals the Uhlmann fidelity only when ``rho0`` is pure,
    so a mixed ``rho0`` is rejected.
    """
    rho0 = np.asarray(rho0, dtype=complex)
    rhot = np.asarray(rhot, dtype=complex)
    if rho0.shape != rhot.shape:
        raise InvalidArgumentError(f"shape mismatch {rho0.shape} vs {rhot.shape}")
    if purity(rho0) < 1 - 1e-10:
        raise PreconditionError("reference state must be pure")
    return float(np.real(np.einsum("ab,ba->", rhot, rho0)))
