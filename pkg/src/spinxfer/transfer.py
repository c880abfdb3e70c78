"""Time evolution, transfer amplitudes, average fidelity and characteristic times."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import InvalidArgumentError, NotFoundError, UnsupportedError
from .spectral import chain_spectrum, propagator_at
from .spin import ChainSpec, build_hamiltonian, check_state, reduce_pure_batch

INITIAL_FAMILIES = ("a-psi-00", "a-psi-01", "one-zeros")


@dataclass(frozen=True)
class TransferReport:
    t: float
    amplitude: complex
    avg_fidelity: float
    excitation_probability: float


@dataclass(frozen=True)
class CharacteristicTime:
    n: int
    t_c: float


class Estimate(NamedTuple):
    value: float
    error: float


def site_code(site: int, n_sites: int) -> int:
    """Code of the state with a single excitation on ``site``."""
    if not 1 <= site <= n_sites:
        raise InvalidArgumentError(f"site {site} outside 1..{n_sites}")
    return 1 << (n_sites - site)


def evolve_state(spec: ChainSpec, psi0, t: float) -> np.ndarray:
    psi0 = check_state(psi0)
    if psi0.size != spec.dim:
        raise InvalidArgumentError(f"state has dimension {psi0.size}, chain needs {spec.dim}")
    sp = chain_spectrum(spec)
    v = sp.eigenvectors
    return v @ (np.exp(-1j * sp.eigenvalues * t) * (v.conj().T @ psi0))


def amplitude_weights(spec: ChainSpec, source: int, target: int) -> tuple[np.ndarray, np.ndarray]:
    """``(E, w)`` such that <target|U(t)|source> = sum_j w_j exp(-i E_j t)."""
    src, tgt = site_code(source, spec.n_sites), site_code(target, spec.n_sites)
    if src == tgt:
        raise InvalidArgumentError("source and target must differ")
    sp = chain_spectrum(spec)
    v = sp.eigenvectors
    return sp.eigenvalues, v[tgt] * v[src].conj()


def transfer_amplitude(spec: ChainSpec, t, source: int = 1, target: int | None = None):
    """<0..1_target..0| U(t) |0..1_source..0>; ``t`` may be an array."""
    target = spec.n_sites if target is None else target
    energies, w = amplitude_weights(spec, source, target)
    out = np.exp(-1j * np.multiply.outer(np.asarray(t, dtype=float), energies)) @ w
    return complex(out) if np.ndim(out) == 0 else out


def vacuum_energy(spec: ChainSpec) -> float:
    """Energy of |0...0>, which is alone in its magnetization sector."""
    return float(build_hamiltonian(spec)[0, 0].real)


def average_fidelity_closed(spec: ChainSpec, t):
    """Bloch-averaged fidelity for |psi>_A |00>_BC -> site C, in closed form.

    F = (1 + |f|^2 + Re(e^{i E0 t} f)) / 3 + (1 - |f|^2) / 6 with f the
    1 -> 3 amplitude and E0 the energy of |000>.
    """
    if spec.n_sites != 3:
        raise UnsupportedError("closed-form average fidelity needs n_sites = 3; use the reference integral")
    t = np.asarray(t, dtype=float)
    f = np.asarray(transfer_amplitude(spec, t, 1, 3))
    f2 = np.abs(f) ** 2
    out = (1.0 + f2 + np.real(np.exp(1j * vacuum_energy(spec) * t) * f)) / 3.0 + (1.0 - f2) / 6.0
    return float(out) if out.ndim == 0 else out


def transfer_report(spec: ChainSpec, t: float) -> TransferReport:
    f = transfer_amplitude(spec, t)
    if spec.n_sites == 3:
        avg = average_fidelity_closed(spec, t)
    else:
        avg = average_fidelity_reference(spec, t).value
    return TransferReport(t=float(t), amplitude=f, avg_fidelity=avg, excitation_probability=abs(f) ** 2)


def register_states(qubits: np.ndarray, n_sites: int, initial: str = "a-psi-00") -> np.ndarray:
    """Embed qubit states of site 1 into the full register, shape (M, 2**N).

    ``a-psi-00`` puts the rest in |0..0>; ``a-psi-01`` sets the last site to |1>.
    """
    qubits = np.atleast_2d(np.asarray(qubits, dtype=complex))
    if initial == "a-psi-00":
        rest = 0
    elif initial == "a-psi-01":
        rest = 1
    else:
        raise InvalidArgumentError(f"initial family {initial!r} has no Bloch-sphere input")
    out = np.zeros((qubits.shape[0], 2**n_sites), dtype=complex)
    half = 2 ** (n_sites - 1)
    out[:, rest] = qubits[:, 0]
    out[:, half + rest] = qubits[:, 1]
    return out


def _bloch_qubits(cos_theta: np.ndarray, phi: np.ndarray) -> np.ndarray:
    c = np.sqrt((1.0 + cos_theta) / 2.0)
    s = np.sqrt(np.clip((1.0 - cos_theta) / 2.0, 0.0, None))
    return np.stack([c.astype(complex), s * np.exp(1j * phi)], axis=1)


def bloch_quadrature(n_theta: int = 8, n_phi: int = 8) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre in cos(theta) times the periodic rectangle rule in phi.

    Returns qubit states (M, 2) and weights normalized to sum to one.
    """
    x, wx = np.polynomial.legendre.leggauss(n_theta)
    phi = 2.0 * math.pi * np.arange(n_phi) / n_phi
    xx, pp = np.meshgrid(x, phi, indexing="ij")
    weights = np.repeat(wx / 2.0, n_phi) / n_phi
    return _bloch_qubits(xx.ravel(), pp.ravel()), weights


def _pointwise_fidelity(spec, t, qubits, initial, target, chunk=1 << 14) -> np.ndarray:
    u = propagator_at(chain_spectrum(spec), t)
    out = np.empty(qubits.shape[0])
    for start in range(0, qubits.shape[0], chunk):
        q = qubits[start:start + chunk]
        evolved = register_states(q, spec.n_sites, initial) @ u.T
        rho = reduce_pure_batch(evolved, [target])
        out[start:start + chunk] = np.real(np.einsum("ma,mab,mb->m", q.conj(), rho, q))
    return out


def fidelity_for_input(spec: ChainSpec, t: float, theta: float, phi: float,
                       initial: str = "a-psi-00", target: int | None = None) -> float:
    """Tr[rho_t rho_0] for one Bloch input state on site 1."""
    target = spec.n_sites if target is None else target
    return float(_pointwise_fidelity(spec, t, _bloch_qubits(np.array([math.cos(theta)]), np.array([phi])),
                                     initial, target)[0])


def average_fidelity_reference(spec: ChainSpec, t: float, method: str = "quadrature",
                               samples: int = 100_000, seed: int = 0, initial: str = "a-psi-00",
                               target: int | None = None, n_theta: int = 8, n_phi: int = 8) -> Estimate:
    """Bloch-sphere average of Tr[rho_t rho_0] by direct integration.

    ``quadrature`` reports the difference to a doubled rule as its error;
    ``montecarlo`` reports the standard error of the mean.
    """
    target = spec.n_sites if target is None else target
    if method == "quadrature":
        q, w = bloch_quadrature(n_theta, n_phi)
        value = float(w @ _pointwise_fidelity(spec, t, q, initial, target))
        q2, w2 = bloch_quadrature(2 * n_theta, 2 * n_phi)
        finer = float(w2 @ _pointwise_fidelity(spec, t, q2, initial, target))
        return Estimate(value, abs(finer - value))
    if method == "montecarlo":
        if samples < 1:
            raise InvalidArgumentError("montecarlo needs at least one sample")
        rng = np.random.default_rng(seed)
        cos_theta = rng.uniform(-1.0, 1.0, samples)
        phi = rng.uniform(0.0, 2.0 * math.pi, samples)
        vals = _pointwise_fidelity(spec, t, _bloch_qubits(cos_theta, phi), initial, target)
        err = float(vals.std(ddof=1) / math.sqrt(samples)) if samples > 1 else math.inf
        return Estimate(float(vals.mean()), err)
    raise InvalidArgumentError(f"unknown method {method!r}")


def characteristic_period(omega: float, j: float = 1.0) -> float:
    return 4.0 * math.pi / (j * math.sqrt(omega * omega + 2.0))


def characteristic_time_analytic(omega: float, j: float = 1.0, n: int = 0) -> CharacteristicTime:
    """t_c = [(4n+2) pi + 2 arctan(omega sqrt(omega^2+2))] / (J sqrt(omega^2+2))."""
    if not j > 0:
        raise InvalidArgumentError(f"j must be positive, got {j!r}")
    if int(n) != n or n < 0:
        raise InvalidArgumentError(f"branch index must be a nonnegative integer, got {n!r}")
    s = math.sqrt(omega * omega + 2.0)
    t_c = ((4 * n + 2) * math.pi + 2.0 * math.atan(omega * s)) / (j * s)
    return CharacteristicTime(n=int(n), t_c=t_c)


def _refine_peak(energies, w, lo, hi, iters=200):
    """Bisection on the sign of d|f|^2/dt inside a bracket around a maximum."""

    def slope(t):
        ph = w * np.exp(-1j * energies * t)
        f, df = ph.sum(), (-1j * energies * ph).sum()
        return (f.conjugate() * df).real

    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if slope(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def characteristic_time_numeric(spec: ChainSpec, window: tuple[float, float] = (0.0, 10.0),
                                tol: float = 1e-10, source: int = 1, target: int | None = None) -> float:
    """Earliest t in ``window`` with 1 - |f(t)| <= tol.

    Local maxima of |f|^2 are bracketed on a grid and refined by bisection
    on the derivative sign.
    """
    t0, t1 = map(float, window)
    if t0 < 0 or t1 <= t0:
        raise InvalidArgumentError(f"bad window {window!r}")
    target = spec.n_sites if target is None else target
    energies, w = amplitude_weights(spec, source, target)
    live = np.abs(w) > 1e-14
    width = np.ptp(energies[live]) if live.any() else 0.0
    if width == 0.0:
        raise NotFoundError("amplitude is time independent")
    step = 2.0 * math.pi / width / 1000.0
    grid = np.linspace(t0, t1, max(3, int(math.ceil((t1 - t0) / step)) + 1))
    g = np.abs(np.exp(-1j * np.multiply.outer(grid, energies)) @ w) ** 2
    for i in range(len(grid)):
        if 0 < i < len(grid) - 1:
            if not (g[i] >= g[i - 1] and g[i] >= g[i + 1]):
                continue
            t = _refine_peak(energies, w, grid[i - 1], grid[i + 1])
        elif g[i] >= g[min(i + 1, len(grid) - 1)] and g[i] >= g[max(i - 1, 0)]:
            t = grid[i]
        else:
            continue
        if 1.0 - abs(np.sum(w * np.exp(-1j * energies * t))) <= tol:
            return float(t)
    raise NotFoundError(
        f"no perfect-transfer time in [{t0}, {t1}] (max |f|^2 on grid = {g.max():.12g})"
    )


def tc_argmax(j: float = 1.0, omega_range: tuple[float, float] = (0.0, 3.0),
              resolution: float = 0.01) -> tuple[float, float]:
    """Interior maximum of the n = 0 characteristic time over omega."""
    lo, hi = map(float, omega_range)
    if not (0.0 <= lo < hi <= 5.0) or resolution <= 0:
        raise InvalidArgumentError("omega range must lie in [0, 5] and resolution be positive")

    def tc(w):
        return characteristic_time_analytic(w, j, 0).t_c

    grid = np.linspace(lo, hi, int(math.ceil((hi - lo) / resolution)) + 1)
    values = np.array([tc(w) for w in grid])
    i = int(np.argmax(values))
    if i == 0 or i == len(grid) - 1:
        raise NotFoundError("maximum lies on the boundary of the omega range")
    res = minimize_scalar(lambda w: -tc(w), bracket=(grid[i - 1], grid[i], grid[i + 1]),
                          method="golden", tol=1e-10)
    return float(res.x), float(-res.fun)
