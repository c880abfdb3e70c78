"""Two-qubit concurrence.

Two-qubit amplitudes are always ordered |00>, |01>, |10>, |11>.
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidArgumentError
from .spin import SIGMA_Y, check_density

_YY = np.kron(SIGMA_Y, SIGMA_Y)


def concurrence_pure(psi) -> float:
    """C = 2 |a00 a11 - a01 a10| for a normalized two-qubit pure state."""
    psi = np.asarray(psi, dtype=complex).ravel()
    if psi.size != 4:
        raise InvalidArgumentError(f"expected 4 amplitudes, got {psi.size}")
    if abs(np.vdot(psi, psi).real - 1.0) > 1e-8:
        raise InvalidArgumentError("state is not normalized")
    return float(min(1.0, 2.0 * abs(psi[0] * psi[3] - psi[1] * psi[2])))


def concurrence_wootters(rho) -> float:
    """Wootters concurrence max(0, l1 - l2 - l3 - l4) of a two-qubit density matrix."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise InvalidArgumentError(f"expected a 4x4 density matrix, got shape {rho.shape}")
    rho = check_density(rho)
    # lambda_i are the singular values of W^T (Y x Y) W with rho = W W^+; this
    # avoids square roots of near-zero eigenvalues of rho * rho_tilde
    evals, vecs = np.linalg.eigh(rho)
    w = vecs * np.sqrt(np.clip(evals, 0.0, None))
    lam = np.linalg.svd(w.T @ _YY @ w, compute_uv=False)
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def residual_ab_state(omega: float) -> np.ndarray:
    """[(omega^2 - 1)|10> + 2i omega |01>] / (omega^2 + 1)."""
    psi = np.zeros(4, dtype=complex)
    psi[0b01] = 2j * omega
    psi[0b10] = omega * omega - 1.0
    return psi / (omega * omega + 1.0)


def concurrence_at_tc_closed(omega: float) -> float:
    """Concurrence of the A-B pair at t_c for |psi>|01> input: 4w|w^2-1|/(w^2+1)^2."""
    w2 = omega * omega
    return float(4.0 * abs(omega) * abs(w2 - 1.0) / (w2 + 1.0) ** 2)


def concurrence_at_tc_printed(omega: float) -> float:
    """Literal 2 max{0, 2w(w^2-1)/(w^2+1)^2}; vanishes wrongly for 0 < w < 1."""
    w2 = omega * omega
    return float(2.0 * max(0.0, 2.0 * omega * (w2 - 1.0) / (w2 + 1.0) ** 2))
