"""Deterministic CSV parameter sweeps."""

from __future__ import annotations

import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import __version__
from .entanglement import concurrence_at_tc_closed
from .errors import InvalidArgumentError
from .spin import ChainSpec
from .transfer import (
    INITIAL_FAMILIES,
    average_fidelity_closed,
    average_fidelity_reference,
    characteristic_time_analytic,
    fidelity_for_input,
    transfer_amplitude,
)

KINDS = ("fidelity", "tc", "concurrence", "n6-fidelity")
# grid points per work unit; fixed so output never depends on the thread count
CHUNK = 64

_DEFAULTS = {
    "fidelity": dict(n=3, omega=1.0, t_max=20.0, steps=2001, initial="a-psi-00"),
    "n6-fidelity": dict(n=6, omega=1.0, t_max=50.0, steps=5001, initial="one-zeros"),
    "tc": dict(omega_min=0.0, omega_max=3.0, points=301),
    "concurrence": dict(omega_min=0.0, omega_max=3.0, points=301),
}

# out and threads control execution only and are never echoed, so bytes stay identical
_ECHOED = {
    "fidelity": ("n", "j", "delta", "omega", "t_max", "steps", "initial", "theta", "phi", "seed"),
    "tc": ("j", "omega_min", "omega_max", "points", "seed"),
    "concurrence": ("omega_min", "omega_max", "points", "seed"),
}
_ECHOED["n6-fidelity"] = _ECHOED["fidelity"]


@dataclass(frozen=True)
class SweepConfig:
    kind: str
    n: int = 3
    j: float = 1.0
    delta: float = 0.0
    omega: float = 1.0
    omega_min: float = 0.0
    omega_max: float = 3.0
    points: int = 301
    t_max: float = 20.0
    steps: int = 2001
    initial: str = "a-psi-00"
    theta: float | None = None
    phi: float | None = None
    out: str | None = None
    seed: int = 0
    threads: int = 1

    @classmethod
    def for_kind(cls, kind: str, **overrides) -> "SweepConfig":
        if kind not in KINDS:
            raise InvalidArgumentError(f"unknown sweep kind {kind!r}")
        values = dict(_DEFAULTS[kind])
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(kind=kind, **values)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidArgumentError(f"unknown sweep kind {self.kind!r}")
        if self.kind in ("tc", "concurrence"):
            if self.points < 2:
                raise InvalidArgumentError("--points must be at least 2")
            if not self.omega_max > self.omega_min:
                raise InvalidArgumentError("--omega-max must exceed --omega-min")
        else:
            if self.steps < 2:
                raise InvalidArgumentError("--steps must be at least 2")
            if not self.t_max > 0:
                raise InvalidArgumentError("--t-max must be positive")
            if self.initial not in INITIAL_FAMILIES:
                raise InvalidArgumentError(f"--initial must be one of {', '.join(INITIAL_FAMILIES)}")
            self.chain()
        if self.kind == "tc" and not self.j > 0:
            raise InvalidArgumentError("--j must be positive")
        if self.threads < 1:
            raise InvalidArgumentError("--threads must be at least 1")
        if self.theta is not None and self.initial == "one-zeros":
            raise InvalidArgumentError("--theta needs a Bloch-sphere initial family")

    def chain(self) -> ChainSpec:
        return ChainSpec(self.n, self.j, self.delta, self.omega)

    def grid(self) -> np.ndarray:
        if self.kind in ("tc", "concurrence"):
            return np.linspace(self.omega_min, self.omega_max, self.points)
        return np.linspace(0.0, self.t_max, self.steps)


def fmt(x: float) -> str:
    """12 significant digits, '.' separator, lowercase exponent."""
    s = format(float(x), ".12g")
    return "0" if s == "-0" else s


def _columns(cfg: SweepConfig) -> list[str]:
    if cfg.kind == "tc":
        return ["omega", "tc_n0"]
    if cfg.kind == "concurrence":
        return ["omega", "concurrence"]
    cols = ["t", "re_f", "im_f", "abs_f2"]
    if cfg.kind == "fidelity":
        cols.append("avg_fidelity")
        if cfg.theta is not None:
            cols.append("fidelity")
    return cols


def _rows(cfg: SweepConfig, xs: np.ndarray) -> np.ndarray:
    if cfg.kind == "tc":
        return np.column_stack([xs, [characteristic_time_analytic(w, cfg.j, 0).t_c for w in xs]])
    if cfg.kind == "concurrence":
        return np.column_stack([xs, [concurrence_at_tc_closed(w) for w in xs]])
    spec = cfg.chain()
    f = np.asarray(transfer_amplitude(spec, xs))
    cols = [xs, f.real, f.imag, np.abs(f) ** 2]
    if cfg.kind == "fidelity":
        if cfg.initial == "one-zeros":
            cols.append(np.abs(f) ** 2)
        elif cfg.initial == "a-psi-00" and spec.n_sites == 3:
            cols.append(np.asarray(average_fidelity_closed(spec, xs)))
        else:
            cols.append([average_fidelity_reference(spec, t, initial=cfg.initial, seed=cfg.seed).value
                         for t in xs])
        if cfg.theta is not None:
            phi = 0.0 if cfg.phi is None else cfg.phi
            cols.append([fidelity_for_input(spec, t, cfg.theta, phi, cfg.initial) for t in xs])
    return np.column_stack(cols)


def compute_sweep(cfg: SweepConfig) -> np.ndarray:
    xs = cfg.grid()
    chunks = [xs[i:i + CHUNK] for i in range(0, xs.size, CHUNK)]
    if cfg.threads > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            parts = list(pool.map(lambda c: _rows(cfg, c), chunks))
    else:
        parts = [_rows(cfg, c) for c in chunks]
    return np.vstack(parts)


def header_lines(cfg: SweepConfig) -> list[str]:
    lines = [f"# spinxfer {__version__}", f"# kind: {cfg.kind}"]
    for name in _ECHOED[cfg.kind]:
        lines.append(f"# {name}: {getattr(cfg, name)}")
    return lines


def render_csv(cfg: SweepConfig, rows: np.ndarray) -> str:
    buf = io.StringIO()
    for line in header_lines(cfg):
        buf.write(line + "\n")
    buf.write(",".join(_columns(cfg)) + "\n")
    for row in rows:
        buf.write(",".join(fmt(v) for v in row) + "\n")
    return buf.getvalue()


def run_sweep(cfg: SweepConfig) -> str:
    """Compute the sweep and return the CSV text; the caller writes it."""
    return render_csv(cfg, compute_sweep(cfg))
