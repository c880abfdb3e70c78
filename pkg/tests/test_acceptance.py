"""Exit criteria for the package, one test per criterion.

Each test records a PASS/FAIL line that is printed in the terminal summary.
"""

import math

import numpy as np
from scipy.optimize import minimize_scalar

from spinxfer.entanglement import concurrence_at_tc_closed, concurrence_wootters, residual_ab_state
from spinxfer.spectral import chain_spectrum, eigendecompose, expm_oracle, propagator_at
from spinxfer.spin import (
    SIGMA_Z,
    ChainSpec,
    build_hamiltonian,
    partial_trace,
    product_state,
    qubit_state,
    sector_blocks,
    site_operator,
    total_sz,
)
from spinxfer.sweeps import SweepConfig, run_sweep
from spinxfer.transfer import (
    average_fidelity_closed,
    average_fidelity_reference,
    characteristic_time_analytic,
    characteristic_time_numeric,
    evolve_state,
    tc_argmax,
    transfer_amplitude,
)
from spinxfer.verify import run_verify

ZERO, ONE = [1, 0], [0, 1]
OMEGA_GRID = (0.0, 0.5, 1.0, 2.0)
# refined maximum of |f|^2 for N=6, delta=0, omega=1, J=1 on t in [0, 50]
N6_BASELINE = 0.894187898163


def random_bloch(rng, count):
    return [(math.acos(rng.uniform(-1, 1)), rng.uniform(0, 2 * math.pi)) for _ in range(count)]


def test_structural_properties(criterion):
    rng = np.random.default_rng(2026)
    herm = comm = unit = expm = 0.0
    for _ in range(50):
        spec = ChainSpec(int(rng.integers(2, 11)), rng.uniform(0.2, 2.0), rng.uniform(-2, 2), rng.uniform(-2, 2))
        h = build_hamiltonian(spec)
        sz = total_sz(spec.n_sites)
        herm = max(herm, np.abs(h - h.conj().T).max())
        comm = max(comm, np.abs(h @ sz - sz @ h).max())
        t = rng.uniform(0, 5)
        u = propagator_at(chain_spectrum(spec), t)
        unit = max(unit, np.abs(u.conj().T @ u - np.eye(spec.dim)).max())
        if spec.n_sites <= 8:
            expm = max(expm, np.abs(u - expm_oracle(h, t)).max())
    ok = herm <= 1e-12 and comm <= 1e-12 and unit <= 1e-10 and expm <= 1e-9
    criterion(1, "structural properties over 50 random chains", ok,
              f"herm {herm:.1e}, [H,Sz] {comm:.1e}, unitarity {unit:.1e}, expm {expm:.1e}")


def test_zero_anisotropy_spectrum(criterion):
    err = 0.0
    for j in (1.0, 0.7):
        for omega in OMEGA_GRID:
            spec = ChainSpec(3, j, 0.0, omega)
            blocks = sector_blocks(build_hamiltonian(spec), 3)
            ev = eigendecompose(blocks[-0.5][1]).eigenvalues
            s = math.sqrt(2 + omega**2)
            err = max(err, np.abs(ev - 0.5 * j * np.array([-s, 0.0, s])).max())
    criterion(2, "delta=0 single-excitation spectrum (J/2){0, +-sqrt(2+w^2)}", err <= 1e-10, f"max err {err:.1e}")


def test_characteristic_time(criterion):
    a1 = characteristic_time_analytic(1.0).t_c
    a0 = characteristic_time_analytic(0.0).t_c
    analytic_ok = abs(a1 - 8 * math.pi / (3 * math.sqrt(3))) <= 1e-12 and abs(a0 - math.pi * math.sqrt(2)) <= 1e-12
    analytic_ok &= abs(a1 - 4.836798) <= 5e-7 and abs(a0 - 4.442883) <= 5e-7
    num = amp = 0.0
    for omega in (0.0, 0.5, 1.0, 2.0, 3.0):
        spec = ChainSpec(3, 1.0, 0.0, omega)
        tc = characteristic_time_analytic(omega).t_c
        num = max(num, abs(characteristic_time_numeric(spec, (0, 10), 1e-10) - tc))
        amp = max(amp, abs(abs(transfer_amplitude(spec, tc)) - 1))
    ok = analytic_ok and num <= 1e-8 and amp <= 1e-9
    criterion(3, "characteristic time analytic/numeric", ok,
              f"t_c(1)={a1:.7f}, t_c(0)={a0:.7f}, numeric diff {num:.1e}, ||f|-1| {amp:.1e}")


def test_perfect_transfer_with_correction(criterion):
    rng = np.random.default_rng(4)
    worst = 0.0
    correction = site_operator({3: SIGMA_Z}, 3)
    for omega in OMEGA_GRID:
        spec = ChainSpec(3, 1.0, 0.0, omega)
        tc = characteristic_time_analytic(omega).t_c
        for theta, phi in random_bloch(rng, 20):
            psi = qubit_state(theta, phi)
            out = correction @ evolve_state(spec, product_state(psi, ZERO, ZERO), tc)
            rho = partial_trace(out, [3])
            worst = max(worst, abs(1 - np.real(psi.conj() @ rho @ psi)))
    criterion(4, "sigma^z on site 3 at t_c recovers |psi>", worst <= 1e-10, f"max |1-F| {worst:.1e}")


def test_residual_state_at_tc(criterion):
    rng = np.random.default_rng(5)
    worst = 0.0
    for omega in (0.5, 1.0, 2.0):
        spec = ChainSpec(3, 1.0, 0.0, omega)
        tc = characteristic_time_analytic(omega).t_c
        for theta, phi in random_bloch(rng, 5):
            psi = qubit_state(theta, phi)
            out = evolve_state(spec, product_state(psi, ZERO, ONE), tc)
            worst = max(worst, 1 - abs(np.vdot(product_state(residual_ab_state(omega), psi), out)))
    criterion(5, "|psi>|01> evolves to the entangled A-B state times |psi>", worst <= 1e-9,
              f"max 1-overlap {worst:.1e}")


def test_concurrence(criterion):
    peaks = [concurrence_at_tc_closed(math.sqrt(2) - 1), concurrence_at_tc_closed(1 + math.sqrt(2))]
    zeros = [concurrence_at_tc_closed(0.0), concurrence_at_tc_closed(1.0)]
    c2 = concurrence_at_tc_closed(2.0)
    e2e = 0.0
    for omega in (0.0, 0.414, 1.0, 2.0, 2.414, 5.0):
        spec = ChainSpec(3, 1.0, 0.0, omega)
        out = evolve_state(spec, product_state(qubit_state(0.8, 1.9), ZERO, ONE), characteristic_time_analytic(omega).t_c)
        e2e = max(e2e, abs(concurrence_wootters(partial_trace(out, [1, 2])) - concurrence_at_tc_closed(omega)))
    ok = (max(abs(p - 1) for p in peaks) <= 1e-10 and max(zeros) <= 1e-12
          and abs(c2 - 0.96) <= 1e-12 and e2e <= 1e-9)
    criterion(6, "concurrence maxima, zeros, C(2)=0.96, Wootters end-to-end", ok,
              f"peaks {peaks[0]:.12f}/{peaks[1]:.12f}, C(2)={c2:.12g}, e2e {e2e:.1e}")


def test_average_fidelity(criterion):
    err = 0.0
    for omega in (0.0, 1.0, 2.0):
        spec = ChainSpec(3, 1.0, 0.0, omega)
        for t in np.linspace(0, 20, 100):
            err = max(err, abs(average_fidelity_closed(spec, t) - average_fidelity_reference(spec, t).value))
    spec = ChainSpec(3, 1.0, 0.0, 1.0)
    f0 = average_fidelity_reference(spec, 0.0).value
    ftc = average_fidelity_closed(spec, characteristic_time_analytic(1.0).t_c)
    ok = err <= 1e-8 and abs(f0 - 0.5) <= 1e-10 and abs(ftc - 1 / 3) <= 1e-9
    criterion(7, "closed-form vs Gauss-Legendre average fidelity", ok,
              f"max diff {err:.1e}, F(0)={f0:.12f}, F(t_c)={ftc:.12f}")


def test_tc_curve_shape(criterion):
    omega0, peak = tc_argmax(1.0, (0.0, 3.0), 0.01)
    ok = 0.55 <= omega0 <= 0.70 and abs(peak - 5.06) <= 0.01 and characteristic_time_analytic(3.0).t_c < peak
    criterion(8, "t_c(omega) rises then falls", ok, f"omega0={omega0:.6f}, t_c max={peak:.6f}")


def test_six_site_degradation(criterion):
    spec = ChainSpec(6, 1.0, 0.0, 1.0)
    t = np.linspace(0, 50, 50001)
    g = np.abs(transfer_amplitude(spec, t)) ** 2
    i = int(np.argmax(g))
    res = minimize_scalar(lambda x: -abs(transfer_amplitude(spec, x)) ** 2,
                          bounds=(t[i - 1], t[i + 1]), method="bounded", options={"xatol": 1e-12})
    best = -res.fun
    ok = best < 1 - 1e-3 and abs(best - N6_BASELINE) <= 1e-9
    criterion(9, "N=6 transfer probability stays below one", ok,
              f"max |f|^2 = {best:.12f} at t = {res.x:.4f} (baseline {N6_BASELINE})")


def test_anisotropy_enhancement(criterion):
    t = np.linspace(0, 20, 2001)
    best = {}
    for delta in (0.0, 1.0):
        spec = ChainSpec(3, 1.0, delta, 1.0)
        best[delta] = max(average_fidelity_reference(spec, x).value for x in t)
    criterion(10, "delta=1 raises the maximal average fidelity (qualitative)", best[1.0] > best[0.0],
              f"max F_A delta=0: {best[0.0]:.6f}, delta=1: {best[1.0]:.6f}")


def test_determinism(criterion):
    sweeps_ok = True
    for kind, extra in [("fidelity", dict(steps=400)), ("fidelity", dict(n=4, steps=130, initial="a-psi-01")),
                        ("tc", {}), ("concurrence", {}), ("n6-fidelity", dict(steps=500))]:
        outputs = {run_sweep(SweepConfig.for_kind(kind, threads=k, seed=7, **extra)) for k in (1, 1, 3, 8)}
        sweeps_ok &= len(outputs) == 1
    reports = {run_verify(42) for _ in range(2)}
    ok = sweeps_ok and len(reports) == 1 and next(iter(reports))[1] == 0
    criterion(11, "sweeps and verify byte-identical across runs and threads", ok,
              f"sweeps {'identical' if sweeps_ok else 'differ'}, verify reports {len(reports)} distinct")
