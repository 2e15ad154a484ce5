"""Decay channels, rate calibration, and time propagation.

Radiative rates follow the golden-rule expression
gamma = 4 alpha w^3 n |mu|^2 / (3 c^2) with the dipole matrix element in nm,
w in rad/ns and c in nm/ns, giving rates in 1/ns.  The overall dipole length
is calibrated once, at zero field, against the measured excited-state
lifetime T1 = 4.5 ns and a Debye-Waller factor of 0.6; the remainder
(1 - DWF)/T1 is booked as a phonon-sideband channel from level 5.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .model import build_hamiltonian, dipole_in_eigenbasis, MagneticField

ALPHA_FS = 1.0 / 137.0
N_DIAMOND = 2.417
C_NM_PER_NS = 2.99792458e8
#: golden-rule prefactor, rates in 1/ns for w in rad/ns and dipoles in nm
RADIATIVE_PREFACTOR = 4.0 * ALPHA_FS * N_DIAMOND / (3.0 * C_NM_PER_NS**2)

#: phonon coupling 2 pi alpha_p with alpha_p = (2 pi)^-3 * 7.51e-9 GHz^-2
PHONON_PREFACTOR = 7.51e-9 / (2.0 * np.pi) ** 2

#: hbar w / k_B in Kelvin for w in rad/ns
HBAR_OVER_KB_K_PER_RADNS = 1.054571817e-25 / 1.380649e-23

DEBYE_WALLER = 0.6
T1_NS = 4.5

#: phononic relaxation channels between orbital branches (1-based labels)
PHONON_PAIRS = ((1, 3), (2, 4), (5, 7), (6, 8))


class IntegrationError(RuntimeError):
    pass


def radiative_rate(eigsys, dipoles, i, j):
    """Golden-rule radiative rate (1/ns) for the decay |j> -> |i| of an
    excited level j in 5..8 into a ground level i in 1..4 (1-based)."""
    if not (1 <= i <= 4 and 5 <= j <= 8):
        raise ValueError("need ground i in 1..4 and excited j in 5..8")
    om = eigsys.energies[j - 1] - eigsys.energies[i - 1]
    m2 = (
        np.abs(dipoles.mu_x[j - 1, i - 1]) ** 2
        + np.abs(dipoles.mu_y[j - 1, i - 1]) ** 2
        + np.abs(dipoles.mu_z[j - 1, i - 1]) ** 2
    )
    return RADIATIVE_PREFACTOR * om**3 * m2


def calibrate_dipole_scale(params, dwf=DEBYE_WALLER, t1_ns=T1_NS):
    """Dipole length (nm) making the zero-field ZPL rate sum out of the
    lowest excited eigenstate equal dwf/t1.  Idempotent by construction."""
    unit = params.with_dipole_scale(1.0)
    eig = build_hamiltonian(unit, MagneticField(B=0.0))
    dip = dipole_in_eigenbasis(eig)
    total = sum(radiative_rate(eig, dip, i, 5) for i in range(1, 5))
    if total <= 0.0:
        raise ValueError("zero dipole coupling; calibration impossible")
    return float(np.sqrt((dwf / t1_ns) / total))


def psb_rate(dwf=DEBYE_WALLER, t1_ns=T1_NS):
    """Phonon-sideband emission rate (1 - DWF)/T1 in 1/ns."""
    return (1.0 - dwf) / t1_ns


def thermal_occupation(omega, temperature):
    """Bose occupation at angular frequency omega (rad/ns) and T (K)."""
    if temperature <= 0.0:
        return 0.0
    x = HBAR_OVER_KB_K_PER_RADNS * omega / temperature
    if x > 700.0:
        return 0.0
    return 1.0 / np.expm1(x)


def phonon_rate(omega, temperature=0.0):
    """One-phonon relaxation rate (1/ns), cubic in the (positive) transition
    frequency; the caller orders the levels."""
    if omega < 0.0:
        raise ValueError("transition frequency must be nonnegative")
    return PHONON_PREFACTOR * omega**3 * (thermal_occupation(omega, temperature) + 1.0)


@dataclass(frozen=True)
class DecayChannel:
    """Jump operator sqrt(rate) |i><j| with 1-based level labels."""

    i: int
    j: int
    rate: float
    kind: str  # 'radiative' | 'phonon' | 'psb'


@dataclass(frozen=True)
class DecayModel:
    channels: tuple
    cooperativity: float
    temperature: float

    def rate(self, i, j, kind=None):
        total = 0.0
        for ch in self.channels:
            if ch.i == i and ch.j == j and (kind is None or ch.kind == kind):
                total += ch.rate
        return total

    @property
    def gamma_psb(self):
        return self.rate(1, 5, "psb")

    def kernel_arrays(self):
        ch_i = np.array([ch.i - 1 for ch in self.channels], dtype=np.int64)
        ch_j = np.array([ch.j - 1 for ch in self.channels], dtype=np.int64)
        ch_rate = np.array([ch.rate for ch in self.channels])
        return ch_i, ch_j, ch_rate

    def to_csv_rows(self):
        return [(ch.i, ch.j, ch.rate, ch.kind) for ch in self.channels]


def build_decay_model(eigsys, dipoles, cooperativity=0.0, temperature=0.0,
                      dwf=DEBYE_WALLER, t1_ns=T1_NS):
    """All 16 radiative channels (with the Purcell-enhanced (1,5)), the four
    intra-manifold phononic channels, and the phonon-sideband channel."""
    if cooperativity < 0.0:
        raise ValueError("cooperativity must be >= 0")
    channels = []
    for j in range(5, 9):
        for i in range(1, 5):
            g = radiative_rate(eigsys, dipoles, i, j)
            if i == 1 and j == 5:
                g *= 1.0 + cooperativity
            channels.append(DecayChannel(i, j, g, "radiative"))
    for i, j in PHONON_PAIRS:
        om = eigsys.energies[j - 1] - eigsys.energies[i - 1]
        channels.append(DecayChannel(i, j, phonon_rate(om, temperature), "phonon"))
    channels.append(DecayChannel(1, 5, psb_rate(dwf, t1_ns), "psb"))
    return DecayModel(channels=tuple(channels), cooperativity=cooperativity,
                      temperature=temperature)


def branching_ratio(model):
    """S = gamma_15,C / (gamma_25 + gamma_35 + gamma_45 + gamma_psb)."""
    num = model.rate(1, 5, "radiative")
    den = (
        model.rate(2, 5, "radiative")
        + model.rate(3, 5, "radiative")
        + model.rate(4, 5, "radiative")
        + model.gamma_psb
    )
    if den <= 0.0:
        warnings.warn("branching denominator vanishes; returning inf", stacklevel=2)
        return np.inf
    return num / den


# ---------------------------------------------------------------------------
# propagation


def _suggest_steps(model, t_span, accuracy):
    """Step count for the fixed-step interaction-picture RK4: the local error
    of a coupling of size a oscillating at Om accumulates to roughly
    span * a * (Om dt)^4 / 120 over the window."""
    rows, cols, vals, ptr, nu, amp, _t0, sig = model.kernel_arrays()
    span = t_span[1] - t_span[0]
    if len(rows) == 0:
        return 16
    diag = model.diag
    om_max = 1e-12
    a_tot = 0.0
    for c in range(len(nu)):
        lo, hi = ptr[c], ptr[c + 1]
        if hi == lo:
            continue
        om_c = np.abs(nu[c] + diag[rows[lo:hi]] - diag[cols[lo:hi]]).max()
        om_max = max(om_max, om_c)
        a_tot += np.abs(amp[c]) * np.abs(vals[lo:hi]).max()
    if a_tot == 0.0:
        return 16
    dt = (accuracy * 120.0 / (span * a_tot)) ** 0.25 / om_max
    dt = min(dt, 0.5 / om_max, sig.min() / 40.0, span / 64.0)
    n = int(np.ceil(span / dt))
    if n > 400_000_000:
        raise IntegrationError(
            f"step budget exceeded: {n} steps for span {span:.3g} ns"
        )
    return max(n, 32)


def propagate_schrodinger(model, psi0, t_span=None, accuracy=1e-8,
                          method="rk4", n_steps=None):
    """Propagate i dpsi/dt = H(t) psi under a DriveHamiltonian.

    method 'rk4' uses the interaction-picture fixed-step kernel with a step
    count derived from `accuracy`; 'dop853' integrates the dense Hamiltonian
    with scipy (slow, kept as an independent cross-check).
    """
    psi0 = np.asarray(psi0, dtype=complex)
    norm0 = np.linalg.norm(psi0)
    if abs(norm0 - 1.0) > 1e-8:
        raise ValueError("psi0 must be normalized")
    if t_span is None:
        t_span = model.window
    if method == "dop853":
        from scipy.integrate import solve_ivp

        sol = solve_ivp(
            lambda t, y: -1j * (model.matrix(t) @ y),
            t_span, psi0, method="DOP853", rtol=1e-10, atol=1e-12,
        )
        if not sol.success:
            raise IntegrationError(f"DOP853 failed on {t_span}: {sol.message}")
        return sol.y[:, -1]
    if method != "rk4":
        raise ValueError(f"unknown method {method!r}")
    if n_steps is None:
        n_steps = _suggest_steps(model, t_span, accuracy)
    rows, cols, vals, ptr, nu, amp, t0, sig = model.kernel_arrays()
    psi = _kernels.rk4_schrodinger(
        psi0, model.diag.astype(float), rows, cols, vals, ptr,
        nu, amp, t0, sig, float(t_span[0]), float(t_span[1]), n_steps,
    )
    drift = abs(np.linalg.norm(psi) - norm0)
    if drift > 1e-4:
        raise IntegrationError(
            f"norm drift {drift:.2e} over t in [{t_span[0]:.4g}, {t_span[1]:.4g}] ns"
        )
    return psi


def propagate_lindblad(model, decay_model, rho0, t_span=None, accuracy=1e-7,
                       method="rk4", n_steps=None, _check=True):
    """Propagate the Lindblad master equation for an arbitrary (possibly
    non-Hermitian, for process-matrix seeds) 8x8 initial condition."""
    rho0 = np.asarray(rho0, dtype=complex)
    if t_span is None:
        t_span = model.window
    ch_i, ch_j, ch_rate = decay_model.kernel_arrays()
    if method == "dop853":
        from scipy.integrate import solve_ivp

        chs = [(int(i), int(j), g) for i, j, g in zip(ch_i, ch_j, ch_rate)]

        def rhs(t, y):
            rho = y.reshape(8, 8)
            h = model.matrix(t)
            out = -1j * (h @ rho - rho @ h)
            for i, j, g in chs:
                out[i, i] += g * rho[j, j]
                out[j, :] -= 0.5 * g * rho[j, :]
                out[:, j] -= 0.5 * g * rho[:, j]
            return out.ravel()

        sol = solve_ivp(rhs, t_span, rho0.ravel(), method="DOP853",
                        rtol=1e-10, atol=1e-12)
        if not sol.success:
            raise IntegrationError(f"DOP853 failed on {t_span}: {sol.message}")
        return sol.y[:, -1].reshape(8, 8)
    if method != "rk4":
        raise ValueError(f"unknown method {method!r}")
    if n_steps is None:
        n_steps = _suggest_steps(model, t_span, accuracy)
        if len(ch_rate) and ch_rate.max() > 0:
            span = t_span[1] - t_span[0]
            n_steps = max(n_steps, int(np.ceil(span * ch_rate.max() / 0.05)), 32)
    rows, cols, vals, ptr, nu, amp, t0, sig = model.kernel_arrays()
    rho = _kernels.rk4_lindblad(
        rho0, model.diag.astype(float), rows, cols, vals, ptr,
        nu, amp, t0, sig, ch_i, ch_j, ch_rate,
        float(t_span[0]), float(t_span[1]), n_steps,
    )
    if _check:
        drift = abs(np.trace(rho).real - np.trace(rho0).real)
        if drift > 1e-4:
            raise IntegrationError(
                f"trace drift {drift:.2e} over t in [{t_span[0]:.4g}, {t_span[1]:.4g}] ns"
            )
    return rho
