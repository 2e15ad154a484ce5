"""Classical drive fields and control Hamiltonians.

Covers the two-color Raman drive of the spin qubit and the resonant
excitation pulse: rotating-frame construction, the Floquet/RWA truncation
hierarchy, the adiabatically eliminated qubit rotation, and the closed-form
pulse amplitudes used to seed the optimizer.

Field conventions (rad/ns everywhere, energies relative to level 1):

    Raman      E(t) = sum_k E_k(t) (e_k exp(i w_k t) + c.c.) / 2,
               interaction H = H0 - mu . E
    excitation coupling c1 E(t) between |1> and |5| after the rotating-frame
               reduction; the matching lab field is E(t)(exp(i w5 t) + c.c.)
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .model import Polarization, polarization_vector

SQRT_2LN2 = np.sqrt(2.0 * np.log(2.0))

#: half-width of the simulated pulse window in units of sigma
WINDOW_SIGMAS = 6.0


@dataclass(frozen=True)
class GaussianEnvelope:
    """Gaussian field envelope xi(t) = exp(-(t-t0)^2 / (4 sigma^2)).

    tau_fwhm is the FWHM of the intensity xi^2 (ps); sigma and all times are
    in ns internally.  The pulse area A = integral xi^2 dt = sigma sqrt(2 pi).
    """

    tau_fwhm_ps: float
    t0: float = None

    def __post_init__(self):
        if self.tau_fwhm_ps <= 0:
            raise ValueError("tau_fwhm must be positive")
        if self.t0 is None:
            object.__setattr__(self, "t0", WINDOW_SIGMAS * self.sigma)

    @property
    def sigma(self):
        # ns; FWHM of xi^2 = 2 sqrt(2 ln 2) sigma
        return 1e-3 * self.tau_fwhm_ps / (2.0 * SQRT_2LN2)

    @property
    def area(self):
        return self.sigma * np.sqrt(2.0 * np.pi)

    @property
    def window(self):
        return (self.t0 - WINDOW_SIGMAS * self.sigma,
                self.t0 + WINDOW_SIGMAS * self.sigma)

    def xi(self, t):
        return np.exp(-((t - self.t0) ** 2) / (4.0 * self.sigma**2))

    def shifted(self, t0):
        return GaussianEnvelope(self.tau_fwhm_ps, t0=t0)


@dataclass(frozen=True)
class RamanDrive:
    """Two-color Raman drive; both pulses share one envelope."""

    omega1: float
    omega2: float
    amp1: float
    amp2: float
    pol1: Polarization
    pol2: Polarization
    envelope: GaussianEnvelope
    delta5: float
    delta2: float = 0.0

    def with_amplitudes(self, amp1, amp2):
        return RamanDrive(self.omega1, self.omega2, amp1, amp2,
                          self.pol1, self.pol2, self.envelope,
                          self.delta5, self.delta2)

    def with_envelope(self, envelope):
        return RamanDrive(self.omega1, self.omega2, self.amp1, self.amp2,
                          self.pol1, self.pol2, envelope,
                          self.delta5, self.delta2)


@dataclass(frozen=True)
class ExcitationDrive:
    """Single resonant pulse on |1> <-> |5>, linear polarization."""

    omega: float
    amp: float
    polarization: Polarization
    envelope: GaussianEnvelope


def default_excitation_polarization():
    # lattice-frame y axis, mapped into the symmetry frame
    return polarization_vector(theta=np.pi / 2, phi=np.pi / 2)


def raman_drive(eigsys, delta5, envelope, pol1, pol2,
                amp1=0.0, amp2=0.0, delta2=0.0):
    """Construct a RamanDrive from the one-photon detuning of level 5
    (rad/ns) and the two-photon detuning delta2 (0 for equator rotations)."""
    eps = eigsys.energies - eigsys.energies[0]
    omega1 = eps[4] - delta5
    omega2 = omega1 - eps[1] + delta2
    return RamanDrive(omega1, omega2, amp1, amp2, pol1, pol2,
                      envelope, delta5, delta2)


def excitation_drive(eigsys, envelope, amp=0.0, polarization=None):
    eps = eigsys.energies - eigsys.energies[0]
    pol = polarization if polarization is not None else default_excitation_polarization()
    return ExcitationDrive(omega=eps[4], amp=amp, polarization=pol,
                           envelope=envelope)


# ---------------------------------------------------------------------------
# rotating frame


@dataclass(frozen=True)
class RamanFrame:
    """Rotating-frame constants delta, xi_1..8, the per-level phase rates
    phi_m (state map psi_rot = exp(i phi_m t) psi_lab), and the residuals of
    the defining constraint equations."""

    delta: float
    xi: np.ndarray
    phi: np.ndarray
    residuals: np.ndarray


def raman_frame(eigsys, omega1, omega2):
    """Frame constants that cancel the optical carrier on levels 1..4.

    Solution: delta = 2 w2, xi_{1,3} = (w2 - w1)/2, xi_{2,4} = 0,
    xi_{5..8} = w2/2.  The residual vector stacks the zero conditions
    -delta - xi_1 + xi_2 + ... + xi_8 and w_m + 2(xi_m - xi_n).
    """
    delta = 2.0 * omega2
    xi = np.zeros(8)
    xi[0] = xi[2] = (omega2 - omega1) / 2.0
    xi[4:] = omega2 / 2.0
    phi = delta + 2.0 * xi - xi.sum()

    res = [-delta - xi[0] + xi[1:].sum()]
    for m, om in ((0, omega1), (1, omega2)):
        for n in range(4, 8):
            res.append(om + 2.0 * (xi[m] - xi[n]))
    return RamanFrame(delta=delta, xi=xi, phi=phi, residuals=np.array(res))


# ---------------------------------------------------------------------------
# drive Hamiltonians as sums of oscillatory components


@dataclass(frozen=True)
class OscComponent:
    """One term a xi(t) (exp(i nu t) B + h.c.) of a drive Hamiltonian."""

    nu: float
    amp: float
    matrix: np.ndarray
    env_t0: float
    env_sigma: float


@dataclass(frozen=True)
class DriveHamiltonian:
    """H(t) = diag(D) + sum of oscillatory components, over a finite window.

    frame_phases holds the per-level rates phi_m mapping a state propagated
    under this Hamiltonian into the associated slow frame (None when this
    already is the slow frame).
    """

    diag: np.ndarray
    components: tuple
    window: tuple
    frame_phases: np.ndarray = None

    def matrix(self, t):
        h = np.diag(self.diag.astype(complex))
        for c in self.components:
            g = c.amp * np.exp(-((t - c.env_t0) ** 2) / (4.0 * c.env_sigma**2))
            term = g * np.exp(1j * c.nu * t) * c.matrix
            h += term + term.conj().T
        return h

    def to_slow_frame(self, psi, t):
        if self.frame_phases is None:
            return psi
        return np.exp(1j * self.frame_phases * t) * psi

    def kernel_arrays(self):
        rows, cols, vals = [], [], []
        ptr = [0]
        for c in self.components:
            r, cc = np.nonzero(c.matrix)
            if np.any(r == cc):
                raise ValueError("component matrices must have zero diagonal")
            rows.extend(r.tolist())
            cols.extend(cc.tolist())
            vals.extend(c.matrix[r, cc].tolist())
            ptr.append(len(rows))
        return (
            np.asarray(rows, dtype=np.int64),
            np.asarray(cols, dtype=np.int64),
            np.asarray(vals, dtype=np.complex128),
            np.asarray(ptr, dtype=np.int64),
            np.array([c.nu for c in self.components]),
            np.array([c.amp for c in self.components]),
            np.array([c.env_t0 for c in self.components]),
            np.array([c.env_sigma for c in self.components]),
        )


def _block(mat, rows, cols):
    out = np.zeros_like(mat)
    out[np.ix_(rows, cols)] = mat[np.ix_(rows, cols)]
    return out


_GROUND_ODD = [0, 2]   # levels 1, 3
_GROUND_EVEN = [1, 3]  # levels 2, 4
_EXCITED = [4, 5, 6, 7]


def raman_detunings(eigsys, drive):
    """Diagonal of the rotating-frame H0: (0, D2, e3, e4 - (w1 - w2),
    e_i - w1 for i >= 5), energies relative to level 1."""
    eps = eigsys.energies - eigsys.energies[0]
    beat = drive.omega1 - drive.omega2
    d = eps.copy()
    d[0] = 0.0
    d[1] = eps[1] - beat
    d[3] = eps[3] - beat
    d[4:] = eps[4:] - drive.omega1
    return d


def raman_model(eigsys, dipoles, drive, truncation="floquet"):
    """Rotating-frame Raman Hamiltonian as a DriveHamiltonian.

    truncation: 'rwa' keeps only the static co-rotating couplings, 'floquet'
    adds the cross terms beating at w1 - w2, 'full' additionally restores the
    counter-rotating terms (no approximation beyond the frame change).
    """
    if truncation not in ("rwa", "floquet", "full"):
        raise ValueError(f"unknown truncation {truncation!r}")
    d = raman_detunings(eigsys, drive)
    env = drive.envelope
    w1, w2 = drive.omega1, drive.omega2
    a1 = -0.5 * dipoles.project(drive.pol1.vector)
    a2 = -0.5 * dipoles.project(drive.pol2.vector)

    comps = [
        (0.0, drive.amp1, _block(a1, _GROUND_ODD, _EXCITED)),
        (0.0, drive.amp2, _block(a2, _GROUND_EVEN, _EXCITED)),
    ]
    if truncation in ("floquet", "full"):
        comps += [
            (w1 - w2, drive.amp1, _block(a1, _GROUND_EVEN, _EXCITED)),
            (w2 - w1, drive.amp2, _block(a2, _GROUND_ODD, _EXCITED)),
        ]
    if truncation == "full":
        b1 = -0.5 * dipoles.project(drive.pol1.vector.conj())
        b2 = -0.5 * dipoles.project(drive.pol2.vector.conj())
        comps += [
            (-2.0 * w1, drive.amp1, _block(b1, _GROUND_ODD, _EXCITED)),
            (-(w1 + w2), drive.amp1, _block(b1, _GROUND_EVEN, _EXCITED)),
            (-2.0 * w2, drive.amp2, _block(b2, _GROUND_EVEN, _EXCITED)),
            (-(w1 + w2), drive.amp2, _block(b2, _GROUND_ODD, _EXCITED)),
        ]
    components = tuple(
        OscComponent(nu, amp, m, env.t0, env.sigma) for nu, amp, m in comps
    )
    return DriveHamiltonian(diag=d, components=components, window=env.window)


def raman_lab_model(eigsys, dipoles, drive):
    """Untruncated lab-frame Hamiltonian (exactness oracle); frame_phases
    map its states into the Raman rotating frame."""
    eps = eigsys.energies - eigsys.energies[0]
    env = drive.envelope
    frame = raman_frame(eigsys, drive.omega1, drive.omega2)
    comps = (
        OscComponent(drive.omega1, drive.amp1,
                     -0.5 * dipoles.project(drive.pol1.vector), env.t0, env.sigma),
        OscComponent(drive.omega2, drive.amp2,
                     -0.5 * dipoles.project(drive.pol2.vector), env.t0, env.sigma),
    )
    return DriveHamiltonian(diag=eps, components=comps, window=env.window,
                            frame_phases=frame.phi)


def build_floquet_hamiltonian(eigsys, dipoles, drive, t):
    """Dense rotating-frame Hamiltonian (Floquet truncation) at time t."""
    return raman_model(eigsys, dipoles, drive, "floquet").matrix(t)


def build_rwa_hamiltonian(eigsys, dipoles, drive, t):
    return raman_model(eigsys, dipoles, drive, "rwa").matrix(t)


def build_lab_hamiltonian(eigsys, dipoles, drive, t):
    """Dense untruncated H(t) = H0 - mu.E(t) in the eigenbasis at time t."""
    return raman_lab_model(eigsys, dipoles, drive).matrix(t)


# ---------------------------------------------------------------------------
# excitation Hamiltonians


def excitation_model(eigsys, dipoles, drive, truncation="slow"):
    """Rotating-frame excitation Hamiltonian.

    truncation: 'rwa' keeps only the resonant |m><5| couplings, 'slow' adds
    the co-rotating couplings among the remaining levels (all terms beating
    slower than the optical carrier), 'floquet' is the verbatim form with
    the full 2 cos(w5 t) bystander coupling, 'lab' the untruncated frame.
    """
    eps = eigsys.energies - eigsys.energies[0]
    env = drive.envelope
    w5 = drive.omega
    mu_e = dipoles.project(drive.polarization.vector)
    col5 = np.zeros_like(mu_e)
    col5[:4, 4] = mu_e[:4, 4]
    rest = _block(mu_e, [0, 1, 2, 3], [5, 6, 7])

    if truncation == "lab":
        upper = _block(mu_e, [0, 1, 2, 3], _EXCITED)
        comps = (
            OscComponent(w5, drive.amp, upper, env.t0, env.sigma),
            OscComponent(-w5, drive.amp, upper, env.t0, env.sigma),
        )
        phi = np.zeros(8)
        phi[4] = w5
        return DriveHamiltonian(diag=eps, components=comps, window=env.window,
                                frame_phases=phi)

    d = eps.copy()
    d[4] = 0.0
    if truncation == "rwa":
        comps = (OscComponent(0.0, drive.amp, col5, env.t0, env.sigma),)
    elif truncation == "slow":
        comps = (
            OscComponent(0.0, drive.amp, col5, env.t0, env.sigma),
            OscComponent(w5, drive.amp, rest, env.t0, env.sigma),
        )
    elif truncation == "floquet":
        comps = (
            OscComponent(0.0, drive.amp, col5, env.t0, env.sigma),
            OscComponent(w5, drive.amp, rest, env.t0, env.sigma),
            OscComponent(-w5, drive.amp, rest, env.t0, env.sigma),
        )
    else:
        raise ValueError(f"unknown truncation {truncation!r}")
    return DriveHamiltonian(diag=d, components=comps, window=env.window)


def build_excitation_floquet(eigsys, dipoles, drive, t):
    """Dense excitation Hamiltonian at time t with only the doubled-carrier
    terms dropped (diagonal: Delta_5 = 0, Delta_k = e_k otherwise)."""
    return excitation_model(eigsys, dipoles, drive, "floquet").matrix(t)


# ---------------------------------------------------------------------------
# adiabatic elimination and pulse-amplitude seeds


@dataclass(frozen=True)
class EffectiveRotation:
    """Effective qubit rotation from adiabatic elimination at peak field."""

    omega_eff: complex
    delta_eff: float
    axis: np.ndarray
    theta: float


def _raman_couplings(eigsys, dipoles, drive):
    """Peak-amplitude couplings Omega_{1i,1}, Omega_{2i,2} and detunings
    Delta_i of the four excited levels."""
    d = raman_detunings(eigsys, drive)
    deltas = d[4:]
    if np.any(deltas == 0.0):
        lvl = 5 + int(np.nonzero(deltas == 0.0)[0][0])
        raise ZeroDivisionError(f"level {lvl} is resonant (Delta = 0)")
    m1 = dipoles.project(drive.pol1.vector)
    m2 = dipoles.project(drive.pol2.vector)
    om1 = -0.5 * m1[0, 4:] * drive.amp1
    om2 = -0.5 * m2[1, 4:] * drive.amp2
    return om1, om2, deltas


def effective_rotation(eigsys, dipoles, drive):
    """Effective Rabi coupling, detuning, rotation axis and angle of the
    eliminated qubit dynamics, using peak amplitudes and the envelope area."""
    om1, om2, deltas = _raman_couplings(eigsys, dipoles, drive)
    ratio = np.min(np.abs(deltas)) / max(
        np.max(np.abs(om1)), np.max(np.abs(om2)), 1e-300
    )
    if ratio < 5.0:
        warnings.warn(
            f"adiabatic elimination marginal: min|Delta|/max|Omega| = {ratio:.2f}",
            stacklevel=2,
        )
    omega_eff = np.sum(om1 * np.conj(om2) / deltas)
    delta_eff = drive.delta2 + np.sum(
        (np.abs(om2) ** 2 - np.abs(om1) ** 2) / deltas
    )
    n = np.array([omega_eff.real, omega_eff.imag, -delta_eff / 2.0])
    norm = np.linalg.norm(n)
    axis = n / norm if norm > 0 else np.array([1.0, 0.0, 0.0])
    theta = 2.0 * np.sqrt(np.abs(omega_eff) ** 2 + delta_eff**2) * drive.envelope.area
    return EffectiveRotation(omega_eff=omega_eff, delta_eff=delta_eff,
                             axis=axis, theta=theta)


def _coupling_sums(eigsys, dipoles, pol1, pol2, delta5):
    """S_1, S_2 and the unit-amplitude Raman coupling D for seed formulas."""
    eps = eigsys.energies - eigsys.energies[0]
    deltas = eps[4:] - (eps[4] - delta5)
    if np.any(deltas == 0.0):
        lvl = 5 + int(np.nonzero(deltas == 0.0)[0][0])
        raise ZeroDivisionError(f"level {lvl} is resonant (Delta = 0)")
    m1 = dipoles.project(pol1.vector)
    m2 = dipoles.project(pol2.vector)
    s1 = np.sum(np.abs(m1[0, 4:]) ** 2 / deltas)
    s2 = np.sum(np.abs(m2[1, 4:]) ** 2 / deltas)
    d_cpl = 0.25 * np.sum(m1[0, 4:] * np.conj(m2[1, 4:]) / deltas)
    return s1, s2, d_cpl


class NoCouplingError(ValueError):
    """Polarization couples to none of the excited levels."""


def amplitudes_for_rotation(target_theta, eigsys, dipoles, pol1, pol2,
                            envelope, delta5):
    """Closed-form peak amplitudes (E1, E2) realizing a target rotation angle
    with zero effective detuning: E2 = E1 sqrt(S1/S2) and
    E1 = sqrt(theta / (2 |D| A) * sqrt(S2/S1))."""
    if target_theta < 0:
        raise ValueError("target_theta must be >= 0")
    s1, s2, d_cpl = _coupling_sums(eigsys, dipoles, pol1, pol2, delta5)
    if s1 == 0.0 or s2 == 0.0 or s1 * s2 < 0.0:
        raise NoCouplingError(
            f"degenerate coupling sums S1={s1:.3e}, S2={s2:.3e}"
        )
    if d_cpl == 0.0:
        raise NoCouplingError("vanishing two-photon coupling D")
    amp1 = np.sqrt(
        target_theta / (2.0 * np.abs(d_cpl) * envelope.area) * np.sqrt(s2 / s1)
    )
    amp2 = amp1 * np.sqrt(s1 / s2)
    return amp1, amp2


def cross_coupling_polarizations(dipoles):
    """Symmetry-frame polarizations cancelling the leading cross couplings:
    <2|mu.e1|5> = 0 and <1|mu.e2|6> = 0."""
    mx, mz = dipoles.mu_x, dipoles.mu_z
    if mz[1, 4] == 0.0 or mz[0, 5] == 0.0:
        raise ZeroDivisionError("mu^z_25 or mu^z_16 vanishes; polarization degenerate")
    e1 = np.array([1.0, 0.0, -mx[1, 4] / mz[1, 4]], dtype=complex)
    e2 = np.array([1.0, 0.0, -mx[0, 5] / mz[0, 5]], dtype=complex)
    return (
        Polarization(slot=1, vector=e1),
        Polarization(slot=2, vector=e2),
    )


class ForbiddenTransitionError(ValueError):
    """The driven transition has zero dipole coupling."""


def excitation_amplitude(eigsys, dipoles, envelope, polarization=None):
    """pi-pulse amplitude E = sqrt(pi) / (4 sigma |c1|) of the two-level
    reduction, where c1 = <1|mu.e_L|5>."""
    pol = polarization if polarization is not None else default_excitation_polarization()
    c1 = dipoles.project(pol.vector)[0, 4]
    if np.abs(c1) == 0.0:
        raise ForbiddenTransitionError("|1> -> |5> not dipole coupled for e_L")
    return np.sqrt(np.pi) / (4.0 * envelope.sigma * np.abs(c1))


def align_axis_phase(eigsys, dipoles, drive, target_axis_angle=0.0):
    """Relative phase of pulse 2 placing the seed rotation axis at the given
    equator angle (0: x, pi/2: y).  Returns the phase to store on pol2."""
    rot = effective_rotation(eigsys, dipoles, drive)
    # Omega_eff scales as exp(-i phase) in the pulse-2 phase
    return float(np.angle(rot.omega_eff) - target_axis_angle)
