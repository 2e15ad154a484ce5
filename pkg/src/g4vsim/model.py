"""8-level electronic model of a group-IV color center.

Builds the ground/excited manifold Hamiltonian (spin-orbit, Jahn-Teller,
Zeeman), its eigensystem for an arbitrary magnetic field, and the transition
dipole operators in the eigenbasis.

Unit conventions
----------------
External parameters are ordinary frequencies (GHz/THz) and are converted to
angular frequency once, on ingestion.  Everything internal is rad/ns with
hbar = 1.  Magnetic fields are in Tesla, dipole lengths in nm.
"""

from dataclasses import dataclass, field, replace
import json

import numpy as np

TWO_PI = 2.0 * np.pi

#: orbital gyromagnetic factor e/(2 m_e), ordinary frequency per Tesla
GAMMA_L_GHZ_PER_T = 13.996

#: symmetry-frame -> diamond-lattice-frame rotation for polarization vectors
G_LATTICE = np.array(
    [
        [1 / np.sqrt(6), -2 / np.sqrt(6), 1 / np.sqrt(6)],
        [1 / np.sqrt(2), 0.0, -1 / np.sqrt(2)],
        [1 / np.sqrt(3), 1 / np.sqrt(3), 1 / np.sqrt(3)],
    ]
)

# dimensionless dipole patterns in the orbital basis (gx, gy, ux, uy);
# the physical operator is dipole_scale * pattern (x, y) and 2 * scale (z)
_DX = np.array([[0, 0, 1, 0], [0, 0, 0, -1], [1, 0, 0, 0], [0, -1, 0, 0]], dtype=float)
_DY = np.array([[0, 0, 0, -1], [0, 0, -1, 0], [0, -1, 0, 0], [-1, 0, 0, 0]], dtype=float)
_DZ = 2.0 * np.array([[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]], dtype=float)


@dataclass(frozen=True)
class G4VParameters:
    """Hamiltonian constants of one G4V species.

    Orbital energies ``delta_g/u`` in THz, spin-orbit ``lambda_g/u`` and
    Jahn-Teller ``ups_*`` couplings in GHz (ordinary frequencies, converted
    internally), orbital reduction factors ``q_g/u`` dimensionless and the
    calibrated dipole length ``dipole_scale`` in nm.
    """

    delta_g: float = 0.0
    delta_u: float = 484.34e3  # GHz
    lambda_g: float = 407.5
    lambda_u: float = 1177.5
    ups_x_g: float = 65.0
    ups_y_g: float = 0.0
    ups_x_u: float = 855.0
    ups_y_u: float = 0.0
    q_g: float = 0.15
    q_u: float = 0.15
    dipole_scale: float = 1.0
    gamma_L: float = GAMMA_L_GHZ_PER_T

    @property
    def gamma_S(self):
        # spin gyromagnetic factor, exactly twice the orbital one
        return 2.0 * self.gamma_L

    def __post_init__(self):
        for name in ("lambda_g", "lambda_u", "ups_x_g", "ups_x_u", "dipole_scale"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")

    def with_dipole_scale(self, scale):
        return replace(self, dipole_scale=float(scale))

    @classmethod
    def snv(cls):
        """SnV defaults with the dipole scale calibrated to T1 = 4.5 ns."""
        from .dynamics import calibrate_dipole_scale

        base = cls()
        return base.with_dipole_scale(calibrate_dipole_scale(base))


@dataclass(frozen=True)
class MagneticField:
    """Static field of magnitude B (Tesla) tilted by theta_dc from the
    symmetry-frame x-axis towards the z (symmetry) axis; B_y = 0 always."""

    B: float
    theta_dc: float = 0.0

    def __post_init__(self):
        if not np.isfinite(self.B) or self.B < 0:
            raise ValueError("B must be finite and >= 0")

    @property
    def vector(self):
        return np.array(
            [self.B * np.cos(self.theta_dc), 0.0, self.B * np.sin(self.theta_dc)]
        )


@dataclass(frozen=True)
class EigenSystem:
    """Energies (rad/ns, ascending) and eigenbasis transform of the 8-level
    Hamiltonian, with H = S @ diag(energies) @ S^dagger in the orbital basis."""

    energies: np.ndarray
    S: np.ndarray
    params: G4VParameters
    field: MagneticField

    @property
    def ground_splitting(self):
        return self.energies[2] - self.energies[0]

    @property
    def qubit_splitting(self):
        return self.energies[1] - self.energies[0]

    def transition(self, i, j):
        """Angular transition frequency e_j - e_i (1-based level labels)."""
        return self.energies[j - 1] - self.energies[i - 1]

    def to_json(self):
        """Energies in ordinary GHz plus S as row-major (re, im) pairs."""
        sri = np.stack([self.S.real, self.S.imag], axis=-1)
        return json.dumps(
            {
                "energies_GHz": (self.energies / TWO_PI).tolist(),
                "S_re_im": sri.reshape(8, 16).tolist(),
            }
        )


@dataclass(frozen=True)
class DipoleOperators:
    """Transition dipole matrices in the eigenbasis, entries in nm (already
    multiplied by dipole_scale); only ground<->excited blocks are nonzero."""

    mu_x: np.ndarray
    mu_y: np.ndarray
    mu_z: np.ndarray

    def as_stack(self):
        return np.stack([self.mu_x, self.mu_y, self.mu_z])

    def project(self, pol_vector):
        """mu . e for a (complex) symmetry-frame polarization vector."""
        e = np.asarray(pol_vector)
        return e[0] * self.mu_x + e[1] * self.mu_y + e[2] * self.mu_z


@dataclass(frozen=True)
class Polarization:
    """Linear laser polarization given by lattice-frame spherical angles.

    The symmetry-frame unit vector is G^T (cos phi sin theta, sin phi
    sin theta, cos theta), times exp(i phase) for the second Raman pulse.
    ``vector`` may also be supplied directly (cross-coupling-eliminating
    choices are constructed in the symmetry frame).
    """

    theta: float = 0.0
    phi: float = 0.0
    phase: float = 0.0
    slot: int = 1
    vector: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        if self.slot not in (1, 2):
            raise ValueError("slot must be 1 or 2")
        if self.vector is None:
            u = np.array(
                [
                    np.cos(self.phi) * np.sin(self.theta),
                    np.sin(self.phi) * np.sin(self.theta),
                    np.cos(self.theta),
                ]
            )
            v = G_LATTICE.T @ u
            if self.slot == 2 and self.phase != 0.0:
                v = v * np.exp(1j * self.phase)
            object.__setattr__(self, "vector", v)
        else:
            v = np.asarray(self.vector, dtype=complex)
            n = np.linalg.norm(v)
            if n == 0:
                raise ValueError("zero polarization vector")
            object.__setattr__(self, "vector", v / n)


def polarization_vector(theta, phi, phase=0.0, slot=1):
    """Unit polarization vector in the symmetry frame for the given
    lattice-frame spherical angles; the phase applies only to slot 2."""
    return Polarization(theta=theta, phi=phi, phase=phase, slot=slot)


def _manifold_hamiltonian(delta, lam, ups_x, ups_y, q, gamma_L, gamma_S, Bvec):
    """4x4 manifold Hamiltonian in the basis (x down, x up, y down, y up).

    Inputs are ordinary GHz / GHz-per-T; output is rad/ns.
    """
    Bx, By, Bz = Bvec
    H = np.zeros((4, 4), dtype=complex)
    H += delta * np.eye(4)
    so = np.zeros((4, 4), dtype=complex)
    so[0, 2], so[1, 3], so[2, 0], so[3, 1] = -1j * lam, 1j * lam, 1j * lam, -1j * lam
    jt = np.zeros((4, 4), dtype=complex)
    jt[0, 0] = jt[1, 1] = ups_x
    jt[2, 2] = jt[3, 3] = -ups_x
    jt[0, 2] = jt[1, 3] = jt[2, 0] = jt[3, 1] = ups_y
    zo = np.zeros((4, 4), dtype=complex)
    zo[0, 2] = zo[1, 3] = 1j * q * gamma_L * Bz
    zo[2, 0] = zo[3, 1] = -1j * q * gamma_L * Bz
    zs = np.zeros((4, 4), dtype=complex)
    spin = gamma_S * np.array([[Bz, Bx - 1j * By], [Bx + 1j * By, -Bz]])
    zs[0:2, 0:2] = spin
    zs[2:4, 2:4] = spin
    return TWO_PI * (H + so + jt + zo + zs)


def assemble_hamiltonian(params, field):
    """Full 8x8 Hamiltonian (rad/ns) in the orbital-spin product basis,
    ground manifold first.  Block diagonal: no g-u mixing terms exist."""
    Bvec = field.vector
    Hg = _manifold_hamiltonian(
        params.delta_g, params.lambda_g, params.ups_x_g, params.ups_y_g,
        params.q_g, params.gamma_L, params.gamma_S, Bvec,
    )
    Hu = _manifold_hamiltonian(
        params.delta_u, params.lambda_u, params.ups_x_u, params.ups_y_u,
        params.q_u, params.gamma_L, params.gamma_S, Bvec,
    )
    H = np.zeros((8, 8), dtype=complex)
    H[:4, :4] = Hg
    H[4:, 4:] = Hu
    return H


def _gauge_fix(vectors):
    """Make the largest-|component| entry of each column real positive;
    ties broken by the lowest basis index."""
    out = vectors.copy()
    for k in range(out.shape[1]):
        col = out[:, k]
        mags = np.abs(col)
        # argmax picks the first (lowest index) maximum on ties
        idx = int(np.argmax(np.round(mags / mags.max(), 12)))
        ref = col[idx]
        if np.abs(ref) > 0:
            out[:, k] = col * (np.conj(ref) / np.abs(ref))
    return out


def build_hamiltonian(params, field):
    """Diagonalize the assembled Hamiltonian manifold by manifold.

    Returns an EigenSystem with ascending energies, a deterministic gauge,
    and S exactly block diagonal in (ground, excited).
    """
    H = assemble_hamiltonian(params, field)
    try:
        wg, vg = np.linalg.eigh(H[:4, :4])
        wu, vu = np.linalg.eigh(H[4:, 4:])
    except np.linalg.LinAlgError as exc:
        raise RuntimeError(
            "eigensolver failed; condition numbers "
            f"g={np.linalg.cond(H[:4, :4]):.3e} u={np.linalg.cond(H[4:, 4:]):.3e}"
        ) from exc
    energies = np.concatenate([wg, wu])
    S = np.zeros((8, 8), dtype=complex)
    S[:4, :4] = vg
    S[4:, 4:] = vu
    order = np.argsort(energies, kind="stable")
    energies = energies[order]
    S = _gauge_fix(S[:, order])
    return EigenSystem(energies=energies, S=S, params=params, field=field)


def dipole_in_eigenbasis(eigsys):
    """Dipole operators mu^alpha = S^dagger mu~^alpha S, scaled by the
    calibrated dipole length (nm).  Hermitian, block off-diagonal."""
    scale = eigsys.params.dipole_scale
    S = eigsys.S
    mats = []
    for pattern in (_DX, _DY, _DZ):
        mu8 = np.kron(pattern, np.eye(2))
        mats.append(scale * (S.conj().T @ mu8 @ S))
    return DipoleOperators(*mats)
