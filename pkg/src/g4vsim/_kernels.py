"""Numba propagation kernels.

The drive Hamiltonians used throughout have the shape

    H(t) = diag(D) + sum_c a_c xi_c(t) (exp(i nu_c t) B_c + h.c.)

with Gaussian envelopes xi_c.  Both kernels integrate in the interaction
picture of diag(D): the state is chi(t) = exp(+i D (t - ts)) psi(t), which
removes the stiff static phases exactly.  Each nonzero entry (r, c) of a
component B_c then oscillates at nu_c + D_r - D_c; those phase factors are
advanced per step by constant multipliers and periodically resynchronized
against exact exponentials, so the inner loop contains no transcendental
calls except the envelopes.

Entry arrays are a flattened COO layout over all components:
comp_ptr[c]..comp_ptr[c+1] indexes the entries of component c.  Diagonal
entries are forbidden (the Hermitian partner would double-count them).
"""

import numpy as np
from numba import njit

_RESYNC = 4096


@njit(cache=True)
def _apply_hi(x, out, ent_row, ent_col, ent_val, comp_ptr, w, env):
    """out += H_I(t) @ x for the sparse interaction-picture Hamiltonian."""
    ncomp = comp_ptr.shape[0] - 1
    for c in range(ncomp):
        g = env[c]
        if g == 0.0:
            continue
        for k in range(comp_ptr[c], comp_ptr[c + 1]):
            r = ent_row[k]
            cc = ent_col[k]
            v = g * ent_val[k] * w[k]
            out[r] += v * x[cc]
            out[cc] += np.conj(v) * x[r]


@njit(cache=True)
def _envelopes(t, amp, env_t0, env_sig, out):
    for c in range(amp.shape[0]):
        dt = t - env_t0[c]
        out[c] = amp[c] * np.exp(-dt * dt / (4.0 * env_sig[c] * env_sig[c]))


@njit(cache=True)
def _sync_phases(w, ent_row, ent_col, comp_ptr, nu, diag, t, dt_offset):
    """w[k] = exp(i (nu_c t + (D_r - D_c) dt_offset)) exactly."""
    ncomp = comp_ptr.shape[0] - 1
    for c in range(ncomp):
        for k in range(comp_ptr[c], comp_ptr[c + 1]):
            ph = nu[c] * t + (diag[ent_row[k]] - diag[ent_col[k]]) * dt_offset
            w[k] = np.cos(ph) + 1j * np.sin(ph)


@njit(cache=True)
def rk4_schrodinger(psi0, diag, ent_row, ent_col, ent_val, comp_ptr,
                    nu, amp, env_t0, env_sig, t_start, t_end, n_steps):
    """Propagate the Schrodinger equation, returning psi(t_end)."""
    n = psi0.shape[0]
    h = (t_end - t_start) / n_steps
    nent = ent_row.shape[0]
    ncomp = comp_ptr.shape[0] - 1

    chi = psi0.astype(np.complex128).copy()
    w = np.empty(nent, dtype=np.complex128)
    m_half = np.empty(nent, dtype=np.complex128)
    for c in range(ncomp):
        for k in range(comp_ptr[c], comp_ptr[c + 1]):
            om = nu[c] + diag[ent_row[k]] - diag[ent_col[k]]
            m_half[k] = np.cos(om * h / 2.0) + 1j * np.sin(om * h / 2.0)
    _sync_phases(w, ent_row, ent_col, comp_ptr, nu, diag, t_start, 0.0)

    env = np.empty(ncomp)
    k1 = np.empty(n, dtype=np.complex128)
    k2 = np.empty(n, dtype=np.complex128)
    k3 = np.empty(n, dtype=np.complex128)
    k4 = np.empty(n, dtype=np.complex128)
    tmp = np.empty(n, dtype=np.complex128)
    hx = np.empty(n, dtype=np.complex128)
    w_mid = np.empty(nent, dtype=np.complex128)
    w_end = np.empty(nent, dtype=np.complex128)

    t = t_start
    for step in range(n_steps):
        if step > 0 and step % _RESYNC == 0:
            _sync_phases(w, ent_row, ent_col, comp_ptr, nu, diag, t, t - t_start)
        for k in range(nent):
            w_mid[k] = w[k] * m_half[k]
            w_end[k] = w_mid[k] * m_half[k]

        # k1
        _envelopes(t, amp, env_t0, env_sig, env)
        hx[:] = 0.0
        _apply_hi(chi, hx, ent_row, ent_col, ent_val, comp_ptr, w, env)
        for i in range(n):
            k1[i] = -1j * hx[i]
        # k2
        _envelopes(t + h / 2.0, amp, env_t0, env_sig, env)
        for i in range(n):
            tmp[i] = chi[i] + (h / 2.0) * k1[i]
        hx[:] = 0.0
        _apply_hi(tmp, hx, ent_row, ent_col, ent_val, comp_ptr, w_mid, env)
        for i in range(n):
            k2[i] = -1j * hx[i]
        # k3
        for i in range(n):
            tmp[i] = chi[i] + (h / 2.0) * k2[i]
        hx[:] = 0.0
        _apply_hi(tmp, hx, ent_row, ent_col, ent_val, comp_ptr, w_mid, env)
        for i in range(n):
            k3[i] = -1j * hx[i]
        # k4
        _envelopes(t + h, amp, env_t0, env_sig, env)
        for i in range(n):
            tmp[i] = chi[i] + h * k3[i]
        hx[:] = 0.0
        _apply_hi(tmp, hx, ent_row, ent_col, ent_val, comp_ptr, w_end, env)
        for i in range(n):
            k4[i] = -1j * hx[i]

        for i in range(n):
            chi[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
        for k in range(nent):
            w[k] = w_end[k]
        t = t_start + (step + 1) * h

    span = t_end - t_start
    psi = np.empty(n, dtype=np.complex128)
    for i in range(n):
        ph = -diag[i] * span
        psi[i] = chi[i] * (np.cos(ph) + 1j * np.sin(ph))
    return psi


@njit(cache=True)
def _dense_hi(ent_row, ent_col, ent_val, comp_ptr, w, env, out):
    out[:, :] = 0.0
    ncomp = comp_ptr.shape[0] - 1
    for c in range(ncomp):
        g = env[c]
        if g == 0.0:
            continue
        for k in range(comp_ptr[c], comp_ptr[c + 1]):
            r = ent_row[k]
            cc = ent_col[k]
            v = g * ent_val[k] * w[k]
            out[r, cc] += v
            out[cc, r] += np.conj(v)


@njit(cache=True)
def _lindblad_rhs(rho, hi, ch_i, ch_j, ch_rate, out):
    """out = -i [hi, rho] + dissipator(rho) for channels sqrt(g)|i><j|."""
    n = rho.shape[0]
    for a in range(n):
        for b in range(n):
            acc = 0.0 + 0.0j
            for m in range(n):
                acc += hi[a, m] * rho[m, b] - rho[a, m] * hi[m, b]
            out[a, b] = -1j * acc
    for c in range(ch_i.shape[0]):
        i = ch_i[c]
        j = ch_j[c]
        g = ch_rate[c]
        out[i, i] += g * rho[j, j]
        for m in range(n):
            out[j, m] -= 0.5 * g * rho[j, m]
            out[m, j] -= 0.5 * g * rho[m, j]


@njit(cache=True)
def rk4_lindblad(rho0, diag, ent_row, ent_col, ent_val, comp_ptr,
                 nu, amp, env_t0, env_sig, ch_i, ch_j, ch_rate,
                 t_start, t_end, n_steps):
    """Propagate the master equation, returning rho(t_end).

    The dissipator with jump operators sqrt(g)|i><j| is invariant under the
    diagonal interaction-picture rotation, so only the Hamiltonian entries
    carry phases.
    """
    n = rho0.shape[0]
    h = (t_end - t_start) / n_steps
    nent = ent_row.shape[0]
    ncomp = comp_ptr.shape[0] - 1

    rho = rho0.astype(np.complex128).copy()
    w = np.empty(nent, dtype=np.complex128)
    m_half = np.empty(nent, dtype=np.complex128)
    for c in range(ncomp):
        for k in range(comp_ptr[c], comp_ptr[c + 1]):
            om = nu[c] + diag[ent_row[k]] - diag[ent_col[k]]
            m_half[k] = np.cos(om * h / 2.0) + 1j * np.sin(om * h / 2.0)
    _sync_phases(w, ent_row, ent_col, comp_ptr, nu, diag, t_start, 0.0)

    env = np.empty(ncomp)
    hi = np.empty((n, n), dtype=np.complex128)
    k1 = np.empty((n, n), dtype=np.complex128)
    k2 = np.empty((n, n), dtype=np.complex128)
    k3 = np.empty((n, n), dtype=np.complex128)
    k4 = np.empty((n, n), dtype=np.complex128)
    tmp = np.empty((n, n), dtype=np.complex128)
    w_mid = np.empty(nent, dtype=np.complex128)
    w_end = np.empty(nent, dtype=np.complex128)

    t = t_start
    for step in range(n_steps):
        if step > 0 and step % _RESYNC == 0:
            _sync_phases(w, ent_row, ent_col, comp_ptr, nu, diag, t, t - t_start)
        for k in range(nent):
            w_mid[k] = w[k] * m_half[k]
            w_end[k] = w_mid[k] * m_half[k]

        _envelopes(t, amp, env_t0, env_sig, env)
        _dense_hi(ent_row, ent_col, ent_val, comp_ptr, w, env, hi)
        _lindblad_rhs(rho, hi, ch_i, ch_j, ch_rate, k1)

        _envelopes(t + h / 2.0, amp, env_t0, env_sig, env)
        _dense_hi(ent_row, ent_col, ent_val, comp_ptr, w_mid, env, hi)
        for a in range(n):
            for b in range(n):
                tmp[a, b] = rho[a, b] + (h / 2.0) * k1[a, b]
        _lindblad_rhs(tmp, hi, ch_i, ch_j, ch_rate, k2)

        for a in range(n):
            for b in range(n):
                tmp[a, b] = rho[a, b] + (h / 2.0) * k2[a, b]
        _lindblad_rhs(tmp, hi, ch_i, ch_j, ch_rate, k3)

        _envelopes(t + h, amp, env_t0, env_sig, env)
        _dense_hi(ent_row, ent_col, ent_val, comp_ptr, w_end, env, hi)
        for a in range(n):
            for b in range(n):
                tmp[a, b] = rho[a, b] + h * k3[a, b]
        _lindblad_rhs(tmp, hi, ch_i, ch_j, ch_rate, k4)

        for a in range(n):
            for b in range(n):
                rho[a, b] += (h / 6.0) * (
                    k1[a, b] + 2.0 * k2[a, b] + 2.0 * k3[a, b] + k4[a, b]
                )
        for k in range(nent):
            w[k] = w_end[k]
        t = t_start + (step + 1) * h

    span = t_end - t_start
    out = np.empty((n, n), dtype=np.complex128)
    for a in range(n):
        for b in range(n):
            ph = -(diag[a] - diag[b]) * span
            out[a, b] = rho[a, b] * (np.cos(ph) + 1j * np.sin(ph))
    return out
