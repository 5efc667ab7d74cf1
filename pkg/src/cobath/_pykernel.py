"""Pure-numpy fallback kernel for the master-equation right-hand side.

Works on the density matrix as a (d1, d2, d1, d2) array. Every Lindblad
term is a shifted, scaled copy of the input, so the generator is a fixed
set of slice-and-accumulate operations; composite operators inherit the
truncated-product semantics automatically from the index bounds.

The compiled extension (_cykernel) implements the same contract with
fused loops; this module is selected when the extension is unavailable
or COBATH_PURE is set.
"""

from __future__ import annotations

import numpy as np


def _coef_tables(d1, d2, k1, k0, sq1, sq2, u1, u2):
    """Broadcastable coefficient arrays for the hop terms plus the diagonal."""
    diag4 = (
        u1[:d1, None, None, None]
        + u2[None, :d2, None, None]
        + u1[None, None, :d1, None]
        + u2[None, None, None, :d2]
    )
    w11 = sq1[1:d1, None, None, None] * sq1[None, None, 1:d1, None]
    w22 = sq2[None, 1:d2, None, None] * sq2[None, None, None, 1:d2]
    w12 = sq1[1:d1, None, None, None] * sq2[None, None, None, 1:d2]
    w21 = sq2[None, 1:d2, None, None] * sq1[None, None, 1:d1, None]
    xk = sq1[1:d1, None, None, None] * sq2[None, 1:d2, None, None]
    xb = sq1[None, None, 1:d1, None] * sq2[None, None, None, 1:d2]
    return diag4, w11, w22, w12, w21, xk, xb


def _rhs_into(out, y, k1, k0, cross, tables):
    diag4, w11, w22, w12, w21, xk, xb = tables
    np.multiply(diag4, y, out=out)

    # gain hops  a_i rho a_j^dag
    out[:-1, :, :-1, :] += (k1 * w11) * y[1:, :, 1:, :]
    out[:, :-1, :, :-1] += (k1 * w22) * y[:, 1:, :, 1:]
    # loss hops  a_i^dag rho a_j
    out[1:, :, 1:, :] += (k0 * w11) * y[:-1, :, :-1, :]
    out[:, 1:, :, 1:] += (k0 * w22) * y[:, :-1, :, :-1]

    if cross:
        kx = -0.5 * (k1 + k0)
        out[:-1, :, :, :-1] += (k1 * w12) * y[1:, :, :, 1:]
        out[:, :-1, :-1, :] += (k1 * w21) * y[:, 1:, 1:, :]
        out[1:, :, :, 1:] += (k0 * w12) * y[:-1, :, :, :-1]
        out[:, 1:, 1:, :] += (k0 * w21) * y[:, :-1, :-1, :]
        # mode-exchange parts of L^dag L and L L^dag, ket then bra side
        out[1:, :-1, :, :] += (kx * xk) * y[:-1, 1:, :, :]
        out[:-1, 1:, :, :] += (kx * xk) * y[1:, :-1, :, :]
        out[:, :, :-1, 1:] += (kx * xb) * y[:, :, 1:, :-1]
        out[:, :, 1:, :-1] += (kx * xb) * y[:, :, :-1, 1:]
    return out


def rhs(out, y, k1, k0, cross, sq1, sq2, u1, u2):
    """Generator applied once: out <- L[y]. Shapes (d1, d2, d1, d2)."""
    d1, d2 = y.shape[0], y.shape[1]
    tables = _coef_tables(d1, d2, k1, k0, sq1, sq2, u1, u2)
    return _rhs_into(out, y, k1, k0, cross, tables)


def run_rk4(rho, h, n_steps, k1, k0, cross, sq1, sq2, u1, u2):
    """Advance rho in place by n_steps classical RK4 steps of size h.

    After each step the state is symmetrized (averaged with its adjoint)
    and trace-renormalized. Returns (max trace drift before renormalizing,
    max hermiticity defect before symmetrizing) over the steps taken.
    """
    d1, d2 = rho.shape[0], rho.shape[1]
    tables = _coef_tables(d1, d2, k1, k0, sq1, sq2, u1, u2)
    k = np.empty_like(rho)
    acc = np.empty_like(rho)
    y = np.empty_like(rho)
    max_drift = 0.0
    max_asym = 0.0
    for _ in range(n_steps):
        _rhs_into(k, rho, k1, k0, cross, tables)
        np.copyto(acc, k)
        np.multiply(k, 0.5 * h, out=y)
        y += rho

        _rhs_into(k, y, k1, k0, cross, tables)
        acc += k
        acc += k
        np.multiply(k, 0.5 * h, out=y)
        y += rho

        _rhs_into(k, y, k1, k0, cross, tables)
        acc += k
        acc += k
        np.multiply(k, h, out=y)
        y += rho

        _rhs_into(k, y, k1, k0, cross, tables)
        acc += k
        acc *= h / 6.0
        rho += acc

        adj = rho.transpose(2, 3, 0, 1).conj()
        asym = float(np.abs(rho - adj).max())
        rho += adj
        rho *= 0.5
        trace = float(np.einsum("abab->", rho).real)
        drift = abs(trace - 1.0)
        rho *= 1.0 / trace
        if drift > max_drift:
            max_drift = drift
        if asym > max_asym:
            max_asym = asym
    return max_drift, max_asym
