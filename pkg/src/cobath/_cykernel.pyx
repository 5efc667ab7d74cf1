# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled RK4 core for the two-mode master-equation right-hand side.

Same contract as _pykernel: rhs() applies the generator once, run_rk4()
advances the (d1, d2, d1, d2) density array in place with per-step
symmetrization and trace renormalization. All loops run without the GIL
and single-threaded, so results are reproducible bit for bit.

The generator is a 13-point stencil in the four Fock indices. For each
(n1, n2, m1) row the coefficients that do not depend on m2 are hoisted;
terms switched off by a boundary get coefficient 0.0 and offset 0, which
keeps the inner m2 loop branch-free away from its own two edges.
"""

import numpy as np

ctypedef double complex cplx

cdef extern from "complex.h" nogil:
    double complex conj(double complex z)
    double cabs(double complex z)
    double creal(double complex z)


cdef void _stage(const cplx* y, const cplx* base, cplx* yout, cplx* acc,
                 double cy, double ca, bint first,
                 int d1, int d2, bint cross, double k1, double k0,
                 const double* sq1, const double* sq2,
                 const double* u1, const double* u2) noexcept nogil:
    """acc (+)= ca * L[y];  yout = base + cy * L[y]."""
    cdef Py_ssize_t S1 = <Py_ssize_t>d2 * d1 * d2
    cdef Py_ssize_t S2 = <Py_ssize_t>d1 * d2
    cdef Py_ssize_t T1 = d2
    cdef Py_ssize_t i, i0
    cdef int n1, n2, m1, m2
    cdef double kx = -0.5 * (k1 + k0)
    cdef double dub
    # coefficients and gather offsets that are constant along m2
    cdef double c11, cl11, c22, cl22, cg12, cl12, cg21, cl21
    cdef double cxk1, cxk2, cxb1, cxb2
    cdef Py_ssize_t o11, ol11, o22, ol22, og12, ol12, og21, ol21
    cdef Py_ssize_t oxk1, oxk2, oxb1, oxb2
    cdef cplx g
    for n1 in range(d1):
        for n2 in range(d2):
            for m1 in range(d1):
                i0 = ((<Py_ssize_t>n1 * d2 + n2) * d1 + m1) * d2
                dub = u1[n1] + u2[n2] + u1[m1]

                if n1 < d1 - 1 and m1 < d1 - 1:
                    c11 = k1 * sq1[n1 + 1] * sq1[m1 + 1]; o11 = S1 + T1
                else:
                    c11 = 0.0; o11 = 0
                if n1 > 0 and m1 > 0:
                    cl11 = k0 * sq1[n1] * sq1[m1]; ol11 = -S1 - T1
                else:
                    cl11 = 0.0; ol11 = 0
                if n2 < d2 - 1:
                    c22 = k1 * sq2[n2 + 1]; o22 = S2 + 1
                else:
                    c22 = 0.0; o22 = 0
                if n2 > 0:
                    cl22 = k0 * sq2[n2]; ol22 = -S2 - 1
                else:
                    cl22 = 0.0; ol22 = 0

                if cross:
                    if n1 < d1 - 1:
                        cg12 = k1 * sq1[n1 + 1]; og12 = S1 + 1
                    else:
                        cg12 = 0.0; og12 = 0
                    if n1 > 0:
                        cl12 = k0 * sq1[n1]; ol12 = -S1 - 1
                    else:
                        cl12 = 0.0; ol12 = 0
                    if n2 < d2 - 1 and m1 < d1 - 1:
                        cg21 = k1 * sq2[n2 + 1] * sq1[m1 + 1]; og21 = S2 + T1
                    else:
                        cg21 = 0.0; og21 = 0
                    if n2 > 0 and m1 > 0:
                        cl21 = k0 * sq2[n2] * sq1[m1]; ol21 = -S2 - T1
                    else:
                        cl21 = 0.0; ol21 = 0
                    if n1 > 0 and n2 < d2 - 1:
                        cxk1 = kx * sq1[n1] * sq2[n2 + 1]; oxk1 = S2 - S1
                    else:
                        cxk1 = 0.0; oxk1 = 0
                    if n1 < d1 - 1 and n2 > 0:
                        cxk2 = kx * sq1[n1 + 1] * sq2[n2]; oxk2 = S1 - S2
                    else:
                        cxk2 = 0.0; oxk2 = 0
                    if m1 < d1 - 1:
                        cxb1 = kx * sq1[m1 + 1]; oxb1 = T1 - 1
                    else:
                        cxb1 = 0.0; oxb1 = 0
                    if m1 > 0:
                        cxb2 = kx * sq1[m1]; oxb2 = 1 - T1
                    else:
                        cxb2 = 0.0; oxb2 = 0
                else:
                    cg12 = cl12 = cg21 = cl21 = 0.0
                    cxk1 = cxk2 = cxb1 = cxb2 = 0.0
                    og12 = ol12 = og21 = ol21 = 0
                    oxk1 = oxk2 = oxb1 = oxb2 = 0

                # m2 = 0 edge: terms that look down in m2 are off
                i = i0
                g = (dub + u2[0]) * y[i] \
                    + c11 * y[i + o11] + cl11 * y[i + ol11] \
                    + cg21 * y[i + og21] + cl21 * y[i + ol21] \
                    + cxk1 * y[i + oxk1] + cxk2 * y[i + oxk2]
                if d2 > 1:
                    g = g + (c22 * sq2[1]) * y[i + o22] \
                        + (cg12 * sq2[1]) * y[i + og12] \
                        + (cxb2 * sq2[1]) * y[i + oxb2]
                if first:
                    acc[i] = ca * g
                else:
                    acc[i] = acc[i] + ca * g
                yout[i] = base[i] + cy * g

                # core: both m2 neighbours exist
                for m2 in range(1, d2 - 1):
                    i = i0 + m2
                    g = (dub + u2[m2]) * y[i] \
                        + c11 * y[i + o11] + cl11 * y[i + ol11] \
                        + (c22 * sq2[m2 + 1]) * y[i + o22] \
                        + (cl22 * sq2[m2]) * y[i + ol22] \
                        + (cg12 * sq2[m2 + 1]) * y[i + og12] \
                        + (cl12 * sq2[m2]) * y[i + ol12] \
                        + cg21 * y[i + og21] + cl21 * y[i + ol21] \
                        + cxk1 * y[i + oxk1] + cxk2 * y[i + oxk2] \
                        + (cxb1 * sq2[m2]) * y[i + oxb1] \
                        + (cxb2 * sq2[m2 + 1]) * y[i + oxb2]
                    if first:
                        acc[i] = ca * g
                    else:
                        acc[i] = acc[i] + ca * g
                    yout[i] = base[i] + cy * g

                # m2 = d2-1 edge: terms that look up in m2 are off
                if d2 > 1:
                    m2 = d2 - 1
                    i = i0 + m2
                    g = (dub + u2[m2]) * y[i] \
                        + c11 * y[i + o11] + cl11 * y[i + ol11] \
                        + (cl22 * sq2[m2]) * y[i + ol22] \
                        + (cl12 * sq2[m2]) * y[i + ol12] \
                        + cg21 * y[i + og21] + cl21 * y[i + ol21] \
                        + cxk1 * y[i + oxk1] + cxk2 * y[i + oxk2] \
                        + (cxb1 * sq2[m2]) * y[i + oxb1]
                    if first:
                        acc[i] = ca * g
                    else:
                        acc[i] = acc[i] + ca * g
                    yout[i] = base[i] + cy * g


cdef void _finish(cplx* rho, const cplx* acc, double c, int dim,
                  double* drift, double* asym) noexcept nogil:
    """rho += c * acc, then symmetrize, measure drift/defect, renormalize."""
    cdef Py_ssize_t n = <Py_ssize_t>dim * dim
    cdef Py_ssize_t i, j, ij, ji
    cdef double a, tr = 0.0, mx = 0.0
    cdef cplx avg
    for i in range(n):
        rho[i] = rho[i] + c * acc[i]
    for i in range(dim):
        ij = i * dim + i
        a = rho[ij].imag
        if a < 0.0:
            a = -a
        if a > mx:
            mx = a
        rho[ij] = creal(rho[ij])
        tr += creal(rho[ij])
        for j in range(i + 1, dim):
            ij = i * dim + j
            ji = j * dim + i
            avg = 0.5 * (rho[ij] + conj(rho[ji]))
            a = cabs(rho[ij] - conj(rho[ji]))
            if a > mx:
                mx = a
            rho[ij] = avg
            rho[ji] = conj(avg)
    drift[0] = tr - 1.0 if tr >= 1.0 else 1.0 - tr
    asym[0] = mx
    cdef double s = 1.0 / tr
    for i in range(n):
        rho[i] = rho[i] * s


def rhs(out, y, double k1, double k0, bint cross, sq1, sq2, u1, u2):
    """Generator applied once: out <- L[y]. Shapes (d1, d2, d1, d2)."""
    cdef cplx[:, :, :, ::1] yv = y
    cdef cplx[:, :, :, ::1] ov = out
    cdef double[::1] s1 = sq1
    cdef double[::1] s2 = sq2
    cdef double[::1] v1 = u1
    cdef double[::1] v2 = u2
    cdef int d1 = yv.shape[0]
    cdef int d2 = yv.shape[1]
    scratch = np.empty_like(y)
    cdef cplx[:, :, :, ::1] sc = scratch
    with nogil:
        _stage(&yv[0, 0, 0, 0], &yv[0, 0, 0, 0], &sc[0, 0, 0, 0],
               &ov[0, 0, 0, 0], 0.0, 1.0, True,
               d1, d2, cross, k1, k0, &s1[0], &s2[0], &v1[0], &v2[0])
    return out


def run_rk4(rho, double h, Py_ssize_t n_steps, double k1, double k0,
            bint cross, sq1, sq2, u1, u2):
    """Advance rho in place by n_steps RK4 steps of size h.

    Returns (max trace drift before renormalizing, max hermiticity defect
    before symmetrizing) over the steps taken.
    """
    cdef cplx[:, :, :, ::1] r = rho
    cdef double[::1] s1 = sq1
    cdef double[::1] s2 = sq2
    cdef double[::1] v1 = u1
    cdef double[::1] v2 = u2
    cdef int d1 = r.shape[0]
    cdef int d2 = r.shape[1]
    cdef int dim = d1 * d2
    wa = np.empty_like(rho)
    wb = np.empty_like(rho)
    wacc = np.empty_like(rho)
    cdef cplx[:, :, :, ::1] ya = wa
    cdef cplx[:, :, :, ::1] yb = wb
    cdef cplx[:, :, :, ::1] acc = wacc
    cdef cplx* pr = &r[0, 0, 0, 0]
    cdef cplx* pa = &ya[0, 0, 0, 0]
    cdef cplx* pb = &yb[0, 0, 0, 0]
    cdef cplx* pc = &acc[0, 0, 0, 0]
    cdef double max_drift = 0.0, max_asym = 0.0, drift = 0.0, asym = 0.0
    cdef Py_ssize_t step
    with nogil:
        for step in range(n_steps):
            _stage(pr, pr, pa, pc, 0.5 * h, 1.0, True,
                   d1, d2, cross, k1, k0, &s1[0], &s2[0], &v1[0], &v2[0])
            _stage(pa, pr, pb, pc, 0.5 * h, 2.0, False,
                   d1, d2, cross, k1, k0, &s1[0], &s2[0], &v1[0], &v2[0])
            _stage(pb, pr, pa, pc, h, 2.0, False,
                   d1, d2, cross, k1, k0, &s1[0], &s2[0], &v1[0], &v2[0])
            _stage(pa, pr, pb, pc, 0.0, 1.0, False,
                   d1, d2, cross, k1, k0, &s1[0], &s2[0], &v1[0], &v2[0])
            _finish(pr, pc, h / 6.0, dim, &drift, &asym)
            if drift > max_drift:
                max_drift = drift
            if asym > max_asym:
                max_asym = asym
    return max_drift, max_asym
