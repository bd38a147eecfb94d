# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled pulse-train propagation. Same contract as ``rpsm._pulse_py``."""

import numpy as np
cimport numpy as cnp

cnp.import_array()

ctypedef double complex cplx


cdef inline double abs2(cplx z) nogil:
    return z.real * z.real + z.imag * z.imag


cdef inline void neumaier(double* s, double* c, double x) nogil:
    cdef double t = s[0] + x
    if (s[0] if s[0] >= 0 else -s[0]) >= (x if x >= 0 else -x):
        c[0] += (s[0] - t) + x
    else:
        c[0] += (x - t) + s[0]
    s[0] = t


def propagate(forward, entry, filtered, exit_map, gain, long n_rounds, double floor, bint keep):
    cdef cplx[:, ::1] fw = np.ascontiguousarray(forward, dtype=np.complex128)
    cdef cplx[::1] ent = np.ascontiguousarray(entry, dtype=np.complex128)
    cdef cplx[:, ::1] ex = np.ascontiguousarray(exit_map, dtype=np.complex128)
    cdef cplx g = gain
    cdef double keep_gain = 1.0 - abs2(g)
    cdef int filt = filtered

    cdef long cap = n_rounds if keep else 0
    dark_h_arr = np.empty(cap, dtype=np.complex128)
    dark_v_arr = np.empty(cap, dtype=np.complex128)
    loss_arr = np.empty(cap, dtype=np.float64)
    ext_arr = np.empty(cap, dtype=np.float64)
    bright_arr = np.empty(cap, dtype=np.complex128)
    cdef cplx[::1] dark_h = dark_h_arr
    cdef cplx[::1] dark_v = dark_v_arr
    cdef double[::1] loss = loss_arr
    cdef double[::1] ext = ext_arr
    cdef cplx[::1] bright = bright_arr

    cdef cplx vin[4]
    cdef cplx w[4]
    cdef cplx v[4]
    cdef cplx out[4]
    cdef cplx c = 0
    cdef double f_loss, e_loss, pd, pv, l_j
    cdef double ps = 0, pc = 0, ls = 0, lc = 0, es = 0, ec = 0, vs = 0, vc = 0
    cdef long j, rounds = 0
    cdef int i

    vin[0] = 1
    vin[1] = 0
    vin[2] = 0
    vin[3] = 0
    with nogil:
        for j in range(n_rounds):
            f_loss = 0
            e_loss = 0
            if j > 0:
                for i in range(4):
                    w[i] = ent[i] * c
                if filt >= 0:
                    f_loss = abs2(w[filt])
                    w[filt] = 0
                for i in range(4):
                    v[i] = ex[i, 0] * w[0] + ex[i, 1] * w[1] + ex[i, 2] * w[2] + ex[i, 3] * w[3]
                e_loss = keep_gain * (abs2(v[0]) + abs2(v[1]) + abs2(v[2]) + abs2(v[3]))
                for i in range(4):
                    vin[i] = g * v[i]
            for i in range(4):
                out[i] = fw[i, 0] * vin[0] + fw[i, 1] * vin[1] + fw[i, 2] * vin[2] + fw[i, 3] * vin[3]
            pv = abs2(out[3])
            pd = abs2(out[2]) + pv
            l_j = f_loss + abs2(out[1])
            c = out[0]
            neumaier(&ps, &pc, pd)
            neumaier(&ls, &lc, l_j)
            neumaier(&es, &ec, e_loss)
            neumaier(&vs, &vc, pv)
            if keep:
                dark_h[j] = out[2]
                dark_v[j] = out[3]
                loss[j] = l_j
                ext[j] = e_loss
                bright[j] = c
            rounds = j + 1
            if abs2(c) < floor:
                break

    if keep:
        dark_h_arr = dark_h_arr[:rounds].copy()
        dark_v_arr = dark_v_arr[:rounds].copy()
        loss_arr = loss_arr[:rounds].copy()
        ext_arr = ext_arr[:rounds].copy()
        bright_arr = bright_arr[:rounds].copy()
    return (
        rounds, dark_h_arr, dark_v_arr, loss_arr, ext_arr, bright_arr,
        ps + pc, ls + lc, es + ec, vs + vc, abs2(c),
    )


def rounds_until(forward, entry, filtered, exit_map, gain, double tol, long max_rounds):
    cdef cplx[:, ::1] fw = np.ascontiguousarray(forward, dtype=np.complex128)
    cdef cplx[::1] ent = np.ascontiguousarray(entry, dtype=np.complex128)
    cdef cplx[:, ::1] ex = np.ascontiguousarray(exit_map, dtype=np.complex128)
    cdef cplx g = gain
    cdef int filt = filtered
    cdef cplx vin[4]
    cdef cplx w[4]
    cdef cplx c = 0
    cdef long j
    cdef int i
    cdef long found = -1

    vin[0] = 1
    vin[1] = 0
    vin[2] = 0
    vin[3] = 0
    with nogil:
        for j in range(max_rounds):
            if j > 0:
                for i in range(4):
                    w[i] = ent[i] * c
                if filt >= 0:
                    w[filt] = 0
                for i in range(4):
                    vin[i] = g * (ex[i, 0] * w[0] + ex[i, 1] * w[1] + ex[i, 2] * w[2] + ex[i, 3] * w[3])
            c = fw[0, 0] * vin[0] + fw[0, 1] * vin[1] + fw[0, 2] * vin[2] + fw[0, 3] * vin[3]
            if abs2(c) < tol:
                found = j + 1
                break
    return found
