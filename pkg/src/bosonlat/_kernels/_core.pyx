# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels: Glynn permanent and the photon samplers.

Same contract and per-trial splitmix64 streams as ``fallback``; the
Glynn sums here use Gray-code single-bit updates, O(n * 2^n).
"""

from libc.stdint cimport uint64_t, int32_t, uint8_t, int8_t
from libc.math cimport ldexp

import numpy as np

NAME = "compiled"

cdef extern from *:
    int __builtin_ctzll(unsigned long long x) nogil

cdef uint64_t GAMMA = <uint64_t>0x9E3779B97F4A7C15
cdef double INV_2_53 = 1.0 / 9007199254740992.0


cdef inline uint64_t _mix64(uint64_t z) nogil:
    z ^= z >> 30
    z *= <uint64_t>0xBF58476D1CE4E5B9
    z ^= z >> 27
    z *= <uint64_t>0x94D049BB133111EB
    return z ^ (z >> 31)


cdef inline uint64_t _stream_init(uint64_t seed, uint64_t trial) nogil:
    return _mix64(seed + GAMMA * (trial + 1))


cdef inline double _next_double(uint64_t* state) nogil:
    state[0] += GAMMA
    return <double>(_mix64(state[0]) >> 11) * INV_2_53


# ---------------------------------------------------------------------------
# permanent
# ---------------------------------------------------------------------------

cdef double complex _perm_glynn(const double complex[:, ::1] m,
                                double complex* s,
                                int8_t* delta) nogil:
    cdef Py_ssize_t n = m.shape[0]
    cdef Py_ssize_t i, j
    cdef uint64_t t, n_terms
    cdef int sign = 1
    cdef double complex p, total
    cdef double coef
    if n == 0:
        return 1.0
    for j in range(n):
        s[j] = 0.0
        for i in range(n):
            s[j] = s[j] + m[i, j]
        delta[j] = 1
    total = 1.0
    for j in range(n):
        total = total * s[j]
    n_terms = (<uint64_t>1) << (n - 1)
    for t in range(1, n_terms):
        i = __builtin_ctzll(t) + 1
        delta[i] = -delta[i]
        coef = 2.0 * delta[i]
        for j in range(n):
            s[j] = s[j] + coef * m[i, j]
        sign = -sign
        p = s[0]
        for j in range(1, n):
            p = p * s[j]
        total = total + sign * p
    return total * ldexp(1.0, <int>(1 - n))


def permanent(const double complex[:, ::1] m):
    cdef Py_ssize_t n = m.shape[0]
    cdef double complex result
    scratch = np.empty(max(n, 1), dtype=np.complex128)
    deltas = np.empty(max(n, 1), dtype=np.int8)
    cdef double complex[::1] s = scratch
    cdef int8_t[::1] d = deltas
    with nogil:
        result = _perm_glynn(m, &s[0], &d[0])
    return complex(result)


# ---------------------------------------------------------------------------
# chain-rule boson sampler
# ---------------------------------------------------------------------------

cdef void _col_deleted_perms(const double complex* b, Py_ssize_t nr, Py_ssize_t nc,
                             double complex* out, double complex* s,
                             double complex* pre, double complex* suf,
                             int8_t* delta) nogil:
    # out[c] = Perm(b with column c deleted), b is nr x nc row-major, nc = nr + 1
    cdef Py_ssize_t i, c
    cdef uint64_t t, n_terms
    cdef int sign = 1
    cdef double coef
    cdef double scale
    for c in range(nc):
        s[c] = 0.0
        for i in range(nr):
            s[c] = s[c] + b[i * nc + c]
        out[c] = 0.0
    for i in range(nr):
        delta[i] = 1
    n_terms = (<uint64_t>1) << (nr - 1)
    t = 0
    while True:
        pre[0] = 1.0
        for c in range(nc):
            pre[c + 1] = pre[c] * s[c]
        suf[nc] = 1.0
        for c in range(nc - 1, -1, -1):
            suf[c] = suf[c + 1] * s[c]
        for c in range(nc):
            out[c] = out[c] + sign * pre[c] * suf[c + 1]
        t += 1
        if t >= n_terms:
            break
        i = __builtin_ctzll(t) + 1
        delta[i] = -delta[i]
        coef = 2.0 * delta[i]
        for c in range(nc):
            s[c] = s[c] + coef * b[i * nc + c]
        sign = -sign
    scale = ldexp(1.0, <int>(1 - nr))
    for c in range(nc):
        out[c] = out[c] * scale


cdef inline Py_ssize_t _draw(const double* pmf, Py_ssize_t n, double u, double total) nogil:
    cdef double target = u * total
    cdef double acc = 0.0
    cdef Py_ssize_t r
    for r in range(n):
        acc += pmf[r]
        if acc > target:
            return r
    return n - 1


def boson_batch(const double complex[:, ::1] cols, double eta, int dmin,
                uint64_t seed, uint64_t start, Py_ssize_t count):
    cdef Py_ssize_t n_modes = cols.shape[0]
    cdef Py_ssize_t k = cols.shape[1]

    occ_arr = np.zeros((count, n_modes), dtype=np.int32)
    acc_arr = np.zeros(count, dtype=np.uint8)
    cdef int32_t[:, ::1] occ = occ_arr
    cdef uint8_t[::1] accepted = acc_arr

    b_arr = np.empty(k * (k + 1), dtype=np.complex128)
    pm_arr = np.empty(k + 1, dtype=np.complex128)
    s_arr = np.empty(k + 1, dtype=np.complex128)
    pre_arr = np.empty(k + 2, dtype=np.complex128)
    suf_arr = np.empty(k + 2, dtype=np.complex128)
    delta_arr = np.empty(k + 1, dtype=np.int8)
    pmf_arr = np.empty(n_modes, dtype=np.float64)
    scol_arr = np.empty(k, dtype=np.intp)
    rows_arr = np.empty(k, dtype=np.intp)

    cdef double complex[::1] b = b_arr
    cdef double complex[::1] pm = pm_arr
    cdef double complex[::1] s = s_arr
    cdef double complex[::1] pre = pre_arr
    cdef double complex[::1] suf = suf_arr
    cdef int8_t[::1] delta = delta_arr
    cdef double[::1] pmf = pmf_arr
    cdef Py_ssize_t[::1] scol = scol_arr
    cdef Py_ssize_t[::1] rows = rows_arr

    cdef uint64_t state
    cdef Py_ssize_t trial, i, j, c, r, kk, jj, nr, nc
    cdef double u, total, w
    cdef double complex amp

    with nogil:
        for trial in range(count):
            state = _stream_init(seed, start + <uint64_t>trial)
            if eta < 1.0:
                kk = 0
                for i in range(k):
                    if _next_double(&state) < eta:
                        scol[kk] = i
                        kk += 1
            else:
                for i in range(k):
                    scol[i] = i
                kk = k
            if kk < dmin:
                continue
            accepted[trial] = 1
            if kk == 0:
                continue
            # Fisher-Yates over the surviving columns
            for i in range(kk - 1, 0, -1):
                u = _next_double(&state)
                jj = <Py_ssize_t>(u * (i + 1))
                if jj > i:
                    jj = i
                j = scol[i]
                scol[i] = scol[jj]
                scol[jj] = j
            # first photon: pmf from the first permuted column
            total = 0.0
            for r in range(n_modes):
                amp = cols[r, scol[0]]
                w = amp.real * amp.real + amp.imag * amp.imag
                pmf[r] = w
                total += w
            r = _draw(&pmf[0], n_modes, _next_double(&state), total)
            rows[0] = r
            occ[trial, r] += 1
            # remaining photons via Laplace-expanded permanents
            for j in range(2, kk + 1):
                nr = j - 1
                nc = j
                for i in range(nr):
                    for c in range(nc):
                        b[i * nc + c] = cols[rows[i], scol[c]]
                _col_deleted_perms(&b[0], nr, nc, &pm[0], &s[0],
                                   &pre[0], &suf[0], &delta[0])
                total = 0.0
                for r in range(n_modes):
                    amp = 0.0
                    for c in range(nc):
                        amp = amp + cols[r, scol[c]] * pm[c]
                    w = amp.real * amp.real + amp.imag * amp.imag
                    pmf[r] = w
                    total += w
                r = _draw(&pmf[0], n_modes, _next_double(&state), total)
                rows[j - 1] = r
                occ[trial, r] += 1
    return occ_arr, acc_arr


# ---------------------------------------------------------------------------
# distinguishable sampler
# ---------------------------------------------------------------------------

def dist_batch(const double[:, ::1] cdfs, double eta, int dmin,
               uint64_t seed, uint64_t start, Py_ssize_t count):
    cdef Py_ssize_t k = cdfs.shape[0]
    cdef Py_ssize_t n_modes = cdfs.shape[1]

    occ_arr = np.zeros((count, n_modes), dtype=np.int32)
    acc_arr = np.zeros(count, dtype=np.uint8)
    surv_arr = np.empty(k, dtype=np.uint8)
    cdef int32_t[:, ::1] occ = occ_arr
    cdef uint8_t[::1] accepted = acc_arr
    cdef uint8_t[::1] surv = surv_arr

    cdef uint64_t state
    cdef Py_ssize_t trial, i, r, kk
    cdef double u, target

    with nogil:
        for trial in range(count):
            state = _stream_init(seed, start + <uint64_t>trial)
            if eta < 1.0:
                kk = 0
                for i in range(k):
                    if _next_double(&state) < eta:
                        surv[i] = 1
                        kk += 1
                    else:
                        surv[i] = 0
            else:
                for i in range(k):
                    surv[i] = 1
                kk = k
            if kk >= dmin:
                accepted[trial] = 1
            # fixed layout: one routing draw per photon, dead ones burned
            for i in range(k):
                u = _next_double(&state)
                if accepted[trial] == 0 or surv[i] == 0:
                    continue
                target = u * cdfs[i, n_modes - 1]
                for r in range(n_modes):
                    if cdfs[i, r] > target:
                        break
                occ[trial, r] += 1
    return occ_arr, acc_arr


def survival_mask(Py_ssize_t k, double eta, uint64_t seed, uint64_t start,
                  Py_ssize_t count):
    out_arr = np.empty((count, k), dtype=np.uint8)
    cdef uint8_t[:, ::1] out = out_arr
    cdef uint64_t state
    cdef Py_ssize_t trial, i
    with nogil:
        for trial in range(count):
            state = _stream_init(seed, start + <uint64_t>trial)
            for i in range(k):
                out[trial, i] = 1 if _next_double(&state) < eta else 0
    return out_arr.astype(bool)


def bit_matrix(Py_ssize_t rows, Py_ssize_t cols, uint64_t seed):
    out_arr = np.empty((rows, cols), dtype=np.int8)
    cdef int8_t[:, ::1] out = out_arr
    cdef uint64_t state
    cdef Py_ssize_t r, c
    with nogil:
        for r in range(rows):
            state = _stream_init(seed, <uint64_t>r)
            for c in range(cols):
                state += GAMMA
                out[r, c] = <int8_t>(_mix64(state) >> 63)
    return out_arr
