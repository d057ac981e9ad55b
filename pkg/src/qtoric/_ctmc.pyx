# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled continuous-time Monte Carlo kernel.

Gillespie sampling of the charge-configuration chain with per-jump phase
weights.  Trial streams are counter-based splitmix64 so trajectories are
order-independent; the pure-Python fallback ``qtoric._ctmc_py`` implements
the identical operation sequence and produces bit-identical sums.
"""

from libc.math cimport log1p
from libc.stdlib cimport free, malloc

cdef unsigned long long _GAMMA = 0x9E3779B97F4A7C15ULL


cdef inline unsigned long long _mix(unsigned long long z) nogil:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


def run_chunk(
    unsigned long long seed,
    long trial_lo,
    long trial_hi,
    int d,
    signed char[::1] mv_sector,
    int[::1] mv_a,
    int[::1] mv_b,
    signed char[::1] mv_m,
    signed char[::1] mv_phase,
    double[::1] rate_flat,
    int n_v,
    int n_p,
    double[::1] times,
    double[::1] cosw,
    double[::1] sinw,
    double[:, ::1] sums,
):
    cdef long trial
    cdef int n_moves = mv_m.shape[0]
    cdef int nt = times.shape[0]
    cdef int dm1 = d - 1
    cdef int i, ip, sel, ia, ib, a, b, m, acc
    cdef double t, t_next, tot, u1, u2, target, csum, r
    cdef unsigned long long state
    cdef int *alpha = <int *> malloc(n_v * sizeof(int))
    cdef int *beta = <int *> malloc(n_p * sizeof(int))
    cdef double *rates = <double *> malloc(n_moves * sizeof(double))
    if alpha == NULL or beta == NULL or rates == NULL:
        free(alpha); free(beta); free(rates)
        raise MemoryError()
    try:
        with nogil:
            for trial in range(trial_lo, trial_hi):
                state = _mix(seed + (<unsigned long long> (trial + 1)) * _GAMMA)
                for i in range(n_v):
                    alpha[i] = 0
                for i in range(n_p):
                    beta[i] = 0
                t = 0.0
                acc = 0
                ip = 0
                while ip < nt:
                    tot = 0.0
                    for i in range(n_moves):
                        if mv_sector[i] == 0:
                            a = alpha[mv_a[i]]
                            b = alpha[mv_b[i]]
                        else:
                            a = beta[mv_a[i]]
                            b = beta[mv_b[i]]
                        r = rate_flat[(a * d + b) * dm1 + mv_m[i] - 1]
                        rates[i] = r
                        tot += r
                    if tot <= 0.0:
                        while ip < nt:
                            sums[0, ip] += cosw[acc]
                            sums[1, ip] += sinw[acc]
                            sums[2, ip] += cosw[acc] * cosw[acc]
                            sums[3, ip] += sinw[acc] * sinw[acc]
                            ip += 1
                        break
                    state = state + _GAMMA
                    u1 = <double> (_mix(state) >> 11) * 1.1102230246251565e-16
                    t_next = t - log1p(-u1) / tot
                    while ip < nt and times[ip] < t_next:
                        sums[0, ip] += cosw[acc]
                        sums[1, ip] += sinw[acc]
                        sums[2, ip] += cosw[acc] * cosw[acc]
                        sums[3, ip] += sinw[acc] * sinw[acc]
                        ip += 1
                    if ip >= nt:
                        break
                    state = state + _GAMMA
                    u2 = <double> (_mix(state) >> 11) * 1.1102230246251565e-16
                    target = u2 * tot
                    csum = 0.0
                    sel = n_moves - 1
                    for i in range(n_moves):
                        csum += rates[i]
                        if target < csum:
                            sel = i
                            break
                    m = mv_m[sel]
                    ia = mv_a[sel]
                    ib = mv_b[sel]
                    if mv_sector[sel] == 0:
                        alpha[ia] = (alpha[ia] - m + d) % d
                        alpha[ib] = (alpha[ib] + m) % d
                    else:
                        beta[ia] = (beta[ia] - m + d) % d
                        beta[ib] = (beta[ib] + m) % d
                    acc = (acc + mv_phase[sel]) % d
                    t = t_next
    finally:
        free(alpha)
        free(beta)
        free(rates)
