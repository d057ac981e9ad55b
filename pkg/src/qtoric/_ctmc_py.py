"""Pure-Python continuous-time Monte Carlo kernel.

Reference implementation of the compiled kernel in ``qtoric._ctmc``; the two
produce bit-identical trajectories (same counter-based splitmix64 streams,
same IEEE operation order), this one roughly two orders of magnitude slower.
"""

from __future__ import annotations

import math

import numpy as np

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


def _mix(z: int) -> int:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & _MASK
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB & _MASK
    return z ^ (z >> 31)


def run_chunk(
    seed: int,
    trial_lo: int,
    trial_hi: int,
    d: int,
    mv_sector: np.ndarray,  # int8, 0 = vertex sector, 1 = plaquette sector
    mv_a: np.ndarray,  # int32: site losing m
    mv_b: np.ndarray,  # int32: site gaining m
    mv_m: np.ndarray,  # int8: power
    mv_phase: np.ndarray,  # int8: weight exponent added per jump, mod d
    rate_flat: np.ndarray,  # float64[(a*d + b)*(d-1) + m-1]
    n_v: int,
    n_p: int,
    times: np.ndarray,  # float64, ascending
    cosw: np.ndarray,
    sinw: np.ndarray,
    sums: np.ndarray,  # float64 (4, nt): re, im, re^2, im^2 accumulators
) -> None:
    n_moves = len(mv_m)
    nt = len(times)
    dm1 = d - 1
    rates = [0.0] * n_moves
    for trial in range(trial_lo, trial_hi):
        state = _mix((seed + (trial + 1) * _GAMMA) & _MASK)
        alpha = [0] * n_v
        beta = [0] * n_p
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
            state = (state + _GAMMA) & _MASK
            u1 = (_mix(state) >> 11) * 1.1102230246251565e-16  # 2^-53
            t_next = t - math.log1p(-u1) / tot
            while ip < nt and times[ip] < t_next:
                sums[0, ip] += cosw[acc]
                sums[1, ip] += sinw[acc]
                sums[2, ip] += cosw[acc] * cosw[acc]
                sums[3, ip] += sinw[acc] * sinw[acc]
                ip += 1
            if ip >= nt:
                break
            state = (state + _GAMMA) & _MASK
            u2 = (_mix(state) >> 11) * 1.1102230246251565e-16
            target = u2 * tot
            csum = 0.0
            sel = n_moves - 1
            for i in range(n_moves):
                csum += rates[i]
                if target < csum:
                    sel = i
                    break
            m = mv_m[sel]
            if mv_sector[sel] == 0:
                ia, ib = mv_a[sel], mv_b[sel]
                alpha[ia] = (alpha[ia] - m + d) % d
                alpha[ib] = (alpha[ib] + m) % d
            else:
                ia, ib = mv_a[sel], mv_b[sel]
                beta[ia] = (beta[ia] - m + d) % d
                beta[ib] = (beta[ib] + m) % d
            acc = (acc + mv_phase[sel]) % d
            t = t_next
