"""Exact reduced evolution of X_c times stabilizer functions.

The Heisenberg evolution closes (up to the intra-frequency cross terms that
vanish for qubits) on operators X_c * f(charge configuration).  The
coefficients f obey a linear generator over neutral charge configurations:
transitions are single-edge charge moves with the KMS rates of the bath, and
a transition on a loop edge additionally multiplies by the Heisenberg phase
weight omega^{-gamma}, gamma the conjugation exponent of the error word with
X_c.  The vertex and plaquette sectors factorize; the plaquette factor is an
exact null contribution (no phases), kept as a consistency check.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from qtoric.code import CodeInstance
from qtoric.config import SizeCapError
from qtoric.davies import BathSpectrum, transition_rate_table
from qtoric.engines.curve import DecayCurve
from qtoric.gpauli import commutation_phase
from qtoric.processes import edge_sites, error_word


class SectorChain:
    """Charge chain of one sector (vertex or plaquette) on the torus."""

    def __init__(self, ci: CodeInstance, bath: BathSpectrum, sector: str):
        self.sector = sector
        d = ci.d
        k2 = ci.lat.n_vertices
        self.d, self.k2 = d, k2
        self.n_states = d ** (k2 - 1)
        if self.n_states > ci.caps.reduced_states:
            raise SizeCapError(
                f"{self.n_states} charge configurations exceed the reduced-engine cap"
            )
        table = transition_rate_table(d, bath)
        xc = ci.logical_x_word()

        # all neutral configs as digit rows; site k2-1 carries the dependent digit
        idx = np.arange(self.n_states, dtype=np.int64)
        digits = np.empty((self.n_states, k2), dtype=np.int64)
        rest = idx.copy()
        for s in range(k2 - 1):
            digits[:, s] = rest % d
            rest //= d
        digits[:, k2 - 1] = (-digits[:, : k2 - 1].sum(axis=1)) % d
        place = d ** np.arange(k2 - 1, dtype=np.int64)

        rows, cols, vals = [], [], []
        rows_q, cols_q, vals_q = [], [], []
        omega = np.exp(2j * np.pi / d)
        diag = np.zeros(self.n_states)
        for edge in range(ci.n_edges):
            lose, gain = edge_sites(ci, edge, sector)
            for m in range(1, d):
                gamma = commutation_phase(error_word(d, edge, m, sector), xc)
                weight = omega ** (-gamma)
                a = digits[:, lose]
                b = digits[:, gain]
                rate = table[a, b, m - 1]
                target = idx.copy()
                if lose < k2 - 1:
                    target = target + (((a - m) % d) - a) * place[lose]
                if gain < k2 - 1:
                    target = target + (((b + m) % d) - b) * place[gain]
                rows.append(idx)
                cols.append(target)
                vals.append(rate * weight)
                rows_q.append(idx)
                cols_q.append(target)
                vals_q.append(rate)
                diag -= rate
        rows.append(idx)
        cols.append(idx)
        vals.append(diag.astype(complex))
        rows_q.append(idx)
        cols_q.append(idx)
        vals_q.append(diag)
        shape = (self.n_states, self.n_states)
        self.generator = sp.csr_matrix(
            (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
            shape=shape,
        )
        self.phase_free = sp.csr_matrix(
            (np.concatenate(vals_q), (np.concatenate(rows_q), np.concatenate(cols_q))),
            shape=shape,
        )
        self.vacuum = 0
        self._digits = digits
        self._table = table

    def energies(self, ci: CodeInstance) -> np.ndarray:
        ang = 2.0 * np.pi / self.d
        return -np.cos(ang * self._digits).sum(axis=1)

    def propagate_ones(self, times: np.ndarray) -> np.ndarray:
        """(exp(G t) 1)[vacuum] at each requested time."""
        f0 = np.ones(self.n_states, dtype=complex)
        out = np.empty(len(times), dtype=complex)
        if self.n_states <= 2048:
            import scipy.linalg as sl

            g = self.generator.toarray()
            props: dict[float, np.ndarray] = {}
            order = np.argsort(times)
            f = f0
            t_prev = 0.0
            for pos in order:
                t = times[pos]
                dt = t - t_prev
                if dt > 0:
                    key = round(dt, 15)
                    if key not in props:
                        props[key] = sl.expm(g * dt)
                    f = props[key] @ f
                    t_prev = t
                out[pos] = f[self.vacuum]
            return out
        order = np.argsort(times)
        f = f0
        t_prev = 0.0
        for pos in order:
            t = times[pos]
            if t > t_prev:
                f = spla.expm_multiply(self.generator * (t - t_prev), f)
                t_prev = t
            out[pos] = f[self.vacuum]
        return out


class ReducedGenerator:
    """Joint (vertex x plaquette) reduced generator with phase weights."""

    def __init__(self, ci: CodeInstance, bath: BathSpectrum, sectors=("z", "x")):
        self.ci = ci
        self.bath = bath
        self.sectors = tuple(sectors)
        self.chains = {s: SectorChain(ci, bath, s) for s in self.sectors}

    @property
    def n_states(self) -> int:
        n = 1
        for c in self.chains.values():
            n *= c.n_states
        return n

    def joint_generator(self, phased: bool = True) -> sp.csr_matrix:
        if self.n_states > self.ci.caps.reduced_states:
            raise SizeCapError("joint reduced generator exceeds the state cap")
        mats = [
            (c.generator if phased else c.phase_free) for c in self.chains.values()
        ]
        if len(mats) == 1:
            return mats[0]
        a, b = mats
        return (
            sp.kron(a, sp.identity(b.shape[0], format="csr"), format="csr")
            + sp.kron(sp.identity(a.shape[0], format="csr"), b, format="csr")
        )

    def derivative_at_zero(self) -> complex:
        """d<X_c>/dt at t = 0 from the assembled generator action on f = 1."""
        total = 0.0 + 0.0j
        for c in self.chains.values():
            ones = np.ones(c.n_states, dtype=complex)
            total += (c.generator @ ones)[c.vacuum]
        return complex(total)

    def sector_derivative(self, sector: str) -> complex:
        c = self.chains[sector]
        ones = np.ones(c.n_states, dtype=complex)
        return complex((c.generator @ ones)[c.vacuum])

    def curve(self, times) -> DecayCurve:
        times = np.asarray(times, dtype=float)
        values = np.ones(len(times), dtype=complex)
        for c in self.chains.values():
            values = values * c.propagate_ones(times)
        meta = {
            "engine": "reduced",
            "d": self.ci.d,
            "k": self.ci.lat.k,
            "beta": self.bath.beta,
            "rates": self.bath.describe()["rates"],
            "loop_len": self.ci.loop_x.length,
            "sectors": list(self.sectors),
        }
        return DecayCurve(times=times, values=values, stderr=None, meta=meta)

    # -- diagnostics --------------------------------------------------------

    def phase_free_kernel_dimension(self) -> int:
        q = self.joint_generator(phased=False).toarray()
        ev = np.linalg.eigvals(q)
        scale = max(1.0, np.abs(ev).max())
        return int(np.sum(np.abs(ev) < 1e-9 * scale))

    def phase_free_spectral_gap(self) -> float:
        q = self.joint_generator(phased=False).toarray()
        re = np.sort(np.real(np.linalg.eigvals(q)))[::-1]
        return float(-re[1])

    def slowest_decay_rate(self) -> float:
        g = self.joint_generator(phased=True).toarray()
        return float(-np.real(np.linalg.eigvals(g)).max())

    def detailed_balance_violation(self) -> float:
        """max |pi_i q_ij - pi_j q_ji| over the phase-free chain."""
        worst = 0.0
        for c in self.chains.values():
            e = c.energies(self.ci)
            pi = np.exp(-self.bath.beta * (e - e.min()))
            pi /= pi.sum()
            q = c.phase_free.tocoo()
            qt = c.phase_free.T.tocsr()
            for i, j, v in zip(q.row, q.col, q.data):
                if i == j:
                    continue
                worst = max(worst, abs(pi[i] * v - pi[j] * qt[i, j]))
        return worst


def reduced_generator(ci: CodeInstance, bath: BathSpectrum, sectors=("z", "x")) -> ReducedGenerator:
    return ReducedGenerator(ci, bath, sectors)


def reduced_curve(ci: CodeInstance, bath: BathSpectrum, times) -> DecayCurve:
    return ReducedGenerator(ci, bath).curve(times)
