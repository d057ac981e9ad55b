"""Davies generator assembly.

Couplings are the Hermitian per-edge combinations of sigma^x and sigma^z
powers; each (edge, sector, power pair) channel splits into Bohr-frequency
components built from charge-pair projectors, with KMS-weighted rates
R(-omega) = exp(-beta omega) R(omega).  Paired powers (m, d-m) carry weight
1/2, the self-conjugate power (m = d/2, including the qubit case) weight 1;
this normalization reproduces the closed-form short-time rates for every d
and makes the assembled generator agree with a blind Fourier decomposition
of the couplings.

In Heisenberg form the generator is
  L(X) = sum_c r_c [ L_c^dag X L_c - 1/2 {L_c^dag L_c, X} ],
whose dual acts on density operators; both satisfy L(1) = 0 and leave the
Gibbs state exp(-beta H)/Z stationary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np
import scipy.sparse as sp

from qtoric.code import CodeInstance
from qtoric.config import BOHR_TOL, DEFAULT_CAPS, SizeCapError
from qtoric.gpauli import PauliWord
from qtoric.processes import edge_sites, error_word


# -- bath ---------------------------------------------------------------------


class BathSpectrum:
    """Exchange rates R(omega >= 0) at inverse temperature beta.

    Negative frequencies are defined by detailed balance,
    R(-omega) = exp(-beta omega) R(omega).  The default model is flat in the
    positive frequencies with an independent value at omega = 0.
    """

    def __init__(
        self,
        beta: float,
        rate0: float = 1.0,
        rate_positive: float | Mapping[float, float] | Callable[[float], float] = 1.0,
    ):
        if beta < 0:
            raise ValueError("beta must be >= 0 (or math.inf)")
        self.beta = float(beta)
        self.rate0 = float(rate0)
        self._spec = rate_positive
        if callable(rate_positive):
            self._fn = rate_positive
        elif isinstance(rate_positive, Mapping):
            table = {round(float(w), 9): float(r) for w, r in rate_positive.items()}

            def _fn(w: float) -> float:
                key = round(float(w), 9)
                if key not in table:
                    raise KeyError(f"no rate tabulated for Bohr frequency {w}")
                return table[key]

            self._fn = _fn
        else:
            r = float(rate_positive)
            self._fn = lambda w: r
        if self.rate0 < 0:
            raise ValueError("rates must be nonnegative")

    def rate(self, omega: float) -> float:
        """R(|omega|) for omega ~ 0 or omega > 0."""
        if abs(omega) < BOHR_TOL:
            return self.rate0
        r = self._fn(abs(omega))
        if r < 0:
            raise ValueError("rates must be nonnegative")
        return r

    def kms_rate(self, delta_e: float) -> float:
        """Rate of a process changing the system energy by delta_e."""
        if abs(delta_e) < BOHR_TOL:
            return self.rate0
        if delta_e > 0:
            boltz = 0.0 if math.isinf(self.beta) else math.exp(-self.beta * delta_e)
            return self.rate(delta_e) * boltz
        return self.rate(-delta_e)

    def describe(self) -> dict:
        rates: dict = {"0": self.rate0}
        if callable(self._spec):
            rates["positive"] = "callable"
        elif isinstance(self._spec, Mapping):
            rates["positive"] = {str(k): v for k, v in self._spec.items()}
        else:
            rates["positive"] = float(self._spec)
        return {"beta": self.beta, "rates": rates}


def pair_weight(d: int, m: int) -> float:
    """Channel weight of power m: 1/2 when paired with d-m, 1 when self-paired."""
    return 1.0 if (2 * m) % d == 0 else 0.5


def transition_rate_table(d: int, bath: BathSpectrum) -> np.ndarray:
    """rate[a, b, m-1] of the charge-pair move (a, b) -> (a - m, b + m).

    Includes the pair weight; this single table drives the reduced chain,
    the Monte Carlo kernel and the Davies channel rates.
    """
    ang = 2.0 * np.pi / d
    eps = lambda a: -math.cos(ang * (a % d))
    out = np.zeros((d, d, d - 1))
    for a in range(d):
        for b in range(d):
            for m in range(1, d):
                de = eps(a - m) + eps(b + m) - eps(a) - eps(b)
                out[a, b, m - 1] = pair_weight(d, m) * bath.kms_rate(de)
    return out


# -- couplings ------------------------------------------------------------------


@dataclass(frozen=True)
class CouplingOperator:
    """Hermitian combination sigma^m + sigma^{-m} (or sigma^{d/2} alone)."""

    edge: int
    sector: str
    power: int
    words: tuple[PauliWord, ...]
    weight: float  # rate multiplier: 1/2 for paired powers, 1 self-paired

    def matrix(self, edges: int, d: int) -> sp.csr_matrix:
        mats = [w.to_sparse(edges) for w in self.words]
        out = mats[0]
        for m in mats[1:]:
            out = out + m
        return out.tocsr()


def interaction_operators(ci: CodeInstance) -> list[CouplingOperator]:
    """Per edge and sector, the floor(d/2) Hermitian coupling combinations."""
    d = ci.d
    out = []
    for edge in range(ci.n_edges):
        for sector in ("x", "z"):
            for m in range(1, d // 2 + 1):
                if (2 * m) % d == 0:
                    words = (error_word(d, edge, m, sector),)
                else:
                    words = (
                        error_word(d, edge, m, sector),
                        error_word(d, edge, d - m, sector),
                    )
                out.append(
                    CouplingOperator(edge, sector, m, words, pair_weight(d, m))
                )
    return out


# -- generator -------------------------------------------------------------------


@dataclass
class DaviesChannel:
    op: sp.csr_matrix  # Bohr component L = C(omega)
    rate: float
    omega: float  # [H, L] = -omega L
    edge: int
    sector: str
    power: int


@dataclass
class DaviesGenerator:
    ci: CodeInstance
    bath: BathSpectrum
    channels: list[DaviesChannel]
    _kmat: sp.csr_matrix | None = field(default=None, repr=False)

    # sum_c r_c L_c^dag L_c, shared by both pictures
    def _k(self) -> sp.csr_matrix:
        if self._kmat is None:
            k = sp.csr_matrix((self.ci.dim, self.ci.dim), dtype=complex)
            for ch in self.channels:
                k = k + ch.rate * (ch.op.conjugate().transpose() @ ch.op)
            self._kmat = k.tocsr()
        return self._kmat

    def apply_heisenberg(self, x: sp.spmatrix) -> sp.csr_matrix:
        """L(X) = sum r (L^dag X L - 1/2 {L^dag L, X})."""
        out = sp.csr_matrix(x.shape, dtype=complex)
        for ch in self.channels:
            out = out + ch.rate * (ch.op.conjugate().transpose() @ x @ ch.op)
        k = self._k()
        out = out - 0.5 * (k @ x) - 0.5 * (x @ k)
        return out.tocsr()

    def apply_schrodinger(self, rho: sp.spmatrix) -> sp.csr_matrix:
        """Dual dissipator sum r (L rho L^dag - 1/2 {L^dag L, rho})."""
        out = sp.csr_matrix(rho.shape, dtype=complex)
        for ch in self.channels:
            out = out + ch.rate * (ch.op @ rho @ ch.op.conjugate().transpose())
        k = self._k()
        out = out - 0.5 * (k @ rho) - 0.5 * (rho @ k)
        return out.tocsr()

    def sector_channels(self, sector: str) -> "DaviesGenerator":
        sub = [ch for ch in self.channels if ch.sector == sector]
        return DaviesGenerator(self.ci, self.bath, sub)

    def bohr_frequencies(self) -> list[float]:
        vals = sorted({round(ch.omega, 9) for ch in self.channels})
        return [float(v) for v in vals]

    def superoperator(self, include_hamiltonian: bool = True) -> sp.csr_matrix:
        """Sparse Schroedinger-picture generator on row-major vectorized rho."""
        dim = self.ci.dim
        if dim > self.ci.caps.superop_dim:
            raise SizeCapError(
                f"superoperator matrix for dim {dim} exceeds the cap "
                f"{self.ci.caps.superop_dim}; use the reduced or MC engines"
            )
        eye = sp.identity(dim, dtype=complex, format="csr")
        gen = sp.csr_matrix((dim * dim, dim * dim), dtype=complex)
        for ch in self.channels:
            l = ch.op
            ldl = (l.conjugate().transpose() @ l).tocsr()
            gen = gen + ch.rate * (
                sp.kron(l, l.conjugate(), format="csr")
                - 0.5 * sp.kron(ldl, eye, format="csr")
                - 0.5 * sp.kron(eye, ldl.transpose(), format="csr")
            )
        if include_hamiltonian:
            h = self.ci.hamiltonian(sparse=True).astype(complex)
            gen = gen + (-1j) * (
                sp.kron(h, eye, format="csr") - sp.kron(eye, h.transpose(), format="csr")
            )
        return gen.tocsr()


def build_generator(ci: CodeInstance, bath: BathSpectrum) -> DaviesGenerator:
    """Assemble the Davies channels from charge-pair projector components.

    Each coupling's Bohr components are exact: a power-m word times the
    projector onto adjacent charges (a, b) shifts the energy by a value that
    depends only on (a, b, m).  Assembly refuses if the components do not sum
    back to the coupling (completeness identity).
    """
    from qtoric.processes import charge_pair_projector

    d = ci.d
    channels: list[DaviesChannel] = []
    for edge in range(ci.n_edges):
        for sector in ("x", "z"):
            projs = {
                (a, b): charge_pair_projector(ci, edge, sector, (a, b))
                for a in range(d)
                for b in range(d)
            }
            for m in range(1, d // 2 + 1):
                powers = [m] if (2 * m) % d == 0 else [m, d - m]
                weight = pair_weight(d, m)
                comps: dict[float, sp.csr_matrix] = {}
                total = sp.csr_matrix((ci.dim, ci.dim), dtype=complex)
                for p in powers:
                    word = error_word(d, edge, p, sector).to_sparse(ci.n_edges)
                    for a in range(d):
                        for b in range(d):
                            de = (
                                ci.site_energy(a - p)
                                + ci.site_energy(b + p)
                                - ci.site_energy(a)
                                - ci.site_energy(b)
                            )
                            term = (word @ projs[(a, b)]).tocsr()
                            key = round(-de, 9)
                            comps[key] = (comps[key] + term) if key in comps else term
                            total = total + term
                coupling = sp.csr_matrix((ci.dim, ci.dim), dtype=complex)
                for p in powers:
                    coupling = coupling + error_word(d, edge, p, sector).to_sparse(ci.n_edges)
                if abs(total - coupling).max() > 1e-10:
                    raise AssertionError(
                        "Bohr components do not satisfy the completeness identity"
                    )
                for omega, op in comps.items():
                    rate = weight * bath.kms_rate(-omega)
                    if rate < 0:
                        raise AssertionError("negative Lindblad rate")
                    if rate == 0.0:
                        continue
                    channels.append(
                        DaviesChannel(
                            op=op.tocsr(),
                            rate=rate,
                            omega=float(omega),
                            edge=edge,
                            sector=sector,
                            power=m,
                        )
                    )
    return DaviesGenerator(ci, bath, channels)


# -- Fourier (blind eigenoperator) decomposition ----------------------------------


class FourierDecomposition:
    """Bohr components of a coupling from a numerical eigendecomposition of H."""

    def __init__(self, s: np.ndarray | sp.spmatrix, h: np.ndarray | sp.spmatrix, tol: float = BOHR_TOL):
        hd = h.toarray() if sp.issparse(h) else np.asarray(h)
        if np.abs(hd - hd.conj().T).max() > 1e-10:
            raise ValueError("H must be Hermitian")
        if np.abs(hd.imag).max() < 1e-12:
            evals, vecs = np.linalg.eigh(hd.real)
        else:
            evals, vecs = np.linalg.eigh(hd)
        self.evals = evals
        self.vecs = vecs
        self.tol = tol
        sv = (s @ vecs) if sp.issparse(s) else np.asarray(s) @ vecs
        self.m = vecs.conj().T @ sv  # coupling in the eigenbasis
        scale = np.abs(self.m).max()
        mask = np.abs(self.m) > max(1e-12, 1e-10 * scale)
        w = evals[None, :] - evals[:, None]
        freqs = np.sort(w[mask])
        self.bohr = _cluster(freqs, tol)
        self._w = w
        self._mask = mask

    def bohr_frequencies(self) -> list[float]:
        return [float(f) for f in self.bohr]

    def _band(self, omega: float) -> np.ndarray:
        return self._mask & (np.abs(self._w - omega) < max(self.tol, 1e-7))

    def component_action(self, omega: float, u: np.ndarray) -> np.ndarray:
        """S(omega) @ u without materializing the dense component."""
        ut = self.vecs.conj().T @ u
        mid = (self.m * self._band(omega)) @ ut
        return self.vecs @ mid

    def component(self, omega: float) -> np.ndarray:
        return self.vecs @ (self.m * self._band(omega)) @ self.vecs.conj().T


def _cluster(sorted_vals: np.ndarray, tol: float) -> list[float]:
    out: list[float] = []
    i = 0
    n = len(sorted_vals)
    while i < n:
        j = i
        while j + 1 < n and sorted_vals[j + 1] - sorted_vals[j] < tol:
            j += 1
        block = sorted_vals[i : j + 1]
        if block[-1] - block[0] > 100 * tol:
            raise ValueError(
                "Bohr frequencies not groupable at this tolerance: "
                f"cluster spread {block[-1] - block[0]}"
            )
        out.append(float(block.mean()))
        i = j + 1
    return out


def fourier_components(
    s: np.ndarray | sp.spmatrix, h: np.ndarray | sp.spmatrix, tol: float = BOHR_TOL
) -> dict[float, np.ndarray]:
    """omega -> S(omega) with sum_omega S(omega) = S (dense; small systems)."""
    dec = FourierDecomposition(s, h, tol)
    return {w: dec.component(w) for w in dec.bohr_frequencies()}


# -- stabilizer eigenbasis and Gibbs machinery --------------------------------------


class StabilizerEigenbasis:
    """Joint eigenbasis of all A_s, B_p as a sparse unitary.

    Columns are character-averaged orbits of computational states under the
    vertex-operator group; B_p stay diagonal.  Used for Gibbs expectations
    and stationarity residuals at sizes where dense eigendecomposition is
    wasteful.
    """

    def __init__(self, ci: CodeInstance):
        self.ci = ci
        d, k2 = ci.d, ci.lat.n_vertices
        dim = ci.dim
        free = k2 - 1
        n_group = d**free

        perm_single = []
        for s in range(k2):
            m = ci.A[s].to_sparse(ci.n_edges).tocoo()
            assert np.abs(m.data - 1.0).max() < 1e-12  # X-type: pure permutation
            p = np.empty(dim, dtype=np.int64)
            p[m.col] = m.row
            perm_single.append(p)

        # group elements prod_{s < k2-1} A_s^{m_s}, mixed-radix enumeration
        perms = np.empty((n_group, dim), dtype=np.int64)
        exps = np.empty((n_group, free), dtype=np.int64)
        for g in range(n_group):
            rest, digits = g, []
            for _ in range(free):
                digits.append(rest % d)
                rest //= d
            exps[g] = digits
            p = np.arange(dim, dtype=np.int64)
            for s, msexp in enumerate(digits):
                for _ in range(msexp):
                    p = perm_single[s][p]
            perms[g] = p

        rep_of = perms.min(axis=0)
        reps = np.flatnonzero(rep_of == np.arange(dim))
        n_orb = len(reps)
        assert n_orb * n_group == dim, "vertex group action is not free"

        # neutral alpha configurations, matching mixed-radix order
        alphas = np.empty((n_group, k2), dtype=np.int64)
        for a in range(n_group):
            rest, digits = a, []
            for _ in range(free):
                digits.append(rest % d)
                rest //= d
            digits.append((-sum(digits)) % d)
            alphas[a] = digits

        omega = np.exp(2j * np.pi / d)
        cols_rows = perms[:, reps]  # (n_group, n_orb)
        data = np.empty((n_group * n_group, n_orb), dtype=complex)
        rows = np.empty((n_group * n_group, n_orb), dtype=np.int64)
        cols = np.empty((n_group * n_group, n_orb), dtype=np.int64)
        for ai in range(n_group):
            chi = omega ** (-(exps @ alphas[ai, :free]) % d)  # conj character
            block = slice(ai * n_group, (ai + 1) * n_group)
            data[block] = (chi / math.sqrt(n_group))[:, None] * np.ones((1, n_orb))
            rows[block] = cols_rows
            cols[block] = ai * n_orb + np.arange(n_orb)[None, :]
        self.u = sp.csr_matrix(
            (data.ravel(), (rows.ravel(), cols.ravel())), shape=(dim, dim)
        )

        synd = ci.plaquette_syndromes()[reps]  # beta charges per orbit
        ang = 2.0 * np.pi / d
        e_beta = -np.cos(ang * synd).sum(axis=1)
        e_alpha = -np.cos(ang * alphas).sum(axis=1)
        self.energies = (e_alpha[:, None] + e_beta[None, :]).ravel()
        self.alpha_index = np.repeat(np.arange(n_group), n_orb)
        self.n_orbits = n_orb
        self.n_group = n_group

    def transform(self, op: sp.spmatrix) -> sp.csr_matrix:
        return (self.u.conjugate().transpose() @ op @ self.u).tocsr()


class GibbsState:
    """exp(-beta H)/Z represented in the stabilizer eigenbasis."""

    def __init__(self, ci: CodeInstance, beta: float, basis: StabilizerEigenbasis | None = None):
        if beta < 0 or math.isinf(beta):
            raise ValueError("Gibbs state needs finite beta >= 0")
        self.ci = ci
        self.beta = float(beta)
        self.basis = basis if basis is not None else StabilizerEigenbasis(ci)
        w = np.exp(-beta * (self.basis.energies - self.basis.energies.min()))
        self.weights = w / w.sum()

    def trace(self) -> float:
        return float(self.weights.sum())

    def expectation(self, op: sp.spmatrix) -> complex:
        m = self.basis.transform(op)
        return complex(np.sum(m.diagonal() * self.weights))

    def ground_population(self) -> float:
        e0 = self.basis.energies.min()
        return float(self.weights[self.basis.energies < e0 + 1e-9].sum())

    def to_dense(self) -> np.ndarray:
        dim = self.ci.dim
        if dim * dim > self.ci.caps.dense_entries:
            raise SizeCapError("dense Gibbs state exceeds the entry cap")
        u = self.basis.u.toarray()
        return (u * self.weights[None, :]) @ u.conj().T


def gibbs_state(ci: CodeInstance, beta: float) -> GibbsState:
    return GibbsState(ci, beta)


def stationarity_residual(ci: CodeInstance, bath: BathSpectrum) -> float:
    """max-abs entry of the dual generator applied to the Gibbs state.

    Computed in the stabilizer eigenbasis where the Gibbs state is diagonal;
    the Hamiltonian commutator vanishes identically there.
    """
    if math.isinf(bath.beta):
        raise ValueError("stationarity check needs finite beta")
    basis = StabilizerEigenbasis(ci)
    gen = build_generator(ci, bath)
    w = np.exp(-bath.beta * (basis.energies - basis.energies.min()))
    w /= w.sum()
    rho = sp.diags(w.astype(complex), format="csr")
    out = sp.csr_matrix((ci.dim, ci.dim), dtype=complex)
    ksum = sp.csr_matrix((ci.dim, ci.dim), dtype=complex)
    for ch in gen.channels:
        lt = basis.transform(ch.op)
        out = out + ch.rate * (lt @ rho @ lt.conjugate().transpose())
        ksum = ksum + ch.rate * (lt.conjugate().transpose() @ lt)
    out = (out - 0.5 * (ksum @ rho) - 0.5 * (rho @ ksum)).tocsr()
    return float(np.abs(out.data).max()) if out.nnz else 0.0
