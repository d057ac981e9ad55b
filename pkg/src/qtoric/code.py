"""Stabilizer code and Hamiltonian on the oriented torus.

Vertex operators A_s = prod X_j^{sign}, plaquette operators B_p =
prod Z_j^{sign} with the orientation signs of the lattice; the Hermitian
Hamiltonian is H = -1/2 sum_s (A_s + A_s^dag) - 1/2 sum_p (B_p + B_p^dag).
Joint eigenspaces are labeled by charge configurations (alpha, beta) with
energies E = -sum_s cos(2 pi alpha_s / d) - sum_p cos(2 pi beta_p / d); the
cosine formula is the canonical energy, dense/block diagonalization is the
oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from qtoric.config import DEFAULT_CAPS, SizeCapError, SizeCaps
from qtoric.gpauli import PauliWord, commutation_phase, word_product, x_op, z_op
from qtoric.lattice import EdgePath, OrientedLattice, build_torus


def theoretical_gap(d: int) -> float:
    """First excitation energy 2(1 - cos 2 pi / d); 4 for qubits, 3 for qutrits."""
    if d < 2:
        raise ValueError("d must be >= 2")
    return 2.0 * (1.0 - np.cos(2.0 * np.pi / d))


def species_gap(d: int, n: int) -> float:
    """Energy 2(1 - cos 2 pi n / d) of the charge-n anyon pair."""
    return 2.0 * (1.0 - np.cos(2.0 * np.pi * n / d))


@dataclass(frozen=True)
class ChargeConfig:
    """Vertex exponents alpha_s and plaquette exponents beta_p, each in Z_d.

    Neutrality (sum alpha = sum beta = 0 mod d) follows from the global
    constraints prod_s A_s = prod_p B_p = 1.
    """

    d: int
    alpha: tuple[int, ...]
    beta: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "alpha", tuple(a % self.d for a in self.alpha))
        object.__setattr__(self, "beta", tuple(b % self.d for b in self.beta))

    def is_neutral(self) -> bool:
        return sum(self.alpha) % self.d == 0 and sum(self.beta) % self.d == 0


def trivial_config(d: int, k: int) -> ChargeConfig:
    return ChargeConfig(d, (0,) * (k * k), (0,) * (k * k))


class CodeInstance:
    """A qudit toric code: lattice, stabilizer words, and a logical x-loop."""

    def __init__(self, d: int, lat: OrientedLattice, caps: SizeCaps = DEFAULT_CAPS):
        if d < 2:
            raise ValueError("d must be >= 2")
        self.d = d
        self.lat = lat
        self.caps = caps
        self.A = [self._vertex_word(s) for s in range(lat.n_vertices)]
        self.B = [self._plaquette_word(p) for p in range(lat.n_plaquettes)]
        self.loop_x: EdgePath = lat.logical_loop("x", direction=1, offset=0)
        self.loop_z: EdgePath = lat.logical_loop("z", direction=2, offset=0)
        self._stab_cache: list | None = None

    def _stabilizer_matrices(self) -> list[sp.csr_matrix]:
        if self._stab_cache is None:
            self._stab_cache = [
                w.to_sparse(self.n_edges) for w in self.B + self.A
            ]
        return self._stab_cache

    # -- stabilizer words --------------------------------------------------

    def _vertex_word(self, s: int) -> PauliWord:
        return word_product(
            [x_op(self.d, e, sign) for e, sign in self.lat.star(s)], self.d
        )

    def _plaquette_word(self, p: int) -> PauliWord:
        return word_product(
            [z_op(self.d, e, sign) for e, sign in self.lat.boundary(p)], self.d
        )

    def vertex_operator(self, s: int) -> PauliWord:
        return self.A[s]

    def plaquette_operator(self, p: int) -> PauliWord:
        return self.B[p]

    @property
    def n_edges(self) -> int:
        return self.lat.n_edges

    @property
    def dim(self) -> int:
        return self.d**self.n_edges

    def logical_x_word(self) -> PauliWord:
        return self.loop_x.word(self.d)

    def logical_z_word(self) -> PauliWord:
        return self.loop_z.word(self.d)

    # -- energies ------------------------------------------------------------

    def site_energy(self, exponent: int) -> float:
        return -np.cos(2.0 * np.pi * (exponent % self.d) / self.d)

    def config_energy(self, c: ChargeConfig) -> float:
        if c.d != self.d:
            raise ValueError("charge config has wrong d")
        if not c.is_neutral():
            raise ValueError("charge configuration violates neutrality")
        ang = 2.0 * np.pi / self.d
        return float(
            -np.sum(np.cos(ang * np.asarray(c.alpha)))
            - np.sum(np.cos(ang * np.asarray(c.beta)))
        )

    def ground_energy(self) -> float:
        return -float(self.lat.n_vertices + self.lat.n_plaquettes)

    # -- operators on the full Hilbert space ----------------------------------

    def hamiltonian(self, sparse: bool = True):
        """H = -1/2 sum (A + A^dag) - 1/2 sum (B + B^dag); real symmetric."""
        dim = self.dim
        if not sparse and dim * dim > self.caps.dense_entries:
            raise SizeCapError(
                f"dense Hamiltonian of dim {dim} exceeds the entry cap; "
                "use sparse=True or charge-sector methods"
            )
        h = sp.csr_matrix((dim, dim), dtype=complex)
        for w in self.A + self.B:
            m = w.to_sparse(self.n_edges)
            h = h - 0.5 * (m + m.conjugate().transpose())
        err = abs(h.imag).max() if h.nnz else 0.0
        if err > 1e-12:
            raise AssertionError(f"Hamiltonian not real: imag {err}")
        hr = h.real.tocsr()
        return hr if sparse else hr.toarray()

    # -- spectra ---------------------------------------------------------------

    def plaquette_syndromes(self) -> np.ndarray:
        """beta_p(n) for every computational basis state n; shape (dim, k^2).

        B_p is diagonal: B_p|n> = omega^{sum_j sign_j n_j} |n>.
        """
        d, k2 = self.d, self.lat.n_plaquettes
        dim = self.dim
        idx = np.arange(dim, dtype=np.int64)
        place = d ** np.arange(self.n_edges - 1, -1, -1, dtype=np.int64)
        digits = (idx[:, None] // place[None, :]) % d
        out = np.zeros((dim, k2), dtype=np.int64)
        for p in range(k2):
            for e, s in self.lat.boundary(p):
                out[:, p] += s * digits[:, e]
        return out % d

    def spectrum_exact(self) -> np.ndarray:
        """All eigenvalues of H via exact block diagonalization.

        B_p are diagonal in the computational basis, so H splits into blocks
        labeled by the plaquette syndrome; each block gets a dense eigh.
        """
        dim = self.dim
        if dim > 10**5:
            raise SizeCapError(f"exact diagonalization capped below dim {dim}")
        h = self.hamiltonian(sparse=True).tocsc()
        synd = self.plaquette_syndromes()
        keys = synd @ (self.d ** np.arange(self.lat.n_plaquettes, dtype=np.int64))
        evals = []
        for key in np.unique(keys):
            block_idx = np.flatnonzero(keys == key)
            hb = h[:, block_idx][block_idx, :].toarray()
            evals.append(np.linalg.eigvalsh(hb))
        return np.sort(np.concatenate(evals))

    def exact_gap(self) -> float:
        ev = self.spectrum_exact()
        e0 = ev[0]
        above = ev[ev > e0 + 1e-8]
        return float(above[0] - e0)

    def spectrum_from_charges(self) -> list[tuple[float, int]]:
        """(energy, degeneracy) pairs from neutral charge configs; each joint
        config carries the d^2 logical degeneracy."""
        d, k2 = self.d, self.lat.n_vertices
        sector = _neutral_sector_energies(d, k2)
        energies: dict[float, int] = {}
        for ea, na in sector:
            for eb, nb in sector:
                e = round(ea + eb, 12)
                energies[e] = energies.get(e, 0) + na * nb * d * d
        return sorted(energies.items())

    # -- ground space ------------------------------------------------------------

    def ground_state(self, reference: int = 0) -> np.ndarray:
        """Normalized joint +1 eigenvector of all A_s, B_p via group averaging."""
        dim = self.dim
        if dim * dim > self.caps.dense_entries:
            raise SizeCapError("ground-state construction capped; dim too large")
        v = np.zeros(dim, dtype=complex)
        v[reference] = 1.0
        for m in self._stabilizer_matrices():
            acc = v.copy()
            cur = v
            for _ in range(self.d - 1):
                cur = m @ cur
                acc += cur
            v = acc / self.d
        nrm = np.linalg.norm(v)
        if nrm < 1e-12:
            if reference + 1 >= dim:
                raise RuntimeError("projector annihilated every reference state")
            return self.ground_state(reference + 1)
        return v / nrm

    def ground_state_logical(self, reference: int = 0) -> np.ndarray:
        """Ground state projected onto the X_c = +1 logical eigenspace."""
        v = self.ground_state(reference)
        xc = self.logical_x_word().to_sparse(self.n_edges)
        acc = v.copy()
        cur = v
        for _ in range(self.d - 1):
            cur = xc @ cur
            acc += cur
        acc /= self.d
        nrm = np.linalg.norm(acc)
        if nrm < 1e-12:
            return self.ground_state_logical(reference + 1)
        return acc / nrm

    def ground_degeneracy(self) -> int:
        ev = self.spectrum_exact()
        return int(np.sum(ev < ev[0] + 1e-8))

    # -- certification ------------------------------------------------------------

    def verify_logical(self) -> dict:
        """Certify that the x-loop word is a nontrivial logical operator."""
        xc = self.logical_x_word()
        report: dict = {"commutes": True, "first_failure": None}
        for name, words in (("A", self.A), ("B", self.B)):
            for i, w in enumerate(words):
                phi = commutation_phase(xc, w)
                if phi != 0:
                    report["commutes"] = False
                    report["first_failure"] = (name, i, phi)
                    return report
        lz = self.logical_z_word()
        report["conjugate_phase"] = commutation_phase(lz, xc)
        if self.dim * self.dim <= self.caps.dense_entries:
            basis = self._ground_basis()
            m = basis.conj().T @ (xc.to_sparse(self.n_edges) @ basis)
            report["unitary_on_ground"] = bool(
                np.allclose(m @ m.conj().T, np.eye(m.shape[0]), atol=1e-9)
            )
            off = m - (np.trace(m) / m.shape[0]) * np.eye(m.shape[0])
            report["scalar_on_ground"] = bool(np.abs(off).max() < 1e-9)
        return report

    def _ground_basis(self) -> np.ndarray:
        """Orthonormal basis of the ground space (d^2 columns).

        References are |0...0> shifted along the two x-logical cycles; the
        projected vectors land in distinct eigensectors of the conjugate
        z-logicals, so they are orthogonal by construction.
        """
        d = self.d
        place = d ** np.arange(self.n_edges - 1, -1, -1, dtype=np.int64)
        loops = (self.lat.logical_loop("x", 1, 0), self.lat.logical_loop("x", 2, 0))
        cols = []
        for i in range(d):
            for j in range(d):
                digits = np.zeros(self.n_edges, dtype=np.int64)
                for e, _ in loops[0].edges:
                    digits[e] = (digits[e] + i) % d
                for e, _ in loops[1].edges:
                    digits[e] = (digits[e] + j) % d
                cols.append(self.ground_state(int(digits @ place)))
        basis = np.array(cols).T
        overlap = basis.conj().T @ basis
        if np.abs(overlap - np.eye(d * d)).max() > 1e-9:
            raise RuntimeError("logical reference states failed to span the ground space")
        return basis


def _neutral_sector_energies(d: int, sites: int) -> list[tuple[float, int]]:
    """(energy, multiplicity) over neutral Z_d charge vectors on `sites` sites."""
    from itertools import product as iproduct

    ang = 2.0 * np.pi / d
    site_e = [-np.cos(ang * a) for a in range(d)]
    acc: dict[tuple[float, int], int] = {}
    # dynamic programming over sites tracking (energy, total charge)
    table: dict[tuple[float, int], int] = {(0.0, 0): 1}
    for _ in range(sites):
        new: dict[tuple[float, int], int] = {}
        for (e, q), n in table.items():
            for a in range(d):
                key = (round(e + site_e[a], 12), (q + a) % d)
                new[key] = new.get(key, 0) + n
        table = new
    out: dict[float, int] = {}
    for (e, q), n in table.items():
        if q == 0:
            out[e] = out.get(e, 0) + n
    return sorted(out.items())


def build_code(d: int, k: int, caps: SizeCaps = DEFAULT_CAPS) -> CodeInstance:
    return CodeInstance(d, build_torus(k), caps=caps)
