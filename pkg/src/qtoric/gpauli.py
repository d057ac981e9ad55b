"""Generalized Pauli algebra over Z_d.

Words are phase-tracked products omega^n * prod_j X_j^{a_j} Z_j^{b_j} with
omega = exp(2*pi*i/d), X the cyclic shift and Z the clock matrix.  The normal
order is X before Z on every edge; commuting a Z past an X on the same edge
contributes b*a to the phase exponent (ZX = omega XZ).

Exponent maps are sparse (stabilizers touch 4 edges each).  Dense/sparse
matrix realizations use row-major tensor ordering with edge 0 as the most
significant digit, so serialized matrices are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np
import scipy.sparse as sp

from qtoric.config import DEFAULT_CAPS, SizeCapError


def _clean(d: int, pows: Mapping[int, int]) -> dict[int, int]:
    out = {}
    for j, a in pows.items():
        a %= d
        if a:
            out[int(j)] = int(a)
    return out


@dataclass(frozen=True)
class PauliWord:
    """omega^phase * prod_j X_j^{xpow[j]} Z_j^{zpow[j]}, exponents mod d."""

    d: int
    phase: int = 0
    xpow: dict[int, int] = field(default_factory=dict)
    zpow: dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        if self.d < 2:
            raise ValueError("level count d must be >= 2")
        object.__setattr__(self, "phase", self.phase % self.d)
        object.__setattr__(self, "xpow", _clean(self.d, self.xpow))
        object.__setattr__(self, "zpow", _clean(self.d, self.zpow))

    # -- algebra ---------------------------------------------------------

    def __mul__(self, other: "PauliWord") -> "PauliWord":
        return word_mul(self, other)

    def dagger(self) -> "PauliWord":
        d = self.d
        phase = -self.phase + sum(
            self.xpow.get(j, 0) * b for j, b in self.zpow.items()
        )
        return PauliWord(
            d,
            phase,
            {j: -a for j, a in self.xpow.items()},
            {j: -b for j, b in self.zpow.items()},
        )

    inverse = dagger  # words are unitary

    def __pow__(self, n: int) -> "PauliWord":
        n %= self.d  # X^d = Z^d = 1 and all phases are d-th roots
        out = identity(self.d)
        for _ in range(n):
            out = out * self
        return out

    def is_identity(self) -> bool:
        return not self.xpow and not self.zpow and self.phase == 0

    def support(self) -> set[int]:
        return set(self.xpow) | set(self.zpow)

    # -- realization -----------------------------------------------------

    def to_sparse(self, edges: int) -> sp.csr_matrix:
        """Generalized-permutation matrix on (C^d)^{edges}."""
        d = self.d
        for j in self.support():
            if not 0 <= j < edges:
                raise ValueError(f"edge {j} out of range for {edges} edges")
        dim = d**edges
        cols = np.arange(dim, dtype=np.int64)
        place = d ** np.arange(edges - 1, -1, -1, dtype=np.int64)  # edge 0 MSD
        rows = cols.copy()
        theta = np.full(dim, self.phase, dtype=np.int64)
        for j, b in self.zpow.items():
            theta += b * ((cols // place[j]) % d)
        for j, a in self.xpow.items():
            nj = (cols // place[j]) % d
            rows += (((nj + a) % d) - nj) * place[j]
        omega = np.exp(2j * np.pi / d)
        vals = omega ** (theta % d)
        return sp.csr_matrix((vals, (rows, cols)), shape=(dim, dim))

    def to_dense(self, edges: int, caps=DEFAULT_CAPS) -> np.ndarray:
        dim = self.d**edges
        if dim * dim > caps.dense_entries:
            raise SizeCapError(
                f"dense realization has {dim}^2 entries > cap {caps.dense_entries}; "
                "use to_sparse or charge-sector methods"
            )
        return self.to_sparse(edges).toarray()


def identity(d: int) -> PauliWord:
    return PauliWord(d)


def x_op(d: int, edge: int, power: int = 1) -> PauliWord:
    return PauliWord(d, 0, {edge: power}, {})


def z_op(d: int, edge: int, power: int = 1) -> PauliWord:
    return PauliWord(d, 0, {}, {edge: power})


def word_mul(p: PauliWord, q: PauliWord) -> PauliWord:
    """Normal-ordered product p*q."""
    if p.d != q.d:
        raise ValueError(f"mismatched qudit dimensions: {p.d} != {q.d}")
    d = p.d
    phase = p.phase + q.phase
    for j, b in p.zpow.items():  # move p's Z past q's X
        phase += b * q.xpow.get(j, 0)
    xpow = dict(p.xpow)
    for j, a in q.xpow.items():
        xpow[j] = xpow.get(j, 0) + a
    zpow = dict(p.zpow)
    for j, b in q.zpow.items():
        zpow[j] = zpow.get(j, 0) + b
    return PauliWord(d, phase, xpow, zpow)


def word_product(words: Iterable[PauliWord], d: int | None = None) -> PauliWord:
    words = list(words)
    if not words:
        if d is None:
            raise ValueError("need d for an empty product")
        return identity(d)
    out = words[0]
    for w in words[1:]:
        out = out * w
    return out


def commutation_phase(p: PauliWord, q: PauliWord) -> int:
    """Exponent phi with p*q = omega^phi q*p, bilinear in the exponents."""
    if p.d != q.d:
        raise ValueError(f"mismatched qudit dimensions: {p.d} != {q.d}")
    phi = 0
    for j, b in p.zpow.items():
        phi += b * q.xpow.get(j, 0)
    for j, a in p.xpow.items():
        phi -= a * q.zpow.get(j, 0)
    return phi % p.d


def commutes(p: PauliWord, q: PauliWord) -> bool:
    return commutation_phase(p, q) == 0


def dense_matrix(p: PauliWord, edges: int, caps=DEFAULT_CAPS) -> np.ndarray:
    return p.to_dense(edges, caps=caps)


# -- representation-theoretic checks -------------------------------------


def single_site_xz(d: int) -> tuple[np.ndarray, np.ndarray]:
    """The d x d shift and clock matrices."""
    x = np.zeros((d, d), dtype=complex)
    for n in range(d):
        x[(n + 1) % d, n] = 1.0
    z = np.diag(np.exp(2j * np.pi * np.arange(d) / d))
    return x, z


def character_inner_product(d: int) -> float:
    """(chi, chi) over the d^3 group elements omega^n X^m Z^k of one site.

    Equals 1 exactly when the computational representation is irreducible.
    """
    if d < 2:
        raise ValueError("d must be >= 2")
    x, z = single_site_xz(d)
    omega = np.exp(2j * np.pi / d)
    total = 0.0
    xm = np.eye(d, dtype=complex)
    for _m in range(d):
        mk = xm.copy()
        for _k in range(d):
            tr = np.trace(mk)
            # the omega^n prefactor only rotates the character's phase
            total += d * abs(tr) ** 2
            mk = mk @ z
        xm = xm @ x
    return float(total / d**3)


def commutant_dimension(generators: list[np.ndarray]) -> int:
    """Dimension of {A : [G_i, A] = 0 for all i}, by nullspace of the
    stacked linear maps A -> [G_i, A]."""
    if not generators:
        raise ValueError("need at least one generator")
    dim = generators[0].shape[0]
    for g in generators:
        if g.shape != (dim, dim):
            raise ValueError("generators must be square matrices of equal size")
    eye = np.eye(dim)
    blocks = [np.kron(g, eye) - np.kron(eye, g.T) for g in generators]
    m = np.vstack(blocks)
    s = np.linalg.svd(m, compute_uv=False)
    tol = max(m.shape) * np.finfo(float).eps * (s[0] if len(s) else 1.0)
    rank = int(np.sum(s > tol))
    return dim * dim - rank
