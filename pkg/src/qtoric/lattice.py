"""Oriented k x k square lattice on the 2-torus.

Every horizontal edge points +x and every vertical edge points +y.  Edge ids
are axis*k^2 + row*k + col with axis 0 horizontal, axis 1 vertical; vertex and
plaquette ids are row*k + col.  The horizontal edge (row, col) runs from
vertex (row, col) to (row, col+1); the vertical edge (row, col) from
(row, col) to (row+1, col).  Plaquette (row, col) has vertex (row, col) at its
lower-left corner.

Star signs: +1 where the arrow leaves the vertex (use X_j), -1 where it enters
(use X_j^{-1}).  Boundary signs: +1 where the arrow agrees with the clockwise
traversal of the face (use Z_j), -1 otherwise.  With arrows up/right the left
and top edges of each face are the clockwise-agreeing ones.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from qtoric.gpauli import PauliWord

HORIZONTAL, VERTICAL = 0, 1


@dataclass(frozen=True)
class EdgePath:
    """A cycle of edges with traversal signs and its homology class."""

    edges: tuple[tuple[int, int], ...]  # (edge index, sign)
    homology_class: tuple[int, int]
    sector: str  # "x" or "z"

    @property
    def length(self) -> int:
        return len(self.edges)

    def word(self, d: int) -> PauliWord:
        """Uniform power-1 string of sigma^x or sigma^z along the cycle."""
        pows = {e: s for e, s in self.edges}
        if self.sector == "x":
            return PauliWord(d, 0, pows, {})
        return PauliWord(d, 0, {}, pows)


class OrientedLattice:
    """Incidence data of the oriented torus lattice; immutable after build."""

    def __init__(self, k: int):
        if k < 2:
            raise ValueError("k must be >= 2 (a 1x1 torus degenerates the incidence)")
        self.k = k
        self.n_vertices = k * k
        self.n_plaquettes = k * k
        self.n_edges = 2 * k * k

        # star/boundary incidence, fixed order [+x, -x, +y, -y]-ish
        self.star_edges = np.empty((self.n_vertices, 4), dtype=np.int64)
        self.star_signs = np.empty((self.n_vertices, 4), dtype=np.int64)
        self.bound_edges = np.empty((self.n_plaquettes, 4), dtype=np.int64)
        self.bound_signs = np.empty((self.n_plaquettes, 4), dtype=np.int64)
        # per edge: [vertex with sign +1, vertex with sign -1]
        self.edge_vertices = np.empty((self.n_edges, 2), dtype=np.int64)
        # per edge: [plaquette with sign +1, plaquette with sign -1]
        self.edge_plaquettes = np.empty((self.n_edges, 2), dtype=np.int64)

        k2 = k * k
        for r in range(k):
            for c in range(k):
                v = r * k + c
                h = lambda rr, cc: (rr % k) * k + (cc % k)  # horizontal edge id
                ve = lambda rr, cc: k2 + (rr % k) * k + (cc % k)  # vertical edge id
                # star: outgoing +1, incoming -1
                self.star_edges[v] = [h(r, c), h(r, c - 1), ve(r, c), ve(r - 1, c)]
                self.star_signs[v] = [1, -1, 1, -1]
                # boundary, clockwise-agreement signs: [left, top, right, bottom]
                p = v
                self.bound_edges[p] = [ve(r, c), h(r + 1, c), ve(r, c + 1), h(r, c)]
                self.bound_signs[p] = [1, 1, -1, -1]

        for v in range(self.n_vertices):
            for e, s in zip(self.star_edges[v], self.star_signs[v]):
                self.edge_vertices[e, 0 if s == 1 else 1] = v
        for p in range(self.n_plaquettes):
            for e, s in zip(self.bound_edges[p], self.bound_signs[p]):
                self.edge_plaquettes[e, 0 if s == 1 else 1] = p

    # -- queries -----------------------------------------------------------

    def star(self, vertex: int) -> list[tuple[int, int]]:
        if not 0 <= vertex < self.n_vertices:
            raise IndexError(f"vertex {vertex} out of range")
        return list(zip(self.star_edges[vertex].tolist(), self.star_signs[vertex].tolist()))

    def boundary(self, plaquette: int) -> list[tuple[int, int]]:
        if not 0 <= plaquette < self.n_plaquettes:
            raise IndexError(f"plaquette {plaquette} out of range")
        return list(
            zip(self.bound_edges[plaquette].tolist(), self.bound_signs[plaquette].tolist())
        )

    def edge_axis(self, edge: int) -> int:
        return HORIZONTAL if edge < self.k * self.k else VERTICAL

    def horizontal_edge(self, row: int, col: int) -> int:
        return (row % self.k) * self.k + (col % self.k)

    def vertical_edge(self, row: int, col: int) -> int:
        return self.k * self.k + (row % self.k) * self.k + (col % self.k)

    def vertex(self, row: int, col: int) -> int:
        return (row % self.k) * self.k + (col % self.k)

    # -- logical cycles ------------------------------------------------------

    def logical_loop(self, sector: str, direction: int = 1, offset: int = 0) -> EdgePath:
        """Straight non-contractible cycle of length k.

        x-sector loops live on the dual lattice (the placement whose uniform
        sigma^x string commutes with all stabilizers; certified by
        code.verify_logical, not assumed).  z-sector loops are direct-lattice
        cycles.  direction 1 winds around the x-axis, 2 around the y-axis.
        """
        if sector not in ("x", "z"):
            raise ValueError("sector must be 'x' or 'z'")
        if direction not in (1, 2):
            raise ValueError("direction must be 1 or 2")
        if not 0 <= offset < self.k:
            raise ValueError("offset must lie in [0, k)")
        k = self.k
        if sector == "x":
            if direction == 1:
                # row of vertical edges: dual path winding in +x
                edges = tuple((self.vertical_edge(offset, i), 1) for i in range(k))
                hom = (1, 0)
            else:
                edges = tuple((self.horizontal_edge(j, offset), 1) for j in range(k))
                hom = (0, 1)
        else:
            if direction == 1:
                # row of horizontal edges: direct cycle winding in +x
                edges = tuple((self.horizontal_edge(offset, i), 1) for i in range(k))
                hom = (1, 0)
            else:
                edges = tuple((self.vertical_edge(j, offset), 1) for j in range(k))
                hom = (0, 1)
        return EdgePath(edges=edges, homology_class=hom, sector=sector)


def build_torus(k: int) -> OrientedLattice:
    return OrientedLattice(k)
