"""Anyon process machinery.

Charge updates under generalized Pauli errors, the nine qutrit charge-pair
classes with their local projectors, the jump-operator catalog grouped by
Bohr frequency, process energetics, and braiding phases.

Conventions: for a z-sector error (sigma_j^z)^m the vertex whose star carries
X_j loses m units of charge and the X_j^{-1} vertex gains m (mod d); x-sector
errors act on the two adjacent plaquettes through the boundary signs the same
way.  Charge-pair labels are written (charge at the X_j / Z_j site, charge at
the inverse site).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import scipy.sparse as sp

from qtoric.code import ChargeConfig, CodeInstance
from qtoric.gpauli import PauliWord, commutation_phase, x_op, z_op

_SYM = {0: "1", 1: "w", 2: "w2"}
_PRETTY = {0: "1", 1: "ω", 2: "ω²"}


@dataclass(frozen=True)
class ProcessClass:
    """One of the nine qutrit charge-pair classes."""

    label: str  # e.g. "w2-w"
    name: str  # projector name, e.g. "-(1)"
    bohr_group: str  # "+", "0" or "-": the table's row grouping
    charges: tuple[int, int]  # (alpha at X_j vertex, alpha at X_j^{-1} vertex)

    def pretty(self) -> str:
        a, b = self.charges
        return f"{_PRETTY[a]} — {_PRETTY[b]}"


def _mk(a: int, b: int, name: str) -> ProcessClass:
    return ProcessClass(f"{_SYM[a]}-{_SYM[b]}", name, name[0], (a, b))


QUTRIT_CLASSES: dict[tuple[int, int], ProcessClass] = {
    (0, 0): _mk(0, 0, "++"),
    (1, 0): _mk(1, 0, "+(1)"),
    (0, 1): _mk(0, 1, "+(2)"),
    (2, 0): _mk(2, 0, "0(1)"),
    (0, 2): _mk(0, 2, "0(2)"),
    (1, 1): _mk(1, 1, "0(3)"),
    (2, 1): _mk(2, 1, "-(1)"),
    (1, 2): _mk(1, 2, "-(2)"),
    (2, 2): _mk(2, 2, "--"),
}

# Printed jump-operator catalog: op name -> [(power sign, projector name)],
# with power +1 meaning sigma and -1 meaning sigma^{-1}.  The a^(2)dag and
# a^0 lines are sums of their terms (required by the completeness identity).
CATALOG_TERMS: dict[str, list[tuple[int, str]]] = {
    "a1dag": [(+1, "++"), (-1, "++")],
    "a1": [(-1, "-(1)"), (+1, "-(2)")],
    "a2dag": [(-1, "+(1)"), (+1, "+(2)"), (+1, "0(1)"), (-1, "0(2)")],
    "a2": [(-1, "0(3)"), (+1, "0(3)"), (+1, "--"), (-1, "--")],
    "a0": [
        (+1, "+(1)"),
        (-1, "+(2)"),
        (+1, "0(2)"),
        (-1, "0(1)"),
        (+1, "-(1)"),
        (-1, "-(2)"),
    ],
}

# energy transferred to the system by each op class (d = 3)
CATALOG_ENERGY: dict[str, Fraction] = {
    "a1dag": Fraction(3),
    "a1": Fraction(-3),
    "a2dag": Fraction(3, 2),
    "a2": Fraction(-3, 2),
    "a0": Fraction(0),
}

KIND_BY_OP = {
    "a1dag": "create",
    "a1": "annihilate",
    "a2dag": "fuse_split",
    "a2": "fuse_split",
    "a0": "move",
}

_NAME_TO_CHARGES = {pc.name: pc.charges for pc in QUTRIT_CLASSES.values()}


# -- charge kinematics ------------------------------------------------------


def error_word(d: int, edge: int, power: int, sector: str) -> PauliWord:
    if power % d == 0:
        raise ValueError("error power must be nonzero mod d")
    if sector == "z":
        return z_op(d, edge, power)
    if sector == "x":
        return x_op(d, edge, power)
    raise ValueError("sector must be 'x' or 'z'")


def edge_sites(ci: CodeInstance, edge: int, sector: str) -> tuple[int, int]:
    """(site losing m, site gaining m) for an error of power m on this edge."""
    if sector == "z":
        v_plus, v_minus = ci.lat.edge_vertices[edge]
        return int(v_plus), int(v_minus)
    p_plus, p_minus = ci.lat.edge_plaquettes[edge]
    return int(p_minus), int(p_plus)


def apply_error(
    ci: CodeInstance, c: ChargeConfig, edge: int, power: int, sector: str
) -> tuple[ChargeConfig, int]:
    """New charge configuration and the loop phase exponent.

    The returned exponent gamma satisfies E X_c E^{-1} = omega^gamma X_c for
    the error word E; it is m * (crossing sign) for z-sector errors on loop
    edges and 0 otherwise, computed from the commutation phase rather than a
    hand-coded sign table.
    """
    d = ci.d
    m = power % d
    if m == 0:
        raise ValueError("error power must be nonzero mod d")
    if not c.is_neutral():
        raise ValueError("charge configuration violates neutrality")
    lose, gain = edge_sites(ci, edge, sector)
    if sector == "z":
        alpha = list(c.alpha)
        alpha[lose] = (alpha[lose] - m) % d
        alpha[gain] = (alpha[gain] + m) % d
        new = ChargeConfig(d, tuple(alpha), c.beta)
    else:
        beta = list(c.beta)
        beta[lose] = (beta[lose] - m) % d
        beta[gain] = (beta[gain] + m) % d
        new = ChargeConfig(d, c.alpha, tuple(beta))
    gamma = commutation_phase(error_word(d, edge, m, sector), ci.logical_x_word())
    return new, gamma


def process_energy(
    ci: CodeInstance, c: ChargeConfig, edge: int, power: int, sector: str
) -> float:
    after, _ = apply_error(ci, c, edge, power, sector)
    return ci.config_energy(after) - ci.config_energy(c)


def local_charges(
    ci: CodeInstance, c: ChargeConfig, edge: int, sector: str
) -> tuple[int, int]:
    lose, gain = edge_sites(ci, edge, sector)
    if sector == "z":
        return c.alpha[lose], c.alpha[gain]
    return c.beta[lose], c.beta[gain]


def classify(ci: CodeInstance, c: ChargeConfig, edge: int, sector: str = "z") -> ProcessClass:
    """Charge-pair class of the two stabilizers adjacent to `edge` (d = 3)."""
    if ci.d != 3:
        raise ValueError(
            "the nine-class table is qutrit specific; use process_energy for general d"
        )
    return QUTRIT_CLASSES[local_charges(ci, c, edge, sector)]


def catalog_op_for(power: int, pclass: ProcessClass) -> str:
    """Name of the printed catalog op containing the (power, class) term."""
    s = +1 if power % 3 == 1 else -1
    for op, terms in CATALOG_TERMS.items():
        if (s, pclass.name) in terms:
            return op
    raise KeyError((power, pclass.name))


# -- projectors and jump operators ---------------------------------------------


def charge_pair_projector(
    ci: CodeInstance, edge: int, sector: str, charges: tuple[int, int]
) -> sp.csr_matrix:
    """Spectral projector onto the joint eigenspace with the given exponents
    at the two stabilizers adjacent to `edge` (character averaging)."""
    d = ci.d
    lose, gain = edge_sites(ci, edge, sector)
    words = ci.A if sector == "z" else ci.B
    omega = np.exp(2j * np.pi / d)
    dim = ci.dim
    out = sp.identity(dim, dtype=complex, format="csr")
    for site, a in ((lose, charges[0]), (gain, charges[1])):
        w = words[site].to_sparse(ci.n_edges)
        acc = sp.identity(dim, dtype=complex, format="csr")
        cur = sp.identity(dim, dtype=complex, format="csr")
        for m in range(1, d):
            cur = (cur @ w).tocsr()
            acc = acc + omega ** (-m * a) * cur
        out = (out @ (acc / d)).tocsr()
    return out


def projector_matrix(ci: CodeInstance, label: str, edge: int, sector: str = "z") -> sp.csr_matrix:
    """The qutrit table projector for a label like 'w2-w' or a name like '-(1)'."""
    if ci.d != 3:
        raise ValueError("the nine-label table is qutrit specific")
    if label in _NAME_TO_CHARGES:
        charges = _NAME_TO_CHARGES[label]
    else:
        by_label = {pc.label: pc.charges for pc in QUTRIT_CLASSES.values()}
        charges = by_label[label]
    return charge_pair_projector(ci, edge, sector, charges)


@dataclass(frozen=True)
class JumpTerm:
    power: int  # exponent of the Pauli factor, in 1..d-1
    pclass: ProcessClass
    pauli_factor: PauliWord


@dataclass
class JumpOperator:
    """A Bohr-frequency component S(omega) of sigma + sigma^{-1} on one edge.

    Satisfies [H, S] = -bohr * S; the `terms` are the (power, charge-pair)
    pieces sigma^m P_{(a,b)} summed into the operator.
    """

    name: str
    edge: int
    sector: str
    bohr: float
    kind: str
    terms: tuple[JumpTerm, ...]
    matrix: sp.csr_matrix


def _qubit_classes(ci: CodeInstance) -> dict[tuple[int, int], str]:
    return {(0, 0): "adag", (1, 1): "a", (1, 0): "a0", (0, 1): "a0"}


def jump_catalog(ci: CodeInstance, edge: int, sector: str = "z") -> list[JumpOperator]:
    """Closed-form jump operators for d in {2, 3}, grouped by Bohr frequency.

    d = 2: {a, a^dag, a^0} with projectors P^+- = (1 -+ A_s)(1 -+ A_s')/4 and
    P^0 = (1 - A_s A_s')/2.  d = 3: {a^(1), a^(1)dag, a^(2), a^(2)dag, a^0}.
    The x-sector catalog replaces vertex charges by plaquette charges.
    """
    d = ci.d
    if d not in (2, 3):
        raise ValueError("closed-form catalogs exist for d in {2, 3}; see qtoric.davies")
    groups: dict[str, list[JumpTerm]] = {}
    for m in range(1, d):
        for a in range(d):
            for b in range(d):
                de = (
                    ci.site_energy(a - m)
                    + ci.site_energy(b + m)
                    - ci.site_energy(a)
                    - ci.site_energy(b)
                )
                if d == 2:
                    op = _qubit_classes(ci)[(a, b)]
                    pc = ProcessClass(
                        f"{_SYM[a]}-{_SYM[b]}".replace("w2", "w"), "qubit", "", (a, b)
                    )
                else:
                    pc = QUTRIT_CLASSES[(a, b)]
                    op = catalog_op_for(m, pc)
                word = error_word(d, edge, m, sector)
                groups.setdefault(op, []).append(JumpTerm(m, pc, word))
    out = []
    kind_d2 = {"adag": "create", "a": "annihilate", "a0": "move"}
    for op, terms in groups.items():
        mat = sp.csr_matrix((ci.dim, ci.dim), dtype=complex)
        bohrs = set()
        for t in terms:
            proj = charge_pair_projector(ci, edge, sector, t.pclass.charges)
            mat = mat + t.pauli_factor.to_sparse(ci.n_edges) @ proj
            a, b = t.pclass.charges
            de = (
                ci.site_energy(a - t.power)
                + ci.site_energy(b + t.power)
                - ci.site_energy(a)
                - ci.site_energy(b)
            )
            bohrs.add(round(-de, 9))
        assert len(bohrs) == 1, f"mixed Bohr frequencies in {op}: {bohrs}"
        kind = kind_d2[op] if d == 2 else KIND_BY_OP[op]
        out.append(
            JumpOperator(
                name=op,
                edge=edge,
                sector=sector,
                bohr=float(bohrs.pop()),
                kind=kind,
                terms=tuple(terms),
                matrix=mat.tocsr(),
            )
        )
    order = {"a0": 0, "a": 1, "adag": 2, "a1": 1, "a1dag": 2, "a2": 3, "a2dag": 4}
    out.sort(key=lambda j: order[j.name])
    return out


# -- braiding ------------------------------------------------------------------


def braiding_phase(moving: str, around: str, orientation: str = "ccw", d: int = 3) -> int:
    """Phase exponent acquired by transporting one anyon type around the other.

    Computed as the commutation phase of the closed transport loop word (a
    star word for x-type transport, a boundary word for z-type) with the
    string whose endpoint charge is encircled.
    """
    if moving == around:
        raise ValueError("braiding same-sector loops is trivial")
    if orientation not in ("ccw", "cw"):
        raise ValueError("orientation must be 'ccw' or 'cw'")
    from qtoric.code import build_code

    ci = build_code(d, 3)
    j = ci.lat.vertical_edge(0, 0)
    if moving == "x" and around == "z":
        string = z_op(d, j, 1)
        site = int(ci.lat.edge_vertices[j, 0])  # the omega^{-1}-charged endpoint
        loop = ci.A[site]
    elif moving == "z" and around == "x":
        string = x_op(d, j, 1)
        site = int(ci.lat.edge_plaquettes[j, 0])
        loop = ci.B[site]
    else:
        raise ValueError("sectors must be 'x' and 'z'")
    if orientation == "cw":
        loop = loop.dagger()
    return commutation_phase(loop, string)


def class_table(ci: CodeInstance) -> list[dict]:
    """The nine-class table with per-power energies and catalog membership."""
    if ci.d != 3:
        raise ValueError("qutrit table only")
    rows = []
    for (a, b), pc in sorted(QUTRIT_CLASSES.items(), key=lambda kv: kv[1].name):
        entry = {
            "label": pc.label,
            "pretty": pc.pretty(),
            "name": pc.name,
            "group": pc.bohr_group,
            "charges": [a, b],
        }
        for m in (1, 2):
            de = (
                ci.site_energy(a - m)
                + ci.site_energy(b + m)
                - ci.site_energy(a)
                - ci.site_energy(b)
            )
            entry[f"dE_power{m}"] = round(de, 12)
            entry[f"op_power{m}"] = catalog_op_for(m, pc)
        rows.append(entry)
    return rows
