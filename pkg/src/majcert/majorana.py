"""Ideal Majorana operators, fermion parities and the protocol's context table.

The Jordan-Wigner images use qubit 1 as the leftmost tensor factor and the
convention ``γ_{2m-1} = Z…Z X_m``, ``γ_{2m} = Z…Z Y_m``. Spin up is the
computational state ``|0⟩``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations

import numpy as np

from .exceptions import BadOrdering, BadSector, IndexOutOfRange
from .linalg import I2, X, Y, Z, comm, kron, opnorm, pauli

N_MODES = 6

#: Six protocol operators arranged as in the 2x3 table: rows then columns.
TABLE = (("12", "34", "56"), ("45", "16", "23"))
EDGES = ("12", "34", "56", "45", "16", "23")
CONTEXTS = {
    "R1": ("12", "34", "56"),
    "R2": ("45", "16", "23"),
    "C1": ("12", "45"),
    "C2": ("34", "16"),
    "C3": ("56", "23"),
}
CONTEXT_LABELS = tuple(CONTEXTS)
#: Ideal value of the product of each context's operators.
IDEAL_SIGNS = {"R1": 1, "R2": 1, "C1": 1, "C2": 1, "C3": -1}
#: Logical two-qubit Paulis realized by the protocol parities in the even sector.
IDEAL_LOGICAL = {"12": "ZI", "34": "IX", "56": "ZX", "45": "IZ", "16": "XI", "23": "XZ"}
COLUMN_OF = {e: c for c in ("C1", "C2", "C3") for e in CONTEXTS[c]}


def _check_mode(j, n_modes):
    if not isinstance(j, (int, np.integer)) or not 1 <= j <= n_modes:
        raise IndexOutOfRange(f"Majorana index must be in 1..{n_modes}, got {j!r}")


@lru_cache(maxsize=None)
def _gamma(j: int, n_modes: int) -> np.ndarray:
    n_qubits = (n_modes + 1) // 2
    m = (j + 1) // 2
    local = X if j % 2 else Y
    factors = [Z] * (m - 1) + [local] + [I2] * (n_qubits - m)
    g = kron(*factors)
    g.setflags(write=False)
    return g


def gamma(j: int, n_modes: int = N_MODES) -> np.ndarray:
    """Jordan-Wigner image of Majorana operator ``γ_j`` on ``⌈n_modes/2⌉`` qubits."""
    _check_mode(j, n_modes)
    return _gamma(int(j), int(n_modes)).copy()


def edge_label(j: int, k: int) -> str:
    return f"{j}{k}"


def parse_edge(label) -> tuple[int, int]:
    s = str(label)
    if len(s) != 2 or not s.isdigit():
        raise IndexOutOfRange(f"bad edge label {label!r}")
    return int(s[0]), int(s[1])


def adjacent(r: str, s: str) -> bool:
    """True when edges ``r`` and ``s`` of K6 share exactly one vertex."""
    return len(set(parse_edge(r)) & set(parse_edge(s))) == 1


@dataclass(frozen=True)
class ParityOp:
    j: int
    k: int
    matrix: np.ndarray = field(repr=False, compare=False)

    @property
    def label(self) -> str:
        return edge_label(self.j, self.k)


def parity(j: int, k: int, n_modes: int = N_MODES) -> ParityOp:
    """Fermion parity ``P_jk = i γ_j γ_k``."""
    _check_mode(j, n_modes)
    _check_mode(k, n_modes)
    if not j < k:
        raise BadOrdering(f"parity requires j < k, got ({j}, {k})")
    return ParityOp(j, k, 1j * _gamma(j, n_modes) @ _gamma(k, n_modes))


def total_parity() -> np.ndarray:
    """Total parity ``𝒫 = -i γ1 γ2 … γ6`` (equal to ``-Z⊗Z⊗Z`` here)."""
    prod = np.eye(8, dtype=complex)
    for j in range(1, N_MODES + 1):
        prod = prod @ _gamma(j, N_MODES)
    return -1j * prod


@dataclass(frozen=True)
class Context:
    """A set of mutually commuting parity observables."""

    label: str
    members: tuple[str, ...]

    def __contains__(self, edge):
        return edge in self.members

    def __len__(self):
        return len(self.members)


def perfect_matchings(vertices=tuple(range(1, N_MODES + 1))):
    """All perfect matchings of the complete graph on ``vertices``."""
    vertices = tuple(vertices)
    if not vertices:
        yield ()
        return
    first, rest = vertices[0], vertices[1:]
    for i, partner in enumerate(rest):
        remaining = rest[:i] + rest[i + 1:]
        for m in perfect_matchings(remaining):
            yield ((first, partner),) + m


def enumerate_contexts(verify: bool = True) -> list[Context]:
    """The fifteen maximal commuting sets of parities, i.e. perfect matchings of K6.

    Ids are ``M01``…``M15`` in lexicographic order of the sorted edge lists.
    """
    matchings = sorted(tuple(sorted(m)) for m in perfect_matchings())
    out = []
    for n, m in enumerate(matchings, start=1):
        members = tuple(edge_label(j, k) for j, k in m)
        if verify:
            mats = [parity(j, k).matrix for j, k in m]
            for a, b in combinations(mats, 2):
                assert opnorm(comm(a, b)) <= 1e-12
        out.append(Context(f"M{n:02d}", members))
    return out


@dataclass(frozen=True)
class ProtocolTable:
    """The 2x3 arrangement of the six measured parities and its five contexts."""

    rows: tuple[tuple[str, ...], ...] = TABLE
    contexts: dict = field(default_factory=lambda: dict(CONTEXTS))
    ideal_signs: dict = field(default_factory=lambda: dict(IDEAL_SIGNS))

    @property
    def columns(self) -> tuple[tuple[str, ...], ...]:
        return tuple(zip(*self.rows))

    @property
    def edges(self) -> tuple[str, ...]:
        return EDGES

    def context(self, label: str) -> Context:
        return Context(label, self.contexts[label])

    def adjacency(self, r: str, s: str) -> bool:
        return adjacent(r, s)

    def adjacent_pairs(self) -> list[tuple[str, str]]:
        return [(r, s) for r, s in combinations(EDGES, 2) if adjacent(r, s)]

    def commuting_pairs(self) -> list[tuple[str, str]]:
        return [(r, s) for r, s in combinations(EDGES, 2) if not adjacent(r, s)]


def protocol_table() -> ProtocolTable:
    return ProtocolTable()


def protocol_operators(n_modes: int = N_MODES) -> dict[str, np.ndarray]:
    """Physical 2^(n/2)-dimensional matrices of the six protocol parities."""
    return {e: parity(*parse_edge(e), n_modes=n_modes).matrix for e in EDGES}


def logical_operators() -> dict[str, np.ndarray]:
    """The six ideal logical two-qubit Paulis (ZI, IX, ZX, IZ, XI, XZ)."""
    return {e: pauli(p) for e, p in IDEAL_LOGICAL.items()}


@dataclass(frozen=True)
class LogicalEncoding:
    sector: int
    isometry: np.ndarray = field(repr=False, compare=False)

    def logical(self, op: np.ndarray) -> np.ndarray:
        """Compress a physical operator onto the two-qubit logical space."""
        return self.isometry.conj().T @ op @ self.isometry


def _phys(spin1, bell):
    return np.kron(spin1, bell)


def logical_encoding(sector: int) -> LogicalEncoding:
    """Isometry from two logical qubits into one total-parity sector.

    Columns follow logical order |00⟩, |01⟩, |10⟩, |11⟩ with the physical
    three-qubit states (and explicit signs) of the standard mapping table.
    """
    if sector not in (1, -1):
        raise BadSector(f"sector must be +1 or -1, got {sector!r}")
    up = np.array([1, 0], dtype=complex)
    dn = np.array([0, 1], dtype=complex)
    s = 1 / np.sqrt(2)
    phi_p = (np.kron(up, up) + np.kron(dn, dn)) * s
    phi_m = (np.kron(up, up) - np.kron(dn, dn)) * s
    phi2_p = (np.kron(up, dn) + np.kron(dn, up)) * s
    phi2_m = (np.kron(up, dn) - np.kron(dn, up)) * s
    if sector == 1:
        cols = [_phys(dn, phi_m), -_phys(dn, phi_p), _phys(up, phi2_m), -_phys(up, phi2_p)]
    else:
        cols = [_phys(dn, phi2_m), -_phys(dn, phi2_p), -_phys(up, phi_m), _phys(up, phi_p)]
    iso = np.array(cols).T
    iso.setflags(write=False)
    return LogicalEncoding(sector, iso)
