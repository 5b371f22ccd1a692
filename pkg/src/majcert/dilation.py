"""Neumark dilation of two-outcome POVMs that keeps their commutation graph.

For a POVM ``{Q0, Q1}`` on a system ``S`` the dilation unitary on ``S ⊗ E``
(``E`` a qubit ancilla, system factor outermost) is::

    U = Σ_{a,b} (-1)^{ab} √Q_{a⊕b} ⊗ |b⟩⟨a|  =  [[√Q0, √Q1], [√Q1, -√Q0]]

in ancilla blocks, and the projectors are ``Q̂_a = U† (I ⊗ |a⟩⟨a|) U``.
Several POVMs get one ancilla each, ordered by ascending label.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .exceptions import EmbeddingMismatch, NotAPovm, NotPSD
from .linalg import as_cmatrix, comm, dag, kron, opnorm

PSD_TOL = 1e-12


def sqrt_psd(m, tol: float = PSD_TOL) -> np.ndarray:
    """Positive square root of a Hermitian PSD matrix.

    Eigenvalues in ``[-tol, 0)`` are clamped to zero; anything more
    negative raises :class:`NotPSD`.
    """
    m = as_cmatrix(m)
    if opnorm(m - dag(m)) > 1e-10 * max(1.0, opnorm(m)):
        raise NotPSD("matrix is not Hermitian")
    w, v = np.linalg.eigh((m + dag(m)) / 2)
    if w.size and w.min() < -tol:
        raise NotPSD(f"smallest eigenvalue {w.min():.3e} below -{tol:g}")
    return (v * np.sqrt(np.clip(w, 0, None))) @ dag(v)


@dataclass(frozen=True)
class Povm2:
    """Two-outcome POVM ``{Q_{r,0}, Q_{r,1}}`` with label ``r``."""

    label: object
    q0: np.ndarray = field(repr=False)
    q1: np.ndarray = field(repr=False)

    def __post_init__(self):
        q0 = as_cmatrix(self.q0, "Q0")
        q1 = as_cmatrix(self.q1, "Q1")
        if q0.shape != q1.shape or q0.shape[0] != q0.shape[1]:
            raise NotAPovm(f"elements must be square and equal-shaped: {q0.shape}, {q1.shape}")
        n = q0.shape[0]
        if opnorm(q0 + q1 - np.eye(n)) > 1e-12:
            raise NotAPovm("Q0 + Q1 != I")
        for name, q in (("Q0", q0), ("Q1", q1)):
            if opnorm(q - dag(q)) > 1e-10:
                raise NotAPovm(f"{name} is not Hermitian")
            if np.linalg.eigvalsh((q + dag(q)) / 2).min() < -PSD_TOL:
                raise NotAPovm(f"{name} is not positive semidefinite")
        object.__setattr__(self, "q0", q0)
        object.__setattr__(self, "q1", q1)

    @classmethod
    def from_effect(cls, label, q0) -> Povm2:
        q0 = as_cmatrix(q0)
        return cls(label, q0, np.eye(q0.shape[0]) - q0)

    @property
    def dim(self) -> int:
        return self.q0.shape[0]

    def element(self, a: int) -> np.ndarray:
        return (self.q0, self.q1)[a]


@dataclass(frozen=True)
class DilatedMeasurement:
    """Projective extension of a :class:`Povm2` on ``S ⊗ E``."""

    label: object
    projectors: tuple[np.ndarray, np.ndarray] = field(repr=False)
    unitary: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return self.unitary.shape[0]


def _ket_bra(b, a):
    m = np.zeros((2, 2), dtype=complex)
    m[b, a] = 1
    return m


def dilation_unitary(p: Povm2) -> np.ndarray:
    roots = (sqrt_psd(p.q0), sqrt_psd(p.q1))
    return sum(
        (-1) ** (a * b) * np.kron(roots[a ^ b], _ket_bra(b, a))
        for a in (0, 1)
        for b in (0, 1)
    )


def dilate(p: Povm2) -> DilatedMeasurement:
    """Dilate one two-outcome POVM to a projective measurement on ``S ⊗ E``."""
    if not isinstance(p, Povm2):
        raise NotAPovm(f"expected Povm2, got {type(p).__name__}")
    u = dilation_unitary(p)
    n = p.dim
    projectors = tuple(
        dag(u) @ np.kron(np.eye(n), _ket_bra(a, a)) @ u for a in (0, 1)
    )
    return DilatedMeasurement(p.label, projectors, u)


def embed_operator(op, dims, targets) -> np.ndarray:
    """Place ``op`` (acting on subsystems ``targets`` in that order) into ⊗dims."""
    dims = list(dims)
    targets = list(targets)
    rest = [i for i in range(len(dims)) if i not in targets]
    d_t = int(np.prod([dims[i] for i in targets]))
    d_r = int(np.prod([dims[i] for i in rest])) if rest else 1
    op = as_cmatrix(op)
    if op.shape != (d_t, d_t):
        raise EmbeddingMismatch(f"operator shape {op.shape} does not match target dims {d_t}")
    full = np.kron(op, np.eye(d_r))
    order = targets + rest
    n = len(dims)
    shape = [dims[i] for i in order] * 2
    t = full.reshape(shape)
    inv = np.argsort(order)
    t = t.transpose(list(inv) + [n + i for i in inv])
    total = int(np.prod(dims))
    return t.reshape(total, total)


def embed_dilations(ds, system_dim: int) -> dict:
    """Embed each ``S ⊗ E_r`` measurement into ``S ⊗ E_1 ⊗ … ⊗ E_n``.

    Ancillas are ordered by ascending label. Returns ``{label: (Q̂0, Q̂1)}``.
    """
    ds = sorted(ds, key=lambda d: d.label)
    labels = [d.label for d in ds]
    if len(set(labels)) != len(labels):
        raise EmbeddingMismatch("duplicate measurement labels")
    dims = [system_dim] + [2] * len(ds)
    out = {}
    for i, d in enumerate(ds):
        if d.dim != 2 * system_dim:
            raise EmbeddingMismatch(
                f"measurement {d.label!r} has dim {d.dim}, expected {2 * system_dim}"
            )
        out[d.label] = tuple(embed_operator(q, dims, [0, i + 1]) for q in d.projectors)
    return out


@dataclass
class CommutantReport:
    """Per-pair outcome of the commutation-preservation check."""

    pairs: dict = field(default_factory=dict)
    input_norms: dict = field(default_factory=dict)
    tol: float = 1e-10

    @property
    def max_violation(self) -> float:
        vals = [v for v in self.pairs.values() if v is not None]
        return max(vals, default=0.0)

    @property
    def ok(self) -> bool:
        return self.max_violation <= self.tol

    def status(self, pair) -> str:
        v = self.pairs[pair]
        if v is None:
            return "not declared"
        return "ok" if v <= self.tol else "violated"


def check_commutant_preservation(ps, ds, graph, tol: float = 1e-10) -> CommutantReport:
    """Check ``[Q̂_{r,a}, Q̂_{s,b}] = 0`` on the joint space for declared pairs.

    ``graph`` lists label pairs declared commuting; other pairs are recorded
    as not declared and left unchecked.
    """
    ps = list(ps)
    ds = list(ds)
    if not ps:
        return CommutantReport(tol=tol)
    system_dim = ps[0].dim
    if any(p.dim != system_dim for p in ps):
        raise EmbeddingMismatch("POVMs act on different system dimensions")
    if sorted(p.label for p in ps) != sorted(d.label for d in ds):
        raise EmbeddingMismatch("POVM and dilation labels differ")
    declared = {frozenset(e) for e in graph}
    povms = {p.label: p for p in ps}
    joint = embed_dilations(ds, system_dim)
    report = CommutantReport(tol=tol)
    for r, s in combinations(sorted(joint), 2):
        key = (r, s)
        report.input_norms[key] = max(
            opnorm(comm(povms[r].element(a), povms[s].element(b)))
            for a in (0, 1)
            for b in (0, 1)
        )
        if frozenset(key) not in declared:
            report.pairs[key] = None
            continue
        report.pairs[key] = max(
            opnorm(comm(joint[r][a], joint[s][b])) for a in (0, 1) for b in (0, 1)
        )
    return report


def outcome_probability(d: DilatedMeasurement, rho, a: int) -> float:
    """``Tr(Q̂_a (ρ ⊗ |0⟩⟨0|))`` for a density matrix on the system."""
    rho = as_cmatrix(rho)
    ext = kron(rho, _ket_bra(0, 0))
    return float(np.real(np.trace(d.projectors[a] @ ext)))
