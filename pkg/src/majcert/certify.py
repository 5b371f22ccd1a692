"""Certification engine: context deviations, exact rigidity, robust fidelity bounds.

Edge labels ``"12", "34", "56", "45", "16", "23"`` name the six measured
operators; rows ``R1 = (12, 34, 56)``, ``R2 = (45, 16, 23)`` and columns
``C1 = (12, 45)``, ``C2 = (34, 16)``, ``C3 = (56, 23)`` are the contexts.

Note on the rigidity construction: the identity used to pin down ``𝔸23``
is ``𝔸23|Ψ⟩ = 𝔸45 𝔸16 |Ψ⟩`` (row 2 of the table). Some write-ups of the
argument carry an edge label ``26`` at this step; that operator is not part
of the protocol and ``16`` is what the row identity gives.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from itertools import combinations
from typing import Optional

import numpy as np

from .exceptions import (
    CommutativityViolated,
    DimensionCollapse,
    InvalidScenario,
    NotRigid,
)
from .jordan import Y_BASIS, JordanDecomposition, jordan_quad, state_weights
from .linalg import acomm, as_cmatrix, comm, dag, eig_unitary, involution_defect, opnorm, pauli
from .majorana import (
    COLUMN_OF,
    CONTEXT_LABELS,
    CONTEXTS,
    EDGES,
    IDEAL_LOGICAL,
    IDEAL_SIGNS,
    adjacent,
)

SCENARIO_TOL = 1e-10
#: Absolute slack absorbing floating-point rounding in bound comparisons.
ROUNDING_GUARD = 1e-12
RIGIDITY_TOL = 1e-8

BELL = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
ADJACENT_PAIRS = tuple((r, s) for r, s in combinations(EDGES, 2) if adjacent(r, s))
COMMUTING_PAIRS = tuple((r, s) for r, s in combinations(EDGES, 2) if not adjacent(r, s))


def theorem_constants(eps: float) -> dict[str, float]:
    """Fidelity-loss constants: state, then columns 1, 2 and 3."""
    c3 = float((np.sqrt(2) + np.sqrt(14) + np.sqrt(44)) ** 2 / 2)
    eps = float(eps)
    return {"eps0": 14 * eps, "eps1": 0.0, "eps2": 12.5 * eps, "eps3": c3 * eps}


# --------------------------------------------------------------------------
# scenario


@dataclass(frozen=True)
class ParityScenario:
    """Six Hermitian involutions on a common space plus a unit state vector."""

    ops: dict
    psi: np.ndarray = field(repr=False)
    check: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        ops = {str(k): as_cmatrix(v, f"A{k}") for k, v in dict(self.ops).items()}
        if set(ops) != set(EDGES):
            raise InvalidScenario(f"expected operators {sorted(EDGES)}, got {sorted(ops)}")
        psi = np.asarray(self.psi, dtype=complex).ravel()
        n = psi.shape[0]
        for k, a in ops.items():
            if a.shape != (n, n):
                raise InvalidScenario(f"A{k} has shape {a.shape}, state has length {n}")
        object.__setattr__(self, "ops", {e: ops[e] for e in EDGES})
        object.__setattr__(self, "psi", psi)
        if self.check:
            self.validate()

    @property
    def dim(self) -> int:
        return self.psi.shape[0]

    def violations(self) -> dict[str, float]:
        """Largest defect of each scenario invariant."""
        out = {"norm": abs(np.linalg.norm(self.psi) - 1)}
        out["involution"] = max(involution_defect(a) for a in self.ops.values())
        out["commutation"] = max(
            opnorm(comm(self.ops[r], self.ops[s])) for r, s in COMMUTING_PAIRS
        )
        return out

    def validate(self):
        v = self.violations()
        msgs = []
        if v["norm"] > 1e-12:
            msgs.append(f"state norm off by {v['norm']:.3e}")
        if v["involution"] > SCENARIO_TOL:
            msgs.append(f"involution defect {v['involution']:.3e}")
        if v["commutation"] > SCENARIO_TOL:
            worst = max(COMMUTING_PAIRS, key=lambda p: opnorm(comm(self.ops[p[0]], self.ops[p[1]])))
            msgs.append(f"[A{worst[0]}, A{worst[1]}] norm {v['commutation']:.3e}")
        if msgs:
            raise InvalidScenario("invalid scenario: " + "; ".join(msgs))

    def product(self, context: str) -> np.ndarray:
        out = np.eye(self.dim, dtype=complex)
        for e in CONTEXTS[context]:
            out = out @ self.ops[e]
        return out

    def expectation(self, context: str) -> complex:
        return complex(np.vdot(self.psi, self.product(context) @ self.psi))

    def with_ancilla(self, ancilla_dim: int = 2, ancilla_state=None) -> ParityScenario:
        """Append an idle ancilla on which every operator acts trivially."""
        if ancilla_state is None:
            ancilla_state = np.eye(ancilla_dim, dtype=complex)[0]
        eye = np.eye(ancilla_dim)
        return ParityScenario(
            {k: np.kron(a, eye) for k, a in self.ops.items()},
            np.kron(self.psi, ancilla_state),
            check=self.check,
        )


# --------------------------------------------------------------------------
# deviations


@dataclass(frozen=True)
class ContextDeviations:
    r1: float
    r2: float
    c1: float
    c2: float
    c3: float
    raw: dict = field(default_factory=dict)
    imaginary: dict = field(default_factory=dict)

    @property
    def epsilon(self) -> float:
        return max(self.r1, self.r2, self.c1, self.c2, self.c3)

    def as_dict(self) -> dict[str, float]:
        return {"r1": self.r1, "r2": self.r2, "c1": self.c1, "c2": self.c2, "c3": self.c3}

    def __getitem__(self, context: str) -> float:
        return self.as_dict()[context.lower()]

    @classmethod
    def from_expectations(cls, values: dict, imaginary: Optional[dict] = None) -> ContextDeviations:
        """Deviations ``1 − sign·⟨∏A⟩`` from real context expectations, clamped at 0."""
        raw = {c: 1 - IDEAL_SIGNS[c] * float(values[c]) for c in CONTEXT_LABELS}
        clamped = {c.lower(): max(0.0, v) for c, v in raw.items()}
        return cls(**clamped, raw=raw, imaginary=dict(imaginary or {}))


def context_deviations(s: ParityScenario) -> ContextDeviations:
    """Shortfall of each context expectation from its ideal value.

    Imaginary parts above 1e-9 (possible only when declared-commuting
    operators fail to commute) are retained in ``imaginary``.
    """
    if not isinstance(s, ParityScenario):
        raise InvalidScenario(f"expected ParityScenario, got {type(s).__name__}")
    values, imag = {}, {}
    for c in CONTEXT_LABELS:
        e = s.expectation(c)
        values[c] = e.real
        if abs(e.imag) > 1e-9:
            imag[c] = e.imag
    return ContextDeviations.from_expectations(values, imag)


# --------------------------------------------------------------------------
# records


@dataclass(frozen=True)
class BoundRecord:
    """One inequality: ``measured ≥ bound`` (lower) or ``measured ≤ bound`` (upper)."""

    name: str
    bound: float
    measured: float
    sense: str = "upper"

    @property
    def ok(self) -> bool:
        if self.sense == "lower":
            return self.measured >= self.bound - ROUNDING_GUARD
        return self.measured <= self.bound + ROUNDING_GUARD

    @property
    def slack(self) -> float:
        return (self.measured - self.bound) if self.sense == "lower" else (self.bound - self.measured)

    def to_dict(self) -> dict:
        return {"name": self.name, "bound": float(self.bound),
                "measured": float(self.measured), "ok": bool(self.ok)}


# --------------------------------------------------------------------------
# rigidity


@dataclass(frozen=True)
class RigidityResult:
    """Outcome of the exact construction of the invariant subspace ``V``."""

    dim_v: int
    singular_values: np.ndarray = field(repr=False)
    generator_singular_values: np.ndarray = field(repr=False)
    leakage: float
    basis: np.ndarray = field(repr=False)
    ops: dict = field(repr=False)
    state: np.ndarray = field(repr=False)
    eigenpairs: tuple = ()
    anticommutators: dict = field(default_factory=dict)
    table_errors: dict = field(default_factory=dict)
    bell_fidelity: float = 0.0
    row2_identity: float = 0.0

    @property
    def table_error(self) -> float:
        return max(self.table_errors.values())

    def to_dict(self) -> dict:
        return {
            "dim_V": self.dim_v,
            "singular_values": [float(x) for x in self.singular_values[:6]],
            "leakage": float(self.leakage),
            "max_anticommutator": float(max(self.anticommutators.values())),
            "table_error": float(self.table_error),
            "bell_fidelity": float(self.bell_fidelity),
        }


def _joint_eigenbasis(u_a, u_b, tol=1e-8):
    """Simultaneous eigenvectors of two commuting unitaries with their eigenvalues."""
    pairs = []
    for alpha, va in eig_unitary(u_a, tol=tol).clusters():
        sub = dag(va) @ u_b @ va
        for beta, vb in eig_unitary(sub, tol=tol).clusters():
            for k in range(vb.shape[1]):
                pairs.append((complex(alpha), complex(beta), va @ vb[:, k]))
    return pairs


def rigidity_construct(s: ParityScenario, tol: float = RIGIDITY_TOL) -> RigidityResult:
    """Build ``V = span{Ψ, A12Ψ, A16Ψ, A12A16Ψ}`` and the ideal basis inside it.

    Raises
    ------
    NotRigid
        If ``ε > tol`` or ``V`` is not invariant under all six operators
        (leakage above ``tol``); use :func:`robustness_certify` instead.
    DimensionCollapse
        If the four generators span fewer than four dimensions.
    """
    dev = context_deviations(s)
    if dev.epsilon > tol:
        raise NotRigid(f"ε = {dev.epsilon:.3e} exceeds rigidity tolerance {tol:g}")
    A, psi = s.ops, s.psi
    gens = np.column_stack([psi, A["12"] @ psi, A["16"] @ psi, A["12"] @ A["16"] @ psi])
    u, gsv, _ = np.linalg.svd(gens, full_matrices=False)
    rank = int(np.sum(gsv > 1e-6))
    if rank < 4:
        raise DimensionCollapse(f"generators of V span only {rank} dimensions", rank=rank)
    q = u[:, :4]
    images = np.column_stack([gens] + [A[e] @ gens for e in EDGES])
    sv = np.linalg.svd(images, compute_uv=False)
    # one value per spanning vector, so "the fifth" exists even in four dimensions
    sv = np.concatenate([sv, np.zeros(images.shape[1] - sv.size)])
    proj_out = np.eye(s.dim) - q @ dag(q)
    leakage = max(opnorm(proj_out @ A[e] @ q) for e in EDGES)
    if leakage > tol:
        raise NotRigid(f"V is not invariant: leakage {leakage:.3e} exceeds {tol:g}")
    dim_v = int(np.sum(sv > tol * max(1.0, sv[0])))

    m = {e: dag(q) @ A[e] @ q for e in EDGES}
    x = dag(q) @ psi

    # eigenstates |α,β⟩ of 𝔸12𝔸16 and 𝔸34𝔸45; α, β must be ±i
    pairs = _joint_eigenbasis(m["12"] @ m["16"], m["34"] @ m["45"])
    eigenpairs = tuple((a, b) for a, b, _ in pairs)

    # canonical basis: |00⟩ is the joint +1 eigenvector of 𝔸12, 𝔸45
    proj = (np.eye(4) + m["12"]) @ (np.eye(4) + m["45"]) / 4
    w, v = np.linalg.eigh((proj + dag(proj)) / 2)
    v00 = v[:, -1]
    b = np.column_stack([v00, m["34"] @ v00, m["16"] @ v00, m["16"] @ m["34"] @ v00])
    b = b @ np.linalg.inv(np.linalg.cholesky(dag(b) @ b)).conj().T  # re-orthonormalize
    coords = dag(b) @ x
    phase = np.exp(1j * np.angle(coords[0])) if abs(coords[0]) > 0 else 1.0
    b = b * phase
    coords = coords / phase
    ops = {e: dag(b) @ m[e] @ b for e in EDGES}
    table_errors = {e: opnorm(ops[e] - pauli(IDEAL_LOGICAL[e])) for e in EDGES}
    anti = {(r, t): opnorm(acomm(m[r], m[t])) for r, t in ADJACENT_PAIRS}
    return RigidityResult(
        dim_v=dim_v,
        singular_values=sv,
        generator_singular_values=gsv,
        leakage=leakage,
        basis=q @ b,
        ops=ops,
        state=coords,
        eigenpairs=eigenpairs,
        anticommutators=anti,
        table_errors=table_errors,
        bell_fidelity=float(abs(np.vdot(BELL, coords)) ** 2),
        row2_identity=float(np.linalg.norm(m["23"] @ x - m["45"] @ m["16"] @ x)),
    )


# --------------------------------------------------------------------------
# robustness


@dataclass(frozen=True)
class IdealModel:
    """Ideal subspace, state and operators built from a Jordan decomposition.

    ``vhat_basis`` has orthonormal columns ``|ab⟩ = Σ_l √p_l |ab_l⟩`` in the
    (extended) space; ``ahat`` holds the logical 4x4 Paulis in that basis.
    """

    vhat_basis: np.ndarray = field(repr=False)
    psi_hat: np.ndarray = field(repr=False)
    ahat: dict = field(repr=False)
    decomposition: JordanDecomposition = field(repr=False)

    @property
    def psi_hat_coords(self) -> np.ndarray:
        return BELL.copy()

    def lift(self, logical_vec) -> np.ndarray:
        return self.vhat_basis @ logical_vec


def extended_operators(s: ParityScenario, decomp: JordanDecomposition) -> dict:
    """The six operators on the Jordan-extended space.

    The four decomposed operators keep their canonical action on extension
    vectors; ``A56`` and ``A23`` act as the identity there.
    """
    out = {name: decomp.operator(name) for name in ("12", "16", "34", "45")}
    pad = decomp.ext_dim - decomp.dim
    for name in ("56", "23"):
        ext = decomp.extend_operator(s.ops[name])
        if pad:
            ext[decomp.dim:, decomp.dim:] = np.eye(pad)
        out[name] = ext
    return out


def _schmidt_blocks(decomp: JordanDecomposition, psi) -> JordanDecomposition:
    """Fix the split of degenerate block families by the state's Schmidt basis.

    Blocks with identical angles and padding span ``C^4 ⊗ C^k``, where the
    operators act trivially on the multiplicity factor ``C^k``; any basis of
    that factor is an equally valid Jordan decomposition. Using the
    eigenbasis of the state's reduced matrix on ``C^k`` makes the result
    independent of how the input space is presented (e.g. idle ancillas).
    """
    ext = decomp.extend_vector(psi)
    groups: dict = {}
    for i, b in enumerate(decomp.blocks):
        groups.setdefault((b.theta, b.phi, b.padded), []).append(i)
    blocks = list(decomp.blocks)
    for idx in groups.values():
        if len(idx) < 2:
            continue
        bases = [decomp.blocks[i].basis for i in idx]
        c = np.column_stack([dag(bb) @ ext for bb in bases])  # 4 x k
        rho = c.T @ c.conj()
        w, u = np.linalg.eigh((rho + dag(rho)) / 2)
        u = u[:, ::-1]
        for new, i in enumerate(idx):
            basis = sum(u[l, new] * bases[l] for l in range(len(idx)))
            blocks[i] = replace(decomp.blocks[i], basis=basis)
    return replace(decomp, blocks=tuple(blocks))


def build_ideal_model(s: ParityScenario, decomp: Optional[JordanDecomposition] = None) -> IdealModel:
    """Jordan-decompose, weight by the state and fix block phases so ``⟨Ψ̂_l|Ψ_l⟩ ≥ 0``."""
    if decomp is None:
        decomp = jordan_quad(s.ops["12"], s.ops["16"], s.ops["34"], s.ops["45"])
    decomp = state_weights(_schmidt_blocks(decomp, s.psi), s.psi)
    blocks = []
    for b in decomp.blocks:
        overlap = (b.state[0] + b.state[3]) / np.sqrt(2)
        if b.weight > 0 and abs(overlap) > 0:
            ph = np.exp(1j * np.angle(overlap))
            b = replace(b, basis=b.basis * ph, state=b.state / ph)
        blocks.append(b)
    decomp = replace(decomp, blocks=tuple(blocks))
    vhat = sum(np.sqrt(b.weight) * b.basis for b in decomp.blocks)
    ahat = {e: pauli(IDEAL_LOGICAL[e]) for e in EDGES}
    return IdealModel(vhat, vhat @ BELL, ahat, decomp)


@dataclass
class CertificationReport:
    deviations: ContextDeviations
    state_fidelity: float
    op_fidelities: dict
    bounds: list
    diagnostics: list = field(default_factory=list)
    model: Optional[IdealModel] = field(default=None, repr=False)
    rigidity: Optional[RigidityResult] = field(default=None, repr=False)
    witness: Optional[dict] = None

    @property
    def epsilon(self) -> float:
        return self.deviations.epsilon

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.bounds) and all(r.ok for r in self.diagnostics)

    @property
    def violations(self) -> list:
        return [r for r in self.bounds + self.diagnostics if not r.ok]

    def to_dict(self) -> dict:
        out = {
            "epsilon": float(self.epsilon),
            "deviations": {k: float(v) for k, v in self.deviations.as_dict().items()},
            "state_fidelity": float(self.state_fidelity),
            "op_fidelities": {e: float(self.op_fidelities[e]) for e in EDGES},
            "bounds": [r.to_dict() for r in self.bounds],
            "diagnostics": [r.to_dict() for r in self.diagnostics],
            "theorem_constants": theorem_constants(self.epsilon),
        }
        if self.model is not None:
            d = self.model.decomposition
            out["jordan"] = {
                "theta": [float(t) for t in d.thetas],
                "phi": [float(p) for p in d.phis],
                "weights": [float(p) for p in d.weights],
                "residual": float(d.residual),
            }
        if self.deviations.imaginary:
            out["imaginary_parts"] = {k: float(v) for k, v in self.deviations.imaginary.items()}
        if self.rigidity is not None:
            out["rigidity"] = self.rigidity.to_dict()
        if self.witness is not None:
            out["witness"] = self.witness
        return out


def fidelities(s: ParityScenario, model: IdealModel) -> tuple[float, dict]:
    """``|⟨Ψ̂|Ψ⟩|²`` and ``Tr(Â_r P̂A_rP̂)/4`` for each edge."""
    decomp = model.decomposition
    psi = decomp.extend_vector(s.psi)
    f_state = float(abs(np.vdot(model.psi_hat, psi)) ** 2)
    ext = extended_operators(s, decomp)
    f_ops = {}
    for e in EDGES:
        compressed = dag(model.vhat_basis) @ ext[e] @ model.vhat_basis
        f_ops[e] = float(np.real(np.trace(model.ahat[e] @ compressed)) / 4)
    return f_state, f_ops


def robustness_certify(s: ParityScenario, diagnostics: bool = True,
                       rigidity_tol: Optional[float] = None) -> CertificationReport:
    """Run the robustness pipeline and compare every fidelity with its bound.

    Parameters
    ----------
    s : ParityScenario
    diagnostics : bool
        Also evaluate the intermediate lemma inequalities.
    rigidity_tol : float, optional
        When given and ``ε ≤ rigidity_tol`` the exact rigidity construction is
        attached to the report as well.
    """
    worst = max(COMMUTING_PAIRS, key=lambda p: opnorm(comm(s.ops[p[0]], s.ops[p[1]])))
    wnorm = opnorm(comm(s.ops[worst[0]], s.ops[worst[1]]))
    if wnorm > SCENARIO_TOL:
        raise CommutativityViolated(
            f"[A{worst[0]}, A{worst[1]}] has norm {wnorm:.3e}", pair=worst, norm=wnorm
        )
    dev = context_deviations(s)
    eps = dev.epsilon
    model = build_ideal_model(s)
    f_state, f_ops = fidelities(s, model)
    k = theorem_constants(eps)
    col_eps = {"C1": k["eps1"], "C2": k["eps2"], "C3": k["eps3"]}
    bounds = [BoundRecord("state_fidelity", 1 - k["eps0"], f_state, "lower")]
    for e in EDGES:
        col = COLUMN_OF[e]
        bounds.append(BoundRecord(f"op_fidelity_{e}_{col}", 1 - col_eps[col], f_ops[e], "lower"))
    report = CertificationReport(dev, f_state, f_ops, bounds, model=model)
    if diagnostics:
        report.diagnostics = lemma_diagnostics(s, model, dev)
    if rigidity_tol is not None and eps <= rigidity_tol:
        try:
            report.rigidity = rigidity_construct(s, rigidity_tol)
        except (NotRigid, DimensionCollapse):
            report.rigidity = None
    return report


def lemma_diagnostics(s: ParityScenario, model: IdealModel,
                      deviations: Optional[ContextDeviations] = None) -> list[BoundRecord]:
    """Measured value against bound for every intermediate inequality."""
    dev = deviations or context_deviations(s)
    eps = dev.epsilon
    r2e = np.sqrt(2 * eps)
    A, psi = s.ops, s.psi
    out = []

    for r, t in ADJACENT_PAIRS:
        v = np.linalg.norm(acomm(A[r], A[t]) @ psi)
        out.append(BoundRecord(f"anticommutator_{r}_{t}", 5 * r2e, v))

    v = np.linalg.norm(A["12"] @ A["34"] @ psi + A["16"] @ A["45"] @ psi)
    out.append(BoundRecord("degree4_norm", 3 * r2e, v))

    decomp = model.decomposition
    diag_w = anti_w = 0.0
    for b in decomp.blocks:
        if b.weight <= 0:
            continue
        c = dag(Y_BASIS) @ b.state
        diag_w += b.weight * (abs(c[0]) ** 2 + abs(c[3]) ** 2)
        anti_w += b.weight * abs(c[1] - c[2]) ** 2
    out.append(BoundRecord("y_coeff_diagonal_weight", 6.5 * eps, diag_w))
    out.append(BoundRecord("y_coeff_antisymmetric_weight", eps, anti_w))

    ext_psi = decomp.extend_vector(psi)
    a34_hat_psi_hat = model.lift(model.ahat["34"] @ model.psi_hat_coords)
    v = np.linalg.norm(a34_hat_psi_hat - decomp.operator("34") @ ext_psi)
    out.append(BoundRecord("a34_displacement", np.sqrt(44 * eps), v))

    for col in ("C1", "C2", "C3"):
        r, t = CONTEXTS[col]
        sign = -IDEAL_SIGNS[col]
        v = np.linalg.norm(A[r] @ psi + sign * (A[t] @ psi))
        out.append(BoundRecord(f"column_step_{col}", r2e, v))
    for row in ("R1", "R2"):
        members = CONTEXTS[row]
        for i, r in enumerate(members):
            t, u = [m for j, m in enumerate(members) if j != i]
            v = np.linalg.norm(A[r] @ psi - A[t] @ (A[u] @ psi))
            out.append(BoundRecord(f"row_step_{row}_{r}", r2e, v))
    return out


def compressed_relations(a, b, p) -> tuple[float, float]:
    """Norms of ``[PAP, PBP]`` and ``{PAP, PBP}`` for a projector ``p``."""
    pa, pb = p @ a @ p, p @ b @ p
    return opnorm(comm(pa, pb)), opnorm(acomm(pa, pb))


def ideal_model_checks(model: IdealModel) -> dict[str, float]:
    """Structural defects of the ideal operators and state (all zero by construction)."""
    ah = model.ahat
    out = {}
    out["anticommute"] = max(opnorm(acomm(ah[r], ah[t])) for r, t in ADJACENT_PAIRS)
    out["commute"] = max(opnorm(comm(ah[r], ah[t])) for r, t in COMMUTING_PAIRS)
    x = model.psi_hat_coords
    for col in ("C1", "C2"):
        r, t = CONTEXTS[col]
        out[f"stabilized_{col}"] = float(np.linalg.norm(ah[r] @ ah[t] @ x - x))
    out["isometry"] = opnorm(dag(model.vhat_basis) @ model.vhat_basis - np.eye(4))
    return out
