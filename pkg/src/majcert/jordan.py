"""Jordan decompositions of pairs and commuting pairs-of-pairs of involutions.

For two Hermitian involutions the space splits into invariant blocks of
dimension one or two. For a quadruple ``(A12, A16 | A34, A45)`` where each of
the first pair commutes with each of the second, the space splits into
four-dimensional blocks ``C² ⊗ C²`` on which, in the block basis
``|00⟩, |01⟩, |10⟩, |11⟩``::

    A12 = ZI      A16 = cos θ XI + sin θ ZI
    A45 = IZ      A34 = cos φ IX + sin φ IZ

with ``θ, φ ∈ [-π/2, π/2]``. Blocks that would be smaller than four
dimensions are completed with extension vectors outside the input space, on
which the operators act by their canonical form (see ``JordanDecomposition``).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .exceptions import (
    CommutativityViolated,
    MajcertError,
    NotInvolution,
    NotNormalized,
    OutsideBlock,
)
from .linalg import (
    GROUP_TOL,
    as_cmatrix,
    cluster,
    comm,
    dag,
    eig_unitary,
    involution_defect,
    opnorm,
    pauli,
    polar_isometry,
)

INVOLUTION_TOL = 1e-10
COMMUTE_TOL = 1e-10
# below this norm an off-diagonal coupling is treated as exactly zero
DEGENERATE_TOL = 1e-10

_ZI, _XI, _IZ, _IX = pauli("ZI"), pauli("XI"), pauli("IZ"), pauli("IX")
_S2 = 1 / np.sqrt(2)
_Y0 = np.array([1, 1j]) * _S2
_Y1 = np.array([1, -1j]) * _S2
#: Columns are |0_Y 0_Y⟩, |0_Y 1_Y⟩, |1_Y 0_Y⟩, |1_Y 1_Y⟩ in the block basis.
Y_BASIS = np.column_stack([np.kron(a, b) for a in (_Y0, _Y1) for b in (_Y0, _Y1)])


def canonical_forms(theta: float, phi: float) -> dict[str, np.ndarray]:
    """The four operators of one block in its own basis."""
    return {
        "12": _ZI,
        "16": np.cos(theta) * _XI + np.sin(theta) * _ZI,
        "45": _IZ,
        "34": np.cos(phi) * _IX + np.sin(phi) * _IZ,
    }


def _check_involutions(ops: dict):
    for name, a in ops.items():
        d = involution_defect(a)
        if d > INVOLUTION_TOL:
            raise NotInvolution(f"A{name} is not a Hermitian involution (defect {d:.3e})")


# --------------------------------------------------------------------------
# single pair


@dataclass(frozen=True)
class PairBlock:
    """Invariant subspace of a pair of involutions.

    ``angle`` is the argument of the eigenvalue of ``a1 a2`` on the block,
    in ``[0, π]``: 0 or π for one-dimensional blocks, π/2 for anticommuting
    action.
    """

    basis: np.ndarray = field(repr=False)
    angle: float

    @property
    def dim(self) -> int:
        return self.basis.shape[1]


def jordan_pair(a1, a2, group_tol: float = GROUP_TOL) -> list[PairBlock]:
    """Split the space into blocks of dimension ≤ 2 invariant under ``a1`` and ``a2``.

    Eigenvectors ``|α⟩`` of the unitary ``a1 a2`` are paired with ``a1|α⟩``,
    which is an eigenvector for ``ᾱ``. Real eigenvalues ``±1`` give
    one-dimensional blocks after diagonalizing ``a1`` on that eigenspace.
    """
    a1 = as_cmatrix(a1, "a1")
    a2 = as_cmatrix(a2, "a2")
    _check_involutions({"1": a1, "2": a2})
    spectrum = eig_unitary(a1 @ a2, tol=1e-8, group_tol=group_tol)
    blocks = []
    for alpha, vecs in spectrum.clusters(group_tol):
        if abs(alpha.imag) <= group_tol:
            h = dag(vecs) @ a1 @ vecs
            _, w = np.linalg.eigh((h + dag(h)) / 2)
            ang = 0.0 if alpha.real > 0 else np.pi
            blocks.extend(PairBlock(vecs @ w[:, [k]], ang) for k in range(w.shape[1]))
        elif alpha.imag > 0:
            partners = a1 @ vecs
            ang = float(np.angle(alpha))
            blocks.extend(
                PairBlock(np.column_stack([vecs[:, k], partners[:, k]]), ang)
                for k in range(vecs.shape[1])
            )
    return blocks


# --------------------------------------------------------------------------
# commuting quadruple


@dataclass(frozen=True)
class JordanBlock:
    """One four-dimensional block of the quadruple decomposition.

    ``basis`` has ``ext_dim`` rows; ``padded[i]`` marks columns that are
    extension vectors rather than vectors of the input space.
    """

    basis: np.ndarray = field(repr=False)
    theta: float
    phi: float
    padded: tuple[bool, bool, bool, bool] = (False, False, False, False)
    weight: float | None = None
    state: np.ndarray | None = field(default=None, repr=False)

    def operator(self, name: str) -> np.ndarray:
        return canonical_forms(self.theta, self.phi)[name]


@dataclass(frozen=True)
class JordanDecomposition:
    """Direct sum of :class:`JordanBlock` s over a (possibly extended) space.

    ``dim`` is the input dimension and ``ext_dim ≥ dim`` the dimension after
    appending extension vectors; coordinates ``dim..ext_dim-1`` belong to the
    extension. ``residual`` is the largest operator-norm reconstruction error
    of the four input operators.
    """

    blocks: tuple[JordanBlock, ...]
    dim: int
    ext_dim: int
    residual: float

    @property
    def weights(self) -> np.ndarray | None:
        if any(b.weight is None for b in self.blocks):
            return None
        return np.array([b.weight for b in self.blocks])

    @property
    def thetas(self) -> np.ndarray:
        return np.array([b.theta for b in self.blocks])

    @property
    def phis(self) -> np.ndarray:
        return np.array([b.phi for b in self.blocks])

    def extend_vector(self, psi) -> np.ndarray:
        psi = np.asarray(psi, dtype=complex)
        out = np.zeros(self.ext_dim, dtype=complex)
        out[: len(psi)] = psi
        return out

    def extend_operator(self, op) -> np.ndarray:
        """Embed an input-space operator, acting as zero on the extension."""
        out = np.zeros((self.ext_dim, self.ext_dim), dtype=complex)
        out[: self.dim, : self.dim] = op
        return out

    def operator(self, name: str) -> np.ndarray:
        """Reassemble one of the four operators on the extended space."""
        out = np.zeros((self.ext_dim, self.ext_dim), dtype=complex)
        for b in self.blocks:
            out += b.basis @ b.operator(name) @ dag(b.basis)
        return out


def _split(q, hermitians, tol):
    """Recursively split span(q) into joint eigenspaces of commuting Hermitians."""
    if not hermitians or q.shape[1] == 0:
        yield (), q
        return
    h = dag(q) @ hermitians[0] @ q
    w, v = np.linalg.eigh((h + dag(h)) / 2)
    for idx in cluster(w, tol):
        sub = q @ v[:, idx]
        for vals, leaf in _split(sub, hermitians[1:], tol):
            yield (float(np.mean(w[idx])),) + vals, leaf


class _Columns:
    """Collects block columns, handing out extension slots for padding."""

    def __init__(self, dim):
        self.dim = dim
        self.n_pad = 0
        self.blocks = []

    def pad(self):
        self.n_pad += 1
        return self.dim + self.n_pad - 1

    def add(self, cols, theta, phi):
        self.blocks.append((cols, theta, phi))

    def build(self):
        ext = self.dim + self.n_pad
        out = []
        for cols, theta, phi in self.blocks:
            basis = np.zeros((ext, 4), dtype=complex)
            padded = []
            for i, c in enumerate(cols):
                if isinstance(c, (int, np.integer)):
                    basis[c, i] = 1
                    padded.append(True)
                else:
                    basis[: self.dim, i] = c
                    padded.append(False)
            out.append(JordanBlock(basis, theta, phi, tuple(padded)))
        return out, ext


def _partner(x_op, target, vecs):
    """Unit-norm images ``x_op vecs`` projected into span(target), column by column."""
    if vecs.shape[1] == 0:
        return vecs
    m = dag(target) @ (x_op @ vecs)
    return target @ polar_isometry(m)


def _angle(sin_value, coupled):
    if not coupled:
        return float(np.sign(sin_value) * np.pi / 2) if sin_value != 0 else np.pi / 2
    s = float(np.clip(sin_value, -1.0, 1.0))
    return float(np.arctan2(s, np.sqrt(1 - s * s)))


def jordan_quad(a12, a16, a34, a45, group_tol: float = GROUP_TOL) -> JordanDecomposition:
    """Four-dimensional Jordan blocks of two commuting pairs of involutions.

    Parameters
    ----------
    a12, a16 : ndarray
        First pair; ``a12`` becomes ``ZI`` and ``a16`` the tilted ``XI``.
    a34, a45 : ndarray
        Second pair; ``a45`` becomes ``IZ`` and ``a34`` the tilted ``IX``.
    group_tol : float
        Cluster radius for degenerate eigenvalues.

    Raises
    ------
    NotInvolution
        If an input is not a Hermitian involution to 1e-10.
    CommutativityViolated
        If a member of the first pair fails to commute with one of the second.
    """
    ops = {k: as_cmatrix(v, f"A{k}") for k, v in
           (("12", a12), ("16", a16), ("34", a34), ("45", a45))}
    n = ops["12"].shape[0]
    if any(o.shape != (n, n) for o in ops.values()):
        raise MajcertError("operators have different shapes")
    _check_involutions(ops)
    worst, worst_pair = 0.0, None
    for p in ("12", "16"):
        for q in ("34", "45"):
            v = opnorm(comm(ops[p], ops[q]))
            if v > worst:
                worst, worst_pair = v, (p, q)
    if worst > COMMUTE_TOL:
        raise CommutativityViolated(
            f"[A{worst_pair[0]}, A{worst_pair[1]}] has norm {worst:.3e}",
            pair=worst_pair, norm=worst,
        )

    A12, A16, A34, A45 = ops["12"], ops["16"], ops["34"], ops["45"]
    s_a = (A12 @ A16 + A16 @ A12) / 2
    s_b = (A45 @ A34 + A34 @ A45) / 2
    x_a = A16 - (s_a @ A12 + A12 @ s_a) / 2
    x_b = A34 - (s_b @ A45 + A45 @ s_b) / 2

    # joint eigenspaces labelled (s, t, z1, z2)
    groups: dict[tuple[int, int], dict] = {}
    s_leaves = list(_split(np.eye(n, dtype=complex), [s_a], group_tol))
    for i, ((s,), qs) in enumerate(s_leaves):
        for j, ((t,), qt) in enumerate(_split(qs, [s_b], group_tol)):
            entry = {"s": s, "t": t, "E": {}}
            for (z1, z2), q in _split(qt, [A12, A45], group_tol):
                key = (1 if z1 > 0 else -1, 1 if z2 > 0 else -1)
                entry["E"][key] = q
            groups[(i, j)] = entry

    cols = _Columns(n)
    empty = np.zeros((n, 0), dtype=complex)
    for key in sorted(groups):
        g = groups[key]
        E = {k: g["E"].get(k, empty) for k in ((1, 1), (1, -1), (-1, 1), (-1, -1))}
        qall = np.hstack(list(E.values()))
        a_coupled = opnorm(x_a @ qall) > DEGENERATE_TOL
        b_coupled = opnorm(x_b @ qall) > DEGENERATE_TOL
        theta = _angle(g["s"], a_coupled)
        phi = _angle(g["t"], b_coupled)

        if a_coupled and b_coupled:
            if not (E[1, 1].shape[1] == E[1, -1].shape[1] == E[-1, 1].shape[1] == E[-1, -1].shape[1]):
                raise MajcertError("inconsistent eigenspace dimensions in a coupled block")
            v00 = E[1, 1]
            v01 = _partner(x_b, E[1, -1], v00)
            v10 = _partner(x_a, E[-1, 1], v00)
            v11 = _partner(x_a, E[-1, -1], v01)
            for k in range(v00.shape[1]):
                cols.add([v00[:, k], v01[:, k], v10[:, k], v11[:, k]], theta, phi)
        elif b_coupled:
            # a-factor uncoupled: pair the z1 = ±1 halves in index order
            if E[1, 1].shape[1] != E[1, -1].shape[1] or E[-1, 1].shape[1] != E[-1, -1].shape[1]:
                raise MajcertError("inconsistent eigenspace dimensions in a coupled block")
            kp, km = E[1, 1], E[-1, 1]
            kp1, km1 = _partner(x_b, E[1, -1], kp), _partner(x_b, E[-1, -1], km)
            for k in range(max(kp.shape[1], km.shape[1])):
                if k < kp.shape[1]:
                    c00, c01 = kp[:, k], kp1[:, k]
                else:
                    c00, c01 = cols.pad(), cols.pad()
                if k < km.shape[1]:
                    c10, c11 = km[:, k], km1[:, k]
                else:
                    c10, c11 = cols.pad(), cols.pad()
                cols.add([c00, c01, c10, c11], theta, phi)
        elif a_coupled:
            if E[1, 1].shape[1] != E[-1, 1].shape[1] or E[1, -1].shape[1] != E[-1, -1].shape[1]:
                raise MajcertError("inconsistent eigenspace dimensions in a coupled block")
            kp, km = E[1, 1], E[1, -1]
            kp1, km1 = _partner(x_a, E[-1, 1], kp), _partner(x_a, E[-1, -1], km)
            for k in range(max(kp.shape[1], km.shape[1])):
                if k < kp.shape[1]:
                    c00, c10 = kp[:, k], kp1[:, k]
                else:
                    c00, c10 = cols.pad(), cols.pad()
                if k < km.shape[1]:
                    c01, c11 = km[:, k], km1[:, k]
                else:
                    c01, c11 = cols.pad(), cols.pad()
                cols.add([c00, c01, c10, c11], theta, phi)
        else:
            order = [(1, 1), (1, -1), (-1, 1), (-1, -1)]
            for k in range(max(E[z].shape[1] for z in order)):
                cols.add(
                    [E[z][:, k] if k < E[z].shape[1] else cols.pad() for z in order],
                    theta, phi,
                )

    blocks, ext = cols.build()
    decomp = JordanDecomposition(tuple(blocks), n, ext, 0.0)
    residual = max(
        opnorm(decomp.operator(name) - _extend_with_pad(decomp, ops[name], name))
        for name in ops
    )
    return replace(decomp, residual=residual)


def _extend_with_pad(decomp, op, name):
    """Input operator on the extended space, with its canonical action on the padding."""
    out = decomp.extend_operator(op)
    if decomp.ext_dim == decomp.dim:
        return out
    pad = np.zeros(decomp.ext_dim, dtype=bool)
    pad[decomp.dim:] = True
    canon = decomp.operator(name)
    out[np.ix_(pad, pad)] = canon[np.ix_(pad, pad)]
    return out


def reconstruction_error(decomp: JordanDecomposition, ops: dict) -> float:
    """Largest norm gap between the input operators and the block sum, on the input space."""
    n = decomp.dim
    err = 0.0
    for name, op in ops.items():
        rec = decomp.operator(name)
        err = max(err, opnorm(rec[:n, :n] - op), opnorm(rec[:n, n:]))
    return err


def state_weights(decomp: JordanDecomposition, psi) -> JordanDecomposition:
    """Attach ``p_l = ‖Π_l ψ‖²`` and normalized block states ``|Ψ_l⟩``.

    Block states are stored as four local coordinates in the block basis.
    """
    psi = np.asarray(psi, dtype=complex).ravel()
    if len(psi) not in (decomp.dim, decomp.ext_dim):
        raise MajcertError(f"state has length {len(psi)}, expected {decomp.dim}")
    nrm = np.linalg.norm(psi)
    if abs(nrm - 1) > 1e-10:
        raise NotNormalized(f"‖ψ‖ = {nrm:.12f}")
    ext = decomp.extend_vector(psi)
    blocks = []
    for b in decomp.blocks:
        local = dag(b.basis) @ ext
        p = float(np.real(np.vdot(local, local)))
        state = local / np.sqrt(p) if p > 0 else np.zeros(4, dtype=complex)
        blocks.append(replace(b, weight=p, state=state))
    return replace(decomp, blocks=tuple(blocks))


def y_basis_coeffs(block: JordanBlock, psi_l) -> np.ndarray:
    """Coefficients ``c_ab`` of a block state in the ``|a_Y b_Y⟩`` basis.

    ``psi_l`` is either four local coordinates or a vector of the (extended)
    space lying in the block. Order: ``c00, c01, c10, c11``.
    """
    psi_l = np.asarray(psi_l, dtype=complex).ravel()
    if psi_l.shape[0] == 4 and block.basis.shape[0] != 4:
        local = psi_l
    else:
        full = np.zeros(block.basis.shape[0], dtype=complex)
        full[: len(psi_l)] = psi_l
        local = dag(block.basis) @ full
        leak = np.linalg.norm(block.basis @ local - full)
        if leak > 1e-10:
            raise OutsideBlock(f"state leaves the block by {leak:.3e}")
    return dag(Y_BASIS) @ local

