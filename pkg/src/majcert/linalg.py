"""Dense complex linear algebra for small operators.

Matrices are plain ``numpy`` arrays of dtype ``complex128``; states are
column vectors stored as 1-d arrays. Everything here is a pure function.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from itertools import product

import numpy as np
import scipy.linalg

from .exceptions import DimensionMismatch, NotUnitary

#: Cluster radius used when grouping (nearly) degenerate eigenvalues.
GROUP_TOL = 1e-8

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = {"I": I2, "X": X, "Y": Y, "Z": Z}
PAULI_LABELS = tuple(a + b for a, b in product("IXYZ", repeat=2))


def as_cmatrix(a, name="matrix") -> np.ndarray:
    """Return ``a`` as a finite 2-d complex128 array."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise DimensionMismatch(f"{name} must be 2-d, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} has non-finite entries")
    return m


def dag(m: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(m, -1, -2))


def comm(a, b):
    return a @ b - b @ a


def acomm(a, b):
    return a @ b + b @ a


def opnorm(m) -> float:
    """Spectral norm (largest singular value)."""
    m = np.asarray(m)
    if m.size == 0:
        return 0.0
    if m.ndim == 1:
        return float(np.linalg.norm(m))
    return float(np.linalg.norm(m, 2))


def kron(*mats) -> np.ndarray:
    """Kronecker product of any number of matrices, left factor outermost."""
    if not mats:
        return np.eye(1, dtype=complex)
    return reduce(np.kron, [np.asarray(m, dtype=complex) for m in mats])


def direct_sum(*mats) -> np.ndarray:
    return scipy.linalg.block_diag(*[np.asarray(m, dtype=complex) for m in mats])


def pauli(label: str) -> np.ndarray:
    """Tensor product of single-qubit Paulis, e.g. ``pauli("ZX")``."""
    try:
        return kron(*(PAULI[c] for c in label.upper()))
    except KeyError:
        raise ValueError(f"bad Pauli label {label!r}") from None


def rank(m, tol=1e-10) -> int:
    s = np.linalg.svd(np.asarray(m), compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > tol * max(1.0, s[0])))


def is_hermitian(m, tol=1e-10) -> bool:
    return opnorm(m - dag(m)) <= tol


def is_unitary(m, tol=1e-10) -> bool:
    m = np.asarray(m)
    return m.shape[0] == m.shape[1] and opnorm(m @ dag(m) - np.eye(m.shape[0])) <= tol


def involution_defect(m) -> float:
    """max(‖m − m†‖, ‖m² − I‖); zero for an exact Hermitian involution."""
    m = np.asarray(m)
    n = m.shape[0]
    return max(opnorm(m - dag(m)), opnorm(m @ m - np.eye(n)))


def cluster(values, tol=GROUP_TOL) -> list[np.ndarray]:
    """Group indices of ``values`` whose members lie within ``tol`` of a neighbour.

    Works for real or complex input; complex values are chained by single
    linkage so a cluster never splits a run of values closer than ``tol``.
    """
    values = np.asarray(values)
    n = len(values)
    if n == 0:
        return []
    # single-linkage via union-find; n is small
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(values[i] - values[j]) <= tol:
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return [np.array(g) for g in sorted(groups.values(), key=lambda g: g[0])]


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues and orthonormal eigenvectors (as columns)."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __iter__(self):
        yield self.eigenvalues
        yield self.eigenvectors

    def clusters(self, tol=GROUP_TOL):
        """Yield ``(value, basis)`` for each degenerate eigenvalue cluster."""
        for idx in cluster(self.eigenvalues, tol):
            yield self.eigenvalues[idx[0]], self.eigenvectors[:, idx]


def _group(vals, tol):
    vals = np.array(vals)
    for idx in cluster(vals, tol):
        vals[idx] = np.mean(vals[idx])
    return vals


def eig_hermitian(h, group_tol=GROUP_TOL) -> Spectrum:
    """Eigendecomposition of a Hermitian matrix, ascending eigenvalues."""
    h = as_cmatrix(h)
    w, v = np.linalg.eigh((h + dag(h)) / 2)
    return Spectrum(_group(w, group_tol), v)


def eig_unitary(u, tol=1e-10, group_tol=GROUP_TOL) -> Spectrum:
    """Eigendecomposition of a unitary matrix.

    A complex Schur decomposition of a normal matrix is diagonal, so the
    Schur vectors are an orthonormal eigenbasis even inside degenerate
    clusters. Eigenvalues are projected onto the unit circle and values
    within ``group_tol`` of each other are reported as one value.
    """
    u = as_cmatrix(u)
    if u.shape[0] != u.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got {u.shape}")
    defect = opnorm(u @ dag(u) - np.eye(u.shape[0]))
    if defect > tol:
        raise NotUnitary(f"‖UU† − I‖ = {defect:.3e} exceeds {tol:g}")
    t, q = scipy.linalg.schur(u, output="complex")
    w = np.diag(t).copy()
    w = w / np.abs(w)
    order = np.lexsort((w.imag, np.round(np.angle(w), 9)))
    return Spectrum(_group(w[order], group_tol), q[:, order])


def pauli_expand(m) -> dict[str, complex]:
    """Coefficients ``Tr((P⊗Q) m) / 4`` for all sixteen two-qubit Paulis."""
    m = as_cmatrix(m)
    if m.shape != (4, 4):
        raise DimensionMismatch(f"pauli_expand needs a 4x4 matrix, got {m.shape}")
    return {lab: complex(np.trace(pauli(lab) @ m) / 4) for lab in PAULI_LABELS}


def pauli_reconstruct(coeffs: dict[str, complex]) -> np.ndarray:
    return sum(c * pauli(lab) for lab, c in coeffs.items())


def orthonormal_basis(vectors, tol=1e-10) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal basis for the column span of ``vectors`` and its singular values."""
    vectors = np.asarray(vectors, dtype=complex)
    u, s, _ = np.linalg.svd(vectors, full_matrices=False)
    r = int(np.sum(s > tol * max(1.0, s[0] if s.size else 0.0)))
    return u[:, :r], s


def polar_isometry(m) -> np.ndarray:
    """Closest isometry to ``m`` (unitary factor of the polar decomposition)."""
    u, _, vh = np.linalg.svd(m, full_matrices=False)
    return u @ vh


def complement_basis(basis, dim) -> np.ndarray:
    """Orthonormal basis of the orthogonal complement of ``basis`` in C^dim."""
    if basis.shape[1] == 0:
        return np.eye(dim, dtype=complex)
    q, _ = np.linalg.qr(np.hstack([basis, np.eye(dim, dtype=complex)]))
    return q[:, basis.shape[1]:dim]


def restrict(op, basis) -> np.ndarray:
    """Matrix of ``op`` compressed onto the span of orthonormal ``basis``."""
    return dag(basis) @ op @ basis
