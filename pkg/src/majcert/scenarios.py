"""Ready-made parity scenarios: ideal, tilted and randomly perturbed.

Perturbed scenarios are built from Majorana vectors so that the declared
commutation relations stay exact. Each protocol vertex ``j`` owns a private
extra mode ``x_j``; the endpoint ``j`` of an edge is replaced by the unit
vector ``cos a · γ_j + sin a · γ_{x_j}``. Disjoint edges then use orthogonal
Majorana vectors and commute exactly, while edges sharing a vertex no longer
anticommute exactly when their rotation angles at that vertex differ.
"""

from __future__ import annotations

import numpy as np

from .certify import ParityScenario
from .exceptions import BadParities
from .linalg import dag
from .majorana import EDGES, IDEAL_LOGICAL, N_MODES, _gamma, parse_edge, protocol_operators
from .linalg import pauli

BELL = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)


def parse_initial(initial) -> tuple[int, int, int]:
    """Normalize ``"++-"`` or ``(1, 1, -1)`` to a triple of ±1 for ``(a36, a25, a14)``."""
    if isinstance(initial, str):
        s = initial.strip()
        if len(s) != 3 or any(c not in "+-" for c in s):
            raise BadParities(f"initial parities must look like '++-', got {initial!r}")
        return tuple(1 if c == "+" else -1 for c in s)
    try:
        t = tuple(int(v) for v in initial)
    except (TypeError, ValueError):
        raise BadParities(f"bad initial parities {initial!r}") from None
    if len(t) != 3 or any(v not in (1, -1) for v in t):
        raise BadParities(f"initial parities must be three values ±1, got {initial!r}")
    return t


def initial_state(initial="++-") -> np.ndarray:
    """Joint eigenstate of ``(P36, P25, P14)`` with the given eigenvalues.

    The three parities form a complete set of commuting observables on the
    eight-dimensional space, so the state is unique up to phase; the phase
    makes the largest-magnitude amplitude real and positive.
    """
    a36, a25, a14 = parse_initial(initial)
    proj = np.eye(8, dtype=complex)
    for (j, k), a in (((3, 6), a36), ((2, 5), a25), ((1, 4), a14)):
        p = 1j * _gamma(j, N_MODES) @ _gamma(k, N_MODES)
        proj = proj @ (np.eye(8) + a * p) / 2
    w, v = np.linalg.eigh((proj + dag(proj)) / 2)
    psi = v[:, -1]
    i = int(np.argmax(np.abs(psi)))
    return psi * np.exp(-1j * np.angle(psi[i]))


def ideal_logical_scenario() -> ParityScenario:
    """Logical Paulis ``ZI, IX, ZX, IZ, XI, XZ`` on two qubits with the Bell state."""
    return ParityScenario({e: pauli(IDEAL_LOGICAL[e]) for e in EDGES}, BELL.copy())


def ideal_physical_scenario(initial="++-") -> ParityScenario:
    """The six 8x8 Majorana parities with a CSCO initial state."""
    return ParityScenario(protocol_operators(), initial_state(initial))


def majorana_vector(coeffs: dict, n_modes: int) -> np.ndarray:
    """``Σ_j c_j γ_j`` for real coefficients (a Hermitian involution if unit norm)."""
    return sum(c * _gamma(j, n_modes) for j, c in coeffs.items())


def _rotated_edge(j, k, angles, n_modes):
    u = majorana_vector({j: np.cos(angles[j]), N_MODES + j: np.sin(angles[j])}, n_modes)
    v = majorana_vector({k: np.cos(angles[k]), N_MODES + k: np.sin(angles[k])}, n_modes)
    return 1j * u @ v


def rotated_scenario(edge_angles: dict, psi_extra=None) -> ParityScenario:
    """Protocol operators with endpoint rotations into private extra modes.

    Parameters
    ----------
    edge_angles : dict
        Maps ``(edge, vertex)`` to the rotation angle of that endpoint;
        missing entries are zero.
    psi_extra : ndarray, optional
        State of the six extra qubits' worth of modes (length 2**n_extra);
        defaults to ``|0…0⟩``. The ideal part is the ``(+,+,-)`` state.
    """
    n_modes = 2 * N_MODES
    n_extra_qubits = (n_modes - N_MODES) // 2
    ops = {}
    for e in EDGES:
        j, k = parse_edge(e)
        angles = {j: edge_angles.get((e, j), 0.0), k: edge_angles.get((e, k), 0.0)}
        ops[e] = _rotated_edge(j, k, angles, n_modes)
    if psi_extra is None:
        psi_extra = np.eye(2 ** n_extra_qubits, dtype=complex)[0]
    psi = np.kron(initial_state("++-"), psi_extra)
    return ParityScenario(ops, psi)


def tilted_scenario(angle: float) -> ParityScenario:
    """Ideal physical scenario with ``A16`` tilted by ``angle`` at vertex 1.

    ``A16 = i(cos t γ1 + sin t γ7) γ6`` on eight modes; every declared
    commutation stays exact and the C2 deviation is ``1 − cos t``.
    """
    n_modes = N_MODES + 2
    ops = protocol_operators(n_modes)
    u = majorana_vector({1: np.cos(angle), 7: np.sin(angle)}, n_modes)
    ops["16"] = 1j * u @ _gamma(6, n_modes)
    psi = np.kron(initial_state("++-"), np.array([1, 0], dtype=complex))
    return ParityScenario(ops, psi)


def perturb_state(psi, norm: float, rng) -> np.ndarray:
    """Add a random complex vector of the given norm and renormalize."""
    if norm == 0:
        return np.asarray(psi, dtype=complex)
    d = rng.normal(size=len(psi)) + 1j * rng.normal(size=len(psi))
    d *= norm / np.linalg.norm(d)
    out = psi + d
    return out / np.linalg.norm(out)


def noisy_scenario(angle: float = 0.0, state_noise: float = 0.0, seed=None) -> ParityScenario:
    """Tilted-``A16`` scenario with an optional random state perturbation."""
    s = tilted_scenario(angle)
    if state_noise:
        rng = np.random.default_rng(seed)
        s = ParityScenario(s.ops, perturb_state(s.psi, state_noise, rng))
    return s


def haar_state(dim: int, rng) -> np.ndarray:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def random_scenario(rng, max_angle: float = 0.15, max_state_noise: float = 0.1,
                    mix_extra: bool = True) -> ParityScenario:
    """Randomly perturbed protocol scenario on 64 dimensions.

    Every edge endpoint is rotated by an angle uniform in
    ``[-max_angle, max_angle]``; the extra modes start in a random state
    (spreading the state over several Jordan blocks) when ``mix_extra``;
    finally a random state perturbation of norm up to ``max_state_noise``
    is applied.
    """
    angles = {}
    for e in EDGES:
        for v in parse_edge(e):
            angles[(e, v)] = rng.uniform(-max_angle, max_angle)
    extra = haar_state(8, rng) if mix_extra else None
    s = rotated_scenario(angles, extra)
    noise = rng.uniform(0, max_state_noise)
    return ParityScenario(s.ops, perturb_state(s.psi, noise, rng))
