import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from helpers import haar_state, planted_quad, random_involution
from majcert.exceptions import CommutativityViolated, NotInvolution, NotNormalized, OutsideBlock
from majcert.jordan import (
    Y_BASIS, canonical_forms, jordan_pair, jordan_quad, reconstruction_error,
    state_weights, y_basis_coeffs,
)
from majcert.linalg import X, Z, dag, opnorm, pauli
from majcert.majorana import protocol_operators, total_parity

angles = st.floats(-np.pi / 2 + 1e-3, np.pi / 2 - 1e-3)


def _matches(got, want, tol):
    """Multiset equality of angle pairs up to ``tol``."""
    want = list(want)
    for g in got:
        dist = [max(abs(g[0] - w[0]), abs(g[1] - w[1])) for w in want]
        j = int(np.argmin(dist))
        if dist[j] > tol:
            return False
        want.pop(j)
    return not want


def _quad(ops):
    return jordan_quad(ops["12"], ops["16"], ops["34"], ops["45"])


def test_pair_commuting():
    blocks = jordan_pair(Z, Z)
    assert [b.dim for b in blocks] == [1, 1]


def test_pair_anticommuting():
    (b,) = jordan_pair(Z, X)
    assert b.dim == 2
    assert b.angle == pytest.approx(np.pi / 2)


def test_pair_random_reconstruction(rng):
    for _ in range(20):
        a1, a2 = random_involution(16, rng), random_involution(16, rng)
        blocks = jordan_pair(a1, a2)
        basis = np.hstack([b.basis for b in blocks])
        assert basis.shape == (16, 16)
        assert opnorm(dag(basis) @ basis - np.eye(16)) < 1e-9
        for a in (a1, a2):
            rec = sum(b.basis @ dag(b.basis) @ a @ b.basis @ dag(b.basis) for b in blocks)
            assert opnorm(rec - a) < 1e-9
        assert all(b.dim in (1, 2) for b in blocks)


def test_pair_commuting_random_gives_dim_one(rng):
    a1 = random_involution(6, rng)
    w, v = np.linalg.eigh(a1)
    a2 = v @ np.diag(rng.choice([-1.0, 1.0], 6)) @ dag(v)
    assert all(b.dim == 1 for b in jordan_pair(a1, a2))


def test_pair_rejects_non_involution():
    with pytest.raises(NotInvolution):
        jordan_pair(np.diag([1.0, 2.0]), Z)


def test_quad_already_canonical():
    d = _quad(canonical_forms(0.0, 0.0))
    assert len(d.blocks) == 1 and d.ext_dim == 4
    assert d.thetas[0] == pytest.approx(0) and d.phis[0] == pytest.approx(0)
    assert state_weights(d, np.eye(4)[0]).weights[0] == pytest.approx(1)


def test_quad_planted_single_block():
    d = _quad(canonical_forms(0.3, 0.0))
    assert d.thetas[0] == pytest.approx(0.3, abs=1e-9)
    assert d.phis[0] == pytest.approx(0.0, abs=1e-9)


def test_quad_majorana_sectors():
    ops = protocol_operators()
    d = _quad(ops)
    assert len(d.blocks) == 2 and d.ext_dim == 8
    assert np.allclose(d.thetas, 0, atol=1e-9) and np.allclose(d.phis, 0, atol=1e-9)
    p = total_parity()
    for b in d.blocks:
        # every block lies inside one total-parity sector
        vals = np.real(np.diag(dag(b.basis) @ p @ b.basis))
        assert np.allclose(vals, vals[0], atol=1e-9) and abs(abs(vals[0]) - 1) < 1e-9


def test_quad_canonical_form_in_block_basis(rng):
    ops = planted_quad([0.2, -0.7], [0.5, 1.1], rng)
    d = _quad(ops)
    for b in d.blocks:
        for name in ops:
            got = dag(b.basis) @ ops[name] @ b.basis
            assert opnorm(got - b.operator(name)) < 1e-9


def _separated(pairs, gap=1e-6):
    """Distinct planted angles further apart than the eigenvalue grouping scale."""
    vals = [v for p in pairs for v in p]
    return all(a == b or abs(a - b) > gap for a in vals for b in vals)


@given(st.lists(st.tuples(angles, angles), min_size=1, max_size=4), st.integers(0, 2**31))
def test_planted_angles_recovered(pairs, seed):
    assume(_separated(pairs))
    rng = np.random.default_rng(seed)
    ops = planted_quad([p[0] for p in pairs], [p[1] for p in pairs], rng)
    d = _quad(ops)
    assert d.residual < 1e-9
    assert _matches(list(zip(d.thetas, d.phis)), pairs, 1e-8)


def test_nearly_equal_angles_merge_within_grouping_tolerance(rng):
    # angles closer than the grouping tolerance form one degenerate cluster;
    # the reconstruction error is then bounded by half their gap
    ops = planted_quad([0.0, 0.0], [0.0, 3e-9], rng)
    d = _quad(ops)
    assert np.allclose(d.phis, 1.5e-9, atol=1e-12)
    assert d.residual <= 3e-9


def test_degenerate_commuting_padded():
    a = np.diag([1.0, -1.0, 1.0])
    d = jordan_quad(a, a, np.eye(3), np.eye(3))
    assert d.ext_dim % 4 == 0 and d.ext_dim >= 3
    assert reconstruction_error(d, {"12": a, "16": a, "34": np.eye(3), "45": np.eye(3)}) < 1e-12
    assert all(abs(t) == pytest.approx(np.pi / 2) for t in d.thetas)


def test_quad_rejects_noncommuting():
    with pytest.raises(CommutativityViolated) as exc:
        jordan_quad(pauli("ZI"), pauli("XI"), pauli("XI"), pauli("IZ"))
    assert exc.value.norm > 1


def test_quad_rejects_non_involution():
    with pytest.raises(NotInvolution):
        jordan_quad(np.eye(4) * 2, pauli("XI"), pauli("IX"), pauli("IZ"))


def test_state_weights(rng):
    ops = planted_quad([0.1, 0.4, -0.3, 0.9], [0.2, 0.0, 0.6, -1.0], rng)
    d = _quad(ops)
    b0 = d.blocks[0].basis[:, 0]
    assert state_weights(d, b0).weights[0] == pytest.approx(1)
    mix = (d.blocks[0].basis[:, 1] + d.blocks[1].basis[:, 2]) / np.sqrt(2)
    w = state_weights(d, mix).weights
    assert w[0] == pytest.approx(0.5) and w[1] == pytest.approx(0.5)
    psi = haar_state(16, rng)
    assert state_weights(d, psi).weights.sum() == pytest.approx(1, abs=1e-12)
    with pytest.raises(NotNormalized):
        state_weights(d, 2 * psi)


def test_y_basis_coefficients():
    d = _quad(canonical_forms(0.0, 0.0))
    block = d.blocks[0]
    bell = np.array([1, 0, 0, 1]) / np.sqrt(2)
    c = y_basis_coeffs(block, bell)
    assert abs(c[0]) < 1e-12 and abs(c[3]) < 1e-12
    assert np.allclose(np.abs(c[1:3]), 1 / np.sqrt(2))
    assert np.allclose(c[1:3], 1 / np.sqrt(2))
    c = y_basis_coeffs(block, Y_BASIS[:, 0])
    assert c[0] == pytest.approx(1)


def test_y_basis_outside_block(rng):
    ops = planted_quad([0.1, 0.2], [0.3, 0.4], rng)
    d = _quad(ops)
    with pytest.raises(OutsideBlock):
        y_basis_coeffs(d.blocks[0], haar_state(8, rng))
    c = y_basis_coeffs(d.blocks[0], d.blocks[0].basis @ haar_state(4, rng))
    assert np.sum(np.abs(c) ** 2) == pytest.approx(1, abs=1e-12)
