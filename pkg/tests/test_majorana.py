from itertools import combinations

import numpy as np
import pytest

from majcert.exceptions import BadOrdering, BadSector, IndexOutOfRange
from majcert.linalg import I2, X, Y, Z, acomm, comm, dag, kron, pauli
from majcert.majorana import (
    EDGES, IDEAL_LOGICAL, adjacent, enumerate_contexts, gamma, logical_encoding,
    parity, perfect_matchings, protocol_operators, protocol_table, total_parity,
)

# Top magic square: physical three-qubit images of the nine parities.
MAGIC_PHYSICAL = {
    (3, 6): kron(I2, Y, Y), (2, 5): -kron(X, Z, X), (1, 4): kron(Y, Y, I2),
    (1, 2): -kron(Z, I2, I2), (3, 4): -kron(I2, Z, I2), (5, 6): -kron(I2, I2, Z),
    (4, 5): -kron(I2, X, X), (1, 6): kron(Y, Z, Y), (2, 3): -kron(X, X, I2),
}
# Bottom magic square: (sector power, logical Pauli); the power says whether P appears.
MAGIC_LOGICAL = {
    (3, 6): (1, "ZZ"), (2, 5): (1, "XX"), (1, 4): (1, "YY"),
    (1, 2): (0, "ZI"), (3, 4): (0, "IX"), (5, 6): (1, "ZX"),
    (4, 5): (0, "IZ"), (1, 6): (0, "XI"), (2, 3): (1, "XZ"),
}
LISTED_CONTEXTS = [
    {36, 25, 14}, {12, 34, 56}, {45, 16, 23}, {36, 12, 45}, {25, 34, 16},
    {14, 56, 23}, {35, 16, 24}, {46, 25, 13}, {12, 35, 46}, {56, 24, 13},
    {46, 15, 23}, {34, 26, 15}, {36, 24, 15}, {13, 26, 45}, {35, 26, 14},
]


def test_gamma_low_modes():
    assert np.array_equal(gamma(1), kron(X, I2, I2))
    assert np.array_equal(gamma(2), kron(Y, I2, I2))


def test_gamma_anticommutation():
    for j in range(1, 7):
        for k in range(1, 7):
            expected = 2 * np.eye(8) if j == k else np.zeros((8, 8))
            assert np.array_equal(acomm(gamma(j), gamma(k)), expected)
    assert not acomm(gamma(3), gamma(5)).any()


@pytest.mark.parametrize("j", [0, 7, 2.0, "1"])
def test_gamma_bad_index(j):
    with pytest.raises(IndexOutOfRange):
        gamma(j)


@pytest.mark.parametrize("jk", sorted(MAGIC_PHYSICAL))
def test_magic_square_physical(jk):
    assert np.array_equal(parity(*jk).matrix, MAGIC_PHYSICAL[jk])


def test_parity_errors():
    with pytest.raises(BadOrdering):
        parity(2, 1)
    with pytest.raises(BadOrdering):
        parity(3, 3)
    with pytest.raises(IndexOutOfRange):
        parity(0, 4)


def test_all_parities_hermitian_involutive_traceless():
    for j, k in combinations(range(1, 7), 2):
        m = parity(j, k).matrix
        assert np.abs(m - dag(m)).max() < 1e-12
        assert np.abs(m @ m - np.eye(8)).max() < 1e-12
        assert abs(np.trace(m)) < 1e-12


def test_parity_pairs_commute_iff_disjoint():
    ops = {(j, k): parity(j, k).matrix for j, k in combinations(range(1, 7), 2)}
    pairs = list(combinations(ops, 2))
    assert len(pairs) == 105
    for a, b in pairs:
        shared = len(set(a) & set(b))
        if shared == 0:
            assert np.abs(comm(ops[a], ops[b])).max() < 1e-12
        else:
            assert np.abs(acomm(ops[a], ops[b])).max() < 1e-12


def test_total_parity():
    p = total_parity()
    assert np.array_equal(p, -kron(Z, Z, Z))
    assert np.abs(p @ p - np.eye(8)).max() < 1e-12
    assert abs(np.trace(p)) < 1e-12
    assert sorted(np.round(np.linalg.eigvalsh(p)).tolist()) == [-1] * 4 + [1] * 4
    for j, k in combinations(range(1, 7), 2):
        assert np.abs(comm(p, parity(j, k).matrix)).max() < 1e-12


def test_contexts_match_listing():
    found = [{int(e) for e in c.members} for c in enumerate_contexts()]
    assert len(found) == 15
    assert sorted(map(sorted, found)) == sorted(map(sorted, LISTED_CONTEXTS))
    assert {36, 25, 14} in found and {12, 35, 46} in found


def test_context_ids_sorted():
    ctx = enumerate_contexts()
    assert [c.label for c in ctx] == [f"M{i:02d}" for i in range(1, 16)]
    assert [c.members for c in ctx] == sorted(c.members for c in ctx)


def test_matching_count_brute_force():
    edges = list(combinations(range(1, 7), 2))
    brute = [m for m in combinations(edges, 3) if len({v for e in m for v in e}) == 6]
    assert len(brute) == len(list(perfect_matchings())) == 15


def test_protocol_table_layout():
    t = protocol_table()
    assert t.rows == (("12", "34", "56"), ("45", "16", "23"))
    assert t.columns == (("12", "45"), ("34", "16"), ("56", "23"))
    assert t.adjacency("12", "16")
    assert not t.adjacency("12", "34")
    assert len(t.adjacent_pairs()) == 6
    assert len(t.commuting_pairs()) == 9


def test_adjacent_pairs_are_anticommuting():
    ops = protocol_operators()
    for r, s in combinations(EDGES, 2):
        rel = acomm if adjacent(r, s) else comm
        assert np.abs(rel(ops[r], ops[s])).max() < 1e-12


@pytest.mark.parametrize("sector", [1, -1])
def test_logical_encoding_isometry(sector):
    enc = logical_encoding(sector)
    v = enc.isometry
    assert np.abs(dag(v) @ v - np.eye(4)).max() < 1e-12
    assert np.abs(total_parity() @ v - sector * v).max() < 1e-12


def test_logical_encoding_named_states():
    up, dn = np.array([1, 0]), np.array([0, 1])
    phi_m = (np.kron(up, up) - np.kron(dn, dn)) / np.sqrt(2)
    phi_p = (np.kron(up, up) + np.kron(dn, dn)) / np.sqrt(2)
    assert np.allclose(logical_encoding(1).isometry[:, 0], np.kron(dn, phi_m))
    assert np.allclose(logical_encoding(-1).isometry[:, 3], np.kron(up, phi_p))


def test_even_sector_gives_ideal_table():
    enc = logical_encoding(1)
    ops = protocol_operators()
    for e in EDGES:
        assert np.abs(enc.logical(ops[e]) - pauli(IDEAL_LOGICAL[e])).max() < 1e-12


@pytest.mark.parametrize("sector", [1, -1])
def test_magic_square_logical(sector):
    enc = logical_encoding(sector)
    for (j, k), (power, lab) in MAGIC_LOGICAL.items():
        got = enc.logical(parity(j, k).matrix)
        assert np.abs(got - sector ** power * pauli(lab)).max() < 1e-12, (j, k)


def test_bad_sector():
    with pytest.raises(BadSector):
        logical_encoding(0)
