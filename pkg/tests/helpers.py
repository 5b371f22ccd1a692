"""Random instance generators shared by the test modules."""

import numpy as np
from scipy.stats import unitary_group

from majcert.jordan import canonical_forms
from majcert.linalg import dag, direct_sum


def haar_unitary(dim, rng):
    if dim == 1:
        return np.exp(2j * np.pi * rng.uniform()) * np.ones((1, 1))
    return unitary_group.rvs(dim, random_state=rng)


def random_involution(dim, rng, n_minus=None):
    if n_minus is None:
        n_minus = rng.integers(0, dim + 1)
    d = np.ones(dim)
    d[:n_minus] = -1
    u = haar_unitary(dim, rng)
    return u @ np.diag(d) @ dag(u)


def haar_state(dim, rng):
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def random_density(dim, rng):
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    w = g @ dag(g)
    return w / np.trace(w).real


def random_psd(dim, rng):
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return g @ dag(g)


def random_effect(dim, rng):
    """Random POVM effect 0 <= Q <= I."""
    u = haar_unitary(dim, rng)
    return u @ np.diag(rng.uniform(0, 1, size=dim)) @ dag(u)


def planted_quad(thetas, phis, rng, mix=True):
    """Direct sum of canonical blocks with the given angles, optionally rotated."""
    blocks = [canonical_forms(t, p) for t, p in zip(thetas, phis)]
    ops = {k: direct_sum(*[b[k] for b in blocks]) for k in ("12", "16", "34", "45")}
    if mix:
        u = haar_unitary(4 * len(blocks), rng)
        ops = {k: u @ v @ dag(u) for k, v in ops.items()}
    return ops
