"""Outcome distributions, finite-shot sampling, counts files and the witness W.

The witness is ``W = R1 + R2 + C1 + C2 − C3`` written with context products,
or more generally ``Σ_i s_i ⟨C_i⟩`` for a sign vector ``s`` matched to the
initial state so that the ideal state reaches +1 on every term.
"""

from __future__ import annotations

import io
import json
import os
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Optional, Union

import numpy as np

from .certify import ContextDeviations, ParityScenario
from .exceptions import BadContext, InvalidScenario, MissingContext, ParseError, ZeroCounts
from .majorana import CONTEXT_LABELS, CONTEXTS, Context, protocol_operators
from .scenarios import initial_state, parse_initial

CLASSICAL_BOUND = 3.0
QUANTUM_BOUND = 5.0
#: Sign vector of the witness displayed in the protocol description.
DEFAULT_SIGNS = (1, 1, 1, 1, -1)
INITIAL_STATES = tuple("".join(t) for t in product("+-", repeat=3))


def _context_members(context) -> tuple[str, tuple[str, ...]]:
    if isinstance(context, Context):
        label = context.label
    else:
        label = str(context)
    if label not in CONTEXTS:
        raise BadContext(f"unknown context {label!r}; expected one of {list(CONTEXTS)}")
    return label, CONTEXTS[label]


def outcome_tuples(size: int) -> list[tuple[int, ...]]:
    """All ±1 tuples of the given length, ``+`` before ``−`` lexicographically."""
    return [tuple(t) for t in product((1, -1), repeat=size)]


def joint_distribution(ops: dict, psi, members) -> dict:
    """Born-rule distribution of commuting observables measured in sequence.

    ``Pr(a) = ‖Π_{a_k} ⋯ Π_{a_1} ψ‖²`` with ``Π_a = (I + a A)/2``.
    """
    psi = np.asarray(psi, dtype=complex)
    n = len(psi)
    out = {}
    for a in outcome_tuples(len(members)):
        v = psi
        for e, sign in zip(members, a):
            v = (v + sign * (ops[e] @ v)) / 2
        out[a] = float(np.real(np.vdot(v, v)))
    return out


def ideal_distribution(initial, context) -> dict:
    """Exact outcome distribution of a context for a CSCO initial state."""
    label, members = _context_members(context)
    return joint_distribution(protocol_operators(), initial_state(initial), members)


def expectation_from_distribution(dist: dict) -> float:
    return float(sum(np.prod(a) * p for a, p in dist.items()))


def expectation_table() -> dict:
    """Ideal context expectations for all eight initial states."""
    return {
        init: {c: expectation_from_distribution(ideal_distribution(init, c)) for c in CONTEXT_LABELS}
        for init in INITIAL_STATES
    }


def matched_signs(initial) -> tuple[int, ...]:
    """Witness signs making every term +1 on the ideal state for ``initial``."""
    table = expectation_table()[_initial_key(initial)]
    return tuple(int(np.rint(table[c])) for c in CONTEXT_LABELS)


def _initial_key(initial) -> str:
    return "".join("+" if v > 0 else "-" for v in parse_initial(initial))


# --------------------------------------------------------------------------
# counts


@dataclass
class CountsTable:
    """Per-context outcome tallies. Outcome tuples follow the context's member order."""

    counts: dict = field(default_factory=dict)

    def add(self, context: str, outcome, count: int):
        label, members = _context_members(context)
        outcome = tuple(int(v) for v in outcome)
        if len(outcome) != len(members) or any(v not in (1, -1) for v in outcome):
            raise BadContext(f"outcome {outcome} does not fit context {label} {members}")
        if int(count) != count or count < 0:
            raise ValueError(f"count must be a non-negative integer, got {count!r}")
        ctx = self.counts.setdefault(label, {})
        ctx[outcome] = ctx.get(outcome, 0) + int(count)

    def total(self, context: str) -> int:
        return int(sum(self.counts.get(context, {}).values()))

    def totals(self) -> dict[str, int]:
        return {c: self.total(c) for c in CONTEXT_LABELS if c in self.counts}

    def records(self) -> Iterable[dict]:
        """Records in canonical order: contexts R1…C3, outcomes ``+`` first."""
        for c in CONTEXT_LABELS:
            if c not in self.counts:
                continue
            members = CONTEXTS[c]
            for a in outcome_tuples(len(members)):
                yield {
                    "context": c,
                    "outcomes": {e: v for e, v in zip(members, a)},
                    "count": self.counts[c].get(a, 0),
                }

    def to_jsonl(self) -> str:
        return "".join(json.dumps(r) + "\n" for r in self.records())

    def write(self, path):
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.to_jsonl())

    @classmethod
    def from_jsonl(cls, text: str) -> CountsTable:
        t = cls()
        for lineno, line in enumerate(io.StringIO(text), start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
                label, members = _context_members(rec["context"])
                outcomes = rec["outcomes"]
                if set(outcomes) != set(members):
                    raise BadContext(f"outcomes {sorted(outcomes)} do not match {label} {members}")
                t.add(label, [outcomes[e] for e in members], rec["count"])
            except (json.JSONDecodeError, KeyError, TypeError, ValueError, BadContext) as exc:
                raise ParseError(str(exc), line=lineno) from None
        return t

    @classmethod
    def read(cls, path) -> CountsTable:
        with open(path, encoding="utf-8") as fh:
            return cls.from_jsonl(fh.read())

    @classmethod
    def from_distributions(cls, dists: dict, shots: int) -> CountsTable:
        """Exact frequencies ``round(p · shots)`` for each context."""
        t = cls()
        for c, dist in dists.items():
            for a, p in dist.items():
                t.add(c, a, int(round(p * shots)))
        return t


def sample_counts(source: Union[ParityScenario, str, tuple], shots: int, seed=None) -> CountsTable:
    """Draw ``shots`` i.i.d. outcomes per context.

    ``source`` is a :class:`ParityScenario` or an initial-state string such as
    ``"++-"`` for the ideal physical device. Each context gets its own child
    stream spawned from ``seed``, so results are reproducible and independent
    of context order.
    """
    if int(shots) != shots or shots < 1:
        raise InvalidScenario(f"shots must be a positive integer, got {shots!r}")
    if isinstance(source, ParityScenario):
        ops, psi = source.ops, source.psi
    else:
        ops, psi = protocol_operators(), initial_state(source)
    streams = np.random.SeedSequence(seed).spawn(len(CONTEXT_LABELS))
    t = CountsTable()
    for c, ss in zip(CONTEXT_LABELS, streams):
        dist = joint_distribution(ops, psi, CONTEXTS[c])
        outcomes = list(dist)
        p = np.clip(np.array([dist[a] for a in outcomes]), 0, None)
        draws = np.random.default_rng(ss).multinomial(int(shots), p / p.sum())
        for a, n in zip(outcomes, draws):
            t.add(c, a, int(n))
    return t


@dataclass(frozen=True)
class Estimate:
    mean: float
    stderr: float
    n: int


def estimate_expectations(t: CountsTable) -> dict[str, Estimate]:
    """Plug-in context expectations with standard errors.

    The standard error is the sample standard deviation (``ddof=1``) of
    the ±1 outcome product divided by ``√N``.
    """
    out = {}
    for c in CONTEXT_LABELS:
        if c not in t.counts:
            raise MissingContext(f"no records for context {c}")
        n = t.total(c)
        if n == 0:
            raise ZeroCounts(f"context {c} has zero total count")
        s = sum(int(np.prod(a)) * k for a, k in t.counts[c].items())
        mean = s / n
        var = (1 - mean * mean) * n / (n - 1) if n > 1 else 0.0
        out[c] = Estimate(float(mean), float(np.sqrt(max(var, 0.0) / n)), n)
    return out


def deviations_from_estimates(est: dict) -> ContextDeviations:
    return ContextDeviations.from_expectations({c: e.mean for c, e in est.items()})


# --------------------------------------------------------------------------
# witness


@dataclass(frozen=True)
class WitnessResult:
    expectations: dict
    w: float
    sign_vector: tuple
    standard_errors: dict
    classical_bound: float = CLASSICAL_BOUND
    quantum_bound: float = QUANTUM_BOUND

    @property
    def se_total(self) -> float:
        """Standard error of ``w`` for independently sampled contexts."""
        return float(np.sqrt(sum(v * v for v in self.standard_errors.values())))

    @property
    def contextual(self) -> bool:
        """Conservative 3σ rule: ``w − 3·SE_total > classical bound``."""
        return self.w - 3 * self.se_total > self.classical_bound

    def to_dict(self) -> dict:
        return {
            "w": self.w,
            "classical_bound": self.classical_bound,
            "quantum_bound": self.quantum_bound,
            "sign_vector": list(self.sign_vector),
            "expectations": dict(self.expectations),
            "standard_errors": dict(self.standard_errors),
            "se_total": self.se_total,
            "contextual": self.contextual,
        }


def witness(expectations, initial="++-", standard_errors: Optional[dict] = None) -> WitnessResult:
    """Signed sum of context expectations with the sign vector matched to ``initial``.

    ``expectations`` is a mapping context → value (or :class:`Estimate`),
    or a sequence in the order R1, R2, C1, C2, C3.
    """
    if isinstance(expectations, dict):
        vals, ses = {}, {}
        for c in CONTEXT_LABELS:
            if c not in expectations:
                raise MissingContext(f"missing expectation for {c}")
            v = expectations[c]
            if isinstance(v, Estimate):
                vals[c], ses[c] = v.mean, v.stderr
            else:
                vals[c] = float(v)
    else:
        seq = [float(v) for v in expectations]
        if len(seq) != 5:
            raise MissingContext(f"expected 5 expectations, got {len(seq)}")
        vals, ses = dict(zip(CONTEXT_LABELS, seq)), {}
    if standard_errors is not None:
        ses = {c: float(standard_errors[c]) for c in CONTEXT_LABELS}
    if any(abs(v) > 1 + 1e-12 for v in vals.values()):
        raise ValueError("expectations must lie in [-1, 1]")
    signs = matched_signs(initial)
    w = float(sum(s * vals[c] for s, c in zip(signs, CONTEXT_LABELS)))
    ses = {c: ses.get(c, 0.0) for c in CONTEXT_LABELS}
    return WitnessResult(vals, w, signs, ses)


def classical_bound_oracle(sign_vector) -> float:
    """Largest signed sum over all 64 deterministic ±1 assignments to the six edges."""
    signs = tuple(int(s) for s in sign_vector)
    if len(signs) != 5:
        raise ValueError(f"sign vector must have 5 entries, got {len(signs)}")
    edges = ("12", "34", "56", "45", "16", "23")
    best = -np.inf
    for vals in product((1, -1), repeat=6):
        a = dict(zip(edges, vals))
        total = sum(s * np.prod([a[e] for e in CONTEXTS[c]]) for s, c in zip(signs, CONTEXT_LABELS))
        best = max(best, total)
    return float(best)


def seed_from_env(seed=None):
    """Explicit seed, else ``MAJCERT_SEED``, else ``None``."""
    if seed is not None:
        return int(seed)
    env = os.environ.get("MAJCERT_SEED")
    return int(env) if env not in (None, "") else None
