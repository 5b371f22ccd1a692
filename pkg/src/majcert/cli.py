"""Command-line interface: ``majcert {simulate,estimate,certify,witness,oracle}``.

Exit codes: 0 success (all bounds hold), 1 a bound or diagnostic is
violated, 2 input or usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from . import __version__
from .certify import ContextDeviations, robustness_certify, theorem_constants
from .exceptions import MajcertError
from .io import load_scenario, report_csv, report_json
from .majorana import CONTEXT_LABELS
from .scenarios import ideal_physical_scenario, noisy_scenario, parse_initial
from .stats import (
    INITIAL_STATES,
    CountsTable,
    classical_bound_oracle,
    deviations_from_estimates,
    estimate_expectations,
    matched_signs,
    sample_counts,
    seed_from_env,
    witness,
)

EXIT_OK, EXIT_VIOLATED, EXIT_INPUT = 0, 1, 2

WITNESS_HELP = (
    "Contextuality is flagged when w - 3*SE_total > 3, where SE_total combines the "
    "per-context standard errors in quadrature. This 3-sigma rule is a convention "
    "of this tool, not a derived significance test."
)


class UsageError(MajcertError):
    pass


def parse_noise(text: str) -> dict:
    """Parse ``angle:<rad>[,state:<norm>]``."""
    out = {"angle": 0.0, "state": 0.0}
    for part in text.split(","):
        key, sep, value = part.partition(":")
        key = key.strip()
        if not sep or key not in out:
            raise UsageError(f"bad noise setting {text!r}; expected angle:<rad>[,state:<norm>]")
        try:
            out[key] = float(value)
        except ValueError:
            raise UsageError(f"bad number {value!r} in noise setting") from None
    if not abs(out["angle"]) <= np.pi / 2:
        raise UsageError(f"noise angle must satisfy |angle| <= pi/2, got {out['angle']}")
    if not 0 <= out["state"] <= 1:
        raise UsageError(f"state noise must lie in [0, 1], got {out['state']}")
    return out


def _scenario(args):
    if getattr(args, "scenario", None):
        return load_scenario(args.scenario)
    if getattr(args, "noise", None):
        noise = parse_noise(args.noise)
        return noisy_scenario(noise["angle"], noise["state"], seed=args.seed)
    return ideal_physical_scenario(args.initial)


def _emit(text: str, out):
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv(rows) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


# --------------------------------------------------------------------------
# commands


def cmd_simulate(args) -> int:
    if args.shots is None or args.shots < 1:
        raise UsageError("--shots must be a positive integer")
    if args.seed is None:
        args.seed = int(np.random.SeedSequence().entropy % 2**32)
        print(f"seed: {args.seed}", file=sys.stderr)
    source = _scenario(args)
    table = sample_counts(source, args.shots, seed=args.seed)
    _emit(table.to_jsonl(), args.out)
    for c, n in table.totals().items():
        print(f"{c}\t{n}", file=sys.stderr)
    return EXIT_OK


def cmd_estimate(args) -> int:
    est = estimate_expectations(CountsTable.read(args.counts))
    dev = deviations_from_estimates(est)
    if args.format == "csv":
        rows = [["context", "mean", "stderr", "n", "deviation"]]
        rows += [[c, repr(e.mean), repr(e.stderr), e.n, repr(dev[c])] for c, e in est.items()]
        _emit(_csv(rows), args.out)
    else:
        data = {
            "expectations": {c: {"mean": e.mean, "stderr": e.stderr, "n": e.n} for c, e in est.items()},
            "deviations": dev.as_dict(),
            "epsilon": dev.epsilon,
        }
        _emit(report_json(data), args.out)
    return EXIT_OK


def _certify_counts(args) -> int:
    est = estimate_expectations(CountsTable.read(args.counts))
    dev: ContextDeviations = deviations_from_estimates(est)
    k = theorem_constants(dev.epsilon)
    guaranteed = {
        "state_fidelity": 1 - k["eps0"],
        "op_fidelity_C1": 1 - k["eps1"],
        "op_fidelity_C2": 1 - k["eps2"],
        "op_fidelity_C3": 1 - k["eps3"],
    }
    w = witness(est, args.initial)
    if args.format == "csv":
        rows = [["name", "guaranteed_lower_bound"]] + [[n, repr(v)] for n, v in guaranteed.items()]
        _emit(_csv(rows), args.out)
    else:
        data = {
            "epsilon": dev.epsilon,
            "deviations": dev.as_dict(),
            "standard_errors": {c: e.stderr for c, e in est.items()},
            "guaranteed_fidelities": guaranteed,
            "theorem_constants": k,
            "witness": w.to_dict(),
        }
        _emit(report_json(data), args.out)
    return EXIT_OK


def cmd_certify(args) -> int:
    if args.counts:
        return _certify_counts(args)
    report = robustness_certify(_scenario(args), rigidity_tol=args.rigidity_tol)
    _emit(report_csv(report) if args.format == "csv" else report_json(report), args.out)
    for r in report.violations:
        print(f"violated: {r.name} measured={r.measured!r} bound={r.bound!r}", file=sys.stderr)
    return EXIT_OK if report.ok else EXIT_VIOLATED


def cmd_witness(args) -> int:
    est = estimate_expectations(CountsTable.read(args.counts))
    w = witness(est, args.initial)
    if args.format == "csv":
        rows = [["context", "sign", "expectation", "stderr"]]
        rows += [[c, s, repr(w.expectations[c]), repr(w.standard_errors[c])]
                 for c, s in zip(CONTEXT_LABELS, w.sign_vector)]
        rows += [["w", "", repr(w.w), repr(w.se_total)],
                 ["classical_bound", "", w.classical_bound, ""],
                 ["quantum_bound", "", w.quantum_bound, ""],
                 ["contextual", "", w.contextual, ""]]
        _emit(_csv(rows), args.out)
    else:
        _emit(report_json(w), args.out)
    return EXIT_OK


def _parse_signs(text: str) -> tuple[int, ...]:
    parts = [p.strip() for p in text.replace(",", " ").split()]
    if len(parts) == 1 and len(parts[0]) == 5:
        parts = list(parts[0])
    try:
        signs = tuple({"+": 1, "-": -1, "+1": 1, "-1": -1, "1": 1}[p] for p in parts)
    except KeyError:
        raise UsageError(f"bad sign vector {text!r}") from None
    if len(signs) != 5:
        raise UsageError(f"sign vector needs 5 entries, got {len(signs)}")
    return signs


def cmd_oracle(args) -> int:
    if args.signs:
        vectors = [("custom", _parse_signs(args.signs))]
    elif args.initial_given:
        vectors = [(args.initial, matched_signs(args.initial))]
    else:
        vectors = [(init, matched_signs(init)) for init in INITIAL_STATES]
    results = [
        {"initial": name, "sign_vector": list(s), "classical_max": classical_bound_oracle(s)}
        for name, s in vectors
    ]
    if args.format == "csv":
        rows = [["initial", "sign_vector", "classical_max"]]
        rows += [[r["initial"], " ".join(f"{v:+d}" for v in r["sign_vector"]), r["classical_max"]]
                 for r in results]
        _emit(_csv(rows), args.out)
    else:
        _emit(report_json({"oracle": results}), args.out)
    return EXIT_OK


# --------------------------------------------------------------------------
# parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_INPUT)


def _initial(text):
    parse_initial(text)
    return text


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="majcert", description="Certify Majorana parity measurements from statistics.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, fmt=True):
        sp.add_argument("--out", help="output path (default: stdout)")
        if fmt:
            sp.add_argument("--format", choices=("json", "csv"), default="json")

    def source(sp):
        g = sp.add_mutually_exclusive_group()
        g.add_argument("--ideal", action="store_true", help="ideal Majorana device (default)")
        g.add_argument("--noise", metavar="angle:<rad>[,state:<norm>]",
                       help="ideal device with A16 tilted by angle and a state perturbation")
        g.add_argument("--scenario", metavar="PATH", help="scenario JSON file")
        return g

    def initial(sp):
        sp.add_argument("--initial", type=_initial, default=None,
                        help="initial parities (a36, a25, a14), e.g. ++- (default)")

    def seed(sp):
        sp.add_argument("--seed", type=int, default=None, help="RNG seed (fallback: MAJCERT_SEED)")

    sp = sub.add_parser("simulate", help="sample outcome counts for the five contexts")
    source(sp)
    initial(sp)
    sp.add_argument("--shots", type=int, required=True, help="shots per context")
    seed(sp)
    common(sp, fmt=False)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("estimate", help="context expectations and standard errors from counts")
    sp.add_argument("--counts", required=True, metavar="PATH")
    common(sp)
    sp.set_defaults(func=cmd_estimate)

    sp = sub.add_parser("certify", help="fidelity bounds for a scenario or from counts")
    g = source(sp)
    g.add_argument("--counts", metavar="PATH",
                   help="derive epsilon from counts and report the guaranteed fidelities")
    initial(sp)
    seed(sp)
    sp.add_argument("--rigidity-tol", type=float, default=1e-8,
                    help="attach the exact rigidity construction when epsilon is below this")
    common(sp)
    sp.set_defaults(func=cmd_certify)

    sp = sub.add_parser("witness", help="contextuality witness from counts", description=WITNESS_HELP)
    sp.add_argument("--counts", required=True, metavar="PATH")
    initial(sp)
    common(sp)
    sp.set_defaults(func=cmd_witness)

    sp = sub.add_parser("oracle", help="classical maximum of the witness by exhaustive search")
    initial(sp)
    sp.add_argument("--signs", help="explicit sign vector such as +,+,+,+,-")
    common(sp)
    sp.set_defaults(func=cmd_oracle)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.initial_given = getattr(args, "initial", None) is not None
    if hasattr(args, "initial") and args.initial is None:
        args.initial = "++-"
    if hasattr(args, "seed"):
        try:
            args.seed = seed_from_env(args.seed)
        except ValueError:
            print("majcert: error: MAJCERT_SEED must be an integer", file=sys.stderr)
            return EXIT_INPUT
    try:
        return args.func(args)
    except (MajcertError, OSError, json.JSONDecodeError) as exc:
        print(f"majcert: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
