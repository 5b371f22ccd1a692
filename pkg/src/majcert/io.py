"""Scenario files and report serialization.

A scenario file is a JSON object::

    {"dim": 4,
     "ops": {"12": {"real": [[...], ...], "imag": [[...], ...]}, ...},
     "psi": {"real": [...], "imag": [...]}}

``imag`` may be omitted for real data.
"""

from __future__ import annotations

import csv
import io
import json

import numpy as np

from .certify import CertificationReport, ParityScenario
from .exceptions import InvalidScenario, MajcertError, ParseError
from .majorana import EDGES


def _complex_array(obj, what):
    if isinstance(obj, dict):
        if "real" not in obj:
            raise InvalidScenario(f"{what}: missing 'real' entries")
        re = np.asarray(obj["real"], dtype=float)
        im = np.asarray(obj.get("imag", np.zeros_like(re)), dtype=float)
        if re.shape != im.shape:
            raise InvalidScenario(f"{what}: real part {re.shape} and imaginary part {im.shape} differ")
        return re + 1j * im
    return np.asarray(obj, dtype=float).astype(complex)


def scenario_from_dict(data: dict) -> ParityScenario:
    if not isinstance(data, dict):
        raise InvalidScenario("scenario must be a JSON object")
    missing = [k for k in ("dim", "ops", "psi") if k not in data]
    if missing:
        raise InvalidScenario(f"scenario is missing keys {missing}")
    try:
        dim = int(data["dim"])
        ops = {str(k): _complex_array(v, f"A{k}") for k, v in data["ops"].items()}
        psi = _complex_array(data["psi"], "psi").ravel()
    except (TypeError, ValueError) as exc:
        raise InvalidScenario(f"malformed numeric data: {exc}") from None
    if psi.shape[0] != dim:
        raise InvalidScenario(f"dim is {dim} but psi has length {psi.shape[0]}")
    return ParityScenario(ops, psi)


def scenario_to_dict(s: ParityScenario) -> dict:
    def enc(a):
        return {"real": np.real(a).tolist(), "imag": np.imag(a).tolist()}

    return {"dim": s.dim, "ops": {e: enc(s.ops[e]) for e in EDGES}, "psi": enc(s.psi)}


def loads_scenario(text: str) -> ParityScenario:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno) from None
    return scenario_from_dict(data)


def load_scenario(path) -> ParityScenario:
    with open(path, encoding="utf-8") as fh:
        return loads_scenario(fh.read())


def save_scenario(s: ParityScenario, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(scenario_to_dict(s), fh)
        fh.write("\n")


def report_json(report, indent: int = 2) -> str:
    """JSON text for a report object (anything with ``to_dict``) or plain dict."""
    data = report.to_dict() if hasattr(report, "to_dict") else report
    return json.dumps(data, indent=indent, default=_default) + "\n"


def _default(o):
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, np.bool_):
        return bool(o)
    raise TypeError(f"not JSON serializable: {type(o).__name__}")


def report_csv(report: CertificationReport) -> str:
    """One row per bound or diagnostic: kind, name, bound, measured, ok."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["kind", "name", "bound", "measured", "ok"])
    for kind, records in (("bound", report.bounds), ("diagnostic", report.diagnostics)):
        for r in records:
            d = r.to_dict()
            w.writerow([kind, d["name"], repr(d["bound"]), repr(d["measured"]), d["ok"]])
    return buf.getvalue()


__all__ = [
    "MajcertError",
    "load_scenario",
    "loads_scenario",
    "save_scenario",
    "scenario_from_dict",
    "scenario_to_dict",
    "report_json",
    "report_csv",
]
