"""scikit-learn style wrappers around the certification and witness pipelines.

``fit`` takes the object being certified (a scenario, or counts) in place of
a feature matrix; learned quantities get a trailing underscore.
"""

from __future__ import annotations

import os

from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .certify import ParityScenario, robustness_certify
from .exceptions import InvalidScenario
from .io import load_scenario, scenario_from_dict
from .stats import CountsTable, Estimate, estimate_expectations, witness


def check_scenario(X) -> ParityScenario:
    """Accept a scenario, a scenario dict, or a path to a scenario file."""
    if isinstance(X, ParityScenario):
        return X
    if isinstance(X, dict):
        return scenario_from_dict(X)
    if isinstance(X, (str, os.PathLike)):
        return load_scenario(X)
    raise InvalidScenario(f"cannot interpret {type(X).__name__} as a parity scenario")


def check_counts(X) -> CountsTable:
    if isinstance(X, CountsTable):
        return X
    if isinstance(X, (str, os.PathLike)):
        return CountsTable.read(X)
    raise InvalidScenario(f"cannot interpret {type(X).__name__} as a counts table")


class SelfTestCertifier(BaseEstimator):
    """Certify a parity scenario against the ideal Majorana device.

    Parameters
    ----------
    diagnostics : bool
        Evaluate the intermediate inequalities as well as the fidelity bounds.
    rigidity_tol : float or None
        Attach the exact rigidity construction when ``ε`` is below this.

    Attributes
    ----------
    report_ : CertificationReport
    epsilon_ : float
    state_fidelity_ : float
    op_fidelities_ : dict
    """

    def __init__(self, diagnostics=True, rigidity_tol=1e-8):
        self.diagnostics = diagnostics
        self.rigidity_tol = rigidity_tol

    def fit(self, X, y=None):
        s = check_scenario(X)
        self.report_ = robustness_certify(s, diagnostics=self.diagnostics,
                                          rigidity_tol=self.rigidity_tol)
        self.epsilon_ = self.report_.epsilon
        self.state_fidelity_ = self.report_.state_fidelity
        self.op_fidelities_ = dict(self.report_.op_fidelities)
        return self

    def predict(self, X=None) -> bool:
        """Whether every bound (and diagnostic) holds; refits when ``X`` is given."""
        if X is not None:
            self.fit(X)
        check_is_fitted(self, "report_")
        return self.report_.ok

    def score(self, X=None, y=None) -> float:
        """Smallest slack over all records; negative means a violation."""
        if X is not None:
            self.fit(X)
        check_is_fitted(self, "report_")
        return min(r.slack for r in self.report_.bounds + self.report_.diagnostics)


class WitnessEstimator(BaseEstimator):
    """Estimate the contextuality witness from outcome counts.

    Parameters
    ----------
    initial : str
        Initial parities ``(a36, a25, a14)`` such as ``"++-"``; selects the
        sign vector.
    """

    def __init__(self, initial="++-"):
        self.initial = initial

    def fit(self, X, y=None):
        self.estimates_: dict[str, Estimate] = estimate_expectations(check_counts(X))
        self.result_ = witness(self.estimates_, self.initial)
        self.w_ = self.result_.w
        return self

    def predict(self, X=None) -> bool:
        if X is not None:
            self.fit(X)
        check_is_fitted(self, "result_")
        return self.result_.contextual

    def score(self, X=None, y=None) -> float:
        if X is not None:
            self.fit(X)
        check_is_fitted(self, "result_")
        return self.w_
