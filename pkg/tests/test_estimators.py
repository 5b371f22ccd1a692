import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from majcert.estimators import SelfTestCertifier, WitnessEstimator
from majcert.exceptions import InvalidScenario
from majcert.io import save_scenario, scenario_to_dict
from majcert.scenarios import ideal_physical_scenario, tilted_scenario
from majcert.stats import sample_counts


def test_certifier_fit_attributes():
    est = SelfTestCertifier().fit(tilted_scenario(0.1))
    assert est.epsilon_ == pytest.approx(1 - np.cos(0.1))
    assert est.op_fidelities_["16"] == pytest.approx(np.cos(0.1))
    assert est.predict()
    assert est.score() >= -1e-12


def test_certifier_accepts_dict_and_path(tmp_path):
    s = ideal_physical_scenario()
    a = SelfTestCertifier().fit(scenario_to_dict(s))
    path = tmp_path / "s.json"
    save_scenario(s, path)
    b = SelfTestCertifier().fit(str(path))
    assert a.state_fidelity_ == pytest.approx(b.state_fidelity_)
    assert a.report_.rigidity is not None


def test_certifier_params_and_clone():
    est = SelfTestCertifier(diagnostics=False, rigidity_tol=None)
    assert est.get_params() == {"diagnostics": False, "rigidity_tol": None}
    c = clone(est)
    assert c.get_params() == est.get_params()
    c.fit(ideal_physical_scenario())
    assert c.report_.diagnostics == [] and c.report_.rigidity is None


def test_not_fitted():
    with pytest.raises(NotFittedError):
        SelfTestCertifier().predict()
    with pytest.raises(NotFittedError):
        WitnessEstimator().score()


def test_bad_input():
    with pytest.raises(InvalidScenario):
        SelfTestCertifier().fit(42)
    with pytest.raises(InvalidScenario):
        WitnessEstimator().fit(42)


def test_witness_estimator():
    counts = sample_counts("++-", 5000, seed=1)
    est = WitnessEstimator(initial="++-").fit(counts)
    assert est.w_ == pytest.approx(5)
    assert est.predict()
    assert est.score() == est.w_
