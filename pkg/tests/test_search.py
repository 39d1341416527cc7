import numpy as np
import pytest

from srpt.criteria import is_admissible, srpt_evaluate
from srpt.hilbert import HilbertSpace, density_from_pure, ket
from srpt.search import (
    NoCrossingError,
    maximize_violation,
    ppt_threshold_scan,
    threshold_scan,
    werner_phi_threshold,
)
from srpt.states import schmidt_state, werner
from srpt.witnesses import werner_bipartite_pair, werner_multipartite_pair

BELL = schmidt_state((1.0, 1.0), (2, 2))


def bell_family(x):
    return werner(BELL, x)


# --- threshold scans -------------------------------------------------------------


def test_bell_srpt_threshold():
    a, b = werner_bipartite_pair(0.0)
    res = threshold_scan(bell_family, a, b)
    assert res.x_critical == pytest.approx(0.5, abs=1e-6)
    assert res.bracket[1] - res.bracket[0] <= res.tolerance
    assert res.evaluations > 21


def test_bell_ppt_threshold():
    res = ppt_threshold_scan(bell_family)
    assert res.x_critical == pytest.approx(1 / 3, abs=1e-6)


@pytest.mark.parametrize("n", [3, 4])
def test_multipartite_thresholds(n):
    a, b = werner_multipartite_pair(n)
    srpt_res = threshold_scan(lambda x: werner(n, x), a, b)
    ppt_res = ppt_threshold_scan(lambda x: werner(n, x))
    assert srpt_res.x_critical == pytest.approx(1 / (1 + 2 ** (n - 2)), abs=1e-6)
    assert ppt_res.x_critical == pytest.approx(1 / (1 + 2 ** (n - 1)), abs=1e-6)


def test_ppt_threshold_for_tilted_schmidt_state():
    psi = schmidt_state((0.8, 0.6), (2, 2))
    res = ppt_threshold_scan(lambda x: werner(psi, x))
    assert res.x_critical == pytest.approx(1 / (1 + 4 * 0.8 * 0.6), abs=1e-6)


def test_scan_is_deterministic():
    a, b = werner_bipartite_pair(0.0)
    first = threshold_scan(bell_family, a, b)
    second = threshold_scan(bell_family, a, b)
    assert first == second


def test_scan_bracket_properties():
    a, b = werner_bipartite_pair(0.0)
    res = threshold_scan(bell_family, a, b)
    lo, hi = res.bracket
    assert srpt_evaluate(bell_family(lo), a, b).slack <= 1e-9
    assert srpt_evaluate(bell_family(hi), a, b).slack > 1e-9
    assert srpt_evaluate(bell_family(res.x_critical + 10 * res.tolerance), a, b).slack > 1e-9
    assert srpt_evaluate(bell_family(res.x_critical - 10 * res.tolerance), a, b).slack <= 1e-9


def test_scan_reports_no_crossing():
    product = schmidt_state((1.0, 0.0), (2, 2))
    a, b = werner_bipartite_pair(0.0)
    with pytest.raises(NoCrossingError):
        threshold_scan(lambda x: werner(product, x), a, b)


def test_scan_refuses_inadmissible_witness():
    import srpt.hilbert as h
    from srpt.criteria import AdmissibilityError

    bad = h.Observable(HilbertSpace((2, 2)),
                       np.kron(h.PAULI_X, h.PAULI_Y) + np.kron(h.PAULI_Y, h.PAULI_X))
    a, _ = werner_bipartite_pair(0.0)
    with pytest.raises(AdmissibilityError):
        threshold_scan(bell_family, a, bad)


def test_srpt_threshold_never_below_ppt():
    families = [
        (bell_family, werner_bipartite_pair(0.0)),
        (lambda x: werner(3, x), werner_multipartite_pair(3)),
        (lambda x: werner(schmidt_state((0.8, 0.6), (2, 2)), x), werner_bipartite_pair(0.0)),
    ]
    for family, (a, b) in families:
        srpt_res = threshold_scan(family, a, b)
        ppt_res = ppt_threshold_scan(family)
        assert srpt_res.x_critical >= ppt_res.x_critical - 1e-6


# --- witness optimization -----------------------------------------------------------


def test_maximize_prop2_finds_bell_violation():
    result = maximize_violation(density_from_pure(BELL), "prop2", restarts=8, seed=5)
    assert result.best_report.slack > 1e-9
    assert result.restarts_used == 8
    assert result.best_params.shape == (26,)


def test_maximize_prop2_product_state_stays_sound():
    rho = density_from_pure(ket(HilbertSpace((2, 2)), (0, 0)))
    result = maximize_violation(rho, "prop2", restarts=8, seed=5)
    assert result.best_report.slack <= 1e-9


def test_maximize_prop2_werner_above_threshold():
    result = maximize_violation(werner(BELL, 0.6), "prop2", restarts=8, seed=5)
    assert result.best_report.slack > 1e-9


def test_maximize_prop1_matches_schmidt_oracle():
    psi = schmidt_state((0.8, 0.6), (2, 2))
    result = maximize_violation(density_from_pure(psi), "prop1")
    assert result.best_report.lhs <= 1e-12
    assert result.best_report.rhs == pytest.approx((0.8 * 0.6) ** 2, abs=1e-10)
    assert list(result.best_params) == [0.0, 1.0]


def test_maximize_prop1_rejects_mixed_state():
    with pytest.raises(ValueError):
        maximize_violation(werner(BELL, 0.5), "prop1")


def test_maximize_rejects_unknown_family_and_space():
    rho = density_from_pure(ket(HilbertSpace((2, 3)), (0, 0)))
    with pytest.raises(ValueError):
        maximize_violation(rho, "prop2")
    with pytest.raises(ValueError):
        maximize_violation(rho, "does-not-exist")


def test_maximize_prop2_best_candidate_is_admissible():
    from srpt.witnesses import prop2_observable
    from srpt.search import _clipped_prop2

    result = maximize_violation(density_from_pure(BELL), "prop2", restarts=4, seed=11)
    a = prop2_observable(_clipped_prop2(result.best_params[:13]))
    b = prop2_observable(_clipped_prop2(result.best_params[13:]))
    assert is_admissible(a).admissible
    assert is_admissible(b).admissible


# --- Werner formula audit --------------------------------------------------------------


def test_werner_audit_bell_point():
    audit = werner_phi_threshold(2**-0.5, 2**-0.5, 0.0)
    assert audit.result.x_critical == pytest.approx(0.5, abs=1e-6)
    assert audit.linear_formula == pytest.approx(0.39038820, abs=1e-6)
    assert audit.squared_formula == pytest.approx(0.5, abs=1e-12)
    assert not audit.linear_agrees
    assert audit.squared_agrees


def test_werner_audit_tilted_state():
    audit = werner_phi_threshold(0.8, 0.6, 0.0)
    assert audit.squared_agrees
    assert not audit.linear_agrees
    assert audit.result.x_critical == pytest.approx(audit.squared_formula, abs=1e-4)


def test_werner_audit_product_state_has_no_crossing():
    with pytest.raises(NoCrossingError):
        werner_phi_threshold(1.0, 0.0, 0.0)


def test_werner_audit_rejects_unnormalized():
    with pytest.raises(ValueError):
        werner_phi_threshold(1.0, 1.0, 0.0)
