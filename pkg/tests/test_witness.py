from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import dense_trace, dense_witness, random_state
from wwitness.states import (
    Ensemble,
    basis_state,
    make_ghz_state,
    make_symmetric_product,
    make_w_state,
    permute_qubits,
)
from wwitness.witness import (
    WitnessClassifier,
    bounds_table,
    build_custom_witness,
    build_witness,
    classify,
    expectation,
    single_excitation_trace,
    witness_coefficient,
)


def test_coefficient_values():
    assert witness_coefficient(3, exact=True) == Fraction(4, 9)
    assert witness_coefficient(2) == 0.5
    assert witness_coefficient(4, exact=True) == Fraction(27, 64)
    values = [witness_coefficient(n) for n in range(2, 25)]
    assert all(a > b for a, b in zip(values, values[1:]))
    assert all(v > 1 / np.e for v in values)


def test_coefficient_rejects_out_of_range():
    for n in (1, 0, 2.5):
        with pytest.raises(ValueError):
            witness_coefficient(n)
    assert witness_coefficient(100) > 1 / np.e


def test_build_witness_w3():
    w = build_witness(3)
    assert w.alpha == pytest.approx(4 / 9, abs=1e-16)
    np.testing.assert_array_equal(w.reference, make_w_state(3))
    assert w.is_w_witness
    assert build_witness(4).alpha == 27 / 64


@pytest.mark.parametrize("n", range(2, 7))
def test_dense_eigenstructure(n):
    w = build_witness(n)
    eig = np.linalg.eigvalsh(w.to_dense())
    c = witness_coefficient(n)
    np.testing.assert_allclose(eig[0], c - 1, atol=1e-12)
    np.testing.assert_allclose(eig[1:], c, atol=1e-12)


def test_dense_witness_capped():
    with pytest.raises(ValueError):
        build_witness(7).to_dense()


def test_custom_witness():
    bar = build_custom_witness(make_w_state(3), 2 / 3)
    assert bar.alpha == 2 / 3
    same = build_custom_witness(make_w_state(3), 4 / 9)
    assert same.alpha == build_witness(3).alpha
    ghz = make_ghz_state(3)
    assert abs(expectation(build_custom_witness(ghz, 0.5), ghz) + 0.5) < 1e-15
    assert not build_custom_witness(ghz, 0.5).is_w_witness
    for bad in (0.0, 1.0, -0.1):
        with pytest.raises(ValueError):
            build_custom_witness(ghz, bad)


def test_expectation_examples():
    w = build_witness(3)
    assert abs(expectation(w, make_w_state(3)) + 5 / 9) < 1e-15
    assert abs(expectation(w, make_ghz_state(3)) - 4 / 9) < 1e-15
    noise = Ensemble(np.empty(0), np.empty((0, 8)), np.full(8, 1 / 8))
    assert abs(expectation(w, noise) - 23 / 72) < 1e-15
    assert abs(expectation(w, np.eye(8) / 8) - 23 / 72) < 1e-15
    assert abs(dense_trace(dense_witness(make_w_state(3), 4 / 9), np.eye(8) / 8) - 23 / 72) < 1e-15
    tangent = make_symmetric_product(np.sqrt(2 / 3), np.sqrt(1 / 3), 3)
    assert abs(expectation(w, tangent)) < 1e-12


def test_expectation_dimension_mismatch():
    with pytest.raises(ValueError):
        expectation(build_witness(3), make_w_state(4))


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(2, 6), terms=st.integers(1, 4))
def test_expectation_matches_dense_trace(seed, n, terms):
    rng = np.random.default_rng(seed)
    weights = rng.dirichlet(np.ones(terms))
    states = np.stack([random_state(1 << n, rng) for _ in range(terms)])
    ens = Ensemble(weights, states)
    w = build_witness(n)
    oracle = dense_trace(dense_witness(w.reference, w.alpha), ens.to_dense())
    assert abs(expectation(w, ens) - oracle) < 1e-12
    assert abs(expectation(w, ens.to_dense()) - oracle) < 1e-12


def test_custom_reference_uses_general_support():
    rng = np.random.default_rng(4)
    ref, rho = random_state(16, rng), random_state(16, rng)
    w = build_custom_witness(ref, 0.3)
    assert abs(expectation(w, rho) - dense_trace(dense_witness(ref, 0.3), rho)) < 1e-12


def test_single_excitation_examples():
    assert abs(single_excitation_trace(make_w_state(3)) + 5 / 9) < 1e-15
    assert single_excitation_trace(basis_state("000")) == pytest.approx(4 / 9, abs=1e-16)


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(2, 10))
def test_single_excitation_matches_expectation(seed, n):
    psi = random_state(1 << n, np.random.default_rng(seed))
    assert abs(single_excitation_trace(psi) - expectation(build_witness(n), psi)) < 1e-12


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(2, 8))
def test_expectation_permutation_invariant(seed, n):
    rng = np.random.default_rng(seed)
    psi = random_state(1 << n, rng)
    perm = list(rng.permutation(n) + 1)
    w = build_witness(n)
    assert abs(expectation(w, psi) - expectation(w, permute_qubits(psi, perm))) < 1e-12


def test_bounds_table_n3():
    t = bounds_table(3)
    assert t.c == pytest.approx(4 / 9, abs=1e-16)
    assert (t.global_min, t.global_max) == pytest.approx((-5 / 9, 5 / 9), abs=1e-15)
    assert t.dk_min == pytest.approx((-2 / 9,), abs=1e-15)
    assert t.full_sep_min == 0


def test_bounds_table_n4_and_n2():
    t = bounds_table(4)
    assert t.dk_min == pytest.approx((-21 / 64, -5 / 64), abs=1e-15)
    # same numbers from the coefficient matrices directly
    from wwitness.bipartition import largest_schmidt_coefficient

    for k in (1, 2):
        sigma = largest_schmidt_coefficient(make_w_state(4), tuple(range(1, k + 1)))
        assert abs(t.dk_min[k - 1] - (27 / 64 - sigma**2)) < 1e-12
    t2 = bounds_table(2)
    assert t2.dk_min == (0.0,)
    assert t2.full_sep_min == 0


@pytest.mark.parametrize("n", range(2, 25))
def test_bounds_ordering(n):
    t = bounds_table(n)
    assert all(a < b for a, b in zip(t.dk_min, t.dk_min[1:]))
    assert t.global_min <= t.dk_min[0]
    assert t.dk_min[-1] < t.global_max


def test_classify_examples():
    v = classify(-5 / 9, 3)
    assert v.genuine_entangled and v.not_fully_separable and all(v.excluded_from_dk)
    assert v.label == "genuine_entangled"
    v = classify(-0.1, 3)
    assert v.not_fully_separable and not v.excluded_from_dk[0] and not v.genuine_entangled
    assert v.label == "entangled"
    v = classify(0.2, 3)
    assert not (v.not_fully_separable or any(v.excluded_from_dk) or v.genuine_entangled)
    assert v.label == "inconclusive"


def test_classify_is_strict_at_thresholds():
    assert not classify(0.0, 3).not_fully_separable
    assert not classify(4 / 9 - 2 / 3, 3).genuine_entangled


def test_classify_intermediate_label():
    # between D_1 and D_2 thresholds at n=4
    v = classify(-0.2, 4)
    assert v.excluded_from_dk == (False, True)
    assert v.label == "not_in_D2"


def test_classify_rejects_out_of_range():
    with pytest.raises(ValueError, match="inconsistent"):
        classify(-0.6, 3)
    with pytest.raises(ValueError):
        classify(0.56, 3)
    classify(-5 / 9 - 5e-10, 3)


def test_classify_n2_degenerate():
    v = classify(-0.1, 2)
    assert v.not_fully_separable and v.genuine_entangled


@pytest.mark.parametrize("n", range(2, 11))
def test_classify_monotone_scan(n):
    c = witness_coefficient(n)
    for t in np.linspace(c - 1, 1 - c, 2001):
        v = classify(t, n)
        flags = v.excluded_from_dk
        for k in range(len(flags) - 1):
            assert not flags[k] or flags[k + 1]
        assert v.genuine_entangled == flags[0]
        assert not v.genuine_entangled or v.not_fully_separable


def test_verdict_serialization():
    d = classify(-5 / 9, 3).to_dict()
    assert set(d) >= {"trace", "c", "thresholds", "flags", "margin"}
    assert d["thresholds"]["full_sep"] == 0
    assert d["margin"] == pytest.approx(-5 / 9 + 2 / 9)


def test_classifier_estimator():
    clf = WitnessClassifier().fit([make_w_state(3)])
    assert clf.n_qubits_ == 3
    X = [make_w_state(3), make_ghz_state(3), np.eye(8) / 8]
    np.testing.assert_allclose(clf.decision_function(X), [-5 / 9, 4 / 9, 23 / 72], atol=1e-15)
    assert list(clf.predict(X)) == ["genuine_entangled", "inconclusive", "inconclusive"]
    assert clf.get_params() == {"alpha": None, "n_qubits": None}
    bar = WitnessClassifier(n_qubits=3, alpha=2 / 3).fit()
    assert bar.bounds_.full_sep_min == pytest.approx(2 / 3 - 4 / 9)


def test_classifier_requires_fit():
    from sklearn.exceptions import NotFittedError

    with pytest.raises(NotFittedError):
        WitnessClassifier(n_qubits=3).predict([make_w_state(3)])
    with pytest.raises(ValueError):
        WitnessClassifier().fit([])
