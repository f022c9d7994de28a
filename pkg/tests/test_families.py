import numpy as np
import pytest

from oracles import dense_trace, dense_witness
from wwitness.families import (
    THREE_TANGLE_NOTE,
    realize,
    sweep,
    sweep_grid,
    thresholds,
    trace_curve,
)
from wwitness.states import make_w_state
from wwitness.witness import build_witness, expectation


def test_realize_examples():
    pure = realize("w_ghz_mix", 3, 1.0)
    assert pure.states.shape[0] == 1
    np.testing.assert_array_equal(pure.states[0], make_w_state(3))
    noise = realize("w_white_noise", 3, 0.0)
    assert abs(expectation(build_witness(3), noise) - 23 / 72) < 1e-15
    oracle = dense_trace(dense_witness(make_w_state(3), 4 / 9), noise.to_dense())
    assert abs(oracle - 23 / 72) < 1e-15
    mix = realize("w_ghz_mix", 4, 0.5)
    assert abs(expectation(build_witness(4), mix) - (27 / 64 - 1 / 2)) < 1e-15


def test_realize_validation():
    with pytest.raises(ValueError):
        realize("w_ghz_mix", 3, 1.5)
    with pytest.raises(ValueError):
        realize("nope", 3, 0.5)
    with pytest.raises(ValueError):
        realize("w_white_noise", 17, 0.5)


def test_curve_examples():
    assert abs(trace_curve("w_ghz_mix", 3)(2 / 3) + 2 / 9) < 1e-15
    assert abs(trace_curve("w_white_noise", 3)(23 / 63)) < 1e-15
    assert abs(trace_curve("w_white_noise", 3)(13 / 21) + 2 / 9) < 1e-15


@pytest.mark.parametrize("n", range(2, 11))
def test_curve_matches_ensemble_path(n):
    w = build_witness(n)
    for name in ("w_ghz_mix", "w_white_noise"):
        curve = trace_curve(name, n)
        for p in np.linspace(0, 1, 41):
            assert abs(curve(p) - expectation(w, realize(name, n, p))) < 1e-13
    assert trace_curve("w_ghz_mix", n).slope == -1.0


@pytest.mark.parametrize("n", [3, 4, 5])
def test_curve_matches_dense_oracle(n):
    wd = dense_witness(make_w_state(n), build_witness(n).alpha)
    for name in ("w_ghz_mix", "w_white_noise"):
        for p in (0.0, 0.3, 0.77, 1.0):
            rho = realize(name, n, p).to_dense()
            assert abs(trace_curve(name, n)(p) - dense_trace(wd, rho)) < 1e-13


def test_thresholds_examples():
    r = thresholds("w_white_noise", 3)
    assert (r.p_entangled, r.p_genuine) == pytest.approx((23 / 63, 13 / 21), abs=1e-15)
    assert r.entangled_error < 1e-12 and r.genuine_error < 1e-12
    r = thresholds("w_ghz_mix", 3)
    assert (r.p_entangled, r.p_genuine) == pytest.approx((4 / 9, 2 / 3), abs=1e-15)


@pytest.mark.parametrize("n", range(2, 17))
def test_thresholds_agree_and_ordered(n):
    for name in ("w_ghz_mix", "w_white_noise"):
        r = thresholds(name, n)
        assert r.entangled_error < 1e-12 and r.genuine_error < 1e-12
        assert 0 <= r.p_entangled <= r.p_genuine <= 1


def test_white_noise_large_n_limits():
    r = thresholds("w_white_noise", 16)
    assert abs(r.p_entangled - 1 / np.e) < 0.02
    assert r.p_genuine > 0.93
    gens = [thresholds("w_white_noise", n).p_genuine for n in range(3, 17)]
    assert all(a < b for a, b in zip(gens, gens[1:]))


def test_sweep_ghz_flip():
    records = sweep("w_ghz_mix", 3, 0, 1, 0.25)
    assert [p for p, _, _ in records] == [0, 0.25, 0.5, 0.75, 1.0]
    flags = [v.not_fully_separable for _, _, v in records]
    assert flags == [False, False, True, True, True]


def test_sweep_single_point():
    assert len(sweep("w_ghz_mix", 3, 0.4, 0.4, 0.1)) == 1


def test_sweep_white_noise_first_genuine():
    records = sweep("w_white_noise", 4, 0, 1, 0.01)
    first = next(p for p, _, v in records if v.genuine_entangled)
    assert first == pytest.approx(0.74)
    assert 0.73 < 11 / 15 < first
    assert expectation(build_witness(4), realize("w_white_noise", 4, first)) < 27 / 64 - 3 / 4


def test_sweep_validation_and_threads():
    with pytest.raises(ValueError):
        sweep_grid(0.5, 0.2, 0.1)
    with pytest.raises(ValueError):
        sweep_grid(0, 1, 0)
    a = sweep("w_white_noise", 5, 0, 1, 0.05)
    b = sweep("w_white_noise", 5, 0, 1, 0.05, n_jobs=3)
    assert [(p, t) for p, t, _ in a] == [(p, t) for p, t, _ in b]


def test_three_tangle_note_text():
    assert "0.373" in THREE_TANGLE_NOTE
