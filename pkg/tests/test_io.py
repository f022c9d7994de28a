import json

import numpy as np
import pytest

from wwitness.io import StateDocumentError, digest, family_state, load_state, parse_state, state_document
from wwitness.states import Ensemble, make_ghz_state, make_w_state


def _pairs(v):
    return [[z.real, z.imag] for z in v]


def test_pure_document():
    doc = {"kind": "pure", "n_qubits": 3, "amplitudes": _pairs(make_w_state(3))}
    np.testing.assert_allclose(parse_state(doc), make_w_state(3))


def test_bare_real_amplitudes():
    doc = {"kind": "pure", "n_qubits": 2, "amplitudes": [0, 1, 0, 0]}
    np.testing.assert_array_equal(parse_state(doc), [0, 1, 0, 0])


def test_ensemble_and_dense_roundtrip():
    ens = Ensemble.from_terms([(0.25, make_w_state(3)), (0.75, make_ghz_state(3))])
    back = parse_state(json.loads(json.dumps(state_document(ens))))
    np.testing.assert_allclose(back.to_dense(), ens.to_dense())
    dense = parse_state(state_document(ens.to_dense()))
    np.testing.assert_allclose(dense, ens.to_dense())


def test_family_documents():
    np.testing.assert_array_equal(family_state("w", {"n": 4}), make_w_state(4))
    np.testing.assert_array_equal(family_state("ghz", {"n": 3}), make_ghz_state(3))
    acin = family_state("acin", {"lambdas": [0, 1, 0, 0, 0], "theta": 0})
    assert acin[4] == 1
    sym = family_state("symmetric_product", {"a": [0.6, 0], "b": 0.8, "n": 2})
    np.testing.assert_allclose(sym, [0.36, 0.48, 0.48, 0.64])
    mix = parse_state({"kind": "family", "name": "w_ghz_mix", "params": {"n": 3, "p": 0.5}})
    assert isinstance(mix, Ensemble)


@pytest.mark.parametrize(
    "doc, field",
    [
        ({"kind": "pure", "n_qubits": 3, "amplitudes": [1, 0, 0]}, "amplitudes"),
        ({"kind": "pure", "n_qubits": 3, "amplitudes": [1, 1, 0, 0, 0, 0, 0, 0]}, "amplitudes"),
        ({"kind": "pure", "n_qubits": 2, "amplitudes": [1, 0, 0, 0, 0, 0, 0, 0]}, "n_qubits"),
        ({"kind": "pure", "amplitudes": [1, 0, 0, 0]}, "n_qubits"),
        ({"kind": "pure", "n_qubits": 2, "amplitudes": [1, "x", 0, 0]}, "amplitudes[1]"),
        ({"kind": "ensemble", "n_qubits": 2, "terms": []}, "terms"),
        ({"kind": "ensemble", "n_qubits": 2, "terms": [{"weight": 0.5, "amplitudes": [1, 0, 0, 0]}]}, "terms"),
        ({"kind": "ensemble", "n_qubits": 2, "terms": [{"amplitudes": [1, 0, 0, 0]}]}, "terms[0].weight"),
        ({"kind": "dense", "n_qubits": 2, "matrix": [[1, 0], [0, 1]]}, "matrix"),
        ({"kind": "family", "name": "w", "params": {}}, "params.n"),
        ({"kind": "family", "name": "zzz", "params": {"n": 3}}, "name"),
        ({"kind": "family", "name": "w_ghz_mix", "params": {"n": 3, "p": 2}}, "params"),
        ({"kind": "blob"}, "kind"),
        ({}, "kind"),
        ([], "<root>"),
    ],
)
def test_malformed_documents_name_field(doc, field):
    with pytest.raises(StateDocumentError) as info:
        parse_state(doc)
    assert info.value.field == field


def test_load_state_file(tmp_path):
    path = tmp_path / "s.json"
    path.write_text(json.dumps({"kind": "family", "name": "w", "params": {"n": 3}}))
    np.testing.assert_array_equal(load_state(path), make_w_state(3))
    path.write_text("{not json")
    with pytest.raises(StateDocumentError):
        load_state(path)


def test_digest_is_key_order_independent():
    assert digest({"a": 1, "b": 2}) == digest({"b": 2, "a": 1})
    assert digest({"a": 1}) != digest({"a": 2})
