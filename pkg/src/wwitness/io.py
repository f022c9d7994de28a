"""JSON state documents.

Four kinds are understood::

    {"kind": "pure", "n_qubits": N, "amplitudes": [[re, im], ...]}
    {"kind": "ensemble", "n_qubits": N, "terms": [{"weight": w, "amplitudes": [...]}, ...]}
    {"kind": "dense", "n_qubits": N, "matrix": [[[re, im], ...], ...]}
    {"kind": "family", "name": ..., "params": {...}}

A complex entry may also be a bare real number.
"""

import hashlib
import json

import numpy as np

from . import families
from .states import (
    Ensemble,
    check_density,
    check_n_qubits,
    check_pure_state,
    make_acin_state,
    make_ghz_state,
    make_symmetric_product,
    make_w_state,
)

STATE_FAMILIES = ("w", "ghz", "acin", "symmetric_product") + families.FAMILIES


class StateDocumentError(ValueError):
    """Malformed state document; ``field`` names the offending key."""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field


def _complex(value, where):
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    raise StateDocumentError(where, f"expected a number or [re, im] pair, got {value!r}")


def _vector(values, where):
    if not isinstance(values, list):
        raise StateDocumentError(where, "expected a list")
    return np.array([_complex(v, f"{where}[{i}]") for i, v in enumerate(values)], dtype=complex)


def _require(doc, key, where=""):
    if key not in doc:
        raise StateDocumentError(where + key, "missing")
    return doc[key]


def _check_n(doc, n_found):
    declared = _require(doc, "n_qubits")
    try:
        declared = check_n_qubits(declared)
    except (ValueError, TypeError) as exc:
        raise StateDocumentError("n_qubits", str(exc)) from None
    if declared != n_found:
        raise StateDocumentError("n_qubits", f"declares {declared} qubits, data has {n_found}")


def family_state(name, params):
    """Build a named state; mixtures come back as :class:`Ensemble`."""
    params = dict(params or {})

    def get(key, default=None):
        if key in params:
            return params[key]
        if default is None:
            raise StateDocumentError(f"params.{key}", "missing")
        return default

    try:
        if name == "w":
            return make_w_state(get("n"))
        if name == "ghz":
            return make_ghz_state(get("n"))
        if name == "acin":
            return make_acin_state(get("lambdas"), float(get("theta", 0.0)))
        if name == "symmetric_product":
            a = _complex(get("a"), "params.a")
            b = _complex(get("b"), "params.b")
            return make_symmetric_product(a, b, get("n"))
        if name in families.FAMILIES:
            return families.realize(name, get("n"), float(get("p")))
    except StateDocumentError:
        raise
    except (ValueError, TypeError) as exc:
        raise StateDocumentError("params", str(exc)) from None
    raise StateDocumentError("name", f"unknown family {name!r}; expected one of {STATE_FAMILIES}")


def parse_state(doc):
    """Turn a decoded JSON document into a pure vector, :class:`Ensemble`
    or dense density matrix."""
    if not isinstance(doc, dict):
        raise StateDocumentError("<root>", "expected a JSON object")
    kind = _require(doc, "kind")
    try:
        if kind == "pure":
            psi = _vector(_require(doc, "amplitudes"), "amplitudes")
            try:
                psi, n = check_pure_state(psi)
            except ValueError as exc:
                raise StateDocumentError("amplitudes", str(exc)) from None
            _check_n(doc, n)
            return psi
        if kind == "ensemble":
            terms = _require(doc, "terms")
            if not isinstance(terms, list) or not terms:
                raise StateDocumentError("terms", "expected a nonempty list")
            weights, states = [], []
            for i, term in enumerate(terms):
                weights.append(float(_require(term, "weight", f"terms[{i}].")))
                states.append(_vector(_require(term, "amplitudes", f"terms[{i}]."), f"terms[{i}].amplitudes"))
            if len({s.shape for s in states}) != 1:
                raise StateDocumentError("terms", "terms have different lengths")
            try:
                ens = Ensemble(weights, np.stack(states))
            except ValueError as exc:
                raise StateDocumentError("terms", str(exc)) from None
            _check_n(doc, ens.n_qubits)
            return ens
        if kind == "dense":
            rows = _require(doc, "matrix")
            if not isinstance(rows, list) or not rows:
                raise StateDocumentError("matrix", "expected a nonempty list of rows")
            matrix = [_vector(r, f"matrix[{i}]") for i, r in enumerate(rows)]
            if len({len(r) for r in matrix}) != 1:
                raise StateDocumentError("matrix", "rows have different lengths")
            try:
                rho, n = check_density(np.stack(matrix))
            except ValueError as exc:
                raise StateDocumentError("matrix", str(exc)) from None
            _check_n(doc, n)
            return rho
        if kind == "family":
            return family_state(_require(doc, "name"), doc.get("params"))
    except (TypeError, AttributeError) as exc:
        raise StateDocumentError(str(kind), str(exc)) from None
    raise StateDocumentError("kind", f"unknown kind {kind!r}")


def load_state(path):
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise StateDocumentError("<json>", str(exc)) from None
    return parse_state(doc)


def _pairs(vec):
    return [[float(z.real), float(z.imag)] for z in vec]


def state_document(state):
    """Inverse of :func:`parse_state` for vectors, ensembles and matrices."""
    if isinstance(state, Ensemble):
        if state.diagonal is not None:
            raise ValueError("ensembles with a basis-diagonal part have no document form")
        return {
            "kind": "ensemble",
            "n_qubits": state.n_qubits,
            "terms": [
                {"weight": float(w), "amplitudes": _pairs(s)}
                for w, s in zip(state.weights, state.states)
            ],
        }
    arr = np.asarray(state, dtype=complex)
    n = arr.shape[0].bit_length() - 1
    if arr.ndim == 1:
        return {"kind": "pure", "n_qubits": n, "amplitudes": _pairs(arr)}
    return {"kind": "dense", "n_qubits": n, "matrix": [_pairs(row) for row in arr]}


def digest(doc):
    """Stable SHA-256 of a JSON-serializable document."""
    blob = json.dumps(doc, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()
