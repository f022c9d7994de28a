"""Command-line front end.

Usage::

    wwitness info --n 3
    wwitness eval --family w --n 3
    wwitness eval --state rho.json --alpha 0.6666666666666666
    wwitness alpha --family w --n 5 --seed 7 --oracle symmetric
    wwitness schmidt --family w --n 5 --subset 2,4
    wwitness sweep --family w_white_noise --n 4 --step 0.01 --format csv
    wwitness verify --n 3..6

Exit codes: 0 ok, 1 input error, 2 verification failure, 3 non-convergence.
Errors go to stderr as one JSON line.
"""

import argparse
import csv
import io as _io
import json
import sys
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import families, verify
from .bipartition import Bipartition, bipartitions, largest_schmidt_coefficient, w_state_claim
from .io import StateDocumentError, digest, load_state, parse_state
from .linalg import ConvergenceError
from .product import OptimizerConfig, brute_force_alpha_grid, closest_product_alpha
from .states import Ensemble, check_n_qubits, check_pure_state, make_w_state
from .witness import (
    bounds_table,
    build_custom_witness,
    build_witness,
    classify,
    expectation,
    witness_coefficient,
)

EXIT_INPUT = 1
EXIT_VERIFY = 2
EXIT_CONVERGENCE = 3


@dataclass
class Output:
    result: object
    source: object
    rows: list
    csv: str | None = None


class CliError(Exception):
    def __init__(self, code, kind, message, field=None):
        super().__init__(message)
        self.code = code
        self.kind = kind
        self.field = field


def _input_error(message, field=None):
    return CliError(EXIT_INPUT, "input", message, field)


def _state_doc(args):
    """State document named by ``--state`` or ``--family``/``--params``."""
    if args.state and args.family:
        raise _input_error("give either --state or --family, not both", "state")
    if args.state:
        with open(args.state, encoding="utf-8") as fh:
            try:
                return json.load(fh)
            except json.JSONDecodeError as exc:
                raise _input_error(str(exc), "state") from None
    if not args.family:
        raise _input_error("a state is required: --state FILE or --family NAME", "family")
    try:
        params = json.loads(args.params) if args.params else {}
    except json.JSONDecodeError as exc:
        raise _input_error(f"--params is not valid JSON: {exc}", "params") from None
    if not isinstance(params, dict):
        raise _input_error("--params must be a JSON object", "params")
    if args.n is not None:
        params.setdefault("n", args.n)
    return {"kind": "family", "name": args.family, "params": params}


def _load(args):
    doc = _state_doc(args)
    return parse_state(doc), doc


def _n_of(state):
    if isinstance(state, Ensemble):
        return state.n_qubits
    return int(np.asarray(state).shape[0]).bit_length() - 1


def _require_pure(state):
    if isinstance(state, Ensemble) or np.asarray(state).ndim != 1:
        raise _input_error("this command needs a pure state", "state")
    return check_pure_state(state)


def _fraction_text(x):
    return f"{x.numerator}/{x.denominator}"


def cmd_info(args):
    if args.n is None:
        raise _input_error("--n is required", "n")
    n = check_n_qubits(args.n)
    table = bounds_table(n)
    result = table.to_dict()
    result["c_exact"] = _fraction_text(witness_coefficient(n, exact=True))
    result["d_k_min_exact"] = [
        _fraction_text(witness_coefficient(n, exact=True) - Fraction(n - k, n))
        for k in range(1, n // 2 + 1)
    ]
    rows = [
        ("c_n", table.c),
        ("eigenvalue (x 2^n - 1)", table.alpha),
        ("eigenvalue (x 1)", table.alpha - 1.0),
        ("global min", table.global_min),
        ("global max", table.global_max),
        ("fully separable min", table.full_sep_min),
    ] + [(f"D_{k} min", v) for k, v in enumerate(table.dk_min, start=1)]
    return Output(result, {"n": n}, rows)


def cmd_eval(args):
    state, doc = _load(args)
    n = _n_of(state)
    if args.reference:
        ref = load_state(args.reference)
        ref, _ = _require_pure(ref)
    else:
        ref = make_w_state(n)
    if args.reference or args.alpha is not None:
        alpha = witness_coefficient(n) if args.alpha is None else args.alpha
        witness = build_custom_witness(ref, alpha)
    else:
        witness = build_witness(n)
    t = expectation(witness, state)
    verdict = classify(t, n, witness.alpha) if witness.is_w_witness else None
    result = {
        "n_qubits": n,
        "witness": {"alpha": witness.alpha, "reference": "w" if witness.is_w_witness else "custom"},
        "trace": t,
        "verdict": verdict.to_dict() if verdict else None,
    }
    rows = [("alpha", witness.alpha), ("trace", t)]
    if verdict:
        rows += [("verdict", verdict.label), ("margin", verdict.margin)]
    return Output(result, doc, rows)


def cmd_alpha(args):
    state, doc = _load(args)
    psi, n = _require_pure(state)
    cfg = OptimizerConfig(
        restarts=args.restarts, tol=args.tol, max_sweeps=args.max_sweeps, seed=args.seed
    )
    res = closest_product_alpha(psi, cfg, n_jobs=args.jobs)
    result = res.to_dict()
    rows = [("alpha", res.alpha), ("converged", res.converged), ("sweeps", res.sweeps_used)]
    if args.oracle != "none":
        mode = "full" if args.oracle == "grid" else "symmetric"
        oracle = brute_force_alpha_grid(psi, args.grid_steps, mode=mode)
        result["oracle"] = {"mode": args.oracle, "grid_steps": args.grid_steps, "alpha": oracle}
        rows.append((f"oracle ({args.oracle})", oracle))
    if not res.converged:
        result["error"] = "non-convergence"
    return Output(result, doc, rows)


def _parse_subset(text):
    try:
        return tuple(int(q) for q in text.split(",") if q.strip())
    except ValueError:
        raise _input_error(f"--subset must be comma-separated qubit indices, got {text!r}", "subset")


def cmd_schmidt(args):
    state, doc = _load(args)
    psi, n = _require_pure(state)
    if args.subset:
        try:
            cuts = [Bipartition(n, _parse_subset(args.subset))]
        except ValueError as exc:
            raise _input_error(str(exc), "subset") from None
    else:
        cuts = [cut for k in range(1, n // 2 + 1) for cut in bipartitions(n, k)]
    is_w = abs(abs(np.vdot(make_w_state(n), psi)) - 1.0) < 1e-12
    records, rows = [], []
    for cut in cuts:
        sigma = largest_schmidt_coefficient(psi, cut, tol=args.tol)
        claim = w_state_claim(n, cut.k) if is_w else None
        records.append(
            {
                "subset": list(cut.subset),
                "sigma_max": sigma,
                "claim": claim,
                "abs_error": abs(sigma - claim) if claim is not None else None,
            }
        )
        rows.append((",".join(map(str, cut.subset)), sigma))
    result = records[0] if args.subset else records
    return Output(result, doc, rows)


def cmd_sweep(args):
    if args.n is None:
        raise _input_error("--n is required", "n")
    n = check_n_qubits(args.n)
    records = families.sweep(args.family, n, args.p_from, args.p_to, args.step, n_jobs=args.jobs)
    result = {
        "family": args.family,
        "n_qubits": n,
        "records": [{"p": p, **v.to_dict()} for p, _, v in records],
    }
    if n == 3:
        result["note"] = families.THREE_TANGLE_NOTE
    rows = [(f"p={p:.6g}", f"{t:+.6f}  {v.label}") for p, t, v in records]
    return Output(result, {"family": args.family, "n": n}, rows, sweep_csv(records))


def sweep_csv(records):
    k_max = len(records[0][2].excluded_from_dk) if records else 0
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(
        ["p", "trace", "not_fully_separable"]
        + [f"excluded_d{k}" for k in range(1, k_max + 1)]
        + ["genuine"]
    )
    for p, t, v in records:
        writer.writerow(
            [repr(p), repr(t), int(v.not_fully_separable)]
            + [int(x) for x in v.excluded_from_dk]
            + [int(v.genuine_entangled)]
        )
    return buf.getvalue()


def _parse_range(text):
    text = str(text)
    if ".." in text:
        lo, hi = text.split("..", 1)
        lo, hi = int(lo), int(hi)
    else:
        lo = hi = int(text)
    if lo > hi:
        raise ValueError(f"empty range {text!r}")
    return [check_n_qubits(n) for n in range(lo, hi + 1)]


def cmd_verify(args):
    try:
        n_values = _parse_range(args.n if args.n is not None else "3..6")
    except ValueError as exc:
        raise _input_error(str(exc), "n") from None
    results = verify.run_all(n_values, seed=args.seed, trials=args.trials)
    result = {
        "passed": all(r.passed for r in results),
        "checks": [r.to_dict() for r in results],
    }
    rows = [
        (f"{r.name} n={r.n_qubits}", f"{'PASS' if r.passed else 'FAIL'}  err={r.error:.3e}  tol={r.tolerance:.0e}")
        for r in results
    ]
    return Output(result, {"n": args.n}, rows)


def _n_arg(text):
    # verify takes a range such as 3..6; other commands an integer
    return text if ".." in text else int(text)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(EXIT_INPUT, json.dumps({"error": "usage", "message": message}) + "\n")


def build_parser():
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--n", type=_n_arg, default=None, help="number of qubits (verify: range a..b)")
    shared.add_argument("--seed", type=int, default=0)
    shared.add_argument("--tol", type=float, default=1e-12)
    shared.add_argument("--format", choices=("json", "csv", "pretty"), default="json")
    shared.add_argument("--pretty", dest="format", action="store_const", const="pretty")
    shared.add_argument("--out", default=None, help="write output to FILE instead of stdout")
    shared.add_argument("--timing", action="store_true", help="include wall-clock duration")
    shared.add_argument("--jobs", type=int, default=None, help="worker threads")

    state = argparse.ArgumentParser(add_help=False)
    state.add_argument("--state", default=None, help="JSON state document")
    state.add_argument("--family", default=None, help="named state family")
    state.add_argument("--params", default=None, help="family parameters as a JSON object")

    parser = _Parser(prog="wwitness", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("info", parents=[shared], help="witness coefficient and bounds table")
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("eval", parents=[shared, state], help="evaluate and classify a state")
    p.add_argument("--alpha", type=float, default=None, help="custom witness coefficient")
    p.add_argument("--reference", default=None, help="pure-state document for a custom reference")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("alpha", parents=[shared, state], help="closest product state overlap")
    p.add_argument("--restarts", type=int, default=32)
    p.add_argument("--max-sweeps", type=int, default=500)
    p.add_argument("--oracle", choices=("none", "grid", "symmetric"), default="none")
    p.add_argument("--grid-steps", type=int, default=60)
    p.set_defaults(func=cmd_alpha)

    p = sub.add_parser("schmidt", parents=[shared, state], help="largest Schmidt coefficients")
    p.add_argument("--subset", default=None, help="comma-separated qubits, e.g. 2,4")
    p.set_defaults(func=cmd_schmidt)

    p = sub.add_parser("sweep", parents=[shared], help="scan a mixture family over p")
    p.add_argument("--family", required=True, choices=families.FAMILIES)
    p.add_argument("--from", dest="p_from", type=float, default=0.0)
    p.add_argument("--to", dest="p_to", type=float, default=1.0)
    p.add_argument("--step", type=float, default=0.01)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", parents=[shared], help="run the self-verification suite")
    p.add_argument("--trials", type=int, default=1000)
    p.set_defaults(func=cmd_verify)
    return parser


def _command_echo(args):
    skip = {"func", "out", "format", "jobs", "timing"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _render(args, out, elapsed):
    if args.format == "csv":
        if out.csv is None:
            raise _input_error("csv output is only available for sweep", "format")
        return out.csv
    if args.format == "pretty":
        width = max((len(str(label)) for label, _ in out.rows), default=0)
        return "".join(f"{str(label):<{width}}  {value}\n" for label, value in out.rows)
    report = {
        "command": _command_echo(args),
        "input_digest": digest(out.source),
        "seed": args.seed,
        "result": out.result,
    }
    if args.timing:
        report["duration_s"] = elapsed
    return json.dumps(report, indent=2) + "\n"


def _fail(err):
    payload = {"error": err.kind, "message": str(err).replace("\n", " ")}
    if err.field:
        payload["field"] = err.field
    sys.stderr.write(json.dumps(payload) + "\n")
    return err.code


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        if args.command != "verify" and isinstance(args.n, str):
            raise _input_error(f"--n must be an integer for {args.command}", "n")
        out = args.func(args)
        text = _render(args, out, time.perf_counter() - start)
    except CliError as err:
        return _fail(err)
    except StateDocumentError as exc:
        return _fail(CliError(EXIT_INPUT, "input", str(exc), exc.field))
    except ConvergenceError as exc:
        return _fail(CliError(EXIT_CONVERGENCE, "non-convergence", str(exc)))
    except (ValueError, OSError) as exc:
        return _fail(CliError(EXIT_INPUT, "input", str(exc)))

    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)

    if args.command == "verify" and not out.result["passed"]:
        return EXIT_VERIFY
    if args.command == "alpha" and not out.result["converged"]:
        return EXIT_CONVERGENCE
    return 0


if __name__ == "__main__":
    sys.exit(main())
