"""Command-line front end.

Every subcommand reads JSON (``-`` for standard input), writes JSON to
standard output or ``--output``, and exits 0 on success, 1 on domain errors
and 2 on usage errors.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence

from . import cones, di_simulation, jsonio, pauli, protocol, witness
from .linalg import SchmidtTerm, lambda_min

DEFAULT_SEED = 0


def _read_json(path: str):
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    return jsonio.loads(text, "<stdin>" if path == "-" else path)


def _read_state(path: str):
    return jsonio.state_from_json(_read_json(path), "state")


def _terms_to_json(terms: Sequence[SchmidtTerm]) -> list[dict]:
    return [
        {"coeff": t.coeff, "opA": jsonio.matrix_to_json(t.op_a), "opB": jsonio.matrix_to_json(t.op_b)}
        for t in terms
    ]


def _witness_to_json(w: witness.Witness) -> dict:
    return {
        "dims": list(w.dims),
        "x": jsonio.matrix_to_json(w.x),
        "alpha": w.alpha,
        "terms": _terms_to_json(w.terms),
        "target_value": w.target_value,
        "margin": w.margin,
        "kind": w.kind,
    }


def _witness_from_json(obj) -> witness.Witness:
    if not isinstance(obj, dict):
        raise jsonio.FormatError("witness: expected an object")
    for key in ("x", "alpha", "terms"):
        if key not in obj:
            raise jsonio.FormatError(f"witness: missing field '{key}'")
    x_obj = obj["x"]
    if not isinstance(x_obj, dict):
        raise jsonio.FormatError("witness.x: expected an object")
    x, dims = jsonio.state_from_json({**x_obj, "dims": obj["dims"]} if "dims" in obj else x_obj, "witness.x")
    terms = []
    for k, t in enumerate(obj["terms"]):
        where = f"witness.terms[{k}]"
        if not isinstance(t, dict) or not {"coeff", "opA", "opB"} <= t.keys():
            raise jsonio.FormatError(f"{where}: expected an object with coeff, opA, opB")
        terms.append(
            SchmidtTerm(
                float(t["coeff"]),
                jsonio.hermitian_from_json(t["opA"], f"{where}.opA"),
                jsonio.hermitian_from_json(t["opB"], f"{where}.opB"),
            )
        )
    return witness.Witness(
        x, float(obj["alpha"]), terms, float(obj.get("target_value", float("nan"))), dims, obj.get("kind", "state")
    )


def _read_povms(path: str, field: str) -> list[di_simulation.Povm]:
    """A JSON list of POVMs; each POVM is a list of matrices or ``{"effects": [...]}``."""
    obj = _read_json(path)
    if not isinstance(obj, list):
        raise jsonio.FormatError(f"{field}: expected a list of POVMs")
    povms = []
    for a, p in enumerate(obj):
        effects = p.get("effects") if isinstance(p, dict) else p
        if not isinstance(effects, list) or not effects:
            raise jsonio.FormatError(f"{field}[{a}]: expected a non-empty list of effects")
        povms.append(
            di_simulation.make_povm(
                [jsonio.matrix_from_json(e, f"{field}[{a}][{i}]") for i, e in enumerate(effects)]
            )
        )
    return povms


def _povms_to_json(povms: Sequence[di_simulation.Povm]) -> list[dict]:
    return [{"effects": [jsonio.matrix_to_json(e) for e in p.effects]} for p in povms]


def cmd_classify(args) -> dict:
    x, dims = _read_state(args.input)
    cls = cones.classify_state(x, dims, args.tol)
    bp = cones.is_block_positive(x, dims, args.tol)
    return {
        "class": str(cls),
        "lambda_min": lambda_min(x),
        "block_positivity_min": bp.min_value,
        "heuristic": bp.heuristic,
        "dims": list(dims),
    }


def cmd_witness_build(args) -> dict:
    x, dims = _read_state(args.input)
    return _witness_to_json(witness.build_witness(x, dims, args.tol))


def cmd_witness_eval(args) -> dict:
    x, dims = _read_state(args.input)
    w = _witness_from_json(_read_json(args.witness))
    value = witness.witness_value(w, x)
    return {"value": value, "alpha": w.alpha, "exceeds_alpha": value > w.alpha}


def cmd_di_simulate(args) -> dict:
    x, dims = _read_state(args.input)
    povms_a = _read_povms(args.povms_a, "povms_a") if args.povms_a else di_simulation.pauli_povms()
    povms_b = _read_povms(args.povms_b, "povms_b") if args.povms_b else di_simulation.pauli_povms()
    sim = di_simulation.build_simulation(x, dims, povms_a, povms_b, tol=args.tol)
    return {
        "sigma": jsonio.state_to_json(sim.sigma, sim.sigma_dims),
        "bob_povms": _povms_to_json(sim.bob_povms),
        "max_deviation": sim.max_deviation,
    }


def cmd_pauli_scan(args) -> dict:
    x, _ = _read_state(args.input)
    res = pauli.max_a_pauli(x, args.method)
    return {
        "a_prime": pauli.a_pauli_prime(x),
        "T": res.correlation.tolist(),
        "max_value": res.max_value,
        "uA": jsonio.matrix_to_json(res.u_a),
        "uB": jsonio.matrix_to_json(res.u_b),
        "method": res.method,
    }


def cmd_protocol_run(args) -> dict:
    x, dims = _read_state(args.input)
    if args.witness:
        w = _witness_from_json(_read_json(args.witness))
        terms, alpha = w.observables(), w.alpha
    else:
        if dims != (2, 2):
            raise ValueError("the Pauli observables need a 2 x 2 state; pass --witness")
        terms, alpha = protocol.pauli_terms(), 1.0
    rep = protocol.run_protocol(x, terms, alpha, args.n, args.seed, args.visibility)
    out = {
        "n": rep.n,
        "m": rep.m,
        "empirical_mean": rep.empirical_mean,
        "std_error": rep.std_error,
        "alpha": rep.alpha,
        "margin": rep.margin,
        "decision": rep.decision,
        "pair_means": list(rep.pair_means),
        "seed": args.seed,
    }
    if args.trials:
        out["trials"] = args.trials
        out["detection_power"] = protocol.detection_power(
            x, terms, alpha, args.n, args.trials, args.seed, args.visibility
        )
    return out


def cmd_gen(args) -> dict:
    if args.kind == "rho-max":
        return jsonio.state_to_json(cones.rho_max(), (2, 2))
    if args.kind == "phi":
        return jsonio.state_to_json(cones.phi_plus(), (2, 2))
    if args.kind == "random-bq-pure":
        out = jsonio.state_to_json(cones.random_beyond_quantum_pure(args.seed), (2, 2))
        out["seed"] = args.seed
        return out
    if args.kind == "depolarize":
        if args.input is None or args.visibility is None:
            raise UsageError("gen depolarize needs --input and --visibility")
        x, dims = _read_state(args.input)
        y = cones.depolarize(x, args.visibility)
        return jsonio.state_to_json((y + y.conj().T) / 2, dims)
    raise UsageError(f"unknown generator {args.kind!r}")


class UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-o", "--output", help="write JSON here instead of standard output")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--tol", type=float, default=1e-10)

    state = argparse.ArgumentParser(add_help=False)
    state.add_argument("-i", "--input", "--state", dest="input", required=True, help="state JSON file, '-' for stdin")

    parser = argparse.ArgumentParser(prog="beyondq", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common, state], help="place a state in SEP / SES / SEP*")
    p.set_defaults(func=cmd_classify)

    wit = sub.add_parser("witness", help="build or evaluate a witness")
    wsub = wit.add_subparsers(dest="action", required=True)
    p = wsub.add_parser("build", parents=[common, state])
    p.set_defaults(func=cmd_witness_build)
    p = wsub.add_parser("eval", parents=[common, state])
    p.add_argument("--witness", required=True)
    p.set_defaults(func=cmd_witness_eval)

    p = sub.add_parser("di-simulate", parents=[common, state], help="quantum simulation of a block-positive state")
    p.add_argument("--povms-a", help="JSON list of Alice POVMs (default: Pauli measurements)")
    p.add_argument("--povms-b", help="JSON list of Bob POVMs (default: Pauli measurements)")
    p.set_defaults(func=cmd_di_simulate)

    p = sub.add_parser("pauli-scan", parents=[common, state], help="maximize the Pauli functional")
    p.add_argument("--method", choices=["closed-form", "search"], default="closed-form")
    p.set_defaults(func=cmd_pauli_scan)

    prot = sub.add_parser("protocol", help="Monte-Carlo detection protocol")
    psub = prot.add_subparsers(dest="action", required=True)
    p = psub.add_parser("run", parents=[common, state])
    p.add_argument("--witness", help="witness JSON (default: Pauli pairs with alpha = 1)")
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--trials", type=int, default=0)
    p.add_argument("--visibility", type=float)
    p.set_defaults(func=cmd_protocol_run)

    p = sub.add_parser("gen", parents=[common], help="generate a state")
    p.add_argument("kind", choices=["rho-max", "phi", "random-bq-pure", "depolarize"])
    p.add_argument("-i", "--input", help="input state (depolarize)")
    p.add_argument("--visibility", type=float)
    p.set_defaults(func=cmd_gen)
    return parser


def _check_paths(parser: argparse.ArgumentParser, args) -> None:
    for name in ("input", "witness", "povms_a", "povms_b"):
        path = getattr(args, name, None)
        if path and path != "-" and not Path(path).is_file():
            parser.error(f"--{name.replace('_', '-')}: no such file: {path}")


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _check_paths(parser, args)
    try:
        result = args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    text = jsonio.dumps(result) + "\n"
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
