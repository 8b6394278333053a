"""Command-line interface.

One subcommand per invocation; every report is a deterministic JSON
document written to --out or standard output (--output text renders the
same structure for reading). Exit codes: 0 success, 1 invalid input,
2 internal inconsistency, 3 size-limit refusal.
"""

import argparse
import json
import sys

from . import analysis, catalog, classify, protocol, rectrep, states
from .errors import LoccError, MalformedInput, SizeLimit
from .numerics import TolerancePolicy


def _read_file(path):
    try:
        with open(path, "rb") as fh:
            return fh.read()
    except OSError as exc:
        raise MalformedInput(f"cannot read {path}: {exc}") from exc


def _load_states(path, tolerance):
    ops = states.parse_states(_read_file(path))
    if tolerance is not None:
        # flag beats file beats default
        tol = TolerancePolicy(tolerance)
        ops = states.OrthogonalProductSet(ops.dim_a, ops.dim_b, list(ops), tol)
    return ops


def _witnesses_json(witnesses):
    out = {}
    for name, w in witnesses.items():
        if isinstance(w, analysis.ReducibilityWitness):
            out[name] = {
                "side": w.side,
                "partition": [list(w.part1), list(w.part2)],
            }
        elif isinstance(w, analysis.ExtensionWitness):
            out[name] = {
                "subset": list(w.subset),
                "state": {
                    "a": states._vector_json(w.state.a),
                    "b": states._vector_json(w.state.b),
                },
            }
        elif isinstance(w, states.ProductState):
            out[name] = {
                "a": states._vector_json(w.a),
                "b": states._vector_json(w.b),
            }
        elif isinstance(w, tuple):
            out[name] = list(w)
        else:
            out[name] = w
    return out


def _classification_json(ops, result):
    return {
        "valid": True,
        "dims": [ops.dim_a, ops.dim_b],
        "size": len(ops),
        "verdict": result.verdict,
        "class": result.class_tag,
        "rationale": result.rationale,
        "witnesses": _witnesses_json(result.witnesses),
    }


def _cmd_validate(args):
    ops = _load_states(args.states, args.tolerance)
    return {
        "valid": True,
        "dims": [ops.dim_a, ops.dim_b],
        "size": len(ops),
        "labels": ops.labels,
    }


def _cmd_analyze(args):
    ops = _load_states(args.states, args.tolerance)
    red = analysis.reducibility_witness(ops)
    report = {
        "valid": True,
        "dims": [ops.dim_a, ops.dim_b],
        "size": len(ops),
        "irreducible": red is None,
        "side_members": {
            "a": len(states.side_set(ops, "A")),
            "b": len(states.side_set(ops, "B")),
        },
        "aligned_pairs": [
            [i, j, side] for i, j, side in states.aligned_pairs(ops)
        ],
    }
    if red is not None:
        report["reducibility"] = _witnesses_json({"w": red})["w"]
    if len(ops) < ops.dim_a * ops.dim_b:
        try:
            witness = analysis.extension_witness(ops)
        except SizeLimit:
            report["extendable"] = None
        else:
            report["extendable"] = witness is not None
            report["upb"] = witness is None
            if witness is not None:
                report["extension"] = _witnesses_json({"w": witness})["w"]
    return report


def _cmd_classify(args):
    ops = _load_states(args.states, args.tolerance)
    result = classify.classify_general(ops)
    return _classification_json(ops, result)


def _cmd_complement(args):
    ops = _load_states(args.states, args.tolerance)
    comp = analysis.orthogonal_complement(ops)
    single = states.OrthogonalProductSet(ops.dim_a, ops.dim_b, [comp], ops.tol)
    return states.states_to_json(single)


def _cmd_rectrep(args):
    ops = _load_states(args.states, args.tolerance)
    if args.construct:
        rep = rectrep.construct_rect_rep_3x3(ops)
        return rectrep.rep_to_json(rep)
    rep = rectrep.search_rect_rep(ops)
    return {"result": rectrep.rep_to_json(rep) if rep is not None else None}


def _cmd_protocol(args):
    ops = _load_states(args.states, args.tolerance)
    if args.propdist is not None:
        rep = rectrep.construct_rect_rep_3x3(ops)
        tree = protocol.gen_propdist_protocol(ops, rep, args.propdist, ops.tol)
    elif args.two_copy:
        rep = rectrep.construct_rect_rep_3x3(ops)
        tree = protocol.gen_two_copy_protocol(ops, rep, ops.tol)
    else:
        tree = protocol.synthesize_protocol(ops, args.max_depth, ops.tol)
        if tree is None:
            return {"result": None}
    return protocol.tree_to_json(tree)


def _cmd_simulate(args):
    tree = protocol.tree_from_json(_read_file(args.protocol).decode("utf-8"))
    ops = _load_states(args.states, args.tolerance)
    report = protocol.reliability(tree, ops, ops.tol)
    return report.to_json()


def _cmd_family(args):
    spec = catalog.family_from_string(args.spec, seed=args.seed, theta=args.theta)
    tol = TolerancePolicy(args.tolerance) if args.tolerance is not None else None
    ops = catalog.family(spec, tol) if tol else catalog.family(spec)
    return states.states_to_json(ops)


def _render_text(doc, indent=0):
    pad = "  " * indent
    lines = []
    if isinstance(doc, dict):
        for key, value in doc.items():
            if isinstance(value, (dict, list)) and value:
                lines.append(f"{pad}{key}:")
                lines.append(_render_text(value, indent + 1))
            else:
                lines.append(f"{pad}{key}: {json.dumps(value)}")
    elif isinstance(doc, list):
        for value in doc:
            if isinstance(value, (dict, list)):
                lines.append(_render_text(value, indent + 1))
            else:
                lines.append(f"{pad}- {json.dumps(value)}")
    else:
        lines.append(f"{pad}{json.dumps(doc)}")
    return "\n".join(lines)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="loccdist",
        description=(
            "Decide whether orthogonal bipartite product states can be "
            "reliably distinguished by local operations and classical "
            "communication; build and verify the distinguishing protocols."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_states=True):
        if needs_states:
            p.add_argument("states", help="states file (JSON)")
        p.add_argument("--tolerance", type=float, default=None,
                       help="override the file-level zero tolerance")
        p.add_argument("--output", choices=("json", "text"), default="json")
        p.add_argument("--out", default=None, help="write the report to a file")

    p = sub.add_parser("validate", help="validate a states file")
    common(p)
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("analyze", help="structural report: irreducibility, alignment, extendability")
    common(p)
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("classify", help="LOCC distinguishability verdict")
    common(p)
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("complement", help="unique product state completing an (mn-1)-state set")
    common(p)
    p.set_defaults(func=_cmd_complement)

    p = sub.add_parser("rectrep", help="rectangular representation (construct or search)")
    common(p)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--construct", action="store_true",
                       help="constructive builder for irreducible 3x3 bases")
    group.add_argument("--search", action="store_true",
                       help="exhaustive existence search (grids up to 12 cells)")
    p.set_defaults(func=_cmd_rectrep)

    p = sub.add_parser("protocol", help="generate a distinguishing protocol")
    common(p)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--propdist", metavar="LABEL", default=None,
                       help="one-copy protocol for the basis minus the named state")
    group.add_argument("--two-copy", action="store_true",
                       help="two-copy protocol for a represented basis")
    group.add_argument("--synthesize", action="store_true",
                       help="best-effort bounded search for a one-copy protocol")
    p.add_argument("--max-depth", type=int, default=8)
    p.set_defaults(func=_cmd_protocol)

    p = sub.add_parser("simulate", help="verify a protocol file against a states file")
    p.add_argument("protocol", help="protocol file (JSON)")
    common(p)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("family", help="emit a built-in family as a states file")
    p.add_argument("spec", help="b9 | b8 | b9_minus:<label> | theta_2x4 | "
                                "rect_random | class3_random | upb_example")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--theta", type=float, default=None)
    p.add_argument("--tolerance", type=float, default=None)
    p.add_argument("--output", choices=("json", "text"), default="json")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_family)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = args.func(args)
    except LoccError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    if args.output == "json":
        rendered = json.dumps(report, indent=2)
    else:
        rendered = _render_text(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(rendered + "\n")
    else:
        print(rendered)
    return 0


if __name__ == "__main__":
    sys.exit(main())
