"""Command line front end over the canonical instance format.

Subcommands: generate, recognize, analyze, certify, verify, export-dot.
Exit codes: 0 success or YES, 1 NO or failed verification, 2 malformed
input, 3 enumeration cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys

from . import __version__
from .acceptance import DEFAULT_SEED, PROFILES, run_all
from .certificate import (
    CertificateError,
    check_feasible,
    check_imc,
    containment_witnesses,
    extremal_pair,
    grow_trace,
)
from .construct import (
    ConstructionError,
    ElementarySpec,
    IterationChoice,
    VerificationError,
    build_elementary,
    generate_bad_instance,
    single_block_spec,
)
from .instance import (
    InstanceFormatError,
    canonical_json,
    instance_to_dot,
    load_instance,
    to_payload,
)
from .oracle import (
    DEFAULT_ENUMERATION_CAP,
    EnumerationCapExceeded,
    build_rg,
    rg_status,
)
from .recognize import recognize

CAP_ENV_VAR = "ITRG_ENUM_CAP"


def _resolve_cap(args: argparse.Namespace) -> int:
    if args.cap is not None:
        return args.cap
    env = os.environ.get(CAP_ENV_VAR)
    if env is not None:
        return int(env)
    return DEFAULT_ENUMERATION_CAP


def _emit(payload: dict, output: str | None) -> None:
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _write(text: str, output: str | None) -> None:
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _spec_payload(spec: ElementarySpec) -> dict:
    return {
        "parts": [list(p) for p in spec.parts],
        "targets": [list(t) for t in spec.targets],
    }


def _spec_from_payload(payload: dict) -> ElementarySpec:
    return ElementarySpec(
        tuple((int(a), int(b)) for a, b in payload["parts"]),
        tuple(tuple(int(x) for x in t) for t in payload["targets"]),
    )


def _cmd_generate(args: argparse.Namespace) -> int:
    cap = _resolve_cap(args)
    rng = random.Random(args.seed)
    spec = single_block_spec(args.delta)
    steps: list[IterationChoice] = []
    if args.choices != "random":
        with open(args.choices, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        if "base" in data:
            spec = _spec_from_payload(data["base"])
        steps = [
            IterationChoice(int(s["donor_block"]), tuple(int(v) for v in s["to_a"]))
            for s in data["steps"]
        ]
        if args.iterations and args.iterations != len(steps):
            raise ConstructionError(
                f"--iterations {args.iterations} but choices file has {len(steps)} steps"
            )
    else:
        current = build_elementary(spec, cap=cap)
        for _ in range(args.iterations):
            donor = rng.randrange(current.m)
            to_a = tuple(sorted(rng.sample(list(current.blocks[donor]), args.delta)))
            steps.append(IterationChoice(donor, to_a))
            current = generate_bad_instance(
                args.delta, spec=spec, iterations=len(steps), choices=steps, cap=cap
            )
    instance = generate_bad_instance(
        args.delta,
        spec=spec,
        iterations=len(steps),
        choices=steps,
        verify=args.verify,
        cap=cap,
    )
    _write(canonical_json(instance), args.output)
    if args.trace:
        trace = {
            "tool_version": __version__,
            "seed": args.seed,
            "delta": args.delta,
            "base": _spec_payload(spec),
            "steps": [
                {"donor_block": s.donor_block, "to_a": list(s.to_a)} for s in steps
            ],
        }
        _emit(trace, args.trace)
    return 0


def _cmd_recognize(args: argparse.Namespace) -> int:
    instance = load_instance(args.input)
    verdict, trace = recognize(instance, args.delta)
    payload = {
        "tool_version": __version__,
        "verdict": "YES" if verdict else "NO",
        "reason": trace.reason,
        "failed_step": trace.failed_step,
        "peels": [
            {
                "a_side": list(s.a_side),
                "b_side": list(s.b_side),
                "block_i": s.block_i,
                "block_j": s.block_j,
                "residue_i": list(s.residue_i),
                "residue_j": list(s.residue_j),
                "kept_vertices": list(s.kept_vertices),
                "merged_block": s.merged_block,
            }
            for s in trace.steps
        ],
        "terminal": to_payload(trace.terminal) if trace.terminal else None,
        "association": [list(pair) for pair in trace.association]
        if trace.association
        else None,
    }
    _emit(payload, args.output)
    return 0 if verdict else 1


def _cmd_analyze(args: argparse.Namespace) -> int:
    cap = _resolve_cap(args)
    instance = load_instance(args.input)
    rg = build_rg(instance, cap)
    payload = {
        "tool_version": __version__,
        "transversal_count": len(rg.its),
        "rg_edge_count": rg.edge_count,
        "rg_component_count": rg.component_count if rg.its else 0,
        "status": rg_status(instance, cap).value,
    }
    _emit(payload, args.output)
    return 0


def _forest_dot(tup) -> str:
    lines = ["graph blockforest {"]
    for node in sorted(tup.forest.nodes):
        shape = "doublecircle" if node in tup.roots else "circle"
        lines.append(f'  {node} [label="U{node}", shape={shape}];')
    for a, b in tup.forest.edges:
        lines.append(f"  {a} -- {b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _cmd_certify(args: argparse.Namespace) -> int:
    cap = _resolve_cap(args)
    instance = load_instance(args.input)
    rg = build_rg(instance, cap)
    s, t, rg = extremal_pair(instance, rg=rg, cap=cap)
    tup, steps = grow_trace(instance, s, t, rg, cap)
    feasibility = check_feasible(instance, tup, rg)
    report = check_imc(instance, tup, rg)
    witnesses = containment_witnesses(instance, cap=cap, rg=rg)
    payload = {
        "tool_version": __version__,
        "pair": {
            "s": list(tup.s.choice),
            "t": list(tup.t.choice),
            "component_labels": [tup.c0, tup.c1],
        },
        "grown_set": sorted(tup.r),
        "stars": [
            {"center": center, "leaves": list(leaves)} for center, leaves in tup.stars
        ],
        "forest": {
            "nodes": sorted(tup.forest.nodes),
            "edges": [list(e) for e in tup.forest.edges],
            "roots": list(tup.roots),
        },
        "growth": [
            {
                "chosen": step.chosen,
                "candidate": list(step.candidate),
                "added": list(step.added),
            }
            for step in steps
        ],
        "feasibility": feasibility,
        "configuration": {
            "is_imc": report.is_imc,
            "full_index": report.full_index,
            "covers_pair": report.covers_pair,
            "induced_matching": report.induced_matching,
            "swapped_blocks_are_cycles": report.swapped_blocks_are_cycles,
            "unique_anchor": report.unique_anchor,
            "pair_neighborhoods_confined": report.pair_neighborhoods_confined,
            "center_neighborhoods_descend": report.center_neighborhoods_descend,
        },
        "witnesses": {
            str(i): {
                "vertex": w.vertex,
                "side": list(w.side),
                "component_index": w.component_index,
            }
            for i, w in witnesses.items()
        },
    }
    _emit(payload, args.output)
    if args.dot:
        _write(_forest_dot(tup), args.dot)
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    results = run_all(profile=args.profile, seed=args.seed)
    all_ok = True
    for result in results:
        mark = "PASS" if result.passed else "FAIL"
        print(f"{mark} {result.name}: {result.detail}")
        all_ok = all_ok and result.passed
    return 0 if all_ok else 1


def _cmd_export_dot(args: argparse.Namespace) -> int:
    cap = _resolve_cap(args)
    instance = load_instance(args.input)
    prefix = args.output or "instance"
    with open(f"{prefix}.graph.dot", "w", encoding="utf-8") as fh:
        fh.write(instance_to_dot(instance))
    from .oracle import rg_to_dot

    rg = build_rg(instance, cap)
    with open(f"{prefix}.rg.dot", "w", encoding="utf-8") as fh:
        fh.write(rg_to_dot(rg))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="itrg",
        description="Independent transversals, reconfiguration graphs, and extremal instances",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="build an extremal instance")
    gen.add_argument("--delta", type=int, required=True)
    gen.add_argument("--iterations", type=int, default=0)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument(
        "--choices",
        default="random",
        help='"random" (default) or a JSON file with explicit base and steps',
    )
    gen.add_argument("--output", help="instance JSON path (default stdout)")
    gen.add_argument("--trace", help="construction trace JSON path")
    gen.add_argument("--cap", type=int)
    verify_group = gen.add_mutually_exclusive_group()
    verify_group.add_argument("--verify", dest="verify", action="store_true", default=True)
    verify_group.add_argument("--no-verify", dest="verify", action="store_false")
    gen.set_defaults(handler=_cmd_generate)

    rec = sub.add_parser("recognize", help="decide membership in the extremal family")
    rec.add_argument("--input", required=True)
    rec.add_argument("--output")
    rec.add_argument("--delta", type=int)
    rec.set_defaults(handler=_cmd_recognize)

    ana = sub.add_parser("analyze", help="count transversals and components")
    ana.add_argument("--input", required=True)
    ana.add_argument("--output")
    ana.add_argument("--cap", type=int)
    ana.set_defaults(handler=_cmd_analyze)

    cert = sub.add_parser("certify", help="extract the matching-configuration certificate")
    cert.add_argument("--input", required=True)
    cert.add_argument("--output")
    cert.add_argument("--dot", help="write the block forest as DOT here")
    cert.add_argument("--cap", type=int)
    cert.set_defaults(handler=_cmd_certify)

    ver = sub.add_parser("verify", help="run the acceptance property suite")
    ver.add_argument("--profile", choices=sorted(PROFILES), default="full")
    ver.add_argument("--seed", type=int, default=DEFAULT_SEED)
    ver.set_defaults(handler=_cmd_verify)

    dot = sub.add_parser("export-dot", help="write DOT files for the graph and its reconfiguration graph")
    dot.add_argument("--input", required=True)
    dot.add_argument("--output", help="path prefix (default: instance)")
    dot.add_argument("--cap", type=int)
    dot.set_defaults(handler=_cmd_export_dot)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except EnumerationCapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (InstanceFormatError, json.JSONDecodeError, OSError, KeyError) as exc:
        print(f"error: malformed input: {exc}", file=sys.stderr)
        return 2
    except (ConstructionError, VerificationError, CertificateError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
