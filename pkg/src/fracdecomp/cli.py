"""Command-line interface.

One binary, one subcommand per operation.  Every run emits a
machine-readable JSON report (schema v1, shipped with the package);
artifacts such as weightings, certificates, and marginal CSVs go to
``--out``.  Exit codes: 0 pass, 1 fail/infeasible, 2 usage or
malformed input, 3 internal error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from itertools import combinations

from . import io as fio
from .correction import lift_to_exact, shape_weights
from .families import paired_groups_family, two_per_class_family
from .graph import Graph, verify_weighting
from .kminusm import decompose_clique_minus_matching
from .lp import BudgetExceeded, lp_feasible
from .pipeline import PipelineConfig, PipelineError, run_pipeline
from .rational import format_rational
from .recursion import MatchingPartition, decompose_sparse_complement
from .sampler import estimate_edge_marginals, sample_many

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fracdecomp",
        description="exact fractional clique decompositions, verified",
    )
    parser.add_argument(
        "--report", help="write the JSON run report here instead of stdout"
    )
    parser.add_argument(
        "--threads",
        type=int,
        default=1,
        help="parallelism bound (recorded; current kernels are single-threaded)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="exactly verify a weighting certificate")
    p.add_argument("--graph", required=True)
    p.add_argument("--weights", required=True)
    p.add_argument("--target", help="edge target file (default: all edges 1)")

    p = sub.add_parser(
        "decompose-kminusm",
        help="closed-form decomposition of a complete graph minus a matching",
    )
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--matching", default="", help='e.g. "0-1,2-3" (may be empty)')
    p.add_argument("--out", help="write the weighting JSON here")

    p = sub.add_parser(
        "decompose-sparse",
        help="decomposition from a matching partition of the complement",
    )
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--graph", required=True)
    p.add_argument("--partition", required=True, help='lines of "u-v,u-v,..."')
    p.add_argument("--out", help="write the weighting JSON here")

    p = sub.add_parser(
        "family-marginals", help="exact edge-class marginals of a member family"
    )
    p.add_argument("--kind", choices=("w", "m"), required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--ell", type=int)
    p.add_argument(
        "--enumerate",
        action="store_true",
        help="exhaustively check the marginals against enumeration",
    )
    p.add_argument("--out", help="write the marginal table JSON here")

    p = sub.add_parser(
        "correct", help="shape clique weights to hit per-edge targets exactly"
    )
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--targets", required=True, help='lines of "u v p/q"')
    p.add_argument("--out", help="write the weighting JSON here")

    p = sub.add_parser(
        "lift", help="turn an approximate order-(2r+2) weighting into an exact one"
    )
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--graph", required=True)
    p.add_argument("--weights", required=True)
    p.add_argument("--out", help="write the weighting JSON here")

    p = sub.add_parser("sample", help="run the staged sampler (Monte Carlo)")
    p.add_argument("--graph", required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--n-samples", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument(
        "--marginals",
        action="store_true",
        help="emit per-edge scaled marginal estimates as CSV",
    )
    p.add_argument("--out", help="write the CSV here (default: stdout)")

    p = sub.add_parser("lp-check", help="exact LP feasibility oracle")
    p.add_argument("--graph", required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--target", help="edge target file (default: all edges 1)")
    p.add_argument("--out", help="write the weighting/certificate JSON here")

    p = sub.add_parser("decompose", help="end-to-end pipeline")
    p.add_argument("--graph", required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--mode", choices=("exact", "validate"), default="exact")
    p.add_argument("--blow-up", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n-samples", type=int, default=100_000)
    p.add_argument("--pattern-size", type=int, default=None)
    p.add_argument("--out", help="write the weighting JSON here")
    return parser


def _emit_weighting(args, weighting) -> dict:
    payload = fio.weighting_to_json(weighting)
    if getattr(args, "out", None):
        fio.write_weighting(args.out, weighting)
        return {"weighting_file": args.out, "support": weighting.support_size()}
    return payload


def _cmd_verify(args, inputs):
    g = fio.read_graph(args.graph)
    w = fio.read_weighting(args.weights)
    target = fio.read_targets(args.target) if args.target else None
    report = verify_weighting(g, w, target)
    verdict = "pass" if report.ok else "fail"
    return verdict, report.residual_summary(), None, EXIT_PASS if report.ok else EXIT_FAIL


def _cmd_decompose_kminusm(args, inputs):
    matching = fio.parse_matching_spec(args.matching)
    w = decompose_clique_minus_matching(args.r, args.k, matching)
    host = Graph(
        args.k,
        set(combinations(range(args.k), 2))
        - {tuple(sorted(e)) for e in matching},
    )
    report = verify_weighting(host, w, 1)
    if not report.ok:
        return "error", report.residual_summary(), None, EXIT_INTERNAL
    return "pass", [], _emit_weighting(args, w), EXIT_PASS


def _cmd_decompose_sparse(args, inputs):
    g = fio.read_graph(args.graph)
    partition = MatchingPartition.from_lists(fio.read_partition(args.partition))
    w = decompose_sparse_complement(g, args.r, partition)
    report = verify_weighting(g, w, 1)
    if not report.ok:
        return "error", report.residual_summary(), None, EXIT_INTERNAL
    return "pass", [], _emit_weighting(args, w), EXIT_PASS


def _cmd_family_marginals(args, inputs):
    if args.kind == "w":
        if args.k is None:
            raise fio.FormatError("--kind w requires --k")
        family = two_per_class_family(args.r, args.k)
    else:
        if args.ell is None:
            raise fio.FormatError("--kind m requires --ell")
        family = paired_groups_family(args.r, args.ell, k=args.k)
    table = {}
    base = getattr(family, "base", family)
    table["cross_class"] = format_rational(base.cross_marginal())
    table["intra_class_raw"] = format_rational(base.intra_marginal())
    if hasattr(family, "target"):
        table["equalized_target"] = format_rational(family.target)
    artifact = {"kind": args.kind, "classes": table}
    if args.enumerate:
        entries = family.enumerate_members()
        sums = {}
        for member, prob in entries:
            for e in member.edges:
                sums[e] = sums.get(e, 0) + prob
        mismatches = [
            f"edge {e}: enumerated {sums.get(e, 0)} != {family.marginal(e)}"
            for e in family.host.edge_list()
            if sums.get(e, 0) != family.marginal(e)
        ]
        artifact["enumerated_members"] = len(entries)
        if mismatches:
            return "fail", mismatches, artifact, EXIT_FAIL
        artifact["enumeration_matches_marginals"] = True
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(artifact, fh, indent=1)
    return "pass", [], artifact, EXIT_PASS


def _cmd_correct(args, inputs):
    targets = fio.read_targets(args.targets)
    w = shape_weights(args.r, targets)
    n = 2 * args.r + 2
    host = Graph(n, combinations(range(n), 2))
    report = verify_weighting(host, w, targets)
    if not report.ok:
        return "error", report.residual_summary(), None, EXIT_INTERNAL
    return "pass", [], _emit_weighting(args, w), EXIT_PASS


def _cmd_lift(args, inputs):
    g = fio.read_graph(args.graph)
    w22 = fio.read_weighting(args.weights)
    w = lift_to_exact(g, w22, args.r)
    report = verify_weighting(g, w, 1)
    if not report.ok:
        return "error", report.residual_summary(), None, EXIT_INTERNAL
    return "pass", [], _emit_weighting(args, w), EXIT_PASS


def _cmd_sample(args, inputs):
    g = fio.read_graph(args.graph)
    if args.marginals:
        est = estimate_edge_marginals(g, args.r, args.n_samples, args.seed)
        csv = fio.marginals_to_csv(est.estimates)
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(csv)
        else:
            sys.stdout.write(csv)
        artifact = {
            "approximate": True,
            "samples": est.nsamples,
            "structure_violations": est.structure_violations,
        }
        if est.structure_violations:
            residuals = [
                f"{est.structure_violations} sampled member(s) missed an edge "
                "outside the allowed pattern"
            ]
            return "fail", residuals, artifact, EXIT_FAIL
        return "pass", [], artifact, EXIT_PASS
    rows = sample_many(g, args.r, args.seed, args.n_samples)
    bad = 0
    for chosen, _ in rows:
        for ai, u in enumerate(chosen):
            for bi in range(ai + 1, len(chosen)):
                if not g.has_edge(u, chosen[bi]) and bi // 2 - ai // 2 >= 2:
                    bad += 1
    artifact = {
        "approximate": True,
        "samples": args.n_samples,
        "structure_violations": bad,
        "first_sample": list(rows[0][0]) if rows else [],
    }
    if bad:
        residuals = [f"{bad} missing edge(s) outside the allowed pattern"]
        return "fail", residuals, artifact, EXIT_FAIL
    return "pass", [], artifact, EXIT_PASS


def _certificate_payload(outcome) -> dict:
    return {
        "certificate": [
            [u, v, format_rational(y)] for (u, v), y in sorted(outcome.certificate.y.items())
        ]
        if outcome.certificate
        else None,
        "witness_edges": [list(e) for e in outcome.witness_edges],
        "detail": outcome.detail,
    }


def _cmd_lp_check(args, inputs):
    g = fio.read_graph(args.graph)
    target = fio.read_targets(args.target) if args.target else None
    outcome = lp_feasible(g, args.r, target)
    if outcome.feasible:
        return "pass", [], _emit_weighting(args, outcome.weighting), EXIT_PASS
    payload = _certificate_payload(outcome)
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=1)
    return "infeasible", [outcome.detail], payload, EXIT_FAIL


def _cmd_decompose(args, inputs):
    g = fio.read_graph(args.graph)
    cfg = PipelineConfig(
        r=args.r,
        mode=args.mode,
        blow_up_factor=args.blow_up,
        seed=args.seed,
        samples=args.n_samples,
        pattern_size=args.pattern_size,
    )
    result = run_pipeline(g, cfg)
    if args.mode == "exact":
        artifact = _emit_weighting(args, result.weighting)
        artifact["provenance"] = result.provenance
        return "pass", [], artifact, EXIT_PASS
    verdict = result.report.get("verdict", "fail")
    artifact = {"provenance": result.provenance, **result.report}
    return (
        verdict,
        [] if verdict == "pass" else ["sampler marginals left the required interval"],
        artifact,
        EXIT_PASS if verdict == "pass" else EXIT_FAIL,
    )


_COMMANDS = {
    "verify": _cmd_verify,
    "decompose-kminusm": _cmd_decompose_kminusm,
    "decompose-sparse": _cmd_decompose_sparse,
    "family-marginals": _cmd_family_marginals,
    "correct": _cmd_correct,
    "lift": _cmd_lift,
    "sample": _cmd_sample,
    "lp-check": _cmd_lp_check,
    "decompose": _cmd_decompose,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    started = time.perf_counter()
    inputs = {k: v for k, v in vars(args).items() if k not in ("report",)}
    seed = getattr(args, "seed", None)
    approximate = args.command in ("sample",) or getattr(args, "mode", "") == "validate"

    try:
        verdict, residuals, artifact, code = _COMMANDS[args.command](args, inputs)
    except fio.FormatError as exc:
        verdict, residuals, artifact, code = "error", [str(exc)], None, EXIT_USAGE
    except PipelineError as exc:
        is_infeasible = exc.stage == "lp-infeasible"
        verdict = "infeasible" if is_infeasible else "error"
        residuals, artifact = [str(exc)], None
        code = EXIT_FAIL if is_infeasible else EXIT_USAGE
    except BudgetExceeded as exc:
        verdict, residuals, artifact, code = "error", [str(exc)], None, EXIT_USAGE
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        verdict, residuals, artifact, code = "error", [str(exc)], None, EXIT_USAGE
    except Exception as exc:  # noqa: BLE001 - last-resort internal error
        verdict, residuals, artifact, code = (
            "error",
            [f"internal: {type(exc).__name__}: {exc}"],
            None,
            EXIT_INTERNAL,
        )

    report = fio.make_report(
        args.command,
        verdict,
        inputs=inputs,
        residuals=residuals if verdict != "pass" else [],
        seed=seed,
        started=started,
        artifact=artifact,
        approximate=approximate,
    )
    csv_on_stdout = (
        args.command == "sample"
        and getattr(args, "marginals", False)
        and not getattr(args, "out", None)
    )
    text = json.dumps(report, indent=1, default=str)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    elif not csv_on_stdout:
        # marginals-to-stdout keeps stdout clean for the CSV
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
