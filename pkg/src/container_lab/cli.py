"""Command-line front end.

Exit codes: 0 when everything checked passes, 1 when an invariant fails,
2 for usage errors (bad flags, malformed input, parameters out of range).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .bounds import (
    EfficientParams,
    check_efficient_conclusion,
    check_packaged_conclusion,
    construct_cover_details,
    crosscheck_hcl4_implies_hcl1,
    harris_bound,
    janson_bound,
    key_inequality_check,
    lymb_sum,
    prob_upper_bound_holds,
)
from .containers import (
    COVER,
    HARDCORE,
    INTERPOLATING,
    LOGR,
    STANDARD,
    AlgorithmError,
    AlgorithmParams,
    ParameterError,
    build_family,
)
from .corpus import SUITES, inputs_for, run_suite
from .documents import DocumentError, HypergraphDocument, dump, load, parse_rational, serialize
from .exact import (
    GuardExceeded,
    conditional_expected_size,
    conditional_subset_prob,
    mc_prob_independent,
    prob_independent,
)
from .generators import (
    gen_aps,
    gen_complete_graph,
    gen_matching,
    gen_random_mixed,
    gen_random_uniform,
    gen_star,
    gen_triangles,
)
from .hypergraph import Hypergraph, covers, is_independent, members, vset, weight
from .lemmas import verify_cover, verify_hardcore, verify_interpolating
from .report import SCHEMA_VERSION, VerificationReport, input_digest, jsonable

__all__ = ["main", "build_parser", "UsageError"]

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _vertex_list(text: str) -> int:
    """``"0,2,5"`` (or ``""`` for the empty set) as a bitmask."""
    text = text.strip().strip("{}[]")
    if not text:
        return 0
    try:
        return vset(int(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a comma-separated vertex list") from None


def _fmt(q) -> dict:
    q = Fraction(q)
    return {"exact": f"{q.numerator}/{q.denominator}", "approx": float(q)}


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="container-lab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a hypergraph document")
    g.add_argument("kind", choices=("triangles", "aps", "random", "mixed", "complete", "star", "matching"))
    g.add_argument("--n", type=int, help="vertex count (triangles: K_n size; aps: [n]; star: leaves; matching: pairs)")
    g.add_argument("--k", type=int, default=3, help="progression length for aps")
    g.add_argument("--r", type=int, help="edge size for random")
    g.add_argument("--m", type=int, help="edge count for random and mixed")
    g.add_argument("--max-size", type=int, default=3, help="largest edge for mixed")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", type=Path)

    c = sub.add_parser("containers", help="run a container builder")
    c.add_argument("input", type=Path)
    c.add_argument("--mode", choices=(COVER, HARDCORE, INTERPOLATING), default=COVER)
    c.add_argument("--p", type=_rational, required=True)
    c.add_argument("--delta", type=_rational)
    c.add_argument("--stop-rule", choices=(STANDARD, LOGR), default=STANDARD)
    c.add_argument("--K", type=_rational)
    c.add_argument("--relaxed", action="store_true", help="cover mode: allow p up to 1/(4r)")
    which = c.add_mutually_exclusive_group(required=True)
    which.add_argument("--all", action="store_true", help="every independent set (guarded)")
    which.add_argument("--input-set", type=_vertex_list, help="comma-separated vertices; '' for the empty set")
    c.add_argument("--no-trace", action="store_true", help="omit per-round traces")
    _output_flags(c)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("--suite", required=True, choices=SUITES)
    v.add_argument("input", type=Path, nargs="?", help="run on this document instead of a corpus")
    v.add_argument("--corpus", choices=("random",), default="random")
    v.add_argument("--count", type=int)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--p", type=_rational)
    v.add_argument("--delta", type=_rational)
    v.add_argument("--tau", type=_rational, default=Fraction(3, 10))
    v.add_argument("--K", type=_rational, default=Fraction(2))
    v.add_argument("--trials", type=int, default=1000)
    _output_flags(v)

    b = sub.add_parser("bounds", help="evaluate a probability bound")
    b.add_argument("input", type=Path)
    b.add_argument("--which", required=True, choices=("harris", "janson", "lymb", "cover", "key"))
    b.add_argument("--p", type=_rational)
    _output_flags(b)

    pr = sub.add_parser("prob", help="exact (or sampled) hard-core probabilities")
    pr.add_argument("input", type=Path)
    pr.add_argument("--p", type=_rational, required=True)
    pr.add_argument("--conditional", type=_vertex_list, help="Pr(L inside | independent) for this L")
    pr.add_argument("--expected", action="store_true", help="conditional expected size")
    pr.add_argument("--mc", nargs="+", type=int, metavar=("SAMPLES", "SEED"), help="Monte Carlo estimate")
    _output_flags(pr)
    return parser


def _output_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", type=Path, help="write the JSON report here")
    p.add_argument("--json", action="store_true", help="print the JSON report instead of a summary")


# ---------------------------------------------------------------------------
# reports


def _run_report(command: str, H: Optional[Hypergraph], params: dict, passed: bool, results: dict,
                started: float, verification: Optional[VerificationReport] = None) -> dict:
    out = {
        "schema_version": SCHEMA_VERSION,
        "tool": "container-lab",
        "tool_version": __version__,
        "command": command,
        "input_digest": input_digest(H) if H is not None else None,
        "params": {k: jsonable(v) for k, v in params.items()},
        "passed": passed,
        "results": jsonable(results),
        "timing": {"seconds": round(time.perf_counter() - started, 6)},
    }
    if verification is not None:
        d = verification.to_dict()
        out["checks"] = d["checks"]
        out["notes"] = d["notes"]
    return out


def _emit(args, report: dict, summary: str) -> None:
    if args.out:
        args.out.write_text(json.dumps(report, indent=2) + "\n")
    if args.json:
        print(json.dumps(report, indent=2))
    else:
        print(summary)


def _load(path: Path) -> Hypergraph:
    try:
        return load(path).to_hypergraph()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


# ---------------------------------------------------------------------------
# commands


def cmd_generate(args) -> int:
    kind, n = args.kind, args.n
    need = {"triangles": ("n",), "aps": ("n",), "random": ("n", "r", "m"), "mixed": ("n", "m"),
            "complete": ("n",), "star": ("n",), "matching": ("n",)}[kind]
    missing = [f"--{f}" for f in need if getattr(args, f) is None]
    if missing:
        raise UsageError(f"generate {kind} needs {' '.join(missing)}")
    if kind == "triangles":
        H, meta = gen_triangles(n), {"generator": "triangles", "n": str(n)}
    elif kind == "aps":
        H, meta = gen_aps(n, args.k), {"generator": "aps", "n": str(n), "k": str(args.k)}
    elif kind == "random":
        H = gen_random_uniform(n, args.r, args.m, args.seed)
        meta = {"generator": "random", "n": str(n), "r": str(args.r), "m": str(args.m), "seed": str(args.seed)}
    elif kind == "mixed":
        H = gen_random_mixed(n, args.m, args.max_size, args.seed)
        meta = {"generator": "mixed", "n": str(n), "m": str(args.m), "max_size": str(args.max_size),
                "seed": str(args.seed)}
    elif kind == "complete":
        H, meta = gen_complete_graph(n), {"generator": "complete", "n": str(n)}
    elif kind == "star":
        H, meta = gen_star(n), {"generator": "star", "leaves": str(n)}
    else:
        H, meta = gen_matching(n), {"generator": "matching", "pairs": str(n)}
    doc = HypergraphDocument.from_hypergraph(H, meta)
    if args.out:
        dump(doc, args.out)
    else:
        sys.stdout.write(serialize(doc))
    return EXIT_OK


def _params(args) -> AlgorithmParams:
    if args.mode == COVER:
        return AlgorithmParams.cover(args.p, args.stop_rule, args.K, args.relaxed)
    if args.mode == HARDCORE:
        return AlgorithmParams.hardcore(args.p, args.delta)
    return AlgorithmParams.interpolating(args.p, args.delta)


def _family_results(family, with_trace: bool) -> dict:
    containers = []
    for S in family.fingerprints:
        out = family.outputs[S]
        entry = {"fingerprint": list(members(S)), "container": list(members(out.C)), "rounds": out.rounds}
        if out.G is not None:
            entry["cover"] = out.G.edge_lists()
        if with_trace:
            entry["trace"] = [t.to_dict() for t in out.trace]
        containers.append(entry)
    return {
        "containers": containers,
        "assignment": [{"input": list(members(I)), "fingerprint": list(members(S))}
                       for I, S in sorted(family.assignment.items(), key=lambda kv: (kv[0].bit_count(), members(kv[0])))],
    }


def cmd_containers(args) -> int:
    started = time.perf_counter()
    H = _load(args.input)
    params = _params(args)
    params.validate(H)
    if args.input_set is not None:
        if args.input_set & ~H.vertices:
            raise UsageError(f"input set {list(members(args.input_set))} has vertices outside [0, {H.n})")
        if not is_independent(H, args.input_set):
            raise UsageError(f"input set {list(members(args.input_set))} is not independent")
        inputs = [args.input_set]
    else:
        inputs = None
    family = build_family(H, params, inputs)
    results = _family_results(family, not args.no_trace)
    flat = {"mode": params.mode, "p": params.p, "delta": params.delta, "stop_rule": params.stop_rule,
            "K": params.K, "relaxed": params.relaxed, "all": bool(args.all)}
    report = _run_report("containers", H, flat, True, results, started)
    lines = [f"{len(family)} container(s) over {len(family.assignment)} input(s)"]
    for c in results["containers"][:20]:
        lines.append(f"  S={c['fingerprint']} |C|={len(c['container'])} rounds={c['rounds']}")
    if len(family) > 20:
        lines.append(f"  ... {len(family) - 20} more")
    _emit(args, report, "\n".join(lines))
    return EXIT_OK


def _require(args, *names) -> None:
    missing = [f"--{n}" for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"suite {args.suite} on a document needs {' '.join(missing)}")


def _verify_document(args, H: Hypergraph) -> tuple[VerificationReport, dict]:
    suite = args.suite
    results: dict = {}
    inputs = inputs_for(H, args.seed)
    if inputs is not None:
        inputs = sorted(set(inputs) | {0})
    if suite == "cover-lemmas":
        _require(args, "p")
        report, family = verify_cover(H, AlgorithmParams.cover(args.p), inputs)
        if family is not None:
            empty = family.outputs[family.assignment[0]]
            results["empty_input"] = {"fingerprint": list(members(empty.S)), "container_size": empty.C.bit_count(),
                                      "rounds": empty.rounds, "trace": [t.to_dict() for t in empty.trace]}
            results["fingerprints"] = len(family)
    elif suite in ("hardcore-lemmas", "interpolating-lemmas"):
        _require(args, "p", "delta")
        if suite == "hardcore-lemmas":
            report, family = verify_hardcore(H, AlgorithmParams.hardcore(args.p, args.delta), inputs)
        else:
            report, family = verify_interpolating(H, AlgorithmParams.interpolating(args.p, args.delta), inputs)
        if family is not None:
            results["fingerprints"] = len(family)
    elif suite == "crosscheck":
        _require(args, "p")
        report = crosscheck_hcl4_implies_hcl1(H, args.p, inputs)
    elif suite == "prop23":
        _require(args, "p")
        k = key_inequality_check(H, args.p)
        report = VerificationReport("prop23")
        report.record("key-inequality", k.holds, {"p": args.p}, "log Pr(V_p independent) >= (|V| - E/p) log(1-p)")
        results = {"prob": _fmt(k.prob), "expected_size": _fmt(k.expected_size), "exponent": _fmt(k.exponent),
                   "equality": k.equality}
    elif suite == "prop21":
        _require(args, "p")
        report = suite_prop21_document(H, args.p)
    elif suite == "janson":
        _require(args, "p")
        jb = janson_bound(H, args.p)
        prob = prob_independent(H, args.p)
        report = VerificationReport("janson")
        report.record("janson.upper", jb.dominates(prob), {"prob": prob}, "Pr <= exp(-mu^2/(2 Delta*)), certified")
        results = {"mu": _fmt(jb.mu), "delta_star": _fmt(jb.delta_star), "prob": _fmt(prob)}
    elif suite == "lymb":
        report = VerificationReport("lymb")
        total = lymb_sum(H)
        report.record("lymb.sum", total <= 1, {"sum": total}, "LYMB sum is at most 1")
        results = {"sum": _fmt(total)}
    elif suite == "efficient":
        report = check_efficient_conclusion(H, EfficientParams(args.tau, args.K), inputs)
    elif suite == "packaged":
        _require(args, "p")
        report = check_packaged_conclusion(H, args.p, args.trials, args.seed, inputs)
    else:
        raise UsageError(f"suite {suite} runs over its own corpus; omit the input document")
    return report, results


def suite_prop21_document(H: Hypergraph, p: Fraction) -> VerificationReport:
    report = VerificationReport("prop21")
    built = construct_cover_details(H, p)
    r = max(H.r, 1)
    w = weight(built.G, p / (4 * r * r))
    prob = prob_independent(H, p)
    report.record("prop21.covers", covers(built.G, H), None, "constructed family covers H")
    report.record("prop21.upper", prob_upper_bound_holds(prob, -w / 8), {"prob": prob, "w": w},
                  "Pr(V_p independent) <= exp(-w_{p/(4r^2)}(G)/8), certified")
    return report


def cmd_verify(args) -> int:
    started = time.perf_counter()
    params = {"suite": args.suite, "seed": args.seed}
    if args.input is not None:
        H = _load(args.input)
        params.update({"p": args.p, "delta": args.delta})
        report, results = _verify_document(args, H)
    else:
        H = None
        params.update({"corpus": args.corpus, "count": args.count})
        report, results = run_suite(args.suite, seed=args.seed, count=args.count), {}
    out = _run_report("verify", H, params, report.passed, results, started, report)
    summary = report.summary()
    if "empty_input" in results:
        e = results["empty_input"]
        summary += f"\n  empty input: {e['rounds']} rounds, |S|={len(e['fingerprint'])}, |C|={e['container_size']}"
    _emit(args, out, summary)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_bounds(args) -> int:
    started = time.perf_counter()
    H = _load(args.input)
    which = args.which
    if which != "lymb" and args.p is None:
        raise UsageError(f"bounds --which {which} needs --p")
    if which == "harris":
        hb = harris_bound(H, args.p)
        results = {"weight": _fmt(hb.weight), "product": _fmt(hb.product), "exp_lower": _fmt(hb.exp_lower())}
        passed = hb.product_dominates_exp()
    elif which == "janson":
        jb = janson_bound(H, args.p)
        results = {"mu": _fmt(jb.mu), "delta_star": _fmt(jb.delta_star), "bound": float(jb)}
        passed = True
    elif which == "lymb":
        total = lymb_sum(H)
        results = {"sum": _fmt(total)}
        passed = total <= 1
    elif which == "cover":
        built = construct_cover_details(H, args.p)
        r = max(H.r, 1)
        results = {"cover": built.G.edge_lists(), "h_prime_edges": built.H_prime.e,
                   "caps": {str(k): v for k, v in built.caps.items()}, "mu": _fmt(built.mu),
                   "cover_weight": _fmt(sum((args.p / (4 * r * r)) ** e.bit_count() for e in built.G.edges))}
        passed = True
    else:
        k = key_inequality_check(H, args.p)
        results = {"prob": _fmt(k.prob), "expected_size": _fmt(k.expected_size), "exponent": _fmt(k.exponent),
                   "holds": k.holds, "equality": k.equality}
        passed = k.holds
    report = _run_report("bounds", H, {"which": which, "p": args.p}, passed, results, started)
    lines = [f"{k}: {v['exact']} ({v['approx']:.6g})" if isinstance(v, dict) and "exact" in v else f"{k}: {v}"
             for k, v in results.items()]
    _emit(args, report, "\n".join(lines))
    return EXIT_OK if passed else EXIT_FAIL


def cmd_prob(args) -> int:
    started = time.perf_counter()
    H = _load(args.input)
    p = args.p
    results: dict = {}
    params: dict = {"p": p}
    if args.mc:
        if len(args.mc) > 2:
            raise UsageError("--mc takes SAMPLES [SEED]")
        samples, seed = args.mc[0], (args.mc[1] if len(args.mc) > 1 else 0)
        est = mc_prob_independent(H, p, samples, seed)
        results["mc"] = {"estimate": est.estimate, "half_width": est.half_width, "samples": samples, "seed": seed}
        params.update({"samples": samples, "mc_seed": seed})
        line = f"Pr ~ {est.estimate:.6g} +/- {est.half_width:.2g} (95%, {samples} samples, seed {seed})"
    elif args.conditional is not None:
        L = args.conditional
        if L & ~H.vertices:
            raise UsageError(f"{list(members(L))} has vertices outside [0, {H.n})")
        q = conditional_subset_prob(H, p, L)
        results["conditional"] = {"L": list(members(L)), **_fmt(q)}
        params["conditional"] = ",".join(map(str, members(L)))
        line = f"{q.numerator}/{q.denominator}"
    elif args.expected:
        q = conditional_expected_size(H, p)
        results["expected_size"] = _fmt(q)
        line = f"{q.numerator}/{q.denominator}"
    else:
        q = prob_independent(H, p)
        results["prob"] = _fmt(q)
        line = f"{q.numerator}/{q.denominator}"
    report = _run_report("prob", H, params, True, results, started)
    _emit(args, report, line)
    return EXIT_OK


COMMANDS = {"generate": cmd_generate, "containers": cmd_containers, "verify": cmd_verify,
            "bounds": cmd_bounds, "prob": cmd_prob}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except (UsageError, ParameterError, DocumentError, GuardExceeded, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except AlgorithmError as exc:
        print(f"invariant failure: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
