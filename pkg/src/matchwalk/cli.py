"""Command-line front end.

Every subcommand prints one JSON run report to stdout and a short human
summary to stderr.  Exit codes: 0 success, 1 certification failure, 2 usage
error.  Reports are deterministic: identical parameters and seed reproduce a
byte-identical `results` payload (`wall_time_ms` lives outside it).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import __version__
from .analysis import (build_transition_matrix, check_ergodicity, mixing_time,
                       mixing_time_bound, spectrum)
from .corpus import DELTAS, FLOW_STATE_CAP, corpus_graphs
from .errors import MatchwalkError
from .flow import certify, verify_encoding_bounds
from .gadget import (build_gadget, ergodicity_experiment, expected_avoidance,
                     random_pinning, slack_statistics)
from .generators import (complete_graph, cycle_graph, disjoint_edges,
                         path_graph, random_regular)
from .graph import as_fraction, parse_graph
from .influence import (influence_matrix, linf_independence_constant,
                        spectral_independence_constant)
from .matching import enumerate_matchings, matching_number
from .walk import empirical_distribution

EXIT_OK = 0
EXIT_CERT_FAIL = 1
EXIT_USAGE = 2


def _load_graph(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_graph(fh.read())


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("MATCHWALK_SEED")
    return int(env) if env else 0


def _cmd_sample(args):
    graph = _load_graph(args.graph)
    seed = _seed(args)
    freqs = empirical_distribution(graph, args.k, args.samples,
                                   burn_in=args.burn_in, stride=args.stride,
                                   seed=seed, state_budget=args.budget)
    states = enumerate_matchings(graph, args.k, budget=args.budget)
    records = [{"state": list(s.edge_ids), "frequency": float(f)}
               for s, f in zip(states, freqs)]
    return EXIT_OK, {"n": graph.n, "m": graph.m, "k": args.k,
                     "omega_size": len(states), "samples": args.samples,
                     "records": records}


def _chain_report(graph, k, budget):
    transition = build_transition_matrix(graph, k, max_states=budget)
    ergodic, components = check_ergodicity(transition)
    spect = spectrum(transition)
    report = {
        "n": graph.n, "m": graph.m, "k": k,
        "omega_size": transition.size,
        "alpha": spect.alpha if ergodic else 0.0,
        "lambda2": spect.lambda2,
        "lambda_min": spect.lambda_min,
        "ergodic": ergodic,
        "components": len(components),
    }
    return transition, ergodic, report


def _cmd_exact_gap(args):
    graph = _load_graph(args.graph)
    transition, ergodic, report = _chain_report(graph, args.k, args.budget)
    if ergodic:
        report["tmix_quarter"] = mixing_time(transition, 0.25)
        report["tmix_bound"] = mixing_time_bound(transition)
    else:
        report["tmix_quarter"] = None
        report["tmix_bound"] = None
    return EXIT_OK, report


def _cmd_mixing_time(args):
    graph = _load_graph(args.graph)
    transition, ergodic, report = _chain_report(graph, args.k, args.budget)
    if not ergodic:
        report["error"] = "chain is not ergodic"
        return EXIT_CERT_FAIL, report
    epsilon = float(as_fraction(args.epsilon))
    report["epsilon"] = epsilon
    report["tmix"] = mixing_time(transition, epsilon)
    report["tmix_bound"] = mixing_time_bound(transition)
    return EXIT_OK, report


def _cmd_certify_flow(args):
    graph = _load_graph(args.graph)
    delta = as_fraction(args.delta)
    report = certify(graph, args.k, delta,
                     path_budget=args.path_budget, state_budget=args.budget)
    payload = report.to_json()
    if args.encodings:
        enc = verify_encoding_bounds(graph, args.k, delta,
                                     path_budget=args.path_budget,
                                     state_budget=args.budget)
        payload["encodings"] = {
            "max_class_count": enc.max_class_count,
            "passed": enc.passed,
            "violations": enc.violations,
        }
        if not enc.passed:
            return EXIT_CERT_FAIL, payload
    return (EXIT_OK if report.passed else EXIT_CERT_FAIL), payload


def _cmd_influence(args):
    graph = _load_graph(args.graph)
    matrix = influence_matrix(graph, args.k, state_budget=args.budget)
    lam = spectral_independence_constant(matrix)
    linf = linf_independence_constant(matrix)
    payload = {
        "n": graph.n, "m": graph.m, "k": args.k,
        "omega_size": matrix.omega_size,
        "lambda_max": lam,
        "linf": float(linf),
        "linf_exact": str(linf),
        "degenerate_rows": sorted(matrix.degenerate_rows),
    }
    if args.emit_matrix:
        payload["matrix"] = [[str(v) for v in row] for row in matrix.exact]
    return EXIT_OK, payload


def _cmd_gadget(args):
    delta = as_fraction(args.delta)
    gadget = build_gadget(args.n, delta, args.core)
    seed = _seed(args)
    trials = args.trials
    per_trial = []
    ratios = []
    for t in range(trials):
        tau = random_pinning(gadget, args.pin_size, seed, t)
        stats = slack_statistics(gadget, tau)
        ratios.append(float(stats.ratio))
        per_trial.append({"trial": t, "x_tau": stats.x_tau,
                          "m_star_residual": stats.m_star_residual,
                          "ratio": str(stats.ratio)})
    expectation = expected_avoidance(gadget, args.pin_size)
    payload = {
        "n": gadget.n, "delta": str(delta), "core": args.core,
        "m_size": len(gadget.matching), "pin_size": args.pin_size,
        "trials": trials,
        "mean_ratio": sum(ratios) / trials if trials else 0.0,
        "mean_x_tau": sum(r["x_tau"] for r in per_trial) / trials if trials else 0.0,
        "expected_x_tau": float(expectation),
        "expected_x_tau_exact": str(expectation),
        "per_trial": per_trial,
    }
    if args.ergodicity:
        exp = ergodicity_experiment(gadget, args.pin_size, trials, seed)
        payload["ergodicity"] = exp.to_json()
        payload["ergodicity"].pop("certificates")
    return EXIT_OK, payload


_GENERATORS = {
    "path": lambda p: path_graph(int(p["num_vertices"])),
    "cycle": lambda p: cycle_graph(int(p["num_vertices"])),
    "complete": lambda p: complete_graph(int(p["n"])),
    "disjoint-edges": lambda p: disjoint_edges(int(p["m"])),
    "random-regular": lambda p: random_regular(int(p["n"]), int(p["d"]),
                                               int(p.get("seed", 0))),
    "gadget": lambda p: build_gadget(int(p["n"]), as_fraction(p["delta"]),
                                     p.get("core", "c4-union")).graph,
}


def _corpus_member(name: str, graph, k: int, delta, budget: int) -> tuple[dict, bool]:
    """Run certify + influence + mixing on one instance; never raises."""
    entry = {"graph": name, "n": graph.n, "m": graph.m,
             "k": k, "delta": str(delta)}
    try:
        transition = build_transition_matrix(graph, k, max_states=budget)
        ergodic, _ = check_ergodicity(transition)
        entry["ergodic"] = ergodic
        if not ergodic:
            entry["skipped"] = "chain not ergodic: flow certification skipped"
            return entry, True
        if transition.size > FLOW_STATE_CAP:
            entry["skipped"] = (f"state space {transition.size} exceeds "
                                f"flow cap {FLOW_STATE_CAP}")
            return entry, True
        cert = certify(graph, k, delta, state_budget=budget, transition=transition)
        entry["certify"] = cert.to_json()["bounds"]
        entry["rho"] = str(cert.rho)
        entry["ell"] = cert.ell
        entry["alpha"] = cert.alpha
        entry["tmix"] = mixing_time(transition, 0.25)
        matrix = influence_matrix(graph, k, state_budget=budget)
        entry["lambda_max"] = spectral_independence_constant(matrix)
        entry["linf"] = float(linf_independence_constant(matrix))
        entry["passed"] = cert.passed
        return entry, cert.passed
    except MatchwalkError as exc:
        entry["error"] = str(exc)
        return entry, False


def _cmd_corpus(args):
    members = []
    failures = 0
    if args.config:
        with open(args.config, "r", encoding="utf-8") as fh:
            config = json.load(fh)
        for member in config.get("members", []):
            kind = member["generator"]
            if kind not in _GENERATORS:
                members.append({"graph": kind, "error": f"unknown generator {kind!r}"})
                failures += 1
                continue
            graph = _GENERATORS[kind](member.get("params", {}))
            name = member.get("name", kind)
            for k in member["k"]:
                for delta in member["delta"]:
                    entry, ok = _corpus_member(name, graph, int(k),
                                               as_fraction(delta), args.budget)
                    failures += not ok
                    members.append(entry)
    else:
        for name, graph in corpus_graphs():
            mstar = matching_number(graph)
            for delta in DELTAS:
                k = int((1 - delta) * mstar)
                if k < 1:
                    continue
                entry, ok = _corpus_member(name, graph, k, delta, args.budget)
                failures += not ok
                members.append(entry)
    return (EXIT_CERT_FAIL if failures else EXIT_OK,
            {"members": members, "failures": failures})


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="matchwalk",
        description="Down-up walk on fixed-size matchings: sampling, exact "
                    "analysis, flow certificates, influence, gadget experiments.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, graph=True):
        if graph:
            p.add_argument("--graph", required=True, help="edge-list file")
            p.add_argument("--k", type=int, required=True)
        p.add_argument("--seed", type=int, default=None,
                       help="RNG seed (fallback: MATCHWALK_SEED, then 0)")
        p.add_argument("--budget", type=int, default=100_000,
                       help="state-space enumeration cap")
        p.add_argument("--quiet", action="store_true",
                       help="suppress the stderr summary")

    p = sub.add_parser("sample", help="simulate the walk, report state frequencies")
    common(p)
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--burn-in", type=int, default=1000)
    p.add_argument("--stride", type=int, default=1)
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("exact-gap", help="exact spectral gap and chain diagnostics")
    common(p)
    p.set_defaults(func=_cmd_exact_gap)

    p = sub.add_parser("mixing-time", help="exact epsilon-mixing time")
    common(p)
    p.add_argument("--epsilon", default="1/4")
    p.set_defaults(func=_cmd_mixing_time)

    p = sub.add_parser("certify-flow", help="build the flow and certify its bounds")
    common(p)
    p.add_argument("--delta", required=True)
    p.add_argument("--path-budget", type=int, default=10_000_000)
    p.add_argument("--encodings", action="store_true",
                   help="also verify the per-transition counting certificates")
    p.set_defaults(func=_cmd_certify_flow)

    p = sub.add_parser("influence", help="exact influence matrix constants")
    common(p)
    p.add_argument("--emit-matrix", action="store_true")
    p.set_defaults(func=_cmd_influence)

    p = sub.add_parser("gadget", help="pinning experiments on the barrier gadget")
    common(p, graph=False)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--delta", required=True)
    p.add_argument("--core", default="c4-union",
                   choices=["c4-union", "arbitrary-with-PM"])
    p.add_argument("--pin-size", type=int, required=True)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--ergodicity", action="store_true",
                   help="also run the non-ergodicity certificate experiment")
    p.set_defaults(func=_cmd_gadget)

    p = sub.add_parser("corpus", help="run certify + influence + mixing on a corpus")
    common(p, graph=False)
    p.add_argument("--config", default=None,
                   help="JSON corpus config; omit to run the built-in corpus")
    p.set_defaults(func=_cmd_corpus)
    return parser


def dispatch(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    start = time.monotonic()
    try:
        code, results = args.func(args)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MatchwalkError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    wall_ms = int(1000 * (time.monotonic() - start))
    report = {
        "command": args.command,
        "parameters": {k: v for k, v in sorted(vars(args).items())
                       if k not in ("func", "quiet") and v is not None},
        "results": results,
        "seed": _seed(args) if hasattr(args, "seed") else 0,
        "version": __version__,
        "wall_time_ms": wall_ms,
    }
    print(json.dumps(report, indent=2, sort_keys=True, default=str))
    if not getattr(args, "quiet", False):
        status = "ok" if code == EXIT_OK else "FAILED"
        print(f"matchwalk {args.command}: {status} ({wall_ms} ms)", file=sys.stderr)
    return code


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
