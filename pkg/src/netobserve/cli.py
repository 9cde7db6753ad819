"""Command-line front end.

    netobserve analyze   GRAPH        decomposition report (JSON)
    netobserve classify  GRAPH        observation plan + equivalence classes
    netobserve design    GRAPH        plan + verified agent network (JSON, DOT)
    netobserve verify    --graph G --plan P --network N   re-check topology
    netobserve simulate  GRAPH        gain search + estimator error trace (CSV)

Exit codes: 0 ok, 1 internal error, 2 input/parse error, 3 design
verification or gain search failed, 4 external verification failed.
Every command writes a manifest so runs are reproducible byte-for-byte
given (input, seed).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

from . import classify as classify_mod
from . import estimator as estimator_mod
from . import ingest
from .datasets import REGISTRY, load_dataset
from .graph_core import structure_from_digraph
from .matching import matching_report
from .netdesign import (
    design_canonical,
    network_from_json,
    network_to_dot,
    network_to_json,
    verify_topology,
    w_structure,
)
from .numeric import GF, REAL, observability_rank, random_realization, stochastic_realization
from .scc import scc_report
from .structural_check import block_diag, check_distributed, fused_observation_blocks, kron_structure

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_INPUT = 2
EXIT_DESIGN = 3
EXIT_VERIFY = 4


def _load_graph(args) -> ingest.LabeledGraph:
    if args.dataset:
        return load_dataset(args.dataset, data_dir=args.data_dir)
    path = Path(args.input)
    data = path.read_bytes()
    fmt = args.format
    if fmt == "auto":
        fmt = "gml" if path.suffix.lower() == ".gml" else "edgelist"
    if fmt == "gml":
        lg = ingest.parse_gml(data, source=str(path))
    else:
        lg = ingest.parse_edge_list(data, directed=not args.undirected, source=str(path))
    if args.drop_isolates:
        lg = ingest.drop_isolates(lg)
    if args.largest:
        lg = ingest.largest_component(lg)
    return lg


def _write(out_dir: Path, name: str, payload: str) -> Path:
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / name
    path.write_text(payload)
    return path


def _manifest(args, extra: dict) -> str:
    config = {k: v for k, v in vars(args).items() if k != "func"}
    return json.dumps({"config": config, **extra}, indent=2, sort_keys=True)


def _plan_and_dec(lg: ingest.LabeledGraph):
    dec = classify_mod.decompose(lg.digraph)
    return dec, classify_mod.place_agents(dec)


def cmd_analyze(args) -> int:
    lg = _load_graph(args)
    a = structure_from_digraph(lg.digraph)
    report = {
        "summary": classify_mod.structural_counts_report(
            lg.digraph, name=args.dataset or args.input or ""),
        "matching": matching_report(a),
        "sccs": scc_report(lg.digraph),
    }
    out = Path(args.out)
    path = _write(out, "analysis.json", json.dumps(report, indent=2))
    _write(out, "manifest.json", _manifest(args, {"outputs": [str(path)]}))
    row = report["summary"]
    print(f"n={row['n']} E={row['edges']} s_rank={row['s_rank']} "
          f"n_alpha={row['n_alpha']} n_beta_min={row['n_beta_min']}")
    return EXIT_OK


def cmd_classify(args) -> int:
    lg = _load_graph(args)
    dec, plan = _plan_and_dec(lg)
    eq = classify_mod.equivalence_report(dec)
    payload = {
        "plan": plan.to_json(lg.labels),
        "alpha_classes": [sorted(c) for c in eq.alpha_classes],
        "beta_classes": [sorted(c) for c in eq.beta_classes],
    }
    out = Path(args.out)
    path = _write(out, "plan.json", json.dumps(payload, indent=2))
    _write(out, "manifest.json", _manifest(args, {"outputs": [str(path)]}))
    print(f"plan: {plan.n_alpha} alpha + {plan.n_beta} beta placements")
    return EXIT_OK


def cmd_design(args) -> int:
    lg = _load_graph(args)
    dec, plan = _plan_and_dec(lg)
    net = design_canonical(plan, args.agents)
    verdict = verify_topology(net, dec)
    structural = check_distributed(net, structure_from_digraph(lg.digraph))
    out = Path(args.out)
    outputs = [
        _write(out, "plan.json", json.dumps(plan.to_json(lg.labels), indent=2)),
        _write(out, "network.json", json.dumps(network_to_json(net), indent=2)),
        _write(out, "network.dot", network_to_dot(net)),
        _write(out, "verdict.json", json.dumps({
            "topology_ok": verdict.ok,
            "violations": list(map(list, verdict.violations)),
            "distributed": structural.to_json(),
        }, indent=2)),
    ]
    _write(out, "manifest.json", _manifest(args, {"outputs": list(map(str, outputs))}))
    ok = verdict.ok and structural.observable
    print(f"agents={net.agent_count} topology_ok={verdict.ok} "
          f"distributed_observable={structural.observable}")
    return EXIT_OK if ok else EXIT_DESIGN


def cmd_verify(args) -> int:
    lg = _load_graph(args)
    plan = classify_mod.plan_from_json(json.loads(Path(args.plan).read_text()))
    net = network_from_json(json.loads(Path(args.network).read_text()), plan)
    dec = classify_mod.decompose(lg.digraph)
    verdict = verify_topology(net, dec)
    structural = check_distributed(net, structure_from_digraph(lg.digraph))
    report: dict = {
        "topology_ok": verdict.ok,
        "violations": list(map(list, verdict.violations)),
        "distributed": structural.to_json(),
    }
    if args.numeric:
        n = lg.digraph.node_count
        w = w_structure(net)
        full = net.agent_count * n
        agree = 0
        for s in range(args.seeds):
            seed = args.seed + s
            if args.field == GF:
                from .numeric import stochastic_realization_gf
                w_real = stochastic_realization_gf(w, seed)
                a_real = random_realization(structure_from_digraph(lg.digraph), GF, seed)
                d_real = random_realization(
                    block_diag(fused_observation_blocks(net, n)), GF, seed + 1)
                from .numeric import kron_numeric
                rank = observability_rank(kron_numeric(w_real, a_real), d_real)
            else:
                w_real = stochastic_realization(w, seed)
                a_real = random_realization(structure_from_digraph(lg.digraph), REAL, seed)
                d_real = random_realization(
                    block_diag(fused_observation_blocks(net, n)), REAL, seed + 1)
                from .numeric import kron_numeric
                rank = observability_rank(kron_numeric(w_real, a_real), d_real)
            agree += int((rank == full) == structural.observable)
        report["numeric_agreement"] = {"seeds": args.seeds, "agreeing": agree}
    out = Path(args.out)
    path = _write(out, "verify.json", json.dumps(report, indent=2))
    _write(out, "manifest.json", _manifest(args, {"outputs": [str(path)]}))
    print(f"topology_ok={verdict.ok} distributed_observable={structural.observable}")
    return EXIT_OK if verdict.ok and structural.observable else EXIT_VERIFY


def cmd_simulate(args) -> int:
    lg = _load_graph(args)
    dec, plan = _plan_and_dec(lg)
    net = design_canonical(plan, args.agents)
    if not verify_topology(net, dec).ok:
        print("design does not verify; refusing to simulate", file=sys.stderr)
        return EXIT_DESIGN
    a_real = random_realization(structure_from_digraph(lg.digraph), REAL, args.seed)
    w_real = stochastic_realization(w_structure(net), args.seed)
    try:
        gains = estimator_mod.gain_search(w_real, a_real, net,
                                          budget=args.budget, seed=args.seed)
    except estimator_mod.UnobservableSystemError as exc:
        print(f"gain search refused: {exc}", file=sys.stderr)
        return EXIT_DESIGN
    if not gains.found:
        print(f"gain search failed (best rho={gains.spectral_radius:.3f})",
              file=sys.stderr)
        return EXIT_DESIGN
    trace = estimator_mod.simulate(
        w_real, a_real, net, gains, horizon=args.horizon,
        process_noise=args.noise, observation_noise=args.noise, seed=args.seed)
    lines = ["k,agent,mse"]
    for k in range(trace.mse.shape[0]):
        for i in range(trace.mse.shape[1]):
            lines.append(f"{k},{i},{trace.mse[k, i]:.6e}")
    out = Path(args.out)
    path = _write(out, "trace.csv", "\n".join(lines) + "\n")
    digest = hashlib.sha256(
        b"".join(block.tobytes() for block in gains.blocks)).hexdigest()[:16]
    _write(out, "manifest.json", _manifest(args, {
        "outputs": [str(path)],
        "rho": gains.spectral_radius,
        "gain_digest": digest,
        "steady_state_mse": trace.steady_state(),
    }))
    print(f"rho={gains.spectral_radius:.4f} steady_state_mse={trace.steady_state():.4e}")
    return EXIT_OK


def _add_common(p: argparse.ArgumentParser, needs_input: bool = True):
    if needs_input:
        p.add_argument("input", nargs="?", help="graph file (GML or edge list)")
        p.add_argument("--dataset", choices=sorted(REGISTRY),
                       help="load a registered corpus instead of a file")
        p.add_argument("--data-dir", default=None)
        p.add_argument("--format", choices=["auto", "gml", "edgelist"], default="auto")
        p.add_argument("--undirected", action="store_true",
                       help="treat an edge list as undirected")
        p.add_argument("--drop-isolates", action="store_true")
        p.add_argument("--largest", action="store_true",
                       help="keep only the largest weakly connected component")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--field", choices=[GF, REAL], default=GF)
    p.add_argument("--out", default="out", help="output directory")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="netobserve", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="structural decomposition report")
    _add_common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("classify", help="observation plan + equivalence classes")
    _add_common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("design", help="plan + canonical agent network")
    _add_common(p)
    p.add_argument("--agents", type=int, default=None)
    p.set_defaults(func=cmd_design)

    p = sub.add_parser("verify", help="verify an existing plan/network")
    _add_common(p)
    p.add_argument("--plan", required=True)
    p.add_argument("--network", required=True)
    p.add_argument("--numeric", action="store_true")
    p.add_argument("--seeds", type=int, default=20)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("simulate", help="distributed estimator simulation")
    _add_common(p)
    p.add_argument("--agents", type=int, default=None)
    p.add_argument("--horizon", type=int, default=1000)
    p.add_argument("--noise", type=float, default=0.1)
    p.add_argument("--budget", type=int, default=10_000)
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "input", None) is None and getattr(args, "dataset", None) is None \
            and args.command in {"analyze", "classify", "design", "verify", "simulate"}:
        print("error: provide an input file or --dataset", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except (ingest.ParseError, FileNotFoundError, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
