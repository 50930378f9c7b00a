"""Command-line front end.

Subcommands: gen, embed, verify, reduce, sigma, check-restricted, oracle,
batch. Exit codes: 0 success or ok-verdict, 1 violation or oracle "none",
2 usage error, 3 budget or resource exhaustion, 4 internal soundness failure.

Defaults can be overridden via environment variables prefixed DIVSUB_
(DIVSUB_GROUP, DIVSUB_SEED, DIVSUB_CYCLE_CAP, DIVSUB_ORACLE_MAX_VERTICES,
DIVSUB_WORKERS). All randomness flows from the --seed flag.
"""

from __future__ import annotations

import argparse
import os
import sys
import time

from . import report as report_mod
from .cycles import restriction_violation
from .embedder import EmbedFailure, embed, required_supernodes, verify_subdivision
from .errors import (
    ResourceError,
    SoundnessError,
    StructuralError,
    UnsupportedError,
    UsageError,
)
from .generators import GenSpec, gen_minor, gen_target
from .group import generate_subgroup, parse_group_spec, sigma, trivial_subgroup
from .minor import reduce as reduce_minor
from .serialize import (
    certificate_from_obj,
    certificate_to_obj,
    instance_from_obj,
    instance_to_obj,
    liftmap_to_obj,
    load_json,
    save_json,
    target_from_obj,
    to_dot,
)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3
EXIT_SOUNDNESS = 4


def _env(name, default):
    return os.environ.get(f"DIVSUB_{name}", default)


def load_target(spec: str):
    """A target graph: either a named generator or a path to a JSON file."""
    if os.path.exists(spec) or spec.endswith(".json"):
        return target_from_obj(load_json(spec))
    try:
        return gen_target(spec)
    except StructuralError as exc:
        raise UsageError(f"--h {spec!r}: {exc}") from exc


def parse_subgroup(A, text: str):
    """Subgroup generators: comma-separated elements, residues ':'-separated.

    "2" is the element (2,) of a cyclic group; "1:0,0:1" generates from the
    two elements (1,0) and (0,1). An empty string gives the trivial subgroup.
    """
    text = text.strip()
    if not text:
        return trivial_subgroup(A)
    gens = []
    for part in text.split(","):
        residues = [int(x) for x in part.strip().split(":")]
        try:
            gens.append(A.element(residues))
        except StructuralError as exc:
            raise UsageError(f"--subgroup {text!r}: {exc}") from exc
    return generate_subgroup(A, gens)


def cmd_gen(args) -> int:
    group = parse_group_spec(args.group)
    spec = GenSpec(
        shape=args.shape,
        f=args.f,
        group=group,
        weight_mode=args.weights,
        seed=args.seed,
        min_length=args.min_len,
        max_length=args.max_len,
        max_tree_size=args.tree_size,
    )
    G = gen_minor(spec)
    obj = instance_to_obj(G)
    if args.out:
        save_json(args.out, obj)
        print(f"wrote {args.out}: f={args.f}, {G.num_vertices} vertices")
    else:
        from .serialize import dumps

        sys.stdout.write(dumps(obj))
    if args.dot:
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(to_dot(G))
    return EXIT_OK


def cmd_embed(args) -> int:
    G = instance_from_obj(load_json(args.instance))
    H = load_target(args.h)
    bound = required_supernodes(H, G.group)
    if G.num_supernodes < bound:
        print(
            f"warning: f={G.num_supernodes} below bound {bound}; attempting anyway",
            file=sys.stderr,
        )
    t0 = time.monotonic()
    sub = embed(G, H, subset_cycle_cap=args.cycle_cap)
    elapsed = time.monotonic() - t0
    save_json(args.out, certificate_to_obj(sub))
    if args.dot:
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(to_dot(G))
    print(
        f"embedded {args.h}: {len(sub.paths)} paths, "
        f"{sub.stats['descents']} descents, {elapsed:.2f}s -> {args.out}"
    )
    return EXIT_OK


def cmd_verify(args) -> int:
    G = instance_from_obj(load_json(args.instance))
    H = load_target(args.h)
    sub = certificate_from_obj(load_json(args.certificate))
    bad = verify_subdivision(G, H, G.group, sub)
    if bad is None:
        print("certificate accepted")
        return EXIT_OK
    print(f"certificate rejected: {bad}")
    return EXIT_VIOLATION


def cmd_reduce(args) -> int:
    G = instance_from_obj(load_json(args.instance))
    R, lift = reduce_minor(G)
    save_json(args.out, instance_to_obj(R))
    if args.liftmap:
        save_json(args.liftmap, liftmap_to_obj(lift))
    print(
        f"reduced: {G.num_vertices} -> {R.num_vertices} vertices, "
        f"{len(lift.expansions)} suppressed chains"
    )
    return EXIT_OK


def cmd_sigma(args) -> int:
    A = parse_group_spec(args.group_spec)
    print(sigma(A))
    return EXIT_OK


def cmd_check_restricted(args) -> int:
    G = instance_from_obj(load_json(args.instance))
    R, _ = reduce_minor(G)
    B = parse_subgroup(G.group, args.subgroup)
    bad = restriction_violation(R, B)
    if bad is None:
        print(f"restricted: every small permissible cycle weight lies in {sorted(B.elements)}")
        return EXIT_OK
    from .serialize import dumps

    if bad.kind == "cycle-weight-outside-subgroup":
        cyc = bad.witness
        payload = {
            "violation": bad.kind,
            "cycle": list(cyc.vertices),
            "weight": list(R.cycle_weight(cyc.vertices)),
        }
    else:
        u, v, w = bad.witness
        payload = {"violation": bad.kind, "edge": [u, v], "weight": list(w)}
    sys.stdout.write(dumps(payload))
    return EXIT_VIOLATION


def cmd_oracle(args) -> int:
    from .oracle import SearchBudget, brute_force_subdivision

    G = instance_from_obj(load_json(args.instance))
    H = load_target(args.h)
    budget = SearchBudget(
        max_vertices=args.oracle_max_vertices,
        max_paths_per_pair=args.max_paths,
        time_cap_seconds=args.time_cap,
    )
    res = brute_force_subdivision(G, H, G.group, budget)
    from .serialize import dumps

    payload = {"verdict": res.verdict}
    if res.reason:
        payload["reason"] = res.reason
    if res.subdivision is not None:
        payload["certificate"] = certificate_to_obj(res.subdivision)
        if args.out:
            save_json(args.out, certificate_to_obj(res.subdivision))
    sys.stdout.write(dumps(payload))
    if res.verdict == "witness":
        return EXIT_OK
    if res.verdict == "none":
        return EXIT_VIOLATION
    return EXIT_BUDGET


def _batch_one(job) -> dict:
    seed, cfg = job
    t0 = time.monotonic()
    group = parse_group_spec(cfg["group"])
    spec = GenSpec(
        shape=cfg["shape"],
        f=cfg["f"],
        group=group,
        weight_mode=cfg["weights"],
        seed=seed,
        min_length=cfg["min_len"],
        max_length=cfg["max_len"],
        max_tree_size=cfg["tree_size"],
    )
    row = {"seed": seed, "f": cfg["f"]}
    try:
        G = gen_minor(spec)
        H = load_target(cfg["h"])
        row["vertices"] = G.num_vertices
        sub = embed(G, H, subset_cycle_cap=cfg["cycle_cap"])
        bad = verify_subdivision(G, H, G.group, sub)
        if bad is not None:
            row["result"] = f"verifier-rejected:{bad.kind}"
        else:
            row["result"] = "ok"
            spent = sub.stats["supernodes_spent"]
            row["connectors"] = sub.stats["connectors"]
            row["descents"] = sub.stats["descents"]
            row["spent_connectors"] = spent["connectors"]
            row["spent_descents"] = spent["descents"]
            row["budget"] = sub.stats["bound"]
            lengths = [len(p) - 1 for p in sub.paths.values()]
            row["path_lengths"] = lengths
            row["max_path_len"] = max(lengths) if lengths else 0
    except EmbedFailure as exc:
        row["result"] = f"embed-failed:{exc.stage}"
    row["seconds"] = round(time.monotonic() - t0, 3)
    return row


def cmd_batch(args) -> int:
    try:
        lo, hi = (int(x) for x in args.seeds.split(":"))
    except ValueError as exc:
        raise UsageError(f"--seeds wants LO:HI, got {args.seeds!r}") from exc
    if hi <= lo:
        raise UsageError("--seeds range is empty")
    cfg = {
        "shape": args.shape,
        "f": args.f,
        "group": args.group,
        "weights": args.weights,
        "h": args.h,
        "cycle_cap": args.cycle_cap,
        "min_len": args.min_len,
        "max_len": args.max_len,
        "tree_size": args.tree_size,
    }
    jobs = [(seed, cfg) for seed in range(lo, hi)]
    if args.workers > 1:
        import multiprocessing

        method = "fork" if "fork" in multiprocessing.get_all_start_methods() else "spawn"
        with multiprocessing.get_context(method).Pool(args.workers) as pool:
            rows = pool.map(_batch_one, jobs)
    else:
        rows = [_batch_one(job) for job in jobs]
    rows.sort(key=lambda r: r["seed"])
    print(report_mod.format_table(rows))
    ok = sum(1 for r in rows if r["result"] == "ok")
    print(f"{ok}/{len(rows)} seeds embedded and verified")
    if args.out_dir:
        os.makedirs(args.out_dir, exist_ok=True)
        csv_path = os.path.join(args.out_dir, "summary.csv")
        report_mod.write_csv(rows, csv_path)
        written = [csv_path]
        if args.figures:
            written += report_mod.render_figures(rows, args.out_dir)
        print("wrote " + ", ".join(written))
    return EXIT_OK if ok == len(rows) else EXIT_VIOLATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="divsub",
        description="Group-divisible subdivisions in weighted clique minors.",
        epilog="Environment overrides: DIVSUB_GROUP, DIVSUB_SEED, DIVSUB_CYCLE_CAP, "
        "DIVSUB_ORACLE_MAX_VERTICES, DIVSUB_WORKERS.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common_gen(p):
        p.add_argument("--shape", default="subdivided-clique",
                       choices=["subdivided-clique", "blownup-clique", "adversarial-divisible"])
        p.add_argument("--f", type=int, required=True, help="number of supernodes")
        p.add_argument("--group", default=_env("GROUP", "Z_2"),
                       help='group spec, e.g. "Z_2", "Z_2 x Z_3", "Z2^3"')
        p.add_argument("--weights", default="unit", choices=["unit", "random", "zero"])
        p.add_argument("--seed", type=int, default=int(_env("SEED", "0")))
        p.add_argument("--min-len", type=int, default=1, dest="min_len")
        p.add_argument("--max-len", type=int, default=3, dest="max_len")
        p.add_argument("--tree-size", type=int, default=4, dest="tree_size")

    p = sub.add_parser("gen", help="generate a weighted clique-minor instance")
    add_common_gen(p)
    p.add_argument("--out", help="output JSON path (stdout when omitted)")
    p.add_argument("--dot", help="also write a DOT rendering")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("embed", help="find a divisible subdivision and emit a certificate")
    p.add_argument("--instance", required=True)
    p.add_argument("--h", required=True, help="target graph name (C_3, P_4, K_4, petersen, "
                   "random-subcubic(n,seed)) or JSON path")
    p.add_argument("--out", required=True, help="certificate JSON path")
    p.add_argument("--dot", help="also write a DOT rendering of the instance")
    p.add_argument("--cycle-cap", type=int, default=int(_env("CYCLE_CAP", "10000")),
                   dest="cycle_cap")
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("verify", help="verify a certificate against instance and target")
    p.add_argument("--instance", required=True)
    p.add_argument("--h", required=True)
    p.add_argument("--certificate", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("reduce", help="reduce an instance; optionally dump the lift map")
    p.add_argument("--instance", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--liftmap", help="write the edge-expansion map JSON here")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("sigma", help="print the doubling parameter of a group")
    p.add_argument("group_spec")
    p.set_defaults(func=cmd_sigma)

    p = sub.add_parser("check-restricted", help="check subgroup restriction of an instance")
    p.add_argument("--instance", required=True)
    p.add_argument("--subgroup", default="",
                   help='generators, e.g. "2" or "1:0,0:1"; empty means the trivial subgroup')
    p.set_defaults(func=cmd_check_restricted)

    p = sub.add_parser("oracle", help="exhaustive search on a tiny instance")
    p.add_argument("--instance", required=True)
    p.add_argument("--h", required=True)
    p.add_argument("--out", help="write the witness certificate here if found")
    p.add_argument("--oracle-max-vertices", type=int,
                   default=int(_env("ORACLE_MAX_VERTICES", "14")), dest="oracle_max_vertices")
    p.add_argument("--max-paths", type=int, default=200_000, dest="max_paths")
    p.add_argument("--time-cap", type=float, default=60.0, dest="time_cap")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("batch", help="seeded embed+verify sweep with a summary report")
    add_common_gen(p)
    p.add_argument("--h", required=True)
    p.add_argument("--seeds", required=True, help="seed range LO:HI (half-open)")
    p.add_argument("--workers", type=int, default=int(_env("WORKERS", "1")))
    p.add_argument("--out-dir", dest="out_dir", help="write summary.csv and figures here")
    p.add_argument("--cycle-cap", type=int, default=int(_env("CYCLE_CAP", "10000")),
                   dest="cycle_cap")
    p.add_argument("--figures", action=argparse.BooleanOptionalAction, default=True,
                   help="render PNG figures alongside the CSV")
    p.set_defaults(func=cmd_batch)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (StructuralError, UnsupportedError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except EmbedFailure as exc:
        print(f"failed: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ResourceError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (SoundnessError, AssertionError) as exc:
        import traceback

        traceback.print_exc()
        print(f"internal soundness failure: {exc}", file=sys.stderr)
        return EXIT_SOUNDNESS


if __name__ == "__main__":
    sys.exit(main())
