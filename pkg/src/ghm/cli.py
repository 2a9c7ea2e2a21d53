"""Command-line interface: one binary, subcommand tree mirroring the modules.

JSON reports are deterministic per (input, seed, command); wall-clock timing
goes to stderr so identical runs stay byte-identical on stdout.  Exit codes:
0 success, 2 class violation, 1 usage or input errors.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time

import numpy as np

from . import __version__
from .errors import ClassViolation, GhmError, NotChordal, PreconditionUnmet
from .graph import Graph, load_graph, write_edgelist
from .helly import SampleParams

SCHEMA = "ghm.report/1"


def _hash_file(path) -> str:
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


def _emit(args, command: str, result: dict, started: float, seed=None, extra=None):
    report = {
        "schema": SCHEMA,
        "command": command,
        "input_sha256": _hash_file(args.input) if getattr(args, "input", None) else None,
        "seed": seed,
        "result": result,
    }
    if extra:
        report.update(extra)
    wall_ms = (time.perf_counter() - started) * 1000.0
    if args.json:
        print(json.dumps(report, sort_keys=True, separators=(",", ":")))
        print(f"wall_time_ms={wall_ms:.3f}", file=sys.stderr)
    else:
        print(json.dumps(report, sort_keys=True, indent=2))
        print(f"wall_time_ms={wall_ms:.3f}")
    return 0


def _need_seed(args) -> int:
    if args.seed is None:
        raise SystemExit2("--seed is required for randomized commands in --json mode"
                          if args.json else "--seed is required for this command")
    return int(args.seed)


class SystemExit2(Exception):
    """Usage error carrying exit code 1."""


def _sample_params(args) -> SampleParams:
    kwargs = {"seed": _need_seed(args)}
    if getattr(args, "eps", None) is not None:
        kwargs["eps"] = float(args.eps)
    if getattr(args, "repeats", None) is not None:
        kwargs["repeats"] = int(args.repeats)
    return SampleParams(**kwargs)


def _load(args) -> Graph:
    return load_graph(args.input)


def cmd_helly(args) -> int:
    from . import helly

    t0 = time.perf_counter()
    g = _load(args)
    params = _sample_params(args)
    if args.op == "radius":
        res = helly.radius(g, params, verify_class=args.verify_class)
        return _emit(args, "helly radius",
                     {"radius": res.radius, "diam_upper": res.diam_upper,
                      "center": res.center, "method": res.method},
                     t0, seed=params.seed)
    if args.op == "diameter":
        res = helly.diametral_pair(g, params)
        return _emit(args, "helly diameter",
                     {"diameter": res.distance, "pair": [res.x, res.y],
                      "exact_for_class": res.exact, "flagged": res.flagged,
                      "method": res.method},
                     t0, seed=params.seed)
    if args.op == "ecc-le":
        if args.k is None:
            raise SystemExit2("--k is required for ecc-le")
        members = helly.vertices_ecc_at_most(g, int(args.k))
        return _emit(args, "helly ecc-le",
                     {"k": int(args.k), "vertices": [int(v) for v in members]},
                     t0, seed=params.seed)
    raise SystemExit2(f"unknown helly op {args.op!r}")


def cmd_c4h(args) -> int:
    from . import c4free

    t0 = time.perf_counter()
    g = _load(args)
    if args.op == "center":
        c, r = c4free.central_vertex(g)
        return _emit(args, "c4h center", {"center": c, "radius": r}, t0)
    if args.op == "diameter":
        cert = c4free.diametral_pair(g)
        return _emit(args, "c4h diameter",
                     {"diameter": cert.d, "pair": [cert.x, cert.y], "radius": cert.radius,
                      "branch": cert.branch}, t0)
    if args.op == "all-ecc":
        ecc = c4free.all_eccentricities(g)
        return _emit(args, "c4h all-ecc", {"eccentricities": ecc.tolist()}, t0)
    if args.op == "certify-chordal":
        out = c4free.certify_chordal_diameter(g)
        return _emit(args, "c4h certify-chordal",
                     {"certified": out.certified, "diameter": out.diameter,
                      "pair": list(out.pair) if out.pair else None,
                      "lexbfs_ecc": out.lexbfs_ecc,
                      "radius_method": out.radius_method,
                      "not_helly_reason": out.not_helly_reason}, t0)
    raise SystemExit2(f"unknown c4h op {args.op!r}")


def cmd_split(args) -> int:
    from . import split as split_mod
    from .split import SparseSplit, read_sparse_split

    t0 = time.perf_counter()
    if args.format == "edgelist":
        h = SparseSplit.from_graph(load_graph(args.input))
    else:
        with open(args.input, "r", encoding="utf-8") as fh:
            h = read_sparse_split(fh.read())
    if args.op == "diam":
        d = split_mod.split_diameter(h, kernel=args.kernel)
        return _emit(args, "split diam", {"diameter": d, "kernel": args.kernel}, t0)
    if args.op == "pair":
        x, y, d = split_mod.diametral_pair(h)
        return _emit(args, "split pair", {"diameter": d, "pair": [int(x), int(y)]}, t0)
    if args.op == "disjoint":
        cidx = {c: i for i, c in enumerate(h.clique)}
        fam = split_mod.SetFamily(len(h.clique),
                                  tuple(tuple(cidx[c] for c in nb) for nb in h.nbrs))
        hit = split_mod.KERNELS[args.kernel](fam)
        res = {"disjoint_pair": None if hit is None
               else [int(h.stable[hit[0]]), int(h.stable[hit[1]])],
               "kernel": args.kernel}
        return _emit(args, "split disjoint", res, t0)
    raise SystemExit2(f"unknown split op {args.op!r}")


def cmd_chordal(args) -> int:
    from . import chordal as chordal_mod

    t0 = time.perf_counter()
    g = _load(args)
    if args.op == "diam":
        params = _sample_params(args)
        res = chordal_mod.chordal_diameter(g, params, kernel=args.kernel)
        return _emit(args, "chordal diam",
                     {"diameter": res.diameter, "pair": list(res.pair),
                      "verified": res.verified, "kernel": args.kernel},
                     t0, seed=params.seed)
    if args.op == "ecc-approx":
        res = chordal_mod.chordal_ecc_plus_one(g)
        return _emit(args, "chordal ecc-approx",
                     {"eccentricity_lower_bounds": res.approx.tolist()}, t0)
    if args.op == "emit-splits":
        params = _sample_params(args)
        import os

        from .split import write_sparse_split

        t = chordal_mod.build_clique_tree(g, validate=False)
        os.makedirs(args.out_dir, exist_ok=True)
        rng = np.random.Generator(np.random.Philox(params.seed_sequence()))
        written = []
        frames = [list(range(len(t.nodes)))]
        while frames:
            frame = frames.pop()
            if len(frame) <= 2:
                continue
            step = chordal_mod.make_centroid_step(g, t, frame)
            if len(step.components) >= 2:
                h = chordal_mod.emit_split_instance(step, g, rng)
                name = f"split_{len(written):04d}.ss"
                with open(os.path.join(args.out_dir, name), "w", encoding="utf-8") as fh:
                    fh.write(write_sparse_split(h))
                written.append(name)
            frames.extend(list(c.node_ids) for c in step.components)
        return _emit(args, "chordal emit-splits",
                     {"out_dir": args.out_dir, "instances": written},
                     t0, seed=params.seed)
    raise SystemExit2(f"unknown chordal op {args.op!r}")


def cmd_oracle(args) -> int:
    from .oracles import RECOGNIZERS, verify_class_axioms

    t0 = time.perf_counter()
    g = _load(args)
    if args.op == "check":
        out = {}
        for name, fn in RECOGNIZERS.items():
            cert = fn(g)
            key = {"helly-ballfamily": "helly"}.get(name, name)
            out[key] = cert.holds
            if not cert.holds and cert.witness is not None:
                out[f"{key}_witness"] = _jsonable(cert.witness)
        return _emit(args, "oracle check", out, t0)
    if args.op == "axioms":
        rep = verify_class_axioms(g, args.klass)
        return _emit(args, "oracle axioms",
                     {"class": args.klass, "ok": rep.ok,
                      "checks": [{k: _jsonable(v) for k, v in c.items()}
                                 for c in rep.checks]}, t0)
    raise SystemExit2(f"unknown oracle op {args.op!r}")


def cmd_gen(args) -> int:
    from .generators import generate
    from .oracles import RECOGNIZERS

    t0 = time.perf_counter()
    params = {}
    if args.kind in ("tree", "random_chordal", "random_split_helly"):
        if args.n is None:
            raise SystemExit2("--n is required for this generator")
        params["n"] = args.n
        params["seed"] = _need_seed(args)
    if args.kind == "tree" and args.shape:
        params["shape"] = args.shape
    if args.kind == "king":
        if args.a is None or args.b is None:
            raise SystemExit2("--a and --b are required for king grids")
        params.update(a=args.a, b=args.b)
    if args.kind == "fixture":
        if not args.name:
            raise SystemExit2("--name is required for fixtures")
        params["name"] = args.name
    g = generate(args.kind, **params)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(write_edgelist(g))
    cert = {}
    check = {"tree": "chordal", "king": None, "random_chordal": "chordal",
             "random_split_helly": "split", "fixture": None}[args.kind]
    if check:
        cert[check] = RECOGNIZERS[check](g).holds
    args.input = args.out
    return _emit(args, f"gen {args.kind}",
                 {"out": args.out, "n": g.n, "m": g.m, "certificates": cert},
                 t0, seed=args.seed)


def cmd_bench(args) -> int:
    from . import bench

    t0 = time.perf_counter()
    rows = bench.run_suite(args.suite, seed=_need_seed(args), runs=args.runs,
                           scale=args.scale)
    if args.json:
        return _emit(args, f"bench {args.suite}", {"rows": rows}, t0, seed=args.seed)
    print("n,m,algo,median_s,runs")
    for row in rows:
        print(f'{row["n"]},{row["m"]},{row["algo"]},{row["median_s"]:.6f},{row["runs"]}')
    return 0


def _jsonable(obj):
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (list, tuple)):
        return [_jsonable(x) for x in obj]
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    return obj


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ghm",
                                description="Graph metrics for Helly-type graph classes")
    p.add_argument("--version", action="version", version=f"ghm {__version__}")
    sub = p.add_subparsers(dest="module", required=True)

    def common(sp, seeded=False, kernel=False):
        sp.add_argument("--input", required=True)
        sp.add_argument("--json", action="store_true")
        if seeded:
            sp.add_argument("--seed", type=int, default=None)
        if kernel:
            sp.add_argument("--kernel", choices=("naive", "packed"), default="packed")

    helly_p = sub.add_parser("helly", help="randomized Helly-graph metrics")
    helly_p.add_argument("op", choices=("radius", "diameter", "ecc-le"))
    common(helly_p, seeded=True)
    helly_p.add_argument("--eps", type=float, default=None)
    helly_p.add_argument("--k", type=int, default=None)
    helly_p.add_argument("--verify-class", action="store_true")
    helly_p.set_defaults(fn=cmd_helly)

    c4h_p = sub.add_parser("c4h", help="linear-time C4-free Helly metrics")
    c4h_p.add_argument("op", choices=("center", "diameter", "all-ecc", "certify-chordal"))
    common(c4h_p)
    c4h_p.set_defaults(fn=cmd_c4h)

    split_p = sub.add_parser("split", help="split-graph solvers")
    split_p.add_argument("op", choices=("diam", "pair", "disjoint"))
    common(split_p, kernel=True)
    split_p.add_argument("--format", choices=("edgelist", "sparse"), default="sparse")
    split_p.set_defaults(fn=cmd_split)

    chordal_p = sub.add_parser("chordal", help="chordal reduction algorithms")
    chordal_p.add_argument("op", choices=("diam", "ecc-approx", "emit-splits"))
    common(chordal_p, seeded=True, kernel=True)
    chordal_p.add_argument("--repeats", type=int, default=None)
    chordal_p.add_argument("--out-dir", default="splits-out")
    chordal_p.set_defaults(fn=cmd_chordal)

    oracle_p = sub.add_parser("oracle", help="class recognizers and axiom checks")
    oracle_p.add_argument("op", choices=("check", "axioms"))
    common(oracle_p)
    oracle_p.add_argument("--class", dest="klass", default="helly-ballfamily")
    oracle_p.set_defaults(fn=cmd_oracle)

    gen_p = sub.add_parser("gen", help="emit certified instances as edge lists")
    gen_p.add_argument("kind", choices=("tree", "king", "random_chordal",
                                        "random_split_helly", "fixture"))
    gen_p.add_argument("--out", required=True)
    gen_p.add_argument("--json", action="store_true")
    gen_p.add_argument("--seed", type=int, default=None)
    gen_p.add_argument("--n", type=int, default=None)
    gen_p.add_argument("--a", type=int, default=None)
    gen_p.add_argument("--b", type=int, default=None)
    gen_p.add_argument("--shape", default=None)
    gen_p.add_argument("--name", default=None)
    gen_p.set_defaults(fn=cmd_gen)

    bench_p = sub.add_parser("bench", help="scaling benchmarks, CSV output")
    bench_p.add_argument("suite", choices=("king-ladder", "chordal-ladder", "split-kernels"))
    bench_p.add_argument("--seed", type=int, default=None)
    bench_p.add_argument("--runs", type=int, default=5)
    bench_p.add_argument("--scale", type=float, default=1.0)
    bench_p.add_argument("--json", action="store_true")
    bench_p.set_defaults(fn=cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.fn(args)
    except SystemExit2 as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ClassViolation, NotChordal, PreconditionUnmet) as exc:
        print(f"class violation: {exc}", file=sys.stderr)
        return 2
    except (GhmError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
