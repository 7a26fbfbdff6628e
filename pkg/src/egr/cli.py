"""Command-line front end over the construction and search modules.

Verbs: ``construct`` writes a configuration built by one of the named
builders, ``copies`` enumerates congruent copies of a simplex inside a
stored configuration, ``solve`` runs the coloring search on a problem
file, ``scan`` runs one of the exhaustive logic scans, and ``report``
prints a human-readable summary of any artifact.

Every artifact is JSON, written atomically and re-validated by
reloading before the command reports success.  Exit codes: 0 for
success (FORCED for solve, zero violations for scan), 1 for a found
counterexample or scan violations, 2 for any error or indeterminate
outcome.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .geometry import (
    Configuration,
    GeometryError,
    SimplexSpec,
    embed_from_distances,
    enumerate_copies,
    read_json,
    write_json_atomic,
)
from .palettes import classification_scan
from .perturbation import build_perturbation_grid, contract_simplex
from .rectangles import path_config, product_config, regular_simplex
from .solver import (
    BudgetExceeded,
    ColoringProblem,
    DEFAULT_BUDGET,
    five_point_logic_scan,
    solve_gr,
    verify_coloring,
)
from .tetra import (
    build_anchor_gadget,
    build_link,
    build_x1,
    dense_quadruple,
    glue_two_copies,
    tetra_profile,
)
from .triangles import build_five_point, chain_on_sphere

EXIT_OK = 0
EXIT_FOUND = 1
EXIT_ERROR = 2


def _tetra_spec(args) -> SimplexSpec:
    if args.spec is not None:
        return SimplexSpec.load(args.spec)
    return SimplexSpec.regular(4, args.side)


def _add_tetra_source(sub):
    sub.add_argument("--spec", help="squared-distance matrix JSON for the tetrahedron")
    sub.add_argument("--side", type=float, default=1.0, help="regular side when --spec is absent")


def _construct_five_point(args) -> Configuration:
    return build_five_point(args.a, args.b, args.c, args.eps).as_configuration()


def _construct_chain(args) -> Configuration:
    if not 0.0 < args.gap <= 2.0 * args.s:
        raise GeometryError(f"endpoint gap must lie in (0, 2s], got {args.gap}")
    center = np.zeros(args.dim)
    u = center.copy()
    u[0] = args.s
    alpha = 2.0 * np.arcsin(args.gap / (2.0 * args.s))
    v = center.copy()
    v[0] = args.s * np.cos(alpha)
    v[1] = args.s * np.sin(alpha)
    return chain_on_sphere(center, args.s, u, v, args.d).as_configuration()


def _construct_regular_simplex(args) -> Configuration:
    return regular_simplex(args.n, args.x)


def _construct_path(args) -> Configuration:
    return path_config(args.t, args.x, args.y).as_configuration()


def _construct_product(args) -> Configuration:
    left = regular_simplex(args.n, args.x)
    right = path_config(args.t, args.x, args.y).as_configuration()
    return product_config(left, right).product


def _construct_grid(args) -> Configuration:
    if args.spec is not None:
        spec = SimplexSpec.load(args.spec)
    else:
        spec = SimplexSpec.regular(args.regular_k, args.side)
    k = spec.k
    grid = build_perturbation_grid(spec, [args.m] * (k - 1), args.eps)
    cfg = grid.B
    cfg.notes["connected"] = grid.is_connected()
    return cfg


def _construct_hinge(args) -> Configuration:
    profile = tetra_profile(_tetra_spec(args))
    phi = args.phi if args.phi is not None else profile.theta
    return glue_two_copies(profile, phi).as_configuration()


def _construct_dense_quad(args) -> Configuration:
    return dense_quadruple(tetra_profile(_tetra_spec(args))).as_configuration()


def _construct_link(args) -> Configuration:
    spec = _tetra_spec(args)
    profile = tetra_profile(spec)
    pts = embed_from_distances(spec)
    shift = np.zeros(pts.shape[1])
    shift[0] = args.offset
    out = build_link(
        profile, pts, pts + shift, k_b=args.k_b, k_d=args.k_d, corner_angle=args.corner_angle
    )
    return out.cfg


def _construct_x1(args) -> Configuration:
    spec = _tetra_spec(args)
    profile = tetra_profile(spec)
    out = build_x1(
        profile,
        embed_from_distances(spec),
        min_leg_edges=args.min_leg_edges,
        corner_angle=args.corner_angle,
    )
    return out.cfg


def _construct_anchor_gadget(args) -> Configuration:
    spec = _tetra_spec(args)
    profile = tetra_profile(spec)
    edge = tuple(args.edge) if args.edge is not None else None
    out = build_anchor_gadget(profile, edge=edge, k=args.k, corner_angle=args.corner_angle)
    return out.cfg


def _construct_contract(args) -> Configuration:
    if args.spec is not None:
        spec = SimplexSpec.load(args.spec)
    else:
        spec = SimplexSpec.regular(args.regular_k, args.side)
    result = contract_simplex(spec, args.eps)
    pts = embed_from_distances(result.contracted)
    return Configuration(
        points=pts,
        notes={
            "kind": "contracted_simplex",
            "eps": result.eps,
            "eps_max": result.eps_max,
            "original_sq_dist": [[float(x) for x in row] for row in spec.sq_dist],
        },
    )


CONSTRUCTORS = {
    "five-point": _construct_five_point,
    "chain": _construct_chain,
    "regular-simplex": _construct_regular_simplex,
    "path": _construct_path,
    "product": _construct_product,
    "grid": _construct_grid,
    "hinge": _construct_hinge,
    "dense-quad": _construct_dense_quad,
    "link": _construct_link,
    "x1": _construct_x1,
    "anchor-gadget": _construct_anchor_gadget,
    "contract": _construct_contract,
}


def _write_config(cfg: Configuration, path: str) -> None:
    cfg.save(path)
    back = Configuration.from_json_dict(read_json(path))
    if not np.array_equal(back.points, cfg.points):
        raise GeometryError("written configuration does not round-trip")
    if back.named_copies != cfg.named_copies:
        raise GeometryError("written copy tuples do not round-trip")


def _cmd_construct(args) -> int:
    cfg = CONSTRUCTORS[args.name](args)
    _write_config(cfg, args.output)
    n_copies = sum(len(v) for v in cfg.named_copies.values())
    print(f"wrote {args.output}: {len(cfg)} points, dim {cfg.dim}, {n_copies} named copies")
    return EXIT_OK


def _cmd_copies(args) -> int:
    cfg = Configuration.load(args.config)
    spec = SimplexSpec.load(args.spec)
    found = enumerate_copies(cfg, spec)
    payload = {
        "kind": "copies",
        "config": args.config,
        "spec": spec.to_json_dict(),
        "count": len(found),
        "copies": [list(t) for t in found],
    }
    write_json_atomic(args.output, payload)
    back = read_json(args.output)
    if back["copies"] != payload["copies"]:
        raise GeometryError("written copies do not round-trip")
    print(f"wrote {args.output}: {len(found)} copies")
    return EXIT_OK


def _resolve_budget(args) -> float:
    if args.budget is not None:
        return float(args.budget)
    env = os.environ.get("EGL_BUDGET")
    if env:
        return float(env)
    return DEFAULT_BUDGET


def _cmd_solve(args) -> int:
    problem = ColoringProblem.from_json_dict(read_json(args.problem))
    result = solve_gr(problem, budget=_resolve_budget(args))
    if result.witness is not None:
        replay = verify_coloring(problem, result.witness)
        if not replay["clean"]:
            print(f"witness failed re-verification: {replay}", file=sys.stderr)
            return EXIT_ERROR
    payload = result.to_json_dict()
    payload["r"] = problem.r
    payload["points"] = len(problem.cfg.points)
    write_json_atomic(args.output, payload)
    print(f"{result.verdict} in {result.stats.nodes} nodes -> {args.output}")
    return EXIT_OK if result.verdict == "FORCED" else EXIT_FOUND


def _cmd_scan(args) -> int:
    if args.kind == "five-point":
        body = five_point_logic_scan(args.r)
        violations = body["violations"]
    else:
        body = classification_scan(args.r)
        violations = body["unclassifiable"]
    payload = {"kind": args.kind, "r": args.r, **body}
    write_json_atomic(args.output, payload)
    print(f"wrote {args.output}: {violations} violations")
    return EXIT_OK if violations == 0 else EXIT_FOUND


def _summarize(data: dict) -> list:
    if "verdict" in data:
        lines = [f"solve result: {data['verdict']}"]
        if data.get("witness") is not None:
            lines.append(f"witness over {len(data['witness'])} points")
        if "stats" in data:
            lines.append(
                f"nodes {data['stats'].get('nodes')}, elapsed {data['stats'].get('elapsed'):.3f}s"
            )
        return lines
    if data.get("kind") == "copies":
        return [f"copies artifact: {data['count']} copies of a {len(data['spec']['sq_dist'])}-point spec"]
    if data.get("kind") in ("five-point", "classification"):
        keys = [k for k in data if k not in ("kind", "r")]
        body = ", ".join(f"{k}={data[k]}" for k in sorted(keys))
        return [f"{data['kind']} scan at r={data['r']}: {body}"]
    if "points" in data and "dim" in data:
        cfg = Configuration.from_json_dict(data)
        lines = [f"configuration: {len(cfg)} points, dim {cfg.dim}"]
        for name, tuples in cfg.named_copies.items():
            lines.append(f"  copies[{name}]: {len(tuples)}")
        if cfg.notes:
            kind = cfg.notes.get("kind")
            if kind:
                lines.append(f"  kind: {kind}")
        return lines
    if "config" in data and "mono" in data:
        return [
            "problem: "
            f"{len(data['config']['points'])} points, r={data['r']}, "
            f"{len(data['mono'])} mono targets, {len(data['rainbow'])} rainbow targets"
        ]
    raise GeometryError("unrecognized artifact shape")


def _cmd_report(args) -> int:
    for line in _summarize(read_json(args.file)):
        print(line)
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="egr")
    parser.add_argument("--seed", type=int, default=0, help="seed for any sampled quantities")
    verbs = parser.add_subparsers(dest="verb", required=True)

    construct = verbs.add_parser("construct", help="build and write a configuration")
    names = construct.add_subparsers(dest="name", required=True)

    p = names.add_parser("five-point")
    for flag in ("--a", "--b", "--c", "--eps"):
        p.add_argument(flag, type=float, required=True)

    p = names.add_parser("chain")
    p.add_argument("--s", type=float, required=True, help="sphere radius")
    p.add_argument("--d", type=float, required=True, help="hop length")
    p.add_argument("--gap", type=float, required=True, help="endpoint distance")
    p.add_argument("--dim", type=int, default=3)

    p = names.add_parser("regular-simplex")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--x", type=float, required=True)

    p = names.add_parser("path")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--y", type=float, required=True)

    p = names.add_parser("product")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--y", type=float, required=True)

    p = names.add_parser("grid")
    p.add_argument("--spec")
    p.add_argument("--regular-k", type=int, default=3)
    p.add_argument("--side", type=float, default=1.0)
    p.add_argument("--m", type=int, default=2, help="subdivision count per edge")
    p.add_argument("--eps", type=float, required=True)

    p = names.add_parser("hinge")
    _add_tetra_source(p)
    p.add_argument("--phi", type=float, help="hinge angle, default theta")

    p = names.add_parser("dense-quad")
    _add_tetra_source(p)

    p = names.add_parser("link")
    _add_tetra_source(p)
    p.add_argument("--offset", type=float, default=0.0, help="x-shift of the far copy")
    p.add_argument("--k-b", type=int, default=1)
    p.add_argument("--k-d", type=int, default=1)
    p.add_argument("--corner-angle", type=float)

    p = names.add_parser("x1")
    _add_tetra_source(p)
    p.add_argument("--min-leg-edges", type=int, default=1)
    p.add_argument("--corner-angle", type=float)

    p = names.add_parser("anchor-gadget")
    _add_tetra_source(p)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--edge", type=int, nargs=2)
    p.add_argument("--corner-angle", type=float)

    p = names.add_parser("contract")
    p.add_argument("--spec")
    p.add_argument("--regular-k", type=int, default=4)
    p.add_argument("--side", type=float, default=1.0)
    p.add_argument("--eps", type=float, required=True)

    for p in names.choices.values():
        p.add_argument("-o", "--output", required=True)

    copies = verbs.add_parser("copies", help="enumerate congruent copies in a configuration")
    copies.add_argument("config")
    copies.add_argument("--spec", required=True)
    copies.add_argument("-o", "--output", required=True)

    solve = verbs.add_parser("solve", help="run the coloring search on a problem file")
    solve.add_argument("problem")
    solve.add_argument("--budget", type=float)
    solve.add_argument("-o", "--output", required=True)

    scan = verbs.add_parser("scan", help="run an exhaustive logic scan")
    scan.add_argument("kind", choices=["five-point", "classification"])
    scan.add_argument("--r", type=int, required=True)
    scan.add_argument("-o", "--output", required=True)

    report = verbs.add_parser("report", help="summarize an artifact file")
    report.add_argument("file")

    return parser


_HANDLERS = {
    "construct": _cmd_construct,
    "copies": _cmd_copies,
    "solve": _cmd_solve,
    "scan": _cmd_scan,
    "report": _cmd_report,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _HANDLERS[args.verb](args)
    except BudgetExceeded as err:
        print(f"INDETERMINATE: {err}", file=sys.stderr)
        return EXIT_ERROR
    except (ValueError, OSError, KeyError, json.JSONDecodeError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
