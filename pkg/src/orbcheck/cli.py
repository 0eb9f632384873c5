"""Command-line surface: deterministic text tables and a stable JSON shape.

Exit codes: 0 success, 2 usage errors, 3 domain constraint violations (a
non-Euclidean cusp, an unknown decision fact, a volume request for a
non-hyperbolic labeling).  The only environment variable read is
ORBCHECK_THREADS (positive integer, default: available parallelism); worker
count never changes output bytes.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__
from . import citations
from .orb2d import euclidean_turnovers, sphere
from .siggraph import (TetraPattern, cusp_cross_section, dump_graph,
                       from_tetra, load_graph, vertex_link)
from .homology import h1
from .geomvol import (RealizabilityClass, realizability,
                      tetrahedron_from_pattern, volume)
from .enumerator import (Candidate, VerdictKind, classify_tetrahedral,
                         decision_tree, enumerate_areflection_models,
                         enumerate_shapes, exclude_quadrilateral_type)


class ConstraintError(ValueError):
    pass


def _threads() -> int:
    raw = os.environ.get("ORBCHECK_THREADS")
    if raw is None:
        return os.cpu_count() or 1
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n < 1:
        raise ConstraintError("ORBCHECK_THREADS must be a positive integer")
    return n


def _parse_cusp(text: str):
    try:
        orders = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise ConstraintError(f"bad cusp triple {text!r}")
    if len(orders) != 3 or any(o < 2 for o in orders):
        raise ConstraintError(f"bad cusp triple {text!r}")
    return sphere(*orders)


def _parse_interior(text: str):
    try:
        labels = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise ConstraintError(f"bad interior triple {text!r}")
    if len(labels) != 3 or any(l < 2 for l in labels):
        raise ConstraintError(f"bad interior triple {text!r}")
    return labels


def _emit(args, payload: dict, text_lines: list[str]) -> None:
    if args.format == "json":
        sys.stdout.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write("\n".join(text_lines) + "\n")


def _payload(command: str, inputs: dict, results) -> dict:
    return {"command": command, "inputs": inputs, "results": results,
            "version": __version__}


def _candidate_json(c: Candidate) -> dict:
    out = {
        "interior": list(c.pattern.interior),
        "cusp": str(c.cusp),
        "links": [str(l) for l in c.links],
        "h1": {"torsion": list(c.homology.torsion),
               "free_rank": c.homology.free_rank},
        "symmetries": c.symmetry_count,
        "verdict": c.verdict.value,
        "citations": [citations.rule(k) for k in c.citation_chain],
        "graph": dump_graph(c.graph),
    }
    if c.quotient is not None:
        out["quotient"] = {
            "graph": dump_graph(c.quotient),
            "cusp": str(cusp_cross_section(c.quotient)),
            "provenance": {k: list(v) for k, v in c.quotient_provenance},
        }
    return out


def cmd_turnovers(args):
    results = [str(t) for t in euclidean_turnovers()]
    _emit(args, _payload("turnovers", {}, results), results)
    return 0


def cmd_classify(args):
    cusp = _parse_cusp(args.cusp)
    try:
        cands = classify_tetrahedral(cusp, args.bound, threads=_threads())
    except ValueError as e:
        raise ConstraintError(str(e))
    results = [_candidate_json(c) for c in cands]
    lines = [f"{'interior':<12} {'verdict':<28} {'H1':<12} {'sym':<4} links",
             "-" * 72]
    for c in cands:
        interior = ",".join(str(x) for x in c.pattern.interior)
        links = " ".join(str(l) for l in c.links)
        lines.append(f"{interior:<12} {c.verdict.value:<28} "
                     f"{str(c.homology):<12} {c.symmetry_count:<4} {links}")
    surv = [c for c in cands if c.verdict in
            (VerdictKind.FIGURE_EIGHT_CLASS, VerdictKind.DODECAHEDRAL_CLASS,
             VerdictKind.WHITEHEAD_CLASS_NO_KNOT)]
    lines.append("-" * 72)
    lines.append(f"candidates: {len(cands)}  survivors: {len(surv)}")
    _emit(args, _payload("classify",
                         {"cusp": str(cusp), "bound": args.bound}, results),
          lines)
    return 0


def cmd_h1(args):
    cusp = _parse_cusp(args.cusp)
    interior = _parse_interior(args.interior)
    try:
        g = from_tetra(TetraPattern(cusp, interior))
    except ValueError as e:
        raise ConstraintError(str(e))
    inv = h1(g)
    result = {"torsion": list(inv.torsion), "free_rank": inv.free_rank,
              "pretty": str(inv)}
    _emit(args, _payload("h1", {"cusp": str(cusp), "interior": list(interior)},
                         [result]),
          [f"H1 = {inv}", f"torsion: {list(inv.torsion)}",
           f"free rank: {inv.free_rank}"])
    return 0


def cmd_shapes(args):
    try:
        shapes = enumerate_shapes(args.boundary, args.max_interior)
    except ValueError as e:
        raise ConstraintError(str(e))
    results = [{"graph": dump_graph(g),
                "interior_vertices": sum(
                    1 for v, k in g.vertices.items()
                    if k.value == "interior"),
                "edges": len(g.edges)} for g in shapes]
    lines = [f"shapes with {args.boundary} boundary cone points "
             f"(interior vertices <= {args.max_interior}): {len(shapes)}"]
    for i, g in enumerate(shapes):
        lines.append(f"--- shape {i} ---")
        lines.append(dump_graph(g).rstrip("\n"))
    _emit(args, _payload("shapes", {"boundary": args.boundary,
                                    "max_interior": args.max_interior},
                         results), lines)
    return 0


def cmd_models(args):
    try:
        fams = enumerate_areflection_models(args.n_max, args.max_interior,
                                            threads=_threads())
    except ValueError as e:
        raise ConstraintError(str(e))
    results = []
    lines = [f"{'family':<12} {'cusp':<12} {'n range':<18} unbounded",
             "-" * 56]
    for f in fams:
        rng = ",".join(str(n) for n in f.admissible_n) if f.has_parameter else "-"
        results.append({
            "name": f.name,
            "cusp": str(f.cusp) if f.cusp else None,
            "parameter_edge": f.parameter_edge,
            "admissible_n": list(f.admissible_n),
            "unbounded_above": f.unbounded_above,
            "fixed_labels": {k: v for k, v in f.fixed_labels},
            "shape": dump_graph(f.shape) if f.shape is not None else None,
            "members": [{"n": n, "graph": dump_graph(g)} for n, g in f.members],
            "citations": [citations.rule(k) for k in f.citation_chain],
        })
        lines.append(f"{f.name:<12} {str(f.cusp) if f.cusp else '-':<12} "
                     f"{rng:<18} {'yes' if f.unbounded_above else 'no'}")
    lines.append("-" * 56)
    lines.append(f"families: {len(fams)}")
    _emit(args, _payload("models", {"n_max": args.n_max,
                                    "max_interior": args.max_interior},
                         results), lines)
    return 0


def cmd_volume(args):
    cusp = _parse_cusp(args.cusp)
    interior = _parse_interior(args.interior)
    try:
        pattern = TetraPattern(cusp, interior)
    except ValueError as e:
        raise ConstraintError(str(e))
    t = tetrahedron_from_pattern(pattern)
    rep = realizability(t)
    info = {
        "cusp": str(cusp), "interior": list(interior),
        "class": rep.klass.value,
        "signature": list(rep.signature),
        "ideal_vertices": list(rep.ideal_vertices),
    }
    if rep.klass is not RealizabilityClass.HYPERBOLIC_FINITE_VOLUME:
        raise ConstraintError(
            f"tetrahedron is {rep.klass.value}; volume undefined")
    v = volume(t)
    info["volume"] = round(v, 12)
    info["double_cover_volume"] = round(2 * v, 12)
    lines = [f"class: {rep.klass.value}",
             f"signature: {tuple(rep.signature)}",
             f"ideal vertices: {len(rep.ideal_vertices)}",
             f"volume: {v:.12f}",
             f"orientation double cover: {2 * v:.12f}"]
    _emit(args, _payload("volume", {"cusp": str(cusp),
                                    "interior": list(interior),
                                    "tol": args.tol}, [info]), lines)
    return 0


def cmd_quad_exclusion(args):
    cert = exclude_quadrilateral_type()
    results = [{
        "verdict": cert.verdict.value,
        "cusp": str(cusp_cross_section(cert.graph)),
        "graph": dump_graph(cert.graph),
        "steps": [{"rule": s.rule, "title": s.title,
                   "statement": s.statement,
                   "witness_cells": list(s.witness_cells)}
                  for s in cert.steps],
    }]
    lines = [f"verdict: {cert.verdict.value}",
             f"cusp of forced pattern: {cusp_cross_section(cert.graph)}"]
    for s in cert.steps:
        witness = " ".join(s.witness_cells) if s.witness_cells else "-"
        lines.append(f"[{s.rule}] {s.statement}")
        lines.append(f"    witness: {witness}")
    _emit(args, _payload("quad-exclusion", {}, results), lines)
    return 0


def cmd_decide(args):
    facts = [f for f in args.facts.split(",") if f]
    try:
        result = decision_tree(facts)
    except ValueError as e:
        raise ConstraintError(str(e))
    lines = [f"verdict: {result['verdict']}"]
    for c in result["citations"]:
        lines.append(f"[{c['rule']}] {c['statement']}")
    _emit(args, _payload("decide", {"facts": sorted(facts)}, [result]), lines)
    return 0


def cmd_graph(args):
    if args.action == "dump":
        if args.quad:
            g = exclude_quadrilateral_type().graph
        else:
            if not args.cusp or not args.interior:
                raise ConstraintError(
                    "graph dump needs --cusp and --interior, or --quad")
            cusp = _parse_cusp(args.cusp)
            interior = _parse_interior(args.interior)
            try:
                g = from_tetra(TetraPattern(cusp, interior))
            except ValueError as e:
                raise ConstraintError(str(e))
        text = dump_graph(g)
        if args.path == "-":
            sys.stdout.write(text)
        else:
            with open(args.path, "w") as fh:
                fh.write(text)
        return 0
    # load
    if args.path == "-":
        text = sys.stdin.read()
    else:
        with open(args.path) as fh:
            text = fh.read()
    try:
        g = load_graph(text)
    except ValueError as e:
        raise ConstraintError(str(e))
    lines = [f"vertices: {len(g.vertices)}  edges: {len(g.edges)}",
             f"cusp: {cusp_cross_section(g)}"]
    results = [{"vertices": len(g.vertices), "edges": len(g.edges),
                "cusp": str(cusp_cross_section(g)),
                "graph": dump_graph(g)}]
    _emit(args, _payload("graph-load", {"path": args.path}, results), lines)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="orbcheck",
        description="classification of one-cusped reflection orbifolds and "
                    "rigid-cusped minimal orbifolds")
    p.add_argument("--format", choices=("text", "json"), default="text")
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("turnovers", help="the Euclidean turnovers")

    c = sub.add_parser("classify", help="tetrahedral labelings for a cusp")
    c.add_argument("--cusp", required=True)
    c.add_argument("--bound", type=int, default=12)

    hh = sub.add_parser("h1", help="first homology of a tetrahedral labeling")
    hh.add_argument("--cusp", required=True)
    hh.add_argument("--interior", required=True)

    s = sub.add_parser("shapes", help="disk shapes surviving the arc rules")
    s.add_argument("--boundary", type=int, choices=(3, 4), required=True)
    s.add_argument("--max-interior", type=int, default=8, dest="max_interior")

    m = sub.add_parser("models", help="reflection-symmetric model families")
    m.add_argument("--n-max", type=int, default=12, dest="n_max")
    m.add_argument("--max-interior", type=int, default=8, dest="max_interior")

    v = sub.add_parser("volume", help="realizability and hyperbolic volume")
    v.add_argument("--cusp", required=True)
    v.add_argument("--interior", required=True)
    v.add_argument("--tol", type=float, default=1e-9)

    sub.add_parser("quad-exclusion",
                   help="certificate excluding the quadrilateral type")

    d = sub.add_parser("decide", help="decision rules on a fact set")
    d.add_argument("--facts", required=True)

    g = sub.add_parser("graph", help="dump or load serialized graphs")
    g.add_argument("action", choices=("dump", "load"))
    g.add_argument("path")
    g.add_argument("--cusp")
    g.add_argument("--interior")
    g.add_argument("--quad", action="store_true")

    return p


_HANDLERS = {
    "turnovers": cmd_turnovers,
    "classify": cmd_classify,
    "h1": cmd_h1,
    "shapes": cmd_shapes,
    "models": cmd_models,
    "volume": cmd_volume,
    "quad-exclusion": cmd_quad_exclusion,
    "decide": cmd_decide,
    "graph": cmd_graph,
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return _HANDLERS[args.command](args)
    except ConstraintError as e:
        sys.stderr.write(f"error: {e}\n")
        return 3


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
