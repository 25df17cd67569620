"""Batch command-line front end.

Exit codes: 0 for a definite result (or a passing suite), 2 for a
conditional classification, 1 for errors or suite failures.  All randomness
flows from one master seed; reports are byte-identical across reruns with
the same configuration.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from fractions import Fraction
from pathlib import Path

from .classify import (
    ActionAnnotation,
    AmalgamProblem,
    Annotation,
    HnnProblem,
    Verdict,
    WreathProblem,
    classify_amalgam,
    classify_graph_product,
    classify_hnn,
    classify_raag,
    classify_racg,
    classify_wreath,
)
from .complexes import build_x_gamma_ball
from .errors import CubemeansError, SchemaError
from .graphs import SimpGraph
from .groups import parse_group_spec
from .groups.amalgams import AmalgamCtx, HnnCtx
from .groups.graph_products import GraphProductCtx
from .groups.wreath import WreathCtx
from .means import ProbVec
from .reports import (
    complex_to_dot,
    complex_to_json,
    jsonable,
    render_report,
    tree_to_dot,
    tree_to_json,
    write_report,
)
from .suites import SUITES, run_suite
from .trees import (
    bass_serre_ball,
    classify_isometry,
    factor_partition_report,
    midpoint_inequality,
    phi_profile,
)

DEFAULT_CAP_ENV = "CUBEMEANS_CAP"


def _default_cap() -> int:
    return int(os.environ.get(DEFAULT_CAP_ENV, 10**6))


def _load_json(path: str):
    with open(path) as fh:
        return json.load(fh)


def _emit(doc: dict, out: str | None) -> None:
    if out:
        write_report(out, doc)
    else:
        sys.stdout.write(render_report(doc).decode())


def _parse_assumes(pairs: list[str]) -> dict[str, dict[str, object]]:
    """"target.field=value" assumptions grouped by target."""
    out: dict[str, dict[str, object]] = {}
    for raw in pairs or []:
        m = re.fullmatch(r"([^=.]+)\.([a-z_]+)=(.+)", raw.strip())
        if not m:
            raise SchemaError(f"bad --assume {raw!r}; use target.field=value")
        target, fieldname, value = m.groups()
        if value in ("true", "false"):
            parsed: object = value == "true"
        else:
            try:
                parsed = int(value)
            except ValueError:
                raise SchemaError(f"bad --assume value {value!r}")
        out.setdefault(target, {})[fieldname] = parsed
    return out


def _annotation(doc: dict | None, overrides: dict | None) -> Annotation:
    merged = dict(doc or {})
    merged.update(overrides or {})
    return Annotation.from_json(merged)


def _action_annotation(doc: dict | None, overrides: dict | None) -> ActionAnnotation:
    merged = dict(doc or {})
    merged.update(overrides or {})
    return ActionAnnotation.from_json(merged)


# --- classify -----------------------------------------------------------------


def cmd_classify(args) -> int:
    spec = _load_json(args.spec)
    assumes = _parse_assumes(args.assume)
    target = args.target

    if target in ("graph-product", "raag", "racg"):
        graph = SimpGraph.from_json(spec if "vertices" in spec else spec.get("graph", {}))
        if "vertex_groups" in spec and "vertices" not in spec:
            graph = SimpGraph.make(
                graph.vertices, [sorted(e) for e in graph.edges],
                vertex_groups=spec["vertex_groups"], annotations=graph.annotations,
            )
        if target == "raag" and not graph.vertex_groups:
            graph = SimpGraph.make(
                graph.vertices, [sorted(e) for e in graph.edges],
                vertex_groups={v: {"kind": "integers"} for v in graph.vertices},
            )
        if target == "racg" and not graph.vertex_groups:
            graph = SimpGraph.make(
                graph.vertices, [sorted(e) for e in graph.edges],
                vertex_groups={v: {"kind": "cyclic", "order": 2} for v in graph.vertices},
            )
        annotations = dict(graph.annotations)
        for vertex, fields in assumes.items():
            if vertex in graph.vertices:
                merged = dict(annotations.get(vertex, {}))
                merged.update(fields)
                annotations[vertex] = merged
        graph = SimpGraph.make(
            graph.vertices, [sorted(e) for e in graph.edges],
            vertex_groups=graph.vertex_groups, annotations=annotations,
        )
        verdict = {
            "graph-product": classify_graph_product,
            "raag": classify_raag,
            "racg": classify_racg,
        }[target](graph)
    elif target == "amalgam":
        verdict = _classify_amalgam_doc(spec, assumes)
    elif target == "hnn":
        verdict = _classify_hnn_doc(spec, assumes)
    elif target == "wreath":
        verdict = _classify_wreath_doc(spec, assumes)
    else:
        raise SchemaError(f"unknown classify target {target!r}")

    doc = verdict.to_json()
    doc["explanation"] = _explain(verdict)
    _emit(doc, args.out)
    return verdict.exit_code()


def _explain(v: Verdict) -> str:
    if v.result == "inner_amenable":
        return f"inner amenable: {v.witness}"
    if v.result == "not_inner_amenable":
        return f"not inner amenable: {v.witness}"
    return "conditional on: " + "; ".join(v.conditions)


def _classify_amalgam_doc(spec: dict, assumes: dict) -> Verdict:
    if spec.get("kind") == "amalgam":
        ctx = parse_group_spec(spec)
        problem = AmalgamProblem.from_ctx(ctx)
    elif spec.get("kind") == "amalgam_abstract":
        def idx(v):
            return None if v in (None, "infinite") else int(v)

        problem = AmalgamProblem(
            index_a=idx(spec.get("index_a")),
            index_b=idx(spec.get("index_b")),
            a=_annotation(spec.get("a"), assumes.get("a")),
            b=_annotation(spec.get("b"), assumes.get("b")),
            h=_annotation(spec.get("h"), assumes.get("h")),
        )
    else:
        raise SchemaError("amalgam classification needs an amalgam or amalgam_abstract spec")
    return classify_amalgam(problem)


def _classify_hnn_doc(spec: dict, assumes: dict) -> Verdict:
    if spec.get("kind") == "hnn":
        problem = HnnProblem.from_ctx(parse_group_spec(spec))
    elif spec.get("kind") == "hnn_abstract":
        problem = HnnProblem(
            ascending=bool(spec.get("ascending")),
            k=_annotation(spec.get("k"), assumes.get("k")),
            h=_annotation(spec.get("h"), assumes.get("h")),
        )
    else:
        raise SchemaError("hnn classification needs an hnn or hnn_abstract spec")
    return classify_hnn(problem)


def _classify_wreath_doc(spec: dict, assumes: dict) -> Verdict:
    if spec.get("kind") == "wreath":
        ctx = parse_group_spec(spec)
        problem = WreathProblem.from_ctx(ctx)
        if assumes:
            problem = WreathProblem(
                h=_annotation(problem.h.to_json(), assumes.get("h")),
                k=_annotation(problem.k.to_json(), assumes.get("k")),
                action=_action_annotation(
                    {k: v for k, v in vars(problem.action).items() if v is not None},
                    assumes.get("action"),
                ),
            )
    elif spec.get("kind") == "wreath_abstract":
        problem = WreathProblem(
            h=_annotation(spec.get("h"), assumes.get("h")),
            k=_annotation(spec.get("k"), assumes.get("k")),
            action=_action_annotation(spec.get("action"), assumes.get("action")),
        )
    else:
        raise SchemaError("wreath classification needs a wreath or wreath_abstract spec")
    return classify_wreath(problem)


# --- build ----------------------------------------------------------------------


def cmd_build(args) -> int:
    graph = SimpGraph.from_json(_load_json(args.graph))
    if not graph.vertex_groups:
        raise SchemaError("graph file needs vertex_groups", "graph.vertex_groups")
    ctx = parse_group_spec(
        {
            "kind": "graph_product",
            "graph": {"vertices": list(graph.vertices),
                      "edges": sorted(sorted(e) for e in graph.edges)},
            "vertex_groups": graph.vertex_groups,
        }
    )
    ball = build_x_gamma_ball(graph, ctx, args.radius, cap=args.cap)
    if args.format == "dot":
        text = complex_to_dot(ball)
        if args.out:
            Path(args.out).write_text(text)
        else:
            sys.stdout.write(text)
    else:
        _emit(complex_to_json(ball), args.out)
    sys.stderr.write(json.dumps(jsonable(ball.stats()), sort_keys=True) + "\n")
    return 0


# --- tree -----------------------------------------------------------------------


def _tree_ctx(path: str):
    ctx = parse_group_spec(_load_json(path))
    if not isinstance(ctx, (AmalgamCtx, HnnCtx)):
        raise SchemaError("tree commands need an amalgam or hnn spec")
    return ctx


_WORD_TOKEN = re.compile(r"([ABKt])(-?\d*)")


def parse_word(ctx, word: str):
    """Words like "A1 B2 A1" (amalgam) or "K3 t K1 T" (stable letter T = t^-1)."""
    letters = []
    for token in re.split(r"[,\s]+", word.strip()):
        if not token:
            continue
        if token in ("t", "T") and isinstance(ctx, HnnCtx):
            letters.append(("t", 1 if token == "t" else -1))
            continue
        m = _WORD_TOKEN.fullmatch(token)
        if not m or not m.group(2):
            raise SchemaError(f"bad word token {token!r}")
        tag, idx = m.group(1), int(m.group(2))
        if isinstance(ctx, AmalgamCtx) and tag in ("A", "B"):
            letters.append((tag, idx))
        elif isinstance(ctx, HnnCtx) and tag == "K":
            letters.append(("K", idx))
        else:
            raise SchemaError(f"token {token!r} does not fit this group kind")
    return ctx.canonicalize_word(letters)


def load_probvec(path: str, ctx) -> ProbVec:
    doc = _load_json(path)
    mode = doc.get("arith", "exact")
    masses = {}
    for entry in doc.get("masses", []):
        elt = ctx.elt_from_json(entry["element"])
        raw = entry["mass"]
        masses[elt] = Fraction(raw) if mode == "exact" else float(raw)
    return ProbVec(masses, ctx, mode)


def cmd_tree(args) -> int:
    ctx = _tree_ctx(args.spec)
    if args.tree_command == "ball":
        ball = bass_serre_ball(ctx, args.radius, cap=args.cap)
        if args.format == "dot":
            text = tree_to_dot(ball)
            if args.out:
                Path(args.out).write_text(text)
            else:
                sys.stdout.write(text)
        else:
            _emit(tree_to_json(ball), args.out)
        sys.stderr.write(json.dumps(jsonable(ball.stats()), sort_keys=True) + "\n")
        return 0
    if args.tree_command == "classify":
        g = parse_word(ctx, args.word)
        cls = classify_isometry(ctx, g)
        _emit(
            {
                "schema": "isometry/1",
                "word": args.word,
                "element": ctx.elt_to_json(g),
                "kind": cls.kind,
                "translation_length": cls.translation_length,
                "conjugator": ctx.elt_to_json(cls.conjugator),
                "core": ctx.elt_to_json(cls.core),
            },
            args.out,
        )
        return 0
    if args.tree_command == "amine":
        if not isinstance(ctx, AmalgamCtx):
            raise SchemaError("the partition check needs an amalgam spec")
        rep = factor_partition_report(ctx, args.radius)
        doc = {
            "schema": "partition/1",
            "radius": rep.radius,
            "ball_size": rep.ball_size,
            "families_partition": rep.families_partition,
            "coverage_ok": rep.coverage_ok,
            "disjointness_ok": rep.disjointness_ok,
            "witnesses": rep.witnesses,
            "ok": rep.ok,
        }
        _emit(doc, args.out)
        return 0 if rep.ok else 1
    if args.tree_command == "phi":
        ball = bass_serre_ball(ctx, args.radius, cap=args.cap)
        p = load_probvec(args.pvec, ctx)
        rep = phi_profile(ball, p, args.x0)
        pairs_checked = []
        for x in range(0, len(ball.vertices), max(1, len(ball.vertices) // 8)):
            c_val, bound, ok = midpoint_inequality(ball, rep, 0, x)
            pairs_checked.append({"pair": [0, x], "mid": c_val, "bound": bound, "ok": ok})
        _emit(
            {
                "schema": "phi/1",
                "minimum": rep.minimum,
                "argmin": rep.argmin,
                "vertex_values": {str(k): v for k, v in rep.vertex_values.items()},
                "midpoint_checks": pairs_checked,
            },
            args.out,
        )
        return 0
    raise SchemaError(f"unknown tree command {args.tree_command!r}")


# --- verify ----------------------------------------------------------------------


def cmd_verify(args) -> int:
    kwargs = {}
    if args.radius is not None:
        kwargs["radius"] = args.radius
    if args.spec:
        kwargs["specs"] = [_load_json(args.spec)]
    report = run_suite(args.suite, trials=args.trials, seed=args.seed, **kwargs)
    report["config"]["arith"] = args.arith
    _emit(report, args.out)
    sys.stderr.write(
        f"{report['suite']}: {report['passes']}/{report['trials']} pass\n"
    )
    return 0 if report["ok"] else 1


# --- parser ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cubemeans",
        description="exact group arithmetic, cube complex and tree combinatorics, "
        "finitary means, and inner-amenability classifiers",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", help="run a classification")
    c.add_argument("target", choices=["graph-product", "raag", "racg", "amalgam", "hnn", "wreath"])
    c.add_argument("--spec", required=True)
    c.add_argument("--assume", action="append", default=[], metavar="target.field=value")
    c.add_argument("--out")
    c.set_defaults(func=cmd_classify)

    b = sub.add_parser("build", help="build and export a complex")
    bsub = b.add_subparsers(dest="build_command", required=True)
    bc = bsub.add_parser("cc", help="cube complex ball of a graph product")
    bc.add_argument("--graph", required=True)
    bc.add_argument("--radius", type=int, required=True)
    bc.add_argument("--format", choices=["json", "dot"], default="json")
    bc.add_argument("--out")
    bc.add_argument("--cap", type=int, default=_default_cap())
    bc.set_defaults(func=cmd_build)

    t = sub.add_parser("tree", help="Bass-Serre tree operations")
    tsub = t.add_subparsers(dest="tree_command", required=True)
    tb = tsub.add_parser("ball")
    tb.add_argument("--spec", required=True)
    tb.add_argument("--radius", type=int, required=True)
    tb.add_argument("--format", choices=["json", "dot"], default="json")
    tb.add_argument("--out")
    tb.add_argument("--cap", type=int, default=_default_cap())
    tc = tsub.add_parser("classify")
    tc.add_argument("--spec", required=True)
    tc.add_argument("--word", required=True)
    tc.add_argument("--out")
    ta = tsub.add_parser("amine")
    ta.add_argument("--spec", required=True)
    ta.add_argument("--radius", type=int, default=8)
    ta.add_argument("--out")
    tp = tsub.add_parser("phi")
    tp.add_argument("--spec", required=True)
    tp.add_argument("--pvec", required=True)
    tp.add_argument("--radius", type=int, default=6)
    tp.add_argument("--x0", type=int, default=0)
    tp.add_argument("--out")
    tp.add_argument("--cap", type=int, default=_default_cap())
    t.set_defaults(func=cmd_tree)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=sorted(SUITES))
    v.add_argument("--trials", type=int, default=1000)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--radius", type=int, default=None)
    v.add_argument("--spec")
    v.add_argument("--arith", choices=["exact", "float"], default="exact")
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except CubemeansError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
