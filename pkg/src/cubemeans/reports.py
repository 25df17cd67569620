"""Deterministic report serialization, seed derivation, and exports.

Reports are plain dicts rendered with sorted keys and no timestamps, so a
rerun with the same configuration and seed produces byte-identical files.
Files are written atomically (temp file + rename).
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from fractions import Fraction
from pathlib import Path
from typing import Any

REPORT_SCHEMA = "report/1"


def derive_seed(master: int, index: int) -> int:
    """Stable per-trial seed: hash of (master seed, trial index)."""
    digest = hashlib.sha256(f"{master}:{index}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def jsonable(value: Any) -> Any:
    """Recursively convert report values to JSON-stable forms."""
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, dict):
        return {_key(k): jsonable(v) for k, v in sorted(value.items(), key=lambda kv: _key(kv[0]))}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, (set, frozenset)):
        return sorted((jsonable(v) for v in value), key=repr)
    if isinstance(value, float):
        return float(f"{value:.12g}")
    if hasattr(value, "__dataclass_fields__"):
        return jsonable(vars(value))
    return value


def _key(k: Any) -> str:
    return k if isinstance(k, str) else repr(k)


def render_report(doc: dict) -> bytes:
    return (json.dumps(jsonable(doc), sort_keys=True, indent=2) + "\n").encode()


def write_report(path: str | Path, doc: dict) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    data = render_report(doc)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# --- complex and tree exports -------------------------------------------------


def complex_to_json(ball) -> dict:
    ctx = ball.ctx
    verts = []
    for i, (g, sigma) in enumerate(ball.vertices):
        verts.append(
            {
                "id": i,
                "rep": ctx.elt_to_json(g) if ctx else [],
                "clique": sorted(sigma),
                "dist": ball.dist[i],
            }
        )
    from .complexes import hyperplane_classes

    try:
        infos = hyperplane_classes(ball)
        class_of = {}
        for info in infos:
            for e in info.edge_ids:
                class_of[e] = info.cid
    except Exception:
        infos, class_of = [], {}
    edges = [
        {
            "a": i,
            "b": j,
            "vlabel": v,
            "hyperplane": class_of.get((i, j)),
        }
        for (i, j), v in sorted(ball.edges.items())
    ]
    cubes = [
        {"base": b, "clique": sorted(c), "dim": len(c)} for b, c in ball.cubes
    ]
    return {
        "schema": "complex/1",
        "graph": ball.graph.to_json(),
        "radius": ball.radius,
        "interior_radius": ball.interior_radius,
        "complete": ball.complete,
        "vertices": verts,
        "edges": edges,
        "cubes": cubes,
        "stats": ball.stats(),
        "hyperplanes": [
            {
                "id": info.cid,
                "vlabel": info.vlabel,
                "edges": [list(e) for e in info.edge_ids],
                "d_min": info.d_min,
                "two_sided": info.sides is not None,
            }
            for info in infos
        ],
    }


_DOT_COLORS = [
    "red", "blue", "green", "orange", "purple", "brown", "cyan", "magenta",
    "gold", "darkgreen", "navy", "salmon", "turquoise", "gray",
]


def complex_to_dot(ball) -> str:
    from .complexes import hyperplane_classes

    try:
        infos = hyperplane_classes(ball)
        class_of = {}
        for info in infos:
            for e in info.edge_ids:
                class_of[e] = info.cid
    except Exception:
        class_of = {}
    lines = ["graph complex {", "  node [shape=point];"]
    for i, (_, sigma) in enumerate(ball.vertices):
        label = "{" + ",".join(sorted(sigma)) + "}"
        lines.append(f'  v{i} [xlabel="{label}"];')
    for (i, j), vlabel in sorted(ball.edges.items()):
        cid = class_of.get((i, j))
        color = _DOT_COLORS[cid % len(_DOT_COLORS)] if cid is not None else "black"
        lines.append(f'  v{i} -- v{j} [color={color}, label="{vlabel}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def tree_to_json(ball) -> dict:
    ctx = ball.ctx
    return {
        "schema": "tree/1",
        "radius": ball.radius,
        "vertices": [
            {"id": i, "type": tag, "rep": ctx.elt_to_json(rep), "dist": ball.dist[i]}
            for i, (tag, rep) in enumerate(ball.vertices)
        ],
        "edges": [
            {"id": eid, "rep": ctx.elt_to_json(lbl), "a": i, "b": j}
            for eid, (lbl, i, j) in enumerate(ball.edges)
        ],
        "stats": ball.stats(),
    }


def tree_to_dot(ball) -> str:
    lines = ["graph tree {", "  node [shape=point];"]
    for i, (tag, _) in enumerate(ball.vertices):
        lines.append(f'  v{i} [xlabel="{tag}"];')
    for _, i, j in ball.edges:
        lines.append(f"  v{i} -- v{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"
