"""Versioned JSON schema for group specifications.

Schema (``"schema": "group/1"``, optional on input):

  {"kind": "cyclic", "order": n}
  {"kind": "integers"}
  {"kind": "table", "elements": [labels...], "mul": [[i,j->k]...]}
  {"kind": "graph_product", "graph": {vertices, edges}, "vertex_groups": {v: spec}}
  {"kind": "amalgam", "a": table-spec, "b": table-spec,
   "embed_a": [A-indices], "embed_b": [B-indices]}
  {"kind": "hnn", "k": table-spec, "h": [K-indices], "phi": [K-indices]}
  {"kind": "wreath", "h": spec, "k": spec,
   "x": {"type": "regular"} |
        {"type": "finite", "points": [...], "perms": {k-index: [perm]}} |
        {"type": "finite", "points": [...], "shift": [perm]}}
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from ..errors import SchemaError
from ..graphs import SimpGraph
from .amalgams import AmalgamCtx, HnnCtx
from .base import GroupCtx
from .finite import CyclicCtx, IntegersCtx, TableCtx
from .graph_products import GraphProductCtx
from .wreath import WreathAction, WreathCtx

SCHEMA_TAG = "group/1"


def parse_group_spec(doc: Any, location: str = "spec") -> GroupCtx:
    """Realize a group context from a schema document."""
    if not isinstance(doc, dict):
        raise SchemaError("group spec must be an object", location)
    if "schema" in doc and doc["schema"] != SCHEMA_TAG:
        raise SchemaError(f"unsupported schema {doc['schema']!r}", location)
    kind = doc.get("kind")
    if kind == "cyclic":
        order = doc.get("order")
        if not isinstance(order, int) or order < 1:
            raise SchemaError("cyclic order must be a positive int", f"{location}.order")
        return CyclicCtx(order)
    if kind == "integers":
        return IntegersCtx()
    if kind == "table":
        if "elements" not in doc or "mul" not in doc:
            raise SchemaError("table spec needs elements and mul", location)
        return TableCtx([str(x) for x in doc["elements"]], doc["mul"])
    if kind == "graph_product":
        graph = SimpGraph.from_json(doc.get("graph", {}))
        vg = doc.get("vertex_groups", {})
        missing = [v for v in graph.vertices if v not in vg]
        if missing:
            raise SchemaError(f"missing vertex groups for {missing}", f"{location}.vertex_groups")
        ctxs = {v: parse_group_spec(vg[v], f"{location}.vertex_groups[{v}]") for v in graph.vertices}
        for v, c in ctxs.items():
            if isinstance(c, (AmalgamCtx, HnnCtx, WreathCtx, GraphProductCtx)):
                raise SchemaError("vertex groups must be cyclic, integers or table", f"{location}.vertex_groups[{v}]")
            if isinstance(c, CyclicCtx) and c.order == 1:
                raise SchemaError("vertex groups must be nontrivial", f"{location}.vertex_groups[{v}]")
        return GraphProductCtx(graph.vertices, set(graph.edges), ctxs)
    if kind == "amalgam":
        a = parse_group_spec(doc.get("a"), f"{location}.a")
        b = parse_group_spec(doc.get("b"), f"{location}.b")
        if not isinstance(a, TableCtx) or not isinstance(b, TableCtx):
            raise SchemaError("amalgam factors must be table groups", location)
        return AmalgamCtx(a, b, doc.get("embed_a", []), doc.get("embed_b", []))
    if kind == "hnn":
        k = parse_group_spec(doc.get("k"), f"{location}.k")
        if not isinstance(k, TableCtx):
            raise SchemaError("HNN base must be a table group", f"{location}.k")
        return HnnCtx(k, doc.get("h", []), doc.get("phi", []))
    if kind == "wreath":
        h = parse_group_spec(doc.get("h"), f"{location}.h")
        k = parse_group_spec(doc.get("k"), f"{location}.k")
        xdoc = doc.get("x", {"type": "regular"})
        xtype = xdoc.get("type", "regular")
        if xtype == "regular":
            action = WreathAction(k, "regular")
        else:
            perms: dict = {}
            if "shift" in xdoc:
                perms[1] = list(xdoc["shift"])
            for key, p in xdoc.get("perms", {}).items():
                perms[int(key)] = list(p)
            action = WreathAction(k, "finite", points=xdoc.get("points"), perms=perms)
        return WreathCtx(h, k, action)
    raise SchemaError(f"unknown group kind {kind!r}", location)


def group_spec_to_json(doc: Any) -> dict:
    out = dict(doc)
    out.setdefault("schema", SCHEMA_TAG)
    return out


def load_group_spec(path: str | Path) -> GroupCtx:
    with open(path) as fh:
        return parse_group_spec(json.load(fh), str(path))


# --- convenient builders (used by tests and the verify suites) -------------


def cyclic_table_spec(n: int) -> dict:
    """Z/n written out as an explicit table spec."""
    return {
        "kind": "table",
        "elements": [f"g{i}" for i in range(n)],
        "mul": [[(i + j) % n for j in range(n)] for i in range(n)],
    }


def free_product_spec(n: int, m: int) -> dict:
    """Z/n * Z/m as an amalgam over the trivial subgroup."""
    return {
        "kind": "amalgam",
        "a": cyclic_table_spec(n),
        "b": cyclic_table_spec(m),
        "embed_a": [0],
        "embed_b": [0],
    }


def cyclic_amalgam_spec(n: int, m: int, d: int) -> dict:
    """Z/n *_{Z/d} Z/m amalgamated over the index-d... common cyclic subgroup.

    The shared subgroup is the unique subgroup of order d in each factor,
    matched by sending n/d to m/d.
    """
    if n % d or m % d:
        raise ValueError("d must divide both orders")
    return {
        "kind": "amalgam",
        "a": cyclic_table_spec(n),
        "b": cyclic_table_spec(m),
        "embed_a": [(i * (n // d)) % n for i in range(d)],
        "embed_b": [(i * (m // d)) % m for i in range(d)],
    }


def cyclic_hnn_spec(n: int, h: list[int], phi: list[int]) -> dict:
    return {"kind": "hnn", "k": cyclic_table_spec(n), "h": h, "phi": phi}


def lamplighter_spec(lamp_order: int = 2) -> dict:
    """Z/lamp_order wreath Z with the regular shift action."""
    return {
        "kind": "wreath",
        "h": {"kind": "cyclic", "order": lamp_order},
        "k": {"kind": "integers"},
        "x": {"type": "regular"},
    }
