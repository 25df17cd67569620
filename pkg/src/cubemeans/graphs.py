"""Finite simplicial graphs with optional vertex-group and classifier annotations."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

import networkx as nx

from .errors import SchemaError


@dataclass(frozen=True)
class SimpGraph:
    """A finite simplicial graph (no loops, no multi-edges)."""

    vertices: tuple[str, ...]
    edges: frozenset[frozenset[str]]
    vertex_groups: dict = field(default_factory=dict, compare=False)
    annotations: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            raise SchemaError("duplicate vertices", "graph.vertices")
        for e in self.edges:
            if len(e) != 2:
                raise SchemaError(f"edge {sorted(e)} is not a 2-set", "graph.edges")
            if not e <= vs:
                raise SchemaError(f"edge {sorted(e)} uses unknown vertex", "graph.edges")

    @staticmethod
    def make(vertices: Iterable[str], edges: Iterable[Sequence[str]], **kw) -> "SimpGraph":
        return SimpGraph(
            tuple(sorted(vertices)),
            frozenset(frozenset(e) for e in edges),
            **kw,
        )

    def has_edge(self, a: str, b: str) -> bool:
        return frozenset({a, b}) in self.edges

    def neighborhood(self, v: str) -> frozenset[str]:
        """N(v): the vertex itself together with its adjacent vertices."""
        return frozenset({v} | {w for w in self.vertices if self.has_edge(v, w)})

    def to_nx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(self.vertices)
        g.add_edges_from(tuple(sorted(e)) for e in self.edges)
        return g

    def complement_components(self) -> list[frozenset[str]]:
        comp = nx.complement(self.to_nx())
        return sorted(
            (frozenset(c) for c in nx.connected_components(comp)),
            key=lambda c: sorted(c),
        )

    def is_join(self) -> bool:
        """Whether the vertex set splits into two parts with all cross pairs edges."""
        return len(self.vertices) >= 2 and len(self.complement_components()) >= 2

    def induced(self, s: Iterable[str]) -> "SimpGraph":
        s = set(s)
        return SimpGraph.make(
            s,
            [tuple(sorted(e)) for e in self.edges if e <= s],
            vertex_groups={v: g for v, g in self.vertex_groups.items() if v in s},
            annotations={v: a for v, a in self.annotations.items() if v in s},
        )

    def cliques(self) -> list[frozenset[str]]:
        """Every clique, including the empty one, in deterministic order."""
        out = [frozenset()]
        for r in range(1, len(self.vertices) + 1):
            for combo in itertools.combinations(self.vertices, r):
                if all(self.has_edge(a, b) for a, b in itertools.combinations(combo, 2)):
                    out.append(frozenset(combo))
        return out

    def max_clique_size(self) -> int:
        return max(len(c) for c in self.cliques())

    def relabel(self, mapping: dict[str, str]) -> "SimpGraph":
        return SimpGraph.make(
            [mapping[v] for v in self.vertices],
            [[mapping[a] for a in e] for e in self.edges],
            vertex_groups={mapping[v]: g for v, g in self.vertex_groups.items()},
            annotations={mapping[v]: a for v, a in self.annotations.items()},
        )

    def to_json(self) -> dict:
        doc: dict[str, Any] = {
            "vertices": list(self.vertices),
            "edges": sorted(sorted(e) for e in self.edges),
        }
        if self.vertex_groups:
            doc["vertex_groups"] = {v: self.vertex_groups[v] for v in sorted(self.vertex_groups)}
        if self.annotations:
            doc["annotations"] = {v: self.annotations[v] for v in sorted(self.annotations)}
        return doc

    @staticmethod
    def from_json(doc: dict) -> "SimpGraph":
        if "vertices" not in doc:
            raise SchemaError("graph needs a vertex list", "graph.vertices")
        return SimpGraph.make(
            [str(v) for v in doc["vertices"]],
            [[str(a) for a in e] for e in doc.get("edges", [])],
            vertex_groups=dict(doc.get("vertex_groups", {})),
            annotations=dict(doc.get("annotations", {})),
        )


def atlas_graphs(min_vertices: int, max_vertices: int) -> list[SimpGraph]:
    """All nonisomorphic graphs with a vertex count in the given range."""
    from networkx.generators.atlas import graph_atlas_g

    out = []
    for g in graph_atlas_g():
        n = g.number_of_nodes()
        if min_vertices <= n <= max_vertices:
            names = [f"v{i}" for i in range(n)]
            rel = {node: names[i] for i, node in enumerate(sorted(g.nodes()))}
            out.append(SimpGraph.make(names, [(rel[a], rel[b]) for a, b in g.edges()]))
    return out
