"""Cube complex combinatorics for graph products.

Two complexes are built here.  The fundamental complex has one vertex per
clique of the defining graph (including the empty clique); cliques are
joined by an edge when their symmetric difference is a singleton and lie in
a common cube exactly when their union is a clique.  The group-sized
complex has vertices ``g G_sigma`` over all cliques sigma; it is constructed
as a combinatorial ball around the identity coset of the empty clique.

Truncation honesty: hyperplane data is computed only from squares whose
corners lie within ``interior_radius`` (one less than the build radius,
unless the complex saturated, in which case everything is interior).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import BoundaryVertex, CapExceeded, InsufficientInterior
from .graphs import SimpGraph
from .groups.base import DEFAULT_CAP, Elt
from .groups.graph_products import GraphProductCtx
from .groups.subgroups import ConjugateSubgroup, Subgrp, TrivialSubgroup, VertexSubgroup

Vertex = tuple[Elt, frozenset]


@dataclass
class ComplexBall:
    graph: SimpGraph
    ctx: GraphProductCtx | None
    radius: int
    complete: bool
    vertices: list[Vertex]
    index: dict[Vertex, int]
    dist: list[int]
    edges: dict[tuple[int, int], str]
    cubes: list[tuple[int, frozenset]]
    interior_radius: int
    adj: list[list[tuple[int, str]]] = field(default_factory=list)

    def __post_init__(self):
        if not self.adj:
            self.adj = [[] for _ in self.vertices]
            for (i, j), v in self.edges.items():
                self.adj[i].append((j, v))
                self.adj[j].append((i, v))
            for lst in self.adj:
                lst.sort()

    # --- basic queries ---------------------------------------------------

    def squares(self) -> list[tuple[int, frozenset]]:
        return [(b, c) for (b, c) in self.cubes if len(c) == 2]

    def cube_corners(self, base: int, c: frozenset) -> list[int]:
        g, sigma = self.vertices[base]
        out = []
        for r in range(len(c) + 1):
            for d in itertools.combinations(sorted(c), r):
                tau = sigma | frozenset(d)
                out.append(self.index[self._vertex_at(g, tau)])
        return out

    def _vertex_at(self, g: Elt, tau: frozenset) -> Vertex:
        if self.ctx is None:
            return ((), tau)
        return (self.ctx.strip_coset(g, self.ctx.clique_indices(tau)), tau)

    def is_interior(self, vid: int) -> bool:
        return self.dist[vid] <= self.interior_radius

    def degree(self, vid: int) -> int:
        return len(self.adj[vid])

    def bfs_distances(self, src: int, within: set[int] | None = None) -> dict[int, int]:
        dist = {src: 0}
        frontier = [src]
        while frontier:
            nxt = []
            for u in frontier:
                for w, _ in self.adj[u]:
                    if within is not None and w not in within:
                        continue
                    if w not in dist:
                        dist[w] = dist[u] + 1
                        nxt.append(w)
            frontier = nxt
        return dist

    def stats(self) -> dict:
        dims: dict[int, int] = {}
        for _, c in self.cubes:
            dims[len(c)] = dims.get(len(c), 0) + 1
        return {
            "vertices": len(self.vertices),
            "edges": len(self.edges),
            "squares": dims.get(2, 0),
            "cubes_by_dim": {str(k): v for k, v in sorted(dims.items())},
            "interior_radius": self.interior_radius,
            "complete": self.complete,
        }


def build_c_gamma(graph: SimpGraph) -> ComplexBall:
    """The finite fundamental complex of a graph: one vertex per clique."""
    cliques = graph.cliques()
    vertices: list[Vertex] = [((), c) for c in cliques]
    index = {v: i for i, v in enumerate(vertices)}
    edges: dict[tuple[int, int], str] = {}
    for i, (_, a) in enumerate(vertices):
        for j, (_, b) in enumerate(vertices):
            if i < j and len(a ^ b) == 1:
                (v,) = tuple(a ^ b)
                edges[(i, j)] = v
    cubes: list[tuple[int, frozenset]] = []
    clique_set = set(cliques)
    for i, (_, sigma) in enumerate(vertices):
        rest = [v for v in graph.vertices if v not in sigma]
        for r in range(1, len(rest) + 1):
            for combo in itertools.combinations(rest, r):
                if sigma | frozenset(combo) in clique_set:
                    cubes.append((i, frozenset(combo)))
    base = index[((), frozenset())]
    dist_map = _graph_distances(len(vertices), edges, base)
    ball = ComplexBall(
        graph=graph,
        ctx=None,
        radius=max(dist_map) if dist_map else 0,
        complete=True,
        vertices=vertices,
        index=index,
        dist=[dist_map[i] for i in range(len(vertices))],
        edges=edges,
        cubes=cubes,
        interior_radius=max(dist_map.values()) if dist_map else 0,
    )
    return ball


def _graph_distances(n: int, edges: dict[tuple[int, int], str], src: int) -> dict[int, int]:
    adj: list[list[int]] = [[] for _ in range(n)]
    for i, j in edges:
        adj[i].append(j)
        adj[j].append(i)
    dist = {src: 0}
    frontier = [src]
    while frontier:
        nxt = []
        for u in frontier:
            for w in adj[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    nxt.append(w)
        frontier = nxt
    return dist


def build_x_gamma_ball(
    graph: SimpGraph,
    ctx: GraphProductCtx,
    radius: int,
    cap: int = DEFAULT_CAP,
    exponent_bound: int | None = None,
) -> ComplexBall:
    """Combinatorial ball of the group-sized complex around (identity, empty clique).

    Vertices are canonical coset labels.  With integers vertex groups the
    ball is genuinely truncated (exponents bounded by ``exponent_bound``,
    default the radius) and global claims are suppressed downstream via the
    interior marker.
    """
    if radius < 0:
        raise ValueError("radius must be >= 0")
    cliques = graph.cliques()
    clique_set = set(cliques)
    ups: dict[frozenset, list[frozenset]] = {
        sigma: [t for t in cliques if sigma < t and len(t - sigma) == 1]
        for sigma in cliques
    }
    exp_bound = exponent_bound if exponent_bound is not None else max(radius, 1)

    def neighbors(vertex: Vertex) -> list[Vertex]:
        g, sigma = vertex
        out = []
        for tau in ups[sigma]:
            out.append((ctx.strip_coset(g, ctx.clique_indices(tau)), tau))
        for v in sorted(sigma):
            tau = sigma - {v}
            tau_idx = ctx.clique_indices(tau)
            vi = ctx.vindex[v]
            for a in ctx.vertex_group_elements(vi, exp_bound):
                out.append((ctx.strip_coset(ctx.multiply(g, a), tau_idx), tau))
        return out

    base: Vertex = (ctx.identity, frozenset())
    vertices = [base]
    index = {base: 0}
    dist = [0]
    frontier = [0]
    d = 0
    complete = False
    while frontier and d < radius:
        d += 1
        nxt = []
        for vid in frontier:
            for w in neighbors(vertices[vid]):
                if w not in index:
                    index[w] = len(vertices)
                    vertices.append(w)
                    dist.append(d)
                    nxt.append(index[w])
                    if len(vertices) > cap:
                        raise CapExceeded(cap, len(vertices))
        nxt.sort(key=lambda i: (vertices[i][0] if False else 0, i))
        frontier = nxt
    if not frontier or d < radius:
        complete = True
    # saturation check: complete also when the last layer has no new neighbors
    if frontier and d == radius:
        complete = all(
            w in index for vid in frontier for w in neighbors(vertices[vid])
        )

    edges: dict[tuple[int, int], str] = {}
    for i, vert in enumerate(vertices):
        g, sigma = vert
        for w in neighbors(vert):
            j = index.get(w)
            if j is None or j == i:
                continue
            a, b = min(i, j), max(i, j)
            (vlabel,) = tuple(sigma ^ w[1])
            edges[(a, b)] = vlabel

    cubes: list[tuple[int, frozenset]] = []
    for i, (g, sigma) in enumerate(vertices):
        rest = [v for v in graph.vertices if v not in sigma]
        for r in range(1, len(rest) + 1):
            for combo in itertools.combinations(rest, r):
                cset = frozenset(combo)
                if sigma | cset not in clique_set:
                    continue
                ok = True
                for rr in range(1, len(combo) + 1):
                    for dsub in itertools.combinations(combo, rr):
                        tau = sigma | frozenset(dsub)
                        w = (ctx.strip_coset(g, ctx.clique_indices(tau)), tau)
                        if w not in index:
                            ok = False
                            break
                    if not ok:
                        break
                if ok:
                    cubes.append((i, cset))

    interior = max(dist) if complete else radius - 1
    return ComplexBall(
        graph=graph,
        ctx=ctx,
        radius=radius,
        complete=complete,
        vertices=vertices,
        index=index,
        dist=dist,
        edges=edges,
        cubes=cubes,
        interior_radius=interior,
    )


def vertex_stabilizer(ball: ComplexBall, vid: int) -> Subgrp:
    """The stabilizer g G_sigma g^-1 of a vertex, with decidable membership."""
    g, sigma = ball.vertices[vid]
    if ball.ctx is None or not sigma:
        if ball.ctx is None:
            raise ValueError("fundamental complex vertices have no group labels")
        return (
            TrivialSubgroup(ball.ctx)
            if not sigma
            else ConjugateSubgroup(ball.ctx, g, VertexSubgroup(ball.ctx, sorted(sigma)))
        )
    inner = VertexSubgroup(ball.ctx, sorted(sigma))
    if g == ball.ctx.identity:
        return inner
    return ConjugateSubgroup(ball.ctx, g, inner)


# --- links ------------------------------------------------------------------


@dataclass
class LinkComplex:
    center: int
    points: list[int]
    graph_edges: set[frozenset[int]]
    simplex_sets: list[frozenset[int]]
    is_flag: bool


def link_complex(ball: ComplexBall, vid: int) -> LinkComplex:
    """Link of a vertex: one point per incident edge, simplices from cubes.

    The vertex must be deep enough that every incident cube is present:
    distance + max cube dimension <= radius (always true on complete
    complexes).  Raises BoundaryVertex otherwise.
    """
    maxdim = ball.graph.max_clique_size()
    if not ball.complete and ball.dist[vid] + maxdim > ball.radius:
        raise BoundaryVertex(
            f"vertex at distance {ball.dist[vid]} may have cubes beyond radius"
        )
    points = sorted(w for w, _ in ball.adj[vid])
    simplex_sets: list[frozenset[int]] = []
    graph_edges: set[frozenset[int]] = set()
    for b, c in ball.cubes:
        corners = ball.cube_corners(b, c)
        if vid not in corners:
            continue
        # corners adjacent to vid within this cube span one of its link simplices
        nbrs = frozenset(
            w for w in corners if (min(vid, w), max(vid, w)) in ball.edges
        )
        if nbrs:
            simplex_sets.append(nbrs)
            for a, bb in itertools.combinations(sorted(nbrs), 2):
                graph_edges.add(frozenset({a, bb}))
    flag = True
    for r in range(2, len(points) + 1):
        for combo in itertools.combinations(points, r):
            if all(frozenset(p) in graph_edges for p in itertools.combinations(combo, 2)):
                if not any(frozenset(combo) <= s for s in simplex_sets):
                    flag = False
    return LinkComplex(vid, points, graph_edges, simplex_sets, flag)


def _edge_keys(ball: ComplexBall) -> set[frozenset[int]]:
    return {frozenset(k) for k in ball.edges}


def link_of_base_matches_graph(ball: ComplexBall) -> bool:
    """The link of (identity, empty clique) must realize the defining graph."""
    base = ball.index[(ball.ctx.identity if ball.ctx else (), frozenset())]
    link = link_complex(ball, base)
    by_vertex = {}
    for w, vlabel in ball.adj[base]:
        by_vertex[w] = vlabel
    expected = set()
    for e in ball.graph.edges:
        a, b = tuple(e)
        expected.add(frozenset({a, b}))
    got = {
        frozenset({by_vertex[x], by_vertex[y]})
        for e in link.graph_edges
        for x, y in [tuple(e)]
    }
    labels = sorted(by_vertex.values())
    return (
        labels == sorted(ball.graph.vertices)
        and got == expected
        and link.is_flag
    )


# --- hyperplanes -------------------------------------------------------------


@dataclass
class HyperplaneInfo:
    cid: int
    vlabel: str
    edge_ids: list[tuple[int, int]]
    d_min: int
    sides: tuple[frozenset[int], frozenset[int]] | None
    side_count: int


def hyperplane_classes(ball: ComplexBall) -> list[HyperplaneInfo]:
    """Square-parallelism closure on interior edges, with halfspace data."""
    if ball.interior_radius < 1:
        raise InsufficientInterior("need interior radius >= 1 for hyperplanes")
    interior_vs = {i for i in range(len(ball.vertices)) if ball.is_interior(i)}
    interior_edges = [
        (i, j) for (i, j) in ball.edges if i in interior_vs and j in interior_vs
    ]
    eindex = {e: n for n, e in enumerate(interior_edges)}
    parent = list(range(len(interior_edges)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[rx] = ry

    def ekey(a, b):
        return (min(a, b), max(a, b))

    for b, c in ball.squares():
        corners = ball.cube_corners(b, c)
        if not all(x in interior_vs for x in corners):
            continue
        v00, v10, v01, v11 = corners  # order: {}, {c1}, {c2}, {c1,c2}
        pairs = [
            (ekey(v00, v10), ekey(v01, v11)),
            (ekey(v00, v01), ekey(v10, v11)),
        ]
        for e1, e2 in pairs:
            if e1 in eindex and e2 in eindex:
                union(eindex[e1], eindex[e2])

    groups: dict[int, list[tuple[int, int]]] = {}
    for e, n in eindex.items():
        groups.setdefault(find(n), []).append(e)
    infos = []
    skeleton_adj: dict[int, list[tuple[int, tuple[int, int]]]] = {i: [] for i in interior_vs}
    for i, j in interior_edges:
        skeleton_adj[i].append((j, (i, j)))
        skeleton_adj[j].append((i, (i, j)))
    for cid, (root, es) in enumerate(sorted(groups.items(), key=lambda kv: min(kv[1]))):
        vlabels = {ball.edges[e] for e in es}
        removed = set(es)
        comps = _components_without(skeleton_adj, interior_vs, removed)
        sides = tuple(sorted((frozenset(c) for c in comps), key=lambda s: sorted(s))) \
            if len(comps) == 2 else None
        infos.append(
            HyperplaneInfo(
                cid=cid,
                vlabel=sorted(vlabels)[0] if len(vlabels) == 1 else "+".join(sorted(vlabels)),
                edge_ids=sorted(es),
                d_min=min(min(ball.dist[i], ball.dist[j]) for i, j in es),
                sides=sides if sides and len(sides) == 2 else None,
                side_count=len(comps),
            )
        )
    return infos


def _components_without(adj, vertex_set, removed_edges):
    seen = set()
    comps = []
    for s in sorted(vertex_set):
        if s in seen:
            continue
        comp = {s}
        seen.add(s)
        frontier = [s]
        while frontier:
            u = frontier.pop()
            for w, e in adj[u]:
                if e in removed_edges or w in seen:
                    continue
                seen.add(w)
                comp.add(w)
                frontier.append(w)
        comps.append(comp)
    return comps


def crossing_pairs(ball: ComplexBall, infos: list[HyperplaneInfo]) -> set[frozenset[int]]:
    """Pairs of hyperplane classes sharing an interior square."""
    interior_vs = {i for i in range(len(ball.vertices)) if ball.is_interior(i)}
    class_of = {}
    for info in infos:
        for e in info.edge_ids:
            class_of[e] = info.cid
    out: set[frozenset[int]] = set()
    for b, c in ball.squares():
        corners = ball.cube_corners(b, c)
        if not all(x in interior_vs for x in corners):
            continue
        v00, v10, v01, v11 = corners
        e1 = (min(v00, v10), max(v00, v10))
        e2 = (min(v00, v01), max(v00, v01))
        c1, c2 = class_of.get(e1), class_of.get(e2)
        if c1 is not None and c2 is not None and c1 != c2:
            out.add(frozenset({c1, c2}))
    return out


def crossing_graph(ball: ComplexBall) -> tuple[SimpGraph, list[HyperplaneInfo]]:
    infos = hyperplane_classes(ball)
    pairs = crossing_pairs(ball, infos)
    names = [f"h{info.cid}" for info in infos]
    edges = [sorted((f"h{a}", f"h{b}")) for pr in pairs for a, b in [tuple(pr)]]
    return SimpGraph.make(names, edges), infos


def base_class_ids(ball: ComplexBall, infos: list[HyperplaneInfo]) -> dict[str, int]:
    """Class id of the hyperplane through the base edge toward each vertex."""
    ctx = ball.ctx
    base = ball.index[(ctx.identity if ctx else (), frozenset())]
    class_of = {}
    for info in infos:
        for e in info.edge_ids:
            class_of[e] = info.cid
    out = {}
    for v in ball.graph.vertices:
        w = ball.index.get(ball._vertex_at(ctx.identity if ctx else (), frozenset({v})))
        if w is None:
            continue
        e = (min(base, w), max(base, w))
        if e in class_of:
            out[v] = class_of[e]
    return out


def join_decomposition(graph: SimpGraph) -> list[SimpGraph]:
    """Maximal direct-product factors: induced subgraphs on complement components."""
    return [graph.induced(c) for c in graph.complement_components()]


@dataclass
class IrreducibilityReport:
    core_classes: int
    components: int
    product_signature: bool
    graph_is_join: bool
    consistent: bool
    cutoff: int


def irreducibility_check(graph: SimpGraph, ball: ComplexBall) -> IrreducibilityReport:
    """Product signature in the interior crossing data versus the join test.

    Only classes whose carrier comes within ``cutoff`` of the base vertex are
    used; crossings between such classes are witnessed by interior squares,
    so missing far data cannot fake or hide a product splitting.
    """
    if ball.interior_radius < 2:
        raise InsufficientInterior("need interior radius >= 2")
    infos = hyperplane_classes(ball)
    if ball.complete:
        cutoff = ball.interior_radius
    else:
        cutoff = (ball.interior_radius - 2) // 2
    core = [info for info in infos if info.d_min <= cutoff]
    if len(core) < 2:
        raise InsufficientInterior("fewer than two core hyperplane classes")
    pairs = crossing_pairs(ball, infos)
    core_ids = [info.cid for info in core]
    idx = {cid: n for n, cid in enumerate(core_ids)}
    parent = list(range(len(core_ids)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a in core_ids:
        for b in core_ids:
            if a < b and frozenset({a, b}) not in pairs:
                ra, rb = find(idx[a]), find(idx[b])
                if ra != rb:
                    parent[ra] = rb
    comps = len({find(i) for i in range(len(core_ids))})
    signature = comps >= 2
    is_join = graph.is_join()
    return IrreducibilityReport(
        core_classes=len(core),
        components=comps,
        product_signature=signature,
        graph_is_join=is_join,
        consistent=signature == is_join,
        cutoff=cutoff,
    )


# --- halfspace configuration searches ---------------------------------------


def facing_triples(ball: ComplexBall, limit: int | None = None) -> list[tuple]:
    """Triples of halfspaces with pairwise disjoint complements.

    Halfspaces are (class id, side index); two are facing when they lie on
    distinct hyperplanes and the complementary sides are disjoint (which on
    nonempty sides also rules out nesting).
    """
    infos = [i for i in hyperplane_classes(ball) if i.sides is not None]
    halves = []
    for info in infos:
        for side in (0, 1):
            complement = info.sides[1 - side]
            halves.append((info.cid, side, complement))
    facing = {}
    for a in range(len(halves)):
        for b in range(a + 1, len(halves)):
            if halves[a][0] == halves[b][0]:
                continue
            if not (halves[a][2] & halves[b][2]):
                facing.setdefault(a, set()).add(b)
    out = []
    for a, bs in sorted(facing.items()):
        for b in sorted(bs):
            for c in sorted(bs & facing.get(b, set())):
                out.append(
                    (
                        (halves[a][0], halves[a][1]),
                        (halves[b][0], halves[b][1]),
                        (halves[c][0], halves[c][1]),
                    )
                )
                if limit is not None and len(out) >= limit:
                    return out
    return out


def strongly_separated_pairs(ball: ComplexBall) -> list[tuple[int, int]]:
    """Non-crossing class pairs with no third interior class crossing both."""
    infos = hyperplane_classes(ball)
    pairs = crossing_pairs(ball, infos)
    ids = [i.cid for i in infos]
    crossers: dict[int, set[int]] = {cid: set() for cid in ids}
    for pr in pairs:
        a, b = tuple(pr)
        crossers[a].add(b)
        crossers[b].add(a)
    out = []
    for a in ids:
        for b in ids:
            if a < b and b not in crossers[a] and not (crossers[a] & crossers[b]):
                out.append((a, b))
    return out


def three_vertex_witness(graph: SimpGraph) -> dict:
    """A 3-vertex induced subgraph with at most one edge, when one exists."""
    is_join = graph.is_join()
    witness = None
    for combo in itertools.combinations(graph.vertices, 3):
        count = sum(1 for a, b in itertools.combinations(combo, 2) if graph.has_edge(a, b))
        if count <= 1:
            witness = list(combo)
            break
    return {"witness": witness, "is_join": is_join, "vertices": len(graph.vertices)}
