from __future__ import annotations

import itertools
import random

import pytest

from conftest import Z2, Z3, graph_product_spec
from cubemeans.complexes import (
    build_c_gamma,
    build_x_gamma_ball,
    base_class_ids,
    crossing_pairs,
    facing_triples,
    hyperplane_classes,
    irreducibility_check,
    join_decomposition,
    link_complex,
    link_of_base_matches_graph,
    strongly_separated_pairs,
    three_vertex_witness,
    vertex_stabilizer,
)
from cubemeans.errors import BoundaryVertex, CapExceeded, InsufficientInterior
from cubemeans.graphs import SimpGraph, atlas_graphs
from cubemeans.groups import parse_group_spec


def _ctx(graph: SimpGraph):
    return parse_group_spec(
        {
            "kind": "graph_product",
            "graph": {"vertices": list(graph.vertices),
                      "edges": sorted(sorted(e) for e in graph.edges)},
            "vertex_groups": graph.vertex_groups,
        }
    )


@pytest.fixture(scope="module")
def edge_graph():
    return SimpGraph.make(["v", "w"], [["v", "w"]], vertex_groups={"v": Z2, "w": Z3})


@pytest.fixture(scope="module")
def edge_ball(edge_graph):
    return build_x_gamma_ball(edge_graph, _ctx(edge_graph), 5)


# --- fundamental complex -------------------------------------------------------


def test_c_gamma_single_vertex():
    ball = build_c_gamma(SimpGraph.make(["v"], []))
    assert len(ball.vertices) == 2
    assert len(ball.edges) == 1


def test_c_gamma_edge_is_square():
    ball = build_c_gamma(SimpGraph.make(["v", "w"], [["v", "w"]]))
    assert len(ball.vertices) == 4
    assert len(ball.squares()) == 1


def test_c_gamma_triangle_is_three_cube():
    g = SimpGraph.make(["a", "b", "c"], [["a", "b"], ["a", "c"], ["b", "c"]])
    ball = build_c_gamma(g)
    assert len(ball.vertices) == 8  # all cliques of a triangle
    assert max(len(c) for _, c in ball.cubes) == 3


# --- group-sized complexes ------------------------------------------------------


def test_star_complex():
    g = SimpGraph.make(["v"], [], vertex_groups={"v": {"kind": "cyclic", "order": 5}})
    ball = build_x_gamma_ball(g, _ctx(g), 3)
    stats = ball.stats()
    assert stats["vertices"] == 6 and stats["edges"] == 5
    assert ball.complete


def test_free_product_tree_degrees():
    g = SimpGraph.make(["v", "w"], [],
                       vertex_groups={"v": Z3, "w": {"kind": "cyclic", "order": 4}})
    ball = build_x_gamma_ball(g, _ctx(g), 4)
    assert ball.stats()["squares"] == 0
    for vid, (_, sigma) in enumerate(ball.vertices):
        if not ball.is_interior(vid):
            continue
        expected = {frozenset(): 2, frozenset({"v"}): 3, frozenset({"w"}): 4}[sigma]
        assert ball.degree(vid) == expected


def test_direct_product_complex(edge_ball):
    stats = edge_ball.stats()
    # coset-count oracle: 6/1 + 6/2 + 6/3 + 6/6
    assert stats["vertices"] == 6 + 3 + 2 + 1
    assert stats["squares"] == 6
    assert edge_ball.complete


def test_vertex_count_saturates():
    g = SimpGraph.make(["v", "w"], [["v", "w"]], vertex_groups={"v": Z2, "w": Z2})
    ball = build_x_gamma_ball(g, _ctx(g), 8)
    order = 4
    expect = order // 1 + order // 2 + order // 2 + order // 4
    assert len(ball.vertices) == expect


def test_cap_exceeded():
    g = SimpGraph.make(["v", "w"], [], vertex_groups={"v": Z3, "w": Z3})
    with pytest.raises(CapExceeded):
        build_x_gamma_ball(g, _ctx(g), 6, cap=20)


# --- stabilizers ------------------------------------------------------------------


def test_stabilizer_of_empty_clique(edge_ball):
    base = edge_ball.index[(edge_ball.ctx.identity, frozenset())]
    sub = vertex_stabilizer(edge_ball, base)
    assert sub.elements() == [edge_ball.ctx.identity]


def test_stabilizer_at_identity_is_vertex_group(edge_ball):
    ctx = edge_ball.ctx
    vid = edge_ball.index[(ctx.identity, frozenset({"v"}))]
    sub = vertex_stabilizer(edge_ball, vid)
    assert sorted(sub.elements(), key=ctx.sort_key) == sorted(
        {ctx.canonicalize_word([]), ctx.canonicalize_word([("v", 1)])}, key=ctx.sort_key
    )


def test_stabilizer_conjugated_orbit_check():
    g = SimpGraph.make(["v", "w"], [], vertex_groups={"v": Z2, "w": Z3})
    ctx = _ctx(g)
    ball = build_x_gamma_ball(g, ctx, 4)
    # oracle: exhaustive action test on ball vertices
    for vid, (rep, sigma) in enumerate(ball.vertices):
        if sigma != frozenset({"v"}) or ball.dist[vid] > 2:
            continue
        sub = vertex_stabilizer(ball, vid)
        for x in sub.elements():
            moved = ctx.strip_coset(ctx.multiply(x, rep), ctx.clique_indices(sigma))
            assert moved == rep


# --- links ------------------------------------------------------------------------


def test_link_of_base_is_graph(edge_ball):
    assert link_of_base_matches_graph(edge_ball)


def test_link_of_leaf_is_point():
    g = SimpGraph.make(["v"], [], vertex_groups={"v": Z2})
    ball = build_x_gamma_ball(g, _ctx(g), 3)
    leaf = next(
        vid for vid, (_, s) in enumerate(ball.vertices)
        if s == frozenset() and ball.degree(vid) == 1
    )
    link = link_complex(ball, leaf)
    assert len(link.points) == 1 and link.is_flag


def test_link_interior_flag_everywhere(edge_ball):
    for vid in range(len(edge_ball.vertices)):
        assert link_complex(edge_ball, vid).is_flag


def test_link_boundary_vertex_rejected():
    g = SimpGraph.make(["v", "w"], [["v", "w"]], vertex_groups={"v": Z2, "w": Z3})
    ball = build_x_gamma_ball(g, _ctx(g), 2)
    # artificially truncated complex: pretend incomplete by rebuilding at radius 1
    small = build_x_gamma_ball(g, _ctx(g), 1)
    if not small.complete:
        boundary = next(v for v in range(len(small.vertices)) if small.dist[v] == 1)
        with pytest.raises(BoundaryVertex):
            link_complex(small, boundary)


# --- hyperplanes --------------------------------------------------------------------


def test_single_edge_one_class():
    g = SimpGraph.make(["v"], [], vertex_groups={"v": Z2})
    ball = build_x_gamma_ball(g, _ctx(g), 3)
    infos = hyperplane_classes(ball)
    assert len(infos) == 2  # the star on Z/2 has two edges, two classes
    for info in infos:
        assert info.side_count == 2


def test_square_has_two_crossing_classes():
    g = SimpGraph.make(["v", "w"], [["v", "w"]], vertex_groups={"v": Z2, "w": Z2})
    ball = build_x_gamma_ball(g, _ctx(g), 6)
    infos = hyperplane_classes(ball)
    pairs = crossing_pairs(ball, infos)
    base = base_class_ids(ball, infos)
    assert frozenset({base["v"], base["w"]}) in pairs


def test_halfspace_bipartition(edge_ball):
    for info in hyperplane_classes(edge_ball):
        assert info.side_count == 2
        a, b = info.sides
        interior = {
            v for v in range(len(edge_ball.vertices)) if edge_ball.is_interior(v)
        }
        assert a | b == interior and not (a & b)


def test_crossing_matches_edges_small_corpus():
    rnd = random.Random(15)
    for graph in atlas_graphs(2, 4):
        orders = {v: 2 + (i % 2) for i, v in enumerate(graph.vertices)}
        g = SimpGraph.make(
            graph.vertices, [sorted(e) for e in graph.edges],
            vertex_groups={v: {"kind": "cyclic", "order": orders[v]} for v in graph.vertices},
        )
        ball = build_x_gamma_ball(g, _ctx(g), 3)
        infos = hyperplane_classes(ball)
        base = base_class_ids(ball, infos)
        pairs = crossing_pairs(ball, infos)
        for v, w in itertools.combinations(g.vertices, 2):
            assert (frozenset({base[v], base[w]}) in pairs) == g.has_edge(v, w)


# --- joins and irreducibility ----------------------------------------------------------


def test_join_decomposition_edgeless():
    g = SimpGraph.make(["a", "b"], [])
    assert len(join_decomposition(g)) == 1


def test_join_decomposition_complete():
    g = SimpGraph.make(["a", "b", "c"], [["a", "b"], ["a", "c"], ["b", "c"]])
    factors = join_decomposition(g)
    assert len(factors) == 3
    assert all(len(f.vertices) == 1 for f in factors)


def test_join_decomposition_path():
    g = SimpGraph.make(["a", "b", "c"], [["a", "b"], ["b", "c"]])
    factors = join_decomposition(g)
    parts = sorted(sorted(f.vertices) for f in factors)
    assert parts == [["a", "c"], ["b"]]
    assert all(not f.is_join() for f in factors)


def test_irreducibility_tree_not_join():
    g = SimpGraph.make(["v", "w"], [], vertex_groups={"v": Z2, "w": Z3})
    ball = build_x_gamma_ball(g, _ctx(g), 4)
    rep = irreducibility_check(g, ball)
    assert not rep.product_signature and not rep.graph_is_join and rep.consistent


def test_irreducibility_square_is_join(edge_ball, edge_graph):
    rep = irreducibility_check(edge_graph, edge_ball)
    assert rep.product_signature and rep.graph_is_join and rep.consistent


def test_irreducibility_needs_interior():
    g = SimpGraph.make(["v", "w"], [], vertex_groups={"v": Z2, "w": Z3})
    ball = build_x_gamma_ball(g, _ctx(g), 2)
    with pytest.raises(InsufficientInterior):
        irreducibility_check(g, ball)


# --- halfspace configurations -----------------------------------------------------------


def test_no_facing_triples_in_square(edge_ball):
    # every pair of classes in the flat strip complex crosses or is nested
    g = SimpGraph.make(["v", "w"], [["v", "w"]], vertex_groups={"v": Z2, "w": Z2})
    ball = build_x_gamma_ball(g, _ctx(g), 6)
    assert facing_triples(ball) == []


def test_facing_triple_in_trivalent_tree():
    g = SimpGraph.make(["a", "b", "c"], [],
                       vertex_groups={"a": Z2, "b": Z2, "c": Z2})
    ball = build_x_gamma_ball(g, _ctx(g), 3)
    assert facing_triples(ball, limit=1)


def test_facing_triple_in_mixed_product():
    g = SimpGraph.make(["v", "w", "u"], [["v", "w"]],
                       vertex_groups={"v": Z2, "w": Z2, "u": Z2})
    ball = build_x_gamma_ball(g, _ctx(g), 4)
    assert facing_triples(ball, limit=1)


def test_strongly_separated_free_vs_direct(edge_ball):
    g = SimpGraph.make(["v", "w"], [], vertex_groups={"v": Z2, "w": Z3})
    tree_ball = build_x_gamma_ball(g, _ctx(g), 4)
    assert strongly_separated_pairs(tree_ball)
    assert strongly_separated_pairs(edge_ball) == []


# --- three-vertex witnesses ---------------------------------------------------------------


def test_witness_path_graph():
    g = SimpGraph.make(["a", "b", "c"], [["a", "b"], ["b", "c"]])
    rep = three_vertex_witness(g)
    assert rep["is_join"]  # the path is a join, so no witness is required
    assert rep["witness"] is None


def test_witness_four_cycle_is_join():
    g = SimpGraph.make(["a", "b", "c", "d"],
                       [["a", "b"], ["b", "c"], ["c", "d"], ["a", "d"]])
    assert three_vertex_witness(g)["is_join"]


def test_witness_five_cycle():
    vs = [f"v{i}" for i in range(5)]
    g = SimpGraph.make(vs, [[vs[i], vs[(i + 1) % 5]] for i in range(5)])
    rep = three_vertex_witness(g)
    assert not rep["is_join"]
    w = rep["witness"]
    edges = sum(1 for a, b in itertools.combinations(w, 2) if g.has_edge(a, b))
    assert len(w) == 3 and edges <= 1


def test_witness_exists_for_all_small_non_joins():
    for graph in atlas_graphs(3, 7):
        if graph.is_join():
            continue
        assert three_vertex_witness(graph)["witness"] is not None


# --- median property -----------------------------------------------------------------------


def _median_of_triple(ball, a, b, c):
    da, db, dc = ball.bfs_distances(a), ball.bfs_distances(b), ball.bfs_distances(c)
    iab = {v for v in da if da[v] + db.get(v, 10**9) == da[b]}
    ibc = {v for v in db if db[v] + dc.get(v, 10**9) == db[c]}
    iac = {v for v in da if da[v] + dc.get(v, 10**9) == da[c]}
    return iab & ibc & iac


def test_median_property(edge_ball):
    g = SimpGraph.make(["v", "w", "u"], [["v", "w"]],
                       vertex_groups={"v": Z2, "w": Z2, "u": Z2})
    square_strip = build_x_gamma_ball(g, _ctx(g), 5)
    rnd = random.Random(16)
    for ball in (edge_ball, square_strip):
        guard = ball.interior_radius
        candidates = [v for v in range(len(ball.vertices)) if ball.dist[v] * 2 <= guard]
        base = ball.index[(ball.ctx.identity, frozenset())]
        trials = 0
        while trials < 50 and candidates:
            a, b, c = (rnd.choice(candidates) for _ in range(3))
            if max(ball.dist[a], ball.dist[b], ball.dist[c]) * 2 > guard:
                continue
            trials += 1
            med = _median_of_triple(ball, a, b, c)
            assert len(med) == 1, (a, b, c, med)
        del base


# --- induced subcomplex embedding -----------------------------------------------------------


def test_induced_subcomplex_embeds_convexly():
    g = SimpGraph.make(["v", "w", "u"], [["v", "w"]],
                       vertex_groups={"v": Z2, "w": Z2, "u": Z2})
    sub = g.induced({"v", "w"})
    big = build_x_gamma_ball(g, _ctx(g), 5)
    small = build_x_gamma_ball(sub, _ctx(sub), 5)
    # label-preserving vertex embedding
    mapping = {}
    for i, (rep, sigma) in enumerate(small.vertices):
        rep_big = big.ctx.canonicalize_word(
            [(small.ctx.vertex_labels[v], small.ctx.vctx[v].elt_to_json(x)) for v, x in rep]
        )
        key = (rep_big, sigma)
        assert key in big.index
        mapping[i] = big.index[key]
    # distances agree (isometric embedding) within the interior
    ids = [i for i in range(len(small.vertices)) if small.dist[i] <= 2]
    for i in ids:
        d_small = small.bfs_distances(i)
        d_big = big.bfs_distances(mapping[i])
        for j in ids:
            assert d_small[j] == d_big[mapping[j]]
    # convexity: geodesics between embedded vertices stay in the image
    image = set(mapping.values())
    for i in ids[:6]:
        d_big_from = big.bfs_distances(mapping[i])
        for j in ids[:6]:
            dij = d_big_from[mapping[j]]
            between = {
                v
                for v in range(len(big.vertices))
                if d_big_from.get(v, 10**9)
                + big.bfs_distances(v).get(mapping[j], 10**9)
                == dij
            }
            assert between <= image
