"""Randomized and exhaustive verification suites behind ``verify``.

Every suite runs against frozen group corpora, draws its randomness from
per-trial seeds derived from one master seed, compares both sides of its
inequality (or both routes of its computation) in exact arithmetic, and
reports pass counts plus extremal statistics.  A suite passes only at 100%.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from random import Random
from typing import Callable, Sequence

from .classify import classify_graph_product, classify_racg, classify_raag
from .complexes import (
    base_class_ids,
    build_x_gamma_ball,
    crossing_pairs,
    hyperplane_classes,
    irreducibility_check,
    link_complex,
    link_of_base_matches_graph,
    three_vertex_witness,
)
from .errors import UnknownSuite
from .experiments import (
    PartitionMap,
    convolution_bound_check,
    lifting_defect_check,
    location_experiment,
    stationarity_transfer_check,
)
from .graphs import SimpGraph, atlas_graphs
from .groups import (
    FiniteSubgroup,
    IndexSubgroup,
    IntegersCtx,
    KernelSubgroup,
    BaseSumSubgroup,
    all_subgroups,
    cyclic_amalgam_spec,
    free_product_spec,
    lamplighter_spec,
    parse_group_spec,
)
from .means import ProbVec
from .reports import REPORT_SCHEMA, derive_seed
from .trees import (
    bass_serre_ball,
    classify_isometry,
    factor_partition_report,
    midpoint_inequality,
    min_displacement,
    phi_profile,
)

EXACT_TOLERANCES = {"arithmetic": "exact rationals", "comparison": "exact (tolerance 0)"}


def symmetric_table_spec(n: int) -> dict:
    """The symmetric group on n letters as an explicit table."""
    perms = sorted(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    mul = [
        [index[tuple(p[q[i]] for i in range(n))] for q in perms]
        for p in perms
    ]
    return {"kind": "table", "elements": [str(list(p)) for p in perms], "mul": mul}


def _random_probvec(rnd: Random, points: Sequence, ctx, min_support=2, max_support=6) -> ProbVec:
    k = min(len(points), rnd.randint(min_support, max_support))
    support = rnd.sample(list(points), k)
    weights = [rnd.randint(1, 16) for _ in support]
    total = sum(weights)
    return ProbVec({x: Fraction(w, total) for x, w in zip(support, weights)}, ctx)


def _report(suite: str, anchor: str, seed: int, trials: int, failures: list,
            extremes: dict, config: dict) -> dict:
    return {
        "schema": REPORT_SCHEMA,
        "suite": suite,
        "anchor": anchor,
        "seed": seed,
        "trials": trials,
        "passes": trials - len(failures),
        "failures": failures[:50],
        "failure_count": len(failures),
        "ok": not failures,
        "extremes": extremes,
        "tolerances": EXACT_TOLERANCES,
        "config": config,
    }


# --- lifted displacement bound -------------------------------------------------


def _finite_order_pool(ctx, radius: int, max_order: int = 12) -> list:
    out = []
    for g in ctx.ball(radius):
        if g == ctx.identity:
            continue
        order = ctx.element_order(g, max_order)
        if order is not None:
            out.append((g, order))
    return out


def _tildep_configs():
    configs = []
    am = parse_group_spec(free_product_spec(2, 3))
    configs.append(("free-product-2-3", am, am.ball(2), _finite_order_pool(am, 3)))
    lam = parse_group_spec(lamplighter_spec())
    configs.append(("lamplighter", lam, lam.ball(2), _finite_order_pool(lam, 3)))
    s4 = parse_group_spec(symmetric_table_spec(4))
    configs.append(
        ("sym-4", s4, s4.ball(3), [(g, s4.element_order(g)) for g in s4.ball(3) if g != s4.identity])
    )
    dinf = parse_group_spec(
        {
            "kind": "graph_product",
            "graph": {"vertices": ["a", "b"], "edges": []},
            "vertex_groups": {
                "a": {"kind": "cyclic", "order": 2},
                "b": {"kind": "cyclic", "order": 2},
            },
        }
    )
    configs.append(("dihedral-infinite", dinf, dinf.ball(3), _finite_order_pool(dinf, 3)))
    return configs


def suite_tildep(trials: int, seed: int) -> dict:
    """Displacement of the block-diagonal square against five times the base."""
    configs = _tildep_configs()
    failures = []
    max_ratio = Fraction(0)
    for i in range(trials):
        rnd = Random(derive_seed(seed, i))
        name, ctx, base_points, pool = configs[i % len(configs)]
        g, order = pool[rnd.randrange(len(pool))]
        powers = [ctx.power(g, k) for k in range(order)]
        carrier = set()
        sample = rnd.sample(base_points, min(len(base_points), 8))
        for x in sample:
            for c in powers:
                carrier.add(ctx.conjugate(c, x))
        carrier = sorted(carrier, key=ctx.sort_key)
        style = rnd.choice(["orbits", "singletons", "one-block", "sub-orbits"])
        if style == "singletons":
            pi = PartitionMap.from_blocks([[x] for x in carrier])
        elif style == "one-block":
            pi = PartitionMap.from_blocks([carrier])
        elif style == "sub-orbits":
            k = rnd.choice([d for d in range(1, order + 1) if order % d == 0])
            pi = PartitionMap.conjugation_orbits(ctx, carrier, [ctx.power(g, k)])
        else:
            pi = PartitionMap.conjugation_orbits(ctx, carrier, powers)
        p = _random_probvec(rnd, carrier, ctx)
        chk = lifting_defect_check(p, pi, g, ctx)
        if not chk.ok:
            failures.append({"trial": i, "family": name, "lhs": chk.lhs, "rhs": chk.rhs})
        if chk.ratio is not None:
            max_ratio = max(max_ratio, chk.ratio)
    return _report(
        "tildep",
        "lifting-defect-bound",
        seed,
        trials,
        failures,
        {"max_ratio": max_ratio, "bound_constant": 5},
        {"families": [c[0] for c in configs]},
    )


# --- convolution lower bound ---------------------------------------------------


def _convcomp_corpora():
    corpora = []
    for name, spec in (("sym-3", symmetric_table_spec(3)), ("sym-4", symmetric_table_spec(4))):
        ctx = parse_group_spec(spec)
        subs = [
            FiniteSubgroup(ctx, elems, f"subgroup-{k}")
            for k, elems in enumerate(all_subgroups(ctx))
        ]
        corpora.append((name, ctx, subs, ctx.elements()))
    z = IntegersCtx()
    corpora.append(("integers", z, [IndexSubgroup(z, 2)], list(range(-6, 7))))
    return corpora


def suite_convcomp(trials: int, seed: int) -> dict:
    """Mass of reverse(m)*m on a subgroup versus the coset square sum."""
    corpora = _convcomp_corpora()
    failures = []
    min_margin = None
    total = 0
    for name, ctx, subs, points in corpora:
        for si, sub in enumerate(subs):
            for i in range(trials):
                rnd = Random(derive_seed(seed, hash((name, si, i)) & 0x7FFFFFFF))
                m = _random_probvec(rnd, points, ctx, 2, 8)
                chk = convolution_bound_check(m, sub)
                total += 1
                margin = chk.lhs - chk.rhs
                min_margin = margin if min_margin is None else min(min_margin, margin)
                if not chk.ok:
                    failures.append(
                        {"corpus": name, "subgroup": si, "trial": i,
                         "lhs": chk.lhs, "rhs": chk.rhs}
                    )
    return _report(
        "convcomp",
        "convolution-lower-bound",
        seed,
        total,
        failures,
        {"min_margin": min_margin},
        {"corpora": [c[0] for c in corpora], "trials_per_subgroup": trials},
    )


# --- stationarity transfer -------------------------------------------------------


def suite_stationary(trials: int, seed: int, epsilon=Fraction(1, 10)) -> dict:
    """Near-stationarity of n forces near-full mass of m on the subgroup."""
    s3 = parse_group_spec(symmetric_table_spec(3))
    subs3 = [s for s in all_subgroups(s3) if len(s) > 1]
    failures = []
    max_gap = Fraction(0)
    for i in range(trials):
        rnd = Random(derive_seed(seed, i))
        elems = sorted(rnd.choice(subs3))
        sub = FiniteSubgroup(s3, elems)
        n = _random_probvec(rnd, elems, s3, 1, len(elems))
        if rnd.random() < 0.5:
            m = _random_probvec(rnd, elems, s3, 1, len(elems))
        else:
            m = _random_probvec(rnd, s3.elements(), s3, 2, 6)
        rep = stationarity_transfer_check(n, m, sub, epsilon)
        if not rep.transfer_ok:
            failures.append({"trial": i, "n_mass": rep.n_mass, "m_mass": rep.m_mass,
                             "left": rep.left_defect})
        if rep.n_mass == 1 and rep.left_defect <= epsilon:
            max_gap = max(max_gap, 1 - rep.m_mass)
    return _report(
        "stationary",
        "stationarity-transfer",
        seed,
        trials,
        failures,
        {"max_mass_gap_on_triggered": max_gap, "epsilon": epsilon},
        {"group": "sym-3"},
    )


# --- location experiment ----------------------------------------------------------


def _location_configs():
    out = []
    lam = parse_group_spec(lamplighter_spec())
    lam_ball = lam.ball(3)
    lam_n = BaseSumSubgroup(lam)
    lam_hs = [g for g in lam_ball if lam_n.contains(g) and g != lam.identity]
    out.append(("lamplighter", lam, lam_ball, lam_n, lam_hs))

    am = parse_group_spec(free_product_spec(2, 3))

    def exponent_hom(g):
        total_a = 0
        total_b = 0
        for tag, idx in g[1]:
            if tag == "A":
                total_a += idx
            else:
                total_b += idx
        return (total_a % 2, total_b % 3)

    ker = KernelSubgroup(am, exponent_hom, (0, 0), "exponent-sum kernel")
    am_ball = am.ball(3)
    # shortest nontrivial kernel elements are commutators of length 4
    am_hs = [g for g in am.ball(5) if ker.contains(g) and g != am.identity]
    out.append(("free-product-2-3", am, am_ball, ker, am_hs))
    return out


def suite_location(trials: int, seed: int, r=Fraction(3, 4)) -> dict:
    """Selected-mass outside a centralizer against displacement over (2r-1)."""
    configs = _location_configs()
    failures = []
    max_ratio = Fraction(0)
    for i in range(trials):
        rnd = Random(derive_seed(seed, i))
        name, ctx, ball, n_sub, hs = configs[i % len(configs)]
        h = hs[rnd.randrange(len(hs))]
        p = _random_probvec(rnd, ball, ctx, 2, 6)
        rep = location_experiment(p, ctx, ctx.generators(), n_sub, h, r=r,
                                  conjugator_bound=2)
        if not rep.ok:
            failures.append({"trial": i, "family": name, "lhs": rep.lhs, "rhs": rep.rhs})
        if rep.rhs != 0:
            max_ratio = max(max_ratio, Fraction(rep.lhs) / Fraction(rep.rhs))
    return _report(
        "location",
        "selected-mass-displacement-bound",
        seed,
        trials,
        failures,
        {"max_lhs_over_rhs": max_ratio, "threshold": r},
        {"families": [c[0] for c in configs]},
    )


# --- alternating partition ---------------------------------------------------------


def suite_amine(radius: int = 8, specs: Sequence[dict] | None = None) -> dict:
    """Leading-letter partition, conjugate coverage and disjointness on amalgam balls."""
    docs = list(specs) if specs else [free_product_spec(2, 3), cyclic_amalgam_spec(4, 6, 2)]
    failures = []
    details = []
    for k, doc in enumerate(docs):
        ctx = parse_group_spec(doc)
        rep = factor_partition_report(ctx, radius)
        details.append(
            {
                "amalgam": ctx.describe(),
                "ball": rep.ball_size,
                "partition": rep.families_partition,
                "coverage": rep.coverage_ok,
                "disjoint": rep.disjointness_ok,
            }
        )
        if not rep.ok:
            failures.append({"spec": k, "detail": details[-1]})
    return _report(
        "amine",
        "alternating-word-partition",
        0,
        len(docs),
        failures,
        {"details": details},
        {"radius": radius},
    )


# --- hyperplane crossing fidelity -----------------------------------------------------


def _crossing_corpus(max_vertices: int = 5):
    out = []
    for graph in atlas_graphs(1, max_vertices):
        orders = {v: 2 + (i % 2) for i, v in enumerate(graph.vertices)}
        groups = {v: {"kind": "cyclic", "order": orders[v]} for v in graph.vertices}
        out.append(SimpGraph.make(graph.vertices, [sorted(e) for e in graph.edges],
                                  vertex_groups=groups))
    return out


def _graph_ctx(graph: SimpGraph):
    return parse_group_spec(
        {
            "kind": "graph_product",
            "graph": {"vertices": list(graph.vertices),
                      "edges": sorted(sorted(e) for e in graph.edges)},
            "vertex_groups": graph.vertex_groups,
        }
    )


def suite_crossing(radius: int = 3, max_vertices: int = 5) -> dict:
    """Base hyperplane crossings versus graph edges, over the small-graph corpus."""
    corpus = _crossing_corpus(max_vertices)
    failures = []
    checked = 0
    for gi, graph in enumerate(corpus):
        ctx = _graph_ctx(graph)
        ball = build_x_gamma_ball(graph, ctx, radius)
        infos = hyperplane_classes(ball)
        base_ids = base_class_ids(ball, infos)
        pairs = crossing_pairs(ball, infos)
        for v, w in itertools.combinations(graph.vertices, 2):
            checked += 1
            crossed = frozenset({base_ids[v], base_ids[w]}) in pairs
            if crossed != graph.has_edge(v, w):
                failures.append({"graph": gi, "pair": [v, w], "crossed": crossed})
    return _report(
        "crossing",
        "base-hyperplane-crossing-fidelity",
        0,
        checked,
        failures,
        {"graphs": len(corpus)},
        {"radius": radius, "max_vertices": max_vertices},
    )


def suite_irreducibility(radius: int = 5, max_vertices: int = 5) -> dict:
    """Product signature in interior crossings equals the join property."""
    corpus = _crossing_corpus(max_vertices)
    failures = []
    for gi, graph in enumerate(corpus):
        ctx = _graph_ctx(graph)
        ball = build_x_gamma_ball(graph, ctx, radius)
        rep = irreducibility_check(graph, ball)
        if not rep.consistent:
            failures.append({"graph": gi, "signature": rep.product_signature,
                             "join": rep.graph_is_join})
    return _report(
        "irreducibility",
        "product-signature-versus-join",
        0,
        len(corpus),
        failures,
        {},
        {"radius": radius, "max_vertices": max_vertices},
    )


def flag_link_report(graph: SimpGraph, ball) -> dict:
    """Flag condition at every link-complete interior vertex, plus the base link."""
    maxdim = graph.max_clique_size()
    bad = []
    checked = 0
    for vid in range(len(ball.vertices)):
        if not ball.complete and ball.dist[vid] + maxdim > ball.radius:
            continue
        checked += 1
        if not link_complex(ball, vid).is_flag:
            bad.append(vid)
    return {
        "checked": checked,
        "non_flag": bad,
        "base_link_matches_graph": link_of_base_matches_graph(ball),
        "ok": not bad and link_of_base_matches_graph(ball),
    }


# --- three-vertex witnesses ----------------------------------------------------------


def suite_subsets3(min_vertices: int = 3, max_vertices: int = 7) -> dict:
    """Every non-join graph has three vertices spanning at most one edge."""
    failures = []
    checked = 0
    for gi, graph in enumerate(atlas_graphs(min_vertices, max_vertices)):
        if graph.is_join():
            continue
        checked += 1
        rep = three_vertex_witness(graph)
        if rep["witness"] is None:
            failures.append({"graph": gi, "vertices": len(graph.vertices)})
    return _report(
        "subsets3",
        "sparse-triple-in-non-join",
        0,
        checked,
        failures,
        {},
        {"min_vertices": min_vertices, "max_vertices": max_vertices},
    )


# --- isometry classification -----------------------------------------------------------


def _isometry_corpus():
    return [
        ("free-product-2-3", parse_group_spec(free_product_spec(2, 3))),
        ("cyclic-amalgam-4-6-over-2", parse_group_spec(cyclic_amalgam_spec(4, 6, 2))),
        ("hnn-4-over-2", parse_group_spec({
            "kind": "hnn",
            "k": {"kind": "table", "elements": ["0", "1", "2", "3"],
                  "mul": [[(i + j) % 4 for j in range(4)] for i in range(4)]},
            "h": [0, 2],
            "phi": [0, 2],
        })),
    ]


def suite_isometry(radius: int = 6) -> dict:
    """Cyclic-reduction translation length equals the convex-descent minimum."""
    failures = []
    checked = 0
    per_group = {}
    for name, ctx in _isometry_corpus():
        count = 0
        for g in ctx.ball(radius):
            checked += 1
            count += 1
            cls = classify_isometry(ctx, g)
            brute = min_displacement(ctx, g)
            if cls.translation_length != brute:
                failures.append({"group": name, "element": ctx.elt_to_json(g),
                                 "claimed": cls.translation_length, "brute": brute})
        per_group[name] = count
    return _report(
        "isometry",
        "translation-length-two-routes",
        0,
        checked,
        failures,
        {"elements_per_group": per_group},
        {"radius": radius},
    )


# --- displacement-square convexity ------------------------------------------------------


def suite_phi(trials: int, seed: int) -> dict:
    """Exact midpoint strict-convexity inequality on tree balls."""
    corpus = []
    for name, spec in (("free-product-2-3", free_product_spec(2, 3)),
                       ("cyclic-amalgam-4-6-over-2", cyclic_amalgam_spec(4, 6, 2))):
        ctx = parse_group_spec(spec)
        ball = bass_serre_ball(ctx, 6)
        support_pool = [g for g in ctx.ball(2) if ball.act(g, 0) is not None]
        corpus.append((name, ctx, ball, support_pool))
    failures = []
    for i in range(trials):
        rnd = Random(derive_seed(seed, i))
        name, ctx, ball, pool = corpus[i % len(corpus)]
        p = _random_probvec(rnd, pool, ctx, 2, 4)
        rep = phi_profile(ball, p, 0)
        x = rnd.randrange(len(ball.vertices))
        y = rnd.randrange(len(ball.vertices))
        c_val, bound, ok = midpoint_inequality(ball, rep, x, y)
        if not ok:
            failures.append({"trial": i, "tree": name, "mid": c_val, "bound": bound})
    return _report(
        "phi",
        "midpoint-strict-convexity",
        seed,
        trials,
        failures,
        {},
        {"trees": [c[0] for c in corpus]},
    )


# --- dispatch ------------------------------------------------------------------


SUITES: dict[str, Callable[..., dict]] = {
    "tildep": lambda trials, seed, **kw: suite_tildep(trials, seed),
    "convcomp": lambda trials, seed, **kw: suite_convcomp(trials, seed),
    "stationary": lambda trials, seed, **kw: suite_stationary(trials, seed),
    "location": lambda trials, seed, **kw: suite_location(trials, seed),
    "amine": lambda trials, seed, radius=8, specs=None, **kw: suite_amine(radius, specs),
    "crossing": lambda trials, seed, radius=3, **kw: suite_crossing(radius),
    "irreducibility": lambda trials, seed, radius=5, **kw: suite_irreducibility(radius),
    "subsets3": lambda trials, seed, **kw: suite_subsets3(),
    "isometry": lambda trials, seed, radius=6, **kw: suite_isometry(radius),
    "phi": lambda trials, seed, **kw: suite_phi(trials, seed),
}


def run_suite(name: str, trials: int = 100, seed: int = 0, **kwargs) -> dict:
    if name not in SUITES:
        raise UnknownSuite(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    return SUITES[name](trials=trials, seed=seed, **kwargs)
