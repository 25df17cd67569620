"""Bass-Serre trees for amalgams and HNN extensions.

Vertices are factor cosets (two types for an amalgam, one for an HNN
extension), edges are edge-subgroup cosets, and the group acts by left
multiplication on coset labels.  Distances between cosets are also
available in closed form from normal forms, which powers an independent
displacement oracle (convex descent) used to cross-validate the
cyclic-reduction classification.

Every tree edge has length 1 (simplicial actions without inversions), so
translation lengths are integers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import CapExceeded, DegenerateAmalgam, SupportOutsideBall
from .groups.amalgams import AmalgamCtx, HnnCtx
from .groups.base import DEFAULT_CAP, Elt
from .means import ProbVec

Label = tuple[str, Elt]


def _coset_label(ctx, rep: Elt, elems: Iterable[Elt]) -> Elt:
    return min((ctx.multiply(rep, x) for x in elems), key=ctx.sort_key)


class TreeCosets:
    """Coset labeling and closed-form distances for a tree context."""

    def __init__(self, ctx: AmalgamCtx | HnnCtx):
        self.ctx = ctx
        if isinstance(ctx, AmalgamCtx):
            self.kind = "amalgam"
            self._factors = {
                "A": ctx.factor_elements("A"),
                "B": ctx.factor_elements("B"),
            }
        else:
            self.kind = "hnn"
            self._factors = {"K": ctx.base_group_elements()}
        self._edge_elems = ctx.edge_subgroup_elements()
        if self.kind == "hnn":
            self._t = ctx.canonicalize_word([("t", 1)])
            self._tinv = ctx.canonicalize_word([("t", -1)])

    def vertex_types(self) -> list[str]:
        return sorted(self._factors)

    def label(self, tag: str, rep: Elt) -> Label:
        return (tag, _coset_label(self.ctx, rep, self._factors[tag]))

    def edge_label(self, rep: Elt) -> Elt:
        return _coset_label(self.ctx, rep, self._edge_elems)

    def base(self) -> Label:
        tag = "A" if self.kind == "amalgam" else "K"
        return self.label(tag, self.ctx.identity)

    def act(self, g: Elt, v: Label) -> Label:
        return self.label(v[0], self.ctx.multiply(g, v[1]))

    def neighbors(self, v: Label) -> list[tuple[Label, Elt]]:
        """(neighbor label, edge label) pairs, deduplicated."""
        ctx = self.ctx
        tag, rep = v
        out: dict[Elt, Label] = {}
        if self.kind == "amalgam":
            other = "B" if tag == "A" else "A"
            for a in self._factors[tag]:
                w = ctx.multiply(rep, a)
                out.setdefault(self.edge_label(w), self.label(other, w))
        else:
            for k in self._factors["K"]:
                w = ctx.multiply(rep, k)
                out.setdefault(self.edge_label(w), self.label("K", ctx.multiply(w, self._tinv)))
                wt = ctx.multiply(w, self._t)
                out.setdefault(self.edge_label(wt), self.label("K", wt))
        return [
            (label, elabel)
            for elabel, label in sorted(out.items(), key=lambda kv: self.ctx.sort_key(kv[0]))
        ]

    # --- closed-form distance -------------------------------------------

    def distance(self, u: Label, w: Label) -> int:
        g = self.ctx.multiply(self.ctx.invert(u[1]), w[1])
        if self.kind == "hnn":
            return self.ctx.t_length(g)
        n = self.ctx.syllable_length(g)
        if n and g[1][-1][0] == w[0]:
            n -= 1
        if u[0] == w[0]:
            return n if n % 2 == 0 else n + 1
        return n + 1 if n % 2 == 0 else n

    def displacement(self, g: Elt, v: Label) -> int:
        return self.distance(v, self.act(g, v))


def min_displacement(ctx: AmalgamCtx | HnnCtx, g: Elt, max_steps: int = 10**4) -> int:
    """Brute-force translation length via convex descent over the tree.

    The displacement function of an isometry of a tree is convex along
    paths and has no parabolic behavior here, so a vertex none of whose
    neighbors improves the displacement realizes the global minimum.
    Independent of cyclic reduction.
    """
    cosets = TreeCosets(ctx)
    v = cosets.base()
    dv = cosets.displacement(g, v)
    for _ in range(max_steps):
        if dv == 0:
            return 0
        better = None
        for w, _ in cosets.neighbors(v):
            dw = cosets.displacement(g, w)
            if dw < dv:
                better = (w, dw)
                break
        if better is None:
            return dv
        v, dv = better
    raise RuntimeError("descent did not converge")


@dataclass
class TreeBall:
    ctx: AmalgamCtx | HnnCtx
    cosets: TreeCosets
    radius: int
    vertices: list[Label]
    index: dict[Label, int]
    dist: list[int]
    edges: list[tuple[Elt, int, int]]
    adj: list[list[tuple[int, int]]] = field(default_factory=list)

    def __post_init__(self):
        if not self.adj:
            self.adj = [[] for _ in self.vertices]
            for eid, (_, i, j) in enumerate(self.edges):
                self.adj[i].append((j, eid))
                self.adj[j].append((i, eid))
            for lst in self.adj:
                lst.sort()

    def degree(self, vid: int) -> int:
        return len(self.adj[vid])

    def vertex_type(self, vid: int) -> str:
        return self.vertices[vid][0]

    def act(self, g: Elt, vid: int) -> int | None:
        """Image vertex id, or None when the image leaves the ball."""
        return self.index.get(self.cosets.act(g, self.vertices[vid]))

    def fixed_in_ball(self, g: Elt) -> list[int]:
        out = []
        for vid, v in enumerate(self.vertices):
            if self.cosets.act(g, v) == v:
                out.append(vid)
        return out

    def bfs(self, src: int, blocked_edge: int | None = None) -> dict[int, int]:
        dist = {src: 0}
        frontier = [src]
        while frontier:
            nxt = []
            for u in frontier:
                for w, eid in self.adj[u]:
                    if eid == blocked_edge or w in dist:
                        continue
                    dist[w] = dist[u] + 1
                    nxt.append(w)
            frontier = nxt
        return dist

    def path(self, src: int, dst: int) -> list[int]:
        parent = {src: None}
        frontier = [src]
        while frontier and dst not in parent:
            nxt = []
            for u in frontier:
                for w, _ in self.adj[u]:
                    if w not in parent:
                        parent[w] = u
                        nxt.append(w)
            frontier = nxt
        out = [dst]
        while parent[out[-1]] is not None:
            out.append(parent[out[-1]])
        return list(reversed(out))

    def halfspace_sides(self, eid: int) -> tuple[frozenset[int], frozenset[int]]:
        _, i, j = self.edges[eid]
        side_i = frozenset(self.bfs(i, blocked_edge=eid))
        side_j = frozenset(self.bfs(j, blocked_edge=eid))
        return side_i, side_j

    def stats(self) -> dict:
        types: dict[str, int] = {}
        for tag, _ in self.vertices:
            types[tag] = types.get(tag, 0) + 1
        return {
            "vertices": len(self.vertices),
            "edges": len(self.edges),
            "radius": self.radius,
            "vertex_types": types,
        }


def bass_serre_ball(ctx: AmalgamCtx | HnnCtx, radius: int, cap: int = DEFAULT_CAP) -> TreeBall:
    """Combinatorial tree ball of the coset tree around the base vertex."""
    if radius < 0:
        raise ValueError("radius must be >= 0")
    cosets = TreeCosets(ctx)
    base = cosets.base()
    vertices = [base]
    index = {base: 0}
    dist = [0]
    edges: list[tuple[Elt, int, int]] = []
    edge_seen: set[Elt] = set()
    frontier = [0]
    d = 0
    while frontier and d < radius:
        d += 1
        nxt = []
        for vid in frontier:
            for w, _ in cosets.neighbors(vertices[vid]):
                if w not in index:
                    index[w] = len(vertices)
                    vertices.append(w)
                    dist.append(d)
                    nxt.append(index[w])
                    if len(vertices) > cap:
                        raise CapExceeded(cap, len(vertices))
        frontier = nxt
    for vid, v in enumerate(vertices):
        for w, elabel in cosets.neighbors(v):
            j = index.get(w)
            if j is None or elabel in edge_seen:
                continue
            edge_seen.add(elabel)
            edges.append((elabel, vid, j))
    return TreeBall(ctx, cosets, radius, vertices, index, dist, edges)


# --- isometry classification -------------------------------------------------


@dataclass
class IsometryClass:
    kind: str  # "elliptic" | "hyperbolic"
    translation_length: int
    conjugator: Elt
    core: Elt
    sample: list[Label]

    @property
    def elliptic(self) -> bool:
        return self.kind == "elliptic"


def classify_isometry(ctx: AmalgamCtx | HnnCtx, g: Elt) -> IsometryClass:
    """Elliptic or hyperbolic via cyclic reduction of the normal form.

    Elliptic exactly when the cyclically reduced core has zero syllable
    length (it then lies in a factor); otherwise the translation length is
    the core's syllable length, in the edge-length-1 metric.
    """
    conj, core = ctx.cyclic_reduction(g)
    n = ctx.core_syllables(core)
    cosets = TreeCosets(ctx)
    if n == 0:
        if isinstance(ctx, AmalgamCtx):
            if ctx.in_edge_subgroup(core):
                sample = [cosets.label("A", conj), cosets.label("B", conj)]
            else:
                tag = core[1][0][0]
                sample = [cosets.label(tag, conj)]
        else:
            sample = [cosets.label("K", conj)]
        return IsometryClass("elliptic", 0, conj, core, sample)
    tag = "A" if isinstance(ctx, AmalgamCtx) else "K"
    sample = [
        cosets.label(tag, conj),
        cosets.label(tag, ctx.multiply(conj, core)),
    ]
    return IsometryClass("hyperbolic", n, conj, core, sample)


def fixed_point_set(ball: TreeBall, g: Elt) -> list[int]:
    """Vertices of the ball fixed by g; a subtree when nonempty."""
    return ball.fixed_in_ball(g)


def halfspace_fix_mass(p: ProbVec, ball: TreeBall, eid: int, side: int):
    """Mass of elements whose fixed set meets the chosen side of an edge.

    A recorded diagnostic: finitary vectors only approximate means, so the
    value is reported, never asserted.
    """
    sides = ball.halfspace_sides(eid)
    chosen = sides[side]
    zero = Fraction(0) if p.mode == "exact" else 0.0
    total = zero
    for g, mass in p.mass.items():
        fixed = set(ball.fixed_in_ball(g))
        if fixed & chosen:
            total += mass
    return total


# --- displacement-square minimization ----------------------------------------


@dataclass
class PhiReport:
    vertex_values: dict[int, Fraction]
    midpoint_values: dict[int, Fraction]
    argmin: list
    minimum: Fraction


def phi_profile(ball: TreeBall, p: ProbVec, x0: int) -> PhiReport:
    """phi(x) = sum_g p(g) d(x, g x0)^2 on vertices and edge midpoints."""
    targets: dict[Elt, int] = {}
    for g in p.mass:
        img = ball.act(g, x0)
        if img is None:
            raise SupportOutsideBall(f"{g!r} moves the basepoint outside the ball")
        targets[g] = img
    dists = {vid: ball.bfs(vid) for vid in set(targets.values())}
    half = Fraction(1, 2)
    vertex_values: dict[int, Fraction] = {}
    for vid in range(len(ball.vertices)):
        total = Fraction(0)
        for g, mass in p.mass.items():
            total += Fraction(mass) * dists[targets[g]][vid] ** 2
        vertex_values[vid] = total
    midpoint_values: dict[int, Fraction] = {}
    for eid, (_, i, j) in enumerate(ball.edges):
        total = Fraction(0)
        for g, mass in p.mass.items():
            d = min(dists[targets[g]][i], dists[targets[g]][j]) + half
            total += Fraction(mass) * d * d
        midpoint_values[eid] = total
    best = min(vertex_values.values())
    best_mid = min(midpoint_values.values()) if midpoint_values else None
    minimum = best if best_mid is None else min(best, best_mid)
    argmin: list = [("vertex", vid) for vid, v in sorted(vertex_values.items()) if v == minimum]
    argmin += [("midpoint", eid) for eid, v in sorted(midpoint_values.items()) if v == minimum]
    return PhiReport(vertex_values, midpoint_values, argmin, minimum)


def midpoint_inequality(ball: TreeBall, report: PhiReport, x: int, y: int) -> tuple:
    """phi at the geodesic midpoint versus the strict-convexity bound; exact."""
    path = ball.path(x, y)
    d = len(path) - 1
    if d % 2 == 0:
        c_val = report.vertex_values[path[d // 2]]
    else:
        u, w = path[d // 2], path[d // 2 + 1]
        eid = next(e for (nbr, e) in ball.adj[u] if nbr == w)
        c_val = report.midpoint_values[eid]
    bound = (report.vertex_values[x] + report.vertex_values[y]) / 2 - Fraction(d * d, 4)
    return c_val, bound, c_val <= bound


# --- alternating factor-word partition ---------------------------------------


@dataclass
class PartitionCheck:
    radius: int
    ball_size: int
    families_partition: bool
    coverage_ok: bool
    disjointness_ok: bool
    witnesses: dict
    swapped: bool

    @property
    def ok(self) -> bool:
        return self.families_partition and self.coverage_ok and self.disjointness_ok


def factor_partition_report(ctx: AmalgamCtx, radius: int, cap: int = DEFAULT_CAP) -> PartitionCheck:
    """Partition of the ball outside the edge subgroup by alternating factor words.

    Builds the four families (first/last factor letter odd/even patterns) as
    explicit product sets, checks that they partition the ball outside the
    edge subgroup, that the leading-letter family together with one
    conjugate covers the interior, and that two more conjugates are
    pairwise disjoint from it.
    """
    if not ctx.is_nondegenerate():
        raise DegenerateAmalgam(
            f"indices {ctx.index_a}, {ctx.index_b}: need one of them >= 3"
        )
    swapped = ctx.index_b < 3
    ta, tb = ("B", "A") if swapped else ("A", "B")

    a0 = [x for x in ctx.factor_elements(ta) if not ctx.in_edge_subgroup(x)]
    b0 = [x for x in ctx.factor_elements(tb) if not ctx.in_edge_subgroup(x)]
    ball = ctx.ball(radius, cap)
    ball_set = set(ball)

    # alternating products, tracked by (first letter factor, last letter factor)
    families: dict[tuple[str, str], set[Elt]] = {
        (ta, ta): set(), (ta, tb): set(), (tb, ta): set(), (tb, tb): set()
    }
    layer: dict[tuple[str, str], set[Elt]] = {}
    for x in a0:
        layer[(ta, ta)] = layer.get((ta, ta), set()) | {x}
    for x in b0:
        layer[(tb, tb)] = layer.get((tb, tb), set()) | {x}
    for key, s in layer.items():
        families[key] |= s & ball_set
    for _ in range(radius - 1):
        nxt: dict[tuple[str, str], set[Elt]] = {}
        for (first, last), elems in layer.items():
            ext = b0 if last == ta else a0
            new_last = tb if last == ta else ta
            bucket = nxt.setdefault((first, new_last), set())
            for g in elems:
                for x in ext:
                    bucket.add(ctx.multiply(g, x))
        for key, s in nxt.items():
            families[key] |= s & ball_set
        layer = nxt

    outside = [g for g in ball if not ctx.in_edge_subgroup(g)]
    partition_ok = True
    for g in outside:
        hits = [key for key, s in families.items() if g in s]
        expected = (ctx.first_tag(g), ctx.last_tag(g))
        if len(hits) != 1 or hits[0] != expected:
            partition_ok = False
            break

    def in_leading_family(g: Elt) -> bool:
        return ctx.syllable_length(g) > 0 and ctx.first_tag(g) == ta

    a_wit = min(a0, key=ctx.sort_key)
    b1 = b2 = None
    for x in b0:
        for y in b0:
            z = ctx.multiply(ctx.invert(x), y)
            if not ctx.in_edge_subgroup(z) and ctx.first_tag(z) == tb:
                b1, b2 = x, y
                break
        if b1 is not None:
            break
    if b1 is None:
        raise DegenerateAmalgam("no pair of distinct-coset letters found")

    a_inv = ctx.invert(a_wit)
    coverage_ok = all(
        in_leading_family(g) or in_leading_family(ctx.multiply(ctx.multiply(a_inv, g), a_wit))
        for g in outside
        if ctx.syllable_length(g) <= radius - 1
    )
    b1_inv, b2_inv = ctx.invert(b1), ctx.invert(b2)
    disjoint_ok = True
    for g in outside:
        count = sum(
            [
                in_leading_family(g),
                in_leading_family(ctx.multiply(ctx.multiply(b1_inv, g), b1)),
                in_leading_family(ctx.multiply(ctx.multiply(b2_inv, g), b2)),
            ]
        )
        if count > 1:
            disjoint_ok = False
            break

    return PartitionCheck(
        radius=radius,
        ball_size=len(ball),
        families_partition=partition_ok,
        coverage_ok=coverage_ok,
        disjointness_ok=disjoint_ok,
        witnesses={
            "a": ctx.elt_to_json(a_wit),
            "b1": ctx.elt_to_json(b1),
            "b2": ctx.elt_to_json(b2),
        },
        swapped=swapped,
    )
