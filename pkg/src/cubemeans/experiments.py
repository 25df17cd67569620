"""Inequality harnesses for the means calculus.

Each check computes both sides of one of the toolkit's core inequalities
from scratch (no shared code path with the statement being tested) and
reports the pieces along with the verdict.  In exact mode every comparison
is exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Sequence

from .errors import NonEquivariantPartition, PartialMap
from .groups.base import Elt, GroupCtx
from .groups.subgroups import Subgrp
from .means import ProbVec, conjugate_push, convolve, l1_distance, reverse

LIFT_CONSTANT = 5


@dataclass(frozen=True)
class PartitionMap:
    """A total map from a finite carrier of elements to abstract block labels."""

    carrier: frozenset
    block_of: dict = field(compare=False)

    def __post_init__(self):
        missing = [x for x in self.carrier if x not in self.block_of]
        if missing:
            raise PartialMap(f"partition map undefined on {len(missing)} carrier points")

    def blocks(self) -> dict[Hashable, frozenset]:
        out: dict[Hashable, set] = {}
        for x in self.carrier:
            out.setdefault(self.block_of[x], set()).add(x)
        return {y: frozenset(s) for y, s in out.items()}

    @staticmethod
    def from_blocks(blocks: Iterable[Iterable]) -> "PartitionMap":
        block_of = {}
        carrier = set()
        for i, blk in enumerate(blocks):
            for x in blk:
                block_of[x] = i
                carrier.add(x)
        return PartitionMap(frozenset(carrier), block_of)

    @staticmethod
    def conjugation_orbits(ctx: GroupCtx, carrier: Iterable[Elt],
                           conjugators: Iterable[Elt]) -> "PartitionMap":
        """Blocks are orbit classes of x ~ n x n^-1 inside the carrier."""
        carrier = set(carrier)
        parent = {x: x for x in carrier}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for n in conjugators:
            for x in carrier:
                y = ctx.conjugate(n, x)
                if y in carrier:
                    rx, ry = find(x), find(y)
                    if rx != ry:
                        parent[rx] = ry
        labels = {}
        block_of = {}
        for x in sorted(carrier, key=ctx.sort_key):
            r = find(x)
            if r not in labels:
                labels[r] = len(labels)
            block_of[x] = labels[r]
        return PartitionMap(frozenset(carrier), block_of)


def tilde_lift(p: ProbVec, pi: PartitionMap) -> ProbVec:
    """Block-diagonal square of p: mass p(x0)p(x1)/q(y) on same-block pairs."""
    missing = [x for x in p.mass if x not in pi.block_of]
    if missing:
        raise PartialMap(f"partition map misses {len(missing)} support points")
    q: dict = {}
    for x, v in p.mass.items():
        y = pi.block_of[x]
        q[y] = q.get(y, 0) + v
    out: dict = {}
    for x0, v0 in p.mass.items():
        y = pi.block_of[x0]
        for x1, v1 in p.mass.items():
            if pi.block_of[x1] == y:
                out[(x0, x1)] = v0 * v1 / q[y]
    return ProbVec(out, None, p.mode, _validated=True)


def diagonal_mass(p: ProbVec, pi: PartitionMap):
    """Mass of the diagonal under the block-diagonal square, computed directly."""
    q: dict = {}
    for x, v in p.mass.items():
        q[pi.block_of[x]] = q.get(pi.block_of[x], 0) + v
    zero = Fraction(0) if p.mode == "exact" else 0.0
    return sum((v * v / q[pi.block_of[x]] for x, v in p.mass.items()), zero)


def check_equivariance(ctx: GroupCtx, pi: PartitionMap, g: Elt) -> None:
    """Verify conjugation by g permutes the carrier and its blocks."""
    image = {ctx.conjugate(g, x) for x in pi.carrier}
    if image != set(pi.carrier):
        raise NonEquivariantPartition("conjugation does not permute the carrier")
    blocks = pi.blocks().values()
    block_set = set(blocks)
    for blk in blocks:
        moved = frozenset(ctx.conjugate(g, x) for x in blk)
        if moved not in block_set:
            raise NonEquivariantPartition("conjugation does not permute the blocks")


@dataclass(frozen=True)
class LiftingCheck:
    lhs: object
    rhs: object
    defect: object
    ok: bool

    @property
    def ratio(self):
        return None if self.defect == 0 else self.lhs / self.defect


def lifting_defect_check(p: ProbVec, pi: PartitionMap, g: Elt, ctx: GroupCtx) -> LiftingCheck:
    """Compare the lifted displacement against LIFT_CONSTANT times the base one.

    Requires a genuine action: conjugation by g must permute the carrier and
    the blocks (verified first; reported as an error otherwise).
    """
    check_equivariance(ctx, pi, g)
    base = l1_distance(conjugate_push(g, p), p)
    lifted_p = tilde_lift(p, pi)
    moved = ProbVec(
        {
            (ctx.conjugate(g, x0), ctx.conjugate(g, x1)): v
            for (x0, x1), v in lifted_p.mass.items()
        },
        None,
        p.mode,
        _validated=True,
    )
    lhs = l1_distance(moved, lifted_p)
    rhs = LIFT_CONSTANT * base
    return LiftingCheck(lhs, rhs, base, lhs <= rhs)


@dataclass(frozen=True)
class BoundCheck:
    lhs: object
    rhs: object
    ok: bool


def convolution_bound_check(m: ProbVec, h_sub: Subgrp) -> BoundCheck:
    """reverse(m)*m mass on H versus the sum of squared coset masses.

    The left side goes through the convolution route; the right side
    partitions the support into cosets by pairwise membership tests.
    """
    lhs = convolve(reverse(m), m).set_mass(h_sub)
    ctx = m.ctx
    support = list(m.mass)
    reps: list[Elt] = []
    coset_mass: dict[int, object] = {}
    for x in support:
        xinv = ctx.invert(x)
        for i, r in enumerate(reps):
            if h_sub.contains(ctx.multiply(ctx.invert(r), x)):
                coset_mass[i] += m.mass[x]
                break
        else:
            reps.append(x)
            coset_mass[len(reps) - 1] = m.mass[x]
        del xinv
    rhs = sum(v * v for v in coset_mass.values())
    return BoundCheck(lhs, rhs, lhs >= rhs)


@dataclass(frozen=True)
class StationarityReport:
    left_defect: object
    right_defect: object
    n_mass: object
    m_mass: object
    epsilon: object
    transfer_ok: bool


def stationarity_transfer_check(n: ProbVec, m: ProbVec, h_sub: Subgrp,
                                epsilon) -> StationarityReport:
    """If n is (nearly) m-stationary and lives on H, then m nearly lives on H."""
    left = l1_distance(convolve(n, m), n)
    right = l1_distance(convolve(m, n), n)
    n_mass = n.set_mass(h_sub)
    m_mass = m.set_mass(h_sub)
    ok = True
    if n_mass == 1 and (left <= epsilon or right <= epsilon):
        ok = m_mass >= 1 - epsilon
    return StationarityReport(left, right, n_mass, m_mass, epsilon, ok)


@dataclass
class LocationReport:
    diag_mass: object
    block_count: int
    heavy_blocks: int
    lhs: object
    defect: object
    rhs: object
    ok: bool
    threshold: object
    selected: list


def location_experiment(
    p: ProbVec,
    ctx: GroupCtx,
    k_gens: Sequence[Elt],
    n_sub: Subgrp,
    h: Elt,
    r=Fraction(3, 4),
    conjugator_bound: int = 2,
) -> LocationReport:
    """Concentration-versus-displacement experiment relative to a subgroup.

    Blocks come from conjugation orbits by bounded elements of the given
    subgroup (h itself is always included).  Within each heavy block (top
    atom above the threshold r) the top atom is selected with a
    deterministic tie-break, and the selected mass lying outside the
    centralizer of h is compared against the displacement over (2r - 1).
    """
    if not n_sub.contains(h):
        raise ValueError("h must belong to the given subgroup")
    if not (Fraction(1, 2) < Fraction(r) < 1):
        raise ValueError("threshold must lie strictly between 1/2 and 1")
    r = Fraction(r) if p.mode == "exact" else float(r)

    conjugators = [
        n for n in _generated_ball(ctx, k_gens, conjugator_bound) if n_sub.contains(n)
    ]
    if h not in conjugators:
        conjugators.append(h)
    carrier = set(p.mass)
    for n in conjugators:
        carrier.update(ctx.conjugate(n, x) for x in list(p.mass))
    pi = PartitionMap.conjugation_orbits(ctx, carrier, conjugators)

    q: dict = {}
    for x, v in p.mass.items():
        y = pi.block_of[x]
        q[y] = q.get(y, 0) + v
    top: dict = {}
    for x in sorted(p.mass, key=ctx.sort_key):
        y = pi.block_of[x]
        ratio = p.mass[x] / q[y]
        if y not in top or ratio > top[y][1]:
            top[y] = (x, ratio)
    heavy = {y for y, (_, s) in top.items() if s > r}
    selected = [x for y, (x, _) in top.items() if y in heavy]

    zero = Fraction(0) if p.mode == "exact" else 0.0
    lhs = sum((p.mass[x] for x in selected if not ctx.commutes(x, h)), zero)
    defect = l1_distance(p, conjugate_push(h, p))
    rhs = defect / (2 * r - 1)
    return LocationReport(
        diag_mass=diagonal_mass(p, pi),
        block_count=len(pi.blocks()),
        heavy_blocks=len(heavy),
        lhs=lhs,
        defect=defect,
        rhs=rhs,
        ok=lhs <= rhs,
        threshold=r,
        selected=sorted(selected, key=ctx.sort_key),
    )


def _generated_ball(ctx: GroupCtx, gens: Sequence[Elt], radius: int) -> list[Elt]:
    closed = list(gens) + [ctx.invert(g) for g in gens]
    seen = {ctx.identity}
    frontier = [ctx.identity]
    for _ in range(radius):
        nxt = []
        for g in frontier:
            for s in closed:
                x = ctx.multiply(g, s)
                if x not in seen:
                    seen.add(x)
                    nxt.append(x)
        frontier = nxt
    return sorted(seen, key=ctx.sort_key)
