from __future__ import annotations

import random
from fractions import Fraction

import pytest

from cubemeans.errors import NonEquivariantPartition, PartialMap
from cubemeans.experiments import (
    PartitionMap,
    check_equivariance,
    convolution_bound_check,
    diagonal_mass,
    lifting_defect_check,
    location_experiment,
    stationarity_transfer_check,
    tilde_lift,
)
from cubemeans.groups import (
    BaseSumSubgroup,
    FiniteSubgroup,
    IndexSubgroup,
    IntegersCtx,
    KernelSubgroup,
    all_subgroups,
)
from cubemeans.means import ProbVec, convolve, l1_distance, reverse


def _random_vec(rnd, points, ctx, kmin=2, kmax=6):
    k = min(len(points), rnd.randint(kmin, kmax))
    support = rnd.sample(list(points), k)
    weights = [rnd.randint(1, 16) for _ in support]
    total = sum(weights)
    return ProbVec({x: Fraction(w, total) for x, w in zip(support, weights)}, ctx)


# --- block-diagonal square -----------------------------------------------------


def test_tilde_lift_injective_partition_is_diagonal():
    p = ProbVec.uniform(["x", "y", "z"])
    pi = PartitionMap.from_blocks([["x"], ["y"], ["z"]])
    tp = tilde_lift(p, pi)
    assert tp.mass == {(s, s): Fraction(1, 3) for s in "xyz"}
    assert diagonal_mass(p, pi) == 1


def test_tilde_lift_constant_partition_is_square():
    p = ProbVec.uniform(["x", "y"])
    pi = PartitionMap.from_blocks([["x", "y"]])
    tp = tilde_lift(p, pi)
    assert tp.mass == {
        ("x", "x"): Fraction(1, 4),
        ("x", "y"): Fraction(1, 4),
        ("y", "x"): Fraction(1, 4),
        ("y", "y"): Fraction(1, 4),
    }
    assert diagonal_mass(p, pi) == Fraction(1, 2)


def test_tilde_lift_direct_formula_oracle():
    rnd = random.Random(9)
    points = list(range(12))
    for _ in range(200):
        blocks = [[], [], []]
        for x in points:
            blocks[rnd.randrange(3)].append(x)
        blocks = [b for b in blocks if b]
        pi = PartitionMap.from_blocks(blocks)
        weights = {x: rnd.randint(0, 5) for x in points}
        total = sum(weights.values())
        if total == 0:
            continue
        p = ProbVec({x: Fraction(w, total) for x, w in weights.items() if w})
        tp = tilde_lift(p, pi)
        # oracle: independent recomputation from the definition
        q = {}
        for x, v in p.mass.items():
            q[pi.block_of[x]] = q.get(pi.block_of[x], 0) + v
        for (x0, x1), v in tp.mass.items():
            y = pi.block_of[x0]
            assert pi.block_of[x1] == y
            assert v == p.mass[x0] * p.mass[x1] / q[y]
        # block marginal identity
        for y, blk in pi.blocks().items():
            marginal = sum(v for (x0, _), v in tp.mass.items() if pi.block_of[x0] == y)
            assert marginal == q.get(y, 0)


def test_tilde_lift_needs_total_map():
    p = ProbVec.uniform(["x", "y"])
    pi = PartitionMap.from_blocks([["x"]])
    with pytest.raises(PartialMap):
        tilde_lift(p, pi)


# --- lifted displacement bound -------------------------------------------------


def test_lifting_check_trivial_action(sym3):
    p = ProbVec.uniform(sym3.elements(), sym3)
    pi = PartitionMap.from_blocks([[x] for x in sym3.elements()])
    chk = lifting_defect_check(p, pi, sym3.identity, sym3)
    assert chk.lhs == 0 and chk.rhs == 0 and chk.ok


def test_lifting_check_invariant_vector(sym3):
    g = sym3.elements()[1]
    pi = PartitionMap.conjugation_orbits(sym3, sym3.elements(), [g])
    # class functions are invariant under every inner automorphism
    orbit_blocks = PartitionMap.conjugation_orbits(sym3, sym3.elements(), sym3.elements())
    mass = {}
    for blk in orbit_blocks.blocks().values():
        for x in blk:
            mass[x] = Fraction(1, 6)
    p = ProbVec(mass, sym3)
    chk = lifting_defect_check(p, pi, g, sym3)
    assert chk.lhs == 0 and chk.ok


def test_lifting_check_rejects_non_equivariant(sym3):
    elems = sym3.elements()
    g = elems[1]
    # a partition that conjugation by g does not respect
    bad = PartitionMap.from_blocks([[elems[0], elems[1]], elems[2:]])
    moved = {sym3.conjugate(g, x) for x in [elems[0], elems[1]]}
    if moved != {elems[0], elems[1]}:
        with pytest.raises(NonEquivariantPartition):
            lifting_defect_check(ProbVec.uniform(elems, sym3), bad, g, sym3)


def test_lifting_check_randomized_bound(sym4):
    rnd = random.Random(10)
    elems = sym4.elements()
    worst = Fraction(0)
    for _ in range(500):
        g = rnd.choice([x for x in elems if x != sym4.identity])
        pi = PartitionMap.conjugation_orbits(sym4, elems, [g])
        p = _random_vec(rnd, elems, sym4)
        chk = lifting_defect_check(p, pi, g, sym4)
        assert chk.ok
        if chk.ratio is not None:
            worst = max(worst, chk.ratio)
    assert worst <= 5


# --- convolution bound ------------------------------------------------------------


def test_convolution_bound_point_mass(sym3):
    sub = FiniteSubgroup(sym3, [sym3.identity])
    m = ProbVec.delta(sym3.elements()[3], sym3)
    chk = convolution_bound_check(m, sub)
    assert chk.lhs == 1 and chk.rhs == 1 and chk.ok


def test_convolution_bound_integers():
    z = IntegersCtx()
    m = ProbVec.uniform([0, 1], z)
    chk = convolution_bound_check(m, IndexSubgroup(z, 2))
    assert chk.lhs == Fraction(1, 2) and chk.rhs == Fraction(1, 2) and chk.ok


def test_convolution_bound_exhaustive_sym3(sym3):
    rnd = random.Random(11)
    subs = [FiniteSubgroup(sym3, s) for s in all_subgroups(sym3)]
    for sub in subs:
        for _ in range(200):
            m = _random_vec(rnd, sym3.elements(), sym3)
            chk = convolution_bound_check(m, sub)
            assert chk.ok
            # finitely supported vectors give exact equality
            assert chk.lhs == chk.rhs


def test_convolution_bound_lhs_route_is_convolution(sym3):
    # the left side must agree with an independent direct double sum
    rnd = random.Random(12)
    sub = FiniteSubgroup(sym3, sorted(next(s for s in all_subgroups(sym3) if len(s) == 3)))
    for _ in range(100):
        m = _random_vec(rnd, sym3.elements(), sym3)
        chk = convolution_bound_check(m, sub)
        direct = sum(
            m.mass[g] * m.mass[h]
            for g in m.mass
            for h in m.mass
            if sub.contains(sym3.multiply(sym3.invert(g), h))
        )
        assert chk.lhs == direct


# --- stationarity transfer -----------------------------------------------------------


def test_stationarity_exact_point_mass(sym3):
    sub = FiniteSubgroup(sym3, [sym3.identity])
    n = m = ProbVec.delta(sym3.identity, sym3)
    rep = stationarity_transfer_check(n, m, sub, Fraction(1, 10))
    assert rep.left_defect == 0 and rep.right_defect == 0
    assert rep.n_mass == 1 and rep.m_mass == 1 and rep.transfer_ok


def test_stationarity_uniform_on_subgroup(sym3):
    a3 = sorted(next(s for s in all_subgroups(sym3) if len(s) == 3))
    sub = FiniteSubgroup(sym3, a3)
    n = ProbVec.uniform(a3, sym3)
    m = ProbVec.delta(a3[1], sym3)
    rep = stationarity_transfer_check(n, m, sub, Fraction(0))
    assert rep.left_defect == 0  # n * delta_h = n exactly
    assert rep.m_mass == 1 and rep.transfer_ok


def test_stationarity_random_trials(sym3):
    rnd = random.Random(13)
    subs = [s for s in all_subgroups(sym3) if len(s) > 1]
    for _ in range(500):
        elems = sorted(rnd.choice(subs))
        sub = FiniteSubgroup(sym3, elems)
        n = _random_vec(rnd, elems, sym3, 1, len(elems))
        m = _random_vec(rnd, sym3.elements(), sym3)
        rep = stationarity_transfer_check(n, m, sub, Fraction(1, 10))
        assert rep.transfer_ok


# --- location experiment ----------------------------------------------------------------


def test_location_point_mass(lamplighter):
    n_sub = BaseSumSubgroup(lamplighter)
    h = (((0, 1),), 0)
    p = ProbVec.delta(lamplighter.identity, lamplighter)
    rep = location_experiment(p, lamplighter, lamplighter.generators(), n_sub, h)
    assert rep.diag_mass == 1
    assert rep.lhs == 0 and rep.ok


def test_location_concentrated_on_centralizer(lamplighter):
    n_sub = BaseSumSubgroup(lamplighter)
    h = (((0, 1),), 0)
    # lamp configurations commute with each other
    others = [(((1, 1),), 0), (((0, 1), (1, 1)), 0)]
    p = ProbVec.uniform(others, lamplighter)
    rep = location_experiment(p, lamplighter, lamplighter.generators(), n_sub, h)
    assert rep.lhs == 0 and rep.ok


def test_location_requires_membership(lamplighter):
    n_sub = BaseSumSubgroup(lamplighter)
    with pytest.raises(ValueError):
        location_experiment(
            ProbVec.delta(lamplighter.identity, lamplighter),
            lamplighter,
            lamplighter.generators(),
            n_sub,
            ((), 1),  # a shift: not in the direct sum
        )


def test_location_threshold_validated(lamplighter):
    n_sub = BaseSumSubgroup(lamplighter)
    h = (((0, 1),), 0)
    p = ProbVec.delta(lamplighter.identity, lamplighter)
    with pytest.raises(ValueError):
        location_experiment(p, lamplighter, lamplighter.generators(), n_sub, h,
                            r=Fraction(1, 2))


def test_location_randomized(free23, lamplighter):
    rnd = random.Random(14)

    def exponent_hom(g):
        # free23 is a graph product: syllables are (vertex index, residue)
        ta = sum(x for v, x in g if v == 0)
        tb = sum(x for v, x in g if v == 1)
        return (ta % 2, tb % 3)

    ker = KernelSubgroup(free23, exponent_hom, (0, 0))
    fam = [
        (lamplighter, BaseSumSubgroup(lamplighter),
         [g for g in lamplighter.ball(3) if BaseSumSubgroup(lamplighter).contains(g)
          and g != lamplighter.identity]),
        (free23, ker,
         [g for g in free23.ball(5) if ker.contains(g) and g != free23.identity]),
    ]
    for i in range(400):
        ctx, n_sub, hs = fam[i % 2]
        h = rnd.choice(hs)
        p = _random_vec(rnd, ctx.ball(3), ctx)
        rep = location_experiment(p, ctx, ctx.generators(), n_sub, h)
        assert rep.ok
