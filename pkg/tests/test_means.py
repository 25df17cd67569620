from __future__ import annotations

import random
from fractions import Fraction

import pytest

from cubemeans.errors import MixedContexts, PartialMap, ZeroMass
from cubemeans.groups import (
    FiniteSubgroup,
    IndexSubgroup,
    IntegersCtx,
    TrivialSubgroup,
    all_subgroups,
)
from cubemeans.means import (
    Defect,
    ProbVec,
    conjugate_push,
    convolve,
    coset_label,
    finite_normal_lift,
    l1_distance,
    normalized_restriction,
    pushforward,
    reverse,
    transversal_average,
)


@pytest.fixture(scope="module")
def Z():
    return IntegersCtx()


def _random_vec(rnd, points, ctx, k=4):
    support = rnd.sample(list(points), min(k, len(points)))
    weights = [rnd.randint(1, 9) for _ in support]
    total = sum(weights)
    return ProbVec({x: Fraction(w, total) for x, w in zip(support, weights)}, ctx)


# --- construction ------------------------------------------------------------


def test_mass_must_sum_to_one(Z):
    with pytest.raises(ValueError):
        ProbVec({0: Fraction(1, 2)}, Z)
    with pytest.raises(ValueError):
        ProbVec({0: Fraction(3, 2), 1: Fraction(-1, 2)}, Z)


def test_modes_do_not_mix(Z):
    exact = ProbVec.delta(0, Z)
    floaty = ProbVec.delta(0, Z, mode="float")
    with pytest.raises(MixedContexts):
        convolve(exact, floaty)


# --- convolution ---------------------------------------------------------------


def test_convolve_point_masses(Z):
    assert convolve(ProbVec.delta(3, Z), ProbVec.delta(4, Z)) == ProbVec.delta(7, Z)


def test_convolve_uniform_window(Z):
    u = ProbVec.uniform([0, 1], Z)
    c = convolve(u, u)
    # oracle: direct double sum
    expect = {0: Fraction(1, 4), 1: Fraction(1, 2), 2: Fraction(1, 4)}
    assert c.mass == expect


def test_convolve_identity_neutral(Z, sym3):
    rnd = random.Random(2)
    for ctx in (Z, sym3):
        points = range(-5, 6) if ctx is Z else ctx.elements()
        m = _random_vec(rnd, points, ctx)
        assert convolve(m, ProbVec.delta(ctx.identity, ctx)) == m
        assert convolve(ProbVec.delta(ctx.identity, ctx), m) == m


def test_convolution_associative(sym3, Z):
    rnd = random.Random(3)
    for ctx in (sym3, Z):
        points = ctx.elements() if ctx is not Z else range(-4, 5)
        for _ in range(300):
            m, n, k = (_random_vec(rnd, points, ctx) for _ in range(3))
            assert convolve(convolve(m, n), k) == convolve(m, convolve(n, k))


def test_reverse_properties(sym3):
    rnd = random.Random(4)
    for _ in range(200):
        m = _random_vec(rnd, sym3.elements(), sym3)
        n = _random_vec(rnd, sym3.elements(), sym3)
        assert reverse(reverse(m)) == m
        assert reverse(convolve(m, n)) == convolve(reverse(n), reverse(m))


def test_reverse_examples(Z, sym3):
    assert reverse(ProbVec.delta(5, Z)) == ProbVec.delta(-5, Z)
    assert reverse(ProbVec.uniform([0, 1], Z)) == ProbVec.uniform([0, -1], Z)
    sym = ProbVec.uniform([1, -1], Z)
    assert reverse(sym) == sym


def test_invariant_vectors_convolve_invariant(sym3):
    # exact conjugation invariance is preserved by convolution
    rnd = random.Random(5)
    elems = sym3.elements()

    def symmetrize(m):
        out = {}
        for g in elems:
            moved = conjugate_push(g, m)
            for x, v in moved.mass.items():
                out[x] = out.get(x, 0) + v / len(elems)
        return ProbVec(out, sym3)

    for _ in range(50):
        m = symmetrize(_random_vec(rnd, elems, sym3))
        n = symmetrize(_random_vec(rnd, elems, sym3))
        c = convolve(m, n)
        for g in elems:
            assert conjugate_push(g, c) == c


# --- pushforward and restriction ---------------------------------------------------


def test_pushforward_identity(Z):
    m = ProbVec.uniform([1, 2, 3], Z)
    assert pushforward(lambda x: x, m, Z) == m


def test_pushforward_mod_two(Z):
    m = ProbVec.uniform([0, 1, 2, 3], Z)
    got = pushforward(lambda x: x % 2, m)
    assert got.mass == {0: Fraction(1, 2), 1: Fraction(1, 2)}


def test_pushforward_conjugation(free23):
    a = free23.canonicalize_word([("v", 1)])
    b = free23.canonicalize_word([("w", 1)])
    assert conjugate_push(b, ProbVec.delta(a, free23)) == ProbVec.delta(
        free23.conjugate(b, a), free23
    )


def test_pushforward_partial_map_raises(Z):
    m = ProbVec.uniform([0, 1], Z)
    with pytest.raises(PartialMap):
        pushforward(lambda x: None, m)


def test_normalized_restriction(Z):
    m = ProbVec.uniform([0, 1, 2, 3], Z)
    assert normalized_restriction(m, lambda x: x % 2 == 0) == ProbVec.uniform([0, 2], Z)
    assert normalized_restriction(m, IndexSubgroup(Z, 2)) == ProbVec.uniform([0, 2], Z)
    assert normalized_restriction(m, set(range(10))) == m
    with pytest.raises(ZeroMass):
        normalized_restriction(m, lambda x: x > 100)


# --- coset lifts -----------------------------------------------------------------


def test_finite_normal_lift_z4():
    from cubemeans.groups import CyclicCtx

    z4 = CyclicCtx(4)
    n = FiniteSubgroup(z4, [0, 2], "even residues")
    m0 = ProbVec.delta(1, z4)  # the coset 1 + N, represented by 1
    lifted = finite_normal_lift(m0, n, z4)
    assert lifted == ProbVec.uniform([1, 3], z4)


def test_finite_normal_lift_trivial_subgroup(sym3):
    n = TrivialSubgroup(sym3)
    m0 = ProbVec.uniform(sym3.elements()[:3], sym3)
    assert finite_normal_lift(m0, n, sym3) == m0


def test_lift_then_project_round_trip(sym4):
    rnd = random.Random(6)
    subs = [s for s in all_subgroups(sym4) if 1 < len(s) < 24]
    for _ in range(300):
        elems = sorted(rnd.choice(subs))
        n = FiniteSubgroup(sym4, elems)
        reps = sorted(
            {coset_label(g, n, sym4) for g in sym4.elements()}, key=sym4.sort_key
        )
        m0 = _random_vec(rnd, reps, sym4, k=3)
        lifted = finite_normal_lift(m0, n, sym4)
        projected = pushforward(lambda x: coset_label(x, n, sym4), lifted, sym4)
        assert projected == m0


def test_transversal_average_single_coset(sym3):
    m = ProbVec.uniform(sym3.elements()[:2], sym3)
    w = ProbVec.delta(sym3.identity, sym3)
    assert transversal_average(m, w) == m


def test_transversal_average_point_mass_is_conjugate(sym3):
    m = ProbVec.uniform(sym3.elements()[:2], sym3)
    g = sym3.elements()[4]
    w = ProbVec.delta(g, sym3)
    assert transversal_average(m, w) == conjugate_push(g, m)


def test_transversal_average_normal_subgroup(sym3):
    # oracle: A3 is normal, so averaging the uniform vector over coset
    # representatives returns the uniform vector on A3
    a3 = sorted(next(s for s in all_subgroups(sym3) if len(s) == 3))
    m_h = ProbVec.uniform(a3, sym3)
    rep_other = next(g for g in sym3.elements() if g not in a3)
    w = ProbVec.uniform([sym3.identity, rep_other], sym3)
    assert transversal_average(m_h, w) == m_h


# --- defects --------------------------------------------------------------------


def test_defect_range(free23):
    rnd = random.Random(7)
    gens = free23.generators()
    for _ in range(100):
        m = _random_vec(rnd, free23.ball(3), free23)
        d = Defect.of(m, gens)
        for v in d.per_generator.values():
            assert 0 <= v <= 2
        assert d.max == max(d.per_generator.values())


def test_l1_distance_symmetric(Z):
    m = ProbVec.uniform([0, 1], Z)
    n = ProbVec.uniform([1, 2], Z)
    assert l1_distance(m, n) == l1_distance(n, m) == 1
