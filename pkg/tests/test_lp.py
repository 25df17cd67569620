from __future__ import annotations

import pytest

from conftest import Z2, graph_product_spec
from cubemeans.groups import CyclicCtx, TrivialSubgroup, VertexSubgroup, parse_group_spec
from cubemeans.lp_search import FEASIBLE, INFEASIBLE, LpBackend, lp_mean_search


@pytest.fixture(scope="module")
def f2():
    return parse_group_spec(
        graph_product_spec(["x", "y"], [], {"x": {"kind": "integers"}, "y": {"kind": "integers"}})
    )


def exact_invariance_oracle(ctx, carrier, conj_set, forbidden, delta):
    """Independent feasibility test for epsilon = 0.

    With zero displacement allowed, any solution is constant on conjugation
    orbits inside the carrier and vanishes on orbits that leave it.  Checks
    whether the surviving mass can reach one under the atom bound.
    """
    carrier = list(carrier)
    index = {x: i for i, x in enumerate(carrier)}
    parent = list(range(len(carrier)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    dead = set()
    for k in conj_set:
        for x in carrier:
            y = ctx.conjugate(k, x)
            if y in index:
                ri, rj = find(index[x]), find(index[y])
                if ri != rj:
                    parent[ri] = rj
            else:
                dead.add(find(index[x]))
    orbits = {}
    for i in range(len(carrier)):
        orbits.setdefault(find(i), []).append(i)
    usable = 0.0
    for root, members in orbits.items():
        if find(root) in {find(d) for d in dead}:
            continue
        if any(carrier[i] in forbidden for i in members):
            continue
        usable += len(members) * delta
    return usable >= 1.0 - 1e-9


def test_free_group_ball_infeasible(f2):
    carrier = f2.ball(2)
    gens = [f2.canonicalize_word([("x", 1)]), f2.canonicalize_word([("y", 1)])]
    res = lp_mean_search(f2, carrier, gens, epsilon=0.0, delta=0.4,
                         forbidden=[f2.identity])
    assert res.status == INFEASIBLE
    assert res.certificate["carrier_relative"] is True
    # oracle agrees
    assert not exact_invariance_oracle(f2, carrier, gens, {f2.identity}, 0.4)


def test_abelian_carrier_feasible():
    z5 = CyclicCtx(5)
    res = lp_mean_search(z5, z5.elements(), [1, 2], epsilon=0.0, delta=0.2)
    assert res.status == FEASIBLE
    assert res.vector is not None
    assert abs(sum(res.vector.mass.values()) - 1) < 1e-9
    assert max(res.vector.mass.values()) <= 0.2 + 1e-9


def test_vacuous_constraints_feasible(f2):
    carrier = f2.ball(2)
    gens = [f2.canonicalize_word([("x", 1)])]
    res = lp_mean_search(f2, carrier, gens, epsilon=2.0, delta=1.0)
    assert res.status == FEASIBLE


def test_concentrate_constraint(f2):
    carrier = f2.ball(2)
    sub = VertexSubgroup(f2, ["x"])
    res = lp_mean_search(f2, carrier, [], epsilon=2.0, delta=1.0, concentrate=sub)
    assert res.status == FEASIBLE
    assert all(sub.contains(g) for g in res.vector.mass)


def test_forbidden_respected(f2):
    carrier = f2.ball(1)
    res = lp_mean_search(f2, carrier, [], epsilon=2.0, delta=1.0,
                         forbidden=[f2.identity])
    assert res.status == FEASIBLE
    assert f2.identity not in res.vector.mass


def test_oracle_cross_validation_grid(f2):
    carrier = f2.ball(2)
    gens = [f2.canonicalize_word([("x", 1)]), f2.canonicalize_word([("y", 1)])]
    for delta in (0.05, 0.2, 1.0):
        for forbidden in ([], [f2.identity]):
            res = lp_mean_search(f2, carrier, gens, epsilon=0.0, delta=delta,
                                 forbidden=forbidden)
            expect = exact_invariance_oracle(f2, carrier, gens, set(forbidden), delta)
            assert (res.status == FEASIBLE) == expect, (delta, forbidden)


def test_custom_backend_interface(f2):
    class RecordingBackend(LpBackend):
        name = "recording"

        def __init__(self):
            self.called = False

        def solve(self, n_vars, a_ub, b_ub, a_eq, b_eq, bounds):
            self.called = True
            return "unknown", None

    backend = RecordingBackend()
    res = lp_mean_search(f2, f2.ball(1), [], epsilon=1.0, delta=1.0, backend=backend)
    assert backend.called
    assert res.status == "unknown"
