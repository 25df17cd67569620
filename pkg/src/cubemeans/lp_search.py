"""LP feasibility probe for nearly conjugation-invariant vectors on a ball.

The probe is carrier-relative by construction: an Infeasible answer rules
out vectors on the given finite carrier under the given boundary
accounting, and says nothing about the infinite group.  Conjugates landing
outside the carrier count their full mass against the displacement, so the
constraint never understates movement.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import linprog

from .groups.base import Elt, GroupCtx
from .groups.subgroups import Subgrp
from .means import FLOAT, ProbVec

FEASIBLE = "feasible"
INFEASIBLE = "infeasible"
UNKNOWN = "unknown"


class LpBackend:
    """Solver interface: feasibility of A_ub x <= b_ub, A_eq x = b_eq, bounds."""

    name = "abstract"

    def solve(self, n_vars, a_ub, b_ub, a_eq, b_eq, bounds):
        raise NotImplementedError


class ScipyBackend(LpBackend):
    name = "scipy-highs"

    def solve(self, n_vars, a_ub, b_ub, a_eq, b_eq, bounds):
        res = linprog(
            c=np.zeros(n_vars),
            A_ub=np.array(a_ub) if a_ub else None,
            b_ub=np.array(b_ub) if b_ub else None,
            A_eq=np.array(a_eq) if a_eq else None,
            b_eq=np.array(b_eq) if b_eq else None,
            bounds=bounds,
            method="highs",
        )
        if res.status == 0:
            return FEASIBLE, res.x
        if res.status == 2:
            return INFEASIBLE, None
        return UNKNOWN, None


@dataclass
class LpResult:
    status: str
    vector: ProbVec | None
    certificate: dict

    @property
    def feasible(self) -> bool:
        return self.status == FEASIBLE


def lp_mean_search(
    ctx: GroupCtx,
    carrier: Sequence[Elt],
    conj_set: Sequence[Elt],
    epsilon: float,
    delta: float,
    forbidden: Sequence[Elt] = (),
    concentrate: Subgrp | None = None,
    backend: LpBackend | None = None,
) -> LpResult:
    """Search for p >= 0 on the carrier with sum 1, atoms <= delta,
    zero mass on ``forbidden``, optional full mass on a subgroup, and
    conjugation displacement <= epsilon for every element of ``conj_set``.
    """
    if epsilon < 0 or delta <= 0:
        raise ValueError("epsilon must be >= 0 and delta > 0")
    backend = backend or ScipyBackend()
    carrier = list(dict.fromkeys(carrier))
    index = {x: i for i, x in enumerate(carrier)}
    n = len(carrier)
    forbidden_set = set(forbidden)

    bounds = []
    for x in carrier:
        hi = 0.0 if x in forbidden_set else min(1.0, float(delta))
        bounds.append((0.0, hi))

    n_vars = n
    a_ub: list[list[float]] = []
    b_ub: list[float] = []
    a_eq: list[list[float]] = [[1.0] * n]
    b_eq: list[float] = [1.0]

    if concentrate is not None:
        row = [1.0 if concentrate.contains(x) else 0.0 for x in carrier]
        a_eq.append(row)
        b_eq.append(1.0)

    defect_rows = []
    for k in conj_set:
        sigma = {}
        exits = []
        for x in carrier:
            y = ctx.conjugate(k, x)
            if y in index:
                sigma[index[x]] = index[y]
            else:
                exits.append(index[x])
        image = set(sigma.values())
        pairs = [(i, j) for i, j in sigma.items() if i != j]
        t_base = n_vars
        n_vars += len(pairs)
        # |p_i - p_j| <= t for moving pairs
        for t_off, (i, j) in enumerate(pairs):
            row = [0.0] * n_vars
            row[i] += 1.0
            row[j] -= 1.0
            row[t_base + t_off] = -1.0
            a_ub.append(row)
            b_ub.append(0.0)
            row2 = [0.0] * n_vars
            row2[i] -= 1.0
            row2[j] += 1.0
            row2[t_base + t_off] = -1.0
            a_ub.append(row2)
            b_ub.append(0.0)
        # total displacement row
        row = [0.0] * n_vars
        for t_off in range(len(pairs)):
            row[t_base + t_off] = 1.0
        for i in exits:
            row[i] += 1.0  # mass leaving the carrier counts fully
        for j in range(n):
            if j not in image:
                row[j] += 1.0  # vacated position: |0 - p_j|
        a_ub.append(row)
        b_ub.append(float(epsilon))
        defect_rows.append(len(a_ub) - 1)

    # pad earlier rows to the final variable count
    width = n_vars
    a_ub = [r + [0.0] * (width - len(r)) for r in a_ub]
    a_eq = [r + [0.0] * (width - len(r)) for r in a_eq]
    bounds.extend([(0.0, 2.0)] * (width - n))

    status, x = backend.solve(width, a_ub, b_ub, a_eq, b_eq, bounds)
    constraints = {
        "carrier_size": n,
        "epsilon": float(epsilon),
        "delta": float(delta),
        "forbidden": len(forbidden_set),
        "conjugators": len(list(conj_set)),
        "concentrate": concentrate.description if concentrate else None,
        "carrier_relative": True,
        "backend": backend.name,
    }
    if status == FEASIBLE:
        masses = {carrier[i]: max(0.0, float(x[i])) for i in range(n)}
        total = sum(masses.values())
        masses = {g: v / total for g, v in masses.items() if v > 1e-15}
        vec = ProbVec(masses, ctx, FLOAT)
        return LpResult(FEASIBLE, vec, constraints)
    if status == INFEASIBLE:
        cert = dict(constraints)
        cert["note"] = (
            "no vector on this carrier meets the constraints under "
            "full-mass boundary accounting; not a statement about the group"
        )
        return LpResult(INFEASIBLE, None, cert)
    return LpResult(UNKNOWN, None, constraints)
