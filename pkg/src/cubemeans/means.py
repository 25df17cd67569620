"""Finitely supported probability vectors and their exact calculus.

A ProbVec is the finitary stand-in for a mean: nonnegative masses on
canonical elements summing to one.  Two arithmetic modes are supported:
exact rationals (the default; every inequality check is then exact) and
floats (used by the LP search).  Vectors are immutable and every operation
returns a fresh vector.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Hashable, Iterable, Mapping

from .errors import MixedContexts, PartialMap, ZeroMass
from .groups.base import Elt, GroupCtx
from .groups.subgroups import Subgrp

EXACT = "exact"
FLOAT = "float"
FLOAT_TOL = 1e-12


def _coerce(value, mode: str):
    if mode == EXACT:
        return value if isinstance(value, Fraction) else Fraction(value)
    return float(value)


class ProbVec:
    """Finitely supported probability vector on canonical elements (or labels)."""

    __slots__ = ("ctx", "mass", "mode")

    def __init__(self, mass: Mapping[Hashable, object], ctx: GroupCtx | None = None,
                 mode: str = EXACT, _validated: bool = False):
        if mode not in (EXACT, FLOAT):
            raise ValueError(f"unknown arithmetic mode {mode!r}")
        cleaned = {}
        for x, m in mass.items():
            v = _coerce(m, mode)
            if v < 0:
                raise ValueError(f"negative mass at {x!r}")
            if v != 0:
                cleaned[x] = v
        self.ctx = ctx
        self.mass = cleaned
        self.mode = mode
        if not _validated:
            total = sum(cleaned.values())
            if mode == EXACT:
                if total != 1:
                    raise ValueError(f"total mass {total} != 1")
            elif abs(total - 1.0) > FLOAT_TOL:
                raise ValueError(f"total mass {total} != 1 beyond float tolerance")

    # --- constructors ---------------------------------------------------

    @staticmethod
    def delta(x: Hashable, ctx: GroupCtx | None = None, mode: str = EXACT) -> "ProbVec":
        return ProbVec({x: 1}, ctx, mode)

    @staticmethod
    def uniform(points: Iterable[Hashable], ctx: GroupCtx | None = None,
                mode: str = EXACT) -> "ProbVec":
        pts = list(points)
        if not pts:
            raise ZeroMass("uniform vector needs a nonempty set")
        if mode == EXACT:
            w = Fraction(1, len(pts))
        else:
            w = 1.0 / len(pts)
        return ProbVec({x: w for x in pts}, ctx, mode)

    # --- basics -----------------------------------------------------------

    def __call__(self, x: Hashable):
        zero = Fraction(0) if self.mode == EXACT else 0.0
        return self.mass.get(x, zero)

    def support(self) -> list:
        if self.ctx is not None:
            return sorted(self.mass, key=self.ctx.sort_key)
        return sorted(self.mass, key=repr)

    def set_mass(self, points: Iterable[Hashable] | Callable[[Hashable], bool] | Subgrp):
        """Total mass of a set given as an iterable, predicate, or subgroup."""
        if isinstance(points, Subgrp):
            pred = points.contains
        elif callable(points):
            pred = points
        else:
            s = set(points)
            pred = lambda x: x in s
        return sum((m for x, m in self.mass.items() if pred(x)),
                   Fraction(0) if self.mode == EXACT else 0.0)

    def max_atom(self):
        return max(self.mass.values())

    def __eq__(self, other):
        return (
            isinstance(other, ProbVec)
            and self.mode == other.mode
            and self.mass == other.mass
        )

    def __repr__(self):
        return f"ProbVec({len(self.mass)} atoms, {self.mode})"

    def _require_same(self, other: "ProbVec"):
        if self.ctx is not other.ctx:
            raise MixedContexts("vectors live over different contexts")
        if self.mode != other.mode:
            raise MixedContexts("vectors use different arithmetic modes")


def convolve(m: ProbVec, n: ProbVec) -> ProbVec:
    """(m * n)(x) = sum_g m(g) n(g^-1 x); support inside the product set."""
    m._require_same(n)
    if m.ctx is None:
        raise MixedContexts("convolution needs a group context")
    ctx = m.ctx
    out: dict = {}
    for g, mg in m.mass.items():
        for h, nh in n.mass.items():
            x = ctx.multiply(g, h)
            out[x] = out.get(x, 0) + mg * nh
    return ProbVec(out, ctx, m.mode, _validated=True)


def reverse(m: ProbVec) -> ProbVec:
    """reverse(m)(x) = m(x^-1)."""
    if m.ctx is None:
        raise MixedContexts("reverse needs a group context")
    return ProbVec(
        {m.ctx.invert(x): v for x, v in m.mass.items()},
        m.ctx,
        m.mode,
        _validated=True,
    )


def pushforward(f: Callable[[Hashable], Hashable], m: ProbVec,
                ctx: GroupCtx | None = None) -> ProbVec:
    """Mass of a label is the total mass of its preimage; f must cover the support."""
    out: dict = {}
    for x, v in m.mass.items():
        try:
            y = f(x)
        except Exception as exc:
            raise PartialMap(f"map undefined at {x!r}: {exc}") from exc
        if y is None:
            raise PartialMap(f"map undefined at {x!r}")
        out[y] = out.get(y, 0) + v
    return ProbVec(out, ctx, m.mode, _validated=True)


def conjugate_push(g: Elt, m: ProbVec) -> ProbVec:
    """Pushforward of m under x -> g x g^-1."""
    if m.ctx is None:
        raise MixedContexts("conjugation needs a group context")
    ctx = m.ctx
    return pushforward(lambda x: ctx.conjugate(g, x), m, ctx)


def normalized_restriction(m: ProbVec, points) -> ProbVec:
    """m conditioned on a set (iterable, predicate, or subgroup); errors on mass zero."""
    if isinstance(points, Subgrp):
        pred = points.contains
    elif callable(points):
        pred = points
    else:
        s = set(points)
        pred = lambda x: x in s
    kept = {x: v for x, v in m.mass.items() if pred(x)}
    total = sum(kept.values())
    if total == 0:
        raise ZeroMass("restriction set has mass zero")
    return ProbVec({x: v / total for x, v in kept.items()}, m.ctx, m.mode,
                   _validated=True)


def l1_distance(m: ProbVec, n: ProbVec):
    m._require_same(n)
    zero = Fraction(0) if m.mode == EXACT else 0.0
    total = zero
    for x in set(m.mass) | set(n.mass):
        total += abs(m(x) - n(x))
    return total


def finite_normal_lift(m0: ProbVec, n_sub: Subgrp, ctx: GroupCtx) -> ProbVec:
    """Spread each coset's mass uniformly over the coset of a finite subgroup.

    ``m0`` must be supported on coset representatives; the result pushes
    forward to ``m0`` along the coset map.
    """
    elems = n_sub.elements()
    size = len(elems)
    out: dict = {}
    for rep, v in m0.mass.items():
        share = v / size
        for h in elems:
            x = ctx.multiply(rep, h)
            out[x] = out.get(x, 0) + share
    return ProbVec(out, ctx, m0.mode, _validated=True)


def coset_label(x: Elt, n_sub: Subgrp, ctx: GroupCtx) -> Elt:
    """Canonical representative (least element) of the coset x * N."""
    return min((ctx.multiply(x, h) for h in n_sub.elements()), key=ctx.sort_key)


def transversal_average(m_h: ProbVec, weights: ProbVec) -> ProbVec:
    """sum over coset representatives g of weights(g) * (g m_h g^-1)."""
    if m_h.ctx is None:
        raise MixedContexts("transversal average needs a group context")
    ctx = m_h.ctx
    out: dict = {}
    for g, w in weights.mass.items():
        moved = conjugate_push(g, m_h)
        for x, v in moved.mass.items():
            out[x] = out.get(x, 0) + w * v
    return ProbVec(out, ctx, m_h.mode, _validated=True)


class Defect:
    """Per-generator conjugation displacement of a vector."""

    def __init__(self, per_generator: dict, summary_max):
        self.per_generator = per_generator
        self.max = summary_max

    @staticmethod
    def of(m: ProbVec, gens: Iterable[Elt]) -> "Defect":
        per = {}
        worst = Fraction(0) if m.mode == EXACT else 0.0
        for g in gens:
            d = l1_distance(conjugate_push(g, m), m)
            per[g] = d
            worst = max(worst, d)
        return Defect(per, worst)
