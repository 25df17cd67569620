"""Subgroup descriptions with total, decidable membership tests."""

from __future__ import annotations

from typing import Callable, Iterable, Sequence

from .amalgams import AmalgamCtx, HnnCtx
from .base import Elt, GroupCtx
from .finite import CyclicCtx, IntegersCtx
from .graph_products import GraphProductCtx
from .wreath import WreathCtx


class Subgrp:
    """A subgroup given by a description; membership is always decidable."""

    description: str = "subgroup"

    def contains(self, g: Elt) -> bool:
        raise NotImplementedError

    def elements(self) -> list[Elt]:
        """Finite element list, when the description is finite."""
        raise ValueError(f"{self.description} has no finite element list")

    def is_finite(self) -> bool:
        return False


class FiniteSubgroup(Subgrp):
    def __init__(self, ctx: GroupCtx, elems: Iterable[Elt], description: str = ""):
        self.ctx = ctx
        self._elems = sorted(set(elems), key=ctx.sort_key)
        self._set = set(self._elems)
        self.description = description or f"finite subgroup of order {len(self._elems)}"

    def contains(self, g):
        return g in self._set

    def elements(self):
        return list(self._elems)

    def is_finite(self):
        return True


class TrivialSubgroup(FiniteSubgroup):
    def __init__(self, ctx: GroupCtx):
        super().__init__(ctx, [ctx.identity], "trivial subgroup")


class IndexSubgroup(Subgrp):
    """dZ inside Z, or the subgroup of multiples of d in Z/n (d | n)."""

    def __init__(self, ctx: CyclicCtx | IntegersCtx, d: int):
        if d <= 0:
            raise ValueError("d must be positive")
        if isinstance(ctx, CyclicCtx) and ctx.order % d != 0:
            raise ValueError("d must divide the order")
        self.ctx = ctx
        self.d = d
        self.description = f"{d}Z" if isinstance(ctx, IntegersCtx) else f"<{d}> in Z/{ctx.order}"

    def contains(self, g):
        return g % self.d == 0

    def elements(self):
        if isinstance(self.ctx, CyclicCtx):
            return list(range(0, self.ctx.order, self.d))
        raise ValueError("dZ is infinite")

    def is_finite(self):
        return isinstance(self.ctx, CyclicCtx)


class VertexSubgroup(Subgrp):
    """G_S <= a graph product: elements whose syllables lie in S."""

    def __init__(self, ctx: GraphProductCtx, s_labels: Sequence[str]):
        self.ctx = ctx
        self.s = frozenset(ctx.vindex[v] for v in s_labels)
        self.description = f"vertex subgroup on {sorted(s_labels)}"

    def contains(self, g):
        return all(v in self.s for (v, _) in g)

    def elements(self):
        return self.ctx.subgroup_elements(self.s)

    def is_finite(self):
        return all(hasattr(self.ctx.vctx[v], "elements") for v in self.s)


class EdgeSubgroup(Subgrp):
    """The amalgamated (or associated) subgroup of an amalgam or HNN context."""

    def __init__(self, ctx: AmalgamCtx | HnnCtx):
        self.ctx = ctx
        self.description = "edge subgroup"

    def contains(self, g):
        return self.ctx.in_edge_subgroup(g)

    def elements(self):
        return self.ctx.edge_subgroup_elements()

    def is_finite(self):
        return True


class BaseSumSubgroup(Subgrp):
    """The direct-sum normal subgroup of a wreath product."""

    def __init__(self, ctx: WreathCtx):
        self.ctx = ctx
        self.description = "coordinate direct sum"

    def contains(self, g):
        return self.ctx.in_base_sum(g)


class TopSubgroup(Subgrp):
    """The acting group inside a wreath product."""

    def __init__(self, ctx: WreathCtx):
        self.ctx = ctx
        self.description = "acting subgroup"

    def contains(self, g):
        return self.ctx.in_top_group(g)


class ConjugateSubgroup(Subgrp):
    """g S g^-1 for a given subgroup description."""

    def __init__(self, ctx: GroupCtx, g: Elt, inner: Subgrp):
        self.ctx = ctx
        self.g = g
        self.inner = inner
        self.description = f"conjugate of ({inner.description})"

    def contains(self, x):
        ginv = self.ctx.invert(self.g)
        return self.inner.contains(self.ctx.multiply(self.ctx.multiply(ginv, x), self.g))

    def elements(self):
        return sorted(
            (self.ctx.conjugate(self.g, x) for x in self.inner.elements()),
            key=self.ctx.sort_key,
        )

    def is_finite(self):
        return self.inner.is_finite()


class CentralizerSubgroup(Subgrp):
    """C_G(S) for a finite set S, as a membership test."""

    def __init__(self, ctx: GroupCtx, s: Iterable[Elt]):
        self.ctx = ctx
        self.s = list(s)
        self.description = f"centralizer of {len(self.s)} elements"

    def contains(self, g):
        return all(self.ctx.commutes(g, x) for x in self.s)


class KernelSubgroup(Subgrp):
    """Kernel of an explicit homomorphism given as a callable to labels."""

    def __init__(self, ctx: GroupCtx, hom: Callable[[Elt], object], trivial_label, description: str = ""):
        self.ctx = ctx
        self.hom = hom
        self.trivial = trivial_label
        self.description = description or "kernel subgroup"

    def contains(self, g):
        return self.hom(g) == self.trivial
