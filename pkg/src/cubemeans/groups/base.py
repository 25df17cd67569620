"""Group contexts: exact, canonical-form arithmetic with a uniform interface.

Every context owns a canonical encoding of its elements as hashable Python
values (ints and nested tuples).  Two words represent the same group element
iff they canonicalize to equal values, so equality and hashing of elements
are plain value equality.  Contexts are immutable after construction and all
operations are pure.
"""

from __future__ import annotations

from typing import Any, Hashable, Iterable, Sequence

from ..errors import CapExceeded

Elt = Hashable

DEFAULT_CAP = 10**6


class GroupCtx:
    """Base interface for a realized group.

    Subclasses define ``identity``, ``multiply``, ``invert``,
    ``canonicalize_word``, ``generators`` and a deterministic ``sort_key``.
    """

    kind: str = "abstract"

    @property
    def identity(self) -> Elt:
        raise NotImplementedError

    def multiply(self, a: Elt, b: Elt) -> Elt:
        raise NotImplementedError

    def invert(self, a: Elt) -> Elt:
        raise NotImplementedError

    def canonicalize_word(self, letters: Sequence[Any]) -> Elt:
        """Canonical element of a product of letters; letter syntax is per kind."""
        raise NotImplementedError

    def generators(self) -> list[Elt]:
        """The declared generating set (closed under inverses)."""
        raise NotImplementedError

    def sort_key(self, a: Elt):
        """Total order on canonical elements; deterministic across runs."""
        raise NotImplementedError

    def is_identity(self, a: Elt) -> bool:
        return a == self.identity

    def conjugate(self, g: Elt, x: Elt) -> Elt:
        """g x g^-1."""
        return self.multiply(self.multiply(g, x), self.invert(g))

    def commutes(self, a: Elt, b: Elt) -> bool:
        return self.multiply(a, b) == self.multiply(b, a)

    def power(self, a: Elt, n: int) -> Elt:
        if n < 0:
            return self.power(self.invert(a), -n)
        out = self.identity
        for _ in range(n):
            out = self.multiply(out, a)
        return out

    def element_order(self, a: Elt, cutoff: int = 10**4) -> int | None:
        """Order of ``a``, or None if it exceeds ``cutoff``."""
        x = a
        for n in range(1, cutoff + 1):
            if self.is_identity(x):
                return n
            x = self.multiply(x, a)
        return None

    # --- serialization hooks (per kind) -------------------------------

    def elt_to_json(self, a: Elt) -> Any:
        raise NotImplementedError

    def elt_from_json(self, doc: Any) -> Elt:
        raise NotImplementedError

    def describe(self) -> str:
        return self.kind

    # --- word-metric balls ---------------------------------------------

    def ball(self, radius: int, cap: int = DEFAULT_CAP) -> list[Elt]:
        """All elements of word length <= radius, in deterministic order.

        Word length is measured in the declared generating set.  BFS layer
        by layer; each layer sorted by ``sort_key``.  Raises CapExceeded
        rather than truncating silently.
        """
        if radius < 0:
            raise ValueError("radius must be >= 0")
        gens = self.generators()
        seen = {self.identity}
        out = [self.identity]
        frontier = [self.identity]
        for _ in range(radius):
            nxt = []
            for g in frontier:
                for s in gens:
                    h = self.multiply(g, s)
                    if h not in seen:
                        seen.add(h)
                        nxt.append(h)
                        if len(seen) > cap:
                            raise CapExceeded(cap, len(seen))
            nxt.sort(key=self.sort_key)
            out.extend(nxt)
            frontier = nxt
            if not frontier:
                break
        return out

    def ball_with_distances(
        self, radius: int, cap: int = DEFAULT_CAP
    ) -> tuple[list[Elt], dict[Elt, int]]:
        elems = self.ball(radius, cap)
        dist: dict[Elt, int] = {}
        # Recompute layers: identity at 0, then BFS again (cheap, reuses ball).
        gens = self.generators()
        dist[self.identity] = 0
        frontier = [self.identity]
        d = 0
        while frontier and d < radius:
            d += 1
            nxt = []
            for g in frontier:
                for s in gens:
                    h = self.multiply(g, s)
                    if h not in dist:
                        dist[h] = d
                        nxt.append(h)
            frontier = nxt
        return elems, dist


def conjugacy_class(
    g: Elt, ctx: GroupCtx, bound: int, cap: int = DEFAULT_CAP
) -> list[Elt]:
    """{h g h^-1 : |h| <= bound}, canonical, deduplicated, sorted.

    Bound-parameterized: over infinite groups this is the bounded shadow of
    the full conjugacy class, monotone in ``bound``.
    """
    if bound < 0:
        raise ValueError("bound must be >= 0")
    out = {ctx.conjugate(h, g) for h in ctx.ball(bound, cap)}
    if len(out) > cap:
        raise CapExceeded(cap, len(out))
    return sorted(out, key=ctx.sort_key)


def centralizer(ctx: GroupCtx, S: Iterable[Elt], domain: Iterable[Elt]) -> list[Elt]:
    """{g in domain : gs = sg for all s in S}."""
    S = list(S)
    return [g for g in domain if all(ctx.commutes(g, s) for s in S)]


def relative_centralizer_mod(
    ctx: GroupCtx,
    M: Sequence[Elt],
    S: Iterable[Elt],
    domain: Iterable[Elt],
) -> list[Elt]:
    """{g in domain : g(sM)g^-1 = sM for all s in S}, with M a finite subgroup.

    Cosets are compared as element sets, so M must be given by its full
    (finite) element list.
    """
    M = list(M)
    S = list(S)
    cosets = [frozenset(ctx.multiply(s, m) for m in M) for s in S]
    out = []
    for g in domain:
        ginv = ctx.invert(g)
        ok = True
        for s, sM in zip(S, cosets):
            moved = frozenset(
                ctx.multiply(ctx.multiply(g, x), ginv) for x in sM
            )
            if moved != sM:
                ok = False
                break
        if ok:
            out.append(g)
    return out
