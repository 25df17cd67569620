"""Cyclic groups, the integers, and finite groups given by multiplication tables."""

from __future__ import annotations

from typing import Any, Sequence

from ..errors import LetterOutsideAlphabet, NonGroupTable
from .base import Elt, GroupCtx


class CyclicCtx(GroupCtx):
    """Z/n with elements 0..n-1 and generators {1, n-1}."""

    kind = "cyclic"

    def __init__(self, order: int):
        if order < 1:
            raise NonGroupTable("cyclic order must be >= 1", "order")
        self.order = order

    @property
    def identity(self) -> Elt:
        return 0

    def multiply(self, a, b):
        return (a + b) % self.order

    def invert(self, a):
        return (-a) % self.order

    def canonicalize_word(self, letters: Sequence[Any]) -> Elt:
        total = 0
        for x in letters:
            if not isinstance(x, int):
                raise LetterOutsideAlphabet(f"cyclic letter must be int, got {x!r}")
            total += x
        return total % self.order

    def generators(self) -> list[Elt]:
        if self.order == 1:
            return []
        return sorted({1 % self.order, (self.order - 1) % self.order})

    def sort_key(self, a):
        return a

    def elements(self) -> list[Elt]:
        return list(range(self.order))

    def elt_to_json(self, a):
        return a

    def elt_from_json(self, doc):
        a = int(doc)
        if not 0 <= a < self.order:
            raise LetterOutsideAlphabet(f"{doc!r} not a residue mod {self.order}")
        return a

    def describe(self) -> str:
        return f"Z/{self.order}"


class IntegersCtx(GroupCtx):
    """Z with generators {+1, -1}; word length is |n|."""

    kind = "integers"

    @property
    def identity(self) -> Elt:
        return 0

    def multiply(self, a, b):
        return a + b

    def invert(self, a):
        return -a

    def canonicalize_word(self, letters: Sequence[Any]) -> Elt:
        total = 0
        for x in letters:
            if not isinstance(x, int):
                raise LetterOutsideAlphabet(f"integer letter must be int, got {x!r}")
            total += x
        return total

    def generators(self) -> list[Elt]:
        return [-1, 1]

    def sort_key(self, a):
        return (abs(a), 0 if a >= 0 else 1)

    def elt_to_json(self, a):
        return a

    def elt_from_json(self, doc):
        return int(doc)

    def describe(self) -> str:
        return "Z"


class TableCtx(GroupCtx):
    """A finite group presented by a full multiplication table.

    Elements are indices into ``labels``.  The table is verified on
    construction: Latin square, two-sided identity, inverses, and full
    associativity.  Generators are all non-identity elements.
    """

    kind = "table"

    def __init__(self, labels: Sequence[str], mul: Sequence[Sequence[int]]):
        n = len(labels)
        if n == 0:
            raise NonGroupTable("empty element list", "elements")
        if len(set(labels)) != n:
            raise NonGroupTable("duplicate element labels", "elements")
        if len(mul) != n or any(len(row) != n for row in mul):
            raise NonGroupTable(f"mul table must be {n}x{n}", "mul")
        for i, row in enumerate(mul):
            for j, v in enumerate(row):
                if not isinstance(v, int) or not 0 <= v < n:
                    raise NonGroupTable(
                        f"entry {v!r} out of range", f"mul[{i}][{j}]"
                    )
        for i in range(n):
            if len(set(mul[i])) != n:
                raise NonGroupTable("row is not a permutation", f"mul[{i}]")
            if len({mul[j][i] for j in range(n)}) != n:
                raise NonGroupTable("column is not a permutation", f"mul[.][{i}]")
        ident = None
        for e in range(n):
            if all(mul[e][j] == j and mul[j][e] == j for j in range(n)):
                ident = e
                break
        if ident is None:
            raise NonGroupTable("no two-sided identity", "mul")
        self._id = ident
        inv = [None] * n
        for i in range(n):
            for j in range(n):
                if mul[i][j] == ident and mul[j][i] == ident:
                    inv[i] = j
                    break
            if inv[i] is None:
                raise NonGroupTable("element has no inverse", f"mul[{i}]")
        for a in range(n):
            for b in range(n):
                ab = mul[a][b]
                for c in range(n):
                    if mul[ab][c] != mul[a][mul[b][c]]:
                        raise NonGroupTable(
                            "table is not associative", f"mul[{a}][{b}][{c}]"
                        )
        self.labels = list(labels)
        self.mul_table = [list(row) for row in mul]
        self._inv = inv
        self.order = n

    @property
    def identity(self) -> Elt:
        return self._id

    def multiply(self, a, b):
        return self.mul_table[a][b]

    def invert(self, a):
        return self._inv[a]

    def canonicalize_word(self, letters: Sequence[Any]) -> Elt:
        out = self._id
        for x in letters:
            if not isinstance(x, int) or not 0 <= x < self.order:
                raise LetterOutsideAlphabet(f"{x!r} not a table index")
            out = self.mul_table[out][x]
        return out

    def generators(self) -> list[Elt]:
        return [i for i in range(self.order) if i != self._id]

    def sort_key(self, a):
        return a

    def elements(self) -> list[Elt]:
        return list(range(self.order))

    def elt_to_json(self, a):
        return a

    def elt_from_json(self, doc):
        a = int(doc)
        if not 0 <= a < self.order:
            raise LetterOutsideAlphabet(f"{doc!r} not a table index")
        return a

    def describe(self) -> str:
        return f"table group of order {self.order}"

    def is_abelian(self) -> bool:
        return all(
            self.mul_table[a][b] == self.mul_table[b][a]
            for a in range(self.order)
            for b in range(self.order)
        )


def subgroup_closure(ctx: TableCtx, gens: Sequence[int]) -> frozenset[int]:
    """The subgroup of a table group generated by ``gens``."""
    seen = {ctx.identity}
    frontier = [ctx.identity]
    gens = list(gens) + [ctx.invert(g) for g in gens]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = ctx.multiply(a, g)
                if b not in seen:
                    seen.add(b)
                    nxt.append(b)
        frontier = nxt
    return frozenset(seen)


def all_subgroups(ctx: TableCtx) -> list[frozenset[int]]:
    """Every subgroup of a finite table group, by iterated closure."""
    subs = {frozenset({ctx.identity})}
    for g in range(ctx.order):
        subs.add(subgroup_closure(ctx, [g]))
    changed = True
    while changed:
        changed = False
        current = list(subs)
        for s in current:
            for g in range(ctx.order):
                if g in s:
                    continue
                bigger = subgroup_closure(ctx, list(s) + [g])
                if bigger not in subs:
                    subs.add(bigger)
                    changed = True
    return sorted(subs, key=lambda s: (len(s), sorted(s)))


def is_subgroup(ctx: TableCtx, elems: Sequence[int]) -> bool:
    s = set(elems)
    if ctx.identity not in s:
        return False
    return all(ctx.multiply(a, b) in s for a in s for b in s) and all(
        ctx.invert(a) in s for a in s
    )
