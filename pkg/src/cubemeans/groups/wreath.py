"""Restricted wreath products (direct sum of copies of H, permuted by K)."""

from __future__ import annotations

from typing import Any, Hashable, Sequence

from ..errors import LetterOutsideAlphabet, SchemaError
from .base import Elt, GroupCtx
from .finite import CyclicCtx, IntegersCtx, TableCtx


class WreathAction:
    """Action of K on the point set X."""

    def __init__(self, kctx: GroupCtx, kind: str, points: Sequence[Hashable] | None = None,
                 perms: dict | None = None):
        self.kctx = kctx
        self.kind = kind
        if kind == "regular":
            self.points = None
        elif kind == "finite":
            if not points:
                raise SchemaError("finite action needs a nonempty point list", "x.points")
            self.points = list(points)
            self.perms = perms or {}
            n = len(self.points)
            for k, p in self.perms.items():
                if sorted(p) != list(range(n)):
                    raise SchemaError("action entry is not a permutation", f"x.perms[{k}]")
        else:
            raise SchemaError(f"unknown action type {kind!r}", "x.type")

    def base_point(self):
        if self.kind == "regular":
            return self.kctx.identity
        return 0

    def act(self, k: Elt, x):
        if self.kind == "regular":
            return self.kctx.multiply(k, x)
        if isinstance(self.kctx, CyclicCtx):
            p = self.perms[1]
            y = x
            for _ in range(k % self.kctx.order):
                y = p[y]
            return y
        if isinstance(self.kctx, IntegersCtx):
            p = self.perms[1]
            y = x
            if k >= 0:
                for _ in range(k):
                    y = p[y]
            else:
                inv = [0] * len(p)
                for i, v in enumerate(p):
                    inv[v] = i
                for _ in range(-k):
                    y = inv[y]
            return y
        return self.perms[k][x]

    def point_key(self, x):
        if self.kind == "regular":
            return self.kctx.sort_key(x)
        return x

    def is_finite(self) -> bool:
        if self.kind == "finite":
            return True
        return isinstance(self.kctx, (CyclicCtx, TableCtx))

    def validate_homomorphism(self) -> None:
        if self.kind != "finite":
            return
        if isinstance(self.kctx, (CyclicCtx, IntegersCtx)):
            if 1 not in self.perms:
                raise SchemaError("cyclic action needs the generator's permutation", "x.perms")
            return
        if not isinstance(self.kctx, TableCtx):
            raise SchemaError("finite action needs a cyclic or table acting group", "x")
        n = self.kctx.order
        for k in range(n):
            if k not in self.perms:
                raise SchemaError("action must list every element", f"x.perms[{k}]")
        for a in range(n):
            for b in range(n):
                ab = self.kctx.multiply(a, b)
                pa, pb, pab = self.perms[a], self.perms[b], self.perms[ab]
                if any(pa[pb[i]] != pab[i] for i in range(len(pa))):
                    raise SchemaError("action is not a homomorphism", f"x.perms[{a}]")


class WreathCtx(GroupCtx):
    """Elements are (finitely supported function X -> H, element of K)."""

    kind = "wreath"

    def __init__(self, hctx: GroupCtx, kctx: GroupCtx, action: WreathAction):
        self.h = hctx
        self.k = kctx
        self.action = action
        action.validate_homomorphism()

    @property
    def identity(self) -> Elt:
        return ((), self.k.identity)

    def _sorted_support(self, pairs) -> tuple:
        items = [(x, h) for (x, h) in pairs if h != self.h.identity]
        items.sort(key=lambda p: self.action.point_key(p[0]))
        return tuple(items)

    def multiply(self, a, b):
        f1, k1 = a
        f2, k2 = b
        acc = {x: h for (x, h) in f1}
        for x, h in f2:
            y = self.action.act(k1, x)
            if y in acc:
                acc[y] = self.h.multiply(acc[y], h)
            else:
                acc[y] = h
        return (self._sorted_support(acc.items()), self.k.multiply(k1, k2))

    def invert(self, a):
        f, k = a
        kinv = self.k.invert(k)
        pairs = [(self.action.act(kinv, x), self.h.invert(h)) for (x, h) in f]
        return (self._sorted_support(pairs), kinv)

    def canonicalize_word(self, letters: Sequence[Any]) -> Elt:
        """Letters: ("lamp", point, h-element) or ("move", k-element)."""
        out = self.identity
        for letter in letters:
            if not isinstance(letter, (tuple, list)) or not letter:
                raise LetterOutsideAlphabet(f"bad letter {letter!r}")
            if letter[0] == "lamp":
                _, x, h = letter
                step = (((x, self.h.elt_from_json(h)),), self.k.identity)
                step = (self._sorted_support(step[0]), step[1])
            elif letter[0] == "move":
                step = ((), self.k.elt_from_json(letter[1]))
            else:
                raise LetterOutsideAlphabet(f"unknown letter kind {letter[0]!r}")
            out = self.multiply(out, step)
        return out

    def generators(self) -> list[Elt]:
        x0 = self.action.base_point()
        gens = [(((x0, h),), self.k.identity) for h in self.h.generators()]
        gens += [((), k) for k in self.k.generators()]
        return gens

    def sort_key(self, a):
        f, k = a
        return (
            len(f),
            self.k.sort_key(k),
            tuple((self.action.point_key(x), self.h.sort_key(h)) for (x, h) in f),
        )

    def elt_to_json(self, a):
        f, k = a
        return {
            "lamps": [[self._point_to_json(x), self.h.elt_to_json(h)] for (x, h) in f],
            "k": self.k.elt_to_json(k),
        }

    def elt_from_json(self, doc):
        pairs = [
            (self._point_from_json(x), self.h.elt_from_json(h))
            for x, h in doc["lamps"]
        ]
        return (self._sorted_support(pairs), self.k.elt_from_json(doc["k"]))

    def _point_to_json(self, x):
        return self.k.elt_to_json(x) if self.action.kind == "regular" else x

    def _point_from_json(self, x):
        return self.k.elt_from_json(x) if self.action.kind == "regular" else int(x)

    def describe(self) -> str:
        return f"wreath product ({self.h.describe()} over {self.k.describe()})"

    # --- structure queries ------------------------------------------------

    def in_base_sum(self, g: Elt) -> bool:
        return g[1] == self.k.identity

    def in_top_group(self, g: Elt) -> bool:
        return len(g[0]) == 0

    def support(self, g: Elt) -> list:
        return [x for (x, _) in g[0]]
