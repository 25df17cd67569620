"""Amalgamated free products and HNN extensions over finite factor tables.

Normal forms use right-coset transversals computed once from the tables,
with the identity representing the subgroup's own coset and the smallest
index representing every other coset.

Amalgam elements are ``(h, reps)``: an edge-subgroup part followed by an
alternating sequence of nontrivial coset representatives, one per factor
letter.  HNN elements are ``(k0, blocks)`` with ``blocks`` a sequence of
``(eps, rep)`` pairs encoding ``k0 t^e1 r1 ... t^en rn``; the representative
after ``t`` lies in a transversal of the edge subgroup, the one after
``t^-1`` in a transversal of its isomorphic image, and no pinch pattern
occurs.  Multiplication prepends letters one at a time, which keeps every
fix-up local.
"""

from __future__ import annotations

from typing import Any, Sequence

from ..errors import LetterOutsideAlphabet, SchemaError
from .base import Elt, GroupCtx
from .finite import TableCtx


def _check_embedding(factor: TableCtx, image: Sequence[int], where: str) -> None:
    if len(set(image)) != len(image):
        raise SchemaError("embedding is not injective", where)
    s = set(image)
    for x in image:
        if not isinstance(x, int) or not 0 <= x < factor.order:
            raise SchemaError(f"index {x!r} out of range", where)
    if factor.identity not in s:
        raise SchemaError("embedded subgroup misses the identity", where)
    for a in s:
        if factor.invert(a) not in s:
            raise SchemaError("embedded subgroup not closed under inverses", where)
        for b in s:
            if factor.multiply(a, b) not in s:
                raise SchemaError("embedded subgroup not closed under the table", where)


def _transversal(factor: TableCtx, sub: Sequence[int]) -> tuple[list[int], list[int], list[int]]:
    """Right-coset data for ``sub`` <= ``factor``.

    Returns (rep, hpos, reps) with ``factor[x] = sub[hpos[x]] * rep[x]`` and
    ``rep[x]`` the coset representative (identity for the subgroup itself,
    least index otherwise).
    """
    sub = list(sub)
    pos = {h: i for i, h in enumerate(sub)}
    rep = [-1] * factor.order
    hpos = [-1] * factor.order
    reps = []
    for x in range(factor.order):
        if rep[x] >= 0:
            continue
        coset = sorted(factor.multiply(h, x) for h in sub)
        r = factor.identity if factor.identity in coset else coset[0]
        reps.append(r)
        rinv = factor.invert(r)
        for y in coset:
            rep[y] = r
            hpos[y] = pos[factor.multiply(y, rinv)]
    return rep, hpos, reps


class AmalgamCtx(GroupCtx):
    """A *_H B with A, B finite table groups and H embedded in both."""

    kind = "amalgam"

    def __init__(
        self,
        a: TableCtx,
        b: TableCtx,
        embed_a: Sequence[int],
        embed_b: Sequence[int],
    ):
        if len(embed_a) != len(embed_b):
            raise SchemaError("subgroup embeddings have different sizes", "embed_b")
        _check_embedding(a, embed_a, "embed_a")
        m = len(embed_a)
        self.a = a
        self.b = b
        self.embed_a = list(embed_a)
        self.embed_b = list(embed_b)
        pos_a = {x: i for i, x in enumerate(embed_a)}
        self.h_order = m
        self.h_mul = [
            [pos_a[a.multiply(embed_a[i], embed_a[j])] for j in range(m)]
            for i in range(m)
        ]
        self.h_inv = [pos_a[a.invert(embed_a[i])] for i in range(m)]
        self.h_id = pos_a[a.identity]
        # embed_b must carry the same abstract structure (the matching iso).
        if len(set(embed_b)) != m:
            raise SchemaError("embedding is not injective", "embed_b")
        for x in embed_b:
            if not isinstance(x, int) or not 0 <= x < b.order:
                raise SchemaError(f"index {x!r} out of range", "embed_b")
        if embed_b[self.h_id] != b.identity:
            raise SchemaError("iso does not send identity to identity", "embed_b")
        for i in range(m):
            for j in range(m):
                if b.multiply(embed_b[i], embed_b[j]) != embed_b[self.h_mul[i][j]]:
                    raise SchemaError("embeddings do not match the iso", "embed_b")
        self._rep = {
            "A": _transversal(a, embed_a),
            "B": _transversal(b, embed_b),
        }
        self.index_a = a.order // m
        self.index_b = b.order // m

    # --- factor helpers ----------------------------------------------------

    def _factor(self, tag: str) -> TableCtx:
        return self.a if tag == "A" else self.b

    def _embed(self, tag: str, h: int) -> int:
        return self.embed_a[h] if tag == "A" else self.embed_b[h]

    def h_multiply(self, i: int, j: int) -> int:
        return self.h_mul[i][j]

    def factor_letter(self, tag: str, idx: int) -> Elt:
        """The group element given by one factor letter."""
        return self.canonicalize_word([(tag, idx)])

    # --- normal form engine --------------------------------------------------

    def _prepend(self, tag: str, idx: int, form: tuple) -> tuple:
        h, reps = form
        factor = self._factor(tag)
        x = factor.multiply(idx, self._embed(tag, h))
        rep, hpos, _ = self._rep[tag]
        r = rep[x]
        h2 = hpos[x]
        if r == factor.identity:
            return (h2, reps)
        if reps and reps[0][0] == tag:
            z = factor.multiply(r, reps[0][1])
            r2 = rep[z]
            h3 = self.h_mul[h2][hpos[z]]
            if r2 == factor.identity:
                return (h3, reps[1:])
            return (h3, ((tag, r2),) + reps[1:])
        return (h2, ((tag, r),) + reps)

    @property
    def identity(self) -> Elt:
        return (self.h_id, ())

    def _letters(self, g: Elt) -> list[tuple[str, int]]:
        h, reps = g
        out = [("A", self.embed_a[h])]
        out.extend(reps)
        return out

    def multiply(self, a, b):
        form = b
        for tag, idx in reversed(self._letters(a)):
            form = self._prepend(tag, idx, form)
        return form

    def invert(self, a):
        h, reps = a
        form = self.identity
        letters = [("A", self.embed_a[self.h_inv[h]])]
        for tag, idx in reps:
            letters.append((tag, self._factor(tag).invert(idx)))
        for tag, idx in letters:  # letters already reversed relative to a
            form = self._prepend(tag, idx, form)
        return form

    def canonicalize_word(self, letters: Sequence[Any]) -> Elt:
        form = self.identity
        for letter in reversed(letters):
            try:
                tag, idx = letter
            except (TypeError, ValueError):
                raise LetterOutsideAlphabet(f"bad letter {letter!r}")
            if tag not in ("A", "B"):
                raise LetterOutsideAlphabet(f"unknown factor {tag!r}")
            factor = self._factor(tag)
            if not isinstance(idx, int) or not 0 <= idx < factor.order:
                raise LetterOutsideAlphabet(f"{idx!r} not in factor {tag}")
            form = self._prepend(tag, idx, form)
        return form

    def generators(self) -> list[Elt]:
        gens = []
        for tag in ("A", "B"):
            factor = self._factor(tag)
            for x in factor.generators():
                gens.append(self.canonicalize_word([(tag, x)]))
        seen = set()
        out = []
        for g in gens:
            if g not in seen and g != self.identity:
                seen.add(g)
                out.append(g)
        return out

    def sort_key(self, a):
        h, reps = a
        return (len(reps), reps, h)

    def elt_to_json(self, a):
        h, reps = a
        return {"h": h, "word": [[tag, idx] for tag, idx in reps]}

    def elt_from_json(self, doc):
        letters = [("A", self.embed_a[int(doc["h"])])]
        letters += [(tag, int(idx)) for tag, idx in doc["word"]]
        return self.canonicalize_word(letters)

    def describe(self) -> str:
        return (
            f"amalgam of orders {self.a.order} and {self.b.order} "
            f"over a subgroup of order {self.h_order}"
        )

    # --- structure queries ----------------------------------------------------

    def in_edge_subgroup(self, g: Elt) -> bool:
        return len(g[1]) == 0

    def syllable_length(self, g: Elt) -> int:
        return len(g[1])

    def first_tag(self, g: Elt) -> str | None:
        return g[1][0][0] if g[1] else None

    def last_tag(self, g: Elt) -> str | None:
        return g[1][-1][0] if g[1] else None

    def edge_subgroup_elements(self) -> list[Elt]:
        return [(h, ()) for h in range(self.h_order)]

    def factor_elements(self, tag: str) -> list[Elt]:
        factor = self._factor(tag)
        return sorted(
            {self.canonicalize_word([(tag, x)]) for x in range(factor.order)},
            key=self.sort_key,
        )

    def is_nondegenerate(self) -> bool:
        return (
            self.index_a >= 2
            and self.index_b >= 2
            and max(self.index_a, self.index_b) >= 3
        )

    def cyclic_reduction(self, g: Elt) -> tuple[Elt, Elt]:
        """(conjugator c, core) with g = c * core * c^-1, core cyclically reduced."""
        conj = self.identity
        core = g
        while True:
            h, reps = core
            n = len(reps)
            if n <= 1 or reps[0][0] != reps[-1][0]:
                return conj, core
            tag, r1 = reps[0]
            x1 = self.canonicalize_word([("A", self.embed_a[h]), (tag, r1)])
            core = self.multiply(self.multiply(self.invert(x1), core), x1)
            conj = self.multiply(conj, x1)

    def core_syllables(self, core: Elt) -> int:
        """Tree-length of a cyclically reduced element (0 when elliptic)."""
        n = len(core[1])
        return 0 if n <= 1 else n


class HnnCtx(GroupCtx):
    """HNN extension of a finite table group, with stable letter t."""

    kind = "hnn"

    def __init__(self, k: TableCtx, h_elems: Sequence[int], phi: Sequence[int]):
        _check_embedding(k, h_elems, "h")
        if len(phi) != len(h_elems):
            raise SchemaError("phi must list one image per subgroup element", "phi")
        if len(set(phi)) != len(phi):
            raise SchemaError("phi is not injective", "phi")
        for x in phi:
            if not isinstance(x, int) or not 0 <= x < k.order:
                raise SchemaError(f"index {x!r} out of range", "phi")
        pos = {x: i for i, x in enumerate(h_elems)}
        m = len(h_elems)
        for i in range(m):
            for j in range(m):
                prod = pos[k.multiply(h_elems[i], h_elems[j])]
                if k.multiply(phi[i], phi[j]) != phi[prod]:
                    raise SchemaError("phi is not a homomorphism", "phi")
        self.k = k
        self.h_elems = list(h_elems)
        self.phi_elems = list(phi)
        self._h_pos = pos
        self._phi_pos = {x: i for i, x in enumerate(phi)}
        # eps=+1 strips an H-part, eps=-1 a phi(H)-part.
        self._rep = {
            1: _transversal(k, self.h_elems),
            -1: _transversal(k, self.phi_elems),
        }
        self.index_h = k.order // m
        self.index_phi = k.order // m

    def is_ascending(self) -> bool:
        return len(self.h_elems) == self.k.order or len(self.phi_elems) == self.k.order

    # --- normal form engine --------------------------------------------------

    @property
    def identity(self) -> Elt:
        return (self.k.identity, ())

    def _push(self, eps: int, hval: int) -> int:
        """Move a subgroup element left through t^eps."""
        if eps == 1:
            return self.phi_elems[self._h_pos[hval]]
        return self.h_elems[self._phi_pos[hval]]

    def _prepend_k(self, idx: int, form: tuple) -> tuple:
        k0, blocks = form
        return (self.k.multiply(idx, k0), blocks)

    def _prepend_t(self, eps: int, form: tuple) -> tuple:
        k0, blocks = form
        rep, hpos, _ = self._rep[eps]
        r = rep[k0]
        sub = self.h_elems if eps == 1 else self.phi_elems
        pushed = self._push(eps, sub[hpos[k0]])
        if r == self.k.identity and blocks and blocks[0][0] == -eps:
            r1 = blocks[0][1]
            return (self.k.multiply(pushed, r1), blocks[1:])
        return (pushed, ((eps, r),) + blocks)

    def _letters(self, g: Elt) -> list[tuple[str, int]]:
        k0, blocks = g
        out = [("K", k0)]
        for eps, r in blocks:
            out.append(("t", eps))
            out.append(("K", r))
        return out

    def multiply(self, a, b):
        form = b
        for kind, val in reversed(self._letters(a)):
            form = self._prepend_k(val, form) if kind == "K" else self._prepend_t(val, form)
        return form

    def invert(self, a):
        k0, blocks = a
        form = self._prepend_k(self.k.invert(k0), self.identity)
        for eps, r in blocks:
            form = self._prepend_t(-eps, form)
            form = self._prepend_k(self.k.invert(r), form)
        return form

    def canonicalize_word(self, letters: Sequence[Any]) -> Elt:
        form = self.identity
        for letter in reversed(letters):
            try:
                kind, val = letter
            except (TypeError, ValueError):
                raise LetterOutsideAlphabet(f"bad letter {letter!r}")
            if kind == "K":
                if not isinstance(val, int) or not 0 <= val < self.k.order:
                    raise LetterOutsideAlphabet(f"{val!r} not a base-group index")
                form = self._prepend_k(val, form)
            elif kind == "t":
                if val not in (1, -1):
                    raise LetterOutsideAlphabet("t exponent must be +1 or -1")
                form = self._prepend_t(val, form)
            else:
                raise LetterOutsideAlphabet(f"unknown letter kind {kind!r}")
        return form

    def generators(self) -> list[Elt]:
        gens = [self.canonicalize_word([("t", 1)]), self.canonicalize_word([("t", -1)])]
        for x in self.k.generators():
            gens.append(self.canonicalize_word([("K", x)]))
        return gens

    def sort_key(self, a):
        k0, blocks = a
        return (len(blocks), blocks, k0)

    def elt_to_json(self, a):
        k0, blocks = a
        return {"k": k0, "word": [[eps, r] for eps, r in blocks]}

    def elt_from_json(self, doc):
        letters = [("K", int(doc["k"]))]
        for eps, r in doc["word"]:
            letters.append(("t", int(eps)))
            letters.append(("K", int(r)))
        return self.canonicalize_word(letters)

    def describe(self) -> str:
        return (
            f"HNN extension of a group of order {self.k.order} over a "
            f"subgroup of order {len(self.h_elems)}"
        )

    # --- structure queries ----------------------------------------------------

    def t_length(self, g: Elt) -> int:
        return len(g[1])

    def in_base_group(self, g: Elt) -> bool:
        return len(g[1]) == 0

    def in_edge_subgroup(self, g: Elt) -> bool:
        return len(g[1]) == 0 and g[0] in self._h_pos

    def edge_subgroup_elements(self) -> list[Elt]:
        return [(x, ()) for x in sorted(self.h_elems)]

    def base_group_elements(self) -> list[Elt]:
        return [(x, ()) for x in range(self.k.order)]

    def cyclic_reduction(self, g: Elt) -> tuple[Elt, Elt]:
        """(conjugator c, core) with g = c * core * c^-1, t-sequence cyclically reduced."""
        conj = self.identity
        core = g
        while True:
            k0, blocks = core
            n = len(blocks)
            if n == 0:
                return conj, core
            eps1 = blocks[0][0]
            epsn, rn = blocks[-1]
            wrap = self.k.multiply(rn, k0)
            sub = self.h_elems if epsn == 1 else self.phi_elems
            if eps1 != -epsn or wrap not in set(sub):
                return conj, core
            c1 = self.canonicalize_word([("K", k0), ("t", eps1)])
            core = self.multiply(self.multiply(self.invert(c1), core), c1)
            conj = self.multiply(conj, c1)

    def core_syllables(self, core: Elt) -> int:
        return len(core[1])
