"""Graph products of groups with canonical syllable normal forms.

An element is a tuple of syllables ``(vertex_index, x)`` with ``x`` a
nontrivial element of that vertex group.  The canonical form is the unique
lexicographically least representative (under the fixed vertex order) among
all shuffle-equivalent reduced words: syllables at adjacent vertices of the
graph commute, equal-vertex syllables merge whenever only commuting
syllables separate them, and trivial syllables are deleted.
"""

from __future__ import annotations

from typing import Any, Sequence

from ..errors import LetterOutsideAlphabet
from .base import Elt, GroupCtx


class GraphProductCtx(GroupCtx):
    kind = "graph_product"

    def __init__(
        self,
        vertex_labels: Sequence[str],
        edges: set[frozenset[str]],
        vertex_ctxs: dict[str, GroupCtx],
    ):
        self.vertex_labels = sorted(vertex_labels)
        self.vindex = {v: i for i, v in enumerate(self.vertex_labels)}
        for e in edges:
            a, b = tuple(e)
            if a not in self.vindex or b not in self.vindex:
                raise LetterOutsideAlphabet(f"edge {e} uses unknown vertex")
        self.edges = {frozenset({self.vindex[a], self.vindex[b]}) for a, b in
                      (tuple(e) for e in edges)}
        self.vctx = [vertex_ctxs[v] for v in self.vertex_labels]
        n = len(self.vertex_labels)
        self._commute = [[False] * n for _ in range(n)]
        for e in self.edges:
            a, b = tuple(e)
            self._commute[a][b] = True
            self._commute[b][a] = True

    # --- canonical form --------------------------------------------------

    def _reduce(self, syls: list[tuple[int, Any]]) -> list[tuple[int, Any]]:
        """Delete identities and merge mergeable equal-vertex syllables."""
        out = list(syls)
        changed = True
        while changed:
            changed = False
            out = [(v, x) for (v, x) in out if x != self.vctx[v].identity]
            for i in range(1, len(out)):
                v, x = out[i]
                j = i - 1
                while j >= 0:
                    w, y = out[j]
                    if w == v:
                        out[j] = (v, self.vctx[v].multiply(y, x))
                        del out[i]
                        changed = True
                        break
                    if not self._commute[v][w]:
                        break
                    j -= 1
                if changed:
                    break
        return out

    def _lex_min(self, syls: list[tuple[int, Any]]) -> tuple:
        """Lex-least linearization of the reduced word's dependence order."""
        n = len(syls)
        if n <= 1:
            return tuple(syls)
        preds = [0] * n
        succs: list[list[int]] = [[] for _ in range(n)]
        for i in range(n):
            vi = syls[i][0]
            for j in range(i + 1, n):
                vj = syls[j][0]
                if vi == vj or not self._commute[vi][vj]:
                    succs[i].append(j)
                    preds[j] += 1
        avail = [i for i in range(n) if preds[i] == 0]
        out: list[tuple[int, Any]] = []
        while avail:
            # Distinct available syllables have distinct vertices (equal
            # vertices are order-dependent), so vertex order is a total
            # tie-break here.
            best = min(avail, key=lambda i: syls[i][0])
            avail.remove(best)
            out.append(syls[best])
            for j in succs[best]:
                preds[j] -= 1
                if preds[j] == 0:
                    avail.append(j)
        return tuple(out)

    def canonicalize_syllables(self, syls: Sequence[tuple[int, Any]]) -> Elt:
        return self._lex_min(self._reduce(list(syls)))

    # --- GroupCtx interface ----------------------------------------------

    @property
    def identity(self) -> Elt:
        return ()

    def multiply(self, a, b):
        return self.canonicalize_syllables(list(a) + list(b))

    def invert(self, a):
        return self.canonicalize_syllables(
            [(v, self.vctx[v].invert(x)) for (v, x) in reversed(a)]
        )

    def canonicalize_word(self, letters: Sequence[Any]) -> Elt:
        """Letters are (vertex label, vertex element) pairs."""
        syls = []
        for letter in letters:
            try:
                v, x = letter
            except (TypeError, ValueError):
                raise LetterOutsideAlphabet(f"bad letter {letter!r}")
            if v not in self.vindex:
                raise LetterOutsideAlphabet(f"unknown vertex {v!r}")
            vi = self.vindex[v]
            syls.append((vi, self.vctx[vi].elt_from_json(x)))
        return self.canonicalize_syllables(syls)

    def generators(self) -> list[Elt]:
        gens = []
        for vi, ctx in enumerate(self.vctx):
            for x in ctx.generators():
                gens.append(((vi, x),))
        return gens

    def sort_key(self, a):
        return (len(a), tuple((v, self.vctx[v].sort_key(x)) for (v, x) in a))

    def elt_to_json(self, a):
        return [[self.vertex_labels[v], self.vctx[v].elt_to_json(x)] for (v, x) in a]

    def elt_from_json(self, doc):
        return self.canonicalize_word([(v, x) for v, x in doc])

    def describe(self) -> str:
        return f"graph product on {len(self.vertex_labels)} vertices"

    # --- parabolic cosets --------------------------------------------------

    def syllable_vertices(self, a) -> set[int]:
        return {v for (v, _) in a}

    def clique_indices(self, clique: Sequence[str]) -> frozenset[int]:
        return frozenset(self.vindex[v] for v in clique)

    def strip_coset(self, g: Elt, sigma: frozenset[int]) -> Elt:
        """Minimal representative of the left coset g * G_sigma.

        Repeatedly removes a syllable whose vertex lies in ``sigma`` when all
        later syllables commute with it; the result is the unique minimal
        length representative, canonicalized.
        """
        syls = list(g)
        changed = True
        while changed:
            changed = False
            for i in range(len(syls) - 1, -1, -1):
                v = syls[i][0]
                if v not in sigma:
                    continue
                if all(self._commute[v][w] for (w, _) in syls[i + 1:]):
                    del syls[i]
                    changed = True
                    break
        return self.canonicalize_syllables(syls)

    def subgroup_elements(self, sigma: frozenset[int]) -> list[Elt]:
        """All elements of G_sigma for a clique of finite vertex groups."""
        elems = [()]
        for v in sorted(sigma):
            ctx = self.vctx[v]
            if not hasattr(ctx, "elements"):
                raise ValueError("G_sigma is infinite (integers vertex group)")
            new = []
            for e in elems:
                for x in ctx.elements():
                    if x == ctx.identity:
                        new.append(e)
                    else:
                        new.append(self.canonicalize_syllables(list(e) + [(v, x)]))
            elems = new
        return sorted(set(elems), key=self.sort_key)

    def vertex_group_elements(self, vi: int, exponent_bound: int | None = None) -> list[Elt]:
        """Elements of G_v as syllable elements (identity first).

        For an integers vertex group the list is truncated to exponents with
        absolute value <= exponent_bound.
        """
        ctx = self.vctx[vi]
        if hasattr(ctx, "elements"):
            xs = ctx.elements()
        else:
            if exponent_bound is None:
                raise ValueError("exponent bound required for integers vertex group")
            xs = range(-exponent_bound, exponent_bound + 1)
        out = []
        for x in xs:
            out.append(() if x == ctx.identity else ((vi, x),))
        return out
