from __future__ import annotations

import itertools

import pytest

from cubemeans.graphs import SimpGraph
from cubemeans.groups import (
    cyclic_amalgam_spec,
    free_product_spec,
    lamplighter_spec,
    parse_group_spec,
)
from cubemeans.suites import symmetric_table_spec

Z2 = {"kind": "cyclic", "order": 2}
Z3 = {"kind": "cyclic", "order": 3}
Z = {"kind": "integers"}


def graph_product_spec(vertices, edges, groups):
    return {
        "kind": "graph_product",
        "graph": {"vertices": list(vertices), "edges": [sorted(e) for e in edges]},
        "vertex_groups": groups,
    }


@pytest.fixture(scope="session")
def free23():
    """Z/2 * Z/3 as a graph product on two isolated vertices."""
    return parse_group_spec(graph_product_spec(["v", "w"], [], {"v": Z2, "w": Z3}))


@pytest.fixture(scope="session")
def direct23():
    """Z/2 x Z/3 as a graph product on an edge."""
    return parse_group_spec(
        graph_product_spec(["v", "w"], [["v", "w"]], {"v": Z2, "w": Z3})
    )


@pytest.fixture(scope="session")
def amalgam23():
    """Z/2 * Z/3 as an amalgam over the trivial subgroup."""
    return parse_group_spec(free_product_spec(2, 3))


@pytest.fixture(scope="session")
def amalgam46():
    """Z/4 *_{Z/2} Z/6."""
    return parse_group_spec(cyclic_amalgam_spec(4, 6, 2))


@pytest.fixture(scope="session")
def hnn42():
    """Non-ascending extension of Z/4 over its order-2 subgroup."""
    return parse_group_spec(
        {
            "kind": "hnn",
            "k": {"kind": "table", "elements": ["0", "1", "2", "3"],
                  "mul": [[(i + j) % 4 for j in range(4)] for i in range(4)]},
            "h": [0, 2],
            "phi": [0, 2],
        }
    )


@pytest.fixture(scope="session")
def lamplighter():
    return parse_group_spec(lamplighter_spec())


@pytest.fixture(scope="session")
def sym3():
    return parse_group_spec(symmetric_table_spec(3))


@pytest.fixture(scope="session")
def sym4():
    return parse_group_spec(symmetric_table_spec(4))


# --- independent oracles ---------------------------------------------------


class FreeProductWords:
    """Test-local reduced-word engine for free products of cyclic groups.

    Words are tuples of (factor index, exponent) with exponents reduced mod
    the factor order; reduction merges adjacent same-factor letters.
    Entirely independent of the package's normal forms.
    """

    def __init__(self, orders):
        self.orders = list(orders)

    def reduce(self, word):
        out = []
        for f, e in word:
            e %= self.orders[f]
            if e == 0:
                continue
            if out and out[-1][0] == f:
                merged = (out[-1][1] + e) % self.orders[f]
                out.pop()
                if merged:
                    out.append((f, merged))
            else:
                out.append((f, e))
        # merging can cascade
        changed = True
        while changed:
            changed = False
            for i in range(len(out) - 1):
                if out[i][0] == out[i + 1][0]:
                    f = out[i][0]
                    merged = (out[i][1] + out[i + 1][1]) % self.orders[f]
                    rest = out[: i] + ([(f, merged)] if merged else []) + out[i + 2:]
                    out = rest
                    changed = True
                    break
        return tuple(out)

    def multiply(self, a, b):
        return self.reduce(list(a) + list(b))

    def invert(self, a):
        return self.reduce([(f, -e) for f, e in reversed(a)])


def direct_product_table(n, m):
    """Multiplication table of Z/n x Z/m with elements (i, j) flattened."""
    elems = list(itertools.product(range(n), range(m)))
    index = {e: k for k, e in enumerate(elems)}
    mul = [
        [index[((a + c) % n, (b + d) % m)] for (c, d) in elems]
        for (a, b) in elems
    ]
    return elems, mul
