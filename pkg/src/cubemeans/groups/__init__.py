from .amalgams import AmalgamCtx, HnnCtx
from .base import (
    DEFAULT_CAP,
    Elt,
    GroupCtx,
    centralizer,
    conjugacy_class,
    relative_centralizer_mod,
)
from .finite import CyclicCtx, IntegersCtx, TableCtx, all_subgroups, subgroup_closure
from .graph_products import GraphProductCtx
from .specs import (
    cyclic_amalgam_spec,
    cyclic_hnn_spec,
    cyclic_table_spec,
    free_product_spec,
    lamplighter_spec,
    load_group_spec,
    parse_group_spec,
)
from .subgroups import (
    BaseSumSubgroup,
    CentralizerSubgroup,
    ConjugateSubgroup,
    EdgeSubgroup,
    FiniteSubgroup,
    IndexSubgroup,
    KernelSubgroup,
    Subgrp,
    TopSubgroup,
    TrivialSubgroup,
    VertexSubgroup,
)
from .wreath import WreathAction, WreathCtx

__all__ = [
    "AmalgamCtx",
    "BaseSumSubgroup",
    "CentralizerSubgroup",
    "ConjugateSubgroup",
    "CyclicCtx",
    "DEFAULT_CAP",
    "EdgeSubgroup",
    "Elt",
    "FiniteSubgroup",
    "GraphProductCtx",
    "GroupCtx",
    "HnnCtx",
    "IndexSubgroup",
    "IntegersCtx",
    "KernelSubgroup",
    "Subgrp",
    "TableCtx",
    "TopSubgroup",
    "TrivialSubgroup",
    "VertexSubgroup",
    "WreathAction",
    "WreathCtx",
    "all_subgroups",
    "centralizer",
    "conjugacy_class",
    "cyclic_amalgam_spec",
    "cyclic_hnn_spec",
    "cyclic_table_spec",
    "free_product_spec",
    "lamplighter_spec",
    "load_group_spec",
    "parse_group_spec",
    "relative_centralizer_mod",
    "subgroup_closure",
]
