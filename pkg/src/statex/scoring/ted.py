"""Ordered tree edit distance (Zhang-Shasha) under the statement cost model.

Distances are oriented prediction -> ground truth: a node present only in
the ground truth is an insertion, a node present only in the prediction is a
deletion.  Besides the distance, the optimal script's positive-cost
operations are counted by kind; among equal-cost scripts the one with the
fewest positive-cost operations is reported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from ..statements import Node, StatementTree
from .levenshtein import normalized_levenshtein

__all__ = [
    "CROSS_TYPE_COST",
    "CostModel",
    "EditSummary",
    "edit_ratios",
    "rename_cost",
    "tree_edit_distance",
]

CROSS_TYPE_COST = 3.0
STRING, NUMERIC = "string", "numeric"
_EPS = 1e-12


def _as_number(text: str) -> float | None:
    try:
        x = float(text.replace(",", ""))
    except ValueError:
        return None
    return x if math.isfinite(x) else None


@lru_cache(maxsize=65536)
def _value_cost(a: str, b: str, mode: str) -> float:
    if a == b:
        return 0.0
    if mode == NUMERIC:
        x, y = _as_number(a), _as_number(b)
        if x is not None and y is not None:
            return 0.0 if x == y else 1.0
    return normalized_levenshtein(a, b)


def rename_cost(node_a: Node, node_b: Node, mode: str = STRING) -> float:
    """Cost of relabeling ``node_a`` into ``node_b``.

    Only same-type nodes may be renamed; anything else gets a cost larger
    than a delete plus an insert, so an optimal script never uses it.
    """
    if node_a.type != node_b.type:
        return CROSS_TYPE_COST
    return _value_cost(node_a.value or "", node_b.value or "", mode)


@dataclass(frozen=True)
class CostModel:
    insert_cost: float = 1.0
    delete_cost: float = 1.0
    numeric_aware: bool = False

    @property
    def mode(self) -> str:
        return NUMERIC if self.numeric_aware else STRING

    def rename(self, a: Node, b: Node) -> float:
        return rename_cost(a, b, self.mode)


@dataclass(frozen=True)
class EditSummary:
    distance: float
    n_insert: int
    n_delete: int
    n_rename: int

    @property
    def n_edits(self) -> int:
        return self.n_insert + self.n_delete + self.n_rename

    @property
    def normalized(self) -> float:
        return self.distance / self.n_edits if self.n_edits else 0.0

    @property
    def similarity(self) -> float:
        return 1.0 - self.normalized

    def ratios(self) -> tuple[float, float, float]:
        return edit_ratios(self)


def edit_ratios(summary: EditSummary) -> tuple[float, float, float]:
    """Fractions (insert, delete, rename) of the positive-cost edits."""
    n = summary.n_edits
    if n == 0:
        return (0.0, 0.0, 0.0)
    return (summary.n_insert / n, summary.n_delete / n, summary.n_rename / n)


class _Indexed:
    """Postorder numbering with leftmost-leaf descendants and keyroots."""

    def __init__(self, root: Node) -> None:
        self.nodes: list[Node] = []
        self.lmd: list[int] = []
        stack: list[tuple[Node, bool]] = [(root, False)]
        first_leaf: dict[int, int] = {}
        while stack:
            node, expanded = stack.pop()
            if expanded or not node.children:
                idx = len(self.nodes)
                self.nodes.append(node)
                leftmost = first_leaf[id(node.children[0])] if node.children else idx
                first_leaf[id(node)] = leftmost
                self.lmd.append(leftmost)
            else:
                stack.append((node, True))
                stack.extend((c, False) for c in reversed(node.children))
        seen: dict[int, int] = {}
        for i, l in enumerate(self.lmd):
            seen[l] = i
        self.keyroots = sorted(seen.values())


# packed operation counters: insertions | deletions << 21 | renames << 42
_DEL_SHIFT, _REN_SHIFT, _MASK = 21, 42, (1 << 21) - 1
_ONE_INS, _ONE_DEL, _ONE_REN = 1, 1 << _DEL_SHIFT, 1 << _REN_SHIFT


def _n_ops(packed: int) -> int:
    return (packed & _MASK) + ((packed >> _DEL_SHIFT) & _MASK) + (packed >> _REN_SHIFT)


def _root(tree: StatementTree | Node) -> Node:
    return tree.root if isinstance(tree, StatementTree) else tree


def tree_edit_distance(
    prediction: StatementTree | Node,
    ground_truth: StatementTree | Node,
    cost: CostModel | None = None,
) -> EditSummary:
    """Minimum-cost edit script turning ``prediction`` into ``ground_truth``."""
    cost = cost or CostModel()
    A, B = _Indexed(_root(prediction)), _Indexed(_root(ground_truth))
    na, nb = len(A.nodes), len(B.nodes)
    dc, ic = cost.delete_cost, cost.insert_cost
    del_ops = _ONE_DEL if dc > 0 else 0
    ins_ops = _ONE_INS if ic > 0 else 0
    rename = cost.rename
    td_cost = [[0.0] * nb for _ in range(na)]
    td_ops = [[0] * nb for _ in range(na)]
    lmd_a, lmd_b = A.lmd, B.lmd

    for i in A.keyroots:
        li = lmd_a[i]
        for j in B.keyroots:
            lj = lmd_b[j]
            m, n = i - li + 2, j - lj + 2
            ioff, joff = li - 1, lj - 1
            fc = [[0.0] * n for _ in range(m)]
            fo = [[0] * n for _ in range(m)]
            for x in range(1, m):
                fc[x][0] = fc[x - 1][0] + dc
                fo[x][0] = fo[x - 1][0] + del_ops
            for y in range(1, n):
                fc[0][y] = fc[0][y - 1] + ic
                fo[0][y] = fo[0][y - 1] + ins_ops
            for x in range(1, m):
                xi = x + ioff
                a_node = A.nodes[xi]
                a_full = lmd_a[xi] == li
                fc_x, fc_p = fc[x], fc[x - 1]
                fo_x, fo_p = fo[x], fo[x - 1]
                for y in range(1, n):
                    yj = y + joff
                    # candidates: delete a-node, insert b-node, match
                    c1, o1 = fc_p[y] + dc, fo_p[y] + del_ops
                    c2, o2 = fc_x[y - 1] + ic, fo_x[y - 1] + ins_ops
                    if a_full and lmd_b[yj] == lj:
                        r = rename(a_node, B.nodes[yj])
                        c3 = fc_p[y - 1] + r
                        o3 = fo_p[y - 1] + (_ONE_REN if r > 0 else 0)
                    else:
                        p, q = lmd_a[xi] - 1 - ioff, lmd_b[yj] - 1 - joff
                        c3 = fc[p][q] + td_cost[xi][yj]
                        o3 = fo[p][q] + td_ops[xi][yj]
                    bc, bo = c1, o1
                    for cc, oo in ((c2, o2), (c3, o3)):
                        if cc < bc - _EPS or (cc <= bc + _EPS and _n_ops(oo) < _n_ops(bo)):
                            bc, bo = cc, oo
                    fc_x[y], fo_x[y] = bc, bo
                    if a_full and lmd_b[yj] == lj:
                        td_cost[xi][yj], td_ops[xi][yj] = bc, bo

    ops = td_ops[na - 1][nb - 1]
    return EditSummary(
        distance=td_cost[na - 1][nb - 1],
        n_insert=ops & _MASK,
        n_delete=(ops >> _DEL_SHIFT) & _MASK,
        n_rename=ops >> _REN_SHIFT,
    )
