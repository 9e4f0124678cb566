"""Exhaustive tree edit distance over all ordered edit mappings.

Exponential; only meant as a test oracle for small trees.
"""

from __future__ import annotations

from ..errors import SizeLimit
from ..statements import Node, StatementTree
from .ted import CostModel

MAX_NODES = 8


def _preorder(root: Node) -> tuple[list[Node], list[list[bool]]]:
    nodes: list[Node] = []
    parent: list[int] = []

    def walk(node: Node, up: int) -> None:
        idx = len(nodes)
        nodes.append(node)
        parent.append(up)
        for ch in node.children:
            walk(ch, idx)

    walk(root, -1)
    n = len(nodes)
    # anc[i][j]: i is a proper ancestor of j
    anc = [[False] * n for _ in range(n)]
    for j in range(n):
        p = parent[j]
        while p != -1:
            anc[p][j] = True
            p = parent[p]
    return nodes, anc


def brute_force_ted(
    prediction: StatementTree | Node,
    ground_truth: StatementTree | Node,
    cost: CostModel | None = None,
    max_nodes: int = MAX_NODES,
) -> float:
    """Minimum cost over every valid mapping (one-to-one, ancestor- and order-preserving).

    Trees larger than ``max_nodes`` raise SizeLimit; raise the limit with care.
    """
    cost = cost or CostModel()
    ra = prediction.root if isinstance(prediction, StatementTree) else prediction
    rb = ground_truth.root if isinstance(ground_truth, StatementTree) else ground_truth
    a, anc_a = _preorder(ra)
    b, anc_b = _preorder(rb)
    if len(a) > max_nodes or len(b) > max_nodes:
        raise SizeLimit(f"brute force limited to {max_nodes} nodes per tree")
    rename = [[cost.rename(x, y) for y in b] for x in a]
    na, nb = len(a), len(b)
    best = na * cost.delete_cost + nb * cost.insert_cost
    mapping: list[tuple[int, int]] = []

    def consistent(i: int, j: int) -> bool:
        for i0, j0 in mapping:
            # a-nodes arrive in preorder, so b-nodes must too
            if j <= j0:
                return False
            if anc_a[i0][i] != anc_b[j0][j]:
                return False
        return True

    def search(i: int, spent: float) -> None:
        nonlocal best
        if spent >= best:
            return
        if i == na:
            total = spent + (nb - len(mapping)) * cost.insert_cost
            best = min(best, total)
            return
        for j in range(nb):
            if consistent(i, j):
                mapping.append((i, j))
                search(i + 1, spent + rename[i][j])
                mapping.pop()
        search(i + 1, spent + cost.delete_cost)

    search(0, 0.0)
    return best
