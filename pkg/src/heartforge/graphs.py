"""Small directed-graph utilities: unlabeled digraph isomorphism testing
by Weisfeiler-Leman-style colour refinement plus backtracking."""

from __future__ import annotations

from typing import Dict, List, Sequence, Tuple


def _refine(n: int, out_adj, in_adj, rounds: int = 4) -> List[Tuple]:
    colours: List[Tuple] = [(len(out_adj[v]), len(in_adj[v])) for v in range(n)]
    for _ in range(rounds):
        nxt = []
        for v in range(n):
            nxt.append(
                (
                    colours[v],
                    tuple(sorted(colours[w] for w in out_adj[v])),
                    tuple(sorted(colours[w] for w in in_adj[v])),
                )
            )
        if nxt == colours:
            break
        colours = nxt
    return colours


def digraph_isomorphic(n1: int, edges1: Sequence[Tuple[int, int]],
                       n2: int, edges2: Sequence[Tuple[int, int]]) -> bool:
    """Unlabeled digraph isomorphism (multiplicity-insensitive edges)."""
    if n1 != n2:
        return False
    e1, e2 = set(map(tuple, edges1)), set(map(tuple, edges2))
    if len(e1) != len(e2):
        return False
    out1 = [[] for _ in range(n1)]
    in1 = [[] for _ in range(n1)]
    for a, b in e1:
        out1[a].append(b)
        in1[b].append(a)
    out2 = [[] for _ in range(n2)]
    in2 = [[] for _ in range(n2)]
    for a, b in e2:
        out2[a].append(b)
        in2[b].append(a)
    c1 = _refine(n1, out1, in1)
    c2 = _refine(n2, out2, in2)
    if sorted(c1) != sorted(c2):
        return False
    # backtracking respecting refinement colours, most-constrained first
    order = sorted(range(n1), key=lambda v: (c1.count(c1[v]), c1[v]))
    cand = {v: [w for w in range(n2) if c2[w] == c1[v]] for v in range(n1)}
    assign: Dict[int, int] = {}
    used = set()

    def ok(v, w):
        for a, b in assign.items():
            if ((v, a) in e1) != ((w, b) in e2):
                return False
            if ((a, v) in e1) != ((b, w) in e2):
                return False
        return True

    def bt(idx):
        if idx == len(order):
            return True
        v = order[idx]
        for w in cand[v]:
            if w in used or not ok(v, w):
                continue
            assign[v] = w
            used.add(w)
            if bt(idx + 1):
                return True
            del assign[v]
            used.discard(w)
        return False

    return bt(0)


def quiver_edge_data(ar_quiver) -> Tuple[int, List[Tuple[int, int]]]:
    idx = {k: i for i, k in enumerate(ar_quiver.vertices)}
    edges = [(idx[a], idx[b]) for (a, b) in ar_quiver.arrows]
    return len(ar_quiver.vertices), edges
