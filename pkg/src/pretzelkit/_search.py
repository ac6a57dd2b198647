"""Backtracking engine for label-preserving vertex maps between birooted graphs.

Shared by the canonical-form automorphism pruning in :mod:`graphs` and the
homomorphism/core searches in :mod:`retractcore`.
"""
from collections import deque


class BudgetOut(Exception):
    pass


class Counter:
    def __init__(self, budget):
        self.budget = budget
        self.nodes = 0

    def tick(self):
        self.nodes += 1
        if self.budget is not None and self.nodes > self.budget:
            raise BudgetOut(self.nodes)


def bfs_plan(g):
    """Order g's vertices by BFS from the start, with a parent edge for each.

    Returns (order, parent, checks) where parent[v] = (u, label) is the tree
    edge used to discover v and checks[i] lists the edges joining order[i]
    to vertices at positions <= i (self-loops included).
    """
    out = g.out_adjacency
    order = [g.start]
    parent = {g.start: None}
    queue = deque([g.start])
    while queue:
        u = queue.popleft()
        for label, w in out[u]:
            if w not in parent:
                parent[w] = (u, label)
                order.append(w)
                queue.append(w)
    position = {v: i for i, v in enumerate(order)}
    checks = [[] for _ in order]
    for (s, label, d) in g.edges:
        i = max(position[s], position[d])
        checks[i].append((s, label, d))
    return order, parent, checks


def search_morphism(src, dst, fixed, counter, *, injective=False,
                    allowed=None, vertex_ok=None):
    """Find a vertex map src -> dst extending ``fixed`` that preserves edges.

    Every src edge (a, x, b) must map to an edge (phi a, x, phi b) of dst.
    ``allowed`` restricts the image to a vertex subset; ``vertex_ok(v, w)``
    is an extra pruning predicate. Returns a dict or None.
    """
    order, parent, checks = bfs_plan(src)
    dst_out = dst.out_by_label
    dst_edges = dst.edges
    phi = {}
    used = set()

    def candidates(v):
        if v in fixed:
            return [fixed[v]]
        u, label = parent[v]
        return sorted(dst_out[phi[u]].get(label, ()))

    def assign(i):
        if i == len(order):
            return True
        counter.tick()
        v = order[i]
        for w in candidates(v):
            if allowed is not None and w not in allowed:
                continue
            if injective and w in used:
                continue
            if vertex_ok is not None and not vertex_ok(v, w):
                continue
            phi[v] = w
            ok = True
            for (a, label, b) in checks[i]:
                if (phi[a], label, phi[b]) not in dst_edges:
                    ok = False
                    break
            if ok:
                used.add(w)
                if assign(i + 1):
                    return True
                used.discard(w)
            del phi[v]
        return False

    if assign(0):
        return dict(phi)
    return None
