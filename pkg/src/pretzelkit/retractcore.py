"""Root-preserving homomorphisms between birooted graphs, and graph cores.

The core of a graph is its smallest retract; it is unique up to
isomorphism, and any root-preserving endomorphism with a proper image
leads to it by repeatedly restricting to images.
"""
from dataclasses import dataclass

from ._search import BudgetOut, Counter, search_morphism
from .errors import AlphabetMismatch, SearchBudgetExceeded
from .graphs import BirootedGraph, make_graph

DEFAULT_BUDGET = 100_000


@dataclass(frozen=True)
class Morphism:
    source: BirootedGraph
    target: BirootedGraph
    vertex_map: tuple

    def __call__(self, v):
        return self.vertex_map[v]

    @property
    def edge_map(self):
        m = self.vertex_map
        return {e: (m[e[0]], e[1], m[e[2]]) for e in self.source.edges}

    def is_valid(self):
        s, t, m = self.source, self.target, self.vertex_map
        return (m[s.start] == t.start and m[s.end] == t.end
                and all(img in t.edges for img in self.edge_map.values()))

    def image(self):
        """Image subgraph, renumbered in target id order."""
        verts = sorted(set(self.vertex_map))
        index = {v: i for i, v in enumerate(verts)}
        edges = {(index[a], l, index[b]) for a, l, b in self.edge_map.values()}
        t = self.target
        return make_graph(t.alphabet, len(verts), edges, index[t.start], index[t.end])


def _label_sets(g):
    outs = [frozenset(l for l, _ in g.out_adjacency[v]) for v in range(g.n)]
    ins = [frozenset(l for l, _ in g.in_adjacency[v]) for v in range(g.n)]
    return outs, ins


def _compatible(src, dst):
    # a homomorphism may identify vertices, so only label *sets* must embed
    so, si = _label_sets(src)
    do, di = _label_sets(dst)
    return lambda v, w: so[v] <= do[w] and si[v] <= di[w]


def _run(search, budget):
    try:
        return search(Counter(budget))
    except BudgetOut:
        raise SearchBudgetExceeded(f"homomorphism search exceeded {budget} nodes") from None


def find_birooted_morphism(s, t, budget=DEFAULT_BUDGET):
    """Some label- and root-preserving morphism s -> t, or None."""
    if s.alphabet != t.alphabet:
        raise AlphabetMismatch(f"{s.alphabet} vs {t.alphabet}")
    if s.start == s.end and t.start != t.end:
        return None
    fixed = {s.start: t.start, s.end: t.end}
    ok = _compatible(s, t)
    phi = _run(lambda c: search_morphism(s, t, fixed, c, vertex_ok=ok), budget)
    if phi is None:
        return None
    return Morphism(s, t, tuple(phi[v] for v in range(s.n)))


def find_endomorphism_shrinking(g, budget=DEFAULT_BUDGET):
    """A root-fixing endomorphism whose image misses some vertex, or None.

    A root-fixing endomorphism that hits every vertex is a bijection, so
    missing a vertex is the only way to shrink.
    """
    fixed = {g.start: g.start, g.end: g.end}
    ok = _compatible(g, g)
    everything = set(range(g.n))

    def search(counter):
        for a in range(g.n - 1, -1, -1):
            if a in fixed:
                continue
            phi = search_morphism(g, g, fixed, counter, allowed=everything - {a},
                                  vertex_ok=ok)
            if phi is not None:
                return phi
        return None

    phi = _run(search, budget)
    if phi is None:
        return None
    return Morphism(g, g, tuple(phi[v] for v in range(g.n)))


def idempotent_power(vertex_map):
    """The first power of a self-map that is idempotent."""
    phi = tuple(vertex_map)
    psi = phi
    while tuple(psi[psi[v]] for v in range(len(psi))) != psi:
        psi = tuple(phi[psi[v]] for v in range(len(psi)))
    return psi


def core(g, budget=DEFAULT_BUDGET):
    """Smallest retract of g (unique up to isomorphism)."""
    while True:
        phi = find_endomorphism_shrinking(g, budget)
        if phi is None:
            return g
        rho = Morphism(g, g, idempotent_power(phi.vertex_map))
        g = rho.image()


def is_core(g, budget=DEFAULT_BUDGET):
    return find_endomorphism_shrinking(g, budget) is None
