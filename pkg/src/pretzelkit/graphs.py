"""Birooted edge-labelled directed graphs.

A :class:`BirootedGraph` has vertices ``0 .. n-1``, a set of labelled edges
``(src, label, dst)``, a start vertex and an end vertex, and every vertex is
reachable from the start. Exact duplicate edges cannot exist: folding two
parallel equal-labelled edges is itself a root-fixing retract, so nothing
downstream can tell the difference.

All values are immutable; every operation returns a new graph.
"""
from collections import deque
from dataclasses import dataclass
from functools import cached_property

import networkx as nx

from ._search import BudgetOut, Counter, search_morphism
from .errors import (AlphabetMismatch, DanglingEdge, DanglingRoot,
                     GraphFormatError, SizeLimitExceeded, UnknownLabel,
                     UnknownVertex, UnreachableVertex)

DEFAULT_CANON_BUDGET = 10_000


def normalize_alphabet(alphabet):
    return tuple(sorted(set(alphabet)))


@dataclass(frozen=True, eq=False)
class BirootedGraph:
    alphabet: tuple
    n: int
    edges: frozenset
    start: int
    end: int

    @property
    def vertices(self):
        return range(self.n)

    @cached_property
    def out_adjacency(self):
        out = [[] for _ in range(self.n)]
        for (s, label, d) in sorted(self.edges):
            out[s].append((label, d))
        return out

    @cached_property
    def in_adjacency(self):
        inc = [[] for _ in range(self.n)]
        for (s, label, d) in sorted(self.edges):
            inc[d].append((label, s))
        return inc

    @cached_property
    def out_by_label(self):
        out = [dict() for _ in range(self.n)]
        for (s, label, d) in self.edges:
            out[s].setdefault(label, set()).add(d)
        return out

    def sorted_edges(self):
        return sorted(self.edges)

    def __repr__(self):
        edges = " ".join(f"{s}{l}{d}" for s, l, d in self.sorted_edges())
        return f"<BirootedGraph n={self.n} start={self.start} end={self.end} [{edges}]>"

    def __eq__(self, other):
        """Structural equality of the representation (not isomorphism)."""
        if not isinstance(other, BirootedGraph):
            return NotImplemented
        return (self.alphabet == other.alphabet and self.n == other.n
                and self.start == other.start and self.end == other.end
                and self.edges == other.edges)

    def __hash__(self):
        return hash((self.alphabet, self.n, self.start, self.end, self.edges))


def make_graph(alphabet, n, edges, start=0, end=0, *, check=True):
    g = BirootedGraph(normalize_alphabet(alphabet), int(n),
                      frozenset((int(s), l, int(d)) for s, l, d in edges),
                      int(start), int(end))
    if check:
        validate(g)
    return g


def identity_graph(alphabet):
    return make_graph(alphabet, 1, (), 0, 0)


def base_tree(alphabet, label):
    if label not in alphabet:
        raise UnknownLabel(label)
    return make_graph(alphabet, 2, [(0, label, 1)], 0, 1)


def reachable(g, v):
    """Vertices reachable from v by directed paths (v included)."""
    seen = {v}
    queue = deque([v])
    out = g.out_adjacency
    while queue:
        u = queue.popleft()
        for _, w in out[u]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return seen


def coreachable(g, v):
    """Vertices from which v is reachable (v included)."""
    seen = {v}
    queue = deque([v])
    inc = g.in_adjacency
    while queue:
        u = queue.popleft()
        for _, w in inc[u]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return seen


def validate(g):
    if not (0 <= g.start < g.n and 0 <= g.end < g.n):
        raise DanglingRoot(f"roots ({g.start}, {g.end}) outside 0..{g.n - 1}")
    for e in g.edges:
        s, label, d = e
        if not (0 <= s < g.n and 0 <= d < g.n):
            raise DanglingEdge(e)
        if label not in g.alphabet:
            raise UnknownLabel(label)
    seen = reachable(g, g.start)
    if len(seen) != g.n:
        missing = min(set(range(g.n)) - seen)
        raise UnreachableVertex(missing)


def relabel(g, perm):
    """Rename vertex v to perm[v]; perm must be a bijection onto 0..n-1."""
    return BirootedGraph(g.alphabet, g.n,
                         frozenset((perm[s], l, perm[d]) for s, l, d in g.edges),
                         perm[g.start], perm[g.end])


def glue(g, h):
    """Unpruned product: fuse the end of g with the start of h."""
    if g.alphabet != h.alphabet:
        raise AlphabetMismatch(f"{g.alphabet} vs {h.alphabet}")
    rename = {}
    nxt = g.n
    for w in range(h.n):
        if w == h.start:
            rename[w] = g.end
        else:
            rename[w] = nxt
            nxt += 1
    edges = set(g.edges)
    edges.update((rename[s], l, rename[d]) for s, l, d in h.edges)
    return BirootedGraph(g.alphabet, nxt, frozenset(edges), g.start, rename[h.end])


def reroot_plus(g):
    """Move the end vertex onto the start vertex."""
    return BirootedGraph(g.alphabet, g.n, g.edges, g.start, g.start)


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, a):
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


def quotient_map(n, pairs):
    """Old->new vertex map for the equivalence generated by pairs.

    Classes are numbered by their smallest member.
    """
    uf = _UnionFind(n)
    for a, b in pairs:
        uf.union(a, b)
    roots = sorted({uf.find(v) for v in range(n)})
    index = {r: i for i, r in enumerate(roots)}
    return [index[uf.find(v)] for v in range(n)], len(roots)


def apply_vertex_map(g, mapping, size):
    return BirootedGraph(g.alphabet, size,
                         frozenset((mapping[s], l, mapping[d]) for s, l, d in g.edges),
                         mapping[g.start], mapping[g.end])


def merge_vertices(g, pairs):
    """Quotient of g by the equivalence closure of ``pairs``.

    Returns ``(quotient, mapping)`` with ``mapping[old] = new``.
    """
    pairs = list(pairs)
    for a, b in pairs:
        for v in (a, b):
            if not 0 <= v < g.n:
                raise UnknownVertex(v)
    mapping, size = quotient_map(g.n, pairs)
    return apply_vertex_map(g, mapping, size), mapping


def _nx_digraph(g):
    d = nx.DiGraph()
    d.add_nodes_from(range(g.n))
    d.add_edges_from((s, t) for s, _, t in g.edges)
    return d


def strongly_connected_components(g):
    """SCC partition as a list of sorted vertex lists, ordered by least member."""
    comps = [sorted(c) for c in nx.strongly_connected_components(_nx_digraph(g))]
    return sorted(comps)


def condensation(g):
    comps = strongly_connected_components(g)
    which = {}
    for i, comp in enumerate(comps):
        for v in comp:
            which[v] = i
    edges = {(which[s], l, which[d]) for s, l, d in g.edges if which[s] != which[d]}
    return BirootedGraph(g.alphabet, len(comps), frozenset(edges),
                         which[g.start], which[g.end])


def is_acyclic(g):
    return all(len(c) == 1 for c in strongly_connected_components(g)) and \
        not any(s == d for s, _, d in g.edges)


def is_tree(g):
    """True iff g is an X-tree: underlying tree, edges oriented away from start."""
    if len(g.edges) != g.n - 1:
        return False
    indeg = [0] * g.n
    for _, _, d in g.edges:
        indeg[d] += 1
    if indeg[g.start] != 0:
        return False
    if any(indeg[v] != 1 for v in range(g.n) if v != g.start):
        return False
    return len(reachable(g, g.start)) == g.n


def simple_cycles(g):
    """Yield every simple directed cycle as a list of edges.

    Each cycle is reported once, starting from its least vertex; parallel
    edges with different labels give different cycles.
    """
    out = g.out_adjacency
    for s in range(g.n):
        path = []
        on_path = {s}

        def walk(u):
            for label, w in out[u]:
                if w == s:
                    yield path + [(u, label, w)]
                elif w > s and w not in on_path:
                    on_path.add(w)
                    path.append((u, label, w))
                    yield from walk(w)
                    path.pop()
                    on_path.discard(w)

        yield from walk(s)


# ---------------------------------------------------------------- canonical form

@dataclass(frozen=True)
class CanonicalCode:
    """Isomorphism invariant: equal codes iff isomorphic birooted graphs.

    The code is the edge list of the graph renumbered into canonical order
    (start is always vertex 0), with labels as indices into the alphabet.
    """
    alphabet: tuple
    n: int
    end: int
    edges: tuple

    def to_text(self):
        body = ",".join(f"{s}.{self.alphabet[l]}.{d}" for s, l, d in self.edges)
        return f"{self.n}:{self.end}:{body}"

    @classmethod
    def from_text(cls, text, alphabet):
        alphabet = normalize_alphabet(alphabet)
        try:
            n, end, body = text.split(":", 2)
            edges = []
            for item in filter(None, body.split(",")):
                s, label, d = item.split(".")
                edges.append((int(s), alphabet.index(label), int(d)))
        except ValueError as exc:
            raise GraphFormatError(f"bad canonical code {text!r}") from exc
        return cls(alphabet, int(n), int(end), tuple(sorted(edges)))

    def graph(self):
        return make_graph(self.alphabet, self.n,
                          [(s, self.alphabet[l], d) for s, l, d in self.edges],
                          0, self.end)


def refine_colors(g):
    """Colour refinement seeded by the root flags.

    Colours are canonical integers: they depend only on the isomorphism
    type of (g, vertex).
    """
    sig = [(v == g.start, v == g.end) for v in range(g.n)]
    palette = sorted(set(sig))
    colors = [palette.index(s) for s in sig]
    count = len(palette)
    out, inc = g.out_adjacency, g.in_adjacency
    while True:
        sig = [(colors[v],
                tuple(sorted((l, colors[w]) for l, w in out[v])),
                tuple(sorted((l, colors[w]) for l, w in inc[v])))
               for v in range(g.n)]
        palette = sorted(set(sig))
        lookup = {s: i for i, s in enumerate(palette)}
        colors = [lookup[s] for s in sig]
        if len(palette) == count:
            return colors
        count = len(palette)


def canonical_form(g, budget=DEFAULT_CANON_BUDGET):
    """Return ``(code, perm)`` where ``perm[v]`` is v's canonical number.

    The code is the lexicographic minimum over all breadth-first numberings
    from the start in which out-neighbours are ordered by (labels, colour);
    only ties between equal keys are branched on, and a tie is skipped when
    an automorphism fixing the numbered vertices already covers it.
    """
    colors = refine_colors(g)
    out = g.out_adjacency
    label_index = {l: i for i, l in enumerate(g.alphabet)}
    counter = Counter(budget)
    best = [None, None]
    order = [g.start]
    pos = {g.start: 0}

    def leaf():
        edges = tuple(sorted((pos[s], label_index[l], pos[d]) for s, l, d in g.edges))
        code = (g.n, pos[g.end], edges)
        if best[0] is None or code < best[0]:
            best[0] = code
            best[1] = dict(pos)

    def frontier():
        for p in order:
            cand = {}
            for label, w in out[p]:
                if w not in pos:
                    cand.setdefault(w, []).append(label)
            if cand:
                keys = {w: (tuple(sorted(ls)), colors[w]) for w, ls in cand.items()}
                low = min(keys.values())
                return sorted(w for w in cand if keys[w] == low)
        return []

    def extend():
        counter.tick()
        tied = frontier()
        if not tied:
            leaf()
            return
        tried = []
        for w in tied:
            if any(_swaps_by_automorphism(g, colors, pos, t, w, counter) for t in tried):
                continue
            tried.append(w)
            pos[w] = len(order)
            order.append(w)
            extend()
            order.pop()
            del pos[w]

    try:
        extend()
    except BudgetOut:
        raise SizeLimitExceeded(
            f"canonicalisation of a {g.n}-vertex graph exceeded {budget} search nodes") from None
    n, end, edges = best[0]
    perm = [best[1][v] for v in range(g.n)]
    return CanonicalCode(g.alphabet, n, end, edges), perm


def _swaps_by_automorphism(g, colors, numbered, a, b, counter):
    if colors[a] != colors[b]:
        return False
    fixed = {v: v for v in numbered}
    fixed[a] = b
    phi = search_morphism(g, g, fixed, counter, injective=True,
                          vertex_ok=lambda v, w: colors[v] == colors[w])
    return phi is not None


def canonical_code(g, budget=DEFAULT_CANON_BUDGET):
    return canonical_form(g, budget)[0]


def canonical_graph(g, budget=DEFAULT_CANON_BUDGET):
    """g renumbered into canonical vertex order (start becomes 0)."""
    _, perm = canonical_form(g, budget)
    return relabel(g, perm)


def isomorphic(g, h, budget=DEFAULT_CANON_BUDGET):
    if g.alphabet != h.alphabet or g.n != h.n or len(g.edges) != len(h.edges):
        return False
    return canonical_code(g, budget) == canonical_code(h, budget)


def _nx_multidigraph(g):
    d = nx.MultiDiGraph()
    for v in range(g.n):
        d.add_node(v, start=(v == g.start), end=(v == g.end))
    for s, l, t in g.edges:
        d.add_edge(s, t, label=l)
    return d


def isomorphic_by_search(g, h):
    """Independent isomorphism test (VF2 on labelled multidigraphs)."""
    if g.alphabet != h.alphabet:
        return False
    iso = nx.algorithms.isomorphism
    matcher = iso.MultiDiGraphMatcher(
        _nx_multidigraph(g), _nx_multidigraph(h),
        node_match=iso.categorical_node_match(["start", "end"], [False, False]),
        edge_match=iso.categorical_multiedge_match("label", None))
    return matcher.is_isomorphic()


# ---------------------------------------------------------------- text formats

def format_graph(g):
    lines = [f"alphabet: {' '.join(g.alphabet)}".rstrip(),
             f"vertices: {g.n}",
             f"start: {g.start}",
             f"end: {g.end}"]
    lines += [f"edge: {s} {l} {d}" for s, l, d in g.sorted_edges()]
    return "\n".join(lines) + "\n"


def parse_graph(text):
    fields = {}
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition(":")
        if not sep:
            raise GraphFormatError(f"line {lineno}: expected 'key: value'")
        key = key.strip()
        value = value.split()
        if key == "edge":
            if len(value) != 3:
                raise GraphFormatError(f"line {lineno}: edge needs 'src label dst'")
            try:
                edges.append((int(value[0]), value[1], int(value[2])))
            except ValueError:
                raise GraphFormatError(f"line {lineno}: bad edge") from None
        elif key in ("alphabet", "vertices", "start", "end"):
            if key in fields:
                raise GraphFormatError(f"line {lineno}: duplicate {key}")
            fields[key] = value
        else:
            raise GraphFormatError(f"line {lineno}: unknown key {key!r}")
    missing = {"alphabet", "vertices", "start", "end"} - set(fields)
    if missing:
        raise GraphFormatError(f"missing fields: {', '.join(sorted(missing))}")
    try:
        n = int(fields["vertices"][0])
        start = int(fields["start"][0])
        end = int(fields["end"][0])
    except (ValueError, IndexError):
        raise GraphFormatError("vertices/start/end must be integers") from None
    return make_graph(fields["alphabet"], n, edges, start, end)


def export_dot(g, name="G"):
    lines = [f"digraph {name} {{",
             '  node [shape=point, label=""];']
    for v in range(g.n):
        if v == g.start and v == g.end:
            lines.append(f'  n{v} [shape=plaintext, label="⊕×"];')
        elif v == g.start:
            lines.append(f'  n{v} [shape=plaintext, label="+"];')
        elif v == g.end:
            lines.append(f'  n{v} [shape=plaintext, label="×"];')
        else:
            lines.append(f"  n{v};")
    for s, l, d in g.sorted_edges():
        lines.append(f'  n{s} -> n{d} [label="{l}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
