"""Terms over a generating alphabet, and X-trees built from them.

Grammar (whitespace ignored)::

    term    := factor+            juxtaposition is product, left-associative
    factor  := atom postfix*
    atom    := GEN | "1" | "(" term ")"
    postfix := "^+" | "^" INT     x^0 is 1, x^n expands to an n-fold product

Trees are plain :class:`~pretzelkit.graphs.BirootedGraph` values wrapped in
:class:`XTree`, which checks the tree shape and caches the parent map.
"""
from dataclasses import dataclass
from functools import cached_property

from .errors import NotATree, TermSyntaxError, UnknownGenerator, UnknownVertex
from .graphs import (BirootedGraph, base_tree, glue, identity_graph, is_tree,
                     make_graph, reachable, relabel, reroot_plus)


# ---------------------------------------------------------------- syntax

@dataclass(frozen=True)
class Identity:
    pass


@dataclass(frozen=True)
class Gen:
    symbol: str


@dataclass(frozen=True)
class Product:
    left: object
    right: object


@dataclass(frozen=True)
class Plus:
    arg: object


ONE = Identity()


def product(*terms):
    """Left-associated product; the empty product is the identity."""
    if not terms:
        return ONE
    acc = terms[0]
    for t in terms[1:]:
        acc = Product(acc, t)
    return acc


def word_term(word):
    return product(*(Gen(x) for x in word))


class _Parser:
    def __init__(self, src, alphabet):
        self.src = src
        self.alphabet = None if alphabet is None else set(alphabet)
        self.i = 0

    def skip(self):
        while self.i < len(self.src) and self.src[self.i].isspace():
            self.i += 1

    def peek(self):
        self.skip()
        return self.src[self.i] if self.i < len(self.src) else ""

    def error(self, message):
        raise TermSyntaxError(message, self.i)

    def parse(self):
        t = self.term()
        if self.peek():
            self.error(f"unexpected {self.peek()!r}")
        return t

    def term(self):
        factors = []
        while True:
            ch = self.peek()
            if ch and (ch == "(" or ch == "1" or ch.isalpha()):
                factors.append(self.factor())
            else:
                break
        if not factors:
            self.error("expected a term" if self.peek() else "unexpected end of input")
        return product(*factors)

    def factor(self):
        t = self.atom()
        while self.peek() == "^":
            self.i += 1
            ch = self.peek()
            if ch == "+":
                self.i += 1
                t = Plus(t)
            elif ch.isdigit():
                start = self.i
                while self.i < len(self.src) and self.src[self.i].isdigit():
                    self.i += 1
                n = int(self.src[start:self.i])
                t = product(*([t] * n))
            else:
                self.error("expected '+' or an exponent after '^'")
        return t

    def atom(self):
        ch = self.peek()
        if ch == "(":
            self.i += 1
            t = self.term()
            if self.peek() != ")":
                self.error("expected ')'")
            self.i += 1
            return t
        if ch == "1":
            self.i += 1
            return ONE
        if ch.isalpha():
            if self.alphabet is not None and ch not in self.alphabet:
                raise UnknownGenerator(ch)
            self.i += 1
            return Gen(ch)
        self.error("expected a generator, '1' or '('")


def parse_term(src, alphabet=None):
    """Parse ``src``; if ``alphabet`` is given, generators must belong to it."""
    return _Parser(src, alphabet).parse()


def format_term(t):
    """Render a term with minimal parentheses; parse_term inverts it."""
    if isinstance(t, Identity):
        return "1"
    if isinstance(t, Gen):
        return t.symbol
    if isinstance(t, Plus):
        inner = format_term(t.arg)
        if isinstance(t.arg, Product):
            inner = f"({inner})"
        return inner + "^+"
    left = format_term(t.left)
    right = format_term(t.right)
    if isinstance(t.right, Product):
        right = f"({right})"
    return left + right


def term_generators(t):
    if isinstance(t, Gen):
        return {t.symbol}
    if isinstance(t, Product):
        return term_generators(t.left) | term_generators(t.right)
    if isinstance(t, Plus):
        return term_generators(t.arg)
    return set()


# ---------------------------------------------------------------- trees

@dataclass(frozen=True, eq=False)
class XTree:
    """A birooted graph known to be a tree with edges directed away from start."""
    graph: BirootedGraph

    def __post_init__(self):
        if not is_tree(self.graph):
            raise NotATree(repr(self.graph))

    @cached_property
    def parent(self):
        """v -> (u, label) for every non-start vertex v."""
        return {d: (s, l) for s, l, d in self.graph.edges}

    @cached_property
    def children(self):
        kids = [[] for _ in range(self.graph.n)]
        for s, l, d in sorted(self.graph.edges):
            kids[s].append((l, d))
        return kids

    @property
    def n(self):
        return self.graph.n

    @property
    def start(self):
        return self.graph.start

    @property
    def end(self):
        return self.graph.end

    @property
    def alphabet(self):
        return self.graph.alphabet

    def path_to(self, v):
        """Edges of the unique directed path start -> v."""
        edges = []
        while v != self.start:
            u, label = self.parent[v]
            edges.append((u, label, v))
            v = u
        edges.reverse()
        return edges

    def depth(self, v):
        return len(self.path_to(v))

    def is_leaf(self, v):
        return not self.children[v]

    def __eq__(self, other):
        if not isinstance(other, XTree):
            return NotImplemented
        return self.graph == other.graph

    def __hash__(self):
        return hash(self.graph)


def as_tree(t):
    return t if isinstance(t, XTree) else XTree(t)


def term_to_tree(t, alphabet):
    """Unretracted tree of a term: 1, x, product and ^+ become the
    identity graph, the base tree, glue and reroot_plus respectively."""
    def build(t):
        if isinstance(t, Identity):
            return identity_graph(alphabet)
        if isinstance(t, Gen):
            if t.symbol not in alphabet:
                raise UnknownGenerator(t.symbol)
            return base_tree(alphabet, t.symbol)
        if isinstance(t, Product):
            return glue(build(t.left), build(t.right))
        return reroot_plus(build(t.arg))
    return XTree(build(t))


def tree_of(src, alphabet):
    """Convenience: parse a term and build its (unretracted) tree."""
    return term_to_tree(parse_term(src, alphabet), tuple(sorted(set(alphabet))))


def random_tree(rng, n_edges, alphabet):
    """Uniform-ish random X-tree: vertex i > 0 hangs under a random earlier vertex."""
    alphabet = tuple(sorted(set(alphabet)))
    edges = [(rng.randrange(i), rng.choice(alphabet), i) for i in range(1, n_edges + 1)]
    return XTree(make_graph(alphabet, n_edges + 1, edges, 0, rng.randrange(n_edges + 1)))


def compact(t, keep):
    """Restrict a tree to the vertex set ``keep``, renumbering in id order."""
    keep = sorted(keep)
    index = {v: i for i, v in enumerate(keep)}
    g = t.graph
    edges = [(index[s], l, index[d]) for s, l, d in g.edges if s in index and d in index]
    return XTree(make_graph(g.alphabet, len(keep), edges, index[g.start], index[g.end]))


def trunk(t):
    """Edges of the simple path from start to end (empty when they coincide)."""
    t = as_tree(t)
    return t.path_to(t.end)


def trunk_vertices(t):
    t = as_tree(t)
    return [t.start] + [d for _, _, d in t.path_to(t.end)]


def cone_vertices(t, u):
    t = as_tree(t)
    if not 0 <= u < t.n:
        raise UnknownVertex(u)
    return reachable(t.graph, u)


def cone(t, u):
    """Subtree rooted at u; its end is the tree's end if inside, else u."""
    t = as_tree(t)
    verts = sorted(cone_vertices(t, u), key=lambda v: (v != u, v))
    index = {v: i for i, v in enumerate(verts)}
    end = index.get(t.end, 0)
    edges = [(index[s], l, index[d]) for s, l, d in t.graph.edges if s in index]
    return XTree(make_graph(t.alphabet, len(verts), edges, 0, end))


def copy_cone(t, u, v):
    """Attach a fresh copy of Cone(u) at v (the copy of u is fused with v).

    The end moves to its copy exactly when it lies in Cone(u).
    """
    t = as_tree(t)
    if not 0 <= v < t.n:
        raise UnknownVertex(v)
    verts = sorted(cone_vertices(t, u))
    image = {u: v}
    nxt = t.n
    for w in verts:
        if w != u:
            image[w] = nxt
            nxt += 1
    g = t.graph
    edges = set(g.edges)
    edges.update((image[s], l, image[d]) for s, l, d in g.edges if s in image)
    end = image[g.end] if g.end in image else g.end
    return XTree(make_graph(g.alphabet, nxt, edges, g.start, end))


def _tree_hom_checker(t):
    """Memoised test: does Cone(a) map homomorphically into Cone(b) root to root?"""
    kids = t.children
    memo = {}

    def hom(a, b):
        key = (a, b)
        if key not in memo:
            memo[key] = all(
                any(lb == la and hom(ca, cb) for lb, cb in kids[b])
                for la, ca in kids[a])
        return memo[key]

    return hom


def tree_retract(t):
    """Core of a tree by sibling folding, bottom-up.

    At each vertex, a child c1 whose cone avoids the end is deleted when its
    cone maps homomorphically into the cone of a remaining same-label
    sibling. Candidates with larger ids are folded first.
    """
    t = as_tree(t)
    g = t.graph
    kids = t.children
    hom = _tree_hom_checker(t)
    on_trunk = set(trunk_vertices(t))
    removed = set()

    order = []
    stack = [(g.start, False)]
    while stack:
        v, done = stack.pop()
        if done:
            order.append(v)
            continue
        stack.append((v, True))
        stack.extend((c, False) for _, c in kids[v])

    for v in order:
        by_label = {}
        for label, c in kids[v]:
            by_label.setdefault(label, []).append(c)
        for group in by_label.values():
            alive = sorted(group)
            changed = True
            while changed and len(alive) > 1:
                changed = False
                for c1 in reversed(alive):
                    if c1 in on_trunk:
                        continue
                    if any(hom(c1, c2) for c2 in alive if c2 != c1):
                        alive.remove(c1)
                        removed.add(c1)
                        changed = True
                        break
    keep = set()
    stack = [g.start]
    while stack:
        v = stack.pop()
        keep.add(v)
        stack.extend(c for _, c in kids[v] if c not in removed)
    return compact(t, keep)


def is_retracted_tree(t):
    t = as_tree(t)
    return tree_retract(t).n == t.n


def _identity_paths(t, oracle):
    """Yield (length, a, b) for nonempty paths a->b whose label is the identity."""
    kids = t.children
    for a in range(t.n):
        frontier = [(a, oracle.initial())]
        depth = 0
        while frontier:
            depth += 1
            nxt = []
            for v, state in frontier:
                for label, w in kids[v]:
                    s = oracle.step(state, label)
                    if oracle.is_identity(s):
                        yield depth, a, w
                    nxt.append((w, s))
            frontier = nxt


def normalize_idempaths_to_leaves(t, oracle):
    """Move cones through identity-labelled paths until all such paths end at leaves.

    Each move takes the shortest path a -> b with identity label and b not a
    leaf, and re-hangs the children of b under a (the end travels along if
    it is in Cone(b)). The result is retracted.
    """
    t = as_tree(t)
    while True:
        best = None
        for length, a, b in _identity_paths(t, oracle):
            if not t.is_leaf(b):
                key = (length, a, b)
                if best is None or key < best:
                    best = key
        if best is None:
            return tree_retract(t)
        _, a, b = best
        g = t.graph
        edges = {(a if s == b else s, l, d) for s, l, d in g.edges}
        end = a if g.end == b else g.end
        t = XTree(make_graph(g.alphabet, g.n, edges, g.start, end))


def relabel_tree(t, perm):
    return XTree(relabel(as_tree(t).graph, perm))
