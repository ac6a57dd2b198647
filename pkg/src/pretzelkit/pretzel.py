"""Pretzels: trees with idempaths identified, then cut down to their core.

A pretzel is stored in canonical vertex order together with its canonical
code, so equality of pretzels is equality of codes. Products and plus
re-run the identify-then-core pipeline on the glued or rerooted graph.
"""
from dataclasses import dataclass, field

from .errors import OracleMismatch, PretzelError
from .graphs import (BirootedGraph, base_tree, canonical_form, coreachable,
                     format_graph, glue, identity_graph, make_graph,
                     parse_graph, relabel, reroot_plus)
from .idempath import c_values, is_idempath_identified, tilde
from .retractcore import core, is_core
from .terms import as_tree, parse_term, term_to_tree


@dataclass(frozen=True)
class Pretzel:
    graph: BirootedGraph = field(compare=False)
    code: object
    oracle: object = field(repr=False)

    @property
    def alphabet(self):
        return self.graph.alphabet

    @property
    def n(self):
        return self.graph.n

    def __mul__(self, other):
        return multiply(self, other)

    def plus(self):
        return plus(self)


def _oracle_alphabet(oracle, alphabet):
    if alphabet is not None:
        return tuple(sorted(set(alphabet)))
    return tuple(sorted(getattr(oracle, "alphabet", ()) or ()))


def reduce_graph(g, oracle, certify=False):
    """core(tilde(g)) wrapped as a pretzel in canonical vertex order."""
    h = core(tilde(g, oracle)[0])
    code, perm = canonical_form(h)
    h = relabel(h, perm)
    if certify:
        if not is_idempath_identified(h, oracle):
            raise PretzelError("pretzel still has an idempath with distinct ends")
        if not is_core(h):
            raise PretzelError("pretzel still admits a proper retract")
    return Pretzel(h, code, oracle)


def pretzel_of_tree(t, oracle, certify=True):
    return reduce_graph(as_tree(t).graph, oracle, certify)


def pretzel_of_term(src, oracle, alphabet=None):
    alphabet = _oracle_alphabet(oracle, alphabet)
    term = parse_term(src, alphabet) if isinstance(src, str) else src
    return pretzel_of_tree(term_to_tree(term, alphabet), oracle)


def identity_pretzel(oracle, alphabet=None):
    return reduce_graph(identity_graph(_oracle_alphabet(oracle, alphabet)), oracle)


def generator_pretzel(oracle, label, alphabet=None):
    return reduce_graph(base_tree(_oracle_alphabet(oracle, alphabet), label), oracle)


def _same_oracle(a, b):
    if a.oracle != b.oracle or a.alphabet != b.alphabet:
        raise OracleMismatch("pretzels come from different monoids or alphabets")


def multiply(a, b):
    _same_oracle(a, b)
    return reduce_graph(glue(a.graph, b.graph), a.oracle)


def plus(a):
    return reduce_graph(reroot_plus(a.graph), a.oracle)


def equal_in_presentation(s, t, oracle, alphabet=None):
    """Do terms s and t name the same element of the pretzel monoid?"""
    return pretzel_of_term(s, oracle, alphabet) == pretzel_of_term(t, oracle, alphabet)


# ---------------------------------------------------------------- Cayley check

@dataclass(frozen=True)
class CayleyReport:
    violations: tuple

    @property
    def ok(self):
        return not self.violations


def check_cayley_embedding(p, c):
    """For each vertex v, the vertices on start->v paths must get distinct C-values.

    Label preservation is automatic from how C-values are defined, so
    vertex injectivity is what makes each such piece embed in the Cayley
    graph of c. Violations are (v, u1, u2, value) tuples.
    """
    g = p.graph if isinstance(p, Pretzel) else p
    values = c_values(g, c)
    violations = []
    for v in range(g.n):
        seen = {}
        span = coreachable(g, v)
        for u in sorted(span):
            val = values[u]
            if val in seen:
                violations.append((v, seen[val], u, val))
            else:
                seen[val] = u
        for a, l, b in g.edges:
            if b in span and c.step(values[a], l) != values[b]:
                violations.append((v, a, b, values[b]))
    return CayleyReport(tuple(violations))


# ---------------------------------------------------------------- almost simple paths

def edge_index(g):
    """Edge -> 1-based index, edges ordered by (src, label, dst)."""
    return {e: i for i, e in enumerate(g.sorted_edges(), 1)}


@dataclass(frozen=True)
class ASPTree:
    """Trie of almost simple start paths of a pretzel.

    ``tree`` carries the X labels; ``eps[(s, x, d)]`` is the index of the
    pretzel edge a tree edge came from; ``image[v]`` is the pretzel vertex
    where the path to v ends. ``endpoints`` are the tree vertices whose
    image is the pretzel's end.
    """
    tree: BirootedGraph
    eps: dict = field(compare=False)
    image: tuple
    endpoints: frozenset

    def with_end(self, v):
        g = self.tree
        return make_graph(g.alphabet, g.n, g.edges, g.start, v)

    def doubly_labelled(self, v):
        """The tree with labels "x:i" (X label and edge index), ended at v."""
        g = self.tree
        edges = [(s, f"{l}:{self.eps[(s, l, d)]}", d) for s, l, d in g.edges]
        return make_graph({l for _, l, _ in edges}, g.n, edges, g.start, v)

    def is_deterministic(self):
        seen = set()
        for s, l, d in self.tree.edges:
            key = (s, self.eps[(s, l, d)])
            if key in seen:
                return False
            seen.add(key)
        return True


def asp_tree(p):
    """Trie of all start paths repeating no vertex except possibly the last.

    Children are keyed by edge index, so the trie is already deterministic
    in those labels: no folding step is left to do.
    """
    g = p.graph if isinstance(p, Pretzel) else p
    index = edge_index(g)
    out = sorted(((s, l, d) for s, l, d in g.edges), key=lambda e: index[e])
    by_src = [[e for e in out if e[0] == v] for v in range(g.n)]
    image = [g.start]
    edges = []
    eps = {}

    def grow(node, v, on_path):
        for e in by_src[v]:
            w = e[2]
            child = len(image)
            image.append(w)
            edges.append((node, e[1], child))
            eps[(node, e[1], child)] = index[e]
            if w not in on_path:
                on_path.add(w)
                grow(child, w, on_path)
                on_path.discard(w)

    grow(0, g.start, {g.start})
    tree = make_graph(g.alphabet, len(image), edges, 0, 0)
    ends = frozenset(v for v, w in enumerate(image) if w == g.end)
    return ASPTree(tree, eps, tuple(image), ends)


# ---------------------------------------------------------------- text format

def format_pretzel(p):
    name = getattr(p.oracle, "name", "monoid")
    return f"oracle: {name}\n" + format_graph(p.graph)


def parse_pretzel(text, resolve_oracle):
    """Inverse of format_pretzel; ``resolve_oracle(name)`` returns the oracle."""
    lines = text.splitlines()
    header = lines[0].partition(":") if lines else ("", "", "")
    if header[0].strip() != "oracle" or not header[1]:
        raise PretzelError("pretzel text must start with 'oracle: NAME'")
    oracle = resolve_oracle(header[2].strip())
    g = parse_graph("\n".join(lines[1:]))
    code, perm = canonical_form(g)
    return Pretzel(relabel(g, perm), code, oracle)
