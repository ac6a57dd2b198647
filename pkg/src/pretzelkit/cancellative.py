"""Finite right cancellative monoids and identity-word oracles.

Only the set of words that evaluate to the identity matters downstream, so
both kinds of oracle expose the same small automaton interface:
``initial()``, ``step(state, label)`` and ``is_identity(state)``.
"""
import json
from dataclasses import dataclass, field
from importlib import resources

from .errors import (MissingGenerator, MonoidParseError, NoIdentity,
                     NotAssociative, NotRightCancellative, UnknownGenerator)
from .graphs import make_graph

BUNDLED = ("c2", "c3", "z3xz3")


@dataclass(frozen=True)
class FiniteMonoid:
    elements: tuple
    identity: int
    table: tuple
    generators: dict = field(hash=False)
    name: str = "monoid"

    @property
    def size(self):
        return len(self.elements)

    @property
    def alphabet(self):
        return tuple(sorted(self.generators))

    def mul(self, a, b):
        return self.table[a][b]

    # oracle interface
    def initial(self):
        return self.identity

    def step(self, state, label):
        try:
            return self.table[state][self.generators[label]]
        except KeyError:
            raise UnknownGenerator(label) from None

    def is_identity(self, state):
        return state == self.identity

    def to_json(self):
        e = self.elements
        return json.dumps({
            "elements": list(e),
            "identity": e[self.identity],
            "table": [[e[k] for k in row] for row in self.table],
            "generators": {x: e[i] for x, i in sorted(self.generators.items())},
        }, indent=2) + "\n"


@dataclass(frozen=True)
class FreeMonoid:
    """Oracle for the free monoid: only the empty word is the identity.

    Modelled as a two-state automaton (identity, anything else) so the
    reachability engine treats it exactly like a finite monoid.
    """
    alphabet: tuple = ()
    name: str = "free"

    def initial(self):
        return 0

    def step(self, state, label):
        return 1

    def is_identity(self, state):
        return state == 0


def validate_monoid(elements, identity, table, generators):
    n = len(elements)
    if len(table) != n or any(len(row) != n for row in table):
        raise MonoidParseError(f"table must be {n}x{n}")
    for a in range(n):
        for b in range(n):
            ab = table[a][b]
            for c in range(n):
                if table[ab][c] != table[a][table[b][c]]:
                    raise NotAssociative(elements[a], elements[b], elements[c])
    e = identity
    if any(table[e][a] != a or table[a][e] != a for a in range(n)):
        raise NoIdentity(f"{elements[e]} is not a two-sided identity")
    for a in range(n):
        seen = {}
        for x in range(n):
            xa = table[x][a]
            if xa in seen:
                raise NotRightCancellative(elements[seen[xa]], elements[x], elements[a])
            seen[xa] = x


def make_monoid(elements, identity, table, generators, alphabet=None, name="monoid"):
    """Build and fully validate a monoid given by indices."""
    elements = tuple(elements)
    table = tuple(tuple(int(v) for v in row) for row in table)
    generators = dict(generators)
    validate_monoid(elements, identity, table, generators)
    for x in (alphabet or ()):
        if x not in generators:
            raise MissingGenerator(x)
    if alphabet is not None:
        generators = {x: generators[x] for x in alphabet}
    return FiniteMonoid(elements, identity, table, generators, name)


def load_monoid(src, alphabet=None, name="monoid"):
    """Parse a JSON monoid document (fields elements/identity/table/generators)."""
    try:
        doc = json.loads(src)
    except json.JSONDecodeError as exc:
        raise MonoidParseError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise MonoidParseError("monoid document must be a JSON object")
    for key in ("elements", "identity", "table", "generators"):
        if key not in doc:
            raise MonoidParseError(f"missing field {key!r}")
    elements = doc["elements"]
    if not isinstance(elements, list) or not all(isinstance(e, str) for e in elements):
        raise MonoidParseError("'elements' must be a list of strings")
    if len(set(elements)) != len(elements):
        raise MonoidParseError("duplicate element names")
    index = {e: i for i, e in enumerate(elements)}

    def lookup(name_):
        if name_ not in index:
            raise MonoidParseError(f"unknown element {name_!r}")
        return index[name_]

    table = doc["table"]
    if not isinstance(table, list) or not all(isinstance(r, list) for r in table):
        raise MonoidParseError("'table' must be a list of rows")
    table = [[lookup(v) for v in row] for row in table]
    gens = doc["generators"]
    if not isinstance(gens, dict):
        raise MonoidParseError("'generators' must be an object")
    generators = {str(x): lookup(v) for x, v in gens.items()}
    return make_monoid(elements, lookup(doc["identity"]), table, generators,
                       alphabet, name)


def load_monoid_file(path, alphabet=None):
    """Load a monoid from a path, or a bundled one by name (c2, c3, z3xz3)."""
    stem = str(path)
    if stem in BUNDLED:
        return bundled_monoid(stem, alphabet)
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    name = stem.rsplit("/", 1)[-1]
    return load_monoid(text, alphabet, name=name)


def bundled_monoid(name, alphabet=None):
    text = resources.files("pretzelkit").joinpath(f"data/{name}.json").read_text("utf-8")
    return load_monoid(text, alphabet, name=name)


def cyclic_group(n, symbol="x"):
    """Z_n written multiplicatively, generated by ``symbol`` -> 1."""
    elements = ["1"] + [f"{symbol}{k}" if k > 1 else symbol for k in range(1, n)]
    table = [[(a + b) % n for b in range(n)] for a in range(n)]
    gens = {symbol: 1 % n}
    return make_monoid(elements, 0, table, gens, name=f"c{n}")


def direct_product(m, k, generators, name=None):
    """m x k with generator images given as pairs of element indices."""
    pairs = [(a, b) for a in range(m.size) for b in range(k.size)]
    index = {p: i for i, p in enumerate(pairs)}
    elements = [f"({m.elements[a]},{k.elements[b]})" for a, b in pairs]
    table = [[index[(m.table[a][c], k.table[b][d])] for (c, d) in pairs] for (a, b) in pairs]
    gens = {x: index[p] for x, p in generators.items()}
    return make_monoid(elements, index[(m.identity, k.identity)], table, gens,
                       name=name or f"{m.name}x{k.name}")


def z3_squared():
    """Z3 x Z3 with x -> (1,0) and y -> (0,1)."""
    c3 = cyclic_group(3)
    return direct_product(c3, c3, {"x": (1, 0), "y": (0, 1)}, name="z3xz3")


def eval_word(c, word):
    """Left-to-right evaluation; the empty word gives the identity."""
    state = c.initial()
    for x in word:
        if x not in c.generators:
            raise UnknownGenerator(x)
        state = c.step(state, x)
    return state


def is_identity_word(oracle, word):
    state = oracle.initial()
    for x in word:
        state = oracle.step(state, x)
    return oracle.is_identity(state)


def is_left_cancellative(c):
    return all(len({c.table[a][x] for x in range(c.size)}) == c.size for a in range(c.size))


def cayley_graph(c, alphabet=None):
    """Right Cayley graph on the part of c reachable from the identity.

    Start and end are the identity; see :func:`cayley_elements` for the
    element carried by each vertex.
    """
    return cayley_elements(c, alphabet)[0]


def cayley_elements(c, alphabet=None):
    """``(graph, order)`` where vertex i of the Cayley graph is element order[i]."""
    alphabet = tuple(sorted(alphabet if alphabet is not None else c.generators))
    order = [c.identity]
    index = {c.identity: 0}
    edges = []
    i = 0
    while i < len(order):
        a = order[i]
        for x in alphabet:
            b = c.step(a, x)
            if b not in index:
                index[b] = len(order)
                order.append(b)
            edges.append((index[a], x, index[b]))
        i += 1
    g = make_graph(alphabet, len(order), edges, 0, 0)
    return g, order
