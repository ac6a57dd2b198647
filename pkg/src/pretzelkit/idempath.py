"""Identifying the endpoints of identity-labelled paths.

An idempath is a directed path whose label evaluates to the identity in C.
:func:`tilde` fuses the two ends of every idempath until none with distinct
ends remains; the result does not depend on the order of the merges.

:class:`SemiwalkOracle` answers the same question by a different route: it
searches for a walk between two vertices, ignoring edge directions, whose
label can be built from the empty word by inserting identity words (or
their formal inverses), and counts the insertions needed.
"""
import heapq
from collections import deque
from dataclasses import dataclass
from functools import lru_cache

from .errors import AmbiguousValue, UnknownVertex
from .graphs import merge_vertices, quotient_map

INF = float("inf")


def _check_vertex(g, *vs):
    for v in vs:
        if not 0 <= v < g.n:
            raise UnknownVertex(v)


def reachable_values(g, oracle, source):
    """vertex -> set of oracle states [label(p)] over directed paths p from source."""
    _check_vertex(g, source)
    out = g.out_adjacency
    start = (source, oracle.initial())
    seen = {start}
    queue = deque([start])
    while queue:
        v, s = queue.popleft()
        for label, w in out[v]:
            nxt = (w, oracle.step(s, label))
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    values = {}
    for v, s in seen:
        values.setdefault(v, set()).add(s)
    return values


def identity_targets(g, oracle, source):
    """Vertices other than source reached from it by an idempath."""
    return sorted(v for v, states in reachable_values(g, oracle, source).items()
                  if v != source and any(oracle.is_identity(s) for s in states))


@dataclass(frozen=True)
class MergeTrace:
    """Pairs merged by :func:`tilde` (original vertex ids) and the final map."""
    pairs: tuple
    mapping: tuple

    def to_text(self):
        return "".join(f"merge {a} {b}\n" for a, b in self.pairs)

    @classmethod
    def from_text(cls, text, n):
        pairs = []
        for line in text.splitlines():
            if not line.strip():
                continue
            word, a, b = line.split()
            if word != "merge":
                raise ValueError(f"bad trace line {line!r}")
            pairs.append((int(a), int(b)))
        mapping, _ = quotient_map(n, pairs)
        return cls(tuple(pairs), tuple(mapping))

    def replay(self, g, oracle=None):
        """Re-apply the merges to g, one at a time.

        With an oracle, each merge is checked to identify the ends of an
        idempath of the graph at that moment; returns the final graph.
        """
        current, mapping = g, list(range(g.n))
        for a, b in self.pairs:
            ca, cb = mapping[a], mapping[b]
            if oracle is not None and cb not in identity_targets(current, oracle, ca):
                raise ValueError(f"merge {a} {b} is not an idempath identification")
            current, step = merge_vertices(current, [(ca, cb)])
            mapping = [step[m] for m in mapping]
        if tuple(mapping) != self.mapping:
            raise ValueError("replayed map differs from the recorded map")
        return current


def tilde(g, oracle, rng=None):
    """Idempath-identified descendant of g, with the merges that produced it.

    Without ``rng`` the merges are deterministic: vertices are scanned in id
    order and the first one with idempath targets is fused with all of
    them, then the scan restarts. With ``rng`` a uniformly random eligible
    pair is merged at each step.
    """
    current = g
    mapping = list(range(g.n))
    pairs = []
    while True:
        if rng is None:
            chosen = None
            for u in range(current.n):
                targets = identity_targets(current, oracle, u)
                if targets:
                    chosen = [(u, v) for v in targets]
                    break
        else:
            eligible = [(u, v) for u in range(current.n)
                        for v in identity_targets(current, oracle, u)]
            chosen = [rng.choice(eligible)] if eligible else None
        if not chosen:
            break
        rep = {}
        for old in range(g.n - 1, -1, -1):
            rep[mapping[old]] = old
        pairs.extend((rep[u], rep[v]) for u, v in chosen)
        current, step = merge_vertices(current, chosen)
        mapping = [step[m] for m in mapping]
    return current, MergeTrace(tuple(pairs), tuple(mapping))


def tilde_graph(g, oracle, rng=None):
    return tilde(g, oracle, rng)[0]


def is_idempath_identified(g, oracle):
    return all(not identity_targets(g, oracle, u) for u in range(g.n))


def is_identified(g, oracle, u, v):
    """True iff u and v become the same vertex of tilde(g)."""
    _check_vertex(g, u, v)
    if u == v:
        return True
    mapping = tilde(g, oracle)[1].mapping
    return mapping[u] == mapping[v]


# ---------------------------------------------------------------- C-values

def c_values(g, c):
    """The C-value of every vertex: [label] of any directed path from start.

    Raises AmbiguousValue if two start paths to one vertex disagree.
    """
    out = g.out_adjacency
    value = {g.start: c.initial()}
    via = {g.start: None}
    queue = deque([g.start])
    conflict = None
    while queue:
        v = queue.popleft()
        for label, w in out[v]:
            s = c.step(value[v], label)
            if w not in value:
                value[w] = s
                via[w] = (v, label)
                queue.append(w)
            elif value[w] != s and conflict is None:
                conflict = (v, label, w)
    if conflict is not None:
        v, label, w = conflict

        def word(x):
            letters = []
            while via[x] is not None:
                x, l = via[x]
                letters.append(l)
            return tuple(reversed(letters))

        raise AmbiguousValue(w, word(w), word(v) + (label,))
    return [value[v] for v in range(g.n)]


def c_value(g, c, v):
    _check_vertex(g, v)
    return c_values(g, c)[v]


# ---------------------------------------------------------------- semiwalks

@dataclass(frozen=True)
class Semiwalk:
    """A walk ignoring edge direction: steps are (edge, +1 forward | -1 backward)."""
    origin: int
    steps: tuple

    @property
    def terminus(self):
        v = self.origin
        for (s, _, d), sign in self.steps:
            v = d if sign > 0 else s
        return v

    @property
    def label(self):
        return tuple((l, sign) for (_, l, _), sign in self.steps)

    def is_walk_in(self, g):
        v = self.origin
        for e, sign in self.steps:
            if e not in g.edges:
                return False
            s, _, d = e
            if (s if sign > 0 else d) != v:
                return False
            v = d if sign > 0 else s
        return True


@dataclass(frozen=True)
class Yes:
    semiwalk: Semiwalk
    insertions: int


@dataclass(frozen=True)
class No:
    pass


@dataclass(frozen=True)
class Budget:
    insertions: int


def insertion_count(label, oracle):
    """Least number of insertions of identity words, or formal inverses of
    identity words, that build ``label`` from the empty word (INF if none).

    ``label`` is a sequence of (letter, +1 | -1). Interval dynamic
    programming over the nesting structure of the insertions.
    """
    word = tuple(label)
    n = len(word)

    @lru_cache(maxsize=None)
    def f(i, j):
        if i == j:
            return 0
        best = INF
        for m in range(i + 1, j):
            best = min(best, f(i, m) + f(m, j))
        best = min(best, 1 + pos(i, j, oracle.initial()), 1 + neg(i, j, oracle.initial()))
        return best

    @lru_cache(maxsize=None)
    def pos(i, j, s):
        # word[i:j] = a1 S a2 S ... ak with all ai positive and [a1..ak] reaching 1 from s
        letter, sign = word[i]
        if sign < 0:
            return INF
        s = oracle.step(s, letter)
        if j == i + 1:
            return 0 if oracle.is_identity(s) else INF
        return min((f(i + 1, m) + pos(m, j, s) for m in range(i + 1, j)), default=INF)

    @lru_cache(maxsize=None)
    def neg(i, j, s):
        # word[i:j] = ak^-1 S ... S a1^-1, consumed from the right
        letter, sign = word[j - 1]
        if sign > 0:
            return INF
        s = oracle.step(s, letter)
        if j - 1 == i:
            return 0 if oracle.is_identity(s) else INF
        return min((f(m, j - 1) + neg(i, m, s) for m in range(i + 1, j)), default=INF)

    return f(0, n)


class SemiwalkOracle:
    """All-pairs least insertion counts for constructable semiwalks.

    Constructable labels follow the grammar
    ``S := empty | S S | a1 S a2 S ... S ak`` (ai forward edges with
    [a1..ak] = 1), closed under reversal. The least count for every vertex
    pair is a least fixpoint, found by repeated Dijkstra runs over
    (vertex, oracle state) in which earlier pairs may be used as jumps.
    """

    def __init__(self, g, oracle):
        self.g = g
        self.oracle = oracle
        n = g.n
        self.cost = [[INF] * n for _ in range(n)]
        self.how = [[None] * n for _ in range(n)]
        for v in range(n):
            self.cost[v][v] = 0
            self.how[v][v] = ("refl",)
        self._solve()

    def _set(self, p, q, c, how):
        self.cost[p][q] = c
        self.how[p][q] = how
        self.cost[q][p] = c
        self.how[q][p] = ("rev", p, q)

    def _solve(self):
        n = self.g.n
        changed = True
        while changed:
            changed = False
            for p in range(n):
                for q, (c, path) in self._blocks_from(p).items():
                    if c < self.cost[p][q]:
                        self._set(p, q, c, ("block", path))
                        changed = True
            for r in range(n):
                for p in range(n):
                    if self.cost[p][r] == INF or p == r:
                        continue
                    for q in range(n):
                        if q in (p, r):
                            continue
                        c = self.cost[p][r] + self.cost[r][q]
                        if c < self.cost[p][q]:
                            self._set(p, q, c, ("concat", r))
                            changed = True

    def _blocks_from(self, p):
        """Cheapest single outer insertion from p to each q: 1 + jump costs."""
        o = self.oracle
        out = self.g.out_adjacency
        n = self.g.n
        start = (p, o.initial(), False)
        dist = {start: 0}
        back = {start: None}
        heap = [(0, 0, start)]
        tick = 1
        found = {}
        while heap:
            d, _, state = heapq.heappop(heap)
            if d > dist[state]:
                continue
            v, s, moved = state
            if moved and o.is_identity(s):
                if v not in found or d + 1 < found[v][0]:
                    found[v] = (d + 1, state)
            moves = [((w, o.step(s, label), True), 0, ("edge", (v, label, w)))
                     for label, w in out[v]]
            moves += [((z, s, moved), self.cost[v][z], ("jump", v, z))
                      for z in range(n) if z != v and self.cost[v][z] < INF]
            for nxt, c, step in moves:
                nd = d + c
                if nd < dist.get(nxt, INF):
                    dist[nxt] = nd
                    back[nxt] = (state, step)
                    heapq.heappush(heap, (nd, tick, nxt))
                    tick += 1
        result = {}
        for q, (c, state) in found.items():
            if q == p:
                continue
            steps = []
            while back[state] is not None:
                state, step = back[state]
                steps.append(step)
            result[q] = (c, tuple(reversed(steps)))
        return result

    def walk(self, p, q):
        """Expand the recorded derivation of (p, q) into a semiwalk."""
        return Semiwalk(p, tuple(self._expand(p, q)))

    def _expand(self, p, q):
        how = self.how[p][q]
        kind = how[0]
        if kind == "refl":
            return []
        if kind == "rev":
            forward = self._expand(how[1], how[2])
            return [(e, -sign) for e, sign in reversed(forward)]
        if kind == "concat":
            r = how[1]
            return self._expand(p, r) + self._expand(r, q)
        steps = []
        for step in how[1]:
            if step[0] == "edge":
                steps.append((step[1], 1))
            else:
                steps.extend(self._expand(step[1], step[2]))
        return steps

    def query(self, u, v, max_insertions=None):
        _check_vertex(self.g, u, v)
        if max_insertions is None:
            max_insertions = default_insertion_budget(self.g)
        c = self.cost[u][v]
        if c == INF:
            return No()
        if c > max_insertions:
            return Budget(c)
        walk = self.walk(u, v)
        count = insertion_count(walk.label, self.oracle)
        if not walk.is_walk_in(self.g) or walk.terminus != v or count > c:
            raise AssertionError(f"semiwalk witness for ({u}, {v}) failed replay")
        return Yes(walk, count)


def default_insertion_budget(g):
    return g.n * (len(g.edges) + 1)


def semiwalk_identified_oracle(g, oracle, u, v, max_insertions=None):
    """Yes(semiwalk) if a constructable semiwalk u -> v needs at most
    ``max_insertions`` insertions, Budget if it needs more, No if none exists."""
    return SemiwalkOracle(g, oracle).query(u, v, max_insertions)
