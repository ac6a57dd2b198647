"""Enumerating finite pretzel monoids and checking identities on their tables.

Everything after :func:`enumerate_monoid` works on plain integer tables, so
the checks run equally on hand-made (or deliberately broken) tables.
"""
import itertools
from dataclasses import dataclass, field

import numpy as np

from .cancellative import eval_word
from .errors import CapExceeded, GraphFormatError
from .graphs import CanonicalCode
from .pretzel import (Pretzel, generator_pretzel, identity_pretzel, multiply,
                      plus)

DEFAULT_CAP = 10_000


@dataclass(frozen=True)
class EnumeratedMonoid:
    elements: tuple
    terms: tuple
    mul: tuple
    plus: tuple
    generators: dict = field(hash=False)
    alphabet: tuple = ()

    @property
    def size(self):
        return len(self.plus)

    @property
    def codes(self):
        return tuple(p.code for p in self.elements)

    @property
    def identity(self):
        return 0

    def idempotents(self):
        return [a for a in range(self.size) if self.mul[a][a] == a]

    def word_value(self, word):
        a = 0
        for x in word:
            a = self.mul[a][self.generators[x]]
        return a

    def with_tables(self, mul=None, plus=None):
        """Copy with replaced tables (for building corrupted examples)."""
        return EnumeratedMonoid(self.elements, self.terms,
                                tuple(map(tuple, mul if mul is not None else self.mul)),
                                tuple(plus if plus is not None else self.plus),
                                dict(self.generators), self.alphabet)


def enumerate_monoid(oracle, alphabet=None, cap=DEFAULT_CAP, rng=None):
    """Close {1} and the generators under product and plus.

    Elements are numbered in discovery order (0 is the identity, then the
    generators in alphabet order). When processing element k, its plus and
    its products with every already-processed element (both sides) are
    formed. With ``rng``, the next element to process is picked at random.
    Raises CapExceeded (carrying the partial element list) past ``cap``.
    """
    if alphabet is None:
        alphabet = getattr(oracle, "alphabet", ())
    alphabet = tuple(sorted(set(alphabet)))
    elements, terms, index = [], [], {}
    products, pluses = {}, {}

    def add(p, term):
        if p.code in index:
            return index[p.code]
        if len(elements) >= cap:
            raise CapExceeded(cap, tuple(elements))
        index[p.code] = len(elements)
        elements.append(p)
        terms.append(term)
        return index[p.code]

    add(identity_pretzel(oracle, alphabet), "1")
    gens = {x: add(generator_pretzel(oracle, x, alphabet), x) for x in alphabet}

    done = []
    pending = list(range(len(elements)))
    while pending:
        k = pending.pop(rng.randrange(len(pending)) if rng else 0)
        before = len(elements)
        pluses[k] = add(plus(elements[k]), _wrap_plus(terms[k]))
        done.append(k)
        for j in done:
            for a, b in ((k, j), (j, k)):
                if (a, b) not in products:
                    products[(a, b)] = add(multiply(elements[a], elements[b]),
                                           _join(terms[a], terms[b]))
        pending.extend(range(before, len(elements)))
    n = len(elements)
    mul = tuple(tuple(products[(a, b)] for b in range(n)) for a in range(n))
    plus_table = tuple(pluses[a] for a in range(n))
    return EnumeratedMonoid(tuple(elements), tuple(terms), mul, plus_table, gens, alphabet)


def _wrap_plus(term):
    return term + "^+" if _balanced_atom(term) else f"({term})^+"


def _balanced_atom(term):
    """True if term is a single generator or one parenthesised group."""
    if len(term) == 1:
        return True
    if not (term.startswith("(") and term.endswith(")")):
        return False
    depth = 0
    for i, ch in enumerate(term):
        depth += ch == "("
        depth -= ch == ")"
        if depth == 0 and i < len(term) - 1:
            return False
    return True


def _join(a, b):
    if a == "1":
        return b
    if b == "1":
        return a
    return a + b


# ---------------------------------------------------------------- reports

@dataclass
class Check:
    name: str
    passed: bool
    cases: int = 0
    witness: object = None

    def line(self):
        status = "pass" if self.passed else "FAIL"
        extra = "" if self.passed else f"  witness {self.witness}"
        return f"  [{status}] {self.name} ({self.cases} cases){extra}"


@dataclass
class Report:
    title: str
    checks: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def ok(self):
        return all(c.passed for c in self.checks)

    def check(self, name):
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def render(self):
        lines = [f"{self.title}: {'pass' if self.ok else 'FAIL'}"]
        lines += [c.line() for c in self.checks]
        lines += [f"  {n}" for n in self.notes]
        return "\n".join(lines)


@dataclass
class AdequacyReport(Report):
    extras: dict = field(default_factory=dict)

    def render(self):
        text = super().render()
        for name, (value, witness) in self.extras.items():
            text += f"\n  {name}: {'yes' if value else 'no'}" + ("" if witness is None else f" (witness {witness})")
        return text


def _first(cases):
    """Run a predicate over cases: (passed, count, first failing case)."""
    count = 0
    for case, ok in cases:
        count += 1
        if not ok:
            return False, count, case
    return True, count, None


def _add(report, name, cases):
    passed, count, witness = _first(cases)
    report.checks.append(Check(name, passed, count, witness))


# ---------------------------------------------------------------- left adequacy

def kernel(m, a):
    """{(x, y) : xa = ya}; a R* b iff the kernels agree."""
    col = [m.mul[x][a] for x in range(m.size)]
    return frozenset((x, y) for x in range(m.size) for y in range(m.size) if col[x] == col[y])


def r_star_classes(m):
    classes = {}
    for a in range(m.size):
        classes.setdefault(kernel(m, a), []).append(a)
    return sorted(classes.values())


def verify_left_adequate(m):
    n, mul, p = m.size, m.mul, m.plus
    r = range(n)
    rep = AdequacyReport("left adequacy")
    idem = m.idempotents()
    _add(rep, "idempotents commute",
         (((e, f), mul[e][f] == mul[f][e]) for e in idem for f in idem))
    classes = r_star_classes(m)
    _add(rep, "one idempotent per R*-class",
         ((tuple(c), sum(mul[a][a] == a for a in c) == 1) for c in classes))
    class_of = {a: tuple(c) for c in classes for a in c}
    _add(rep, "a+ is the idempotent R*-related to a",
         ((a, mul[p[a]][p[a]] == p[a] and class_of[p[a]] == class_of[a]) for a in r))
    _add(rep, "x+x = x", ((x, mul[p[x]][x] == x) for x in r))
    _add(rep, "(x+y+)+ = x+y+ = y+x+",
         (((x, y), p[mul[p[x]][p[y]]] == mul[p[x]][p[y]] == mul[p[y]][p[x]])
          for x in r for y in r))
    _add(rep, "(xy)+ = (xy+)+",
         (((x, y), p[mul[x][y]] == p[mul[x][p[y]]]) for x in r for y in r))
    _add(rep, "x^2 = x implies x = x+",
         ((x, mul[x][x] != x or p[x] == x) for x in r))
    _add(rep, "xy = zy implies xy+ = zy+",
         (((x, y, z), mul[x][y] != mul[z][y] or mul[x][p[y]] == mul[z][p[y]])
          for x in r for y in r for z in r))

    regular_fail = next((a for a in r if not any(mul[mul[a][x]][a] == a for x in r)), None)
    commuting = rep.check("idempotents commute").passed
    if regular_fail is not None:
        rep.extras["inverse"] = (False, f"{regular_fail} is not regular")
    elif not commuting:
        rep.extras["inverse"] = (False, rep.check("idempotents commute").witness)
    else:
        rep.extras["inverse"] = (True, None)
    ample_fail = next(((a, e) for a in r for e in idem
                       if mul[a][e] != mul[p[mul[a][e]]][a]), None)
    rep.extras["left ample"] = (ample_fail is None,
                                None if ample_fail is None else f"ae != (ae)+a at (a, e) = {ample_fail}")
    rep.notes.append("interpretation: inverse = regular with commuting idempotents; "
                     "left ample = (ae = (ae)+a for every a and idempotent e)")
    return rep


# ---------------------------------------------------------------- identities

def verify_identities(m, max_k=4):
    n, mul, p = m.size, m.mul, m.plus
    r = range(n)
    rep = Report("identities")
    idem = set(m.idempotents())

    _add(rep, "e+ = e for idempotent e", ((e, p[e] == e) for e in sorted(idem)))
    _add(rep, "(ab)+ = (ab+)+",
         (((a, b), p[mul[a][b]] == p[mul[a][p[b]]]) for a in r for b in r))
    _add(rep, "a+a = a", ((a, mul[p[a]][a] == a) for a in r))
    _add(rep, "ea+ = (ea)+",
         (((e, a), mul[e][p[a]] == p[mul[e][a]]) for e in sorted(idem) for a in r))
    _add(rep, "a+(ab)+ = (ab)+",
         (((a, b), mul[p[a]][p[mul[a][b]]] == p[mul[a][b]]) for a in r for b in r))

    pairs = [(x, y) for x in r for y in r if mul[x][y] in idem]
    _add(rep, "xy idempotent: yxyx idempotent",
         (((x, y), mul[mul[y][x]][mul[y][x]] in idem and
           mul[mul[mul[y][x]][y]][x] in idem) for x, y in pairs))
    _add(rep, "xy idempotent: xy+ = xyx",
         (((x, y), mul[x][p[y]] == mul[mul[x][y]][x]) for x, y in pairs))
    _add(rep, "xy idempotent: xz+y = xy(xz)+ and is idempotent",
         (((x, y, z), mul[mul[x][p[z]]][y] == mul[mul[x][y]][p[mul[x][z]]]
           and mul[mul[x][p[z]]][y] in idem) for x, y in pairs for z in r))

    for k in range(2, max_k + 1):
        passed, count, witness = _idemtrunk(m, k)
        rep.checks.append(Check(
            f"x1 u1+ ... xk idempotent product expansion, k={k}", passed, count, witness))
    return rep


def _idemtrunk(m, k):
    """Exhaustive check of the k-ary expansion, vectorised over the u's.

    For x1..xk with x1...xk idempotent and any u1..u(k-1):
    x1 u1+ x2 ... u(k-1)+ xk = (x1...xk)(x1u1)+(x1x2u2)+...(x1...x(k-1)u(k-1))+,
    and the left side is idempotent.
    """
    n = m.size
    mul = np.asarray(m.mul, dtype=np.int32)
    plus_arr = np.asarray(m.plus, dtype=np.int32)
    idem = np.array([m.mul[a][a] == a for a in range(n)])
    us = np.array(list(itertools.product(range(n), repeat=k - 1)), dtype=np.int32).reshape(-1, k - 1)
    count = 0
    for xs in itertools.product(range(n), repeat=k):
        prefix = [xs[0]]
        for x in xs[1:]:
            prefix.append(m.mul[prefix[-1]][x])
        if not idem[prefix[-1]]:
            continue
        lhs = np.full(len(us), xs[0], dtype=np.int32)
        for i in range(k - 1):
            lhs = mul[mul[lhs, plus_arr[us[:, i]]], xs[i + 1]]
        rhs = np.full(len(us), prefix[-1], dtype=np.int32)
        for i in range(k - 1):
            rhs = mul[rhs, plus_arr[mul[prefix[i], us[:, i]]]]
        good = (lhs == rhs) & idem[lhs]
        count += len(us)
        if not good.all():
            bad = int(np.argmin(good))
            return False, count, (xs, tuple(int(u) for u in us[bad]))
    return True, count, None


def words(alphabet, max_len):
    for length in range(max_len + 1):
        yield from itertools.product(alphabet, repeat=length)


def verify_relations(m, oracle, max_len=6):
    """w+ = w in m for every word w (length <= max_len) with [w] = 1 in the oracle."""
    rep = Report("defining relations")
    constrained = [w for w in words(m.alphabet, max_len)
                   if oracle.is_identity(_eval(oracle, w))]
    _add(rep, f"w+ = w for identity words up to length {max_len}",
         (("".join(w) or "1", m.plus[m.word_value(w)] == m.word_value(w))
          for w in constrained))
    return rep


def _eval(oracle, w):
    if hasattr(oracle, "generators"):
        return eval_word(oracle, w)
    s = oracle.initial()
    for x in w:
        s = oracle.step(s, x)
    return s


# ---------------------------------------------------------------- table text

def export_table(m):
    lines = [f"elements: {m.size}",
             f"alphabet: {' '.join(m.alphabet)}".rstrip(),
             "generators:" + "".join(f" {x}={i}" for x, i in sorted(m.generators.items()))]
    lines += [f"{i} {p.code.to_text()} {t}" for i, (p, t) in enumerate(zip(m.elements, m.terms))]
    lines.append("mul:")
    lines += [" ".join(map(str, row)) for row in m.mul]
    lines.append("plus: " + " ".join(map(str, m.plus)))
    return "\n".join(lines) + "\n"


def parse_table(text, oracle):
    """Inverse of export_table; pretzels are rebuilt from their codes."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    try:
        n = int(lines[0].split(":", 1)[1])
        alphabet = tuple(lines[1].split(":", 1)[1].split())
        gens = {}
        for item in lines[2].split(":", 1)[1].split():
            x, i = item.split("=")
            gens[x] = int(i)
        elements, terms = [], []
        for i in range(n):
            idx, code, term = lines[3 + i].split(" ", 2)
            if int(idx) != i:
                raise ValueError(f"element line {i} out of order")
            cc = CanonicalCode.from_text(code, alphabet)
            elements.append(Pretzel(cc.graph(), cc, oracle))
            terms.append(term)
        if lines[3 + n].strip() != "mul:":
            raise ValueError("expected 'mul:'")
        mul = tuple(tuple(int(v) for v in lines[4 + n + i].split()) for i in range(n))
        plus_line = lines[4 + 2 * n]
        if not plus_line.startswith("plus:"):
            raise ValueError("expected 'plus:'")
        plus_table = tuple(int(v) for v in plus_line.split(":", 1)[1].split())
    except (IndexError, ValueError) as exc:
        raise GraphFormatError(f"bad table text: {exc}") from None
    return EnumeratedMonoid(tuple(elements), tuple(terms), mul, plus_table, gens, alphabet)
