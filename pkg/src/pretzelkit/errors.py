"""Exception hierarchy shared by all pretzelkit modules."""


class PretzelError(Exception):
    """Base class for every domain error raised by pretzelkit."""


# graphs

class GraphError(PretzelError):
    pass


class UnreachableVertex(GraphError):
    def __init__(self, vertex):
        super().__init__(f"vertex {vertex} is not reachable from the start vertex")
        self.vertex = vertex


class DanglingRoot(GraphError):
    pass


class DanglingEdge(GraphError):
    def __init__(self, edge):
        super().__init__(f"edge {edge} has an endpoint outside the vertex set")
        self.edge = edge


class UnknownVertex(GraphError):
    def __init__(self, vertex):
        super().__init__(f"unknown vertex {vertex}")
        self.vertex = vertex


class AlphabetMismatch(GraphError):
    pass


class UnknownLabel(GraphError):
    def __init__(self, label):
        super().__init__(f"edge label {label!r} is not in the alphabet")
        self.label = label


class SizeLimitExceeded(GraphError):
    pass


class GraphFormatError(GraphError):
    pass


class NotATree(GraphError):
    pass


# terms

class TermSyntaxError(PretzelError, ValueError):
    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnknownGenerator(PretzelError, ValueError):
    def __init__(self, symbol):
        super().__init__(f"unknown generator {symbol!r}")
        self.symbol = symbol


# cancellative monoids

class MonoidError(PretzelError):
    pass


class MonoidParseError(MonoidError):
    pass


class NotAssociative(MonoidError):
    def __init__(self, a, b, c):
        super().__init__(f"(ab)c != a(bc) for a={a}, b={b}, c={c}")
        self.witness = (a, b, c)


class NoIdentity(MonoidError):
    pass


class NotRightCancellative(MonoidError):
    def __init__(self, x, y, a):
        super().__init__(f"{x}*{a} == {y}*{a} but {x} != {y}")
        self.witness = (x, y, a)


class MissingGenerator(MonoidError):
    def __init__(self, symbol):
        super().__init__(f"generator {symbol!r} has no image in the monoid")
        self.symbol = symbol


class AmbiguousValue(MonoidError):
    def __init__(self, vertex, word, other):
        super().__init__(
            f"vertex {vertex} is reached by root paths {''.join(word) or 'ε'!r} "
            f"and {''.join(other) or 'ε'!r} with different values")
        self.vertex = vertex
        self.words = (word, other)


# searches and pipelines

class SearchBudgetExceeded(PretzelError):
    pass


class OracleMismatch(PretzelError):
    pass


class CapExceeded(PretzelError):
    def __init__(self, cap, partial=None):
        super().__init__(f"cap exceeded at {cap}")
        self.cap = cap
        self.partial = partial
