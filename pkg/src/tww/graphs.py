"""Finite simple graphs, vertex orders, and semi-induced pattern checking.

Vertices carry opaque string labels; all algorithms work on dense integer
indices with adjacency stored as bit masks.  Graph values are immutable
after construction and safe to share.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from tww.errors import FormatError

PATTERN_KINDS = ("biclique", "half_graph", "matching", "anti_matching", "transversal_pair")


class Graph:
    """Immutable simple graph: distinct labels, symmetric loop-free adjacency."""

    __slots__ = ("labels", "adj", "_index")

    def __init__(self, labels: Sequence[str], adj: Sequence[int]):
        labels = tuple(labels)
        adj = tuple(adj)
        if len(set(labels)) != len(labels):
            raise ValueError("duplicate vertex labels")
        if len(adj) != len(labels):
            raise ValueError("adjacency size mismatch")
        n = len(labels)
        for i, row in enumerate(adj):
            if row >> n:
                raise ValueError("adjacency bit out of range")
            if row >> i & 1:
                raise ValueError(f"loop at vertex {labels[i]}")
        for i in range(n):
            for j in range(i + 1, n):
                if (adj[i] >> j & 1) != (adj[j] >> i & 1):
                    raise ValueError("adjacency not symmetric")
        self.labels = labels
        self.adj = adj
        self._index = {lab: i for i, lab in enumerate(labels)}

    @classmethod
    def from_edges(cls, labels: Sequence[str], edges: Iterable[tuple[str, str]]) -> "Graph":
        labels = tuple(labels)
        index = {lab: i for i, lab in enumerate(labels)}
        adj = [0] * len(labels)
        for u, v in edges:
            if u not in index or v not in index:
                raise ValueError(f"unknown endpoint in edge {u!r} {v!r}")
            iu, iv = index[u], index[v]
            if iu == iv:
                raise ValueError(f"loop at vertex {u!r}")
            adj[iu] |= 1 << iv
            adj[iv] |= 1 << iu
        return cls(labels, adj)

    @classmethod
    def from_index_edges(cls, labels: Sequence[str], edges: Iterable[tuple[int, int]]) -> "Graph":
        adj = [0] * len(labels)
        for u, v in edges:
            if u == v:
                raise ValueError(f"loop at vertex index {u}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(labels, adj)

    @property
    def n(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        return self._index[label]

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def degree(self, u: int) -> int:
        return self.adj[u].bit_count()

    def neighbors(self, u: int) -> list[int]:
        return bits(self.adj[u])

    def edges(self) -> Iterator[tuple[int, int]]:
        for u in range(self.n):
            row = self.adj[u] >> (u + 1) << (u + 1)
            for v in bits(row):
                yield (u, v)

    def edge_count(self) -> int:
        return sum(self.degree(u) for u in range(self.n)) // 2

    def induced(self, vertices: Sequence[int]) -> "Graph":
        """Induced subgraph; vertices keep their labels, in the given order."""
        pos = {v: i for i, v in enumerate(vertices)}
        labels = [self.labels[v] for v in vertices]
        adj = [0] * len(vertices)
        for i, v in enumerate(vertices):
            for w in bits(self.adj[v]):
                j = pos.get(w)
                if j is not None:
                    adj[i] |= 1 << j
        return Graph(labels, adj)

    def complement(self) -> "Graph":
        full = (1 << self.n) - 1
        return Graph(self.labels, tuple((full & ~self.adj[i]) & ~(1 << i) for i in range(self.n)))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self.labels == other.labels and self.adj == other.adj

    def __hash__(self) -> int:
        return hash((self.labels, self.adj))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.edge_count()})"


def bits(mask: int) -> list[int]:
    """Indices of set bits, ascending."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


@dataclass(frozen=True)
class VertexOrder:
    """Total order on V(graph): perm maps position to vertex index."""

    graph: Graph
    perm: tuple[int, ...]
    _pos: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if sorted(self.perm) != list(range(self.graph.n)):
            raise ValueError("perm is not a permutation of the vertex set")
        object.__setattr__(self, "_pos", {v: i for i, v in enumerate(self.perm)})

    @classmethod
    def identity(cls, graph: Graph) -> "VertexOrder":
        return cls(graph, tuple(range(graph.n)))

    @classmethod
    def from_labels(cls, graph: Graph, labels: Sequence[str]) -> "VertexOrder":
        return cls(graph, tuple(graph.index(lab) for lab in labels))

    def position(self, vertex: int) -> int:
        return self._pos[vertex]

    def reversed(self) -> "VertexOrder":
        return VertexOrder(self.graph, tuple(reversed(self.perm)))

    def label_sequence(self) -> list[str]:
        return [self.graph.labels[v] for v in self.perm]


@dataclass(frozen=True)
class BipPattern:
    """A fixed bipartite pattern kind with height t (and path length ell
    for transversal pairs)."""

    kind: str
    t: int
    ell: int = 0

    def __post_init__(self):
        if self.kind not in PATTERN_KINDS:
            raise ValueError(f"unknown pattern kind {self.kind!r}")
        if self.t < 1:
            raise ValueError("pattern height must be >= 1")
        if self.ell < 0:
            raise ValueError("path length must be >= 0")
        if self.ell and self.kind != "transversal_pair":
            raise ValueError("ell only applies to transversal pairs")

    @property
    def column_count(self) -> int:
        return self.ell + 3 if self.kind == "transversal_pair" else 2

    @property
    def column_size(self) -> int:
        return self.t * self.t if self.kind == "transversal_pair" else self.t


def _lex_leq(p: tuple[int, int], q: tuple[int, int]) -> bool:
    return p <= q


def pattern_cross_rule(pattern: BipPattern, col_a: int, col_b: int):
    """Required cross-adjacency between columns col_a < col_b, or None if
    the pair is unconstrained (semi-induced relaxation).

    Returns a function f(i, j) -> bool over flat in-column positions, or
    None.  Flat position of (r, c) in a t*t column is (r-1)*t + (c-1),
    i.e. row-major lexicographic.
    """
    t = pattern.t
    kind = pattern.kind
    if kind != "transversal_pair":
        if (col_a, col_b) != (0, 1):
            raise ValueError("two-column pattern has columns 0 and 1")
        if kind == "biclique":
            return lambda i, j: True
        if kind == "half_graph":
            return lambda i, j: i <= j
        if kind == "matching":
            return lambda i, j: i == j
        return lambda i, j: i != j  # anti_matching
    # Columns: 0 = A, 1..ell+1 = B_0..B_ell, ell+2 = C
    last = pattern.ell + 2
    if col_a == 0 and col_b == 1:
        # a_{i,j} ~ b^0_{i',j'} iff (i,j) <=lex (i',j'); flat order is lex order.
        return lambda i, j: i <= j
    if 1 <= col_a and col_b == col_a + 1 and col_b <= last - 1:
        return lambda i, j: i == j
    if col_a == last - 1 and col_b == last:
        # b^ell_{i,j} ~ c_{i',j'} iff (j,i) <=lex (j',i'): transpose the digits.
        def rule(i: int, j: int, t: int = t) -> bool:
            return _lex_leq((i % t, i // t), (j % t, j // t))

        return rule
    return None


def semi_induced_check(
    graph: Graph,
    a_side: Sequence[int],
    b_side: Sequence[int],
    pattern: BipPattern,
) -> bool:
    """Do the cross edges realize the pattern exactly under the list orders?

    Edges inside a column are ignored.  For transversal pairs, ``a_side``
    is the A column and ``b_side`` is the concatenation of the remaining
    ell+2 columns (B_0, ..., B_ell, C), each of t*t vertices, in order;
    column pairs with no defining rule are unconstrained.

    Raises ValueError on size mismatch or overlapping columns.
    """
    size = pattern.column_size
    cols = [list(a_side)]
    if pattern.kind == "transversal_pair":
        rest = list(b_side)
        need = (pattern.column_count - 1) * size
        if len(rest) != need:
            raise ValueError(f"expected {need} vertices on the b side, got {len(rest)}")
        for k in range(pattern.column_count - 1):
            cols.append(rest[k * size : (k + 1) * size])
    else:
        cols.append(list(b_side))
    for col in cols:
        if len(col) != size:
            raise ValueError(f"column size {len(col)} != {size}")
    flat = [v for col in cols for v in col]
    if len(set(flat)) != len(flat):
        raise ValueError("pattern columns must be pairwise disjoint")
    for ca in range(len(cols)):
        for cb in range(ca + 1, len(cols)):
            rule = pattern_cross_rule(pattern, ca, cb)
            if rule is None:
                continue
            for i, u in enumerate(cols[ca]):
                for j, v in enumerate(cols[cb]):
                    if graph.has_edge(u, v) != rule(i, j):
                        return False
    return True


def adjacency_matrix(graph: Graph, order: VertexOrder) -> "BitMatrix":
    """Adjacency matrix along the order: entry (i, j) = 1 iff the vertices
    at positions i and j are adjacent.  Symmetric with zero diagonal."""
    from tww.matrices import BitMatrix

    if order.graph is not graph and order.graph != graph:
        raise ValueError("order is over a different graph")
    n = graph.n
    rows = []
    for i in range(n):
        u = order.perm[i]
        mask = 0
        for j in range(n):
            mask |= (graph.adj[u] >> order.perm[j] & 1) << j
        rows.append(mask)
    return BitMatrix(n, n, rows)


def biadjacency(
    graph: Graph,
    order: VertexOrder,
    a_set: Iterable[int],
    b_set: Iterable[int],
) -> "BitMatrix":
    """Biadjacency block: columns = A sorted by the order, rows = B sorted by
    the order, entry (row b, col a) = 1 iff ab is an edge."""
    from tww.matrices import BitMatrix

    a_list = sorted(a_set, key=order.position)
    b_list = sorted(b_set, key=order.position)
    if set(a_list) & set(b_list):
        raise ValueError("A and B overlap")
    rows = []
    for b in b_list:
        mask = 0
        for j, a in enumerate(a_list):
            mask |= (graph.adj[b] >> a & 1) << j
        rows.append(mask)
    return BitMatrix(len(b_list), len(a_list), rows)


# ---------------------------------------------------------------------------
# Graph document format: line 1 "graph <n>", line 2 labels, then "u v" lines.


def strip_comments(text: str) -> list[str]:
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        lines.append(line)
    return lines


def load_graph(text: str) -> Graph:
    """Parse a graph document; parse errors carry 1-based line numbers."""
    lines = strip_comments(text)
    content = [(i + 1, line) for i, line in enumerate(lines) if line]
    if not content:
        raise FormatError("line 1: empty document")
    lineno, header = content[0]
    parts = header.split()
    if len(parts) != 2 or parts[0] != "graph":
        raise FormatError(f"line {lineno}: expected 'graph <n>'")
    try:
        n = int(parts[1])
    except ValueError:
        raise FormatError(f"line {lineno}: bad vertex count {parts[1]!r}") from None
    if n < 0:
        raise FormatError(f"line {lineno}: negative vertex count")
    if n == 0:
        labels: tuple[str, ...] = ()
        rest = content[1:]
    else:
        if len(content) < 2:
            raise FormatError(f"line {lineno}: missing label line")
        lab_no, lab_line = content[1]
        labels = tuple(lab_line.split())
        if len(labels) != n:
            raise FormatError(f"line {lab_no}: expected {n} labels, got {len(labels)}")
        if len(set(labels)) != n:
            raise FormatError(f"line {lab_no}: duplicate labels")
        rest = content[2:]
    index = {lab: i for i, lab in enumerate(labels)}
    adj = [0] * n
    for lineno, line in rest:
        parts = line.split()
        if len(parts) != 2:
            raise FormatError(f"line {lineno}: expected 'u v'")
        u, v = parts
        if u not in index:
            raise FormatError(f"line {lineno}: unknown vertex {u!r}")
        if v not in index:
            raise FormatError(f"line {lineno}: unknown vertex {v!r}")
        if u == v:
            raise FormatError(f"line {lineno}: loop at {u!r}")
        iu, iv = index[u], index[v]
        adj[iu] |= 1 << iv  # duplicates are accepted idempotently
        adj[iv] |= 1 << iu
    return Graph(labels, adj)


def dump_graph(graph: Graph) -> str:
    out = [f"graph {graph.n}"]
    if graph.n:
        out.append(" ".join(graph.labels))
    for u, v in graph.edges():
        out.append(f"{graph.labels[u]} {graph.labels[v]}")
    return "\n".join(out) + "\n"
