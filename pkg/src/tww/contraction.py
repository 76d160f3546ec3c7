"""Trigraphs, contraction sequences, verification, and exact twin-width.

A trigraph keeps two disjoint symmetric edge sets, black and red.
Contracting u and v into w keeps wz black iff both uz and vz were black;
any other adjacency of w turns red.  A d-sequence contracts down to a
single vertex keeping every red degree at most d, and the twin-width of a
graph is the least such d.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from tww.errors import Budget, FormatError, ModelError
from tww.graphs import Graph, VertexOrder, bits

DEFAULT_EXACT_N = 10


class Trigraph:
    """Immutable trigraph whose vertices are merge classes of original
    vertices.  Classes are kept sorted by smallest original member, so equal
    states have equal keys."""

    __slots__ = ("classes", "black", "red")

    def __init__(self, classes: Sequence[frozenset[int]], black: Sequence[int], red: Sequence[int]):
        self.classes = tuple(classes)
        self.black = tuple(black)
        self.red = tuple(red)
        for b, r in zip(self.black, self.red):
            if b & r:
                raise ModelError("black and red edges are not disjoint")

    @classmethod
    def from_graph(cls, graph: Graph) -> "Trigraph":
        classes = [frozenset([v]) for v in range(graph.n)]
        return cls(classes, list(graph.adj), [0] * graph.n)

    @property
    def n(self) -> int:
        return len(self.classes)

    def class_index(self, members: frozenset[int]) -> int | None:
        for i, c in enumerate(self.classes):
            if c == members:
                return i
        return None

    def max_red_degree(self) -> int:
        return max((r.bit_count() for r in self.red), default=0)

    def contract(self, u: int, v: int) -> "Trigraph":
        """Contract classes at indices u and v (u != v)."""
        if u == v:
            raise ModelError("cannot contract a class with itself")
        n = self.n
        if not (0 <= u < n and 0 <= v < n):
            raise ModelError("missing class index")
        merged = self.classes[u] | self.classes[v]
        keep = [i for i in range(n) if i not in (u, v)]
        order = sorted(keep + [-1], key=lambda i: min(merged) if i == -1 else min(self.classes[i]))
        remap = {old: new for new, old in enumerate(order) if old != -1}
        w_new = order.index(-1)

        new_classes = [merged if old == -1 else self.classes[old] for old in order]
        new_black = [0] * (n - 1)
        new_red = [0] * (n - 1)
        both_black = self.black[u] & self.black[v]
        any_adj = (self.black[u] | self.red[u] | self.black[v] | self.red[v]) & ~(1 << u) & ~(1 << v)
        for old in keep:
            new_i = remap[old]
            b_row = self.black[old]
            r_row = self.red[old]
            nb = nr = 0
            for old_j in bits(b_row):
                if old_j in (u, v):
                    continue
                nb |= 1 << remap[old_j]
            for old_j in bits(r_row):
                if old_j in (u, v):
                    continue
                nr |= 1 << remap[old_j]
            if both_black >> old & 1:
                nb |= 1 << w_new
            elif any_adj >> old & 1:
                nr |= 1 << w_new
            new_black[new_i] = nb
            new_red[new_i] = nr
        wb = wr = 0
        for old in keep:
            if both_black >> old & 1:
                wb |= 1 << remap[old]
            elif any_adj >> old & 1:
                wr |= 1 << remap[old]
        new_black[w_new] = wb
        new_red[w_new] = wr
        return Trigraph(new_classes, new_black, new_red)

    def key(self) -> tuple:
        return (tuple(tuple(sorted(c)) for c in self.classes), self.black, self.red)

    def __repr__(self) -> str:
        return f"Trigraph(n={self.n}, max_red={self.max_red_degree()})"


@dataclass(frozen=True)
class ContractionSequence:
    """Ordered merges; each step names two existing classes by their original
    members."""

    steps: tuple[tuple[frozenset[int], frozenset[int]], ...]

    def __len__(self) -> int:
        return len(self.steps)


def contract(t: Trigraph, u: frozenset[int] | int, v: frozenset[int] | int) -> Trigraph:
    """Contract two classes given by index or by member set."""
    iu = t.class_index(u) if isinstance(u, frozenset) else u
    iv = t.class_index(v) if isinstance(v, frozenset) else v
    if iu is None or iv is None:
        raise ModelError("missing class")
    return t.contract(iu, iv)


def max_red_degree(t: Trigraph) -> int:
    return t.max_red_degree()


def verify_sequence(graph: Graph, seq: ContractionSequence) -> int:
    """Apply the sequence and return the maximum red degree attained.

    Raises ModelError on a dangling class reference or if the sequence does
    not end at a single vertex.
    """
    t = Trigraph.from_graph(graph)
    worst = t.max_red_degree()
    for step_no, (cu, cv) in enumerate(seq.steps, 1):
        iu = t.class_index(cu)
        iv = t.class_index(cv)
        if iu is None or iv is None:
            missing = cu if iu is None else cv
            raise ModelError(f"step {step_no}: class {sorted(missing)} does not exist")
        t = t.contract(iu, iv)
        worst = max(worst, t.max_red_degree())
    if t.n != 1:
        raise ModelError(f"sequence ends at {t.n} vertices, not at a single vertex")
    return worst


def exact_twinwidth(graph: Graph, budget: Budget | None = None) -> tuple[int, ContractionSequence]:
    """Exact twin-width with a witnessing sequence.

    Iterative deepening on d; for each d a depth-first search over merge
    choices with memoized failed trigraph states.  Merges are enumerated
    smallest-label-first, so the returned certificate is deterministic.
    """
    if graph.n == 0:
        raise ModelError("empty graph has no contraction sequence")
    if budget is None:
        if graph.n > DEFAULT_EXACT_N:
            raise ModelError(
                f"n={graph.n} over the default exact bound {DEFAULT_EXACT_N}; pass a budget"
            )
        budget = Budget(max_nodes=20_000_000)
    if graph.n == 1:
        return 0, ContractionSequence(())
    start = Trigraph.from_graph(graph)
    for d in range(graph.n):
        failed: set[tuple] = set()
        steps: list[tuple[frozenset[int], frozenset[int]]] = []
        if _search(start, d, failed, steps, budget):
            return d, ContractionSequence(tuple(steps))
    raise AssertionError("unreachable: every graph has an (n-1)-sequence")


def _search(t: Trigraph, d: int, failed: set, steps: list, budget: Budget) -> bool:
    if t.n == 1:
        return True
    key = t.key()
    if key in failed:
        return False
    budget.tick()
    n = t.n
    for iu in range(n):
        for iv in range(iu + 1, n):
            child = t.contract(iu, iv)
            if child.max_red_degree() > d:
                continue
            steps.append((t.classes[iu], t.classes[iv]))
            if _search(child, d, failed, steps, budget):
                return True
            steps.pop()
    failed.add(key)
    return False


def dyadic_contract(graph: Graph, order: VertexOrder) -> tuple[ContractionSequence, int]:
    """Merge consecutive pairs along the order, level by level, down to one
    class; returns the sequence and the witnessed maximum red degree."""
    if graph.n == 0:
        raise ModelError("empty graph")
    t = Trigraph.from_graph(graph)
    level = [frozenset([v]) for v in order.perm]
    steps: list[tuple[frozenset[int], frozenset[int]]] = []
    worst = 0
    while len(level) > 1:
        nxt = []
        for i in range(0, len(level) - 1, 2):
            cu, cv = level[i], level[i + 1]
            steps.append((cu, cv))
            t = t.contract(t.class_index(cu), t.class_index(cv))
            worst = max(worst, t.max_red_degree())
            nxt.append(cu | cv)
        if len(level) % 2:
            nxt.append(level[-1])
        level = nxt
    return ContractionSequence(tuple(steps)), worst


# ---------------------------------------------------------------------------
# Sequence file format: one "u+v" merge per line, class names are dot-joined
# sorted original labels, e.g. "a.d+g".


def class_name(graph: Graph, members: frozenset[int]) -> str:
    return ".".join(sorted(graph.labels[v] for v in members))


def dump_sequence(graph: Graph, seq: ContractionSequence) -> str:
    lines = [f"{class_name(graph, cu)}+{class_name(graph, cv)}" for cu, cv in seq.steps]
    return "\n".join(lines) + ("\n" if lines else "")


def load_sequence(graph: Graph, text: str) -> ContractionSequence:
    steps = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "+" not in line:
            raise FormatError(f"line {lineno}: expected 'u+v'")
        left, right = line.split("+", 1)
        steps.append((_parse_class(graph, left, lineno), _parse_class(graph, right, lineno)))
    return ContractionSequence(tuple(steps))


def _parse_class(graph: Graph, name: str, lineno: int) -> frozenset[int]:
    labels = name.split(".")
    try:
        return frozenset(graph.index(lab) for lab in labels)
    except KeyError as exc:
        raise FormatError(f"line {lineno}: unknown label {exc.args[0]!r}") from None
