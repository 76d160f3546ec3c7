"""Generators and exhaustive finders for structural certificates, plus
Ramsey-style brute-force search primitives.

All searches are exhaustive with pruning; running out of budget raises,
which is a distinct outcome from a definite None.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from tww.errors import Budget, ModelError
from tww.graphs import BipPattern, Graph, bits, pattern_cross_rule, semi_induced_check
from tww.matrices import BitMatrix


@dataclass(frozen=True)
class StructureWitness:
    """Ordered vertex columns realizing a pattern; always re-verifiable."""

    pattern: BipPattern
    columns: tuple[tuple[int, ...], ...]

    def verify(self, graph: Graph) -> bool:
        a = list(self.columns[0])
        rest = [v for col in self.columns[1:] for v in col]
        return semi_induced_check(graph, a, rest, self.pattern)

    def labelled(self, graph: Graph) -> list[list[str]]:
        return [[graph.labels[v] for v in col] for col in self.columns]


def dump_witness(graph: Graph, witness: StructureWitness) -> str:
    """One column per line, vertex labels in column order."""
    head = f"{witness.pattern.kind} t={witness.pattern.t} ell={witness.pattern.ell}"
    lines = [head] + [" ".join(col) for col in witness.labelled(graph)]
    return "\n".join(lines) + "\n"


def generate(pattern: BipPattern) -> tuple[Graph, StructureWitness]:
    """The exact pattern graph on its defining vertex sets, no extra edges."""
    t = pattern.t
    if pattern.kind == "transversal_pair":
        names = ["a"] + [f"b{k}" for k in range(pattern.ell + 1)] + ["c"]
        labels = []
        cols: list[list[int]] = []
        idx = 0
        for name in names:
            col = []
            for i in range(1, t + 1):
                for j in range(1, t + 1):
                    labels.append(f"{name}_{i}_{j}")
                    col.append(idx)
                    idx += 1
            cols.append(col)
    else:
        labels = [f"a{i}" for i in range(1, t + 1)] + [f"b{i}" for i in range(1, t + 1)]
        cols = [list(range(t)), list(range(t, 2 * t))]
    edges = []
    for ca in range(len(cols)):
        for cb in range(ca + 1, len(cols)):
            rule = pattern_cross_rule(pattern, ca, cb)
            if rule is None:
                continue
            for i, u in enumerate(cols[ca]):
                for j, v in enumerate(cols[cb]):
                    if rule(i, j):
                        edges.append((u, v))
    graph = Graph.from_index_edges(labels, edges)
    witness = StructureWitness(pattern, tuple(tuple(c) for c in cols))
    assert witness.verify(graph)
    return graph, witness


# ---------------------------------------------------------------------------
# Exhaustive semi-induced search: constraint backtracking with bitset domains.


def find_semi_induced(
    graph: Graph,
    pattern: BipPattern,
    budget: Budget | None = None,
) -> StructureWitness | None:
    """Search the host graph for an ordered realization of the pattern.

    Positions are the pattern's flat slots (column by column); constraints
    are the defining cross rules between constrained column pairs.  The
    search keeps a candidate bitset per slot, propagates after every
    placement, and picks the next slot by smallest domain.  Exhaustive
    within budget; a returned witness always re-verifies.
    """
    t = pattern.t
    if pattern.kind == "transversal_pair":
        if t > 4:
            raise ModelError("transversal pair search supports t <= 4")
    elif t > 8:
        raise ModelError("two-column pattern search supports t <= 8")
    if budget is None:
        budget = Budget(max_nodes=20_000_000)

    size = pattern.column_size
    ncols = pattern.column_count
    slots = ncols * size

    def slot(col: int, pos: int) -> int:
        return col * size + pos

    # constraints[s] = list of (other_slot, required_bit_fn) resolved to
    # pairwise required adjacency
    required: dict[tuple[int, int], bool] = {}
    for ca in range(ncols):
        for cb in range(ca + 1, ncols):
            rule = pattern_cross_rule(pattern, ca, cb)
            if rule is None:
                continue
            for i in range(size):
                for j in range(size):
                    req = rule(i, j)
                    required[(slot(ca, i), slot(cb, j))] = req
                    required[(slot(cb, j), slot(ca, i))] = req
    neighbors_of_slot: list[list[tuple[int, bool]]] = [[] for _ in range(slots)]
    for (s1, s2), req in required.items():
        if s1 < s2:
            neighbors_of_slot[s1].append((s2, req))
            neighbors_of_slot[s2].append((s1, req))

    n = graph.n
    full = (1 << n) - 1
    # Degree prefilter: a slot with q required-1 constraints needs degree >= q.
    min_deg = [sum(1 for _, req in neighbors_of_slot[s] if req) for s in range(slots)]
    domains = []
    for s in range(slots):
        dom = 0
        for v in range(n):
            if graph.degree(v) >= min_deg[s]:
                dom |= 1 << v
        domains.append(dom)

    assignment: list[int | None] = [None] * slots
    used = 0

    def propagate(doms: list[int], s: int, v: int) -> list[int] | None:
        out = list(doms)
        for s2, req in neighbors_of_slot[s]:
            if assignment[s2] is not None:
                continue
            mask = graph.adj[v] if req else (full & ~graph.adj[v] & ~(1 << v))
            out[s2] &= mask
            if out[s2] & ~used & ~(1 << v) == 0:
                return None
        return out

    def search(doms: list[int], remaining: int) -> bool:
        nonlocal used
        if remaining == 0:
            return True
        budget.tick()
        # Smallest live domain first.
        best_s, best_dom, best_cnt = -1, 0, 1 << 62
        for s in range(slots):
            if assignment[s] is not None:
                continue
            live = doms[s] & ~used
            cnt = live.bit_count()
            if cnt == 0:
                return False
            if cnt < best_cnt:
                best_s, best_dom, best_cnt = s, live, cnt
                if cnt == 1:
                    break
        for v in bits(best_dom):
            ok = True
            for s2, req in neighbors_of_slot[best_s]:
                w = assignment[s2]
                if w is not None and graph.has_edge(v, w) != req:
                    ok = False
                    break
            if not ok:
                continue
            nxt = propagate(doms, best_s, v)
            if nxt is None:
                continue
            assignment[best_s] = v
            used |= 1 << v
            if search(nxt, remaining - 1):
                return True
            assignment[best_s] = None
            used &= ~(1 << v)
        return False

    if n < slots:
        return None
    if search(domains, slots):
        cols = tuple(
            tuple(assignment[slot(c, p)] for p in range(size)) for c in range(ncols)
        )
        witness = StructureWitness(pattern, cols)  # type: ignore[arg-type]
        assert witness.verify(graph)
        return witness
    return None


# ---------------------------------------------------------------------------
# Ramsey-style searches


@dataclass(frozen=True)
class CliqueWitness:
    vertices: tuple[int, ...]
    complete: bool  # False when only the largest-found is reported

    def verify(self, graph: Graph) -> bool:
        vs = self.vertices
        return all(graph.has_edge(u, v) for i, u in enumerate(vs) for v in vs[i + 1 :])


@dataclass(frozen=True)
class IndependentSetWitness:
    vertices: tuple[int, ...]
    complete: bool = True

    def verify(self, graph: Graph) -> bool:
        vs = self.vertices
        return not any(graph.has_edge(u, v) for i, u in enumerate(vs) for v in vs[i + 1 :])


def max_clique(graph: Graph, stop_at: int | None = None) -> tuple[int, ...]:
    """Exact maximum clique by branch and bound over candidate bitsets.

    Cliques are enumerated in increasing vertex order; with stop_at, the
    search returns as soon as a clique of that size is found.
    """
    best: list[int] = []
    adj = graph.adj

    def grow(current: list[int], cand: int) -> bool:
        nonlocal best
        if len(current) > len(best):
            best = list(current)
        if stop_at is not None and len(best) >= stop_at:
            return True
        while cand:
            if len(current) + cand.bit_count() <= len(best):
                return False
            low = cand & -cand
            v = low.bit_length() - 1
            cand ^= low
            current.append(v)
            if grow(current, cand & adj[v]):
                return True
            current.pop()
        return False

    grow([], (1 << graph.n) - 1)
    return tuple(best)


def max_independent_set(graph: Graph, stop_at: int | None = None) -> tuple[int, ...]:
    return max_clique(graph.complement(), stop_at=stop_at)


def ramsey_search(graph: Graph, s: int, t: int) -> CliqueWitness | IndependentSetWitness:
    """A clique of size s or an independent set of size t, exhaustively.

    Below the Ramsey threshold neither may exist; then the larger of the
    maximum clique (capped by s) and maximum independent set (capped by t)
    is returned with ``complete=False``.
    """
    clique = max_clique(graph, stop_at=s)
    if len(clique) >= s:
        return CliqueWitness(clique[:s], True)
    indep = max_independent_set(graph, stop_at=t)
    if len(indep) >= t:
        return IndependentSetWitness(indep[:t], True)
    if len(clique) >= len(indep):
        return CliqueWitness(clique, False)
    return IndependentSetWitness(indep, False)


def bip_ramsey_search(
    m: BitMatrix, s: int, t: int
) -> tuple[tuple[int, ...], tuple[int, ...], int, bool]:
    """(rows, cols, color, complete): an s x s all-1 or t x t all-0 submatrix.

    color is 1 or 0.  If neither exists, the largest monochromatic square
    found is returned with complete=False.
    """
    hit = _mono_square(m, s, 1)
    if hit:
        return (*hit, 1, True)
    hit = _mono_square(m, t, 0)
    if hit:
        return (*hit, 0, True)
    for size in range(min(max(s, t) - 1, m.nrows, m.ncols), 0, -1):
        for color in (1, 0):
            hit = _mono_square(m, size, color)
            if hit:
                return (*hit, color, False)
    return ((), (), 1, False)


def _mono_square(m: BitMatrix, size: int, color: int) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
    if size == 0:
        return ((), ())
    if m.nrows < size or m.ncols < size:
        return None
    full = (1 << m.ncols) - 1

    def row_mask(i: int) -> int:
        return m.rows[i] if color else full & ~m.rows[i]

    rows_chosen: list[int] = []

    def rec(start: int, cols: int) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
        if len(rows_chosen) == size:
            return tuple(rows_chosen), tuple(bits(cols)[:size])
        for i in range(start, m.nrows - (size - len(rows_chosen)) + 1):
            nxt = cols & row_mask(i)
            if nxt.bit_count() < size:
                continue
            rows_chosen.append(i)
            out = rec(i + 1, nxt)
            if out:
                return out
            rows_chosen.pop()
        return None

    return rec(0, full)


def longest_monotone(seq: Sequence[Fraction | int]) -> tuple[list, str]:
    """A longest non-decreasing or non-increasing subsequence (standard
    quadratic DP); ties favor non-decreasing."""
    inc = _longest(seq, lambda a, b: a <= b)
    dec = _longest(seq, lambda a, b: a >= b)
    if len(inc) >= len(dec):
        return inc, "non-decreasing"
    return dec, "non-increasing"


def _longest(seq: Sequence, le) -> list:
    n = len(seq)
    if n == 0:
        return []
    length = [1] * n
    prev = [-1] * n
    for i in range(n):
        for j in range(i):
            if le(seq[j], seq[i]) and length[j] + 1 > length[i]:
                length[i] = length[j] + 1
                prev[i] = j
    best = max(range(n), key=lambda i: length[i])
    out = []
    while best != -1:
        out.append(seq[best])
        best = prev[best]
    return out[::-1]
