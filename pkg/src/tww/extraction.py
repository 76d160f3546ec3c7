"""Turning rank divisions and pattern occurrences into structural witnesses.

Interval transversal pairs via the threshold structure of lexicographically
ordered interval matrices; half-graphs from directional patterns in terrain
matrices; independent sets from pattern vertices in polygon matrices.
Every extraction re-verifies its certificate before returning it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from tww.errors import ModelError
from tww.geometry import IntervalModel, interval_graph, minimize_representation
from tww.graphs import BipPattern, Graph, VertexOrder, adjacency_matrix, semi_induced_check
from tww.matrices import PatternOccurrence
from tww.orders import interval_lex_order, start_intervals
from tww.structures import IndependentSetWitness, StructureWitness, max_independent_set


@dataclass
class PreparedIntervalDivision:
    """Lemma-style input: a minimized model, its lex order, and two thinned
    part families (rows then columns) with strictly separated start
    intervals; every matched zone carries a 1-followed-by-0 row."""

    model: IntervalModel
    graph: Graph
    order: VertexOrder
    row_parts: tuple[tuple[str, ...], ...]  # the early family (size t^2)
    col_parts: tuple[tuple[str, ...], ...]  # the late family  (size t^2)
    t: int


def _digit_swap(m: int, t: int) -> int:
    return (m % t) * t + m // t


def _adjacent(graph: Graph, model: IntervalModel, u_lab: str, v_lab: str) -> bool:
    return graph.has_edge(graph.index(u_lab), graph.index(v_lab))


def _col_sequence(parts: Sequence[Sequence[str]]) -> list[str]:
    return [lab for part in parts for lab in part]


def _zone_has_10_row(graph: Graph, rows: Sequence[str], part_cols: Sequence[str],
                     next_col: str | None) -> bool:
    """Some row is adjacent to a column of the part and non-adjacent to the
    following column (inside the part or its right boundary)."""
    for b in rows:
        bi = graph.index(b)
        cols = list(part_cols) + ([next_col] if next_col is not None else [])
        for x, y in zip(cols, cols[1:]):
            if graph.has_edge(bi, graph.index(x)) and not graph.has_edge(bi, graph.index(y)):
                return True
        if next_col is None and any(graph.has_edge(bi, graph.index(c)) for c in part_cols):
            # Last column part: adjacency alone suffices (nothing to the right).
            return True
    return False


def _check_prefix_properties(graph: Graph, row_family, col_parts) -> bool:
    """(P1)/(P2): each row's adjacency is downward closed across the column
    parts (1 in part k forces 1 in all parts before k, 0 forces 0 after)."""
    for part in row_family:
        for b in part:
            bi = graph.index(b)
            part_flags = []
            for cpart in col_parts:
                hits = [graph.has_edge(bi, graph.index(a)) for a in cpart]
                part_flags.append((any(hits), all(hits)))
            for k in range(len(part_flags) - 1):
                any_later = any(f[0] for f in part_flags[k + 1 :])
                if any_later and not part_flags[k][1]:
                    return False
    return True


def interval_division_prepare(graph: Graph, model: IntervalModel, t: int
                              ) -> PreparedIntervalDivision | None:
    """Search for the two thinned part families along the lex order.

    Candidates: a prefix/suffix split of the lex order, each side cut into
    2*t^2 equal consecutive parts, thinned to every other part.  A candidate
    is accepted only if start intervals separate strictly, the families
    separate, and every matched zone has a 1-followed-by-0 row.  Honest
    None when no candidate verifies.
    """
    if t < 1:
        raise ModelError("t must be >= 1")
    model = minimize_representation(model)
    graph = interval_graph(model)
    order = interval_lex_order(model, graph)
    seq = [graph.labels[v] for v in order.perm]
    n = len(seq)
    tt = t * t
    need = 2 * tt
    if n < 2 * need:
        candidates_splits = []
    else:
        candidates_splits = sorted({n // 2, need, n - need})
    for split in candidates_splits:
        left, right = seq[:split], seq[split:]
        if len(left) < need or len(right) < need:
            continue
        for rows_raw, cols_raw in ((_equal_parts(left, need), _equal_parts(right, need)),):
            row_parts = tuple(tuple(p) for p in rows_raw[::2][:tt])
            col_parts = tuple(tuple(p) for p in cols_raw[::2][:tt])
            if len(row_parts) != tt or len(col_parts) != tt:
                continue
            if _prepared_ok(graph, model, row_parts, col_parts, t):
                return PreparedIntervalDivision(model, graph, order, row_parts, col_parts, t)
    return None


def _equal_parts(items: list[str], k: int) -> list[list[str]]:
    n = len(items)
    bounds = [round(i * n / k) for i in range(k + 1)]
    return [items[bounds[i] : bounds[i + 1]] for i in range(k)]


def _prepared_ok(graph, model, row_parts, col_parts, t: int) -> bool:
    tt = t * t
    row_starts = start_intervals(model, row_parts)
    col_starts = start_intervals(model, col_parts)
    for (_, hi), (lo, _) in zip(row_starts, row_starts[1:]):
        if hi >= lo:
            return False
    for (_, hi), (lo, _) in zip(col_starts, col_starts[1:]):
        if hi >= lo:
            return False
    if row_starts[-1][1] > col_starts[0][0]:
        return False
    all_cols = _col_sequence(col_parts)
    for m in range(tt):
        k = _digit_swap(m, t)
        part = col_parts[k]
        last_idx = all_cols.index(part[-1])
        next_col = all_cols[last_idx + 1] if last_idx + 1 < len(all_cols) else None
        if not _zone_has_10_row(graph, row_parts[m], part, next_col):
            return False
    if not _check_prefix_properties(graph, row_parts, col_parts):
        return False
    return True


@dataclass
class TransversalExtraction:
    witness: StructureWitness
    neighbor_rule: str  # "right" or "left" per chosen 0-witness side


def interval_transversal_extract(prep: PreparedIntervalDivision) -> TransversalExtraction:
    """Build the transversal pair from a prepared division.

    For each flat position m, a row vertex of row part m whose adjacency
    threshold sits inside the matched column part swap(m) gives the b and a
    choices; the c vertices come from the minimal-representation property
    (some vertex's right endpoint separates consecutive chosen b lefts).
    """
    graph, model, t = prep.graph, prep.model, prep.t
    tt = t * t
    if not _check_prefix_properties(graph, prep.row_parts, prep.col_parts):
        raise ModelError("prefix properties (downward-closed rows) are violated")
    left_of = {lab: model.left(i) for i, lab in enumerate(model.labels)}
    right_of = {lab: model.right(i) for i, lab in enumerate(model.labels)}
    all_cols = _col_sequence(prep.col_parts)

    b_chosen: list[str] = []
    a_chosen: list[str] = []
    rule = "right"
    for m in range(tt):
        k = _digit_swap(m, t)
        part = prep.col_parts[k]
        picked = None
        for b in prep.row_parts[m]:
            bi = graph.index(b)
            for a in part:
                if not graph.has_edge(bi, graph.index(a)):
                    continue
                ai = all_cols.index(a)
                nxt = all_cols[ai + 1] if ai + 1 < len(all_cols) else None
                if nxt is None or not graph.has_edge(bi, graph.index(nxt)):
                    picked = (b, a)
                    break
            if picked:
                break
        if picked is None:
            raise ModelError(f"zone (row part {m}, column part {k}) has no usable 1-0 row")
        b_chosen.append(picked[0])
        a_chosen.append(picked[1])

    # The c layer: one vertex per b, with a right endpoint separating this
    # b's left from the next chosen b's left.
    used = set(b_chosen) | set(a_chosen)
    c_chosen: list[str] = []
    for m in range(tt):
        lo = left_of[b_chosen[m]]
        hi = left_of[b_chosen[m + 1]] if m + 1 < tt else None
        cand = None
        for lab in model.labels:
            if lab in used:
                continue
            r = right_of[lab]
            if r >= lo and (hi is None or r < hi):
                cand = lab
                break
        if cand is None:
            raise ModelError(
                f"no free vertex with right endpoint in [{lo}, {hi}); "
                "minimality guarantees one unless it is already used"
            )
        used.add(cand)
        c_chosen.append(cand)

    # Column layout: flat position (i,j) of A holds a_{i,j} from column part
    # (i-1)t+j, which is exactly the order the a's were picked in after the
    # swap; the b and c layers use their own part order.
    a_col = [None] * tt
    for m in range(tt):
        a_col[_digit_swap(m, t)] = a_chosen[m]
    b_col = [None] * tt
    c_col = [None] * tt
    for m in range(tt):
        b_col[_digit_swap(m, t)] = b_chosen[m]
        c_col[_digit_swap(m, t)] = c_chosen[m]
    pattern = BipPattern("transversal_pair", t, 0)
    cols = (
        tuple(graph.index(x) for x in a_col),
        tuple(graph.index(x) for x in b_col),
        tuple(graph.index(x) for x in c_col),
    )
    witness = StructureWitness(pattern, cols)
    if not witness.verify(graph):
        raise ModelError("extracted transversal pair failed verification")
    return TransversalExtraction(witness, rule)


# ---------------------------------------------------------------------------
# Pattern-occurrence extractions


def _anti_diagonal_pairs(occ: PatternOccurrence) -> tuple[list[int], list[int]]:
    """Row and column selections of the pattern's decreasing 1-diagonal:
    k pairs with increasing rows and decreasing columns, all entries 1."""
    k = occ.pattern.k
    rows, cols = [], []
    for m in range(1, k + 1):
        a, b = k + 1 - m, m
        r = (b - 1) * k + (a - 1)
        c = (a - 1) * k + (b - 1)
        rows.append(occ.row_idx[r])
        cols.append(occ.col_idx[c])
    return rows, cols


def terrain_halfgraph_extract(
    graph: Graph, order: VertexOrder, occ: PatternOccurrence
) -> StructureWitness:
    """A semi-induced half-graph of height k from a directional pattern.

    Directional shapes restricted to the decreasing 1-diagonal are staircase
    matrices, i.e. half-graphs.  Shapes 0 and 1 cannot occur on terrain
    orders and are rejected loudly.
    """
    if occ.pattern.shape in ("0", "1"):
        raise ModelError(
            f"shape {occ.pattern.shape!r} cannot occur on a terrain order; upstream bug"
        )
    if not occ.verify(adjacency_matrix(graph, order)):
        raise ModelError("occurrence does not verify against the ordered matrix")
    k = occ.pattern.k
    rows, cols = _anti_diagonal_pairs(occ)
    row_v = [order.perm[r] for r in rows]
    col_v = [order.perm[c] for c in cols]
    pattern = BipPattern("half_graph", k)
    candidates = [
        (col_v, row_v),
        (row_v, col_v),
        (col_v[::-1], row_v[::-1]),
        (row_v[::-1], col_v[::-1]),
    ]
    for a_side, b_side in candidates:
        if semi_induced_check(graph, a_side, b_side, pattern):
            return StructureWitness(pattern, (tuple(a_side), tuple(b_side)))
    raise ModelError("pattern diagonal did not realize a half-graph")


def polygon_independent_set_extract(
    graph: Graph, order: VertexOrder, occ: PatternOccurrence
) -> IndependentSetWitness:
    """Exact maximum independent set over the 2k vertices selected by the
    pattern's decreasing 1-diagonal (matching or half-graph shaped)."""
    if occ.pattern.shape == "1":
        raise ModelError("shape '1' cannot occur on a polygon boundary order; upstream bug")
    if not occ.verify(adjacency_matrix(graph, order)):
        raise ModelError("occurrence does not verify against the ordered matrix")
    rows, cols = _anti_diagonal_pairs(occ)
    chosen = [order.perm[c] for c in cols] + [order.perm[r] for r in rows]
    sub = graph.induced(chosen)
    mis = max_independent_set(sub)
    witness = IndependentSetWitness(tuple(chosen[i] for i in mis))
    assert witness.verify(graph)
    return witness
