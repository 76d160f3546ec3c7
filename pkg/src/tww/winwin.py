"""The win-win parameter decider.

Per class: build the canonical order, look for a universal pattern at the
threshold; a found pattern feeds the class extractor and large witnesses
answer YES early, otherwise contract along the order and run the exact
solver.  The contraction certificate is attached for reference; answers
never depend on its witnessed degree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from tww.contraction import ContractionSequence, dyadic_contract
from tww.errors import Budget, BudgetExceededError, GeometryError, ModelError
from tww.geometry import (
    GridSpec,
    IntervalModel,
    SegmentScene,
    SimplePolygon,
    Terrain,
    gamma_splitting,
    general_position,
    interval_graph,
    intersection_graph,
    polygon_visibility,
    terrain_visibility,
)
from tww.graphs import BipPattern, Graph, VertexOrder, adjacency_matrix
from tww.matrices import PatternOccurrence, find_universal_pattern
from tww.orders import TreeModel, interval_lex_order, rdp_lex_dfs_order, segment_global_order
from tww.structures import (
    IndependentSetWitness,
    StructureWitness,
    find_semi_induced,
    max_independent_set,
)
from tww.extraction import polygon_independent_set_extract, terrain_halfgraph_extract

PARAMS = ("alpha", "beta", "lambda")
CLASSES = ("interval", "rdp", "terrain", "polygon", "axis_parallel_unit_segments")


# ---------------------------------------------------------------------------
# Exact solvers (replace generic model checking)


def solve_alpha(graph: Graph, k: int) -> tuple[int, tuple[int, ...]]:
    """Exact independence number with an optimal witness."""
    wit = max_independent_set(graph)
    return len(wit), wit


def solve_beta(graph: Graph, k: int) -> tuple[int, StructureWitness | None]:
    """Largest t with a semi-induced biclique of height t, witnessed.

    Decides t = k first; on failure walks down from k - 1 for the exact
    value (k <= 5 keeps the backtracking cheap)."""
    return _grow_pattern(graph, "biclique", k)


def solve_lambda(graph: Graph, k: int) -> tuple[int, StructureWitness | None]:
    """Largest t with a semi-induced half-graph of height t, witnessed."""
    return _grow_pattern(graph, "half_graph", k)


def _grow_pattern(graph: Graph, kind: str, k: int) -> tuple[int, StructureWitness | None]:
    if k < 1:
        raise ModelError("k must be >= 1")
    wit = find_semi_induced(graph, BipPattern(kind, k)) if 2 * k <= graph.n else None
    if wit is not None:
        t = k
        # Grow for the exact value (the search supports heights up to 8).
        while 2 * (t + 1) <= graph.n and t + 1 <= 8:
            nxt = find_semi_induced(graph, BipPattern(kind, t + 1))
            if nxt is None:
                break
            wit, t = nxt, t + 1
        return t, wit
    for t in range(min(k - 1, graph.n // 2), 0, -1):
        wit = find_semi_induced(graph, BipPattern(kind, t))
        if wit is not None:
            return t, wit
    return 0, None


def _solver_for(param: str) -> Callable:
    return {"alpha": solve_alpha, "beta": solve_beta, "lambda": solve_lambda}[param]


def _witness_size(param: str, witness) -> int:
    if witness is None:
        return 0
    if param == "alpha":
        return len(witness.vertices)
    return witness.pattern.t


# ---------------------------------------------------------------------------
# Class adapters


@dataclass(frozen=True)
class ClassAdapter:
    """Order construction, forbidden pattern shapes, and the pattern-to-
    witness extractor of one input class."""

    class_id: str
    orderer: Callable  # instance -> (Graph, VertexOrder)
    forbidden_shapes: tuple[str, ...]

    def extract(self, param: str, graph: Graph, order: VertexOrder, occ: PatternOccurrence):
        if param == "alpha":
            return polygon_independent_set_extract(graph, order, occ)
        if param == "lambda":
            return terrain_halfgraph_extract(graph, order, occ)
        # beta: half of a directional pattern's ladder is a biclique; the
        # complement shape contains one directly on the diagonal split.
        return _biclique_from_occurrence(graph, order, occ)


def _biclique_from_occurrence(graph: Graph, order: VertexOrder, occ: PatternOccurrence):
    from tww.extraction import _anti_diagonal_pairs

    rows, cols = _anti_diagonal_pairs(occ)
    k = occ.pattern.k
    row_v = [order.perm[r] for r in rows]
    col_v = [order.perm[c] for c in cols]
    best = None
    if occ.pattern.shape in ("up", "down", "left", "right"):
        # Ladder halves: low half of one side vs high half of the other.
        h = k // 2
        if h >= 1:
            for a_side, b_side in ((col_v[:h], row_v[k - h :]), (row_v[:h], col_v[k - h :])):
                cand = StructureWitness(BipPattern("biclique", h), (tuple(a_side), tuple(b_side)))
                if cand.verify(graph):
                    best = cand
                    break
    elif occ.pattern.shape == "1":
        h = k // 2
        if h >= 1:
            cand = StructureWitness(
                BipPattern("biclique", h), (tuple(col_v[:h]), tuple(row_v[h : 2 * h]))
            )
            if cand.verify(graph):
                best = cand
    if best is None:
        # Fall back to a direct bounded search among the selected vertices.
        sub_vertices = col_v + row_v
        sub = graph.induced(sub_vertices)
        for h in range(k, 0, -1):
            wit = find_semi_induced(sub, BipPattern("biclique", h))
            if wit is not None:
                cols_m = tuple(tuple(sub_vertices[v] for v in col) for col in wit.columns)
                best = StructureWitness(wit.pattern, cols_m)
                break
    if best is None:
        best = StructureWitness(BipPattern("biclique", 1), ((col_v[0],), (row_v[0],)))
        if not best.verify(graph):
            raise ModelError("no biclique recoverable from the occurrence")
    return best


def _order_interval(model: IntervalModel):
    g = interval_graph(model)
    return g, interval_lex_order(model, g)


def _order_rdp(tm: TreeModel):
    g = tm.realized_graph()
    return g, rdp_lex_dfs_order(tm, g)


def _order_terrain(terrain: Terrain):
    return terrain_visibility(terrain)


def _order_polygon(poly: SimplePolygon):
    return polygon_visibility(poly)


def _order_segments(scene: SegmentScene):
    """Cell-by-cell circular order of the segments themselves, keyed by each
    segment's first piece in the splitting listing; falls back to the
    left-lower endpoint order when some segment misses the unit grid."""
    g = intersection_graph(scene)
    try:
        grid = general_position(scene, GridSpec(Fraction(1), (Fraction(0), Fraction(0))))
        split = gamma_splitting(scene, grid)
        so = segment_global_order(split)
        first_pos: dict[str, int] = {}
        for pos, v in enumerate(so.order.perm):
            lab = split.graph.labels[v]
            if split.roles[lab] == "s":
                origin = lab.rsplit(".s", 1)[0]
                first_pos.setdefault(origin, pos)
        ranked = sorted(scene.segments, key=lambda s: first_pos[s.id])
        return g, VertexOrder(g, tuple(g.index(s.id) for s in ranked))
    except GeometryError:
        ranked = sorted(scene.segments, key=lambda s: (min(s.p, s.q), s.id))
        return g, VertexOrder(g, tuple(g.index(s.id) for s in ranked))


ADAPTERS: dict[str, ClassAdapter] = {
    "interval": ClassAdapter("interval", _order_interval, ()),
    "rdp": ClassAdapter("rdp", _order_rdp, ()),
    "terrain": ClassAdapter("terrain", _order_terrain, ("0", "1")),
    "polygon": ClassAdapter("polygon", _order_polygon, ("1",)),
    "axis_parallel_unit_segments": ClassAdapter(
        "axis_parallel_unit_segments", _order_segments, ()
    ),
}


@dataclass
class Decision:
    answer: str  # "YES" | "NO" | "INCONCLUSIVE"
    param: str
    k: int
    value: int | None  # exact parameter value when computed
    witness: object | None
    certificate: dict | None
    notes: list[str] = field(default_factory=list)

    @property
    def exit_code(self) -> int:
        return {"YES": 0, "NO": 1}.get(self.answer, 2)


def decide(
    adapter: ClassAdapter,
    instance,
    param: str,
    k: int,
    pattern_k: int | None = None,
    budget: Budget | None = None,
) -> Decision:
    """Decide param(G) >= k for the class instance.

    Flow: canonical order, pattern search at the threshold (default k,
    capped at 4), witness extraction on a hit (YES when the witness is big
    enough), otherwise order-guided contraction plus the exact solver.
    """
    if param not in PARAMS:
        raise ModelError(f"unknown parameter {param!r}")
    if k < 1:
        raise ModelError("k must be >= 1")
    notes: list[str] = []
    graph, order = adapter.orderer(instance)
    kp = min(pattern_k if pattern_k is not None else k, 4)
    witness = None
    try:
        occ = None
        if graph.n >= 2 * kp * kp and kp >= 2:
            occ = find_universal_pattern(adjacency_matrix(graph, order), kp, budget=budget)
        if occ is not None:
            if occ.pattern.shape in adapter.forbidden_shapes:
                raise ModelError(
                    f"pattern shape {occ.pattern.shape!r} is impossible on class "
                    f"{adapter.class_id!r}; the order or the matrix is corrupted"
                )
            witness = adapter.extract(param, graph, order, occ)
            size = _witness_size(param, witness)
            notes.append(f"pattern {occ.pattern.shape} at k={kp} gave a witness of size {size}")
            if size >= k:
                return Decision("YES", param, k, None, witness, None, notes)
    except BudgetExceededError as exc:
        return Decision("INCONCLUSIVE", param, k, None, None, None, notes + [str(exc)])

    try:
        seq, d = dyadic_contract(graph, order)
        certificate = {"witnessed_red_degree": d, "steps": len(seq.steps)}
        value, wit = _solver_for(param)(graph, k)
    except BudgetExceededError as exc:
        return Decision("INCONCLUSIVE", param, k, None, None, None, notes + [str(exc)])
    if value >= k:
        return Decision("YES", param, k, value, wit, certificate, notes)
    return Decision("NO", param, k, value, wit, certificate, notes)
