"""Exact-rational geometric scenes and their derived graphs.

Segment intersection graphs, grid clips and splittings, terrain and polygon
visibility, interval models.  Every predicate is exact (integer or Fraction
arithmetic, no epsilons).  Sight segments that graze the terrain chain or
the polygon boundary without crossing to the outside count as visible
(closed containment); the test oracles use the same convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from tww.errors import FormatError, GeometryError
from tww.graphs import Graph, VertexOrder, bits

Point = tuple  # (x, y), entries int or Fraction


def orient(p: Point, q: Point, r: Point) -> int:
    """Sign of the cross product (q - p) x (r - p): +1 left turn, -1 right."""
    v = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
    return (v > 0) - (v < 0)


def _within(a, lo, hi) -> bool:
    return min(lo, hi) <= a <= max(lo, hi)


def on_segment(p: Point, a: Point, b: Point) -> bool:
    """Is p on the closed segment ab?"""
    return orient(a, b, p) == 0 and _within(p[0], a[0], b[0]) and _within(p[1], a[1], b[1])


def segments_intersect(p1: Point, q1: Point, p2: Point, q2: Point) -> bool:
    """Closed segments share at least one point."""
    o1 = orient(p1, q1, p2)
    o2 = orient(p1, q1, q2)
    o3 = orient(p2, q2, p1)
    o4 = orient(p2, q2, q1)
    if o1 * o2 < 0 and o3 * o4 < 0:
        return True
    if o1 == 0 and on_segment(p2, p1, q1):
        return True
    if o2 == 0 and on_segment(q2, p1, q1):
        return True
    if o3 == 0 and on_segment(p1, p2, q2):
        return True
    if o4 == 0 and on_segment(q1, p2, q2):
        return True
    return False


def proper_crossing(p1: Point, q1: Point, p2: Point, q2: Point) -> bool:
    """Single intersection point interior to both segments."""
    o1 = orient(p1, q1, p2)
    o2 = orient(p1, q1, q2)
    o3 = orient(p2, q2, p1)
    o4 = orient(p2, q2, q1)
    return o1 * o2 < 0 and o3 * o4 < 0


def line_intersection(p1: Point, q1: Point, p2: Point, q2: Point) -> Point | None:
    """Intersection point of the two supporting lines (None if parallel)."""
    d1 = (q1[0] - p1[0], q1[1] - p1[1])
    d2 = (q2[0] - p2[0], q2[1] - p2[1])
    den = d1[0] * d2[1] - d1[1] * d2[0]
    if den == 0:
        return None
    num = (p2[0] - p1[0]) * d2[1] - (p2[1] - p1[1]) * d2[0]
    t = Fraction(num, den)
    return (p1[0] + t * d1[0], p1[1] + t * d1[1])


def crossing_point(p1: Point, q1: Point, p2: Point, q2: Point) -> Point | None:
    """The single shared point of two non-collinear closed segments, if any."""
    if not segments_intersect(p1, q1, p2, q2):
        return None
    z = line_intersection(p1, q1, p2, q2)
    return z


# ---------------------------------------------------------------------------
# Scene types


@dataclass(frozen=True)
class Segment:
    id: str
    p: Point
    q: Point

    def __post_init__(self):
        if self.p == self.q:
            raise GeometryError(f"degenerate segment {self.id!r}")

    def length_sq(self):
        return (self.q[0] - self.p[0]) ** 2 + (self.q[1] - self.p[1]) ** 2


@dataclass(frozen=True)
class SegmentScene:
    """Segments plus a total tie-break order on ids (the listing order)."""

    segments: tuple[Segment, ...]

    def __post_init__(self):
        ids = [s.id for s in self.segments]
        if len(set(ids)) != len(ids):
            raise GeometryError("segment ids must be distinct")

    def global_rank(self) -> dict[str, int]:
        return {s.id: i for i, s in enumerate(self.segments)}

    def by_id(self, sid: str) -> Segment:
        for s in self.segments:
            if s.id == sid:
                return s
        raise KeyError(sid)


@dataclass(frozen=True)
class GridSpec:
    """Infinite square grid of the given pitch, lines at offset + k * pitch."""

    pitch: Fraction
    offset: Point

    def __post_init__(self):
        if self.pitch <= 0:
            raise GeometryError("grid pitch must be positive")

    def cell_rect(self, cell: tuple[int, int]) -> tuple:
        i, j = cell
        x0 = self.offset[0] + i * self.pitch
        y0 = self.offset[1] + j * self.pitch
        return (x0, y0, x0 + self.pitch, y0 + self.pitch)

    def cell_of(self, p: Point) -> tuple[int, int]:
        return (
            int((Fraction(p[0]) - Fraction(self.offset[0])) // self.pitch),
            int((Fraction(p[1]) - Fraction(self.offset[1])) // self.pitch),
        )

    def on_grid_line(self, p: Point) -> bool:
        fx = (Fraction(p[0]) - Fraction(self.offset[0])) % self.pitch
        fy = (Fraction(p[1]) - Fraction(self.offset[1])) % self.pitch
        return fx == 0 or fy == 0


@dataclass(frozen=True)
class Terrain:
    """x-monotone polygonal chain: strictly increasing x coordinates."""

    vertices: tuple[Point, ...]

    def __post_init__(self):
        xs = [p[0] for p in self.vertices]
        if any(a >= b for a, b in zip(xs, xs[1:])):
            raise GeometryError("terrain x coordinates must strictly increase")
        if not self.vertices:
            raise GeometryError("terrain needs at least one vertex")


@dataclass(frozen=True)
class SimplePolygon:
    """Simple polygon; the boundary is normalized to counter-clockwise."""

    boundary: tuple[Point, ...]

    def __post_init__(self):
        pts = self.boundary
        n = len(pts)
        if n < 3:
            raise GeometryError("polygon needs at least 3 vertices")
        if len(set(pts)) != n:
            raise GeometryError("repeated polygon vertex")
        area2 = sum(
            pts[i][0] * pts[(i + 1) % n][1] - pts[(i + 1) % n][0] * pts[i][1] for i in range(n)
        )
        if area2 == 0:
            raise GeometryError("degenerate polygon area")
        if area2 < 0:
            object.__setattr__(self, "boundary", (pts[0],) + tuple(reversed(pts[1:])))
            pts = self.boundary
        _check_simple(pts)

    def edge(self, i: int) -> tuple[Point, Point]:
        return self.boundary[i], self.boundary[(i + 1) % len(self.boundary)]


def _check_simple(pts: Sequence[Point]) -> None:
    n = len(pts)
    for i in range(n):
        a1, b1 = pts[i], pts[(i + 1) % n]
        for j in range(i + 1, n):
            a2, b2 = pts[j], pts[(j + 1) % n]
            adjacent = j == i + 1 or (i == 0 and j == n - 1)
            if adjacent:
                shared = b1 if j == i + 1 else a1
                other1 = a1 if j == i + 1 else b1
                other2 = b2 if j == i + 1 else a2
                # Adjacent edges may only meet at the shared vertex; a
                # collinear doubling-back overlaps in a whole sub-segment.
                if orient(other1, shared, other2) == 0:
                    dot = (other1[0] - shared[0]) * (other2[0] - shared[0]) + (
                        other1[1] - shared[1]
                    ) * (other2[1] - shared[1])
                    if dot > 0:
                        raise GeometryError("boundary folds back on itself")
                continue
            if segments_intersect(a1, b1, a2, b2):
                raise GeometryError("boundary self-intersects")


@dataclass(frozen=True)
class IntervalModel:
    """Integer interval per vertex label, listed in a fixed label order."""

    labels: tuple[str, ...]
    intervals: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if len(self.labels) != len(self.intervals):
            raise GeometryError("label/interval count mismatch")
        if len(set(self.labels)) != len(self.labels):
            raise GeometryError("duplicate labels")
        for lab, (lo, hi) in zip(self.labels, self.intervals):
            if lo > hi:
                raise GeometryError(f"interval of {lab!r} has l > r")

    def left(self, i: int) -> int:
        return self.intervals[i][0]

    def right(self, i: int) -> int:
        return self.intervals[i][1]


# ---------------------------------------------------------------------------
# Derived graphs


def intersection_graph(scene: SegmentScene) -> Graph:
    segs = scene.segments
    edges = []
    for i in range(len(segs)):
        for j in range(i + 1, len(segs)):
            if segments_intersect(segs[i].p, segs[i].q, segs[j].p, segs[j].q):
                edges.append((i, j))
    return Graph.from_index_edges([s.id for s in segs], edges)


def interval_graph(model: IntervalModel) -> Graph:
    n = len(model.labels)
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            if max(model.left(i), model.left(j)) <= min(model.right(i), model.right(j)):
                edges.append((i, j))
    return Graph.from_index_edges(model.labels, edges)


def minimize_representation(model: IntervalModel) -> IntervalModel:
    """Shrink endpoints to the nearest constraining neighbor endpoint until
    a fixpoint; the intersection graph is preserved.

    The fixpoint guarantees: whenever l_u < l_w there is some v with
    l_u <= r_v < l_w (otherwise l_u could still be raised).
    """
    n = len(model.labels)
    graph = interval_graph(model)
    lo = [model.left(i) for i in range(n)]
    hi = [model.right(i) for i in range(n)]
    changed = True
    while changed:
        changed = False
        for u in range(n):
            nbrs = graph.neighbors(u)
            new_lo = min([hi[v] for v in nbrs] + [hi[u]])
            if new_lo > lo[u]:
                lo[u] = new_lo
                changed = True
            new_hi = max([lo[v] for v in nbrs] + [lo[u]])
            if new_hi < hi[u]:
                hi[u] = new_hi
                changed = True
    out = IntervalModel(model.labels, tuple((lo[i], hi[i]) for i in range(n)))
    assert interval_graph(out) == graph
    return out


# ---------------------------------------------------------------------------
# Grid machinery: general position, clips, circular orders, splittings


def _critical_points(scene: SegmentScene) -> list[Point]:
    pts: list[Point] = []
    for s in scene.segments:
        pts.append(s.p)
        pts.append(s.q)
    segs = scene.segments
    for i in range(len(segs)):
        for j in range(i + 1, len(segs)):
            a, b = segs[i], segs[j]
            if segments_intersect(a.p, a.q, b.p, b.q):
                z = line_intersection(a.p, a.q, b.p, b.q)
                if z is not None:
                    pts.append(z)
                # Collinear overlaps contribute their endpoints, which are
                # segment endpoints already collected.
    return pts


def general_position(scene: SegmentScene, grid: GridSpec) -> GridSpec:
    """Translate the grid so no segment endpoint or pairwise crossing lies
    on a cell boundary.  The input grid is returned unchanged if already
    in general position; the chosen shift is an exact rational."""
    pts = _critical_points(scene)
    xs = sorted({Fraction(p[0]) for p in pts})
    ys = sorted({Fraction(p[1]) for p in pts})
    m = len(xs) + len(ys)
    denom = 2 * m + 1
    for i in range(denom):
        delta = Fraction(i, denom) * grid.pitch
        cand = GridSpec(grid.pitch, (Fraction(grid.offset[0]) + delta, Fraction(grid.offset[1]) + delta))
        if not any(cand.on_grid_line(p) for p in pts):
            return cand
    raise AssertionError("pigeonhole guarantees a free shift")


@dataclass(frozen=True)
class ClipPiece:
    """One object of a cell clip: the part of a segment inside the cell
    (possibly a single point)."""

    origin: str
    p: Point
    q: Point

    def is_point(self) -> bool:
        return self.p == self.q


def clip_segment_to_rect(p: Point, q: Point, rect: tuple) -> tuple[Point, Point] | None:
    """Closed intersection of segment pq with the axis-parallel rectangle,
    exact parameter clamping; None when empty."""
    x0, y0, x1, y1 = rect
    t0, t1 = Fraction(0), Fraction(1)
    dx, dy = q[0] - p[0], q[1] - p[1]
    for d, lo, hi, start in ((dx, x0, x1, p[0]), (dy, y0, y1, p[1])):
        if d == 0:
            if not (lo <= start <= hi):
                return None
            continue
        ta = Fraction(lo - start, d)
        tb = Fraction(hi - start, d)
        if ta > tb:
            ta, tb = tb, ta
        t0 = max(t0, ta)
        t1 = min(t1, tb)
        if t0 > t1:
            return None
    a = (p[0] + t0 * dx, p[1] + t0 * dy)
    b = (p[0] + t1 * dx, p[1] + t1 * dy)
    return (a, b)


def clip(scene: SegmentScene, grid: GridSpec, cell: tuple[int, int]) -> list[ClipPiece]:
    """The multiset of segment parts inside the chosen cell, tagged with
    their origins."""
    rect = grid.cell_rect(cell)
    out = []
    for s in scene.segments:
        part = clip_segment_to_rect(s.p, s.q, rect)
        if part is not None:
            out.append(ClipPiece(s.id, part[0], part[1]))
    return out


def boundary_param(p: Point, rect: tuple):
    """Distance travelled from the top-left corner going counter-clockwise
    (down the left side first) until p, or None if p is not on the boundary.
    Corners take the smaller parameter."""
    x0, y0, x1, y1 = rect
    w, h = x1 - x0, y1 - y0
    params = []
    if p[0] == x0 and y0 <= p[1] <= y1:
        params.append(y1 - p[1])
    if p[1] == y0 and x0 <= p[0] <= x1:
        params.append(h + (p[0] - x0))
    if p[0] == x1 and y0 <= p[1] <= y1:
        params.append(h + w + (p[1] - y0))
    if p[1] == y1 and x0 <= p[0] <= x1:
        params.append(h + w + h + (x1 - p[0]))
    return min(params) if params else None


def first_contact(piece: ClipPiece, rect: tuple):
    """Parameter of the first boundary contact of the piece, or None."""
    params = [t for t in (boundary_param(piece.p, rect), boundary_param(piece.q, rect)) if t is not None]
    return min(params) if params else None


def circular_order(
    pieces: Iterable[ClipPiece], rect: tuple, global_rank: dict[str, int]
) -> list[ClipPiece]:
    """Total order on clip pieces: by first boundary contact counter-clockwise
    from the top-left corner; ties, and pieces with no boundary contact, fall
    back to the global order on origins."""
    def key(piece: ClipPiece):
        t = first_contact(piece, rect)
        return (0, t, global_rank[piece.origin]) if t is not None else (1, 0, global_rank[piece.origin])

    return sorted(pieces, key=key)


def rooted_side(piece: ClipPiece, rect: tuple) -> str | None:
    """Which side (L, B, R, T) the first boundary contact lies on."""
    t = first_contact(piece, rect)
    if t is None:
        return None
    x0, y0, x1, y1 = rect
    w, h = x1 - x0, y1 - y0
    if t <= h:
        return "L"
    if t <= h + w:
        return "B"
    if t <= h + w + h:
        return "R"
    return "T"


def clip_intersection_graph(
    pieces: Sequence[ClipPiece], rect: tuple, global_rank: dict[str, int]
) -> tuple[Graph, VertexOrder, list[ClipPiece]]:
    """Intersection graph of a clip along its circular order.

    Labels are "origin@k" for the k-th piece of an origin (clips of a single
    cell have one piece per origin, but the form keeps labels unique)."""
    ordered = circular_order(pieces, rect, global_rank)
    seen: dict[str, int] = {}
    labels = []
    for pc in ordered:
        k = seen.get(pc.origin, 0)
        seen[pc.origin] = k + 1
        labels.append(f"{pc.origin}@{k}" if k else pc.origin)
    edges = []
    for i in range(len(ordered)):
        for j in range(i + 1, len(ordered)):
            if segments_intersect(ordered[i].p, ordered[i].q, ordered[j].p, ordered[j].q):
                edges.append((i, j))
    g = Graph.from_index_edges(labels, edges)
    return g, VertexOrder.identity(g), ordered


# ---------------------------------------------------------------------------
# Gamma-splittings


@dataclass(frozen=True)
class _Piece:
    """A maximal open sub-segment of one original segment between grid
    crossings; ends at original endpoints stay closed."""

    origin: str
    index: int  # 1-based along the segment
    p: Point
    q: Point
    closed_p: bool
    closed_q: bool
    cell: tuple[int, int]

    @property
    def label(self) -> str:
        return f"{self.origin}.s{self.index}"


@dataclass(frozen=True)
class SplittingResult:
    """The graph H(S, Gamma) with s-vertices (segment pieces) and d-vertices
    (one per grid crossing per segment, always of degree 2)."""

    graph: Graph
    roles: dict  # label -> "s" | "d"
    pieces: tuple  # _Piece records, aligned with their labels
    crossings: dict  # d-label -> (origin, Point)
    grid: GridSpec

    def s_labels(self) -> list[str]:
        return [lab for lab in self.graph.labels if self.roles[lab] == "s"]


def _pieces_share_point(a, b) -> bool:
    """Do two pieces (with end-closedness flags) share a point?

    Proper crossings are interior to both, hence always shared.  Contact at
    a piece end counts only if that end is closed (original segment endpoint
    rather than a grid crossing).
    """
    if not segments_intersect(a.p, a.q, b.p, b.q):
        return False
    if a.p == a.q:
        return _point_in_piece(a.p, b)
    if b.p == b.q:
        return _point_in_piece(b.p, a)
    if proper_crossing(a.p, a.q, b.p, b.q):
        return True
    if orient(a.p, a.q, b.p) == 0 and orient(a.p, a.q, b.q) == 0:
        # Collinear: positive-length overlap has interior points of both.
        lo_a, hi_a = sorted((a.p, a.q))
        lo_b, hi_b = sorted((b.p, b.q))
        lo, hi = max(lo_a, lo_b), min(hi_a, hi_b)
        if lo < hi:
            return True
        if lo > hi:
            return False
        return _point_in_piece(lo, a) and _point_in_piece(lo, b)
    # Single touching point: an endpoint of one piece lying on the other.
    for z in (a.p, a.q):
        if on_segment(z, b.p, b.q) and _point_in_piece(z, a) and _point_in_piece(z, b):
            return True
    for z in (b.p, b.q):
        if on_segment(z, a.p, a.q) and _point_in_piece(z, a) and _point_in_piece(z, b):
            return True
    return False


def _point_in_piece(z: Point, piece) -> bool:
    if not on_segment(z, piece.p, piece.q):
        return False
    if z == piece.p and not piece.closed_p:
        return False
    if z == piece.q and not piece.closed_q:
        return False
    return True


def _segment_grid_crossings(seg: Segment, grid: GridSpec) -> list[tuple[Fraction, Point]]:
    """Parameters and points where the segment meets grid lines, sorted;
    a pass through a grid corner yields a single crossing."""
    p, q = seg.p, seg.q
    dx, dy = q[0] - p[0], q[1] - p[1]
    hits: dict[Fraction, Point] = {}
    for d, start, off in ((dx, p[0], grid.offset[0]), (dy, p[1], grid.offset[1])):
        if d == 0:
            continue
        lo, hi = sorted((start, start + d))
        k0 = (Fraction(lo) - Fraction(off)) / grid.pitch
        k1 = (Fraction(hi) - Fraction(off)) / grid.pitch
        for k in range(math.ceil(k0), math.floor(k1) + 1):
            line = Fraction(off) + k * grid.pitch
            t = Fraction(line - start, d)
            if 0 <= t <= 1:
                hits.setdefault(t, (p[0] + t * dx, p[1] + t * dy))
    return sorted(hits.items())


def gamma_splitting(scene: SegmentScene, grid: GridSpec) -> SplittingResult:
    """Cut every segment at the grid, one s-vertex per open piece and one
    degree-2 d-vertex per crossing; s-vertices of a cell are adjacent iff
    their pieces share a point.

    Raises GeometryError when the grid is not in general position with
    respect to the scene or does not hit some segment.
    """
    for p in _critical_points(scene):
        if grid.on_grid_line(p):
            raise GeometryError(
                "grid not in general position: a segment endpoint or crossing lies on a cell boundary"
            )
    pieces: list[_Piece] = []
    labels: list[str] = []
    roles: dict[str, str] = {}
    crossings: dict[str, tuple] = {}
    edges: list[tuple[int, int]] = []
    index_of: dict[str, int] = {}

    def add_vertex(lab: str, role: str) -> int:
        index_of[lab] = len(labels)
        labels.append(lab)
        roles[lab] = role
        return index_of[lab]

    for seg in scene.segments:
        hits = _segment_grid_crossings(seg, grid)
        if not hits:
            raise GeometryError(f"grid does not hit segment {seg.id!r}")
        params = [Fraction(0)] + [t for t, _ in hits] + [Fraction(1)]
        points = [seg.p] + [z for _, z in hits] + [seg.q]
        dx, dy = seg.q[0] - seg.p[0], seg.q[1] - seg.p[1]
        piece_ids = []
        for r in range(len(points) - 1):
            a, b = points[r], points[r + 1]
            tm = (params[r] + params[r + 1]) / 2
            mid = (seg.p[0] + tm * dx, seg.p[1] + tm * dy)
            piece = _Piece(
                seg.id,
                r + 1,
                a,
                b,
                closed_p=(r == 0),
                closed_q=(r == len(points) - 2),
                cell=grid.cell_of(mid),
            )
            pieces.append(piece)
            piece_ids.append(add_vertex(piece.label, "s"))
        for r, (_, z) in enumerate(hits, start=1):
            dlab = f"{seg.id}.d{r}"
            di = add_vertex(dlab, "d")
            crossings[dlab] = (seg.id, z)
            edges.append((di, piece_ids[r - 1]))
            edges.append((di, piece_ids[r]))

    by_cell: dict[tuple[int, int], list[int]] = {}
    for idx, piece in enumerate(pieces):
        by_cell.setdefault(piece.cell, []).append(idx)
    piece_vertex = [index_of[pc.label] for pc in pieces]
    for members in by_cell.values():
        for ii in range(len(members)):
            for jj in range(ii + 1, len(members)):
                a, b = pieces[members[ii]], pieces[members[jj]]
                if a.origin != b.origin and _pieces_share_point(a, b):
                    edges.append((piece_vertex[members[ii]], piece_vertex[members[jj]]))
    graph = Graph.from_index_edges(labels, edges)
    return SplittingResult(graph, roles, tuple(pieces), crossings, grid)


def splitting_round_trip_graph(split: SplittingResult) -> Graph:
    """Merge every segment's s-vertices back into one vertex (dropping the
    d-paths); the result should match the scene's intersection graph."""
    origins: list[str] = []
    seen = set()
    for pc in split.pieces:
        if pc.origin not in seen:
            seen.add(pc.origin)
            origins.append(pc.origin)
    pos = {o: i for i, o in enumerate(origins)}
    g = split.graph
    edges = set()
    label_origin = {pc.label: pc.origin for pc in split.pieces}
    for u, v in g.edges():
        lu, lv = g.labels[u], g.labels[v]
        if split.roles[lu] == "s" and split.roles[lv] == "s":
            ou, ov = label_origin[lu], label_origin[lv]
            if ou != ov:
                edges.add((pos[ou], pos[ov]))
    return Graph.from_index_edges(origins, sorted(edges))


# ---------------------------------------------------------------------------
# Terrain visibility


def terrain_visibility(terrain: Terrain) -> tuple[Graph, VertexOrder]:
    """Visibility graph plus the left-right order.

    Vertices i < j see each other iff no chain vertex between them lies
    strictly above the sight segment (closed containment: per-edge linearity
    makes the vertex test sufficient).
    """
    pts = terrain.vertices
    n = len(pts)
    labels = [f"p{i+1}" for i in range(n)]
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            if all(orient(pts[i], pts[j], pts[k]) <= 0 for k in range(i + 1, j)):
                edges.append((i, j))
    g = Graph.from_index_edges(labels, edges)
    return g, VertexOrder.identity(g)


def terrain_visibility_oracle(terrain: Terrain, i: int, j: int) -> bool:
    """Independent visibility test: against every chain edge, compare the
    sight segment's height over the shared x-span at the span's ends."""
    if i > j:
        i, j = j, i
    if i == j:
        return False
    pts = terrain.vertices
    a, b = pts[i], pts[j]

    def sight_y(x):
        return a[1] + (b[1] - a[1]) * Fraction(x - a[0], b[0] - a[0])

    for k in range(len(pts) - 1):
        c, d = pts[k], pts[k + 1]
        lo = max(a[0], c[0])
        hi = min(b[0], d[0])
        if lo > hi:
            continue

        def edge_y(x):
            return c[1] + (d[1] - c[1]) * Fraction(x - c[0], d[0] - c[0])

        if sight_y(lo) < edge_y(lo) or sight_y(hi) < edge_y(hi):
            return False
    return True


def order_claim_violations(graph: Graph, order: VertexOrder) -> list[tuple[int, int, int, int]]:
    """All position quadruples a < b < c < d with ac, bd edges but ad a
    non-edge; empty on genuine terrain orders."""
    n = graph.n
    padj = [0] * n
    for i in range(n):
        u = order.perm[i]
        mask = 0
        for j in range(n):
            mask |= (graph.adj[u] >> order.perm[j] & 1) << j
        padj[i] = mask
    out = []
    for a in range(n):
        above_a = ~padj[a]
        for b in range(a + 1, n):
            # c in (b, n) adjacent to a; d in (c, n) adjacent to b, not to a
            cs = padj[a] >> (b + 1) << (b + 1)
            while cs:
                low = cs & -cs
                c = low.bit_length() - 1
                cs ^= low
                ds = padj[b] & above_a
                ds >>= c + 1
                ds <<= c + 1
                while ds:
                    dl = ds & -ds
                    d = dl.bit_length() - 1
                    ds ^= dl
                    out.append((a, b, c, d))
    return out


# ---------------------------------------------------------------------------
# Polygon visibility


def point_in_polygon(p: Point, poly: SimplePolygon) -> bool:
    """Closed membership: boundary points count as inside (exact ray cast)."""
    pts = poly.boundary
    n = len(pts)
    for i in range(n):
        a, b = pts[i], pts[(i + 1) % n]
        if on_segment(p, a, b):
            return True
    inside = False
    for i in range(n):
        a, b = pts[i], pts[(i + 1) % n]
        if (a[1] > p[1]) != (b[1] > p[1]):
            # x coordinate of the edge at height p[1]
            x_at = a[0] + (b[0] - a[0]) * Fraction(p[1] - a[1], b[1] - a[1])
            if p[0] < x_at:
                inside = not inside
    return inside


def _segment_inside_polygon(u: Point, v: Point, poly: SimplePolygon) -> bool:
    """Is the closed segment uv contained in the closed polygon?

    Every excursion outside is an open sub-interval bounded by boundary
    contacts, so it suffices to test a midpoint of every contact gap.
    """
    if u == v:
        return point_in_polygon(u, poly)
    pts = poly.boundary
    n = len(pts)
    dx, dy = v[0] - u[0], v[1] - u[1]

    def param_of(z: Point) -> Fraction:
        if dx != 0:
            return Fraction(z[0] - u[0], dx)
        return Fraction(z[1] - u[1], dy)

    params = {Fraction(0), Fraction(1)}
    for i in range(n):
        a, b = pts[i], pts[(i + 1) % n]
        if not segments_intersect(u, v, a, b):
            continue
        oa = orient(u, v, a)
        ob = orient(u, v, b)
        if oa == 0 and ob == 0:
            # Collinear overlap: both overlap ends are contacts.
            for z in (a, b):
                if on_segment(z, u, v):
                    params.add(param_of(z))
            for z in (u, v):
                if on_segment(z, a, b):
                    params.add(param_of(z))
        else:
            z = line_intersection(u, v, a, b)
            if z is not None and on_segment(z, u, v):
                params.add(param_of(z))
            for z in (u, v):
                if on_segment(z, a, b):
                    params.add(param_of(z))
    ordered = sorted(params)
    for t0, t1 in zip(ordered, ordered[1:]):
        tm = (t0 + t1) / 2
        mid = (u[0] + tm * dx, u[1] + tm * dy)
        if not point_in_polygon(mid, poly):
            return False
    return True


def polygon_visibility(poly: SimplePolygon) -> tuple[Graph, VertexOrder]:
    """Visibility graph plus the boundary order, starting at the
    lexicographically smallest vertex and going counter-clockwise."""
    pts = poly.boundary
    n = len(pts)
    start = min(range(n), key=lambda i: pts[i])
    cycle = [(start + k) % n for k in range(n)]
    labels = [f"v{i+1}" for i in range(n)]
    edges = []
    for ii in range(n):
        for jj in range(ii + 1, n):
            i, j = cycle[ii], cycle[jj]
            consecutive = jj == ii + 1 or (ii == 0 and jj == n - 1)
            if consecutive or _segment_inside_polygon(pts[i], pts[j], poly):
                edges.append((ii, jj))
    g = Graph.from_index_edges(labels, edges)
    return g, VertexOrder.identity(g)


def double_x_violations(graph: Graph, order: VertexOrder) -> list[tuple[int, ...]]:
    """All position sextuples b' < a < b < c < d < c' with ac, bd, ac', db'
    edges and ad a non-edge; empty for genuine polygon boundary orders."""
    n = graph.n
    padj = [0] * n
    for i in range(n):
        u = order.perm[i]
        mask = 0
        for j in range(n):
            mask |= (graph.adj[u] >> order.perm[j] & 1) << j
        padj[i] = mask
    out = []
    for a in range(n):
        for b in range(a + 1, n):
            cs = padj[a] >> (b + 1) << (b + 1)
            while cs:
                cl = cs & -cs
                c = cl.bit_length() - 1
                cs ^= cl
                ds = (padj[b] & ~padj[a]) >> (c + 1) << (c + 1)
                while ds:
                    dl = ds & -ds
                    d = dl.bit_length() - 1
                    ds ^= dl
                    bps = padj[d] & ((1 << a) - 1)
                    cps = padj[a] >> (d + 1) << (d + 1)
                    if not bps or not cps:
                        continue
                    for bp in bits(bps):
                        for cp in bits(cps):
                            out.append((bp, a, b, c, d, cp))
    return out


# ---------------------------------------------------------------------------
# Scene file formats


def _parse_frac(tok: str, lineno: int) -> Fraction:
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise FormatError(f"line {lineno}: bad rational {tok!r}") from None


def _content_lines(text: str) -> list[tuple[int, str]]:
    out = []
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append((no, line))
    return out


def _expect_header(lines, kind: str) -> tuple[int, list]:
    if not lines:
        raise FormatError("empty document")
    no, head = lines[0]
    parts = head.split()
    if len(parts) != 2 or parts[0] != kind:
        raise FormatError(f"line {no}: expected '{kind} <n>'")
    try:
        n = int(parts[1])
    except ValueError:
        raise FormatError(f"line {no}: bad count {parts[1]!r}") from None
    body = lines[1:]
    if len(body) != n:
        raise FormatError(f"line {no}: expected {n} entries, got {len(body)}")
    return n, body


def load_scene(text: str) -> SegmentScene:
    _, body = _expect_header(_content_lines(text), "segments")
    segs = []
    for no, line in body:
        parts = line.split()
        if len(parts) != 5:
            raise FormatError(f"line {no}: expected 'id x1 y1 x2 y2'")
        sid = parts[0]
        x1, y1, x2, y2 = (_parse_frac(t, no) for t in parts[1:])
        segs.append(Segment(sid, (x1, y1), (x2, y2)))
    return SegmentScene(tuple(segs))


def dump_scene(scene: SegmentScene) -> str:
    out = [f"segments {len(scene.segments)}"]
    for s in scene.segments:
        out.append(f"{s.id} {s.p[0]} {s.p[1]} {s.q[0]} {s.q[1]}")
    return "\n".join(out) + "\n"


def load_terrain(text: str) -> Terrain:
    _, body = _expect_header(_content_lines(text), "terrain")
    pts = []
    for no, line in body:
        parts = line.split()
        if len(parts) != 2:
            raise FormatError(f"line {no}: expected 'x y'")
        pts.append((_parse_frac(parts[0], no), _parse_frac(parts[1], no)))
    return Terrain(tuple(pts))


def dump_terrain(t: Terrain) -> str:
    out = [f"terrain {len(t.vertices)}"]
    for p in t.vertices:
        out.append(f"{Fraction(p[0])} {Fraction(p[1])}")
    return "\n".join(out) + "\n"


def load_polygon(text: str) -> SimplePolygon:
    _, body = _expect_header(_content_lines(text), "polygon")
    pts = []
    for no, line in body:
        parts = line.split()
        if len(parts) != 2:
            raise FormatError(f"line {no}: expected 'x y'")
        pts.append((_parse_frac(parts[0], no), _parse_frac(parts[1], no)))
    return SimplePolygon(tuple(pts))


def dump_polygon(p: SimplePolygon) -> str:
    out = [f"polygon {len(p.boundary)}"]
    for v in p.boundary:
        out.append(f"{Fraction(v[0])} {Fraction(v[1])}")
    return "\n".join(out) + "\n"


def load_intervals(text: str) -> IntervalModel:
    _, body = _expect_header(_content_lines(text), "intervals")
    labels, ivs = [], []
    for no, line in body:
        parts = line.split()
        if len(parts) != 3:
            raise FormatError(f"line {no}: expected 'label l r'")
        labels.append(parts[0])
        try:
            ivs.append((int(parts[1]), int(parts[2])))
        except ValueError:
            raise FormatError(f"line {no}: endpoints must be integers") from None
    return IntervalModel(tuple(labels), tuple(ivs))


def dump_intervals(m: IntervalModel) -> str:
    out = [f"intervals {len(m.labels)}"]
    for lab, (lo, hi) in zip(m.labels, m.intervals):
        out.append(f"{lab} {lo} {hi}")
    return "\n".join(out) + "\n"
