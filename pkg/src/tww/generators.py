"""Constructors for the instance families used across the toolkit:
two-lengthed segment encodings of bicliques and subcubic bipartite graphs,
star tree models, spike polygons, and seeded random scenes.

All generators are deterministic per seed and emit exact rational
coordinates.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key

from tww.errors import GeometryError, ModelError
from tww.geometry import (
    IntervalModel,
    Segment,
    SegmentScene,
    SimplePolygon,
    Terrain,
    polygon_visibility,
)
from tww.graphs import Graph
from tww.orders import TreeModel


@dataclass(frozen=True)
class Bipartite:
    """A bipartite graph given by part sizes and 1-based edge pairs."""

    a_count: int
    b_count: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        seen = set()
        for i, j in self.edges:
            if not (1 <= i <= self.a_count and 1 <= j <= self.b_count):
                raise ModelError(f"edge ({i},{j}) out of range")
            if (i, j) in seen:
                raise ModelError(f"duplicate edge ({i},{j})")
            seen.add((i, j))

    def degree_a(self, i: int) -> int:
        return sum(1 for x, _ in self.edges if x == i)

    def degree_b(self, j: int) -> int:
        return sum(1 for _, y in self.edges if y == j)

    def max_degree(self) -> int:
        degs = [self.degree_a(i) for i in range(1, self.a_count + 1)]
        degs += [self.degree_b(j) for j in range(1, self.b_count + 1)]
        return max(degs, default=0)

    def neighbors_of_a(self, i: int) -> list[int]:
        return sorted(j for x, j in self.edges if x == i)


def complete_bipartite(n: int) -> Bipartite:
    return Bipartite(n, n, tuple((i, j) for i in range(1, n + 1) for j in range(1, n + 1)))


# ---------------------------------------------------------------------------
# Two-lengthed axis-parallel segment encodings

# Short-segment offset: must satisfy 4*delta < 1 so the short pair of (i, j)
# touches nothing of (i +/- 1, j) or (i, j +/- 1); delta < 1/3 keeps shorts off
# the neighboring long lines.
DELTA = Fraction(1, 5)


def gen_subcubic_encoding_segments(bip: Bipartite, enforce_subcubic: bool = True) -> SegmentScene:
    """Long verticals and horizontals on the integer grid plus one short
    vertical/horizontal pair per edge (i, j); the pair realizes the
    2-subdivision path between the long segments while the longs pairwise
    cross, which restores the biclique."""
    if enforce_subcubic and bip.max_degree() > 3:
        raise ModelError("graph has a vertex of degree > 3")
    n = max(bip.a_count, bip.b_count, 1)
    lo, hi = Fraction(1, 2), n + Fraction(1, 2)
    segs = []
    for i in range(1, bip.a_count + 1):
        segs.append(Segment(f"v{i}", (Fraction(i), lo), (Fraction(i), hi)))
    for j in range(1, bip.b_count + 1):
        segs.append(Segment(f"h{j}", (lo, Fraction(j)), (hi, Fraction(j))))
    for i, j in sorted(bip.edges):
        x, y = Fraction(i), Fraction(j)
        segs.append(Segment(f"sv{i}_{j}", (x + DELTA, y - DELTA), (x + DELTA, y + 3 * DELTA)))
        segs.append(Segment(f"sh{i}_{j}", (x - DELTA, y + DELTA), (x + 3 * DELTA, y + DELTA)))
    return SegmentScene(tuple(segs))


def gen_bn_segments(n: int) -> SegmentScene:
    """The biclique-plus-2-subdivision family: n long verticals, n long
    horizontals, and a short pair per (i, j)."""
    if n < 0:
        raise ModelError("n must be >= 0")
    if n == 0:
        return SegmentScene(())
    return gen_subcubic_encoding_segments(complete_bipartite(n), enforce_subcubic=False)


def bn_graph(n: int) -> Graph:
    """Definitional adjacency of the family: all long pairs cross; the short
    pair of (i, j) links v_i to h_j through sh then sv."""
    labels = (
        [f"v{i}" for i in range(1, n + 1)]
        + [f"h{j}" for j in range(1, n + 1)]
        + [f"sv{i}_{j}" for i in range(1, n + 1) for j in range(1, n + 1)]
        + [f"sh{i}_{j}" for i in range(1, n + 1) for j in range(1, n + 1)]
    )
    edges = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            edges.append((f"v{i}", f"h{j}"))
            edges.append((f"v{i}", f"sh{i}_{j}"))
            edges.append((f"h{j}", f"sv{i}_{j}"))
            edges.append((f"sh{i}_{j}", f"sv{i}_{j}"))
    return Graph.from_edges(labels, edges)


# ---------------------------------------------------------------------------
# Star tree model of the edge-subdivided bipartite graph


def gen_pi_tree_model(bip: Bipartite) -> TreeModel:
    """Star with the center between the two sides: a-edges point in, b-edges
    point out; subdivision vertices ride the a-to-b paths and therefore all
    meet at the center (a clique).  The model is multi-root by construction.
    """
    s = 0
    a_node = {i: i for i in range(1, bip.a_count + 1)}
    b_node = {j: bip.a_count + j for j in range(1, bip.b_count + 1)}
    count = 1 + bip.a_count + bip.b_count
    edges = [(a_node[i], s) for i in range(1, bip.a_count + 1)]
    edges += [(s, b_node[j]) for j in range(1, bip.b_count + 1)]
    paths = [(f"a{i}", a_node[i], a_node[i]) for i in range(1, bip.a_count + 1)]
    paths += [(f"b{j}", b_node[j], b_node[j]) for j in range(1, bip.b_count + 1)]
    paths += [(f"x{i}_{j}", a_node[i], b_node[j]) for i, j in sorted(bip.edges)]
    return TreeModel(count, edges, paths)


def pi_graph(bip: Bipartite) -> Graph:
    """Definitional adjacency of the edge-subdivided bipartite graph with
    the subdivision vertices forming a clique."""
    labels = (
        [f"a{i}" for i in range(1, bip.a_count + 1)]
        + [f"b{j}" for j in range(1, bip.b_count + 1)]
        + [f"x{i}_{j}" for i, j in sorted(bip.edges)]
    )
    edges = []
    xs = sorted(bip.edges)
    for i, j in xs:
        edges.append((f"x{i}_{j}", f"a{i}"))
        edges.append((f"x{i}_{j}", f"b{j}"))
    for p in range(len(xs)):
        for q in range(p + 1, len(xs)):
            i1, j1 = xs[p]
            i2, j2 = xs[q]
            edges.append((f"x{i1}_{j1}", f"x{i2}_{j2}"))
    return Graph.from_edges(labels, edges)


# ---------------------------------------------------------------------------
# Spike polygons realizing the subdivided-bipartite visibility graphs


@dataclass(frozen=True)
class PolygonFamilyResult:
    polygon: SimplePolygon
    boundary_labels: tuple[str, ...]  # label of each boundary vertex, in order
    expected: Graph  # the intended visibility adjacency over those labels


def pi_polygon_spec(bip: Bipartite) -> tuple[list[str], list[tuple[str, str]]]:
    """Labels and intended edges of the spike polygon: baseline vertices and
    top vertices form a clique; each spike tip sees its two baseline
    neighbors and exactly one top vertex (its assigned neighbor, in
    decreasing index order)."""
    labels: list[str] = []
    dq: list[str] = []
    edges: list[tuple[str, str]] = []
    for i in range(1, bip.a_count + 1):
        nbrs = sorted(bip.neighbors_of_a(i), reverse=True)
        deg = len(nbrs)
        labels.append(f"d{i}_0")
        for k in range(1, deg + 1):
            labels.append(f"p{i}_{k}")
            labels.append(f"d{i}_{k}")
            edges.append((f"p{i}_{k}", f"d{i}_{k-1}"))
            edges.append((f"p{i}_{k}", f"d{i}_{k}"))
            edges.append((f"p{i}_{k}", f"q{nbrs[k-1]}"))
        dq.extend(f"d{i}_{k}" for k in range(deg + 1))
    qs = [f"q{j}" for j in range(1, bip.b_count + 1)]
    labels.extend(reversed(qs))
    dq.extend(qs)
    for x in range(len(dq)):
        for y in range(x + 1, len(dq)):
            edges.append((dq[x], dq[y]))
    return labels, edges


def gen_polygon_family(bip: Bipartite) -> PolygonFamilyResult:
    """Spike polygon whose visibility graph equals the subdivided-bipartite
    specification; generation fails loudly if the visibility oracle
    disagrees after the parameter retries."""
    if bip.max_degree() > 3:
        raise ModelError("graph has a vertex of degree > 3")
    if bip.a_count < 1 or bip.b_count < 1:
        raise ModelError("both sides must be non-empty")
    labels, expected_edges = pi_polygon_spec(bip)
    expected = Graph.from_edges(labels, expected_edges)
    base_w = max(bip.a_count, bip.b_count) + 4
    last_err = None
    for scale in (1, 2, 4):
        w = base_w * scale
        try:
            poly, blabels = _spike_polygon(bip, w)
        except GeometryError as exc:
            last_err = exc
            continue
        vis, _ = polygon_visibility(poly)
        got = _relabel(vis, poly, blabels)
        if _same_graph(got, expected):
            return PolygonFamilyResult(poly, tuple(blabels), expected)
        last_err = GeometryError(f"visibility mismatch at spacing {w}")
    raise GeometryError(f"could not certify the spike polygon: {last_err}")


def _spike_polygon(bip: Bipartite, w: int) -> tuple[SimplePolygon, list[str]]:
    height = w - 2  # keeps every spike window narrower than the top spacing
    depth = 1
    pts: list[tuple] = []
    blabels: list[str] = []
    for i in range(1, bip.a_count + 1):
        nbrs = sorted(bip.neighbors_of_a(i), reverse=True)
        base = w * i
        pts.append((Fraction(base), Fraction(0)))
        blabels.append(f"d{i}_0")
        for k in range(1, len(nbrs) + 1):
            gap_center = Fraction(2 * (base + k) - 1, 2)
            qx = Fraction(w * nbrs[k - 1])
            px = (gap_center * (height + depth) - qx * depth) / height
            pts.append((px, Fraction(-depth)))
            blabels.append(f"p{i}_{k}")
            pts.append((Fraction(base + k), Fraction(0)))
            blabels.append(f"d{i}_{k}")
    for j in range(bip.b_count, 0, -1):
        pts.append((Fraction(w * j), Fraction(height)))
        blabels.append(f"q{j}")
    return SimplePolygon(tuple(pts)), blabels


def _relabel(vis: Graph, poly: SimplePolygon, blabels: list[str]) -> Graph:
    """The visibility graph's vertices are boundary positions starting at the
    lexicographically smallest vertex; rotate the construction labels to
    match.  (Spike tips can drift left of every baseline vertex, so the
    start is not fixed.)"""
    pts = poly.boundary
    n = len(pts)
    start = min(range(n), key=lambda i: pts[i])
    labs = [blabels[(start + k) % n] for k in range(n)]
    return Graph(tuple(labs), vis.adj)


def _same_graph(g1: Graph, g2: Graph) -> bool:
    if set(g1.labels) != set(g2.labels):
        return False
    for u in g1.labels:
        n1 = {g1.labels[v] for v in g1.neighbors(g1.index(u))}
        n2 = {g2.labels[v] for v in g2.neighbors(g2.index(u))}
        if n1 != n2:
            return False
    return True


# ---------------------------------------------------------------------------
# Seeded random scenes


def gen_random_terrain(n: int, seed: int) -> Terrain:
    if n < 1:
        raise ModelError("n must be >= 1")
    rng = random.Random(("terrain", seed, n).__repr__())
    ys = [rng.randint(0, 3 * n) for _ in range(n)]
    return Terrain(tuple((i, ys[i]) for i in range(n)))


def _angle_cmp(p, q) -> int:
    def half(z):
        return 0 if z[1] > 0 or (z[1] == 0 and z[0] > 0) else 1

    hp, hq = half(p), half(q)
    if hp != hq:
        return -1 if hp < hq else 1
    cross = p[0] * q[1] - p[1] * q[0]
    return 0 if cross == 0 else (-1 if cross > 0 else 1)


def gen_random_polygon(n: int, seed: int, attempts: int = 200) -> SimplePolygon:
    """Random simple polygon by angular sort of integer points around the
    origin (star-shaped, reflex vertices included); simplicity is validated
    and degenerate draws are rejected."""
    if n < 3:
        raise ModelError("polygons need n >= 3")
    rng = random.Random(("polygon", seed, n).__repr__())
    for _ in range(attempts):
        pts = set()
        while len(pts) < n:
            x = rng.randint(-6 * n, 6 * n)
            y = rng.randint(-6 * n, 6 * n)
            if (x, y) != (0, 0):
                pts.add((x, y))
        ordered = sorted(pts, key=cmp_to_key(_angle_cmp))
        collinear_from_origin = any(
            _angle_cmp(a, b) == 0 for a, b in zip(ordered, ordered[1:] + ordered[:1])
        )
        if collinear_from_origin:
            continue
        try:
            return SimplePolygon(tuple(ordered))
        except GeometryError:
            continue
    raise GeometryError("rejection budget exceeded while sampling a simple polygon")


def gen_random_intervals(n: int, seed: int) -> IntervalModel:
    if n < 1:
        raise ModelError("n must be >= 1")
    rng = random.Random(("intervals", seed, n).__repr__())
    labels = tuple(f"u{i}" for i in range(n))
    ivs = []
    for _ in range(n):
        lo = rng.randint(0, 3 * n)
        hi = lo + rng.randint(0, n)
        ivs.append((lo, hi))
    return IntervalModel(labels, tuple(ivs))


def gen_random_axis_segments(n: int, ell: int, seed: int) -> SegmentScene:
    """Axis-parallel segments with lengths in [1, ell]; random denominators
    keep endpoints and crossings off small grids."""
    if n < 1 or ell < 1:
        raise ModelError("need n >= 1 and ell >= 1")
    rng = random.Random(("segments", seed, n, ell).__repr__())
    span = max(3, n // 2)
    segs = []
    for idx in range(n):
        den = rng.choice((7, 11, 13, 17, 19, 23))
        x = Fraction(rng.randint(0, span * den), den)
        y = Fraction(rng.randint(0, span * den), den)
        length = 1 + Fraction(rng.randint(0, (ell - 1) * den), den)
        if rng.random() < 0.5:
            seg = Segment(f"s{idx}", (x, y), (x + length, y))
        else:
            seg = Segment(f"s{idx}", (x, y), (x, y + length))
        segs.append(seg)
    return SegmentScene(tuple(segs))


def gen_random_rdp_model(max_nodes: int, seed: int) -> TreeModel:
    """Random minimal rooted directed path model: a random out-tree, one
    starting path per non-root node plus separators, minimality enforced
    by construction checks and pruning."""
    rng = random.Random(("rdp", seed, max_nodes).__repr__())
    count = rng.randint(2, max_nodes)
    parent = [-1] + [rng.randint(0, i - 1) for i in range(1, count)]
    edges = [(parent[i], i) for i in range(1, count)]

    def ancestors(x):
        out = [x]
        while parent[out[-1]] != -1:
            out.append(parent[out[-1]])
        return out

    paths = []
    serial = 0
    # One path starting (high) at every node, reaching a random descendant.
    children = [[] for _ in range(count)]
    for i in range(1, count):
        children[parent[i]].append(i)
    for x in range(count):
        low = x
        while children[low] and rng.random() < 0.6:
            low = rng.choice(children[low])
        paths.append((f"w{serial}", x, low))
        serial += 1
    # A few extra random paths for density.
    for _ in range(count):
        low = rng.randrange(count)
        anc = ancestors(low)
        high = rng.choice(anc)
        paths.append((f"w{serial}", high, low))
        serial += 1
    tm = TreeModel(count, edges, paths)
    return _prune_to_minimal(tm, rng)


def _prune_to_minimal(tm: TreeModel, rng: random.Random) -> TreeModel:
    """Contract away nodes violating the minimality witnesses (merging a
    defective node into its parent) until the check passes."""
    from tww.orders import minimality_check

    while True:
        rep = minimality_check(tm)
        if rep.ok:
            return tm
        bad = rep.defects()[0]
        par = tm.parent[bad]
        remap = {}
        new_id = 0
        for x in range(tm.node_count):
            if x == bad:
                continue
            remap[x] = new_id
            new_id += 1
        remap[bad] = remap[par]
        edges = []
        for a, b in tm.edges:
            ra, rb = remap[a], remap[b]
            if ra != rb:
                edges.append((ra, rb))
        paths = [(lab, remap[hi], remap[lo]) for lab, hi, lo in tm.paths]
        # Collapse duplicate path endpoints (identical paths stay legal).
        tm = TreeModel(tm.node_count - 1, edges, paths)
