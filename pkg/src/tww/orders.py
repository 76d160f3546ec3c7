"""Class-specific canonical vertex orders and their verifiers.

Interval lexicographic order, lex-DFS order of rooted directed path
models, facial-cycle respecting BFS order of plane graphs, and the global
cell-circular order of grid splittings.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cmp_to_key
from typing import Sequence

from tww.errors import FormatError, ModelError
from tww.geometry import IntervalModel, SplittingResult, boundary_param, interval_graph
from tww.graphs import Graph, VertexOrder

# ---------------------------------------------------------------------------
# Interval graphs


def interval_lex_order(model: IntervalModel, graph: Graph | None = None) -> VertexOrder:
    """Order by (left endpoint, right endpoint), ties by label."""
    if graph is None:
        graph = interval_graph(model)
    ranked = sorted(
        range(len(model.labels)),
        key=lambda i: (model.left(i), model.right(i), model.labels[i]),
    )
    return VertexOrder(graph, tuple(graph.index(model.labels[i]) for i in ranked))


def start_intervals(model: IntervalModel, parts: Sequence[Sequence[str]]) -> list[tuple[int, int]]:
    """Per part, the minimal interval covering its left endpoints."""
    out = []
    for part in parts:
        if not part:
            raise ModelError("empty part")
        lefts = [model.left(model.labels.index(lab)) for lab in part]
        out.append((min(lefts), max(lefts)))
    return out


# ---------------------------------------------------------------------------
# Rooted directed path models


class TreeModel:
    """Directed tree plus one directed path per graph vertex.

    Rooted models are out-trees (every node reachable from one root); the
    star encodings of bipartite graphs are legal models but multi-root, and
    the lex-DFS order refuses them.
    """

    def __init__(self, node_count: int, edges: Sequence[tuple[int, int]],
                 paths: Sequence[tuple[str, int, int]]):
        self.node_count = node_count
        self.edges = tuple(edges)
        self.paths = tuple(paths)
        labels = [lab for lab, _, _ in paths]
        if len(set(labels)) != len(labels):
            raise ModelError("duplicate path labels")
        self.out: list[list[int]] = [[] for _ in range(node_count)]
        self.parent = [-1] * node_count
        indeg = [0] * node_count
        und: list[set[int]] = [set() for _ in range(node_count)]
        for a, b in self.edges:
            if not (0 <= a < node_count and 0 <= b < node_count) or a == b:
                raise ModelError(f"bad edge ({a},{b})")
            self.out[a].append(b)
            indeg[b] += 1
            und[a].add(b)
            und[b].add(a)
        if len(self.edges) != node_count - 1 and node_count > 0:
            raise ModelError("edge count must be node_count - 1 (a tree)")
        self.roots = [x for x in range(node_count) if indeg[x] == 0]
        self.multi_root = len(self.roots) != 1 or any(d > 1 for d in indeg)
        if not self.multi_root:
            for a, b in self.edges:
                self.parent[b] = a
        self._und = und
        self._path_nodes: dict[str, tuple[int, ...]] = {}
        for lab, first, last in paths:
            self._path_nodes[lab] = self._trace(lab, first, last)
        self._vertex_sets = None

    def _trace(self, lab: str, first: int, last: int) -> tuple[int, ...]:
        """Unique tree path first -> last; every step must follow a directed
        edge."""
        prev = {first: None}
        dq = deque([first])
        while dq:
            x = dq.popleft()
            if x == last:
                break
            for y in self._und[x]:
                if y not in prev:
                    prev[y] = x
                    dq.append(y)
        if last not in prev:
            raise ModelError(f"path {lab!r}: nodes not connected")
        rev = []
        x: int | None = last
        while x is not None:
            rev.append(x)
            x = prev[x]
        nodes = tuple(reversed(rev))
        for a, b in zip(nodes, nodes[1:]):
            if b not in self.out[a]:
                raise ModelError(f"path {lab!r} is not a directed path")
        return nodes

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(lab for lab, _, _ in self.paths)

    def path_nodes(self, lab: str) -> tuple[int, ...]:
        return self._path_nodes[lab]

    def high(self, lab: str) -> int:
        return self._path_nodes[lab][0]

    def low(self, lab: str) -> int:
        return self._path_nodes[lab][-1]

    def vertices_at(self, node: int) -> set[str]:
        if self._vertex_sets is None:
            sets: list[set[str]] = [set() for _ in range(self.node_count)]
            for lab in self.labels:
                for x in self._path_nodes[lab]:
                    sets[x].add(lab)
            self._vertex_sets = sets
        return self._vertex_sets[node]

    def realized_graph(self) -> Graph:
        labs = self.labels
        edges = []
        for i in range(len(labs)):
            si = set(self._path_nodes[labs[i]])
            for j in range(i + 1, len(labs)):
                if si.intersection(self._path_nodes[labs[j]]):
                    edges.append((i, j))
        return Graph.from_index_edges(labs, edges)

    # tree order helpers (rooted models)
    def depth(self, node: int) -> int:
        d = 0
        while self.parent[node] != -1:
            node = self.parent[node]
            d += 1
        return d

    def is_ancestor(self, a: int, b: int) -> bool:
        """a <=_T b: a on the root path of b."""
        while b != -1:
            if b == a:
                return True
            b = self.parent[b]
        return False

    def lca(self, a: int, b: int) -> int:
        anc = set()
        x = a
        while x != -1:
            anc.add(x)
            x = self.parent[x]
        x = b
        while x not in anc:
            x = self.parent[x]
        return x


@dataclass
class MinimalityReport:
    """Lemma-style witnesses per non-root node: a path starting at the node,
    and a path through the parent avoiding the node."""

    witnesses: dict[int, tuple[str | None, str | None]]

    @property
    def ok(self) -> bool:
        return all(u is not None and w is not None for u, w in self.witnesses.values())

    def defects(self) -> list[int]:
        return [p for p, (u, w) in self.witnesses.items() if u is None or w is None]


def minimality_check(tm: TreeModel) -> MinimalityReport:
    if tm.multi_root:
        raise ModelError("minimality check needs a rooted model")
    witnesses: dict[int, tuple[str | None, str | None]] = {}
    for p in range(tm.node_count):
        if tm.parent[p] == -1:
            continue
        starts = None
        for lab in tm.labels:
            if tm.high(lab) == p:
                starts = lab
                break
        avoids = None
        par = tm.parent[p]
        for lab in tm.labels:
            nodes = tm.path_nodes(lab)
            if par in nodes and p not in nodes:
                avoids = lab
                break
        witnesses[p] = (starts, avoids)
    return MinimalityReport(witnesses)


def rdp_lex_dfs_order(tm: TreeModel, graph: Graph | None = None, force: bool = False) -> VertexOrder:
    """The lex-DFS vertex order of a minimal rooted directed path model.

    Nodes are processed in DFS post-order; siblings are explored in the
    order given by the minimal high() in the symmetric difference of their
    subtrees' high-sets (node id as the arbitrary fallback).  Vertices sort
    by (processing position of low, depth of high, label).
    """
    if tm.multi_root:
        raise ModelError("model is multi-root; lex-DFS order needs a rooted model")
    if not force:
        rep = minimality_check(tm)
        if not rep.ok:
            raise ModelError(f"model not minimal at nodes {rep.defects()}; pass force=True to override")
    if graph is None:
        graph = tm.realized_graph()

    children: list[list[int]] = [[] for _ in range(tm.node_count)]
    for b in range(tm.node_count):
        if tm.parent[b] != -1:
            children[tm.parent[b]].append(b)

    # high-sets per subtree: highs of vertices whose low is in the subtree
    subtree_highs: list[set[int]] = [set() for _ in range(tm.node_count)]
    lows_at: list[list[str]] = [[] for _ in range(tm.node_count)]
    for lab in tm.labels:
        lows_at[tm.low(lab)].append(lab)

    def collect(x: int) -> set[int]:
        acc = {tm.high(lab) for lab in lows_at[x]}
        for c in children[x]:
            acc |= collect(c)
        subtree_highs[x] = acc
        return acc

    root = tm.roots[0]
    collect(root)

    def sibling_cmp(x: int, y: int) -> int:
        diff = subtree_highs[x] ^ subtree_highs[y]
        if diff:
            mins = [h for h in diff if all(tm.is_ancestor(h, o) for o in diff)]
            if mins:
                h = mins[0]
                return -1 if h in subtree_highs[x] else 1
        return -1 if x < y else 1

    process_pos: dict[int, int] = {}

    def explore(x: int) -> None:
        for c in sorted(children[x], key=cmp_to_key(sibling_cmp)):
            explore(c)
        process_pos[x] = len(process_pos)

    explore(root)

    ranked = sorted(
        tm.labels,
        key=lambda lab: (process_pos[tm.low(lab)], tm.depth(tm.high(lab)), lab),
    )
    return VertexOrder(graph, tuple(graph.index(lab) for lab in ranked))


@dataclass
class RdpOrderReport:
    sibling_violations: list[tuple[str, str, str]]
    lca_violations: list[tuple[str, str, str]]

    @property
    def ok(self) -> bool:
        return not self.sibling_violations and not self.lca_violations


def verify_rdp_order(tm: TreeModel, order: VertexOrder) -> RdpOrderReport:
    """Check the two structural properties of valid lex-DFS orders over all
    applicable triples.

    First: for distinct children y, z of a node, vertices with low in the
    subtree of y may not straddle a vertex with low in the subtree of z.
    Second: for u before v before w, the lca of low(u), low(w) is an
    ancestor of the lca of low(v), low(w) and of the lca of low(u), low(v).
    """
    if tm.multi_root:
        raise ModelError("verification needs a rooted model")
    graph = order.graph
    pos = {lab: order.position(graph.index(lab)) for lab in tm.labels}

    children: list[list[int]] = [[] for _ in range(tm.node_count)]
    for b in range(tm.node_count):
        if tm.parent[b] != -1:
            children[tm.parent[b]].append(b)

    in_subtree: dict[int, set[int]] = {}

    def collect(x: int) -> set[int]:
        acc = {x}
        for c in children[x]:
            acc |= collect(c)
        in_subtree[x] = acc
        return acc

    collect(tm.roots[0])

    sib_viol: list[tuple[str, str, str]] = []
    for x in range(tm.node_count):
        for yi in range(len(children[x])):
            for zi in range(len(children[x])):
                if yi == zi:
                    continue
                y, z = children[x][yi], children[x][zi]
                sy = [lab for lab in tm.labels if tm.low(lab) in in_subtree[y]]
                sz = [lab for lab in tm.labels if tm.low(lab) in in_subtree[z]]
                if not sy or not sz:
                    continue
                lo = min(pos[lab] for lab in sy)
                hi = max(pos[lab] for lab in sy)
                for vz in sz:
                    if lo < pos[vz] < hi:
                        v1 = min((lab for lab in sy if pos[lab] < pos[vz]), key=lambda l: pos[l])
                        v2 = max((lab for lab in sy if pos[lab] > pos[vz]), key=lambda l: pos[l])
                        sib_viol.append((v1, vz, v2))

    labs_by_pos = sorted(tm.labels, key=lambda lab: pos[lab])
    lows = {lab: tm.low(lab) for lab in tm.labels}
    lca_cache: dict[tuple[int, int], int] = {}

    def lca(a: int, b: int) -> int:
        key = (a, b) if a <= b else (b, a)
        v = lca_cache.get(key)
        if v is None:
            v = tm.lca(a, b)
            lca_cache[key] = v
        return v

    lca_viol: list[tuple[str, str, str]] = []
    nlab = len(labs_by_pos)
    for iu in range(nlab):
        for iv in range(iu + 1, nlab):
            for iw in range(iv + 1, nlab):
                u, v, w = labs_by_pos[iu], labs_by_pos[iv], labs_by_pos[iw]
                a_uw = lca(lows[u], lows[w])
                if not tm.is_ancestor(a_uw, lca(lows[v], lows[w])) or not tm.is_ancestor(
                    a_uw, lca(lows[u], lows[v])
                ):
                    lca_viol.append((u, v, w))
    return RdpOrderReport(sib_viol, lca_viol)


# ---------------------------------------------------------------------------
# Plane graphs with a packing of facial cycles


class PlanarEmbedding:
    """Rotation system (counter-clockwise neighbor lists) plus a packing of
    pairwise vertex-disjoint facial cycles, each given counter-clockwise."""

    def __init__(self, labels: Sequence[str], rotation: Sequence[Sequence[int]],
                 facial_cycles: Sequence[Sequence[int]] = ()):
        self.labels = tuple(labels)
        self.rotation = tuple(tuple(r) for r in rotation)
        self.facial_cycles = tuple(tuple(c) for c in facial_cycles)
        n = len(labels)
        if len(self.rotation) != n:
            raise ModelError("rotation size mismatch")
        edges = set()
        for u, rot in enumerate(self.rotation):
            if len(set(rot)) != len(rot):
                raise ModelError(f"repeated neighbor at vertex {u}")
            for v in rot:
                if not (0 <= v < n) or v == u:
                    raise ModelError(f"bad neighbor {v} at vertex {u}")
                edges.add((min(u, v), max(u, v)))
        for u, v in edges:
            if u not in self.rotation[v] or v not in self.rotation[u]:
                raise ModelError("rotation lists are not symmetric")
        self._edges = edges
        self.graph = Graph.from_index_edges(self.labels, sorted(edges))
        self._validate_faces()
        seen: set[int] = set()
        for cyc in self.facial_cycles:
            if len(cyc) < 3:
                raise ModelError("facial cycle shorter than 3")
            if seen.intersection(cyc):
                raise ModelError("facial cycles are not vertex-disjoint")
            seen.update(cyc)
        self.cycle_of = {v: cyc for cyc in self.facial_cycles for v in cyc}

    def _next_dart(self, u: int, v: int) -> tuple[int, int]:
        rot = self.rotation[v]
        i = rot.index(u)
        return (v, rot[(i + 1) % len(rot)])

    def _validate_faces(self) -> None:
        darts = {(u, v) for u, v in self._edges} | {(v, u) for u, v in self._edges}
        face_of: dict[tuple[int, int], int] = {}
        faces = 0
        for dart in sorted(darts):
            if dart in face_of:
                continue
            cur = dart
            while cur not in face_of:
                face_of[cur] = faces
                cur = self._next_dart(*cur)
            faces += 1
        n, m = len(self.labels), len(self._edges)
        comps = self._component_count()
        if n - m + faces != 1 + comps:
            raise ModelError("rotation system is not a planar embedding (Euler check failed)")
        for cyc in self.facial_cycles:
            ids = {face_of[(cyc[i], cyc[(i + 1) % len(cyc)])] for i in range(len(cyc))}
            if len(ids) != 1:
                raise ModelError(f"cycle {cyc} is not a (counter-clockwise) face")
        self._face_of = face_of

    def _component_count(self) -> int:
        n = len(self.labels)
        seen: set[int] = set()
        comps = 0
        for s in range(n):
            if s in seen:
                continue
            comps += 1
            dq = deque([s])
            seen.add(s)
            while dq:
                x = dq.popleft()
                for y in self.rotation[x]:
                    if y not in seen:
                        seen.add(y)
                        dq.append(y)
        return comps

    def succ_on_cycle(self, v: int) -> int:
        cyc = self.cycle_of[v]
        return cyc[(cyc.index(v) + 1) % len(cyc)]

    def pred_on_cycle(self, v: int) -> int:
        cyc = self.cycle_of[v]
        return cyc[(cyc.index(v) - 1) % len(cyc)]


@dataclass
class LayeredOrder:
    graph: Graph
    order: VertexOrder
    layers: tuple[tuple[int, ...], ...]
    parent: dict[int, int | None]
    explored_edge: dict[int, bool]  # vertex -> tag of the edge to its parent
    cycles: tuple[tuple[int, ...], ...]

    def layer_of(self) -> dict[int, int]:
        return {v: i for i, layer in enumerate(self.layers) for v in layer}


def planar_facial_order(emb: PlanarEmbedding, root: int = 0,
                        facial_vertices: bool = False) -> LayeredOrder:
    """BFS-style discovery order respecting the facial cycle packing.

    A discovered cycle is quarantined behind its first vertex v and released
    in counter-clockwise order only when v's exploration reaches its cycle
    successor.  Tree edges to vertices discovered during the exploration of
    their parent are 'explored'; the within-cycle release edges are
    'fast-track'.  Layers count explored edges on the root path.

    With facial_vertices=True the graph is enhanced with one extra vertex
    per packed cycle, adjacent to the whole cycle and discovered with it.
    """
    n = len(emb.labels)
    if not (0 <= root < n):
        raise ModelError("bad root")
    labels = list(emb.labels)
    extra_base = n
    cyc_vertex: dict[tuple[int, ...], int] = {}
    if facial_vertices:
        for idx, cyc in enumerate(emb.facial_cycles):
            cyc_vertex[cyc] = extra_base + idx
            labels.append(f"face{idx}")
    edges = list(emb.graph.edges())
    if facial_vertices:
        for cyc, fv in cyc_vertex.items():
            edges.extend((v, fv) for v in cyc)
    graph = Graph.from_index_edges(labels, edges)

    WHITE, GRAY, BLACK = 0, 1, 2
    state: list = [WHITE] * len(labels)
    reserved_by: dict[int, int] = {}
    parent: dict[int, int | None] = {root: None}
    explored: dict[int, bool] = {}
    discovery: list[int] = []
    queue: deque[int] = deque()

    def cycle_of(v: int):
        return emb.cycle_of.get(v)

    def discover(v: int, par: int | None, is_explored: bool) -> None:
        state[v] = GRAY
        parent[v] = par
        if par is not None:
            explored[v] = is_explored
        discovery.append(v)
        queue.append(v)

    def reserve_cycle(v: int) -> None:
        cyc = cycle_of(v)
        if cyc is None:
            return
        for z in cyc:
            if z != v:
                state[z] = ("R", v)
        if facial_vertices:
            state[cyc_vertex[cyc]] = ("R", v)

    discover(root, None, False)
    reserve_cycle(root)
    while queue:
        v = queue.popleft()
        rot = emb.rotation[v]
        if not rot:
            state[v] = BLACK
            continue
        par = parent.get(v)
        start = rot.index(par) if par is not None and par in rot else 0
        for step in range(len(rot)):
            u = rot[(start + step) % len(rot)]
            su = state[u]
            if su == WHITE:
                discover(u, v, True)
                reserve_cycle(u)
            elif isinstance(su, tuple) and su == ("R", v) and u == emb.succ_on_cycle(v):
                cyc = cycle_of(v)
                k = cyc.index(v)
                batch = [cyc[(k + s) % len(cyc)] for s in range(1, len(cyc))]
                for z in batch:
                    pz = emb.pred_on_cycle(z)
                    discover(z, pz, pz == v)
                if facial_vertices:
                    discover(cyc_vertex[cyc], v, True)
            # all other states: nothing to do
        state[v] = BLACK

    if len(discovery) != len(labels):
        raise ModelError("graph is disconnected from the root")
    order = VertexOrder(graph, tuple(discovery))

    layer_of: dict[int, int] = {}
    for v in discovery:
        p = parent[v]
        layer_of[v] = 0 if p is None else layer_of[p] + (1 if explored[v] else 0)
    top = max(layer_of.values())
    layers = tuple(
        tuple(v for v in discovery if layer_of[v] == i) for i in range(top + 1)
    )
    return LayeredOrder(graph, order, layers, parent, explored, emb.facial_cycles)


@dataclass
class LayerReport:
    layer_order_violations: list[tuple[int, int]]
    long_edge_violations: list[tuple[int, int]]
    cycle_order_violations: list[tuple[int, ...]]
    subtree_violations: list[tuple[int, int, int]]

    @property
    def ok(self) -> bool:
        return not (
            self.layer_order_violations
            or self.long_edge_violations
            or self.cycle_order_violations
            or self.subtree_violations
        )


def verify_layer_lemmas(lo: LayeredOrder, sample_pairs: int = 400) -> LayerReport:
    """Layers appear consecutively in the order; no edge spans three or more
    layers; each packed cycle appears as a counter-clockwise rotation; and
    same-layer subtrees occupy disjoint position ranges layer by layer."""
    graph = lo.graph
    pos = {v: lo.order.position(v) for v in range(graph.n)}
    layer_of = lo.layer_of()

    order_viol = []
    for i in range(len(lo.layers) - 1):
        if not lo.layers[i] or not lo.layers[i + 1]:
            continue
        if max(pos[v] for v in lo.layers[i]) > min(pos[v] for v in lo.layers[i + 1]):
            order_viol.append((i, i + 1))

    long_viol = []
    for u, v in graph.edges():
        if abs(layer_of[u] - layer_of[v]) >= 3:
            long_viol.append((u, v))

    cyc_viol = []
    for cyc in lo.cycles:
        by_pos = sorted(cyc, key=lambda v: pos[v])
        k = cyc.index(by_pos[0])
        rotated = [cyc[(k + s) % len(cyc)] for s in range(len(cyc))]
        if by_pos != rotated:
            cyc_viol.append(cyc)

    # Subtree interval property: remove tree edges inside the layer prefix,
    # then components of same-layer vertices must not interleave later layers.
    sub_viol = []
    children: dict[int, list[int]] = {v: [] for v in range(graph.n)}
    for v, p in lo.parent.items():
        if p is not None:
            children[p].append(v)

    def subtree_positions(x: int, cutoff: int) -> dict[int, list[int]]:
        """Positions per layer of the component of x after cutting edges with
        both endpoints in layers <= cutoff."""
        acc: dict[int, list[int]] = {}
        stack = [x]
        while stack:
            y = stack.pop()
            acc.setdefault(layer_of[y], []).append(pos[y])
            for c in children[y]:
                if layer_of[c] <= cutoff and layer_of[y] <= cutoff:
                    continue
                stack.append(c)
        return acc

    checked = 0
    for i, layer in enumerate(lo.layers):
        for ai in range(len(layer)):
            for bi in range(ai + 1, len(layer)):
                if checked >= sample_pairs:
                    break
                x, y = layer[ai], layer[bi]
                if pos[x] > pos[y]:
                    x, y = y, x
                px = subtree_positions(x, i)
                py = subtree_positions(y, i)
                checked += 1
                for k in set(px) & set(py):
                    if k < i:
                        continue
                    if max(px[k]) > min(py[k]):
                        sub_viol.append((x, y, k))
    return LayerReport(order_viol, long_viol, cyc_viol, sub_viol)


# ---------------------------------------------------------------------------
# Global order of a grid splitting


@dataclass
class SplitOrder:
    order: VertexOrder
    blocks: list[tuple[int, int, int, int]]  # (i, j, start, end) position ranges
    box: tuple[int, int, int, int]  # imin, jmin, N, M

    def block_index(self, i: int, j: int) -> int:
        imin, jmin, _, m = self.box
        return (i - imin) * m + (j - jmin)


def segment_global_order(split: SplittingResult) -> SplitOrder:
    """Cell-by-cell listing (x-columns outer, y inner); within a cell the
    boundary walk appends each unseen crossing vertex and, right after it,
    the unseen piece of the same segment inside the cell.  Ties at equal
    boundary points follow the scene's segment order."""
    grid = split.grid
    pieces = split.pieces
    if not pieces:
        g = split.graph
        return SplitOrder(VertexOrder.identity(g), [], (0, 0, 0, 0))
    cells = [pc.cell for pc in pieces]
    imin = min(c[0] for c in cells)
    imax = max(c[0] for c in cells)
    jmin = min(c[1] for c in cells)
    jmax = max(c[1] for c in cells)
    n_cols = imax - imin + 1
    m_rows = jmax - jmin + 1

    graph = split.graph
    rank: dict[str, int] = {}
    for pc in pieces:
        rank.setdefault(pc.origin, len(rank))
    piece_at = {(pc.origin, pc.index): pc for pc in pieces}

    listed: set[str] = set()
    sequence: list[int] = []
    blocks: list[tuple[int, int, int, int]] = []

    def emit(lab: str) -> None:
        if lab not in listed:
            listed.add(lab)
            sequence.append(graph.index(lab))

    for i in range(imin, imax + 1):
        for j in range(jmin, jmax + 1):
            rect = grid.cell_rect((i, j))
            events = []
            for dlab, (origin, z) in split.crossings.items():
                t = boundary_param(z, rect)
                if t is None:
                    continue
                r = int(dlab.rsplit(".d", 1)[1])
                events.append((t, rank[origin], r, dlab, origin))
            events.sort()
            start = len(sequence)
            for _, _, r, dlab, origin in events:
                emit(dlab)
                for piece_index in (r, r + 1):
                    pc = piece_at.get((origin, piece_index))
                    if pc is not None and pc.cell == (i, j):
                        emit(pc.label)
            if len(sequence) > start:
                blocks.append((i, j, start, len(sequence)))
    if len(sequence) != graph.n:
        raise ModelError("splitting order did not list every vertex")
    return SplitOrder(VertexOrder(graph, tuple(sequence)), blocks, (imin, jmin, n_cols, m_rows))


# ---------------------------------------------------------------------------
# File formats


def load_tree_model(text: str) -> TreeModel:
    lines = []
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append((no, line))
    if not lines:
        raise FormatError("empty tree model document")
    no, head = lines[0]
    parts = head.split()
    if len(parts) != 2 or parts[0] != "tree":
        raise FormatError(f"line {no}: expected 'tree <nodes>'")
    count = int(parts[1])
    if len(lines) < 2:
        raise FormatError("missing parent list")
    pno, pline = lines[1]
    parents = [int(x) for x in pline.split()]
    if len(parents) != count:
        raise FormatError(f"line {pno}: expected {count} parent entries")
    edges = [(p, i) for i, p in enumerate(parents) if p != -1]
    paths = []
    for no, line in lines[2:]:
        parts = line.split()
        if len(parts) != 4 or parts[0] != "path":
            raise FormatError(f"line {no}: expected 'path <vertex> <high> <low>'")
        paths.append((parts[1], int(parts[2]), int(parts[3])))
    return TreeModel(count, edges, paths)


def dump_tree_model(tm: TreeModel) -> str:
    if tm.multi_root:
        raise ModelError("only rooted models have a parent-list file form")
    out = [f"tree {tm.node_count}", " ".join(str(p) for p in tm.parent)]
    for lab, first, last in tm.paths:
        out.append(f"path {lab} {first} {last}")
    return "\n".join(out) + "\n"


def load_embedding(text: str) -> PlanarEmbedding:
    """Per-vertex rotation lines 'rot <v> <nbr...>' after a 'embedding <n>'
    header, then optional 'facial <v...>' cycle lines."""
    lines = []
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append((no, line))
    if not lines:
        raise FormatError("empty embedding document")
    no, head = lines[0]
    parts = head.split()
    if len(parts) != 2 or parts[0] != "embedding":
        raise FormatError(f"line {no}: expected 'embedding <n>'")
    n = int(parts[1])
    rotation: list[list[int]] = [[] for _ in range(n)]
    cycles = []
    for no, line in lines[1:]:
        parts = line.split()
        if parts[0] == "rot":
            v = int(parts[1])
            rotation[v] = [int(x) for x in parts[2:]]
        elif parts[0] == "facial":
            cycles.append([int(x) for x in parts[1:]])
        else:
            raise FormatError(f"line {no}: expected 'rot' or 'facial'")
    return PlanarEmbedding([f"v{i}" for i in range(n)], rotation, cycles)
