"""Compact metric graphs: data model, MGF text format, and metric geometry.

A metric graph is a combinatorial multigraph whose edges carry positive
lengths; every edge ``e`` is identified with the interval ``[0, len(e)]``
running from its first endpoint to its second.  Loops and parallel edges
are allowed.  Graphs are immutable after construction and all operations
here are pure functions, so instances can be shared freely.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import shortest_path

LENGTH_TOL = 1e-12  # absolute tolerance when comparing lengths / offsets

_ID_RE = re.compile(r"^[A-Za-z0-9_]+$")


class GraphError(ValueError):
    """Invalid metric graph or invalid operation on one."""


class GraphParseError(GraphError):
    """MGF text could not be parsed; carries the offending line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class VertexCondition(Enum):
    NATURAL = "natural"  # continuity + Kirchhoff
    DIRICHLET = "dirichlet"  # value pinned to zero


@dataclass(frozen=True)
class Vertex:
    id: str
    condition: VertexCondition = VertexCondition.NATURAL


@dataclass(frozen=True)
class Edge:
    id: str
    u: str
    v: str
    length: float

    @property
    def is_loop(self) -> bool:
        return self.u == self.v


@dataclass(frozen=True)
class GraphPoint:
    """A location on a graph: an edge id plus an arclength offset from its
    first endpoint."""

    edge: str
    offset: float


@dataclass(frozen=True)
class MetricGraph:
    """Immutable, connected, compact metric graph.

    ``vertices`` and ``edges`` keep their construction order, which fixes
    the deterministic row/column orderings used elsewhere.
    """

    vertices: tuple[Vertex, ...]
    edges: tuple[Edge, ...]

    def __post_init__(self):
        seen_v: set[str] = set()
        for v in self.vertices:
            if not _ID_RE.match(v.id):
                raise GraphError(f"invalid vertex id {v.id!r}")
            if v.id in seen_v:
                raise GraphError(f"duplicate vertex id {v.id!r}")
            seen_v.add(v.id)
        if not self.edges:
            raise GraphError("graph must have at least one edge")
        seen_e: set[str] = set()
        for e in self.edges:
            if not _ID_RE.match(e.id):
                raise GraphError(f"invalid edge id {e.id!r}")
            if e.id in seen_e:
                raise GraphError(f"duplicate edge id {e.id!r}")
            seen_e.add(e.id)
            if e.u not in seen_v or e.v not in seen_v:
                raise GraphError(f"edge {e.id!r} references unknown vertex")
            if not (e.length > 0.0) or not np.isfinite(e.length):
                raise GraphError(f"edge {e.id!r} has nonpositive length {e.length}")
        if seen_v - {e.u for e in self.edges} - {e.v for e in self.edges}:
            raise GraphError("graph has isolated vertices")
        if not self._connected():
            raise GraphError("graph is disconnected")

    @classmethod
    def of(
        cls,
        vertices: Iterable[str | tuple[str, VertexCondition]],
        edges: Iterable[tuple[str, str, str, float]],
    ) -> "MetricGraph":
        """Build from plain tuples; bare vertex ids default to natural."""
        vs = []
        for item in vertices:
            if isinstance(item, str):
                vs.append(Vertex(item))
            else:
                vs.append(Vertex(item[0], item[1]))
        es = [Edge(eid, u, v, float(length)) for eid, u, v, length in edges]
        return cls(tuple(vs), tuple(es))

    # -- basic lookups ------------------------------------------------

    @cached_property
    def _vpos(self) -> dict[str, int]:
        return {v.id: i for i, v in enumerate(self.vertices)}

    @cached_property
    def _epos(self) -> dict[str, int]:
        return {e.id: i for i, e in enumerate(self.edges)}

    def vertex(self, vid: str) -> Vertex:
        return self.vertices[self._vpos[vid]]

    def edge(self, eid: str) -> Edge:
        return self.edges[self._epos[eid]]

    def has_vertex(self, vid: str) -> bool:
        return vid in self._vpos

    @cached_property
    def dirichlet_vertices(self) -> frozenset[str]:
        return frozenset(
            v.id for v in self.vertices if v.condition is VertexCondition.DIRICHLET
        )

    @cached_property
    def incidence(self) -> dict[str, list[tuple[str, int]]]:
        """Half-edges at each vertex as ``(edge id, end)`` with end 0 or 1,
        in edge order; a loop contributes both of its ends."""
        inc: dict[str, list[tuple[str, int]]] = {v.id: [] for v in self.vertices}
        for e in self.edges:
            inc[e.u].append((e.id, 0))
            inc[e.v].append((e.id, 1))
        return inc

    def degree(self, vid: str) -> int:
        return len(self.incidence[vid])

    def _connected(self) -> bool:
        adj: dict[str, set[str]] = {v.id: set() for v in self.vertices}
        for e in self.edges:
            adj[e.u].add(e.v)
            adj[e.v].add(e.u)
        start = self.vertices[0].id
        seen = {start}
        stack = [start]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self.vertices)

    # -- vertex-to-vertex shortest paths ------------------------------

    @cached_property
    def vertex_distances(self) -> np.ndarray:
        """All-pairs shortest path lengths between vertices (dense array in
        vertex order).  Parallel edges collapse to their shortest
        representative; loops are irrelevant here."""
        n = len(self.vertices)
        best: dict[tuple[int, int], float] = {}
        for e in self.edges:
            i, j = self._vpos[e.u], self._vpos[e.v]
            if i == j:
                continue
            key = (min(i, j), max(i, j))
            if key not in best or e.length < best[key]:
                best[key] = e.length
        if best:
            rows = [k[0] for k in best]
            cols = [k[1] for k in best]
            data = [best[k] for k in best]
            m = coo_matrix((data, (rows, cols)), shape=(n, n))
        else:
            m = coo_matrix((n, n))
        return shortest_path(m.tocsr(), method="D", directed=False)

    def _vdist(self, a: str, b: str) -> float:
        return float(self.vertex_distances[self._vpos[a], self._vpos[b]])


# ---------------------------------------------------------------------------
# MGF text format
# ---------------------------------------------------------------------------


def parse_graph(text: str) -> MetricGraph:
    """Parse MGF text into a validated MetricGraph.

    Format, line oriented: ``#`` starts a comment; ``vertex <id> [dirichlet]``
    declares a vertex (natural by default); ``edge <id> <u> <v> <length>``
    declares an edge with a positive decimal length.  Vertices must be
    declared before the edges that use them.
    """
    vertices: list[Vertex] = []
    edges: list[tuple[str, str, str, float]] = []
    declared: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        kind = tokens[0]
        if kind == "vertex":
            if len(tokens) not in (2, 3):
                raise GraphParseError("expected 'vertex <id> [dirichlet]'", lineno)
            vid = tokens[1]
            if not _ID_RE.match(vid):
                raise GraphParseError(f"invalid vertex id {vid!r}", lineno)
            if vid in declared:
                raise GraphParseError(f"duplicate vertex id {vid!r}", lineno)
            cond = VertexCondition.NATURAL
            if len(tokens) == 3:
                if tokens[2] != "dirichlet":
                    raise GraphParseError(f"unknown vertex flag {tokens[2]!r}", lineno)
                cond = VertexCondition.DIRICHLET
            declared.add(vid)
            vertices.append(Vertex(vid, cond))
        elif kind == "edge":
            if len(tokens) != 5:
                raise GraphParseError("expected 'edge <id> <u> <v> <length>'", lineno)
            eid, u, v, length_str = tokens[1:]
            if u not in declared or v not in declared:
                raise GraphParseError(
                    f"edge {eid!r} uses undeclared vertex", lineno
                )
            try:
                length = float(length_str)
            except ValueError:
                raise GraphParseError(f"bad length {length_str!r}", lineno) from None
            if not length > 0.0:
                raise GraphParseError(f"nonpositive length {length_str}", lineno)
            edges.append((eid, u, v, length))
        else:
            raise GraphParseError(f"unknown directive {kind!r}", lineno)
    try:
        return MetricGraph.of(
            [(v.id, v.condition) for v in vertices], edges
        )
    except GraphError as exc:
        raise GraphError(f"invalid graph: {exc}") from exc


def dump_graph(g: MetricGraph, comment: str | None = None) -> str:
    """Serialize to MGF text; round-trips through parse_graph."""
    lines = []
    if comment:
        for part in comment.splitlines():
            lines.append(f"# {part}")
    for v in g.vertices:
        if v.condition is VertexCondition.DIRICHLET:
            lines.append(f"vertex {v.id} dirichlet")
        else:
            lines.append(f"vertex {v.id}")
    for e in g.edges:
        lines.append(f"edge {e.id} {e.u} {e.v} {e.length!r}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Scalar invariants
# ---------------------------------------------------------------------------


def total_length(g: MetricGraph) -> float:
    return float(sum(e.length for e in g.edges))


def betti(g: MetricGraph) -> int:
    """Number of independent cycles: E - V + 1 for a connected graph."""
    return len(g.edges) - len(g.vertices) + 1


# ---------------------------------------------------------------------------
# Distances
# ---------------------------------------------------------------------------


def _check_point(g: MetricGraph, p: GraphPoint) -> Edge:
    e = g.edge(p.edge)
    if not (-LENGTH_TOL <= p.offset <= e.length + LENGTH_TOL):
        raise GraphError(
            f"offset {p.offset} outside [0, {e.length}] on edge {p.edge!r}"
        )
    return e


def distance(g: MetricGraph, p: GraphPoint, q: GraphPoint) -> float:
    """Length of the shortest path in the graph between two points.

    A shortest path either stays inside a single edge or decomposes as
    (segment to an endpoint) + (vertex-to-vertex path) + (segment from an
    endpoint); parallel edges and loops make the vertex-routed candidates
    necessary even for two points of the same edge.
    """
    e = _check_point(g, p)
    f = _check_point(g, q)
    t = min(max(p.offset, 0.0), e.length)
    s = min(max(q.offset, 0.0), f.length)
    routed = [
        t + g._vdist(e.u, f.u) + s,
        t + g._vdist(e.u, f.v) + (f.length - s),
        (e.length - t) + g._vdist(e.v, f.u) + s,
        (e.length - t) + g._vdist(e.v, f.v) + (f.length - s),
    ]
    if p.edge == q.edge:
        routed.append(abs(s - t))
    return min(routed)


def _pair_functions(
    g: MetricGraph, e: Edge, f: Edge
) -> list[tuple[float, float, float]]:
    """Linear candidate functions (ct, cs, c0) -> ct*t + cs*s + c0 whose
    pointwise minimum is the distance between offset t on e and offset s
    on f (for e == f, valid on the triangle t <= s)."""
    funcs = [
        (1.0, 1.0, g._vdist(e.u, f.u)),
        (1.0, -1.0, g._vdist(e.u, f.v) + f.length),
        (-1.0, 1.0, g._vdist(e.v, f.u) + e.length),
        (-1.0, -1.0, g._vdist(e.v, f.v) + e.length + f.length),
    ]
    if e.id == f.id:
        funcs.append((-1.0, 1.0, 0.0))  # direct segment, s >= t
    return funcs


def _line_intersection(l1, l2) -> tuple[float, float] | None:
    (a1, b1, c1), (a2, b2, c2) = l1, l2
    det = a1 * b2 - a2 * b1
    if abs(det) < 1e-14:
        return None
    t = (c1 * b2 - c2 * b1) / det
    s = (a1 * c2 - a2 * c1) / det
    return t, s


def _max_min_over_region(
    funcs: Sequence[tuple[float, float, float]],
    boundaries: Sequence[tuple[float, float, float]],
    corners: Sequence[tuple[float, float]],
    clamp,
) -> float:
    """Maximize min_i(f_i) over a convex polygon given by boundary lines and
    corners.  The maximum of a concave piecewise-linear function is attained
    at a corner, at a tie-line/boundary crossing, or at a tie-line/tie-line
    crossing.  Candidates are clamped into the region, so the result is
    always an attained distance value and never an overestimate."""
    candidates: list[tuple[float, float]] = list(corners)
    ties = []
    for (a1, b1, c1), (a2, b2, c2) in itertools.combinations(funcs, 2):
        # f1 == f2  <=>  (a1-a2) t + (b1-b2) s = c2 - c1
        ties.append((a1 - a2, b1 - b2, c2 - c1))
    lines = ties + list(boundaries)
    for l1, l2 in itertools.combinations(lines, 2):
        pt = _line_intersection(l1, l2)
        if pt is not None:
            candidates.append(clamp(*pt))
    best = 0.0
    for t, s in candidates:
        val = min(a * t + b * s + c for a, b, c in funcs)
        if val > best:
            best = val
    return best


def diameter(g: MetricGraph) -> float:
    """Largest distance between any two points of the graph.

    Exact: for each edge pair the point-to-point distance is a minimum of
    finitely many linear functions of the two offsets, and the maximum of
    that concave function is found on a finite candidate set.
    """
    best = 0.0
    for i, e in enumerate(g.edges):
        for f in g.edges[i:]:
            funcs = _pair_functions(g, e, f)
            if e.id == f.id:
                le = e.length
                boundaries = [(1.0, 0.0, 0.0), (0.0, 1.0, le), (1.0, -1.0, 0.0)]
                corners = [(0.0, 0.0), (0.0, le), (le, le)]

                def clamp(t, s, le=le):
                    t = min(max(t, 0.0), le)
                    s = min(max(s, t), le)
                    return t, s

            else:
                le, lf = e.length, f.length
                boundaries = [
                    (1.0, 0.0, 0.0),
                    (1.0, 0.0, le),
                    (0.0, 1.0, 0.0),
                    (0.0, 1.0, lf),
                ]
                corners = [(0.0, 0.0), (0.0, lf), (le, 0.0), (le, lf)]

                def clamp(t, s, le=le, lf=lf):
                    return min(max(t, 0.0), le), min(max(s, 0.0), lf)

            val = _max_min_over_region(funcs, boundaries, corners, clamp)
            if val > best:
                best = val
    return best


def dirichlet_eccentricity(g: MetricGraph, dirichlet: Iterable[str] | None = None) -> float:
    """Largest distance from a point of the graph to the Dirichlet vertex set.

    ``dirichlet`` adds vertex ids to the ones marked in the graph.
    """
    dset = set(g.dirichlet_vertices)
    if dirichlet:
        dset |= set(dirichlet)
    if not dset:
        raise GraphError("graph has no Dirichlet vertex")
    for vid in dset:
        if not g.has_vertex(vid):
            raise GraphError(f"unknown Dirichlet vertex {vid!r}")
    best = 0.0
    for e in g.edges:
        # distance from offset t to the set: min over linear functions of t
        funcs = []
        for d in dset:
            funcs.append((1.0, g._vdist(e.u, d)))  # exit through u
            funcs.append((-1.0, e.length + g._vdist(e.v, d)))  # exit through v
        # candidates: endpoints and pairwise tie points
        cands = [0.0, e.length]
        for (a1, c1), (a2, c2) in itertools.combinations(funcs, 2):
            if abs(a1 - a2) > 1e-14:
                t = (c2 - c1) / (a1 - a2)
                if -1e-12 <= t <= e.length + 1e-12:
                    cands.append(min(max(t, 0.0), e.length))
        for t in cands:
            val = min(a * t + c for a, c in funcs)
            if val > best:
                best = val
    return best


# ---------------------------------------------------------------------------
# Degree-two suppression and loops
# ---------------------------------------------------------------------------


def suppress_degree_two(g: MetricGraph) -> MetricGraph:
    """Merge the two incident edges of every natural degree-2 vertex.

    Vertices whose two half-edges belong to the same edge (a bare loop
    base) are kept.  Merged edges get ids joined with underscores; ids of
    surviving elements are preserved.
    """
    vertices = {v.id: v for v in g.vertices}
    edges = {e.id: e for e in g.edges}

    def find_suppressible():
        inc: dict[str, list[tuple[str, int]]] = {vid: [] for vid in vertices}
        for e in edges.values():
            inc[e.u].append((e.id, 0))
            inc[e.v].append((e.id, 1))
        for vid, half in inc.items():
            if (
                len(half) == 2
                and vertices[vid].condition is VertexCondition.NATURAL
                and half[0][0] != half[1][0]
            ):
                return vid, half
        return None

    while True:
        found = find_suppressible()
        if found is None:
            break
        vid, ((id1, end1), (id2, end2)) = found
        e1, e2 = edges.pop(id1), edges.pop(id2)
        # orient e1 to end at vid and e2 to start at vid
        a = e1.u if end1 == 1 else e1.v
        b = e2.v if end2 == 0 else e2.u
        merged = Edge(f"{id1}_{id2}", a, b, e1.length + e2.length)
        edges[merged.id] = merged
        del vertices[vid]
    return MetricGraph(tuple(vertices.values()), tuple(edges.values()))


def max_loop_length(g: MetricGraph) -> float:
    """Length of the longest loop after suppressing degree-2 vertices;
    0 for a graph with no loops."""
    reduced = suppress_degree_two(g)
    loops = [e.length for e in reduced.edges if e.is_loop]
    return max(loops) if loops else 0.0


# ---------------------------------------------------------------------------
# Canonical signature (family identity testing)
# ---------------------------------------------------------------------------


def canonical_signature(g: MetricGraph):
    """Hashable fingerprint invariant under relabelling and subdivision by
    natural degree-2 vertices.

    Not a general isomorphism test: degree sequence plus incident-length
    multisets, which separates the graph families used here.
    """
    r = suppress_degree_two(g)
    vert_sig = []
    for v in r.vertices:
        lens = tuple(sorted(round(r.edge(eid).length, 12) for eid, _ in r.incidence[v.id]))
        vert_sig.append((v.condition.value, len(lens), lens))
    edge_sig = []
    for e in r.edges:
        du, dv = sorted((r.degree(e.u), r.degree(e.v)))
        cu, cv = sorted((r.vertex(e.u).condition.value, r.vertex(e.v).condition.value))
        edge_sig.append((round(e.length, 12), e.is_loop, du, dv, cu, cv))
    return (tuple(sorted(vert_sig)), tuple(sorted(edge_sig)))


def same_shape(g1: MetricGraph, g2: MetricGraph) -> bool:
    return canonical_signature(g1) == canonical_signature(g2)
