"""Graph surgery: vertex gluing, point cutting, edge lengthening, and
transplantation of edge mass.

All operations return new immutable graphs; ids of surviving elements are
preserved and new elements get fresh ids from a deterministic scheme, so
repeated runs produce identical graphs.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

from qglab.graph import (
    Edge,
    GraphError,
    GraphPoint,
    MetricGraph,
    Vertex,
    VertexCondition,
)


class SurgeryError(GraphError):
    """Invalid surgery operation."""


def _fresh_ids(existing: set[str], stem: str, count: int) -> list[str]:
    out: list[str] = []
    serial = 0
    while len(out) < count:
        candidate = f"{stem}{serial}"
        if candidate not in existing:
            out.append(candidate)
            existing.add(candidate)
        serial += 1
    return out


def _merge_condition(c1: VertexCondition, c2: VertexCondition) -> VertexCondition:
    # a Dirichlet constraint survives gluing: the merged vertex is pinned
    if VertexCondition.DIRICHLET in (c1, c2):
        return VertexCondition.DIRICHLET
    return VertexCondition.NATURAL


def with_vertex_condition(
    g: MetricGraph, vid: str, condition: VertexCondition
) -> MetricGraph:
    """Copy of the graph with one vertex's condition replaced."""
    if not g.has_vertex(vid):
        raise SurgeryError(f"unknown vertex {vid!r}")
    vertices = tuple(
        Vertex(v.id, condition) if v.id == vid else v for v in g.vertices
    )
    return MetricGraph(vertices, g.edges)


def glue(g: MetricGraph, v1: str, v2: str) -> MetricGraph:
    """Merge two vertices into one (keeping v1's id); edge set and total
    length are unchanged and the cycle count rises by one.  The merged
    vertex is Dirichlet if either input was."""
    if v1 == v2:
        raise SurgeryError("cannot glue a vertex to itself")
    a, b = g.vertex(v1), g.vertex(v2)
    merged = Vertex(v1, _merge_condition(a.condition, b.condition))
    vertices = tuple(
        merged if v.id == v1 else v for v in g.vertices if v.id != v2
    )
    edges = tuple(
        Edge(e.id, v1 if e.u == v2 else e.u, v1 if e.v == v2 else e.v, e.length)
        for e in g.edges
    )
    return MetricGraph(vertices, edges)


def glue_graphs(
    g1: MetricGraph,
    g2: MetricGraph,
    v1: str,
    v2: str,
    prefixes: tuple[str, str] = ("l", "r"),
) -> MetricGraph:
    """Join two separate graphs by identifying vertex v1 of the first with
    vertex v2 of the second.  All ids are prefixed to stay unique; the
    junction keeps the (prefixed) id of v1."""
    p1, p2 = prefixes
    a, b = g1.vertex(v1), g2.vertex(v2)
    junction = Vertex(f"{p1}{v1}", _merge_condition(a.condition, b.condition))
    vertices: list[Vertex] = []
    for v in g1.vertices:
        vertices.append(junction if v.id == v1 else Vertex(f"{p1}{v.id}", v.condition))
    for v in g2.vertices:
        if v.id != v2:
            vertices.append(Vertex(f"{p2}{v.id}", v.condition))

    def map1(vid: str) -> str:
        return f"{p1}{vid}"

    def map2(vid: str) -> str:
        return junction.id if vid == v2 else f"{p2}{vid}"

    edges = [Edge(f"{p1}{e.id}", map1(e.u), map1(e.v), e.length) for e in g1.edges]
    edges += [Edge(f"{p2}{e.id}", map2(e.u), map2(e.v), e.length) for e in g2.edges]
    return MetricGraph(tuple(vertices), tuple(edges))


def split_point(g: MetricGraph, p: GraphPoint) -> tuple[MetricGraph, str]:
    """Insert a natural degree-2 vertex at an interior point of an edge.

    Spectrally neutral; returns the new graph and the new vertex id.
    """
    e = g.edge(p.edge)
    if not (1e-12 * e.length < p.offset < e.length * (1 - 1e-12)):
        raise SurgeryError("split point must be interior to the edge")
    existing = {v.id for v in g.vertices} | {x.id for x in g.edges}
    (mid,) = _fresh_ids(existing, "m", 1)
    ea, eb = _fresh_ids(existing, f"{p.edge}p", 2)
    vertices = g.vertices + (Vertex(mid),)
    edges = []
    for x in g.edges:
        if x.id == p.edge:
            edges.append(Edge(ea, x.u, mid, p.offset))
            edges.append(Edge(eb, mid, x.v, x.length - p.offset))
        else:
            edges.append(x)
    return MetricGraph(vertices, tuple(edges)), mid


def _component_split(
    vertices: Sequence[Vertex], edges: Sequence[Edge]
) -> list[MetricGraph]:
    adj: dict[str, set[str]] = {v.id: set() for v in vertices}
    for e in edges:
        adj[e.u].add(e.v)
        adj[e.v].add(e.u)
    seen: set[str] = set()
    comps: list[MetricGraph] = []
    for v in vertices:
        if v.id in seen:
            continue
        stack, comp = [v.id], {v.id}
        seen.add(v.id)
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    comp.add(w)
                    stack.append(w)
        comp_vertices = tuple(x for x in vertices if x.id in comp)
        comp_edges = tuple(e for e in edges if e.u in comp)
        if comp_edges:
            comps.append(MetricGraph(comp_vertices, comp_edges))
    return comps


def cut_components(
    g: MetricGraph,
    p: GraphPoint,
    bipartition: Iterable[tuple[str, int]] | None = None,
) -> tuple[MetricGraph, ...]:
    """Cut the graph open at a point, allowing disconnection; returns the
    resulting connected components (order: by first vertex).

    An interior point of an edge is split into two fresh degree-1 vertices.
    Cutting at a vertex needs a bipartition: the half-edges ``(edge id,
    end)`` that move to the fresh copy of the vertex; both copies keep the
    vertex's condition.
    """
    e = g.edge(p.edge)
    existing = {v.id for v in g.vertices} | {x.id for x in g.edges}
    at_u = p.offset <= 1e-12 * e.length
    at_v = p.offset >= e.length * (1 - 1e-12)
    if at_u or at_v:
        w = g.vertex(e.u if at_u else e.v)
        if bipartition is None:
            raise SurgeryError("cutting at a vertex requires a bipartition")
        moving = set(bipartition)
        inc = set(g.incidence[w.id])
        if not moving or not moving < inc:
            raise SurgeryError(
                "bipartition must be a nonempty proper subset of the vertex's half-edges"
            )
        (copy_id,) = _fresh_ids(existing, "c", 1)
        vertices = g.vertices + (Vertex(copy_id, w.condition),)
        edges = []
        for x in g.edges:
            u = copy_id if (x.id, 0) in moving and x.u == w.id else x.u
            v = copy_id if (x.id, 1) in moving and x.v == w.id else x.v
            edges.append(Edge(x.id, u, v, x.length))
        return tuple(_component_split(vertices, edges))
    if bipartition is not None:
        raise SurgeryError("bipartition applies only to vertex cuts")
    c1, c2 = _fresh_ids(existing, "c", 2)
    ea, eb = _fresh_ids(existing, f"{p.edge}c", 2)
    vertices = g.vertices + (Vertex(c1), Vertex(c2))
    edges = []
    for x in g.edges:
        if x.id == p.edge:
            edges.append(Edge(ea, x.u, c1, p.offset))
            edges.append(Edge(eb, c2, x.v, x.length - p.offset))
        else:
            edges.append(x)
    return tuple(_component_split(vertices, edges))


def cut(
    g: MetricGraph,
    p: GraphPoint,
    bipartition: Iterable[tuple[str, int]] | None = None,
) -> MetricGraph:
    """Cut at a point; the cut must not disconnect the graph (use
    ``cut_components`` to allow components)."""
    comps = cut_components(g, p, bipartition)
    if len(comps) != 1:
        raise SurgeryError(f"cut disconnects the graph into {len(comps)} components")
    return comps[0]


def cut_loops_at_midpoints(g: MetricGraph) -> MetricGraph:
    """Cut every loop edge at its midpoint; leaves total length unchanged,
    and leaves the diameter unchanged when no loop is longer than it."""
    out = g
    while True:
        loop = next((e for e in out.edges if e.is_loop), None)
        if loop is None:
            return out
        out = cut(out, GraphPoint(loop.id, loop.length / 2.0))


def lengthen(g: MetricGraph, eid: str, delta: float) -> MetricGraph:
    """Increase one edge's length by delta > 0."""
    if delta <= 0:
        raise SurgeryError("delta must be positive")
    e = g.edge(eid)
    edges = tuple(
        Edge(x.id, x.u, x.v, x.length + delta) if x.id == eid else x for x in g.edges
    )
    return MetricGraph(g.vertices, edges)


def transplant(
    g: MetricGraph,
    delete_edges: Iterable[str],
    v: str,
    pendants: Sequence[float] = (),
    extensions: Mapping[str, float] | None = None,
) -> MetricGraph:
    """Delete edges (without gluing their endpoints) and re-invest at least
    the same total length at the vertex v, as new pendant edges and/or
    extensions of edges incident to v.

    Surviving Dirichlet vertices are preserved; vertices isolated by the
    deletion are dropped.  Errors if the deleted length exceeds the added
    length, or if the result is disconnected or loses a Dirichlet vertex.
    """
    extensions = dict(extensions or {})
    to_delete = set(delete_edges)
    for eid in to_delete:
        g.edge(eid)  # existence check
    if not g.has_vertex(v):
        raise SurgeryError(f"unknown vertex {v!r}")
    deleted_total = sum(g.edge(eid).length for eid in to_delete)
    added_total = sum(pendants) + sum(extensions.values())
    if added_total < deleted_total - 1e-12:
        raise SurgeryError(
            f"length deficit: removing {deleted_total}, adding {added_total}"
        )
    if any(x <= 0 for x in pendants) or any(x <= 0 for x in extensions.values()):
        raise SurgeryError("additions must have positive length")

    surviving = [e for e in g.edges if e.id not in to_delete]
    incident = {e.id for e in surviving if v in (e.u, e.v)}
    for eid in extensions:
        if eid not in incident:
            raise SurgeryError(f"extension target {eid!r} is not incident to {v!r}")

    edges = [
        Edge(e.id, e.u, e.v, e.length + extensions.get(e.id, 0.0))
        if e.id in extensions
        else e
        for e in surviving
    ]
    existing = {x.id for x in g.vertices} | {x.id for x in g.edges}
    tips = _fresh_ids(existing, "tp", len(pendants))
    pend_ids = _fresh_ids(existing, "ep", len(pendants))
    new_vertices = [Vertex(t) for t in tips]
    for eid, tip, length in zip(pend_ids, tips, pendants):
        edges.append(Edge(eid, v, tip, length))

    used = {e.u for e in edges} | {e.v for e in edges}
    vertices = []
    for x in g.vertices:
        if x.id in used:
            vertices.append(x)
        elif x.condition is VertexCondition.DIRICHLET:
            raise SurgeryError(f"transplant would isolate Dirichlet vertex {x.id!r}")
    vertices.extend(new_vertices)
    try:
        return MetricGraph(tuple(vertices), tuple(edges))
    except GraphError as exc:
        raise SurgeryError(f"transplant disconnects the graph: {exc}") from exc
