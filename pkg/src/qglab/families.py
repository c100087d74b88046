"""Constructors for the named graph families used throughout the package.

The central family is the star with one long Dirichlet edge and ``n``
identical short pendant edges; gluing two such stars at their Dirichlet
tips gives a symmetric star dumbbell, gluing ``k`` of them gives a star
tree.  These families realise the extremal limits of the spectral-gap /
diameter bounds checked by the verify module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from qglab.graph import (
    GraphError,
    MetricGraph,
    VertexCondition,
)

D = VertexCondition.DIRICHLET


@dataclass(frozen=True)
class StarParams:
    """Star with total length L, diameter D and n identical pendant edges.

    The distinguished edge has length ``(n*D - L)/(n - 1)`` and carries a
    Dirichlet condition at its far end; the n pendants have length
    ``(L - D)/(n - 1)`` each.
    """

    L: float
    D: float
    n: int

    def __post_init__(self):
        if self.n < 2:
            raise GraphError("star needs n >= 2")
        if not 0 < self.D <= self.L:
            raise GraphError(f"need 0 < D <= L, got D={self.D}, L={self.L}")
        if self.ell0 <= 0:
            raise GraphError(
                f"degenerate distinguished edge: n*D - L = {self.n * self.D - self.L} <= 0"
            )
        if self.ell1 < 0:
            raise GraphError("negative pendant length")

    @property
    def ell0(self) -> float:
        return (self.n * self.D - self.L) / (self.n - 1)

    @property
    def ell1(self) -> float:
        return (self.L - self.D) / (self.n - 1)


def shorter_edges_ok(p: StarParams) -> bool:
    """True when the pendants are no longer than the distinguished edge.

    Under this condition the star's diameter is exactly D; otherwise two
    pendant tips are further apart than D.  Exposed as a flag, not an error.
    """
    return p.ell1 <= p.ell0 + 1e-12


@dataclass(frozen=True)
class DumbbellParams:
    """Star dumbbell: a handle of length ell0 joining two vertices, with n
    pendants of length ell1 at one end and n of length ell2 at the other.
    Zero pendant lengths drop the pendants entirely."""

    ell0: float
    ell1: float
    ell2: float
    n: int

    def __post_init__(self):
        if self.ell0 <= 0:
            raise GraphError("handle length must be positive")
        if self.n < 1:
            raise GraphError("need n >= 1")
        if self.ell1 < 0 or self.ell2 < 0:
            raise GraphError("negative pendant length")


def make_star(p: StarParams) -> MetricGraph:
    """Star with Dirichlet vertex ``v0`` at the far end of the distinguished
    edge ``e0`` and natural conditions elsewhere."""
    if p.ell1 <= 0:
        raise GraphError("pendant length is zero; use the limit-equation solvers instead")
    vertices: list = [("v0", D), "c"]
    edges = [("e0", "v0", "c", p.ell0)]
    for i in range(1, p.n + 1):
        vertices.append(f"t{i}")
        edges.append((f"p{i}", "c", f"t{i}", p.ell1))
    return MetricGraph.of(vertices, edges)


def make_star_dumbbell(p: DumbbellParams) -> MetricGraph:
    """Handle v1--v2 with n pendants at each end; no Dirichlet vertices."""
    vertices: list = ["v1", "v2"]
    edges = [("h", "v1", "v2", p.ell0)]
    if p.ell1 > 0:
        for i in range(1, p.n + 1):
            vertices.append(f"a{i}")
            edges.append((f"pa{i}", "v1", f"a{i}", p.ell1))
    if p.ell2 > 0:
        for i in range(1, p.n + 1):
            vertices.append(f"b{i}")
            edges.append((f"pb{i}", "v2", f"b{i}", p.ell2))
    return MetricGraph.of(vertices, edges)


def make_symmetric_dumbbell(L: float, D_: float, n: int) -> MetricGraph:
    """Symmetric star dumbbell with total length L and diameter D: handle
    (n*D - L)/(n - 1) and 2n pendants of (L - D)/(2(n - 1)) each.

    Equals two stars of length L/2 and diameter D/2 glued at their
    Dirichlet tips, with the marking removed.
    """
    if not 0 < D_ < L:
        raise GraphError(f"need 0 < D < L, got D={D_}, L={L}")
    if n < 2:
        raise GraphError("need n >= 2")
    if n * D_ - L <= 0:
        raise GraphError(f"degenerate handle: n*D - L = {n * D_ - L} <= 0")
    handle = (n * D_ - L) / (n - 1)
    pendant = (L - D_) / (2 * (n - 1))
    return make_star_dumbbell(DumbbellParams(handle, pendant, pendant, n))


def make_star_tree(L: float, D_: float, k: int, n: int) -> MetricGraph:
    """k stars of length L/k and diameter D/2 joined at their common
    (unmarked) Dirichlet tip; a tree with total length L and diameter D."""
    if k < 2:
        raise GraphError("need k >= 2")
    p = StarParams(L / k, D_ / 2, n)  # validates the per-star parameters
    if p.ell1 <= 0:
        raise GraphError("pendant length is zero")
    vertices: list = ["w"]
    edges = []
    for j in range(1, k + 1):
        vertices.append(f"c{j}")
        edges.append((f"e0{j}", "w", f"c{j}", p.ell0))
        for i in range(1, n + 1):
            vertices.append(f"t{j}x{i}")
            edges.append((f"p{j}x{i}", f"c{j}", f"t{j}x{i}", p.ell1))
    return MetricGraph.of(vertices, edges)


# ---------------------------------------------------------------------------
# Basic shapes
# ---------------------------------------------------------------------------


def make_path(L: float) -> MetricGraph:
    if L <= 0:
        raise GraphError("length must be positive")
    return MetricGraph.of(["a", "b"], [("e", "a", "b", L)])


def make_loop(L: float) -> MetricGraph:
    if L <= 0:
        raise GraphError("length must be positive")
    return MetricGraph.of(["a"], [("e", "a", "a", L)])


def make_equilateral_star(L: float, k: int) -> MetricGraph:
    """k edges of length L/k joined at one common vertex."""
    if L <= 0 or k < 2:
        raise GraphError("need L > 0 and k >= 2")
    vertices: list = ["c"] + [f"t{i}" for i in range(1, k + 1)]
    edges = [(f"e{i}", "c", f"t{i}", L / k) for i in range(1, k + 1)]
    return MetricGraph.of(vertices, edges)


def make_tadpole(loop_len: float, tail_len: float) -> MetricGraph:
    if loop_len <= 0 or tail_len <= 0:
        raise GraphError("lengths must be positive")
    return MetricGraph.of(
        ["a", "b"], [("loop", "a", "a", loop_len), ("tail", "a", "b", tail_len)]
    )


def make_pendant_cycle(side: float, pendant: float) -> MetricGraph:
    """4-cycle with side length ``side`` and one pendant edge of length
    ``pendant`` at each cycle vertex; cutting the cycle anywhere increases
    the diameter."""
    if side <= 0 or pendant <= 0:
        raise GraphError("lengths must be positive")
    vertices: list = [f"c{i}" for i in range(4)] + [f"t{i}" for i in range(4)]
    edges = [(f"s{i}", f"c{i}", f"c{(i + 1) % 4}", side) for i in range(4)]
    edges += [(f"p{i}", f"c{i}", f"t{i}", pendant) for i in range(4)]
    return MetricGraph.of(vertices, edges)


BASIC_KINDS = ("path", "loop", "equilateral_star", "tadpole", "pendant_cycle")


def make_basic(kind: str, *params: float) -> MetricGraph:
    """Dispatch constructor for the simple shapes, keyed by name."""
    if kind == "path":
        (L,) = params
        return make_path(L)
    if kind == "loop":
        (L,) = params
        return make_loop(L)
    if kind == "equilateral_star":
        L, k = params
        return make_equilateral_star(L, int(k))
    if kind == "tadpole":
        loop_len, tail_len = params
        return make_tadpole(loop_len, tail_len)
    if kind == "pendant_cycle":
        side, pendant = params
        return make_pendant_cycle(side, pendant)
    raise GraphError(f"unknown basic family {kind!r}; choose from {BASIC_KINDS}")


# ---------------------------------------------------------------------------
# Closed-form star secular function
# ---------------------------------------------------------------------------


def star_secular(p: StarParams, k: float) -> float:
    """Characteristic function of the star's lowest Dirichlet eigenvalue.

    Vanishes exactly when k**2 is an eigenvalue of the star with a
    symmetric (pendant-permutation-invariant) eigenfunction; its smallest
    positive root gives the star's first Dirichlet eigenvalue.  Derivation:
    a wave A*sin(k x) on the Dirichlet edge and C*cos(k(ell1 - y)) on every
    pendant, matched by continuity and the Kirchhoff balance at the centre.
    """
    return math.cos(k * p.ell0) * math.cos(k * p.ell1) - p.n * math.sin(
        k * p.ell0
    ) * math.sin(k * p.ell1)


def star_mu1(p: StarParams) -> float:
    """Smallest positive root of ``star_secular``, squared: the star's first
    Dirichlet eigenvalue, located by bisection on a sign-change bracket."""
    # The first root lies before the first zero of cos(k*ell0)*cos(k*ell1),
    # i.e. before pi/2 divided by the longer edge; scan up to there.
    hi_cap = math.pi / (2 * max(p.ell0, p.ell1))
    nsteps = 4096
    lo = 0.0
    f_lo = 1.0  # value at k -> 0+
    root_lo = root_hi = None
    for i in range(1, nsteps + 1):
        k = hi_cap * i / nsteps
        f = star_secular(p, k)
        if f == 0.0:
            return k * k
        if f_lo > 0 > f:
            root_lo, root_hi = lo, k
            break
        lo, f_lo = k, f
    if root_lo is None:
        raise GraphError("no sign change found for star secular function")
    for _ in range(200):
        mid = 0.5 * (root_lo + root_hi)
        if mid == root_lo or mid == root_hi:
            break
        if star_secular(p, mid) > 0:
            root_lo = mid
        else:
            root_hi = mid
    k = 0.5 * (root_lo + root_hi)
    return k * k
