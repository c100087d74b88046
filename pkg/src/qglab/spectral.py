"""Exact Laplacian eigenvalues and eigenfunctions on metric graphs.

On each edge an eigenfunction with eigenvalue k**2 > 0 is a trigonometric
wave a*cos(kx) + b*sin(kx); the vertex conditions assemble into a square
secular matrix of size 2E whose singularity at k characterises the
eigenvalues.  Roots are located by scanning the smallest singular value of
the row-scaled matrix together with sign changes of its determinant, then
refined by bisection / golden section.  An independent finite-element
oracle cross-checks the eigenvalue count so that clustered roots cannot be
silently missed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.linalg import cholesky, solve_triangular

from qglab import fem
from qglab.graph import (
    GraphError,
    MetricGraph,
    VertexCondition,
    total_length,
)


class SpectralError(RuntimeError):
    """Eigenvalue solver failure."""


class NotAnEigenvalueError(SpectralError):
    """Requested eigenvalue is not in the spectrum (secular value too large)."""


class EigenvalueCountError(SpectralError):
    """Exact scan and FEM oracle disagree on the eigenvalue count even after
    rescans; carries diagnostics for inspection."""

    def __init__(self, message: str, diagnostics: "Diagnostics"):
        super().__init__(message)
        self.diagnostics = diagnostics


class EdgeVanishingError(SpectralError):
    """An eigenfunction vanishes identically on the listed edges, so nodal
    domains are not defined edge-wise; perturb the edge lengths and retry."""

    def __init__(self, edges: Sequence[str]):
        super().__init__(f"eigenfunction vanishes identically on edges {list(edges)}")
        self.edges = tuple(edges)


class InadmissibleFunctionError(ValueError):
    """Test function violates continuity, Dirichlet constraints, or is zero."""


@dataclass(frozen=True)
class SolverOptions:
    tol_k: float = 1e-10  # root refinement: bracket width <= tol_k * (1 + k)
    tol_res: float = 1e-8  # max vertex-condition residual of an eigenpair
    rank_tol: float = 1e-7  # singular values below rank_tol * s_max count as zero
    accept_sigma: float = 1e-6  # refined candidate accepted as a root below this
    scan_step_factor: float = 1.0  # multiplies the base step pi / (8 L)
    cross_check: str = "count"  # "none" | "count" | "full"
    cross_check_h: float | None = None  # FEM mesh target; default min edge / 8 or / 32
    max_rescans: int = 3
    max_window_growth: int = 12


DEFAULT_OPTIONS = SolverOptions()


def effective_dirichlet(g: MetricGraph, dirichlet: Iterable[str] | None) -> frozenset[str]:
    """Dirichlet set of the problem: vertices marked in the graph plus any
    extra ids supplied by the caller."""
    dset = set(g.dirichlet_vertices)
    if dirichlet:
        for vid in dirichlet:
            if not g.has_vertex(vid):
                raise GraphError(f"unknown Dirichlet vertex {vid!r}")
            dset.add(vid)
    return frozenset(dset)


# ---------------------------------------------------------------------------
# Secular matrix assembly
# ---------------------------------------------------------------------------

# term kinds: coefficient of one unknown in one row, as a function of k
#   "one"  -> 1          "cos" -> cos(k l_e)      "sin" -> sin(k l_e)
#   "k"    -> k          "kcos" -> k cos(k l_e)   "ksin" -> k sin(k l_e)


_ROW_NORM_FLOOR = 0.25


def _row_plan(g: MetricGraph, dset: frozenset[str]):
    """Rows of the secular system, one block per vertex: continuity plus a
    Kirchhoff balance at natural vertices, one value-zero row per incident
    half-edge at Dirichlet vertices.  Total rows = sum of degrees = 2E.
    Returns the term lists plus a per-row flag marking derivative rows."""
    epos = {e.id: i for i, e in enumerate(g.edges)}
    rows: list[list[tuple[int, str, int, float]]] = []
    deriv: list[bool] = []

    def value_terms(eid: str, end: int, sign: float):
        e = epos[eid]
        if end == 0:
            return [(2 * e, "one", e, sign)]
        return [(2 * e, "cos", e, sign), (2 * e + 1, "sin", e, sign)]

    def derivative_into_terms(eid: str, end: int):
        e = epos[eid]
        if end == 0:  # -u'(0) = -k b
            return [(2 * e + 1, "k", e, -1.0)]
        return [(2 * e, "ksin", e, -1.0), (2 * e + 1, "kcos", e, 1.0)]

    for v in g.vertices:
        inc = g.incidence[v.id]
        if v.id in dset:
            for eid, end in inc:
                rows.append(value_terms(eid, end, 1.0))
                deriv.append(False)
        else:
            for (e1, end1), (e2, end2) in zip(inc, inc[1:]):
                rows.append(value_terms(e1, end1, 1.0) + value_terms(e2, end2, -1.0))
                deriv.append(False)
            kirchhoff: list[tuple[int, str, int, float]] = []
            for eid, end in inc:
                kirchhoff.extend(derivative_into_terms(eid, end))
            rows.append(kirchhoff)
            deriv.append(True)
    return rows, tuple(deriv)


def _assemble_batch(
    rows,
    deriv: tuple[bool, ...],
    lengths: np.ndarray,
    ks: np.ndarray,
    scaled: bool = True,
) -> np.ndarray:
    """Stack of secular matrices for each k in ``ks``.

    With ``scaled`` the derivative rows are divided by k (making all rows
    dimensionless) and every row is divided by max(norm, floor).  The floor
    matters: rows incident to a loop vanish identically at the loop's
    eigenvalues, and normalising a vanishing row to unit length would hide
    the singularity from the smallest singular value.
    """
    m, n = len(ks), 2 * len(lengths)
    kl = ks[:, None] * lengths[None, :]
    C, S = np.cos(kl), np.sin(kl)
    A = np.zeros((m, n, n))
    for r, terms in enumerate(rows):
        for col, kind, e, sign in terms:
            if kind == "one":
                A[:, r, col] += sign
            elif kind == "cos":
                A[:, r, col] += sign * C[:, e]
            elif kind == "sin":
                A[:, r, col] += sign * S[:, e]
            elif kind == "k":
                A[:, r, col] += sign * ks
            elif kind == "kcos":
                A[:, r, col] += sign * ks * C[:, e]
            elif kind == "ksin":
                A[:, r, col] += sign * ks * S[:, e]
    if scaled:
        dmask = np.array(deriv)
        A[:, dmask, :] /= ks[:, None, None]
        norms = np.linalg.norm(A, axis=2)
        A /= np.maximum(norms, _ROW_NORM_FLOOR)[:, :, None]
    return A


def secular_matrix(
    g: MetricGraph, dirichlet: Iterable[str] | None, k: float
) -> np.ndarray:
    """Square matrix of size 2E over the per-edge wave coefficients
    (a_0, b_0, a_1, b_1, ...); k**2 is an eigenvalue iff it is singular.
    Raw (unscaled) rows: values and physical derivatives."""
    if k <= 0:
        raise SpectralError("secular matrix is defined for k > 0")
    dset = effective_dirichlet(g, dirichlet)
    rows, deriv = _row_plan(g, dset)
    lengths = np.array([e.length for e in g.edges])
    return _assemble_batch(rows, deriv, lengths, np.array([k]), scaled=False)[0]


def secular_value(g: MetricGraph, dirichlet: Iterable[str] | None, k: float) -> float:
    """Smallest singular value of the row-scaled secular matrix; continuous
    in k and zero exactly at eigenvalues."""
    if k <= 0:
        raise SpectralError("secular value is defined for k > 0")
    dset = effective_dirichlet(g, dirichlet)
    return _SecularEvaluator(g, dset).sigma(k)


# ---------------------------------------------------------------------------
# Root location
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Diagnostics:
    scan_step: float
    bracket_count: int
    fem_delta: float | None
    rescans: int
    window: tuple[float, float]


class _SecularEvaluator:
    """Caches the row plan; evaluates sigma_min and det sign at scalar or
    vector k, always on the scaled matrix."""

    def __init__(self, g: MetricGraph, dset: frozenset[str]):
        self.rows, self.deriv = _row_plan(g, dset)
        self.lengths = np.array([e.length for e in g.edges])

    def _matrices(self, ks: np.ndarray) -> np.ndarray:
        return _assemble_batch(self.rows, self.deriv, self.lengths, ks)

    def batch(self, ks: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        sigmas = np.empty(len(ks))
        signs = np.empty(len(ks))
        for start in range(0, len(ks), 64):
            chunk = ks[start : start + 64]
            A = self._matrices(chunk)
            sv = np.linalg.svd(A, compute_uv=False)
            sigmas[start : start + 64] = sv[:, -1]
            signs[start : start + 64] = np.linalg.slogdet(A)[0]
        return sigmas, signs

    def sigma(self, k: float) -> float:
        A = self._matrices(np.array([k]))
        return float(np.linalg.svd(A[0], compute_uv=False)[-1])

    def sign(self, k: float) -> float:
        A = self._matrices(np.array([k]))
        return float(np.linalg.slogdet(A[0])[0])

    def singular_values(self, k: float) -> np.ndarray:
        A = self._matrices(np.array([k]))
        return np.linalg.svd(A[0], compute_uv=False)

    def nullspace(self, k: float, rank_tol: float) -> np.ndarray:
        A = self._matrices(np.array([k]))
        _, s, Vt = np.linalg.svd(A[0])
        # the scaled matrix has O(1) natural scale; the max() keeps the rank
        # threshold meaningful when the whole matrix degenerates (pure loop)
        mult = int(np.sum(s <= rank_tol * max(s[0], 1.0)))
        return Vt[len(s) - mult :] if mult else Vt[:0]


def _bisect_sign(ev: _SecularEvaluator, lo: float, hi: float, s_lo: float, tol_k: float) -> float:
    while hi - lo > tol_k * (1.0 + lo):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        s = ev.sign(mid)
        if s == 0.0:
            return mid
        if s == s_lo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _golden_min(ev: _SecularEvaluator, a: float, b: float, tol_k: float) -> float:
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = b - invphi * (b - a)
    x2 = a + invphi * (b - a)
    f1, f2 = ev.sigma(x1), ev.sigma(x2)
    while b - a > tol_k * (1.0 + a):
        if f1 < f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - invphi * (b - a)
            f1 = ev.sigma(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + invphi * (b - a)
            f2 = ev.sigma(x2)
    return 0.5 * (a + b)


def _scan_window(
    ev: _SecularEvaluator,
    k_lo: float,
    k_hi: float,
    step: float,
    opts: SolverOptions,
) -> tuple[list[tuple[float, int]], int]:
    """All roots in [k_lo, k_hi] as (k, multiplicity), plus the number of
    refinement candidates examined.

    Roots come from two detectors: determinant sign changes (odd crossing
    order) and strict local minima of sigma_min (any order).  After a root
    is accepted, the flanking sub-intervals are re-examined for further
    sign changes, so clusters of several roots inside one grid cell are
    still resolved.
    """
    npts = max(4, int(math.ceil((k_hi - k_lo) / step)) + 1)
    grid = np.linspace(k_lo, k_hi, npts)
    sigmas, signs = ev.batch(grid)

    # refined local minima of sigma_min, as extra seed candidates
    dips: list[float] = []
    brackets = 0
    for i in range(npts):
        left = sigmas[i - 1] if i > 0 else math.inf
        right = sigmas[i + 1] if i < npts - 1 else math.inf
        if sigmas[i] < left and sigmas[i] <= right:
            brackets += 1
            a = grid[max(i - 1, 0)]
            b = grid[min(i + 1, npts - 1)]
            dip = _golden_min(ev, a, b, opts.tol_k)
            if ev.sigma(dip) <= opts.accept_sigma:
                dips.append(dip)

    accepted: list[float] = []

    def probe(k: float) -> float:
        k = min(max(k, k_lo), k_hi)
        return ev.sign(k)

    # work stack of sub-intervals with known endpoint signs
    stack: list[tuple[float, float, float, float]] = []
    for i in range(npts - 1):
        stack.append((grid[i], grid[i + 1], signs[i], signs[i + 1]))
    for i in range(npts):
        if signs[i] == 0.0:
            accepted.append(grid[i])

    while stack:
        lo, hi, s_lo, s_hi = stack.pop()
        if hi - lo <= opts.tol_k * (1.0 + lo):
            continue
        root = None
        if s_lo == 0.0 or s_hi == 0.0:
            continue  # endpoint is itself a root, already collected
        if s_lo * s_hi < 0.0:
            brackets += 1
            root = _bisect_sign(ev, lo, hi, s_lo, opts.tol_k)
        else:
            inside = [d for d in dips if lo < d < hi and ev.sigma(d) <= opts.accept_sigma]
            inside = [
                d for d in inside
                if not any(abs(d - a) <= 1e-7 * (1.0 + d) for a in accepted)
            ]
            if inside:
                root = inside[0]
        if root is None:
            continue
        if not any(abs(root - a) <= 1e-7 * (1.0 + root) for a in accepted):
            accepted.append(root)
        delta = max(100.0 * opts.tol_k * (1.0 + root), 1e-12)
        left_hi, right_lo = root - delta, root + delta
        if left_hi > lo:
            stack.append((lo, left_hi, s_lo, probe(left_hi)))
        if right_lo < hi:
            stack.append((right_lo, hi, probe(right_lo), s_hi))

    roots: list[tuple[float, int]] = []
    for k in sorted(accepted):
        if ev.sigma(k) > opts.accept_sigma:
            continue
        if roots and abs(k - roots[-1][0]) <= 1e-7 * (1.0 + k):
            continue
        s = ev.singular_values(k)
        mult = int(np.sum(s <= opts.rank_tol * max(s[0], 1.0)))
        if mult == 0:
            continue
        roots.append((k, mult))
    return roots, brackets


# ---------------------------------------------------------------------------
# Spectrum
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SpectrumEntry:
    lam: float
    multiplicity: int


@dataclass(frozen=True)
class Spectrum:
    entries: tuple[SpectrumEntry, ...]
    diagnostics: Diagnostics

    def values(self, count: int | None = None) -> list[float]:
        """Eigenvalues repeated by multiplicity, ascending."""
        out: list[float] = []
        for e in self.entries:
            out.extend([e.lam] * e.multiplicity)
        return out if count is None else out[:count]

    def nth(self, k: int) -> float:
        """k-th eigenvalue, 1-indexed, counted with multiplicity."""
        vals = self.values()
        if k < 1 or k > len(vals):
            raise IndexError(f"eigenvalue index {k} outside computed range")
        return vals[k - 1]


def _fem_cross_check(
    g: MetricGraph,
    dset: frozenset[str],
    lams: Sequence[float],
    opts: SolverOptions,
) -> tuple[bool, float]:
    """Pair the exact eigenvalues against the FEM oracle; a missed or
    spurious root shifts the pairing by a whole spectral gap and fails."""
    min_edge = min(e.length for e in g.edges)
    if opts.cross_check == "full":
        h = opts.cross_check_h if opts.cross_check_h is not None else min_edge / 32.0
        slack_factor, abs_slack = 1.0, 1e-8
    else:
        h = opts.cross_check_h if opts.cross_check_h is not None else min_edge / 8.0
        slack_factor, abs_slack = 5.0, 1e-6
    result = fem.fem_eigenvalues(g, dset, count=len(lams), h_target=h)
    delta = 0.0
    ok = True
    for lam, ext, est in zip(lams, result.values, result.estimates):
        diff = abs(lam - ext)
        delta = max(delta, diff)
        if diff > slack_factor * est + abs_slack * (1.0 + abs(lam)):
            ok = False
    return ok, delta


def eigenvalues(
    g: MetricGraph,
    dirichlet: Iterable[str] | None = None,
    count: int = 1,
    opts: SolverOptions = DEFAULT_OPTIONS,
) -> Spectrum:
    """Lowest ``count`` eigenvalues with multiplicity.

    k = 0 is handled analytically: it is present (with the constant
    eigenfunction, multiplicity one on a connected graph) iff the problem
    has no Dirichlet vertex.  The trailing entry keeps its full
    multiplicity, so the expanded list may be longer than ``count``.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    dset = effective_dirichlet(g, dirichlet)
    ev = _SecularEvaluator(g, dset)
    L = total_length(g)
    base: list[SpectrumEntry] = []
    if not dset:
        base.append(SpectrumEntry(0.0, 1))

    need = count - len(base)
    step = math.pi / (8.0 * L) * opts.scan_step_factor
    # no positive root lies below ~1/L (interval comparison bounds), so the
    # scan window starts there and the k = 0 singularity is never mistaken
    # for a positive eigenvalue
    k_floor = 0.9 / L
    rescans = 0
    fem_delta: float | None = None

    while True:
        # initial window sized by the Weyl density L/pi; grown on demand so
        # graphs with many clustered high modes are not over-scanned
        k_hi = k_floor + step + math.pi * (max(need, 0) + 1) / L
        roots: list[tuple[float, int]] = []
        brackets = 0
        if need > 0:
            for _ in range(opts.max_window_growth):
                roots, brackets = _scan_window(ev, k_floor, k_hi, step, opts)
                if sum(m for _, m in roots) >= need:
                    break
                k_hi *= 1.4
        if need > 0 and sum(m for _, m in roots) < need:
            raise SpectralError(
                f"could not locate {need} eigenvalues below k = {k_hi}"
            )

        entries = list(base)
        acc = len(base)
        for k, mult in roots:
            if acc >= count:
                break
            entries.append(SpectrumEntry(k * k, mult))
            acc += mult

        if opts.cross_check == "none":
            break
        lams: list[float] = []
        for e in entries:
            lams.extend([e.lam] * e.multiplicity)
        ok, fem_delta = _fem_cross_check(g, dset, lams, opts)
        if ok:
            break
        rescans += 1
        if rescans > opts.max_rescans:
            raise EigenvalueCountError(
                f"exact scan and FEM oracle disagree (max delta {fem_delta})",
                Diagnostics(step, brackets, fem_delta, rescans, (k_floor, k_hi)),
            )
        step *= 0.5

    diag = Diagnostics(step, brackets, fem_delta, rescans, (k_floor, k_hi))
    return Spectrum(tuple(entries), diag)


def nth_eigenvalue(
    g: MetricGraph,
    k: int,
    dirichlet: Iterable[str] | None = None,
    opts: SolverOptions = DEFAULT_OPTIONS,
) -> float:
    """k-th eigenvalue (1-indexed, with multiplicity) of the problem."""
    return eigenvalues(g, dirichlet, count=k, opts=opts).nth(k)


# ---------------------------------------------------------------------------
# Eigenfunctions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EdgeWave:
    """Restriction of an eigenfunction to one edge: a*cos(kx) + b*sin(kx)
    in the edge's own coordinate (the constant a when k = 0)."""

    edge: str
    a: float
    b: float

    def value(self, k: float, x: float) -> float:
        if k == 0.0:
            return self.a
        return self.a * math.cos(k * x) + self.b * math.sin(k * x)

    def derivative(self, k: float, x: float) -> float:
        if k == 0.0:
            return 0.0
        return k * (-self.a * math.sin(k * x) + self.b * math.cos(k * x))


@dataclass(frozen=True)
class Eigenpair:
    lam: float
    k: float
    waves: tuple[EdgeWave, ...]
    multiplicity: int
    normalized: bool

    def wave(self, eid: str) -> EdgeWave:
        for w in self.waves:
            if w.edge == eid:
                return w
        raise KeyError(eid)


def _same_k_integral(k: float, length: float, a1, b1, a2, b2) -> float:
    """Integral over [0, length] of the product of two waves with equal k."""
    if k == 0.0:
        return a1 * a2 * length
    s2 = math.sin(2 * k * length)
    c2 = math.cos(2 * k * length)
    icc = length / 2.0 + s2 / (4.0 * k)
    iss = length / 2.0 - s2 / (4.0 * k)
    ics = (1.0 - c2) / (4.0 * k)
    return a1 * a2 * icc + (a1 * b2 + b1 * a2) * ics + b1 * b2 * iss


def _cross_k_integral(k1: float, a1, b1, k2: float, a2, b2, length: float) -> float:
    """Integral of the product of two waves with distinct wavenumbers."""
    if k1 == 0.0 and k2 == 0.0:
        return a1 * a2 * length
    if k1 == 0.0:
        return a1 * (
            a2 * math.sin(k2 * length) / k2 + b2 * (1.0 - math.cos(k2 * length)) / k2
        )
    if k2 == 0.0:
        return a2 * (
            a1 * math.sin(k1 * length) / k1 + b1 * (1.0 - math.cos(k1 * length)) / k1
        )
    if abs(k1 - k2) <= 1e-12 * (k1 + k2):
        return _same_k_integral(0.5 * (k1 + k2), length, a1, b1, a2, b2)
    p, q = k1 + k2, k1 - k2
    sp, sq = math.sin(p * length), math.sin(q * length)
    cp, cq = math.cos(p * length), math.cos(q * length)
    icc = 0.5 * (sq / q + sp / p)
    iss = 0.5 * (sq / q - sp / p)
    isc = 0.5 * ((1.0 - cp) / p + (1.0 - cq) / q)  # sin(k1 x) cos(k2 x)
    ics = 0.5 * ((1.0 - cp) / p - (1.0 - cq) / q)  # cos(k1 x) sin(k2 x)
    return a1 * a2 * icc + a1 * b2 * ics + b1 * a2 * isc + b1 * b2 * iss


def l2_inner(g: MetricGraph, ep1: Eigenpair, ep2: Eigenpair) -> float:
    """L2 inner product of two eigenfunctions via closed-form edge integrals."""
    total = 0.0
    for e in g.edges:
        w1, w2 = ep1.wave(e.id), ep2.wave(e.id)
        total += _cross_k_integral(ep1.k, w1.a, w1.b, ep2.k, w2.a, w2.b, e.length)
    return total


def l2_norm_sq(g: MetricGraph, k: float, coeffs: np.ndarray) -> float:
    total = 0.0
    for i, e in enumerate(g.edges):
        a, b = coeffs[2 * i], coeffs[2 * i + 1]
        total += _same_k_integral(k, e.length, a, b, a, b)
    return total


def _sign_fix(coeffs: np.ndarray) -> np.ndarray:
    scale = np.max(np.abs(coeffs))
    for c in coeffs:
        if abs(c) > 1e-9 * scale:
            return coeffs if c > 0 else -coeffs
    return coeffs


def eigenfunction(
    g: MetricGraph,
    dirichlet: Iterable[str] | None,
    lam: float,
    opts: SolverOptions = DEFAULT_OPTIONS,
) -> list[Eigenpair]:
    """Orthonormal basis of the eigenspace of ``lam`` as wave bundles.

    The basis is L2-orthonormalised with exact edge integrals; each
    function's first nonzero coefficient (in edge order) is positive and
    its vertex-condition residual is verified against ``opts.tol_res``.
    """
    dset = effective_dirichlet(g, dirichlet)
    if lam < 0:
        raise NotAnEigenvalueError("eigenvalues are nonnegative")
    if lam <= 1e-14:
        if dset:
            raise NotAnEigenvalueError("0 is not an eigenvalue with Dirichlet vertices")
        c = 1.0 / math.sqrt(total_length(g))
        waves = tuple(EdgeWave(e.id, c, 0.0) for e in g.edges)
        return [Eigenpair(0.0, 0.0, waves, 1, True)]

    k = math.sqrt(lam)
    ev = _SecularEvaluator(g, dset)
    sigma = ev.sigma(k)
    if sigma > opts.accept_sigma:
        raise NotAnEigenvalueError(
            f"secular value {sigma:.3e} at k = {k} exceeds {opts.accept_sigma}"
        )
    basis = ev.nullspace(k, opts.rank_tol)
    mult = basis.shape[0]
    if mult == 0:
        raise NotAnEigenvalueError(f"no nullspace at k = {k}")

    # L2 Gram matrix of the coefficient basis, then orthonormalise
    gram = np.empty((mult, mult))
    for i in range(mult):
        for j in range(i, mult):
            total = 0.0
            for idx, e in enumerate(g.edges):
                total += _same_k_integral(
                    k,
                    e.length,
                    basis[i, 2 * idx],
                    basis[i, 2 * idx + 1],
                    basis[j, 2 * idx],
                    basis[j, 2 * idx + 1],
                )
            gram[i, j] = gram[j, i] = total
    upper = cholesky(gram, lower=False)
    ortho = solve_triangular(upper, basis, trans="T", lower=False)

    A = ev._matrices(np.array([k]))[0]
    pairs: list[Eigenpair] = []
    for row in ortho:
        coeffs = _sign_fix(row)
        residual = float(np.max(np.abs(A @ coeffs)))
        if residual > opts.tol_res:
            raise SpectralError(
                f"eigenpair residual {residual:.3e} exceeds {opts.tol_res}"
            )
        norm_sq = l2_norm_sq(g, k, coeffs)
        if abs(norm_sq - 1.0) > 1e-9:
            raise SpectralError("orthonormalisation failed")
        waves = tuple(
            EdgeWave(e.id, float(coeffs[2 * i]), float(coeffs[2 * i + 1]))
            for i, e in enumerate(g.edges)
        )
        pairs.append(Eigenpair(lam, k, waves, mult, True))
    return pairs


def vertex_value(g: MetricGraph, ep: Eigenpair, vid: str) -> float:
    """Eigenfunction value at a vertex, read off any incident half-edge."""
    eid, end = g.incidence[vid][0]
    e = g.edge(eid)
    return ep.wave(eid).value(ep.k, 0.0 if end == 0 else e.length)


def wave_sup(k: float, w: EdgeWave, length: float) -> float:
    """Supremum of |a cos(kx) + b sin(kx)| over [0, length]: the full
    amplitude if an interior critical point exists, otherwise the larger
    endpoint value."""
    if k == 0.0:
        return abs(w.a)
    amplitude = math.hypot(w.a, w.b)
    phase = math.atan2(w.b, w.a)
    # critical points at kx = phase + m pi
    m_lo = math.ceil((0.0 - phase) / math.pi - 1e-12)
    if phase + m_lo * math.pi <= k * length + 1e-12:
        return amplitude
    return max(abs(w.value(k, 0.0)), abs(w.value(k, length)))


# ---------------------------------------------------------------------------
# Rayleigh quotients
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PiecewiseLinear:
    """Continuous piecewise-linear test function given by its endpoint
    values on every edge: (edge id, value at x=0, value at x=length)."""

    values: tuple[tuple[str, float, float], ...]

    def endpoint(self, eid: str) -> tuple[float, float]:
        for k, v0, v1 in self.values:
            if k == eid:
                return v0, v1
        raise KeyError(eid)


def _check_vertex_continuity(g: MetricGraph, dset, value_at) -> None:
    scale = max(abs(v) for v in value_at.values()) or 1.0
    for v in g.vertices:
        vals = [value_at[(eid, end)] for eid, end in g.incidence[v.id]]
        if max(vals) - min(vals) > 1e-8 * scale:
            raise InadmissibleFunctionError(f"discontinuous at vertex {v.id!r}")
        if v.id in dset and max(abs(x) for x in vals) > 1e-8 * scale:
            raise InadmissibleFunctionError(
                f"nonzero at Dirichlet vertex {v.id!r}"
            )


def rayleigh_quotient(
    g: MetricGraph,
    dirichlet: Iterable[str] | None,
    f: Eigenpair | PiecewiseLinear,
) -> float:
    """Energy over mass of an admissible test function, via exact edgewise
    integrals; equals the eigenvalue exactly when f is an eigenfunction."""
    dset = effective_dirichlet(g, dirichlet)
    num = 0.0
    den = 0.0
    value_at: dict[tuple[str, int], float] = {}
    if isinstance(f, PiecewiseLinear):
        for e in g.edges:
            v0, v1 = f.endpoint(e.id)
            value_at[(e.id, 0)] = v0
            value_at[(e.id, 1)] = v1
            slope = (v1 - v0) / e.length
            num += slope * slope * e.length
            den += e.length * (v0 * v0 + v0 * v1 + v1 * v1) / 3.0
    else:
        k = f.k
        for e in g.edges:
            w = f.wave(e.id)
            value_at[(e.id, 0)] = w.value(k, 0.0)
            value_at[(e.id, 1)] = w.value(k, e.length)
            # derivative of a wave is the wave (k b, -k a)
            num += _same_k_integral(k, e.length, k * w.b, -k * w.a, k * w.b, -k * w.a)
            den += _same_k_integral(k, e.length, w.a, w.b, w.a, w.b)
    if den <= 0 or den < 1e-14 * total_length(g) * max(
        1.0, max(v * v for v in value_at.values())
    ):
        raise InadmissibleFunctionError("test function is (numerically) zero")
    _check_vertex_continuity(g, dset, value_at)
    return num / den


# ---------------------------------------------------------------------------
# Edge energies and length perturbation
# ---------------------------------------------------------------------------


def pruefer_amplitude(g: MetricGraph, ep: Eigenpair, eid: str) -> float:
    """Edge energy lam * psi**2 + psi'**2, constant along each edge; equals
    k**2 (a**2 + b**2) for the edge's wave.  Requires a normalized
    eigenpair with lam > 0."""
    if not ep.normalized:
        raise SpectralError("eigenpair must be normalized")
    if ep.lam <= 0:
        raise SpectralError("edge energy requires lam > 0")
    w = ep.wave(eid)
    amp = ep.lam * (w.a * w.a + w.b * w.b)
    # spot check constancy along the edge
    e = g.edge(eid)
    for t in (0.0, 0.25, 0.5, 0.75, 1.0):
        x = t * e.length
        val = ep.lam * w.value(ep.k, x) ** 2 + w.derivative(ep.k, x) ** 2
        if abs(val - amp) > 1e-9 * (1.0 + amp):
            raise SpectralError("edge energy is not constant: inconsistent wave")
    return amp


def hadamard_derivative(
    g: MetricGraph,
    dirichlet: Iterable[str] | None,
    lam: float,
    eid: str,
    opts: SolverOptions = DEFAULT_OPTIONS,
) -> float:
    """Rate of change of a simple eigenvalue with respect to the length of
    one edge: minus the edge energy of the normalized eigenfunction."""
    pairs = eigenfunction(g, dirichlet, lam, opts)
    if pairs[0].multiplicity != 1:
        raise SpectralError(
            "length derivative requires a simple eigenvalue "
            f"(multiplicity {pairs[0].multiplicity})"
        )
    return -pruefer_amplitude(g, pairs[0], eid)


# ---------------------------------------------------------------------------
# Nodal domains
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NodalDomain:
    """One nodal domain: its closure as a metric graph whose boundary zeros
    carry Dirichlet conditions, plus the restricted eigenfunction."""

    graph: MetricGraph
    k: float
    waves: tuple[EdgeWave, ...]

    @property
    def lam(self) -> float:
        return self.k * self.k


def _edge_zeros(k: float, w: EdgeWave, length: float) -> list[float]:
    """Interior zeros of the wave on (0, length), deduplicated against the
    endpoints with tolerance 1e-9 * length."""
    phase = math.atan2(w.b, w.a)
    tol = 1e-9 * length
    zeros = []
    # zeros of R cos(kx - phase) at kx = phase + pi/2 + j pi
    j_min = math.floor((k * 0.0 - phase - math.pi / 2) / math.pi) - 1
    j_max = math.ceil((k * length - phase - math.pi / 2) / math.pi) + 1
    for j in range(int(j_min), int(j_max) + 1):
        x = (phase + math.pi / 2 + j * math.pi) / k
        if tol < x < length - tol:
            zeros.append(x)
    return sorted(zeros)


def nodal_domains(g: MetricGraph, ep: Eigenpair) -> list[NodalDomain]:
    """Split the graph along the zero set of the eigenfunction.

    Each connected component of {psi != 0} is returned as a metric graph
    whose boundary zeros are fresh Dirichlet vertices; the restriction of
    psi is supplied per component.  Edges on which psi vanishes identically
    are an error (perturb the lengths for genericity and retry).
    """
    if ep.lam <= 0:
        raise SpectralError("nodal decomposition requires lam > 0")
    k = ep.k
    amps = {w.edge: math.hypot(w.a, w.b) for w in ep.waves}
    scale = max(amps.values())
    dead = [eid for eid, amp in amps.items() if amp <= 1e-8 * scale]
    if dead:
        raise EdgeVanishingError(dead)

    value_scale = scale
    vertex_zero = {
        v.id: abs(vertex_value(g, ep, v.id)) <= 1e-8 * value_scale for v in g.vertices
    }

    # segments: (edge, x_lo, x_hi, left anchor, right anchor) where an anchor
    # is ("v", vertex id) or ("z", zero key)
    segments = []
    zero_keys: list[tuple[str, float]] = []
    for e in g.edges:
        w = ep.wave(e.id)
        cuts = _edge_zeros(k, w, e.length)
        anchors: list[tuple[str, object]] = []
        anchors.append(("v", e.u) if not vertex_zero[e.u] else ("z", ("v", e.u)))
        for x in cuts:
            key = ("x", e.id, round(x, 15))
            zero_keys.append(key)
            anchors.append(("z", key))
        anchors.append(("v", e.v) if not vertex_zero[e.v] else ("z", ("v", e.v)))
        xs = [0.0] + cuts + [e.length]
        for i in range(len(xs) - 1):
            segments.append((e.id, xs[i], xs[i + 1], anchors[i], anchors[i + 1]))

    # union-find over segments, merging through non-zero vertices
    parent = list(range(len(segments)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i, j):
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)

    by_vertex: dict[str, list[int]] = {}
    for idx, (_, _, _, left, right) in enumerate(segments):
        for anchor in (left, right):
            if anchor[0] == "v":
                by_vertex.setdefault(anchor[1], []).append(idx)
    for idxs in by_vertex.values():
        for other in idxs[1:]:
            union(idxs[0], other)

    comp_order: dict[int, int] = {}
    for idx in range(len(segments)):
        root = find(idx)
        if root not in comp_order:
            comp_order[root] = len(comp_order)

    all_ids = {e.id for e in g.edges}
    domains: list[NodalDomain] = []
    for root, comp_idx in sorted(comp_order.items(), key=lambda kv: kv[1]):
        members = [i for i in range(len(segments)) if find(i) == root]
        vertices: list = []
        added: set[str] = set()
        edges = []
        waves = []
        used_edge_ids: set[str] = set()
        zero_names: dict[object, str] = {}
        zcount = 0

        def anchor_vertex(anchor) -> str:
            nonlocal zcount
            if anchor[0] == "v":
                if anchor[1] not in added:
                    added.add(anchor[1])
                    vertices.append((anchor[1], VertexCondition.NATURAL))
                return anchor[1]
            key = anchor[1]
            if key not in zero_names:
                name = f"z{comp_idx}x{zcount}"
                zcount += 1
                zero_names[key] = name
                vertices.append((name, VertexCondition.DIRICHLET))
            return zero_names[key]

        for i in members:
            eid, x_lo, x_hi, left, right = segments[i]
            u = anchor_vertex(left)
            v = anchor_vertex(right)
            e = g.edge(eid)
            if x_lo == 0.0 and x_hi == e.length:
                new_id = eid
            else:
                serial = 0
                new_id = f"{eid}s{serial}"
                while new_id in used_edge_ids or new_id in all_ids:
                    serial += 1
                    new_id = f"{eid}s{serial}"
            used_edge_ids.add(new_id)
            w = ep.wave(eid)
            c, s = math.cos(k * x_lo), math.sin(k * x_lo)
            a2 = w.a * c + w.b * s
            b2 = -w.a * s + w.b * c
            edges.append((new_id, u, v, x_hi - x_lo))
            waves.append(EdgeWave(new_id, a2, b2))

        domains.append(
            NodalDomain(MetricGraph.of(vertices, edges), k, tuple(waves))
        )
    return domains
