"""The partition functional on finite sets and polytopes.

Finite sets get exact values of b(X) and f_m(X): a partition into parts of
diameter <= D is exactly a proper coloring of the graph joining pairs at
distance > D, so both reduce to exact graph coloring. Polytopes get verified
upper bounds via geometric partition patterns (fans and cut trees) whose
pieces are re-verified from their vertex sets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .geometry import (
    EUCLIDEAN,
    Metric,
    Pt,
    PointSet,
    VPolytope,
    convex_hull_2d,
    diameter,
    dist_sq,
    hausdorff,
    polygon_area,
    polygon_centroid,
    to_float,
    vadd,
    vdot,
    vsub,
)
from .scalars import DEFAULT_TOL, all_exact


class SearchBudgetExceeded(RuntimeError):
    """Exact search ran out of its node budget; the answer is unknown, not 'no'."""


# ---------------------------------------------------------------------------
# threshold graphs and exact coloring
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ThresholdGraph:
    """Graph on point indices with an edge wherever distance exceeds the threshold."""

    n_vertices: int
    edges: tuple[tuple[int, int], ...]
    threshold: object
    source_diameter: object

    def adjacency(self) -> list[int]:
        adj = [0] * self.n_vertices
        for i, j in self.edges:
            adj[i] |= 1 << j
            adj[j] |= 1 << i
        return adj


def threshold_graph(X: PointSet, metric: Metric = EUCLIDEAN, D=None) -> ThresholdGraph:
    """Edges join pairs with distance strictly greater than D (exact in rational mode)."""
    pts = X.points
    if D is None:
        D, _ = diameter(X, metric)
    exact = X.is_exact() and metric.kind == "euclidean"
    edges = []
    if exact:
        DD = D * D
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                if dist_sq(pts[i], pts[j]) > DD:
                    edges.append((i, j))
    else:
        Df = to_float(D)
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                if metric.dist(pts[i], pts[j]) > Df:
                    edges.append((i, j))
    d, _ = diameter(X, metric)
    return ThresholdGraph(len(pts), tuple(edges), D, d)


def _greedy_clique(adj: list[int], n: int) -> list[int]:
    """Greedy clique by descending degree; cheap lower bound for pruning."""
    order = sorted(range(n), key=lambda v: -bin(adj[v]).count("1"))
    clique: list[int] = []
    for v in order:
        if all(adj[v] >> u & 1 for u in clique):
            clique.append(v)
    return clique


def is_m_colorable(G: ThresholdGraph, m: int, budget: int = 2_000_000):
    """Exact m-colorability by saturation-ordered branch and bound.

    Returns a proper coloring (list of ints) or None when no coloring exists.
    Raises SearchBudgetExceeded when the node budget runs out, which is an
    'unknown', never a 'no'. The returned coloring is verified before return.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    n = G.n_vertices
    adj = G.adjacency()
    if not G.edges:
        return [0] * n
    clique = _greedy_clique(adj, n)
    if len(clique) > m:
        return None
    colors = [-1] * n
    # pre-color the greedy clique: sound symmetry breaking
    for c, v in enumerate(clique):
        colors[v] = c
    nodes = 0

    def saturation(v: int) -> int:
        seen = 0
        a = adj[v]
        while a:
            u = (a & -a).bit_length() - 1
            a &= a - 1
            if colors[u] >= 0:
                seen |= 1 << colors[u]
        return seen

    def pick() -> int:
        best, best_key = -1, None
        for v in range(n):
            if colors[v] >= 0:
                continue
            sat = bin(saturation(v)).count("1")
            deg = bin(adj[v]).count("1")
            key = (-sat, -deg, v)
            if best_key is None or key < best_key:
                best, best_key = v, key
        return best

    def solve() -> bool:
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise SearchBudgetExceeded(f"coloring budget {budget} exhausted")
        v = pick()
        if v < 0:
            return True
        used = saturation(v)
        for c in range(m):
            if used >> c & 1:
                continue
            colors[v] = c
            if solve():
                return True
            colors[v] = -1
        return False

    if not solve():
        return None
    for i, j in G.edges:  # verify properness before returning
        if colors[i] == colors[j]:
            raise AssertionError("search returned an improper coloring")
    return list(colors)


@dataclass(frozen=True)
class ChromaticResult:
    lo: int
    hi: int
    coloring: tuple[int, ...] | None

    @property
    def exact(self) -> bool:
        return self.lo == self.hi

    @property
    def value(self) -> int:
        if not self.exact:
            raise SearchBudgetExceeded(f"chromatic number bracketed in [{self.lo}, {self.hi}]")
        return self.lo


def chromatic_number(n_vertices: int, edges, budget: int = 2_000_000) -> ChromaticResult:
    """Exact chromatic number with witness coloring; bracket on budget exhaustion."""
    G = ThresholdGraph(n_vertices, tuple(edges), None, None)
    if not G.edges:
        return ChromaticResult(1, 1, tuple([0] * n_vertices))
    adj = G.adjacency()
    lo = max(2, len(_greedy_clique(adj, n_vertices)))
    # greedy upper bound coloring (largest degree first)
    order = sorted(range(n_vertices), key=lambda v: -bin(adj[v]).count("1"))
    greedy = [-1] * n_vertices
    for v in order:
        used = {greedy[u] for u in range(n_vertices) if adj[v] >> u & 1 and greedy[u] >= 0}
        c = 0
        while c in used:
            c += 1
        greedy[v] = c
    hi = max(greedy) + 1
    best = tuple(greedy)
    m = lo
    while m < hi:
        try:
            col = is_m_colorable(G, m, budget=budget)
        except SearchBudgetExceeded:
            return ChromaticResult(m, hi, best)
        if col is not None:
            return ChromaticResult(m, m, tuple(col))
        m += 1
    return ChromaticResult(hi, hi, best)


# ---------------------------------------------------------------------------
# b(X) and f_m(X) for finite sets
# ---------------------------------------------------------------------------

def diametral_graph(X: PointSet, metric: Metric = EUCLIDEAN, tol: float | None = None):
    """Edges join pairs at exactly the diameter (relative tolerance in float mode)."""
    tol = DEFAULT_TOL if tol is None else tol
    pts = X.points
    exact = X.is_exact() and metric.kind == "euclidean"
    edges = []
    if exact:
        dd, _ = _max_comparable(pts, metric)
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                if dist_sq(pts[i], pts[j]) == dd:
                    edges.append((i, j))
    else:
        d, _ = diameter(X, metric)
        cut = d * (1 - tol)
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                if metric.dist(pts[i], pts[j]) >= cut:
                    edges.append((i, j))
    return edges


def _max_comparable(pts, metric: Metric):
    best, wit = None, (0, 0)
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            c = metric.comparable(pts[i], pts[j])
            if best is None or c > best:
                best, wit = c, (i, j)
    return best, wit


def b_finite(X: PointSet, metric: Metric = EUCLIDEAN, budget: int = 2_000_000,
             tol: float | None = None) -> ChromaticResult:
    """Least number of parts of strictly smaller diameter: chromatic number of
    the diametral graph. The witness coloring is the partition."""
    if len(X) < 2:
        raise ValueError("b(X) needs at least two points")
    edges = diametral_graph(X, metric, tol)
    return chromatic_number(len(X), edges, budget=budget)


@dataclass(frozen=True)
class PartitionResult:
    """An m-part division with per-part diameters and theta = max diameter / d."""

    m: int
    theta: float
    d: float
    part_diameters: tuple[float, ...]
    assignment: tuple[int, ...] | None = None          # finite sets: point -> part
    pieces: tuple[tuple[Pt, ...], ...] | None = None   # polytopes: piece vertex lists
    pattern: str = ""
    exact: bool = True
    theta_bounds: tuple[float, float] | None = None

    def max_part_diameter(self) -> float:
        return max(self.part_diameters) if self.part_diameters else 0.0


def _partition_from_coloring(X: PointSet, metric: Metric, coloring, m: int,
                             pattern: str, exact=True, bounds=None) -> PartitionResult:
    parts: dict[int, list[Pt]] = {}
    for idx, c in enumerate(coloring):
        parts.setdefault(c, []).append(X.points[idx])
    diams = []
    for c in range(m):
        group = parts.get(c, [])
        if len(group) < 2:
            diams.append(0.0)
        else:
            diams.append(diameter(PointSet.of(group), metric)[0])
    d, _ = diameter(X, metric)
    theta = max(diams) / d if d > 0 else 0.0
    return PartitionResult(m, theta, d, tuple(diams), assignment=tuple(coloring),
                           pattern=pattern, exact=exact, theta_bounds=bounds)


def f_m_finite(X: PointSet, m: int, metric: Metric = EUCLIDEAN,
               budget: int = 2_000_000, tol: float | None = None) -> PartitionResult:
    """Exact f_m: least theta with an m-partition of all part diameters <= theta*d(X).

    Candidate thresholds are the realized pairwise distances plus zero
    (strict-> edges make the optimum attained); binary search over them for
    the least m-colorable threshold. In float mode, distances closer than
    tol*d are merged into one candidate.
    """
    if len(X) < 2:
        raise ValueError("f_m needs at least two points")
    if m < 1:
        raise ValueError("m must be >= 1")
    tol = DEFAULT_TOL if tol is None else tol
    pts = X.points
    exact = X.is_exact() and metric.kind == "euclidean"
    vals = sorted({metric.comparable(pts[i], pts[j])
                   for i in range(len(pts)) for j in range(i + 1, len(pts))})
    if not exact:
        merged = []
        scale = to_float(vals[-1])
        for v in vals:
            if merged and to_float(v) - to_float(merged[-1]) <= tol * max(scale, 1.0):
                merged[-1] = v  # group representative: the largest of the cluster
            else:
                merged.append(v)
        vals = merged
    zero = 0 if exact else 0.0
    cands = [zero] + vals  # comparable scale (squared for Euclidean)
    d_cmp = vals[-1]

    def colorable(ix: int):
        thr = cands[ix]
        edges = []
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                if metric.comparable(pts[i], pts[j]) > thr:
                    edges.append((i, j))
        G = ThresholdGraph(len(pts), tuple(edges), thr, d_cmp)
        return is_m_colorable(G, m, budget=budget)

    lo, hi = 0, len(cands) - 1  # hi = diameter threshold: always colorable (no edges)
    best_col = colorable(hi)
    try:
        while lo < hi:
            mid = (lo + hi) // 2
            col = colorable(mid)
            if col is not None:
                hi, best_col = mid, col
            else:
                lo = mid + 1
    except SearchBudgetExceeded:
        # bracket: thresholds below lo unknown, hi known colorable
        res = _partition_from_coloring(X, metric, best_col, m, "threshold-coloring",
                                       exact=False, bounds=None)
        tlo = math.sqrt(to_float(cands[lo])) / math.sqrt(to_float(d_cmp)) if metric.kind == "euclidean" or metric.p == 2 else to_float(cands[lo]) / to_float(d_cmp)
        return PartitionResult(res.m, res.theta, res.d, res.part_diameters,
                               assignment=res.assignment, pattern=res.pattern,
                               exact=False, theta_bounds=(tlo, res.theta))
    return _partition_from_coloring(X, metric, best_col, m, "threshold-coloring")


# ---------------------------------------------------------------------------
# Hausdorff continuity of f_m
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ContinuityCheck:
    epsilon: float
    m: int
    f1: float
    f2: float
    bound_ok: bool


def check_continuity(X1: PointSet, X2: PointSet, m: int,
                     metric: Metric = EUCLIDEAN, tol: float | None = None) -> ContinuityCheck:
    """Compare |f_m(X1) - f_m(X2)| against twice the hull Hausdorff distance.

    Callers must respect the hypotheses d(X1) >= 2 and d(X2) >= 2; the bound
    is what the continuity lemma for convex bodies gives, checked here on
    finite stand-ins.
    """
    tol = DEFAULT_TOL if tol is None else tol
    d1, _ = diameter(X1, metric)
    d2, _ = diameter(X2, metric)
    if d1 < 2 or d2 < 2:
        raise ValueError("continuity check requires both diameters >= 2")
    eps = hausdorff(VPolytope.from_points(X1.points), VPolytope.from_points(X2.points), tol=tol)
    f1 = f_m_finite(X1, m, metric).theta
    f2 = f_m_finite(X2, m, metric).theta
    ok = abs(f1 - f2) <= 2 * eps + tol
    return ContinuityCheck(eps, m, f1, f2, ok)


# ---------------------------------------------------------------------------
# geometric partitions of polytopes: fans and cut trees
# ---------------------------------------------------------------------------

def clip_halfplane(vertices, normal: Pt, offset, keep_below: bool = True):
    """Vertices of conv(vertices) intersected with {<n, x> <= offset} (or >=).

    Works in any dimension: the kept vertices plus every crossing point of a
    kept-discarded segment span exactly the clipped body (crossings on
    non-edges fall inside and are absorbed by the hull).
    """
    sign = 1 if keep_below else -1

    def val(v):
        s = vdot(v, normal) - offset
        return sign * s

    scored = [(v, val(v)) for v in vertices]

    def nonpos(s):
        return s <= 0 if all_exact((s,)) else to_float(s) <= 0

    kept = [(v, s) for v, s in scored if nonpos(s)]
    out = [(v, s) for v, s in scored if not nonpos(s)]
    pieces = [v for v, _ in kept]
    for v, s in kept:
        for w, t in out:
            denom = t - s
            lam = -s / denom if all_exact((s, t)) else -to_float(s) / to_float(denom)
            pieces.append(tuple(a + lam * (b - a) for a, b in zip(v, w)))
    return pieces


def _prune_piece(points, dim: int):
    """Reduce a piece's spanning set to hull vertices (best effort in 3D floats)."""
    if not points:
        return points
    if dim == 2:
        hull = convex_hull_2d(PointSet.of(points))
        return list(hull.vertices)
    if dim == 3 and len(points) > 8:
        try:
            import numpy as np
            from scipy.spatial import ConvexHull

            arr = np.array([[to_float(c) for c in p] for p in points])
            hull = ConvexHull(arr)
            return [points[i] for i in hull.vertices]
        except Exception:
            return points  # degenerate piece: keep the spanning set, diameters unaffected
    return points


@dataclass(frozen=True)
class CutNode:
    """Binary space cut: region splits at <normal, x> = offset."""

    normal: Pt
    offset: object
    below: "CutNode | None" = None
    above: "CutNode | None" = None


def _cut_leaves(vertices, node: CutNode | None, dim: int):
    if node is None:
        return [vertices]
    lo = clip_halfplane(vertices, node.normal, node.offset, keep_below=True)
    hi = clip_halfplane(vertices, node.normal, node.offset, keep_below=False)
    lo = _prune_piece(lo, dim)
    hi = _prune_piece(hi, dim)
    return _cut_leaves(lo, node.below, dim) + _cut_leaves(hi, node.above, dim)


def _pieces_result(P: VPolytope, pieces, m: int, pattern: str) -> PartitionResult:
    diams = []
    for piece in pieces:
        if len(piece) < 2:
            diams.append(0.0)
        else:
            diams.append(diameter(PointSet.of(piece))[0])
    d, _ = diameter(P.point_set())
    theta = max(diams) / d if d > 0 else 0.0
    return PartitionResult(m, theta, d, tuple(diams),
                           pieces=tuple(tuple(p) for p in pieces), pattern=pattern)


def cut_tree_partition(P: VPolytope, root: CutNode) -> PartitionResult:
    """Partition conv(P) by a binary tree of hyperplane cuts; leaves are the pieces.

    Pieces are exact convex spanning sets (original vertices plus segment
    crossings), so piece diameters computed from them are exact upper
    representations of the true piece diameters.
    """
    pieces = [p for p in _cut_leaves(list(P.vertices), root, P.dim)]
    return _pieces_result(P, pieces, len(pieces), "cut-tree")


def fan_partition_2d(P: VPolytope, m: int, angles, apex: Pt | None = None) -> PartitionResult:
    """Partition a polygon into m angular sectors around its centroid.

    ``angles`` are the m cut directions (radians, strictly increasing within
    one turn). Sector i spans angles[i]..angles[i+1]; reflex sectors are
    split internally into two convex halves whose union is the piece.
    """
    if P.dim != 2:
        raise ValueError("fan partitions are for polygons")
    if len(angles) != m:
        raise ValueError("need exactly m cut angles")
    ang = [float(a) for a in angles]
    if any(ang[i + 1] <= ang[i] for i in range(m - 1)) or ang[-1] - ang[0] >= 2 * math.pi:
        raise ValueError("cut angles must be strictly increasing within one turn")
    c = apex if apex is not None else polygon_centroid(P.vertices)
    cf = tuple(to_float(x) for x in c)
    verts = [tuple(to_float(x) for x in v) for v in P.vertices]
    pieces = []
    for i in range(m):
        a0 = ang[i]
        a1 = ang[(i + 1) % m] + (2 * math.pi if i == m - 1 else 0)
        spans = [(a0, a1)] if a1 - a0 <= math.pi else [(a0, (a0 + a1) / 2), ((a0 + a1) / 2, a1)]
        piece: list[Pt] = []
        for s0, s1 in spans:
            # sector between rays s0 and s1 (span <= pi): on/left of ray s0, on/right of ray s1
            nA = (-math.sin(s0), math.cos(s0))
            nB = (-math.sin(s1), math.cos(s1))
            sub = clip_halfplane(verts, nA, nA[0] * cf[0] + nA[1] * cf[1], keep_below=False)
            sub = clip_halfplane(sub, nB, nB[0] * cf[0] + nB[1] * cf[1], keep_below=True)
            piece.extend(sub)
        pieces.append(_prune_piece(piece, 2) if piece else [])
    return _pieces_result(P, pieces, m, f"fan@{tuple(round(a, 6) for a in ang)}")


# ---------------------------------------------------------------------------
# pattern search: verified upper bounds on f_m for polytopes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BoundSearchFailure:
    """Pattern search exhausted its budget; NOT a disproof of the bound."""

    best_theta: float
    evaluations: int
    best: PartitionResult | None = None


def _fan_candidates(m: int, rotations: int):
    base = [2 * math.pi * k / m for k in range(m)]
    for r in range(rotations):
        off = 2 * math.pi * r / (m * rotations)
        yield [a + off for a in base]


def verify_f_bound(P: VPolytope, m: int, alpha: float, budget: int = 400,
                   rotations: int = 24, refine_rounds: int = 3):
    """Search partition patterns for a witness with theta <= alpha.

    2D: rotated fans followed by coordinate descent on the cut angles; for
    m = 3 the hexagon-embedding pattern is tried as a guaranteed fallback.
    Returns the witness PartitionResult on success, else a BoundSearchFailure
    with the best theta found (failure is never a refutation).
    """
    if not alpha < 1:
        raise ValueError("alpha must be < 1")
    evals = 0
    best: PartitionResult | None = None
    best_angles: list[float] | None = None
    if P.dim == 2:
        for angles in _fan_candidates(m, rotations):
            if evals >= budget:
                break
            res = fan_partition_2d(P, m, angles)
            evals += 1
            if best is None or res.theta < best.theta:
                best, best_angles = res, list(angles)
            if res.theta <= alpha:
                return res
        # coordinate descent on the best fan's angles
        if best_angles is not None:
            angles = best_angles
            step = 2 * math.pi / (m * rotations) / 2
            for _ in range(refine_rounds):
                improved = False
                for i in range(m):
                    for delta in (-step, step):
                        if evals >= budget:
                            break
                        trial = sorted(a + (delta if k == i else 0) for k, a in enumerate(angles))
                        if any(trial[k + 1] - trial[k] <= 1e-9 for k in range(m - 1)):
                            continue
                        try:
                            res = fan_partition_2d(P, m, trial)
                        except ValueError:
                            continue
                        evals += 1
                        if res.theta < best.theta:
                            best, angles, improved = res, trial, True
                        if res.theta <= alpha:
                            return res
                step /= 2
                if not improved:
                    break
        if m == 3:
            from .widthlab import three_partition_via_hexagon

            try:
                res = three_partition_via_hexagon(P)
                evals += 1
                if best is None or res.theta < best.theta:
                    best = res
                if res.theta <= alpha:
                    return res
            except Exception:
                pass
    elif P.dim == 3:
        from itertools import combinations

        axes = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1), (1, -1, 0), (1, 0, -1), (0, 1, -1)]
        ctr = tuple(sum(to_float(v[d]) for v in P.vertices) / len(P.vertices) for d in range(3))
        for a1, a2 in combinations(axes, 2):
            if evals >= budget:
                break
            o1 = sum(x * c for x, c in zip(a1, ctr))
            o2 = sum(x * c for x, c in zip(a2, ctr))
            tree = CutNode(a1, o1, below=CutNode(a2, o2), above=CutNode(a2, o2))
            res = cut_tree_partition(P, tree)
            evals += 1
            if best is None or res.theta < best.theta:
                best = res
            if res.theta <= alpha:
                return res
    else:
        raise ValueError("pattern search supports dimensions 2 and 3")
    return BoundSearchFailure(best.theta if best else math.inf, evals, best)
