"""Geometric primitives: point sets, V-polytopes, diameters, widths, Hausdorff distance.

Everything is immutable and pure. Computations run exactly whenever all
scalars are exact (int / Fraction / Quad); otherwise float comparisons use
the tolerance ``DEFAULT_TOL`` unless a per-call ``tol`` is given.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .scalars import DEFAULT_TOL, Quad, all_exact, is_exact, rational_sqrt, to_float

Pt = tuple  # a point is a tuple of scalars


class DimensionMismatch(ValueError):
    """Points of differing dimension fed into one computation."""


class ProjectionError(RuntimeError):
    """Iterative projection failed to certify its gap within the budget."""


# ---------------------------------------------------------------------------
# vector helpers
# ---------------------------------------------------------------------------

def vsub(a: Pt, b: Pt) -> Pt:
    return tuple(x - y for x, y in zip(a, b))


def vadd(a: Pt, b: Pt) -> Pt:
    return tuple(x + y for x, y in zip(a, b))


def vscale(a: Pt, s) -> Pt:
    return tuple(x * s for x in a)


def vdot(a: Pt, b: Pt):
    return sum(x * y for x, y in zip(a, b))


def cross2(a: Pt, b: Pt):
    return a[0] * b[1] - a[1] * b[0]


def orient2(a: Pt, b: Pt, c: Pt):
    """Twice the signed area of triangle abc; >0 means counterclockwise."""
    return cross2(vsub(b, a), vsub(c, a))


def dist_sq(a: Pt, b: Pt):
    return sum((x - y) * (x - y) for x, y in zip(a, b))


def norm_sq(a: Pt):
    return sum(x * x for x in a)


# ---------------------------------------------------------------------------
# metrics
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Metric:
    """Pluggable distance: Euclidean or l_p for p in [1, inf]."""

    kind: str = "euclidean"
    p: float = 2.0

    @staticmethod
    def euclidean() -> "Metric":
        return Metric("euclidean", 2.0)

    @staticmethod
    def lp(p: float) -> "Metric":
        if p != math.inf and p < 1:
            raise ValueError("l_p metric needs p >= 1")
        return Metric("lp", float(p))

    def dist(self, a: Pt, b: Pt):
        if len(a) != len(b):
            raise DimensionMismatch(f"dim {len(a)} vs {len(b)}")
        if self.kind == "euclidean":
            return math.sqrt(to_float(dist_sq(a, b)))
        if self.p == math.inf:
            return max(abs(x - y) for x, y in zip(a, b))
        if self.p == 1:
            return sum(abs(x - y) for x, y in zip(a, b))
        if self.p == 2:
            return math.sqrt(to_float(dist_sq(a, b)))
        return sum(abs(to_float(x - y)) ** self.p for x, y in zip(a, b)) ** (1.0 / self.p)

    def comparable(self, a: Pt, b: Pt):
        """A value monotone in dist(a, b), exact where possible (used for argmax scans)."""
        if self.kind == "euclidean" or self.p == 2:
            return dist_sq(a, b)
        if self.p == math.inf:
            return max(abs(x - y) for x, y in zip(a, b))
        if self.p == 1:
            return sum(abs(x - y) for x, y in zip(a, b))
        return self.dist(a, b)


EUCLIDEAN = Metric.euclidean()


# ---------------------------------------------------------------------------
# point sets and polytopes
# ---------------------------------------------------------------------------

def _check_points(points) -> tuple[tuple[Pt, ...], int]:
    pts = tuple(tuple(p) for p in points)
    if not pts:
        raise ValueError("empty point set")
    dim = len(pts[0])
    if dim < 1:
        raise ValueError("points need dimension >= 1")
    for p in pts:
        if len(p) != dim:
            raise DimensionMismatch(f"point {p} has dim {len(p)}, expected {dim}")
    return pts, dim


@dataclass(frozen=True)
class PointSet:
    points: tuple[Pt, ...]
    dim: int

    @staticmethod
    def of(points) -> "PointSet":
        pts, dim = _check_points(points)
        return PointSet(pts, dim)

    def __len__(self):
        return len(self.points)

    def is_exact(self) -> bool:
        return all(all_exact(p) for p in self.points)

    def to_float(self) -> "PointSet":
        return PointSet(tuple(tuple(to_float(x) for x in p) for p in self.points), self.dim)


@dataclass(frozen=True)
class VPolytope:
    """Convex polytope given by its vertices (hull-normalized, 2D vertices CCW)."""

    vertices: tuple[Pt, ...]
    dim: int
    degenerate: bool = False  # affine dimension < dim

    @staticmethod
    def from_points(points, tol: float | None = None) -> "VPolytope":
        pts, dim = _check_points(points)
        if dim == 2:
            return convex_hull_2d(PointSet(pts, dim), tol=tol)
        return hull_vertex_filter(PointSet(pts, dim), tol=tol)

    def __len__(self):
        return len(self.vertices)

    def point_set(self) -> PointSet:
        return PointSet(self.vertices, self.dim)

    def is_exact(self) -> bool:
        return all(all_exact(p) for p in self.vertices)

    def translate(self, t: Pt) -> "VPolytope":
        return VPolytope(tuple(vadd(v, t) for v in self.vertices), self.dim, self.degenerate)

    def scale(self, s) -> "VPolytope":
        return VPolytope(tuple(vscale(v, s) for v in self.vertices), self.dim, self.degenerate)


@dataclass(frozen=True)
class ShellSpec:
    """Annulus r_inner*B .. r_outer*B around a center (default: the origin)."""

    r_inner: object
    r_outer: object
    center: Pt | None = None

    def __post_init__(self):
        if not (to_float(self.r_inner) > 0 and to_float(self.r_inner) <= to_float(self.r_outer) + 1e-15):
            raise ValueError("shell needs 0 < r_inner <= r_outer")


# ---------------------------------------------------------------------------
# diameter
# ---------------------------------------------------------------------------

def diameter(X: PointSet, metric: Metric = EUCLIDEAN) -> tuple[float, tuple[int, int]]:
    """Max pairwise distance and the (i, j) witness attaining it.

    Singletons have diameter 0 with witness (0, 0). Ties resolve to the
    lexicographically first index pair, so runs are reproducible.
    """
    pts = X.points
    if len(pts) == 1:
        return 0.0, (0, 0)
    best = None
    wit = (0, 1)
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            c = metric.comparable(pts[i], pts[j])
            if best is None or c > best:
                best, wit = c, (i, j)
    return metric.dist(pts[wit[0]], pts[wit[1]]), wit


def diameter_sq(X: PointSet) -> tuple[object, tuple[int, int]]:
    """Euclidean squared diameter; exact when the coordinates are exact."""
    pts = X.points
    if len(pts) == 1:
        return 0 if X.is_exact() else 0.0, (0, 0)
    best, wit = None, (0, 1)
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            c = dist_sq(pts[i], pts[j])
            if best is None or c > best:
                best, wit = c, (i, j)
    return best, wit


# ---------------------------------------------------------------------------
# convex hulls
# ---------------------------------------------------------------------------

def convex_hull_2d(X: PointSet, tol: float | None = None) -> VPolytope:
    """Monotone-chain hull, counterclockwise, collinear points dropped.

    All-collinear input yields the two extreme points with the degenerate
    flag set (a single repeated point yields one vertex).
    """
    if X.dim != 2:
        raise DimensionMismatch("convex_hull_2d needs dim 2")
    exact = X.is_exact()
    eps = 0 if exact else (DEFAULT_TOL if tol is None else tol)
    pts = sorted(set(X.points))
    if len(pts) == 1:
        return VPolytope((pts[0],), 2, degenerate=True)

    def chain(seq):
        out = []
        for p in seq:
            while len(out) > 1 and to_float(orient2(out[-2], out[-1], p)) <= eps:
                out.pop()
            out.append(p)
        return out

    upper = chain(pts)
    lower = chain(reversed(pts))
    if len(upper) == 2 and len(lower) == 2:
        return VPolytope((pts[0], pts[-1]), 2, degenerate=True)
    hull = lower[:-1] + upper[:-1]  # counterclockwise
    return VPolytope(tuple(hull), 2)


def polygon_area(vertices) -> object:
    """Signed shoelace area (positive for counterclockwise rings)."""
    n = len(vertices)
    acc = None
    for i in range(n):
        term = cross2(vertices[i], vertices[(i + 1) % n])
        acc = term if acc is None else acc + term
    if isinstance(acc, (int, Fraction, Quad)):
        return acc / 2 if not isinstance(acc, int) else Fraction(acc, 2)
    return acc / 2.0


def polygon_centroid(vertices) -> Pt:
    """Area centroid of a simple polygon; vertex mean for degenerate rings."""
    n = len(vertices)
    area2 = None
    cx = cy = None
    for i in range(n):
        a, b = vertices[i], vertices[(i + 1) % n]
        w = cross2(a, b)
        area2 = w if area2 is None else area2 + w
        tx, ty = (a[0] + b[0]) * w, (a[1] + b[1]) * w
        cx = tx if cx is None else cx + tx
        cy = ty if cy is None else cy + ty
    if area2 == 0 or to_float(area2) == 0.0:
        k = len(vertices)
        sx = sum(v[0] for v in vertices)
        sy = sum(v[1] for v in vertices)
        if isinstance(sx, (int, Fraction)):
            return (Fraction(sx, k), Fraction(sy, k))
        return (sx / k, sy / k)
    if isinstance(area2, (int, Fraction, Quad)):
        if isinstance(area2, int):
            area2 = Fraction(area2)
        return (cx / (3 * area2), cy / (3 * area2))
    return (cx / (3.0 * area2), cy / (3.0 * area2))


def _exact_in_hull(x: Pt, points: list[Pt]) -> bool:
    """Exact membership x in conv(points) via phase-1 simplex over the rationals."""
    m = len(x) + 1
    n = len(points)
    rows = [[Fraction(p[d]) for p in points] for d in range(len(x))]
    rows.append([Fraction(1)] * n)
    b = [Fraction(v) for v in x] + [Fraction(1)]
    for i in range(m):  # make b nonnegative
        if b[i] < 0:
            b[i] = -b[i]
            rows[i] = [-v for v in rows[i]]
    # tableau: columns = n structural + m artificial, objective = sum of artificials
    tab = [rows[i] + [Fraction(1) if j == i else Fraction(0) for j in range(m)] + [b[i]]
           for i in range(m)]
    basis = list(range(n, n + m))
    obj = [Fraction(0)] * (n + m + 1)
    for i in range(m):  # objective row in terms of nonbasic vars
        for j in range(n + m + 1):
            obj[j] += tab[i][j]
    while True:
        enter = next((j for j in range(n + m) if j not in basis and obj[j] > 0), None)
        if enter is None:
            break
        ratios = [(tab[i][-1] / tab[i][enter], basis[i], i)
                  for i in range(m) if tab[i][enter] > 0]
        if not ratios:
            break  # unbounded cannot happen in phase 1
        _, _, piv = min(ratios)  # Bland-ish: smallest ratio, then smallest basis var
        pr = tab[piv]
        pv = pr[enter]
        tab[piv] = [v / pv for v in pr]
        for i in range(m):
            if i != piv and tab[i][enter] != 0:
                f = tab[i][enter]
                tab[i] = [a - f * c for a, c in zip(tab[i], tab[piv])]
        if obj[enter] != 0:
            f = obj[enter]
            obj = [a - f * c for a, c in zip(obj, tab[piv])]
        basis[piv] = enter
    return obj[-1] == 0  # residual artificial objective


def _float_in_hull(x: Pt, points: list[Pt], tol: float) -> bool:
    """Float membership via scipy linprog feasibility (lazy import, dim >= 3 only)."""
    from scipy.optimize import linprog

    A = np.array([[float(p[d]) for p in points] for d in range(len(x))] + [[1.0] * len(points)])
    b = np.array([float(v) for v in x] + [1.0])
    res = linprog(np.zeros(len(points)), A_eq=A, b_eq=b, bounds=(0, None), method="highs")
    if res.status == 0:
        return True
    if res.status == 2:
        return False
    raise ProjectionError(f"membership LP failed: {res.message}")


def hull_vertex_filter(X: PointSet, tol: float | None = None) -> VPolytope:
    """Keep exactly the hull vertices of X (any dimension).

    Dim 1 and 2 use direct scans; higher dimensions test each point for
    membership in the hull of the others (exact simplex in exact mode,
    LP with tolerance otherwise).
    """
    tol = DEFAULT_TOL if tol is None else tol
    pts = list(dict.fromkeys(X.points))  # dedupe, keep order
    if X.dim == 1:
        lo = min(pts)
        hi = max(pts)
        if lo == hi:
            return VPolytope((lo,), 1, degenerate=True)
        return VPolytope((lo, hi), 1)
    if X.dim == 2:
        return convex_hull_2d(PointSet(tuple(pts), 2), tol=tol)
    exact = all(all_exact(p) for p in pts)
    keep = []
    for i, p in enumerate(pts):
        others = pts[:i] + pts[i + 1:]
        if not others:
            keep.append(p)
            continue
        inside = _exact_in_hull(p, others) if exact else _float_in_hull(p, others, tol)
        if not inside:
            keep.append(p)
    if not keep:  # all points coincide within the hull of each other: single point set
        keep = [pts[0]]
    degen = len(keep) <= X.dim
    return VPolytope(tuple(keep), X.dim, degenerate=degen)


# ---------------------------------------------------------------------------
# support and width
# ---------------------------------------------------------------------------

def _direction_norm(u: Pt):
    """|u| exact (Fraction) when possible, else float."""
    ns = norm_sq(u)
    if is_exact(ns) and not isinstance(ns, Quad):
        r = rational_sqrt(Fraction(ns))
        if r is not None:
            return r
    return math.sqrt(to_float(ns))


def support_value(P: VPolytope, u: Pt):
    """max_v <v, u> / |u|; exact when coordinates and |u| are rational."""
    if all(x == 0 for x in u):
        raise ValueError("zero direction")
    if len(u) != P.dim:
        raise DimensionMismatch("direction dimension mismatch")
    best = max(vdot(v, u) for v in P.vertices)
    nrm = _direction_norm(u)
    if isinstance(nrm, Fraction) and is_exact(best):
        if isinstance(best, int):
            best = Fraction(best)
        return best / nrm
    return to_float(best) / to_float(nrm)


def width(P: VPolytope, u: Pt):
    """Distance between the two supporting hyperplanes orthogonal to u."""
    return support_value(P, u) + support_value(P, tuple(-x for x in u))


# ---------------------------------------------------------------------------
# projection onto a polytope (min-norm point) and Hausdorff distance
# ---------------------------------------------------------------------------

def _affine_min_norm(V: np.ndarray) -> np.ndarray:
    """Coefficients alpha (sum 1) minimizing |alpha @ V| over the affine hull."""
    k = V.shape[0]
    G = V @ V.T
    M = np.zeros((k + 1, k + 1))
    M[:k, :k] = G
    M[:k, k] = 1.0
    M[k, :k] = 1.0
    rhs = np.zeros(k + 1)
    rhs[k] = 1.0
    try:
        sol = np.linalg.solve(M, rhs)
    except np.linalg.LinAlgError:
        sol, *_ = np.linalg.lstsq(M, rhs, rcond=None)
    return sol[:k]


def point_to_polytope_distance(x: Pt, P: VPolytope, tol: float | None = None,
                               budget: int = 1000) -> float:
    """Euclidean distance from x to conv(P) by Wolfe's min-norm-point iteration.

    The duality gap |y|^2 - min_v <y, v> certifies the result; if it cannot
    be driven below tolerance within the budget a ProjectionError is raised
    rather than returning a silently wrong value.
    """
    tol = DEFAULT_TOL if tol is None else tol
    if len(x) != P.dim:
        raise DimensionMismatch("point dimension mismatch")
    V = np.array([[to_float(c) for c in v] for v in P.vertices], dtype=float)
    V = V - np.array([to_float(c) for c in x], dtype=float)
    sq = np.einsum("ij,ij->i", V, V)
    i0 = int(np.argmin(sq))
    S = [i0]
    lam = np.array([1.0])
    y = V[i0].copy()
    for _ in range(budget):
        yy = float(y @ y)
        if yy <= tol * tol:
            return 0.0
        dots = V @ y
        gap = yy - float(dots.min())
        if gap <= tol * max(math.sqrt(yy), tol):
            return math.sqrt(yy)
        j = int(np.argmin(dots))
        if j not in S:
            S.append(j)
            lam = np.append(lam, 0.0)
        # minor cycle: pull lam toward the affine minimizer, dropping zeros
        for _ in range(len(P.vertices) + 2):
            alpha = _affine_min_norm(V[S])
            if np.all(alpha >= -1e-14):
                lam = np.clip(alpha, 0.0, None)
                break
            neg = alpha < lam
            steps = lam[neg] / (lam[neg] - alpha[neg])
            theta = float(np.min(steps[steps >= 0])) if np.any(steps >= 0) else 0.0
            lam = (1 - theta) * lam + theta * alpha
            keepers = lam > 1e-14
            if keepers.all():
                lam = np.where(lam < 0, 0.0, lam)
                break
            S = [s for s, k in zip(S, keepers) if k]
            lam = lam[keepers]
        ssum = lam.sum()
        if ssum <= 0:
            raise ProjectionError("projection collapsed to empty support")
        lam = lam / ssum
        y = lam @ V[S]
    raise ProjectionError(f"projection gap not certified within {budget} iterations")


def directed_hausdorff(P: VPolytope, Q: VPolytope, tol: float | None = None) -> float:
    """sup_{x in P} dist(x, Q); attained at a vertex of P since dist(., Q) is convex."""
    return max(point_to_polytope_distance(v, Q, tol=tol) for v in P.vertices)


def hausdorff(P: VPolytope, Q: VPolytope, tol: float | None = None) -> float:
    """Hausdorff distance between conv(P) and conv(Q)."""
    if P.dim != Q.dim:
        raise DimensionMismatch("polytopes of different dimension")
    return max(directed_hausdorff(P, Q, tol), directed_hausdorff(Q, P, tol))


# ---------------------------------------------------------------------------
# shell membership
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ShellCheckResult:
    ok: bool
    outer_ok: bool
    inner_ok: bool
    method: str            # "facet" or "sampled"
    sample_count: int = 0
    sample_seed: int | None = None

    def __bool__(self):
        return self.ok


def _inner_check_2d(P: VPolytope, r_inner, tol: float) -> bool:
    if P.degenerate or len(P.vertices) < 3:
        return False
    exact = P.is_exact() and is_exact(r_inner)
    verts = P.vertices
    rr = r_inner * r_inner if exact else to_float(r_inner) ** 2
    for i in range(len(verts)):
        a, b = verts[i], verts[(i + 1) % len(verts)]
        c = cross2(a, b)  # 2 * area(o, a, b); positive iff origin left of a->b
        e = dist_sq(a, b)
        if exact:
            if c <= 0 or c * c < rr * e:
                return False
        else:
            cf, ef = to_float(c), to_float(e)
            if cf <= 0 or cf / math.sqrt(ef) < to_float(r_inner) - tol:
                return False
    return True


def _inner_check_3d(P: VPolytope, r_inner: float, tol: float) -> bool:
    from scipy.spatial import ConvexHull, QhullError

    pts = np.array([[to_float(c) for c in v] for v in P.vertices], dtype=float)
    try:
        hull = ConvexHull(pts)
    except QhullError:
        return False  # degenerate polytope cannot contain a ball
    # rows are (normal, offset) with normal . x + offset <= 0 inside, |normal| = 1
    offs = hull.equations[:, -1]
    return bool(np.all(-offs >= r_inner - tol))


def _inner_check_sampled(P: VPolytope, r_inner: float, tol: float,
                         samples: int, seed: int) -> bool:
    rng = random.Random(seed)
    dim = P.dim
    verts = [[to_float(c) for c in v] for v in P.vertices]
    for _ in range(samples):
        u = [rng.gauss(0.0, 1.0) for _ in range(dim)]
        n = math.sqrt(sum(x * x for x in u))
        if n == 0:
            continue
        u = [x / n for x in u]
        h = max(sum(c * x for c, x in zip(v, u)) for v in verts)
        if h < r_inner - tol:
            return False
    return True


def shell_check(P: VPolytope, shell: ShellSpec, tol: float | None = None,
                samples: int = 4096, seed: int = 0) -> ShellCheckResult:
    """Test r_inner*B subseteq conv(P) subseteq r_outer*B.

    The outer inclusion scans vertex norms. The inner inclusion enumerates
    facet-supporting halfplanes in 2D/3D; in dimension >= 4 it degrades to a
    directional sampling certificate whose parameters are recorded.
    """
    tol = DEFAULT_TOL if tol is None else tol
    verts = P.vertices
    if shell.center is not None and any(c != 0 for c in shell.center):
        P = P.translate(tuple(-c for c in shell.center))
        verts = P.vertices
    exact = P.is_exact() and is_exact(shell.r_outer)
    if exact:
        ro2 = shell.r_outer * shell.r_outer
        outer_ok = all(norm_sq(v) <= ro2 for v in verts)
    else:
        ro = to_float(shell.r_outer)
        outer_ok = all(math.sqrt(to_float(norm_sq(v))) <= ro + tol for v in verts)
    if P.dim == 2:
        inner_ok = _inner_check_2d(P, shell.r_inner, tol)
        method = "facet"
        sc, sd = 0, None
    elif P.dim == 3:
        inner_ok = _inner_check_3d(P, to_float(shell.r_inner), tol)
        method = "facet"
        sc, sd = 0, None
    elif P.dim == 1:
        lo = min(v[0] for v in verts)
        hi = max(v[0] for v in verts)
        inner_ok = to_float(lo) <= -to_float(shell.r_inner) + tol and to_float(hi) >= to_float(shell.r_inner) - tol
        method = "facet"
        sc, sd = 0, None
    else:
        inner_ok = _inner_check_sampled(P, to_float(shell.r_inner), tol, samples, seed)
        method = "sampled"
        sc, sd = samples, seed
    return ShellCheckResult(outer_ok and inner_ok, outer_ok, inner_ok, method, sc, sd)
