"""Uniform set families: the 0/1 embedding, l(A, n, k), and family-size bounds.

Members are bitmasks over the ground set {1..n}; overlaps are popcounts of
intersections. The embedding sends a member to its characteristic vector,
under which overlap j corresponds to squared distance 2(h - j) exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator

from .geometry import PointSet
from .partition import ChromaticResult, SearchBudgetExceeded, b_finite, chromatic_number

#: Ground sets are capped at this width; raise if you need bigger ones.
MAX_GROUND_N = 128


class HypothesisViolation(ValueError):
    """A family fails the pairwise-overlap hypothesis an operation assumes."""


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _mask_of(elements: Iterable[int], n: int) -> int:
    m = 0
    for e in elements:
        if not 1 <= e <= n:
            raise ValueError(f"element {e} outside ground set 1..{n}")
        if m >> (e - 1) & 1:
            raise ValueError(f"repeated element {e}")
        m |= 1 << (e - 1)
    return m


def _elements_of(mask: int) -> tuple[int, ...]:
    out = []
    e = 1
    while mask:
        if mask & 1:
            out.append(e)
        mask >>= 1
        e += 1
    return tuple(out)


@dataclass(frozen=True)
class SetFamily:
    """Family of distinct h-subsets of {1..ground_n}, stored as sorted bitmasks."""

    ground_n: int
    h: int
    members: tuple[int, ...]

    @staticmethod
    def of(ground_n: int, h: int, member_sets: Iterable[Iterable[int]]) -> "SetFamily":
        if not 1 <= ground_n <= MAX_GROUND_N:
            raise ValueError(f"ground set size must be in 1..{MAX_GROUND_N}")
        masks = []
        for s in member_sets:
            m = _mask_of(s, ground_n)
            if _popcount(m) != h:
                raise ValueError(f"member {_elements_of(m)} has size {_popcount(m)}, expected {h}")
            masks.append(m)
        if len(set(masks)) != len(masks):
            raise ValueError("members must be distinct")
        return SetFamily(ground_n, h, tuple(sorted(masks)))

    def __len__(self):
        return len(self.members)

    def member_elements(self) -> list[tuple[int, ...]]:
        return [_elements_of(m) for m in self.members]

    def min_pairwise_overlap(self) -> int | None:
        ms = self.members
        if len(ms) < 2:
            return None
        return min(_popcount(ms[i] & ms[j])
                   for i in range(len(ms)) for j in range(i + 1, len(ms)))


def overlap(A, B) -> int:
    """|A intersect B| for members given as bitmasks or element iterables."""
    if isinstance(A, int) and isinstance(B, int):
        return _popcount(A & B)
    return len(set(A) & set(B))


def embed(fam: SetFamily) -> PointSet:
    """Characteristic 0/1 vectors in dimension ground_n (exact integer coordinates)."""
    pts = []
    for m in fam.members:
        pts.append(tuple((m >> i) & 1 for i in range(fam.ground_n)))
    return PointSet.of(pts)


# ---------------------------------------------------------------------------
# l(A, n, k) and the equivalence with b
# ---------------------------------------------------------------------------

def overlap_graph_edges(fam: SetFamily, k: int) -> list[tuple[int, int]]:
    """Edges join member indices whose overlap is exactly k."""
    ms = fam.members
    return [(i, j) for i in range(len(ms)) for j in range(i + 1, len(ms))
            if _popcount(ms[i] & ms[j]) == k]


def ell(fam: SetFamily, k: int, budget: int = 2_000_000) -> ChromaticResult:
    """Least number of subfamilies with pairwise overlaps >= k+1 inside each.

    Precondition (validated): every pair of members overlaps in >= k elements.
    Equal to the chromatic number of the overlap-exactly-k graph.
    """
    if len(fam) >= 2:
        mo = fam.min_pairwise_overlap()
        if mo < k:
            raise HypothesisViolation(f"some pair overlaps in {mo} < k = {k} elements")
    res = chromatic_number(len(fam), overlap_graph_edges(fam, k), budget=budget)
    if res.exact and res.coloring is not None:
        # classes separate exactly-k pairs, so within a class overlaps are >= k+1
        ms = fam.members
        for i in range(len(ms)):
            for j in range(i + 1, len(ms)):
                if res.coloring[i] == res.coloring[j]:
                    assert _popcount(ms[i] & ms[j]) >= k + 1
    return res


@dataclass(frozen=True)
class EquivalenceReport:
    b_value: int
    ell_value: int
    equal: bool
    premise_met: bool  # some pair overlaps in exactly k (the equality case)
    k: int


def verify_larman_borsuk_equivalence(fam: SetFamily, k: int,
                                     budget: int = 2_000_000) -> EquivalenceReport:
    """Compute b of the embedded points and l(A, n, k) independently and compare.

    When no pair overlaps in exactly k the embedded diameter falls short of
    sqrt(2(h-k)) and the identity's premise shifts; the report flags that
    case instead of asserting equality.
    """
    if len(fam) == 1:
        return EquivalenceReport(1, 1, True, False, k)
    mo = fam.min_pairwise_overlap()
    if mo < k:
        raise HypothesisViolation(f"some pair overlaps in {mo} < k = {k} elements")
    premise = mo == k
    bv = b_finite(embed(fam), budget=budget).value
    lv = ell(fam, k, budget=budget).value
    return EquivalenceReport(bv, lv, bv == lv, premise, k)


# ---------------------------------------------------------------------------
# Frankl-Wilson style checkers
# ---------------------------------------------------------------------------

def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class ForbiddenOverlapReport:
    p: int
    cardinality: int
    bound: int
    hypothesis_ok: bool
    violations: tuple[tuple[int, int], ...] = ()


def fw_lemma2_check(fam: SetFamily, p: int) -> ForbiddenOverlapReport:
    """For (2p-1)-uniform families avoiding overlap exactly p-1: |F| <= C(n, p-1).

    If some pair violates the overlap rule the report flags it and the bound
    is not asserted.
    """
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    if fam.h != 2 * p - 1:
        raise ValueError(f"family must be (2p-1) = {2 * p - 1}-uniform, got h = {fam.h}")
    ms = fam.members
    bad = tuple((i, j) for i in range(len(ms)) for j in range(i + 1, len(ms))
                if _popcount(ms[i] & ms[j]) == p - 1)
    bound = math.comb(fam.ground_n, p - 1)
    ok = not bad
    if ok:
        assert len(fam) <= bound
    return ForbiddenOverlapReport(p, len(fam), bound, ok, bad)


def _max_clique(n: int, adj: list[int], budget: int = 20_000_000):
    """Max clique by branch and bound with greedy-coloring bounds (bitset graph).

    Returns (size, vertex list, exact). On budget exhaustion 'exact' is False
    and the size is a valid lower bound.
    """
    best: list[int] = []
    nodes = 0

    def expand(R: list[int], P: int):
        nonlocal best, nodes
        order: list[int] = []
        bound: list[int] = []
        un = P
        c = 0
        while un:
            c += 1
            avail = un
            while avail:
                v = (avail & -avail).bit_length() - 1
                avail &= ~adj[v] & ~(1 << v)
                un &= ~(1 << v)
                order.append(v)
                bound.append(c)
        for i in range(len(order) - 1, -1, -1):
            if len(R) + bound[i] <= len(best):
                return
            nodes += 1
            if nodes > budget:
                raise SearchBudgetExceeded(f"clique budget {budget} exhausted")
            v = order[i]
            R.append(v)
            P2 = P & adj[v]
            if P2:
                expand(R, P2)
            elif len(R) > len(best):
                best = R.copy()
            R.pop()
            P &= ~(1 << v)

    try:
        expand([], (1 << n) - 1)
        return len(best), best, True
    except SearchBudgetExceeded:
        return len(best), best, False


@dataclass(frozen=True)
class ExtremalSearchResult:
    p: int
    m_found: int
    bound: int
    exact: bool               # False: m_found is only a lower bound (budget) or bound-only mode
    witness: tuple[tuple[int, ...], ...] = ()


def fw_lemma3_search(p: int, budget: int = 20_000_000) -> ExtremalSearchResult:
    """Largest family of 2p-subsets of {1..4p} with no two overlapping in exactly p.

    Exact search for p in {1, 2} (C(4p, 2p) candidate members); larger p get
    the bound C(4p, p)/2 only. The found maximum is asserted against the bound.
    """
    if not _is_prime(p) and p != 1:
        raise ValueError(f"{p} is not prime")
    bound = math.comb(4 * p, p) // 2
    if p > 2:
        return ExtremalSearchResult(p, 0, bound, False)
    from itertools import combinations

    universe = list(combinations(range(1, 4 * p + 1), 2 * p))
    masks = [_mask_of(s, 4 * p) for s in universe]
    n = len(masks)
    adj = [0] * n  # compatibility: overlap != p
    for i in range(n):
        for j in range(i + 1, n):
            if _popcount(masks[i] & masks[j]) != p:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    size, verts, exact = _max_clique(n, adj, budget=budget)
    witness = tuple(universe[v] for v in sorted(verts))
    if exact:
        assert size <= bound
    return ExtremalSearchResult(p, size, bound, exact, witness)


# ---------------------------------------------------------------------------
# dimension-dependent bounds on b and the crossover
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BoundsRecord:
    n: int
    danzer: float
    lassak: int
    schramm: float
    kahn_kalai: float
    trivial: int


def bounds_table(n: int) -> BoundsRecord:
    """Evaluate the classical upper bounds and the 1.07^sqrt(n) lower bound.

    The log in the constant-width bound is the natural logarithm (the usual
    reading; the alternatives differ only by a constant factor).
    """
    if n < 1:
        raise ValueError("n >= 1")
    danzer = math.sqrt((n + 2) ** 3 * (2 + math.sqrt(2)) ** (n - 1) / 3)
    lassak = 2 ** (n - 1) + 1
    schramm = 5 * n ** 1.5 * (4 + math.log(n)) * (1.5) ** (n / 2)
    kahn_kalai = 1.07 ** math.sqrt(n)
    return BoundsRecord(n, danzer, lassak, schramm, kahn_kalai, n + 1)


def kk_crossover(limit: int = 50_000) -> int:
    """Smallest n with 1.07^sqrt(n) > n + 1, by monotone upward scan."""
    for n in range(1, limit + 1):
        if 1.07 ** math.sqrt(n) > n + 1:
            return n
    raise RuntimeError(f"no crossover found below {limit}")


# ---------------------------------------------------------------------------
# family generation
# ---------------------------------------------------------------------------

def _maximal_cliques(n: int, adj: list[int]) -> Iterator[int]:
    """Bron-Kerbosch with pivoting; yields cliques as bitmasks."""

    def bk(R: int, P: int, X: int):
        if P == 0 and X == 0:
            yield R
            return
        pux = P | X
        # pivot: vertex covering the most candidates
        u_best, u_cov = -1, -1
        t = pux
        while t:
            u = (t & -t).bit_length() - 1
            t &= t - 1
            cov = _popcount(P & adj[u])
            if cov > u_cov:
                u_best, u_cov = u, cov
        cand = P & ~adj[u_best]
        while cand:
            v = (cand & -cand).bit_length() - 1
            cand &= cand - 1
            vb = 1 << v
            yield from bk(R | vb, P & adj[v], X & adj[v])
            P &= ~vb
            X |= vb

    yield from bk(0, (1 << n) - 1, 0)


def generate_admissible_families(n: int, h: int, k: int, mode: str = "exhaustive",
                                 seed: int = 0, count: int = 10) -> Iterator[SetFamily]:
    """Stream families of h-subsets of {1..n} with all pairwise overlaps >= k.

    'exhaustive' yields every maximal admissible family (deterministic order);
    'random' yields `count` seeded random maximal families. Infeasible
    parameters produce an empty stream.
    """
    if h > n or k > h or h < 1 or n < 1 or k < 0:
        return
    from itertools import combinations

    universe = list(combinations(range(1, n + 1), h))
    masks = [_mask_of(s, n) for s in universe]
    nn = len(masks)
    adj = [0] * nn
    for i in range(nn):
        for j in range(i + 1, nn):
            if _popcount(masks[i] & masks[j]) >= k:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    if mode == "exhaustive":
        cliques = sorted(_maximal_cliques(nn, adj))
        for cl in cliques:
            sets = [universe[i] for i in range(nn) if cl >> i & 1]
            yield SetFamily.of(n, h, sets)
    elif mode == "random":
        import random as _random

        rng = _random.Random(seed)
        for _ in range(count):
            order = list(range(nn))
            rng.shuffle(order)
            chosen: list[int] = []
            cmask = (1 << nn) - 1  # candidates still compatible with all chosen
            for v in order:
                if cmask >> v & 1:
                    chosen.append(v)
                    cmask &= adj[v]
            yield SetFamily.of(n, h, [universe[i] for i in sorted(chosen)])
    else:
        raise ValueError(f"unknown mode {mode!r}")
