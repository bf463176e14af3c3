"""Small-vector linear algebra over exact rationals or floats.

Everything here works on plain tuples of numbers so the same code path
serves both numeric modes. The :class:`GramMatcher` is the workhorse of
every congruence check in the library: two vector sequences are related
by an orthogonal map iff their Gram matrices agree, and a proper
(rotation-only) map additionally needs matching orientation signs when
the sequences span the full space.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

from .numeric import EXACT, Number, NumericContext, Vec


def vadd(a: Vec, b: Vec) -> Vec:
    return tuple(x + y for x, y in zip(a, b))


def vsub(a: Vec, b: Vec) -> Vec:
    return tuple(x - y for x, y in zip(a, b))


def vneg(a: Vec) -> Vec:
    return tuple(-x for x in a)


def vscale(a: Vec, s: Number) -> Vec:
    return tuple(s * x for x in a)


def dot(a: Vec, b: Vec) -> Number:
    return sum(x * y for x, y in zip(a, b))


def norm_sq(a: Vec) -> Number:
    return dot(a, a)


# The matcher's inner loop recomputes dot products over a small recurring
# set of relative vectors; interning the vectors gives integer cache keys,
# which is what makes the cache cheap enough to pay off in exact mode.
_vec_ids: dict = {}
_dots: dict = {}


def _vec_id(a: Vec) -> int:
    vid = _vec_ids.get(a)
    if vid is None:
        vid = len(_vec_ids)
        _vec_ids[a] = vid
    return vid


def _dot_cached(ia: int, ib: int, a: Vec, b: Vec) -> Number:
    key = (ia, ib) if ia <= ib else (ib, ia)
    val = _dots.get(key)
    if val is None:
        val = sum(x * y for x, y in zip(a, b))
        _dots[key] = val
    return val


def cross(a: Vec, b: Vec) -> Vec:
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def matvec(m: Sequence[Vec], v: Vec) -> Vec:
    """m given as rows; returns m @ v."""
    return tuple(dot(row, v) for row in m)


def mat_mul(a: Sequence[Vec], b: Sequence[Vec]) -> Tuple[Vec, ...]:
    bt = list(zip(*b))
    return tuple(tuple(dot(row, col) for col in bt) for row in a)


def transpose(m: Sequence[Vec]) -> Tuple[Vec, ...]:
    return tuple(zip(*m))


def identity(d: int, one=1, zero=0) -> Tuple[Vec, ...]:
    return tuple(tuple(one if i == j else zero for j in range(d)) for i in range(d))


def det(m: Sequence[Vec]) -> Number:
    """Determinant by cofactor/elimination; fine for d <= 3 and small stacks."""
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    if n == 3:
        a, b, c = m
        return (
            a[0] * (b[1] * c[2] - b[2] * c[1])
            - a[1] * (b[0] * c[2] - b[2] * c[0])
            + a[2] * (b[0] * c[1] - b[1] * c[0])
        )
    raise ValueError("determinant only needed up to 3x3")


def det_sign(m: Sequence[Vec], ctx: NumericContext) -> int:
    d = det(m)
    scale = 1
    for row in m:
        scale = max(scale, abs(norm_sq(row)))
    if ctx.is_zero(d, scale):
        return 0
    return 1 if d > 0 else -1


def independent_subset(vectors: Sequence[Vec], ctx: NumericContext, limit: int) -> List[int]:
    """Indices of a greedy maximal linearly independent prefix-subset.

    Deterministic: scans in order, keeps a vector iff it is not (numerically)
    in the span of the kept ones, stops at `limit`.
    """
    kept: List[int] = []
    basis: List[List[Number]] = []  # Gram-Schmidt-style reduced rows (unnormalised)
    for idx, v in enumerate(vectors):
        r = list(v)
        for b in basis:
            bb = sum(x * x for x in b)
            if bb == 0:
                continue
            coef = sum(x * y for x, y in zip(r, b)) / bb
            r = [x - coef * y for x, y in zip(r, b)]
        residual = sum(x * x for x in r)
        scale = max(1, abs(norm_sq(v)))
        if not ctx.is_zero(residual, scale):
            kept.append(idx)
            basis.append(r)
            if len(kept) == limit:
                break
    return kept


def solve_square(m: Sequence[Vec], rhs_rows: Sequence[Vec]) -> Optional[Tuple[Vec, ...]]:
    """Solve M @ X = B for X, with B given by rows; None if singular.

    Exact when inputs are Fractions. Rows of the returned matrix are rows of X.
    """
    n = len(m)
    a = [list(row) + list(brow) for row, brow in zip(m, rhs_rows)]
    for col in range(n):
        pivot = None
        best = None
        for r in range(col, n):
            mag = abs(a[r][col])
            if mag != 0 and (best is None or mag > best):
                pivot, best = r, mag
        if pivot is None:
            return None
        a[col], a[pivot] = a[pivot], a[col]
        pv = a[col][col]
        a[col] = [x / pv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return tuple(tuple(row[n:]) for row in a)


class GramMatcher:
    """Incrementally pair up two vector sequences under an orthogonal map.

    push(a, b) succeeds iff appending the pair keeps the two Gram matrices
    equal (per the context's comparison policy); a failed push leaves the
    matcher untouched. orientation_ok() applies the rotation-only extra
    condition: with a full-rank trace, the determinant signs of a greedily
    chosen maximal independent subset must agree at corresponding indices.
    Rank below the ambient dimension collapses the proper check to the
    orthogonal one (a reflection fixing the span completes any rotation).
    """

    def __init__(self, ctx: NumericContext, dim: int, proper: bool):
        self.ctx = ctx
        self.dim = dim
        self.proper = proper
        self.v1: List[Vec] = []
        self.v2: List[Vec] = []
        self.i1: List[int] = []
        self.i2: List[int] = []

    def push(self, a: Vec, b: Vec) -> bool:
        ctx = self.ctx
        d = _dot_cached
        ia, ib = _vec_id(a), _vec_id(b)
        if not ctx.eq(d(ia, ia, a, a), d(ib, ib, b, b)):
            return False
        for u, iu, w, iw in zip(self.v1, self.i1, self.v2, self.i2):
            if not ctx.eq(d(ia, iu, a, u), d(ib, iw, b, w)):
                return False
        self.v1.append(a)
        self.i1.append(ia)
        self.v2.append(b)
        self.i2.append(ib)
        return True

    def mark(self) -> int:
        return len(self.v1)

    def rewind(self, mark: int) -> None:
        del self.v1[mark:]
        del self.v2[mark:]
        del self.i1[mark:]
        del self.i2[mark:]

    def rank_indices(self) -> List[int]:
        return independent_subset(self.v1, self.ctx, self.dim)

    def orientation_ok(self) -> bool:
        if not self.proper:
            return True
        idx = self.rank_indices()
        if len(idx) < self.dim:
            return True
        s1 = det_sign([self.v1[i] for i in idx], self.ctx)
        s2 = det_sign([self.v2[i] for i in idx], self.ctx)
        return s1 == s2

    def solve_map(self) -> Optional[Tuple[Vec, ...]]:
        """The orthogonal matrix Q with Q @ v2[i] = v1[i], when full rank.

        Returns Q as rows, or None when the trace does not span the space
        (an orthogonal completion would generally be irrational).
        """
        idx = self.rank_indices()
        if len(idx) < self.dim:
            return None
        src = [self.v2[i] for i in idx]  # columns of the source basis
        dst = [self.v1[i] for i in idx]
        # Q @ S = D with S, D holding basis vectors as columns:
        # solve S^T @ Q^T = D^T row-wise.
        qt = solve_square([tuple(col) for col in src], dst)
        if qt is None:
            return None
        return transpose(qt)
