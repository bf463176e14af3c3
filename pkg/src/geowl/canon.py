"""Orbit-injective colouring: orbit equality, registry interning, and the
k-body descriptor colouring.

`i_hash` assigns equal colours to two geometric objects exactly when they
lie in one O(d)/SO(d) orbit (within one registry). `i_hash_k` is the
lossy k-body variant: instead of the whole unordered neighbourhood it
colours by the multiset of per-tuple invariants over ordered (k-1)-tuples
of neighbours drawn with repetition, so order k only sees configurations
of at most k nodes at a time (k=2 distances, k=3 additionally angles, ...).
"""
from __future__ import annotations

from typing import List, Optional, Sequence, Tuple

from . import linalg
from .graph import GroupSpec
from .numeric import NumericContext, Vec
from .objects import Child, GeomObject, Leaf, Node, norm_profile, skeleton
from .objects import orbit_equal as _orbit_equal
from .registry import OrbitRegistry

__all__ = [
    "Leaf",
    "Child",
    "Node",
    "GeomObject",
    "OrbitRegistry",
    "skeleton",
    "norm_profile",
    "orbit_equal",
    "i_hash",
    "i_hash_k",
]


def orbit_equal(o1, o2, grp: GroupSpec, ctx: NumericContext) -> bool:
    """True iff some element of grp maps o2's vectors onto o1's under a
    structure- and colour-preserving matching of unordered children."""
    return _orbit_equal(o1, o2, ctx, grp.dim, grp.proper)


def i_hash(o, reg: OrbitRegistry) -> int:
    """Colour of o's orbit: reuses the first registered representative's
    colour, otherwise registers o fresh."""
    return reg.intern_orbit(o)


def _tuple_descriptor(
    centre_vecs: Tuple[Vec, ...],
    picks: Sequence[Tuple[int, Tuple[Vec, ...], Vec]],
    reg: OrbitRegistry,
) -> tuple:
    colours = tuple(p[0] for p in picks)
    stack: List[Vec] = list(centre_vecs)
    shape = [len(centre_vecs)]
    for _, vecs, rel in picks:
        stack.extend(vecs)
        stack.append(rel)
        shape.append(len(vecs) + 1)
    gram = tuple(
        tuple(linalg.dot(stack[a], stack[b]) for b in range(a, len(stack)))
        for a in range(len(stack))
    )
    sign = 0
    if reg.proper:
        idx = linalg.independent_subset(stack, reg.ctx, reg.dim)
        if len(idx) == reg.dim:
            sign = linalg.det_sign([stack[i] for i in idx], reg.ctx)
    return (colours, tuple(shape), gram, sign)


def i_hash_k(
    centre: Tuple[int, Tuple[Vec, ...]],
    nbrs: Sequence[Tuple[int, Tuple[Vec, ...], Vec]],
    k: int,
    reg: OrbitRegistry,
) -> int:
    """Colour from the multiset of (k-1)-tuple invariants around a centre.

    centre is (colour, vectors); each neighbour is (colour, vectors,
    relative position). Tuples are ordered and drawn with repetition, so
    the Gram matrix of the stacked vectors [centre's, then per neighbour
    its vectors and the relative position] needs no within-tuple
    canonicalisation. Under a rotation-only group the stack's orientation
    sign joins the descriptor when the stack spans the space.
    """
    if k < 2:
        raise ValueError("body order k must be at least 2")
    c_centre, centre_vecs = centre
    if not nbrs:
        return reg.intern_key(("kbody-isolated", k, c_centre))

    def tuples(depth: int):
        if depth == 0:
            yield ()
            return
        for rest in tuples(depth - 1):
            for nb in nbrs:
                yield rest + (nb,)

    descriptors = sorted(
        _tuple_descriptor(centre_vecs, picks, reg) for picks in tuples(k - 1)
    )
    return reg.intern_bag(("kbody", k, c_centre, tuple(descriptors)))
