"""Interning of hashable keys, orbit classes, and descriptor multisets.

All refinement variants need a map from "things seen so far" to small
integer colours such that two things get the same colour exactly when
they are equivalent. For plain hashable keys that is a dict. For geometric
objects, equivalence is orbit equality under O(d)/SO(d), which is not
hashable, so the registry keeps one representative per orbit (bucketed by
the geometry-free skeleton plus, in exact mode, a norm multiset) and
searches linearly within a bucket. A fresh registry is deterministic:
colours are handed out in first-encounter order.
"""
from __future__ import annotations

from typing import Dict, Hashable, List, Tuple

from .numeric import NumericContext
from .objects import norm_profile, orbit_equal, skeleton


class OrbitRegistry:
    def __init__(self, ctx: NumericContext, dim: int, proper: bool):
        self.ctx = ctx
        self.dim = dim
        self.proper = proper
        self._next = 0
        self._keys: Dict[Hashable, int] = {}
        self._rep_by_colour: Dict[int, object] = {}
        # skeleton -> list of (norm_profile | None, representative, colour)
        self._orbits: Dict[tuple, List[Tuple[tuple, object, int]]] = {}
        # exact mode: hashable multiset key -> colour; float: linear list
        self._bags_exact: Dict[tuple, int] = {}
        self._bags_float: List[Tuple[tuple, int]] = []

    def _fresh(self) -> int:
        c = self._next
        self._next += 1
        return c

    @property
    def count(self) -> int:
        return self._next

    def intern_key(self, key: Hashable) -> int:
        """Colour for a plain hashable key (scalar tuples, colour tuples)."""
        c = self._keys.get(key)
        if c is None:
            c = self._keys[key] = self._fresh()
        return c

    def intern_orbit(self, obj) -> int:
        """Colour for a geometric object, injective on O/SO orbits."""
        bucket = self._orbits.setdefault(skeleton(obj), [])
        profile = norm_profile(obj, self.ctx) if self.ctx.mode == "exact" else None
        for prof, rep, colour in bucket:
            if profile is not None and prof != profile:
                continue
            if orbit_equal(rep, obj, self.ctx, self.dim, self.proper):
                return colour
        colour = self._fresh()
        bucket.append((profile, obj, colour))
        self._rep_by_colour[colour] = obj
        return colour

    def representative(self, colour: int):
        """The stored representative of an orbit colour (first object seen)."""
        return self._rep_by_colour[colour]

    def intern_bag(self, bag: Tuple[tuple, ...]) -> int:
        """Colour for a sorted tuple of descriptors.

        Exact-mode descriptors are fully hashable; float descriptors carry
        floats that must compare through the tolerance, so matching falls
        back to a linear scan.
        """
        if self.ctx.mode == "exact":
            c = self._bags_exact.get(bag)
            if c is None:
                c = self._bags_exact[bag] = self._fresh()
            return c
        for other, colour in self._bags_float:
            if self._bag_eq(bag, other):
                return colour
        colour = self._fresh()
        self._bags_float.append((bag, colour))
        return colour

    def _bag_eq(self, a, b) -> bool:
        if type(a) is not type(b):
            return False
        if isinstance(a, (int, str, bool)) or a is None:
            return a == b
        if isinstance(a, float):
            return self.ctx.eq(a, b)
        if isinstance(a, tuple):
            return len(a) == len(b) and all(self._bag_eq(x, y) for x, y in zip(a, b))
        return a == b
