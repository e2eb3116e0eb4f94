"""Immutable sets of node ids.

A :class:`NodeSet` stores its members as a sorted, duplicate-free ``uint32``
array, i.e. the array-container form of a compressed bitmap.  Intersections
merge or gallop depending on the size ratio, so the cost follows the smaller
operand; iteration is always in ascending id order.
"""
from __future__ import annotations

from typing import Iterable

import numpy as np

from . import kernels

_U32 = np.uint32


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


class NodeSet:
    __slots__ = ("_ids",)

    def __init__(self, ids: Iterable[int] | np.ndarray = ()):
        arr = np.asarray(ids if not isinstance(ids, (set, frozenset)) else sorted(ids))
        if arr.size and arr.min() < 0:
            raise ValueError("node ids must be non-negative")
        arr = np.unique(arr.astype(_U32, copy=False)) if arr.size else np.empty(0, _U32)
        self._ids = _frozen(arr)

    @classmethod
    def _wrap(cls, sorted_ids: np.ndarray) -> "NodeSet":
        """Adopt an array that is already sorted, unique and uint32."""
        ns = cls.__new__(cls)
        ns._ids = _frozen(np.ascontiguousarray(sorted_ids, dtype=_U32))
        return ns

    @classmethod
    def empty(cls) -> "NodeSet":
        return cls._wrap(np.empty(0, _U32))

    @classmethod
    def range(cls, n: int) -> "NodeSet":
        return cls._wrap(np.arange(n, dtype=_U32))

    @property
    def array(self) -> np.ndarray:
        """Read-only sorted ``uint32`` view of the members."""
        return self._ids

    def __len__(self):
        return len(self._ids)

    def __bool__(self):
        return len(self._ids) > 0

    def __iter__(self):
        return iter(self._ids.tolist())

    def __contains__(self, v) -> bool:
        if not isinstance(v, (int, np.integer)) or v < 0:
            return False
        i = np.searchsorted(self._ids, v)
        return bool(i < len(self._ids) and self._ids[i] == v)

    def __eq__(self, other):
        if isinstance(other, NodeSet):
            return np.array_equal(self._ids, other._ids)
        if isinstance(other, (set, frozenset)):
            return set(self) == other
        return NotImplemented

    def __hash__(self):
        return hash(self._ids.tobytes())

    def __repr__(self):
        shown = self._ids[:8].tolist()
        more = ", ..." if len(self._ids) > 8 else ""
        return f"NodeSet({shown}{more})" if more else f"NodeSet({shown})"

    def __and__(self, other: "NodeSet") -> "NodeSet":
        return NodeSet._wrap(kernels.backend.intersect(self._ids, other._ids))

    def __or__(self, other: "NodeSet") -> "NodeSet":
        return NodeSet._wrap(kernels.backend.union(self._ids, other._ids))

    def __sub__(self, other: "NodeSet") -> "NodeSet":
        return NodeSet._wrap(kernels.backend.difference(self._ids, other._ids))

    intersection = __and__
    union = __or__
    difference = __sub__

    def issubset(self, other: "NodeSet") -> bool:
        return len(self & other) == len(self)

    __le__ = issubset

    def upto(self, bound: int) -> "NodeSet":
        """Members ``<= bound``."""
        return NodeSet._wrap(self._ids[: np.searchsorted(self._ids, bound, side="right")])

    def tolist(self) -> list[int]:
        return self._ids.tolist()


def multiway_intersect(*sets: NodeSet) -> NodeSet:
    """Intersection of all ``sets``, folded smallest-first."""
    if not sets:
        raise ValueError("multiway_intersect needs at least one set")
    return NodeSet._wrap(kernels.backend.intersect_many([s.array for s in sets]))


def multiway_union(sets: Iterable[NodeSet]) -> NodeSet:
    arrays = [s.array for s in sets]
    if not arrays:
        return NodeSet.empty()
    return NodeSet._wrap(np.unique(np.concatenate(arrays)).astype(_U32))
