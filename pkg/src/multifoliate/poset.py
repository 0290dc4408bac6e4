"""Finite partially ordered sets on string identifiers."""

from __future__ import annotations

from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator, Mapping

from .errors import CycleError, PosetTooLarge, UnknownElement

MAX_ELEMENTS = 64
MAX_ANTICHAIN_ELEMENTS = 20


class Poset:
    """Immutable finite poset.

    ``elements`` is sorted; ``leq(x, y)`` answers ``x <= y``. Construct with
    :func:`validate_poset` (or :meth:`from_pairs`), which closes generator
    pairs reflexively and transitively.
    """

    __slots__ = ("elements", "_index", "_up", "__dict__")

    def __init__(self, elements: Iterable[str], up: Mapping[str, frozenset]):
        self.elements = tuple(sorted(elements))
        self._index = {x: i for i, x in enumerate(self.elements)}
        # _up[x] = {y : x <= y}
        self._up = {x: frozenset(up[x]) for x in self.elements}

    @classmethod
    def from_pairs(cls, elements: Iterable[str], pairs: Iterable[tuple[str, str]] = ()) -> "Poset":
        return validate_poset(elements, pairs)

    @classmethod
    def chain(cls, *elements: str) -> "Poset":
        return validate_poset(elements, zip(elements, elements[1:]))

    @classmethod
    def antichain(cls, *elements: str) -> "Poset":
        return validate_poset(elements, ())

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[str]:
        return iter(self.elements)

    def __contains__(self, x) -> bool:
        return x in self._index

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poset):
            return NotImplemented
        return self.elements == other.elements and self._up == other._up

    def __hash__(self) -> int:
        return hash((self.elements, tuple(self._up[x] for x in self.elements)))

    def __repr__(self) -> str:
        return f"Poset({list(self.elements)}, covers={self.covers()})"

    def check(self, x: str) -> str:
        if x not in self._index:
            raise UnknownElement(f"{x!r} is not an element of the poset", witness=x)
        return x

    def leq(self, x: str, y: str) -> bool:
        return y in self._up[x]

    def lt(self, x: str, y: str) -> bool:
        return x != y and y in self._up[x]

    def comparable(self, x: str, y: str) -> bool:
        return y in self._up[x] or x in self._up[y]

    def up_set(self, x: str) -> frozenset:
        return self._up[x]

    @cached_property
    def _down(self) -> dict:
        down = {x: set() for x in self.elements}
        for x in self.elements:
            for y in self._up[x]:
                down[y].add(x)
        return {x: frozenset(s) for x, s in down.items()}

    def down_set(self, x: str) -> frozenset:
        return self._down[x]

    def pairs(self) -> list[tuple[str, str]]:
        """All (x, y) with x <= y, including x == y, sorted."""
        return sorted((x, y) for x in self.elements for y in self._up[x])

    def strict_pairs(self) -> list[tuple[str, str]]:
        return [(x, y) for x, y in self.pairs() if x != y]

    @cached_property
    def _covers(self) -> tuple:
        out = []
        for x in self.elements:
            above = self._up[x] - {x}
            for y in sorted(above):
                if not any(z != y and self.leq(z, y) for z in above):
                    out.append((x, y))
        return tuple(out)

    def covers(self) -> list[tuple[str, str]]:
        """Pairs (x, y) with x < y and nothing strictly between them."""
        return list(self._covers)

    def lower_covers(self, y: str) -> list[str]:
        return [x for x, z in self._covers if z == y]

    def upper_covers(self, x: str) -> list[str]:
        return [z for w, z in self._covers if w == x]

    def minimal(self) -> list[str]:
        return [x for x in self.elements if self._down[x] == {x}]

    def maximal(self) -> list[str]:
        return [x for x in self.elements if self._up[x] == {x}]

    def greatest(self) -> str | None:
        top = self.maximal()
        if len(top) == 1 and len(self._down[top[0]]) == len(self.elements):
            return top[0]
        return None

    @cached_property
    def _floors(self) -> dict:
        floors: dict[str, int] = {}
        for x in self.linear_extension():
            below = self.lower_covers(x)
            floors[x] = 1 + max((floors[z] for z in below), default=0)
        return floors

    def floor(self, x: str) -> int:
        """Length of the longest covering chain ending at ``x`` (minimal elements: 1)."""
        return self._floors[self.check(x)]

    def floors(self) -> dict[str, int]:
        return dict(self._floors)

    def linear_extension(self) -> list[str]:
        """Elements sorted by (number of elements below, identifier)."""
        return sorted(self.elements, key=lambda x: (len(self._down[x]), x))

    def induced(self, subset: Iterable[str]) -> "Poset":
        keep = set(self.check(x) for x in subset)
        return Poset(keep, {x: self._up[x] & keep for x in keep})

    def is_antichain(self, subset: Iterable[str]) -> bool:
        items = list(subset)
        return all(not self.comparable(x, y) for x, y in combinations(items, 2))

    def to_json(self) -> dict:
        return {"elements": list(self.elements), "leq": [list(c) for c in self._covers]}


def validate_poset(elements: Iterable[str], pairs: Iterable[tuple[str, str]] = (), max_size: int = MAX_ELEMENTS) -> Poset:
    """Build a poset from generator pairs by reflexive-transitive closure.

    Raises :class:`CycleError` when the closure identifies distinct elements.
    """
    elems = list(elements)
    if len(set(elems)) != len(elems):
        dup = sorted({x for x in elems if elems.count(x) > 1})
        raise CycleError(f"duplicate elements {dup}", witness=dup)
    for x in elems:
        if not isinstance(x, str):
            raise TypeError(f"poset elements must be strings, got {x!r}")
    if len(elems) > max_size:
        raise PosetTooLarge(f"{len(elems)} elements exceeds the limit of {max_size}", witness=len(elems))
    known = set(elems)
    up = {x: {x} for x in elems}
    for x, y in pairs:
        for z in (x, y):
            if z not in known:
                raise UnknownElement(f"{z!r} in an order pair is not an element", witness=z)
        up[x].add(y)
    # Warshall closure over the "up" sets
    for k in elems:
        upk = up[k]
        for x in elems:
            if k in up[x]:
                up[x] |= upk
    for x in elems:
        for y in up[x]:
            if y != x and x in up[y]:
                raise CycleError(f"{x} <= {y} <= {x} with {x} != {y}", witness=sorted([x, y]))
    return Poset(elems, up)


def covers(p: Poset) -> list[tuple[str, str]]:
    return p.covers()


def floor(p: Poset, x: str) -> int:
    return p.floor(x)


def greatest(p: Poset) -> str | None:
    return p.greatest()


def _colex_key(chain: tuple[str, ...]):
    return tuple(reversed(chain))


def antichains(p: Poset, max_size: int = MAX_ANTICHAIN_ELEMENTS) -> list[tuple[str, ...]]:
    """All nonempty antichains, each sorted, listed in colexicographic order.

    Colex order compares the largest identifiers first, so every antichain
    appears after all antichains built from smaller identifiers.
    """
    if len(p) > max_size:
        raise PosetTooLarge(
            f"antichain enumeration is capped at {max_size} elements, poset has {len(p)}", witness=len(p)
        )
    elems = p.elements
    out: list[tuple[str, ...]] = []

    def extend(start: int, current: list[str]):
        for i in range(start, len(elems)):
            x = elems[i]
            if all(not p.comparable(x, y) for y in current):
                current.append(x)
                out.append(tuple(current))
                extend(i + 1, current)
                current.pop()

    extend(0, [])
    out.sort(key=_colex_key)
    return out


def iter_labeled_isomorphisms(
    p: Poset, q: Poset, label_p: Mapping[str, int] | None = None, label_q: Mapping[str, int] | None = None
) -> Iterator[dict[str, str]]:
    """Yield order isomorphisms p -> q that preserve labels.

    Elements of ``p`` are assigned in sorted order and candidates in ``q`` are
    tried in sorted order, so a name-preserving isomorphism, when there is
    one, is produced first.
    """
    if len(p) != len(q):
        return
    label_p = label_p or {x: 0 for x in p}
    label_q = label_q or {x: 0 for x in q}

    def signature(poset, labels, x):
        return (labels[x], len(poset.up_set(x)), len(poset.down_set(x)))

    sig_q: dict = {}
    for y in q.elements:
        sig_q.setdefault(signature(q, label_q, y), []).append(y)
    sig_p = sorted(signature(p, label_p, x) for x in p.elements)
    if sig_p != sorted(signature(q, label_q, y) for y in q.elements):
        return

    order = list(p.elements)
    candidates = {x: sig_q[signature(p, label_p, x)] for x in order}
    # put same-named candidates first so identity-like maps are found first
    for x in order:
        cands = candidates[x]
        if x in cands:
            candidates[x] = [x] + [y for y in cands if y != x]
    assignment: dict[str, str] = {}
    used: set[str] = set()

    def backtrack(i: int):
        if i == len(order):
            yield dict(assignment)
            return
        x = order[i]
        for y in candidates[x]:
            if y in used:
                continue
            if all(
                p.leq(x, z) == q.leq(y, w) and p.leq(z, x) == q.leq(w, y)
                for z, w in assignment.items()
            ):
                assignment[x] = y
                used.add(y)
                yield from backtrack(i + 1)
                del assignment[x]
                used.discard(y)

    yield from backtrack(0)


def labeled_isomorphisms(p: Poset, q: Poset, label_p=None, label_q=None) -> list[dict[str, str]]:
    return list(iter_labeled_isomorphisms(p, q, label_p, label_q))
