"""Filling in a poset-indexed diagram from its maps on covering pairs."""

from __future__ import annotations

from typing import Callable, Mapping, TypeVar

from .errors import CoherenceError, MissingMap, UnknownElement
from .poset import Poset

M = TypeVar("M")


def synthesize(
    poset: Poset,
    given: Mapping[tuple[str, str], M],
    identity: Callable[[str], M],
    compose: Callable[[M, M], M],
) -> dict[tuple[str, str], M]:
    """Return a map for every pair ``lo <= hi``.

    ``given`` is keyed by ``(lo, hi)`` and must contain every covering pair;
    ``compose(m_lo_mid, m_mid_hi)`` builds the map for ``(lo, hi)``. Every
    covering path must give the same composite, and any supplied non-cover
    map must agree with it.
    """
    for lo, hi in given:
        for x in (lo, hi):
            if x not in poset:
                raise UnknownElement(f"map endpoint {x!r} is not a poset element", witness=x)
        if not poset.leq(lo, hi):
            raise CoherenceError(f"map supplied for incomparable pair {lo}, {hi}", witness={"lower": lo, "upper": hi})
    cover_set = set(poset.covers())
    for lo, hi in sorted(cover_set):
        if (lo, hi) not in given:
            raise MissingMap(f"no map supplied for covering pair {lo} < {hi}", witness={"lower": lo, "upper": hi})

    maps: dict[tuple[str, str], M] = {}
    for hi in poset.linear_extension():
        if (hi, hi) in given and given[(hi, hi)] != identity(hi):
            raise CoherenceError(f"map on ({hi}, {hi}) is not the identity", witness={"lower": hi, "upper": hi})
        maps[(hi, hi)] = identity(hi)
        for lo in sorted(poset.down_set(hi) - {hi}):
            if (lo, hi) in cover_set:
                maps[(lo, hi)] = given[(lo, hi)]
                continue
            value = None
            first_via = None
            for mid in poset.lower_covers(hi):
                if not poset.leq(lo, mid):
                    continue
                candidate = compose(maps[(lo, mid)], given[(mid, hi)])
                if value is None:
                    value, first_via = candidate, mid
                elif candidate != value:
                    raise CoherenceError(
                        f"composites from {hi} down to {lo} disagree via {first_via} and {mid}",
                        witness={"lower": lo, "upper": hi, "via": [first_via, mid]},
                    )
            if (lo, hi) in given and given[(lo, hi)] != value:
                raise CoherenceError(
                    f"supplied map for ({lo}, {hi}) disagrees with the composite along covers",
                    witness={"lower": lo, "upper": hi, "via": [first_via]},
                )
            maps[(lo, hi)] = value
    return maps
