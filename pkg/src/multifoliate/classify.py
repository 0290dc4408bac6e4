"""From a complete projective system back to a multifoliate structure.

The dual spaces L*_x sit inside L* as annihilators of the kernels K_x. They
are walked floor by floor; an index whose dual space is not already spanned
by the vectors chosen on lower floors contributes new basis vectors and is
called distinguished.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import linalg
from .errors import AmbiguousMinimal, BasisIncomplete, NoGreatestElement, NotComplete
from .linalg import Matrix, Subspace
from .projsys import ProjectiveSystem, completion, is_complete
from .structures import MultifoliateStructure, validate_structure


@dataclass
class DualSystem:
    base: ProjectiveSystem
    duals: dict[str, Subspace]


@dataclass
class Classification:
    structure: MultifoliateStructure
    basis: Matrix
    distinguished: list[str]
    floors: dict[str, int]
    contributions: dict[str, list[tuple]]

    def fiber_sizes(self) -> dict[str, int]:
        return {x: len(self.contributions[x]) for x in self.distinguished}

    def to_json(self) -> dict:
        return {
            "structure": self.structure.to_json(),
            "basis": self.basis.to_json(),
            "distinguished": list(self.distinguished),
            "floors": dict(sorted(self.floors.items())),
        }


def dual_system(system: ProjectiveSystem, check_complete: bool = True) -> DualSystem:
    top = system.poset.greatest()
    if top is None:
        raise NoGreatestElement("a finite complete system has a greatest element; this one does not")
    if check_complete and not is_complete(system):
        raise NotComplete("dual system requires a complete projective system")
    duals = {x: linalg.annihilator(system.kernels[x]) for x in system.poset}
    for lo, hi in system.poset.pairs():
        if not duals[lo] <= duals[hi]:
            raise NotComplete(
                f"dual of {lo} is not contained in the dual of {hi}", witness={"lower": lo, "upper": hi}
            )
    return DualSystem(system, duals)


def extract_structure(dual: DualSystem) -> Classification:
    poset = dual.base.poset
    n = dual.base.limit_dim
    floors = poset.floors()
    by_floor: dict[int, list[str]] = {}
    for x in poset:
        by_floor.setdefault(floors[x], []).append(x)

    chosen: list[tuple] = []
    span_so_far = Subspace.zero(n)
    contributions: dict[str, list[tuple]] = {}
    for level in sorted(by_floor):
        new_vectors: list[tuple] = []
        for x in sorted(by_floor[level]):
            extra = linalg.extend_basis(span_so_far, dual.duals[x])
            if extra:
                contributions[x] = extra
                new_vectors.extend(extra)
        chosen.extend(new_vectors)
        if len(chosen) != linalg.rank(Matrix(chosen, cols=n)):
            raise BasisIncomplete(
                f"vectors chosen up to floor {level} are linearly dependent",
                witness={"floor": level, "vectors": len(chosen)},
            )
        span_so_far = Subspace.span(chosen, n)
    if len(chosen) != n:
        raise BasisIncomplete(
            f"chosen vectors span a subspace of dimension {len(chosen)} < {n}", witness={"rank": len(chosen), "n": n}
        )

    distinguished = sorted(contributions, key=lambda x: (floors[x], x))
    labels = []
    for v in chosen:
        holders = [x for x in distinguished if dual.duals[x].contains_vector(v)]
        minimal = [x for x in holders if not any(poset.lt(y, x) for y in holders)]
        if len(minimal) != 1:
            raise AmbiguousMinimal(
                f"basis vector lies in incomparable minimal distinguished spaces {minimal}",
                witness={"vector": [linalg.format_rational(c) for c in v], "minimal": minimal},
            )
        labels.append(minimal[0])
    structure = validate_structure(poset.induced(distinguished), n, labels)
    return Classification(structure, Matrix(chosen, cols=n), distinguished, floors, contributions)


def classify(system: ProjectiveSystem) -> Classification:
    """Complete the system, dualize, and read off the multifoliate structure."""
    completed = completion(system).system
    # a completion is complete by construction
    return extract_structure(dual_system(completed, check_complete=False))
