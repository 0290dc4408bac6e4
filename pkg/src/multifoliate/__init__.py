"""Exact computations with finite projective systems and multifoliate structures."""

from .classify import Classification, DualSystem, classify, dual_system, extract_structure
from .errors import MultifoliateError
from .linalg import Matrix, Subspace
from .poset import Poset, antichains, covers, floor, greatest, labeled_isomorphisms, validate_poset
from .projsys import (
    Completion,
    ProjectiveSystem,
    completion,
    is_complete,
    is_invariant,
    kernel_family,
    limit,
    product_system,
    stabilizer_algebra,
    system_isomorphic,
    validate_system,
)
from .structures import (
    Equivalence,
    GLPattern,
    MultifoliateStructure,
    equivalent,
    gl_pattern,
    jacobian_check,
    pattern_member,
    product_structure,
    system_of,
    validate_structure,
)

__version__ = "0.1.0"
