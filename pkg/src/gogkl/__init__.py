"""gogkl: graphs of groups, their K- and L-theory, and conjecture certificates.

A symbolic toolkit that represents graphs of groups, performs constructive
graph transformations with decidable condition checks, computes Whitehead
groups, reduced projective class groups and surgery L-groups of fundamental
groups by Mayer-Vietoris assembly gated on Nil/UNil vanishing, and emits
replayable rule-based certificates for the fibered isomorphism conjecture
(wreath-stable form).
"""

from .abelian import (
    AbelianError,
    AbelianGroup,
    AbelianSubgroup,
    IntMatrix,
    canonicalize,
    characteristic_finite_index_inside,
    has_two_torsion,
    index_of,
    quotient_by,
    smith_normal_form,
    subgroup_meet,
)

__version__ = "0.1.0"

__all__ = [
    "AbelianError",
    "AbelianGroup",
    "AbelianSubgroup",
    "IntMatrix",
    "canonicalize",
    "characteristic_finite_index_inside",
    "has_two_torsion",
    "index_of",
    "quotient_by",
    "smith_normal_form",
    "subgroup_meet",
]
