"""Catalog of group descriptors, semantic flags, and homomorphisms.

A :class:`GroupDescriptor` is a structural model of a group where one is
computable (cyclic, finite-by-table, finitely generated abelian, free) plus
table-only kinds (surface and pure braid groups) and fully opaque groups
that carry nothing but user-asserted flags.

Flags are three-valued: True, False, or None for "not established".  The
rule engine downstream must be able to distinguish a refuted property from
an unknown one, so nothing here ever guesses.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

from .abelian import (
    AbelianGroup,
    IntMatrix,
    hermite_row_basis,
    kernel_basis,
    solve_row_membership,
)


class GroupError(ValueError):
    """Raised for malformed descriptors, words, or homomorphisms."""


class _Unsupported:
    """Singleton returned where an operation has no algorithm for the kind."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "Unsupported"

    def __bool__(self) -> bool:
        return False


UNSUPPORTED = _Unsupported()

YES, NO, UNKNOWN = "yes", "no", "unknown"


# ---------------------------------------------------------------------------
# Flags
# ---------------------------------------------------------------------------

FLAG_NAMES = (
    "torsion_free",
    "residually_finite",
    "regular_coherent",
    "in_class_cl",
    "virtually_cyclic",
    "virtually_polycyclic",
    "fg_nilpotent",
    "ficwf_p_known",
    "ficwf_l_known",
    "finite",
    "one_ended",
)

# (antecedent, consequent): antecedent True forces consequent True.
_IMPLICATIONS = (
    ("finite", "residually_finite"),
    ("in_class_cl", "torsion_free"),
    ("virtually_cyclic", "virtually_polycyclic"),
    ("regular_coherent", "torsion_free"),
)


@dataclass(frozen=True)
class FlagSet:
    """Three-valued property flags; None means not established."""

    torsion_free: bool | None = None
    residually_finite: bool | None = None
    regular_coherent: bool | None = None
    in_class_cl: bool | None = None
    virtually_cyclic: bool | None = None
    virtually_polycyclic: bool | None = None
    fg_nilpotent: bool | None = None
    ficwf_p_known: bool | None = None
    ficwf_l_known: bool | None = None
    finite: bool | None = None
    one_ended: bool | None = None

    def __post_init__(self) -> None:
        closed = _implication_closure(self.as_dict())
        for k, v in closed.items():
            object.__setattr__(self, k, v)

    def as_dict(self) -> dict[str, bool | None]:
        return {k: getattr(self, k) for k in FLAG_NAMES}

    def get(self, name: str) -> bool | None:
        if name not in FLAG_NAMES:
            raise GroupError(f"unknown flag {name!r}")
        return getattr(self, name)

    def merge(self, other: "FlagSet") -> "FlagSet":
        """Combine knowledge; a known flag never downgrades to unknown."""
        data: dict[str, bool | None] = {}
        for k in FLAG_NAMES:
            a, b = getattr(self, k), getattr(other, k)
            if a is None:
                data[k] = b
            elif b is None or a == b:
                data[k] = a
            else:
                raise GroupError(f"contradictory flag {k}: {a} vs {b}")
        return FlagSet(**data)

    def known_true(self, name: str) -> bool:
        return self.get(name) is True

    def known_false(self, name: str) -> bool:
        return self.get(name) is False


def _implication_closure(data: dict[str, bool | None]) -> dict[str, bool | None]:
    data = dict(data)
    changed = True
    while changed:
        changed = False
        for ante, cons in _IMPLICATIONS:
            if data[ante] is True:
                if data[cons] is False:
                    raise GroupError(
                        f"inconsistent flags: {ante}=True forces {cons}=True")
                if data[cons] is None:
                    data[cons] = True
                    changed = True
            if data[cons] is False and data[ante] is True:
                raise GroupError(
                    f"inconsistent flags: {cons}=False refutes {ante}")
            if data[cons] is False and data[ante] is None:
                data[ante] = False
                changed = True
    return data


# ---------------------------------------------------------------------------
# Descriptors
# ---------------------------------------------------------------------------

class GroupDescriptor:
    """Base class for the descriptor variants below."""

    def to_text(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class Trivial(GroupDescriptor):
    def to_text(self) -> str:
        return "trivial"


@dataclass(frozen=True)
class FiniteCyclic(GroupDescriptor):
    order: int

    def __post_init__(self) -> None:
        if self.order < 2:
            raise GroupError("cyclic(n) needs n >= 2; use trivial for n = 1")

    def to_text(self) -> str:
        return f"cyclic({self.order})"


@dataclass(frozen=True)
class FiniteByTable(GroupDescriptor):
    """A finite group given by its full multiplication table.

    ``table[i][j]`` is the index of element i * element j.  Associativity is
    checked exhaustively up to order 32 and by seeded sampling above that.
    """

    table: tuple[tuple[int, ...], ...]
    identity: int

    def __post_init__(self) -> None:
        n = len(self.table)
        if n == 0:
            raise GroupError("empty multiplication table")
        tbl = tuple(tuple(int(x) for x in row) for row in self.table)
        object.__setattr__(self, "table", tbl)
        for row in tbl:
            if len(row) != n or sorted(row) != list(range(n)):
                raise GroupError("table rows must be permutations of 0..n-1")
        for j in range(n):
            if sorted(tbl[i][j] for i in range(n)) != list(range(n)):
                raise GroupError("table columns must be permutations of 0..n-1")
        e = self.identity
        if not (0 <= e < n):
            raise GroupError("identity index out of range")
        if any(tbl[e][j] != j for j in range(n)) or any(tbl[i][e] != i for i in range(n)):
            raise GroupError("identity element does not act as identity")
        for i in range(n):
            if e not in tbl[i]:
                raise GroupError(f"element {i} has no inverse")
        if n <= 32:
            triples = ((a, b, c) for a in range(n) for b in range(n) for c in range(n))
        else:
            rng = random.Random(0xA55)
            triples = ((rng.randrange(n), rng.randrange(n), rng.randrange(n))
                       for _ in range(4096))
        for a, b, c in triples:
            if tbl[tbl[a][b]][c] != tbl[a][tbl[b][c]]:
                raise GroupError(f"associativity fails at ({a},{b},{c})")

    @property
    def order(self) -> int:
        return len(self.table)

    def to_text(self) -> str:
        rows = ";".join(",".join(str(x) for x in row) for row in self.table)
        return f"table(identity={self.identity},rows=[{rows}])"


@dataclass(frozen=True)
class FgAbelian(GroupDescriptor):
    group: AbelianGroup

    def to_text(self) -> str:
        torsion = ",".join(str(d) for d in self.group.invariant_factors)
        if torsion:
            return f"abelian(rank={self.group.free_rank},torsion=[{torsion}])"
        return f"abelian(rank={self.group.free_rank})"


@dataclass(frozen=True)
class Free(GroupDescriptor):
    rank: int

    def __post_init__(self) -> None:
        if self.rank < 0:
            raise GroupError("free rank must be >= 0")

    def to_text(self) -> str:
        return f"free({self.rank})"


@dataclass(frozen=True)
class Surface(GroupDescriptor):
    """Closed surface group.

    ``orientable=True``: genus g >= 1 orientable surface.
    ``orientable=False``: connected sum of a Klein bottle with the orientable
    surface of genus g (g >= 0; g = 0 is the Klein bottle itself).
    The sphere (orientable, genus 0) is rejected in favour of Trivial.
    """

    genus: int
    orientable: bool = True

    def __post_init__(self) -> None:
        if self.orientable and self.genus < 1:
            raise GroupError("orientable genus 0 is the trivial group; use trivial")
        if not self.orientable and self.genus < 0:
            raise GroupError("negative genus")

    def to_text(self) -> str:
        o = "orientable" if self.orientable else "nonorientable"
        return f"surface(genus={self.genus},{o})"


@dataclass(frozen=True)
class VirtuallyCyclic(GroupDescriptor):
    """Infinite virtually cyclic group as finite-by-(infinite cyclic) data.

    The group is F x| Z where F is the finite normal part and ``action`` is
    the automorphism of F induced by the stable generator, given as a
    permutation of the element indices of F.
    """

    finite_part: GroupDescriptor
    action: tuple[int, ...]

    def __post_init__(self) -> None:
        n = order_of(self.finite_part)
        if n is None:
            raise GroupError("finite part of a virtually cyclic descriptor must be finite")
        act = tuple(int(a) for a in self.action)
        object.__setattr__(self, "action", act)
        if sorted(act) != list(range(n)):
            raise GroupError("action must be a permutation of the finite part")
        for a in range(n):
            for b in range(n):
                if act[finite_mul(self.finite_part, a, b)] != \
                        finite_mul(self.finite_part, act[a], act[b]):
                    raise GroupError("action is not an automorphism")

    def to_text(self) -> str:
        act = ",".join(str(a) for a in self.action)
        return f"vc(finite={self.finite_part.to_text()},action=[{act}])"


@dataclass(frozen=True)
class PureBraid(GroupDescriptor):
    strands: int

    def __post_init__(self) -> None:
        if self.strands < 1:
            raise GroupError("braid strand count must be >= 1")

    def to_text(self) -> str:
        return f"braid({self.strands})"


@dataclass(frozen=True)
class Opaque(GroupDescriptor):
    """A group outside the computable catalog; only its flags are known.

    ``backref`` optionally records provenance (for instance the component
    graph whose fundamental group this descriptor stands for) so downstream
    computations can recurse into it.  It does not participate in equality.
    """

    name: str
    flags: FlagSet = field(default_factory=FlagSet)
    backref: object = field(default=None, compare=False)

    def to_text(self) -> str:
        parts = []
        for k in FLAG_NAMES:
            v = self.flags.get(k)
            if v is not None:
                parts.append(f"{_FLAG_SHORT[k]}={'true' if v else 'false'}")
        inner = f'"{self.name}"'
        if parts:
            inner += "," + ",".join(parts)
        return f"opaque({inner})"


_FLAG_SHORT = {
    "torsion_free": "tf",
    "residually_finite": "rf",
    "regular_coherent": "rc",
    "in_class_cl": "cl",
    "virtually_cyclic": "vc",
    "virtually_polycyclic": "vpc",
    "fg_nilpotent": "nilp",
    "ficwf_p_known": "ficp",
    "ficwf_l_known": "ficl",
    "finite": "fin",
    "one_ended": "oneend",
}
FLAG_FROM_SHORT = {v: k for k, v in _FLAG_SHORT.items()}


# ---------------------------------------------------------------------------
# Structural helpers
# ---------------------------------------------------------------------------

def order_of(g: GroupDescriptor) -> int | None:
    """Group order; None when infinite or not determinable."""
    if isinstance(g, Trivial):
        return 1
    if isinstance(g, FiniteCyclic):
        return g.order
    if isinstance(g, FiniteByTable):
        return g.order
    if isinstance(g, FgAbelian):
        return g.group.order()
    if isinstance(g, Free):
        return 1 if g.rank == 0 else None
    if isinstance(g, PureBraid):
        return 1 if g.strands == 1 else None
    if isinstance(g, Opaque):
        return None  # opaque finite groups still have unknown order
    return None


def is_finite_group(g: GroupDescriptor) -> bool | None:
    """Three-valued finiteness."""
    o = order_of(g)
    if o is not None:
        return True
    if isinstance(g, (Surface, VirtuallyCyclic)):
        return False
    if isinstance(g, FgAbelian):
        return g.group.is_finite()
    if isinstance(g, Free):
        return g.rank == 0
    if isinstance(g, PureBraid):
        return g.strands == 1
    if isinstance(g, Opaque):
        return g.flags.get("finite")
    return False


def is_trivial_group(g: GroupDescriptor) -> bool:
    return order_of(g) == 1


def abelian_model(g: GroupDescriptor) -> AbelianGroup | None:
    """The descriptor's group as an AbelianGroup, when it literally is one."""
    if isinstance(g, Trivial):
        return AbelianGroup.trivial()
    if isinstance(g, FiniteCyclic):
        return AbelianGroup.cyclic(g.order)
    if isinstance(g, FgAbelian):
        return g.group
    if isinstance(g, Free) and g.rank <= 1:
        return AbelianGroup(g.rank)
    return None


def is_abelian_kind(g: GroupDescriptor) -> bool | None:
    """Three-valued: is the group abelian?"""
    if abelian_model(g) is not None:
        return True
    if isinstance(g, FiniteByTable):
        n = g.order
        return all(g.table[i][j] == g.table[j][i]
                   for i in range(n) for j in range(i + 1, n))
    if isinstance(g, Free):
        return g.rank <= 1
    if isinstance(g, Surface):
        return g.orientable and g.genus == 1
    if isinstance(g, PureBraid):
        return g.strands <= 2
    if isinstance(g, VirtuallyCyclic):
        ident = tuple(range(len(g.action)))
        if g.action != ident:
            return None  # could still be abelian only if the action is inner-trivial
        return is_abelian_kind(g.finite_part)
    return None


def finite_elements(g: GroupDescriptor) -> list[int]:
    o = order_of(g)
    if o is None:
        raise GroupError("not a finite catalog group")
    return list(range(o))


def finite_mul(g: GroupDescriptor, a: int, b: int) -> int:
    if isinstance(g, Trivial):
        if a or b:
            raise GroupError("trivial group has a single element 0")
        return 0
    if isinstance(g, FiniteCyclic):
        return (a + b) % g.order
    if isinstance(g, FiniteByTable):
        return g.table[a][b]
    raise GroupError(f"no multiplication table for {type(g).__name__}")


def finite_inverse(g: GroupDescriptor, a: int) -> int:
    if isinstance(g, Trivial):
        return 0
    if isinstance(g, FiniteCyclic):
        return (-a) % g.order
    if isinstance(g, FiniteByTable):
        for b in range(g.order):
            if g.table[a][b] == g.identity:
                return b
        raise GroupError("inverse missing")  # construction makes this unreachable
    raise GroupError(f"no inverse table for {type(g).__name__}")


def finite_identity(g: GroupDescriptor) -> int:
    if isinstance(g, (Trivial, FiniteCyclic)):
        return 0
    if isinstance(g, FiniteByTable):
        return g.identity
    raise GroupError(f"no identity index for {type(g).__name__}")


def has_order_two_element(g: GroupDescriptor) -> bool | None:
    """Three-valued: does the group contain an element of order 2?"""
    if isinstance(g, Trivial):
        return False
    if isinstance(g, FiniteCyclic):
        return g.order % 2 == 0
    if isinstance(g, FiniteByTable):
        return any(a != g.identity and finite_mul(g, a, a) == g.identity
                   for a in range(g.order))
    if isinstance(g, FgAbelian):
        return g.group.has_two_torsion()
    if isinstance(g, (Free, Surface, PureBraid)):
        return False  # torsion free kinds
    if isinstance(g, VirtuallyCyclic):
        fp = has_order_two_element(g.finite_part)
        if fp:
            return True
        # F x| Z: torsion embeds in F up to conjugacy only when the action
        # fixes it; an order-2 element outside F cannot exist since every
        # element maps to Z with torsion-free image unless it lies in F.
        return fp
    if isinstance(g, Opaque):
        tf = g.flags.get("torsion_free")
        if tf is True:
            return False
        return None
    return None


def generator_count(g: GroupDescriptor) -> int:
    """Number of generators in the canonical generating set used by words."""
    if isinstance(g, Trivial):
        return 0
    if isinstance(g, FiniteCyclic):
        return 1
    if isinstance(g, FiniteByTable):
        return g.order
    if isinstance(g, FgAbelian):
        return g.group.ngens
    if isinstance(g, Free):
        return g.rank
    if isinstance(g, Surface):
        return 2 * g.genus if g.orientable else 2 * g.genus + 2
    if isinstance(g, VirtuallyCyclic):
        return order_of(g.finite_part) + 1
    raise GroupError(f"no canonical generating set for {type(g).__name__}")


# ---------------------------------------------------------------------------
# Flags derivation
# ---------------------------------------------------------------------------

def derive_flags(g: GroupDescriptor) -> FlagSet:
    """Fill in every flag derivable from the structural kind.

    Opaque descriptors return their stored flags unchanged.  Everything
    else is decided from the model: membership in the contractible
    Whitehead-space class for free / torsion-free abelian / surface / pure
    braid kinds, virtual (poly)cyclicity, residual finiteness, and so on.
    """
    if isinstance(g, Opaque):
        return g.flags

    if isinstance(g, Trivial) or is_trivial_group(g):
        return FlagSet(torsion_free=True, residually_finite=True,
                       regular_coherent=True, in_class_cl=True,
                       virtually_cyclic=True, virtually_polycyclic=True,
                       fg_nilpotent=True, ficwf_p_known=True,
                       ficwf_l_known=True, finite=True, one_ended=False)

    if isinstance(g, (FiniteCyclic, FiniteByTable)):
        nilp: bool | None = True if isinstance(g, FiniteCyclic) else None
        if isinstance(g, FiniteByTable) and is_abelian_kind(g):
            nilp = True
        return FlagSet(torsion_free=False, residually_finite=True,
                       regular_coherent=False, in_class_cl=False,
                       virtually_cyclic=True, virtually_polycyclic=True,
                       fg_nilpotent=nilp, ficwf_p_known=True,
                       ficwf_l_known=True, finite=True, one_ended=False)

    if isinstance(g, FgAbelian):
        grp = g.group
        tf = not grp.invariant_factors
        vc = grp.free_rank <= 1
        return FlagSet(torsion_free=tf, residually_finite=True,
                       regular_coherent=tf, in_class_cl=tf,
                       virtually_cyclic=vc, virtually_polycyclic=True,
                       fg_nilpotent=True, ficwf_p_known=True,
                       ficwf_l_known=True, finite=grp.is_finite(),
                       one_ended=grp.free_rank >= 2)

    if isinstance(g, Free):
        small = g.rank <= 1
        return FlagSet(torsion_free=True, residually_finite=True,
                       regular_coherent=True, in_class_cl=True,
                       virtually_cyclic=small, virtually_polycyclic=small,
                       fg_nilpotent=small, ficwf_p_known=True,
                       ficwf_l_known=True, finite=g.rank == 0, one_ended=False)

    if isinstance(g, Surface):
        torus = g.orientable and g.genus == 1
        klein = not g.orientable and g.genus == 0
        poly = torus or klein
        return FlagSet(torsion_free=True, residually_finite=True,
                       regular_coherent=True, in_class_cl=True,
                       virtually_cyclic=False, virtually_polycyclic=poly,
                       fg_nilpotent=True if torus else (None if klein else False),
                       ficwf_p_known=True, ficwf_l_known=True,
                       finite=False, one_ended=True)

    if isinstance(g, VirtuallyCyclic):
        trivial_part = is_trivial_group(g.finite_part)
        ab = is_abelian_kind(g)
        return FlagSet(torsion_free=trivial_part,
                       residually_finite=True,
                       regular_coherent=True if trivial_part else False,
                       in_class_cl=True if trivial_part else False,
                       virtually_cyclic=True, virtually_polycyclic=True,
                       fg_nilpotent=True if (ab is True) else None,
                       ficwf_p_known=True, ficwf_l_known=True,
                       finite=False, one_ended=False)

    if isinstance(g, PureBraid):
        m = g.strands
        return FlagSet(torsion_free=True, residually_finite=True,
                       regular_coherent=True, in_class_cl=True,
                       virtually_cyclic=m <= 2, virtually_polycyclic=m <= 2,
                       fg_nilpotent=m <= 2, ficwf_p_known=True,
                       ficwf_l_known=True, finite=m == 1, one_ended=m >= 3)

    raise GroupError(f"unknown descriptor kind {type(g).__name__}")


# ---------------------------------------------------------------------------
# Words
# ---------------------------------------------------------------------------

Word = tuple[int, ...]


def _check_word(g: GroupDescriptor, w: Sequence[int]) -> Word:
    n = generator_count(g)
    out = []
    for letter in w:
        letter = int(letter)
        if letter == 0 or abs(letter) > n:
            raise GroupError(f"word letter {letter} out of range for {g.to_text()}")
        out.append(letter)
    return tuple(out)


def free_reduce(w: Sequence[int]) -> Word:
    out: list[int] = []
    for letter in w:
        if out and out[-1] == -letter:
            out.pop()
        else:
            out.append(letter)
    return tuple(out)


def word_eval(g: GroupDescriptor, w: Sequence[int]):
    """Canonical form of a word in the descriptor's generators.

    Returns UNSUPPORTED for kinds without an implemented word problem
    (surface, pure braid, virtually cyclic, opaque).
    """
    if isinstance(g, (Surface, PureBraid, VirtuallyCyclic, Opaque)):
        return UNSUPPORTED
    w = _check_word(g, w)
    if isinstance(g, Trivial):
        return ()
    if isinstance(g, FiniteCyclic):
        return sum(1 if x > 0 else -1 for x in w) % g.order
    if isinstance(g, FiniteByTable):
        acc = g.identity
        for letter in w:
            el = letter - 1 if letter > 0 else finite_inverse(g, -letter - 1)
            acc = finite_mul(g, acc, el)
        return acc
    if isinstance(g, FgAbelian):
        coords = [0] * g.group.ngens
        for letter in w:
            idx = abs(letter) - 1
            coords[idx] += 1 if letter > 0 else -1
        return g.group.reduce_element(coords)
    if isinstance(g, Free):
        return free_reduce(w)
    raise GroupError(f"unhandled kind {type(g).__name__}")


def identity_element(g: GroupDescriptor):
    if isinstance(g, Trivial):
        return ()
    if isinstance(g, FiniteCyclic):
        return 0
    if isinstance(g, FiniteByTable):
        return g.identity
    if isinstance(g, FgAbelian):
        return g.group.zero()
    if isinstance(g, Free):
        return ()
    return UNSUPPORTED


def element_mul(g: GroupDescriptor, a, b):
    if isinstance(g, Trivial):
        return ()
    if isinstance(g, FiniteCyclic):
        return (a + b) % g.order
    if isinstance(g, FiniteByTable):
        return finite_mul(g, a, b)
    if isinstance(g, FgAbelian):
        return g.group.add(a, b)
    if isinstance(g, Free):
        return free_reduce(tuple(a) + tuple(b))
    return UNSUPPORTED


def element_inv(g: GroupDescriptor, a):
    if isinstance(g, Trivial):
        return ()
    if isinstance(g, FiniteCyclic):
        return (-a) % g.order
    if isinstance(g, FiniteByTable):
        return finite_inverse(g, a)
    if isinstance(g, FgAbelian):
        return g.group.neg(a)
    if isinstance(g, Free):
        return tuple(-x for x in reversed(a))
    return UNSUPPORTED


def is_identity_element(g: GroupDescriptor, a) -> bool:
    ident = identity_element(g)
    if ident is UNSUPPORTED:
        raise GroupError(f"no identity test for {type(g).__name__}")
    return a == ident


def to_abelian_coords(g: GroupDescriptor, a) -> tuple[int, ...]:
    """Canonical element -> coordinates in abelian_model(g)."""
    model = abelian_model(g)
    if model is None:
        raise GroupError(f"{type(g).__name__} has no abelian model")
    if isinstance(g, Trivial):
        return ()
    if isinstance(g, FiniteCyclic):
        return model.reduce_element((a,))
    if isinstance(g, FgAbelian):
        return model.reduce_element(a)
    if isinstance(g, Free):
        return (sum(1 if x > 0 else -1 for x in a),) if g.rank == 1 else ()
    raise GroupError(f"{type(g).__name__} has no abelian coordinates")


def from_abelian_coords(g: GroupDescriptor, coords: Sequence[int]):
    """Coordinates in abelian_model(g) -> canonical element."""
    model = abelian_model(g)
    if model is None:
        raise GroupError(f"{type(g).__name__} has no abelian model")
    coords = model.reduce_element(coords)
    if isinstance(g, Trivial):
        return ()
    if isinstance(g, FiniteCyclic):
        return coords[0]
    if isinstance(g, FgAbelian):
        return coords
    if isinstance(g, Free):
        if g.rank == 0:
            return ()
        c = coords[0]
        return (1,) * c if c >= 0 else (-1,) * (-c)
    raise GroupError(f"{type(g).__name__} has no abelian coordinates")


def element_as_word(g: GroupDescriptor, a) -> Word:
    """A word spelling the canonical element (for presentation plumbing)."""
    if isinstance(g, Trivial):
        return ()
    if isinstance(g, FiniteCyclic):
        return (1,) * (a % g.order)
    if isinstance(g, FiniteByTable):
        return (a + 1,) if a != g.identity else ()
    if isinstance(g, FgAbelian):
        out = []
        for i, c in enumerate(a):
            out.extend([i + 1 if c > 0 else -(i + 1)] * abs(c))
        return tuple(out)
    if isinstance(g, Free):
        return tuple(a)
    raise GroupError(f"no word spelling for {type(g).__name__}")


# ---------------------------------------------------------------------------
# Homomorphisms
# ---------------------------------------------------------------------------

class HomData:
    """Base class for homomorphism payloads."""


@dataclass(frozen=True)
class TrivialInclusion(HomData):
    """The unique map from the trivial group."""


@dataclass(frozen=True)
class AbelianMatrix(HomData):
    """Rows = images of the source's standard generators in target coords."""

    matrix: IntMatrix


@dataclass(frozen=True)
class FreeWordImages(HomData):
    """One word in the target's generators per free generator of the source."""

    words: tuple[Word, ...]


@dataclass(frozen=True)
class FiniteTableMap(HomData):
    """images[i] = target element index of source element i."""

    images: tuple[int, ...]


@dataclass(frozen=True)
class ComposedWithInclusion(HomData):
    """An edge map into a vertex group composed with the canonical inclusion
    of that vertex group into the fundamental group of a component subgraph.

    Used by the almost-tree reduction; injectivity is inherited from the
    inner map because vertex groups embed into the fundamental group.
    """

    inner: "GroupHom"
    via_vertex: str


@dataclass(frozen=True)
class GroupHom:
    source: GroupDescriptor
    target: GroupDescriptor
    data: HomData

    def __post_init__(self) -> None:
        problem = hom_well_defined_error(self)
        if problem:
            raise GroupError(problem)

    def to_text(self) -> str:
        d = self.data
        if isinstance(d, TrivialInclusion):
            return "trivial"
        if isinstance(d, AbelianMatrix):
            rows = ";".join(",".join(str(d.matrix[i, j]) for j in range(d.matrix.cols))
                            for i in range(d.matrix.rows))
            return f"matrix([{rows}])"
        if isinstance(d, FreeWordImages):
            ws = ";".join(",".join(str(x) for x in w) for w in d.words)
            return f"words([{ws}])"
        if isinstance(d, FiniteTableMap):
            return "map([" + ",".join(str(x) for x in d.images) + "])"
        if isinstance(d, ComposedWithInclusion):
            return f"compose(vertex={d.via_vertex},{d.inner.to_text()})"
        raise GroupError("unknown hom payload")


def hom_well_defined_error(h: GroupHom) -> str | None:
    """None when well-defined; otherwise a description of the defect."""
    d = h.data
    if isinstance(d, TrivialInclusion):
        if not is_trivial_group(h.source):
            return "trivial-inclusion payload requires a trivial source"
        return None
    if isinstance(d, AbelianMatrix):
        src, tgt = abelian_model(h.source), abelian_model(h.target)
        if src is None or tgt is None:
            return "matrix payload requires abelian source and target"
        m = d.matrix
        if m.rows != src.ngens or m.cols != tgt.ngens:
            return (f"matrix is {m.rows}x{m.cols}, expected "
                    f"{src.ngens}x{tgt.ngens}")
        # each torsion relation of the source must map to zero
        for k, order in enumerate(src.invariant_factors):
            i = src.free_rank + k
            img = tgt.reduce_element([order * m[i, j] for j in range(m.cols)])
            if any(img):
                return f"torsion generator {i} of order {order} maps to nonzero {img}"
        return None
    if isinstance(d, FreeWordImages):
        if not isinstance(h.source, Free):
            return "word-images payload requires a free source"
        if len(d.words) != h.source.rank:
            return f"{len(d.words)} images for free rank {h.source.rank}"
        for w in d.words:
            n = generator_count(h.target) if not isinstance(h.target, (Surface, PureBraid, VirtuallyCyclic, Opaque)) else None
            if n is not None and any(x == 0 or abs(x) > n for x in w):
                return f"image word {w} has letters out of range"
        return None
    if isinstance(d, FiniteTableMap):
        o = order_of(h.source)
        if o is None:
            return "table-map payload requires a finite source"
        to = order_of(h.target)
        if to is None:
            return "table-map payload requires a finite target"
        if len(d.images) != o:
            return f"{len(d.images)} images for order {o}"
        if any(not 0 <= x < to for x in d.images):
            return "image index out of range"
        if d.images[finite_identity(h.source)] != finite_identity(h.target):
            return "identity does not map to identity"
        for a in range(o):
            for b in range(o):
                if d.images[finite_mul(h.source, a, b)] != \
                        finite_mul(h.target, d.images[a], d.images[b]):
                    return f"multiplicativity fails at ({a},{b})"
        return None
    if isinstance(d, ComposedWithInclusion):
        if d.inner.source != h.source:
            return "composed map source mismatch"
        return None
    return "unknown hom payload"


def _abelian_preimage_lattice(h: GroupHom) -> list[list[int]]:
    """Basis of { x in Z^ns : x @ F lies in the target relation lattice }."""
    src = abelian_model(h.source)
    tgt = abelian_model(h.target)
    assert src is not None and tgt is not None
    f = h.data.matrix  # type: ignore[union-attr]
    ns, nt = src.ngens, tgt.ngens
    rel = tgt.relation_rows()
    stacked_rows = f.to_rows() + rel
    if not stacked_rows:
        return [[1 if i == j else 0 for j in range(ns)] for i in range(ns)]
    stacked = IntMatrix.from_rows(stacked_rows, nt)
    combos = kernel_basis(stacked)
    vecs = [combo[:ns] for combo in combos]
    return hermite_row_basis(vecs, ns)


def hom_kernel_finite(h: GroupHom) -> str:
    """Decide kernel finiteness: 'yes', 'no', or 'unknown'."""
    if order_of(h.source) is not None:
        return YES
    d = h.data
    if isinstance(d, AbelianMatrix):
        src = abelian_model(h.source)
        lat = _abelian_preimage_lattice(h)
        torsion = len(src.invariant_factors)
        kernel_rank = len(lat) - torsion
        return YES if kernel_rank == 0 else NO
    if isinstance(d, FreeWordImages):
        m = h.source.rank
        if m == 0:
            return YES
        tgt = abelian_model(h.target)
        if m == 1:
            if tgt is not None:
                img = word_eval(h.target, d.words[0])
                return YES if tgt.element_order(img) is None else NO
            return UNKNOWN
        if tgt is not None or is_abelian_kind(h.target) is True:
            # a nonabelian free group never embeds in an abelian group and
            # its commutator subgroup (infinite) dies under any such map
            return NO
        return UNKNOWN
    return UNKNOWN


def hom_injective(h: GroupHom) -> str:
    """Certify or refute injectivity: 'yes', 'no', or 'unknown'."""
    d = h.data
    if isinstance(d, TrivialInclusion):
        return YES
    if isinstance(d, FiniteTableMap):
        return YES if len(set(d.images)) == len(d.images) else NO
    if isinstance(d, AbelianMatrix):
        src = abelian_model(h.source)
        lat = _abelian_preimage_lattice(h)
        srel = hermite_row_basis(src.relation_rows(), src.ngens)
        return YES if lat == srel else NO
    if isinstance(d, FreeWordImages):
        m = h.source.rank
        if m == 0:
            return YES
        tgt = abelian_model(h.target)
        if m == 1 and tgt is not None:
            img = word_eval(h.target, d.words[0])
            return YES if tgt.element_order(img) is None else NO
        if m >= 2 and (tgt is not None or is_abelian_kind(h.target) is True):
            return NO
        return UNKNOWN
    if isinstance(d, ComposedWithInclusion):
        # vertex groups embed into the fundamental group, so injectivity
        # reduces to the inner map
        return hom_injective(d.inner)
    return UNKNOWN


def hom_apply(h: GroupHom, element):
    """Image of a canonical source element; UNSUPPORTED if no algorithm."""
    d = h.data
    if isinstance(d, TrivialInclusion):
        return identity_element(h.target)
    if isinstance(d, AbelianMatrix):
        x = to_abelian_coords(h.source, element)
        m = d.matrix
        coords = [sum(x[i] * m[i, j] for i in range(m.rows))
                  for j in range(m.cols)]
        return from_abelian_coords(h.target, coords)
    if isinstance(d, FiniteTableMap):
        return d.images[element]
    if isinstance(d, FreeWordImages):
        word: list[int] = []
        for letter in element:
            img = d.words[abs(letter) - 1]
            word.extend(img if letter > 0 else [-x for x in reversed(img)])
        return word_eval(h.target, word)
    return UNSUPPORTED


def hom_preimage(h: GroupHom, target_element):
    """A source element mapping to the target element, None if outside the
    image, UNSUPPORTED when membership is undecidable for these kinds."""
    d = h.data
    if isinstance(d, TrivialInclusion):
        if is_identity_element(h.target, target_element):
            return identity_element(h.source)
        return None
    if isinstance(d, FiniteTableMap):
        for i, img in enumerate(d.images):
            if img == target_element:
                return i
        return None
    if isinstance(d, AbelianMatrix):
        src = abelian_model(h.source)
        tgt = abelian_model(h.target)
        y = list(to_abelian_coords(h.target, target_element))
        f = d.matrix
        rows = f.to_rows() + tgt.relation_rows()
        sol = solve_row_membership(rows, y, tgt.ngens) \
            if rows else (None if any(y) else [])
        if sol is None:
            return None
        x = sol[: src.ngens] + [0] * (src.ngens - min(src.ngens, len(sol)))
        return from_abelian_coords(h.source, x)
    return UNSUPPORTED


def hom_image_contains(h: GroupHom, target_element):
    pre = hom_preimage(h, target_element)
    if pre is UNSUPPORTED:
        return UNSUPPORTED
    return pre is not None


def compose_homs(outer: GroupHom, inner: GroupHom) -> GroupHom:
    """outer o inner for abelian-matrix payloads (the only composition the
    pipeline needs)."""
    if inner.target != outer.source:
        raise GroupError("composition type mismatch")
    if isinstance(inner.data, TrivialInclusion):
        return GroupHom(inner.source, outer.target, TrivialInclusion())
    if isinstance(inner.data, AbelianMatrix) and isinstance(outer.data, AbelianMatrix):
        return GroupHom(inner.source, outer.target,
                        AbelianMatrix(inner.data.matrix @ outer.data.matrix))
    if isinstance(inner.data, FiniteTableMap) and isinstance(outer.data, FiniteTableMap):
        return GroupHom(inner.source, outer.target,
                        FiniteTableMap(tuple(outer.data.images[i]
                                             for i in inner.data.images)))
    raise GroupError("unsupported hom composition")
