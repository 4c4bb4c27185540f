"""Tests for descriptors, flags, words and homomorphisms."""

from __future__ import annotations

import itertools

import pytest

from gogkl.abelian import AbelianGroup, IntMatrix
from gogkl.groups import (
    UNSUPPORTED,
    YES, NO, UNKNOWN,
    AbelianMatrix,
    FgAbelian,
    FiniteByTable,
    FiniteCyclic,
    FiniteTableMap,
    FlagSet,
    Free,
    FreeWordImages,
    GroupError,
    GroupHom,
    Opaque,
    PureBraid,
    Surface,
    Trivial,
    TrivialInclusion,
    VirtuallyCyclic,
    derive_flags,
    has_order_two_element,
    hom_apply,
    hom_image_contains,
    hom_injective,
    hom_kernel_finite,
    hom_preimage,
    is_abelian_kind,
    order_of,
    word_eval,
)


def cyclic_table(n: int) -> FiniteByTable:
    table = tuple(tuple((i + j) % n for j in range(n)) for i in range(n))
    return FiniteByTable(table, 0)


def klein_four_table() -> FiniteByTable:
    # Z/2 x Z/2 as a table group
    elems = list(itertools.product((0, 1), (0, 1)))
    idx = {e: i for i, e in enumerate(elems)}
    table = tuple(tuple(idx[((a + c) % 2, (b + d) % 2)] for (c, d) in elems)
                  for (a, b) in elems)
    return FiniteByTable(table, 0)


def zmat(rows):
    return IntMatrix.from_rows(rows)


# ---------------------------------------------------------------------------
# FlagSet
# ---------------------------------------------------------------------------

def test_flag_implications():
    f = FlagSet(finite=True)
    assert f.residually_finite is True
    f = FlagSet(in_class_cl=True)
    assert f.torsion_free is True
    f = FlagSet(virtually_cyclic=True)
    assert f.virtually_polycyclic is True
    # contrapositive
    f = FlagSet(torsion_free=False)
    assert f.in_class_cl is False and f.regular_coherent is False


def test_flag_contradiction_rejected():
    with pytest.raises(GroupError):
        FlagSet(finite=True, residually_finite=False)


def test_flag_merge_never_downgrades():
    a = FlagSet(residually_finite=True)
    b = FlagSet(fg_nilpotent=False)
    m = a.merge(b)
    assert m.residually_finite is True and m.fg_nilpotent is False
    with pytest.raises(GroupError):
        a.merge(FlagSet(residually_finite=False))


# ---------------------------------------------------------------------------
# Descriptor validity
# ---------------------------------------------------------------------------

def test_table_group_validation():
    g = cyclic_table(6)
    assert g.order == 6 and order_of(g) == 6
    bad = [[0, 1], [0, 1]]
    with pytest.raises(GroupError):
        FiniteByTable(tuple(tuple(r) for r in bad), 0)


def test_table_group_associativity_rejected():
    # a Latin square with identity that is not associative
    # (rows: e=0; build from a non-group quasigroup of order 5)
    latin = [
        [0, 1, 2, 3, 4],
        [1, 0, 3, 4, 2],
        [2, 4, 0, 1, 3],
        [3, 2, 4, 0, 1],
        [4, 3, 1, 2, 0],
    ]
    with pytest.raises(GroupError):
        FiniteByTable(tuple(tuple(r) for r in latin), 0)


def test_sphere_rejected():
    with pytest.raises(GroupError):
        Surface(0, True)
    Surface(0, False)  # Klein bottle is fine


def test_cyclic_one_rejected():
    with pytest.raises(GroupError):
        FiniteCyclic(1)


def test_vc_action_must_be_automorphism():
    VirtuallyCyclic(FiniteCyclic(3), (0, 2, 1))  # inversion is fine
    with pytest.raises(GroupError):
        VirtuallyCyclic(FiniteCyclic(4), (0, 2, 1, 3))  # not an automorphism
    with pytest.raises(GroupError):
        VirtuallyCyclic(FgAbelian(AbelianGroup(1)), (0,))  # infinite part


# ---------------------------------------------------------------------------
# derive_flags
# ---------------------------------------------------------------------------

def test_flags_free_group():
    f = derive_flags(Free(2))
    assert f.in_class_cl is True
    assert f.regular_coherent is True
    assert f.residually_finite is True
    assert f.torsion_free is True
    assert f.virtually_cyclic is False


def test_flags_trivial():
    f = derive_flags(Trivial())
    assert f.finite is True and f.in_class_cl is True
    assert f.ficwf_p_known is True and f.ficwf_l_known is True


def test_flags_z2():
    f = derive_flags(FgAbelian(AbelianGroup.cyclic(2)))
    assert f.torsion_free is False
    assert f.regular_coherent is False
    assert f.ficwf_p_known is True
    assert f.virtually_cyclic is True and f.finite is True


def test_flags_surface_and_braid():
    s = derive_flags(Surface(2, True))
    assert s.in_class_cl is True and s.residually_finite is True
    assert s.one_ended is True and s.virtually_polycyclic is False
    b = derive_flags(PureBraid(4))
    assert b.in_class_cl is True and b.torsion_free is True
    torus = derive_flags(Surface(1, True))
    assert torus.virtually_polycyclic is True
    klein = derive_flags(Surface(0, False))
    assert klein.virtually_polycyclic is True and klein.torsion_free is True


def test_flags_vc():
    v = derive_flags(VirtuallyCyclic(FiniteCyclic(3), (0, 2, 1)))
    assert v.virtually_cyclic is True and v.finite is False
    assert v.torsion_free is False
    assert v.ficwf_p_known is True


def test_flags_opaque_passthrough():
    flags = FlagSet(residually_finite=True, fg_nilpotent=False)
    g = Opaque("Gamma", flags)
    assert derive_flags(g) == flags


def test_flags_deterministic_and_monotone():
    for g in [Trivial(), Free(3), FgAbelian(AbelianGroup(2)), Surface(2, True),
              FiniteCyclic(5), PureBraid(3)]:
        f1, f2 = derive_flags(g), derive_flags(g)
        assert f1 == f2
        # merge with itself never flips anything
        assert f1.merge(f2) == f1


# ---------------------------------------------------------------------------
# word_eval
# ---------------------------------------------------------------------------

def test_word_eval_free_reduction():
    assert word_eval(Free(2), (1, 2, -2, -1)) == ()
    assert word_eval(Free(2), (1, 2, -1)) == (1, 2, -1)


def test_word_eval_cyclic():
    assert word_eval(FiniteCyclic(5), (1,) * 7) == 2


def test_word_eval_abelian():
    g = FgAbelian(AbelianGroup(2))
    assert word_eval(g, (1, 2, -1)) == (0, 1)


def test_word_eval_unsupported():
    assert word_eval(Surface(2, True), (1,)) is UNSUPPORTED
    assert word_eval(PureBraid(3), (1,)) is UNSUPPORTED
    assert word_eval(Opaque("X"), (1,)) is UNSUPPORTED


def test_word_eval_out_of_range():
    with pytest.raises(GroupError):
        word_eval(Free(2), (3,))
    with pytest.raises(GroupError):
        word_eval(Free(2), (0,))


def test_word_eval_table():
    g = klein_four_table()
    a = word_eval(g, (2, 2))  # element 1 squared
    assert a == 0


# ---------------------------------------------------------------------------
# homomorphisms
# ---------------------------------------------------------------------------

def z_to_z(k: int) -> GroupHom:
    z = FgAbelian(AbelianGroup(1))
    return GroupHom(z, z, AbelianMatrix(zmat([[k]])))


def test_kernel_finite_times_two():
    assert hom_kernel_finite(z_to_z(2)) == YES


def test_kernel_projection_infinite():
    z2 = FgAbelian(AbelianGroup(2))
    z = FgAbelian(AbelianGroup(1))
    proj = GroupHom(z2, z, AbelianMatrix(zmat([[1], [0]])))
    assert hom_kernel_finite(proj) == NO


def test_kernel_finite_source():
    tgt = FgAbelian(AbelianGroup(1))
    h = GroupHom(cyclic_table(4), FiniteByTable(cyclic_table(2).table, 0),
                 FiniteTableMap((0, 1, 0, 1)))
    assert hom_kernel_finite(h) == YES
    assert hom_injective(h) == NO


def test_injectivity_certification():
    assert hom_injective(z_to_z(2)) == YES
    assert hom_injective(z_to_z(0)) == NO
    z = FgAbelian(AbelianGroup(1))
    c2 = FgAbelian(AbelianGroup.cyclic(2))
    down = GroupHom(z, c2, AbelianMatrix(zmat([[1]])))
    assert hom_injective(down) == NO


def test_injectivity_vs_bruteforce_small_abelian():
    # every matrix map between small finite abelian groups, checked against
    # exhaustive kernel search
    groups = [AbelianGroup.cyclic(2), AbelianGroup.cyclic(4),
              AbelianGroup(0, (2, 2)), AbelianGroup.cyclic(6)]
    for src in groups:
        for tgt in groups:
            rows = src.ngens
            cols = tgt.ngens
            for entries in itertools.product(range(4), repeat=rows * cols):
                m = IntMatrix(rows, cols, tuple(entries))
                try:
                    h = GroupHom(FgAbelian(src), FgAbelian(tgt), AbelianMatrix(m))
                except GroupError:
                    continue  # not well defined
                verdict = hom_injective(h)
                kernel = [el for el in src.elements()
                          if not any(hom_apply(h, el))]
                assert (verdict == YES) == (len(kernel) == 1), \
                    f"{src} -> {tgt} via {m}: verdict {verdict}, kernel {len(kernel)}"


def test_free_to_abelian_kernel():
    z = FgAbelian(AbelianGroup(1))
    h = GroupHom(Free(1), z, FreeWordImages(((1, 1),)))
    assert hom_injective(h) == YES
    assert hom_kernel_finite(h) == YES
    h2 = GroupHom(Free(2), FgAbelian(AbelianGroup(2)),
                  FreeWordImages(((1,), (2,))))
    assert hom_injective(h2) == NO  # F2 is not abelian
    assert hom_kernel_finite(h2) == NO
    h3 = GroupHom(Free(1), FgAbelian(AbelianGroup.cyclic(3)),
                  FreeWordImages(((1,),)))
    assert hom_injective(h3) == NO


def test_hom_apply_and_preimage_abelian():
    h = z_to_z(3)
    assert hom_apply(h, (2,)) == (6,)
    assert hom_preimage(h, (6,)) == (2,)
    assert hom_preimage(h, (5,)) is None


def test_hom_preimage_with_torsion():
    src = FgAbelian(AbelianGroup.cyclic(2))
    tgt = FgAbelian(AbelianGroup.cyclic(4))
    h = GroupHom(src, tgt, AbelianMatrix(zmat([[2]])))
    assert hom_apply(h, (1,)) == (2,)
    assert hom_preimage(h, (2,)) == (1,)
    assert hom_preimage(h, (1,)) is None
    assert hom_injective(h) == YES


def test_hom_well_definedness_rejected():
    src = FgAbelian(AbelianGroup.cyclic(2))
    tgt = FgAbelian(AbelianGroup(1))
    with pytest.raises(GroupError):
        GroupHom(src, tgt, AbelianMatrix(zmat([[1]])))  # 2*1 != 0 in Z


def test_trivial_inclusion():
    h = GroupHom(Trivial(), Free(2), TrivialInclusion())
    assert hom_injective(h) == YES
    assert hom_apply(h, ()) == ()
    assert hom_image_contains(h, ()) is True
    assert hom_image_contains(h, (1,)) is False


def test_table_map_homomorphism_checked():
    src = cyclic_table(2)
    tgt = cyclic_table(4)
    GroupHom(src, tgt, FiniteTableMap((0, 2)))
    with pytest.raises(GroupError):
        GroupHom(src, tgt, FiniteTableMap((0, 1)))  # 1 has order 4


# ---------------------------------------------------------------------------
# misc structure
# ---------------------------------------------------------------------------

def test_order_two_detection():
    assert has_order_two_element(FiniteCyclic(6)) is True
    assert has_order_two_element(FiniteCyclic(9)) is False
    assert has_order_two_element(Free(5)) is False
    assert has_order_two_element(klein_four_table()) is True
    assert has_order_two_element(Opaque("X")) is None
    assert has_order_two_element(Opaque("X", FlagSet(torsion_free=True))) is False


def test_is_abelian_kind():
    assert is_abelian_kind(klein_four_table()) is True
    assert is_abelian_kind(Free(2)) is False
    assert is_abelian_kind(Surface(1, True)) is True
    assert is_abelian_kind(Surface(2, True)) is False
    assert is_abelian_kind(VirtuallyCyclic(FiniteCyclic(3), (0, 1, 2))) is True
    assert is_abelian_kind(VirtuallyCyclic(FiniteCyclic(3), (0, 2, 1))) is None


def test_descriptor_text_forms():
    assert Free(2).to_text() == "free(2)"
    assert FiniteCyclic(5).to_text() == "cyclic(5)"
    assert Surface(2, True).to_text() == "surface(genus=2,orientable)"
    assert FgAbelian(AbelianGroup(2, (6,))).to_text() == "abelian(rank=2,torsion=[6])"
    assert PureBraid(3).to_text() == "braid(3)"
