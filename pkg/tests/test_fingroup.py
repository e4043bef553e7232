"""Finite group tables, subgroups, and isomorphism testing.

The backtracking isomorphism search is checked against an exhaustive
search over all bijections for orders up to 8, where 8! permutations
are still affordable.
"""

import itertools

import pytest

from thg.abelian import FgAbelian
from thg.errors import InvalidInputError, NotFoundError
from thg.fingroup import (CayleyGroup, SubgroupRef, abelian_structure,
                          abelianization, center, commutator_subgroup,
                          find_isomorphism, from_catalog, full_subgroup,
                          is_abelian, is_isomorphic, is_normal, order_profile,
                          quotient, subgroup_as_group, subgroup_generated,
                          trivial_subgroup)


def brute_force_isomorphic(a: CayleyGroup, b: CayleyGroup) -> bool:
    """Try literally every bijection; only viable through order 8."""
    if a.order != b.order:
        return False
    n = a.order
    ids = list(range(n))
    for perm in itertools.permutations(ids):
        if perm[a.identity_index] != b.identity_index:
            continue
        if all(perm[a.mul(i, j)] == b.mul(perm[i], perm[j])
               for i in ids for j in ids):
            return True
    return False


NAMED = ["trivial", "Z2", "Z(3)", "Z(4)", "Z2xZ2", "Z(6)", "Z(8)",
         "Z(4)xZ2", "Z2xZ2xZ2", "Q8", "D4"]


def test_isomorphism_agrees_with_exhaustive_search():
    groups = {name: from_catalog(name) for name in NAMED}
    for x, y in itertools.combinations_with_replacement(NAMED, 2):
        a, b = groups[x], groups[y]
        if a.order > 8 or b.order > 8:
            continue
        assert is_isomorphic(a, b) == brute_force_isomorphic(a, b), (x, y)


def test_isomorphism_is_a_homomorphism_when_found():
    a, b = from_catalog("Q8"), from_catalog("Q8")
    phi = find_isomorphism(a, b)
    assert phi is not None
    for i in range(a.order):
        for j in range(a.order):
            assert phi[a.mul(i, j)] == b.mul(phi[i], phi[j])


def test_order_profiles_separate_q8_from_d4():
    q8, d4 = from_catalog("Q8"), from_catalog("D4")
    assert order_profile(q8) == {1: 1, 2: 1, 4: 6}
    assert order_profile(d4) == {1: 1, 2: 5, 4: 2}
    assert not is_isomorphic(q8, d4)


def test_catalog_orders_and_commutativity():
    assert from_catalog("trivial").order == 1
    assert from_catalog("Z(12)").order == 12
    assert from_catalog("Z(4)xZ2").order == 8
    assert is_abelian(from_catalog("Z2xZ2"))
    assert not is_abelian(from_catalog("Q8"))
    assert not is_abelian(from_catalog("D4"))
    with pytest.raises(NotFoundError):
        from_catalog("S3")


def test_center_of_quaternion_group():
    q8 = from_catalog("Q8")
    z = center(q8)
    assert z.order == 2
    assert sorted(z.names()) == ["-1", "1"]
    assert is_isomorphic(subgroup_as_group(q8, z), from_catalog("Z2"))


def test_center_of_dihedral_group():
    d4 = from_catalog("D4")
    assert center(d4).order == 2


def test_commutator_and_abelianization():
    q8 = from_catalog("Q8")
    comm = commutator_subgroup(q8)
    assert comm.order == 2
    assert sorted(comm.names()) == ["-1", "1"]
    # Q8 and D4 both abelianize to the Klein four-group.
    assert abelianization(q8) == FgAbelian(0, (2, 2))
    assert abelianization(from_catalog("D4")) == FgAbelian(0, (2, 2))
    assert abelianization(from_catalog("Z(6)")) == FgAbelian(0, (6,))
    q = quotient(q8, comm)
    assert q.order == 4 and is_abelian(q)
    assert is_isomorphic(q, from_catalog("Z2xZ2"))


def test_abelian_structure_reads_off_invariant_factors():
    assert abelian_structure(from_catalog("Z(4)xZ2")) == FgAbelian(0, (2, 4))
    assert abelian_structure(from_catalog("Z2xZ2xZ2")) == FgAbelian(0, (2, 2, 2))
    assert abelian_structure(from_catalog("Z(6)")) == FgAbelian(0, (6,))
    with pytest.raises(InvalidInputError):
        abelian_structure(from_catalog("Q8"))


def test_subgroup_generated_closure():
    q8 = from_catalog("Q8")
    i = q8.index_of("i")
    ref = subgroup_generated(q8, [i])
    assert ref.order == 4
    assert sorted(ref.names()) == ["-1", "-i", "1", "i"]
    assert is_normal(q8, ref)  # index 2
    assert is_isomorphic(subgroup_as_group(q8, ref), from_catalog("Z(4)"))


def test_subgroup_ref_requires_closure():
    q8 = from_catalog("Q8")
    with pytest.raises(InvalidInputError):
        SubgroupRef(q8, (q8.identity_index, q8.index_of("i")))
    with pytest.raises(InvalidInputError):
        SubgroupRef(q8, ())  # must contain the identity


def test_full_and_trivial_subgroups():
    d4 = from_catalog("D4")
    assert full_subgroup(d4).order == 8
    assert trivial_subgroup(d4).order == 1
    assert quotient(d4, full_subgroup(d4)).order == 1


def test_element_orders_and_inverses():
    q8 = from_catalog("Q8")
    for i in range(q8.order):
        assert q8.mul(i, q8.inverse(i)) == q8.identity_index
    assert q8.element_order(q8.index_of("-1")) == 2
    assert q8.element_order(q8.index_of("j")) == 4
    z6 = from_catalog("Z(6)")
    assert sorted(z6.element_order(i) for i in range(6)) == [1, 2, 3, 3, 6, 6]


def test_conjugation_fixes_center():
    d4 = from_catalog("D4")
    z = center(d4)
    for c in z.element_indices:
        for g in range(d4.order):
            assert d4.conjugate(g, c) == c


def test_bad_tables_rejected():
    with pytest.raises(InvalidInputError):
        CayleyGroup(order=2, element_names=("e", "a"),
                    table=((0, 1), (1, 1)), identity_index=0)  # not a bijection row
    with pytest.raises(InvalidInputError):
        CayleyGroup(order=2, element_names=("e", "e"),
                    table=((0, 1), (1, 0)), identity_index=0)  # duplicate names
    with pytest.raises(InvalidInputError):
        CayleyGroup(order=3, element_names=("e", "a", "b"),
                    table=((0, 1, 2), (1, 2, 0), (2, 1, 0)),
                    identity_index=0)  # second column repeats an element
    # A loop of order 5: a Latin square with identity that is not
    # associative, so only the associativity sweep can reject it.
    loop5 = ((0, 1, 2, 3, 4),
             (1, 0, 3, 4, 2),
             (2, 3, 4, 0, 1),
             (3, 4, 1, 2, 0),
             (4, 2, 0, 1, 3))
    with pytest.raises(InvalidInputError):
        CayleyGroup(order=5, element_names=("e", "a", "b", "c", "d"),
                    table=loop5, identity_index=0)


def test_product_groups_multiply_componentwise():
    g = from_catalog("Z2xZ(3)")
    assert g.order == 6
    assert is_isomorphic(g, from_catalog("Z(6)"))
    assert abelian_structure(g) == FgAbelian(0, (6,))
