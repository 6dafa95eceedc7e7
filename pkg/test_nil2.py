"""
Tests for class-2 nilpotent groups: normal forms, presented quotients,
homomorphisms and the exterior cup products.
"""

import os
import sys

from hypothesis import given, settings, strategies as st
from sympy import Matrix, eye

# Add the project root to the path
sys.path.insert(0, os.path.dirname(__file__))

from src.nil2 import (CupProduct, Nil2Element, Nil2Hom, PointedSet, PresentedNil2, associativity_check,
                      binom2, commutator)
from src.utils import AxiomError, InputError

AB = PointedSet(["a", "b"])

# the free class-2 group of rank 2 is the integer Heisenberg group
A_MAT = Matrix([[1, 1, 0], [0, 1, 0], [0, 0, 1]])
B_MAT = Matrix([[1, 0, 0], [0, 1, 1], [0, 0, 1]])
C_MAT = Matrix([[1, 0, 1], [0, 1, 0], [0, 0, 1]])

ints = st.integers(min_value=-5, max_value=5)
elements_ab = st.tuples(ints, ints, ints).map(lambda t: Nil2Element(AB, t[:2], t[2:]))


def heisenberg(x: Nil2Element) -> Matrix:
    a, b = x.linear
    return A_MAT ** a * B_MAT ** b * C_MAT ** x.comm[0]


def random_words(basis: PointedSet, max_coeff: int = 2):
    n = basis.size
    return st.tuples(st.lists(st.integers(-max_coeff, max_coeff), min_size=n, max_size=n),
                     st.lists(st.integers(-max_coeff, max_coeff), min_size=basis.npairs,
                              max_size=basis.npairs)).map(lambda t: Nil2Element(basis, t[0], t[1]))


def test_binom2():
    """Test C(n, 2) on negative and positive integers."""
    print("Testing binom2...")

    assert [binom2(n) for n in (-2, -1, 0, 1, 2, 3)] == [3, 1, 0, 0, 1, 3]

    print("✅ binom2 is correct")


@settings(max_examples=80, deadline=None)
@given(elements_ab, elements_ab)
def test_addition_matches_heisenberg(x, y):
    """Test that the normal-form sum is the Heisenberg product."""
    assert heisenberg(x + y) == heisenberg(x) * heisenberg(y)
    assert heisenberg(-x) == heisenberg(x).inv()
    assert heisenberg(commutator(x, y)) == heisenberg(x).inv() * heisenberg(y).inv() * heisenberg(x) * heisenberg(y)


@settings(max_examples=40, deadline=None)
@given(elements_ab, st.integers(min_value=-4, max_value=4))
def test_scale_is_repeated_sum(x, n):
    """Test n·x against matrix powers."""
    expected = heisenberg(x) ** n if n >= 0 else heisenberg(x).inv() ** (-n)
    assert heisenberg(x.scale(n)) == expected
    assert heisenberg(AB.identity()) == eye(3)


def test_commutator_of_generators():
    """Test [a, b] = −a − b + a + b is the basic commutator."""
    print("Testing generator commutators...")

    a, b = AB.gen("a"), AB.gen("b")
    c = commutator(a, b)
    assert c.linear == (0, 0)
    assert c.comm == (1,)
    assert commutator(b, a) == -c
    assert repr(c) == "[a,b]"

    print("✅ [a,b] has the expected normal form")


def test_central_generators_have_no_commutators():
    """Test that central generators get no commutator coordinates."""
    print("Testing central generators...")

    basis = PointedSet(["a", "b", "p"], central=["p"])
    assert basis.npairs == 1
    p, a = basis.gen("p"), basis.gen("a")
    assert p + a == a + p

    print("✅ Central generators commute with everything")


def test_duplicate_names_rejected():
    """Test that duplicate generator names raise InputError."""
    print("Testing duplicate names...")

    try:
        PointedSet(["a", "a"])
    except InputError:
        print("✅ Duplicate names rejected")
        return
    raise AssertionError("duplicate names should be rejected")


def test_presented_quotient():
    """Test equality in ⟨a, b | 2a⟩."""
    print("Testing a presented quotient...")

    a, b = AB.gen("a"), AB.gen("b")
    group = PresentedNil2(AB, [a.scale(2)])
    assert group.is_identity(a.scale(2))
    assert not group.is_identity(a)
    # 2a central forces 2[a,b] = [2a,b] = 0
    assert group.is_identity(commutator(a, b).scale(2))
    assert not group.is_identity(commutator(a, b))
    assert group.equal(a + b, b + a + commutator(a, b))
    assert group.abelianization().invariants() == ([2], 1)

    print("✅ ⟨a, b | 2a⟩ behaves as expected")


def test_normal_form_is_canonical():
    """Test that equal elements share one normal form."""
    print("Testing normal form canonicity...")

    a, b = AB.gen("a"), AB.gen("b")
    group = PresentedNil2(AB, [a.scale(3), b.scale(3)])
    x = a.scale(4) + b
    y = a + b.scale(-2)
    assert group.equal(x, y)
    assert group.normal_form(x) == group.normal_form(y)

    print("✅ Normal forms agree on equal elements")


def test_hom_apply_and_compose():
    """Test evaluation, composition and isomorphism checks of homomorphisms."""
    print("Testing homomorphisms...")

    free = PresentedNil2.free(AB)
    a, b = AB.gen("a"), AB.gen("b")
    swap = Nil2Hom(free, free, [b, a])
    assert swap.apply(commutator(a, b)) == commutator(b, a)
    assert swap.compose(swap).equals(Nil2Hom.identity(free))
    assert swap.is_isomorphism()

    collapse = Nil2Hom.from_pointed_map(free, free, {"a": "a", "b": None})
    assert collapse.apply(a + b) == a
    assert not collapse.is_injective()
    assert not collapse.is_surjective()

    print("✅ Homomorphisms evaluate and compose correctly")


def test_ill_defined_hom_rejected():
    """Test that a map not killing a relator raises AxiomError."""
    print("Testing ill-defined homomorphisms...")

    single = PointedSet(["a"])
    z2 = PresentedNil2(single, [single.gen("a", 2)])
    z = PresentedNil2.free(single)
    try:
        Nil2Hom(z2, z, [single.gen("a")])
    except AxiomError:
        print("✅ Ill-defined homomorphism rejected")
        return
    raise AssertionError("a ↦ a from ℤ/2 to ℤ should be rejected")


def test_cup_products_on_generators():
    """Test that # and ⊏̲ send generators to smash generators."""
    print("Testing cup products on generators...")

    e, ebar = PointedSet(["a", "b"]), PointedSet(["c"])
    cup = CupProduct(e, ebar)
    a, c = e.gen("a"), ebar.gen("c")
    assert cup.hash(a, c) == cup.smash.gen("a.c")
    assert cup.underhash(a, c) == cup.smash.gen("a.c")

    print("✅ Cup products of generators are smash generators")


@settings(max_examples=30, deadline=None)
@given(random_words(PointedSet(["a", "b"])), random_words(PointedSet(["c", "d"])))
def test_cup_difference_law(x, y):
    """Test x⊏̲y = x#y + H(x)⊗̄TH(y)."""
    cup = CupProduct(x.basis, y.basis)
    assert cup.difference_law_holds(x, y)


@settings(max_examples=20, deadline=None)
@given(random_words(PointedSet(["a", "b"])), random_words(PointedSet(["c"])), random_words(PointedSet(["p", "q"])))
def test_cup_associativity(x, y, z):
    """Test associativity of both cup products."""
    assert associativity_check(x, y, z, "#")
    assert associativity_check(x, y, z, "⊏̲")


def run_all_tests():
    """Run all tests."""
    print("\n" + "="*60)
    print("Running Nilpotent Group Tests")
    print("="*60 + "\n")

    tests = [
        test_binom2,
        test_addition_matches_heisenberg,
        test_scale_is_repeated_sum,
        test_commutator_of_generators,
        test_central_generators_have_no_commutators,
        test_duplicate_names_rejected,
        test_presented_quotient,
        test_normal_form_is_canonical,
        test_hom_apply_and_compose,
        test_ill_defined_hom_rejected,
        test_cup_products_on_generators,
        test_cup_difference_law,
        test_cup_associativity,
    ]

    failed = []

    for test in tests:
        try:
            test()
        except Exception as e:
            print(f"❌ {test.__name__} failed: {str(e)}")
            failed.append(test.__name__)

    print("\n" + "="*60)
    if not failed:
        print("✅ All tests passed!")
    else:
        print(f"❌ {len(failed)} test(s) failed:")
        for test_name in failed:
            print(f"  - {test_name}")
    print("="*60 + "\n")

    return len(failed) == 0


if __name__ == "__main__":
    success = run_all_tests()
    sys.exit(0 if success else 1)
