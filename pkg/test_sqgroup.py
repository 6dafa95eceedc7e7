"""
Tests for square groups: structure maps, axioms, morphisms, the tensor
product and its structural isomorphisms.
"""

import os
import sys

from hypothesis import given, settings, strategies as st

# Add the project root to the path
sys.path.insert(0, os.path.dirname(__file__))

from src.abelian import AbGroupPresentation
from src.nil2 import CupProduct, Nil2Element, PointedSet, PresentedNil2, commutator
from src.sqgroup import (SquareGroup, SquareGroupMorphism, assoc_iso, make_znil, right_unit_iso,
                         smash_square_group, symmetry_iso, tensor, tensor_morphism, unit_iso, znil_integers,
                         znil_map, znil_tensor_iso)
from src.utils import AxiomError, InputError

E = PointedSet(["a", "b"])
F = PointedSet(["c"])
PROP_TENSOR = tensor(make_znil(E), make_znil(F))
PROP_TARGET = smash_square_group(E, F)
PROP_FORWARD, PROP_INVERSE = znil_tensor_iso(PROP_TENSOR, PROP_TARGET)


def words(basis: PointedSet, max_coeff: int = 2):
    n = basis.size
    coeffs = st.integers(-max_coeff, max_coeff)
    return st.tuples(st.lists(coeffs, min_size=n, max_size=n),
                     st.lists(coeffs, min_size=basis.npairs, max_size=basis.npairs)).map(
        lambda t: Nil2Element(basis, t[0], t[1]))


def test_znil_integers_structure():
    """Test P, H, T and Δ on ℤ_nil."""
    print("Testing ℤ_nil structure maps...")

    z = znil_integers()
    one = z.gen(0)
    assert z.check_axioms() == []
    assert z.H(one.scale(3)) == (3,)
    assert z.H(one.scale(-2)) == (3,)
    assert z.P((1,)) == z.basis.identity()
    assert z.T((1,)) == (-1,)
    assert z.delta(one) == (1,)

    print("✅ ℤ_nil has H(n) = C(n, 2), P = 0 and T = −1")


def test_znil_commutator_law():
    """Test P(a⊗b) = [b, a] and the goodness of Z_nil[E]."""
    print("Testing Z_nil[E]...")

    x = make_znil(E)
    a, b = x.gen(0), x.gen(1)
    assert x.check_axioms() == []
    assert x.e_equal(x.P((0, 1, 0, 0)), commutator(b, a))
    assert x.cross(a, b) == (0, 0, 1, 0)
    assert x.coker_P().invariants() == ([], 2)
    assert x.is_good()
    assert x.cross_preimage((0, 1, 0, 0)) == [(1, 1, 0)]

    print("✅ Z_nil[a, b] satisfies the axioms and is good")


def test_invalid_square_group_rejected():
    """Test that a P violating (P a | b)_H = 0 raises AxiomError."""
    print("Testing axiom violations...")

    basis = PointedSet(["x"])
    try:
        SquareGroup(PresentedNil2.free(basis), AbGroupPresentation(1), [basis.gen("x")], [(0,)], [[(1,)]])
    except AxiomError as e:
        assert "axiom (1)" in str(e)
        print("✅ Invalid square group rejected")
        return
    raise AssertionError("P = id with (x|x) = 1 should violate axiom (1)")


def test_wrong_number_of_p_values():
    """Test that a P value count mismatch raises InputError."""
    print("Testing P value count...")

    basis = PointedSet(["x"])
    try:
        SquareGroup(PresentedNil2.free(basis), AbGroupPresentation(1), [], [(0,)], [[(1,)]])
    except InputError:
        print("✅ P value count mismatch rejected")
        return
    raise AssertionError("missing P values should be rejected")


def test_square_group_that_is_not_good():
    """Test goodness on ℤ with X_ee = ℤ/2 and (x|x)_H = 1."""
    print("Testing a square group that is not good...")

    basis = PointedSet(["x"])
    x = SquareGroup(PresentedNil2.free(basis), AbGroupPresentation(1, [(2,)]), [basis.identity()],
                    [(0,)], [[(1,)]], name="Z/2-quad")
    assert x.check_axioms() == []
    assert not x.is_good()

    print("✅ ⊗²ℤ → ℤ/2 is not an isomorphism, so the group is not good")


def test_morphisms():
    """Test functoriality of Z_nil on pointed maps and rejection of incompatible maps."""
    print("Testing square group morphisms...")

    source = make_znil(E)
    middle = make_znil(PointedSet(["p", "q"]))
    target = make_znil(F)
    f = znil_map(source, middle, {"a": "q", "b": "p"})
    g = znil_map(middle, target, {"p": "c", "q": None})
    composite = znil_map(source, target, {"a": None, "b": "c"})
    assert g.compose(f).equals(composite)
    assert f.is_isomorphism()
    assert not composite.is_isomorphism()
    assert SquareGroupMorphism.identity(source).compose(SquareGroupMorphism.identity(source)).equals(
        SquareGroupMorphism.identity(source))

    z = znil_integers()
    try:
        SquareGroupMorphism(z, z, [z.gen(0)], [(2,)])
    except AxiomError:
        print("✅ Morphisms compose and incompatible maps are rejected")
        return
    raise AssertionError("1 ↦ 1 with 1⊗1 ↦ 2 breaks the cross effect")


def test_tensor_generators_and_axioms():
    """Test the size of ℤ_nil⊙Z_nil[a, b] and that it is a square group."""
    print("Testing tensor products...")

    t = tensor(znil_integers(), make_znil(E))
    assert t.ngens == 1 * 2 + 1 * 4
    assert t.check_axioms() == []
    assert t.expand_under(t.left.gen(0), t.right.gen(1)) == t.u(0, 1)

    print("✅ ℤ_nil⊙Z_nil[a, b] has 6 generators and satisfies the axioms")


def test_tensor_of_identities_is_identity():
    """Test id⊙id = id."""
    print("Testing tensor of morphisms...")

    x, y = make_znil(F), make_znil(E)
    t = tensor(x, y)
    ident = tensor_morphism(t, t, SquareGroupMorphism.identity(x), SquareGroupMorphism.identity(y))
    assert ident.equals(SquareGroupMorphism.identity(t))

    print("✅ id⊙id is the identity")


def test_unit_and_symmetry_isomorphisms():
    """Test the left and right unit isomorphisms and τ∘τ = id."""
    print("Testing unit and symmetry isomorphisms...")

    z, x = znil_integers(), make_znil(E)
    t = tensor(z, x)
    fwd, inv = unit_iso(t)
    assert fwd.is_isomorphism()
    assert inv.compose(fwd).equals(SquareGroupMorphism.identity(t))
    assert fwd.compose(inv).equals(SquareGroupMorphism.identity(x))

    fwd, inv = right_unit_iso(tensor(x, z), tensor(z, x))
    assert fwd.compose(inv).equals(SquareGroupMorphism.identity(x))

    y = make_znil(F)
    xy, yx = tensor(x, y), tensor(y, x)
    assert symmetry_iso(yx, xy).compose(symmetry_iso(xy, yx)).equals(SquareGroupMorphism.identity(xy))

    print("✅ Unit and symmetry isomorphisms are inverse where expected")


def test_associator():
    """Test (X⊙Y)⊙Z ≅ X⊙(Y⊙Z)."""
    print("Testing the associator...")

    x, y, z = znil_integers(), make_znil(PointedSet(["y"])), znil_integers()
    left, right = tensor(tensor(x, y), z), tensor(x, tensor(y, z))
    fwd, inv = assoc_iso(left, right)
    assert fwd.is_isomorphism()
    assert inv.compose(fwd).equals(SquareGroupMorphism.identity(left))

    print("✅ The associator is an isomorphism")


def test_znil_tensor_isomorphism():
    """Test Z_nil[E]⊙Z_nil[Ē] ≅ Z_nil[E∧Ē] with both round trips."""
    print("Testing Z_nil[E]⊙Z_nil[Ē] ≅ Z_nil[E∧Ē]...")

    assert PROP_FORWARD.is_isomorphism()
    assert PROP_INVERSE.compose(PROP_FORWARD).equals(SquareGroupMorphism.identity(PROP_TENSOR))
    assert PROP_FORWARD.compose(PROP_INVERSE).equals(SquareGroupMorphism.identity(PROP_TARGET))
    assert PROP_TARGET.basis.names == ("a.c", "b.c")

    print("✅ The comparison map is an isomorphism")


@settings(max_examples=30, deadline=None)
@given(words(E), words(F))
def test_under_product_matches_cup(x, y):
    """Test that x⊙̲y is sent to x⊏̲y."""
    cup = CupProduct(E, F)
    image = PROP_FORWARD.apply_e(PROP_TENSOR.expand_under(x, y))
    assert PROP_TARGET.e_equal(image, cup.underhash(x, y))


def run_all_tests():
    """Run all tests."""
    print("\n" + "="*60)
    print("Running Square Group Tests")
    print("="*60 + "\n")

    tests = [
        test_znil_integers_structure,
        test_znil_commutator_law,
        test_invalid_square_group_rejected,
        test_wrong_number_of_p_values,
        test_square_group_that_is_not_good,
        test_morphisms,
        test_tensor_generators_and_axioms,
        test_tensor_of_identities_is_identity,
        test_unit_and_symmetry_isomorphisms,
        test_associator,
        test_znil_tensor_isomorphism,
        test_under_product_matches_cup,
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
