"""
Tests for the exact Clifford algebra, the pin and Õ(2) groups, suspension,
shuffle lifts and the exterior-track replays.
"""

import os
import sys

from hypothesis import given, settings, strategies as st
from sympy import QQ

# Add the project root to the path
sys.path.insert(0, os.path.dirname(__file__))

from src.clifford import (ALEPH, HALF_SQRT2, HOPF_LOOP, IDENTITY_TRACK, SQRT2, CliffordElement, OTilde2Element,
                          Sqrt2Rational, block_diag_one, check_identities, cliff_mul, evaluate_expression,
                          exterior_tracks, identity_matrix, matmul, matrix_to_sympy, permutation_matrix,
                          q_of_otilde2, q_of_pin, reflection_matrix, shuffle_lift, sin_cos_pi, suspend_otilde2,
                          suspend_pin, sym_track_group, unit_difference, verify_lemma_K, verify_lemma_L)
from src.utils import InputError, SizeGuardError

elements_c3 = st.lists(st.integers(min_value=-3, max_value=3), min_size=8, max_size=8).map(
    lambda cs: CliffordElement(3, dict(enumerate(cs))))


def test_quadratic_field_arithmetic():
    """Test exact arithmetic in ℚ(√2)."""
    print("Testing ℚ(√2)...")

    assert SQRT2 * SQRT2 == 2
    assert Sqrt2Rational(1, 1).inverse() == Sqrt2Rational(-1, 1)
    assert HALF_SQRT2 * 2 == SQRT2
    assert Sqrt2Rational("3/4") - QQ(3, 4) == 0
    assert sin_cos_pi(QQ(1, 4)) == (HALF_SQRT2, HALF_SQRT2)
    assert sin_cos_pi(1) == (Sqrt2Rational(0), Sqrt2Rational(-1))

    assert repr(SQRT2) == "√2"
    assert repr(-SQRT2) == "-√2"
    assert repr(Sqrt2Rational(1, -1)) == "1-√2"
    assert repr(Sqrt2Rational(0, 3)) == "3√2"
    assert repr(evaluate_expression("sqrt(2)*e1", n=1)) == "(√2)e1"

    try:
        sin_cos_pi("1/3")
    except InputError:
        print("✅ ℚ(√2) arithmetic is exact")
        return
    raise AssertionError("π/3 has no value over ℚ(√2)")


def test_generator_relations():
    """Test e_i² = 1 and e_ie_j = −e_je_i."""
    print("Testing Clifford relations...")

    e1, e2 = CliffordElement.e(3, 1), CliffordElement.e(3, 2)
    one = CliffordElement.scalar(3)
    assert cliff_mul(e1, e1) == one
    assert cliff_mul(e1, e2) == -cliff_mul(e2, e1)
    assert (e1 * e2).reverse() == e2 * e1
    assert (e1 * e2) ** 2 == -one
    assert repr(e1 * e2) == "e1e2"

    print("✅ Generators satisfy the positive Clifford relations")


@settings(max_examples=40, deadline=None)
@given(elements_c3, elements_c3, elements_c3)
def test_product_is_associative(u, v, w):
    """Test associativity and distributivity in C₊(3)."""
    assert (u * v) * w == u * (v * w)
    assert u * (v + w) == u * v + u * w


def test_pin_elements_and_reflections():
    """Test q on a unit vector is its reflection."""
    print("Testing the pin group...")

    u = unit_difference(3, 2, 1)
    assert u.is_pin()
    assert u.is_unit_vector()
    q = q_of_pin(u)
    assert q == reflection_matrix([-HALF_SQRT2, HALF_SQRT2, 0])
    assert q == permutation_matrix([1, 0, 2])
    assert matmul(q, q) == identity_matrix(3)
    assert u * u.inverse() == CliffordElement.scalar(3)

    try:
        q_of_pin(CliffordElement.vector(3, [1, 1, 0]))
    except InputError:
        print("✅ q sends unit vectors to reflections and rejects non-pin elements")
        return
    raise AssertionError("e1 + e2 is not a pin element")


def test_otilde2_group():
    """Test the Õ(2) product, q and the Hopf invariant."""
    print("Testing Õ(2)...")

    assert ALEPH * ALEPH.inverse() == OTilde2Element(1, 0)
    assert IDENTITY_TRACK * ALEPH == OTilde2Element(-1, QQ(1, 4))
    for a, b in ((ALEPH, IDENTITY_TRACK), (IDENTITY_TRACK, ALEPH), (ALEPH, ALEPH)):
        assert matmul(a.q(), b.q()) == (a * b).q()
    assert q_of_otilde2(1, -1) == identity_matrix(2)
    assert HOPF_LOOP.hopf() == 1
    assert ALEPH.hopf() is None

    sharp, under = exterior_tracks()
    assert sharp == OTilde2Element(1, QQ(-1, 2))
    assert under == OTilde2Element(1, QQ(1, 2))

    print("✅ Õ(2) behaves as a group over O(2)")


def test_suspension():
    """Test Σ on Õ(2) and on pin elements."""
    print("Testing suspension...")

    assert suspend_otilde2(1, 0) == CliffordElement.scalar(3)
    assert suspend_otilde2(-1, 0) == CliffordElement.e(3, 3)
    assert suspend_otilde2(1, QQ(-1, 2)) == CliffordElement.monomial(3, [2, 3])
    assert suspend_pin(CliffordElement.e(1, 1)) == CliffordElement.e(2, 2)

    u = unit_difference(3, 2, 1)
    assert q_of_pin(suspend_pin(u)) == block_diag_one(q_of_pin(u))

    print("✅ Suspension shifts generators and commutes with q")


def test_shuffle_lifts():
    """Test q(τ̂_{n,m}) is the shuffle and its determinant is (−1)^{nm}."""
    print("Testing shuffle lifts...")

    assert shuffle_lift(1, 1) == OTilde2Element(-1, QQ(-1, 4))
    assert matrix_to_sympy(q_of_pin(shuffle_lift(1, 2))).det() == 1
    assert matrix_to_sympy(q_of_pin(shuffle_lift(1, 3))).det() == -1
    assert matrix_to_sympy(q_of_pin(shuffle_lift(2, 2))).det() == 1

    try:
        shuffle_lift(0, 2)
    except InputError:
        print("✅ Shuffle lifts cover the shuffle permutations")
        return
    raise AssertionError("τ̂_{0,2} should be rejected")


def test_lemma_K_replay():
    """Test every step of the K(ν,ν) replay."""
    print("Testing the K(ν,ν) replay...")

    steps = verify_lemma_K()
    failed = [s["name"] for s in steps if not s["passed"]]
    assert not failed, failed

    print(f"✅ All {len(steps)} steps of the K replay pass")


def test_lemma_L_replay():
    """Test the L_{n,m}(ν,ν) replay for small n, m."""
    print("Testing the L(ν,ν) replay...")

    for n, m in ((1, 1), (1, 2), (2, 1), (2, 2), (1, 3), (3, 2)):
        steps = verify_lemma_L(n, m)
        failed = [s["name"] for s in steps if not s["passed"]]
        assert not failed, (n, m, failed)

    print("✅ τ̂(ℵ^#)⁻ = (ℵ^⊏̲)⁻τ̂ for all tested n, m")


def test_difference_identities():
    """Test the identities satisfied by e_j − e_i."""
    print("Testing e_j − e_i identities...")

    assert all(s["passed"] for s in check_identities(5))
    assert len(check_identities(5)) == 10

    print("✅ Identities hold for all i < j ≤ 5")


def test_sym_track_group():
    """Test |Sym⋉(3)| = 12 and the lower bound on n."""
    print("Testing Sym⋉(n)...")

    S = sym_track_group(3)
    assert S.order == 12
    assert S.g_order == 6
    assert S.check() == []
    assert S.names[S.omega] == "w"

    S4 = sym_track_group(4)
    assert S4.order == 48
    assert S4.g_order == 24

    try:
        sym_track_group(2)
    except SizeGuardError:
        print("✅ Sym⋉(3) is a sign group of order 12")
        return
    raise AssertionError("Sym⋉(2) is outside the supported range")


def test_expression_evaluation():
    """Test parsing expressions in e1, e2, … and sqrt(2)."""
    print("Testing expression evaluation...")

    assert evaluate_expression("e1*e2 + e2*e1") == CliffordElement(2)
    assert evaluate_expression("sqrt(2)*e1*sqrt(2)*e1") == CliffordElement.scalar(1, 2)
    assert evaluate_expression("(e1 - e2)**2", n=3) == CliffordElement.scalar(3, 2)
    assert evaluate_expression("1/2*e1") == CliffordElement.e(1, 1).scale(QQ(1, 2))

    for bad, dim in (("e3", 2), ("e1 +", None)):
        try:
            evaluate_expression(bad, n=dim)
        except InputError:
            continue
        raise AssertionError(f"{bad!r} should be rejected")

    try:
        CliffordElement(13)
    except SizeGuardError:
        print("✅ Expressions evaluate exactly and bad input is rejected")
        return
    raise AssertionError("C₊(13) exceeds the dimension guard")


def run_all_tests():
    """Run all tests."""
    print("\n" + "="*60)
    print("Running Clifford Algebra Tests")
    print("="*60 + "\n")

    tests = [
        test_quadratic_field_arithmetic,
        test_generator_relations,
        test_product_is_associative,
        test_pin_elements_and_reflections,
        test_otilde2_group,
        test_suspension,
        test_shuffle_lifts,
        test_lemma_K_replay,
        test_lemma_L_replay,
        test_difference_identities,
        test_sym_track_group,
        test_expression_evaluation,
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
