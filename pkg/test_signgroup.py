"""
Tests for sign groups, twisted products, the crossed sign action and the
group-ring quadratic pair algebras.
"""

import os
import random
import sys

# Add the project root to the path
sys.path.insert(0, os.path.dirname(__file__))

from src.qpm import zbar_nil
from src.signgroup import (RightModule, SignGroup, action_from_module, check_crossed_action, describe_algebra,
                           group_ring, module_from_action, peiffer_defects, strict_monoidal_check,
                           strict_monoidal_morphism, twisted_product, unit_comparison)
from src.utils import AxiomError, InputError, SizeGuardError

CORPUS = [SignGroup.trivial(), SignGroup.cyclic4(True), SignGroup.cyclic4(False),
          SignGroup.klein(True), SignGroup.klein(False)]


def test_builtin_sign_groups():
    """Test orders, ω and ε of the built-in sign groups."""
    print("Testing built-in sign groups...")

    for S in CORPUS:
        assert S.check() == []
        assert S.order == 2 * S.g_order
        assert S.delta[S.omega] == S.g_identity

    z4 = SignGroup.cyclic4(True)
    t = z4.names.index("t")
    assert z4.mul(t, t) == z4.omega
    assert z4.eps_of(t) == -1
    assert SignGroup.cyclic4(False).eps_of(t) == 1

    print("✅ Built-in sign groups are valid")


def test_invalid_sign_group_rejected():
    """Test that ω outside the kernel of ∂ is rejected."""
    print("Testing sign group validation...")

    try:
        SignGroup(["1", "t"], [[0, 1], [1, 0]], 0, 1, [0, 1], ["1", "g"], [[0, 1], [1, 0]], [1, -1])
    except AxiomError as e:
        assert "kernel" in str(e)
        print("✅ Invalid sign group rejected")
        return
    raise AssertionError("ℤ/2 → ℤ/2 with trivial kernel is not a sign group")


def test_from_elements_closure():
    """Test generating ℤ/4 over ℤ/2 by closure."""
    print("Testing closure under multiplication...")

    S = SignGroup.from_elements([1], lambda a, b: (a + b) % 4, 0, 2,
                                project=lambda a: a % 2, sign=lambda a: -1 if a % 2 else 1, name="Z4 closure")
    assert S.order == 4
    assert S.g_order == 2
    assert S.names[S.omega] == "w"
    assert S.check() == []

    try:
        SignGroup.from_elements([1], lambda a, b: (a + b) % 4, 0, 2, project=lambda a: a % 2,
                                sign=lambda a: -1 if a % 2 else 1, limit=2)
    except SizeGuardError:
        print("✅ Closure builds the table and honors the limit")
        return
    raise AssertionError("closure beyond the limit should raise SizeGuardError")


def test_twisted_product_orders():
    """Test |G⋉ ×̃ L⋉| = 2|G||L| and a chained product of order 16."""
    print("Testing twisted products...")

    for G in CORPUS:
        for L in CORPUS:
            tp = twisted_product(G, L)
            assert tp.group.order == 2 * G.g_order * L.g_order
            assert tp.check_relations() == []

    first = twisted_product(CORPUS[1], CORPUS[3]).group
    assert first.order == 8
    assert twisted_product(first, CORPUS[2]).group.order == 16

    print("✅ Twisted products have the expected orders")


def test_odd_elements_anticommute_in_twisted_product():
    """Test t̄s̄ = s̄t̄ω for odd t and s."""
    print("Testing the twisted commutation rule...")

    G, L = SignGroup.cyclic4(True), SignGroup.cyclic4(True)
    tp = twisted_product(G, L)
    K = tp.group
    t = G.names.index("t")
    ts = K.mul(tp.i_g[t], tp.i_l[t])
    st = K.mul(tp.i_l[t], tp.i_g[t])
    assert ts == K.mul(st, K.omega)

    print("✅ Odd elements anticommute")


def test_crossed_action_and_peiffer_defects():
    """Test the crossed action laws and where the Peiffer identity fails."""
    print("Testing the crossed sign action...")

    for S in CORPUS:
        assert check_crossed_action(S) == []
        defects = peiffer_defects(S)
        assert all(S.eps_of(g) == -1 and S.eps_of(h) == -1 for g, h in defects)

    assert peiffer_defects(SignGroup.trivial()) == []
    assert peiffer_defects(SignGroup.cyclic4(False)) == []
    assert peiffer_defects(SignGroup.cyclic4(True))

    print("✅ Peiffer defects occur only on pairs of odd elements")


def test_group_ring_of_trivial_sign_group():
    """Test A(1⋉) ≅ Z̄_nil and its monoid laws."""
    print("Testing A(1⋉)...")

    A = group_ring(SignGroup.trivial())
    assert A.check_monoid() == []
    assert A.defining_relations_hold() == []
    assert A.closure_rounds >= 1
    assert unit_comparison(A, zbar_nil()).is_isomorphism()

    summary = describe_algebra(A)
    assert summary["order"] == 2
    assert summary["generators_0"] == 1

    print("✅ A(1⋉) is the unit Z̄_nil")


def test_unit_comparison_needs_trivial_group():
    """Test that the unit comparison rejects nontrivial sign groups."""
    print("Testing unit comparison input...")

    try:
        unit_comparison(group_ring(SignGroup.cyclic4(True)), zbar_nil())
    except InputError:
        print("✅ Nontrivial sign group rejected")
        return
    raise AssertionError("unit comparison must need 1⋉")


def test_group_ring_monoid_laws():
    """Test A(ℤ/4) with the sign character is a monoid."""
    print("Testing A(Z4-)...")

    A = group_ring(SignGroup.cyclic4(True))
    assert A.check_monoid() == []
    assert A.defining_relations_hold() == []

    print("✅ A(Z4-) satisfies the monoid laws")


def test_module_action_round_trip():
    """Test right modules and sign actions determine each other."""
    print("Testing modules and actions...")

    rng = random.Random(2)
    for S in (SignGroup.trivial(), SignGroup.cyclic4(True)):
        A = group_ring(S)
        regular = RightModule.regular(A)
        assert regular.check() == []
        action = action_from_module(regular)
        module = module_from_action(action, A)
        assert module.equals(regular)
        assert action_from_module(module).equals(action)
        assert action.sample_laws(rng) == []

    print("✅ Module ↔ action round trips are the identity")


def test_strict_monoidal_comparison():
    """Test A(G⋉)⊙A(L⋉) ≅ A(G⋉ ×̃ L⋉) and the order limit."""
    print("Testing the strict monoidal comparison...")

    assert strict_monoidal_check(SignGroup.trivial(), SignGroup.cyclic4(True))

    try:
        strict_monoidal_morphism(SignGroup.cyclic4(True), SignGroup.klein(True), limit=4)
    except SizeGuardError:
        print("✅ Comparison is an isomorphism and the limit is enforced")
        return
    raise AssertionError("order 8 exceeds the limit 4")


def run_all_tests():
    """Run all tests."""
    print("\n" + "="*60)
    print("Running Sign Group Tests")
    print("="*60 + "\n")

    tests = [
        test_builtin_sign_groups,
        test_invalid_sign_group_rejected,
        test_from_elements_closure,
        test_twisted_product_orders,
        test_odd_elements_anticommute_in_twisted_product,
        test_crossed_action_and_peiffer_defects,
        test_group_ring_of_trivial_sign_group,
        test_unit_comparison_needs_trivial_group,
        test_group_ring_monoid_laws,
        test_module_action_round_trip,
        test_strict_monoidal_comparison,
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
