"""
Tests for Hg functionals: the laws, the closed forms K and L, the
uniqueness principle and the values at (ν, ν).
"""

import os
import sys

# Add the project root to the path
sys.path.insert(0, os.path.dirname(__file__))

from src.hgroup import (K_functional, L_functional, broken_functional, check_hg_axioms, check_uniqueness_principle,
                        epsilon, functional_by_name, mu_map, nu_map, pointed_deviation_check, pointed_law_deviation,
                        seed_values)
from src.utils import InputError


def _failed(checks):
    return [c["name"] for c in checks if not c["passed"]]


def test_epsilon():
    """Test ε(n, m) = 1 exactly when both are negative."""
    print("Testing ε...")

    assert epsilon(-1, -1) == 1
    assert epsilon(-2, -3) == 1
    assert epsilon(-1, 1) == 0
    assert epsilon(1, -1) == 0
    assert epsilon(2, 2) == 0

    print("✅ ε is correct")


def test_nu_and_mu_maps():
    """Test ν: 1 ↦ −1 and μ_n: 1 ↦ ±(c_1 + ⋯ + c_|n|)."""
    print("Testing ν and μ_n...")

    assert nu_map().images[0].linear == (-1,)
    assert mu_map(3).images[0].linear == (1, 1, 1)
    assert mu_map(-2).images[0].linear == (-1, -1)

    try:
        mu_map(0)
    except InputError:
        print("✅ ν and μ_n have the expected images")
        return
    raise AssertionError("μ_0 should be rejected")


def test_K_satisfies_laws():
    """Test K on sampled pairs of morphisms."""
    print("Testing the Hg laws for K...")

    checks = check_hg_axioms(K_functional(), samples=15, seed=1)
    assert len(checks) == 6
    assert not _failed(checks), _failed(checks)

    print("✅ K satisfies all six laws")


def test_L_satisfies_laws():
    """Test L_{n,m}: all laws for nm even, laws (3)–(6) for nm odd."""
    print("Testing the Hg laws for L...")

    assert not _failed(check_hg_axioms(L_functional(2, 2), samples=8, seed=2))
    assert not _failed(check_hg_axioms(L_functional(1, 2), samples=8, seed=3))
    assert not _failed(check_hg_axioms(L_functional(1, 1), samples=8, seed=4, laws=(3, 4, 5, 6)))

    print("✅ L satisfies the expected laws")


def test_broken_functional_caught():
    """Test that scaling K by |A| violates additivity over wedges."""
    print("Testing a broken functional...")

    checks = check_hg_axioms(broken_functional(), samples=20, seed=0, laws=(3,))
    assert not checks[0]["passed"]
    assert "counterexample.f" in checks[0]["witness"]

    print("✅ Law (3) catches the broken functional")


def test_uniqueness_principle():
    """Test seed determination and the τ̄, q triangle."""
    print("Testing the uniqueness principle...")

    checks = check_uniqueness_principle(samples=10, seed=5)
    assert not _failed(checks), _failed(checks)

    print("✅ Additive functionals are determined by their seed")


def test_seed_values():
    """Test K(ν,ν) = 1 and L_{1,1}(ν,ν) = 0 in ℤ/2."""
    print("Testing values at (ν, ν)...")

    assert seed_values() == {"K": 1, "L": 0}

    print("✅ K and L differ at (ν, ν)")


def test_pointed_law_deviation():
    """Test L_{n,m}(id, ν)(1⊗1) ≠ 0 exactly when nm is odd."""
    print("Testing the pointed law deviation of L...")

    for n in range(1, 4):
        for m in range(1, 4):
            deviation = pointed_law_deviation(n, m)
            assert (deviation is not None) == bool((n * m) % 2), (n, m, deviation)

    print("✅ L fails the pointed laws exactly for nm odd")


def test_pointed_deviation_check():
    """Test that the expected failure of laws (1) and (2) for nm odd is reported as its own check."""
    print("Testing the pointed deviation check...")

    odd = pointed_deviation_check(1, 1, samples=10, seed=0)
    assert odd["passed"]
    assert odd["name"] == "L_1,1 deviates from laws (1) and (2) since nm is odd"
    assert odd["witness"]["value at (id, ν)"] != "None"
    assert all(isinstance(v, str) for v in odd["witness"].values())

    even = pointed_deviation_check(1, 2, samples=5, seed=0)
    assert not even["passed"]
    assert even["witness"]["sampled failures"] == "none"

    print("✅ The pointed deviation of L is reported, not dropped")


def test_functional_by_name():
    """Test lookup of functionals by name."""
    print("Testing functional lookup...")

    assert functional_by_name("K").name == "K"
    assert functional_by_name("L", 2, 3).name == "L_2,3"
    assert functional_by_name("additive").seed == 1

    for bad in (lambda: functional_by_name("M"), lambda: L_functional(0, 1)(nu_map(), nu_map(), 0, 0)):
        try:
            bad()
        except InputError:
            continue
        raise AssertionError("invalid functional input should be rejected")

    print("✅ Functionals are found by name and bad names are rejected")


def run_all_tests():
    """Run all tests."""
    print("\n" + "="*60)
    print("Running Hg Functional Tests")
    print("="*60 + "\n")

    tests = [
        test_epsilon,
        test_nu_and_mu_maps,
        test_K_satisfies_laws,
        test_L_satisfies_laws,
        test_broken_functional_caught,
        test_uniqueness_principle,
        test_seed_values,
        test_pointed_law_deviation,
        test_pointed_deviation_check,
        test_functional_by_name,
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
