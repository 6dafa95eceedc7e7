"""
Tests for quadratic pair modules: the reflection Φ, the unit Z̄_nil, the
interval, the tensor product and the track calculus.
"""

import os
import random
import sys

# Add the project root to the path
sys.path.insert(0, os.path.dirname(__file__))

from src.nil2 import PointedSet
from src.qpm import (QpmMorphism, QpmTensor, QpmTrack, admissible_track_lattice, cylinder, interval, phi,
                     qpm_right_unit_iso, qpm_symmetry, qpm_unit_iso, random_track, tau_commutation_holds,
                     track_hcomp_left, track_hcomp_right, track_of_cylinder, track_tensor, track_vcomp,
                     trivial_track, zbar_nil)
from src.sqgroup import SquareGroupMorphism, znil_integers
from src.utils import AxiomError, CompositionError


def test_unit_object():
    """Test Z̄_nil = Φ(0→ℤ_nil): 1-level ℤ/2, ∂ = 0, h0 = ℤ, h1 = ℤ/2."""
    print("Testing Z̄_nil...")

    unit = zbar_nil()
    assert unit.check_axioms() == []
    assert unit.c1.as_abelian_group().order() == 2
    assert unit.c0.e.is_identity(unit.boundary(unit.c1.basis.gen(0)))
    assert unit.h0().invariants() == ([], 1)
    assert unit.h1().order() == 2
    assert unit.is_0good()

    print("✅ Z̄_nil has the expected homotopy groups")


def test_phi_of_identity():
    """Test Φ(id: ℤ_nil→ℤ_nil) with its unit map."""
    print("Testing Φ of the identity...")

    z = znil_integers()
    result = phi(SquareGroupMorphism.identity(z))
    q = result.qpm
    assert q.check_axioms() == []
    assert q.c0 is z
    assert q.c1.as_abelian_group().invariants() == ([], 1)
    assert q.h0().order() == 1
    assert q.h1().order() == 1
    assert result.unit_e.is_isomorphism()

    print("✅ Φ(id) has a free 1-level mapped isomorphically by ∂")


def test_action_is_conjugation_on_boundaries():
    """Test ∂(x^y) = −y + ∂x + y in Z̄_nil[x, y]."""
    print("Testing the action x^y = x + P(∂x|y)_H...")

    c = zbar_nil(PointedSet(["x", "y"]))
    for z in c.c1.generators():
        for y in c.c0.e.generators():
            assert c.c0.e.equal(c.boundary(c.act(z, y)), -y + c.boundary(z) + y)

    print("✅ The action lifts conjugation")


def test_interval():
    """Test ∂ī = −i0 + i1 and p∘i0 = p∘i1 = id."""
    print("Testing the interval...")

    I = interval()
    q = I.qpm
    assert q.check_axioms() == []
    i0, i1 = q.c0.gen(0), q.c0.gen(1)
    assert q.c0.e.equal(q.boundary(q.c1.basis.gen(0)), -i0 + i1)
    assert q.h0().invariants() == ([], 1)
    assert q.is_0good()
    ident = QpmMorphism.identity(I.zbar)
    assert I.p.compose(I.i0).equals(ident)
    assert I.p.compose(I.i1).equals(ident)
    assert I.zbar.c1.is_identity(I.p.f1.apply(q.c1.basis.gen(0)))

    print("✅ The interval projects back onto Z̄_nil")


def test_tensor_and_unit_laws():
    """Test axioms of Z̄_nil⊙Z̄_nil[x] and the unit isomorphisms."""
    print("Testing qpm tensor products...")

    unit, c = zbar_nil(), zbar_nil(PointedSet(["x"]))
    t = QpmTensor(unit, c)
    assert t.check_axioms() == []
    assert t.ee.ngens == unit.ee.ngens * c.ee.ngens

    fwd, inv = qpm_unit_iso(t)
    assert fwd.is_isomorphism()
    assert inv.compose(fwd).equals(QpmMorphism.identity(t))

    fwd, inv = qpm_right_unit_iso(QpmTensor(c, unit), QpmTensor(unit, c))
    assert fwd.compose(inv).equals(QpmMorphism.identity(c))

    cd, dc = QpmTensor(c, unit), QpmTensor(unit, c)
    assert qpm_symmetry(dc, cd).compose(qpm_symmetry(cd, dc)).equals(QpmMorphism.identity(cd))

    print("✅ Z̄_nil is a unit and τ⊙ is an involution")


def test_morphism_composition_mismatch():
    """Test that composing unrelated morphisms raises CompositionError."""
    print("Testing composition mismatch...")

    a, b = zbar_nil(), zbar_nil(PointedSet(["x"]))
    try:
        QpmMorphism.identity(a).compose(QpmMorphism.identity(b))
    except CompositionError:
        print("✅ Mismatched composition rejected")
        return
    raise AssertionError("composition across different objects should fail")


def test_invalid_track_rejected():
    """Test that g_0 = f_0 + ∂α is enforced."""
    print("Testing track validation...")

    c = zbar_nil(PointedSet(["x", "y"]))
    f = QpmMorphism.identity(c)
    bad = c.c1.basis.gen(1)  # P(x⊗y), with ∂ = [y, x] ≠ 0
    try:
        QpmTrack(f, f, [bad, c.c1.basis.identity()])
    except AxiomError:
        print("✅ Invalid track rejected")
        return
    raise AssertionError("a track with ∂α ≠ 0 cannot go from f to f")


def test_vertical_composition_laws():
    """Test associativity, units and interchange of tracks."""
    print("Testing track composition...")

    rng = random.Random(11)
    for c in (zbar_nil(), zbar_nil(PointedSet(["x"]))):
        f = QpmMorphism.identity(c)
        a1 = random_track(f, rng)
        a2 = random_track(a1.target, rng)
        a3 = random_track(a2.target, rng)
        assert track_vcomp(a3, track_vcomp(a2, a1)).equals(track_vcomp(track_vcomp(a3, a2), a1))
        assert track_vcomp(a1, trivial_track(f)).equals(a1)
        assert track_vcomp(trivial_track(a1.target), a1).equals(a1)

        beta = random_track(f, rng)
        g, h = a1.target, beta.target
        lhs = track_vcomp(track_hcomp_right(beta, g), track_hcomp_left(f, a1))
        rhs = track_vcomp(track_hcomp_left(h, a1), track_hcomp_right(beta, f))
        assert lhs.equals(rhs)

    print("✅ Tracks form a groupoid enriched category")


def test_cylinder_round_trip():
    """Test track → cylinder → track and back."""
    print("Testing the cylinder correspondence...")

    rng = random.Random(5)
    I = interval()
    for c in (zbar_nil(), zbar_nil(PointedSet(["x"]))):
        ic = QpmTensor(I.qpm, c)
        for _ in range(3):
            alpha = random_track(QpmMorphism.identity(c), rng)
            abar = cylinder(alpha, ic, I)
            back = track_of_cylinder(abar, ic, I)
            assert back.equals(alpha)
            assert cylinder(back, ic, I).equals(abar)

    print("✅ Tracks and cylinders correspond")


def test_track_tensor_and_symmetry():
    """Test both expansions of α⊙β and τ⊙(α⊙β) = (β⊙α)τ⊙."""
    print("Testing tensor products of tracks...")

    rng = random.Random(3)
    c, x = zbar_nil(), zbar_nil(PointedSet(["x"]))
    src, swapped = QpmTensor(c, x), QpmTensor(x, c)
    for _ in range(3):
        alpha = random_track(QpmMorphism.identity(c), rng)
        beta = random_track(QpmMorphism.identity(x), rng)
        left = track_tensor(alpha, beta, src, src, "left")
        right = track_tensor(alpha, beta, src, src, "right")
        assert left.equals(right)
        assert tau_commutation_holds(alpha, beta, src, src, swapped, swapped)

    print("✅ Track tensor products are symmetric")


def test_tracks_on_two_generators():
    """Test that tracks on Z̄_nil[x,y] are drawn without rejection from the admissible lattice."""
    print("Testing tracks on Z̄_nil[x,y]...")

    c = zbar_nil(PointedSet(["x", "y"]))
    f = QpmMorphism.identity(c)
    assert admissible_track_lattice(f), "Z̄_nil[x,y] has nontrivial tracks out of the identity"

    rng = random.Random(7)
    tracks = [random_track(f, rng, attempts=1) for _ in range(20)]
    assert any(not t.equals(trivial_track(f)) for t in tracks)

    I = interval()
    ic = QpmTensor(I.qpm, c)
    for alpha in tracks[:3]:
        abar = cylinder(alpha, ic, I)
        assert track_of_cylinder(abar, ic, I).equals(alpha)

    print("✅ Every sampled track on Z̄_nil[x,y] is valid")


def run_all_tests():
    """Run all tests."""
    print("\n" + "="*60)
    print("Running Quadratic Pair Module Tests")
    print("="*60 + "\n")

    tests = [
        test_unit_object,
        test_phi_of_identity,
        test_action_is_conjugation_on_boundaries,
        test_interval,
        test_tensor_and_unit_laws,
        test_morphism_composition_mismatch,
        test_invalid_track_rejected,
        test_vertical_composition_laws,
        test_cylinder_round_trip,
        test_track_tensor_and_symmetry,
        test_tracks_on_two_generators,
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
