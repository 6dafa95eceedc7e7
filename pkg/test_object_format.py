"""
Tests for the object file parser, builder and canonical printer
"""

import os
import sys

# Add the project root to the path
sys.path.insert(0, os.path.dirname(__file__))

from src.nil2 import Nil2Hom, PointedSet, commutator
from src.object_format import (ObjectFile, ObjectFileParser, builtin_sign_group, describe, format_linear, format_word,
                               load_objects, parse_linear, parse_word, print_object_file, square_group_section)
from src.qpm import QpmTrack, QuadraticPairModule
from src.signgroup import SignGroup
from src.sqgroup import SquareGroup, make_znil, tensor, znil_integers
from src.utils import InputError

SAMPLE = os.path.join(os.path.dirname(__file__), "objects.qp")
AB = PointedSet(["a", "b"])


def test_sample_file_loading():
    """Test that the sample object file parses and builds."""
    print("Testing sample object file loading...")

    parsed, built = load_objects(SAMPLE)

    assert len(parsed.sections) > 0, "Sample file should contain at least one section"
    assert parsed.names() == list(built)
    print(f"✅ Loaded {len(parsed.sections)} objects from the sample file")

    assert isinstance(built["E"], PointedSet)
    assert isinstance(built["collapse"], Nil2Hom)
    assert isinstance(built["X"], SquareGroup)
    assert isinstance(built["UZx"], QuadraticPairModule)
    assert isinstance(built["SS"], SignGroup)
    assert isinstance(built["alpha"], QpmTrack)

    print("✅ Object kinds validated")


def test_built_objects():
    """Test properties of the objects built from the sample file."""
    print("\nTesting built objects...")

    _, built = load_objects(SAMPLE)

    assert built["X"].check_axioms() == []
    assert built["X"].is_good()
    assert built["Z"].check_axioms() == []
    assert built["Z"].is_good()
    assert built["swap"].is_isomorphism()
    assert built["collapse"].apply(built["E"].gen("b")).is_identity()
    assert built["SS"].order == 8
    assert built["PhiSwap"].check_axioms() == []
    assert describe(built["X"])["good"] == "True"
    assert describe(built["S"])["order"] == "4"

    print("✅ Built objects satisfy their laws")


def test_word_syntax():
    """Test parsing and formatting of words."""
    print("\nTesting word syntax...")

    a, b = AB.gen("a"), AB.gen("b")
    assert parse_word("a + b", AB) == a + b
    assert parse_word("2a - [a,b]", AB) == a.scale(2) + (-commutator(a, b))
    assert parse_word("0", AB).is_identity()
    assert format_word(a.scale(2) + (-b)) == "2a - b"
    assert format_word(commutator(a, b)) == "[a,b]"

    one = PointedSet(["1"])
    assert parse_word("2*1", one) == one.gen("1", 2)
    assert format_word(one.gen("1", -3)) == "-3*1"

    level1 = PointedSet(["x", "P(x⊗x)"])
    assert parse_word("x - P(x⊗x)", level1) == level1.gen("x") + level1.gen("P(x⊗x)", -1)

    assert parse_linear("w1 - 2w2", ["w1", "w2"]) == (1, -2)
    assert format_linear((1, -2), ["w1", "w2"]) == "w1 - 2w2"

    print("✅ Words parse and format as expected")


def test_syntax_errors_have_locations():
    """Test that malformed input reports line and column."""
    print("\nTesting syntax errors...")

    try:
        parse_word("a + [b", AB, line=3, column=10)
    except InputError as e:
        assert e.line == 3
        assert e.column is not None and e.column > 10
    else:
        raise AssertionError("'a + [b' should not parse")

    for text, line in (("[squaregroup X]\nznil: a\nbogus: 1\n", 3),
                       ("[widget W]\n", 1),
                       ("[pointedset E]\nnames: a\n[pointedset E]\nnames: b\n", 3),
                       ("names: a\n", 1)):
        try:
            ObjectFileParser().parse(text)
        except InputError as e:
            assert e.line == line, (text, e.line)
            continue
        raise AssertionError(f"{text!r} should be rejected")

    print("✅ Syntax errors carry their location")


def test_semantic_errors_name_the_law():
    """Test that a square group violating an axiom is reported as an input error."""
    print("\nTesting semantic errors...")

    text = "[squaregroup B]\ngens: x\nee: w\nP: w -> x\ncross: x,x -> w\n"
    parser = ObjectFileParser()
    try:
        parser.build(parser.parse(text))
    except InputError as e:
        assert "axiom (1)" in str(e)
        print("✅ Semantic error names the violated axiom")
        return
    raise AssertionError("P = id with (x|x) = w violates axiom (1)")


def test_empty_file():
    """Test that an empty file has no objects."""
    print("\nTesting empty file...")

    obj = ObjectFileParser().parse("# nothing here\n\n")
    assert obj.sections == []
    assert print_object_file(obj) == ""

    print("✅ Empty file gives an empty object set")


def test_print_round_trip():
    """Test that printing the canonical form is stable."""
    print("\nTesting canonical printing...")

    parser = ObjectFileParser(SAMPLE)
    first = print_object_file(parser.load())
    second = print_object_file(ObjectFileParser().parse(first))
    assert first == second
    assert "[squaregroup X]\nznil: a, b" in first

    print("✅ parse∘print is the identity on canonical output")


def test_constructed_square_group_section():
    """Test that a printed tensor product builds back into a valid square group."""
    print("\nTesting printed constructions...")

    product = tensor(znil_integers(), make_znil(PointedSet(["c"])))
    text = print_object_file(ObjectFile([square_group_section("T", product)]))
    parser = ObjectFileParser()
    rebuilt = parser.build(parser.parse(text))["T"]
    assert rebuilt.ngens == product.ngens
    assert rebuilt.ee.ngens == product.ee.ngens
    assert rebuilt.check_axioms() == []
    assert rebuilt.basis.names[0] == "x1"

    print("✅ Printed constructions parse back")


def test_builtin_sign_groups_by_name():
    """Test lookup of the built-in sign groups."""
    print("\nTesting built-in sign group names...")

    assert builtin_sign_group("trivial").order == 2
    assert builtin_sign_group("V4+").order == 4

    try:
        builtin_sign_group("Z8")
    except InputError:
        print("✅ Unknown sign groups are rejected")
        return
    raise AssertionError("Z8 is not a built-in sign group")


def run_all_tests():
    """Run all tests."""
    print("\n" + "="*60)
    print("Running Object Format Tests")
    print("="*60 + "\n")

    tests = [
        test_sample_file_loading,
        test_built_objects,
        test_word_syntax,
        test_syntax_errors_have_locations,
        test_semantic_errors_name_the_law,
        test_empty_file,
        test_print_round_trip,
        test_constructed_square_group_section,
        test_builtin_sign_groups_by_name,
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
