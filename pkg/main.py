"""
Main entry point for the quadpair command line.
"""

import os
import sys
import logging
import argparse
from typing import Any, Dict, List, Optional

from dotenv import load_dotenv

from src.abelian import IntMatrix, smith_normal_form
from src.clifford import evaluate_expression
from src.hgroup import check_hg_axioms, functional_by_name, pointed_deviation_check
from src.nil2 import Nil2Hom, PointedSet
from src.object_format import (ObjectFile, ObjectFileParser, builtin_sign_group, describe, format_word,
                               load_objects, parse_word, print_object_file, square_group_section)
from src.qpm import QuadraticPairModule, QpmTensor, phi
from src.signgroup import SignGroup, describe_algebra, group_ring, twisted_product
from src.sqgroup import SquareGroup, SquareGroupMorphism, tensor
from src.verification import VerificationRunner, report_from_steps
from src.utils import (QuadPairError, InputError, SizeGuardError, CompositionError, setup_logging,
                       load_config, save_report, format_report_for_display)

EXIT_OK, EXIT_FAILED, EXIT_INPUT = 0, 1, 2

GENERAL_DEFAULTS = {
    "log_file": "quadpair.log",
    "log_level": "INFO",
    "seed": 7,
    "samples": 200,
    "max_total": 8,
    "report_dir": "reports",
}


def _common_options(default: Any) -> argparse.ArgumentParser:
    """Flags accepted both before and after the subcommand."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--log-level", type=str, default=default, help="Override general.log_level")
    common.add_argument("--seed", type=int, default=default, help="Seed for randomized checks")
    common.add_argument("--samples", type=int, default=default, help="Sample count for randomized checks")
    common.add_argument("--max-total", type=int, default=default, help="Largest n+m for the Clifford replays")
    common.add_argument("--json", type=str, default=default, help="Write the JSON report to this path")
    common.add_argument("--out", type=str, default=default, help="Write the text output to this path")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quadpair", parents=[_common_options(None)],
                                     description="Square groups, quadratic pair modules and their verification suites")
    parser.add_argument("--config", type=str, default="config.json",
                        help="Path to configuration file (default: config.json)")
    # subcommand copies must not overwrite values given before the subcommand
    common = [_common_options(argparse.SUPPRESS)]

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", parents=common, help="Parse and build an object file")
    p.add_argument("file")

    p = sub.add_parser("print", parents=common, help="Print an object file in canonical form")
    p.add_argument("file")

    p = sub.add_parser("tensor", parents=common, help="Tensor product of two square groups or qpms")
    p.add_argument("file")
    p.add_argument("left")
    p.add_argument("right")

    p = sub.add_parser("phi", parents=common, help="Φ of a square group morphism")
    p.add_argument("file")
    p.add_argument("morphism")

    p = sub.add_parser("groupring", parents=common, help="The group ring A(G⋉) of a sign group")
    p.add_argument("sign_group", help="trivial, Z4-, Z4+, V4-, V4+ or an object name with --file")
    p.add_argument("--file", type=str)

    p = sub.add_parser("twisted", parents=common, help="Twisted product of two sign groups")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--file", type=str)

    p = sub.add_parser("eval", parents=common, help="Normal form of a word in an object, optionally under a morphism")
    p.add_argument("file")
    p.add_argument("object", help="pointed set, square group or qpm (0-level) the word lives in")
    p.add_argument("word")
    p.add_argument("--apply", type=str, help="Morphism to apply to the word")

    p = sub.add_parser("verify", parents=common, help="Run a named verification suite")
    p.add_argument("suite")

    p = sub.add_parser("snf", parents=common, help="Smith normal form of an integer matrix given as '1 2; 3 4'")
    p.add_argument("matrix")

    p = sub.add_parser("clifford", parents=common, help="Pin group replays and the element calculator")
    csub = p.add_subparsers(dest="clifford_command", required=True)
    csub.add_parser("verify-K", parents=common)
    csub.add_parser("verify-L", parents=common)
    ce = csub.add_parser("eval", parents=common)
    ce.add_argument("expression")
    ce.add_argument("--dim", type=int)

    p = sub.add_parser("hg", parents=common, help="Hg-functionals")
    hsub = p.add_subparsers(dest="hg_command", required=True)
    hc = hsub.add_parser("check", parents=common)
    hc.add_argument("--functional", type=str, default="K", help="K, L, additive or broken")
    hc.add_argument("--n", type=int, default=1)
    hc.add_argument("--m", type=int, default=1)
    return parser


def _settings(args: argparse.Namespace, config: Dict[str, Any]) -> Dict[str, Any]:
    general = {**GENERAL_DEFAULTS, **config.get("general", {})}
    for key in ("seed", "samples", "max_total", "log_level"):
        value = getattr(args, key)
        if value is not None:
            general[key] = value
    return general


def _emit(text: str, out: Optional[str]):
    print(text)
    if out:
        with open(out, "a", encoding="utf-8") as f:
            f.write(text + "\n")


def _lookup(built: Dict[str, Any], name: str) -> Any:
    if name not in built:
        raise InputError(f"unknown object {name!r}; defined: {', '.join(built) or 'none'}")
    return built[name]


def _summary(title: str, rows: Dict[str, Any]) -> str:
    lines = ["=" * 80, title, "=" * 80]
    lines += [f"  {k}: {v}" for k, v in rows.items()]
    return "\n".join(lines)


def cmd_parse(args) -> int:
    _, built = load_objects(args.file)
    for name, obj in built.items():
        info = describe(obj)
        _emit(f"✅ {name}: " + ", ".join(f"{k}={v}" for k, v in info.items()), args.out)
    return EXIT_OK


def cmd_print(args) -> int:
    load_objects(args.file)
    _emit(print_object_file(ObjectFileParser(args.file).load()).rstrip("\n"), args.out)
    return EXIT_OK


def cmd_tensor(args) -> int:
    _, built = load_objects(args.file)
    left, right = _lookup(built, args.left), _lookup(built, args.right)
    name = f"{args.left}_{args.right}"
    if isinstance(left, SquareGroup) and isinstance(right, SquareGroup):
        product = tensor(left, right)
        _emit(print_object_file(ObjectFile([square_group_section(name, product)])).rstrip("\n"), args.out)
        _emit(_summary(f"{args.left}⊙{args.right}", describe(product)), args.out)
        return EXIT_OK
    if isinstance(left, QuadraticPairModule) and isinstance(right, QuadraticPairModule):
        product = QpmTensor(left, right, name=name)
        _emit(_summary(f"{args.left}⊙{args.right}", describe(product)), args.out)
        return EXIT_OK
    raise InputError("tensor needs two square groups or two quadratic pair modules")


def cmd_phi(args) -> int:
    _, built = load_objects(args.file)
    f = _lookup(built, args.morphism)
    if not isinstance(f, SquareGroupMorphism):
        raise InputError(f"{args.morphism!r} is not a square group morphism")
    result = phi(f, name=f"Phi({args.morphism})")
    _emit(_summary(result.qpm.name, describe(result.qpm)), args.out)
    return EXIT_OK


def _sign_group(name: str, file: Optional[str]):
    if file:
        _, built = load_objects(file)
        group = _lookup(built, name)
        if not isinstance(group, SignGroup):
            raise InputError(f"{name!r} is not a sign group")
        return group
    return builtin_sign_group(name)


def cmd_groupring(args) -> int:
    algebra = group_ring(_sign_group(args.sign_group, args.file))
    failures = algebra.check_monoid()
    _emit(_summary(f"A({algebra.sign_group.name})", describe_algebra(algebra)), args.out)
    _emit(("✅ monoid laws hold" if not failures else f"❌ {failures[0]}"), args.out)
    return EXIT_OK if not failures else EXIT_FAILED


def cmd_twisted(args) -> int:
    left, right = _sign_group(args.left, args.file), _sign_group(args.right, args.file)
    tp = twisted_product(left, right)
    g = tp.group
    rows = {"order": g.order, "G order": g.g_order, "elements": ", ".join(g.names)}
    _emit(_summary(g.name, rows), args.out)
    _emit(f"✅ |{g.name}| = 2·{left.g_order}·{right.g_order}", args.out)
    return EXIT_OK


def cmd_eval(args) -> int:
    _, built = load_objects(args.file)
    where = _lookup(built, args.object)
    if isinstance(where, PointedSet):
        basis, normal = where, (lambda x: x)
    elif isinstance(where, SquareGroup):
        basis, normal = where.basis, where.e.normal_form
    elif isinstance(where, QuadraticPairModule):
        basis, normal = where.c0.basis, where.c0.e.normal_form
    else:
        raise InputError(f"{args.object!r} has no words")
    x = parse_word(args.word, basis)
    _emit(f"{args.word} = {format_word(normal(x))}", args.out)
    if args.apply:
        f = _lookup(built, args.apply)
        if isinstance(f, SquareGroupMorphism):
            image = f.target.e.normal_form(f.apply_e(x))
        elif isinstance(f, Nil2Hom):
            image = f.target.normal_form(f.apply(x))
        else:
            raise InputError(f"{args.apply!r} is not a morphism")
        _emit(f"{args.apply}({args.word}) = {format_word(image)}", args.out)
    return EXIT_OK


def _finish_report(report_dict: Dict[str, Any], args, settings: Dict[str, Any]) -> int:
    _emit(format_report_for_display(report_dict), args.out)
    target = args.json or os.path.join(settings["report_dir"], f"quadpair_{report_dict['suite']}.json")
    saved = save_report(report_dict, target)
    if saved:
        _emit(f"\n📄 Report saved to: {saved}", args.out)
    passed = all(c["passed"] for c in report_dict["checks"])
    _emit(("\n✅ All checks passed" if passed else "\n❌ Verification failed"), args.out)
    return EXIT_OK if passed else EXIT_FAILED


def _runner(settings: Dict[str, Any], config: Dict[str, Any]) -> VerificationRunner:
    return VerificationRunner(seed=int(settings["seed"]), samples=int(settings["samples"]),
                              max_total=int(settings["max_total"]), suite_config=config.get("suites", {}))


def cmd_verify(args, settings: Dict[str, Any], config: Dict[str, Any]) -> int:
    report = _runner(settings, config).run(args.suite)
    return _finish_report(report.model_dump(), args, settings)


def cmd_snf(args) -> int:
    try:
        rows = [[int(x) for x in row.split()] for row in args.matrix.split(";") if row.strip()]
    except ValueError as e:
        raise InputError(f"matrix entries must be integers: {e}")
    if not rows or len({len(r) for r in rows}) != 1:
        raise InputError("matrix rows must be nonempty and of equal length")
    u, s, v = smith_normal_form(IntMatrix.from_rows(rows))
    _emit(_summary("Smith normal form U·M·V = S", {
        "S": s.to_lists(), "U": u.to_lists(), "V": v.to_lists(),
        "invariant factors": [d for d in s.diagonal() if d],
    }), args.out)
    return EXIT_OK


def cmd_clifford(args, settings: Dict[str, Any], config: Dict[str, Any]) -> int:
    if args.clifford_command == "eval":
        value = evaluate_expression(args.expression, args.dim)
        _emit(f"{args.expression} = {value!r}", args.out)
        return EXIT_OK
    suite = "clifford-K" if args.clifford_command == "verify-K" else "clifford-L"
    report = _runner(settings, config).run(suite)
    return _finish_report(report.model_dump(), args, settings)


def cmd_hg(args, settings: Dict[str, Any]) -> int:
    chi = functional_by_name(args.functional, args.n, args.m)
    samples, seed = int(settings["samples"]), int(settings["seed"])
    # L_{n,m} with nm odd is not pointed in each variable
    odd_l = args.functional == "L" and (args.n * args.m) % 2
    laws = (3, 4, 5, 6) if odd_l else (1, 2, 3, 4, 5, 6)
    checks = check_hg_axioms(chi, samples=samples, seed=seed, laws=laws)
    if odd_l:
        checks.append(pointed_deviation_check(args.n, args.m, samples=samples, seed=seed))
    report = report_from_steps(f"hg-{chi.name}", checks, seed, samples, int(settings["max_total"]))
    return _finish_report(report.model_dump(), args, settings)


def run(argv: Optional[List[str]] = None) -> int:
    """Run the CLI and return the exit code."""
    args = build_parser().parse_args(argv)

    # Load environment variables
    load_dotenv()

    try:
        # the default config file is optional, an explicit one is not
        explicit = args.config != "config.json"
        config = load_config(args.config) if explicit or os.path.exists(args.config) else {}
    except (FileNotFoundError, ValueError) as e:
        print(f"❌ Error loading configuration: {str(e)}")
        return EXIT_INPUT

    settings = _settings(args, config)
    if "size_guard" in settings:
        os.environ.setdefault("QUADPAIR_SIZE_GUARD", str(settings["size_guard"]))
    level = getattr(logging, str(settings["log_level"]).upper(), logging.INFO)
    logger = setup_logging(settings["log_file"], level)
    logger.info(f"quadpair {args.command} starting")

    try:
        if args.command == "verify":
            return cmd_verify(args, settings, config)
        if args.command == "clifford":
            return cmd_clifford(args, settings, config)
        if args.command == "hg":
            return cmd_hg(args, settings)
        return {
            "parse": cmd_parse,
            "print": cmd_print,
            "tensor": cmd_tensor,
            "phi": cmd_phi,
            "groupring": cmd_groupring,
            "twisted": cmd_twisted,
            "eval": cmd_eval,
            "snf": cmd_snf,
        }[args.command](args)
    except (InputError, SizeGuardError, CompositionError, FileNotFoundError, ValueError) as e:
        logger.warning(f"input error: {e}")
        print(f"\n❌ Error: {str(e)}")
        return EXIT_INPUT
    except QuadPairError as e:
        logger.error(f"{args.command} failed: {e}")
        print(f"\n❌ Error: {str(e)}")
        return EXIT_FAILED
    except Exception as e:
        logger.error(f"Unexpected error during {args.command}: {str(e)}", exc_info=True)
        print(f"\n❌ Error: {str(e)}")
        return EXIT_FAILED


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
