"""
Named verification suites for quadpair.
Runs the structural checks over seeded corpora and collects them into a Report.
"""

import logging
import random
import time
from itertools import product
from typing import Any, Callable, Dict, List, Optional

from pydantic import BaseModel, Field
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from src.abelian import AbGroupPresentation, IntMatrix, check_exterior_sequence, smith_normal_form
from src.clifford import check_identities, sym_track_group, verify_lemma_K, verify_lemma_L
from src.hgroup import (HgTarget, K_functional, L_functional, REDUCED_TENSOR_SQUARE, broken_functional,
                        check_hg_axioms, check_uniqueness_principle, pointed_deviation_check, pointed_law_deviation,
                        random_element, seed_values)
from src.nil2 import CupProduct, PointedSet, associativity_check
from src.qpm import (QpmMorphism, QpmTensor, cylinder, interval, phi, qpm_right_unit_iso, qpm_symmetry,
                     qpm_unit_iso, random_track, tau_commutation_holds, track_hcomp_left, track_hcomp_right,
                     track_of_cylinder, track_tensor, track_vcomp, trivial_track, zbar_nil)
from src.signgroup import (RightModule, SignGroup, action_from_module, check_crossed_action, group_ring,
                           module_from_action, peiffer_defects, strict_monoidal_check, twisted_product,
                           unit_comparison)
from src.sqgroup import (SquareGroupMorphism, assoc_iso, make_znil, right_unit_iso, smash_square_group,
                         symmetry_iso, tensor, trivial_square_group, unit_iso, znil_integers,
                         znil_tensor_iso)
from src.utils import QuadPairError

SCHEMA_VERSION = "1.0"

SUITES = ("axioms", "prop-3-7", "monoidal", "tracks", "sign", "group-ring", "hg", "clifford-K", "clifford-L")


class CheckResult(BaseModel):
    """Outcome of one check; witness values are exact strings."""
    name: str
    passed: bool
    witness: Dict[str, str] = Field(default_factory=dict)


class Report(BaseModel):
    """Report of one suite run."""
    schema_version: str = SCHEMA_VERSION
    suite: str
    seed: int
    samples: int
    max_total: int
    checks: List[CheckResult] = Field(default_factory=list)
    timing: Dict[str, str] = Field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> List[CheckResult]:
        return [c for c in self.checks if not c.passed]


def _result(name: str, passed: bool, **witness: Any) -> CheckResult:
    return CheckResult(name=name, passed=bool(passed), witness={k: str(v) for k, v in witness.items()})


def _from_failures(name: str, failures: List[str], **witness: Any) -> CheckResult:
    if failures:
        witness.update({"failures": len(failures), "first": failures[0]})
    return _result(name, not failures, **witness)


def _from_dicts(steps: List[Dict[str, Any]], prefix: str = "") -> List[CheckResult]:
    return [CheckResult(name=f"{prefix}{s['name']}", passed=bool(s["passed"]),
                        witness={k: str(v) for k, v in s.get("witness", {}).items()})
            for s in steps]


def sign_group_corpus() -> List[SignGroup]:
    return [SignGroup.trivial(), SignGroup.cyclic4(True), SignGroup.cyclic4(False),
            SignGroup.klein(True), SignGroup.klein(False)]


def random_int_matrix(rng: random.Random, max_size: int = 6, bound: int = 9) -> List[List[int]]:
    rows, cols = rng.randint(1, max_size), rng.randint(1, max_size)
    return [[rng.randint(-bound, bound) for _ in range(cols)] for _ in range(rows)]


def random_presentation(rng: random.Random, max_gens: int = 4, bound: int = 6) -> AbGroupPresentation:
    n = rng.randint(1, max_gens)
    relations = [[rng.randint(-bound, bound) for _ in range(n)] for _ in range(rng.randint(0, n))]
    return AbGroupPresentation(n, relations)


class VerificationRunner:
    """Runs the named suites and builds Reports."""

    def __init__(self, seed: int = 7, samples: int = 200, max_total: int = 8,
                 suite_config: Optional[Dict[str, int]] = None):
        """
        Initialize the runner.

        Args:
            seed: Seed for every randomized check
            samples: Sample count for the Hg axiom checks
            max_total: Largest n+m for the Clifford replays
            suite_config: Per-suite sample counts (the "suites" section of config.json)
        """
        self.seed = seed
        self.samples = samples
        self.max_total = max_total
        self.suite_config = suite_config or {}
        self.logger = logging.getLogger(__name__)
        self.suites: Dict[str, Callable[[], List[CheckResult]]] = {
            "axioms": self.axioms,
            "prop-3-7": self.prop_3_7,
            "monoidal": self.monoidal,
            "tracks": self.tracks,
            "sign": self.sign,
            "group-ring": self.group_ring,
            "hg": self.hg,
            "clifford-K": self.clifford_k,
            "clifford-L": self.clifford_l,
        }

    def _count(self, key: str, default: int) -> int:
        return int(self.suite_config.get(key, default))

    def _rng(self) -> random.Random:
        return random.Random(self.seed)

    def run(self, suite: str) -> Report:
        """
        Run a suite by name ("all" runs every suite in order).

        Args:
            suite: Suite name

        Returns:
            The Report; checks of "all" are prefixed with their suite
        """
        if suite != "all" and suite not in self.suites:
            raise ValueError(f"Unknown suite: {suite}. Choose from {', '.join(SUITES + ('all',))}")

        report = Report(suite=suite, seed=self.seed, samples=self.samples, max_total=self.max_total)
        names = SUITES if suite == "all" else (suite,)
        started = time.perf_counter()
        for name in names:
            self.logger.info("=" * 80)
            self.logger.info(f"SUITE: {name}")
            self.logger.info("=" * 80)
            t0 = time.perf_counter()
            try:
                checks = self.suites[name]()
            except QuadPairError as e:
                self.logger.warning(f"suite {name} aborted: {e}")
                checks = [_result(f"{name} completes", False, error=e)]
            elapsed = time.perf_counter() - t0
            report.timing[name] = f"{elapsed:.3f}"
            for check in checks:
                if suite == "all":
                    check.name = f"[{name}] {check.name}"
                if check.passed:
                    self.logger.info(f"✅ {check.name}")
                else:
                    self.logger.warning(f"❌ {check.name}: {check.witness}")
            report.checks.extend(checks)
        report.timing["total"] = f"{time.perf_counter() - started:.3f}"
        self.logger.info(f"{suite}: {len(report.checks) - len(report.failures)}/{len(report.checks)} checks passed")
        return report

    # -- axioms ----------------------------------------------------------------

    def axioms(self) -> List[CheckResult]:
        """Abelian substrate, cup products, square-group and qpm axioms on the corpus."""
        rng = self._rng()
        checks = []

        snf_failures = []
        for _ in range(self._count("snf_matrices", 1000)):
            rows = random_int_matrix(rng)
            m = IntMatrix.from_rows(rows)
            u, s, v = smith_normal_form(m)
            diag = s.diagonal()
            ok = (u @ m @ v).to_lists() == s.to_lists() and s.is_diagonal()
            ok = ok and abs(Matrix(u.to_lists()).det()) == 1 and abs(Matrix(v.to_lists()).det()) == 1
            nonzero = [d for d in diag if d]
            ok = ok and all(d > 0 for d in nonzero) and all(b % a == 0 for a, b in zip(nonzero, nonzero[1:]))
            oracle = sympy_snf(Matrix(rows), domain=ZZ)
            oracle_diag = [abs(oracle[i, i]) for i in range(min(oracle.shape))]
            ok = ok and sorted(d for d in oracle_diag if d) == sorted(nonzero)
            if not ok:
                snf_failures.append(str(rows))
        checks.append(_from_failures("Smith normal form U·M·V = S with unimodular U, V", snf_failures,
                                     matrices=self._count("snf_matrices", 1000)))

        seq_failures = []
        for _ in range(self._count("exterior_presentations", 200)):
            a = random_presentation(rng)
            facts = check_exterior_sequence(a)
            if not all(facts.values()):
                seq_failures.append(f"{a.relations}: {facts}")
        checks.append(_from_failures("A⊗ℤ/2 ↪ ⊗̂²A ↠ Λ²A is exact", seq_failures,
                                     presentations=self._count("exterior_presentations", 200)))

        e, ebar, f = PointedSet(["a", "b"]), PointedSet(["c", "d"]), PointedSet(["p", "q"])
        cup = CupProduct(e, ebar)
        cup_failures = []
        for _ in range(50):
            x, y, z = random_element(e, rng, 2), random_element(ebar, rng, 2), random_element(f, rng, 2)
            if not cup.difference_law_holds(x, y):
                cup_failures.append(f"x⊏̲y − x#y at {x}, {y}")
            for kind in ("#", "⊏̲"):
                if not associativity_check(x, y, z, kind):
                    cup_failures.append(f"{kind} associativity at {x}, {y}, {z}")
        checks.append(_from_failures("cup products: associativity and x⊏̲y = x#y + H(x)⊗̄TH(y)", cup_failures))

        x, yz = PointedSet(["x"]), PointedSet(["y", "z"])
        square_groups = [trivial_square_group(), znil_integers(), make_znil(x), make_znil(yz),
                         make_znil(PointedSet(["x", "y", "z"]))]
        square_groups += [tensor(znil_integers(), znil_integers()), tensor(make_znil(x), make_znil(yz))]
        for X in square_groups:
            checks.append(_from_failures(f"square group axioms for {X.name}", X.check_axioms(),
                                         generators=X.ngens, ee_generators=X.ee.ngens))

        unit = zbar_nil()
        qpms = [unit, zbar_nil(x), interval().qpm, phi(SquareGroupMorphism.identity(znil_integers())).qpm,
                QpmTensor(unit, zbar_nil(x))]
        for C in qpms:
            checks.append(_from_failures(f"qpm axioms for {C.name}", C.check_axioms(),
                                         generators_0=C.c0.ngens, generators_1=C.c1.ngens))
        return checks

    # -- Z_nil[E]⊙Z_nil[Ē] ≅ Z_nil[E∧Ē] ----------------------------------------------

    def prop_3_7(self) -> List[CheckResult]:
        """The comparison map onto Z_nil of the smash product, for |E|, |Ē| ≤ 3."""
        rng = self._rng()
        checks = []
        pairs = self._count("prop_3_7_pairs", 500)
        sizes = [(m, n) for m in range(1, 4) for n in range(1, 4)]
        per_size = max(1, pairs // len(sizes))
        for m, n in sizes:
            E = PointedSet([f"a{i}" for i in range(1, m + 1)])
            F = PointedSet([f"b{j}" for j in range(1, n + 1)])
            t = tensor(make_znil(E), make_znil(F))
            target = smash_square_group(E, F)
            forward, inverse = znil_tensor_iso(t, target)
            round_trip = (inverse.compose(forward).equals(SquareGroupMorphism.identity(t))
                          and forward.compose(inverse).equals(SquareGroupMorphism.identity(target)))
            checks.append(_result(f"Z_nil[E]⊙Z_nil[Ē] ≅ Z_nil[E∧Ē] for |E|={m}, |Ē|={n}",
                                  forward.is_isomorphism() and round_trip,
                                  generators=t.ngens, target_generators=target.ngens))
            cup = CupProduct(E, F)
            failures = []
            for _ in range(per_size):
                a, b = random_element(E, rng, 2), random_element(F, rng, 2)
                image = forward.apply_e(t.expand_under(a, b))
                if not target.e.equal(image, cup.underhash(a, b)):
                    failures.append(f"x={a}, y={b}: {image} != {cup.underhash(a, b)}")
            checks.append(_from_failures(f"x⊙̲y ↦ x⊏̲y for |E|={m}, |Ē|={n}", failures, samples=per_size))
        return checks

    # -- monoidal laws ---------------------------------------------------------

    def monoidal(self) -> List[CheckResult]:
        """Unit, symmetry and associativity isomorphisms for square groups and qpms."""
        checks = []
        z = znil_integers()
        for X in (znil_integers(), make_znil(PointedSet(["x"])), make_znil(PointedSet(["x", "y"]))):
            t = tensor(z, X)
            fwd, inv = unit_iso(t)
            ok = fwd.is_isomorphism() and inv.compose(fwd).equals(SquareGroupMorphism.identity(t))
            checks.append(_result(f"ℤ_nil⊙{X.name} ≅ {X.name}", ok))
            t2, swapped = tensor(X, z), tensor(z, X)
            fwd, inv = right_unit_iso(t2, swapped)
            ok = fwd.is_isomorphism() and fwd.compose(inv).equals(SquareGroupMorphism.identity(X))
            checks.append(_result(f"{X.name}⊙ℤ_nil ≅ {X.name}", ok))
            Y = make_znil(PointedSet(["y"]))
            xy, yx = tensor(X, Y), tensor(Y, X)
            ok = symmetry_iso(yx, xy).compose(symmetry_iso(xy, yx)).equals(SquareGroupMorphism.identity(xy))
            checks.append(_result(f"τ∘τ = id on {X.name}⊙{Y.name}", ok))

        X, Y, Z = znil_integers(), make_znil(PointedSet(["y"])), znil_integers()
        left, right = tensor(tensor(X, Y), Z), tensor(X, tensor(Y, Z))
        fwd, inv = assoc_iso(left, right)
        ok = fwd.is_isomorphism() and inv.compose(fwd).equals(SquareGroupMorphism.identity(left))
        checks.append(_result("(X⊙Y)⊙Z ≅ X⊙(Y⊙Z)", ok))

        unit = zbar_nil()
        corpus = [zbar_nil(), zbar_nil(PointedSet(["x"])), interval(unit).qpm,
                  phi(SquareGroupMorphism.identity(znil_integers())).qpm]
        other = zbar_nil(PointedSet(["y"]))
        for C in corpus:
            t = QpmTensor(unit, C)
            fwd, inv = qpm_unit_iso(t)
            ok = fwd.is_isomorphism() and inv.compose(fwd).equals(QpmMorphism.identity(t))
            checks.append(_result(f"Z̄_nil⊙{C.name} ≅ {C.name}", ok))
            fwd, inv = qpm_right_unit_iso(QpmTensor(C, unit), QpmTensor(unit, C))
            checks.append(_result(f"{C.name}⊙Z̄_nil ≅ {C.name}",
                                  fwd.is_isomorphism() and fwd.compose(inv).equals(QpmMorphism.identity(C))))
            cd, dc = QpmTensor(C, other), QpmTensor(other, C)
            ok = qpm_symmetry(dc, cd).compose(qpm_symmetry(cd, dc)).equals(QpmMorphism.identity(cd))
            checks.append(_result(f"τ⊙∘τ⊙ = id on {C.name}⊙{other.name}", ok))

        order = unit.c1.as_abelian_group().order()
        checks.append(_result("Φ(0→ℤ_nil) has 1-level of order 2", order == 2, order=order))
        return checks

    # -- tracks ----------------------------------------------------------------

    def tracks(self) -> List[CheckResult]:
        """Cylinder correspondence and the track calculus on 0-good objects."""
        rng = self._rng()
        checks = []
        corpus = [zbar_nil(), zbar_nil(PointedSet(["x"])), zbar_nil(PointedSet(["x", "y"]))]
        good = all(C.is_0good() for C in corpus)
        checks.append(_result("track corpus is 0-good", good, objects=len(corpus)))
        I = interval()

        cyl_failures = []
        count = self._count("cylinder_tracks", 50)
        for k in range(count):
            C = corpus[k % len(corpus)]
            f = QpmMorphism.identity(C)
            alpha = random_track(f, rng)
            ic = QpmTensor(I.qpm, C)
            abar = cylinder(alpha, ic, I)
            back = track_of_cylinder(abar, ic, I)
            if not back.equals(alpha):
                cyl_failures.append(f"track → cylinder → track on {C.name}: {alpha.values}")
            if not cylinder(back, ic, I).equals(abar):
                cyl_failures.append(f"cylinder → track → cylinder on {C.name}")
        checks.append(_from_failures("cylinder correspondence round trips", cyl_failures, tracks=count))

        assoc, units, interchange, variants = [], [], [], []
        rounds = max(1, count // 5)
        for k in range(rounds):
            C = corpus[k % len(corpus)]
            f = QpmMorphism.identity(C)
            a1 = random_track(f, rng)
            a2 = random_track(a1.target, rng)
            a3 = random_track(a2.target, rng)
            if not track_vcomp(a3, track_vcomp(a2, a1)).equals(track_vcomp(track_vcomp(a3, a2), a1)):
                assoc.append(f"on {C.name}")
            if not (track_vcomp(a1, trivial_track(f)).equals(a1)
                    and track_vcomp(trivial_track(a1.target), a1).equals(a1)):
                units.append(f"on {C.name}")
            beta = random_track(f, rng)
            g, h = a1.target, beta.target
            lhs = track_vcomp(track_hcomp_right(beta, g), track_hcomp_left(f, a1))
            rhs = track_vcomp(track_hcomp_left(h, a1), track_hcomp_right(beta, f))
            if not lhs.equals(rhs):
                interchange.append(f"on {C.name}: α={a1.values}, β={beta.values}")
        checks.append(_from_failures("vertical composition is associative", assoc, samples=rounds))
        checks.append(_from_failures("trivial tracks are units", units, samples=rounds))
        checks.append(_from_failures("interchange (βg)□(hα) = (kα)□(βf)", interchange, samples=rounds))

        C, X = corpus[0], corpus[1]
        src, swapped = QpmTensor(C, X), QpmTensor(X, C)
        tau_failures = []
        for _ in range(rounds):
            alpha = random_track(QpmMorphism.identity(C), rng)
            beta = random_track(QpmMorphism.identity(X), rng)
            if not track_tensor(alpha, beta, src, src, "left").equals(track_tensor(alpha, beta, src, src, "right")):
                variants.append(f"α={alpha.values}, β={beta.values}")
            if not tau_commutation_holds(alpha, beta, src, src, swapped, swapped):
                tau_failures.append(f"α={alpha.values}, β={beta.values}")
        checks.append(_from_failures("both expansions of α⊙β agree", variants, samples=rounds))
        checks.append(_from_failures("τ⊙(α⊙β) = (β⊙α)τ⊙", tau_failures, samples=rounds))
        return checks

    # -- sign groups -----------------------------------------------------------

    def sign(self) -> List[CheckResult]:
        """Sign group laws, twisted products, the crossed action and Sym⋉(n)."""
        checks = []
        corpus = sign_group_corpus()
        for S in corpus:
            checks.append(_from_failures(f"sign group {S.name} is valid", S.check(), order=S.order))
            checks.append(_from_failures(f"crossed action on {S.name}", check_crossed_action(S)))
            defects = peiffer_defects(S)
            odd_only = all(S.eps_of(g) == -1 and S.eps_of(h) == -1 for g, h in defects)
            checks.append(_result(f"Peiffer defects of {S.name} lie on odd pairs", odd_only, defects=len(defects)))

        for G, L in product(corpus, repeat=2):
            tp = twisted_product(G, L)
            expected = 2 * G.g_order * L.g_order
            checks.append(_result(f"|{G.name}×̃{L.name}| = 2|G||L|", tp.group.order == expected,
                                  order=tp.group.order, expected=expected))

        first = twisted_product(corpus[1], corpus[3]).group
        chained = twisted_product(first, corpus[2]).group
        checks.append(_result(f"chained twisted product {chained.name} has order 16", chained.order == 16,
                              order=chained.order))
        checks.append(_from_failures(f"crossed action on {first.name}", check_crossed_action(first)))

        for n, expected in ((3, 12), (4, 48)):
            S = sym_track_group(n)
            checks.append(_result(f"Sym⋉({n}) has order {expected}", S.order == expected and not S.check(),
                                  order=S.order))
        return checks

    # -- group rings -----------------------------------------------------------

    def group_ring(self) -> List[CheckResult]:
        """A(G⋉) as a monoid, module/action round trips and the strict monoidal comparison."""
        rng = self._rng()
        checks = []
        limit = self._count("sign_max_order", 48)
        corpus = sign_group_corpus()
        for S in corpus:
            A = group_ring(S)
            checks.append(_from_failures(f"A({S.name}) is a monoid in qpm", A.check_monoid(),
                                         closure_rounds=A.closure_rounds))
            regular = RightModule.regular(A)
            action = action_from_module(regular)
            module = module_from_action(action, A)
            ok = module.equals(regular) and action_from_module(module).equals(action)
            checks.append(_result(f"module ↔ action round trip over A({S.name})", ok))
            checks.append(_from_failures(f"ω-formula in the regular action of {S.name}", action.sample_laws(rng)))

        trivial = group_ring(corpus[0])
        unit = zbar_nil()
        checks.append(_result("Z̄_nil ≅ A(1⋉)", unit_comparison(trivial, unit).is_isomorphism()))

        for G, L in product(corpus, repeat=2):
            if 2 * G.g_order * L.g_order > limit:
                continue
            checks.append(_result(f"A({G.name})⊙A({L.name}) ≅ A({G.name}×̃{L.name})",
                                  strict_monoidal_check(G, L, limit=limit)))
        return checks

    # -- Hg-functionals --------------------------------------------------------

    def hg(self) -> List[CheckResult]:
        """Hg laws for K and L, the uniqueness principle and the seed values."""
        checks = _from_dicts(check_hg_axioms(K_functional(), samples=self.samples, seed=self.seed))
        for n, m in ((1, 1), (1, 2), (2, 1), (2, 2), (1, 3)):
            odd = (n * m) % 2
            laws = (3, 4, 5, 6) if odd else (1, 2, 3, 4, 5, 6)
            l_samples = max(1, self.samples // 4)
            checks += _from_dicts(check_hg_axioms(L_functional(n, m), samples=l_samples, seed=self.seed, laws=laws))
            if odd:
                checks += _from_dicts([pointed_deviation_check(n, m, samples=l_samples, seed=self.seed)])

        broken = check_hg_axioms(broken_functional(), samples=20, seed=self.seed, laws=(3,))
        checks.append(_result("a broken functional is caught by law (3)", not broken[0]["passed"]))

        checks += _from_dicts(check_uniqueness_principle(samples=min(self.samples, 50), seed=self.seed))

        values = seed_values()
        k_replay = all(step["passed"] for step in verify_lemma_K())
        checks.append(_result("K(ν,ν) is the nontrivial element of ℤ/2", values["K"] == 1 and k_replay,
                              value=values["K"], clifford_replay=k_replay))
        group = HgTarget(REDUCED_TENSOR_SQUARE).seed_group()
        nonzero = [(n, t - n) for t in range(2, self.max_total + 1) for n in range(1, t)
                   if not group.is_zero(L_functional(n, t - n).at_nu())]
        checks.append(_result(f"L_(n,m)(ν,ν) = 0 for n+m ≤ {self.max_total}", not nonzero, nonzero=nonzero))

        mismatched = []
        for n, m in product(range(1, 4), repeat=2):
            deviation = pointed_law_deviation(n, m)
            if (deviation is not None) != bool((n * m) % 2):
                mismatched.append((n, m, deviation))
        checks.append(_result("L_(n,m)(id,ν)(1⊗1) ≠ 0 exactly when nm is odd", not mismatched,
                              mismatched=mismatched))
        return checks

    # -- Clifford replays ------------------------------------------------------

    def clifford_k(self) -> List[CheckResult]:
        return _from_dicts(verify_lemma_K())

    def clifford_l(self) -> List[CheckResult]:
        checks = []
        for total in range(2, self.max_total + 1):
            for n in range(1, total):
                checks += _from_dicts(verify_lemma_L(n, total - n), prefix=f"(n,m)=({n},{total - n}) ")
        checks += _from_dicts(check_identities(self.max_total))
        return checks


def run_suite(suite: str, seed: int = 7, samples: int = 200, max_total: int = 8,
              suite_config: Optional[Dict[str, int]] = None) -> Report:
    return VerificationRunner(seed, samples, max_total, suite_config).run(suite)


def report_from_steps(suite: str, steps: List[Dict[str, Any]], seed: int, samples: int, max_total: int) -> Report:
    """Wrap check dicts from a library function in a Report."""
    return Report(suite=suite, seed=seed, samples=samples, max_total=max_total, checks=_from_dicts(steps))
