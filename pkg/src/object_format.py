"""
Object File Parser
Reads and writes the line-oriented object format used by the CLI.

    # comment
    [squaregroup X]
    znil: a, b

    [morphism f]
    source: X
    target: X
    images: a -> b; b -> a

Words use the signed-generator syntax `a + 2b - a + [a,b]`; a coefficient
in front of a numeric generator name needs a `*` (`2*1`). The 1-level of
a quadratic pair module also has P-symbols such as `P(x⊗x)`.
"""

import re
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from src.abelian import AbGroupPresentation
from src.clifford import sym_track_group
from src.nil2 import Nil2Element, Nil2Hom, PointedSet, PresentedNil2, commutator
from src.qpm import QpmMorphism, QpmTensor, QpmTrack, QuadraticPairModule, interval, phi, target_of, zbar_nil
from src.signgroup import SignGroup, twisted_product
from src.sqgroup import SquareGroup, SquareGroupMorphism, make_znil
from src.utils import AxiomError, InputError, QuadPairError

SECTION_KEYS: Dict[str, Tuple[str, ...]] = {
    "pointedset": ("names", "central"),
    "squaregroup": ("znil", "gens", "central", "relators", "ee", "ee_relations", "P", "H", "cross"),
    "qpm": ("kind", "basis", "morphism", "left", "right"),
    "signgroup": ("builtin", "twisted", "sym"),
    "morphism": ("source", "target", "images", "ee_images"),
    "track": ("qpm", "values"),
}

BUILTIN_SIGN_GROUPS = ("trivial", "Z4-", "Z4+", "V4-", "V4+")


def builtin_sign_group(name: str, line: Optional[int] = None, column: int = 0) -> SignGroup:
    """trivial, Z4± or V4±; the minus sign marks ε as the nontrivial sign."""
    if name == "trivial":
        return SignGroup.trivial()
    if name in ("Z4-", "Z4+"):
        return SignGroup.cyclic4(signed=name.endswith("-"))
    if name in ("V4-", "V4+"):
        return SignGroup.klein(signed=name.endswith("-"))
    raise InputError(f"unknown sign group {name!r}; choose from {', '.join(BUILTIN_SIGN_GROUPS)}", line, column)


_HEADER = re.compile(r'^\[(\w+)(?:\s+([^\]\s]+))?\]\s*$')
_ENTRY = re.compile(r'^(\w+)\s*:\s*(.*)$')
_NAME = re.compile(r"P\([^()\s;]+\)|[A-Za-z_][A-Za-z0-9_.']*|\d+")


@dataclass
class Section:
    kind: str
    name: str
    entries: Dict[str, str] = field(default_factory=dict)
    line: int = 0
    columns: Dict[str, int] = field(default_factory=dict)


@dataclass
class ObjectFile:
    sections: List[Section] = field(default_factory=list)

    def names(self) -> List[str]:
        return [s.name for s in self.sections]


# ---------------------------------------------------------------------------
# Words and linear combinations
# ---------------------------------------------------------------------------

class _Scanner:
    def __init__(self, text: str, line: Optional[int], column: int):
        self.text = text
        self.pos = 0
        self.line = line
        self.column = column

    def error(self, message: str) -> InputError:
        return InputError(message, self.line, self.column + self.pos + 1)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def done(self) -> bool:
        self.skip()
        return self.pos >= len(self.text)

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        self.skip()
        if self.peek() != ch:
            raise self.error(f"expected '{ch}'")
        self.pos += 1

    def name(self) -> str:
        self.skip()
        m = _NAME.match(self.text, self.pos)
        if not m:
            raise self.error(f"expected a generator name at {self.text[self.pos:self.pos + 8]!r}")
        self.pos = m.end()
        return m.group(0)

    def terms(self, allow_brackets: bool) -> List[Tuple[int, Any]]:
        """[(coefficient, name or (name, name))] in order."""
        out = []
        if self.text.strip() == "0":
            return out
        first = True
        while not self.done():
            sign = 1
            ch = self.peek()
            if ch in "+-":
                sign = -1 if ch == "-" else 1
                self.pos += 1
                self.skip()
            elif not first:
                raise self.error("expected '+' or '-'")
            first = False
            coeff = 1
            m = re.compile(r"\d+").match(self.text, self.pos)
            if m:
                after = self.text[m.end():m.end() + 1]
                if after == "*":
                    coeff = int(m.group(0))
                    self.pos = m.end() + 1
                elif after == "[" or (after and (after.isalpha() or after == "_")):
                    coeff = int(m.group(0))
                    self.pos = m.end()
            self.skip()
            if self.peek() == "[":
                if not allow_brackets:
                    raise self.error("commutators are not allowed here")
                self.pos += 1
                a = self.name()
                self.expect(",")
                b = self.name()
                self.expect("]")
                out.append((sign * coeff, (a, b)))
            else:
                out.append((sign * coeff, self.name()))
        return out


def parse_word(text: str, basis: PointedSet, line: Optional[int] = None, column: int = 0) -> Nil2Element:
    """Evaluate a signed-generator word in the free class-2 group on basis."""
    scanner = _Scanner(text, line, column)
    total = basis.identity()
    for coeff, symbol in scanner.terms(allow_brackets=True):
        try:
            if isinstance(symbol, tuple):
                term = commutator(basis.gen(symbol[0]), basis.gen(symbol[1])).scale(coeff)
            else:
                term = basis.gen(symbol, coeff)
        except KeyError as e:
            raise InputError(f"unknown generator {e.args[0]!r}", line, column + 1) from e
        total = total + term
    return total


def parse_linear(text: str, labels: Sequence[str], line: Optional[int] = None, column: int = 0) -> Tuple[int, ...]:
    index = {name: i for i, name in enumerate(labels)}
    out = [0] * len(labels)
    for coeff, symbol in _Scanner(text, line, column).terms(allow_brackets=False):
        if symbol not in index:
            raise InputError(f"unknown generator {symbol!r}", line, column + 1)
        out[index[symbol]] += coeff
    return tuple(out)


def _term(c: int, symbol: str, first: bool) -> str:
    mag = "" if abs(c) == 1 else (f"{abs(c)}*" if symbol[0].isdigit() else f"{abs(c)}")
    if c < 0:
        return f"-{mag}{symbol}" if first else f"- {mag}{symbol}"
    return f"{mag}{symbol}" if first else f"+ {mag}{symbol}"


def format_word(x: Nil2Element) -> str:
    terms = []
    for i, c in enumerate(x.linear):
        if c:
            terms.append(_term(c, x.basis.names[i], not terms))
    for k, (j, i) in enumerate(x.basis.pairs):
        if x.comm[k]:
            terms.append(_term(x.comm[k], f"[{x.basis.names[j]},{x.basis.names[i]}]", not terms))
    return " ".join(terms) or "0"


def format_linear(v: Sequence[int], labels: Sequence[str]) -> str:
    terms = []
    for c, name in zip(v, labels):
        if c:
            terms.append(_term(c, name, not terms))
    return " ".join(terms) or "0"


def _split_list(text: str) -> List[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def _split_mapping(text: str, line: Optional[int], column: int) -> List[Tuple[str, str, int]]:
    """'k -> v; k2 -> v2' into (key, value, column of value)."""
    out = []
    offset = 0
    for part in text.split(";"):
        start = offset
        offset += len(part) + 1
        if not part.strip():
            continue
        if "->" not in part:
            raise InputError("expected 'key -> value'", line, column + start + 1)
        key, value = part.split("->", 1)
        out.append((key.strip(), value.strip(), column + start + len(key) + 2))
    return out


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

class ObjectFileParser:
    """Parser and builder for object files."""

    def __init__(self, path: Optional[str] = None):
        self.path = path
        self.logger = logging.getLogger(__name__)

    def load(self) -> ObjectFile:
        with open(self.path, 'r', encoding='utf-8') as f:
            content = f.read()
        parsed = self.parse(content)
        self.logger.info(f"Loaded {len(parsed.sections)} object sections from {self.path}")
        return parsed

    def parse(self, content: str) -> ObjectFile:
        obj = ObjectFile()
        current: Optional[Section] = None
        seen = set()
        for lineno, raw in enumerate(content.splitlines(), start=1):
            text = raw.split("#", 1)[0].rstrip()
            if not text.strip():
                continue
            header = _HEADER.match(text.strip())
            if header:
                kind, name = header.group(1), header.group(2) or ""
                if kind not in SECTION_KEYS:
                    raise InputError(f"unknown section kind [{kind}]", lineno, 2)
                if not name:
                    raise InputError(f"section [{kind}] needs a name", lineno, len(kind) + 2)
                if name in seen:
                    raise InputError(f"duplicate object name {name!r}", lineno, len(kind) + 3)
                seen.add(name)
                current = Section(kind, name, line=lineno)
                obj.sections.append(current)
                continue
            entry = _ENTRY.match(text.strip())
            if not entry:
                raise InputError(f"cannot parse line {text.strip()!r}", lineno, 1)
            if current is None:
                raise InputError("entry outside of a section", lineno, 1)
            key, value = entry.group(1), entry.group(2).strip()
            if key not in SECTION_KEYS[current.kind]:
                raise InputError(f"unknown key {key!r} in [{current.kind}]", lineno, 1)
            if key in current.entries:
                raise InputError(f"duplicate key {key!r}", lineno, 1)
            current.entries[key] = value
            current.columns[key] = len(raw) - len(raw.lstrip()) + entry.start(2)
            current.columns[f"{key}@line"] = lineno
        self.logger.debug(f"parsed {len(obj.sections)} sections")
        return obj

    # -- building ----------------------------------------------------------

    def build(self, obj: ObjectFile) -> Dict[str, Any]:
        """Construct every object in declaration order."""
        built: Dict[str, Any] = {}
        for section in obj.sections:
            try:
                built[section.name] = getattr(self, f"_build_{section.kind}")(section, built)
            except AxiomError as e:
                raise InputError(f"[{section.kind} {section.name}] violates {e.law}: {e}", section.line) from e
            self.logger.debug(f"built {section.kind} {section.name}")
        return built

    @staticmethod
    def _where(section: Section, key: str) -> Tuple[Optional[int], int]:
        return section.columns.get(f"{key}@line", section.line), section.columns.get(key, 0)

    @staticmethod
    def _require(section: Section, key: str) -> str:
        if key not in section.entries:
            raise InputError(f"[{section.kind} {section.name}] needs '{key}'", section.line)
        return section.entries[key]

    @staticmethod
    def _ref(section: Section, built: Dict[str, Any], key: str, kinds: Tuple[type, ...]) -> Any:
        name = ObjectFileParser._require(section, key)
        if name not in built:
            raise InputError(f"unknown object {name!r}", *ObjectFileParser._where(section, key))
        obj = built[name]
        if not isinstance(obj, kinds):
            raise InputError(f"{name!r} is not a {'/'.join(k.__name__ for k in kinds)}",
                             *ObjectFileParser._where(section, key))
        return obj

    def _build_pointedset(self, section: Section, built: Dict[str, Any]) -> PointedSet:
        return PointedSet(_split_list(section.entries.get("names", "")),
                          _split_list(section.entries.get("central", "")))

    def _build_squaregroup(self, section: Section, built: Dict[str, Any]) -> SquareGroup:
        e = section.entries
        if "znil" in e:
            extra = set(e) - {"znil"}
            if extra:
                raise InputError(f"'znil' cannot be combined with {sorted(extra)}", section.line)
            return make_znil(PointedSet(_split_list(e["znil"])), name=section.name)
        basis = PointedSet(_split_list(self._require(section, "gens")), _split_list(e.get("central", "")))
        n = basis.size
        line, col = self._where(section, "relators")
        relators = [parse_word(w, basis, line, col) for w in e.get("relators", "").split(";") if w.strip()]
        group = PresentedNil2(basis, relators, name=f"{section.name}_e")
        labels = _split_list(e.get("ee", ""))
        line, col = self._where(section, "ee_relations")
        ee_rels = [parse_linear(w, labels, line, col) for w in e.get("ee_relations", "").split(";") if w.strip()]
        ee = AbGroupPresentation(len(labels), ee_rels, labels)
        p_values = [basis.identity()] * len(labels)
        line, col = self._where(section, "P")
        for key, value, c in _split_mapping(e.get("P", ""), line, col):
            if key not in labels:
                raise InputError(f"P given on unknown ee generator {key!r}", line, c)
            p_values[labels.index(key)] = parse_word(value, basis, line, c)
        h_values = [tuple([0] * len(labels))] * n
        line, col = self._where(section, "H")
        for key, value, c in _split_mapping(e.get("H", ""), line, col):
            if key not in basis.index:
                raise InputError(f"H given on unknown generator {key!r}", line, c)
            h_values[basis.index[key]] = parse_linear(value, labels, line, c)
        cross = [[tuple([0] * len(labels)) for _ in range(n)] for _ in range(n)]
        line, col = self._where(section, "cross")
        for key, value, c in _split_mapping(e.get("cross", ""), line, col):
            pair = _split_list(key)
            if len(pair) != 2 or any(p not in basis.index for p in pair):
                raise InputError(f"cross effect key {key!r} is not a generator pair", line, c)
            cross[basis.index[pair[0]]][basis.index[pair[1]]] = parse_linear(value, labels, line, c)
        return SquareGroup(group, ee, p_values, h_values, cross, name=section.name)

    def _build_morphism(self, section: Section, built: Dict[str, Any]):
        src = self._ref(section, built, "source", (SquareGroup, PointedSet))
        tgt = self._ref(section, built, "target", (SquareGroup, PointedSet))
        if isinstance(src, PointedSet) != isinstance(tgt, PointedSet):
            raise InputError("source and target must both be pointed sets or both square groups", section.line)
        sb = src if isinstance(src, PointedSet) else src.basis
        tb = tgt if isinstance(tgt, PointedSet) else tgt.basis
        images = [tb.identity()] * sb.size
        line, col = self._where(section, "images")
        for key, value, c in _split_mapping(self._require(section, "images"), line, col):
            if key not in sb.index:
                raise InputError(f"image given for unknown generator {key!r}", line, c)
            images[sb.index[key]] = parse_word(value, tb, line, c)
        if isinstance(src, PointedSet):
            return Nil2Hom(PresentedNil2.free(src), PresentedNil2.free(tgt), images)
        if "ee_images" in section.entries:
            ee_images = [tuple([0] * tgt.ee.ngens)] * src.ee.ngens
            line, col = self._where(section, "ee_images")
            for key, value, c in _split_mapping(section.entries["ee_images"], line, col):
                if key not in src.ee.labels:
                    raise InputError(f"ee image given for unknown generator {key!r}", line, c)
                ee_images[list(src.ee.labels).index(key)] = parse_linear(value, tgt.ee.labels, line, c)
        else:
            # ⊗² of the abelianized map, valid between Z_nil-type square groups
            m, n = src.ngens, tgt.ngens
            ee_images = []
            for a in range(m):
                for b in range(m):
                    ee_images.append(tuple(images[a].linear[i] * images[b].linear[j]
                                           for i in range(n) for j in range(n)))
            if src.ee.ngens != m * m or tgt.ee.ngens != n * n:
                raise InputError("ee_images required unless both sides are Z_nil square groups", section.line)
        return SquareGroupMorphism(src, tgt, images, ee_images, name=section.name)

    def _build_qpm(self, section: Section, built: Dict[str, Any]):
        kind = section.entries.get("kind", "zbar")
        if kind == "zbar":
            names = _split_list(section.entries.get("basis", ""))
            return zbar_nil(PointedSet(names) if names else None)
        if kind == "interval":
            return interval().qpm
        if kind == "phi":
            f = self._ref(section, built, "morphism", (SquareGroupMorphism,))
            return phi(f, name=section.name).qpm
        if kind == "tensor":
            left = self._ref(section, built, "left", (QuadraticPairModule,))
            right = self._ref(section, built, "right", (QuadraticPairModule,))
            return QpmTensor(left, right, name=section.name)
        raise InputError(f"unknown qpm kind {kind!r} (zbar, interval, phi or tensor)", *self._where(section, "kind"))

    def _build_signgroup(self, section: Section, built: Dict[str, Any]) -> SignGroup:
        e = section.entries
        if len(e) != 1:
            raise InputError("a sign group needs exactly one of builtin, twisted, sym", section.line)
        if "builtin" in e:
            return builtin_sign_group(e["builtin"], *self._where(section, "builtin"))
        if "sym" in e:
            try:
                return sym_track_group(int(e["sym"]))
            except ValueError as err:
                raise InputError(f"sym expects an integer, got {e['sym']!r}", *self._where(section, "sym")) from err
        names = _split_list(e["twisted"])
        if len(names) != 2 or any(n not in built or not isinstance(built[n], SignGroup) for n in names):
            raise InputError("twisted expects two sign group names", *self._where(section, "twisted"))
        return twisted_product(built[names[0]], built[names[1]]).group

    def _build_track(self, section: Section, built: Dict[str, Any]) -> QpmTrack:
        C = self._ref(section, built, "qpm", (QuadraticPairModule,))
        f = QpmMorphism.identity(C)
        values = [C.c1.basis.identity()] * C.c0.ngens
        line, col = self._where(section, "values")
        for key, value, c in _split_mapping(self._require(section, "values"), line, col):
            if key not in C.c0.basis.index:
                raise InputError(f"track value for unknown generator {key!r}", line, c)
            values[C.c0.basis.index[key]] = parse_word(value, C.c1.basis, line, c)
        return QpmTrack(f, target_of(f, values), values)


# ---------------------------------------------------------------------------
# Printer
# ---------------------------------------------------------------------------

def _canonical_value(kind: str, key: str, value: str) -> str:
    if key in ("names", "central", "gens", "ee", "znil", "basis", "twisted"):
        return ", ".join(_split_list(value))
    if key in ("P", "H", "cross", "images", "ee_images", "values"):
        parts = []
        for k, v, _ in _split_mapping(value, None, 0):
            k = ",".join(_split_list(k)) if key == "cross" else k
            parts.append(f"{k} -> {_canonical_word_text(v)}")
        return "; ".join(parts)
    if key in ("relators", "ee_relations"):
        return "; ".join(_canonical_word_text(w) for w in value.split(";") if w.strip())
    return value.strip()


def _canonical_word_text(text: str) -> str:
    """Re-space a word without evaluating it."""
    terms = _Scanner(text, None, 0).terms(allow_brackets=True)
    out = []
    for c, symbol in terms:
        sym = f"[{symbol[0]},{symbol[1]}]" if isinstance(symbol, tuple) else symbol
        out.append(_term(c, sym, not out))
    return " ".join(out) or "0"


def print_object_file(obj: ObjectFile) -> str:
    """Canonical text: sections in order, keys in schema order, normalized spacing."""
    blocks = []
    for s in obj.sections:
        lines = [f"[{s.kind} {s.name}]"]
        for key in SECTION_KEYS[s.kind]:
            if key in s.entries:
                lines.append(f"{key}: {_canonical_value(s.kind, key, s.entries[key])}")
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + ("\n" if blocks else "")


def square_group_section(name: str, X: SquareGroup) -> Section:
    """Explicit section for a constructed square group; generators are renamed x1…, ee generators w1…."""
    gens = [f"x{i + 1}" for i in range(X.ngens)]
    labels = [f"w{k + 1}" for k in range(X.ee.ngens)]
    basis = PointedSet(gens, [gens[i] for i in range(X.ngens) if X.basis.is_central(i)])

    def rename(x: Nil2Element) -> Nil2Element:
        return Nil2Element(basis, x.linear, x.comm)

    entries = {"gens": ", ".join(gens)}
    if X.basis.central:
        entries["central"] = ", ".join(g for g in gens if g in basis.central)
    if X.e.relators:
        entries["relators"] = "; ".join(format_word(rename(r)) for r in X.e.relators)
    if labels:
        entries["ee"] = ", ".join(labels)
    if X.ee.relations:
        entries["ee_relations"] = "; ".join(format_linear(r, labels) for r in X.ee.relations)
    p = [f"{labels[k]} -> {format_word(rename(v))}" for k, v in enumerate(X.p_values) if not v.is_identity()]
    if p:
        entries["P"] = "; ".join(p)
    h = [f"{gens[i]} -> {format_linear(v, labels)}" for i, v in enumerate(X.H.values) if any(v)]
    if h:
        entries["H"] = "; ".join(h)
    cross = [f"{gens[i]},{gens[j]} -> {format_linear(X.H.cross[i][j], labels)}"
             for i in range(X.ngens) for j in range(X.ngens) if any(X.H.cross[i][j])]
    if cross:
        entries["cross"] = "; ".join(cross)
    return Section("squaregroup", name, entries)


def describe(obj: Any) -> Dict[str, str]:
    """Short summary of a built object for display."""
    if isinstance(obj, PointedSet):
        return {"kind": "pointed set", "names": ", ".join(obj.names)}
    if isinstance(obj, SquareGroup):
        return {"kind": "square group", "e-generators": str(obj.ngens), "ee": obj.ee.describe(),
                "good": str(obj.is_good())}
    if isinstance(obj, QuadraticPairModule):
        return {"kind": "quadratic pair module", "0-generators": str(obj.c0.ngens),
                "1-generators": str(obj.c1.ngens), "ee": obj.ee.describe(),
                "h0": obj.h0().describe(), "h1": obj.h1().describe(), "0-good": str(obj.is_0good())}
    if isinstance(obj, SignGroup):
        return {"kind": "sign group", "order": str(obj.order), "G order": str(obj.g_order)}
    if isinstance(obj, (Nil2Hom, SquareGroupMorphism)):
        hom = obj if isinstance(obj, Nil2Hom) else obj.f_e
        return {"kind": "morphism", "images": "; ".join(format_word(im) for im in hom.images)}
    if isinstance(obj, QpmTrack):
        return {"kind": "track", "values": "; ".join(format_word(v) for v in obj.values)}
    return {"kind": type(obj).__name__}


def load_objects(path: str) -> Tuple[ObjectFile, Dict[str, Any]]:
    parser = ObjectFileParser(path)
    parsed = parser.load()
    try:
        return parsed, parser.build(parsed)
    except QuadPairError:
        raise
    except KeyError as e:
        raise InputError(f"unknown name {e.args[0]!r}") from e
