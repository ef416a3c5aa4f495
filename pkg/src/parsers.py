"""
Parsers Module for DialecticKernel
Readers for model files, languages, prefix formula and proof files, structure files,
Datalog programs and topotype literals
"""

import logging
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

from src.biposet import FiniteBiposet, build_biposet
from src.calculus import (
    CONNECTIVES, Assertion, Derivation, Entailment, Formula, IdType, Language, One, Orthogonality, Zero,
)
from src.errors import IllTypedFormulaError, KernelError, NonGroundClauseError, ParseError, UnmappedSymbolError

logger = logging.getLogger(__name__)


def _read(path: Union[str, Path]) -> Tuple[str, str]:
    path = Path(path)
    try:
        return path.read_text(encoding="utf-8"), str(path)
    except OSError as e:
        raise ParseError(f"cannot read file: {e.strerror}", source=str(path)) from e


def _lines(text: str):
    """Non-empty lines with comments stripped, numbered from 1"""
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if line.strip():
            yield number, line


def split_top_level(text: str, sep: str = ",") -> List[str]:
    """Split on separators outside (), {} and []"""
    parts, depth, current = [], 0, []
    for ch in text:
        if ch in "({[":
            depth += 1
        elif ch in ")}]":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(current).strip())
            current = []
        else:
            current.append(ch)
    tail = "".join(current).strip()
    if tail or parts:
        parts.append(tail)
    return parts


# ---------------------------------------------------------------- model files


_PAIR = re.compile(r"^\(([^,()]+),([^,()]+)\)->(\S+)$")


@dataclass
class _ModelSpec:
    types: List[str]
    homs: Dict[Tuple[str, str], List[str]]
    le: Dict[Tuple[str, str], List[Tuple[str, str]]]
    comp: Dict[Tuple[str, str, str], Dict[Tuple[str, str], str]]
    ident: Dict[str, str]
    join: Dict[Tuple[str, str], Dict[Tuple[str, str], str]]
    bot: Dict[Tuple[str, str], str]


def parse_model_text(text: str, source: str = "<model>") -> FiniteBiposet:
    """Sections ``types``, ``hom y x:``, ``le y x:``, ``comp z y x:``, ``id x:``, ``join y x:``, ``bot y x:``"""
    spec = _ModelSpec([], {}, {}, {}, {}, {}, {})
    name = Path(source).stem
    for number, line in _lines(text):
        head, colon, body = line.partition(":")
        words = head.split()
        if not words:
            raise ParseError("expected a section keyword", number, 1, source)
        keyword = words[0]
        if keyword == "types":
            spec.types = words[1:] + body.split()
            continue
        if keyword == "name" and colon:
            name = body.strip()
            continue
        if not colon:
            raise ParseError(f"expected ':' after '{head.strip()}'", number, len(line) + 1, source)
        args = words[1:]
        unknown = [t for t in args if t not in spec.types]
        if unknown:
            raise ParseError(f"unknown type {unknown[0]}", number, line.find(unknown[0]) + 1, source)
        items = body.split()
        column = len(head) + 2
        if keyword == "hom" and len(args) == 2:
            spec.homs[tuple(args)] = items
        elif keyword == "le" and len(args) == 2:
            pairs = []
            for item in items:
                a, sep, b = item.partition("<=")
                if not sep:
                    raise ParseError(f"expected ei<=ej, got {item}", number, line.find(item) + 1, source)
                pairs.append((a, b))
            spec.le[tuple(args)] = pairs
        elif keyword in ("comp", "join") and len(args) == (3 if keyword == "comp" else 2):
            table = {}
            for item in items:
                m = _PAIR.match(item)
                if not m:
                    raise ParseError(f"expected (ei,ej)->ek, got {item}", number, line.find(item) + 1, source)
                table[(m.group(1), m.group(2))] = m.group(3)
            (spec.comp if keyword == "comp" else spec.join)[tuple(args)] = table
        elif keyword == "id" and len(args) == 1 and len(items) == 1:
            spec.ident[args[0]] = items[0]
        elif keyword == "bot" and len(args) == 2 and len(items) == 1:
            spec.bot[tuple(args)] = items[0]
        else:
            raise ParseError(f"malformed section '{head.strip()}'", number, column, source)
    return _build_model(spec, name, source)


def _closure(elements: Sequence[str], pairs: Sequence[Tuple[str, str]]) -> Dict[str, set]:
    above = {e: {e} for e in elements}
    for a, b in pairs:
        above[a].add(b)
    changed = True
    while changed:
        changed = False
        for a in elements:
            grown = set().union(*(above[b] for b in above[a]))
            if grown != above[a]:
                above[a] = grown
                changed = True
    return above


def _build_model(spec: _ModelSpec, name: str, source: str) -> FiniteBiposet:
    if not spec.types:
        raise ParseError("missing 'types' section", source=source)
    order = {}
    for y in spec.types:
        for x in spec.types:
            if (y, x) not in spec.homs:
                raise ParseError(f"missing 'hom {y} {x}' section", source=source)
            elements = spec.homs[(y, x)]
            for a, b in spec.le.get((y, x), []):
                if a not in elements or b not in elements:
                    raise ParseError(f"le {y} {x}: {a}<={b} names an unknown element", source=source)
            order[(y, x)] = _closure(elements, spec.le.get((y, x), []))
    missing_ids = [x for x in spec.types if x not in spec.ident]
    if missing_ids:
        raise ParseError(f"missing 'id {missing_ids[0]}' section", source=source)

    def compose(z, y, x, s, r):
        try:
            return spec.comp[(z, y, x)][(s, r)]
        except KeyError:
            raise ParseError(f"comp {z} {y} {x}: no entry for ({s},{r})", source=source)

    try:
        B = build_biposet(name, spec.types, spec.homs,
                          le=lambda y, x, a, b: b in order[(y, x)][a],
                          compose=compose, identity=lambda x: spec.ident[x],
                          kind="file", meta={"source": source})
    except KeyError as e:
        raise ParseError(f"undeclared element {e}", source=source) from e
    try:
        for (y, x), table in spec.join.items():
            for (a, b), c in table.items():
                got = B.label(B.join(B.term(y, x, a), B.term(y, x, b)))
                if got != c:
                    raise ParseError(f"join {y} {x}: ({a},{b}) is {got} in the declared order, not {c}",
                                     source=source)
        for (y, x), e in spec.bot.items():
            if B.label(B.bottom(y, x)) != e:
                raise ParseError(f"bot {y} {x}: {e} is not the least element", source=source)
    except ParseError:
        raise
    except KernelError as e:
        raise ParseError(str(e), source=source) from e
    logger.info(f"Loaded model {name} from {source}")
    return B


def load_model_file(path: Union[str, Path]) -> FiniteBiposet:
    text, source = _read(path)
    return parse_model_text(text, source)


# ---------------------------------------------------------------- s-expressions


@dataclass
class SAtom:
    text: str
    line: int
    column: int


@dataclass
class SList:
    items: List[Union["SList", SAtom]]
    line: int
    column: int


SExpr = Union[SList, SAtom]
_TOKEN = re.compile(r'\s+|;[^\n]*|#[^\n]*|\(|\)|"(?:[^"\\]|\\.)*"|[^\s()"]+')


def parse_sexprs(text: str, source: str = "<input>") -> List[SExpr]:
    stack: List[SList] = [SList([], 1, 1)]
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1, source)
        token = m.group(0)
        column = pos - line_start + 1
        if token == "(":
            stack.append(SList([], line, column))
        elif token == ")":
            if len(stack) == 1:
                raise ParseError("unbalanced ')'", line, column, source)
            done = stack.pop()
            stack[-1].items.append(done)
        elif not token[0].isspace() and token[0] not in ";#":
            value = token[1:-1].replace('\\"', '"') if token.startswith('"') else token
            stack[-1].items.append(SAtom(value, line, column))
        newlines = token.count("\n")
        if newlines:
            line += newlines
            line_start = pos + token.rfind("\n") + 1
        pos = m.end()
    if len(stack) > 1:
        open_list = stack[-1]
        raise ParseError("unclosed '('", open_list.line, open_list.column, source)
    return stack[0].items


class _Reader:
    """Turns s-expressions into formulas, assertions and derivations over a language"""

    def __init__(self, L: Language, source: str):
        self.L = L
        self.source = source

    def fail(self, message: str, at: SExpr) -> ParseError:
        return ParseError(message, at.line, at.column, self.source)

    def _head(self, e: SExpr) -> Tuple[str, List[SExpr]]:
        if not isinstance(e, SList) or not e.items or not isinstance(e.items[0], SAtom):
            raise self.fail("expected a parenthesized form", e)
        return e.items[0].text, e.items[1:]

    def _names(self, e: SList, args: List[SExpr], count: int) -> List[str]:
        if len(args) != count or not all(isinstance(a, SAtom) for a in args):
            raise self.fail(f"expected {count} symbol arguments", e)
        return [a.text for a in args]

    def formula(self, e: SExpr) -> Formula:
        tag, args = self._head(e)
        try:
            if tag == "atom":
                name, y, x = self._names(e, args, 3)
                phi = self.L.atom(name)
                if phi.typing != (y, x):
                    raise self.fail(f"atom {name} is declared {phi.source}→{phi.target}, not {y}→{x}", e)
                return phi
            if tag == "dual":
                (name,) = self._names(e, args, 1)
                return self.L.dual(name)
            if tag == "id":
                (x,) = self._names(e, args, 1)
                self.L._check_types(x)
                return IdType(x)
            if tag in ("zero", "one"):
                y, x = self._names(e, args, 2)
                self.L._check_types(y, x)
                return Zero(y, x) if tag == "zero" else One(y, x)
            if tag in CONNECTIVES:
                if len(args) != 2:
                    raise self.fail(f"({tag} f g) takes two formulas", e)
                return CONNECTIVES[tag](self.formula(args[0]), self.formula(args[1]))
        except (IllTypedFormulaError, UnmappedSymbolError) as err:
            raise self.fail(str(err), e) from err
        raise self.fail(f"unknown formula constructor '{tag}'", e)

    def assertion(self, e: SExpr) -> Assertion:
        tag, args = self._head(e)
        if tag not in ("ent", "orth") or len(args) != 2:
            raise self.fail("expected (ent f g) or (orth f g)", e)
        left, right = self.formula(args[0]), self.formula(args[1])
        try:
            return Entailment(left, right) if tag == "ent" else Orthogonality(left, right)
        except IllTypedFormulaError as err:
            raise self.fail(str(err), e) from err

    def derivation(self, e: SExpr) -> Derivation:
        tag, args = self._head(e)
        if tag != "rule" or len(args) != 3 or not isinstance(args[0], SAtom):
            raise self.fail('expected (rule <name> (premises ...) (concl ...))', e)
        premises_tag, premises = self._head(args[1])
        concl_tag, concl = self._head(args[2])
        if premises_tag != "premises":
            raise self.fail("expected (premises ...)", args[1])
        if concl_tag != "concl" or len(concl) != 1:
            raise self.fail("expected (concl <assertion>)", args[2])
        return Derivation(args[0].text, tuple(self.derivation(p) for p in premises), self.assertion(concl[0]))


def parse_formulas(text: str, L: Language, source: str = "<formula>") -> List[Formula]:
    reader = _Reader(L, source)
    return [reader.formula(e) for e in parse_sexprs(text, source)]


def parse_items(text: str, L: Language, source: str = "<input>") -> List[Union[Formula, Assertion]]:
    """Formulas and assertions in any order"""
    reader = _Reader(L, source)
    items = []
    for e in parse_sexprs(text, source):
        tag, _ = reader._head(e)
        items.append(reader.assertion(e) if tag in ("ent", "orth") else reader.formula(e))
    return items


def parse_assertions(text: str, L: Language, source: str = "<goal>") -> List[Assertion]:
    reader = _Reader(L, source)
    return [reader.assertion(e) for e in parse_sexprs(text, source)]


def parse_derivations(text: str, L: Language, source: str = "<proof>") -> List[Derivation]:
    reader = _Reader(L, source)
    found = [reader.derivation(e) for e in parse_sexprs(text, source)]
    if not found:
        raise ParseError("no derivation found", source=source)
    return found


def load_formula_file(path, L: Language) -> List[Union[Formula, Assertion]]:
    text, source = _read(path)
    return parse_items(text, L, source)


def load_goal_file(path, L: Language) -> List[Assertion]:
    text, source = _read(path)
    return parse_assertions(text, L, source)


def load_proof_file(path, L: Language) -> List[Derivation]:
    text, source = _read(path)
    return parse_derivations(text, L, source)


# ---------------------------------------------------------------- languages


def parse_language(text: str, source: str = "<language>") -> Language:
    """Lines ``types y x`` and ``atom a y x``"""
    L: Optional[Language] = None
    for number, line in _lines(text):
        words = line.split()
        try:
            if words[0] == "types":
                if L is not None:
                    raise ParseError("types declared twice", number, 1, source)
                L = Language(tuple(words[1:]))
            elif words[0] == "atom" and len(words) == 4:
                if L is None:
                    raise ParseError("atom before types", number, 1, source)
                L.add_atom(*words[1:])
            else:
                raise ParseError(f"unknown declaration '{words[0]}'", number, 1, source)
        except (IllTypedFormulaError, UnmappedSymbolError) as e:
            raise ParseError(str(e), number, 1, source) from e
    if L is None:
        raise ParseError("missing 'types' line", source=source)
    return L


def load_language_file(path) -> Language:
    text, source = _read(path)
    return parse_language(text, source)


# ---------------------------------------------------------------- structures


@dataclass
class StructureSpec:
    descriptor: str
    type_map: Dict[str, str]
    atom_labels: Dict[str, str]


def parse_structure(text: str, source: str = "<structure>") -> StructureSpec:
    """``model <descriptor>``, ``type x -> <modeltype>``, ``atom a -> <termname>``"""
    descriptor = None
    types, atoms = {}, {}
    for number, line in _lines(text):
        words = line.split(None, 1)
        if words[0] == "model" and len(words) == 2:
            descriptor = words[1].strip()
            continue
        lhs, arrow, rhs = line.partition("->")
        parts = lhs.split()
        if not arrow or len(parts) != 2 or parts[0] not in ("type", "atom") or not rhs.strip():
            raise ParseError("expected 'type x -> t' or 'atom a -> term'", number, 1, source)
        (types if parts[0] == "type" else atoms)[parts[1]] = rhs.strip()
    if descriptor is None:
        raise ParseError("missing 'model <descriptor>' line", source=source)
    return StructureSpec(descriptor, types, atoms)


def load_structure_file(path, L: Language):
    from src.semantics import make_structure
    text, source = _read(path)
    spec = parse_structure(text, source)
    try:
        return make_structure(spec.descriptor, spec.type_map, spec.atom_labels, L, name=Path(source).stem)
    except KernelError as e:
        if isinstance(e, ParseError):
            raise
        raise ParseError(str(e), source=source) from e


# ---------------------------------------------------------------- Datalog


_DOMAIN = re.compile(r"^(\w*)\s*\{(.*)\}$")
_RANGE = re.compile(r"^(-?\d+)\.\.(-?\d+)$")
_ATOM = re.compile(r"^(\w+)\((.*)\)$")


def _domain_values(body: str, number: int, source: str) -> Tuple[str, ...]:
    body = body.strip()
    m = _RANGE.match(body)
    if m:
        lo, hi = int(m.group(1)), int(m.group(2))
        return tuple(str(v) for v in range(lo, hi + 1))
    values = tuple(v.strip() for v in body.split(",") if v.strip())
    if not values:
        raise ParseError("empty domain", number, 1, source)
    return values


def _atom_pattern(text: str, number: int, source: str):
    from src.flowfix import AtomPattern
    m = _ATOM.match(text.strip())
    if not m:
        raise ParseError(f"expected p(a,...), got {text.strip()!r}", number, 1, source)
    args = tuple(a.strip() for a in split_top_level(m.group(2))) if m.group(2).strip() else ()
    for a in args:
        if "(" in a:
            raise NonGroundClauseError(f"line {number}: function symbol in {a}")
    return AtomPattern(m.group(1), args)


def parse_datalog(text: str, source: str = "<datalog>"):
    """``domain d{1..n}``, ``pred p/2 domain d{1..n}``, ``fact p(1,2).``, ``rule h :- b1, b2.``"""
    from src.flowfix import ClauseSchema, Predicate, ground_program
    domains: Dict[str, Tuple[str, ...]] = {}
    predicates: Dict[str, Predicate] = {}
    schemas: List[ClauseSchema] = []
    for number, line in _lines(text):
        line = line.strip()
        keyword, _, rest = line.partition(" ")
        if keyword == "domain":
            m = _DOMAIN.match(rest.strip())
            if not m or not m.group(1):
                raise ParseError("expected 'domain d{...}'", number, 1, source)
            domains[m.group(1)] = _domain_values(m.group(2), number, source)
        elif keyword == "pred":
            signature, _, domain_text = rest.partition(" domain ")
            name, slash, arity = signature.strip().partition("/")
            if not slash or not arity.isdigit():
                raise ParseError("expected 'pred p/n domain d'", number, 1, source)
            domain_text = domain_text.strip()
            m = _DOMAIN.match(domain_text)
            if m:
                values = _domain_values(m.group(2), number, source)
                if m.group(1):
                    domains[m.group(1)] = values
            elif domain_text in domains:
                values = domains[domain_text]
            else:
                raise ParseError(f"unknown domain {domain_text!r}", number, line.find(domain_text) + 1, source)
            predicates[name] = Predicate(name, (values,) * int(arity))
        elif keyword in ("fact", "rule"):
            if not rest.rstrip().endswith("."):
                raise ParseError("clause must end with '.'", number, len(line), source)
            clause = rest.rstrip()[:-1]
            head_text, sep, body_text = clause.partition(":-")
            if keyword == "fact" and sep:
                raise ParseError("facts have no body", number, 1, source)
            head = _atom_pattern(head_text, number, source)
            body = tuple(_atom_pattern(b, number, source) for b in split_top_level(body_text)) if sep else ()
            if keyword == "fact" and head.variables():
                raise NonGroundClauseError(f"line {number}: fact {head_text.strip()} has variables")
            schemas.append(ClauseSchema(head, body, number))
        else:
            raise ParseError(f"unknown declaration '{keyword}'", number, 1, source)
    return ground_program(predicates, schemas)


def load_datalog_file(path):
    text, source = _read(path)
    return parse_datalog(text, source)


# ---------------------------------------------------------------- topotype literals


_TOPO = re.compile(r"^topo\s+(\S+)\s*:\s*\{(.*)\}\s*$")


def parse_topotype(text: str, M: FiniteBiposet):
    """``topo x: {e1,e2,...}`` naming endoterms of x; the member set must already be closed"""
    from src.comodal import make_topotype
    m = _TOPO.match(text.strip())
    if not m:
        raise ParseError(f"expected 'topo x: {{...}}', got {text.strip()!r}")
    x = m.group(1)
    if x not in M.types:
        raise ParseError(f"unknown type {x}")
    labels = split_top_level(m.group(2)) if m.group(2).strip() else []
    try:
        members = [M.term(x, x, label) for label in labels]
    except KernelError as e:
        raise ParseError(str(e)) from e
    return make_topotype(M, x, members)
