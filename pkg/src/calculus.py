"""
Calculus Module for DialecticKernel
Formula language, tensor negation on syntax, sequents, the entailment and orthogonality
rule systems, derivation checking and bounded proof search
"""

import logging
import random
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from src.config import get_settings
from src.errors import IllTypedFormulaError, UnknownRuleError, UnmappedSymbolError
from src.reports import Report

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------- language


@dataclass(frozen=True)
class AtomSymbol:
    name: str
    source: str
    target: str


@dataclass
class Language:
    """Type symbols and typed atoms; every atom a: y→x has a dual ȧ: x→y"""
    types: Tuple[str, ...]
    atoms: Dict[str, AtomSymbol] = field(default_factory=dict)

    def __post_init__(self):
        self.types = tuple(self.types)
        for symbol in self.atoms.values():
            self._check_types(symbol.source, symbol.target)

    def _check_types(self, *names: str) -> None:
        for name in names:
            if name not in self.types:
                raise UnmappedSymbolError(f"unknown type symbol '{name}'")

    def add_atom(self, name: str, source: str, target: str) -> "Language":
        self._check_types(source, target)
        if name in self.atoms:
            raise IllTypedFormulaError(f"atom '{name}' declared twice")
        self.atoms[name] = AtomSymbol(name, source, target)
        return self

    def atom(self, name: str) -> "Atom":
        if name not in self.atoms:
            raise UnmappedSymbolError(f"unknown atom '{name}'")
        symbol = self.atoms[name]
        return Atom(name, symbol.source, symbol.target)

    def dual(self, name: str) -> "DualAtom":
        return negate_formula(self.atom(name))

    def literals(self) -> List["Formula"]:
        """Atoms together with their duals"""
        result: List[Formula] = []
        for name in sorted(self.atoms):
            result.append(self.atom(name))
            result.append(self.dual(name))
        return result

    def contains(self, phi: "Formula") -> bool:
        for node in phi.walk():
            if isinstance(node, (Atom, DualAtom)):
                symbol = self.atoms.get(node.name)
                if symbol is None:
                    return False
                typing = (symbol.source, symbol.target) if isinstance(node, Atom) else (symbol.target, symbol.source)
                if typing != (node.source, node.target):
                    return False
            elif node.source not in self.types or node.target not in self.types:
                return False
        return True

    def require(self, *formulas: "Formula") -> None:
        for phi in formulas:
            if not self.contains(phi):
                raise UnmappedSymbolError(f"{phi} uses symbols outside the language")


def make_language(types: Iterable[str], atoms: Iterable[Tuple[str, str, str]] = ()) -> Language:
    lang = Language(tuple(types))
    for name, source, target in atoms:
        lang.add_atom(name, source, target)
    return lang


# ---------------------------------------------------------------- formulas


class Formula:
    """Base of the term formula tree; every node carries source and target"""
    source: str
    target: str

    @property
    def typing(self) -> Tuple[str, str]:
        return (self.source, self.target)

    def children(self) -> Tuple["Formula", ...]:
        return ()

    def walk(self) -> Iterator["Formula"]:
        yield self
        for child in self.children():
            yield from child.walk()

    @property
    def depth(self) -> int:
        return 1 + max((c.depth for c in self.children()), default=0)

    def __invert__(self) -> "Formula":
        return negate_formula(self)


@dataclass(frozen=True)
class Atom(Formula):
    name: str
    source: str
    target: str

    def __str__(self) -> str:
        return f"(atom {self.name} {self.source} {self.target})"


@dataclass(frozen=True)
class DualAtom(Formula):
    name: str
    source: str
    target: str

    def __str__(self) -> str:
        return f"(dual {self.name})"


@dataclass(frozen=True)
class IdType(Formula):
    type: str

    @property
    def source(self) -> str:
        return self.type

    @property
    def target(self) -> str:
        return self.type

    def __str__(self) -> str:
        return f"(id {self.type})"


@dataclass(frozen=True)
class Zero(Formula):
    source: str
    target: str

    def __str__(self) -> str:
        return f"(zero {self.source} {self.target})"


@dataclass(frozen=True)
class One(Formula):
    source: str
    target: str

    def __str__(self) -> str:
        return f"(one {self.source} {self.target})"


@dataclass(frozen=True)
class _Binary(Formula):
    left: Formula
    right: Formula
    tag = ""

    def children(self) -> Tuple[Formula, ...]:
        return (self.left, self.right)

    def __str__(self) -> str:
        return f"({self.tag} {self.left} {self.right})"


@dataclass(frozen=True)
class _Serial(_Binary):
    """left: z→y, right: y→x, whole: z→x"""

    def __post_init__(self):
        if self.left.target != self.right.source:
            raise IllTypedFormulaError(f"({self.tag} ...) children not composable: "
                                       f"{self.left.typing} then {self.right.typing}")

    @property
    def source(self) -> str:
        return self.left.source

    @property
    def target(self) -> str:
        return self.right.target


@dataclass(frozen=True)
class _Parallel(_Binary):

    def __post_init__(self):
        if self.left.typing != self.right.typing:
            raise IllTypedFormulaError(f"({self.tag} ...) children not parallel: "
                                       f"{self.left.typing} and {self.right.typing}")

    @property
    def source(self) -> str:
        return self.left.source

    @property
    def target(self) -> str:
        return self.left.target


class Tensor(_Serial):
    tag = "ot"


class TensorSum(_Serial):
    tag = "ns"


class BoolSum(_Parallel):
    tag = "bs"


class BoolProd(_Parallel):
    tag = "bp"


CONNECTIVES = {"ot": Tensor, "ns": TensorSum, "bs": BoolSum, "bp": BoolProd}


def negate_formula(phi: Formula) -> Formula:
    """Tensor negation: structural involution swapping source and target"""
    if isinstance(phi, Atom):
        return DualAtom(phi.name, phi.target, phi.source)
    if isinstance(phi, DualAtom):
        return Atom(phi.name, phi.target, phi.source)
    if isinstance(phi, IdType):
        return phi
    if isinstance(phi, Zero):
        return One(phi.target, phi.source)
    if isinstance(phi, One):
        return Zero(phi.target, phi.source)
    if isinstance(phi, Tensor):
        return TensorSum(negate_formula(phi.right), negate_formula(phi.left))
    if isinstance(phi, TensorSum):
        return Tensor(negate_formula(phi.right), negate_formula(phi.left))
    if isinstance(phi, BoolSum):
        return BoolProd(negate_formula(phi.left), negate_formula(phi.right))
    if isinstance(phi, BoolProd):
        return BoolSum(negate_formula(phi.left), negate_formula(phi.right))
    raise IllTypedFormulaError(f"not a formula: {phi!r}")


# ---------------------------------------------------------------- sequents


@dataclass(frozen=True)
class Sequent:
    """A path of formulas listed from source to target; ``base`` types the empty path"""
    formulas: Tuple[Formula, ...]
    base: Optional[str] = None

    def __post_init__(self):
        if not self.formulas and self.base is None:
            raise IllTypedFormulaError("the empty sequent needs a base type")
        for a, b in zip(self.formulas, self.formulas[1:]):
            if a.target != b.source:
                raise IllTypedFormulaError(f"sequent breaks between {a.typing} and {b.typing}")
        if self.formulas and self.base is not None and self.base != self.formulas[-1].target:
            raise IllTypedFormulaError("base type of a non-empty sequent must be its target")

    @classmethod
    def empty(cls, x: str) -> "Sequent":
        return cls((), x)

    @property
    def source(self) -> str:
        return self.formulas[0].source if self.formulas else self.base

    @property
    def target(self) -> str:
        return self.formulas[-1].target if self.formulas else self.base

    def __len__(self) -> int:
        return len(self.formulas)


@dataclass(frozen=True)
class SequentTerms:
    product: Formula
    sum: Formula
    vneg: Sequent


def sequent_product(alpha: Sequent) -> Formula:
    """⊗(ε_x) = x, ⊗(f, rest) = f ⊗ ⊗(rest)"""
    result: Formula = IdType(alpha.target)
    for phi in reversed(alpha.formulas):
        result = Tensor(phi, result)
    return result


def sequent_sum(alpha: Sequent) -> Formula:
    """∇(ε_y) = y, ∇(rest, f) = ∇(rest) ∇ f"""
    result: Formula = IdType(alpha.source)
    for phi in alpha.formulas:
        result = TensorSum(result, phi)
    return result


def vector_negation(alpha: Sequent) -> Sequent:
    return Sequent(tuple(negate_formula(phi) for phi in reversed(alpha.formulas)), alpha.source)


def sequent_tensor_terms(alpha: Sequent) -> SequentTerms:
    return SequentTerms(sequent_product(alpha), sequent_sum(alpha), vector_negation(alpha))


# ---------------------------------------------------------------- assertions and derivations


@dataclass(frozen=True)
class Entailment:
    left: Formula
    right: Formula

    def __post_init__(self):
        if self.left.typing != self.right.typing:
            raise IllTypedFormulaError(f"entailment between non-parallel {self.left.typing} and {self.right.typing}")

    def __str__(self) -> str:
        return f"(ent {self.left} {self.right})"


@dataclass(frozen=True)
class Orthogonality:
    """left β: x→y against right α: y→x"""
    left: Formula
    right: Formula

    def __post_init__(self):
        if self.left.typing != (self.right.target, self.right.source):
            raise IllTypedFormulaError(f"orthogonality between non-opposed {self.left.typing} and {self.right.typing}")

    def __str__(self) -> str:
        return f"(orth {self.left} {self.right})"


Assertion = Union[Entailment, Orthogonality]


@dataclass(frozen=True)
class Derivation:
    rule: str
    premises: Tuple["Derivation", ...]
    conclusion: Assertion

    @property
    def size(self) -> int:
        return 1 + sum(p.size for p in self.premises)

    @property
    def depth(self) -> int:
        return 1 + max((p.depth for p in self.premises), default=0)

    def nodes(self, path: str = "root") -> Iterator[Tuple[str, "Derivation"]]:
        yield path, self
        for i, p in enumerate(self.premises):
            yield from p.nodes(f"{path}.{i}")

    def __str__(self) -> str:
        premises = " ".join(str(p) for p in self.premises)
        return f'(rule "{self.rule}" (premises {premises}) (concl {self.conclusion}))'


def node(rule: str, conclusion: Assertion, *premises: Derivation) -> Derivation:
    return Derivation(rule, tuple(premises), conclusion)


# ---------------------------------------------------------------- rule schemas


# A schema checker returns None for a valid instance and a diagnostic otherwise.
SchemaCheck = Callable[[List[Assertion], Assertion], Optional[str]]
# A backward step proposes premise lists for a goal.
BackwardStep = Callable[[Assertion, "SearchContext"], Iterable[List[Assertion]]]


@dataclass(frozen=True)
class Rule:
    name: str
    system: str
    check: SchemaCheck
    backward: Optional[BackwardStep] = None


def _expect(ok: bool, expected: str, actual: object) -> Optional[str]:
    return None if ok else f"expected {expected}, got {actual}"


def _arity(premises: List[Assertion], n: int) -> Optional[str]:
    return None if len(premises) == n else f"expected {n} premises, got {len(premises)}"


def _kinds(premises: List[Assertion], *kinds: type) -> Optional[str]:
    for i, (p, kind) in enumerate(zip(premises, kinds)):
        if not isinstance(p, kind):
            return f"premise {i} must be {kind.__name__.lower()}, got {p}"
    return None


def _safe(expected: Callable[[], Assertion]) -> Optional[Assertion]:
    """Build the expected conclusion of a schema, None when it would be ill-typed"""
    try:
        return expected()
    except IllTypedFormulaError:
        return None


def _same(conclusion: Assertion, expected: Optional[Assertion]) -> Optional[str]:
    return _expect(expected is not None and conclusion == expected, str(expected), conclusion)


# entailment side


def _reflexivity(P, C):
    return _arity(P, 0) or _expect(isinstance(C, Entailment) and C.left == C.right, "α ⊢ α", C)


def _transitivity(P, C):
    err = _arity(P, 2) or _kinds(P, Entailment, Entailment)
    if err:
        return err
    if P[0].right != P[1].left:
        return f"middle formulas differ: {P[0].right} vs {P[1].left}"
    return _same(C, _safe(lambda: Entailment(P[0].left, P[1].right)))


def _contravariance(P, C):
    err = _arity(P, 1) or _kinds(P, Entailment)
    return err or _same(C, _safe(lambda: Entailment(negate_formula(P[0].right), negate_formula(P[0].left))))


def _bottom(P, C):
    return _arity(P, 0) or _expect(isinstance(C, Entailment) and C.left == Zero(*C.right.typing), "0 ⊢ α", C)


def _upper_bound(side: int):
    def check(P, C):
        ok = isinstance(C, Entailment) and isinstance(C.right, BoolSum) and C.right.children()[side] == C.left
        return _arity(P, 0) or _expect(ok, "α ⊢ α ⊕ α′" if side == 0 else "α′ ⊢ α ⊕ α′", C)
    return check


def _least_upper_bound(P, C):
    err = _arity(P, 2) or _kinds(P, Entailment, Entailment)
    if err:
        return err
    if P[0].right != P[1].right:
        return f"premises bound different formulas: {P[0].right} vs {P[1].right}"
    return _same(C, _safe(lambda: Entailment(BoolSum(P[0].left, P[1].left), P[0].right)))


def _identity_entailment_forms(phi: Formula) -> List[Entailment]:
    left_unit = Tensor(IdType(phi.source), phi)
    right_unit = Tensor(phi, IdType(phi.target))
    return [Entailment(left_unit, phi), Entailment(phi, left_unit),
            Entailment(right_unit, phi), Entailment(phi, right_unit)]


def _strip_unit(phi: Formula) -> Optional[Formula]:
    """α for y⊗α or α⊗x, otherwise None"""
    if isinstance(phi, Tensor):
        if isinstance(phi.left, IdType):
            return phi.right
        if isinstance(phi.right, IdType):
            return phi.left
    return None


def _identity_orthogonality_forms(phi: Formula) -> List[Orthogonality]:
    n = negate_formula(phi)
    return [Orthogonality(Tensor(phi, IdType(phi.target)), n),
            Orthogonality(n, TensorSum(IdType(phi.source), phi)),
            Orthogonality(Tensor(IdType(phi.source), phi), n),
            Orthogonality(n, TensorSum(phi, IdType(phi.target)))]


def _identity_candidates(C: Assertion) -> List[Formula]:
    """Formulas α whose identity forms could produce C"""
    found = []
    for phi in (C.left, C.right):
        found.append(phi)
        if isinstance(phi, (Tensor, TensorSum)):
            found.extend(phi.children())
    return found


def _identity(P, C):
    err = _arity(P, 0)
    if err:
        return err
    for phi in _identity_candidates(C):
        forms = _identity_entailment_forms(phi) if isinstance(C, Entailment) else _identity_orthogonality_forms(phi)
        if C in forms:
            return None
    return f"expected an identity law instance, got {C}"


def _monotonicity(connective):
    def check(P, C):
        err = _arity(P, 2) or _kinds(P, Entailment, Entailment)
        if err:
            return err
        return _same(C, _safe(lambda: Entailment(connective(P[0].left, P[1].left),
                                                 connective(P[0].right, P[1].right))))
    return check


# orthogonality side


def _logical_axiom(P, C):
    ok = isinstance(C, Orthogonality) and C.right == negate_formula(C.left)
    return _arity(P, 0) or _expect(ok, "α ⊥ ¬α", C)


def _cut(P, C):
    err = _arity(P, 2) or _kinds(P, Orthogonality, Orthogonality)
    if err:
        return err
    if P[0].right != negate_formula(P[1].left):
        return f"cut formula mismatch: {P[0].right} is not the negation of {P[1].left}"
    return _same(C, _safe(lambda: Orthogonality(P[0].left, P[1].right)))


def _symmetry(P, C):
    err = _arity(P, 1) or _kinds(P, Orthogonality)
    return err or _same(C, Orthogonality(P[0].right, P[0].left))


def _zero(P, C):
    ok = isinstance(C, Orthogonality) and C.left == Zero(C.right.target, C.right.source)
    return _arity(P, 0) or _expect(ok, "0 ⊥ α", C)


def _meet_rule(side: int):
    def check(P, C):
        err = _arity(P, 1) or _kinds(P, Orthogonality)
        if err:
            return err
        ok = (isinstance(C, Orthogonality) and isinstance(C.left, BoolProd)
              and C.left.children()[side] == P[0].left and C.right == P[0].right)
        return _expect(ok, "(α △ α′) ⊥ β" if side == 0 else "(α △ α′) ⊥ β from α′ ⊥ β", C)
    return check


def _join_rule(P, C):
    err = _arity(P, 2) or _kinds(P, Orthogonality, Orthogonality)
    if err:
        return err
    if P[0].right != P[1].right:
        return f"premises are orthogonal to different formulas: {P[0].right} vs {P[1].right}"
    return _same(C, _safe(lambda: Orthogonality(BoolSum(P[0].left, P[1].left), P[0].right)))


def _tensor_nabla(P, C):
    err = _arity(P, 2) or _kinds(P, Orthogonality, Orthogonality)
    if err:
        return err
    (b, d), (a, g) = (P[0].left, P[0].right), (P[1].left, P[1].right)
    return _same(C, _safe(lambda: Orthogonality(Tensor(b, a), TensorSum(g, d))))


# bridging


def _orthog_entail(P, C):
    err = _arity(P, 1)
    if err:
        return err
    p = P[0]
    if isinstance(p, Orthogonality):
        return _same(C, Entailment(p.left, negate_formula(p.right)))
    return _same(C, _safe(lambda: Orthogonality(p.left, negate_formula(p.right))))


def _orthogonality_definition(P, C):
    if len(P) == 2:
        err = _kinds(P, Entailment, Entailment)
        if err:
            return err
        first, second = P
        if not (isinstance(first.left, Tensor) and isinstance(first.right, IdType)):
            return f"premise 0 must be β⊗α ⊢ x, got {first}"
        b, a = first.left.left, first.left.right
        expected = _safe(lambda: Entailment(Tensor(a, b), IdType(a.source)))
        if second != expected:
            return f"premise 1 must be {expected}, got {second}"
        return _same(C, _safe(lambda: Orthogonality(b, a)))
    err = _arity(P, 1) or _kinds(P, Orthogonality)
    if err:
        return "orthogonality definition takes two entailments or one orthogonality"
    b, a = P[0].left, P[0].right
    forms = (Entailment(Tensor(b, a), IdType(b.source)), Entailment(Tensor(a, b), IdType(a.source)))
    return _expect(C in forms, f"{forms[0]} or {forms[1]}", C)


# ---------------------------------------------------------------- backward search steps


@dataclass
class SearchContext:
    language: Language
    pool: Dict[Tuple[str, str], List[Formula]]

    def middles(self, typing: Tuple[str, str]) -> List[Formula]:
        return self.pool.get(typing, [])


def _b_axiom(check: SchemaCheck) -> BackwardStep:
    def step(goal, ctx):
        if check([], goal) is None:
            yield []
    return step


def _b_transitivity(goal, ctx):
    if isinstance(goal, Entailment):
        for mid in ctx.middles(goal.left.typing):
            if mid != goal.left and mid != goal.right:
                yield [Entailment(goal.left, mid), Entailment(mid, goal.right)]


def _b_contravariance(goal, ctx):
    if isinstance(goal, Entailment):
        yield [Entailment(negate_formula(goal.right), negate_formula(goal.left))]


def _b_lub(goal, ctx):
    if isinstance(goal, Entailment) and isinstance(goal.left, BoolSum):
        yield [Entailment(goal.left.left, goal.right), Entailment(goal.left.right, goal.right)]


def _b_monotonicity(connective):
    def step(goal, ctx):
        if isinstance(goal, Entailment) and isinstance(goal.left, connective) and isinstance(goal.right, connective):
            if goal.left.left.typing == goal.right.left.typing:
                yield [Entailment(goal.left.left, goal.right.left), Entailment(goal.left.right, goal.right.right)]
    return step


def _b_cut(goal, ctx):
    if isinstance(goal, Orthogonality):
        for mid in ctx.middles(goal.left.typing):
            yield [Orthogonality(goal.left, negate_formula(mid)), Orthogonality(mid, goal.right)]


def _b_symmetry(goal, ctx):
    if isinstance(goal, Orthogonality):
        yield [Orthogonality(goal.right, goal.left)]


def _b_meet(side: int):
    def step(goal, ctx):
        if isinstance(goal, Orthogonality) and isinstance(goal.left, BoolProd):
            yield [Orthogonality(goal.left.children()[side], goal.right)]
    return step


def _b_join(goal, ctx):
    if isinstance(goal, Orthogonality) and isinstance(goal.left, BoolSum):
        yield [Orthogonality(goal.left.left, goal.right), Orthogonality(goal.left.right, goal.right)]


def _b_tensor_nabla(goal, ctx):
    if isinstance(goal, Orthogonality) and isinstance(goal.left, Tensor) and isinstance(goal.right, TensorSum):
        b, a = goal.left.left, goal.left.right
        g, d = goal.right.left, goal.right.right
        if b.typing == (d.target, d.source):
            yield [Orthogonality(b, d), Orthogonality(a, g)]


def _b_orthog_entail(goal, ctx):
    if isinstance(goal, Entailment):
        yield [Orthogonality(goal.left, negate_formula(goal.right))]
    else:
        yield [Entailment(goal.left, negate_formula(goal.right))]


def _b_orthogonality_definition(goal, ctx):
    if isinstance(goal, Orthogonality):
        b, a = goal.left, goal.right
        yield [Entailment(Tensor(b, a), IdType(b.source)), Entailment(Tensor(a, b), IdType(a.source))]
    elif isinstance(goal.left, Tensor) and isinstance(goal.right, IdType):
        p, q = goal.left.left, goal.left.right
        if p.typing == (q.target, q.source):
            yield [Orthogonality(p, q)]
            if p != q:
                yield [Orthogonality(q, p)]


# ---------------------------------------------------------------- registry


class RuleSet:
    """Named rule schemas; aliases with hyphens instead of spaces are accepted"""

    def __init__(self, rules: Iterable[Rule] = ()):
        self.rules: Dict[str, Rule] = {}
        for rule in rules:
            self.add(rule)

    def add(self, rule: Rule) -> "RuleSet":
        self.rules[rule.name] = rule
        return self

    def extended(self, *rules: Rule) -> "RuleSet":
        return RuleSet(list(self.rules.values()) + list(rules))

    def __contains__(self, name: str) -> bool:
        return self._resolve(name) is not None

    def __iter__(self) -> Iterator[Rule]:
        return iter(self.rules.values())

    def _resolve(self, name: str) -> Optional[Rule]:
        if name in self.rules:
            return self.rules[name]
        spaced = name.replace("-", " ").replace("_", " ")
        for rule in self.rules.values():
            if rule.name.replace("-", " ") == spaced:
                return rule
        return None

    def get(self, name: str) -> Rule:
        rule = self._resolve(name)
        if rule is None:
            raise UnknownRuleError(f"unknown rule '{name}'")
        return rule


ENTAILMENT_RULES = [
    Rule("reflexivity", "entailment", _reflexivity, _b_axiom(_reflexivity)),
    Rule("transitivity", "entailment", _transitivity, _b_transitivity),
    Rule("contravariance", "entailment", _contravariance, _b_contravariance),
    Rule("bottom", "entailment", _bottom, _b_axiom(_bottom)),
    Rule("1st u.b.", "entailment", _upper_bound(0), _b_axiom(_upper_bound(0))),
    Rule("2nd u.b.", "entailment", _upper_bound(1), _b_axiom(_upper_bound(1))),
    Rule("l.u.b.", "entailment", _least_upper_bound, _b_lub),
    Rule("monotonicity", "entailment", _monotonicity(Tensor), _b_monotonicity(Tensor)),
    Rule("∇-monotonicity", "entailment", _monotonicity(TensorSum), _b_monotonicity(TensorSum)),
]

ORTHOGONALITY_RULES = [
    Rule("logical axiom", "orthogonality", _logical_axiom, _b_axiom(_logical_axiom)),
    Rule("cut", "orthogonality", _cut, _b_cut),
    Rule("symmetry", "orthogonality", _symmetry, _b_symmetry),
    Rule("zero", "orthogonality", _zero, _b_axiom(_zero)),
    Rule("1st △", "orthogonality", _meet_rule(0), _b_meet(0)),
    Rule("2nd △", "orthogonality", _meet_rule(1), _b_meet(1)),
    Rule("⊕", "orthogonality", _join_rule, _b_join),
    Rule("⊗∇", "orthogonality", _tensor_nabla, _b_tensor_nabla),
]

BRIDGE_RULES = [
    Rule("identity", "both", _identity, _b_axiom(_identity)),
    Rule("orthog-entail", "both", _orthog_entail, _b_orthog_entail),
    Rule("orthogonality definition", "both", _orthogonality_definition, _b_orthogonality_definition),
]

DEFAULT_RULES = RuleSet(ENTAILMENT_RULES + ORTHOGONALITY_RULES + BRIDGE_RULES)


def _weakening(P, C):
    ok = isinstance(C, Entailment) and C.right == _safe(lambda: Tensor(C.left, C.left))
    return _arity(P, 0) or _expect(ok, "α ⊢ α ⊗ α", C)


# Not a rule of the calculus: a contraction-style axiom used as a negative control.
WEAKENING = Rule("weakening", "entailment", _weakening, _b_axiom(_weakening))


# ---------------------------------------------------------------- checking


def check_derivation(L: Language, d: Derivation, rules: RuleSet = DEFAULT_RULES) -> Report:
    """Check every node against its schema; the first failing node (pre-order) is reported first"""
    report = Report(f"derivation of {d.conclusion}")
    check = report.check("derivation")
    for path, n in d.nodes():
        rule = rules.get(n.rule)
        symbols_ok = L.contains(n.conclusion.left) and L.contains(n.conclusion.right)
        if not symbols_ok:
            check.record(False, f"node {path} ({n.rule}): conclusion {n.conclusion} leaves the language")
            continue
        problem = rule.check([p.conclusion for p in n.premises], n.conclusion)
        check.record(problem is None, lambda: f"node {path} ({n.rule}): {problem}")
    if not check.passed:
        logger.debug(f"derivation rejected: {check.witnesses[0]}")
    return report


def first_failure(report: Report) -> Optional[str]:
    check = report["derivation"]
    return check.witnesses[0] if check.witnesses else None


# ---------------------------------------------------------------- bounded proof search


def _subformulas(formulas: Iterable[Formula]) -> List[Formula]:
    seen: Dict[Formula, None] = {}
    for phi in formulas:
        for sub in phi.walk():
            seen.setdefault(sub)
            seen.setdefault(negate_formula(sub))
    return list(seen)


def build_pool(L: Language, goal: Assertion) -> Dict[Tuple[str, str], List[Formula]]:
    """Middle formulas for transitivity and cut: subformulas of the goal, literals, units"""
    candidates = _subformulas([goal.left, goal.right]) + L.literals()
    for y in L.types:
        candidates.append(IdType(y))
        for x in L.types:
            candidates.extend([Zero(y, x), One(y, x)])
    pool: Dict[Tuple[str, str], List[Formula]] = {}
    for phi in dict.fromkeys(candidates):
        pool.setdefault(phi.typing, []).append(phi)
    return pool


def _canonical_steps(goal: Assertion) -> Iterator[Tuple[Derivation, Assertion, bool]]:
    """Identity-law rewrites of an entailment goal: (identity node, residual goal, node-first)"""
    if not isinstance(goal, Entailment):
        return
    stripped = _strip_unit(goal.left)
    if stripped is not None and stripped.typing == goal.left.typing:
        yield node("identity", Entailment(goal.left, stripped)), Entailment(stripped, goal.right), True
    stripped = _strip_unit(goal.right)
    if stripped is not None and stripped.typing == goal.right.typing:
        yield node("identity", Entailment(stripped, goal.right)), Entailment(goal.left, stripped), False


def prove_bounded(L: Language, goal: Assertion, depth: Optional[int] = None,
                  rules: RuleSet = DEFAULT_RULES) -> Optional[Derivation]:
    """Backward search over the rule schemas; returns a derivation of depth ≤ depth or None"""
    depth = get_settings().default_depth if depth is None else depth
    L.require(goal.left, goal.right)
    ctx = SearchContext(L, build_pool(L, goal))
    ordered = sorted(rules, key=lambda r: r.backward is None)
    failed: Dict[Assertion, int] = {}

    def search(g: Assertion, budget: int) -> Optional[Derivation]:
        if budget <= 0 or failed.get(g, 0) >= budget:
            return None
        found = attempt(g, budget)
        if found is None:
            failed[g] = max(failed.get(g, 0), budget)
        return found

    def attempt(g: Assertion, budget: int) -> Optional[Derivation]:
        # axioms first so shallow proofs win
        for rule in ordered:
            if rule.backward is not None and rule.check([], g) is None:
                return node(rule.name, g)
        if budget == 1:
            return None
        for unit, residual, unit_first in _canonical_steps(g):
            rest = search(residual, budget - 1)
            if rest is not None:
                premises = (unit, rest) if unit_first else (rest, unit)
                return Derivation("transitivity", premises, g)
        for rule in ordered:
            if rule.backward is None:
                continue
            for premises in rule.backward(g, ctx):
                if not premises:
                    continue
                subproofs = []
                for p in premises:
                    sub = search(p, budget - 1)
                    if sub is None:
                        break
                    subproofs.append(sub)
                else:
                    return Derivation(rule.name, tuple(subproofs), g)
        return None

    try:
        result = search(goal, depth)
    except IllTypedFormulaError as e:
        logger.error(f"proof search produced an ill-typed goal: {e}")
        return None
    if result is not None:
        logger.debug(f"proved {goal} with {result.size} nodes")
    return result


class Equivalence(Enum):
    EQUIVALENT = "equivalent"
    INEQUIVALENT_BY_MODEL = "inequivalent_by_model"
    UNKNOWN = "unknown"


def equal_modulo(L: Language, phi: Formula, psi: Formula, depth: Optional[int] = None,
                 structures: Sequence = ()) -> Equivalence:
    """Bounded approximation of logical equivalence; structures need an ``interpret`` method"""
    if phi.typing != psi.typing:
        raise IllTypedFormulaError(f"cannot compare {phi.typing} with {psi.typing}")
    if prove_bounded(L, Entailment(phi, psi), depth) and prove_bounded(L, Entailment(psi, phi), depth):
        return Equivalence.EQUIVALENT
    for structure in structures:
        if structure.interpret(phi) != structure.interpret(psi):
            return Equivalence.INEQUIVALENT_BY_MODEL
    return Equivalence.UNKNOWN


# ---------------------------------------------------------------- derived transformations


def derive_nabla_monotonicity(first: Derivation, second: Derivation) -> Derivation:
    """β∇α ⊢ δ∇γ from β ⊢ δ and α ⊢ γ using only monotonicity of ⊗ and contravariance"""
    b, d = first.conclusion.left, first.conclusion.right
    a, g = second.conclusion.left, second.conclusion.right
    neg_first = node("contravariance", Entailment(negate_formula(d), negate_formula(b)), first)
    neg_second = node("contravariance", Entailment(negate_formula(g), negate_formula(a)), second)
    inner = node("monotonicity",
                 Entailment(Tensor(negate_formula(g), negate_formula(d)), Tensor(negate_formula(a), negate_formula(b))),
                 neg_second, neg_first)
    return node("contravariance", Entailment(TensorSum(b, a), TensorSum(d, g)), inner)


def lift_vector_entailment(components: Sequence[Derivation], target: Optional[str] = None) -> Derivation:
    """From αᵢ ⊢ βᵢ componentwise, a derivation of ⊗α ⊢ ⊗β by repeated monotonicity"""
    if not components and target is None:
        raise IllTypedFormulaError("an empty vector needs a target type")
    x = components[-1].conclusion.right.target if components else target
    unit = IdType(x)
    current = node("reflexivity", Entailment(unit, unit))
    for d in reversed(components):
        left = Tensor(d.conclusion.left, current.conclusion.left)
        right = Tensor(d.conclusion.right, current.conclusion.right)
        current = node("monotonicity", Entailment(left, right), d, current)
    return current


# ---------------------------------------------------------------- random generation


class FormulaGenerator:
    """Seeded random formulas, sequents and derivations over a language"""

    def __init__(self, L: Language, seed: Optional[int] = None):
        self.L = L
        self.rng = random.Random(get_settings().default_seed if seed is None else seed)
        self._literals: Dict[Tuple[str, str], List[Formula]] = {}
        for lit in L.literals():
            self._literals.setdefault(lit.typing, []).append(lit)

    def leaf(self, y: str, x: str) -> Formula:
        options: List[Formula] = list(self._literals.get((y, x), []))
        options += [Zero(y, x), One(y, x)]
        if y == x:
            options.append(IdType(y))
        weights = [4 if isinstance(o, (Atom, DualAtom)) else 1 for o in options]
        return self.rng.choices(options, weights)[0]

    def formula(self, y: Optional[str] = None, x: Optional[str] = None, depth: int = 3) -> Formula:
        y = self.rng.choice(self.L.types) if y is None else y
        x = self.rng.choice(self.L.types) if x is None else x
        if depth <= 0 or self.rng.random() < 0.3:
            return self.leaf(y, x)
        kind = self.rng.choice(("ot", "ns", "bs", "bp"))
        if kind in ("ot", "ns"):
            mid = self.rng.choice(self.L.types)
            return CONNECTIVES[kind](self.formula(y, mid, depth - 1), self.formula(mid, x, depth - 1))
        return CONNECTIVES[kind](self.formula(y, x, depth - 1), self.formula(y, x, depth - 1))

    def sequent(self, length: int = 3, depth: int = 2) -> Sequent:
        types = [self.rng.choice(self.L.types) for _ in range(length + 1)]
        if length == 0:
            return Sequent.empty(types[0])
        return Sequent(tuple(self.formula(a, b, depth) for a, b in zip(types, types[1:])))

    # derivations

    def derivation(self, depth: int = 4) -> Derivation:
        if depth <= 1:
            return self._axiom()
        choice = self.rng.randrange(10)
        if choice == 0:
            return self._axiom()
        if choice in (1, 2):
            d = self.derivation(depth - 1)
            return self._unary(d)
        if choice == 3:
            d = self._entailment(depth - 1)
            return self._glue_transitivity(d, depth - 1)
        if choice == 4:
            d = self._entailment(depth - 1)
            e = self.to_right(d.conclusion.right, depth - 1)
            return node("l.u.b.", Entailment(BoolSum(d.conclusion.left, e.conclusion.left), d.conclusion.right), d, e)
        if choice == 5:
            return self._monotone(depth, Tensor, "monotonicity")
        if choice == 6:
            d = self._orthogonality(depth - 1)
            e = self.orth_from_left(negate_formula(d.conclusion.right), depth - 1)
            return node("cut", Orthogonality(d.conclusion.left, e.conclusion.right), d, e)
        if choice == 7:
            d = self._orthogonality(depth - 1)
            e = self.orth_to_right(d.conclusion.right, depth - 1)
            return node("⊕", Orthogonality(BoolSum(d.conclusion.left, e.conclusion.left), d.conclusion.right), d, e)
        if choice == 8:
            d = self._orthogonality(depth - 1)
            b, dd = d.conclusion.left, d.conclusion.right
            a = self.formula(b.target, self.rng.choice(self.L.types), 1)
            e = self.orth_from_left(a, depth - 1)
            return node("⊗∇", Orthogonality(Tensor(b, a), TensorSum(e.conclusion.right, dd)), d, e)
        if depth < 3:
            return self._axiom()
        d = self._orthogonality(depth - 2)
        b, a = d.conclusion.left, d.conclusion.right
        first = node("orthogonality definition", Entailment(Tensor(b, a), IdType(b.source)), d)
        second = node("orthogonality definition", Entailment(Tensor(a, b), IdType(a.source)), d)
        return node("orthogonality definition", Orthogonality(b, a), first, second)

    def _glue_transitivity(self, d: Derivation, depth: int) -> Derivation:
        e = self.from_left(d.conclusion.right, depth)
        return node("transitivity", Entailment(d.conclusion.left, e.conclusion.right), d, e)

    def _monotone(self, depth: int, connective, rule: str) -> Derivation:
        d = self._entailment(depth - 1)
        start = d.conclusion.left.target
        e = self.from_left(self.formula(start, self.rng.choice(self.L.types), 1), depth - 1)
        return node(rule, Entailment(connective(d.conclusion.left, e.conclusion.left),
                                     connective(d.conclusion.right, e.conclusion.right)), d, e)

    def _axiom(self) -> Derivation:
        phi = self.formula(depth=2)
        choice = self.rng.randrange(7)
        if choice == 0:
            return node("reflexivity", Entailment(phi, phi))
        if choice == 1:
            return node("logical axiom", Orthogonality(phi, negate_formula(phi)))
        if choice == 2:
            return node("bottom", Entailment(Zero(*phi.typing), phi))
        if choice == 3:
            return node("zero", Orthogonality(Zero(phi.target, phi.source), phi))
        if choice == 4:
            other = self.formula(*phi.typing, depth=1)
            if self.rng.random() < 0.5:
                return node("1st u.b.", Entailment(phi, BoolSum(phi, other)))
            return node("2nd u.b.", Entailment(phi, BoolSum(other, phi)))
        if choice == 5:
            return node("identity", self.rng.choice(_identity_entailment_forms(phi)))
        return node("identity", self.rng.choice(_identity_orthogonality_forms(phi)))

    def _unary(self, d: Derivation) -> Derivation:
        c = d.conclusion
        if isinstance(c, Entailment):
            if self.rng.random() < 0.5:
                return node("contravariance", Entailment(negate_formula(c.right), negate_formula(c.left)), d)
            return node("orthog-entail", Orthogonality(c.left, negate_formula(c.right)), d)
        roll = self.rng.randrange(4)
        if roll == 0:
            return node("symmetry", Orthogonality(c.right, c.left), d)
        if roll == 1:
            return node("orthog-entail", Entailment(c.left, negate_formula(c.right)), d)
        other = self.formula(*c.left.typing, depth=1)
        if roll == 2:
            return node("1st △", Orthogonality(BoolProd(c.left, other), c.right), d)
        return node("2nd △", Orthogonality(BoolProd(other, c.left), c.right), d)

    def _entailment(self, depth: int) -> Derivation:
        if depth <= 1:
            phi = self.formula(depth=2)
            return node("reflexivity", Entailment(phi, phi))
        d = self.derivation(depth - 1)
        if isinstance(d.conclusion, Orthogonality):
            c = d.conclusion
            return node("orthog-entail", Entailment(c.left, negate_formula(c.right)), d)
        return d

    def _orthogonality(self, depth: int) -> Derivation:
        if depth <= 1:
            phi = self.formula(depth=2)
            return node("logical axiom", Orthogonality(phi, negate_formula(phi)))
        d = self.derivation(depth - 1)
        if isinstance(d.conclusion, Entailment):
            c = d.conclusion
            return node("orthog-entail", Orthogonality(c.left, negate_formula(c.right)), d)
        return d

    def from_left(self, phi: Formula, depth: int) -> Derivation:
        """Some derivation of φ ⊢ ψ"""
        roll = self.rng.randrange(5) if depth > 1 else self.rng.randrange(3)
        if roll == 0:
            return node("reflexivity", Entailment(phi, phi))
        if roll == 1:
            return node("1st u.b.", Entailment(phi, BoolSum(phi, self.formula(*phi.typing, depth=1))))
        if roll == 2:
            unit = Tensor(phi, IdType(phi.target)) if self.rng.random() < 0.5 else Tensor(IdType(phi.source), phi)
            return node("identity", Entailment(phi, unit))
        if roll == 3:
            return self._glue_transitivity(self.from_left(phi, depth - 1), depth - 1)
        # contravariance of something ending in ¬φ
        d = self.to_right(negate_formula(phi), depth - 1)
        return node("contravariance", Entailment(phi, negate_formula(d.conclusion.left)), d)

    def to_right(self, phi: Formula, depth: int) -> Derivation:
        """Some derivation of ψ ⊢ φ"""
        if depth <= 1 or self.rng.random() < 0.3:
            if self.rng.random() < 0.5:
                return node("bottom", Entailment(Zero(*phi.typing), phi))
            return node("reflexivity", Entailment(phi, phi))
        d = self.from_left(negate_formula(phi), depth - 1)
        return node("contravariance", Entailment(negate_formula(d.conclusion.right), phi), d)

    def orth_from_left(self, phi: Formula, depth: int) -> Derivation:
        """Some derivation of φ ⊥ ψ"""
        if depth <= 1 or self.rng.random() < 0.3:
            return node("logical axiom", Orthogonality(phi, negate_formula(phi)))
        d = self.from_left(phi, depth - 1)
        return node("orthog-entail", Orthogonality(phi, negate_formula(d.conclusion.right)), d)

    def orth_to_right(self, phi: Formula, depth: int) -> Derivation:
        """Some derivation of ψ ⊥ φ"""
        if depth <= 1:
            return node("logical axiom", Orthogonality(negate_formula(phi), phi))
        d = self.orth_from_left(phi, depth - 1)
        return node("symmetry", Orthogonality(d.conclusion.right, phi), d)

    def derivations(self, count: int, max_depth: Optional[int] = None) -> List[Derivation]:
        max_depth = get_settings().harness_max_depth if max_depth is None else max_depth
        return [self.derivation(self.rng.randint(1, max_depth)) for _ in range(count)]
