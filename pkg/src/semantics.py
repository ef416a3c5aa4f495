"""
Semantics Module for DialecticKernel
Classical structures: interpretation of formulas in Boolean categories, validity and soundness checks
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from src.biposet import TermRef, orthogonal
from src.calculus import (
    DEFAULT_RULES, WEAKENING, Assertion, Atom, BoolProd, BoolSum, Derivation, DualAtom, Entailment,
    Formula, IdType, Language, One, RuleSet, Sequent, Tensor, TensorSum, Zero,
    check_derivation, make_language, node, sequent_product, sequent_sum, vector_negation,
)
from src.config import get_settings
from src.errors import CapabilityError, ModelConstructionError, TypeMismatchError, UnmappedSymbolError
from src.heyting import BooleanCenterModel, HeytingModel, boolean_center, validate_boolean_category
from src.models import build_model
from src.reports import Report

logger = logging.getLogger(__name__)


@dataclass
class ClassicalStructure:
    """A Boolean category with an interpretation of type symbols and atoms"""
    name: str
    model: BooleanCenterModel
    type_map: Dict[str, str]
    atom_map: Dict[str, TermRef]
    _cache: Dict[Formula, TermRef] = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        for symbol, target in self.type_map.items():
            if target not in self.model.types:
                raise UnmappedSymbolError(f"type {symbol} -> {target}: no such type in {self.model.name}")

    def check_language(self, L: Language) -> None:
        """Every symbol of L is mapped and atoms land in the right homsets"""
        for y in L.types:
            if y not in self.type_map:
                raise UnmappedSymbolError(f"{self.name}: type symbol {y} is not mapped")
        for name, symbol in L.atoms.items():
            term = self.atom_map.get(name)
            if term is None:
                raise UnmappedSymbolError(f"{self.name}: atom {name} is not mapped")
            expected = (self.type_map[symbol.source], self.type_map[symbol.target])
            if term.hom != expected:
                raise TypeMismatchError(f"{self.name}: atom {name} must land in hom{expected}, got hom{term.hom}")

    def _type(self, symbol: str) -> str:
        try:
            return self.type_map[symbol]
        except KeyError:
            raise UnmappedSymbolError(f"{self.name}: type symbol {symbol} is not mapped")

    def _atom(self, name: str) -> TermRef:
        try:
            return self.atom_map[name]
        except KeyError:
            raise UnmappedSymbolError(f"{self.name}: atom {name} is not mapped")

    def interpret(self, phi: Formula) -> TermRef:
        cached = self._cache.get(phi)
        if cached is not None:
            return cached
        B = self.model
        if isinstance(phi, Atom):
            result = self._atom(phi.name)
        elif isinstance(phi, DualAtom):
            result = B.negate(self._atom(phi.name))
        elif isinstance(phi, IdType):
            result = B.identity(self._type(phi.type))
        elif isinstance(phi, Zero):
            result = B.zero(self._type(phi.source), self._type(phi.target))
        elif isinstance(phi, One):
            result = B.one(self._type(phi.source), self._type(phi.target))
        elif isinstance(phi, Tensor):
            result = B.tensor(self.interpret(phi.left), self.interpret(phi.right))
        elif isinstance(phi, TensorSum):
            result = B.nabla(self.interpret(phi.left), self.interpret(phi.right))
        elif isinstance(phi, BoolSum):
            result = B.oplus(self.interpret(phi.left), self.interpret(phi.right))
        elif isinstance(phi, BoolProd):
            result = B.triangle(self.interpret(phi.left), self.interpret(phi.right))
        else:
            raise TypeMismatchError(f"cannot interpret {phi!r}")
        expected = (self._type(phi.source), self._type(phi.target))
        if result.hom != expected:
            raise TypeMismatchError(f"{phi} interpreted in hom{result.hom}, expected hom{expected}")
        self._cache[phi] = result
        return result

    def describe(self) -> str:
        atoms = ", ".join(f"{a}={self.model.label(t)}" for a, t in sorted(self.atom_map.items()))
        return f"{self.name} [{atoms}]"

    def with_atoms(self, atom_map: Dict[str, TermRef], name: Optional[str] = None) -> "ClassicalStructure":
        merged = dict(self.atom_map)
        merged.update(atom_map)
        return ClassicalStructure(name or self.name, self.model, self.type_map, merged)


def interpret(S: ClassicalStructure, phi: Formula) -> TermRef:
    return S.interpret(phi)


def interpret_sequent(S: ClassicalStructure, alpha: Sequent, polarity: str = "polar") -> TermRef:
    """ℑ_⊗ through the tensor product term, ℑ_∇ through the tensor sum term"""
    if polarity == "polar":
        return S.interpret(sequent_product(alpha))
    if polarity == "antipolar":
        return S.interpret(sequent_sum(alpha))
    raise ValueError(f"unknown polarity {polarity!r}")


def polar_coherence(S: ClassicalStructure, alpha: Sequent) -> bool:
    """ℑ_∇(α) = ¬ℑ_⊗(vneg α)"""
    antipolar = interpret_sequent(S, alpha, "antipolar")
    return antipolar == S.model.negate(interpret_sequent(S, vector_negation(alpha), "polar"))


def is_valid(S: ClassicalStructure, A: Assertion) -> bool:
    if isinstance(A, Entailment):
        return S.model.entails(S.interpret(A.left), S.interpret(A.right))
    return orthogonal(S.model, S.interpret(A.right), S.interpret(A.left))


# ---------------------------------------------------------------- structures


@lru_cache(maxsize=16)
def boolean_model(descriptor: str) -> BooleanCenterModel:
    """B(H) for the Heyting model named by a descriptor, validated as a Boolean category"""
    H = build_model(descriptor)
    if not isinstance(H, HeytingModel):
        raise CapabilityError(f"{H.name} is not a Heyting model; structures need a Boolean center")
    B = boolean_center(H)
    report = validate_boolean_category(B)
    if not report.passed:
        raise ModelConstructionError(f"{B.name} is not a Boolean category: {report.failed_checks()[0].line()}")
    return B


def make_structure(descriptor: str, type_map: Dict[str, str], atom_labels: Dict[str, str],
                   L: Optional[Language] = None, name: Optional[str] = None) -> ClassicalStructure:
    """Bind type symbols to model types and atoms to term labels of B(descriptor)"""
    B = boolean_model(descriptor)
    L = L or harness_language()
    atoms: Dict[str, TermRef] = {}
    for atom, label in atom_labels.items():
        if atom not in L.atoms:
            raise UnmappedSymbolError(f"atom {atom} is not in the language")
        symbol = L.atoms[atom]
        y, x = type_map.get(symbol.source), type_map.get(symbol.target)
        if y is None or x is None:
            raise UnmappedSymbolError(f"atom {atom}: types {symbol.source}, {symbol.target} are not mapped")
        atoms[atom] = B.term(y, x, label)
    S = ClassicalStructure(name or B.name, B, dict(type_map), atoms)
    S.check_language(L)
    return S


HARNESS_LANGUAGE_ATOMS = (("a", "y", "x"), ("b", "x", "y"), ("c", "x", "x"))


def harness_language() -> Language:
    return make_language(("y", "x"), HARNESS_LANGUAGE_ATOMS)


# descriptor, type map, atom labels
DEFAULT_STRUCTURES = (
    ("center:rel:2,2", {"y": "t0", "x": "t1"}, {"a": "{01,10}", "b": "{00,11}", "c": "{01,10}"}),
    ("rel:2", {"y": "t0", "x": "t0"}, {"a": "{01,10}", "b": "{00,01,10,11}", "c": "{00,11}"}),
    ("cyclic:3", {"y": "*", "x": "*"}, {"a": "{1}", "b": "{0,1,2}", "c": "{2}"}),
    ("cyclic:2", {"y": "*", "x": "*"}, {"a": "{1}", "b": "{}", "c": "{0,1}"}),
)


def default_structures(L: Optional[Language] = None) -> List[ClassicalStructure]:
    L = L or harness_language()
    return [make_structure(d, types, atoms, L, name=f"B({d})") for d, types, atoms in DEFAULT_STRUCTURES]


# ---------------------------------------------------------------- soundness


def _check_against(S: ClassicalStructure, derivations: Sequence[Derivation]) -> Tuple[int, List[str], int]:
    total, bad, count = 0, [], 0
    for k, d in enumerate(derivations):
        for path, n in d.nodes():
            total += 1
            if not is_valid(S, n.conclusion):
                count += 1
                if len(bad) < get_settings().max_witnesses:
                    bad.append(f"derivation {k} node {path} ({n.rule}): {n.conclusion} fails in {S.describe()}")
    return total, bad, count


def soundness_harness(L: Language, derivations: Sequence[Derivation], structures: Sequence[ClassicalStructure],
                      rules: RuleSet = DEFAULT_RULES, jobs: Optional[int] = None) -> Report:
    """Every derived assertion (every node, not only roots) must hold in every structure"""
    report = Report("soundness")
    well_formed = report.check("derivations well-formed")
    accepted = []
    for k, d in enumerate(derivations):
        checked = check_derivation(L, d, rules)
        if well_formed.record(checked.passed, lambda: f"derivation {k}: {checked['derivation'].witnesses[0]}"):
            accepted.append(d)
    for S in structures:
        S.check_language(L)
    jobs = jobs or get_settings().jobs
    with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
        results = list(pool.map(lambda S: _check_against(S, accepted), structures))
    sound = report.check("soundness")
    for total, bad, count in results:
        sound.record_many(total, bad, bad_count=count)
    if sound.failures:
        logger.error(f"Soundness violated: {sound.witnesses[0]}")
    else:
        logger.info(f"Soundness harness: {len(accepted)} derivations valid in {len(structures)} structures")
    return report


def weakening_instances(L: Language) -> List[Derivation]:
    """Single-node α ⊢ α⊗α derivations for every endo literal and unit of L"""
    found = []
    for lit in L.literals() + [IdType(t) for t in L.types]:
        if lit.source == lit.target:
            found.append(node(WEAKENING.name, Entailment(lit, Tensor(lit, lit))))
    return found


def negative_control(L: Language, structures: Sequence[ClassicalStructure]) -> Report:
    """The harness run with a non-linear weakening axiom added; soundness is expected to FAIL"""
    rules = DEFAULT_RULES.extended(WEAKENING)
    return soundness_harness(L, weakening_instances(L), structures, rules=rules)


# ---------------------------------------------------------------- tautology search


@dataclass
class TautologyVerdict:
    """``refuted`` carries a separating structure; unrefuted is not a proof of tautology"""
    refuted: bool
    structure: Optional[ClassicalStructure] = None
    assignments: int = 0

    def __str__(self) -> str:
        if self.refuted:
            return f"refuted by {self.structure.describe()}"
        return f"unrefuted after {self.assignments} assignments"


def _atoms_of(A: Assertion) -> List[str]:
    names = set()
    for side in (A.left, A.right):
        for n in side.walk():
            if isinstance(n, (Atom, DualAtom)):
                names.add(n.name)
    return sorted(names)


def tautology_semidecision(L: Language, A: Assertion, structures: Iterable[ClassicalStructure],
                           max_assignments: Optional[int] = None) -> TautologyVerdict:
    """Search every assignment of the atoms of A in each structure for a counter-model"""
    limit = max_assignments or get_settings().max_assignments
    names = _atoms_of(A)
    tried = 0
    for S in structures:
        homsets = []
        for a in names:
            symbol = L.atoms[a]
            homsets.append(S.model.terms(S._type(symbol.source), S._type(symbol.target)))
        for choice in product(*homsets):
            if tried >= limit:
                logger.warning(f"tautology search stopped after {tried} assignments")
                return TautologyVerdict(False, None, tried)
            tried += 1
            candidate = S.with_atoms(dict(zip(names, choice)))
            if not is_valid(candidate, A):
                return TautologyVerdict(True, candidate, tried)
    return TautologyVerdict(False, None, tried)
