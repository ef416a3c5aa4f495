"""
Flowfix Module for DialecticKernel
Object lattices, term behavior, yin-yang reproduction fixpoints, flow decomposition
and Horn clause (Datalog) evaluation
"""

import logging
from dataclasses import dataclass, field
from itertools import count, product
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

import numpy as np
from tqdm import tqdm

from src.biposet import FiniteBiposet, TermRef, functional_terms
from src.comodal import Topotype, validate_topotype
from src.errors import (
    InvalidTopotypeError, NonGroundClauseError, SeparatorError, TypeMismatchError,
)
from src.heyting import HeytingModel
from src.order_core import AdjointVerdict, FinitePoset, MonotoneMap, check_adjoint_pair
from src.reports import Report

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------- separators and object lattices


def is_separator(M: FiniteBiposet, one: str) -> bool:
    """ψ∘s = ψ∘r for every ψ: 1→y forces s = r"""
    for y, x in product(M.types, repeat=2):
        table = M.comp[(one, y, x)]                       # [ψ, s]
        if table.shape[1] > 1 and np.unique(table, axis=1).shape[1] != table.shape[1]:
            return False
    return True


def find_separator(M: FiniteBiposet, preferred: Optional[str] = None) -> str:
    candidates = [preferred] if preferred is not None else sorted(M.types, key=lambda t: len(M.hom(t, t)))
    for t in candidates:
        if t in M.types and is_separator(M, t):
            return t
    raise SeparatorError(f"{M.name} has no separator type among {candidates}")


class ObjectLattice:
    """Obj(x) = hom(1, x) with the object order; elements are term indices"""

    def __init__(self, M: FiniteBiposet, separator: str, type: str, check: bool = True):
        if check and not is_separator(M, separator):
            raise SeparatorError(f"type {separator} of {M.name} does not separate terms")
        self.model = M
        self.separator = separator
        self.type = type
        self.homset = M.hom(separator, type)
        self.poset = FinitePoset(list(range(len(self.homset))), self.homset.le, f"Obj({type})")

    def __len__(self) -> int:
        return len(self.homset)

    def __iter__(self):
        return iter(self.objects())

    def objects(self) -> List[TermRef]:
        return self.model.terms(self.separator, self.type)

    def bottom(self) -> TermRef:
        return self.model.bottom(self.separator, self.type)

    def top(self) -> TermRef:
        return self.model.top(self.separator, self.type)


class FlowSpace:
    """Cached object lattices of one model around a designated separator"""

    def __init__(self, M: HeytingModel, separator: Optional[str] = None):
        self.model = M
        self.separator = find_separator(M, separator)
        self._lattices: Dict[str, ObjectLattice] = {}

    def objects(self, x: str) -> ObjectLattice:
        if x not in self._lattices:
            self._lattices[x] = ObjectLattice(self.model, self.separator, x, check=False)
        return self._lattices[x]

    def lattice_of(self, source: str, target: str) -> FinitePoset:
        """The poset hom(source, target); co-objects when the separator is the target"""
        if source == self.separator:
            return self.objects(target).poset
        h = self.model.hom(source, target)
        return FinitePoset(list(range(len(h))), h.le, f"CoObj({source})")


# ---------------------------------------------------------------- behavior


@dataclass
class Behavior:
    """Direct flow Obj^r = (·)∘r left adjoint to inverse flow Obj_r = (·)⟜r"""
    term: TermRef
    direct: MonotoneMap
    inverse: MonotoneMap
    verdict: AdjointVerdict


def behavior(F: FlowSpace, r: TermRef) -> Behavior:
    M, one = F.model, F.separator
    y, x = r.hom
    Oy, Ox = F.objects(y), F.objects(x)
    direct = MonotoneMap.from_function(Oy.poset, Ox.poset, lambda i: M.compose(TermRef(one, y, i), r).elem,
                                       f"Obj^{M.label(r)}")
    inverse = MonotoneMap.from_function(Ox.poset, Oy.poset, lambda i: M.right_imply(TermRef(one, x, i), r).elem,
                                        f"Obj_{M.label(r)}")
    return Behavior(r, direct, inverse, check_adjoint_pair(direct, inverse))


def behavior_functoriality(F: FlowSpace) -> Report:
    """Obj^{s∘r} = Obj^s·Obj^r, Obj_{s∘r} = Obj_r·Obj_s, identities act trivially, each pair adjoint"""
    M = F.model
    report = Report(f"behavior {M.name}")
    adjoint = report.check("behavior adjointness")
    units = report.check("behavior of identities")
    direct = report.check("direct flow functoriality")
    inverse = report.check("inverse flow contravariance")
    cache: Dict[TermRef, Behavior] = {}

    def of(t: TermRef) -> Behavior:
        if t not in cache:
            cache[t] = behavior(F, t)
        return cache[t]

    for t in M.all_terms():
        adjoint.record(of(t).verdict.is_adjoint, lambda: M.describe(t))
    for x in M.types:
        b = of(M.identity(x))
        units.record(b.direct.is_identity() and b.inverse.is_identity(), f"id at {x}")
    for z, y, x in product(M.types, repeat=3):
        for s in M.terms(z, y):
            for r in M.terms(y, x):
                sr = of(M.compose(s, r))
                direct.record(sr.direct.table == of(s).direct.then(of(r).direct).table,
                              lambda: f"s={M.describe(s)} r={M.describe(r)}")
                inverse.record(sr.inverse.table == of(r).inverse.then(of(s).inverse).table,
                               lambda: f"s={M.describe(s)} r={M.describe(r)}")
    return report


# ---------------------------------------------------------------- reproduction


@dataclass(frozen=True)
class DialecticalSystem:
    """A parallel pair s, r : y→x"""
    s: TermRef
    r: TermRef

    def __post_init__(self):
        if self.s.hom != self.r.hom:
            raise TypeMismatchError(f"system terms are not parallel: {self.s.hom} and {self.r.hom}")

    @property
    def source(self) -> str:
        return self.s.source

    @property
    def target(self) -> str:
        return self.s.target


YINYANG_VARIANTS = ("yinyang", "yangyin", "reverse")


def operator_carrier(F: FlowSpace, system: DialecticalSystem, variant: str = "yinyang") -> Tuple[str, str]:
    """The homset the chosen reproduction operator acts on"""
    one = F.separator
    if variant == "yinyang":
        return (one, system.target)
    if variant == "yangyin":
        return (one, system.source)
    if variant == "reverse":
        return (system.source, one)
    raise ValueError(f"unknown reproduction variant {variant!r}")


def yinyang(F: FlowSpace, system: DialecticalSystem, phi: TermRef, variant: str = "yinyang") -> TermRef:
    """☯ᵣˢ(φ) = (φ⟜r)∘s; yang-yin (φ∘s)⟜r; reverse time s∘(r⊸ψ) on co-objects"""
    M = F.model
    if phi.hom != operator_carrier(F, system, variant):
        raise TypeMismatchError(f"{variant} along {system.s.hom} does not act on hom{phi.hom}")
    if variant == "yinyang":
        return M.compose(M.right_imply(phi, system.r), system.s)
    if variant == "yangyin":
        return M.right_imply(M.compose(phi, system.s), system.r)
    return M.compose(system.s, M.left_imply(system.r, phi))


def reproduction_operator(F: FlowSpace, system: DialecticalSystem, variant: str = "yinyang") -> MonotoneMap:
    """The operator as a monotone self-map of its lattice (monotonicity is checked on construction)"""
    y, x = operator_carrier(F, system, variant)
    P = F.lattice_of(y, x)
    return MonotoneMap.from_function(P, P, lambda i: yinyang(F, system, TermRef(y, x, i), variant).elem,
                                     f"{variant}({F.model.label(system.s)},{F.model.label(system.r)})")


@dataclass
class FixpointResult:
    point: TermRef
    iterations: int
    mode: str
    extremal: bool
    fixpoints: int


def fixpoints(F: FlowSpace, system: DialecticalSystem, mode: str = "least",
              variant: str = "yinyang", exhaustive: bool = True) -> FixpointResult:
    """Kleene iteration from ⊥ (least) or ⊤ (greatest); extremality checked against every fixpoint"""
    if mode not in ("least", "greatest"):
        raise ValueError(f"unknown fixpoint mode {mode!r}")
    M = F.model
    y, x = operator_carrier(F, system, variant)
    op = reproduction_operator(F, system, variant)
    P = op.source
    current = M.bottom(y, x).elem if mode == "least" else M.top(y, x).elem
    steps = 0
    while True:
        nxt = op(current)
        steps += 1
        if nxt == current:
            break
        current = nxt
        if steps > len(P):
            raise AssertionError(f"{op.name} did not stabilize within {len(P)} steps")
    extremal, n_fixed = True, 0
    if exhaustive:
        for t in P:
            if op(t) == t:
                n_fixed += 1
                ok = P.leq(current, t) if mode == "least" else P.leq(t, current)
                extremal = extremal and ok
    logger.debug(f"{mode} fixpoint of {op.name} after {steps} steps")
    return FixpointResult(TermRef(y, x, current), steps, mode, extremal, n_fixed)


# ---------------------------------------------------------------- flow decomposition


def restrict_system(M: FiniteBiposet, system: DialecticalSystem, v: TermRef) -> DialecticalSystem:
    """(v∘s, v∘r) for a comonoid v at the source type"""
    return DialecticalSystem(M.compose(v, system.s), M.compose(v, system.r))


def _as_topotype(M: FiniteBiposet, V: Topotype) -> Topotype:
    report = validate_topotype(M, V.type, V.members)
    if not report.passed:
        raise InvalidTopotypeError(f"invalid topotype at {V.type}: {report.failed_checks()[0].line()}")
    return V


def flow_decompose(F: FlowSpace, system: DialecticalSystem, V: Topotype) -> Report:
    """☯ᵣˢ = ⋁_v ☯_{v∘r}^{v∘s} pointwise, with the prerequisite ⋁_v ☯ᵥᵛ = Id at the source"""
    M = F.model
    V = _as_topotype(M, V)
    if V.type != system.source:
        raise TypeMismatchError(f"topotype at {V.type} does not sit at the source {system.source}")
    report = Report(f"flow decomposition of ({M.label(system.s)}, {M.label(system.r)})")
    unity = report.check("comonoid flows join to identity")
    for psi in F.objects(system.source).objects():
        total = M.join_all(F.separator, system.source,
                           [yinyang(F, DialecticalSystem(v, v), psi) for v in V.members])
        unity.record(total == psi, lambda: f"ψ={M.label(psi)}")
    parts = [restrict_system(M, system, v) for v in V.members]
    decomposes = report.check("reproduction decomposes over the topotype")
    for phi in F.objects(system.target).objects():
        whole = yinyang(F, system, phi)
        joined = M.join_all(F.separator, system.target, [yinyang(F, part, phi) for part in parts])
        decomposes.record(whole == joined, lambda: f"φ={M.label(phi)}: {M.label(whole)} vs {M.label(joined)}")
    return report


def reproduction_laws(F: FlowSpace) -> Report:
    """Flow along r is decreasing, identity systems fix everything, functional flow equals comonoid flow"""
    M = F.model
    report = Report(f"reproduction {M.name}")
    decreasing = report.check("flow along r is decreasing")
    identity = report.check("identity system fixes every object")
    functional = report.check("functional flow equals interior comonoid flow")
    extremal = report.check("fixpoint extremality")
    for y, x in product(M.types, repeat=2):
        for r in M.terms(y, x):
            system = DialecticalSystem(r, r)
            for phi in F.objects(x).objects():
                decreasing.record(M.entails(yinyang(F, system, phi), phi),
                                  lambda: f"r={M.describe(r)} φ={M.label(phi)}")
            for mode in ("least", "greatest"):
                extremal.record(fixpoints(F, system, mode).extremal, lambda: f"{mode} r={M.describe(r)}")
        for f in functional_terms(M, y, x):
            u = M.compose(f.adjoint, f.term)                    # f^op∘f : x→x
            along_f, along_u = DialecticalSystem(f.term, f.term), DialecticalSystem(u, u)
            for phi in F.objects(x).objects():
                functional.record(yinyang(F, along_f, phi) == yinyang(F, along_u, phi),
                                  lambda: f"f={M.describe(f.term)} φ={M.label(phi)}")
    for x in M.types:
        system = DialecticalSystem(M.identity(x), M.identity(x))
        for phi in F.objects(x).objects():
            identity.record(yinyang(F, system, phi) == phi, lambda: f"φ={M.label(phi)}")
    return report


# ---------------------------------------------------------------- Horn clause programs


GroundAtom = Tuple[str, Tuple[str, ...]]


def atom_text(atom: GroundAtom) -> str:
    name, args = atom
    return f"{name}({','.join(args)})"


@dataclass(frozen=True)
class Predicate:
    name: str
    domains: Tuple[Tuple[str, ...], ...]

    @property
    def arity(self) -> int:
        return len(self.domains)


@dataclass(frozen=True)
class AtomPattern:
    """A predicate applied to constants and variables (capitalized names)"""
    predicate: str
    args: Tuple[str, ...]

    def variables(self) -> List[str]:
        return [a for a in self.args if is_variable(a)]

    def ground(self, binding: Dict[str, str]) -> GroundAtom:
        return (self.predicate, tuple(binding.get(a, a) if is_variable(a) else a for a in self.args))


@dataclass(frozen=True)
class ClauseSchema:
    head: AtomPattern
    body: Tuple[AtomPattern, ...] = ()
    line: int = 0


@dataclass(frozen=True)
class GroundClause:
    head: GroundAtom
    body: Tuple[GroundAtom, ...]

    def __str__(self) -> str:
        if not self.body:
            return f"{atom_text(self.head)}."
        return f"{atom_text(self.head)} :- {', '.join(atom_text(a) for a in self.body)}."


def is_variable(term: str) -> bool:
    return term[:1].isupper() or term.startswith("_")


def _rename_wildcards(schema: ClauseSchema) -> ClauseSchema:
    """Each anonymous ``_`` becomes its own variable"""
    counter = count(1)

    def fresh(pattern: AtomPattern) -> AtomPattern:
        args = tuple(f"_{next(counter)}" if a == "_" else a for a in pattern.args)
        return AtomPattern(pattern.predicate, args)

    return ClauseSchema(fresh(schema.head), tuple(fresh(b) for b in schema.body), schema.line)


@dataclass
class HornProgram:
    """Ground clauses Y over ground atoms X, with head matrix S and body matrix R (both Y×X booleans)"""
    predicates: Dict[str, Predicate]
    clauses: List[GroundClause]
    atoms: List[GroundAtom]
    S: np.ndarray = field(init=False, repr=False)
    R: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        index = {a: i for i, a in enumerate(self.atoms)}
        self.index = index
        self.S = np.zeros((len(self.clauses), len(self.atoms)), dtype=bool)
        self.R = np.zeros((len(self.clauses), len(self.atoms)), dtype=bool)
        for c, clause in enumerate(self.clauses):
            self.S[c, index[clause.head]] = True
            for a in clause.body:
                self.R[c, index[a]] = True

    def vector(self, atoms: Iterable[GroundAtom]) -> np.ndarray:
        phi = np.zeros(len(self.atoms), dtype=bool)
        for a in atoms:
            phi[self.index[a]] = True
        return phi

    def decode(self, phi: np.ndarray) -> List[GroundAtom]:
        return [self.atoms[i] for i in np.flatnonzero(phi)]

    def facts(self) -> List[GroundAtom]:
        return [c.head for c in self.clauses if not c.body]


def _domain_of(predicates: Dict[str, Predicate], pattern: AtomPattern, line: int) -> List[Tuple[str, Tuple[str, ...]]]:
    pred = predicates.get(pattern.predicate)
    if pred is None:
        raise NonGroundClauseError(f"line {line}: undeclared predicate {pattern.predicate}")
    if pred.arity != len(pattern.args):
        raise NonGroundClauseError(f"line {line}: {pattern.predicate} takes {pred.arity} arguments")
    for arg, domain in zip(pattern.args, pred.domains):
        if not is_variable(arg) and arg not in domain:
            raise NonGroundClauseError(f"line {line}: constant {arg} is outside the domain of {pattern.predicate}")
    return list(zip(pattern.args, pred.domains))


def ground_program(predicates: Dict[str, Predicate], schemas: Sequence[ClauseSchema]) -> HornProgram:
    """Ground range-restricted clauses over the finite predicate domains"""
    clauses: Dict[GroundClause, None] = {}
    for schema in map(_rename_wildcards, schemas):
        head_vars = set(schema.head.variables())
        body_vars = {v for b in schema.body for v in b.variables()}
        if head_vars - body_vars:
            raise NonGroundClauseError(f"line {schema.line}: head variables {sorted(head_vars - body_vars)} "
                                       "do not occur in the body")
        ranges: Dict[str, Set[str]] = {}
        for pattern in (schema.head,) + schema.body:
            for arg, domain in _domain_of(predicates, pattern, schema.line):
                if is_variable(arg):
                    ranges[arg] = ranges[arg] & set(domain) if arg in ranges else set(domain)
        names = sorted(ranges)
        for values in product(*(sorted(ranges[v]) for v in names)):
            binding = dict(zip(names, values))
            body = tuple(dict.fromkeys(b.ground(binding) for b in schema.body))
            clauses.setdefault(GroundClause(schema.head.ground(binding), body))
    atoms = [(p.name, args) for p in predicates.values() for args in product(*p.domains)]
    program = HornProgram(dict(predicates), list(clauses), atoms)
    logger.info(f"Grounded {len(schemas)} clauses into {len(program.clauses)} over {len(atoms)} atoms")
    return program


# boolean matrix flow, the mat(bool2) formulas specialised to numpy


def bool_compose(phi: np.ndarray, T: np.ndarray) -> np.ndarray:
    """(φ∘T)_a = ⋁_c φ_c ∧ T[c, a]"""
    return (phi[:, None] & T).any(axis=0)


def bool_right_imply(phi: np.ndarray, T: np.ndarray) -> np.ndarray:
    """(φ⟜T)_c = ⋀_a (T[c, a] ⇒ φ_a)"""
    return (~T | phi[None, :]).all(axis=1)


def bool_left_imply(T: np.ndarray, psi: np.ndarray) -> np.ndarray:
    """(T⊸ψ)_a = ⋀_c (T[c, a] ⇒ ψ_c) for a co-object ψ over the rows of T"""
    return (~T | psi[:, None]).all(axis=0)


def horn_step(program: HornProgram, phi: np.ndarray) -> np.ndarray:
    """☯_R^S(φ) = (φ⟜R)∘S"""
    return bool_compose(bool_right_imply(phi, program.R), program.S)


@dataclass
class HornResult:
    atoms: List[GroundAtom]
    iterations: int

    def lines(self) -> List[str]:
        return sorted(atom_text(a) for a in self.atoms)


def horn_eval(program: HornProgram, progress: bool = False) -> HornResult:
    """Least fixpoint of the reproduction operator from the empty database"""
    phi = np.zeros(len(program.atoms), dtype=bool)
    steps = 0
    bar = tqdm(total=len(program.atoms) + 1, desc="fixpoint", disable=not progress)
    while True:
        nxt = horn_step(program, phi)
        steps += 1
        bar.update(1)
        if np.array_equal(nxt, phi):
            break
        phi = nxt
    bar.close()
    logger.info(f"Horn program reached its fixpoint after {steps} iterations with {int(phi.sum())} atoms")
    return HornResult(program.decode(phi), steps)


def naive_bottom_up(program: HornProgram) -> HornResult:
    """Set-based semi-naive immediate consequence evaluation"""
    derived: Set[GroundAtom] = set()
    delta: Set[GroundAtom] = set(program.facts())
    rounds = 0
    while delta:
        rounds += 1
        derived |= delta
        delta = {c.head for c in program.clauses
                 if c.body and c.head not in derived and all(b in derived for b in c.body)}
    return HornResult(sorted(derived), rounds)


def and_process_decomposition(program: HornProgram, blocks: Optional[Sequence[Sequence[int]]] = None,
                              samples: Iterable[np.ndarray] = ()) -> Report:
    """The reproduction operator is the join of its restrictions to blocks of clauses"""
    blocks = blocks or [[c] for c in range(len(program.clauses))]
    covered = sorted(c for b in blocks for c in b)
    report = Report("AND-process decomposition")
    partition = report.check("clause blocks partition the program")
    partition.record(covered == list(range(len(program.clauses))), f"blocks cover {covered}")
    decomposition = report.check("reproduction decomposes over clause blocks")
    inputs = list(samples)
    phi = np.zeros(len(program.atoms), dtype=bool)
    while True:
        inputs.append(phi)
        nxt = horn_step(program, phi)
        if np.array_equal(nxt, phi):
            break
        phi = nxt
    inputs.append(np.ones(len(program.atoms), dtype=bool))
    for phi_in in inputs:
        whole = horn_step(program, phi_in)
        joined = np.zeros_like(whole)
        for block in blocks:
            mask = np.zeros(len(program.clauses), dtype=bool)
            mask[list(block)] = True
            R_v = program.R & mask[:, None]
            S_v = program.S & mask[:, None]
            joined |= bool_compose(bool_right_imply(phi_in, R_v), S_v)
        decomposition.record(bool(np.array_equal(whole, joined)),
                             lambda: f"input {[atom_text(a) for a in program.decode(phi_in)]}")
    return report
