"""
Comodal Module for DialecticKernel
Comonoids and the affirmation modality, Hoare triples, domains, topotypes and topomatrices,
flow decomposition and the derived program constructs
"""

import logging
from dataclasses import dataclass, field
from functools import reduce
from itertools import product
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Tuple


from src.biposet import FiniteBiposet, TermRef, functional_adjoint
from src.errors import (
    FrameMismatchError, InvalidTopotypeError, NotFunctionalError, StandardizationError, TypeMismatchError,
)
from src.heyting import HeytingModel
from src.order_core import AdjointVerdict, FinitePoset, MonotoneMap, check_adjoint_pair
from src.reports import Report

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Comonoid:
    type: str
    term: TermRef


def is_comonoid(M: FiniteBiposet, u: TermRef) -> bool:
    if u.source != u.target:
        return False
    return M.entails(u, M.identity(u.source)) and M.compose(u, u) == u


def as_comonoid(M: FiniteBiposet, u: TermRef) -> Comonoid:
    if not is_comonoid(M, u):
        raise StandardizationError(f"{M.describe(u)} is not a comonoid")
    return Comonoid(u.source, u)


@dataclass
class ComonoidLattice:
    """Ω(x): comonoids at x with join ∨ and meet ∘"""
    model: FiniteBiposet
    type: str
    members: List[TermRef]

    def __contains__(self, u: TermRef) -> bool:
        return u in self.members

    def __len__(self) -> int:
        return len(self.members)

    def join(self, u: TermRef, v: TermRef) -> TermRef:
        return self.model.join(u, v)

    def meet(self, u: TermRef, v: TermRef) -> TermRef:
        return self.model.compose(u, v)

    @property
    def top(self) -> TermRef:
        return self.model.identity(self.type)

    @property
    def bottom(self) -> TermRef:
        return self.model.bottom(self.type, self.type)

    def as_poset(self) -> FinitePoset:
        M = self.model
        return FinitePoset.from_function([M.label(u) for u in self.members],
                                         lambda a, b: M.entails(M.term(self.type, self.type, a),
                                                                M.term(self.type, self.type, b)),
                                         f"Ω({self.type})")


def comonoids_at(M: FiniteBiposet, x: str) -> ComonoidLattice:
    """All comonoids at x, after checking local standardization"""
    members = [u for u in M.terms(x, x) if is_comonoid(M, u)]
    for u, v in product(members, repeat=2):
        if not is_comonoid(M, M.compose(u, v)):
            raise StandardizationError(f"{M.label(u)}∘{M.label(v)} at {x} is not a comonoid in {M.name}")
    return ComonoidLattice(M, x, members)


def interior(M: FiniteBiposet, p: TermRef) -> TermRef:
    """⌞p⌟: the join of all comonoids below the endoterm p"""
    if p.source != p.target:
        raise TypeMismatchError(f"interior needs an endoterm, got {p.hom}")
    x = p.source
    below = [u for u in comonoids_at(M, x).members if M.entails(u, p)]
    result = M.join_all(x, x, below)
    if not is_comonoid(M, result):
        raise StandardizationError(f"join of comonoids below {M.label(p)} is not a comonoid")
    return result


def comonoid_implication(M: HeytingModel, u: TermRef, v: TermRef) -> TermRef:
    """u ⇒ v = ⌞u⊸v⌟"""
    return interior(M, M.left_imply(u, v))


def comonoid_negation(M: HeytingModel, v: TermRef) -> TermRef:
    """v ⇒ ⊥, the complement condition"""
    return comonoid_implication(M, v, M.bottom(v.source, v.source))


@dataclass
class ComonoidImages:
    direct: MonotoneMap
    inverse: MonotoneMap
    verdict: AdjointVerdict


def comonoid_images(M: FiniteBiposet, f: TermRef) -> ComonoidImages:
    """Ω^f(v) = f^op∘v∘f : Ω(y)→Ω(x) and Ω_f(u) = ⌞f∘u∘f^op⌟"""
    fa = functional_adjoint(M, f)
    if fa is None:
        raise NotFunctionalError(f"{M.describe(f)} has no right adjoint")
    y, x = f.source, f.target
    g = fa.adjoint
    Oy, Ox = comonoids_at(M, y).as_poset(), comonoids_at(M, x).as_poset()

    def direct(label):
        image = M.compose_all(g, M.term(y, y, label), f)
        if not is_comonoid(M, image):
            raise StandardizationError(f"direct image of {label} is not a comonoid")
        return M.label(image)

    def inverse(label):
        return M.label(interior(M, M.compose_all(f, M.term(x, x, label), g)))

    dmap = MonotoneMap.from_function(Oy, Ox, direct, f"Ω^{M.label(f)}")
    imap = MonotoneMap.from_function(Ox, Oy, inverse, f"Ω_{M.label(f)}")
    return ComonoidImages(dmap, imap, check_adjoint_pair(dmap, imap))


# ---------------------------------------------------------------- filters, Hoare triples, domains


@dataclass
class Filters:
    term: TermRef
    source_filter: FrozenSet[TermRef]
    target_filter: FrozenSet[TermRef]

    def is_coprocess(self, v: TermRef, u: TermRef) -> bool:
        return v in self.source_filter and u in self.target_filter


def filters_and_coprocess(M: FiniteBiposet, r: TermRef) -> Filters:
    y, x = r.source, r.target
    Oy, Ox = comonoids_at(M, y), comonoids_at(M, x)
    source = frozenset(v for v in Oy.members if M.entails(r, M.compose(v, r)))
    target = frozenset(u for u in Ox.members if M.entails(r, M.compose(r, u)))
    for lattice, members in ((Oy, source), (Ox, target)):
        for a in members:
            for b in lattice.members:
                if M.entails(a, b) and b not in members:
                    raise AssertionError(f"filter of {M.describe(r)} is not upward closed")
            for b in members:
                if lattice.meet(a, b) not in members:
                    raise AssertionError(f"filter of {M.describe(r)} is not closed under ∘")
    return Filters(r, source, target)


@dataclass(frozen=True)
class HoareTriple:
    pre: TermRef
    term: TermRef
    post: TermRef

    def __post_init__(self):
        if self.pre.source != self.term.source or self.post.source != self.term.target:
            raise TypeMismatchError(f"triple frame {self.pre.hom}/{self.post.hom} does not fit {self.term.hom}")


def hoare(M: FiniteBiposet, v: TermRef, r: TermRef, u: TermRef) -> bool:
    """{v}r{u} holds when v∘r ⪯ r∘u"""
    return M.entails(M.compose(v, r), M.compose(r, u))


def hoare_compose(M: FiniteBiposet, left: HoareTriple, right: HoareTriple) -> HoareTriple:
    """{w}s{v} ∘ {v}r{u} = {w}(s∘r){u}"""
    if left.post != right.pre:
        raise FrameMismatchError(f"postcondition {M.label(left.post)} ≠ precondition {M.label(right.pre)}")
    return HoareTriple(left.pre, M.compose(left.term, right.term), right.post)


def hoare_identity(M: FiniteBiposet, u: TermRef) -> HoareTriple:
    return HoareTriple(u, M.identity(u.source), u)


def hoare_join(M: FiniteBiposet, a: HoareTriple, b: HoareTriple) -> HoareTriple:
    if a.pre != b.pre or a.post != b.post:
        raise FrameMismatchError("joined triples must share their frame")
    return HoareTriple(a.pre, M.join(a.term, b.term), a.post)


@dataclass(frozen=True)
class Domain:
    domain: TermRef
    totalization: TermRef
    is_total: bool
    recovers: bool


def domain_totalization(M: FiniteBiposet, r: TermRef) -> Domain:
    """domain = ∘-meet of the source filter; totalization = domain∘r"""
    y = r.source
    source = filters_and_coprocess(M, r).source_filter
    d = reduce(M.compose, sorted(source), M.identity(y))
    total = M.compose(d, r)
    return Domain(d, total, d == M.identity(y), total == r)


def domain_identities_check(M: FiniteBiposet) -> Report:
    report = Report(f"domains {M.name}")
    ids = report.check("domain of identity")
    zero = report.check("only zero has empty domain")
    functional = report.check("functional terms are total")
    composite = report.check("composite of totals is total")
    total_terms: Dict[Tuple[str, str], List[TermRef]] = {}
    for y, x in product(M.types, repeat=2):
        bottom_y = M.bottom(y, y)
        for r in M.terms(y, x):
            d = domain_totalization(M, r)
            zero.record((d.domain == bottom_y) == (r == M.bottom(y, x)), lambda: M.describe(r))
            if functional_adjoint(M, r) is not None:
                functional.record(d.is_total, lambda: M.describe(r))
            if d.is_total:
                total_terms.setdefault((y, x), []).append(r)
    for x in M.types:
        ids.record(domain_totalization(M, M.identity(x)).domain == M.identity(x), f"dom({x}) ≠ {x}")
    for z, y, x in product(M.types, repeat=3):
        for s in total_terms.get((z, y), []):
            for r in total_terms.get((y, x), []):
                sr = M.compose(s, r)
                composite.record(domain_totalization(M, sr).is_total,
                                 lambda: f"{M.describe(s)}∘{M.describe(r)}")
    return report


# ---------------------------------------------------------------- subtypes and program constructs


def subtypes_of(M: FiniteBiposet, x: str) -> List[Tuple[TermRef, TermRef]]:
    """Coreflective pairs i ⊣ p into x, as (i, p)"""
    out = []
    for y in M.types:
        for i in M.terms(y, x):
            fa = functional_adjoint(M, i)
            if fa is not None and fa.coreflective:
                out.append((i, fa.adjoint))
    return out


def subtype_leq(M: FiniteBiposet, sub: Tuple[TermRef, TermRef], sup: Tuple[TermRef, TermRef]) -> Optional[TermRef]:
    """A functional h: y→z with i = h∘j and q∘h^op = p, found by search over functional terms"""
    (i, p), (j, q) = sub, sup
    y, z = i.source, j.source
    for h in M.terms(y, z):
        fa = functional_adjoint(M, h)
        if fa is None:
            continue
        if M.compose(h, j) == i and M.compose(q, fa.adjoint) == p:
            return h
    return None


def consideration(M: FiniteBiposet, p: TermRef) -> TermRef:
    """Reflexive-transitive closure ⋁ pⁿ of an endoterm, by Kleene iteration"""
    if p.source != p.target:
        raise TypeMismatchError("consideration needs an endoterm")
    current = M.identity(p.source)
    while True:
        nxt = M.join(M.identity(p.source), M.compose(current, p))
        if nxt == current:
            return current
        current = nxt


def conditional(M: HeytingModel, v: TermRef, r: TermRef, s: TermRef) -> TermRef:
    """if v then r else s = (v∘r) ∨ (¬̂v∘s)"""
    return M.join(M.compose(v, r), M.compose(comonoid_negation(M, v), s))


def while_loop(M: HeytingModel, u: TermRef, r: TermRef) -> TermRef:
    """while u do r = (u∘r)* ∘ ¬̂u"""
    return M.compose(consideration(M, M.compose(u, r)), comonoid_negation(M, u))


# ---------------------------------------------------------------- topotypes and topomatrices


@dataclass(frozen=True)
class Topotype:
    type: str
    members: Tuple[TermRef, ...]

    def __contains__(self, u: TermRef) -> bool:
        return u in self.members

    def __len__(self) -> int:
        return len(self.members)


def _closure(M: FiniteBiposet, x: str, seeds: Iterable[TermRef]) -> FrozenSet[TermRef]:
    members = set(seeds) | {M.bottom(x, x), M.identity(x)}
    while True:
        grown = set(members)
        for a, b in product(members, repeat=2):
            grown.add(M.compose(a, b))
            grown.add(M.join(a, b))
        if grown == members:
            return frozenset(members)
        members = grown


def validate_topotype(M: FiniteBiposet, x: str, members: Iterable[TermRef]) -> Report:
    """Closure under ∘ and ∨ with ⊥ and id present; the delta is reported, never added"""
    members = frozenset(members)
    report = Report(f"topotype at {x}")
    comonoid = report.check("members are comonoids")
    for u in sorted(members):
        comonoid.record(u.hom == (x, x) and is_comonoid(M, u), lambda: M.describe(u))
    closed = report.check("closed under ∘ and ∨")
    if comonoid.passed:
        delta = _closure(M, x, members) - members
        closed.record_many(1, [f"missing {M.label(u)}" for u in sorted(delta)], bad_count=1 if delta else 0)
    return report


def make_topotype(M: FiniteBiposet, x: str, members: Iterable[TermRef]) -> Topotype:
    members = frozenset(members)
    report = validate_topotype(M, x, members)
    if not report.passed:
        raise InvalidTopotypeError(f"invalid topotype at {x}: {report.failed_checks()[0].witnesses[:3]}")
    return Topotype(x, tuple(sorted(members)))


def close_topotype(M: FiniteBiposet, x: str, seeds: Iterable[TermRef] = ()) -> Topotype:
    return Topotype(x, tuple(sorted(_closure(M, x, seeds))))


def trivial_topotype(M: FiniteBiposet, x: str) -> Topotype:
    return close_topotype(M, x)


def full_topotype(M: FiniteBiposet, x: str) -> Topotype:
    return make_topotype(M, x, comonoids_at(M, x).members)


class Topomatrix:
    """A V×U matrix of coprocess terms; entries are computed on first access"""

    def __init__(self, source: Topotype, target: Topotype, entry: Callable[[TermRef, TermRef], TermRef]):
        self.source = source
        self.target = target
        self._entry = entry
        self._cache: Dict[Tuple[TermRef, TermRef], TermRef] = {}

    def __getitem__(self, key: Tuple[TermRef, TermRef]) -> TermRef:
        if key not in self._cache:
            self._cache[key] = self._entry(*key)
        return self._cache[key]

    @property
    def entries(self) -> Dict[Tuple[TermRef, TermRef], TermRef]:
        return {(v, u): self[v, u] for v in self.source.members for u in self.target.members}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Topomatrix):
            return NotImplemented
        return self.source == other.source and self.target == other.target and self.entries == other.entries

    def __hash__(self) -> int:
        return hash((self.source, self.target, tuple(sorted(self.entries.items()))))


def decompose(M: FiniteBiposet, V: Topotype, U: Topotype, r: TermRef) -> Topomatrix:
    """#_{V,U}(r)_{vu} = v∘r∘u"""
    if r.hom != (V.type, U.type):
        raise TypeMismatchError(f"cannot decompose {r.hom} over topotypes at {V.type},{U.type}")
    return Topomatrix(V, U, lambda v, u: M.compose_all(v, r, u))


def join_topomatrix(M: FiniteBiposet, R: Topomatrix) -> TermRef:
    return M.join_all(R.source.type, R.target.type, R.entries.values())


def topomatrix_product(M: FiniteBiposet, S: Topomatrix, R: Topomatrix) -> Topomatrix:
    """(S∘R)_{wu} = ⋁_v s_{wv}∘r_{vu}"""
    if S.target != R.source:
        raise TypeMismatchError("topomatrices are not composable")
    W, V, U = S.source, S.target, R.target
    return Topomatrix(W, U, lambda w, u: M.join_all(W.type, U.type,
                                                    (M.compose(S[w, v], R[v, u]) for v in V.members)))


def identity_topomatrix(M: FiniteBiposet, U: Topotype) -> Topomatrix:
    return Topomatrix(U, U, lambda a, b: M.compose(a, b))


def iota(M: FiniteBiposet, U: Topotype) -> Topomatrix:
    return decompose(M, U, trivial_topotype(M, U.type), M.identity(U.type))


def pi(M: FiniteBiposet, U: Topotype) -> Topomatrix:
    return decompose(M, trivial_topotype(M, U.type), U, M.identity(U.type))


def is_topomatrix(M: FiniteBiposet, R: Topomatrix) -> bool:
    for (v, u), r in R.entries.items():
        if M.compose(v, r) != r or M.compose(r, u) != r:
            return False
    for (v, u), (v2, u2) in product(R.entries, repeat=2):
        if M.entails(v, v2) and M.entails(u, u2) and not M.entails(R[v, u], R[v2, u2]):
            return False
    return True


@dataclass
class TopomatrixOps:
    """Operations of the topomatrix category over a fixed model"""
    model: FiniteBiposet
    decompose: Callable[[Topotype, Topotype, TermRef], Topomatrix] = field(init=False)
    join: Callable[[Topomatrix], TermRef] = field(init=False)
    product: Callable[[Topomatrix, Topomatrix], Topomatrix] = field(init=False)
    identity: Callable[[Topotype], Topomatrix] = field(init=False)
    iota: Callable[[Topotype], Topomatrix] = field(init=False)
    pi: Callable[[Topotype], Topomatrix] = field(init=False)

    def __post_init__(self):
        M = self.model
        self.decompose = lambda V, U, r: decompose(M, V, U, r)
        self.join = lambda R: join_topomatrix(M, R)
        self.product = lambda S, R: topomatrix_product(M, S, R)
        self.identity = lambda U: identity_topomatrix(M, U)
        self.iota = lambda U: iota(M, U)
        self.pi = lambda U: pi(M, U)

    def source_decomposition(self, V: Topotype, r: TermRef) -> Dict[TermRef, TermRef]:
        return {v: self.model.compose(v, r) for v in V.members}

    def target_decomposition(self, U: Topotype, r: TermRef) -> Dict[TermRef, TermRef]:
        return {u: self.model.compose(r, u) for u in U.members}

    def tuple(self, y: str, x: str, components: Dict[TermRef, TermRef]) -> TermRef:
        return self.model.join_all(y, x, components.values())

    cotuple = tuple


def topomatrix_ops(M: FiniteBiposet) -> TopomatrixOps:
    return TopomatrixOps(M)


def representation_check(M: FiniteBiposet, V: Topotype, U: Topotype, products: bool = True) -> Report:
    """Round trips ⋁∘# and #∘⋁, ι/π inverses, and # mapping ∘ to matrix product"""
    report = Report(f"representation {M.name}")
    y, x = V.type, U.type
    roundtrip = report.check("join after decomposition")
    image = report.check("decomposition after join")
    coprocess = report.check("decomposition entries are coprocesses")
    for r in M.terms(y, x):
        R = decompose(M, V, U, r)
        roundtrip.record(join_topomatrix(M, R) == r, lambda: M.describe(r))
        image.record(decompose(M, V, U, join_topomatrix(M, R)) == R, lambda: M.describe(r))
        coprocess.record(is_topomatrix(M, R), lambda: M.describe(r))
    inverse = report.check("iota pi inverse")
    for T in (V, U):
        i, p = iota(M, T), pi(M, T)
        inverse.record(topomatrix_product(M, i, p) == identity_topomatrix(M, T), f"ι∘π ≠ id at {T.type}")
        single = trivial_topotype(M, T.type)
        inverse.record(topomatrix_product(M, p, i) == identity_topomatrix(M, single), f"π∘ι ≠ id at {T.type}")
    ident = report.check("decomposition of identity")
    for T in (V, U):
        ident.record(decompose(M, T, T, M.identity(T.type)) == identity_topomatrix(M, T), f"#({T.type})")
    if products:
        functor = report.check("decomposition preserves composition")
        for z, W in ((y, V), (x, U)):
            for s in M.terms(z, y):
                for r in M.terms(y, x):
                    lhs = topomatrix_product(M, decompose(M, W, V, s), decompose(M, V, U, r))
                    functor.record(lhs == decompose(M, W, U, M.compose(s, r)),
                                   lambda: f"{M.describe(s)}∘{M.describe(r)}")
    return report


def flow_decomposition_identities(M: HeytingModel, topotypes: Optional[Dict[str, Topotype]] = None) -> Report:
    """The eight tupling identities relating direct and inverse flow to components.

    Vectors are decompositions of terms; implication components are restricted to their coprocess frame.
    """
    report = Report(f"flow decomposition {M.name}")
    tops = topotypes or {x: full_topotype(M, x) for x in M.types}
    names = [
        "right tensor product along source tupling",
        "right tensor product along target tupling",
        "left tensor product along source tupling",
        "left tensor product along target tupling",
        "right tensor implication along source tupling",
        "right tensor implication along target tupling",
        "left tensor implication along source tupling",
        "left tensor implication along target tupling",
    ]
    checks = [report.check(n) for n in names]

    def join(y, x, terms):
        return M.join_all(y, x, terms)

    def meet(y, x, terms):
        return M.meet_all(y, x, terms)

    for z, y, x in product(M.types, repeat=3):
        V, U = tops[y], tops[x]
        for t in M.terms(z, y):
            for r in M.terms(y, x):
                tr = M.compose(t, r)
                # 1: tuple(t∘v) ∘ cotuple(v∘r) = ⋁_v (t∘v)∘(v∘r)
                lhs = M.compose(join(z, y, [M.compose(t, v) for v in V.members]),
                                join(y, x, [M.compose(v, r) for v in V.members]))
                checks[0].record(lhs == join(z, x, [M.compose_all(t, v, v, r) for v in V.members]) == tr,
                                 lambda: f"t={M.label(t)} r={M.label(r)}")
                # 2: t ∘ tuple(r∘u) = tuple(t∘r∘u)
                lhs = M.compose(t, join(y, x, [M.compose(r, u) for u in U.members]))
                checks[1].record(lhs == join(z, x, [M.compose_all(t, r, u) for u in U.members]),
                                 lambda: f"t={M.label(t)} r={M.label(r)}")
                # 3: cotuple(v∘t) ∘ r = cotuple(v∘t∘r), with t: z→y decomposed over the source topotype
                W = tops[z]
                lhs = M.compose(join(z, y, [M.compose(w, t) for w in W.members]), r)
                checks[2].record(lhs == join(z, x, [M.compose_all(w, t, r) for w in W.members]),
                                 lambda: f"t={M.label(t)} r={M.label(r)}")
                # 4: tuple(t∘v) ∘ r = tuple(t∘v∘r) = t∘r, with only t decomposed over its target topotype
                lhs = M.compose(join(z, y, [M.compose(t, v) for v in V.members]), r)
                checks[3].record(lhs == join(z, x, [M.compose_all(t, v, r) for v in V.members]) == tr,
                                 lambda: f"t={M.label(t)} r={M.label(r)}")
        for s in M.terms(z, x):
            for r in M.terms(y, x):
                Y, U = tops[y], tops[x]
                expected = M.right_imply(s, r)
                # 5: s ⟜ cotuple(v∘r) = tuple((s⟜(v∘r))∘v)
                lhs = M.right_imply(s, join(y, x, [M.compose(v, r) for v in Y.members]))
                rhs = join(z, y, [M.compose(M.right_imply(s, M.compose(v, r)), v) for v in Y.members])
                checks[4].record(lhs == rhs == expected, lambda: f"s={M.label(s)} r={M.label(r)}")
                # 6: tuple(s∘u) ⟜ tuple(r∘u) = ⋀_u (s∘u)⟜(r∘u)
                lhs = M.right_imply(join(z, x, [M.compose(s, u) for u in U.members]),
                                    join(y, x, [M.compose(r, u) for u in U.members]))
                rhs = meet(z, y, [M.right_imply(M.compose(s, u), M.compose(r, u)) for u in U.members])
                checks[5].record(lhs == rhs == expected, lambda: f"s={M.label(s)} r={M.label(r)}")
        for r in M.terms(z, y):
            for t in M.terms(z, x):
                V, U = tops[z], tops[y]
                expected = M.left_imply(r, t)
                # 7: cotuple(v∘r) ⊸ cotuple(v∘t) = ⋀_v (v∘r)⊸(v∘t)
                lhs = M.left_imply(join(z, y, [M.compose(v, r) for v in V.members]),
                                   join(z, x, [M.compose(v, t) for v in V.members]))
                rhs = meet(y, x, [M.left_imply(M.compose(v, r), M.compose(v, t)) for v in V.members])
                checks[6].record(lhs == rhs == expected, lambda: f"r={M.label(r)} t={M.label(t)}")
                # 8: tuple(r∘u) ⊸ t = cotuple(u∘((r∘u)⊸t))
                lhs = M.left_imply(join(z, y, [M.compose(r, u) for u in U.members]), t)
                rhs = join(y, x, [M.compose(u, M.left_imply(M.compose(r, u), t)) for u in U.members])
                checks[7].record(lhs == rhs == expected, lambda: f"r={M.label(r)} t={M.label(t)}")
    return report


# ---------------------------------------------------------------- aggregate law checks


def comodal_laws(M: HeytingModel) -> Report:
    """Standardization, interior adjunction, meet preservation, Hoare fibers, subtype comonoids"""
    report = Report(f"comodal {M.name}")
    standard = report.check("local standardization")
    adjunction = report.check("interior coreflection")
    meets = report.check("interior preserves meets")
    residuation = report.check("comonoid residuation")
    fibers = report.check("hoare fibers")
    split = report.check("subtype comonoids")
    for x in M.types:
        try:
            lattice = comonoids_at(M, x)
        except StandardizationError as e:
            standard.record(False, str(e))
            continue
        members = lattice.members
        for u, v in product(members, repeat=2):
            uv = M.compose(u, v)
            ok = is_comonoid(M, uv) and (uv != M.compose(v, u) or uv == M.meet(u, v))
            standard.record(ok, lambda: f"{M.label(u)}∘{M.label(v)}")
            imp = comonoid_implication(M, u, v)
            for w in members:
                residuation.record(M.entails(w, imp) == M.entails(M.compose(u, w), v),
                                   lambda: f"w={M.label(w)} u={M.label(u)} v={M.label(v)}")
            fibers.record(hoare(M, u, M.identity(x), v) == M.entails(u, v), lambda: f"{{{M.label(u)}}}{x}")
        Ox = lattice.as_poset()
        Px = M.hom(x, x).as_poset()
        inc = MonotoneMap.from_function(Ox, Px, lambda a: a, f"Inc({x})")
        interior_map = MonotoneMap.from_function(Px, Ox, lambda a: M.label(interior(M, M.term(x, x, a))),
                                                 f"⌞·⌟({x})")
        verdict = check_adjoint_pair(inc, interior_map)
        adjunction.record(verdict.is_adjoint and verdict.is_coreflective, f"Inc ⊣ ⌞·⌟ fails at {x}")
        for p, q in product(M.terms(x, x), repeat=2):
            lhs = interior(M, M.meet(p, q))
            meets.record(lhs == M.compose(interior(M, p), interior(M, q)),
                         lambda: f"p={M.label(p)} q={M.label(q)}")
        for i, p in subtypes_of(M, x):
            split.record(is_comonoid(M, M.compose(p, i)), lambda: M.describe(i))
    return report
