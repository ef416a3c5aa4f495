"""
Biposet Module for DialecticKernel
Finite ordered categories with homset lattices: composition tables, orthogonality,
quasisymmetry, functional terms and their direct/inverse images.

A term y→x lives in hom(y, x). Composition is diagrammatic: for s: z→y and r: y→x,
compose(s, r) = s∘r : z→x.
"""

import logging
from dataclasses import dataclass, field
from functools import reduce
from itertools import chain, product
from typing import Any, Callable, Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from src.config import get_settings
from src.errors import CapabilityError, NotFunctionalError, SizeBoundError, TypeMismatchError
from src.order_core import AdjointVerdict, FinitePoset, MonotoneMap, check_adjoint_pair
from src.reports import LawCheck, Report

logger = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class TermRef:
    """A term source→target identified by its index in hom(source, target)"""
    source: str
    target: str
    elem: int

    @property
    def hom(self) -> Tuple[str, str]:
        return (self.source, self.target)


@dataclass(frozen=True)
class Orthoterm:
    """Orthogonal pair fwd: y→x, bwd: x→y"""
    fwd: TermRef
    bwd: TermRef


def _bool_mm(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return (a.astype(np.float32) @ b.astype(np.float32)) > 0.5


class Homset:
    """The poset hom(source, target) with dense order, join and meet tables"""

    def __init__(self, source: str, target: str, values: Sequence[Any], labels: Sequence[str],
                 le: np.ndarray):
        self.source = source
        self.target = target
        self.values: Tuple[Any, ...] = tuple(values)
        self.labels: Tuple[str, ...] = tuple(labels)
        self.le = np.asarray(le, dtype=bool)
        self._not_le = ~self.le
        self._by_value: Dict[Any, int] = {v: i for i, v in enumerate(self.values)}
        self._by_label: Dict[str, int] = {l: i for i, l in enumerate(self.labels)}
        if len(self._by_label) != len(self.labels):
            raise TypeMismatchError(f"hom({source},{target}) has duplicate labels")
        self.join: Optional[np.ndarray] = None
        self.meet: Optional[np.ndarray] = None
        self.bottom: Optional[int] = None
        self.top: Optional[int] = None

    def __len__(self) -> int:
        return len(self.values)

    def __repr__(self) -> str:
        return f"Homset({self.source}→{self.target}, {len(self)})"

    def index_of_value(self, value: Any) -> int:
        return self._by_value[value]

    def index_of_label(self, label: str) -> int:
        try:
            return self._by_label[label]
        except KeyError:
            raise TypeMismatchError(f"no term labelled {label!r} in hom({self.source},{self.target})") from None

    def leq(self, a: int, b: int) -> bool:
        return bool(self.le[a, b])

    def join_columns(self, mask: np.ndarray) -> np.ndarray:
        """Join of each column of a (len(self), m) selection mask; -1 where no join exists"""
        sel = np.asarray(mask, dtype=bool)
        ub = ~_bool_mm(sel.T, self._not_le)
        bad = _bool_mm(ub, self._not_le.T)
        least = ub & ~bad
        found = least.any(axis=1)
        return np.where(found, least.argmax(axis=1), -1)

    def meet_columns(self, mask: np.ndarray) -> np.ndarray:
        sel = np.asarray(mask, dtype=bool)
        lb = ~_bool_mm(sel.T, self._not_le.T)
        bad = _bool_mm(lb, self._not_le)
        greatest = lb & ~bad
        found = greatest.any(axis=1)
        return np.where(found, greatest.argmax(axis=1), -1)

    def join_of(self, items: Iterable[int]) -> int:
        items = list(items)
        if self.join is not None:
            return reduce(lambda a, b: int(self.join[a, b]), items, self.bottom)
        mask = np.zeros((len(self), 1), dtype=bool)
        mask[items, 0] = True
        return int(self.join_columns(mask)[0])

    def meet_of(self, items: Iterable[int]) -> int:
        items = list(items)
        if self.meet is not None:
            return reduce(lambda a, b: int(self.meet[a, b]), items, self.top)
        mask = np.zeros((len(self), 1), dtype=bool)
        mask[items, 0] = True
        return int(self.meet_columns(mask)[0])

    def derive_lattice(self, join_fn: Optional[Callable[[Any, Any], Any]] = None,
                       meet_fn: Optional[Callable[[Any, Any], Any]] = None) -> None:
        """Fill join/meet tables from value-level operations or from the order"""
        n = len(self)
        if n == 0:
            return
        self.bottom = int(self.join_columns(np.zeros((n, 1), dtype=bool))[0])
        self.top = int(self.meet_columns(np.zeros((n, 1), dtype=bool))[0])
        self.join = self._table(join_fn, self.join_columns)
        self.meet = self._table(meet_fn, self.meet_columns)
        if self.bottom < 0 or self.join is None:
            self.join = None
            self.bottom = None
        if self.top < 0 or self.meet is None:
            self.meet = None
            self.top = None

    def _table(self, fn, columns) -> Optional[np.ndarray]:
        n = len(self)
        if fn is not None:
            table = np.empty((n, n), dtype=np.int64)
            for a, va in enumerate(self.values):
                for b, vb in enumerate(self.values):
                    table[a, b] = self._by_value[fn(va, vb)]
            return table
        table = np.empty((n, n), dtype=np.int64)
        for a in range(n):
            mask = np.eye(n, dtype=bool)
            mask[a, :] = True
            table[a] = columns(mask)
        if np.any(table < 0):
            return None
        return table

    def as_poset(self) -> FinitePoset:
        return FinitePoset(self.labels, self.le, f"hom({self.source},{self.target})")


class FiniteBiposet:
    """A finite ordered category stored as dense tables.

    ``comp[(z, y, x)][s, r]`` is the index of s∘r in hom(z, x) for s in hom(z, y) and r in hom(y, x).
    """

    def __init__(self, name: str, types: Sequence[str], homs: Dict[Tuple[str, str], Homset],
                 comp: Dict[Tuple[str, str, str], np.ndarray], ident: Dict[str, int],
                 kind: str = "custom", meta: Optional[Dict[str, Any]] = None):
        self.name = name
        self.types: Tuple[str, ...] = tuple(types)
        self.homs = homs
        self.comp = comp
        self.ident = ident
        self.kind = kind
        self.meta: Dict[str, Any] = dict(meta or {})

    def _adopt(self, other: "FiniteBiposet") -> None:
        self.name, self.types, self.homs = other.name, other.types, other.homs
        self.comp, self.ident, self.kind, self.meta = other.comp, other.ident, other.kind, dict(other.meta)

    def __repr__(self) -> str:
        sizes = ",".join(str(len(self.homs[(y, x)])) for y in self.types for x in self.types)
        return f"{type(self).__name__}({self.name}, types={list(self.types)}, homs=[{sizes}])"

    # capabilities

    @property
    def has_joins(self) -> bool:
        return all(h.join is not None for h in self.homs.values())

    @property
    def has_meets(self) -> bool:
        return all(h.meet is not None for h in self.homs.values())

    def require(self, capability: str) -> None:
        ok = {"joins": self.has_joins, "meets": self.has_meets,
              "lattice": self.has_joins and self.has_meets}.get(capability, False)
        if not ok:
            raise CapabilityError(f"model {self.name} lacks homset {capability}")

    # term access

    def hom(self, y: str, x: str) -> Homset:
        try:
            return self.homs[(y, x)]
        except KeyError:
            raise TypeMismatchError(f"no homset {y}→{x} in {self.name}") from None

    def terms(self, y: str, x: str) -> List[TermRef]:
        return [TermRef(y, x, i) for i in range(len(self.hom(y, x)))]

    def all_terms(self) -> Iterator[TermRef]:
        for y in self.types:
            for x in self.types:
                yield from self.terms(y, x)

    def term(self, y: str, x: str, label: str) -> TermRef:
        return TermRef(y, x, self.hom(y, x).index_of_label(label))

    def term_of(self, y: str, x: str, value: Any) -> TermRef:
        return TermRef(y, x, self.hom(y, x).index_of_value(value))

    def label(self, t: TermRef) -> str:
        return self.hom(t.source, t.target).labels[t.elem]

    def value(self, t: TermRef) -> Any:
        return self.hom(t.source, t.target).values[t.elem]

    def describe(self, t: TermRef) -> str:
        return f"{t.source}-[{self.label(t)}]->{t.target}"

    def identity(self, x: str) -> TermRef:
        return TermRef(x, x, self.ident[x])

    def bottom(self, y: str, x: str) -> TermRef:
        h = self.hom(y, x)
        if h.bottom is None:
            raise CapabilityError(f"hom({y},{x}) has no bottom")
        return TermRef(y, x, h.bottom)

    def top(self, y: str, x: str) -> TermRef:
        h = self.hom(y, x)
        if h.top is None:
            raise CapabilityError(f"hom({y},{x}) has no top")
        return TermRef(y, x, h.top)

    # structure

    def compose(self, s: TermRef, r: TermRef) -> TermRef:
        if s.target != r.source:
            raise TypeMismatchError(f"cannot compose {s.source}→{s.target} with {r.source}→{r.target}")
        return TermRef(s.source, r.target, int(self.comp[(s.source, s.target, r.target)][s.elem, r.elem]))

    def compose_all(self, *terms: TermRef) -> TermRef:
        return reduce(self.compose, terms)

    def entails(self, r: TermRef, s: TermRef) -> bool:
        if r.hom != s.hom:
            raise TypeMismatchError(f"entailment needs parallel terms, got {r.hom} and {s.hom}")
        return self.hom(r.source, r.target).leq(r.elem, s.elem)

    def join(self, a: TermRef, b: TermRef) -> TermRef:
        if a.hom != b.hom:
            raise TypeMismatchError("join needs parallel terms")
        h = self.hom(a.source, a.target)
        if h.join is None:
            raise CapabilityError(f"hom({a.source},{a.target}) has no joins")
        return TermRef(a.source, a.target, int(h.join[a.elem, b.elem]))

    def meet(self, a: TermRef, b: TermRef) -> TermRef:
        if a.hom != b.hom:
            raise TypeMismatchError("meet needs parallel terms")
        h = self.hom(a.source, a.target)
        if h.meet is None:
            raise CapabilityError(f"hom({a.source},{a.target}) has no meets")
        return TermRef(a.source, a.target, int(h.meet[a.elem, b.elem]))

    def join_all(self, y: str, x: str, terms: Iterable[TermRef]) -> TermRef:
        return TermRef(y, x, self.hom(y, x).join_of(t.elem for t in terms))

    def meet_all(self, y: str, x: str, terms: Iterable[TermRef]) -> TermRef:
        return TermRef(y, x, self.hom(y, x).meet_of(t.elem for t in terms))

    def restrict(self, carriers: Dict[Tuple[str, str], Iterable[int]], name: Optional[str] = None,
                 compose_fn: Optional[Callable[[TermRef, TermRef], TermRef]] = None,
                 join_fn: Optional[Callable[[TermRef, TermRef], TermRef]] = None,
                 meet_fn: Optional[Callable[[TermRef, TermRef], TermRef]] = None) -> "FiniteBiposet":
        """Sub-biposet on the given homset subsets, optionally with replacement operations.

        Values of the result are the term indices of this model, so results can be mapped back.
        """
        compose_fn = compose_fn or self.compose
        carriers = {k: sorted(set(v)) for k, v in carriers.items()}

        def term(y, x, i):
            return TermRef(y, x, i)

        return build_biposet(
            name or f"{self.name}|sub", self.types,
            carriers={k: v for k, v in carriers.items()},
            le=lambda y, x, a, b: self.hom(y, x).leq(a, b),
            compose=lambda z, y, x, s, r: compose_fn(term(z, y, s), term(y, x, r)).elem,
            identity=lambda x: self.ident[x],
            label=lambda y, x, i: self.hom(y, x).labels[i],
            join=(lambda y, x, a, b: join_fn(term(y, x, a), term(y, x, b)).elem) if join_fn else None,
            meet=(lambda y, x, a, b: meet_fn(term(y, x, a), term(y, x, b)).elem) if meet_fn else None,
            kind=f"{self.kind}-sub",
            meta={"parent": self},
        )


def build_biposet(name: str, types: Sequence[str],
                  carriers: Dict[Tuple[str, str], Sequence[Any]],
                  le: Callable[[str, str, Any, Any], bool],
                  compose: Callable[[str, str, str, Any, Any], Any],
                  identity: Callable[[str], Any],
                  label: Optional[Callable[[str, str, Any], str]] = None,
                  join: Optional[Callable[[str, str, Any, Any], Any]] = None,
                  meet: Optional[Callable[[str, str, Any, Any], Any]] = None,
                  kind: str = "custom", meta: Optional[Dict[str, Any]] = None) -> FiniteBiposet:
    """Tabulate a biposet from value-level operations"""
    settings = get_settings()
    if len(types) > settings.max_types:
        raise SizeBoundError(f"{name}: {len(types)} types exceeds bound {settings.max_types}")
    label = label or (lambda y, x, v: str(v))
    homs: Dict[Tuple[str, str], Homset] = {}
    for y in types:
        for x in types:
            values = list(carriers[(y, x)])
            if len(values) > settings.max_homset_size:
                raise SizeBoundError(f"{name}: hom({y},{x}) has {len(values)} terms, "
                                     f"bound is {settings.max_homset_size}")
            order = np.array([[bool(le(y, x, a, b)) for b in values] for a in values],
                             dtype=bool).reshape(len(values), len(values))
            h = Homset(y, x, values, [label(y, x, v) for v in values], order)
            h.derive_lattice(
                (lambda a, b, y=y, x=x: join(y, x, a, b)) if join else None,
                (lambda a, b, y=y, x=x: meet(y, x, a, b)) if meet else None,
            )
            homs[(y, x)] = h
    comp: Dict[Tuple[str, str, str], np.ndarray] = {}
    for z, y, x in product(types, repeat=3):
        left, right, out = homs[(z, y)], homs[(y, x)], homs[(z, x)]
        table = np.empty((len(left), len(right)), dtype=np.int64)
        for i, s in enumerate(left.values):
            for j, r in enumerate(right.values):
                table[i, j] = out.index_of_value(compose(z, y, x, s, r))
        comp[(z, y, x)] = table
    ident = {x: homs[(x, x)].index_of_value(identity(x)) for x in types}
    logger.debug(f"Built biposet {name} with {len(types)} types")
    return FiniteBiposet(name, types, homs, comp, ident, kind, meta)


# ---------------------------------------------------------------- validation


def _triples(B: FiniteBiposet):
    return product(B.types, repeat=3)


def validate_biposet(B: FiniteBiposet, flags: Iterable[str] = ()) -> Report:
    """Exhaustive check of the biposet axioms plus the requested capability laws.

    flags: ``joins`` (join-bisemilattice), ``meets`` (meet-bisemilattice), ``cHc``.
    """
    flags = set(flags)
    if "cHc" in flags:
        flags |= {"joins", "meets"}
    report = Report(f"biposet {B.name}")

    check = report.check("homset partial order")
    for (y, x), h in B.homs.items():
        n = len(h)
        eye = np.eye(n, dtype=bool)
        bad = []
        if not np.all(np.diag(h.le)):
            bad.append(f"hom({y},{x}) not reflexive")
        if np.any(h.le & h.le.T & ~eye):
            bad.append(f"hom({y},{x}) not antisymmetric")
        if n and np.any(_bool_mm(h.le, h.le) & ~h.le):
            bad.append(f"hom({y},{x}) not transitive")
        check.record_many(1, bad, bad_count=1 if bad else 0)

    check = report.check("associativity")
    for w, z, y, x in product(B.types, repeat=4):
        a, b = B.comp[(w, z, x)], B.comp[(z, y, x)]
        c, d = B.comp[(w, z, y)], B.comp[(w, y, x)]
        lhs = a[:, b]             # s∘(t∘r) indexed [s, t, r]
        rhs = d[c, :]             # (s∘t)∘r
        diff = np.argwhere(lhs != rhs)
        check.record_many(lhs.size, (
            f"({B.hom(w, z).labels[s]}∘{B.hom(z, y).labels[t]})∘{B.hom(y, x).labels[r]} at {w},{z},{y},{x}"
            for s, t, r in diff[:get_settings().max_witnesses]), bad_count=len(diff))

    check = report.check("unitality")
    for y, x in product(B.types, repeat=2):
        n = len(B.hom(y, x))
        left = B.comp[(y, y, x)][B.ident[y], :]
        right = B.comp[(y, x, x)][:, B.ident[x]]
        bad = [f"{y}∘{B.hom(y, x).labels[r]} ≠ r" for r in np.flatnonzero(left != np.arange(n))]
        bad += [f"{B.hom(y, x).labels[r]}∘{x} ≠ r" for r in np.flatnonzero(right != np.arange(n))]
        check.record_many(2 * n, bad)

    check = report.check("bilateral monotonicity")
    for z, y, x in _triples(B):
        C, lzy, lyx, lzx = B.comp[(z, y, x)], B.hom(z, y).le, B.hom(y, x).le, B.hom(z, x).le
        # left argument: s ⪯ s' implies s∘r ⪯ s'∘r
        res_left = lzx[C[:, None, :], C[None, :, :]]
        bad_left = np.argwhere(lzy[:, :, None] & ~res_left)
        res_right = lzx[C[:, :, None], C[:, None, :]]
        bad_right = np.argwhere(lyx[None, :, :] & ~res_right)
        witnesses = chain(
            (f"{z},{y},{x}: left argument {i}⪯{j} at r={k}" for i, j, k in bad_left[:3]),
            (f"{z},{y},{x}: right argument {j}⪯{k} at s={i}" for i, j, k in bad_right[:3]))
        check.record_many(res_left.size + res_right.size, witnesses, bad_count=len(bad_left) + len(bad_right))

    if "joins" in flags:
        check = report.check("join-bisemilattice distributivity")
        if not B.has_joins:
            check.skip("homsets lack joins")
        else:
            _check_join_distributivity(B, check)
    if "meets" in flags:
        check = report.check("meet-bisemilattice")
        if not B.has_meets:
            check.skip("homsets lack meets")
        else:
            for (y, x), h in B.homs.items():
                n = len(h)
                idx = np.arange(n)
                glb_ok = h.le[h.meet, idx[:, None]] & h.le[h.meet, idx[None, :]]
                top_ok = h.le[idx, h.top]
                check.record_many(n * n + n, [f"hom({y},{x}) meet table"] if not (glb_ok.all() and top_ok.all())
                                  else [])
    if "cHc" in flags:
        check = report.check("complete Heyting continuity")
        if not (B.has_joins and B.has_meets):
            check.skip("homsets are not complete lattices")
        else:
            # finite complete lattices: continuity reduces to binary and nullary distributivity
            sub = report["join-bisemilattice distributivity"]
            check.record_many(sub.instances, sub.witnesses, bad_count=sub.failures)
    logger.info(f"Validated {B.name}: {'PASS' if report.passed else 'FAIL'}")
    return report


def _check_join_distributivity(B: FiniteBiposet, check: LawCheck) -> None:
    for z, y, x in _triples(B):
        C = B.comp[(z, y, x)]
        hzy, hyx, hzx = B.hom(z, y), B.hom(y, x), B.hom(z, x)
        J = hzx.join
        # s∘(r∨r') = (s∘r)∨(s∘r')
        lhs = C[:, hyx.join]
        rhs = J[C[:, :, None], C[:, None, :]]
        bad = np.argwhere(lhs != rhs)
        # (s∨s')∘r = (s∘r)∨(s'∘r)
        lhs2 = C[hzy.join, :]
        rhs2 = J[C[:, None, :], C[None, :, :]]
        bad2 = np.argwhere(lhs2 != rhs2)
        bottoms = [f"{z},{y},{x}: s∘⊥ ≠ ⊥" for s in np.flatnonzero(C[:, hyx.bottom] != hzx.bottom)]
        bottoms += [f"{z},{y},{x}: ⊥∘r ≠ ⊥" for r in np.flatnonzero(C[hzy.bottom, :] != hzx.bottom)]
        witnesses = [f"{z},{y},{x}: {hzy.labels[s]}∘({hyx.labels[r]}∨{hyx.labels[q]})"
                     for s, r, q in bad[:3]]
        witnesses += [f"{z},{y},{x}: ({hzy.labels[s]}∨{hzy.labels[q]})∘{hyx.labels[r]}"
                      for s, q, r in bad2[:3]]
        check.record_many(lhs.size + lhs2.size + C.shape[0] + C.shape[1], witnesses + bottoms,
                          bad_count=len(bad) + len(bad2) + len(bottoms))


# ---------------------------------------------------------------- terms


def compose(B: FiniteBiposet, s: TermRef, r: TermRef) -> TermRef:
    return B.compose(s, r)


def entails(B: FiniteBiposet, r: TermRef, s: TermRef) -> bool:
    return B.entails(r, s)


def _require_opposed(r: TermRef, s: TermRef) -> None:
    if (s.source, s.target) != (r.target, r.source):
        raise TypeMismatchError(f"terms {r.source}→{r.target} and {s.source}→{s.target} are not opposed")


@dataclass(frozen=True)
class OrthogonalityVerdict:
    semi_at_target: bool
    semi_at_source: bool

    @property
    def orthogonal(self) -> bool:
        return self.semi_at_target and self.semi_at_source


def orthogonality(B: FiniteBiposet, r: TermRef, s: TermRef) -> OrthogonalityVerdict:
    """r: y→x against opposed s: x→y"""
    _require_opposed(r, s)
    y, x = r.source, r.target
    at_target = B.entails(B.compose(s, r), B.identity(x))
    at_source = B.entails(B.compose(r, s), B.identity(y))
    return OrthogonalityVerdict(at_target, at_source)


def orthogonal(B: FiniteBiposet, r: TermRef, s: TermRef) -> bool:
    return orthogonality(B, r, s).orthogonal


def orthogonal_mask(B: FiniteBiposet, y: str, x: str) -> np.ndarray:
    """mask[r, s] for r in hom(y,x), s in hom(x,y)"""
    C_xyx, C_yxy = B.comp[(x, y, x)], B.comp[(y, x, y)]
    at_target = B.hom(x, x).le[C_xyx, B.ident[x]]       # [s, r]
    at_source = B.hom(y, y).le[C_yxy, B.ident[y]]       # [r, s]
    return at_target.T & at_source


def orthogonality_ideal(B: FiniteBiposet, r: TermRef) -> FrozenSet[TermRef]:
    """All opposed terms orthogonal to r; checked closed below and under finite joins"""
    y, x = r.source, r.target
    mask = orthogonal_mask(B, y, x)[r.elem]
    members = frozenset(TermRef(x, y, int(i)) for i in np.flatnonzero(mask))
    h = B.hom(x, y)
    below = h.le[:, mask].any(axis=1)
    if np.any(below & ~mask):
        raise AssertionError(f"orthogonality ideal of {B.describe(r)} is not closed below")
    if h.join is not None:
        idx = np.flatnonzero(mask)
        if not mask[h.bottom] or not np.all(mask[h.join[np.ix_(idx, idx)]]):
            raise AssertionError(f"orthogonality ideal of {B.describe(r)} is not closed under joins")
    return members


def compose_orthoterms(B: FiniteBiposet, outer: Orthoterm, inner: Orthoterm) -> Orthoterm:
    """(s⊥s')∘(r⊥r') = (s∘r)⊥(r'∘s')"""
    for o in (outer, inner):
        if not orthogonal(B, o.fwd, o.bwd):
            raise TypeMismatchError(f"{B.describe(o.fwd)} and {B.describe(o.bwd)} are not orthogonal")
    return Orthoterm(B.compose(outer.fwd, inner.fwd), B.compose(inner.bwd, outer.bwd))


def orthogonality_functor_check(B: FiniteBiposet) -> Report:
    """Laxity ⊥(r)∘⊥(s) ⊆ ⊥(s∘r), ⊥(x) = ↓x, ideal closure, identity orthoterms"""
    report = Report(f"orthogonality {B.name}")
    masks = {(y, x): orthogonal_mask(B, y, x) for y in B.types for x in B.types}

    ideal = report.check("orthogonality ideal closure")
    for (y, x), m in masks.items():
        h = B.hom(x, y)
        for r in range(m.shape[0]):
            row = m[r]
            ok = not np.any(h.le[:, row].any(axis=1) & ~row)
            if ok and h.join is not None:
                idx = np.flatnonzero(row)
                ok = bool(row[h.bottom]) and bool(np.all(row[h.join[np.ix_(idx, idx)]]))
            ideal.record(ok, lambda: f"ideal of {B.describe(TermRef(y, x, r))}")

    unit = report.check("identity ideal is principal")
    for x in B.types:
        expected = B.hom(x, x).le[:, B.ident[x]]
        unit.record(bool(np.array_equal(masks[(x, x)][B.ident[x]], expected)), f"⊥({x}) ≠ ↓{x}")

    lax = report.check("orthogonality lax contravariance")
    for z, y, x in _triples(B):
        # s: z→y, r: y→x; ⊥(r) ⊆ hom(x,y), ⊥(s) ⊆ hom(y,z)
        C_r = B.comp[(x, y, z)]
        out = masks[(z, x)]
        for s in range(len(B.hom(z, y))):
            ps = np.flatnonzero(masks[(z, y)][s])
            for r in range(len(B.hom(y, x))):
                pr = np.flatnonzero(masks[(y, x)][r])
                sr = B.comp[(z, y, x)][s, r]
                if len(pr) and len(ps):
                    composites = C_r[np.ix_(pr, ps)]
                    ok = bool(np.all(out[sr][composites]))
                else:
                    ok = True
                lax.record(ok, lambda: f"⊥({B.hom(y, x).labels[r]})∘⊥({B.hom(z, y).labels[s]}) ⊄ ⊥(s∘r)")

    units = report.check("orthoterm identities")
    for (y, x), m in masks.items():
        ey, ex = Orthoterm(B.identity(y), B.identity(y)), Orthoterm(B.identity(x), B.identity(x))
        for r, rr in np.argwhere(m):
            o = Orthoterm(TermRef(y, x, int(r)), TermRef(x, y, int(rr)))
            ok = compose_orthoterms(B, ey, o) == o == compose_orthoterms(B, o, ex)
            units.record(ok, lambda: f"identity orthoterms do not fix {B.describe(o.fwd)}")
    return report


# ---------------------------------------------------------------- functional terms


@dataclass(frozen=True)
class FunctionalAdjoint:
    term: TermRef
    adjoint: TermRef
    coreflective: bool
    reflective: bool

    @property
    def kind(self) -> str:
        if self.coreflective and self.reflective:
            return "inverse"
        if self.coreflective:
            return "subtype"
        if self.reflective:
            return "reflective"
        return "functional"


def functional_adjoint(B: FiniteBiposet, f: TermRef) -> Optional[FunctionalAdjoint]:
    """The right adjoint f^op: x→y with y ⪯ f∘f^op and f^op∘f ⪯ x, if any"""
    y, x = f.source, f.target
    found: Optional[TermRef] = None
    for g in B.terms(x, y):
        unit = B.entails(B.identity(y), B.compose(f, g))
        counit = B.entails(B.compose(g, f), B.identity(x))
        if unit and counit:
            if found is not None and found != g:
                raise AssertionError(f"{B.describe(f)} has two right adjoints")
            found = g
    if found is None:
        return None
    return FunctionalAdjoint(
        f, found,
        coreflective=B.compose(f, found) == B.identity(y),
        reflective=B.compose(found, f) == B.identity(x),
    )


def functional_terms(B: FiniteBiposet, y: str, x: str) -> List[FunctionalAdjoint]:
    return [fa for fa in (functional_adjoint(B, f) for f in B.terms(y, x)) if fa is not None]


@dataclass(frozen=True)
class ImagePair:
    direct: MonotoneMap
    inverse: MonotoneMap
    verdict: AdjointVerdict


def direct_inverse_image(B: FiniteBiposet, f: TermRef) -> ImagePair:
    """P^f(q) = f^op∘q∘f : hom(y,y)→hom(x,x) and P_f(p) = f∘p∘f^op"""
    fa = functional_adjoint(B, f)
    if fa is None:
        raise NotFunctionalError(f"{B.describe(f)} has no right adjoint")
    y, x = f.source, f.target
    Py, Px = B.hom(y, y).as_poset(), B.hom(x, x).as_poset()
    g = fa.adjoint

    def direct(label):
        q = B.term(y, y, label)
        return B.label(B.compose_all(g, q, f))

    def inverse(label):
        p = B.term(x, x, label)
        return B.label(B.compose_all(f, p, g))

    dmap = MonotoneMap.from_function(Py, Px, direct, f"P^{B.label(f)}")
    imap = MonotoneMap.from_function(Px, Py, inverse, f"P_{B.label(f)}")
    return ImagePair(dmap, imap, check_adjoint_pair(dmap, imap))


# ---------------------------------------------------------------- quasisymmetry


def quasisymmetric_mask(B: FiniteBiposet, y: str, x: str) -> np.ndarray:
    """mask[r] for r: y→x: s∘r ⪯ x iff r∘s ⪯ y for every opposed s"""
    at_target = B.hom(x, x).le[B.comp[(x, y, x)], B.ident[x]].T   # [r, s]
    at_source = B.hom(y, y).le[B.comp[(y, x, y)], B.ident[y]]     # [r, s]
    return np.all(at_target == at_source, axis=1)


def is_quasisymmetric(B: FiniteBiposet, r: TermRef) -> bool:
    return bool(quasisymmetric_mask(B, r.source, r.target)[r.elem])


def is_coquasisymmetric(B: FiniteBiposet, r: TermRef) -> bool:
    """Co-dual reading: r∘s ⪰ y iff s∘r ⪰ x for every opposed s"""
    y, x = r.source, r.target
    for s in B.terms(x, y):
        a = B.entails(B.identity(y), B.compose(r, s))
        b = B.entails(B.identity(x), B.compose(s, r))
        if a != b:
            return False
    return True


@dataclass
class CenterResult:
    per_term: Dict[TermRef, bool]
    center: FiniteBiposet
    identities_central: bool
    closed_under_composition: bool
    violations: List[str] = field(default_factory=list)


def quasisymmetry_center(B: FiniteBiposet) -> CenterResult:
    per_term: Dict[TermRef, bool] = {}
    carriers: Dict[Tuple[str, str], List[int]] = {}
    for y in B.types:
        for x in B.types:
            mask = quasisymmetric_mask(B, y, x)
            carriers[(y, x)] = [int(i) for i in np.flatnonzero(mask)]
            for i, flag in enumerate(mask):
                per_term[TermRef(y, x, i)] = bool(flag)
    ids_ok = all(per_term[B.identity(x)] for x in B.types)
    violations = []
    for z, y, x in _triples(B):
        for s in carriers[(z, y)]:
            for r in carriers[(y, x)]:
                sr = int(B.comp[(z, y, x)][s, r])
                if not per_term[TermRef(z, x, sr)]:
                    violations.append(f"{B.hom(z, y).labels[s]}∘{B.hom(y, x).labels[r]} leaves the center")
    center = B.restrict(carriers, name=f"Z({B.name})") if not violations else None
    return CenterResult(per_term, center, ids_ok, not violations, violations)
