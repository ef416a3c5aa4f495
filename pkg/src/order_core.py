"""
Order Core Module for DialecticKernel
Finite posets, monotone maps, adjoint pairs, closure/interior operators and order negations.

Composites are diagrammatic throughout: ``f.then(g)`` (written f·g) applies f first.
For an adjoint pair f: B→A ⊣ g: A→B the closure on B is f·g and the interior on A is g·f.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, FrozenSet, Hashable, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from src.config import get_settings
from src.errors import NotAdjointError, ShapeMismatchError, SizeBoundError, KernelError

logger = logging.getLogger(__name__)


class OrderError(KernelError):
    """Relation is not a partial order or a map is not monotone"""


class FinitePoset:
    """A finite partially ordered set with a dense order matrix"""

    def __init__(self, elements: Sequence[Hashable], le: np.ndarray, name: str = "P"):
        bound = get_settings().max_poset_size
        if len(elements) > bound:
            raise SizeBoundError(f"poset {name} has {len(elements)} elements, bound is {bound}")
        self.name = name
        self.elements: Tuple[Hashable, ...] = tuple(elements)
        self.le = np.asarray(le, dtype=bool)
        self._index: Dict[Hashable, int] = {e: i for i, e in enumerate(self.elements)}
        if len(self._index) != len(self.elements):
            raise OrderError(f"poset {name} has duplicate elements")
        n = len(self.elements)
        if self.le.shape != (n, n):
            raise ShapeMismatchError(f"order matrix of {name} has shape {self.le.shape}, expected {(n, n)}")
        self._check_partial_order()

    @classmethod
    def from_relation(cls, elements: Sequence[Hashable], pairs: Iterable[Tuple[Hashable, Hashable]],
                      name: str = "P") -> "FinitePoset":
        """Reflexive-transitive closure of the given covering pairs (a ≤ b)"""
        index = {e: i for i, e in enumerate(elements)}
        n = len(index)
        le = np.eye(n, dtype=bool)
        for a, b in pairs:
            le[index[a], index[b]] = True
        for k in range(n):
            le |= le[:, [k]] & le[[k], :]
        return cls(elements, le, name)

    @classmethod
    def from_function(cls, elements: Sequence[Hashable], leq: Callable[[Any, Any], bool],
                      name: str = "P") -> "FinitePoset":
        le = np.array([[bool(leq(a, b)) for b in elements] for a in elements], dtype=bool).reshape(
            len(elements), len(elements))
        return cls(elements, le, name)

    @classmethod
    def chain(cls, n: int, name: Optional[str] = None) -> "FinitePoset":
        return cls(list(range(n)), np.triu(np.ones((n, n), dtype=bool)), name or f"chain{n}")

    @classmethod
    def antichain(cls, n: int, name: Optional[str] = None) -> "FinitePoset":
        return cls(list(range(n)), np.eye(n, dtype=bool), name or f"antichain{n}")

    def _check_partial_order(self) -> None:
        le = self.le
        if not np.all(np.diag(le)):
            raise OrderError(f"{self.name}: order is not reflexive")
        both = le & le.T
        if np.any(both & ~np.eye(len(self.elements), dtype=bool)):
            raise OrderError(f"{self.name}: order is not antisymmetric")
        if len(self.elements):
            composite = (le.astype(np.float32) @ le.astype(np.float32)) > 0
            if np.any(composite & ~le):
                raise OrderError(f"{self.name}: order is not transitive")

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, item: Hashable) -> bool:
        return item in self._index

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FinitePoset):
            return NotImplemented
        return self.elements == other.elements and np.array_equal(self.le, other.le)

    def __hash__(self) -> int:
        return hash((self.elements, self.le.tobytes()))

    def __repr__(self) -> str:
        return f"FinitePoset({self.name}, {len(self)} elements)"

    def index(self, element: Hashable) -> int:
        try:
            return self._index[element]
        except KeyError:
            raise ShapeMismatchError(f"{element!r} is not an element of {self.name}") from None

    def leq(self, a: Hashable, b: Hashable) -> bool:
        return bool(self.le[self.index(a), self.index(b)])

    def upper_bounds(self, items: Iterable[Hashable]) -> List[Hashable]:
        idx = [self.index(a) for a in items]
        mask = self.le[idx].all(axis=0) if idx else np.ones(len(self), dtype=bool)
        return [self.elements[i] for i in np.flatnonzero(mask)]

    def lower_bounds(self, items: Iterable[Hashable]) -> List[Hashable]:
        idx = [self.index(a) for a in items]
        mask = self.le[:, idx].all(axis=1) if idx else np.ones(len(self), dtype=bool)
        return [self.elements[i] for i in np.flatnonzero(mask)]

    def join(self, *items: Hashable) -> Optional[Hashable]:
        """Least upper bound, or None when it does not exist"""
        ubs = self.upper_bounds(items)
        for u in ubs:
            if all(self.leq(u, v) for v in ubs):
                return u
        return None

    def meet(self, *items: Hashable) -> Optional[Hashable]:
        lbs = self.lower_bounds(items)
        for l in lbs:
            if all(self.leq(v, l) for v in lbs):
                return l
        return None

    def bottom(self) -> Optional[Hashable]:
        return self.join()

    def top(self) -> Optional[Hashable]:
        return self.meet()

    def down_closure(self, items: Iterable[Hashable]) -> FrozenSet[Hashable]:
        idx = [self.index(a) for a in items]
        if not idx:
            return frozenset()
        mask = self.le[:, idx].any(axis=1)
        return frozenset(self.elements[i] for i in np.flatnonzero(mask))

    def up_closure(self, items: Iterable[Hashable]) -> FrozenSet[Hashable]:
        idx = [self.index(a) for a in items]
        if not idx:
            return frozenset()
        mask = self.le[idx].any(axis=0)
        return frozenset(self.elements[i] for i in np.flatnonzero(mask))

    def restrict(self, items: Iterable[Hashable], name: Optional[str] = None) -> "FinitePoset":
        keep = [e for e in self.elements if e in set(items)]
        idx = [self.index(e) for e in keep]
        return FinitePoset(keep, self.le[np.ix_(idx, idx)], name or f"{self.name}|sub")

    def opposite(self) -> "FinitePoset":
        return FinitePoset(self.elements, self.le.T.copy(), f"{self.name}^op")


def quotient_preorder(elements: Sequence[Hashable], leq: Callable[[Any, Any], bool],
                      name: str = "P") -> Tuple[FinitePoset, Dict[Hashable, Hashable]]:
    """Collapse a preorder to a poset; each class is represented by its first member"""
    representative: Dict[Hashable, Hashable] = {}
    reps: List[Hashable] = []
    for e in elements:
        for r in reps:
            if leq(e, r) and leq(r, e):
                representative[e] = r
                break
        else:
            reps.append(e)
            representative[e] = e
    return FinitePoset.from_function(reps, leq, name), representative


class MonotoneMap:
    """A total monotone function between finite posets, stored as a lookup table"""

    def __init__(self, source: FinitePoset, target: FinitePoset, table: Dict[Hashable, Hashable],
                 name: str = "f"):
        self.source = source
        self.target = target
        self.name = name
        missing = [a for a in source if a not in table]
        if missing:
            raise ShapeMismatchError(f"map {name} is undefined on {missing[:3]}")
        for a in source:
            if table[a] not in target:
                raise ShapeMismatchError(f"map {name} sends {a!r} outside {target.name}")
        self.table: Dict[Hashable, Hashable] = {a: table[a] for a in source}
        self._check_monotone()

    @classmethod
    def from_function(cls, source: FinitePoset, target: FinitePoset, fn: Callable[[Any], Any],
                      name: str = "f") -> "MonotoneMap":
        return cls(source, target, {a: fn(a) for a in source}, name)

    @classmethod
    def identity(cls, poset: FinitePoset) -> "MonotoneMap":
        return cls(poset, poset, {a: a for a in poset}, f"id_{poset.name}")

    def _check_monotone(self) -> None:
        for a in self.source:
            for b in self.source:
                if self.source.leq(a, b) and not self.target.leq(self.table[a], self.table[b]):
                    raise OrderError(f"map {self.name} is not monotone: {a!r} ≤ {b!r}")

    def __call__(self, a: Hashable) -> Hashable:
        return self.table[a]

    def then(self, other: "MonotoneMap") -> "MonotoneMap":
        """Diagrammatic composite self·other (self first)"""
        if self.target != other.source:
            raise ShapeMismatchError(f"cannot compose {self.name}: ..→{self.target.name} "
                                     f"with {other.name}: {other.source.name}→..")
        return MonotoneMap(self.source, other.target, {a: other(self(a)) for a in self.source},
                           f"{self.name}·{other.name}")

    def image(self) -> FrozenSet[Hashable]:
        return frozenset(self.table.values())

    def is_identity(self) -> bool:
        return self.source == self.target and all(self(a) == a for a in self.source)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MonotoneMap):
            return NotImplemented
        return self.source == other.source and self.target == other.target and self.table == other.table

    def __hash__(self) -> int:
        return hash(tuple(sorted(((repr(k), repr(v)) for k, v in self.table.items()))))

    def __repr__(self) -> str:
        return f"MonotoneMap({self.name}: {self.source.name}→{self.target.name})"


@dataclass(frozen=True)
class AdjointVerdict:
    is_adjoint: bool
    is_reflective: bool
    is_coreflective: bool
    is_inverse: bool


@dataclass(frozen=True)
class AdjointPair:
    """f: B→A left adjoint to g: A→B"""
    left: MonotoneMap
    right: MonotoneMap


def _check_opposed(f: MonotoneMap, g: MonotoneMap) -> None:
    if f.source != g.target or f.target != g.source:
        raise ShapeMismatchError(
            f"{f.name}: {f.source.name}→{f.target.name} and {g.name}: {g.source.name}→{g.target.name} "
            "are not opposed between the same posets")


def check_adjoint_pair(f: MonotoneMap, g: MonotoneMap) -> AdjointVerdict:
    """Decide f ⊣ g by the equivalence f(b) ≤ a iff b ≤ g(a) over all pairs"""
    _check_opposed(f, g)
    B, A = f.source, f.target
    adjoint = all(A.leq(f(b), a) == B.leq(b, g(a)) for b in B for a in A)
    if not adjoint:
        return AdjointVerdict(False, False, False, False)
    reflective = all(f(g(a)) == a for a in A)
    coreflective = all(g(f(b)) == b for b in B)
    return AdjointVerdict(True, reflective, coreflective, reflective and coreflective)


def adjoint_pair(f: MonotoneMap, g: MonotoneMap) -> AdjointPair:
    if not check_adjoint_pair(f, g).is_adjoint:
        raise NotAdjointError(f"{f.name} is not left adjoint to {g.name}")
    return AdjointPair(f, g)


@dataclass(frozen=True)
class ClosureInterior:
    closure: MonotoneMap
    interior: MonotoneMap
    closed_elements: FrozenSet[Hashable]
    open_elements: FrozenSet[Hashable]
    iso_witness: Dict[Hashable, Hashable] = field(hash=False)


def closure_interior_images(pair: AdjointPair) -> ClosureInterior:
    f, g = pair.left, pair.right
    if not check_adjoint_pair(f, g).is_adjoint:
        raise NotAdjointError(f"{f.name} is not left adjoint to {g.name}")
    closure = f.then(g)
    interior = g.then(f)
    closed = closure.image()
    opened = interior.image()
    witness = {b: f(b) for b in closed}
    # f restricted to closed elements is an order-isomorphism onto the open elements, inverse g
    if set(witness.values()) != set(opened) or any(g(witness[b]) != b for b in closed):
        raise NotAdjointError("closed and open elements are not in bijection")
    for b in closed:
        for c in closed:
            if f.source.leq(b, c) != f.target.leq(witness[b], witness[c]):
                raise NotAdjointError("bijection between closed and open elements is not an order-isomorphism")
    return ClosureInterior(closure, interior, closed, opened, witness)


def is_closure_operator(c: MonotoneMap) -> bool:
    P = c.source
    return c.source == c.target and all(P.leq(a, c(a)) and c(c(a)) == c(a) for a in P)


def is_interior_operator(i: MonotoneMap) -> bool:
    P = i.source
    return i.source == i.target and all(P.leq(i(a), a) and i(i(a)) == i(a) for a in P)


@dataclass(frozen=True)
class NegationVerdict:
    is_self_adjoint: bool
    involutive_on_closed: bool
    involutive_elements: FrozenSet[Hashable]
    # None when no pair of elements has both a join and a meet of images
    demorgan_holds: Optional[bool]


def check_negation_involution(f: Union[Callable[[Any], Any], MonotoneMap], poset: Optional[FinitePoset] = None
                              ) -> NegationVerdict:
    """Check an order-reversing endomap of a poset for the laws of a negation.

    ``f`` maps P to itself but is read against the reversed order on the target,
    so it is passed either as a plain table/callable with ``poset``, or as a
    MonotoneMap P → P^op.
    """
    if isinstance(f, MonotoneMap):
        P = f.source
        if f.target.elements != P.elements:
            raise ShapeMismatchError("a negation must map a carrier to itself")
        fn = f
    else:
        if poset is None:
            raise ShapeMismatchError("a poset is required for a table negation")
        P = poset
        fn = f
        for a in P:
            if fn(a) not in P:
                raise ShapeMismatchError(f"negation sends {a!r} outside {P.name}")

    self_adjoint = all(P.leq(a, fn(b)) == P.leq(b, fn(a)) for a in P for b in P)
    involutive = frozenset(a for a in P if fn(fn(a)) == a)
    closed = frozenset(fn(a) for a in P)
    demorgan: Optional[bool] = None
    for a in P:
        for b in P:
            j = P.join(a, b)
            if j is None:
                continue
            m = P.meet(fn(a), fn(b))
            if m is None:
                continue
            demorgan = (demorgan is not False) and fn(j) == m
    return NegationVerdict(self_adjoint, closed <= involutive, involutive, demorgan)
