"""
Models Module for DialecticKernel
Constructors for the concrete Heyting categories: booleans, powersets, relations, tropical numbers,
formal languages, subset categories, matrices, distributors and type sums
"""

import logging
from dataclasses import dataclass
from functools import reduce
from itertools import chain, combinations, product
from typing import Any, Dict, FrozenSet, List, Optional, Sequence, Tuple

from src.biposet import FiniteBiposet, TermRef, build_biposet, validate_biposet
from src.config import get_settings
from src.errors import (
    CapabilityError, ModelConstructionError, SizeBoundError, UnknownDescriptorError,
)
from src.heyting import HeytingModel, center_model, make_heyting
from src.reports import Report

logger = logging.getLogger(__name__)

ONE = "*"
INF = float("inf")


def _powerset(items: Sequence[Any]) -> List[FrozenSet[Any]]:
    items = list(items)
    return [frozenset(c) for c in chain.from_iterable(combinations(items, k) for k in range(len(items) + 1))]


def _check_powerset_size(name: str, n: int) -> None:
    bound = get_settings().max_homset_size
    if 2 ** n > bound:
        raise SizeBoundError(f"{name}: 2^{n} terms exceeds homset bound {bound}")


def _set_label(items: Sequence[str]) -> str:
    return "{" + ",".join(items) + "}"


def _heyting(base: FiniteBiposet) -> HeytingModel:
    try:
        return make_heyting(base)
    except ModelConstructionError:
        logger.error(f"Model {base.name} failed its adjointness audit")
        raise


# ---------------------------------------------------------------- one-object models


def make_bool2() -> HeytingModel:
    base = build_biposet(
        "bool2", [ONE], {(ONE, ONE): [False, True]},
        le=lambda y, x, a, b: (not a) or b,
        compose=lambda z, y, x, s, r: s and r,
        identity=lambda x: True,
        label=lambda y, x, v: "1" if v else "0",
        join=lambda y, x, a, b: a or b,
        meet=lambda y, x, a, b: a and b,
        kind="bool2", meta={"claims": ("cHc",)},
    )
    return _heyting(base)


def make_powerset(n: int) -> HeytingModel:
    """℘{0..n-1} with ∘ = ∩ and unit the full set"""
    _check_powerset_size(f"powerset:{n}", n)
    full = frozenset(range(n))
    base = build_biposet(
        f"powerset:{n}", [ONE], {(ONE, ONE): _powerset(range(n))},
        le=lambda y, x, a, b: a <= b,
        compose=lambda z, y, x, s, r: s & r,
        identity=lambda x: full,
        label=lambda y, x, v: _set_label([str(i) for i in sorted(v)]),
        join=lambda y, x, a, b: a | b,
        meet=lambda y, x, a, b: a & b,
        kind="powerset", meta={"claims": ("cHc",), "n": n},
    )
    return _heyting(base)


def make_tropical(cap: int, saturation: str = "infinity") -> HeytingModel:
    """{0..K, ∞} ordered by ≥ with truncated addition.

    saturation: ``infinity`` sends sums above K to ∞, ``cap`` clamps them to K, ``wrap`` reduces them
    modulo K+1 and is rejected by the audit.
    """
    if saturation not in ("infinity", "cap", "wrap"):
        raise ValueError(f"unknown saturation {saturation!r}")
    if cap + 2 > get_settings().max_homset_size:
        raise SizeBoundError(f"trop:{cap} exceeds homset bound")

    def plus(z, y, x, s, r):
        if s == INF or r == INF:
            return INF
        total = s + r
        if total <= cap:
            return total
        if saturation == "infinity":
            return INF
        if saturation == "cap":
            return cap
        return total % (cap + 1)

    values = list(range(cap + 1)) + [INF]
    base = build_biposet(
        f"trop:{cap}", [ONE], {(ONE, ONE): values},
        le=lambda y, x, a, b: a >= b,
        compose=plus,
        identity=lambda x: 0,
        label=lambda y, x, v: "inf" if v == INF else str(v),
        join=lambda y, x, a, b: min(a, b),
        meet=lambda y, x, a, b: max(a, b),
        kind="tropical", meta={"claims": ("cHc",), "cap": cap, "saturation": saturation},
    )
    try:
        return make_heyting(base)
    except ModelConstructionError as e:
        raise ModelConstructionError(f"saturation {saturation!r} is rejected for trop:{cap}: {e}") from e


def truncated_difference(s: float, r: float) -> float:
    """s ∸ r, the closed form of s⟜r in the tropical model"""
    if s == INF:
        return INF if r != INF else 0
    return s - r if s >= r else 0


def _strings(alphabet: str, maxlen: int) -> List[str]:
    out = [""]
    for n in range(1, maxlen + 1):
        out.extend("".join(p) for p in product(alphabet, repeat=n))
    return out


def _lang_label(lang: FrozenSet[str]) -> str:
    return _set_label([w or "ε" for w in sorted(lang, key=lambda w: (len(w), w))])


def make_language(alphabet: str, maxlen: int) -> HeytingModel:
    """℘(A*) truncated to strings of length ≤ maxlen; overlong concatenations are dropped"""
    strings = _strings(alphabet, maxlen)
    _check_powerset_size(f"lang:{alphabet},{maxlen}", len(strings))

    def concat(z, y, x, s, r):
        return frozenset(u + v for u in s for v in r if len(u) + len(v) <= maxlen)

    base = build_biposet(
        f"lang:{alphabet},{maxlen}", [ONE], {(ONE, ONE): _powerset(strings)},
        le=lambda y, x, a, b: a <= b,
        compose=concat,
        identity=lambda x: frozenset([""]),
        label=lambda y, x, v: _lang_label(v),
        join=lambda y, x, a, b: a | b,
        meet=lambda y, x, a, b: a & b,
        kind="language", meta={"claims": ("cHc",), "alphabet": alphabet, "maxlen": maxlen,
                               "strings": strings},
    )
    return _heyting(base)


def language_division(L: FrozenSet[str], K: FrozenSet[str], strings: Sequence[str], maxlen: int) -> FrozenSet[str]:
    """L\\K = { m | for all n in L, |nm| ≤ maxlen implies nm in K }"""
    return frozenset(m for m in strings if all(n + m in K for n in L if len(n) + len(m) <= maxlen))


# ---------------------------------------------------------------- relations


def _rel_label(rel: FrozenSet[Tuple[int, int]]) -> str:
    return _set_label([f"{a}{b}" for a, b in sorted(rel)])


def make_rel(sizes: Sequence[int]) -> HeytingModel:
    """Rel over finite sets of the given sizes; types are t0, t1, ..."""
    types = [f"t{i}" for i in range(len(sizes))]
    size = dict(zip(types, sizes))
    carriers = {}
    for y, x in product(types, repeat=2):
        pairs = list(product(range(size[y]), range(size[x])))
        _check_powerset_size(f"rel hom({y},{x})", len(pairs))
        carriers[(y, x)] = _powerset(pairs)

    def relcomp(z, y, x, s, r):
        return frozenset((a, c) for a, b in s for b2, c in r if b == b2)

    base = build_biposet(
        "rel:" + ",".join(str(n) for n in sizes), types, carriers,
        le=lambda y, x, a, b: a <= b,
        compose=relcomp,
        identity=lambda x: frozenset((i, i) for i in range(size[x])),
        label=lambda y, x, v: _rel_label(v),
        join=lambda y, x, a, b: a | b,
        meet=lambda y, x, a, b: a & b,
        kind="rel", meta={"claims": ("cHc",), "sizes": dict(size)},
    )
    return _heyting(base)


def relation_term(M: FiniteBiposet, y: str, x: str, pairs) -> TermRef:
    return M.term_of(y, x, frozenset(tuple(p) for p in pairs))


def function_graph(M: FiniteBiposet, y: str, x: str, mapping: Sequence[int]) -> TermRef:
    return relation_term(M, y, x, [(i, j) for i, j in enumerate(mapping)])


# ---------------------------------------------------------------- base categories and subset families


def make_group_category(n: int) -> FiniteBiposet:
    """The cyclic group Z_n as a one-object category with discrete homset order"""
    return build_biposet(
        f"group:{n}", [ONE], {(ONE, ONE): list(range(n))},
        le=lambda y, x, a, b: a == b,
        compose=lambda z, y, x, s, r: (s + r) % n,
        identity=lambda x: 0,
        kind="group", meta={"n": n},
    )


def make_chain_monoid(n: int) -> FiniteBiposet:
    """The chain 0 < 1 < ... < n-1 as a one-object biposet under max"""
    return build_biposet(
        f"chain:{n}", [ONE], {(ONE, ONE): list(range(n))},
        le=lambda y, x, a, b: a <= b,
        compose=lambda z, y, x, s, r: max(s, r),
        identity=lambda x: 0,
        join=lambda y, x, a, b: max(a, b),
        meet=lambda y, x, a, b: min(a, b),
        kind="chain", meta={"n": n},
    )


SUBSET_VARIANTS = ("subset", "closure", "closed")


def make_subset_family(P: FiniteBiposet, variant: str = "subset") -> HeytingModel:
    """℘(C), the closure subset category ℘(P) quotiented by S ⊆ ↓R, or the closed subset category"""
    if variant not in SUBSET_VARIANTS:
        raise ValueError(f"unknown subset variant {variant!r}")
    report = validate_biposet(P)
    if not report.passed:
        raise ModelConstructionError(f"base {P.name} is not a biposet: {report.failed_checks()[0].line()}")

    def down(y, x, items):
        le = P.hom(y, x).le
        return frozenset(int(i) for i in range(len(le)) if any(le[i, j] for j in items))

    def product_set(z, y, x, s, r):
        table = P.comp[(z, y, x)]
        return frozenset(int(table[a, b]) for a in s for b in r)

    carriers: Dict[Tuple[str, str], List[FrozenSet[int]]] = {}
    representative: Dict[Tuple[str, str], Dict[FrozenSet[int], FrozenSet[int]]] = {}
    for y, x in product(P.types, repeat=2):
        n = len(P.hom(y, x))
        _check_powerset_size(f"{variant}({P.name}) hom({y},{x})", n)
        subsets = sorted(_powerset(range(n)), key=lambda s: (len(s), sorted(s)))
        if variant == "subset":
            carriers[(y, x)] = subsets
        elif variant == "closed":
            carriers[(y, x)] = [s for s in subsets if down(y, x, s) == s]
        else:
            # first member of each ↓-class in size order is its set of maximal elements
            reps: Dict[FrozenSet[int], FrozenSet[int]] = {}
            by_closure: Dict[FrozenSet[int], FrozenSet[int]] = {}
            for s in subsets:
                d = down(y, x, s)
                by_closure.setdefault(d, s)
                reps[s] = by_closure[d]
            representative[(y, x)] = reps
            carriers[(y, x)] = list(by_closure.values())

    if variant == "subset":
        compose, le = product_set, (lambda y, x, a, b: a <= b)
        identity = lambda x: frozenset([P.ident[x]])
    elif variant == "closed":
        compose = lambda z, y, x, s, r: down(z, x, product_set(z, y, x, s, r))
        le = lambda y, x, a, b: a <= b
        identity = lambda x: down(x, x, [P.ident[x]])
    else:
        compose = lambda z, y, x, s, r: representative[(z, x)][product_set(z, y, x, s, r)]
        le = lambda y, x, a, b: a <= down(y, x, b)
        identity = lambda x: representative[(x, x)][frozenset([P.ident[x]])]

    def label(y, x, v):
        names = P.hom(y, x).labels
        return _set_label([names[i] for i in sorted(v)])

    base = build_biposet(
        f"{variant}({P.name})", P.types, carriers, le=le, compose=compose, identity=identity, label=label,
        kind=f"{variant}subset" if variant != "subset" else "subsetcat",
        meta={"claims": ("cHc",), "base": P, "variant": variant},
    )
    return _heyting(base)


def make_cyclic(n: int) -> HeytingModel:
    return make_subset_family(make_group_category(n), "subset")


# ---------------------------------------------------------------- matrices and distributors


@dataclass(frozen=True)
class TypedVector:
    """An index set whose entries are typed by objects of the base model"""
    name: str
    typing: Tuple[str, ...]

    def __len__(self) -> int:
        return len(self.typing)


def _matrix_label(H: FiniteBiposet, y: TypedVector, x: TypedVector, value: Tuple[int, ...]) -> str:
    rows = []
    for i, a in enumerate(y.typing):
        row = [H.hom(a, b).labels[value[i * len(x) + j]] for j, b in enumerate(x.typing)]
        rows.append(";".join(row))
    return "[" + "|".join(rows) + "]"


def make_matrix(H: HeytingModel, vectors: Sequence[TypedVector], name: Optional[str] = None,
                kind: str = "matrix") -> HeytingModel:
    """mat(H) restricted to the given H-vectors, with composition (S∘R)_zx = ⋁_y s_zy∘r_yx"""
    if not isinstance(H, HeytingModel):
        raise CapabilityError(f"mat() needs a complete Heyting base, got {H.name}")
    settings = get_settings()
    vec = {v.name: v for v in vectors}
    if len(vec) != len(vectors):
        raise ModelConstructionError("vector names must be distinct")
    for v in vectors:
        unknown = [t for t in v.typing if t not in H.types]
        if unknown:
            raise ModelConstructionError(f"vector {v.name} uses unknown types {unknown}")

    carriers = {}
    for y, x in product(vec, repeat=2):
        cells = [(a, b) for a in vec[y].typing for b in vec[x].typing]
        count = reduce(lambda acc, c: acc * len(H.hom(*c)), cells, 1)
        if count > settings.max_homset_size:
            raise SizeBoundError(f"mat hom({y},{x}) has {count} terms, bound is {settings.max_homset_size}")
        carriers[(y, x)] = list(product(*[range(len(H.hom(a, b))) for a, b in cells]))

    def compose(z, y, x, s, r):
        Z, Y, X = vec[z], vec[y], vec[x]
        out = []
        for i, a in enumerate(Z.typing):
            for k, c in enumerate(X.typing):
                h = H.hom(a, c)
                acc = h.bottom
                for j, b in enumerate(Y.typing):
                    acc = int(h.join[acc, H.comp[(a, b, c)][s[i * len(Y) + j], r[j * len(X) + k]]])
                out.append(acc)
        return tuple(out)

    def identity(x):
        X = vec[x]
        return tuple(H.ident[a] if i == j else H.hom(a, b).bottom
                     for i, a in enumerate(X.typing) for j, b in enumerate(X.typing))

    def pointwise(table):
        def op(y, x, a, b):
            cells = [(p, q) for p in vec[y].typing for q in vec[x].typing]
            return tuple(int(getattr(H.hom(*c), table)[u, v]) for c, u, v in zip(cells, a, b))
        return op

    def le(y, x, a, b):
        cells = [(p, q) for p in vec[y].typing for q in vec[x].typing]
        return all(H.hom(*c).le[u, v] for c, u, v in zip(cells, a, b))

    base = build_biposet(
        name or f"mat({H.name})", list(vec), carriers, le=le, compose=compose, identity=identity,
        label=lambda y, x, v: _matrix_label(H, vec[y], vec[x], v),
        join=pointwise("join"), meet=pointwise("meet"),
        kind=kind, meta={"claims": ("cHc",), "base": H, "vectors": dict(vec)},
    )
    return _heyting(base)


def matrix_entry(M: FiniteBiposet, t: TermRef, i: int, j: int) -> TermRef:
    """The (i, j) component of a matrix term as a base term"""
    H, vec = M.meta["base"], M.meta["vectors"]
    Y, X = vec[t.source], vec[t.target]
    return TermRef(Y.typing[i], X.typing[j], M.value(t)[i * len(X) + j])


def matrix_imply(M: FiniteBiposet, side: str, a: TermRef, b: TermRef) -> TermRef:
    """Component formulas (S⟜R)_zy = ⋀_x s_zx⟜r_yx and (R⊸T)_xz = ⋀_y r_yx⊸t_yz"""
    H, vec = M.meta["base"], M.meta["vectors"]
    out = []
    if side == "right":
        s, r = a, b
        Z, Y, X = vec[s.source], vec[r.source], vec[s.target]
        for i, z in enumerate(Z.typing):
            for j, y in enumerate(Y.typing):
                parts = [H.right_imply(matrix_entry(M, s, i, k), matrix_entry(M, r, j, k)) for k in range(len(X))]
                out.append(H.meet_all(z, y, parts).elem)
        return M.term_of(s.source, r.source, tuple(out))
    if side == "left":
        r, t = a, b
        Y, X, Z = vec[r.source], vec[r.target], vec[t.target]
        for i, x in enumerate(X.typing):
            for k, z in enumerate(Z.typing):
                parts = [H.left_imply(matrix_entry(M, r, j, i), matrix_entry(M, t, j, k)) for j in range(len(Y))]
                out.append(H.meet_all(x, z, parts).elem)
        return M.term_of(r.target, t.target, tuple(out))
    raise ValueError(f"unknown implication side {side!r}")


def default_vectors(C: FiniteBiposet) -> List[TypedVector]:
    return [TypedVector(t, (t,)) for t in C.types]


def make_distributor(C: FiniteBiposet, vectors: Optional[Sequence[TypedVector]] = None) -> HeytingModel:
    """distrib(C) = mat(℘C)"""
    PC = make_subset_family(C, "subset")
    return make_matrix(PC, list(vectors or default_vectors(C)), name=f"distrib({C.name})", kind="distributor")


def distributor_fibers(M: FiniteBiposet, r: TermRef) -> Dict[Tuple[int, int], FrozenSet[int]]:
    """The ℘C-term in each matrix cell, as a set of base arrows"""
    PC = M.meta["base"]
    Y, X = M.meta["vectors"][r.source], M.meta["vectors"][r.target]
    return {(i, j): PC.value(matrix_entry(M, r, i, j)) for i in range(len(Y)) for j in range(len(X))}


# ---------------------------------------------------------------- type sums


@dataclass
class TypeSum:
    model: HeytingModel
    sumtype: str
    left: str
    right: str
    i_y: TermRef
    i_x: TermRef
    p_y: TermRef
    p_x: TermRef

    def source_pairing(self, t: TermRef, s: TermRef) -> TermRef:
        """[t,s] = (p_y∘t)∨(p_x∘s) for t: y→z, s: x→z"""
        M = self.model
        return M.join(M.compose(self.p_y, t), M.compose(self.p_x, s))

    def target_pairing(self, t: TermRef, s: TermRef) -> TermRef:
        """⟨t,s⟩ = (t∘i_y)∨(s∘i_x) for t: z→y, s: z→x"""
        M = self.model
        return M.join(M.compose(t, self.i_y), M.compose(s, self.i_x))

    def subterms(self, r: TermRef) -> Tuple[TermRef, TermRef]:
        """r_y = p_y∘i_y∘r and r_x = p_x∘i_x∘r for r out of the sum"""
        M = self.model
        return (M.compose_all(self.p_y, self.i_y, r), M.compose_all(self.p_x, self.i_x, r))

    def check(self) -> Report:
        M, sm, y, x = self.model, self.sumtype, self.left, self.right
        report = Report(f"type sum {sm}")
        disjoint = report.check("subtype disjointness")
        disjoint.record(M.compose(self.i_y, self.p_y) == M.identity(y), "i_y∘p_y ≠ y")
        disjoint.record(M.compose(self.i_x, self.p_x) == M.identity(x), "i_x∘p_x ≠ x")
        disjoint.record(M.compose(self.i_y, self.p_x) == M.bottom(y, x), "i_y∘p_x ≠ ⊥")
        disjoint.record(M.compose(self.i_x, self.p_y) == M.bottom(x, y), "i_x∘p_y ≠ ⊥")
        u_y, u_x = M.compose(self.p_y, self.i_y), M.compose(self.p_x, self.i_x)
        cover = report.check("comonoid covering")
        cover.record(M.join(u_y, u_x) == M.identity(sm), "p_y∘i_y ∨ p_x∘i_x ≠ id")
        cover.record(M.compose(u_y, u_x) == M.bottom(sm, sm), "comonoids of the sum are not disjoint")
        pairing = report.check("pairing universality")
        subterm = report.check("subterm covering")
        for z in (y, x):
            for t in M.terms(y, z):
                for s in M.terms(x, z):
                    p = self.source_pairing(t, s)
                    pairing.record(M.compose(self.i_y, p) == t and M.compose(self.i_x, p) == s,
                                   lambda: f"[{M.label(t)},{M.label(s)}]")
            for t in M.terms(z, y):
                for s in M.terms(z, x):
                    p = self.target_pairing(t, s)
                    pairing.record(M.compose(p, self.p_y) == t and M.compose(p, self.p_x) == s,
                                   lambda: f"⟨{M.label(t)},{M.label(s)}⟩")
            for r in M.terms(sm, z):
                ry, rx = self.subterms(r)
                subterm.record(M.join(ry, rx) == r, lambda: M.describe(r))
        return report

    def lift(self, M: FiniteBiposet, t: TermRef) -> TermRef:
        """Carry a term of the original matrix model into the model with the sum"""
        return self.model.term_of(t.source, t.target, M.value(t))


def type_sum(M: HeytingModel, y: str, x: str) -> TypeSum:
    """y⊕x with injections and projections, in a matrix model extended by the sum vector"""
    if M.kind not in ("matrix", "distributor"):
        raise CapabilityError(f"{M.name} ({M.kind}) has no type sums")
    H, vec = M.meta["base"], dict(M.meta["vectors"])
    Y, X = vec[y], vec[x]
    sm = f"{y}+{x}"
    S = TypedVector(sm, Y.typing + X.typing)
    extended = make_matrix(H, list(vec.values()) + [S], name=f"{M.name}+{sm}", kind=M.kind)

    def block(rows: TypedVector, cols: TypedVector, offset_rows: int, offset_cols: int) -> Tuple[int, ...]:
        return tuple(H.ident[a] if i + offset_rows == j + offset_cols else H.hom(a, b).bottom
                     for i, a in enumerate(rows.typing) for j, b in enumerate(cols.typing))

    i_y = extended.term_of(y, sm, block(Y, S, 0, 0))
    i_x = extended.term_of(x, sm, block(X, S, len(Y), 0))
    p_y = extended.term_of(sm, y, block(S, Y, 0, 0))
    p_x = extended.term_of(sm, x, block(S, X, 0, len(Y)))
    return TypeSum(extended, sm, y, x, i_y, i_x, p_y, p_x)


# ---------------------------------------------------------------- descriptors


@dataclass(frozen=True)
class ModelDescriptor:
    kind: str
    params: Tuple[Any, ...] = ()
    inner: Optional["ModelDescriptor"] = None
    text: str = ""


MODEL_KINDS = ("bool2", "powerset", "rel", "trop", "lang", "mat", "group", "chain", "cyclic",
               "subset", "closure", "closed", "distrib", "center")


def _ints(text: str, descriptor: str) -> Tuple[int, ...]:
    try:
        return tuple(int(p) for p in text.split(",") if p)
    except ValueError:
        raise UnknownDescriptorError(f"bad size list in {descriptor!r}") from None


def parse_descriptor(text: str) -> ModelDescriptor:
    text = text.strip()
    kind, _, rest = text.partition(":")
    if kind not in MODEL_KINDS:
        raise UnknownDescriptorError(f"unknown model descriptor {text!r}")
    if kind == "bool2":
        return ModelDescriptor("bool2", text=text)
    if kind in ("powerset", "group", "chain", "cyclic"):
        sizes = _ints(rest, text)
        if len(sizes) != 1:
            raise UnknownDescriptorError(f"{kind} takes one size, got {text!r}")
        return ModelDescriptor(kind, sizes, text=text)
    if kind == "rel":
        sizes = _ints(rest, text)
        if not sizes:
            raise UnknownDescriptorError(f"rel needs at least one size, got {text!r}")
        return ModelDescriptor("rel", sizes, text=text)
    if kind == "trop":
        parts = rest.split(",")
        saturation = parts[1] if len(parts) > 1 else "infinity"
        return ModelDescriptor("trop", (_ints(parts[0], text)[0], saturation), text=text)
    if kind == "lang":
        alphabet, _, maxlen = rest.partition(",")
        if not alphabet or not maxlen.isdigit():
            raise UnknownDescriptorError(f"lang needs alphabet,maxlen, got {text!r}")
        return ModelDescriptor("lang", (alphabet, int(maxlen)), text=text)
    if kind == "mat":
        inner_text, _, sizes = rest.rpartition(":")
        if not inner_text:
            raise UnknownDescriptorError(f"mat needs mat:<model>:<sizes>, got {text!r}")
        return ModelDescriptor("mat", _ints(sizes, text), parse_descriptor(inner_text), text=text)
    if kind == "distrib":
        if not rest:
            raise UnknownDescriptorError("distrib needs a model file")
        return ModelDescriptor("distrib", (rest,), text=text)
    if not rest:
        raise UnknownDescriptorError(f"{kind} needs an inner model, got {text!r}")
    return ModelDescriptor(kind, (), parse_descriptor(rest), text=text)


def build_model(descriptor) -> FiniteBiposet:
    """Construct the model named by a descriptor (string or ModelDescriptor)"""
    d = parse_descriptor(descriptor) if isinstance(descriptor, str) else descriptor
    logger.info(f"Building model {d.text or d.kind}")
    if d.kind == "bool2":
        return make_bool2()
    if d.kind == "powerset":
        return make_powerset(d.params[0])
    if d.kind == "rel":
        return make_rel(d.params)
    if d.kind == "trop":
        return make_tropical(*d.params)
    if d.kind == "lang":
        return make_language(*d.params)
    if d.kind == "group":
        return make_group_category(d.params[0])
    if d.kind == "chain":
        return make_chain_monoid(d.params[0])
    if d.kind == "cyclic":
        return make_cyclic(d.params[0])
    if d.kind == "mat":
        H = build_model(d.inner)
        if not isinstance(H, HeytingModel):
            raise CapabilityError(f"{H.name} is not a complete Heyting model")
        t = H.types[0]
        vectors = [TypedVector(f"t{i}", (t,) * n) for i, n in enumerate(d.params)]
        return make_matrix(H, vectors, name=f"mat({H.name})")
    if d.kind in SUBSET_VARIANTS:
        return make_subset_family(build_model(d.inner), d.kind)
    if d.kind == "center":
        H = build_model(d.inner)
        if not isinstance(H, HeytingModel):
            raise CapabilityError(f"{H.name} is not a Heyting model")
        return center_model(H)
    if d.kind == "distrib":
        from src.parsers import load_model_file
        return make_distributor(load_model_file(d.params[0]))
    raise UnknownDescriptorError(f"unknown model descriptor {d.text!r}")


DEFAULT_MODELS = ("bool2", "trop:8", "rel:2,2", "lang:ab,2", "powerset:2", "cyclic:3")
