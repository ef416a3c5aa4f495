"""
Heyting Module for DialecticKernel
Tensor implications, tensor negation, double negation and Boolean centers of finite Heyting categories
"""

import logging
from dataclasses import dataclass
from itertools import product
from typing import Dict, FrozenSet, Optional, Tuple

import numpy as np

from src.biposet import (
    FiniteBiposet, TermRef, functional_adjoint, orthogonal_mask, quasisymmetric_mask,
    quasisymmetry_center, validate_biposet,
)
from src.errors import CapabilityError, ModelConstructionError, TypeMismatchError
from src.reports import Report

logger = logging.getLogger(__name__)


class HeytingModel(FiniteBiposet):
    """A finite join-bisemilattice whose implications are computed by sweep and then audited.

    ``left[(y, x, z)][r, t]`` is r⊸t : x→z for r: y→x and t: y→z.
    ``right[(z, y, x)][s, r]`` is s⟜r : z→y for s: z→x and r: y→x.
    ``neg[(y, x)][r]`` is ¬r : x→y.
    """

    def __init__(self, base: FiniteBiposet, audit: bool = True):
        self._adopt(base)
        try:
            self.require("lattice")
        except CapabilityError as e:
            raise CapabilityError(f"{base.name} is not a Heyting candidate: {e}") from e
        self.left: Dict[Tuple[str, str, str], np.ndarray] = {}
        self.right: Dict[Tuple[str, str, str], np.ndarray] = {}
        self.neg: Dict[Tuple[str, str], np.ndarray] = {}
        self._build_implications()
        if audit:
            report = Report(f"dialectical axioms {self.name}")
            check_dialectical_axioms(self, report)
            if not report.passed:
                failed = report.failed_checks()[0]
                raise ModelConstructionError(
                    f"{self.name} violates the dialectical axioms: {failed.witnesses[:3]}")
        self._build_negation()

    def _build_implications(self) -> None:
        for y, x, z in product(self.types, repeat=3):
            C = self.comp[(y, x, z)]                      # r∘s, r: y→x, s: x→z
            le_yz = self.hom(y, z).le
            h_xz = self.hom(x, z)
            table = np.empty((len(self.hom(y, x)), len(self.hom(y, z))), dtype=np.int64)
            for r in range(table.shape[0]):
                table[r] = h_xz.join_columns(le_yz[C[r, :], :])
            self.left[(y, x, z)] = table
        for z, y, x in product(self.types, repeat=3):
            C = self.comp[(z, y, x)]                      # t∘r, t: z→y, r: y→x
            le_zx = self.hom(z, x).le
            h_zy = self.hom(z, y)
            table = np.empty((len(self.hom(z, x)), len(self.hom(y, x))), dtype=np.int64)
            for r in range(table.shape[1]):
                table[:, r] = h_zy.join_columns(le_zx[C[:, r], :])
            self.right[(z, y, x)] = table
        if any(np.any(t < 0) for t in list(self.left.values()) + list(self.right.values())):
            raise CapabilityError(f"{self.name}: some implication has no join of solutions")

    def _build_negation(self) -> None:
        for y, x in product(self.types, repeat=2):
            to_y = self.left[(y, x, y)][:, self.ident[y]]          # r⊸y
            from_x = self.right[(x, y, x)][self.ident[x], :]       # x⟜r
            self.neg[(y, x)] = self.hom(x, y).meet[to_y, from_x]

    # term-level operations

    def left_imply(self, r: TermRef, t: TermRef) -> TermRef:
        if r.source != t.source:
            raise TypeMismatchError(f"⊸ needs a common source, got {r.hom} and {t.hom}")
        return TermRef(r.target, t.target, int(self.left[(r.source, r.target, t.target)][r.elem, t.elem]))

    def right_imply(self, s: TermRef, r: TermRef) -> TermRef:
        if s.target != r.target:
            raise TypeMismatchError(f"⟜ needs a common target, got {s.hom} and {r.hom}")
        return TermRef(s.source, r.source, int(self.right[(s.source, r.source, s.target)][s.elem, r.elem]))

    def negate(self, r: TermRef) -> TermRef:
        return TermRef(r.target, r.source, int(self.neg[r.hom][r.elem]))

    def double_negate(self, r: TermRef) -> TermRef:
        return self.negate(self.negate(r))

    def dn_table(self, y: str, x: str) -> np.ndarray:
        return self.neg[(x, y)][self.neg[(y, x)]]

    def is_closed(self, r: TermRef) -> bool:
        return self.double_negate(r) == r

    def otimes(self, s: TermRef, r: TermRef) -> TermRef:
        return self.double_negate(self.compose(s, r))

    def nabla(self, s: TermRef, r: TermRef) -> TermRef:
        return self.negate(self.compose(self.negate(r), self.negate(s)))

    def oplus(self, a: TermRef, b: TermRef) -> TermRef:
        return self.double_negate(self.join(a, b))

    def zero(self, y: str, x: str) -> TermRef:
        return self.double_negate(self.bottom(y, x))

    def one(self, y: str, x: str) -> TermRef:
        return self.double_negate(self.top(y, x))


def make_heyting(base: FiniteBiposet, audit: bool = True) -> HeytingModel:
    """Factory function for Heyting models"""
    if isinstance(base, HeytingModel):
        return base
    return HeytingModel(base, audit=audit)


# ---------------------------------------------------------------- operations


def tensor_imply(H: HeytingModel, side: str, a: TermRef, b: TermRef) -> TermRef:
    """side 'left': a⊸b with a: y→x, b: y→z; side 'right': a⟜b with a: z→x, b: y→x"""
    if side == "left":
        return H.left_imply(a, b)
    if side == "right":
        return H.right_imply(a, b)
    raise ValueError(f"unknown implication side {side!r}")


def tensor_negation(H: HeytingModel, r: TermRef) -> TermRef:
    return H.negate(r)


def double_negation(H: HeytingModel, r: TermRef) -> TermRef:
    return H.double_negate(r)


def dn_closed_terms(H: HeytingModel, y: str, x: str) -> FrozenSet[TermRef]:
    dn = H.dn_table(y, x)
    return frozenset(TermRef(y, x, int(i)) for i in np.flatnonzero(dn == np.arange(len(dn))))


@dataclass(frozen=True)
class TensorPair:
    otimes: TermRef
    nabla: TermRef


@dataclass(frozen=True)
class BooleanPair:
    oplus: TermRef
    triangle: TermRef


def classical_connectives(H: HeytingModel, s: TermRef, r: TermRef) -> TensorPair:
    return TensorPair(H.otimes(s, r), H.nabla(s, r))


def boolean_connectives(H: HeytingModel, a: TermRef, b: TermRef) -> BooleanPair:
    return BooleanPair(H.oplus(a, b), H.meet(a, b))


def pole_of(H: HeytingModel, r: TermRef) -> Optional[TermRef]:
    """¬¬ of the join of central terms below r, when that join is itself central"""
    y, x = r.source, r.target
    central = quasisymmetric_mask(H, y, x)
    below = H.hom(y, x).le[:, r.elem] & central
    interior = H.hom(y, x).join_of(np.flatnonzero(below))
    if not central[interior]:
        return None
    return H.double_negate(TermRef(y, x, interior))


def is_heyting_coquasisymmetric(H: HeytingModel, r: TermRef) -> bool:
    """Heyting reading: r = ¬s for some quasisymmetric s opposed to r"""
    y, x = r.source, r.target
    central = np.flatnonzero(quasisymmetric_mask(H, x, y))
    return bool(np.any(H.neg[(x, y)][central] == r.elem))


# ---------------------------------------------------------------- law checks


def _name(H: FiniteBiposet, y: str, x: str, i: int) -> str:
    return H.hom(y, x).labels[i]


def check_dialectical_axioms(H: HeytingModel, report: Report) -> Report:
    left = report.check("left dialectical axiom")
    right = report.check("right dialectical axiom")
    for y, x, z in product(H.types, repeat=3):
        C = H.comp[(y, x, z)]
        nyz, nxz = len(H.hom(y, z)), len(H.hom(x, z))
        lhs = H.hom(y, z).le[C[:, :, None], np.arange(nyz)[None, None, :]]          # r∘s ⪯ t
        rhs = H.hom(x, z).le[np.arange(nxz)[None, :, None], H.left[(y, x, z)][:, None, :]]  # s ⪯ r⊸t
        bad = np.argwhere(lhs != rhs)
        left.record_many(lhs.size, (f"r={_name(H, y, x, r)} s={_name(H, x, z, s)} t={_name(H, y, z, t)}"
                                    for r, s, t in bad[:3]), bad_count=len(bad))
    for z, y, x in product(H.types, repeat=3):
        C = H.comp[(z, y, x)]
        nzx, nzy = len(H.hom(z, x)), len(H.hom(z, y))
        lhs = H.hom(z, x).le[C[:, :, None], np.arange(nzx)[None, None, :]]          # t∘r ⪯ s  [t, r, s]
        rhs = H.hom(z, y).le[np.arange(nzy)[:, None, None], H.right[(z, y, x)].T[None, :, :]]  # t ⪯ s⟜r
        bad = np.argwhere(lhs != rhs)
        right.record_many(lhs.size, (f"t={_name(H, z, y, t)} r={_name(H, y, x, r)} s={_name(H, z, x, s)}"
                                     for t, r, s in bad[:3]), bad_count=len(bad))
    return report


def check_modus_ponens(H: HeytingModel, report: Report) -> Report:
    check = report.check("modus ponens")
    for z, y, x in product(H.types, repeat=3):
        R = H.right[(z, y, x)]                                   # [s, r]
        composite = H.comp[(z, y, x)][R, np.arange(R.shape[1])[None, :]]
        ok = H.hom(z, x).le[composite, np.arange(R.shape[0])[:, None]]
        check.record_many(ok.size, [f"(s⟜r)∘r ⋠ s at {z},{y},{x}"] if not ok.all() else [],
                          bad_count=int((~ok).sum()))
    for y, x, z in product(H.types, repeat=3):
        L = H.left[(y, x, z)]                                    # [r, t]
        composite = H.comp[(y, x, z)][np.arange(L.shape[0])[:, None], L]
        ok = H.hom(y, z).le[composite, np.arange(L.shape[1])[None, :]]
        check.record_many(ok.size, [f"r∘(r⊸t) ⋠ t at {y},{x},{z}"] if not ok.all() else [],
                          bad_count=int((~ok).sum()))
    return report


def check_mixed_associativity(H: HeytingModel, report: Report) -> Report:
    right = report.check("right implication currying")
    mixed = report.check("mixed associativity")
    for w, z, y, x in product(H.types, repeat=4):
        # t: w→x, s: z→y, r: y→x; t⟜(s∘r) = (t⟜r)⟜s
        sr = H.comp[(z, y, x)]
        lhs = H.right[(w, z, x)][:, sr]                              # [t, s, r]
        inner = H.right[(w, y, x)]                                   # [t, r]
        rhs = H.right[(w, z, y)][inner[:, None, :], np.arange(sr.shape[0])[None, :, None]]
        n_bad = int((lhs != rhs).sum())
        right.record_many(lhs.size, [f"t⟜(s∘r) at {w},{z},{y},{x}"] if n_bad else [], bad_count=n_bad)
        # s: y→z, t: y→x, r: w→x; s⊸(t⟜r) = (s⊸t)⟜r
        t_r = H.right[(y, w, x)]                                     # [t, r] : y→w
        lhs = H.left[(y, z, w)][:, t_r]                              # [s, t, r] : z→w
        s_t = H.left[(y, z, x)]                                      # [s, t] : z→x
        rhs = H.right[(z, w, x)][s_t[:, :, None], np.arange(t_r.shape[1])[None, None, :]]
        n_bad = int((lhs != rhs).sum())
        mixed.record_many(lhs.size, [f"s⊸(t⟜r) at {w},{z},{y},{x}"] if n_bad else [], bad_count=n_bad)
    return report


def check_negation_laws(H: HeytingModel, report: Report) -> Report:
    char = report.check("negation characterization")
    ids = report.check("negation of identities")
    nullary = report.check("nullary DeMorgan")
    for y, x in product(H.types, repeat=2):
        mask = orthogonal_mask(H, y, x)                       # [r, s]
        below = H.hom(x, y).le[:, H.neg[(y, x)]].T            # [r, s]: s ⪯ ¬r
        n_bad = int((mask != below).sum())
        char.record_many(mask.size, [f"r ⊥ s disagrees with s ⪯ ¬r in hom({y},{x})"] if n_bad else [],
                         bad_count=n_bad)
        hyx, hxy = H.hom(y, x), H.hom(x, y)
        nullary.record(int(H.neg[(y, x)][hyx.bottom]) == hxy.top, f"¬⊥_{y},{x} ≠ ⊤")
    for x in H.types:
        ids.record(int(H.neg[(x, x)][H.ident[x]]) == H.ident[x], f"¬{x} ≠ {x}")
    return report


def check_double_negation(H: HeytingModel, report: Report) -> Report:
    closure = report.check("double negation closure")
    demorgan = report.check("negation DeMorgan")
    for y, x in product(H.types, repeat=2):
        h = H.hom(y, x)
        dn = H.dn_table(y, x)
        idx = np.arange(len(h))
        increasing = h.le[idx, dn]
        idempotent = dn[dn] == dn
        monotone = ~h.le | h.le[dn[:, None], dn[None, :]]
        bad = int((~increasing).sum() + (~idempotent).sum() + (~monotone).sum())
        closure.record_many(3 * len(h) + h.le.size, [f"¬¬ not a closure on hom({y},{x})"] if bad else [],
                            bad_count=bad)
        neg, meet_xy = H.neg[(y, x)], H.hom(x, y).meet
        lhs = neg[h.join]
        rhs = meet_xy[neg[:, None], neg[None, :]]
        n_bad = int((lhs != rhs).sum())
        demorgan.record_many(lhs.size, [f"¬(s∨r) ≠ ¬s∧¬r in hom({y},{x})"] if n_bad else [], bad_count=n_bad)
    return report


def check_quasisymmetric_negation(H: HeytingModel, report: Report) -> Report:
    check = report.check("quasisymmetric negation")
    for y, x in product(H.types, repeat=2):
        central = np.flatnonzero(quasisymmetric_mask(H, y, x))
        to_y = H.left[(y, x, y)][central, H.ident[y]]
        from_x = H.right[(x, y, x)][H.ident[x], central]
        neg = H.neg[(y, x)][central]
        bad = [f"{_name(H, y, x, r)}" for r, a, b, c in zip(central, to_y, from_x, neg) if not (a == b == c)]
        check.record_many(len(central), bad)
    return report


def check_functional_complements(H: HeytingModel, report: Report) -> Report:
    check = report.check("functional complements")
    iso = report.check("isomorphism law")
    for y, x in product(H.types, repeat=2):
        for f in H.terms(y, x):
            fa = functional_adjoint(H, f)
            nf = H.negate(f)
            if fa is not None:
                below = H.entails(nf, fa.adjoint)
                equal_iff_subtype = (nf == fa.adjoint) == fa.coreflective
                check.record(below and equal_iff_subtype, lambda: f"¬{H.describe(f)} vs {H.describe(fa.adjoint)}")
            invertible = fa is not None and fa.kind == "inverse"
            neg_inverse = (H.compose(nf, f) == H.identity(x)) and (H.compose(f, nf) == H.identity(y))
            iso.record(invertible == neg_inverse, lambda: f"{H.describe(f)} invertibility")
    return report


def functoriality_lemma_check(H: HeytingModel) -> Report:
    """¬¬s∘¬¬r ⪯ ¬¬(s∘r) for composable quasisymmetric s, r"""
    report = Report(f"functoriality {H.name}")
    check = report.check("functoriality lemma")
    central = {(y, x): np.flatnonzero(quasisymmetric_mask(H, y, x)) for y in H.types for x in H.types}
    for z, y, x in product(H.types, repeat=3):
        S, R = central[(z, y)], central[(y, x)]
        if not len(S) or not len(R):
            continue
        dn_zy, dn_yx, dn_zx = H.dn_table(z, y), H.dn_table(y, x), H.dn_table(z, x)
        C = H.comp[(z, y, x)]
        lhs = C[np.ix_(dn_zy[S], dn_yx[R])]
        rhs = dn_zx[C[np.ix_(S, R)]]
        ok = H.hom(z, x).le[lhs, rhs]
        bad = np.argwhere(~ok)
        check.record_many(ok.size, (f"s={_name(H, z, y, S[i])} r={_name(H, y, x, R[j])}" for i, j in bad[:5]),
                          bad_count=len(bad))
    return report


def validate_heyting(H: HeytingModel) -> Report:
    report = Report(f"heyting {H.name}")
    for fn in (check_dialectical_axioms, check_modus_ponens, check_mixed_associativity, check_negation_laws,
               check_double_negation, check_quasisymmetric_negation):
        fn(H, report)
    return report


# ---------------------------------------------------------------- Boolean categories


class BooleanCenterModel(FiniteBiposet):
    """A Boolean category: pole (⊗, ⊕, 0) as composition and join, antipole (∇, △, 1), involutive ¬.

    When built from a Heyting model, term values are the indices of the polar terms in ``parent``.
    """

    def __init__(self, pole: FiniteBiposet, negation: Dict[Tuple[str, str], np.ndarray],
                 parent: Optional[HeytingModel] = None):
        self._adopt(pole)
        self.require("lattice")
        self.parent = parent
        self.neg = negation
        self.nabla_table: Dict[Tuple[str, str, str], np.ndarray] = {}
        for z, y, x in product(self.types, repeat=3):
            # s∇r = ¬(¬r⊗¬s)
            inner = self.comp[(x, y, z)][self.neg[(y, x)][None, :], self.neg[(z, y)][:, None]]
            self.nabla_table[(z, y, x)] = self.neg[(x, z)][inner]

    @property
    def pole(self) -> FiniteBiposet:
        return self

    def tensor(self, s: TermRef, r: TermRef) -> TermRef:
        return self.compose(s, r)

    def nabla(self, s: TermRef, r: TermRef) -> TermRef:
        if s.target != r.source:
            raise TypeMismatchError(f"cannot form ∇ of {s.hom} and {r.hom}")
        return TermRef(s.source, r.target, int(self.nabla_table[(s.source, s.target, r.target)][s.elem, r.elem]))

    def oplus(self, a: TermRef, b: TermRef) -> TermRef:
        return self.join(a, b)

    def triangle(self, a: TermRef, b: TermRef) -> TermRef:
        return self.meet(a, b)

    def negate(self, r: TermRef) -> TermRef:
        return TermRef(r.target, r.source, int(self.neg[r.hom][r.elem]))

    def zero(self, y: str, x: str) -> TermRef:
        return self.bottom(y, x)

    def one(self, y: str, x: str) -> TermRef:
        return self.top(y, x)

    def lift(self, r: TermRef) -> TermRef:
        """The term of the parent Heyting model this polar term came from"""
        if self.parent is None:
            return r
        return TermRef(r.source, r.target, int(self.value(r)))

    def carrier_size(self) -> int:
        return sum(len(h) for h in self.homs.values())


def polar_mask(H: HeytingModel, y: str, x: str) -> np.ndarray:
    dn = H.dn_table(y, x)
    return quasisymmetric_mask(H, y, x) & (dn == np.arange(len(dn)))


def boolean_center(H: HeytingModel) -> BooleanCenterModel:
    """B(H): polar terms with ⊗ = ¬¬(∘), ⊕ = ¬¬(∨), △ = ∧"""
    carriers = {(y, x): np.flatnonzero(polar_mask(H, y, x)).tolist() for y in H.types for x in H.types}
    try:
        pole = H.restrict(carriers, name=f"B({H.name})", compose_fn=H.otimes, join_fn=H.oplus, meet_fn=H.meet)
    except KeyError as e:
        raise ModelConstructionError(f"polar terms of {H.name} are not closed under the classical connectives: "
                                     f"{e}") from e
    negation = {}
    for (y, x), h in pole.homs.items():
        target = pole.hom(x, y)
        negation[(y, x)] = np.array([target.index_of_value(int(H.neg[(y, x)][v])) for v in h.values],
                                    dtype=np.int64)
    logger.info(f"Boolean center of {H.name} has {sum(len(c) for c in carriers.values())} polar terms")
    return BooleanCenterModel(pole, negation, parent=H)


def center_model(H: HeytingModel) -> HeytingModel:
    """Z(H) as a Heyting model in its own right"""
    result = quasisymmetry_center(H)
    if result.center is None:
        raise ModelConstructionError(f"center of {H.name} is not closed under composition")
    return HeytingModel(result.center)


def validate_boolean_category(Bc: BooleanCenterModel) -> Report:
    report = Report(f"boolean category {Bc.name}")
    report.extend(validate_biposet(Bc, flags=("joins", "meets")))
    types = Bc.types

    inv = report.check("negation involution")
    for y, x in product(types, repeat=2):
        n, back = Bc.neg[(y, x)], Bc.neg[(x, y)]
        h, h_op = Bc.hom(y, x), Bc.hom(x, y)
        involutive = back[n] == np.arange(len(h))
        reversing = h.le == h_op.le[n[None, :], n[:, None]]
        bad = int((~involutive).sum() + (~reversing).sum())
        inv.record_many(len(h) + h.le.size, [f"¬ on hom({y},{x})"] if bad else [], bad_count=bad)

    antipole = report.check("antipole distributivity")
    mix = report.check("mix law")
    demorgan = report.check("tensor DeMorgan")
    preserve = report.check("orthogonality preserves composition")
    for z, y, x in product(types, repeat=3):
        N = Bc.nabla_table[(z, y, x)]
        C = Bc.comp[(z, y, x)]
        h_zy, h_yx, h_zx = Bc.hom(z, y), Bc.hom(y, x), Bc.hom(z, x)
        lhs = N[:, h_yx.meet]
        rhs = h_zx.meet[N[:, :, None], N[:, None, :]]
        lhs2 = N[h_zy.meet, :]
        rhs2 = h_zx.meet[N[:, None, :], N[None, :, :]]
        tops = int((N[:, h_yx.top] != h_zx.top).sum() + (N[h_zy.top, :] != h_zx.top).sum())
        bad = int((lhs != rhs).sum() + (lhs2 != rhs2).sum()) + tops
        antipole.record_many(lhs.size + lhs2.size + N.shape[0] + N.shape[1],
                             [f"∇ over △ at {z},{y},{x}"] if bad else [], bad_count=bad)
        ok = h_zx.le[C, N]
        mix.record_many(ok.size, [f"s⊗r ⋠ s∇r at {z},{y},{x}"] if not ok.all() else [],
                        bad_count=int((~ok).sum()))
        # ¬(s⊗r) = ¬r∇¬s
        lhs = Bc.neg[(z, x)][C]
        rhs = Bc.nabla_table[(x, y, z)][Bc.neg[(y, x)][None, :], Bc.neg[(z, y)][:, None]]
        n_bad = int((lhs != rhs).sum())
        demorgan.record_many(lhs.size, [f"¬(s⊗r) at {z},{y},{x}"] if n_bad else [], bad_count=n_bad)

    orth = report.check("orthogonality-entailment")
    masks = {}
    for y, x in product(types, repeat=2):
        mask = orthogonal_mask(Bc, y, x)
        masks[(y, x)] = mask
        below = Bc.hom(x, y).le[:, Bc.neg[(y, x)]].T
        n_bad = int((mask != below).sum())
        orth.record_many(mask.size, [f"⊥ vs ⪯¬ in hom({y},{x})"] if n_bad else [], bad_count=n_bad)

    for z, y, x in product(types, repeat=3):
        # p: z→y, q: y→x; r: y→z ⊥ p, s: x→y ⊥ q; then p⊗q ⊥ s⊗r
        P, Q = len(Bc.hom(z, y)), len(Bc.hom(y, x))
        for p in range(P):
            rs = np.flatnonzero(masks[(z, y)][p])
            for q in range(Q):
                ss = np.flatnonzero(masks[(y, x)][q])
                if not len(rs) or not len(ss):
                    continue
                pq = Bc.comp[(z, y, x)][p, q]
                sr = Bc.comp[(x, y, z)][np.ix_(ss, rs)]
                ok = masks[(z, x)][pq][sr]
                preserve.record_many(ok.size, [f"p={_name(Bc, z, y, p)} q={_name(Bc, y, x, q)}"]
                                     if not ok.all() else [], bad_count=int((~ok).sum()))
    return report


def heyting_center(Bc: BooleanCenterModel) -> HeytingModel:
    """H(B): the pole as a Heyting category, with implications cross-checked against r⊸t = ¬r∇t"""
    H = HeytingModel(Bc, audit=True)
    for y, x, z in product(H.types, repeat=3):
        # r: y→x, t: y→z; ¬r∇t : x→z
        expected = Bc.nabla_table[(x, y, z)][Bc.neg[(y, x)][:, None], np.arange(len(Bc.hom(y, z)))[None, :]]
        if not np.array_equal(expected, H.left[(y, x, z)]):
            raise ModelConstructionError(f"{Bc.name}: r⊸t ≠ ¬r∇t at {y},{x},{z}")
    for z, y, x in product(H.types, repeat=3):
        # s: z→x, r: y→x; s∇¬r : z→y
        expected = Bc.nabla_table[(z, x, y)][np.arange(len(Bc.hom(z, x)))[:, None], Bc.neg[(y, x)][None, :]]
        if not np.array_equal(expected, H.right[(z, y, x)]):
            raise ModelConstructionError(f"{Bc.name}: s⟜r ≠ s∇¬r at {z},{y},{x}")
    return H


def same_structure(a: FiniteBiposet, b: FiniteBiposet) -> bool:
    """Equality of two finite biposets up to relabelling-free comparison of labels, order and composition"""
    if a.types != b.types:
        return False
    for key, h in a.homs.items():
        other = b.homs.get(key)
        if other is None or set(h.labels) != set(other.labels):
            return False
        perm = np.array([other.index_of_label(l) for l in h.labels])
        if not np.array_equal(h.le, other.le[np.ix_(perm, perm)]):
            return False
    for (z, y, x), table in a.comp.items():
        pz = np.array([b.hom(z, y).index_of_label(l) for l in a.hom(z, y).labels])
        py = np.array([b.hom(y, x).index_of_label(l) for l in a.hom(y, x).labels])
        px = np.array([b.hom(z, x).index_of_label(l) for l in a.hom(z, x).labels])
        if not np.array_equal(px[table], b.comp[(z, y, x)][np.ix_(pz, py)]):
            return False
    return all(a.label(a.identity(x)) == b.label(b.identity(x)) for x in a.types)


def center_reflection_check(H: HeytingModel) -> Report:
    """B(H) is a Boolean category and H(B(H)) round-trips to B(H)"""
    Bc = boolean_center(H)
    report = validate_boolean_category(Bc)
    trip = report.check("heyting center round trip")
    back = boolean_center(heyting_center(Bc))
    trip.record(same_structure(Bc, back), "B(H(B)) differs from B")
    return report
