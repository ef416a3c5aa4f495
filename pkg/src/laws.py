"""
Laws Module for DialecticKernel
Registry of named law checks and a parallel runner with deterministic, name-ordered output
"""

import logging
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Dict, List, Optional, Sequence

from src.biposet import FiniteBiposet, orthogonality_functor_check, validate_biposet
from src.calculus import FormulaGenerator, negate_formula, sequent_product, sequent_sum, vector_negation
from src.comodal import (
    close_topotype, comodal_laws, comonoids_at, domain_identities_check, flow_decomposition_identities,
    full_topotype, representation_check,
)
from src.config import get_settings
from src.errors import CapabilityError, KernelError, UnknownDescriptorError
from src.flowfix import DialecticalSystem, FlowSpace, behavior_functoriality, flow_decompose, reproduction_laws
from src.heyting import (
    HeytingModel, center_reflection_check, check_dialectical_axioms, check_double_negation,
    check_functional_complements, check_mixed_associativity, check_modus_ponens, check_negation_laws,
    check_quasisymmetric_negation, functoriality_lemma_check,
)
from src.models import build_model
from src.performance_monitor import PerformanceMonitor
from src.reports import Report
from src.semantics import default_structures, harness_language, negative_control, polar_coherence, soundness_harness

logger = logging.getLogger(__name__)


@dataclass
class LawContext:
    """Inputs shared by every law of one run"""
    descriptor: str
    seed: int
    depth: int                # derivation depth bound of the soundness corpus
    _model: Optional[FiniteBiposet] = field(default=None, repr=False)

    @property
    def model(self) -> FiniteBiposet:
        if self._model is None:
            self._model = build_model(self.descriptor)
        return self._model

    def heyting(self) -> HeytingModel:
        if not isinstance(self.model, HeytingModel):
            raise CapabilityError(f"{self.model.name} is not a Heyting model")
        return self.model

    def rng(self, law: str) -> random.Random:
        # one stream per law keeps results independent of --jobs
        return random.Random(f"{self.seed}:{law}")


@dataclass(frozen=True)
class Law:
    name: str
    description: str
    run: Callable[[LawContext], Report]
    model_free: bool = False


@dataclass
class LawOutcome:
    """One line of the laws report"""
    name: str
    report: Report
    elapsed_ms: float = 0.0
    skipped: Optional[str] = None

    @property
    def instances(self) -> int:
        return sum(c.instances for c in self.report.checks)

    @property
    def failures(self) -> int:
        return sum(c.failures for c in self.report.checks)

    @property
    def status(self) -> str:
        if self.skipped is not None:
            return "SKIP"
        return "PASS" if self.report.passed else "FAIL"

    def line(self) -> str:
        if self.skipped is not None:
            return f"SKIP {self.name} - {self.skipped}"
        text = f"{self.status} {self.name} ({self.instances} instances"
        if self.failures:
            text += f", {self.failures} violations"
        return text + ")"

    def details(self) -> List[str]:
        out = []
        for check in self.report.failed_checks():
            out.append(f"  {check.line()}")
            out.extend(f"    {w}" for w in check.witnesses)
        return out


# ---------------------------------------------------------------- law bodies


def _heyting_bundle(*checks):
    def run(ctx: LawContext) -> Report:
        H = ctx.heyting()
        report = Report(H.name)
        for fn in checks:
            fn(H, report)
        return report
    return run


def _biposet_axioms(ctx: LawContext) -> Report:
    M = ctx.model
    flags = set(M.meta.get("claims", ()))
    return validate_biposet(M, flags)


def _domains(ctx: LawContext) -> Report:
    if ctx.model.kind not in ("rel", "bool2"):
        raise CapabilityError("domain identities are stated for relational models")
    return domain_identities_check(ctx.model)


def random_topotype(M: FiniteBiposet, x: str, rng: random.Random):
    """Closure of a random set of comonoids at x"""
    members = list(comonoids_at(M, x).members)
    seeds = [u for u in members if rng.random() < 0.5]
    return close_topotype(M, x, seeds)


def _representation(ctx: LawContext) -> Report:
    M = ctx.heyting()
    rng = ctx.rng("representation")
    report = Report(f"representation {M.name}")
    types = list(M.types)
    for k in range(20):
        y, x = rng.choice(types), rng.choice(types)
        V, U = random_topotype(M, y, rng), random_topotype(M, x, rng)
        part = representation_check(M, V, U, products=(k == 0))
        for check in part.checks:
            merged = report.check(check.law)
            merged.record_many(check.instances, check.witnesses, bad_count=check.failures)
    return report


def _flow_identities(ctx: LawContext) -> Report:
    return flow_decomposition_identities(ctx.heyting())


def _flow_decomposition(ctx: LawContext) -> Report:
    M = ctx.heyting()
    F = FlowSpace(M)
    rng = ctx.rng("flow-decomposition")
    limit = get_settings().max_homset_size
    report = Report(f"flow decomposition {M.name}")
    for y, x in product(M.types, repeat=2):
        V = full_topotype(M, y)
        pairs = list(product(M.terms(y, x), repeat=2))
        if len(pairs) > limit * 4:
            pairs = rng.sample(pairs, limit * 4)
        for s, r in pairs:
            part = flow_decompose(F, DialecticalSystem(s, r), V)
            for check in part.checks:
                merged = report.check(check.law)
                merged.record_many(check.instances, check.witnesses, bad_count=check.failures)
    return report


def _behavior(ctx: LawContext) -> Report:
    return behavior_functoriality(FlowSpace(ctx.heyting()))


def _reproduction(ctx: LawContext) -> Report:
    return reproduction_laws(FlowSpace(ctx.heyting()))


def _soundness(ctx: LawContext) -> Report:
    settings = get_settings()
    L = harness_language()
    derivations = FormulaGenerator(L, ctx.seed).derivations(settings.harness_derivations, ctx.depth)
    return soundness_harness(L, derivations, default_structures(L))


def _negative_control(ctx: LawContext) -> Report:
    L = harness_language()
    control = negative_control(L, default_structures(L))
    report = Report("negative control")
    refuted = report.check("weakening is refuted")
    sound = control["soundness"]
    refuted.record(sound.failures > 0, "α ⊢ α⊗α held in every structure")
    return report


def _syntax_involution(ctx: LawContext) -> Report:
    gen = FormulaGenerator(harness_language(), ctx.seed)
    report = Report("syntax")
    check = report.check("double tensor negation is the identity")
    for _ in range(10_000):
        phi = gen.formula(depth=5)
        check.record(negate_formula(negate_formula(phi)) == phi, lambda: str(phi))
    return report


def _sequent_demorgan(ctx: LawContext) -> Report:
    gen = FormulaGenerator(harness_language(), ctx.seed)
    report = Report("sequents")
    check = report.check("negated product is sum of vector negation")
    for _ in range(1_000):
        alpha = gen.sequent(gen.rng.randint(0, 4), depth=2)
        check.record(negate_formula(sequent_product(alpha)) == sequent_sum(vector_negation(alpha)),
                     lambda: str(sequent_product(alpha)))
    return report


def _polar_coherence(ctx: LawContext) -> Report:
    L = harness_language()
    gen = FormulaGenerator(L, ctx.seed)
    sequents = [gen.sequent(gen.rng.randint(0, 3), depth=2) for _ in range(200)]
    report = Report("polar coherence")
    check = report.check("antipolar is negated polar of vector negation")
    for S in default_structures(L):
        for alpha in sequents:
            check.record(polar_coherence(S, alpha), lambda: f"{sequent_product(alpha)} in {S.name}")
    return report


LAWS: Dict[str, Law] = {law.name: law for law in (
    Law("biposet-axioms", "order, associativity, unitality, bilateral monotonicity, claimed lattice laws",
        _biposet_axioms),
    Law("orthogonality-functor", "orthogonality ideals, laxity and identity orthoterms",
        lambda ctx: orthogonality_functor_check(ctx.model)),
    Law("dialectical-axioms", "t∘r ⪯ s ⟺ t ⪯ s⟜r and r∘s ⪯ t ⟺ s ⪯ r⊸t",
        _heyting_bundle(check_dialectical_axioms)),
    Law("modus-ponens", "(s⟜r)∘r ⪯ s and r∘(r⊸t) ⪯ t", _heyting_bundle(check_modus_ponens)),
    Law("mixed-associativity", "currying and s⊸(t⟜r) = (s⊸t)⟜r", _heyting_bundle(check_mixed_associativity)),
    Law("tensor-negation", "r ⊥ s ⟺ s ⪯ ¬r, ¬id = id, ¬⊥ = ⊤, central negation",
        _heyting_bundle(check_negation_laws, check_quasisymmetric_negation)),
    Law("double-negation", "¬¬ is a closure operator; ¬(s∨r) = ¬s∧¬r", _heyting_bundle(check_double_negation)),
    Law("functional-complements", "¬f ⪯ f^op for functional f, isomorphisms",
        _heyting_bundle(check_functional_complements)),
    Law("functoriality-lemma", "¬¬s∘¬¬r ⪯ ¬¬(s∘r) on quasisymmetric terms",
        lambda ctx: functoriality_lemma_check(ctx.heyting())),
    Law("center-reflection", "the Boolean center is a Boolean category and round-trips",
        lambda ctx: center_reflection_check(ctx.heyting())),
    Law("comodal", "comonoid standardization, interior coreflection, Hoare fibers",
        lambda ctx: comodal_laws(ctx.heyting())),
    Law("domains", "domain and totality identities", _domains),
    Law("representation", "decomposition and join are inverse on random topotype pairs", _representation),
    Law("flow-identities", "tupling identities for direct and inverse flow", _flow_identities),
    Law("flow-decomposition", "reproduction decomposes over the full source topotype", _flow_decomposition),
    Law("behavior-functoriality", "direct and inverse flows form adjoint functors", _behavior),
    Law("reproduction", "decreasing flow, identity systems, extremal fixpoints", _reproduction),
    Law("soundness", "seeded random derivations hold in every default structure", _soundness, model_free=True),
    Law("negative-control", "a weakening axiom is refuted by some structure", _negative_control, model_free=True),
    Law("syntax-involution", "¬¬φ = φ on generated formulas", _syntax_involution, model_free=True),
    Law("sequent-demorgan", "¬(⊗α) = ∇(vneg α) on generated sequents", _sequent_demorgan, model_free=True),
    Law("polar-coherence", "ℑ∇(α) = ¬ℑ⊗(vneg α) in every default structure", _polar_coherence, model_free=True),
)}


def law_names() -> List[str]:
    return sorted(LAWS)


def select_laws(names: Optional[Sequence[str]] = None) -> List[Law]:
    if not names:
        return [LAWS[n] for n in law_names()]
    selected = []
    for name in names:
        key = name.strip().replace("_", "-")
        if key not in LAWS:
            raise UnknownDescriptorError(f"unknown law {name!r}; known laws: {', '.join(law_names())}")
        selected.append(LAWS[key])
    return sorted(selected, key=lambda law: law.name)


def _run_one(law: Law, ctx: LawContext, monitor: PerformanceMonitor) -> LawOutcome:
    with monitor.measure(law.name) as record:
        try:
            report = law.run(ctx)
        except CapabilityError as e:
            logger.info(f"Law {law.name} skipped: {e}")
            return LawOutcome(law.name, Report(law.name), skipped=str(e))
        record['instances'] = sum(c.instances for c in report.checks)
    return LawOutcome(law.name, report, monitor.elapsed_ms(law.name) or 0.0)


def run_laws(descriptor: str, names: Optional[Sequence[str]] = None, seed: Optional[int] = None,
             depth: Optional[int] = None, jobs: Optional[int] = None,
             monitor: Optional[PerformanceMonitor] = None) -> List[LawOutcome]:
    """Run the selected laws against one model; results are ordered by law name"""
    settings = get_settings()
    ctx = LawContext(descriptor, settings.default_seed if seed is None else seed,
                     settings.harness_max_depth if depth is None else depth)
    try:
        ctx.model
    except KernelError as e:
        logger.error(f"Cannot build model {descriptor}: {e}")
        raise
    laws = select_laws(names)
    monitor = monitor or PerformanceMonitor()
    jobs = max(1, jobs or settings.jobs)
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        outcomes = list(pool.map(lambda law: _run_one(law, ctx, monitor), laws))
    for outcome in outcomes:
        logger.info(outcome.line())
    for tip in monitor.get_optimization_recommendations():
        logger.warning(tip)
    return outcomes
