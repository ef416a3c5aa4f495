"""
Runner Module for DialecticKernel
Command dispatch behind the CLI: parse inputs, run validators, evaluate and render reports
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Literal, Optional, Tuple

import orjson
import pandas as pd
from pydantic import BaseModel, Field, ValidationError, model_validator

from src.biposet import FiniteBiposet, validate_biposet
from src.calculus import Entailment, Orthogonality, check_derivation, first_failure, prove_bounded
from src.comodal import full_topotype
from src.config import get_settings
from src.errors import CapabilityError, KernelError, UnknownRuleError
from src.flowfix import DialecticalSystem, FlowSpace, fixpoints, flow_decompose, horn_eval, naive_bottom_up
from src.heyting import HeytingModel, boolean_center, validate_boolean_category, validate_heyting
from src.laws import run_laws
from src.models import build_model
from src.parsers import (
    load_datalog_file, load_formula_file, load_goal_file, load_language_file, load_model_file, load_proof_file,
    load_structure_file, parse_topotype,
)
from src.reports import Report
from src.semantics import is_valid

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURES = 1
EXIT_INPUT = 2

COMMAND_INPUTS: Dict[str, Tuple[str, ...]] = {
    "validate": ("model",),
    "check-proof": ("language", "proof"),
    "prove": ("language", "goal"),
    "eval": ("language", "structure", "formulas"),
    "center": ("model",),
    "fixpoint": ("model", "s", "r"),
    "datalog": ("program",),
    "laws": ("model",),
}


class Invocation(BaseModel):
    """One CLI call; inputs are positional in the order of COMMAND_INPUTS"""
    command: Literal["validate", "check-proof", "prove", "eval", "center", "fixpoint", "datalog", "laws"]
    inputs: List[str] = Field(default_factory=list)
    depth: Optional[int] = Field(default=None, ge=0)
    seed: Optional[int] = None
    jobs: Optional[int] = Field(default=None, ge=1)
    format: Literal["text", "tsv", "json"] = "text"
    laws: List[str] = Field(default_factory=list)
    options: Dict[str, str] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _required_inputs(self) -> "Invocation":
        expected = COMMAND_INPUTS[self.command]
        if len(self.inputs) != len(expected):
            raise ValueError(f"{self.command} takes {len(expected)} input(s): {' '.join(expected)}")
        return self


@dataclass
class Outcome:
    """Lines for text output, rows for tsv and json"""
    passed: bool
    lines: List[str] = field(default_factory=list)
    rows: List[Dict[str, Any]] = field(default_factory=list)


@dataclass
class RunResult:
    exit_code: int
    output: str


def load_model(arg: str) -> FiniteBiposet:
    """A model file path or a descriptor"""
    if Path(arg).is_file():
        return load_model_file(arg)
    return build_model(arg)


def _report_outcome(report: Report) -> Outcome:
    lines = [report.subject] + [f"  {c.line()}" for c in report.checks]
    for c in report.failed_checks():
        lines.extend(f"    {w}" for w in c.witnesses)
    rows = [{"subject": report.subject, "law": c.law, "status": c.status, "instances": c.instances,
             "violations": c.failures} for c in report.checks]
    return Outcome(report.passed, lines, rows)


# ---------------------------------------------------------------- commands


def _validate(inv: Invocation) -> Outcome:
    M = load_model(inv.inputs[0])
    flags = [f.strip() for item in inv.laws for f in item.split(",") if f.strip()]
    report = validate_biposet(M, flags)
    if "cHc" in flags:
        if not isinstance(M, HeytingModel):
            raise CapabilityError(f"{M.name} has no tensor implications; cHc needs a Heyting model")
        report.extend(validate_heyting(M))
    return _report_outcome(report)


def _check_proof(inv: Invocation) -> Outcome:
    L = load_language_file(inv.inputs[0])
    outcome = Outcome(True)
    for k, d in enumerate(load_proof_file(inv.inputs[1], L)):
        try:
            problem = first_failure(check_derivation(L, d))
        except UnknownRuleError as e:
            problem = str(e)
        if problem is None:
            nodes = "node" if d.size == 1 else "nodes"
            outcome.lines.append(f"OK ({d.size} {nodes})")
        else:
            outcome.passed = False
            outcome.lines.append(f"FAIL {problem}")
        outcome.rows.append({"derivation": k, "status": "OK" if problem is None else "FAIL",
                             "nodes": d.size, "problem": problem or ""})
    return outcome


def _prove(inv: Invocation) -> Outcome:
    L = load_language_file(inv.inputs[0])
    depth = get_settings().default_depth if inv.depth is None else inv.depth
    outcome = Outcome(True)
    for goal in load_goal_file(inv.inputs[1], L):
        found = prove_bounded(L, goal, depth)
        if found is None:
            outcome.passed = False
            outcome.lines.append(f"NOT FOUND {goal} (depth {depth})")
        else:
            outcome.lines.append(str(found))
        outcome.rows.append({"goal": str(goal), "found": found is not None,
                             "derivation": str(found) if found else ""})
    return outcome


def _eval(inv: Invocation) -> Outcome:
    L = load_language_file(inv.inputs[0])
    S = load_structure_file(inv.inputs[1], L)
    outcome = Outcome(True)
    for item in load_formula_file(inv.inputs[2], L):
        if isinstance(item, (Entailment, Orthogonality)):
            ok = is_valid(S, item)
            outcome.passed = outcome.passed and ok
            value = "VALID" if ok else "INVALID"
        else:
            value = S.model.label(S.interpret(item))
        outcome.lines.append(f"{item} = {value}")
        outcome.rows.append({"item": str(item), "value": value})
    return outcome


def _center(inv: Invocation) -> Outcome:
    H = load_model(inv.inputs[0])
    if not isinstance(H, HeytingModel):
        raise CapabilityError(f"{H.name} is not a Heyting model")
    Bc = boolean_center(H)
    outcome = Outcome(True)
    for y in Bc.types:
        for x in Bc.types:
            labels = [Bc.label(t) for t in Bc.terms(y, x)]
            outcome.lines.append(f"hom({y},{x}): {len(labels)} terms: {' '.join(labels)}")
            outcome.rows.append({"source": y, "target": x, "terms": len(labels), "labels": " ".join(labels)})
    checked = _report_outcome(validate_boolean_category(Bc))
    outcome.passed = checked.passed
    outcome.lines.extend(checked.lines)
    return outcome


def _term(M: FiniteBiposet, label: str, hom: Tuple[str, str]):
    return M.term(hom[0], hom[1], label)


def _fixpoint(inv: Invocation) -> Outcome:
    M = load_model(inv.inputs[0])
    if not isinstance(M, HeytingModel):
        raise CapabilityError(f"{M.name} is not a Heyting model")
    F = FlowSpace(M, inv.options.get("separator"))
    hom = tuple(inv.options.get("hom", f"{M.types[0]},{M.types[0]}").split(","))
    if len(hom) != 2:
        raise ValueError(f"--hom expects 'y,x', got {inv.options['hom']!r}")
    system = DialecticalSystem(_term(M, inv.inputs[1], hom), _term(M, inv.inputs[2], hom))
    variant = inv.options.get("variant", "yinyang")
    outcome = Outcome(True)
    for mode in ("least", "greatest"):
        result = fixpoints(F, system, mode, variant)
        outcome.passed = outcome.passed and result.extremal
        outcome.lines.append(f"{mode} fixpoint: {M.label(result.point)} after {result.iterations} iterations "
                             f"({result.fixpoints} fixpoints)")
        outcome.rows.append({"mode": mode, "point": M.label(result.point), "iterations": result.iterations,
                             "fixpoints": result.fixpoints, "extremal": result.extremal})
    topo = inv.options.get("topotype")
    if topo is not None:
        V = full_topotype(M, system.source) if topo == "full" else parse_topotype(topo, M)
        decomposed = _report_outcome(flow_decompose(F, system, V))
        outcome.passed = outcome.passed and decomposed.passed
        outcome.lines.extend(decomposed.lines)
    return outcome


def _datalog(inv: Invocation) -> Outcome:
    program = load_datalog_file(inv.inputs[0])
    result = horn_eval(program, progress=inv.options.get("progress") == "true")
    oracle = naive_bottom_up(program)
    outcome = Outcome(result.lines() == oracle.lines())
    outcome.lines.extend(result.lines())
    outcome.rows.extend({"atom": line} for line in result.lines())
    if not outcome.passed:
        outcome.lines.append("FAIL least fixpoint differs from naive bottom-up evaluation")
    logger.info(f"Horn fixpoint after {result.iterations} iterations over {len(program.atoms)} atoms")
    return outcome


def _laws(inv: Invocation) -> Outcome:
    names = [n for item in inv.laws for n in item.split(",") if n.strip()]
    outcomes = run_laws(inv.inputs[0], names or None, inv.seed, inv.depth, inv.jobs)
    result = Outcome(all(o.status != "FAIL" for o in outcomes))
    for o in outcomes:
        result.lines.append(o.line())
        result.lines.extend(o.details())
        result.rows.append({"law": o.name, "status": o.status, "instances": o.instances,
                            "violations": o.failures, "note": o.skipped or ""})
    return result


COMMANDS: Dict[str, Callable[[Invocation], Outcome]] = {
    "validate": _validate,
    "check-proof": _check_proof,
    "prove": _prove,
    "eval": _eval,
    "center": _center,
    "fixpoint": _fixpoint,
    "datalog": _datalog,
    "laws": _laws,
}


def render(outcome: Outcome, fmt: str) -> str:
    if fmt == "json":
        return orjson.dumps({"passed": outcome.passed, "rows": outcome.rows},
                            option=orjson.OPT_INDENT_2 | orjson.OPT_SORT_KEYS).decode()
    if fmt == "tsv":
        return pd.DataFrame(outcome.rows).to_csv(sep="\t", index=False).rstrip("\n")
    return "\n".join(outcome.lines)


def make_invocation(command: str, inputs: List[str], **kwargs) -> Invocation:
    try:
        return Invocation(command=command, inputs=list(inputs), **kwargs)
    except ValidationError as e:
        first = e.errors()[0]
        raise KernelError(first["msg"].replace("Value error, ", "", 1)) from e


def run(inv: Invocation) -> RunResult:
    """Exit 0 when every check passes, 1 on check failures, 2 on input errors"""
    try:
        outcome = COMMANDS[inv.command](inv)
    except (KernelError, ValueError) as e:
        logger.error(f"{inv.command} failed: {e}")
        return RunResult(EXIT_INPUT, f"error: {e}")
    return RunResult(EXIT_OK if outcome.passed else EXIT_FAILURES, render(outcome, inv.format))
