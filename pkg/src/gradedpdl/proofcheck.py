"""Hilbert-style derivation checking.

A derivation is a numbered sequence of steps, each one an axiom-schema
instance, a premise, or a detachment from two earlier steps. Checking is
purely syntactic: a detachment at step k citing i and j demands that
step j be exactly the implication from step i's formula to the claimed
formula, as trees.

Text format, one step per line::

    n: 3
    premise: p -> q
    1 premise p -> q
    2 axiom A1 p -> (q -> p)
    3 axiom D7/corrected <formula>
    4 mp 1 2 <formula>
    5 mon 4 <formula>        # only with the monotonicity rule enabled

Blank lines and whole-line ``#`` comments are ignored (inline comments
would collide with constant literals). Step numbers must run 1, 2,
3, ... in order.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional, Union as _U

from .chain import ChainContext
from .schemas import match_axiom_instance, schemata_named, all_schemata
from .syntax import Box, Diamond, Formula, Implies, format_formula, parse_formula


class DerivationFormatError(ValueError):
    """The derivation text does not follow the step format."""


@dataclass(frozen=True)
class AxiomStep:
    schema_id: str
    variant: Optional[str]
    formula: Formula


@dataclass(frozen=True)
class PremiseStep:
    formula: Formula


@dataclass(frozen=True)
class MPStep:
    antecedent: int  # 1-based index of the minor premise
    implication: int  # 1-based index of the implication
    formula: Formula


@dataclass(frozen=True)
class MonStep:
    source: int  # 1-based index of the implication being lifted
    formula: Formula


Step = _U[AxiomStep, PremiseStep, MPStep, MonStep]


@dataclass
class Derivation:
    context: ChainContext
    premises: list[Formula]
    steps: list[Step]


@dataclass(frozen=True)
class Verdict:
    accepted: bool
    failed_step: Optional[int] = None
    reason: Optional[str] = None  # machine-readable code
    message: Optional[str] = None

    def __bool__(self) -> bool:
        return self.accepted


def _reject(step: int, reason: str, message: str) -> Verdict:
    return Verdict(False, step, reason, message)


def check_derivation(
    derivation: Derivation,
    system: str = "DL",
    any_schema: bool = False,
    allow_mon: bool = False,
) -> Verdict:
    """Validate every step; report the first failure with its index.

    ``system`` is "PL" (propositional schemata only) or "DL" (the full
    catalog). With ``any_schema`` an axiom step is accepted when any
    schema of the system matches, regardless of the name it cites. The
    monotonicity steps are accepted only when ``allow_mon`` is set, since
    the displayed system has no such rule.
    """
    if system not in ("PL", "DL"):
        raise ValueError(f"unknown system {system!r}")
    ctx = derivation.context
    derived: list[Formula] = []
    for k, step in enumerate(derivation.steps, start=1):
        if isinstance(step, AxiomStep):
            candidates = schemata_named(step.schema_id, step.variant)
            candidates = [s for s in candidates if system in s.systems]
            if not candidates and not any_schema:
                label = step.schema_id if step.variant is None else f"{step.schema_id}/{step.variant}"
                return _reject(
                    k, "unknown-schema",
                    f"step {k}: no schema named {label!r} in system {system}",
                )
            matched = any(
                match_axiom_instance(s, step.formula, ctx)[0] for s in candidates
            )
            if not matched and any_schema:
                matched = any(
                    match_axiom_instance(s, step.formula, ctx)[0]
                    for s in all_schemata(system)
                )
            if not matched:
                return _reject(
                    k, "axiom-mismatch",
                    f"step {k}: {format_formula(step.formula)!r} is not an instance "
                    f"of schema {step.schema_id}",
                )
        elif isinstance(step, PremiseStep):
            if step.formula not in derivation.premises:
                return _reject(
                    k, "not-a-premise",
                    f"step {k}: {format_formula(step.formula)!r} is not among the premises",
                )
        elif isinstance(step, MPStep):
            i, j = step.antecedent, step.implication
            if not (1 <= i < k and 1 <= j < k):
                return _reject(
                    k, "bad-reference",
                    f"step {k}: detachment references {i}, {j}; both must be earlier steps",
                )
            want = Implies(derived[i - 1], step.formula)
            if derived[j - 1] != want:
                return _reject(
                    k, "mp-mismatch",
                    f"step {k}: step {j} is not an implication with antecedent "
                    f"{format_formula(derived[i - 1])!r} and consequent "
                    f"{format_formula(step.formula)!r}",
                )
        elif isinstance(step, MonStep):
            if not allow_mon:
                return _reject(
                    k, "mon-not-enabled",
                    f"step {k}: the monotonicity rule is not part of the checked system",
                )
            i = step.source
            if not 1 <= i < k:
                return _reject(
                    k, "bad-reference",
                    f"step {k}: monotonicity references {i}; must be an earlier step",
                )
            if not _mon_lift_ok(derived[i - 1], step.formula):
                return _reject(
                    k, "mon-mismatch",
                    f"step {k}: {format_formula(step.formula)!r} does not lift "
                    f"{format_formula(derived[i - 1])!r} under one modality",
                )
        else:  # pragma: no cover - parser produces only the above
            return _reject(k, "unknown-step", f"step {k}: unrecognized step kind")
        derived.append(step.formula)
    return Verdict(True)


def _mon_lift_ok(source: Formula, claimed: Formula) -> bool:
    """claimed == [pi]a -> [pi]b or <pi>a -> <pi>b for source == a -> b."""
    if not isinstance(source, Implies) or not isinstance(claimed, Implies):
        return False
    lhs, rhs = claimed.left, claimed.right
    for node in (Box, Diamond):
        if isinstance(lhs, node) and isinstance(rhs, node):
            if (
                lhs.program == rhs.program
                and lhs.body == source.left
                and rhs.body == source.right
            ):
                return True
    return False


# -- text format -----------------------------------------------------------------

_STEP_RE = re.compile(
    r"^(?P<num>\d+)\s+(?P<kind>axiom|premise|mp|mon)\s+(?P<rest>.*)$"
)
_AXIOM_HEAD_RE = re.compile(r"^(?P<id>[A-Za-z]\w*)(?:/(?P<variant>[\w-]+))?\s+(?P<formula>.*)$")
_MP_HEAD_RE = re.compile(r"^(?P<i>\d+)\s+(?P<j>\d+)\s+(?P<formula>.*)$")
_MON_HEAD_RE = re.compile(r"^(?P<i>\d+)\s+(?P<formula>.*)$")


def parse_derivation(text: str) -> Derivation:
    ctx: Optional[ChainContext] = None
    premises: list[Formula] = []
    steps: list[Step] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        # whole-line comments only: constants also use '#'
        if not line or line.startswith("#"):
            continue
        if ctx is None:
            m = re.match(r"^n\s*:\s*(\d+)$", line)
            if not m:
                raise DerivationFormatError(
                    f"line {lineno}: expected the chain header 'n: <int>' first"
                )
            ctx = ChainContext(int(m.group(1)))
            continue
        if line.startswith("premise:"):
            if steps:
                raise DerivationFormatError(
                    f"line {lineno}: premises must precede the numbered steps"
                )
            premises.append(parse_formula(line[len("premise:"):], ctx))
            continue
        m = _STEP_RE.match(line)
        if not m:
            raise DerivationFormatError(f"line {lineno}: unrecognized step {line!r}")
        num = int(m.group("num"))
        if num != len(steps) + 1:
            raise DerivationFormatError(
                f"line {lineno}: step numbered {num}, expected {len(steps) + 1}"
            )
        kind, rest = m.group("kind"), m.group("rest").strip()
        if kind == "axiom":
            head = _AXIOM_HEAD_RE.match(rest)
            if not head:
                raise DerivationFormatError(
                    f"line {lineno}: axiom steps read '<k> axiom <id>[/<variant>] <formula>'"
                )
            steps.append(
                AxiomStep(
                    head.group("id"),
                    head.group("variant"),
                    parse_formula(head.group("formula"), ctx),
                )
            )
        elif kind == "premise":
            steps.append(PremiseStep(parse_formula(rest, ctx)))
        elif kind == "mp":
            head = _MP_HEAD_RE.match(rest)
            if not head:
                raise DerivationFormatError(
                    f"line {lineno}: detachment steps read '<k> mp <i> <j> <formula>'"
                )
            steps.append(
                MPStep(
                    int(head.group("i")),
                    int(head.group("j")),
                    parse_formula(head.group("formula"), ctx),
                )
            )
        else:
            head = _MON_HEAD_RE.match(rest)
            if not head:
                raise DerivationFormatError(
                    f"line {lineno}: monotonicity steps read '<k> mon <i> <formula>'"
                )
            steps.append(MonStep(int(head.group("i")), parse_formula(head.group("formula"), ctx)))
    if ctx is None:
        raise DerivationFormatError("empty derivation: missing the 'n: <int>' header")
    return Derivation(ctx, premises, steps)


def load_derivation(path) -> Derivation:
    with open(path, encoding="utf-8") as handle:
        return parse_derivation(handle.read())
