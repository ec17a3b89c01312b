"""Empirical soundness audit: schema instantiation over sampled models.

The auditor instantiates each axiom schema with random metavariable
bindings, evaluates the instance at every state of freshly sampled
models, and records the first state whose value falls short of top.
Everything is driven by one seed: per-schema streams are derived from it
with a stable hash, so a batch run can be split or reordered and still
produce the identical report.

Also here: the valuation-enumeration decision procedure for
modality-free consequence, and the difference search used to certify
that box and diamond are not dual.
"""

from __future__ import annotations

import itertools
import random
import zlib
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping, Optional, Sequence

from .chain import ChainContext, ChainValue
from .modelio import model_to_dict
from .relations import ReachRelation, StateSpace
from .schemas import (
    AxiomSchema,
    Binding,
    all_schemata,
    instantiate_schema,
)
from .semantics import Evaluator, Model, eval_formula, valid_in_model
from .syntax import (
    And,
    Atomic,
    Box,
    Constant,
    Diamond,
    Formula,
    Implies,
    Inter,
    Or,
    Program,
    PropVar,
    Seq,
    Star,
    Test,
    Union as PUnion,
    format_formula,
    format_program,
)

PROGRAM_NAMES = "abcdefgh"
PROP_NAMES = "pqrstuvw"

STATE_CAP = 4
STATE_CAP_FORCED = 6


class ModalFormulaRejected(ValueError):
    """A modality-free operation was given a modal formula."""


class BudgetExceeded(RuntimeError):
    """An enumeration would exceed its configured limit."""


@dataclass(frozen=True)
class SamplerConfig:
    """Shape of the random models and the search budget."""

    n: int
    max_states: int = 3
    density: float = 0.4
    num_programs: int = 2
    num_propvars: int = 2
    samples: int = 1000
    seed: int = 0
    allow_large: bool = False

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError(f"chain order must be >= 2, got {self.n}")
        cap = STATE_CAP_FORCED if self.allow_large else STATE_CAP
        if not 1 <= self.max_states <= cap:
            raise ValueError(
                f"max_states must be in 1..{cap} (pass allow_large for up to "
                f"{STATE_CAP_FORCED}), got {self.max_states}"
            )
        if not 0.0 <= self.density <= 1.0:
            raise ValueError(f"density must be in [0, 1], got {self.density}")
        if self.num_programs < 1 or self.num_propvars < 1:
            raise ValueError("need at least one atomic program and one propvar")
        if self.samples < 1:
            raise ValueError("sample budget must be positive")

    @property
    def context(self) -> ChainContext:
        return ChainContext(self.n)


def derive_seed(seed: int, *parts: object) -> int:
    """Stable per-stream seed; independent of interpreter hash salts."""
    text = ":".join([str(seed)] + [str(p) for p in parts])
    return zlib.crc32(text.encode("utf-8"))


def sample_model(
    cfg: SamplerConfig,
    rng: Optional[random.Random] = None,
    prop_names: Optional[Sequence[str]] = None,
    prog_names: Optional[Sequence[str]] = None,
) -> Model:
    """One pseudorandom model, reproducible from the rng state."""
    rng = rng or random.Random(cfg.seed)
    ctx = cfg.context
    size = rng.randint(1, cfg.max_states)
    space = StateSpace(size)
    props = list(prop_names or PROP_NAMES[: cfg.num_propvars])
    progs = list(prog_names or PROGRAM_NAMES[: cfg.num_programs])
    atomics = {}
    for name in progs:
        entries = {}
        for s in space.states():
            for mask in space.subset_masks():
                if rng.random() < cfg.density:
                    entries[(s, mask)] = rng.randint(1, ctx.top)
        atomics[name] = ReachRelation(space, ctx, entries)
    valuation = {
        name: {s: rng.randint(0, ctx.top) for s in space.states()} for name in props
    }
    return Model(ctx, space, atomics, valuation)


# -- random instantiation ----------------------------------------------------------


def random_formula(
    rng: random.Random,
    ctx: ChainContext,
    depth: int,
    props: Sequence[str] = PROP_NAMES[:2],
    progs: Sequence[str] = PROGRAM_NAMES[:2],
) -> Formula:
    if depth <= 0 or rng.random() < 0.35:
        if rng.random() < 0.6:
            return PropVar(rng.choice(list(props)))
        return Constant(ChainValue(rng.randint(0, ctx.top), ctx))
    kind = rng.randrange(5)
    if kind == 0:
        return And(
            random_formula(rng, ctx, depth - 1, props, progs),
            random_formula(rng, ctx, depth - 1, props, progs),
        )
    if kind == 1:
        return Or(
            random_formula(rng, ctx, depth - 1, props, progs),
            random_formula(rng, ctx, depth - 1, props, progs),
        )
    if kind == 2:
        return Implies(
            random_formula(rng, ctx, depth - 1, props, progs),
            random_formula(rng, ctx, depth - 1, props, progs),
        )
    node = Box if kind == 3 else Diamond
    return node(
        random_program(rng, ctx, depth - 1, props, progs),
        random_formula(rng, ctx, depth - 1, props, progs),
    )


def random_program(
    rng: random.Random,
    ctx: ChainContext,
    depth: int,
    props: Sequence[str] = PROP_NAMES[:2],
    progs: Sequence[str] = PROGRAM_NAMES[:2],
) -> Program:
    if depth <= 0 or rng.random() < 0.4:
        return Atomic(rng.choice(list(progs)))
    kind = rng.randrange(5)
    if kind == 0:
        return PUnion(
            random_program(rng, ctx, depth - 1, props, progs),
            random_program(rng, ctx, depth - 1, props, progs),
        )
    if kind == 1:
        return Inter(
            random_program(rng, ctx, depth - 1, props, progs),
            random_program(rng, ctx, depth - 1, props, progs),
        )
    if kind == 2:
        return Seq(
            random_program(rng, ctx, depth - 1, props, progs),
            random_program(rng, ctx, depth - 1, props, progs),
        )
    if kind == 3:
        return Star(random_program(rng, ctx, depth - 1, props, progs))
    return Test(random_formula(rng, ctx, depth - 1, props, progs))


def _adversarial_formulas(ctx: ChainContext, props: Sequence[str]) -> list[Formula]:
    """Counterexamples concentrate at mid-chain values, so the pool leads
    with bare propvars and near-half constants."""
    p = PropVar(props[0])
    mid = ctx.top // 2
    pool: list[Formula] = [p, Constant(ChainValue(mid, ctx)), Implies(p, Constant(ctx.zero))]
    if len(props) > 1:
        pool.append(PropVar(props[1]))
    if ctx.top - (ctx.top + 1) // 2 != mid:
        pool.append(Constant(ChainValue((ctx.top + 1) // 2, ctx)))
    return pool


def _adversarial_programs(ctx: ChainContext, props: Sequence[str], progs: Sequence[str]) -> list[Program]:
    a = Atomic(progs[0])
    pool: list[Program] = [a, Star(a), Test(PropVar(props[0]))]
    if len(progs) > 1:
        pool.append(Inter(a, Atomic(progs[1])))
    return pool


def sample_bindings(
    schema: AxiomSchema,
    rng: random.Random,
    cfg: SamplerConfig,
    props: Optional[Sequence[str]] = None,
    progs: Optional[Sequence[str]] = None,
) -> dict[str, Binding]:
    ctx = cfg.context
    props = list(props or PROP_NAMES[: cfg.num_propvars])
    progs = list(progs or PROGRAM_NAMES[: cfg.num_programs])
    formula_pool = _adversarial_formulas(ctx, props)
    program_pool = _adversarial_programs(ctx, props, progs)
    mid = ctx.top // 2
    bindings: dict[str, Binding] = {}
    for name, kind in sorted(schema.meta_names().items()):
        if kind == "formula":
            if rng.random() < 0.5:
                bindings[name] = rng.choice(formula_pool)
            else:
                bindings[name] = random_formula(rng, ctx, 3, props, progs)
        elif kind == "program":
            if rng.random() < 0.5:
                bindings[name] = rng.choice(program_pool)
            else:
                bindings[name] = random_program(rng, ctx, 2, props, progs)
        else:
            num = mid if rng.random() < 0.5 else rng.randint(0, ctx.top)
            bindings[name] = ChainValue(num, ctx)
    return bindings


# -- reports ---------------------------------------------------------------------


def _binding_text(bindings: Mapping[str, Binding]) -> dict[str, str]:
    out = {}
    for name, value in sorted(bindings.items()):
        if isinstance(value, ChainValue):
            out[name] = str(value)
        elif isinstance(value, (Atomic, PUnion, Inter, Seq, Star, Test)):
            out[name] = format_program(value)
        else:
            out[name] = format_formula(value)
    return out


@dataclass(frozen=True)
class Witness:
    """A model, instantiation and state where an instance is below top."""

    model: Model
    bindings: Mapping[str, Binding]
    formula: Formula
    state: int
    value: ChainValue

    def reevaluate(self) -> ChainValue:
        """Recompute the witness value with a fresh cache."""
        return eval_formula(self.model, self.formula, self.state)

    def to_json(self) -> dict[str, Any]:
        return {
            "model": model_to_dict(self.model),
            "bindings": _binding_text(self.bindings),
            "formula": format_formula(self.formula),
            "state": self.model.state_names[self.state],
            "value": str(self.value),
        }


@dataclass(frozen=True)
class SchemaAudit:
    schema_id: str
    variant: Optional[str]
    n: int
    models_tested: int
    instantiations_tested: int
    verdict: str  # "no-counterexample-found" | "counterexample"
    seed: int
    witness: Optional[Witness] = None

    @property
    def label(self) -> str:
        return self.schema_id if self.variant is None else f"{self.schema_id}/{self.variant}"

    def to_json(self) -> dict[str, Any]:
        doc: dict[str, Any] = {
            "schema": self.schema_id,
            "variant": self.variant,
            "n": self.n,
            "models_tested": self.models_tested,
            "instantiations_tested": self.instantiations_tested,
            "verdict": self.verdict,
            "seed": self.seed,
        }
        if self.witness is not None:
            doc["witness"] = self.witness.to_json()
        return doc


@dataclass(frozen=True)
class RuleAudit:
    """Validity-preservation probe for a candidate inference rule."""

    rule_id: str
    n: int
    models_tested: int
    premises_valid: int
    verdict: str
    seed: int
    witness: Optional[Witness] = None

    def to_json(self) -> dict[str, Any]:
        doc: dict[str, Any] = {
            "rule": self.rule_id,
            "n": self.n,
            "models_tested": self.models_tested,
            "premises_valid": self.premises_valid,
            "verdict": self.verdict,
            "seed": self.seed,
        }
        if self.witness is not None:
            doc["witness"] = self.witness.to_json()
        return doc


@dataclass
class AuditReport:
    n: int
    seed: int
    config: dict[str, Any]
    schemas: list[SchemaAudit] = field(default_factory=list)
    rules: list[RuleAudit] = field(default_factory=list)

    @property
    def counterexamples(self) -> list[SchemaAudit]:
        return [e for e in self.schemas if e.verdict == "counterexample"]

    @property
    def has_counterexample(self) -> bool:
        return bool(self.counterexamples) or any(
            r.verdict == "counterexample" for r in self.rules
        )

    def to_json(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "seed": self.seed,
            "config": self.config,
            "schemas": [e.to_json() for e in self.schemas],
            "rules": [r.to_json() for r in self.rules],
        }


# -- the searches --------------------------------------------------------------------


def find_counterexample(
    schema: AxiomSchema, cfg: SamplerConfig, budget: Optional[int] = None
) -> SchemaAudit:
    """Random (model, instantiation) trials until a state falls below top."""
    budget = budget if budget is not None else cfg.samples
    if budget <= 0:
        raise ValueError("budget must be positive")
    seed = derive_seed(cfg.seed, "schema", schema.label, cfg.n)
    rng = random.Random(seed)
    for trial in range(1, budget + 1):
        model = sample_model(cfg, rng)
        bindings = sample_bindings(schema, rng, cfg)
        instance = instantiate_schema(schema, bindings, cfg.context)
        ok, refutation = valid_in_model(model, instance)
        if not ok:
            witness = Witness(model, bindings, instance, refutation.state, refutation.value)
            return SchemaAudit(
                schema.id, schema.variant, cfg.n, trial, trial,
                "counterexample", seed, witness,
            )
    return SchemaAudit(
        schema.id, schema.variant, cfg.n, budget, budget,
        "no-counterexample-found", seed,
    )


_MON_RULES = ("Mon-box", "Mon-diamond")


def audit_rule(rule_id: str, cfg: SamplerConfig, budget: Optional[int] = None) -> RuleAudit:
    """Search for a model where the premise of a monotonicity rule is
    valid but the conclusion is not."""
    if rule_id not in _MON_RULES:
        raise ValueError(f"unknown rule {rule_id!r}")
    budget = budget if budget is not None else cfg.samples
    seed = derive_seed(cfg.seed, "rule", rule_id, cfg.n)
    rng = random.Random(seed)
    ctx = cfg.context
    node = Box if rule_id == "Mon-box" else Diamond
    premises_valid = 0
    for trial in range(1, budget + 1):
        model = sample_model(cfg, rng)
        props = PROP_NAMES[: cfg.num_propvars]
        progs = PROGRAM_NAMES[: cfg.num_programs]
        phi = random_formula(rng, ctx, 2, props, progs)
        psi = random_formula(rng, ctx, 2, props, progs)
        program = random_program(rng, ctx, 2, props, progs)
        premise = Implies(phi, psi)
        ok, _ = valid_in_model(model, premise)
        if not ok:
            continue
        premises_valid += 1
        conclusion = Implies(node(program, phi), node(program, psi))
        ok, refutation = valid_in_model(model, conclusion)
        if not ok:
            bindings = {"phi": phi, "psi": psi, "pi": program}
            witness = Witness(model, bindings, conclusion, refutation.state, refutation.value)
            return RuleAudit(
                rule_id, cfg.n, trial, premises_valid, "counterexample", seed, witness
            )
    return RuleAudit(
        rule_id, cfg.n, budget, premises_valid, "no-counterexample-found", seed
    )


def audit_all(
    cfg: SamplerConfig,
    schemata: Optional[Iterable[AxiomSchema]] = None,
    include_rules: bool = True,
) -> AuditReport:
    """Run the counterexample search across the whole catalog.

    Entries are ordered by catalog position, and every schema draws from
    its own derived seed, so a fan-out over schemata merges back into the
    same report.
    """
    selected = list(schemata) if schemata is not None else all_schemata("DL")
    report = AuditReport(
        n=cfg.n,
        seed=cfg.seed,
        config={
            "max_states": cfg.max_states,
            "density": cfg.density,
            "num_programs": cfg.num_programs,
            "num_propvars": cfg.num_propvars,
            "samples": cfg.samples,
        },
    )
    for schema in selected:
        report.schemas.append(find_counterexample(schema, cfg))
    if include_rules:
        for rule_id in _MON_RULES:
            report.rules.append(audit_rule(rule_id, cfg))
    return report


# -- modality-free consequence ----------------------------------------------------


def _require_modality_free(formula: Formula) -> None:
    stack = [formula]
    while stack:
        node = stack.pop()
        if isinstance(node, (Box, Diamond)):
            raise ModalFormulaRejected(
                f"modal operator in {format_formula(node)!r}; "
                "consequence checking covers modality-free formulas only"
            )
        if isinstance(node, (And, Or, Implies)):
            stack += [node.left, node.right]


def _prop_num(formula: Formula, valuation: Mapping[str, int], ctx: ChainContext) -> int:
    top = ctx.top
    if isinstance(formula, PropVar):
        return valuation.get(formula.name, 0)
    if isinstance(formula, Constant):
        if formula.value.context != ctx:
            raise ValueError("constant from a different chain")
        return formula.value.numerator
    if isinstance(formula, And):
        return min(_prop_num(formula.left, valuation, ctx), _prop_num(formula.right, valuation, ctx))
    if isinstance(formula, Or):
        return max(_prop_num(formula.left, valuation, ctx), _prop_num(formula.right, valuation, ctx))
    if isinstance(formula, Implies):
        return min(top, top - _prop_num(formula.left, valuation, ctx) + _prop_num(formula.right, valuation, ctx))
    raise TypeError(f"not a modality-free formula: {formula!r}")


def check_consequence_prop(
    theta: Iterable[Formula],
    phi: Formula,
    ctx: ChainContext,
    limit: int = 10_000_000,
) -> tuple[bool, Optional[dict[str, ChainValue]]]:
    """Decide modality-free consequence by enumerating all valuations.

    Returns (True, None) when every valuation sending all premises to top
    also sends the conclusion to top, else (False, falsifying valuation).
    """
    premises = list(theta)
    for f in premises + [phi]:
        _require_modality_free(f)
    names: set[str] = set()
    stack: list[Formula] = premises + [phi]
    while stack:
        node = stack.pop()
        if isinstance(node, PropVar):
            names.add(node.name)
        elif isinstance(node, (And, Or, Implies)):
            stack += [node.left, node.right]
    ordered = sorted(names)
    count = ctx.n ** len(ordered)
    if count > limit:
        raise BudgetExceeded(
            f"{count} valuations over {len(ordered)} variables exceed the limit {limit}"
        )
    top = ctx.top
    for nums in itertools.product(range(ctx.n), repeat=len(ordered)):
        valuation = dict(zip(ordered, nums))
        if all(_prop_num(f, valuation, ctx) == top for f in premises):
            if _prop_num(phi, valuation, ctx) != top:
                witness = {name: ChainValue(num, ctx) for name, num in valuation.items()}
                return False, witness
    return True, None


# -- difference search ---------------------------------------------------------------


@dataclass(frozen=True)
class EquivReport:
    left: Formula
    right: Formula
    difference_found: bool
    models_tested: int
    seed: int
    model: Optional[Model] = None
    state: Optional[int] = None
    left_value: Optional[ChainValue] = None
    right_value: Optional[ChainValue] = None

    def to_json(self) -> dict[str, Any]:
        doc: dict[str, Any] = {
            "left": format_formula(self.left),
            "right": format_formula(self.right),
            "difference_found": self.difference_found,
            "models_tested": self.models_tested,
            "seed": self.seed,
        }
        if self.difference_found:
            doc["witness"] = {
                "model": model_to_dict(self.model),
                "state": self.model.state_names[self.state],
                "left_value": str(self.left_value),
                "right_value": str(self.right_value),
            }
        return doc


def equiv_check(left: Formula, right: Formula, cfg: SamplerConfig) -> EquivReport:
    """Search sampled models for a state where the two formulas differ."""
    from .syntax import collect_names

    props: set[str] = set()
    progs: set[str] = set()
    for f in (left, right):
        p, a = collect_names(f)
        props |= p
        progs |= a
    prop_names = sorted(props | set(PROP_NAMES[: cfg.num_propvars]))
    prog_names = sorted(progs | set(PROGRAM_NAMES[: cfg.num_programs]))
    seed = derive_seed(cfg.seed, "equiv", format_formula(left), format_formula(right), cfg.n)
    rng = random.Random(seed)
    for trial in range(1, cfg.samples + 1):
        model = sample_model(cfg, rng, prop_names, prog_names)
        evaluator = Evaluator(model)
        for s in model.space.states():
            lv = evaluator.value_num(left, s)
            rv = evaluator.value_num(right, s)
            if lv != rv:
                return EquivReport(
                    left, right, True, trial, seed, model, s,
                    ChainValue(lv, model.context), ChainValue(rv, model.context),
                )
    return EquivReport(left, right, False, cfg.samples, seed)
