import json
import random

import pytest

from gradedpdl.audit import (
    BudgetExceeded,
    ModalFormulaRejected,
    SamplerConfig,
    audit_all,
    audit_rule,
    check_consequence_prop,
    derive_seed,
    equiv_check,
    find_counterexample,
    sample_model,
)
from gradedpdl.chain import ChainContext
from gradedpdl.modelio import dumps
from gradedpdl.schemas import all_schemata, schemata_named
from gradedpdl.semantics import eval_formula, valid_in_model
from gradedpdl.relations import ReachRelation, StateSpace
from gradedpdl.semantics import Model
from gradedpdl.syntax import parse_formula

C3 = ChainContext(3)


def schema(label):
    schema_id, _, variant = label.partition("/")
    (entry,) = schemata_named(schema_id, variant or None)
    return entry


# -- sampling -------------------------------------------------------------------


def test_sampler_determinism():
    cfg = SamplerConfig(n=3, max_states=3, seed=5)
    assert sample_model(cfg) == sample_model(cfg)
    a = sample_model(cfg, random.Random(9))
    b = sample_model(cfg, random.Random(9))
    assert a == b and a.atomics == b.atomics and a.valuation == b.valuation


def test_sampler_density_extremes():
    cfg0 = SamplerConfig(n=3, max_states=2, density=0.0, seed=1)
    model = sample_model(cfg0)
    assert all(not rel.entries for rel in model.atomics.values())
    cfg1 = SamplerConfig(n=4, max_states=1, density=1.0, seed=1)
    model = sample_model(cfg1)
    for rel in model.atomics.values():
        assert set(rel.entries) == {(0, 0), (0, 1)}  # both subsets of a singleton


def test_sampler_config_validation():
    with pytest.raises(ValueError):
        SamplerConfig(n=1)
    with pytest.raises(ValueError):
        SamplerConfig(n=3, max_states=5)
    SamplerConfig(n=3, max_states=5, allow_large=True)
    with pytest.raises(ValueError):
        SamplerConfig(n=3, max_states=7, allow_large=True)
    with pytest.raises(ValueError):
        SamplerConfig(n=3, density=1.5)


def test_derive_seed_is_stable():
    assert derive_seed(7, "schema", "D16", 3) == derive_seed(7, "schema", "D16", 3)
    assert derive_seed(7, "schema", "D16", 3) != derive_seed(8, "schema", "D16", 3)


# -- counterexample search -------------------------------------------------------


def test_test_diamond_counterexample_found_at_three():
    cfg = SamplerConfig(n=3, max_states=3, seed=7, samples=10_000)
    entry = find_counterexample(schema("D16"), cfg)
    assert entry.verdict == "counterexample"
    w = entry.witness
    assert w.value < C3.one
    assert w.reevaluate() == w.value


def test_test_diamond_canonical_witness():
    # single state, p at one half: the biconditional sits at one half
    space = StateSpace(1)
    model = Model(C3, space, {}, {"p": {0: 1}})
    instance = parse_formula("<?(p)>p <-> p & p", C3)
    assert eval_formula(model, instance, 0) == C3.value(1)


def test_termination_axiom_counterexample_found_at_three():
    cfg = SamplerConfig(n=3, max_states=3, seed=7, samples=10_000)
    entry = find_counterexample(schema("D17"), cfg)
    assert entry.verdict == "counterexample"
    assert entry.witness.reevaluate() == entry.witness.value


def test_termination_axiom_canonical_witness():
    space = StateSpace(1)
    rel = ReachRelation.of(space, C3, [(0, [0], "1/2")])
    model = Model(C3, space, {"a": rel}, {})
    instance = parse_formula("[a]#0 | <a>#1", C3)
    assert eval_formula(model, instance, 0) == C3.value(1)


def test_box_top_never_refuted():
    for n in (2, 3, 5):
        cfg = SamplerConfig(n=n, max_states=3, seed=3, samples=300)
        entry = find_counterexample(schema("D1"), cfg)
        assert entry.verdict == "no-counterexample-found"
        assert entry.models_tested == 300


def test_inter_box_variants_discriminated_at_two():
    cfg = SamplerConfig(n=2, max_states=3, seed=7, samples=4000)
    printed = find_counterexample(schema("D7/printed"), cfg)
    corrected = find_counterexample(schema("D7/corrected"), cfg)
    assert printed.verdict == "counterexample"
    assert corrected.verdict == "no-counterexample-found"


def test_inter_box_printed_direct_witness():
    # a has no successor rows, b reaches a state violating p: the printed
    # right-hand side drops to bottom while the intersection box is vacuous
    ctx = ChainContext(2)
    space = StateSpace(2)
    rel_b = ReachRelation.of(space, ctx, [(0, [1], "1")])
    model = Model(ctx, space, {"a": ReachRelation(space, ctx, {}), "b": rel_b}, {"p": {}})
    printed = parse_formula("[a^b]p <-> (<a>#1 -> [b]p) & (<b>#1 -> [b]p)", ctx)
    corrected = parse_formula("[a^b]p <-> (<a>#1 -> [b]p) & (<b>#1 -> [a]p)", ctx)
    assert eval_formula(model, printed, 0).is_bottom
    assert eval_formula(model, corrected, 0).is_top


def test_seq_box_gap_direct_witness():
    # an intermediate state with an empty row makes the composed box
    # vacuous while the nested boxes see the failure
    ctx = ChainContext(2)
    space = StateSpace(3)
    rel_a = ReachRelation.of(space, ctx, [(0, [1, 2], "1")])
    rel_b = ReachRelation.of(space, ctx, [(1, [1], "1")])
    model = Model(ctx, space, {"a": rel_a, "b": rel_b}, {"p": {}})
    composed = parse_formula("[a;b]p", ctx)
    nested = parse_formula("[a][b]p", ctx)
    assert eval_formula(model, composed, 0).is_top
    assert eval_formula(model, nested, 0).is_bottom


def test_witnesses_reevaluate_exactly():
    cfg = SamplerConfig(n=3, max_states=3, seed=21, samples=800)
    for s in all_schemata("DL"):
        entry = find_counterexample(s, cfg)
        if entry.witness is not None:
            assert entry.witness.reevaluate() == entry.witness.value


def test_audit_reports_are_deterministic():
    cfg = SamplerConfig(n=3, max_states=2, seed=13, samples=60)
    first = dumps(audit_all(cfg).to_json())
    second = dumps(audit_all(cfg).to_json())
    assert first == second
    json.loads(first)  # well-formed


def test_audit_all_empty_schema_list():
    cfg = SamplerConfig(n=3, seed=1, samples=10)
    report = audit_all(cfg, schemata=[], include_rules=False)
    assert report.schemas == [] and report.rules == []
    assert not report.has_counterexample


def test_rule_audit_runs():
    cfg = SamplerConfig(n=3, max_states=2, seed=5, samples=400)
    for rule_id in ("Mon-box", "Mon-diamond"):
        entry = audit_rule(rule_id, cfg)
        assert entry.verdict in ("counterexample", "no-counterexample-found")
        assert entry.premises_valid >= 1


# -- modality-free consequence -----------------------------------------------------


def test_consequence_trivial():
    p = parse_formula("p", C3)
    assert check_consequence_prop([p], p, C3) == (True, None)


def test_excluded_middle_fails_at_three():
    ok, witness = check_consequence_prop([], parse_formula("p | ~p", C3), C3)
    assert not ok
    assert witness == {"p": C3.value(1)}


def test_axiom_instances_are_tautologies():
    texts = [
        "p -> (q -> p)",
        "(p -> q) -> ((q -> r) -> (p -> r))",
        "((p -> q) -> q) -> ((q -> p) -> p)",
        "(~q -> ~p) -> (p -> q)",
    ]
    for n in (2, 3, 4, 5):
        ctx = ChainContext(n)
        for text in texts:
            assert check_consequence_prop([], parse_formula(text, ctx), ctx)[0], (n, text)


def test_modal_formulas_rejected():
    with pytest.raises(ModalFormulaRejected):
        check_consequence_prop([], parse_formula("[a]p", C3), C3)
    with pytest.raises(ModalFormulaRejected):
        check_consequence_prop([parse_formula("<a>p", C3)], parse_formula("p", C3), C3)


def test_valuation_budget():
    phi = parse_formula("p1 | p2 | p3 | p4", C3)
    with pytest.raises(BudgetExceeded):
        check_consequence_prop([], phi, C3, limit=80)


def test_consequence_with_premises():
    theta = [parse_formula("p", C3), parse_formula("p -> q", C3)]
    assert check_consequence_prop(theta, parse_formula("q", C3), C3)[0]
    ok, witness = check_consequence_prop(
        [parse_formula("p | q", C3)], parse_formula("p", C3), C3
    )
    assert not ok and witness["p"] < C3.one


def test_consequence_agrees_with_one_state_models():
    rng = random.Random(31)
    from gradedpdl.audit import random_formula

    for n in (2, 3):
        ctx = ChainContext(n)
        for _ in range(40):
            f = random_formula(rng, ctx, 3, props="pq", progs="a")
            # keep only modality-free draws
            try:
                expected, _ = check_consequence_prop([], f, ctx)
            except ModalFormulaRejected:
                continue
            # truth in all one-state models == tautology over valuations
            holds_everywhere = True
            for pnum in range(n):
                for qnum in range(n):
                    model = Model(ctx, StateSpace(1), {}, {"p": {0: pnum}, "q": {0: qnum}})
                    ok, _ = valid_in_model(model, f)
                    holds_everywhere = holds_everywhere and ok
            assert expected == holds_everywhere


# -- difference search ----------------------------------------------------------------


def test_equiv_identical_formulas():
    f = parse_formula("[a]p", C3)
    cfg = SamplerConfig(n=3, max_states=2, seed=2, samples=50)
    report = equiv_check(f, f, cfg)
    assert not report.difference_found
    assert report.models_tested == 50


def test_equiv_box_test_is_implication():
    for n in (2, 3):
        ctx = ChainContext(n)
        cfg = SamplerConfig(n=n, max_states=3, seed=4, samples=400)
        report = equiv_check(
            parse_formula("[?(p)]q", ctx), parse_formula("p -> q", ctx), cfg
        )
        assert not report.difference_found


def test_equiv_finds_modal_non_duality():
    ctx = ChainContext(2)
    cfg = SamplerConfig(n=2, max_states=3, density=0.35, seed=1, samples=1000)
    report = equiv_check(parse_formula("<a>p", ctx), parse_formula("~[a]~p", ctx), cfg)
    assert report.difference_found
    assert report.models_tested <= 1000
    # the witness re-evaluates exactly
    assert eval_formula(report.model, report.left, report.state) == report.left_value
    assert eval_formula(report.model, report.right, report.state) == report.right_value
    json.loads(dumps(report.to_json()))
