import random

import pytest

from gradedpdl.chain import ChainContext, ChainValue
from gradedpdl.schemas import (
    MissingBinding,
    all_schemata,
    instantiate_schema,
    match_axiom_instance,
    schemata_named,
)
from gradedpdl.audit import SamplerConfig, sample_bindings
from gradedpdl.syntax import Atomic, PropVar, format_formula, parse_formula

C3 = ChainContext(3)


def schema(label):
    schema_id, _, variant = label.partition("/")
    entries = schemata_named(schema_id, variant or None)
    assert len(entries) == 1, label
    return entries[0]


def test_catalog_shape():
    labels = [s.label for s in all_schemata("DL")]
    assert labels[:4] == ["A1", "A2", "A3", "A4"]
    assert {"A5/and", "A5/or", "A5/imp"} <= set(labels)
    assert [l for l in labels if l.startswith("D")] == [
        "D1", "D2", "D3", "D4", "D5", "D6", "D7/printed", "D7/corrected",
        "D8", "D9", "D10", "D11", "D12", "D13", "D14", "D15", "D16", "D17",
    ]
    pl = {s.label for s in all_schemata("PL")}
    assert pl == {"A1", "A2", "A3", "A4", "A5/and", "A5/or", "A5/imp"}


def test_instantiate_a1():
    got = instantiate_schema(schema("A1"), {"phi": PropVar("p"), "psi": PropVar("q")}, C3)
    assert got == parse_formula("p -> (q -> p)", C3)


def test_instantiate_seq_box():
    bindings = {"pi0": Atomic("a"), "pi1": Atomic("b"), "phi": PropVar("p")}
    got = instantiate_schema(schema("D5"), bindings, C3)
    assert got == parse_formula("[a;b]p <-> [a][b]p", C3)


def test_instantiate_constant_axiom():
    half = C3.value(1)
    got = instantiate_schema(schema("A5/imp"), {"c": half, "d": half}, C3)
    assert got == parse_formula("#1 <-> (#1/2 -> #1/2)", C3)


def test_instantiate_bound_constants():
    got = instantiate_schema(schema("D17"), {"pi": Atomic("a")}, C3)
    assert got == parse_formula("[a]#0 | <a>#1", C3)


def test_missing_binding():
    with pytest.raises(MissingBinding):
        instantiate_schema(schema("A1"), {"phi": PropVar("p")}, C3)


def test_match_a1():
    ok, bindings = match_axiom_instance(schema("A1"), parse_formula("p -> (q -> p)", C3), C3)
    assert ok
    assert bindings == {"phi": PropVar("p"), "psi": PropVar("q")}
    ok, _ = match_axiom_instance(schema("A1"), parse_formula("p -> (q -> r)", C3), C3)
    assert not ok


def test_match_repeated_metavariable():
    a3 = schema("A3")
    good = parse_formula("((p -> q) -> q) -> ((q -> p) -> p)", C3)
    assert match_axiom_instance(a3, good, C3)[0]
    bad = parse_formula("((p -> q) -> q) -> ((q -> p) -> q)", C3)
    assert not match_axiom_instance(a3, bad, C3)[0]


def test_match_constant_axiom_checks_arithmetic():
    a5 = schema("A5/imp")
    assert match_axiom_instance(a5, parse_formula("#1 <-> (#1/2 -> #1/2)", C3), C3)[0]
    assert not match_axiom_instance(a5, parse_formula("#0 <-> (#1/2 -> #1/2)", C3), C3)[0]
    a5_and = schema("A5/and")
    assert match_axiom_instance(a5_and, parse_formula("#0 <-> #0 & #1", C3), C3)[0]
    assert not match_axiom_instance(a5_and, parse_formula("#1 <-> #0 & #1", C3), C3)[0]


def test_match_bound_constant_is_chain_aware():
    d1 = schema("D1")
    assert match_axiom_instance(d1, parse_formula("[a]#1", C3), C3)[0]
    assert not match_axiom_instance(d1, parse_formula("[a]#1/2", C3), C3)[0]
    assert not match_axiom_instance(d1, parse_formula("[a]p", C3), C3)[0]


def test_match_distinguishes_inter_box_variants():
    printed = schema("D7/printed")
    corrected = schema("D7/corrected")
    text_printed = "[a^b]p <-> (<a>#1 -> [b]p) & (<b>#1 -> [b]p)"
    text_corrected = "[a^b]p <-> (<a>#1 -> [b]p) & (<b>#1 -> [a]p)"
    assert match_axiom_instance(printed, parse_formula(text_printed, C3), C3)[0]
    assert not match_axiom_instance(printed, parse_formula(text_corrected, C3), C3)[0]
    assert match_axiom_instance(corrected, parse_formula(text_corrected, C3), C3)[0]
    assert not match_axiom_instance(corrected, parse_formula(text_printed, C3), C3)[0]


def test_instantiate_then_match_recovers_bindings():
    rng = random.Random(17)
    cfg = SamplerConfig(n=3, seed=17)
    for s in all_schemata("DL"):
        for _ in range(20):
            bindings = sample_bindings(s, rng, cfg)
            instance = instantiate_schema(s, bindings, C3)
            ok, recovered = match_axiom_instance(s, instance, C3)
            assert ok, (s.label, format_formula(instance))
            for name, bound in bindings.items():
                if isinstance(bound, ChainValue):
                    assert recovered[name] == bound
                else:
                    assert recovered[name] == bound


def test_schema_lookup():
    assert schemata_named("D7") == [schema("D7/printed"), schema("D7/corrected")]
    assert schemata_named("ZZ") == []
    assert schemata_named("D7", "nope") == []
