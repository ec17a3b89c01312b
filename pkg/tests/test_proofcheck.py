from pathlib import Path

import pytest

from gradedpdl.audit import check_consequence_prop
from gradedpdl.chain import ChainContext
from gradedpdl.proofcheck import (
    AxiomStep,
    Derivation,
    DerivationFormatError,
    MPStep,
    PremiseStep,
    check_derivation,
    load_derivation,
    parse_derivation,
)
from gradedpdl.syntax import format_formula, parse_formula

FIXTURES = Path(__file__).parent / "fixtures"
C3 = ChainContext(3)


def fixture_text(name):
    return (FIXTURES / name).read_text()


def test_identity_fixture_accepted():
    derivation = load_derivation(FIXTURES / "identity.proof")
    verdict = check_derivation(derivation, system="PL")
    assert verdict.accepted
    assert derivation.steps[-1].formula == parse_formula("p -> p", C3)


def test_mixed_fixture_accepted_and_long_enough():
    derivation = load_derivation(FIXTURES / "mixed22.proof")
    assert len(derivation.steps) >= 20
    assert check_derivation(derivation, system="PL").accepted
    assert check_derivation(derivation, system="DL").accepted
    used = {s.schema_id for s in derivation.steps if isinstance(s, AxiomStep)}
    assert used == {"A1", "A2", "A3", "A4", "A5"}


def test_soundness_bridge_every_line_is_a_tautology():
    for name in ("identity.proof", "mixed22.proof"):
        derivation = parse_derivation(fixture_text(name))
        for index, step in enumerate(derivation.steps, start=1):
            ok, witness = check_consequence_prop([], step.formula, derivation.context)
            assert ok, (name, index, witness)


def test_mp_example_accepted():
    text = "n: 3\npremise: p\npremise: p -> q\n1 premise p\n2 premise p -> q\n3 mp 1 2 q\n"
    verdict = check_derivation(parse_derivation(text))
    assert verdict.accepted


def test_mp_self_reference_rejected_with_message():
    text = "n: 3\npremise: p\n1 premise p\n2 mp 1 1 q\n"
    verdict = check_derivation(parse_derivation(text))
    assert not verdict.accepted
    assert verdict.failed_step == 2
    assert verdict.reason == "mp-mismatch"
    assert "antecedent 'p'" in verdict.message and "consequent 'q'" in verdict.message


def test_mp_forward_reference_rejected():
    text = "n: 3\npremise: p\n1 premise p\n2 mp 1 3 q\n3 premise p\n"
    verdict = check_derivation(parse_derivation(text))
    assert not verdict.accepted
    assert verdict.failed_step == 2
    assert verdict.reason == "bad-reference"


def test_premise_not_listed_rejected():
    text = "n: 3\npremise: p\n1 premise q\n"
    verdict = check_derivation(parse_derivation(text))
    assert verdict.failed_step == 1 and verdict.reason == "not-a-premise"


_MUTATIONS = [
    # (original line, replacement, expected failing step)
    ("3 mp 1 2 ", "3 mp 2 1 ", 3),
    ("5 mp 4 3 ", "5 mp 3 4 ", 5),
    ("11 mp 7 10 p -> p", "11 mp 10 7 p -> p", 11),
    ("1 axiom A1 ", "1 axiom A2 ", 1),
    ("4 axiom A3 ", "4 axiom A1 ", 4),
    (
        "13 axiom A5/imp #1 <-> (#1/2 -> #1/2)",
        "13 axiom A5/imp #1/2 <-> (#1/2 -> #1/2)",
        13,
    ),
    ("6 axiom A1 p -> (q -> p)", "6 axiom A1 p -> (q -> q)", 6),
    (
        "7 mp 6 5 ((p -> (q -> p)) -> p) -> p",
        "7 mp 6 5 ((p -> (q -> p)) -> p) -> q",
        7,
    ),
    (
        "12 axiom A4 (~q -> ~p) -> (p -> q)",
        "12 axiom A4 (~q -> ~p) -> (q -> p)",
        12,
    ),
    ("17 mp 11 16 ", "17 mp 12 16 ", 17),
]


@pytest.mark.parametrize("original,replacement,expected_step", _MUTATIONS)
def test_mutations_rejected_at_the_right_step(original, replacement, expected_step):
    text = fixture_text("mixed22.proof")
    assert original in text, original
    mutated = text.replace(original, replacement, 1)
    verdict = check_derivation(parse_derivation(mutated), system="PL")
    assert not verdict.accepted
    assert verdict.failed_step == expected_step


def test_axiom_must_name_known_schema():
    text = "n: 3\n1 axiom ZZ p -> p\n"
    verdict = check_derivation(parse_derivation(text))
    assert verdict.failed_step == 1 and verdict.reason == "unknown-schema"


def test_dl_schema_rejected_in_pl_mode():
    text = "n: 3\n1 axiom D1 [a]#1\n"
    assert check_derivation(parse_derivation(text), system="DL").accepted
    verdict = check_derivation(parse_derivation(text), system="PL")
    assert verdict.failed_step == 1 and verdict.reason == "unknown-schema"


def test_any_schema_mode_searches_the_catalog():
    # labeled A1 but shaped like A3: strict mode rejects, search accepts
    text = "n: 3\n1 axiom A1 ((p -> q) -> q) -> ((q -> p) -> p)\n"
    strict = check_derivation(parse_derivation(text))
    assert not strict.accepted and strict.reason == "axiom-mismatch"
    assert check_derivation(parse_derivation(text), any_schema=True).accepted


def test_variant_selection():
    corrected = "n: 3\n1 axiom D7/corrected [a^b]p <-> (<a>#1 -> [b]p) & (<b>#1 -> [a]p)\n"
    assert check_derivation(parse_derivation(corrected)).accepted
    wrong = "n: 3\n1 axiom D7/printed [a^b]p <-> (<a>#1 -> [b]p) & (<b>#1 -> [a]p)\n"
    assert not check_derivation(parse_derivation(wrong)).accepted
    # without a variant, any variant of the id may match
    bare = "n: 3\n1 axiom D7 [a^b]p <-> (<a>#1 -> [b]p) & (<b>#1 -> [a]p)\n"
    assert check_derivation(parse_derivation(bare)).accepted


def test_mon_rule_gated_by_flag():
    text = (
        "n: 3\n"
        "premise: p -> q\n"
        "1 premise p -> q\n"
        "2 mon 1 [a]p -> [a]q\n"
    )
    derivation = parse_derivation(text)
    gated = check_derivation(derivation)
    assert not gated.accepted and gated.reason == "mon-not-enabled"
    assert check_derivation(derivation, allow_mon=True).accepted
    bad = parse_derivation(
        "n: 3\npremise: p -> q\n1 premise p -> q\n2 mon 1 [a]p -> [b]q\n"
    )
    verdict = check_derivation(bad, allow_mon=True)
    assert not verdict.accepted and verdict.reason == "mon-mismatch"
    dia = parse_derivation(
        "n: 3\npremise: p -> q\n1 premise p -> q\n2 mon 1 <a>p -> <a>q\n"
    )
    assert check_derivation(dia, allow_mon=True).accepted


def test_acceptance_insensitive_to_reserialization():
    derivation = load_derivation(FIXTURES / "mixed22.proof")
    rebuilt_steps = []
    for step in derivation.steps:
        formula = parse_formula(format_formula(step.formula), derivation.context)
        if isinstance(step, AxiomStep):
            rebuilt_steps.append(AxiomStep(step.schema_id, step.variant, formula))
        elif isinstance(step, MPStep):
            rebuilt_steps.append(MPStep(step.antecedent, step.implication, formula))
        else:
            rebuilt_steps.append(PremiseStep(formula))
    rebuilt = Derivation(derivation.context, derivation.premises, rebuilt_steps)
    assert check_derivation(rebuilt, system="PL").accepted


def test_format_errors():
    with pytest.raises(DerivationFormatError):
        parse_derivation("1 premise p\n")  # missing header
    with pytest.raises(DerivationFormatError):
        parse_derivation("n: 3\n2 premise p\n")  # wrong numbering
    with pytest.raises(DerivationFormatError):
        parse_derivation("n: 3\n1 conjure p\n")  # unknown kind
    with pytest.raises(DerivationFormatError):
        parse_derivation("")  # empty
    with pytest.raises(DerivationFormatError):
        parse_derivation("n: 3\n1 premise p\npremise: p\n")  # premise after steps


def test_rejections_always_carry_step_and_reason():
    texts = [
        "n: 3\n1 axiom ZZ p\n",
        "n: 3\n1 premise p\n",
        "n: 3\n1 axiom A1 p -> p\n",
        "n: 3\npremise: p\n1 premise p\n2 mp 1 1 q\n",
    ]
    for text in texts:
        verdict = check_derivation(parse_derivation(text))
        assert not verdict.accepted
        assert isinstance(verdict.failed_step, int)
        assert verdict.reason and verdict.message
