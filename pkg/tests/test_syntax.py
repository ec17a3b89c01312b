import random

import pytest
from hypothesis import given, settings, strategies as st

from gradedpdl.chain import ChainContext, ChainValue, NotAChainElement
from gradedpdl.syntax import (
    And,
    Atomic,
    Box,
    ClosureBudgetExceeded,
    Constant,
    Diamond,
    Implies,
    Inter,
    Or,
    ParseError,
    PropVar,
    Seq,
    Star,
    Test,
    Union,
    ast_size,
    biconditional,
    closure_of_set,
    collect_names,
    fl_closure,
    format_formula,
    format_program,
    immediate_subformulas,
    parse_formula,
    parse_program,
)

C3 = ChainContext(3)


def test_parse_box_union():
    assert parse_formula("[a + b]p", C3) == Box(Union(Atomic("a"), Atomic("b")), PropVar("p"))


def test_parse_diamond_test():
    assert parse_formula("<?(p) >p", C3) == Diamond(Test(PropVar("p")), PropVar("p"))


def test_bad_constant_rejected():
    with pytest.raises(NotAChainElement):
        parse_formula("#1/2 -> p", ChainContext(4))


def test_desugaring():
    p, q = PropVar("p"), PropVar("q")
    assert parse_formula("~p", C3) == Implies(p, Constant(C3.zero))
    assert parse_formula("p <-> q", C3) == And(Implies(p, q), Implies(q, p))
    assert parse_formula("p <-> q", C3) == biconditional(p, q)


def test_precedence():
    p, q, r, s = map(PropVar, "pqrs")
    assert parse_formula("p -> q -> r", C3) == Implies(p, Implies(q, r))
    assert parse_formula("p | q & r", C3) == Or(p, And(q, r))
    assert parse_formula("~p & q", C3) == And(Implies(p, Constant(C3.zero)), q)
    got = parse_formula("p & q | r -> s", C3)
    assert got == Implies(Or(And(p, q), r), s)


def test_program_precedence():
    a, b, c, d = map(Atomic, "abcd")
    assert parse_program("a;b + c^d", C3) == Union(Seq(a, b), Inter(c, d))
    assert parse_program("a;b;c", C3) == Seq(Seq(a, b), c)
    assert parse_program("a**", C3) == Star(Star(a))
    assert parse_program("(a + b)*", C3) == Star(Union(a, b))


def test_parse_errors_carry_position():
    with pytest.raises(ParseError) as err:
        parse_formula("p -> ", C3)
    assert "position" in str(err.value)
    with pytest.raises(ParseError):
        parse_formula("p q", C3)
    with pytest.raises(ParseError):
        parse_program("a + ", C3)
    with pytest.raises(ParseError):
        parse_formula("p $ q", C3)


def test_constants_parse_and_print():
    f = parse_formula("#1/2 -> #0 | #1", C3)
    assert format_formula(f) == "#1/2 -> #0 | #1"
    five = ChainContext(5)
    assert format_formula(parse_formula("#2/4", five)) == "#1/2"


# -- random round-trip --------------------------------------------------------


def random_formula(rng, ctx, depth):
    if depth == 0 or rng.random() < 0.3:
        if rng.random() < 0.5:
            return PropVar(rng.choice("pqr"))
        return Constant(ChainValue(rng.randint(0, ctx.top), ctx))
    kind = rng.randrange(5)
    if kind < 3:
        node = (And, Or, Implies)[kind]
        return node(random_formula(rng, ctx, depth - 1), random_formula(rng, ctx, depth - 1))
    node = (Box, Diamond)[kind - 3]
    return node(random_program(rng, ctx, depth - 1), random_formula(rng, ctx, depth - 1))


def random_program(rng, ctx, depth):
    if depth == 0 or rng.random() < 0.3:
        return Atomic(rng.choice("abc"))
    kind = rng.randrange(5)
    if kind < 3:
        node = (Union, Inter, Seq)[kind]
        return node(random_program(rng, ctx, depth - 1), random_program(rng, ctx, depth - 1))
    if kind == 3:
        return Star(random_program(rng, ctx, depth - 1))
    return Test(random_formula(rng, ctx, depth - 1))


def test_round_trip_random_formulas():
    rng = random.Random(12)
    for _ in range(300):
        f = random_formula(rng, C3, 4)
        assert parse_formula(format_formula(f), C3) == f


def test_round_trip_random_programs():
    rng = random.Random(13)
    for _ in range(300):
        p = random_program(rng, C3, 4)
        assert parse_program(format_program(p), C3) == p


@st.composite
def formulas(draw, depth=3):
    if depth == 0 or draw(st.booleans()):
        if draw(st.booleans()):
            return PropVar(draw(st.sampled_from("pq")))
        return Constant(ChainValue(draw(st.integers(0, 2)), C3))
    kind = draw(st.integers(0, 4))
    if kind < 3:
        node = (And, Or, Implies)[kind]
        return node(draw(formulas(depth=depth - 1)), draw(formulas(depth=depth - 1)))
    node = (Box, Diamond)[kind - 3]
    prog_kind = draw(st.integers(0, 2))
    if prog_kind == 0:
        prog = Atomic(draw(st.sampled_from("ab")))
    elif prog_kind == 1:
        prog = Star(Atomic(draw(st.sampled_from("ab"))))
    else:
        prog = Test(draw(formulas(depth=0)))
    return node(prog, draw(formulas(depth=depth - 1)))


@settings(max_examples=200, deadline=None)
@given(formulas())
def test_round_trip_property(f):
    assert parse_formula(format_formula(f), C3) == f


# -- closure -------------------------------------------------------------------


def _texts(formulas_set):
    return sorted(format_formula(f) for f in formulas_set)


def test_closure_of_atom():
    assert fl_closure(PropVar("p"), C3) == frozenset([PropVar("p")])


def test_closure_union_box():
    got = fl_closure(parse_formula("[a+b]p", C3), C3)
    assert _texts(got) == ["[a + b]p", "[a]p", "[b]p", "p"]


def test_closure_star_box_is_exactly_three():
    got = fl_closure(parse_formula("[a*]p", C3), C3)
    assert _texts(got) == ["[a*]p", "[a][a*]p", "p"]


def test_closure_inter_box_adds_top_boxes():
    got = fl_closure(parse_formula("[a^b]p", C3), C3)
    assert _texts(got) == ["#1", "[a ^ b]p", "[a]#1", "[a]p", "[b]#1", "[b]p", "p"]


def test_closure_inter_diamond_has_no_top_diamonds():
    got = fl_closure(parse_formula("<a^b>p", C3), C3)
    assert _texts(got) == ["<a ^ b>p", "<a>p", "<b>p", "p"]


def test_closure_test_rules():
    box = fl_closure(parse_formula("[?(q)]p", C3), C3)
    assert parse_formula("q -> p", C3) in box
    dia = fl_closure(parse_formula("<?(q)>p", C3), C3)
    assert parse_formula("q & p", C3) in dia


def test_closure_cap():
    f = parse_formula("[(a;b)*](p & q)", C3)
    with pytest.raises(ClosureBudgetExceeded):
        fl_closure(f, C3, cap=2)


def test_closure_properties_random():
    rng = random.Random(99)
    for _ in range(100):
        f = random_formula(rng, C3, 4)
        closure = fl_closure(f, C3)
        assert f in closure
        # subformula-closed
        for member in closure:
            for child in immediate_subformulas(member):
                assert child in closure
        # idempotent
        assert closure_of_set(closure, C3) == closure
        # monotone
        member = rng.choice(sorted(closure, key=format_formula))
        assert fl_closure(member, C3) <= closure


def test_ast_size_and_names():
    f = parse_formula("[a;b*]p -> <?(q)>r", C3)
    assert ast_size(f) == 11
    props, progs = collect_names(f)
    assert props == {"p", "q", "r"}
    assert progs == {"a", "b"}
