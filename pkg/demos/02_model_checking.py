"""
Graded model checking with concurrent programs
==============================================

Programs take a state to a *set* of result states, with a chain-valued
grade on each (state, set) pair. This demo builds a three-state model,
evaluates formulas with every program construct, and exhibits the
classical surprise of set-target semantics: box and diamond are not
negation duals.
"""

from gradedpdl import (
    ChainContext,
    Model,
    ReachRelation,
    StateSpace,
    eval_formula,
    eval_program,
    parse_formula,
    parse_program,
)

ctx = ChainContext(3)
space = StateSpace(3)

# s0 --a--> {s1, s2} fully; s0 --a--> {s1} at grade 1/2.
# s1 --b--> {s2} at grade 1/2; s2 --b--> {s2} fully (a loop).
rel_a = ReachRelation.of(space, ctx, [(0, [1, 2], "1"), (0, [1], "1/2")])
rel_b = ReachRelation.of(space, ctx, [(1, [2], "1/2"), (2, [2], "1")])
model = Model(
    ctx,
    space,
    {"a": rel_a, "b": rel_b},
    {"p": {1: 2, 2: 1}, "q": {2: 2}},  # p: 1 at s1, 1/2 at s2; q: 1 at s2
)

print("formula values at s0, s1, s2:")
for text in ["p", "[a]p", "<a>p", "[a;b]q", "[a + b]p", "<b*>q", "[?(p)]q"]:
    formula = parse_formula(text, ctx)
    row = ", ".join(str(eval_formula(model, formula, s)) for s in space.states())
    print(f"  {text:10s} -> {row}")

print("\nprogram grades from s0 (nonzero only):")
for text in ["a", "a;b", "a ^ b", "b*"]:
    program = parse_program(text, ctx)
    cells = []
    for mask in space.subset_masks():
        value = eval_program(model, program, 0, mask)
        if not value.is_bottom:
            members = ",".join(f"s{i}" for i in range(3) if mask & (1 << i))
            cells.append(f"{{{members}}}={value}")
    print(f"  {text:6s} -> {'; '.join(cells) or 'none'}")

print("\nbox and diamond are not negation duals here:")
two = ChainContext(2)
sp = StateSpace(3)
witness = Model(
    two, sp, {"a": ReachRelation.of(sp, two, [(2, [0, 1], "1")])}, {"p": {0: 1}}
)
dia = eval_formula(witness, parse_formula("<a>p", two), 2)
neg_box_neg = eval_formula(witness, parse_formula("~[a]~p", two), 2)
print(f"  from s2, the only a-move lands on {{s0, s1}} with p true only at s0")
print(f"  <a>p = {dia}   (no reachable set settles p everywhere)")
print(f"  ~[a]~p = {neg_box_neg}   (yet not every reachable set refutes p)")
