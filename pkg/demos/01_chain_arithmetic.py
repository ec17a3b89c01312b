"""
Exact chain arithmetic
======================

Truth values live on a finite chain 0, 1/(n-1), ..., 1 and every
operation is computed on integer numerators, so algebraic laws can be
checked by brute force with no rounding story at all.
"""

from gradedpdl import ChainContext, from_rational

ctx = ChainContext(5)
print(f"the chain of order {ctx.n}:", ", ".join(str(v) for v in ctx.values()))

a = from_rational(1, 2, ctx)
b = from_rational(3, 4, ctx)
print(f"\na = {a}, b = {b}")
print(f"a (*) b   = {a.conj(b)}     (truncated addition)")
print(f"a -> b    = {a.implies(b)}")
print(f"b -> a    = {b.implies(a)}")
print(f"~a        = {a.neg()}")
print(f"a \\/ b    = {a.join(b)},  a /\\ b = {a.meet(b)}")

print("\nresiduation, checked exhaustively on this chain:")
values = ctx.values()
checks = 0
for x in values:
    for y in values:
        for z in values:
            assert (x.conj(y) <= z) == (y <= x.implies(z))
            checks += 1
print(f"  a(*)b <= c  iff  b <= a->c   held in all {checks} cases")

print("\ndivisibility a /\\ b = a (*) (a -> b):")
for x in values:
    for y in values:
        assert x.meet(y) == x.conj(x.implies(y))
print("  held everywhere")

print("\nat order 2 the chain is the two-element Boolean algebra:")
two = ChainContext(2)
for x in two.values():
    for y in two.values():
        print(f"  {x} (*) {y} = {x.conj(y)},  {x} -> {y} = {x.implies(y)}")
