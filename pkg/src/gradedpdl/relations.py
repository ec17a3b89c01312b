"""Reachability relations graded over a finite chain.

A relation assigns a chain value to every pair (state, set of states);
pairs that are not stored sit at bottom. State sets are bitmasks over
0..size-1, which keeps the subset enumerations in composition cheap.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Union as _U

from .chain import ChainContext, ChainMismatchError, ChainValue, parse_value


class SpaceMismatchError(ValueError):
    """Relations over different state spaces were combined."""


@dataclass(frozen=True)
class StateSpace:
    """States 0..size-1."""

    size: int

    def __post_init__(self) -> None:
        if not isinstance(self.size, int) or self.size < 1:
            raise ValueError(f"state space needs at least one state, got {self.size!r}")

    @property
    def full_mask(self) -> int:
        return (1 << self.size) - 1

    def states(self) -> range:
        return range(self.size)

    def subset_masks(self) -> range:
        """All subsets of the space, as masks (empty set included)."""
        return range(1 << self.size)

    def mask_of(self, states: Iterable[int]) -> int:
        mask = 0
        for s in states:
            if not 0 <= s < self.size:
                raise ValueError(f"state {s} outside space of size {self.size}")
            mask |= 1 << s
        return mask


def mask_states(mask: int) -> list[int]:
    """Member states of a bitmask, ascending."""
    out = []
    s = 0
    while mask:
        if mask & 1:
            out.append(s)
        mask >>= 1
        s += 1
    return out


StateSetLike = _U[int, Iterable[int]]


class ReachRelation:
    """Finite-support map (state, state set) -> chain value.

    Stored entries are the nonzero ones: ``entries`` maps (state, mask)
    to a positive numerator. Instances are treated as immutable values.
    """

    __slots__ = ("space", "context", "entries")

    def __init__(
        self,
        space: StateSpace,
        context: ChainContext,
        entries: Mapping[tuple[int, int], int] | None = None,
    ):
        self.space = space
        self.context = context
        table: dict[tuple[int, int], int] = {}
        full = space.full_mask
        top = context.top
        for (s, mask), num in (entries or {}).items():
            if not 0 <= s < space.size:
                raise ValueError(f"state {s} outside space of size {space.size}")
            if not 0 <= mask <= full:
                raise ValueError(f"mask {mask:#x} outside space of size {space.size}")
            if not isinstance(num, int) or not 0 <= num <= top:
                raise ValueError(f"numerator {num!r} outside chain of order {context.n}")
            if num > 0:
                table[(s, mask)] = num
        self.entries = table

    @classmethod
    def of(
        cls,
        space: StateSpace,
        context: ChainContext,
        triples: Iterable[tuple[int, StateSetLike, _U[int, str, ChainValue]]],
    ) -> "ReachRelation":
        """Build from (state, state set, value) triples; values may be
        numerators, ``p/q`` strings, or chain values."""
        table: dict[tuple[int, int], int] = {}
        for s, states, val in triples:
            mask = states if isinstance(states, int) else space.mask_of(states)
            if isinstance(val, ChainValue):
                if val.context != context:
                    raise ChainMismatchError("value from a different chain")
                num = val.numerator
            elif isinstance(val, str):
                num = parse_value(val, context).numerator
            else:
                num = val
            key = (s, mask)
            table[key] = max(table.get(key, 0), num)
        return cls(space, context, table)

    def num(self, s: int, mask: int) -> int:
        return self.entries.get((s, mask), 0)

    def value(self, s: int, states: StateSetLike) -> ChainValue:
        mask = states if isinstance(states, int) else self.space.mask_of(states)
        return ChainValue(self.num(s, mask), self.context)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ReachRelation):
            return NotImplemented
        return (
            self.space == other.space
            and self.context == other.context
            and self.entries == other.entries
        )

    def __hash__(self):  # pragma: no cover - relations are not dict keys
        raise TypeError("ReachRelation is not hashable")

    def __repr__(self) -> str:
        cells = ", ".join(
            f"({s},{{{','.join(map(str, mask_states(m)))}}})={v}"
            for (s, m), v in sorted(self.entries.items())
        )
        return f"ReachRelation(|S|={self.space.size}, n={self.context.n}, {{{cells}}})"


def _check_same(a: ReachRelation, b: ReachRelation) -> None:
    if a.space != b.space:
        raise SpaceMismatchError(
            f"state spaces differ: {a.space.size} vs {b.space.size}"
        )
    if a.context != b.context:
        raise ChainMismatchError(
            f"chains differ: order {a.context.n} vs {b.context.n}"
        )


def zero_relation(space: StateSpace, ctx: ChainContext) -> ReachRelation:
    return ReachRelation(space, ctx, {})


def iota(space: StateSpace, ctx: ChainContext) -> ReachRelation:
    """Unit relation: top at (s, {s}), bottom elsewhere."""
    top = ctx.top
    return ReachRelation(space, ctx, {(s, 1 << s): top for s in space.states()})


def union(r: ReachRelation, q: ReachRelation, literal: bool = False) -> ReachRelation:
    """Pointwise join.

    With ``literal=True`` the empty-set column is forced to bottom, which
    is what the printed defining equation gives when its (vacuous) join
    over members of the target set is read word for word.
    """
    _check_same(r, q)
    table = dict(r.entries)
    for key, val in q.entries.items():
        if val > table.get(key, 0):
            table[key] = val
    if literal:
        table = {(s, m): v for (s, m), v in table.items() if m != 0}
    return ReachRelation(r.space, r.context, table)


def compose(r: ReachRelation, q: ReachRelation) -> ReachRelation:
    """Concurrent composition.

    (r o q)(s, T) is the join, over intermediate sets U and over families
    assigning each u in U a target set T_u with union T, of
    r(s, U) (*) prod_u q(u, T_u), where (*) is strong conjunction. Only
    nonzero factors can contribute, so enumeration runs over the stored
    support, and a branch is dropped as soon as its running product hits
    bottom. The empty U contributes r(s, empty) at T = empty.
    """
    _check_same(r, q)
    top = r.context.top
    by_state: dict[int, list[tuple[int, int]]] = {}
    for (u, mask), val in q.entries.items():
        by_state.setdefault(u, []).append((mask, val))

    out: dict[tuple[int, int], int] = {}
    for (s, umask), rval in r.entries.items():
        members = mask_states(umask)
        choices = [by_state.get(u) for u in members]
        if any(c is None for c in choices):
            continue  # some intermediate state has no nonzero row

        def descend(idx: int, acc_mask: int, acc_val: int) -> None:
            if idx == len(members):
                key = (s, acc_mask)
                if acc_val > out.get(key, 0):
                    out[key] = acc_val
                return
            for tmask, qval in choices[idx]:
                val = acc_val + qval - top
                if val <= 0:
                    continue
                descend(idx + 1, acc_mask | tmask, val)

        descend(0, 0, rval)
    return ReachRelation(r.space, r.context, out)


def parallel(r: ReachRelation, q: ReachRelation, disjoint: bool = False) -> ReachRelation:
    """Parallel combination: join over splittings of the target set.

    (r (x) q)(s, X) joins r(s, T) (*) q(s, W) over all pairs with
    T union W = X. Overlapping T and W are allowed; ``disjoint=True``
    restricts to partitions for comparison.
    """
    _check_same(r, q)
    top = r.context.top
    q_by_state: dict[int, list[tuple[int, int]]] = {}
    for (s, mask), val in q.entries.items():
        q_by_state.setdefault(s, []).append((mask, val))

    out: dict[tuple[int, int], int] = {}
    for (s, tmask), rval in r.entries.items():
        for wmask, qval in q_by_state.get(s, ()):
            if disjoint and (tmask & wmask):
                continue
            val = rval + qval - top
            if val <= 0:
                continue
            key = (s, tmask | wmask)
            if val > out.get(key, 0):
                out[key] = val
    return ReachRelation(r.space, r.context, out)


def leq(r: ReachRelation, q: ReachRelation) -> bool:
    """Pointwise order."""
    _check_same(r, q)
    return all(val <= q.entries.get(key, 0) for key, val in r.entries.items())


def power(r: ReachRelation, k: int) -> ReachRelation:
    """Iterate p(0) = unit, p(i+1) = unit join (r o p(i))."""
    if k < 0:
        raise ValueError(f"power index must be >= 0, got {k}")
    unit = iota(r.space, r.context)
    acc = unit
    for _ in range(k):
        acc = union(unit, compose(r, acc))
    return acc


def star(r: ReachRelation) -> ReachRelation:
    """Reflexive-transitive closure: limit of the power iteration.

    The iterates grow monotonically in a finite lattice, so the loop is
    guaranteed to reach a fixpoint.
    """
    unit = iota(r.space, r.context)
    current = unit
    while True:
        nxt = union(unit, compose(r, current))
        if nxt == current:
            return current
        current = nxt
