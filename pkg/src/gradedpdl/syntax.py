"""Formula and program syntax: ASTs, concrete notation, closure computation.

Concrete syntax (whitespace-insensitive)::

    formula := imp ( "<->" imp )*
    imp     := or ( "->" imp )?          right-associative
    or      := and ( "|" and )*
    and     := unary ( "&" unary )*
    unary   := "~" unary | "[" program "]" unary | "<" program ">" unary | atom
    atom    := ident | "#" int ( "/" int )? | "(" formula ")"
    program := par ( "+" par )*
    par     := seq ( "^" seq )*
    seq     := post ( ";" post )*
    post    := prim ( "*" )*
    prim    := ident | "?" "(" formula ")" | "(" program ")"

``~f`` is notation for ``f -> #0`` and ``f <-> g`` for the conjunction of
the two implications; the parser removes both, so the ASTs below have no
negation or biconditional nodes.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Union as _U

from .chain import ChainContext, ChainValue, NotAChainElement, format_value, from_rational


class ParseError(ValueError):
    """Input text does not conform to the grammar."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class ClosureBudgetExceeded(RuntimeError):
    """The closure worklist grew past its safety cap."""


# -- abstract syntax --------------------------------------------------------


@dataclass(frozen=True)
class PropVar:
    name: str


@dataclass(frozen=True)
class Constant:
    value: ChainValue


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Box:
    program: "Program"
    body: "Formula"


@dataclass(frozen=True)
class Diamond:
    program: "Program"
    body: "Formula"


@dataclass(frozen=True)
class Atomic:
    name: str


@dataclass(frozen=True)
class Union:
    left: "Program"
    right: "Program"


@dataclass(frozen=True)
class Inter:
    left: "Program"
    right: "Program"


@dataclass(frozen=True)
class Seq:
    left: "Program"
    right: "Program"


@dataclass(frozen=True)
class Star:
    body: "Program"


@dataclass(frozen=True)
class Test:
    condition: "Formula"

    __test__ = False  # keep pytest from collecting the class


Formula = _U[PropVar, Constant, And, Or, Implies, Box, Diamond]
Program = _U[Atomic, Union, Inter, Seq, Star, Test]


def negation(f: Formula, ctx: ChainContext) -> Formula:
    """``~f`` desugared: f -> #0."""
    return Implies(f, Constant(ctx.zero))


def biconditional(a: Formula, b: Formula) -> Formula:
    """``a <-> b`` desugared: (a -> b) & (b -> a)."""
    return And(Implies(a, b), Implies(b, a))


# -- tokenizer ---------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<const>\#\d+(?:/\d+)?)"
    r"|(?P<op><->|->|[~&|()\[\]<>+^;*?])"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        if m.lastgroup != "ws":
            tokens.append((m.lastgroup, m.group(), pos))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, ctx: ChainContext):
        self.tokens = _tokenize(text)
        self.ctx = ctx
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def take(self) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, text: str) -> None:
        kind, got, pos = self.peek()
        if got != text or kind == "eof":
            shown = got if kind != "eof" else "end of input"
            raise ParseError(f"expected {text!r}, found {shown!r}", pos)
        self.i += 1

    def at(self, text: str) -> bool:
        kind, got, _ = self.peek()
        return kind != "eof" and got == text

    def done(self) -> None:
        kind, got, pos = self.peek()
        if kind != "eof":
            raise ParseError(f"unexpected trailing input {got!r}", pos)

    # formulas

    def formula(self) -> Formula:
        node = self.imp()
        while self.at("<->"):
            self.take()
            node = biconditional(node, self.imp())
        return node

    def imp(self) -> Formula:
        left = self.disj()
        if self.at("->"):
            self.take()
            return Implies(left, self.imp())
        return left

    def disj(self) -> Formula:
        node = self.conj()
        while self.at("|"):
            self.take()
            node = Or(node, self.conj())
        return node

    def conj(self) -> Formula:
        node = self.unary()
        while self.at("&"):
            self.take()
            node = And(node, self.unary())
        return node

    def unary(self) -> Formula:
        kind, text, pos = self.peek()
        if text == "~":
            self.take()
            return negation(self.unary(), self.ctx)
        if text == "[":
            self.take()
            prog = self.program()
            self.expect("]")
            return Box(prog, self.unary())
        if text == "<":
            self.take()
            prog = self.program()
            self.expect(">")
            return Diamond(prog, self.unary())
        return self.atom()

    def atom(self) -> Formula:
        kind, text, pos = self.take()
        if kind == "ident":
            return PropVar(text)
        if kind == "const":
            body = text[1:]
            if "/" in body:
                p_str, q_str = body.split("/", 1)
                p, q = int(p_str), int(q_str)
            else:
                p, q = int(body), 1
            try:
                return Constant(from_rational(p, q, self.ctx))
            except NotAChainElement as exc:
                raise NotAChainElement(f"{exc} (at position {pos})") from None
        if text == "(":
            node = self.formula()
            self.expect(")")
            return node
        shown = text if kind != "eof" else "end of input"
        raise ParseError(f"expected a formula, found {shown!r}", pos)

    # programs

    def program(self) -> Program:
        node = self.par()
        while self.at("+"):
            self.take()
            node = Union(node, self.par())
        return node

    def par(self) -> Program:
        node = self.seq()
        while self.at("^"):
            self.take()
            node = Inter(node, self.seq())
        return node

    def seq(self) -> Program:
        node = self.post()
        while self.at(";"):
            self.take()
            node = Seq(node, self.post())
        return node

    def post(self) -> Program:
        node = self.prim()
        while self.at("*"):
            self.take()
            node = Star(node)
        return node

    def prim(self) -> Program:
        kind, text, pos = self.take()
        if kind == "ident":
            return Atomic(text)
        if text == "?":
            self.expect("(")
            cond = self.formula()
            self.expect(")")
            return Test(cond)
        if text == "(":
            node = self.program()
            self.expect(")")
            return node
        shown = text if kind != "eof" else "end of input"
        raise ParseError(f"expected a program, found {shown!r}", pos)


def parse_formula(text: str, ctx: ChainContext) -> Formula:
    parser = _Parser(text, ctx)
    node = parser.formula()
    parser.done()
    return node


def parse_program(text: str, ctx: ChainContext) -> Program:
    parser = _Parser(text, ctx)
    node = parser.program()
    parser.done()
    return node


# -- printer -----------------------------------------------------------------

# Formula precedence levels, loosest to tightest.
_IMP, _OR, _AND, _UNARY, _FATOM = 1, 2, 3, 4, 5
# Program levels.
_UNION, _INTER, _SEQ, _POST, _PRIM = 1, 2, 3, 4, 5


def _wrap(rendered: tuple[str, int], floor: int) -> str:
    text, level = rendered
    return text if level >= floor else f"({text})"


def _ff(f: Formula) -> tuple[str, int]:
    if isinstance(f, PropVar):
        return f.name, _FATOM
    if isinstance(f, Constant):
        return "#" + format_value(f.value), _FATOM
    if isinstance(f, And):
        return f"{_wrap(_ff(f.left), _AND)} & {_wrap(_ff(f.right), _UNARY)}", _AND
    if isinstance(f, Or):
        return f"{_wrap(_ff(f.left), _OR)} | {_wrap(_ff(f.right), _AND)}", _OR
    if isinstance(f, Implies):
        return f"{_wrap(_ff(f.left), _OR)} -> {_wrap(_ff(f.right), _IMP)}", _IMP
    if isinstance(f, Box):
        return f"[{format_program(f.program)}]{_wrap(_ff(f.body), _UNARY)}", _UNARY
    if isinstance(f, Diamond):
        return f"<{format_program(f.program)}>{_wrap(_ff(f.body), _UNARY)}", _UNARY
    raise TypeError(f"not a formula: {f!r}")


def _fp(p: Program) -> tuple[str, int]:
    if isinstance(p, Atomic):
        return p.name, _PRIM
    if isinstance(p, Union):
        return f"{_wrap(_fp(p.left), _UNION)} + {_wrap(_fp(p.right), _INTER)}", _UNION
    if isinstance(p, Inter):
        return f"{_wrap(_fp(p.left), _INTER)} ^ {_wrap(_fp(p.right), _SEQ)}", _INTER
    if isinstance(p, Seq):
        return f"{_wrap(_fp(p.left), _SEQ)} ; {_wrap(_fp(p.right), _POST)}", _SEQ
    if isinstance(p, Star):
        return f"{_wrap(_fp(p.body), _POST)}*", _POST
    if isinstance(p, Test):
        return f"?({format_formula(p.condition)})", _PRIM
    raise TypeError(f"not a program: {p!r}")


def format_formula(f: Formula) -> str:
    return _ff(f)[0]


def format_program(p: Program) -> str:
    return _fp(p)[0]


# -- structure helpers ---------------------------------------------------------


def immediate_subformulas(f: Formula) -> list[Formula]:
    if isinstance(f, (And, Or, Implies)):
        return [f.left, f.right]
    if isinstance(f, (Box, Diamond)):
        return [f.body]
    return []


def ast_size(node: _U[Formula, Program]) -> int:
    """Node count of the whole tree, programs included."""
    if isinstance(node, (And, Or, Implies, Union, Inter, Seq)):
        return 1 + ast_size(node.left) + ast_size(node.right)
    if isinstance(node, (Box, Diamond)):
        return 1 + ast_size(node.program) + ast_size(node.body)
    if isinstance(node, Star):
        return 1 + ast_size(node.body)
    if isinstance(node, Test):
        return 1 + ast_size(node.condition)
    return 1


def collect_names(node: _U[Formula, Program]) -> tuple[set[str], set[str]]:
    """All proposition names and atomic program names in the tree."""
    props: set[str] = set()
    progs: set[str] = set()
    stack: list[_U[Formula, Program]] = [node]
    while stack:
        cur = stack.pop()
        if isinstance(cur, PropVar):
            props.add(cur.name)
        elif isinstance(cur, Atomic):
            progs.add(cur.name)
        elif isinstance(cur, (And, Or, Implies, Union, Inter, Seq)):
            stack.append(cur.left)
            stack.append(cur.right)
        elif isinstance(cur, (Box, Diamond)):
            stack.append(cur.program)
            stack.append(cur.body)
        elif isinstance(cur, Star):
            stack.append(cur.body)
        elif isinstance(cur, Test):
            stack.append(cur.condition)
    return props, progs


# -- Fischer-Ladner closure ----------------------------------------------------


def _expansions(f: Formula, ctx: ChainContext) -> list[Formula]:
    """Formulas forced into a closed set by the presence of ``f``."""
    out = list(immediate_subformulas(f))
    if isinstance(f, Box):
        p, body = f.program, f.body
        if isinstance(p, Union):
            out += [Box(p.left, body), Box(p.right, body)]
        elif isinstance(p, Inter):
            one = Constant(ctx.one)
            out += [Box(p.left, body), Box(p.right, body), Box(p.left, one), Box(p.right, one)]
        elif isinstance(p, Seq):
            out.append(Box(p.left, Box(p.right, body)))
        elif isinstance(p, Star):
            out.append(Box(p.body, f))
        elif isinstance(p, Test):
            out.append(Implies(p.condition, body))
    elif isinstance(f, Diamond):
        p, body = f.program, f.body
        if isinstance(p, Union):
            out += [Diamond(p.left, body), Diamond(p.right, body)]
        elif isinstance(p, Inter):
            # No top-constant diamonds here; only the box rule adds those.
            out += [Diamond(p.left, body), Diamond(p.right, body)]
        elif isinstance(p, Seq):
            out.append(Diamond(p.left, Diamond(p.right, body)))
        elif isinstance(p, Star):
            out.append(Diamond(p.body, f))
        elif isinstance(p, Test):
            out.append(And(p.condition, body))
    return out


def closure_of_set(
    formulas: Iterable[Formula], ctx: ChainContext, cap: int = 10_000
) -> frozenset[Formula]:
    """Smallest closed set containing every given formula."""
    seen: set[Formula] = set()
    work = list(formulas)
    while work:
        f = work.pop()
        if f in seen:
            continue
        if len(seen) >= cap:
            raise ClosureBudgetExceeded(f"closure exceeded the cap of {cap} formulas")
        seen.add(f)
        work.extend(_expansions(f, ctx))
    return frozenset(seen)


def fl_closure(formula: Formula, ctx: ChainContext, cap: int = 10_000) -> frozenset[Formula]:
    """Fischer-Ladner closure of a single formula."""
    return closure_of_set([formula], ctx, cap)


def is_closed(formulas: Iterable[Formula], ctx: ChainContext, cap: int = 10_000) -> bool:
    gamma = frozenset(formulas)
    return closure_of_set(gamma, ctx, cap) == gamma
