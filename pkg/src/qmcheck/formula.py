"""Temporal-logic formulas: abstract syntax, parser, renderer, normalizer.

Concrete syntax (ASCII, whitespace-insensitive)::

    state  := "true" | "false" | "unknown" | IDENT | "!" state
            | state "&" state | state "|" state
            | "P" bound "[" path "]" | "(" state ")"
    bound  := ">=" PROB | "<" PROB
    path   := "X" state | state "U" state | state "U<=" INT state

``!`` binds tightest, then ``&``, then ``|``; until is non-associative, so
nested untils must be parenthesized.  ``PROB`` is a decimal literal in
[0, 1]; ``IDENT`` matches ``[A-Za-z][A-Za-z0-9_]*`` and must not be one of
the reserved words ``true false unknown P X U``.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass

from .errors import FormulaSyntaxError, UnsupportedBoundError
from .tri import Tri, not3


class StateFormula:
    """Base class of state-formula nodes."""


class PathFormula:
    """Base class of path-formula nodes."""


class Bound(enum.Enum):
    GE = ">="
    LT = "<"


@dataclass(frozen=True)
class ProbBound:
    op: Bound
    theta: float

    def __post_init__(self) -> None:
        if not isinstance(self.op, Bound):
            raise ValueError(f"bad bound operator: {self.op!r}")
        if not 0.0 <= self.theta <= 1.0:
            raise ValueError(f"probability bound {self.theta} outside [0, 1]")


@dataclass(frozen=True)
class Const(StateFormula):
    value: Tri


@dataclass(frozen=True)
class Atom(StateFormula):
    name: str


@dataclass(frozen=True)
class Not(StateFormula):
    child: StateFormula


@dataclass(frozen=True)
class And(StateFormula):
    left: StateFormula
    right: StateFormula


@dataclass(frozen=True)
class Or(StateFormula):
    left: StateFormula
    right: StateFormula


@dataclass(frozen=True)
class Prob(StateFormula):
    bound: ProbBound
    path: PathFormula


@dataclass(frozen=True)
class Next(PathFormula):
    arg: StateFormula


@dataclass(frozen=True)
class Until(PathFormula):
    lhs: StateFormula
    rhs: StateFormula


@dataclass(frozen=True)
class BoundedUntil(PathFormula):
    lhs: StateFormula
    rhs: StateFormula
    k: int

    def __post_init__(self) -> None:
        if self.k < 0:
            raise ValueError(f"step bound must be non-negative, got {self.k}")


RESERVED = frozenset({"true", "false", "unknown", "P", "X", "U"})

_CONSTS = {"true": Tri.T, "false": Tri.F, "unknown": Tri.U}


# --------------------------------------------------------------------------
# Lexer / parser
# --------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"(?P<num>\d+\.\d*|\.\d+|\d+)"
    r"|(?P<ident>[A-Za-z][A-Za-z0-9_]*)"
    r"|(?P<op><=|>=|[!&|()\[\]<>])"
)


@dataclass(frozen=True)
class _Token:
    kind: str  # "num" | "ident" | "op" | "end"
    text: str
    pos: int


def _tokenize(text: str) -> list[_Token]:
    out: list[_Token] = []
    i = 0
    while i < len(text):
        if text[i].isspace():
            i += 1
            continue
        m = _TOKEN_RE.match(text, i)
        if m is None:
            raise FormulaSyntaxError(f"unexpected character {text[i]!r}", i)
        kind = m.lastgroup or "op"
        out.append(_Token(kind, m.group(), i))
        i = m.end()
    out.append(_Token("end", "", len(text)))
    return out


_STATE_STARTERS = ("'('", "'!'", "'P'", "'true'", "'false'", "'unknown'", "identifier")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, message: str, expected: tuple[str, ...] = ()) -> FormulaSyntaxError:
        return FormulaSyntaxError(message, self.peek().pos, expected)

    def expect_op(self, op: str) -> _Token:
        tok = self.peek()
        if tok.kind != "op" or tok.text != op:
            raise self.fail(f"got {tok.text!r}" if tok.text else "unexpected end of input",
                            (f"'{op}'",))
        return self.advance()

    # -- grammar -----------------------------------------------------------

    def state(self) -> StateFormula:
        node = self.and_expr()
        while self.peek().kind == "op" and self.peek().text == "|":
            self.advance()
            node = Or(node, self.and_expr())
        return node

    def and_expr(self) -> StateFormula:
        node = self.unary()
        while self.peek().kind == "op" and self.peek().text == "&":
            self.advance()
            node = And(node, self.unary())
        return node

    def unary(self) -> StateFormula:
        tok = self.peek()
        if tok.kind == "op" and tok.text == "!":
            self.advance()
            return Not(self.unary())
        return self.primary()

    def primary(self) -> StateFormula:
        tok = self.peek()
        if tok.kind == "op" and tok.text == "(":
            self.advance()
            node = self.state()
            self.expect_op(")")
            return node
        if tok.kind == "ident":
            if tok.text in _CONSTS:
                self.advance()
                return Const(_CONSTS[tok.text])
            if tok.text == "P":
                self.advance()
                return self.prob_tail()
            if tok.text in RESERVED:
                raise self.fail(f"reserved word {tok.text!r} cannot start a state formula",
                                _STATE_STARTERS)
            self.advance()
            return Atom(tok.text)
        raise self.fail(f"got {tok.text!r}" if tok.text else "unexpected end of input",
                        _STATE_STARTERS)

    def prob_tail(self) -> Prob:
        tok = self.peek()
        if tok.kind != "op" or tok.text not in (">=", "<", ">", "<="):
            raise self.fail("missing probability bound after 'P'", ("'>='", "'<'"))
        if tok.text in (">", "<="):
            raise UnsupportedBoundError(tok.text, tok.pos)
        self.advance()
        num = self.peek()
        if num.kind != "num":
            raise self.fail("missing probability after bound operator", ("number",))
        self.advance()
        theta = float(num.text)
        if not 0.0 <= theta <= 1.0:
            raise FormulaSyntaxError(
                f"probability bound {num.text} outside [0, 1]", num.pos)
        bound = ProbBound(Bound.GE if tok.text == ">=" else Bound.LT, theta)
        self.expect_op("[")
        path = self.path()
        self.expect_op("]")
        return Prob(bound, path)

    def path(self) -> PathFormula:
        tok = self.peek()
        if tok.kind == "ident" and tok.text == "X":
            self.advance()
            return Next(self.state())
        lhs = self.state()
        tok = self.peek()
        if tok.kind != "ident" or tok.text != "U":
            raise self.fail(f"got {tok.text!r}" if tok.text else "unexpected end of input",
                            ("'U'", "'U<='"))
        self.advance()
        tok = self.peek()
        if tok.kind == "op" and tok.text == "<=":
            self.advance()
            num = self.peek()
            if num.kind != "num" or "." in num.text:
                raise self.fail("step bound must be a decimal integer", ("integer",))
            self.advance()
            return BoundedUntil(lhs, self.state(), int(num.text))
        return Until(lhs, self.state())


def parse_formula(text: str) -> StateFormula:
    """Parse a state formula, raising :class:`FormulaSyntaxError` on bad input."""
    parser = _Parser(text)
    node = parser.state()
    tok = parser.peek()
    if tok.kind != "end":
        raise parser.fail(f"trailing input {tok.text!r}", ("end of input",))
    return node


def parse_path_formula(text: str) -> PathFormula:
    """Parse a bare path formula (as used by probability sweeps)."""
    parser = _Parser(text)
    node = parser.path()
    tok = parser.peek()
    if tok.kind != "end":
        raise parser.fail(f"trailing input {tok.text!r}", ("end of input",))
    return node


# --------------------------------------------------------------------------
# Rendering
# --------------------------------------------------------------------------

def _fmt_prob(x: float) -> str:
    return repr(x)


def render_formula(f: StateFormula) -> str:
    """Render a state formula; ``parse_formula`` inverts this exactly."""
    if isinstance(f, Const):
        return {Tri.T: "true", Tri.F: "false", Tri.U: "unknown"}[f.value]
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Not):
        child = render_formula(f.child)
        if isinstance(f.child, (And, Or)):
            child = f"({child})"
        return "!" + child
    if isinstance(f, And):
        left = render_formula(f.left)
        if isinstance(f.left, Or):
            left = f"({left})"
        right = render_formula(f.right)
        if isinstance(f.right, (And, Or)):
            right = f"({right})"
        return f"{left} & {right}"
    if isinstance(f, Or):
        left = render_formula(f.left)
        right = render_formula(f.right)
        if isinstance(f.right, Or):
            right = f"({right})"
        return f"{left} | {right}"
    if isinstance(f, Prob):
        return f"P{f.bound.op.value}{_fmt_prob(f.bound.theta)} [ {render_path(f.path)} ]"
    raise TypeError(f"not a state formula: {f!r}")


def render_path(p: PathFormula) -> str:
    if isinstance(p, Next):
        return f"X {render_formula(p.arg)}"
    if isinstance(p, Until):
        return f"{render_formula(p.lhs)} U {render_formula(p.rhs)}"
    if isinstance(p, BoundedUntil):
        return f"{render_formula(p.lhs)} U<={p.k} {render_formula(p.rhs)}"
    raise TypeError(f"not a path formula: {p!r}")


# --------------------------------------------------------------------------
# Normalization
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class NormalizedFormula:
    """A normal-form formula plus its probabilistic subformulas.

    In the normal form, every ``P<`` bound has been rewritten as the
    negation of a ``P>=`` bound, and negation sits only directly on atoms
    or on probabilistic operators.  ``prob_subformulas`` lists the ``Prob``
    nodes in the order they must be evaluated: innermost first.
    """

    formula: StateFormula
    prob_subformulas: tuple[Prob, ...]


def normalize(f: StateFormula) -> NormalizedFormula:
    g = _push(f, negated=False)
    acc: list[Prob] = []
    _collect_probs(g, acc)
    return NormalizedFormula(g, tuple(acc))


def _push(f: StateFormula, negated: bool) -> StateFormula:
    if isinstance(f, Const):
        return Const(not3(f.value)) if negated else f
    if isinstance(f, Atom):
        return Not(f) if negated else f
    if isinstance(f, Not):
        return _push(f.child, not negated)
    if isinstance(f, And):
        if negated:
            return Or(_push(f.left, True), _push(f.right, True))
        return And(_push(f.left, False), _push(f.right, False))
    if isinstance(f, Or):
        if negated:
            return And(_push(f.left, True), _push(f.right, True))
        return Or(_push(f.left, False), _push(f.right, False))
    if isinstance(f, Prob):
        node: StateFormula = Prob(ProbBound(Bound.GE, f.bound.theta),
                                  _push_path(f.path))
        flip = negated ^ (f.bound.op is Bound.LT)
        return Not(node) if flip else node
    raise TypeError(f"not a state formula: {f!r}")


def _push_path(p: PathFormula) -> PathFormula:
    if isinstance(p, Next):
        return Next(_push(p.arg, False))
    if isinstance(p, Until):
        return Until(_push(p.lhs, False), _push(p.rhs, False))
    if isinstance(p, BoundedUntil):
        return BoundedUntil(_push(p.lhs, False), _push(p.rhs, False), p.k)
    raise TypeError(f"not a path formula: {p!r}")


def _collect_probs(f: StateFormula, acc: list[Prob]) -> None:
    if isinstance(f, (Const, Atom)):
        return
    if isinstance(f, Not):
        _collect_probs(f.child, acc)
        return
    if isinstance(f, (And, Or)):
        _collect_probs(f.left, acc)
        _collect_probs(f.right, acc)
        return
    if isinstance(f, Prob):
        for operand in path_operands(f.path):
            _collect_probs(operand, acc)
        acc.append(f)
        return
    raise TypeError(f"not a state formula: {f!r}")


def path_operands(p: PathFormula) -> tuple[StateFormula, ...]:
    """The state subformulas of a path formula, left to right."""
    if isinstance(p, Next):
        return (p.arg,)
    if isinstance(p, (Until, BoundedUntil)):
        return (p.lhs, p.rhs)
    raise TypeError(f"not a path formula: {p!r}")


def negated_atoms(f: StateFormula) -> frozenset[str]:
    """Names of atoms that occur directly under a negation."""
    acc: set[str] = set()
    _collect_negated(f, acc)
    return frozenset(acc)


def _collect_negated(f: StateFormula, acc: set[str]) -> None:
    if isinstance(f, (Const, Atom)):
        return
    if isinstance(f, Not):
        if isinstance(f.child, Atom):
            acc.add(f.child.name)
        else:
            _collect_negated(f.child, acc)
        return
    if isinstance(f, (And, Or)):
        _collect_negated(f.left, acc)
        _collect_negated(f.right, acc)
        return
    if isinstance(f, Prob):
        for operand in path_operands(f.path):
            _collect_negated(operand, acc)
        return
    raise TypeError(f"not a state formula: {f!r}")


def atom_names(f: StateFormula) -> frozenset[str]:
    """All atom names occurring anywhere in the formula."""
    acc: set[str] = set()

    def walk(g: StateFormula) -> None:
        if isinstance(g, Atom):
            acc.add(g.name)
        elif isinstance(g, Not):
            walk(g.child)
        elif isinstance(g, (And, Or)):
            walk(g.left)
            walk(g.right)
        elif isinstance(g, Prob):
            for operand in path_operands(g.path):
                walk(operand)

    walk(f)
    return frozenset(acc)
