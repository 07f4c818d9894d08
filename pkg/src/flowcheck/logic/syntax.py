"""Concrete syntax for LTL and Flow-LTL formulas.

Operators: ``!``, ``&&``, ``||``, ``->``, ``X``, ``F``, ``G``, ``U``, ``W``,
``A`` and parentheses.  Precedence from tight to loose: unary operators,
``U``/``W``, ``&&``, ``||``, ``->``.  ``U``, ``W`` and ``->`` associate to
the right, ``&&`` and ``||`` to the left.

Atoms are identifiers such as ``sw_v``, ``v.fwd(u)``, ``[p]#1`` or
``t@(>,q)#1``: an identifier may carry balanced parenthesised groups that
follow it without whitespace.  Anything else can be written in double
quotes.
"""
from __future__ import annotations

from dataclasses import dataclass

from .ast import (
    Always,
    And,
    Atom,
    Eventually,
    Flow,
    Implies,
    Ltl,
    Next,
    Not,
    Or,
    RunAnd,
    RunFormula,
    RunImplies,
    RunLtl,
    RunOr,
    TRUE,
    Until,
    WeakUntil,
    false,
    view,
)

KEYWORDS = {"X", "F", "G", "U", "W", "A", "true", "false"}
_IDENT_START = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_[")
_IDENT_BODY = _IDENT_START | set("0123456789.@#:]")


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


class FlowGrammarError(FormulaSyntaxError):
    """A flow operator appears where only plain LTL is allowed."""


@dataclass(frozen=True)
class Token:
    kind: str  # 'op', 'ident', 'end'
    text: str
    pos: int


def _scan_ident(text: str, i: int) -> int:
    """End index of the identifier starting at ``i``."""
    j = i
    n = len(text)
    while j < n:
        c = text[j]
        if c in _IDENT_BODY:
            j += 1
        elif c == "(" and j > i and text[i:j] not in KEYWORDS:
            depth = 0
            k = j
            while k < n:
                if text[k] == "(":
                    depth += 1
                elif text[k] == ")":
                    depth -= 1
                    if depth == 0:
                        break
                elif text[k].isspace():
                    return j
                k += 1
            if depth != 0 or k >= n:
                return j
            j = k + 1
        else:
            break
    return j


def tokenize(text: str) -> list[Token]:
    tokens = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
        elif text.startswith(("&&", "||", "->"), i):
            tokens.append(Token("op", text[i:i + 2], i))
            i += 2
        elif c in "!()":
            tokens.append(Token("op", c, i))
            i += 1
        elif c == '"':
            j = text.find('"', i + 1)
            if j < 0:
                raise FormulaSyntaxError("unterminated quoted name", i)
            if j == i + 1:
                raise FormulaSyntaxError("empty quoted name", i)
            tokens.append(Token("ident", text[i + 1:j], i))
            i = j + 1
        elif c in _IDENT_START:
            j = _scan_ident(text, i)
            word = text[i:j]
            tokens.append(Token("op" if word in KEYWORDS else "ident", word, i))
            i = j
        else:
            raise FormulaSyntaxError(f"unexpected character {c!r}", i)
    tokens.append(Token("end", "", n))
    return tokens


# The parser builds a neutral tree first; Flow-LTL classification happens
# afterwards so that grammar violations get their own error type.


@dataclass
class _Node:
    op: str
    kids: tuple
    pos: int


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self) -> Token:
        return self.tokens[self.i]

    def take(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, text: str) -> Token:
        tok = self.take()
        if tok.kind != "op" or tok.text != text:
            raise FormulaSyntaxError(f"expected {text!r}, found {tok.text or 'end of input'!r}", tok.pos)
        return tok

    def at(self, *ops: str) -> bool:
        tok = self.peek()
        return tok.kind == "op" and tok.text in ops

    def parse(self) -> _Node:
        node = self.implication()
        tok = self.peek()
        if tok.kind != "end":
            raise FormulaSyntaxError(f"unexpected {tok.text!r}", tok.pos)
        return node

    def implication(self) -> _Node:
        left = self.disjunction()
        if self.at("->"):
            tok = self.take()
            return _Node("->", (left, self.implication()), tok.pos)
        return left

    def disjunction(self) -> _Node:
        left = self.conjunction()
        while self.at("||"):
            tok = self.take()
            left = _Node("||", (left, self.conjunction()), tok.pos)
        return left

    def conjunction(self) -> _Node:
        left = self.temporal()
        while self.at("&&"):
            tok = self.take()
            left = _Node("&&", (left, self.temporal()), tok.pos)
        return left

    def temporal(self) -> _Node:
        left = self.unary()
        if self.at("U", "W"):
            tok = self.take()
            return _Node(tok.text, (left, self.temporal()), tok.pos)
        return left

    def unary(self) -> _Node:
        tok = self.peek()
        if tok.kind == "op" and tok.text in ("!", "X", "F", "G", "A"):
            self.take()
            return _Node(tok.text, (self.unary(),), tok.pos)
        return self.primary()

    def primary(self) -> _Node:
        tok = self.take()
        if tok.kind == "ident":
            return _Node("atom", (tok.text,), tok.pos)
        if tok.kind == "op" and tok.text in ("true", "false"):
            return _Node(tok.text, (), tok.pos)
        if tok.kind == "op" and tok.text == "(":
            node = self.implication()
            self.expect(")")
            return node
        raise FormulaSyntaxError(f"unexpected {tok.text or 'end of input'!r}", tok.pos)


_LTL_BUILD = {
    "!": Not,
    "X": Next,
    "F": Eventually,
    "G": Always,
    "&&": And,
    "||": Or,
    "->": Implies,
    "U": Until,
    "W": WeakUntil,
}


def _to_ltl(node: _Node) -> Ltl:
    if node.op == "atom":
        return Atom(node.kids[0])
    if node.op == "true":
        return TRUE
    if node.op == "false":
        return false()
    if node.op == "A":
        raise FlowGrammarError("flow operator 'A' is not allowed inside an LTL formula", node.pos)
    return _LTL_BUILD[node.op](*(_to_ltl(k) for k in node.kids))


def _has_flow(node: _Node) -> bool:
    if node.op == "A":
        return True
    return node.op != "atom" and any(_has_flow(k) for k in node.kids)


def _to_run(node: _Node) -> RunFormula:
    if not _has_flow(node):
        return RunLtl(_to_ltl(node))
    if node.op == "A":
        return Flow(_to_ltl(node.kids[0]))
    if node.op == "&&":
        return RunAnd(_to_run(node.kids[0]), _to_run(node.kids[1]))
    if node.op == "||":
        return RunOr(_to_run(node.kids[0]), _to_run(node.kids[1]))
    if node.op == "->":
        if _has_flow(node.kids[0]):
            raise FlowGrammarError("the antecedent of '->' must be an LTL formula", node.pos)
        return RunImplies(_to_ltl(node.kids[0]), _to_run(node.kids[1]))
    raise FlowGrammarError(f"flow operator 'A' is not allowed below {node.op!r}", node.pos)


def parse_ltl(text: str) -> Ltl:
    return _to_ltl(_Parser(text).parse())


def parse_flow_ltl(text: str) -> RunFormula:
    return _to_run(_Parser(text).parse())


# printing

_BINARY = {"&&", "||", "->", "U", "W"}


def format_atom(name: str) -> str:
    if name not in KEYWORDS and name and name[0] in _IDENT_START and _scan_ident(name, 0) == len(name):
        return name
    if '"' in name:
        raise ValueError(f"atom {name!r} cannot be printed")
    return f'"{name}"'


def _operand(f: Ltl) -> str:
    op, _ = view(f)
    text = format_ltl(f)
    return f"({text})" if op in _BINARY else text


def format_ltl(f: Ltl) -> str:
    op, kids = view(f)
    if op == "atom":
        return format_atom(kids[0])
    if op in ("true", "false"):
        return op
    if op == "!":
        return "!" + _operand(kids[0])
    if op in ("X", "F", "G"):
        return f"{op} {_operand(kids[0])}"
    return f"{_operand(kids[0])} {op} {_operand(kids[1])}"


def _run_operand(phi: RunFormula) -> str:
    text = format_formula(phi)
    if isinstance(phi, (RunAnd, RunOr, RunImplies)):
        return f"({text})"
    if isinstance(phi, RunLtl) and view(phi.formula)[0] in _BINARY:
        return f"({text})"
    return text


def format_formula(phi) -> str:
    """Print an LTL or Flow-LTL formula."""
    if isinstance(phi, Ltl):
        return format_ltl(phi)
    if isinstance(phi, RunLtl):
        return format_ltl(phi.formula)
    if isinstance(phi, Flow):
        return f"A {_operand(phi.formula)}"
    if isinstance(phi, RunAnd):
        return f"{_run_operand(phi.left)} && {_run_operand(phi.right)}"
    if isinstance(phi, RunOr):
        return f"{_run_operand(phi.left)} || {_run_operand(phi.right)}"
    if isinstance(phi, RunImplies):
        return f"{_operand(phi.antecedent)} -> {_run_operand(phi.consequent)}"
    raise TypeError(phi)
