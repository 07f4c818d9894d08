"""LTL and Flow-LTL syntax trees.

The LTL core is ``true | atom | ! | && | X | U``.  Derived operators build
core nodes but remember how they were written (``sugar``) so that printing
gives back the original spelling.  Equality and hashing ignore ``sugar``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterator


@dataclass(frozen=True)
class Ltl:
    sugar: tuple | None = field(default=None, compare=False, repr=False, kw_only=True)


@dataclass(frozen=True)
class TrueF(Ltl):
    pass


@dataclass(frozen=True)
class Atom(Ltl):
    name: str


@dataclass(frozen=True)
class Not(Ltl):
    arg: Ltl


@dataclass(frozen=True)
class And(Ltl):
    left: Ltl
    right: Ltl


@dataclass(frozen=True)
class Next(Ltl):
    arg: Ltl


@dataclass(frozen=True)
class Until(Ltl):
    left: Ltl
    right: Ltl


TRUE = TrueF()


def false() -> Ltl:
    return Not(TRUE, sugar=("false", ()))


def Or(a: Ltl, b: Ltl) -> Ltl:
    return Not(And(Not(a), Not(b)), sugar=("||", (a, b)))


def Implies(a: Ltl, b: Ltl) -> Ltl:
    return Not(And(a, Not(b)), sugar=("->", (a, b)))


def Eventually(a: Ltl) -> Ltl:
    return Until(TRUE, a, sugar=("F", (a,)))


def Always(a: Ltl) -> Ltl:
    return Not(Until(TRUE, Not(a)), sugar=("G", (a,)))


def WeakUntil(a: Ltl, b: Ltl) -> Ltl:
    core = Or(Always(a), Until(a, b))
    return Not(core.arg, sugar=("W", (a, b)))


def disjunction(items: list[Ltl]) -> Ltl:
    """Right-nested disjunction; the empty disjunction is ``false``."""
    if not items:
        return false()
    out = items[-1]
    for item in reversed(items[:-1]):
        out = Or(item, out)
    return out


def conjunction(items: list[Ltl]) -> Ltl:
    if not items:
        return TRUE
    out = items[-1]
    for item in reversed(items[:-1]):
        out = And(item, out)
    return out


# sugar-level view: (operator, children) with derived operators kept intact

_CORE_OPS = {TrueF: "true", Atom: "atom", Not: "!", And: "&&", Next: "X", Until: "U"}

BUILDERS: dict[str, Callable[..., Ltl]] = {
    "true": lambda: TRUE,
    "false": false,
    "!": Not,
    "&&": And,
    "X": Next,
    "U": Until,
    "||": Or,
    "->": Implies,
    "F": Eventually,
    "G": Always,
    "W": WeakUntil,
}


def view(f: Ltl) -> tuple[str, tuple]:
    if f.sugar is not None:
        return f.sugar
    if isinstance(f, Atom):
        return "atom", (f.name,)
    if isinstance(f, (Not, Next)):
        return _CORE_OPS[type(f)], (f.arg,)
    if isinstance(f, (And, Until)):
        return _CORE_OPS[type(f)], (f.left, f.right)
    return "true", ()


def rebuild(op: str, children: tuple) -> Ltl:
    if op == "atom":
        return Atom(children[0])
    return BUILDERS[op](*children)


def map_view(f: Ltl, fn: Callable[[Ltl], Ltl | None]) -> Ltl:
    """Bottom-up rewrite over the sugar-level tree.

    ``fn`` sees each node after its children were rewritten and returns a
    replacement or ``None`` to keep it.
    """
    op, kids = view(f)
    if op != "atom":
        new = tuple(map_view(k, fn) for k in kids)
        if any(a is not b for a, b in zip(new, kids)):
            f = rebuild(op, new)
    out = fn(f)
    return f if out is None else out


def core_children(f: Ltl) -> tuple[Ltl, ...]:
    if isinstance(f, (Not, Next)):
        return (f.arg,)
    if isinstance(f, (And, Until)):
        return (f.left, f.right)
    return ()


def walk_core(f: Ltl) -> Iterator[Ltl]:
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        stack.extend(core_children(g))


def atoms(f: Ltl) -> set[str]:
    return {g.name for g in walk_core(f) if isinstance(g, Atom)}


def size(f) -> int:
    """Number of core nodes (derived operators count by their expansion)."""
    if isinstance(f, Ltl):
        return sum(1 for _ in walk_core(f))
    return f.size()


def rename_atoms(f: Ltl, mapping: Callable[[str], str]) -> Ltl:
    def fn(g: Ltl):
        if isinstance(g, Atom):
            return Atom(mapping(g.name))
        return None

    return map_view(f, fn)


# Flow-LTL run formulas


@dataclass(frozen=True)
class RunFormula:
    def size(self) -> int:
        raise NotImplementedError


@dataclass(frozen=True)
class RunLtl(RunFormula):
    formula: Ltl

    def size(self) -> int:
        return size(self.formula)


@dataclass(frozen=True)
class RunAnd(RunFormula):
    left: RunFormula
    right: RunFormula

    def size(self) -> int:
        return 1 + self.left.size() + self.right.size()


@dataclass(frozen=True)
class RunOr(RunFormula):
    left: RunFormula
    right: RunFormula

    def size(self) -> int:
        return 1 + self.left.size() + self.right.size()


@dataclass(frozen=True)
class RunImplies(RunFormula):
    antecedent: Ltl
    consequent: RunFormula

    def size(self) -> int:
        return 1 + size(self.antecedent) + self.consequent.size()


@dataclass(frozen=True)
class Flow(RunFormula):
    """``A formula``: the formula holds on every flow chain."""

    formula: Ltl

    def size(self) -> int:
        return 1 + size(self.formula)


def flow_subformulas(phi: RunFormula) -> list[Flow]:
    """Flow subformulas in textual (left-to-right) occurrence order."""
    if isinstance(phi, Flow):
        return [phi]
    if isinstance(phi, (RunAnd, RunOr)):
        return flow_subformulas(phi.left) + flow_subformulas(phi.right)
    if isinstance(phi, RunImplies):
        return flow_subformulas(phi.consequent)
    return []


def run_atoms(phi: RunFormula) -> set[str]:
    if isinstance(phi, (RunLtl, Flow)):
        return atoms(phi.formula)
    if isinstance(phi, (RunAnd, RunOr)):
        return run_atoms(phi.left) | run_atoms(phi.right)
    if isinstance(phi, RunImplies):
        return atoms(phi.antecedent) | run_atoms(phi.consequent)
    raise TypeError(phi)


def dag(f: Ltl) -> list[tuple]:
    """Hash-consed core nodes in children-first order; the root is last.

    Nodes are ``("true",)``, ``("atom", name)``, ``("!", a)``, ``("&&", a, b)``,
    ``("X", a)`` and ``("U", a, b)`` with child indices ``a``, ``b``.
    """
    nodes: list[tuple] = []
    index: dict[tuple, int] = {}
    by_id: dict[int, int] = {}
    stack: list[tuple[Ltl, bool]] = [(f, False)]
    keep = []  # keeps visited objects alive so their ids stay unique
    while stack:
        g, ready = stack.pop()
        if id(g) in by_id:
            continue
        kids = core_children(g)
        if not ready:
            stack.append((g, True))
            stack.extend((k, False) for k in kids if id(k) not in by_id)
            continue
        if isinstance(g, Atom):
            key = ("atom", g.name)
        elif isinstance(g, TrueF):
            key = ("true",)
        else:
            key = (_CORE_OPS[type(g)], *(by_id[id(k)] for k in kids))
        if key not in index:
            index[key] = len(nodes)
            nodes.append(key)
        by_id[id(g)] = index[key]
        keep.append(g)
    # a formula never equals one of its proper subformulas, so the root is last
    return nodes


def dag_size(f: Ltl) -> int:
    """Number of distinct core subformulas."""
    return len(dag(f))
