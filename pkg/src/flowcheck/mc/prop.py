"""Propositional formulas over atoms: normal form, evaluation, SAT, compilation.

An expression is one of ``("const", bool)``, ``("atom", name)``,
``("not", e)``, ``("and", (e, ...))`` or ``("or", (e, ...))``; conjunctions
and disjunctions are flattened.
"""
from __future__ import annotations

from typing import Callable, Iterable, Optional

Expr = tuple

TRUE_E: Expr = ("const", True)
FALSE_E: Expr = ("const", False)


def from_core(nodes: list[tuple], idx: int, memo: Optional[dict] = None) -> Expr:
    """Normal form of core DAG node ``idx`` (which must be propositional)."""
    memo = {} if memo is None else memo
    if idx in memo:
        return memo[idx]
    node = nodes[idx]
    op = node[0]
    if op == "true":
        out = TRUE_E
    elif op == "atom":
        out = ("atom", node[1])
    elif op == "&&":
        out = mk_and([from_core(nodes, node[1], memo), from_core(nodes, node[2], memo)])
    elif op == "!":
        child = nodes[node[1]]
        if child[0] == "&&":
            # !(a && b) == !a || !b keeps disjunctions flat
            out = mk_or([negate(from_core(nodes, child[1], memo)), negate(from_core(nodes, child[2], memo))])
        else:
            out = negate(from_core(nodes, node[1], memo))
    else:
        raise ValueError(f"not propositional: {op}")
    memo[idx] = out
    return out


def negate(e: Expr) -> Expr:
    op = e[0]
    if op == "const":
        return ("const", not e[1])
    if op == "not":
        return e[1]
    if op == "and":
        return mk_or([negate(x) for x in e[1]])
    if op == "or":
        return mk_and([negate(x) for x in e[1]])
    return ("not", e)


def _flat(kind: str, items: Iterable[Expr]) -> list[Expr]:
    out: list[Expr] = []
    for x in items:
        if x[0] == kind:
            out.extend(x[1])
        else:
            out.append(x)
    return out


def mk_and(items: Iterable[Expr]) -> Expr:
    parts = []
    for x in _flat("and", items):
        if x == FALSE_E:
            return FALSE_E
        if x != TRUE_E and x not in parts:
            parts.append(x)
    if not parts:
        return TRUE_E
    return parts[0] if len(parts) == 1 else ("and", tuple(parts))


def mk_or(items: Iterable[Expr]) -> Expr:
    parts = []
    for x in _flat("or", items):
        if x == TRUE_E:
            return TRUE_E
        if x != FALSE_E and x not in parts:
            parts.append(x)
    if not parts:
        return FALSE_E
    return parts[0] if len(parts) == 1 else ("or", tuple(parts))


def evaluate(e: Expr, holds: Callable[[str], Optional[bool]]) -> Optional[bool]:
    """Three-valued evaluation; ``holds`` may return None for unknown atoms."""
    op = e[0]
    if op == "const":
        return e[1]
    if op == "atom":
        return holds(e[1])
    if op == "not":
        v = evaluate(e[1], holds)
        return None if v is None else not v
    unknown = False
    absorbing = op == "or"
    for x in e[1]:
        v = evaluate(x, holds)
        if v is None:
            unknown = True
        elif v == absorbing:
            return absorbing
    return None if unknown else not absorbing


def atoms_of(e: Expr, acc: Optional[set] = None) -> set[str]:
    acc = set() if acc is None else acc
    if e[0] == "atom":
        acc.add(e[1])
    elif e[0] == "not":
        atoms_of(e[1], acc)
    elif e[0] in ("and", "or"):
        for x in e[1]:
            atoms_of(x, acc)
    return acc


def satisfiable(e: Expr) -> bool:
    """Shannon expansion with three-valued pruning."""
    names = sorted(atoms_of(e))
    assignment: dict[str, bool] = {}

    def go(k: int) -> bool:
        v = evaluate(e, assignment.get)
        if v is not None:
            return v
        for b in (True, False):
            assignment[names[k]] = b
            if go(k + 1):
                return True
        del assignment[names[k]]
        return False

    return go(0)


def compile_expr(
    e: Expr,
    any_code: Callable[[list[str]], str],
    all_code: Callable[[list[str]], str],
    arg: str = "s",
    env: Optional[dict] = None,
) -> Callable:
    """Compile to ``lambda s: ...`` using state-specific code for atom groups.

    ``any_code(names)``/``all_code(names)`` return a Python expression that
    holds iff some/every atom in ``names`` holds; they may store constants in
    the shared ``env``.
    """
    env = {} if env is None else env

    def code(x: Expr) -> str:
        op = x[0]
        if op == "const":
            return "True" if x[1] else "False"
        if op == "atom":
            return any_code([x[1]])
        if op == "not":
            return f"(not {code(x[1])})"
        atoms = [y[1] for y in x[1] if y[0] == "atom"]
        rest = [code(y) for y in x[1] if y[0] != "atom"]
        parts = ([any_code(atoms) if op == "or" else all_code(atoms)] if atoms else []) + rest
        joiner = " or " if op == "or" else " and "
        return "(" + joiner.join(parts) + ")"

    return eval(f"lambda {arg}: {code(e)}", env)


def label_any(env: dict, names: list[str]) -> str:
    key = f"_c{len(env)}"
    env[key] = frozenset(names)
    return f"(not {key}.isdisjoint(s))"


def label_all(env: dict, names: list[str]) -> str:
    key = f"_c{len(env)}"
    env[key] = frozenset(names)
    return f"({key} <= s)"


def compile_on_labels(e: Expr) -> Callable[[frozenset], bool]:
    """Compile for states that are plain sets of atoms."""
    env: dict = {}
    return compile_expr(e, lambda ns: label_any(env, ns), lambda ns: label_all(env, ns), env=env)
