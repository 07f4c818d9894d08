"""LTL to Büchi automata by tableau expansion and degeneralisation.

Maximal propositional subformulas become predicates, so large disjunctions
over transitions stay single guard literals.  Top-level conjuncts that are
equivalent to ``G F p`` for a propositional ``p`` bypass the tableau and
become extra acceptance conditions on letters.

States are labelled: the guard of a state constrains the letter read while
the automaton is in it.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..logic.ast import Ltl, Not, dag
from . import prop
from .prop import Expr


@dataclass(frozen=True)
class BuchiAutomaton:
    """``guards[q]`` is a propositional expression over atoms."""

    states: tuple[int, ...]
    initial: tuple[int, ...]
    succ: dict[int, tuple[int, ...]]
    guards: dict[int, Expr]
    accepting: frozenset[int]

    def __len__(self) -> int:
        return len(self.states)


class _Nnf:
    """Hash-consed negation normal form over propositional leaves."""

    def __init__(self):
        self.nodes: list[tuple] = []
        self.index: dict[tuple, int] = {}

    def mk(self, *key) -> int:
        op = key[0]
        if op in ("and", "or"):
            a, b = key[1], key[2]
            unit, zero = ("true", "false") if op == "and" else ("false", "true")
            if self.nodes[a][0] == zero or self.nodes[b][0] == zero:
                return self.mk(zero)
            if self.nodes[a][0] == unit:
                return b
            if self.nodes[b][0] == unit:
                return a
            if a == b:
                return a
        if op == "prop":
            e = key[1]
            if e == prop.TRUE_E:
                return self.mk("true")
            if e == prop.FALSE_E:
                return self.mk("false")
        if key not in self.index:
            self.index[key] = len(self.nodes)
            self.nodes.append(key)
        return self.index[key]


def _propositional(nodes: list[tuple]) -> list[bool]:
    flags = []
    for node in nodes:
        op = node[0]
        if op in ("X", "U"):
            flags.append(False)
        elif op in ("true", "atom"):
            flags.append(True)
        else:
            flags.append(all(flags[c] for c in node[1:]))
    return flags


def _to_nnf(phi: Ltl) -> tuple[_Nnf, int]:
    nodes = dag(phi)
    is_prop = _propositional(nodes)
    nnf = _Nnf()
    memo: dict[tuple[int, bool], int] = {}
    core_memo: dict = {}

    def go(idx: int, pos: bool) -> int:
        key = (idx, pos)
        if key in memo:
            return memo[key]
        node = nodes[idx]
        op = node[0]
        if is_prop[idx]:
            e = prop.from_core(nodes, idx, core_memo)
            out = nnf.mk("prop", e if pos else prop.negate(e))
        elif op == "!":
            out = go(node[1], not pos)
        elif op == "&&":
            out = nnf.mk("and" if pos else "or", go(node[1], pos), go(node[2], pos))
        elif op == "X":
            out = nnf.mk("X", go(node[1], pos))
        else:
            out = nnf.mk("U" if pos else "R", go(node[1], pos), go(node[2], pos))
        memo[key] = out
        return out

    return nnf, go(len(nodes) - 1, True)


def _conjuncts(nnf: _Nnf, x: int) -> list[int]:
    node = nnf.nodes[x]
    if node[0] == "and":
        return _conjuncts(nnf, node[1]) + _conjuncts(nnf, node[2])
    return [x]


def _infinitely(nnf: _Nnf, x: int) -> Expr | None:
    """``p`` with ``G F x == G F p``, if one is found syntactically."""
    node = nnf.nodes[x]
    op = node[0]
    if op == "prop":
        return node[1]
    if op == "true":
        return prop.TRUE_E
    if op == "X":
        return _infinitely(nnf, node[1])
    if op == "U":
        return _infinitely(nnf, node[2])
    if op == "or":
        a, b = _infinitely(nnf, node[1]), _infinitely(nnf, node[2])
        return None if a is None or b is None else prop.mk_or([a, b])
    return None


def _always_eventually(nnf: _Nnf, x: int) -> Expr | None:
    node = nnf.nodes[x]
    if node[0] == "R" and nnf.nodes[node[1]][0] == "false":
        inner = nnf.nodes[node[2]]
        # G (a U b) is only G F b when a is true
        if inner[0] == "U" and nnf.nodes[inner[1]][0] == "true":
            return _infinitely(nnf, inner[2])
    if node[0] == "or":
        a, b = _always_eventually(nnf, node[1]), _always_eventually(nnf, node[2])
        if a is not None and b is not None:
            return prop.mk_or([a, b])
    return None


@dataclass
class _Node:
    incoming: set
    new: set
    old: set
    nxt: set


def _tableau(nnf: _Nnf, root: int):
    """Gerth-Peled-Vardi-Wolper expansion; returns (nodes, initial ids).

    A finished node is ``(literals, pending untils, next obligations,
    incoming)``.  Nodes are merged when these agree, since guard, acceptance
    and successors only depend on them.
    """
    INIT = -1
    done: list[tuple[frozenset, frozenset, frozenset, set]] = []
    by_key: dict[tuple[frozenset, frozenset, frozenset], int] = {}
    stack = [_Node({INIT}, {root}, set(), set())]
    nodes = nnf.nodes
    complement: dict[int, int] = {}
    consistent: dict[frozenset, bool] = {}

    def opposite(x: int) -> int:
        if x not in complement:
            complement[x] = nnf.mk("prop", prop.negate(nodes[x][1]))
        return complement[x]

    while stack:
        nd = stack.pop()
        if not nd.new:
            literals = frozenset(x for x in nd.old if nodes[x][0] == "prop")
            if literals not in consistent:
                consistent[literals] = prop.satisfiable(prop.mk_and(nodes[x][1] for x in literals))
            if not consistent[literals]:
                continue
            pending = frozenset(
                x for x in nd.old if nodes[x][0] == "U" and nodes[x][2] not in nd.old
            )
            key = (literals, pending, frozenset(nd.nxt))
            if key in by_key:
                done[by_key[key]][3].update(nd.incoming)
                continue
            by_key[key] = len(done)
            done.append((*key, set(nd.incoming)))
            stack.append(_Node({by_key[key]}, set(key[2]), set(), set()))
            continue
        eta = nd.new.pop()
        if eta in nd.old:
            stack.append(nd)
            continue
        node = nodes[eta]
        op = node[0]
        if op == "false":
            continue
        if op == "prop" and opposite(eta) in nd.old:
            continue
        if op in ("true", "prop"):
            nd.old.add(eta)
            stack.append(nd)
        elif op == "and":
            nd.old.add(eta)
            nd.new |= {c for c in node[1:] if c not in nd.old}
            stack.append(nd)
        elif op == "X":
            nd.old.add(eta)
            nd.nxt.add(node[1])
            stack.append(nd)
        else:
            if op == "or":
                first, second = ({node[1]}, set()), ({node[2]}, set())
            elif op == "U":
                first, second = ({node[1]}, {eta}), ({node[2]}, set())
            else:  # R
                first, second = ({node[2]}, {eta}), ({node[1], node[2]}, set())
            for extra_new, extra_next in (second, first):
                stack.append(
                    _Node(
                        set(nd.incoming),
                        nd.new | {c for c in extra_new if c not in nd.old},
                        nd.old | {eta},
                        nd.nxt | extra_next,
                    )
                )
    initial = [k for k, entry in enumerate(done) if INIT in entry[3]]
    return done, initial


def split_obligations(phi: Ltl) -> tuple[_Nnf, int, list[Expr]]:
    """NNF of ``phi`` as a tableau root plus letter conditions seen infinitely often."""
    nnf, root = _to_nnf(phi)
    letter_conditions: list[Expr] = []
    rest: list[int] = []
    for c in _conjuncts(nnf, root):
        p = _always_eventually(nnf, c)
        if p is None:
            rest.append(c)
        elif p != prop.TRUE_E:
            letter_conditions.append(p)
    body = nnf.mk("true")
    for c in rest:
        body = nnf.mk("and", body, c)
    return nnf, body, letter_conditions


def ltl_to_buchi(phi: Ltl) -> BuchiAutomaton:
    nnf, body, letter_conditions = split_obligations(phi)
    done, initial = _tableau(nnf, body)

    guards = [prop.mk_and(nnf.nodes[x][1] for x in literals) for literals, _, _, _ in done]
    untils = sorted({u for _, pending, _, _ in done for u in pending})
    # one acceptance condition per until that can stay pending, then the letter ones
    node_conditions = [{k for k, entry in enumerate(done) if u not in entry[1]} for u in untils]
    m = len(node_conditions) + len(letter_conditions)
    succ_nodes: dict[int, list[int]] = {k: [] for k in range(len(done))}
    for k, entry in enumerate(done):
        for src in entry[3]:
            if src >= 0:
                succ_nodes[src].append(k)

    # degeneralise: state = (node, counter, flag)
    ids: dict[tuple[int, int, int], int] = {}
    key_of: list[tuple[int, int, int]] = []
    state_guard: list[Expr] = []
    sat_cache: dict[Expr, bool] = {}

    def variants(node: int, counter: int):
        if m == 0:
            yield 1, guards[node]
        elif counter < len(node_conditions):
            yield (1 if node in node_conditions[counter] else 0), guards[node]
        else:
            cond = letter_conditions[counter - len(node_conditions)]
            yield 1, prop.mk_and([guards[node], cond])
            yield 0, prop.mk_and([guards[node], prop.negate(cond)])

    def states_for(node: int, counter: int) -> list[int]:
        out = []
        for flag, g in variants(node, counter):
            if g not in sat_cache:
                sat_cache[g] = prop.satisfiable(g)
            if not sat_cache[g]:
                continue
            key = (node, counter, flag)
            if key not in ids:
                ids[key] = len(key_of)
                key_of.append(key)
                state_guard.append(g)
            out.append(ids[key])
        return out

    init_states: list[int] = []
    for node in initial:
        init_states += states_for(node, 0)
    succ: dict[int, tuple[int, ...]] = {}
    work = list(init_states)
    seen = set(work)
    while work:
        q = work.pop()
        node, counter, flag = key_of[q]
        nxt_counter = 0 if m == 0 else (counter + flag) % m
        out = []
        for node2 in succ_nodes[node]:
            for q2 in states_for(node2, nxt_counter):
                out.append(q2)
                if q2 not in seen:
                    seen.add(q2)
                    work.append(q2)
        succ[q] = tuple(out)
    accepting = frozenset(
        q for q in seen if m == 0 or (key_of[q][2] == 1 and key_of[q][1] == m - 1)
    )
    states = tuple(sorted(seen))
    return BuchiAutomaton(
        states, tuple(init_states), succ, {q: state_guard[q] for q in states}, accepting
    )


def negation_automaton(phi: Ltl) -> BuchiAutomaton:
    return ltl_to_buchi(Not(phi))
