"""Kripke x automaton products built while the search explores them.

The tableau for the negated formula is never built as a whole.  A product
state pairs a Kripke state with a tableau node expanded under that state's
label, so propositions are decided instead of guessed.  Only nodes that the
search reaches get expanded.
"""
from __future__ import annotations

from typing import Callable

from ..logic.ast import Ltl
from .buchi import split_obligations
from .kripke import Kripke


class LetterProduct:
    """Product with the automaton of ``phi`` (usually a negated property).

    States are ``(kripke state, (node, counter))``.  A node is a pair
    ``(pending untils, next obligations)``; the counter runs over the
    acceptance conditions (one per until, one per letter condition).
    """

    def __init__(self, kripke: Kripke, phi: Ltl):
        self.k = kripke
        self.nnf, self.root, letters = split_obligations(phi)
        nodes = self.nnf.nodes
        self.untils = [x for x in _reachable(nodes, self.root) if nodes[x][0] == "U"]
        self.letters: list[Callable] = [kripke.compile(e) for e in letters]
        self.m = len(self.untils) + len(self.letters)
        self._pred: dict[int, Callable] = {}
        self._node_ids: dict[tuple[frozenset, frozenset], int] = {}
        self.node_list: list[tuple[frozenset, frozenset]] = []
        self._expand_cache: dict[tuple[frozenset, object], list[int]] = {}

    # tableau ------------------------------------------------------------------

    def _holds(self, x: int, s) -> bool:
        f = self._pred.get(x)
        if f is None:
            f = self._pred[x] = self.k.compile(self.nnf.nodes[x][1])
        return f(s)

    def _intern(self, pending: frozenset, nxt: frozenset) -> int:
        key = (pending, nxt)
        got = self._node_ids.get(key)
        if got is None:
            got = self._node_ids[key] = len(self.node_list)
            self.node_list.append(key)
        return got

    def expand(self, obligations: frozenset, s) -> list[int]:
        """Nodes that discharge ``obligations`` at ``s``, minimal ones only."""
        key = (obligations, s)
        got = self._expand_cache.get(key)
        if got is not None:
            return got
        nodes = self.nnf.nodes
        outcomes: set[tuple[frozenset, frozenset]] = set()
        stack = [(set(obligations), set(), set())]
        while stack:
            new, old, nxt = stack.pop()
            if not new:
                pending = frozenset(x for x in old if nodes[x][0] == "U" and nodes[x][2] not in old)
                outcomes.add((pending, frozenset(nxt)))
                continue
            eta = new.pop()
            if eta in old:
                stack.append((new, old, nxt))
                continue
            node = nodes[eta]
            op = node[0]
            if op == "false" or (op == "prop" and not self._holds(eta, s)):
                continue
            old.add(eta)
            if op == "and":
                new.update(c for c in node[1:] if c not in old)
                stack.append((new, old, nxt))
            elif op == "X":
                nxt.add(node[1])
                stack.append((new, old, nxt))
            elif op in ("true", "prop"):
                stack.append((new, old, nxt))
            elif op == "or":
                if node[1] in old or node[2] in old:
                    stack.append((new, old, nxt))
                    continue
                stack.append((new | {node[2]}, set(old), set(nxt)))
                stack.append((new | {node[1]}, old, nxt))
            elif op == "U":
                stack.append((new | {node[1]}, set(old), nxt | {eta}))
                stack.append((new | {node[2]}, old, nxt))
            else:  # R
                stack.append((new | {node[2]}, set(old), nxt | {eta}))
                stack.append((new | {node[1], node[2]}, old, nxt))
        # fewer obligations can follow every run of more obligations
        minimal = [
            a for a in outcomes
            if not any(b != a and b[0] <= a[0] and b[1] <= a[1] for b in outcomes)
        ]
        got = [self._intern(p, n) for p, n in sorted(minimal, key=_order)]
        self._expand_cache[key] = got
        return got

    # acceptance ---------------------------------------------------------------

    def _advance(self, s, node: int, counter: int) -> int:
        """Counter after the conditions met at ``(s, node)``, or ``m`` on acceptance."""
        pending = self.node_list[node][0]
        k = len(self.untils)
        while counter < self.m:
            if counter < k:
                ok = self.untils[counter] not in pending
            else:
                ok = self.letters[counter - k](s)
            if not ok:
                break
            counter += 1
        return counter

    # product interface --------------------------------------------------------

    def initial(self) -> list[tuple]:
        start = frozenset([self.root])
        return [(s, (n, 0)) for s in self.k.initial_states() for n in self.expand(start, s)]

    def successors(self, state: tuple) -> list[tuple]:
        s, (node, counter) = state
        reached = self._advance(s, node, counter)
        counter2 = 0 if reached >= self.m else reached
        nxt = self.node_list[node][1]
        return [(s2, (n, counter2)) for s2 in self.k.successors(s) for n in self.expand(nxt, s2)]

    def accepting(self, state: tuple) -> bool:
        s, (node, counter) = state
        return self.m == 0 or self._advance(s, node, counter) >= self.m


def _order(outcome):
    return (len(outcome[0]) + len(outcome[1]), sorted(outcome[0]), sorted(outcome[1]))


def _reachable(nodes: list[tuple], root: int) -> list[int]:
    seen = {root}
    stack = [root]
    while stack:
        node = nodes[stack.pop()]
        if node[0] in ("and", "or", "X", "U", "R"):
            for c in node[1:]:
                if c not in seen:
                    seen.add(c)
                    stack.append(c)
    return sorted(seen)


__all__ = ["LetterProduct"]
