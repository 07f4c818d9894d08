"""Emptiness of Kripke x Büchi products by nested depth-first search."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Optional

from .buchi import BuchiAutomaton
from .kripke import Kripke

DEFAULT_STATE_CAP = 2_000_000


class StateCapExceeded(Exception):
    def __init__(self, cap: int):
        super().__init__(f"state cap of {cap} product states exceeded")
        self.cap = cap


@dataclass(frozen=True)
class Lasso:
    """Kripke states of an accepting run: ``states[loop:]`` repeats forever."""

    states: tuple
    loop: int


class Product:
    def __init__(self, kripke: Kripke, automaton: BuchiAutomaton):
        self.k = kripke
        self.a = automaton
        self.guard = {q: kripke.compile(g) for q, g in automaton.guards.items()}

    def initial(self) -> list[tuple]:
        out = []
        for s in self.k.initial_states():
            for q in self.a.initial:
                if self.guard[q](s):
                    out.append((s, q))
        return out

    def successors(self, state: tuple) -> list[tuple]:
        s, q = state
        qs = self.a.succ[q]
        out = []
        for s2 in self.k.successors(s):
            for q2 in qs:
                if self.guard[q2](s2):
                    out.append((s2, q2))
        return out

    def accepting(self, state: tuple) -> bool:
        return state[1] in self.a.accepting


def find_accepting_lasso(product: Product, cap: int = DEFAULT_STATE_CAP) -> Optional[Lasso]:
    """Nested DFS; the red search stops at any state on the blue stack."""
    blue: set = set()
    red: set = set()
    on_stack: dict[Hashable, int] = {}
    successors = product.successors

    for root in product.initial():
        if root in blue:
            continue
        path: list = [root]
        iters = [iter(successors(root))]
        blue.add(root)
        on_stack[root] = 0
        while path:
            nxt = next(iters[-1], None)
            if nxt is not None:
                if nxt not in blue:
                    if len(blue) >= cap:
                        raise StateCapExceeded(cap)
                    blue.add(nxt)
                    on_stack[nxt] = len(path)
                    path.append(nxt)
                    iters.append(iter(successors(nxt)))
                continue
            top = path[-1]
            if product.accepting(top):
                found = _red_search(top, successors, red, on_stack)
                if found is not None:
                    target, red_path = found
                    # blue stack from target to the seed, then the red path back
                    cycle = path[on_stack[target]:] + red_path[1:-1]
                    states = path[: on_stack[target]] + cycle
                    return Lasso(tuple(s for s, _ in states), on_stack[target])
            path.pop()
            iters.pop()
            del on_stack[top]
    return None


def _red_search(seed, successors, red: set, on_stack: dict):
    """Path from ``seed`` to a state on the blue stack, as [seed, ..., target]."""
    if seed in red:
        return None
    red.add(seed)
    path = [seed]
    iters = [iter(successors(seed))]
    while path:
        nxt = next(iters[-1], None)
        if nxt is None:
            path.pop()
            iters.pop()
            continue
        if nxt in on_stack:
            return nxt, path + [nxt]
        if nxt not in red:
            red.add(nxt)
            path.append(nxt)
            iters.append(iter(successors(nxt)))
    return None
