"""Kripke structures explored by the model checker."""
from __future__ import annotations

from typing import Callable, Hashable, Sequence

from ..pnwt.net import Net, SafetyError
from ..pnwt.sequences import FiringSequence, Trace
from .prop import Expr, compile_expr, compile_on_labels

STOP = -1


class Kripke:
    """Implicit state graph with atom labels; every state has a successor."""

    def initial_states(self) -> list[Hashable]:
        raise NotImplementedError

    def successors(self, s: Hashable) -> list[Hashable]:
        raise NotImplementedError

    def label(self, s: Hashable) -> frozenset[str]:
        raise NotImplementedError

    def compile(self, e: Expr) -> Callable[[Hashable], bool]:
        f = compile_on_labels(e)
        label = self.label
        return lambda s: f(label(s))


class NetKripke(Kripke):
    """Firing sequences of a net as paths.

    A state is ``(marking bits, fired transition index)``; the index is
    :data:`STOP` for the stuttering tail of a finite sequence.  Every state
    may stop, so paths spell the traces of all finite and infinite firing
    sequences.
    """

    def __init__(self, net: Net):
        self.net = net
        self.place_bit = {p: 1 << k for k, p in enumerate(net.places)}
        self.index = {t: k for k, t in enumerate(net.transitions)}
        self.pre = [self._mask(net.pre[t]) for t in net.transitions]
        self.post = [self._mask(net.post[t]) for t in net.transitions]
        self.inh = [self._mask(net.inhibitor_places(t)) for t in net.transitions]
        self.keep = [~m for m in self.pre]
        self.initial_mask = self._mask(net.initial)
        self._succ_cache: dict[int, list[tuple[int, int]]] = {}

    def _mask(self, places) -> int:
        m = 0
        for p in places:
            m |= self.place_bit[p]
        return m

    def marking(self, m: int) -> frozenset[str]:
        return frozenset(p for p, b in self.place_bit.items() if m & b)

    def _from_marking(self, m: int) -> list[tuple[int, int]]:
        got = self._succ_cache.get(m)
        if got is None:
            got = [
                (m, k)
                for k in range(len(self.pre))
                if m & self.pre[k] == self.pre[k] and not m & self.inh[k]
            ]
            got.append((m, STOP))
            self._succ_cache[m] = got
        return got

    def initial_states(self):
        return self._from_marking(self.initial_mask)

    def successors(self, s):
        m, k = s
        if k == STOP:
            return [s]
        rest = m & self.keep[k]
        if rest & self.post[k]:
            t = self.net.transitions[k]
            raise SafetyError(f"firing {t!r} puts a second token on a marked place")
        return self._from_marking(rest | self.post[k])

    def label(self, s):
        m, k = s
        atoms = set(self.marking(m))
        if k != STOP:
            atoms.add(self.net.transitions[k])
        return frozenset(atoms)

    def compile(self, e: Expr):
        env: dict = {}

        def split(names):
            mask = 0
            trans = []
            for x in names:
                if x in self.place_bit:
                    mask |= self.place_bit[x]
                elif x in self.index:
                    trans.append(self.index[x])
            return mask, trans

        def any_code(names):
            mask, trans = split(names)
            parts = []
            if mask:
                parts.append(f"(s[0] & {mask})")
            if len(trans) == 1:
                parts.append(f"s[1] == {trans[0]}")
            elif trans:
                key = f"_t{len(env)}"
                env[key] = frozenset(trans)
                parts.append(f"s[1] in {key}")
            return "(" + " or ".join(parts) + ")" if parts else "False"

        def all_code(names):
            mask, trans = split(names)
            if len(names) != len(trans) + bin(mask).count("1") or len(set(trans)) > 1:
                # unknown atoms never hold; two transitions never fire together
                return "False"
            parts = []
            if mask:
                parts.append(f"(s[0] & {mask}) == {mask}")
            if trans:
                parts.append(f"s[1] == {trans[0]}")
            return "(" + " and ".join(parts) + ")"

        return compile_expr(e, any_code, all_code, env=env)

    def to_sequence(self, states: Sequence, loop: int | None) -> FiringSequence:
        """Firing sequence spelled by a path (``loop`` is where it cycles back)."""
        transitions = self.net.transitions
        steps = [(self.marking(m), transitions[k]) for m, k in states if k != STOP]
        stops = [m for m, k in states if k == STOP]
        if stops:
            # a path that stops stutters its marking from then on
            return FiringSequence(tuple(steps), self.marking(stops[0]), None)
        if loop is None:
            m, k = states[-1]
            return FiringSequence(tuple(steps), self.marking((m & self.keep[k]) | self.post[k]), None)
        return FiringSequence(tuple(steps), self.marking(states[loop][0]), loop)


class TraceKripke(Kripke):
    """A single ultimately periodic word; states are positions."""

    def __init__(self, trace: Trace):
        self.trace = trace
        self.n = len(trace)
        self.loop = len(trace.prefix)

    def initial_states(self):
        return [0]

    def successors(self, s):
        return [s + 1 if s + 1 < self.n else self.loop]

    def label(self, s):
        return self.trace.at(s)


class ExplicitKripke(Kripke):
    """Finite Kripke structure given by tables (used by tests and small models)."""

    def __init__(self, initial, edges: dict, labels: dict):
        self._initial = list(initial)
        self.edges = edges
        self.labels = labels

    def initial_states(self):
        return self._initial

    def successors(self, s):
        return self.edges[s]

    def label(self, s):
        return self.labels[s]
