"""Firing sequences, flow chains and the traces they induce."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .net import START, Net
from .semantics import fire



@dataclass(frozen=True)
class Trace:
    """Ultimately periodic word ``prefix . period^omega`` over sets of atoms."""

    prefix: tuple[frozenset[str], ...]
    period: tuple[frozenset[str], ...]

    def __post_init__(self):
        if not self.period:
            raise ValueError("trace period must be non-empty")

    def __len__(self) -> int:
        return len(self.prefix) + len(self.period)

    def at(self, i: int) -> frozenset[str]:
        if i < len(self.prefix):
            return self.prefix[i]
        return self.period[(i - len(self.prefix)) % len(self.period)]

    def atoms(self) -> set[str]:
        return set().union(*self.prefix, *self.period)


@dataclass(frozen=True)
class FiringSequence:
    """``steps[i] = (M_i, t_i)``; ``final`` is the marking after the last step.

    With ``lasso_start`` set the sequence is infinite: after the last step it
    continues at ``steps[lasso_start]``.
    """

    steps: tuple[tuple[frozenset[str], str], ...]
    final: frozenset[str]
    lasso_start: Optional[int] = None

    @classmethod
    def replay(
        cls, net: Net, transitions: Sequence[str], lasso_start: Optional[int] = None,
        initial: Optional[frozenset[str]] = None,
    ) -> "FiringSequence":
        m = net.initial if initial is None else initial
        steps = []
        for t in transitions:
            steps.append((m, t))
            m = fire(net, m, t)
        seq = cls(tuple(steps), m, lasso_start)
        seq.check_shape()
        return seq

    def check_shape(self) -> None:
        if self.lasso_start is None:
            return
        if not 0 <= self.lasso_start < len(self.steps):
            raise ValueError("lasso_start must index a step")
        if self.final != self.steps[self.lasso_start][0]:
            raise ValueError("lasso does not close: final marking differs from loop marking")

    def validate(self, net: Net) -> None:
        m = self.steps[0][0] if self.steps else self.final
        if m != net.initial:
            raise ValueError("sequence does not start in the initial marking")
        for i, (mi, t) in enumerate(self.steps):
            if mi != m:
                raise ValueError(f"marking mismatch at step {i}")
            m = fire(net, m, t)
        if m != self.final:
            raise ValueError("final marking mismatch")
        self.check_shape()

    @property
    def transitions(self) -> tuple[str, ...]:
        return tuple(t for _, t in self.steps)

    @property
    def initial(self) -> frozenset[str]:
        return self.steps[0][0] if self.steps else self.final

    @property
    def is_lasso(self) -> bool:
        return self.lasso_start is not None

    def marking_at(self, i: int) -> frozenset[str]:
        return self.steps[i][0] if i < len(self.steps) else self.final

    def next_index(self, i: int) -> Optional[int]:
        """Index of the step after step ``i`` (wrapping for lassos)."""
        if i + 1 < len(self.steps):
            return i + 1
        return self.lasso_start

    def normalize_index(self, i: int) -> int:
        """Fold an index into an unrolled copy of the period back to the first copy."""
        if self.lasso_start is None or i < len(self.steps):
            return i
        period = len(self.steps) - self.lasso_start
        return self.lasso_start + (i - self.lasso_start) % period

    def normalized(self) -> "FiringSequence":
        """Shortest equivalent lasso (minimal period, then minimal prefix)."""
        if self.lasso_start is None:
            return self
        prefix = list(self.steps[: self.lasso_start])
        period = list(self.steps[self.lasso_start:])
        n = len(period)
        for d in range(1, n + 1):
            if n % d == 0 and all(period[i] == period[i % d] for i in range(n)):
                period = period[:d]
                break
        while prefix and prefix[-1] == period[-1]:
            prefix.pop()
            period = [period[-1]] + period[:-1]
        return FiringSequence(tuple(prefix + period), period[0][0], len(prefix))

    def unrolled(self, prefix_len: int, period_copies: int) -> "FiringSequence":
        """Same infinite sequence with a longer prefix and repeated period."""
        if self.lasso_start is None:
            return self
        period = self.steps[self.lasso_start:]
        word = list(self.steps)
        while len(word) < prefix_len + len(period) * period_copies:
            word.extend(period)
        steps = tuple(word[: prefix_len + len(period) * period_copies])
        return FiringSequence(steps, steps[prefix_len][0], prefix_len)


@dataclass(frozen=True)
class FlowChain:
    """``places[0] t0 places[1] t1 ...`` started at ``start_step``.

    ``steps[k]`` is the index of the firing step where ``transitions[k]``
    moved the chain.  A finite chain has one more place than transitions.
    An infinite chain has equal lengths and continues cyclically at ``loop``.
    """

    places: tuple[str, ...]
    transitions: tuple[str, ...]
    start_step: int
    steps: tuple[int, ...] = ()
    loop: Optional[int] = None

    @property
    def finite_end(self) -> bool:
        return self.loop is None

    @property
    def elements(self) -> tuple[str, ...]:
        out: list[str] = []
        for i, p in enumerate(self.places):
            out.append(p)
            if i < len(self.transitions):
                out.append(self.transitions[i])
        return tuple(out)

    def key(self) -> tuple:
        return (self.start_step, self.places, self.transitions, self.loop)

    def normalized(self) -> "FlowChain":
        if self.loop is None:
            return self
        places, trans, steps = list(self.places), list(self.transitions), list(self.steps)
        loop = self.loop
        cyc = list(zip(places[loop:], trans[loop:]))
        n = len(cyc)
        for d in range(1, n + 1):
            if n % d == 0 and all(cyc[i] == cyc[i % d] for i in range(n)):
                cyc = cyc[:d]
                break
        head = list(zip(places[:loop], trans[:loop]))
        while head and head[-1] == cyc[-1]:
            head.pop()
            cyc = [cyc[-1]] + cyc[:-1]
        pairs = head + cyc
        return FlowChain(
            tuple(p for p, _ in pairs), tuple(t for _, t in pairs), self.start_step,
            tuple(steps[: len(pairs)]), len(head),
        )


def trace_of_sequence(seq: FiringSequence) -> Trace:
    letters = [m | {t} for m, t in seq.steps]
    if seq.lasso_start is None:
        return Trace(tuple(letters), (seq.final,))
    return Trace(tuple(letters[: seq.lasso_start]), tuple(letters[seq.lasso_start:]))


def trace_of_chain(chain: FlowChain) -> Trace:
    letters = [frozenset({p, t}) for p, t in zip(chain.places, chain.transitions)]
    if chain.loop is None:
        return Trace(tuple(letters), (frozenset({chain.places[-1]}),))
    return Trace(tuple(letters[: chain.loop]), tuple(letters[chain.loop:]))


def _next_consumption(net: Net, seq: FiringSequence, place: str, pos: Optional[int]) -> Optional[int]:
    """First step at or after ``pos`` whose transition consumes ``place``."""
    if pos is None:
        return None
    budget = len(seq.steps) + 1
    while pos is not None and budget > 0:
        if place in net.pre[seq.steps[pos][1]]:
            return pos
        pos = seq.next_index(pos)
        budget -= 1
    return None


def track_chains(net: Net, seq: FiringSequence, revisits: int = 2) -> list[FlowChain]:
    """Flow chains of ``seq``, tracked operationally per place.

    For lassos, a chain that returns to the same consumption event is
    reported as infinite.  With branching transits inside a loop there are
    infinitely many chains; chains whose path repeats a consumption event
    more than ``revisits`` times are not enumerated.
    """
    found: dict[tuple, FlowChain] = {}
    for j, (_, t) in enumerate(seq.steps):
        for s, q in sorted(net.transit_pairs(t)):
            if s != START:
                continue
            _extend(net, seq, j, [q], [], [], [], seq.next_index(j), revisits, found)
    return sorted(found.values(), key=lambda c: (c.start_step, c.places, c.transitions, c.loop or -1))


def _extend(net, seq, start, places, trans, steps, events, pos, revisits, found):
    here = places[-1]
    k = _next_consumption(net, seq, here, pos)
    if k is None:
        _record(found, FlowChain(tuple(places), tuple(trans), start, tuple(steps), None))
        return
    node = (here, k)
    earlier = [i for i, e in enumerate(events) if e == node]
    for i in earlier:
        _record(found, FlowChain(tuple(places[:-1]), tuple(trans), start, tuple(steps), i))
    if len(earlier) >= revisits:
        return
    t = seq.steps[k][1]
    targets = sorted(q for s, q in net.transit_pairs(t) if s == here)
    if not targets:
        _record(found, FlowChain(tuple(places), tuple(trans), start, tuple(steps), None))
        return
    for q in targets:
        _extend(
            net, seq, start, places + [q], trans + [t], steps + [k], events + [node],
            seq.next_index(k), revisits, found,
        )


def _record(found: dict, chain: FlowChain) -> None:
    chain = chain.normalized()
    found.setdefault(chain.key(), chain)


def replay_chain(net: Net, seq: FiringSequence, chain: FlowChain) -> bool:
    """Check the three flow-chain conditions of ``chain`` against ``seq``."""
    t0 = seq.steps[chain.start_step][1] if chain.start_step < len(seq.steps) else None
    if t0 is None or (START, chain.places[0]) not in net.transit_pairs(t0):
        return False
    pos = seq.next_index(chain.start_step)
    i = 0
    seen: set[tuple[int, int]] = set()
    while True:
        here = chain.places[i]
        k = _next_consumption(net, seq, here, pos)
        has_next = i < len(chain.transitions)
        if k is None:
            return not has_next
        t = seq.steps[k][1]
        if not has_next:
            # a finite chain must not be extended by the remaining sequence
            return not any(s == here for s, _ in net.transit_pairs(t))
        nxt = i + 1 if i + 1 < len(chain.places) else chain.loop
        if t != chain.transitions[i] or (here, chain.places[nxt]) not in net.transit_pairs(t):
            return False
        if (i, k) in seen:
            return True
        seen.add((i, k))
        i, pos = nxt, seq.next_index(k)

