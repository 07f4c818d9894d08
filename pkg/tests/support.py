"""Random instance generators and brute-force enumerators shared by the tests."""
from __future__ import annotations

import random
from typing import Iterator, Sequence

from flowcheck.logic import (
    TRUE,
    Always,
    And,
    Atom,
    Eventually,
    Flow,
    Next,
    Not,
    Or,
    RunAnd,
    RunImplies,
    RunLtl,
    RunOr,
    Until,
)
from flowcheck.pnwt import START, FiringSequence, Net, SafetyError, Trace, fire, successors, validate_safe


def random_ltl(rng: random.Random, names: Sequence[str], depth: int):
    if depth == 0 or rng.random() < 0.25:
        if rng.random() < 0.1:
            return TRUE
        return Atom(rng.choice(list(names)))
    op = rng.choice(["!", "&", "|", "X", "U", "F", "G"])
    if op == "!":
        return Not(random_ltl(rng, names, depth - 1))
    if op == "X":
        return Next(random_ltl(rng, names, depth - 1))
    if op == "F":
        return Eventually(random_ltl(rng, names, depth - 1))
    if op == "G":
        return Always(random_ltl(rng, names, depth - 1))
    left, right = random_ltl(rng, names, depth - 1), random_ltl(rng, names, depth - 1)
    return {"&": And, "|": Or, "U": Until}[op](left, right)


def random_trace(rng: random.Random, names: Sequence[str], max_prefix: int = 4, max_period: int = 4) -> Trace:
    def letter():
        return frozenset(x for x in names if rng.random() < 0.5)

    prefix = tuple(letter() for _ in range(rng.randint(0, max_prefix)))
    period = tuple(letter() for _ in range(rng.randint(1, max_period)))
    return Trace(prefix, period)


def random_pnwt(
    rng: random.Random,
    max_places: int = 4,
    max_transitions: int = 3,
    max_transits: int = 2,
    max_starts: int = 1,
    inhibitors: bool = False,
) -> Net:
    """A random safe net; unsafe draws are rejected and redrawn."""
    while True:
        places = [f"p{i}" for i in range(rng.randint(1, max_places))]
        transitions = [f"t{i}" for i in range(rng.randint(1, max_transitions))]
        flow, transits, inhibit = [], {}, []
        starts_left = max_starts
        for t in transitions:
            pre = rng.sample(places, rng.randint(0, min(2, len(places))))
            post = rng.sample(places, rng.randint(1, min(2, len(places))))
            flow += [(p, t) for p in pre] + [(t, q) for q in post]
            candidates = [(p, q) for p in pre for q in post]
            if starts_left and rng.random() < 0.6:
                candidates.append((START, rng.choice(post)))
            chosen = rng.sample(candidates, min(len(candidates), rng.randint(0, max_transits)))
            if any(s == START for s, _ in chosen):
                starts_left -= 1
            transits[t] = chosen
            if inhibitors and rng.random() < 0.5:
                inhibit.append((rng.choice(places), t))
        initial = [p for p in places if rng.random() < 0.5] or [places[0]]
        fair = [t for t in transitions if rng.random() < 0.5]
        net = Net.build(places, transitions, flow, initial, transits, inhibit, fair)
        try:
            validate_safe(net)
        except SafetyError:
            continue
        return net


def random_flow_formula(rng: random.Random, net: Net, depth: int = 3):
    """A Flow-LTL formula with exactly one flow subformula."""
    run_names = list(net.places) + list(net.transitions)
    flow = Flow(random_ltl(rng, run_names, depth))
    shape = rng.choice(["flow", "implies", "and", "or"])
    if shape == "flow":
        return flow
    run = random_ltl(rng, run_names, max(1, depth - 1))
    if shape == "implies":
        return RunImplies(run, flow)
    if shape == "and":
        return RunAnd(RunLtl(run), flow)
    return RunOr(RunLtl(run), flow)


def firing_sequences(net: Net, max_positions: int) -> Iterator[FiringSequence]:
    """All finite sequences and lassos with at most ``max_positions`` trace positions.

    A finite sequence of ``k`` steps occupies ``k + 1`` positions (the final
    marking stutters); a lasso of ``k`` steps occupies ``k``.
    """
    steps: list[tuple[frozenset, str]] = []

    def go(m: frozenset):
        if len(steps) + 1 <= max_positions:
            yield FiringSequence(tuple(steps), m, None)
        for j, (mj, _) in enumerate(steps):
            if mj == m:
                yield FiringSequence(tuple(steps), m, j)
        if len(steps) >= max_positions:
            return
        for t, m2 in successors(net, m):
            steps.append((m, t))
            yield from go(m2)
            steps.pop()

    yield from go(net.initial)


def random_firing_sequence(rng: random.Random, net: Net, max_steps: int = 6) -> FiringSequence:
    """A random walk, closed into a lasso when it revisits a marking."""
    m = net.initial
    steps: list[tuple[frozenset, str]] = []
    for _ in range(rng.randint(0, max_steps)):
        options = successors(net, m)
        if not options:
            break
        t, m2 = rng.choice(sorted(options))
        steps.append((m, t))
        m = m2
    loops = [j for j, (mj, _) in enumerate(steps) if mj == m]
    if loops and rng.random() < 0.6:
        return FiringSequence(tuple(steps), m, rng.choice(loops))
    return FiringSequence(tuple(steps), m, None)


def replay_inputs(seq: FiringSequence) -> list[frozenset[str]]:
    return [frozenset({t}) for t in seq.transitions]


def markings_along(net: Net, transitions: Sequence[str]) -> list[frozenset[str]]:
    m = net.initial
    out = [m]
    for t in transitions:
        m = fire(net, m, t)
        out.append(m)
    return out
