"""Benchmark families: switch failure (SF), redundant pipeline (RP), routing update (RU)."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional

from ..logic.ast import (
    Always,
    And,
    Atom,
    Eventually,
    Flow,
    Not,
    Or,
    RunFormula,
    RunImplies,
    conjunction,
    disjunction,
)
from ..pnwt.net import START, Net
from ..sdn.encode import encode_network
from ..sdn.model import Config, Sequential, SwitchUpdate, Topology
from ..sdn.specs import run_assumptions, spec_connectivity, under_assumptions


@dataclass(frozen=True)
class BenchmarkInstance:
    name: str
    net: Net
    formula: RunFormula
    # True/False where the family fixes the answer
    expected_verdict: Optional[bool] = None
    params: dict = field(default_factory=dict, compare=False)


class _Wiring:
    """Accumulates places, transitions and arcs of a hand-built net."""

    def __init__(self):
        self.places: list[str] = []
        self.initial: list[str] = []
        self.transitions: list[str] = []
        self.flow: list[tuple[str, str]] = []
        self.transits: dict[str, list[tuple[str, str]]] = {}
        self.fair: list[str] = []

    def place(self, p: str, marked: bool = True) -> str:
        self.places.append(p)
        if marked:
            self.initial.append(p)
        return p

    def transition(self, t: str, pre, post, transits, fair: bool = True) -> str:
        self.transitions.append(t)
        self.flow += [(p, t) for p in pre] + [(t, q) for q in post]
        self.transits[t] = list(transits)
        if fair:
            self.fair.append(t)
        return t

    def forward(self, x: str, y: str, name: Optional[str] = None) -> str:
        """Data-plane hop: both switches stay marked, flows at ``x`` move to ``y``."""
        return self.transition(name or f"fwd({x},{y})", [x, y], [x, y], [(x, y), (y, y)])

    def entry(self, x: str, name: str) -> str:
        return self.transition(name, [x], [x], [(START, x), (x, x)])

    def build(self, name: str) -> Net:
        return Net.build(self.places, self.transitions, self.flow, self.initial, self.transits, weak_fair=self.fair, name=name)


# switch failure -------------------------------------------------------------------


def gen_sf(n: int, seed: int = 0) -> BenchmarkInstance:
    """A line of ``n+1`` switches whose failing inner switch is bypassed."""
    if n < 2:
        raise ValueError("switch failure needs n >= 2")
    failing = random.Random(seed).randint(1, n - 1)
    w = _Wiring()
    sw = [w.place(f"s{i}", marked=i != failing) for i in range(n + 1)]
    w.entry(sw[0], "ingress")
    for i in range(1, n + 1):
        w.forward(sw[i - 1], sw[i])
    # the failed switch holds no token, so only the bypass links its neighbours
    w.forward(sw[failing - 1], sw[failing + 1], name=f"bypass({sw[failing - 1]},{sw[failing + 1]})")
    net = w.build(f"sf{n}")
    phi = under_assumptions(net, spec_connectivity([sw[-1]]))
    return BenchmarkInstance(f"SF/{n}", net, phi, True, {"n": n, "seed": seed, "failing": sw[failing]})


# redundant pipeline ---------------------------------------------------------------

RP_VERSIONS = ("B", "U", "M", "C")


def gen_rp(n1: int, n2: int, version: str = "B") -> BenchmarkInstance:
    """Two disjoint pipelines between ingress and egress, optionally with updates."""
    if n1 < 1 or n2 < 1:
        raise ValueError("both pipelines need at least one switch")
    version = version.upper()
    if version not in RP_VERSIONS:
        raise ValueError(f"unknown version {version!r}; expected one of {', '.join(RP_VERSIONS)}")
    w = _Wiring()
    ingress = w.place("ingress")
    pipes = {
        "a": [w.place(f"a{i}") for i in range(1, n1 + 1)],
        "b": [w.place(f"b{i}") for i in range(1, n2 + 1)],
    }
    egress = w.place("egress")
    w.entry(ingress, "enter")
    for chain in pipes.values():
        hops = [ingress] + chain + [egress]
        for x, y in zip(hops, hops[1:]):
            w.forward(x, y)
    removals = []
    if version != "B":
        for tag, chain in pipes.items():
            w.place(f"broken_{tag}", marked=False)
        if version in ("M", "C"):
            w.place("mutex")
            for tag in pipes:
                w.place(f"hold_{tag}", marked=False)
        for tag, chain in pipes.items():
            broken, first = f"broken_{tag}", chain[0]
            lock = ["mutex"] if version in ("M", "C") else []
            held = [f"hold_{tag}"] if lock else []
            # updates are not assumed fair: they may happen or not
            removals.append(w.transition(f"remove_{tag}", [first] + lock, [broken] + held, [(first, broken)], fair=False))
            w.transition(f"return_{tag}", [broken, ingress], [broken, ingress], [(broken, ingress), (ingress, ingress)])
        if version in ("M", "C"):
            for tag, chain in pipes.items():
                broken, first = f"broken_{tag}", chain[0]
                w.transition(f"restore_{tag}", [broken, f"hold_{tag}"], [first, "mutex"], [(broken, first)], fair=False)
    net = w.build(f"rp{n1}_{n2}_{version}")
    fairness = run_assumptions(net)
    reach = Eventually(Atom(egress))
    if version == "C":
        quiet = Eventually(Always(conjunction([Not(Atom(t)) for t in removals])))
        phi: RunFormula = RunImplies(And(fairness, quiet), Flow(reach))
    else:
        stay = [Always(disjunction([Atom(p) for p in [ingress] + chain + [egress]])) for chain in pipes.values()]
        phi = RunImplies(fairness, Flow(And(reach, Or(stay[0], stay[1]))))
    expected = version in ("B", "C")
    return BenchmarkInstance(f"RP/{n1}/{n2}/{version}", net, phi, expected, {"n1": n1, "n2": n2, "version": version})


# routing update -------------------------------------------------------------------

RU_VARIANTS = ("T", "F")


def _random_topology(rng: random.Random, k: int) -> Topology:
    names = [f"sw{i}" for i in range(k)]
    links = {(names[rng.randrange(i)], names[i]) for i in range(1, k)}
    for i in range(k):
        for j in range(i + 1, k):
            if rng.random() < 0.35:
                links.add((names[i], names[j]))
    return Topology.build(names, links)


def _random_path(rng: random.Random, top: Topology, src: str, dst: str) -> list[str]:
    """A simple path found by depth-first search with shuffled neighbours."""
    path, seen = [src], {src}
    stack = [iter(rng.sample(top.neighbours(src), len(top.neighbours(src))))]
    while stack:
        y = next(stack[-1], None)
        if y is None:
            stack.pop()
            seen.discard(path.pop())
            continue
        if y in seen:
            continue
        path.append(y)
        if y == dst:
            return path
        seen.add(y)
        stack.append(iter(rng.sample(top.neighbours(y), len(top.neighbours(y)))))
    raise AssertionError("topology is connected")


def gen_ru(switch_count: int, seed: int = 0, variant: str = "T", max_attempts: int = 1000) -> BenchmarkInstance:
    """Seeded topology with a route change applied switch by switch from the egress back."""
    if switch_count < 3:
        raise ValueError("routing update needs at least 3 switches")
    variant = variant.upper()
    if variant not in RU_VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; expected T or F")
    rng = random.Random(f"ru/{switch_count}/{seed}")
    for _ in range(max_attempts):
        top = _random_topology(rng, switch_count)
        ingress, egress = rng.sample(sorted(top.switches), 2)
        before = _random_path(rng, top, ingress, egress)
        after = _random_path(rng, top, ingress, egress)
        if before == after:
            continue
        old_rules = dict(zip(before, before[1:]))
        steps = [
            SwitchUpdate(x, y)
            for x, y in reversed(list(zip(after, after[1:])))
            if old_rules.get(x) != y
        ]
        # a flow can miss any switch that is not on both routes
        misses = sorted(set(top.switches) - (set(before) & set(after)) - {ingress, egress})
        if variant == "F" and not misses:
            continue
        break
    else:
        raise ValueError(f"no suitable routing update found for {switch_count} switches")
    cfg = Config.build([ingress], [egress], list(old_rules.items()))
    update = steps[0] if len(steps) == 1 else Sequential(tuple(steps))
    net = encode_network(top, cfg, update, name=f"ru{switch_count}_{seed}_{variant}")
    target = egress if variant == "T" else rng.choice(misses)
    phi = under_assumptions(net, spec_connectivity([target]))
    params = {
        "switch_count": switch_count,
        "seed": seed,
        "variant": variant,
        "ingress": ingress,
        "egress": egress,
        "target": target,
        "before": before,
        "after": after,
    }
    return BenchmarkInstance(f"RU/{switch_count}/{seed}/{variant}", net, phi, variant == "T", params)


FAMILIES = ("sf", "rp", "ru")

__all__ = ["BenchmarkInstance", "FAMILIES", "RP_VERSIONS", "RU_VARIANTS", "gen_rp", "gen_ru", "gen_sf"]
