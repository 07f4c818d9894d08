"""Safe Petri nets with transits (and, for transformed nets, inhibitor arcs)."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

START = ">"

Marking = frozenset


class NetError(ValueError):
    """Structural problem: unknown element, duplicate name, bad transit."""


class FiringError(RuntimeError):
    pass


class SafetyError(RuntimeError):
    def __init__(self, message: str, witness: tuple = ()):
        super().__init__(message)
        self.witness = witness


def valid_name(name: str) -> bool:
    return (
        bool(name)
        and name != START
        and ":" not in name
        and not name.startswith("#")
        and not any(c.isspace() for c in name)
    )


@dataclass(frozen=True)
class Net:
    """A safe P/T net with an optional transit relation and inhibitor arcs.

    Presets and postsets are stored per transition.  ``transits[t]`` holds
    pairs ``(source, target)`` where ``source`` is a place of the preset or
    :data:`START`.
    """

    places: tuple[str, ...]
    transitions: tuple[str, ...]
    pre: Mapping[str, frozenset[str]]
    post: Mapping[str, frozenset[str]]
    initial: frozenset[str]
    transits: Mapping[str, frozenset[tuple[str, str]]] = field(default_factory=dict)
    inhibitors: Mapping[str, frozenset[str]] = field(default_factory=dict)
    weak_fair: frozenset[str] = frozenset()
    name: str = "net"

    @classmethod
    def build(
        cls,
        places: Iterable[str],
        transitions: Iterable[str],
        flow: Iterable[tuple[str, str]],
        initial: Iterable[str] = (),
        transits: Mapping[str, Iterable[tuple[str, str]]] | None = None,
        inhibitors: Iterable[tuple[str, str]] = (),
        weak_fair: Iterable[str] = (),
        name: str = "net",
    ) -> "Net":
        """Build and validate a net from a flow relation given as arc pairs.

        ``inhibitors`` contains ``(place, transition)`` pairs.
        """
        places = list(places)
        transitions = list(transitions)
        _check_names(places, transitions)
        pset, tset = set(places), set(transitions)
        pre: dict[str, set[str]] = {t: set() for t in transitions}
        post: dict[str, set[str]] = {t: set() for t in transitions}
        for a, b in flow:
            if a in pset and b in tset:
                pre[b].add(a)
            elif a in tset and b in pset:
                post[a].add(b)
            else:
                raise NetError(f"flow arc {a} -> {b} does not connect a place and a transition")
        inh: dict[str, set[str]] = {t: set() for t in transitions}
        for p, t in inhibitors:
            if p not in pset or t not in tset:
                raise NetError(f"inhibitor arc {p} -o {t} references unknown elements")
            inh[t].add(p)
        init = frozenset(initial)
        if not init <= pset:
            raise NetError(f"initial marking mentions unknown places {sorted(init - pset)}")
        trs: dict[str, frozenset[tuple[str, str]]] = {}
        for t in transitions:
            pairs = frozenset((transits or {}).get(t, ()))
            for s, q in pairs:
                if q not in post[t]:
                    raise NetError(f"transit {s} -> {q} of {t}: target not in postset")
                if s != START and s not in pre[t]:
                    raise NetError(f"transit {s} -> {q} of {t}: source not in preset")
            trs[t] = pairs
        unknown = set(transits or {}) - tset
        if unknown:
            raise NetError(f"transits given for unknown transitions {sorted(unknown)}")
        fair = frozenset(weak_fair)
        if not fair <= tset:
            raise NetError(f"weak fairness for unknown transitions {sorted(fair - tset)}")
        return cls(
            places=tuple(sorted(places)),
            transitions=tuple(sorted(transitions)),
            pre={t: frozenset(v) for t, v in pre.items()},
            post={t: frozenset(v) for t, v in post.items()},
            initial=init,
            transits=trs,
            inhibitors={t: frozenset(v) for t, v in inh.items()},
            weak_fair=fair,
            name=name,
        )

    @property
    def flow(self) -> frozenset[tuple[str, str]]:
        arcs = set()
        for t in self.transitions:
            arcs.update((p, t) for p in self.pre[t])
            arcs.update((t, p) for p in self.post[t])
        return frozenset(arcs)

    def transit_pairs(self, t: str) -> frozenset[tuple[str, str]]:
        return self.transits.get(t, frozenset())

    def inhibitor_places(self, t: str) -> frozenset[str]:
        return self.inhibitors.get(t, frozenset())

    @property
    def has_inhibitors(self) -> bool:
        return any(self.inhibitors.get(t) for t in self.transitions)

    def starts(self) -> list[tuple[str, str]]:
        """All ``(t, q)`` with a chain-start transit into ``q``."""
        return sorted((t, q) for t in self.transitions for s, q in self.transit_pairs(t) if s == START)

    def proper_transits(self) -> list[tuple[str, str, str]]:
        """All ``(p, t, q)`` with ``p`` transiting to ``q`` via ``t``."""
        return sorted(
            (s, t, q) for t in self.transitions for s, q in self.transit_pairs(t) if s != START
        )

    def postset_of_place(self, p: str) -> list[str]:
        return [t for t in self.transitions if p in self.pre[t]]

    def check_transition(self, t: str) -> None:
        if t not in self.pre:
            raise NetError(f"unknown transition {t!r}")

    def replace(self, **changes) -> "Net":
        from dataclasses import replace

        return replace(self, **changes)


def _check_names(places: list[str], transitions: list[str]) -> None:
    seen: set[str] = set()
    for name in [*places, *transitions]:
        if not valid_name(name):
            raise NetError(f"invalid element name {name!r}")
        if name in seen:
            raise NetError(f"duplicate element name {name!r}")
        seen.add(name)
