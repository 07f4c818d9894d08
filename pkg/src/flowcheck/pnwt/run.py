"""Occurrence net induced by a finite firing sequence."""
from __future__ import annotations

from dataclasses import dataclass

from .net import Net
from .sequences import FiringSequence


@dataclass(frozen=True)
class InducedRun:
    """Conditions and events of the run with their labels in the base net.

    ``pre``/``post`` map event ids to condition ids; ``label`` maps every id
    (``c<k>`` for conditions, ``e<k>`` for events) to the base element.
    """

    conditions: tuple[str, ...]
    events: tuple[str, ...]
    pre: dict[str, frozenset[str]]
    post: dict[str, frozenset[str]]
    label: dict[str, str]

    def consumers(self, condition: str) -> list[str]:
        return [e for e in self.events if condition in self.pre[e]]


def induced_run(net: Net, seq: FiringSequence, periods: int = 1) -> InducedRun:
    """Unroll ``seq`` (a lasso contributes ``periods`` copies of its loop)."""
    transitions = list(seq.transitions)
    if seq.lasso_start is not None:
        transitions += list(seq.transitions[seq.lasso_start:]) * (periods - 1)
    label: dict[str, str] = {}
    current: dict[str, str] = {}
    conditions, events = [], []
    pre, post = {}, {}

    def new_condition(p: str) -> str:
        cid = f"c{len(conditions)}"
        conditions.append(cid)
        label[cid] = p
        current[p] = cid
        return cid

    for p in sorted(seq.initial):
        new_condition(p)
    for k, t in enumerate(transitions):
        eid = f"e{k}"
        events.append(eid)
        label[eid] = t
        pre[eid] = frozenset(current.pop(p) for p in sorted(net.pre[t]))
        post[eid] = frozenset(new_condition(q) for q in sorted(net.post[t]))
    return InducedRun(tuple(conditions), tuple(events), pre, post, label)
