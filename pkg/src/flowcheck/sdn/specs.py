"""Data-flow requirements for networks and run assumptions for nets."""
from __future__ import annotations

from typing import Iterable

from ..logic.ast import (
    TRUE,
    Always,
    Atom,
    Eventually,
    Flow,
    Implies,
    Ltl,
    Not,
    Or,
    RunFormula,
    RunImplies,
    Until,
    conjunction,
    disjunction,
)
from ..pnwt.net import Net


def _atoms(names: Iterable[str]) -> list[Ltl]:
    return [Atom(x) for x in sorted(names)]


def spec_connectivity(egress: Iterable[str]) -> Flow:
    """Every data flow eventually reaches an egress switch."""
    egress = list(egress)
    if not egress:
        raise ValueError("connectivity needs at least one egress switch")
    return Flow(Eventually(disjunction(_atoms(egress))))


def spec_loop_freedom(switches: Iterable[str], egress: Iterable[str] = ()) -> Flow:
    """A flow that leaves a non-egress switch never returns to it."""
    skip = set(egress)
    parts = [Implies(s, Until(s, Always(Not(s)))) for s in _atoms(x for x in switches if x not in skip)]
    return Flow(Always(conjunction(parts)))


def spec_drop_freedom(egress: Iterable[str], forwarding: Iterable[str]) -> Flow:
    """A flow away from the egress switches is always extended by a forwarding transition."""
    fwd = list(forwarding)
    if not fwd:
        raise ValueError("drop freedom needs at least one forwarding transition")
    away = conjunction([Not(e) for e in _atoms(egress)])
    return Flow(Always(Implies(away, disjunction(_atoms(fwd)))))


def spec_packet_coherence(path1: Iterable[str], path2: Iterable[str]) -> Flow:
    """Every flow stays on the old route or stays on the new route."""
    p1, p2 = list(path1), list(path2)
    if not p1 or not p2:
        raise ValueError("packet coherence needs two non-empty paths")
    return Flow(Or(Always(disjunction(_atoms(p1))), Always(disjunction(_atoms(p2)))))


def enabled_formula(net: Net, t: str) -> Ltl:
    """Conjunction of the preset places of ``t`` (true for an empty preset)."""
    return conjunction(_atoms(net.pre[t]))


WEAK_FAIR = "weak_fair"
STRONG_FAIR = "strong_fair"
INTERLEAVING_MAX = "interleaving_max"
CONCURRENCY_MAX = "concurrency_max"
ASSUMPTIONS = (WEAK_FAIR, STRONG_FAIR, INTERLEAVING_MAX, CONCURRENCY_MAX)


def run_assumptions(net: Net, kind: str = WEAK_FAIR, transitions: Iterable[str] | None = None) -> Ltl:
    """Run formula for the assumption ``kind``.

    Fairness ranges over ``transitions`` (default: the net's weakly fair
    transitions); maximality ranges over all transitions.
    """
    if kind in (WEAK_FAIR, STRONG_FAIR):
        chosen = sorted(net.weak_fair if transitions is None else transitions)
        parts = []
        for t in chosen:
            pre = enabled_formula(net, t)
            premise = Eventually(Always(pre)) if kind == WEAK_FAIR else Always(Eventually(pre))
            parts.append(Implies(premise, Always(Eventually(Atom(t)))))
        return conjunction(parts)
    if kind == INTERLEAVING_MAX:
        if not net.transitions:
            return TRUE
        some_enabled = disjunction([enabled_formula(net, t) for t in net.transitions])
        return Always(Implies(some_enabled, disjunction(_atoms(net.transitions))))
    if kind == CONCURRENCY_MAX:
        parts = []
        for t in net.transitions:
            rivals = sorted({u for p in net.pre[t] for u in net.postset_of_place(p)} | {t})
            parts.append(Implies(Eventually(Always(enabled_formula(net, t))), Always(Eventually(disjunction(_atoms(rivals))))))
        return conjunction(parts)
    raise ValueError(f"unknown assumption {kind!r}; expected one of {', '.join(ASSUMPTIONS)}")


def under_assumptions(net: Net, requirement: RunFormula, kind: str = WEAK_FAIR) -> RunFormula:
    """``assumption -> requirement``, or the requirement alone if nothing is assumed."""
    assumption = run_assumptions(net, kind)
    if assumption == TRUE:
        return requirement
    return RunImplies(assumption, requirement)


__all__ = [
    "ASSUMPTIONS",
    "CONCURRENCY_MAX",
    "INTERLEAVING_MAX",
    "STRONG_FAIR",
    "WEAK_FAIR",
    "enabled_formula",
    "run_assumptions",
    "spec_connectivity",
    "spec_drop_freedom",
    "spec_loop_freedom",
    "spec_packet_coherence",
    "under_assumptions",
]
