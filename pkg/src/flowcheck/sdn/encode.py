"""Nets with transits for the data plane and the control plane of a network.

Switch ``x`` becomes place ``x`` (so requirement formulas mention switches by
name), each directed connection ``x -> y`` a rule place ``x.fwd(y)`` and a
forwarding transition ``fwd(x,y)``.  Data-plane transitions never move
tokens; they only extend data flows.  The control plane moves tokens between
rule places in the order prescribed by the update.
"""
from __future__ import annotations

from typing import Optional

from ..pnwt.net import START, Net, NetError
from .model import Config, Sequential, SwitchUpdate, Topology, Update, validate_update

ROOT_START = "update_start"
ROOT_FINISH = "update_finish"


def rule_place(x: str, y: str) -> str:
    return f"{x}.fwd({y})"


def forward_transition(x: str, y: str) -> str:
    return f"fwd({x},{y})"


def ingress_transition(x: str) -> str:
    return f"ingress({x})"


def encode_data_plane(top: Topology, cfg: Config, name: str = "data") -> Net:
    cfg.validate_against(top)
    places = sorted(top.switches) + [rule_place(x, y) for x, y in sorted(top.connections)]
    transitions, flow, transits = [], [], {}
    for x, y in sorted(top.connections):
        t = forward_transition(x, y)
        transitions.append(t)
        for p in (x, y, rule_place(x, y)):
            flow += [(p, t), (t, p)]
        transits[t] = [(x, y), (y, y)]
    for x in sorted(cfg.ingress):
        t = ingress_transition(x)
        transitions.append(t)
        flow += [(x, t), (t, x)]
        transits[t] = [(START, x), (x, x)]
    initial = set(top.switches) | {rule_place(x, y) for x, y in cfg.forwarding}
    return Net.build(places, transitions, flow, initial, transits, weak_fair=transitions, name=name)


def _node_names(u: Update) -> dict[int, str]:
    """Names for the nodes of an update tree (keyed by ``id``)."""
    names: dict[int, str] = {}
    counter = {"seq": 0, "par": 0}

    def go(node: Update) -> None:
        if isinstance(node, SwitchUpdate):
            names[id(node)] = str(node)
            return
        kind = "seq" if isinstance(node, Sequential) else "par"
        names[id(node)] = f"{kind}{counter[kind]}"
        counter[kind] += 1
        for part in node.parts:
            go(part)

    go(u)
    return names


def encode_control_plane(u: Update, cfg: Config, top: Optional[Topology] = None, name: str = "control") -> Net:
    validate_update(u, top)
    names = _node_names(u)
    rules = cfg.rules
    places: set[str] = set()
    transitions: list[str] = []
    flow: list[tuple[str, str]] = []

    def start(node: Update) -> str:
        return ROOT_START if node is u else f"{names[id(node)]}.start"

    def finish(node: Update) -> str:
        return ROOT_FINISH if node is u else f"{names[id(node)]}.finish"

    def go(node: Update) -> None:
        places.update((start(node), finish(node)))
        label = names[id(node)]
        if isinstance(node, SwitchUpdate):
            x, z = node.switch, node.target
            transitions.append(label)
            flow.extend([(start(node), label), (label, finish(node)), (label, rule_place(x, z))])
            places.add(rule_place(x, z))
            if x in rules:
                # an existing rule is replaced; otherwise the rule is new
                flow.append((rule_place(x, rules[x]), label))
                places.add(rule_place(x, rules[x]))
            return
        for part in node.parts:
            go(part)
        if isinstance(node, Sequential):
            steps = [f"{label}.{i}" for i in range(len(node.parts) + 1)]
            transitions.extend(steps)
            flow.append((start(node), steps[0]))
            for i, part in enumerate(node.parts):
                flow.append((steps[i], start(part)))
                flow.append((finish(part), steps[i + 1]))
            flow.append((steps[-1], finish(node)))
        else:
            opener, closer = f"{label}.open", f"{label}.close"
            transitions.extend([opener, closer])
            flow.extend([(start(node), opener), (closer, finish(node))])
            for part in node.parts:
                flow.extend([(opener, start(part)), (finish(part), closer)])

    go(u)
    return Net.build(sorted(places), transitions, flow, [ROOT_START], weak_fair=transitions, name=name)


def compose(data: Net, control: Optional[Net] = None, name: Optional[str] = None) -> Net:
    """Union of the fragments; rule places with the same name are shared."""
    if control is None:
        return data if name is None else data.replace(name=name)
    clash = set(data.transitions) & set(control.transitions)
    if clash:
        raise NetError(f"fragments share transitions {sorted(clash)}")
    odd = sorted(p for p in set(data.places) & set(control.places) if ".fwd(" not in p)
    if odd:
        raise NetError(f"fragments share places other than forwarding rules: {odd}")
    places = sorted(set(data.places) | set(control.places))
    flow = sorted(data.flow | control.flow)
    transits = {t: data.transit_pairs(t) for t in data.transitions}
    transits.update({t: control.transit_pairs(t) for t in control.transitions})
    return Net.build(
        places,
        list(data.transitions) + list(control.transitions),
        flow,
        data.initial | control.initial,
        transits,
        weak_fair=data.weak_fair | control.weak_fair,
        name=name or f"{data.name}+{control.name}",
    )


def encode_network(top: Topology, cfg: Config, update: Optional[Update] = None, name: str = "sdn") -> Net:
    data = encode_data_plane(top, cfg)
    control = None if update is None else encode_control_plane(update, cfg, top)
    return compose(data, control, name=name)
