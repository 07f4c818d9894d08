"""Circuit encoding of a safe net with inhibitor arcs, and the matching formula.

Every transition is an input.  Latches hold the marking plus an
initialisation latch (false only in the very first step) and an error latch
that is raised one step after an input that fires no valid transition.
Outputs show the current marking, the transition that fired and the error
latch.  Net element names never contain ``:``, so the structured names below
cannot clash with them.
"""
from __future__ import annotations

from ..logic.ast import Always, Atom, Implies, Ltl, Next, rename_atoms
from ..pnwt.net import Net
from .aig import TRUE, AigBuilder, Circuit, neg

INIT_LATCH = "i:latch"
ERROR_LATCH = "e:latch"
ERROR_OUTPUT = "e:o"


def output_name(element: str) -> str:
    return f"{element}:o"


def encode_net(net) -> Circuit:
    """Circuit whose paths replay the (finite and infinite) firing sequences."""
    n = getattr(net, "n", None)
    net: Net = getattr(net, "net", net)
    b = AigBuilder()
    t_in = {t: b.input(t) for t in net.transitions}
    p_lat = {p: b.latch(p) for p in net.places}
    init = b.latch(INIT_LATCH)
    err = b.latch(ERROR_LATCH)

    valid = {}
    for t in net.transitions:
        inhibit = net.inhibitor_places(t)
        conds = [t_in[t]]
        conds += [neg(t_in[u]) for u in net.transitions if u != t]
        conds += [p_lat[p] for p in sorted(net.pre[t])]
        conds += [neg(p_lat[p]) for p in sorted(inhibit)]
        valid[t] = b.all_of(conds)
    none_valid = b.all_of(neg(v) for v in valid.values())

    for p in net.places:
        # marking after the valid transition (if any) fired
        cases = []
        for t in net.transitions:
            if p in net.post[t]:
                continue
            if p in net.pre[t]:
                cases.append(neg(valid[t]))
            else:
                cases.append(b.implies(valid[t], p_lat[p]))
        fired = b.all_of(cases)
        succ = b.AND(b.implies(none_valid, p_lat[p]), b.implies(neg(none_valid), fired))
        if p in net.initial:
            b.set_next(p_lat[p], b.implies(init, succ))
        else:
            b.set_next(p_lat[p], b.AND(init, succ))
    b.set_next(init, TRUE)
    b.set_next(err, b.AND(init, none_valid))

    for p in net.places:
        b.output(output_name(p), b.mux(init, p_lat[p], TRUE if p in net.initial else 0))
    for t in net.transitions:
        b.output(output_name(t), valid[t])
    b.output(ERROR_OUTPUT, err)

    comments = [f"net {net.name}"]
    if n is not None:
        comments.append(f"subnets {n}")
    return b.build(comments)


def wrap_formula_for_circuit(phi: Ltl) -> Ltl:
    """Skip the initialisation step and only constrain paths whose error output,
    once raised, stays raised (these are the finite firing sequences)."""
    err = Atom(ERROR_OUTPUT)
    return Next(Implies(Always(Implies(err, Always(err))), rename_atoms(phi, output_name)))
