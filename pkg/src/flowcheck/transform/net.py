"""Tracking-subnet construction and the counterexample maps between nets.

For ``n`` flow subformulas the original net is composed with ``n`` copies
that each follow one flow chain.  A single activation token runs through
the original part, then subnet 1, ..., subnet n and back, so every
original step is followed by exactly one step of each subnet.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Mapping, Optional, Sequence

from ..pnwt.net import START, Net, NetError
from ..pnwt.semantics import validate_safe
from ..pnwt.sequences import FiringSequence, FlowChain


class TransformError(NetError):
    pass


class MappingError(ValueError):
    """A sequence or chain does not fit the counterexample map."""


class Naming:
    """Structured names of the elements added by the transformation."""

    ACT_ORIGINAL = "act@o"

    @staticmethod
    def place_copy(p: str, i: int) -> str:
        return f"[{p}]#{i}"

    @staticmethod
    def init(i: int) -> str:
        return f"init#{i}"

    @staticmethod
    def start(t: str, q: str, i: int) -> str:
        return f"{t}@({START},{q})#{i}"

    @staticmethod
    def transit(t: str, p: str, q: str, i: int) -> str:
        return f"{t}@({p},{q})#{i}"

    @staticmethod
    def skip(t: str, i: int) -> str:
        return f"{t}@skip#{i}"

    @staticmethod
    def act(t: str, i: int) -> str:
        return f"act@{t}#{i}"


@dataclass(frozen=True)
class InhibitorNet:
    """Transformed net together with its bookkeeping.

    ``label`` is the partial map back to original elements, ``part`` gives
    0 for the original part and ``i`` for subnet ``i``, and ``roles`` tags
    every transition as ``("original",)``, ``("start", q)``,
    ``("transit", p, q)`` or ``("skip",)``.
    """

    net: Net
    source: Net
    n: int
    label: Mapping[str, str]
    part: Mapping[str, int]
    roles: Mapping[str, tuple] = field(repr=False)

    @property
    def places(self) -> tuple[str, ...]:
        return self.net.places

    @property
    def transitions(self) -> tuple[str, ...]:
        return self.net.transitions

    @property
    def initial(self) -> frozenset[str]:
        return self.net.initial

    def subnet_transitions(self, i: int) -> list[str]:
        return [t for t in self.net.transitions if self.part[t] == i]

    def is_skip(self, t: str) -> bool:
        return self.roles[t][0] == "skip"


def _check_fresh(net: Net, names: Sequence[str]) -> None:
    taken = set(net.places) | set(net.transitions)
    clash = sorted(set(names) & taken)
    if clash:
        raise TransformError(f"generated names collide with net elements: {clash}")


def transform_net(net: Net, n: int, check_safety: bool = True, depth_bound: int = 50) -> InhibitorNet:
    if n < 0:
        raise TransformError("number of flow subformulas must be non-negative")
    if check_safety:
        validate_safe(net, depth_bound)
    nm = Naming
    places = list(net.places) + [nm.ACT_ORIGINAL]
    transitions = list(net.transitions)
    flow = [(p, t) for t in net.transitions for p in net.pre[t]]
    flow += [(t, q) for t in net.transitions for q in net.post[t]]
    inhibitors: list[tuple[str, str]] = []
    label = {x: x for x in [*net.places, *net.transitions]}
    part = {x: 0 for x in places + transitions}
    roles: dict[str, tuple] = {t: ("original",) for t in net.transitions}

    def act_after(t: str, i: int) -> str:
        # activation place filled once subnet i (0: the original part) is done with t
        return nm.ACT_ORIGINAL if i == n else nm.act(t, i + 1)

    for t in net.transitions:
        flow += [(nm.ACT_ORIGINAL, t), (t, act_after(t, 0))]

    for i in range(1, n + 1):
        for p in net.places:
            cp = nm.place_copy(p, i)
            places.append(cp)
            label[cp] = p
            part[cp] = i
        places.append(nm.init(i))
        part[nm.init(i)] = i
        for t in net.transitions:
            a = nm.act(t, i)
            places.append(a)
            part[a] = i
        for t in net.transitions:
            a_in, a_out = nm.act(t, i), act_after(t, i)
            added: list[tuple[str, list[str], list[str], tuple]] = []
            for s, q in sorted(net.transit_pairs(t)):
                if s == START:
                    added.append((nm.start(t, q, i), [nm.init(i)], [nm.place_copy(q, i)], ("start", q)))
                else:
                    added.append(
                        (nm.transit(t, s, q, i), [nm.place_copy(s, i)], [nm.place_copy(q, i)], ("transit", s, q))
                    )
            added.append((nm.skip(t, i), [], [], ("skip",)))
            for name, pre, post, role in added:
                transitions.append(name)
                label[name] = t
                part[name] = i
                roles[name] = role
                flow += [(p, name) for p in pre + [a_in]]
                flow += [(name, q) for q in post + [a_out]]
            skip = nm.skip(t, i)
            inhibitors += [(nm.place_copy(p, i), skip) for p in sorted(net.pre[t])]

    _check_fresh(net, places[len(net.places):] + transitions[len(net.transitions):])
    initial = set(net.initial) | {nm.ACT_ORIGINAL} | {nm.init(i) for i in range(1, n + 1)}
    tnet = Net.build(places, transitions, flow, initial, None, inhibitors, (), f"{net.name}+{n}")
    return InhibitorNet(tnet, net, n, label, part, roles)


def expected_sizes(net: Net, n: int) -> tuple[int, int]:
    """Place and transition counts of ``transform_net(net, n)``.

    Each subnet adds a copy of every place, one init place and one
    activation place per transition.
    """
    P, T = len(net.places), len(net.transitions)
    starts = len(net.starts())
    transits = len(net.proper_transits())
    return n * (P + T + 1) + P + 1, n * (starts + transits + T) + T


# literal constraint audit ----------------------------------------------------


def audit_constraints(net: Net, tn: InhibitorNet) -> dict[str, list[str]]:
    """Check ``tn`` against the eleven construction constraints.

    Returns, for each constraint tag, the list of violations found (empty
    when the constraint holds).  Also checks that no element beyond the
    demanded ones exists.
    """
    nm = Naming
    n = tn.n
    N = tn.net
    P, T = set(N.places), set(N.transitions)
    F = N.flow
    inh = {(p, t) for t in N.transitions for p in N.inhibitor_places(t)}
    lam = tn.label
    out: dict[str, list[str]] = {k: [] for k in ("o", "s1", "s2", "s3", "s4", "s5", "a", "mO", "mSi", "mSn", "in", "minimal")}
    subnets = range(1, n + 1)

    def need(tag: str, cond: bool, what: str) -> None:
        if not cond:
            out[tag].append(what)

    for p in net.places:
        need("o", p in P and tn.part.get(p) == 0 and lam.get(p) == p, f"place {p}")
    for t in net.transitions:
        need("o", t in T and tn.part.get(t) == 0 and lam.get(t) == t, f"transition {t}")
    for arc in net.flow:
        need("o", arc in F, f"arc {arc}")
    need("o", {t for t in T if tn.part[t] == 0} == set(net.transitions), "original transitions")

    for i in subnets:
        for p in net.places:
            cp = nm.place_copy(p, i)
            need("s1", cp in P and tn.part.get(cp) == i and lam.get(cp) == p, cp)
        need("s2", nm.init(i) in P and tn.part.get(nm.init(i)) == i, nm.init(i))
        for t in net.transitions:
            for s, q in net.transit_pairs(t):
                if s == START:
                    x = nm.start(t, q, i)
                    need(
                        "s3",
                        x in T and (nm.init(i), x) in F and (x, nm.place_copy(q, i)) in F
                        and lam.get(x) == t and tn.part.get(x) == i,
                        x,
                    )
                else:
                    x = nm.transit(t, s, q, i)
                    need(
                        "s4",
                        x in T and (nm.place_copy(s, i), x) in F and (x, nm.place_copy(q, i)) in F
                        and lam.get(x) == t and tn.part.get(x) == i,
                        x,
                    )
            x = nm.skip(t, i)
            need(
                "s5",
                x in T and all((nm.place_copy(p, i), x) in inh for p in net.pre[t])
                and lam.get(x) == t and tn.part.get(x) == i,
                x,
            )
    need("a", nm.ACT_ORIGINAL in P and tn.part.get(nm.ACT_ORIGINAL) == 0, nm.ACT_ORIGINAL)
    for i in subnets:
        for t in net.transitions:
            a = nm.act(t, i)
            need("a", a in P and tn.part.get(a) == i, a)
    for t in net.transitions:
        first = nm.act(t, 1) if n else nm.ACT_ORIGINAL
        need("mO", (nm.ACT_ORIGINAL, t) in F and (t, first) in F, t)
    for i in subnets:
        for x in N.transitions:
            if tn.part[x] != i:
                continue
            t = lam[x]
            if i < n:
                need("mSi", (nm.act(t, i), x) in F and (x, nm.act(t, i + 1)) in F, x)
            else:
                need("mSn", (nm.act(t, n), x) in F and (x, nm.ACT_ORIGINAL) in F, x)
    want = {nm.ACT_ORIGINAL} | {nm.init(i) for i in subnets} | set(net.initial)
    need("in", N.initial == want, f"initial marking {sorted(N.initial)}")

    # smallest sets: nothing beyond the demanded elements and arcs
    demanded_p = set(net.places) | {nm.ACT_ORIGINAL}
    demanded_t = set(net.transitions)
    demanded_f = set(net.flow)
    demanded_inh = set()
    for t in net.transitions:
        demanded_f |= {(nm.ACT_ORIGINAL, t), (t, nm.act(t, 1) if n else nm.ACT_ORIGINAL)}
    for i in subnets:
        demanded_p |= {nm.place_copy(p, i) for p in net.places} | {nm.init(i)}
        demanded_p |= {nm.act(t, i) for t in net.transitions}
        for t in net.transitions:
            nxt = nm.act(t, i + 1) if i < n else nm.ACT_ORIGINAL
            xs = []
            for s, q in net.transit_pairs(t):
                if s == START:
                    x = nm.start(t, q, i)
                    demanded_f |= {(nm.init(i), x), (x, nm.place_copy(q, i))}
                else:
                    x = nm.transit(t, s, q, i)
                    demanded_f |= {(nm.place_copy(s, i), x), (x, nm.place_copy(q, i))}
                xs.append(x)
            x = nm.skip(t, i)
            demanded_inh |= {(nm.place_copy(p, i), x) for p in net.pre[t]}
            xs.append(x)
            demanded_t |= set(xs)
            for x in xs:
                demanded_f |= {(nm.act(t, i), x), (x, nxt)}
    need("minimal", P == demanded_p, f"places {sorted(P ^ demanded_p)}")
    need("minimal", T == demanded_t, f"transitions {sorted(T ^ demanded_t)}")
    need("minimal", set(F) == demanded_f, f"arcs {sorted(set(F) ^ demanded_f)}")
    need("minimal", inh == demanded_inh, f"inhibitor arcs {sorted(inh ^ demanded_inh)}")
    return out


# counterexample lifting -----------------------------------------------------


def _chain_move(net: Net, chain: FlowChain, cursor: int, t: str) -> int:
    """Index of the chain place after ``t`` consumed ``chain.places[cursor]``."""
    nxt = cursor + 1
    if nxt >= len(chain.places):
        if chain.loop is None:
            raise MappingError(
                f"chain ends in {chain.places[cursor]!r}, which {t!r} consumes without a transit; "
                "the tracking subnet cannot follow it"
            )
        nxt = chain.loop
    if cursor >= len(chain.transitions) or chain.transitions[cursor] != t:
        raise MappingError(f"chain does not move with {t!r} at place {chain.places[cursor]!r}")
    if (chain.places[cursor], chain.places[nxt]) not in net.transit_pairs(t):
        raise MappingError(f"{t!r} has no transit {chain.places[cursor]} -> {chain.places[nxt]}")
    return nxt


def lift_counterexample(
    tn: InhibitorNet, seq: FiringSequence, chains: Sequence[Optional[FlowChain]]
) -> FiringSequence:
    """Interleave every original step with one step of each subnet.

    Subnet ``i`` follows ``chains[i-1]`` (or only skips when it is None).
    For lassos the joint position of sequence and chains is walked until
    it repeats, so the result may unroll the original period.
    """
    net = tn.source
    n = tn.n
    if len(chains) != n:
        raise MappingError(f"expected {n} chain slots, got {len(chains)}")
    seq.validate(net)
    nm = Naming
    NOT_STARTED = -1
    cursors = [NOT_STARTED] * n
    out: list[str] = []
    seen: dict[tuple, int] = {}
    pos: Optional[int] = 0 if seq.steps else None
    lasso_at: Optional[int] = None
    while pos is not None:
        state = (pos, tuple(cursors))
        if state in seen:
            lasso_at = seen[state]
            break
        seen[state] = len(out)
        t = seq.steps[pos][1]
        out.append(t)
        for i, chain in enumerate(chains, start=1):
            c = cursors[i - 1]
            move = nm.skip(t, i)
            if chain is not None:
                if c == NOT_STARTED:
                    if pos == chain.start_step:
                        q = chain.places[0]
                        if (START, q) not in net.transit_pairs(t):
                            raise MappingError(f"{t!r} does not start a chain in {q!r}")
                        move = nm.start(t, q, i)
                        cursors[i - 1] = 0
                elif chain.places[c] in net.pre[t]:
                    nxt = _chain_move(net, chain, c, t)
                    move = nm.transit(t, chain.places[c], chain.places[nxt], i)
                    cursors[i - 1] = nxt
            out.append(move)
        pos = seq.next_index(pos)
    for i, chain in enumerate(chains):
        if chain is not None and cursors[i] == NOT_STARTED:
            raise MappingError(f"chain for subnet {i + 1} never starts")
    return FiringSequence.replay(tn.net, out, lasso_at)


# counterexample projection --------------------------------------------------


@dataclass(frozen=True)
class MappedBack:
    sequence: FiringSequence
    chains: tuple[Optional[FlowChain], ...]
    # per subnet: positions (index after the move in the transformed sequence)
    positions: tuple[tuple[int, ...], ...]

    def __iter__(self) -> Iterator:
        yield self.sequence
        yield self.chains


def align_blocks(tseq: FiringSequence, n: int) -> FiringSequence:
    """Unroll a lasso so that its loop starts at an original step."""
    if tseq.lasso_start is None:
        return tseq
    block = n + 1
    period = len(tseq.steps) - tseq.lasso_start
    if period % block:
        raise MappingError("lasso period is not a whole number of activation rounds")
    start = -(-tseq.lasso_start // block) * block
    if start == tseq.lasso_start:
        return tseq
    return tseq.unrolled(start, 1)


def map_counterexample_back(tn: InhibitorNet, tseq: FiringSequence) -> MappedBack:
    """Project a transformed firing sequence onto the original net and
    rebuild the chain tracked by each subnet."""
    n = tn.n
    block = n + 1
    tseq.validate(tn.net)
    tseq = align_blocks(tseq, n)
    originals = set(tn.source.places)
    trans = tseq.transitions
    for k, t in enumerate(trans):
        if tn.part[t] != k % block:
            raise MappingError(f"step {k} fires {t!r} out of activation phase")
    steps = []
    for j in range(0, len(trans), block):
        steps.append((tseq.steps[j][0] & originals, trans[j]))
    lasso = None if tseq.lasso_start is None else tseq.lasso_start // block
    seq = FiringSequence(tuple(steps), tseq.final & originals, lasso)

    chains: list[Optional[FlowChain]] = []
    positions: list[tuple[int, ...]] = []
    for i in range(1, n + 1):
        chain, pos = _collect_chain(tn, tseq, i)
        chains.append(chain)
        positions.append(pos)
    return MappedBack(seq, tuple(chains), tuple(positions))


def _collect_chain(tn: InhibitorNet, tseq: FiringSequence, i: int):
    block = tn.n + 1
    places: list[str] = []
    trans: list[str] = []
    steps: list[int] = []
    pos: list[int] = []
    start_step = None
    loop_index = None  # number of moves made before the loop entry
    L = tseq.lasso_start
    for k, t in enumerate(tseq.transitions):
        if L is not None and k == L:
            loop_index = len(trans)
        if tn.part[t] != i:
            continue
        role = tn.roles[t]
        if role[0] == "start":
            start_step = k // block
            places.append(role[1])
            pos.append(k + 1)
        elif role[0] == "transit":
            if not places or places[-1] != role[1]:
                raise MappingError(f"transit {t!r} does not continue the tracked chain")
            trans.append(tn.label[t])
            places.append(role[2])
            steps.append(k // block)
            pos.append(k + 1)
    if start_step is None:
        return None, ()
    if L is None or loop_index is None or loop_index == len(trans):
        # no move inside the loop: the chain stays put from some point on
        return FlowChain(tuple(places), tuple(trans), start_step, tuple(steps), None), tuple(pos)
    if places[-1] != places[loop_index]:
        raise MappingError("tracked chain does not close over the lasso")
    chain = FlowChain(tuple(places[:-1]), tuple(trans), start_step, tuple(steps), loop_index)
    return chain.normalized(), tuple(pos)
