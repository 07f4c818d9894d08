"""LTL checking of nets and the end-to-end Flow-LTL pipeline."""
from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from ..logic.ast import Ltl, Not, RunFormula, flow_subformulas
from ..logic.evaluate import eval_ltl_lasso
from ..logic.oracle import eval_flow_ltl_oracle
from ..logic.syntax import format_formula
from ..pnwt.net import Net
from ..pnwt.sequences import FiringSequence, FlowChain, Trace, trace_of_chain
from ..transform.formula import transform_formula
from ..transform.net import InhibitorNet, map_counterexample_back, transform_net
from .kripke import Kripke, NetKripke
from .onthefly import LetterProduct
from .product import DEFAULT_STATE_CAP, Lasso, StateCapExceeded, find_accepting_lasso

VERIFIED = "verified"
COUNTEREXAMPLE = "counterexample"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class LtlResult:
    verdict: str
    sequence: Optional[FiringSequence] = None
    reason: str = ""

    @property
    def holds(self) -> Optional[bool]:
        return {VERIFIED: True, COUNTEREXAMPLE: False}.get(self.verdict)


def _as_net(net) -> Net:
    return net.net if isinstance(net, InhibitorNet) else net


def check_ltl(net, phi: Ltl, cap: int = DEFAULT_STATE_CAP) -> LtlResult:
    """Does every (finite or infinite) firing sequence of ``net`` satisfy ``phi``?"""
    net = _as_net(net)
    kripke = NetKripke(net)
    product = LetterProduct(kripke, Not(phi))
    try:
        lasso = find_accepting_lasso(product, cap)
    except StateCapExceeded as exc:
        return LtlResult(INCONCLUSIVE, reason=str(exc))
    if lasso is None:
        return LtlResult(VERIFIED)
    return LtlResult(COUNTEREXAMPLE, kripke.to_sequence(lasso.states, lasso.loop))


def lasso_falsifies(kripke: Kripke, lasso: Lasso, phi: Ltl) -> bool:
    labels = [kripke.label(s) for s in lasso.states]
    return not eval_ltl_lasso(phi, Trace(tuple(labels[: lasso.loop]), tuple(labels[lasso.loop:])))


def _bounded_product_lasso(product: LetterProduct, k: int, cap: int) -> Optional[Lasso]:
    """Accepting lasso with at most ``k`` states, by breadth-first layers."""
    parent: dict = {}
    depth: dict = {}
    queue: deque = deque()
    for x in product.initial():
        if x not in depth:
            depth[x] = 0
            parent[x] = None
            queue.append(x)
    order = []
    while queue:
        x = queue.popleft()
        order.append(x)
        if depth[x] + 1 >= k:
            continue
        for y in product.successors(x):
            if y not in depth:
                if len(depth) >= cap:
                    raise StateCapExceeded(cap)
                depth[y] = depth[x] + 1
                parent[y] = x
                queue.append(y)
    for x in order:
        if not product.accepting(x):
            continue
        budget = k - depth[x]
        # shortest cycle through x within budget; the loop may start before x
        back: dict = {x: None}
        frontier = [x]
        for _ in range(budget):
            nxt = []
            for y in frontier:
                for z in product.successors(y):
                    if z == x:
                        cycle = [y]
                        while back[cycle[-1]] is not None:
                            cycle.append(back[cycle[-1]])
                        cycle.reverse()
                        prefix = []
                        w = parent[x]
                        while w is not None:
                            prefix.append(w)
                            w = parent[w]
                        prefix.reverse()
                        states = prefix + cycle
                        return Lasso(tuple(s for s, _ in states), len(prefix))
                    if z not in back:
                        back[z] = y
                        nxt.append(z)
            frontier = nxt
    return None


def _enumerate_lassos(kripke: Kripke, k: int):
    """All Kripke paths with a closing edge, at most ``k`` states."""
    path: list = []

    def go(succs):
        for s in succs:
            path.append(s)
            nxt = kripke.successors(s)
            for i, earlier in enumerate(path):
                if earlier in nxt:
                    yield Lasso(tuple(path), i)
            if len(path) < k:
                yield from go(nxt)
            path.pop()

    yield from go(kripke.initial_states())


def bmc_search(net, phi: Ltl, k: int, strategy: str = "product", cap: int = DEFAULT_STATE_CAP) -> Optional[FiringSequence]:
    """Search lassos with at most ``k`` positions for one that falsifies ``phi``.

    ``strategy="product"`` searches bounded accepting lassos of the product
    with the negated formula's automaton; ``"enumerate"`` walks all Kripke
    lassos and evaluates each directly.  Every returned lasso is checked
    with the lasso evaluator.
    """
    net = _as_net(net)
    kripke = NetKripke(net)
    if strategy == "enumerate":
        for lasso in _enumerate_lassos(kripke, k):
            if lasso_falsifies(kripke, lasso, phi):
                return kripke.to_sequence(lasso.states, lasso.loop)
        return None
    if strategy != "product":
        raise ValueError(f"unknown strategy {strategy!r}")
    product = LetterProduct(kripke, Not(phi))
    lasso = _bounded_product_lasso(product, k, cap)
    if lasso is None:
        return None
    if not lasso_falsifies(kripke, lasso, phi):
        raise AssertionError("bounded search produced a lasso that satisfies the formula")
    return kripke.to_sequence(lasso.states, lasso.loop)


# Flow-LTL pipeline -------------------------------------------------------------


@dataclass(frozen=True)
class Counterexample:
    transformed: FiringSequence
    mapped_original: FiringSequence
    mapped_chains: tuple[Optional[FlowChain], ...]
    oracle_confirmed: bool


@dataclass(frozen=True)
class FlowResult:
    verdict: str
    counterexample: Optional[Counterexample] = None
    reason: str = ""
    tnet: Optional[InhibitorNet] = field(default=None, repr=False)
    ltl: Optional[Ltl] = field(default=None, repr=False)
    seconds: float = 0.0

    @property
    def holds(self) -> Optional[bool]:
        return {VERIFIED: True, COUNTEREXAMPLE: False}.get(self.verdict)


def reduce_flow_ltl(net: Net, phi: RunFormula, check_safety: bool = True) -> tuple[InhibitorNet, Ltl]:
    n = len(flow_subformulas(phi))
    tn = transform_net(net, n, check_safety=check_safety)
    return tn, transform_formula(net, phi, tn)


def check_flow_ltl(
    net: Net,
    phi: RunFormula,
    engine: str = "explicit",
    bound: int = 20,
    cap: int = DEFAULT_STATE_CAP,
    check_safety: bool = True,
) -> FlowResult:
    start = time.perf_counter()
    tn, ltl = reduce_flow_ltl(net, phi, check_safety)
    if engine == "explicit":
        res = check_ltl(tn.net, ltl, cap)
        verdict, seq, reason = res.verdict, res.sequence, res.reason
    elif engine == "bmc":
        try:
            seq = bmc_search(tn.net, ltl, bound, cap=cap)
        except StateCapExceeded as exc:
            seq, reason = None, str(exc)
        else:
            reason = f"no counterexample within bound {bound}"
        verdict = COUNTEREXAMPLE if seq is not None else INCONCLUSIVE
    else:
        raise ValueError(f"unknown engine {engine!r}")
    cex = None
    if seq is not None:
        mapped = map_counterexample_back(tn, seq)
        confirmed = not eval_flow_ltl_oracle(net, mapped.sequence, phi)
        cex = Counterexample(seq, mapped.sequence, mapped.chains, confirmed)
    return FlowResult(verdict, cex, reason if seq is None else "", tn, ltl, time.perf_counter() - start)


# reports -------------------------------------------------------------------------


def _format_sequence(seq: FiringSequence) -> list[str]:
    lines = []
    for i, (m, t) in enumerate(seq.steps):
        mark = "  loop ->" if seq.lasso_start == i else "         "
        lines.append(f"{mark} {i:3d}  {{{', '.join(sorted(m))}}}  --{t}-->")
    if seq.lasso_start is None:
        lines.append(f"          end  {{{', '.join(sorted(seq.final))}}}  (stutters)")
    else:
        lines.append(f"          back to step {seq.lasso_start}")
    return lines


def _format_chain(chain: FlowChain) -> str:
    parts = list(chain.elements)
    if chain.loop is None:
        return " ".join(parts) + "  (stays)"
    head = parts[: 2 * chain.loop]
    loop = parts[2 * chain.loop:]
    return " ".join(head + ["("] + loop + [")^omega"])


def format_report(net: Net, phi: RunFormula, result: FlowResult) -> str:
    lines = [f"formula: {format_formula(phi)}", f"verdict: {result.verdict}"]
    if result.reason:
        lines.append(f"reason: {result.reason}")
    cex = result.counterexample
    if cex is None:
        return "\n".join(lines) + "\n"
    lines.append(f"oracle confirmed: {'yes' if cex.oracle_confirmed else 'no'}")
    lines.append("transformed firing sequence:")
    lines += _format_sequence(cex.transformed)
    lines.append("original firing sequence:")
    lines += _format_sequence(cex.mapped_original)
    flows = flow_subformulas(phi)
    for i, chain in enumerate(cex.mapped_chains, start=1):
        if chain is None:
            lines.append(f"flow subformula {i}: no chain tracked")
            continue
        ok = eval_ltl_lasso(flows[i - 1].formula, trace_of_chain(chain))
        lines.append(f"flow subformula {i}: {format_formula(flows[i - 1])}")
        lines.append(f"  chain: {_format_chain(chain)}  [{'satisfies' if ok else 'violates'}]")
    return "\n".join(lines) + "\n"


def format_ltl_report(phi: Ltl, result: LtlResult) -> str:
    lines = [f"formula: {format_formula(phi)}", f"verdict: {result.verdict}"]
    if result.reason:
        lines.append(f"reason: {result.reason}")
    if result.sequence is not None:
        lines.append("firing sequence:")
        lines += _format_sequence(result.sequence)
    return "\n".join(lines) + "\n"


__all__ = [
    "COUNTEREXAMPLE",
    "INCONCLUSIVE",
    "VERIFIED",
    "Counterexample",
    "FlowResult",
    "LtlResult",
    "bmc_search",
    "check_flow_ltl",
    "check_ltl",
    "format_ltl_report",
    "format_report",
    "reduce_flow_ltl",
]
