"""Cross-check of net-level LTL checking against the circuit encoding."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

# module imports: the circuit package itself builds on this one
from ..circuit import encode as circuit_encode
from ..circuit import kripke as circuit_kripke
from ..logic.ast import Ltl, Not
from ..logic.evaluate import eval_ltl_lasso
from ..pnwt.net import FiringError, Net
from ..pnwt.sequences import FiringSequence, trace_of_sequence
from .check import COUNTEREXAMPLE, INCONCLUSIVE, VERIFIED, check_ltl
from .onthefly import LetterProduct
from .product import DEFAULT_STATE_CAP, Lasso, StateCapExceeded, find_accepting_lasso


@dataclass(frozen=True)
class CircuitEquivalenceReport:
    net_verdict: str
    circuit_verdict: str
    circuit_states: int
    # firing sequence read off the circuit counterexample, when there is one
    circuit_sequence: Optional[FiringSequence] = None
    circuit_sequence_confirmed: Optional[bool] = None

    @property
    def agree(self) -> Optional[bool]:
        if INCONCLUSIVE in (self.net_verdict, self.circuit_verdict):
            return None
        return self.net_verdict == self.circuit_verdict


def sequence_from_circuit_lasso(net: Net, kripke: "circuit_kripke.CircuitKripke", lasso: Lasso) -> FiringSequence:
    """Firing sequence whose trace coincides with the path after its first state."""
    states = list(lasso.states)
    if lasso.loop >= 1:
        states, loop = states[1:], lasso.loop - 1
    else:
        states, loop = states[1:] + states[:1], 0
    labels = [kripke.label(s) for s in states]
    output_name = circuit_encode.output_name
    place_out = {output_name(p): p for p in net.places}
    trans_out = {output_name(t): t for t in net.transitions}
    steps = []
    for k, lab in enumerate(labels):
        marking = frozenset(place_out[x] for x in lab if x in place_out)
        fired = [trans_out[x] for x in lab if x in trans_out]
        if circuit_encode.ERROR_OUTPUT in lab or not fired:
            return FiringSequence(tuple(steps), marking, None)
        steps.append((marking, fired[0]))
    final = frozenset(place_out[x] for x in labels[loop] if x in place_out)
    return FiringSequence(tuple(steps), final, loop)


def check_circuit_equivalence(net, phi: Ltl, cap: int = DEFAULT_STATE_CAP) -> CircuitEquivalenceReport:
    """Check ``phi`` on the net and the wrapped formula on its circuit."""
    net = getattr(net, "net", net)
    net_verdict = check_ltl(net, phi, cap).verdict
    kripke = circuit_kripke.CircuitKripke(circuit_encode.encode_net(net))
    product = LetterProduct(kripke, Not(circuit_encode.wrap_formula_for_circuit(phi)))
    try:
        lasso = find_accepting_lasso(product, cap)
    except StateCapExceeded:
        return CircuitEquivalenceReport(net_verdict, INCONCLUSIVE, len(kripke._cache))
    if lasso is None:
        return CircuitEquivalenceReport(net_verdict, VERIFIED, len(kripke._cache))
    seq = sequence_from_circuit_lasso(net, kripke, lasso)
    try:
        seq.validate(net)
        confirmed = not eval_ltl_lasso(phi, trace_of_sequence(seq))
    except (FiringError, ValueError):
        confirmed = False
    return CircuitEquivalenceReport(net_verdict, COUNTEREXAMPLE, len(kripke._cache), seq, confirmed)
