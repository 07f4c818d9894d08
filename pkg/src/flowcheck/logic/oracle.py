"""Flow-LTL judgement for one fixed firing sequence."""
from __future__ import annotations

from ..pnwt.net import Net
from ..pnwt.sequences import FiringSequence, trace_of_chain, trace_of_sequence, track_chains
from .ast import Flow, RunAnd, RunFormula, RunImplies, RunLtl, RunOr
from .evaluate import eval_ltl_lasso


def eval_flow_ltl_oracle(net: Net, seq: FiringSequence, phi: RunFormula, validate: bool = True) -> bool:
    """Does ``seq`` satisfy ``phi``, with flow formulas ranging over its chains?"""
    if validate:
        seq.validate(net)
    run_trace = trace_of_sequence(seq)
    chains = None

    def ev(f: RunFormula) -> bool:
        nonlocal chains
        if isinstance(f, RunLtl):
            return eval_ltl_lasso(f.formula, run_trace)
        if isinstance(f, RunAnd):
            return ev(f.left) and ev(f.right)
        if isinstance(f, RunOr):
            return ev(f.left) or ev(f.right)
        if isinstance(f, RunImplies):
            return not eval_ltl_lasso(f.antecedent, run_trace) or ev(f.consequent)
        if isinstance(f, Flow):
            if chains is None:
                chains = track_chains(net, seq)
            return all(eval_ltl_lasso(f.formula, trace_of_chain(c)) for c in chains)
        raise TypeError(f)

    return ev(phi)


def violating_chains(net: Net, seq: FiringSequence, flow: Flow):
    return [c for c in track_chains(net, seq) if not eval_ltl_lasso(flow.formula, trace_of_chain(c))]
