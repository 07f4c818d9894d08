from .net import START, FiringError, Net, NetError, SafetyError
from .netfile import NetSyntaxError, parse_net, print_net
from .run import InducedRun, induced_run
from .semantics import enabled, fire, reachable_markings, successors, validate_safe
from .sequences import (
    FiringSequence,
    FlowChain,
    Trace,
    replay_chain,
    trace_of_chain,
    trace_of_sequence,
    track_chains,
)

__all__ = [
    "START",
    "FiringError",
    "FiringSequence",
    "FlowChain",
    "InducedRun",
    "Net",
    "NetError",
    "NetSyntaxError",
    "SafetyError",
    "Trace",
    "enabled",
    "fire",
    "induced_run",
    "parse_net",
    "print_net",
    "reachable_markings",
    "replay_chain",
    "successors",
    "trace_of_chain",
    "trace_of_sequence",
    "track_chains",
    "validate_safe",
]
