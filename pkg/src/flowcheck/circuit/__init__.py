"""Circuit encoding of nets, AIGER exchange and circuit simulation."""
from .aig import FALSE, TRUE, AigBuilder, Circuit, neg, sweep
from .aiger import AigerError, parse_aiger, to_aiger
from .encode import ERROR_LATCH, ERROR_OUTPUT, INIT_LATCH, encode_net, output_name, wrap_formula_for_circuit
from .kripke import EXHAUSTIVE_INPUT_LIMIT, CircuitKripke, simulate

__all__ = [
    "FALSE",
    "TRUE",
    "AigBuilder",
    "AigerError",
    "Circuit",
    "CircuitKripke",
    "ERROR_LATCH",
    "ERROR_OUTPUT",
    "EXHAUSTIVE_INPUT_LIMIT",
    "INIT_LATCH",
    "encode_net",
    "neg",
    "output_name",
    "parse_aiger",
    "simulate",
    "sweep",
    "to_aiger",
    "wrap_formula_for_circuit",
]
