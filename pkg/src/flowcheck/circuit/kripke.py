"""Simulation of circuits and their Kripke structures."""
from __future__ import annotations

from typing import Iterable, Sequence

from ..mc.kripke import Kripke
from ..mc.prop import Expr, compile_expr
from .aig import Circuit

# above this many inputs, successors are computed from representative inputs
EXHAUSTIVE_INPUT_LIMIT = 10


def simulate(c: Circuit, input_sequence: Sequence[Iterable[str]]) -> list[frozenset[str]]:
    """Outputs that hold at each step, starting from the reset state."""
    step = c.step_function()
    latches = c.reset_mask
    out = []
    for names in input_sequence:
        o, latches = step(c.encode_inputs(names), latches)
        out.append(c.decode_outputs(o))
    return out


class CircuitKripke(Kripke):
    """States are ``(output bits, next latch bits)``; labels are the outputs.

    A state's successors come from applying every input valuation to its
    next-latch values.  With more than :data:`EXHAUSTIVE_INPUT_LIMIT` inputs
    only the empty input, the one-hot inputs and one two-hot input are
    applied.  For circuits built by :func:`encode_net` this loses nothing,
    because every input that fires no valid transition behaves like the empty
    one.
    """

    def __init__(self, circuit: Circuit, exhaustive: bool | None = None):
        self.circuit = circuit
        self.step = circuit.step_function()
        k = len(circuit.inputs)
        if exhaustive is None:
            exhaustive = k <= EXHAUSTIVE_INPUT_LIMIT
        if exhaustive:
            self.input_values = list(range(1 << k))
        else:
            self.input_values = [0] + [1 << j for j in range(k)] + ([3] if k >= 2 else [])
        self._cache: dict[int, list[tuple[int, int]]] = {}

    def _apply(self, latches: int) -> list[tuple[int, int]]:
        got = self._cache.get(latches)
        if got is None:
            seen = dict.fromkeys(self.step(i, latches) for i in self.input_values)
            got = list(seen)
            self._cache[latches] = got
        return got

    def initial_states(self):
        return self._apply(self.circuit.reset_mask)

    def successors(self, s):
        return self._apply(s[1])

    def label(self, s):
        return self.circuit.decode_outputs(s[0])

    def compile(self, e: Expr):
        index = self.circuit.output_index

        def bits(names):
            if any(x not in index for x in names):
                return None
            m = 0
            for x in names:
                m |= 1 << index[x]
            return m

        def any_code(names):
            m = bits([x for x in names if x in index])
            return f"(s[0] & {m})" if m else "False"

        def all_code(names):
            m = bits(names)
            return "False" if m is None else f"(s[0] & {m}) == {m}"

        return compile_expr(e, any_code, all_code)


__all__ = ["CircuitKripke", "EXHAUSTIVE_INPUT_LIMIT", "simulate"]
