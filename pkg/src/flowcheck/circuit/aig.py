"""And-inverter graphs with AIGER literal conventions.

Variable ``v`` has literal ``2*v``; odd literals are negations; literal 0 is
false and 1 is true.  Inputs come first, then latches, then AND gates, so an
AND gate's operands always have smaller literals than its output.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable

FALSE = 0
TRUE = 1


def neg(lit: int) -> int:
    return lit ^ 1


@dataclass(frozen=True)
class Circuit:
    """A sequential AIG: all latches reset to ``latch_reset`` (0 by default)."""

    inputs: tuple[str, ...]
    latches: tuple[str, ...]
    latch_next: tuple[int, ...]
    outputs: tuple[str, ...]
    output_lits: tuple[int, ...]
    ands: tuple[tuple[int, int, int], ...]
    latch_reset: tuple[int, ...] = ()
    comments: tuple[str, ...] = ()
    _fn: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if not self.latch_reset:
            object.__setattr__(self, "latch_reset", (0,) * len(self.latches))

    @property
    def max_var(self) -> int:
        return len(self.inputs) + len(self.latches) + len(self.ands)

    def input_lit(self, k: int) -> int:
        return 2 * (k + 1)

    def latch_lit(self, k: int) -> int:
        return 2 * (len(self.inputs) + k + 1)

    @cached_property
    def output_index(self) -> dict[str, int]:
        return {name: k for k, name in enumerate(self.outputs)}

    @cached_property
    def input_index(self) -> dict[str, int]:
        return {name: k for k, name in enumerate(self.inputs)}

    @cached_property
    def reset_mask(self) -> int:
        return sum(b << k for k, b in enumerate(self.latch_reset))

    def step_function(self) -> Callable[[int, int], tuple[int, int]]:
        """``(input bits, latch bits) -> (output bits, next latch bits)``."""
        fn = self._fn.get("step")
        if fn is None:
            fn = _compile(self)
            self._fn["step"] = fn
        return fn

    def step(self, inputs: int, latches: int) -> tuple[int, int]:
        return self.step_function()(inputs, latches)

    def decode_outputs(self, bits: int) -> frozenset[str]:
        return frozenset(name for k, name in enumerate(self.outputs) if bits >> k & 1)

    def encode_inputs(self, names: Iterable[str]) -> int:
        bits = 0
        for name in names:
            bits |= 1 << self.input_index[name]
        return bits


def _compile(c: Circuit) -> Callable[[int, int], tuple[int, int]]:
    def lit(x: int) -> str:
        if x < 2:
            return str(x)
        return f"v{x >> 1}" if x % 2 == 0 else f"(1 ^ v{x >> 1})"

    lines = ["def step(inp, lat):"]
    for k in range(len(c.inputs)):
        lines.append(f"    v{k + 1} = (inp >> {k}) & 1")
    base = len(c.inputs)
    for k in range(len(c.latches)):
        lines.append(f"    v{base + k + 1} = (lat >> {k}) & 1")
    for lhs, a, b in c.ands:
        lines.append(f"    v{lhs >> 1} = {lit(a)} & {lit(b)}")

    def pack(lits) -> str:
        terms = [lit(x) if k == 0 else f"({lit(x)} << {k})" for k, x in enumerate(lits)]
        return " | ".join(terms) if terms else "0"

    lines.append(f"    return ({pack(c.output_lits)}), ({pack(c.latch_next)})")
    env: dict = {}
    exec("\n".join(lines), env)
    return env["step"]


class AigBuilder:
    """Builds a :class:`Circuit` with structural hashing and constant folding.

    Declare every input and latch before creating the first gate.
    """

    def __init__(self):
        self.inputs: list[str] = []
        self.latches: list[str] = []
        self.latch_next: list[int | None] = []
        self.outputs: list[tuple[str, int]] = []
        self.ands: list[tuple[int, int, int]] = []
        self._hash: dict[tuple[int, int], int] = {}

    def _fresh(self) -> int:
        return 2 * (len(self.inputs) + len(self.latches) + len(self.ands) + 1)

    def input(self, name: str) -> int:
        if self.ands:
            raise RuntimeError("inputs must be declared before gates")
        if self.latches:
            raise RuntimeError("inputs must be declared before latches")
        lit = self._fresh()
        self.inputs.append(name)
        return lit

    def latch(self, name: str) -> int:
        if self.ands:
            raise RuntimeError("latches must be declared before gates")
        lit = self._fresh()
        self.latches.append(name)
        self.latch_next.append(None)
        return lit

    def set_next(self, latch_lit: int, next_lit: int) -> None:
        self.latch_next[(latch_lit >> 1) - len(self.inputs) - 1] = next_lit

    def output(self, name: str, lit: int) -> None:
        self.outputs.append((name, lit))

    def AND(self, a: int, b: int) -> int:
        if a == FALSE or b == FALSE or a == neg(b):
            return FALSE
        if a == TRUE or a == b:
            return b
        if b == TRUE:
            return a
        key = (a, b) if a > b else (b, a)
        lit = self._hash.get(key)
        if lit is None:
            lit = self._fresh()
            self.ands.append((lit, key[0], key[1]))
            self._hash[key] = lit
        return lit

    def OR(self, a: int, b: int) -> int:
        return neg(self.AND(neg(a), neg(b)))

    def implies(self, a: int, b: int) -> int:
        return self.OR(neg(a), b)

    def mux(self, sel: int, then: int, other: int) -> int:
        return self.OR(self.AND(sel, then), self.AND(neg(sel), other))

    def all_of(self, lits: Iterable[int]) -> int:
        out = TRUE
        for x in lits:
            out = self.AND(out, x)
        return out

    def any_of(self, lits: Iterable[int]) -> int:
        return neg(self.all_of(neg(x) for x in lits))

    def build(self, comments: Iterable[str] = ()) -> Circuit:
        if any(x is None for x in self.latch_next):
            raise RuntimeError("every latch needs a next-state function")
        return Circuit(
            inputs=tuple(self.inputs),
            latches=tuple(self.latches),
            latch_next=tuple(self.latch_next),  # type: ignore[arg-type]
            outputs=tuple(n for n, _ in self.outputs),
            output_lits=tuple(x for _, x in self.outputs),
            ands=tuple(self.ands),
            comments=tuple(comments),
        )


def sweep(c: Circuit) -> Circuit:
    """Drop gates outside the cone of outputs and latches; renumber in order."""
    first_gate = len(c.inputs) + len(c.latches) + 1
    by_var = {lhs >> 1: (a, b) for lhs, a, b in c.ands}
    live: set[int] = set()
    stack = [x >> 1 for x in (*c.latch_next, *c.output_lits)]
    while stack:
        v = stack.pop()
        if v < first_gate or v in live:
            continue
        live.add(v)
        a, b = by_var[v]
        stack += [a >> 1, b >> 1]
    renum = {v: v for v in range(first_gate)}
    for k, v in enumerate(sorted(live)):
        renum[v] = first_gate + k

    def r(lit: int) -> int:
        return 2 * renum[lit >> 1] + (lit & 1)

    ands = []
    for v in sorted(live):
        a, b = by_var[v]
        a, b = r(a), r(b)
        ands.append((2 * renum[v], max(a, b), min(a, b)))
    return Circuit(
        c.inputs,
        c.latches,
        tuple(r(x) for x in c.latch_next),
        c.outputs,
        tuple(r(x) for x in c.output_lits),
        tuple(ands),
        c.latch_reset,
        c.comments,
    )
