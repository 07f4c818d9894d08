"""ASCII AIGER (``aag``) export and import."""
from __future__ import annotations

from .aig import Circuit, sweep


class AigerError(ValueError):
    pass


def to_aiger(c: Circuit) -> bytes:
    """Deterministic ``aag`` text; unused gates are dropped first."""
    c = sweep(c)
    I, L, O, A = len(c.inputs), len(c.latches), len(c.outputs), len(c.ands)
    lines = [f"aag {I + L + A} {I} {L} {O} {A}"]
    lines += [str(c.input_lit(k)) for k in range(I)]
    lines += [f"{c.latch_lit(k)} {nxt} {reset}" for k, (nxt, reset) in enumerate(zip(c.latch_next, c.latch_reset))]
    lines += [str(x) for x in c.output_lits]
    lines += [f"{lhs} {a} {b}" for lhs, a, b in c.ands]
    lines += [f"i{k} {name}" for k, name in enumerate(c.inputs)]
    lines += [f"l{k} {name}" for k, name in enumerate(c.latches)]
    lines += [f"o{k} {name}" for k, name in enumerate(c.outputs)]
    if c.comments:
        lines.append("c")
        lines += list(c.comments)
    return ("\n".join(lines) + "\n").encode()


def _ints(line: str, count: int, lineno: int) -> list[int]:
    try:
        vals = [int(x) for x in line.split()]
    except ValueError:
        raise AigerError(f"line {lineno}: expected integers, got {line!r}") from None
    if len(vals) != count and not (count == 3 and len(vals) == 2):
        raise AigerError(f"line {lineno}: expected {count} integers, got {len(vals)}")
    return vals


def parse_aiger(data: bytes | str) -> Circuit:
    text = data.decode() if isinstance(data, bytes) else data
    lines = text.split("\n")
    header = lines[0].split()
    if len(header) != 6 or header[0] != "aag":
        raise AigerError("only ASCII AIGER with a 'aag M I L O A' header is supported")
    M, I, L, O, A = (int(x) for x in header[1:])
    if M != I + L + A:
        raise AigerError(f"header: M={M} differs from I+L+A={I + L + A}")
    pos = 1

    def take() -> tuple[str, int]:
        nonlocal pos
        if pos >= len(lines):
            raise AigerError("unexpected end of file")
        pos += 1
        return lines[pos - 1], pos

    inputs = []
    for k in range(I):
        line, no = take()
        (lit,) = _ints(line, 1, no)
        if lit != 2 * (k + 1):
            raise AigerError(f"line {no}: inputs must be numbered consecutively")
        inputs.append(lit)
    latch_next, latch_reset = [], []
    for k in range(L):
        line, no = take()
        vals = _ints(line, 3, no)
        if vals[0] != 2 * (I + k + 1):
            raise AigerError(f"line {no}: latches must follow the inputs")
        latch_next.append(vals[1])
        reset = vals[2] if len(vals) == 3 else 0
        if reset not in (0, 1):
            raise AigerError(f"line {no}: unsupported latch reset {reset}")
        latch_reset.append(reset)
    outputs = []
    for _ in range(O):
        line, no = take()
        outputs.append(_ints(line, 1, no)[0])
    ands = []
    for k in range(A):
        line, no = take()
        lhs, a, b = _ints(line, 3, no)
        if lhs != 2 * (I + L + k + 1) or a >= lhs or b >= lhs:
            raise AigerError(f"line {no}: gates must be numbered in topological order")
        ands.append((lhs, a, b))
    names = {"i": [f"i{k}" for k in range(I)], "l": [f"l{k}" for k in range(L)], "o": [f"o{k}" for k in range(O)]}
    comments: list[str] = []
    while pos < len(lines):
        line, no = take()
        if line == "c":
            comments = [x for x in lines[pos:] if x]
            break
        if not line:
            continue
        kind, rest = line[0], line[1:]
        idx, _, name = rest.partition(" ")
        if kind not in names or not idx.isdigit() or int(idx) >= len(names[kind]):
            raise AigerError(f"line {no}: bad symbol entry {line!r}")
        names[kind][int(idx)] = name
    limit = 2 * M + 1
    for x in (*latch_next, *outputs, *(v for g in ands for v in g[1:])):
        if x > limit:
            raise AigerError(f"literal {x} exceeds the maximum variable index")
    return Circuit(
        inputs=tuple(names["i"]),
        latches=tuple(names["l"]),
        latch_next=tuple(latch_next),
        outputs=tuple(names["o"]),
        output_lits=tuple(outputs),
        ands=tuple(ands),
        latch_reset=tuple(latch_reset),
        comments=tuple(comments),
    )
