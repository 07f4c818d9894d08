"""Line-oriented text format for nets.

    .name NAME
    .place NAME [init]
    .transition NAME [weakfair]
    .flow T : P1 P2 -> Q1 Q2
    .transit T : P -> Q          (P may be '>' for a chain start)
    .inhibitor T : P

A token starting with ``#`` at a token boundary begins a comment.
"""
from __future__ import annotations

from .net import START, Net, NetError, valid_name


class NetSyntaxError(NetError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


def _strip_comment(line: str) -> list[str]:
    tokens = []
    for tok in line.split():
        if tok.startswith("#"):
            break
        tokens.append(tok)
    return tokens


def parse_net(text: str, allow_inhibitors: bool = True) -> Net:
    name = "net"
    places: list[str] = []
    initial: list[str] = []
    transitions: list[str] = []
    fair: list[str] = []
    flow: list[tuple[str, str]] = []
    transits: dict[str, list[tuple[str, str]]] = {}
    inhibitors: list[tuple[str, str]] = []
    declared: dict[str, str] = {}
    refs: list[tuple[int, str, str]] = []

    def declare(lineno: int, kind: str, ident: str) -> None:
        if not valid_name(ident):
            raise NetSyntaxError(lineno, f"invalid name {ident!r}")
        if ident in declared:
            raise NetSyntaxError(lineno, f"duplicate name {ident!r}")
        declared[ident] = kind

    for lineno, raw in enumerate(text.splitlines(), start=1):
        toks = _strip_comment(raw)
        if not toks:
            continue
        kw, args = toks[0], toks[1:]
        if kw == ".name":
            if len(args) != 1:
                raise NetSyntaxError(lineno, ".name takes one argument")
            name = args[0]
        elif kw == ".place":
            if not args or len(args) > 2 or (len(args) == 2 and args[1] != "init"):
                raise NetSyntaxError(lineno, "expected '.place NAME [init]'")
            declare(lineno, "place", args[0])
            places.append(args[0])
            if len(args) == 2:
                initial.append(args[0])
        elif kw == ".transition":
            if not args or len(args) > 2 or (len(args) == 2 and args[1] != "weakfair"):
                raise NetSyntaxError(lineno, "expected '.transition NAME [weakfair]'")
            declare(lineno, "transition", args[0])
            transitions.append(args[0])
            if len(args) == 2:
                fair.append(args[0])
        elif kw in (".flow", ".transit", ".inhibitor"):
            if len(args) < 2 or args[1] != ":":
                raise NetSyntaxError(lineno, f"expected '{kw} T : ...'")
            t, rest = args[0], args[2:]
            refs.append((lineno, t, "transition"))
            if kw == ".flow":
                if rest.count("->") != 1:
                    raise NetSyntaxError(lineno, "flow needs exactly one '->'")
                k = rest.index("->")
                for p in rest[:k]:
                    refs.append((lineno, p, "place"))
                    flow.append((p, t))
                for q in rest[k + 1:]:
                    refs.append((lineno, q, "place"))
                    flow.append((t, q))
            elif kw == ".transit":
                if len(rest) != 3 or rest[1] != "->":
                    raise NetSyntaxError(lineno, "expected '.transit T : P -> Q'")
                src, dst = rest[0], rest[2]
                if src != START:
                    refs.append((lineno, src, "place"))
                refs.append((lineno, dst, "place"))
                transits.setdefault(t, []).append((src, dst))
            else:
                if not allow_inhibitors:
                    raise NetSyntaxError(lineno, "inhibitor arcs are not allowed here")
                if len(rest) != 1:
                    raise NetSyntaxError(lineno, "expected '.inhibitor T : P'")
                refs.append((lineno, rest[0], "place"))
                inhibitors.append((rest[0], t))
        else:
            raise NetSyntaxError(lineno, f"unknown directive {kw!r}")

    for lineno, ident, kind in refs:
        if declared.get(ident) != kind:
            raise NetSyntaxError(lineno, f"reference to undeclared {kind} {ident!r}")
    try:
        return Net.build(places, transitions, flow, initial, transits, inhibitors, fair, name)
    except NetError as exc:
        raise NetSyntaxError(0, str(exc)) from exc


def print_net(net: Net) -> str:
    lines = [f".name {net.name}"]
    for p in net.places:
        lines.append(f".place {p}" + (" init" if p in net.initial else ""))
    for t in net.transitions:
        lines.append(f".transition {t}" + (" weakfair" if t in net.weak_fair else ""))
    for t in net.transitions:
        pre, post = sorted(net.pre[t]), sorted(net.post[t])
        if pre or post:
            lines.append(f".flow {t} : {' '.join(pre + ['->'] + post)}")
    for t in net.transitions:
        for s, q in sorted(net.transit_pairs(t)):
            lines.append(f".transit {t} : {s} -> {q}")
    for t in net.transitions:
        for p in sorted(net.inhibitor_places(t)):
            lines.append(f".inhibitor {t} : {p}")
    return "\n".join(lines) + "\n"
