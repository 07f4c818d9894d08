"""Topologies, forwarding configurations and concurrent updates, with parsers.

Text formats::

    # topology
    switches = {u, v, x};
    connections = {u - v, v - x};

    # configuration
    ingress = {v};
    v.fwd(u);
    egress = {x};

    # update
    (upd(y.fwd(d)) >> upd(x.fwd(y))) || upd(v.fwd(x))
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union


class SdnError(ValueError):
    pass


class SdnSyntaxError(SdnError):
    def __init__(self, message: str, line: int | None = None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


class SdnValidationError(SdnError):
    """Well-formed text describing an invalid network or update."""


_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


def _check_switch_name(name: str, line: int | None = None) -> str:
    if not _NAME.match(name):
        raise SdnSyntaxError(f"invalid switch name {name!r}", line)
    return name


@dataclass(frozen=True)
class Topology:
    switches: frozenset[str]
    # both directions of every connection
    connections: frozenset[tuple[str, str]]

    @classmethod
    def build(cls, switches, links) -> "Topology":
        sw = frozenset(switches)
        con = set()
        for a, b in links:
            con.add((a, b))
            con.add((b, a))
        top = cls(sw, frozenset(con))
        top.validate()
        return top

    def validate(self) -> None:
        if not self.switches:
            raise SdnValidationError("a topology needs at least one switch")
        if not self.connections:
            raise SdnValidationError("a topology needs at least one connection")
        for a, b in self.connections:
            if a not in self.switches or b not in self.switches:
                raise SdnValidationError(f"connection {a}-{b} mentions an unknown switch")
            if a == b:
                raise SdnValidationError(f"self connection at {a}")
            if (b, a) not in self.connections:
                raise SdnValidationError(f"connection {a}-{b} is not symmetric")
        start = min(self.switches)
        seen = {start}
        stack = [start]
        while stack:
            a = stack.pop()
            for x, y in self.connections:
                if x == a and y not in seen:
                    seen.add(y)
                    stack.append(y)
        if seen != self.switches:
            raise SdnValidationError(f"topology is not connected: {sorted(self.switches - seen)} unreachable")

    def neighbours(self, x: str) -> list[str]:
        return sorted(b for a, b in self.connections if a == x)

    @property
    def links(self) -> list[tuple[str, str]]:
        return sorted((a, b) for a, b in self.connections if a < b)


@dataclass(frozen=True)
class Config:
    ingress: frozenset[str]
    egress: frozenset[str]
    forwarding: tuple[tuple[str, str], ...]

    @classmethod
    def build(cls, ingress, egress, forwarding) -> "Config":
        cfg = cls(frozenset(ingress), frozenset(egress), tuple(sorted(forwarding)))
        sources = [x for x, _ in cfg.forwarding]
        dup = sorted({x for x in sources if sources.count(x) > 1})
        if dup:
            raise SdnValidationError(f"switch {dup[0]} has more than one forwarding rule")
        if not cfg.ingress:
            raise SdnValidationError("ingress must not be empty")
        if not cfg.egress:
            raise SdnValidationError("egress must not be empty")
        if cfg.ingress & cfg.egress:
            raise SdnValidationError(f"ingress and egress overlap in {sorted(cfg.ingress & cfg.egress)}")
        return cfg

    @property
    def rules(self) -> dict[str, str]:
        return dict(self.forwarding)

    def validate_against(self, top: Topology) -> None:
        for x in self.ingress | self.egress:
            if x not in top.switches:
                raise SdnValidationError(f"unknown switch {x}")
        for x, y in self.forwarding:
            if (x, y) not in top.connections:
                raise SdnValidationError(f"rule {x}.fwd({y}) does not follow a connection")


@dataclass(frozen=True)
class SwitchUpdate:
    switch: str
    target: str

    def __str__(self) -> str:
        return f"upd({self.switch}.fwd({self.target}))"


@dataclass(frozen=True)
class Sequential:
    parts: tuple["Update", ...]

    def __str__(self) -> str:
        return "(" + " >> ".join(map(str, self.parts)) + ")"


@dataclass(frozen=True)
class Parallel:
    parts: tuple["Update", ...]

    def __str__(self) -> str:
        return "(" + " || ".join(map(str, self.parts)) + ")"


Update = Union[SwitchUpdate, Sequential, Parallel]


def switch_updates(u: Update) -> list[SwitchUpdate]:
    if isinstance(u, SwitchUpdate):
        return [u]
    return [s for part in u.parts for s in switch_updates(part)]


def validate_update(u: Update, top: Topology | None = None) -> None:
    seen: set[str] = set()
    for s in switch_updates(u):
        if s.switch in seen:
            raise SdnValidationError(f"switch {s.switch} is updated twice")
        seen.add(s.switch)
        if top is not None:
            if s.switch not in top.switches or s.target not in top.switches:
                raise SdnValidationError(f"{s} mentions an unknown switch")
            if (s.switch, s.target) not in top.connections:
                raise SdnValidationError(f"{s} does not follow a connection")


# parsing --------------------------------------------------------------------------


def _statements(text: str) -> list[tuple[int, str]]:
    out = []
    buf, start = [], None
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0]
        for piece in re.split(r"(;)", line):
            if piece == ";":
                stmt = "".join(buf).strip()
                if stmt:
                    out.append((start or lineno, stmt))
                buf, start = [], None
            elif piece.strip():
                if start is None:
                    start = lineno
                buf.append(piece)
    rest = "".join(buf).strip()
    if rest:
        out.append((start, rest))
    return out


def _set_literal(value: str, line: int) -> list[str]:
    value = value.strip()
    if not (value.startswith("{") and value.endswith("}")):
        raise SdnSyntaxError(f"expected a set {{...}}, got {value!r}", line)
    body = value[1:-1].strip()
    return [x.strip() for x in body.split(",")] if body else []


def parse_topology(text: str) -> Topology:
    switches: list[str] | None = None
    links: list[tuple[str, str]] = []
    for line, stmt in _statements(text):
        key, eq, value = stmt.partition("=")
        key = key.strip()
        if not eq:
            raise SdnSyntaxError(f"expected 'switches = ...' or 'connections = ...', got {stmt!r}", line)
        if key == "switches":
            switches = [_check_switch_name(x, line) for x in _set_literal(value, line)]
        elif key == "connections":
            for item in _set_literal(value, line):
                a, dash, b = item.partition("-")
                if not dash:
                    raise SdnSyntaxError(f"expected 'a - b', got {item!r}", line)
                links.append((_check_switch_name(a.strip(), line), _check_switch_name(b.strip(), line)))
        else:
            raise SdnSyntaxError(f"unknown section {key!r}", line)
    if switches is None:
        raise SdnSyntaxError("missing 'switches = {...};'")
    return Topology.build(switches, links)


_RULE = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)\s*\.\s*fwd\s*\(\s*([A-Za-z_][A-Za-z0-9_]*)\s*\)\Z")


def parse_config(text: str) -> Config:
    ingress = egress = None
    rules: list[tuple[str, str]] = []
    for line, stmt in _statements(text):
        m = _RULE.match(stmt)
        if m:
            rules.append((m.group(1), m.group(2)))
            continue
        key, eq, value = stmt.partition("=")
        key = key.strip()
        if eq and key == "ingress":
            ingress = [_check_switch_name(x, line) for x in _set_literal(value, line)]
        elif eq and key == "egress":
            egress = [_check_switch_name(x, line) for x in _set_literal(value, line)]
        else:
            raise SdnSyntaxError(f"expected ingress, egress or a rule x.fwd(y), got {stmt!r}", line)
    if ingress is None or egress is None:
        raise SdnSyntaxError("configuration needs both 'ingress = {...};' and 'egress = {...};'")
    return Config.build(ingress, egress, rules)


_TOKEN = re.compile(r"\s*(?:(>>)|(\|\|)|(\()|(\))|(upd\s*\(\s*[A-Za-z_][A-Za-z0-9_]*\s*\.\s*fwd\s*\(\s*[A-Za-z_][A-Za-z0-9_]*\s*\)\s*\)))")


def parse_update(text: str) -> Update:
    text = "\n".join(line.split("#", 1)[0] for line in text.splitlines()).strip().rstrip(";")
    tokens: list[tuple[str, str, int]] = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise SdnSyntaxError(f"unexpected input at offset {pos}: {text[pos:pos + 20]!r}")
        kind = ">>" if m.group(1) else "||" if m.group(2) else "(" if m.group(3) else ")" if m.group(4) else "upd"
        tokens.append((kind, m.group(5) or "", m.start(m.lastindex)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    k = 0

    def peek() -> str:
        return tokens[k][0]

    def expr() -> Update:
        nonlocal k
        parts = [atom()]
        op = None
        while peek() in (">>", "||"):
            if op is not None and peek() != op:
                raise SdnSyntaxError(f"mixing '>>' and '||' needs parentheses (offset {tokens[k][2]})")
            op = peek()
            k += 1
            parts.append(atom())
        if op is None:
            return parts[0]
        return Sequential(tuple(parts)) if op == ">>" else Parallel(tuple(parts))

    def atom() -> Update:
        nonlocal k
        kind, value, off = tokens[k]
        if kind == "upd":
            k += 1
            m = re.match(r"upd\s*\(\s*(\w+)\s*\.\s*fwd\s*\(\s*(\w+)", value)
            return SwitchUpdate(m.group(1), m.group(2))
        if kind == "(":
            k += 1
            inner = expr()
            if peek() != ")":
                raise SdnSyntaxError(f"expected ')' at offset {tokens[k][2]}")
            k += 1
            return inner
        raise SdnSyntaxError(f"expected an update at offset {off}")

    if peek() == "end":
        raise SdnSyntaxError("empty update")
    u = expr()
    if peek() != "end":
        raise SdnSyntaxError(f"unexpected {tokens[k][0]!r} at offset {tokens[k][2]}")
    validate_update(u)
    return u


def print_topology(top: Topology) -> str:
    links = ", ".join(f"{a} - {b}" for a, b in top.links)
    return f"switches = {{{', '.join(sorted(top.switches))}}};\nconnections = {{{links}}};\n"


def print_config(cfg: Config) -> str:
    lines = [f"ingress = {{{', '.join(sorted(cfg.ingress))}}};"]
    lines += [f"{x}.fwd({y});" for x, y in cfg.forwarding]
    lines.append(f"egress = {{{', '.join(sorted(cfg.egress))}}};")
    return "\n".join(lines) + "\n"


def print_update(u: Update) -> str:
    text = str(u)
    if isinstance(u, (Sequential, Parallel)):
        text = text[1:-1]
    return text + "\n"
