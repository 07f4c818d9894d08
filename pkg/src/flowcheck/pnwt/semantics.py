"""Firing rule, successor computation and 1-safety validation."""
from __future__ import annotations

from collections import deque

from .net import FiringError, Net, SafetyError

# reachability runs exhaustively below this many markings, depth-bounded above it
EXHAUSTIVE_CAP = 200_000


def enabled(net: Net, m: frozenset[str], t: str) -> bool:
    net.check_transition(t)
    return net.pre[t] <= m and not (net.inhibitor_places(t) & m)


def fire(net: Net, m: frozenset[str], t: str) -> frozenset[str]:
    if not enabled(net, m, t):
        raise FiringError(f"transition {t!r} is not enabled in {sorted(m)}")
    rest = m - net.pre[t]
    clash = rest & net.post[t]
    if clash:
        raise SafetyError(f"firing {t!r} puts a second token on {sorted(clash)}", (t,))
    return rest | net.post[t]


def successors(net: Net, m: frozenset[str]) -> list[tuple[str, frozenset[str]]]:
    return [(t, fire(net, m, t)) for t in net.transitions if enabled(net, m, t)]


def reachable_markings(net: Net, cap: int = EXHAUSTIVE_CAP) -> set[frozenset[str]]:
    """All reachable markings; raises SafetyError on the first unsafe firing."""
    seen = {net.initial}
    queue = deque([net.initial])
    while queue:
        m = queue.popleft()
        for _, m2 in successors(net, m):
            if m2 not in seen:
                if len(seen) >= cap:
                    raise OverflowError("reachability cap exceeded")
                seen.add(m2)
                queue.append(m2)
    return seen


def validate_safe(net: Net, depth_bound: int = 50) -> None:
    """Explore reachable markings and raise SafetyError on a 1-safety violation.

    The search is exhaustive while the state count stays under
    :data:`EXHAUSTIVE_CAP`; beyond that only markings within ``depth_bound``
    firings of the initial marking are examined.
    """
    if depth_bound < 1:
        raise ValueError("depth_bound must be positive")
    parent: dict[frozenset[str], tuple[frozenset[str], str] | None] = {net.initial: None}
    depth = {net.initial: 0}
    queue = deque([net.initial])

    def witness(m: frozenset[str], last: str) -> tuple[str, ...]:
        path = [last]
        while parent[m] is not None:
            m, t = parent[m]
            path.append(t)
        return tuple(reversed(path))

    while queue:
        m = queue.popleft()
        if len(parent) > EXHAUSTIVE_CAP and depth[m] >= depth_bound:
            continue
        for t in net.transitions:
            if not enabled(net, m, t):
                continue
            rest = m - net.pre[t]
            clash = rest & net.post[t]
            if clash:
                raise SafetyError(
                    f"unsafe: firing {t!r} puts a second token on {sorted(clash)}", witness(m, t)
                )
            m2 = rest | net.post[t]
            if m2 not in parent:
                parent[m2] = (m, t)
                depth[m2] = depth[m] + 1
                queue.append(m2)
