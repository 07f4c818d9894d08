"""The five-switch update scenario used throughout the documentation and tests."""
from __future__ import annotations

from .model import parse_config, parse_topology, parse_update

TOPOLOGY = """\
switches = {d, u, v, x, y};
connections = {v - u, v - x, u - x, d - y, d - x, y - x};
"""

CONFIG_BEFORE = """\
ingress = {v};
v.fwd(u);
u.fwd(x);
x.fwd(d);
y.fwd(x);
egress = {d};
"""

CONFIG_AFTER = """\
ingress = {v};
v.fwd(x);
u.fwd(x);
x.fwd(y);
y.fwd(d);
egress = {d};
"""

# x is redirected to y while y still forwards to x
UPDATE_WRONG_ORDER = "(upd(x.fwd(y)) >> upd(y.fwd(d))) || upd(v.fwd(x))"
UPDATE_CORRECT = "(upd(y.fwd(d)) >> upd(x.fwd(y))) || upd(v.fwd(x))"


def scenario(update_text: str = UPDATE_CORRECT):
    return parse_topology(TOPOLOGY), parse_config(CONFIG_BEFORE), parse_update(update_text)
