"""Net files that carry their formula on ``.formula`` lines.

Benchmark and encoder output is a net file followed by one ``.formula``
line, so that ``check`` can read both from a single stream.
"""
from __future__ import annotations

from typing import Iterable, Optional

FORMULA_DIRECTIVE = ".formula"


def split_bundle(text: str) -> tuple[str, Optional[str]]:
    """Net text and the formula text (joined if given on several lines)."""
    net_lines, formula = [], []
    for line in text.splitlines():
        stripped = line.strip()
        if stripped == FORMULA_DIRECTIVE or stripped.startswith(FORMULA_DIRECTIVE + " "):
            formula.append(stripped[len(FORMULA_DIRECTIVE):].strip())
            # keep line numbers of net diagnostics unchanged
            net_lines.append("")
        else:
            net_lines.append(line)
    text_out = "\n".join(net_lines) + "\n"
    return text_out, (" ".join(f for f in formula if f) or None)


def join_bundle(net_text: str, formula_text: Optional[str] = None, comments: Iterable[str] = ()) -> str:
    lines = [f"# {c}" for c in comments]
    body = net_text if net_text.endswith("\n") else net_text + "\n"
    out = "\n".join(lines) + ("\n" if lines else "") + body
    if formula_text:
        out += f"{FORMULA_DIRECTIVE} {formula_text}\n"
    return out


__all__ = ["FORMULA_DIRECTIVE", "join_bundle", "split_bundle"]
