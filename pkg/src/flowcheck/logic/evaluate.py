"""Truth of LTL formulas on ultimately periodic words."""
from __future__ import annotations

from typing import Iterable, Optional

from ..pnwt.sequences import Trace
from .ast import And, Atom, Ltl, Next, Not, TrueF, Until, atoms, dag


class UnboundAtomError(ValueError):
    pass


def _check_bound(phi: Ltl, alphabet: Optional[Iterable[str]]) -> None:
    if alphabet is None:
        return
    missing = atoms(phi) - set(alphabet)
    if missing:
        raise UnboundAtomError(f"unbound atoms: {', '.join(sorted(missing))}")


def eval_ltl_vector(phi: Ltl, trace: Trace) -> list[bool]:
    """Truth value of ``phi`` at every position ``0 .. len(trace)-1``.

    The position after the last one is ``len(trace.prefix)``, so the
    vector describes the whole infinite word.
    """
    n = len(trace)
    loop = len(trace.prefix)
    letters = [trace.at(i) for i in range(n)]
    succ = list(range(1, n)) + [loop]
    vecs: list[list[bool]] = []
    for node in dag(phi):
        op = node[0]
        if op == "true":
            out = [True] * n
        elif op == "atom":
            out = [node[1] in letter for letter in letters]
        elif op == "!":
            out = [not x for x in vecs[node[1]]]
        elif op == "&&":
            a, b = vecs[node[1]], vecs[node[2]]
            out = [x and y for x, y in zip(a, b)]
        elif op == "X":
            a = vecs[node[1]]
            out = [a[succ[i]] for i in range(n)]
        else:
            a, b = vecs[node[1]], vecs[node[2]]
            # least fixpoint of u = b | (a & X u); the loop needs two sweeps
            out = list(b)
            changed = True
            while changed:
                changed = False
                for i in range(n - 1, -1, -1):
                    v = b[i] or (a[i] and out[succ[i]])
                    if v != out[i]:
                        out[i] = v
                        changed = True
        vecs.append(out)
    return vecs[-1]


def eval_ltl_lasso(phi: Ltl, trace: Trace, alphabet: Optional[Iterable[str]] = None) -> bool:
    _check_bound(phi, alphabet)
    return eval_ltl_vector(phi, trace)[0]


def eval_ltl_naive(phi: Ltl, trace: Trace) -> bool:
    """Clause-by-clause evaluation used as an independent check.

    Until scans witnesses explicitly; positions are memoised modulo the
    period once inside the loop.
    """
    loop, period = len(trace.prefix), len(trace.period)
    memo: dict[tuple[int, Ltl], bool] = {}

    def canon(i: int) -> int:
        return i if i < loop else loop + (i - loop) % period

    def holds(f: Ltl, i: int) -> bool:
        i = canon(i)
        key = (i, f)
        if key in memo:
            return memo[key]
        if isinstance(f, TrueF):
            r = True
        elif isinstance(f, Atom):
            r = f.name in trace.at(i)
        elif isinstance(f, Not):
            r = not holds(f.arg, i)
        elif isinstance(f, And):
            r = holds(f.left, i) and holds(f.right, i)
        elif isinstance(f, Next):
            r = holds(f.arg, i + 1)
        elif isinstance(f, Until):
            r = False
            # beyond one full period from the loop entry nothing new is seen
            for j in range(i, max(i, loop) + period):
                if holds(f.right, j):
                    r = True
                    break
                if not holds(f.left, j):
                    break
        else:
            raise TypeError(f)
        memo[key] = r
        return r

    return holds(phi, 0)
