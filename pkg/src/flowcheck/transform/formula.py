"""Rewriting a Flow-LTL formula into LTL over the transformed net.

Flow subformula ``i`` talks about subnet ``i``: its place atoms move to the
subnet copies, and transition atoms and next operators skip over steps that
do not concern the tracked chain.  The run part skips over all subnet
steps.  Subformula ``i`` is the ``i``-th flow subformula from the left.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from ..logic.ast import (
    Always,
    And,
    Atom,
    Eventually,
    Flow,
    Implies,
    Ltl,
    Not,
    Or,
    RunAnd,
    RunFormula,
    RunImplies,
    RunLtl,
    RunOr,
    Until,
    WeakUntil,
    disjunction,
    flow_subformulas,
    map_view,
    rebuild,
    run_atoms,
    dag_size,
    size,
    view,
)
from ..pnwt.net import Net
from .net import InhibitorNet, Naming


class FormulaTransformError(ValueError):
    pass


@dataclass(frozen=True)
class TransitionSets:
    """Transition sets used by the rewriting, as sorted tuples."""

    unrelated_run: tuple[str, ...]  # every non-original transition
    original: tuple[str, ...]
    unrelated: dict[int, tuple[str, ...]]  # per subnet: other parts and own skips
    related: dict[int, tuple[str, ...]]  # per subnet: non-skip transitions
    related_by_label: dict[int, dict[str, tuple[str, ...]]]

    @classmethod
    def of(cls, tn: InhibitorNet) -> "TransitionSets":
        allt = tn.transitions
        original = tuple(t for t in allt if tn.part[t] == 0)
        unrelated_run = tuple(t for t in allt if tn.part[t] != 0)
        unrelated, related, by_label = {}, {}, {}
        for i in range(1, tn.n + 1):
            unrelated[i] = tuple(t for t in allt if tn.part[t] != i or tn.is_skip(t))
            related[i] = tuple(t for t in allt if tn.part[t] == i and not tn.is_skip(t))
            groups: dict[str, list[str]] = {t: [] for t in tn.source.transitions}
            for t in related[i]:
                groups[tn.label[t]].append(t)
            by_label[i] = {t: tuple(v) for t, v in groups.items()}
        return cls(unrelated_run, original, unrelated, related, by_label)


def _any(names) -> Ltl:
    return disjunction([Atom(x) for x in names])


def depth(f: Ltl) -> int:
    """Operator nesting depth of the written formula (atoms have depth 0)."""
    op, kids = view(f)
    if op in ("atom", "true", "false"):
        return 0
    return 1 + max(depth(k) for k in kids)


def _next_rewriter(skip: Ltl, related: Ltl) -> Callable[[Ltl], Ltl]:
    def rewrite(arg: Ltl) -> Ltl:
        from ..logic.ast import Next

        return Or(Until(skip, And(related, Next(arg))), And(Always(Not(related)), arg))

    return rewrite


# Substitution of next operators, inner to outer ------------------------------


@dataclass(frozen=True)
class SubstitutionPlan:
    """Positions of next operators grouped by depth, innermost batch first.

    A position is the path of child indices in the written formula.
    """

    batches: tuple[tuple[int, tuple[tuple[int, ...], ...]], ...]

    @classmethod
    def of(cls, f: Ltl) -> "SubstitutionPlan":
        found: dict[int, list[tuple[int, ...]]] = {}

        def visit(g: Ltl, path: tuple[int, ...]) -> None:
            op, kids = view(g)
            if op == "atom":
                return
            for k, child in enumerate(kids):
                visit(child, path + (k,))
            if op == "X":
                found.setdefault(depth(g), []).append(path)

        visit(f, ())
        return cls(tuple((d, tuple(found[d])) for d in sorted(found)))

    def apply(self, f: Ltl, rewrite: Callable[[Ltl], Ltl]) -> Ltl:
        for _, paths in self.batches:
            # positions in one batch are disjoint, so order inside it is irrelevant
            for path in paths:
                f = _replace_at(f, path, lambda g: rewrite(view(g)[1][0]))
        return f


def _replace_at(f: Ltl, path: tuple[int, ...], fn: Callable[[Ltl], Ltl]) -> Ltl:
    if not path:
        return fn(f)
    op, kids = view(f)
    kids = list(kids)
    kids[path[0]] = _replace_at(kids[path[0]], path[1:], fn)
    return rebuild(op, tuple(kids))


def substitute_next_naive(f: Ltl, rewrite: Callable[[Ltl], Ltl]) -> Ltl:
    """Same result as the batched plan, by one bottom-up pass."""

    def fn(g: Ltl):
        op, kids = view(g)
        return rewrite(kids[0]) if op == "X" else None

    return map_view(f, fn)


def substitute_atoms(f: Ltl, mapping: Callable[[str], Ltl | None]) -> Ltl:
    def fn(g: Ltl):
        if isinstance(g, Atom):
            return mapping(g.name)
        return None

    return map_view(f, fn)


# the transformation -----------------------------------------------------------


def transform_flow_part(net: Net, psi: Ltl, i: int, sets: TransitionSets) -> Ltl:
    places, transitions = set(net.places), set(net.transitions)
    skip = _any(sets.unrelated[i])

    def atom(name: str):
        if name in places:
            return Atom(Naming.place_copy(name, i))
        if name in transitions:
            return Until(skip, _any(sets.related_by_label[i][name]))
        raise FormulaTransformError(f"unbound atom {name!r}")

    f = substitute_atoms(psi, atom)
    rewrite = _next_rewriter(skip, _any(sets.related[i]))
    return SubstitutionPlan.of(f).apply(f, rewrite)


def transform_run_ltl(net: Net, f: Ltl, sets: TransitionSets) -> Ltl:
    places, transitions = set(net.places), set(net.transitions)
    skip = _any(sets.unrelated_run)

    def atom(name: str):
        if name in places:
            return None
        if name in transitions:
            return Until(skip, Atom(name))
        raise FormulaTransformError(f"unbound atom {name!r}")

    f = substitute_atoms(f, atom)
    rewrite = _next_rewriter(skip, _any(sets.original))
    return SubstitutionPlan.of(f).apply(f, rewrite)


def transform_formula(net: Net, phi: RunFormula | Ltl, tn: InhibitorNet) -> Ltl:
    if isinstance(phi, Ltl):
        phi = RunLtl(phi)
    flows = flow_subformulas(phi)
    if len(flows) != tn.n:
        raise FormulaTransformError(
            f"formula has {len(flows)} flow subformulas but the net tracks {tn.n}"
        )
    unbound = run_atoms(phi) - set(net.places) - set(net.transitions)
    if unbound:
        raise FormulaTransformError(f"unbound atoms {sorted(unbound)}")
    sets = TransitionSets.of(tn)
    counter = iter(range(1, tn.n + 1))

    def go(f: RunFormula) -> Ltl:
        if isinstance(f, RunLtl):
            return transform_run_ltl(net, f.formula, sets)
        if isinstance(f, Flow):
            i = next(counter)
            init = Atom(Naming.init(i))
            return WeakUntil(init, And(Not(init), transform_flow_part(net, f.formula, i, sets)))
        if isinstance(f, RunAnd):
            left = go(f.left)
            return And(left, go(f.right))
        if isinstance(f, RunOr):
            left = go(f.left)
            return Or(left, go(f.right))
        if isinstance(f, RunImplies):
            return Implies(transform_run_ltl(net, f.antecedent, sets), go(f.consequent))
        raise TypeError(f)

    body = go(phi)
    return Implies(Always(Eventually(Atom(Naming.ACT_ORIGINAL))), body)


@dataclass(frozen=True)
class FormulaSizeReport:
    input_size: int
    output_size: int
    bound: int
    constant: int

    @property
    def holds(self) -> bool:
        return self.output_size <= self.bound


# constant of the size bound: every substitution site adds at most this many
# nodes per element of the transformed net, plus a fixed wrapper
SIZE_CONSTANT = 16


def expected_formula_size_bound(net: Net, phi: RunFormula, tn: InhibitorNet) -> FormulaSizeReport:
    """Compare the transformed formula size with c * (|N|^3 * n * |phi| + |phi|)."""
    out = transform_formula(net, phi, tn)
    N = len(net.places) + len(net.transitions)
    n = max(tn.n, 1)
    m = size(phi)
    bound = SIZE_CONSTANT * (N**3 * n * m + m)
    # the next-step rewrite copies its argument, so count shared subformulas once
    return FormulaSizeReport(m, dag_size(out), bound, SIZE_CONSTANT)
