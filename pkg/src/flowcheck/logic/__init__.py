from .ast import (
    TRUE,
    Always,
    And,
    Atom,
    Eventually,
    Flow,
    Implies,
    Ltl,
    Next,
    Not,
    Or,
    RunAnd,
    RunFormula,
    RunImplies,
    RunLtl,
    RunOr,
    TrueF,
    Until,
    WeakUntil,
    atoms,
    conjunction,
    disjunction,
    false,
    flow_subformulas,
    run_atoms,
    size,
)
from .evaluate import UnboundAtomError, eval_ltl_lasso, eval_ltl_naive, eval_ltl_vector
from .oracle import eval_flow_ltl_oracle, violating_chains
from .syntax import (
    FlowGrammarError,
    FormulaSyntaxError,
    format_formula,
    format_ltl,
    parse_flow_ltl,
    parse_ltl,
)

__all__ = [name for name in dir() if not name.startswith("_")]
