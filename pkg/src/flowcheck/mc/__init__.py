from .buchi import BuchiAutomaton, ltl_to_buchi
from .check import (
    COUNTEREXAMPLE,
    INCONCLUSIVE,
    VERIFIED,
    Counterexample,
    FlowResult,
    LtlResult,
    bmc_search,
    check_flow_ltl,
    check_ltl,
    format_ltl_report,
    format_report,
    reduce_flow_ltl,
)
from .onthefly import LetterProduct
from .kripke import ExplicitKripke, Kripke, NetKripke, TraceKripke
from .product import DEFAULT_STATE_CAP, Lasso, Product, StateCapExceeded, find_accepting_lasso
from .equivalence import CircuitEquivalenceReport, check_circuit_equivalence, sequence_from_circuit_lasso
