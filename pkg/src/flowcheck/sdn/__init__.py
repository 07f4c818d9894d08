"""Software-defined network updates encoded as nets with transits."""
from .encode import (
    ROOT_FINISH,
    ROOT_START,
    compose,
    encode_control_plane,
    encode_data_plane,
    encode_network,
    forward_transition,
    ingress_transition,
    rule_place,
)
from .model import (
    Config,
    Parallel,
    SdnError,
    SdnSyntaxError,
    SdnValidationError,
    Sequential,
    SwitchUpdate,
    Topology,
    Update,
    parse_config,
    parse_topology,
    parse_update,
    print_config,
    print_topology,
    print_update,
    switch_updates,
    validate_update,
)
from .specs import (
    ASSUMPTIONS,
    CONCURRENCY_MAX,
    INTERLEAVING_MAX,
    STRONG_FAIR,
    WEAK_FAIR,
    enabled_formula,
    run_assumptions,
    spec_connectivity,
    spec_drop_freedom,
    spec_loop_freedom,
    spec_packet_coherence,
    under_assumptions,
)

__all__ = [name for name in dir() if not name.startswith("_")]
