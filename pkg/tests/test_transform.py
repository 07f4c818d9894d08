import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flowcheck.bench import gen_sf
from flowcheck.logic import (
    Always,
    And,
    Atom,
    Eventually,
    Flow,
    Implies,
    Next,
    Not,
    Or,
    RunAnd,
    RunLtl,
    Until,
    atoms,
    parse_flow_ltl,
    size,
)
from flowcheck.logic.ast import dag_size
from flowcheck.pnwt import START, FiringError, FiringSequence, Net, reachable_markings, track_chains, validate_safe
from flowcheck.sdn import encode_network, spec_connectivity
from flowcheck.sdn.fixtures import UPDATE_CORRECT, scenario
from flowcheck.transform import (
    FormulaTransformError,
    MappingError,
    Naming,
    SubstitutionPlan,
    TransformError,
    TransitionSets,
    audit_constraints,
    expected_formula_size_bound,
    expected_sizes,
    lift_counterexample,
    map_counterexample_back,
    substitute_next_naive,
    transform_formula,
    transform_net,
)
from flowcheck.transform.formula import transform_flow_part
from support import random_firing_sequence, random_flow_formula, random_ltl, random_pnwt

ACT = Atom(Naming.ACT_ORIGINAL)


def loop_net():
    return Net.build(["p"], ["t"], [("p", "t"), ("t", "p")], ["p"], transits={"t": [("p", "p"), (START, "p")]})


@pytest.fixture(scope="module")
def update_net():
    return encode_network(*scenario(UPDATE_CORRECT))


def test_single_place_net_elements():
    tn = transform_net(loop_net(), 1)
    assert set(tn.places) == {"p", "act@o", "[p]#1", "init#1", "act@t#1"}
    assert set(tn.transitions) == {"t", "t@(>,p)#1", "t@(p,p)#1", "t@skip#1"}
    assert tn.initial == frozenset({"p", "act@o", "init#1"})
    assert tn.net.inhibitor_places("t@skip#1") == frozenset({"[p]#1"})


def test_closed_form_sizes():
    net = Net.build(["a", "b"], ["t"], [("a", "t"), ("t", "b")], ["a"], transits={"t": [("a", "b"), (START, "b")]})
    assert expected_sizes(net, 1) == (7, 4)
    assert expected_sizes(net, 0) == (3, 1)
    tn = transform_net(net, 1)
    assert (len(tn.places), len(tn.transitions)) == (7, 4)


def test_no_subnets_adds_only_activation_place():
    net = loop_net()
    tn = transform_net(net, 0)
    assert set(tn.places) == {"p", "act@o"}
    assert set(tn.transitions) == {"t"}
    assert all(v == [] for v in audit_constraints(net, tn).values())


def test_name_collision_rejected():
    net = Net.build(["act@o"], ["t"], [("act@o", "t"), ("t", "act@o")], ["act@o"])
    with pytest.raises(TransformError):
        transform_net(net, 1)


def test_unsafe_input_rejected():
    net = Net.build(["p", "q"], ["t"], [("p", "t"), ("t", "p"), ("t", "q")], ["p", "q"])
    with pytest.raises(Exception):
        transform_net(net, 1)


def test_lift_empty_sequence():
    net = loop_net()
    tn = transform_net(net, 1)
    lifted = lift_counterexample(tn, FiringSequence((), net.initial, None), [None])
    assert lifted.steps == () and lifted.final == tn.initial


def test_lift_without_chains_only_skips():
    net = loop_net()
    tn = transform_net(net, 2)
    seq = FiringSequence.replay(net, ["t"])
    assert lift_counterexample(tn, seq, [None, None]).transitions == ("t", "t@skip#1", "t@skip#2")


def test_lift_follows_forwarded_flow(update_net):
    tn = transform_net(update_net, 1)
    seq = FiringSequence.replay(update_net, ["ingress(v)", "fwd(v,u)"])
    (chain,) = track_chains(update_net, seq)
    lifted = lift_counterexample(tn, seq, [chain])
    assert lifted.transitions == ("ingress(v)", "ingress(v)@(>,v)#1", "fwd(v,u)", "fwd(v,u)@(v,u)#1")


def test_map_back_all_skips():
    net = loop_net()
    tn = transform_net(net, 1)
    tseq = FiringSequence.replay(tn.net, ["t", "t@skip#1", "t", "t@skip#1"])
    back = map_counterexample_back(tn, tseq)
    assert back.sequence.transitions == ("t", "t") and back.chains == (None,)


def test_map_back_single_start():
    net = loop_net()
    tn = transform_net(net, 1)
    tseq = FiringSequence.replay(tn.net, ["t", "t@(>,p)#1"])
    back = map_counterexample_back(tn, tseq)
    (chain,) = back.chains
    assert chain.places == ("p",) and chain.transitions == () and chain.start_step == 0


def test_map_back_rejects_invalid_sequence():
    net = loop_net()
    tn = transform_net(net, 1)
    bogus = FiringSequence(((tn.initial, "t@skip#1"),), tn.initial, None)
    with pytest.raises((MappingError, ValueError, FiringError)):
        map_counterexample_back(tn, bogus)


def test_lift_rejects_chain_the_subnet_cannot_follow():
    flow = [("src", "s"), ("s", "a"), ("a", "eat"), ("eat", "b")]
    net = Net.build(["src", "a", "b"], ["s", "eat"], flow, ["src"], transits={"s": [(START, "a")]})
    tn = transform_net(net, 1)
    seq = FiringSequence.replay(net, ["s", "eat"])
    (chain,) = track_chains(net, seq)
    with pytest.raises(MappingError):
        lift_counterexample(tn, seq, [chain])


def _subnet_tokens(tn, marking, i):
    own = {Naming.init(i)} | {Naming.place_copy(p, i) for p in tn.source.places}
    return len(marking & own)


def _activation_tokens(tn, marking):
    acts = {p for p in tn.places if p.startswith("act@")}
    return len(marking & acts)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**9), st.integers(1, 2))
def test_transformed_net_invariants(seed, n):
    rng = random.Random(seed)
    net = random_pnwt(rng)
    tn = transform_net(net, n)
    assert (len(tn.places), len(tn.transitions)) == expected_sizes(net, n)
    assert {k: v for k, v in audit_constraints(net, tn).items() if v} == {}
    validate_safe(tn.net)
    for m in reachable_markings(tn.net):
        assert _activation_tokens(tn, m) == 1
        for i in range(1, n + 1):
            assert _subnet_tokens(tn, m, i) == 1
    inhibited = {t for t in tn.transitions if tn.net.inhibitor_places(t)}
    assert all(tn.is_skip(t) for t in inhibited)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9), st.integers(1, 2))
def test_maps_produce_valid_sequences(seed, n):
    rng = random.Random(seed)
    net = random_pnwt(rng)
    tn = transform_net(net, n)
    seq = random_firing_sequence(rng, net)
    chains = track_chains(net, seq)
    picks = [rng.choice(chains) if chains and rng.random() < 0.7 else None for _ in range(n)]
    try:
        lifted = lift_counterexample(tn, seq, picks)
    except MappingError:
        return
    lifted.validate(tn.net)
    back = map_counterexample_back(tn, lifted)
    back.sequence.validate(net)
    assert back.sequence.normalized() == seq.normalized()
    assert [chain_key(seq, c) for c in back.chains] == [chain_key(seq, c) for c in picks]


def chain_key(seq, chain):
    """Chain identity with step indices folded into the first copy of the period."""
    if chain is None:
        return None
    c = chain.normalized()
    fold = seq.normalize_index
    return c.places, c.transitions, c.loop, fold(c.start_step), tuple(fold(k) for k in c.steps)


# formula transformation ---------------------------------------------------------


def test_run_transition_atom_skips_subnet_steps():
    net = Net.build(["p"], ["t"], [("p", "t"), ("t", "p")], ["p"])
    tn = transform_net(net, 2)
    assert sorted(set(tn.transitions) - {"t"}) == ["t@skip#1", "t@skip#2"]
    phi = RunAnd(RunLtl(Atom("t")), RunAnd(Flow(Atom("p")), Flow(Atom("p"))))
    out = transform_formula(net, phi, tn)
    assert Until(Or(Atom("t@skip#1"), Atom("t@skip#2")), Atom("t")) in _subterms(out)


def test_flow_formula_moves_to_subnet_places(update_net):
    tn = transform_net(update_net, 1)
    out = transform_formula(update_net, parse_flow_ltl("A F d"), tn)
    init = Atom("init#1")
    expected = Or(Always(init), Until(init, And(Not(init), Eventually(Atom("[d]#1")))))
    assert out == Implies(Always(Eventually(ACT)), expected)


def test_plain_formula_is_only_wrapped():
    net = loop_net()
    tn = transform_net(net, 0)
    phi = Always(Eventually(Atom("p")))
    assert transform_formula(net, RunLtl(phi), tn) == Implies(Always(Eventually(ACT)), phi)
    assert size(transform_formula(net, RunLtl(phi), tn)) - size(phi) == size(transform_formula(net, RunLtl(Atom("p")), tn)) - 1


def test_count_mismatch_and_unbound_atoms():
    net = loop_net()
    with pytest.raises(FormulaTransformError):
        transform_formula(net, parse_flow_ltl("A F p"), transform_net(net, 0))
    with pytest.raises(FormulaTransformError):
        transform_formula(net, parse_flow_ltl("A F nowhere"), transform_net(net, 1))


def test_size_bound_on_update_net(update_net):
    phi = spec_connectivity(["d"])
    tn = transform_net(update_net, 1)
    assert expected_formula_size_bound(update_net, phi, tn).holds


def test_switch_failure_formula_grows_linearly():
    sizes = []
    for n in range(3, 7):
        inst = gen_sf(n)
        tn = transform_net(inst.net, 1)
        sizes.append(dag_size(transform_formula(inst.net, inst.formula, tn)))
    steps = {b - a for a, b in zip(sizes, sizes[1:])}
    assert len(steps) == 1


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9))
def test_output_is_over_transformed_elements(seed):
    rng = random.Random(seed)
    net = random_pnwt(rng)
    phi = random_flow_formula(rng, net)
    tn = transform_net(net, 1)
    out = transform_formula(net, phi, tn)
    assert atoms(out) <= set(tn.places) | set(tn.transitions)
    assert expected_formula_size_bound(net, phi, tn).holds


def test_run_rewriting_leaves_flow_scope_alone():
    net = loop_net()
    tn = transform_net(net, 1)
    psi = Next(Atom("t"))
    out = transform_formula(net, RunAnd(RunLtl(psi), Flow(psi)), tn)
    flow_part = transform_flow_part(net, psi, 1, TransitionSets.of(tn))
    init = Atom("init#1")
    right = Or(Always(init), Until(init, And(Not(init), flow_part)))
    assert out.__class__ is Implies(ACT, ACT).__class__
    assert right in _subterms(out)
    # the flow part only mentions subnet-1 transitions for its transition atom
    assert "t" not in atoms(flow_part) - set(TransitionSets.of(tn).unrelated[1])


def _subterms(f):
    from flowcheck.logic.ast import walk_core

    return set(walk_core(f))


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**9))
def test_batched_next_rewriting_matches_naive(seed):
    rng = random.Random(seed)
    f = random_ltl(rng, ["a", "b", "c"], 4)

    def rewrite(arg):
        return Or(Until(Atom("s"), And(Atom("r"), Next(arg))), And(Always(Not(Atom("r"))), arg))

    assert SubstitutionPlan.of(f).apply(f, rewrite) == substitute_next_naive(f, rewrite)
