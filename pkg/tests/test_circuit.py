import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flowcheck.bench import gen_rp, gen_sf
from flowcheck.circuit import (
    ERROR_LATCH,
    ERROR_OUTPUT,
    FALSE,
    INIT_LATCH,
    AigBuilder,
    AigerError,
    encode_net,
    output_name,
    parse_aiger,
    simulate,
    to_aiger,
    wrap_formula_for_circuit,
)
from flowcheck.logic import Always, Atom, Implies, Next, size
from flowcheck.pnwt import Net, fire
from flowcheck.transform import transform_net
from support import firing_sequences, random_pnwt

E = Atom(ERROR_OUTPUT)


def reference_step(net, inputs, marking, init, err):
    """Circuit semantics computed from the net directly, one conjunct at a time."""
    fired = set(inputs) & set(net.transitions)
    valid = {
        t
        for t in fired
        if fired == {t} and net.pre[t] <= marking and not (net.inhibitor_places(t) & marking)
    }
    none_valid = not valid

    def succ(p):
        if none_valid:
            return p in marking
        (t,) = valid
        if p not in net.pre[t] and p not in net.post[t]:
            return p in marking
        if p in net.pre[t] and p not in net.post[t]:
            return False
        return True

    nxt = {}
    for p in net.places:
        nxt[p] = (not init or succ(p)) if p in net.initial else (init and succ(p))
    outputs = {output_name(p) for p in net.places if (nxt[p] if not init else p in marking)}
    outputs |= {output_name(t) for t in valid}
    if err:
        outputs.add(ERROR_OUTPUT)
    next_marking = frozenset(p for p in net.places if nxt[p])
    return frozenset(outputs), next_marking, True, init and none_valid


def circuit_step(c, inputs, marking, init, err):
    lat_names = {name: k for k, name in enumerate(c.latches)}
    bits = sum(1 << lat_names[p] for p in marking)
    bits |= (init << lat_names[INIT_LATCH]) | (err << lat_names[ERROR_LATCH])
    out, nxt = c.step(c.encode_inputs(inputs), bits)
    places = frozenset(name for name, k in lat_names.items() if nxt >> k & 1 and name not in (INIT_LATCH, ERROR_LATCH))
    return c.decode_outputs(out), places, bool(nxt >> lat_names[INIT_LATCH] & 1), bool(nxt >> lat_names[ERROR_LATCH] & 1)


def small_nets():
    rng = random.Random(11)
    nets = [random_pnwt(rng, inhibitors=True) for _ in range(6)]
    nets.append(Net.build(["p"], [], [], ["p"]))
    nets.append(Net.build(["p", "q"], ["t"], [("p", "t"), ("t", "q")], ["p"]))
    return nets


@pytest.mark.parametrize("net", small_nets())
def test_circuit_matches_reference_on_every_valuation(net):
    c = encode_net(net)
    assert len(c.latches) == len(net.places) + 2
    for k in range(len(net.transitions) + 1):
        for inputs in itertools.combinations(net.transitions, k):
            for bits in range(1 << len(net.places)):
                marking = frozenset(p for j, p in enumerate(net.places) if bits >> j & 1)
                for init, err in itertools.product((False, True), repeat=2):
                    want = reference_step(net, inputs, marking, init, err)
                    assert circuit_step(c, inputs, marking, init, err) == want


def eval_aag(text, inputs_bits, latch_bits):
    """Tiny independent evaluator for ASCII AIGER text."""
    lines = text.splitlines()
    _, M, I, L, O, A = lines[0].split()
    I, L, O, A = int(I), int(L), int(O), int(A)
    val = {0: 0, 1: 1}
    pos = 1
    for k in range(I):
        lit = int(lines[pos + k])
        val[lit] = inputs_bits >> k & 1
    pos += I
    latch_rows = [list(map(int, lines[pos + k].split())) for k in range(L)]
    for k, row in enumerate(latch_rows):
        val[row[0]] = latch_bits >> k & 1
    pos += L
    outs = [int(lines[pos + k]) for k in range(O)]
    pos += O
    for k in range(A):
        lhs, a, b = map(int, lines[pos + k].split())
        val[lhs] = get(val, a) & get(val, b)
    out_bits = sum(get(val, x) << k for k, x in enumerate(outs))
    next_bits = sum(get(val, row[1]) << k for k, row in enumerate(latch_rows))
    return out_bits, next_bits


def get(val, lit):
    return val[lit & ~1] ^ (lit & 1)


@pytest.mark.parametrize("net", small_nets()[:4])
def test_aiger_text_evaluates_like_the_circuit(net):
    c = encode_net(net)
    text = to_aiger(c).decode()
    for inp in range(1 << len(c.inputs)):
        for lat in range(1 << len(c.latches)):
            assert eval_aag(text, inp, lat) == c.step(inp, lat)


def test_marked_place_without_transitions():
    c = encode_net(Net.build(["p"], [], [], ["p"]))
    out = simulate(c, [[]] * 5)
    assert out[0] == {"p:o"}
    assert [ERROR_OUTPUT in o for o in out] == [False, False, True, True, True]
    assert all("p:o" in o for o in out)


def test_valid_transition_fires():
    net = Net.build(["p", "q"], ["t"], [("p", "t"), ("t", "q")], ["p"])
    out = simulate(encode_net(net), [[], ["t"], []])
    assert out[1] == {"p:o", "t:o"}
    assert out[2] == {output_name(q) for q in fire(net, frozenset({"p"}), "t")}


def test_disabled_input_raises_error_from_next_step_on():
    net = Net.build(["p", "q"], ["t"], [("p", "t"), ("t", "q")], ["q"])
    out = simulate(encode_net(net), [[], ["t"], ["t"], ["t"]])
    assert [ERROR_OUTPUT in o for o in out] == [False, False, True, True]
    assert all("t:o" not in o for o in out)


def test_error_clears_when_inputs_become_valid_again():
    # the error latch only records the previous step
    net = Net.build(["p", "q"], ["t"], [("p", "t"), ("t", "q")], ["p"])
    out = simulate(encode_net(net), [[], [], ["t"], []])
    assert ERROR_OUTPUT in out[2] and ERROR_OUTPUT not in out[3]


def test_empty_inputs_keep_initial_marking():
    net = Net.build(["p", "q"], ["t"], [("p", "t"), ("t", "q")], ["p"])
    out = simulate(encode_net(net), [[]] * 4)
    assert all((o - {ERROR_OUTPUT}) == {"p:o"} for o in out)


def test_wrap_atom():
    assert wrap_formula_for_circuit(Atom("p")) == Next(Implies(Always(Implies(E, Always(E))), Atom("p:o")))


def test_wrap_twice_nests():
    once = wrap_formula_for_circuit(Atom("p"))
    twice = wrap_formula_for_circuit(once)
    assert twice != once and size(twice) > size(once)


def test_wrapper_adds_constant_size():
    deltas = {size(wrap_formula_for_circuit(f)) - size(f) for f in (Atom("p"), Always(Atom("p")), Next(Next(Atom("q"))))}
    assert len(deltas) == 1


def test_header_arithmetic_and_round_trip():
    inst = gen_sf(3)
    tn = transform_net(inst.net, 1)
    c = encode_net(tn)
    data = to_aiger(c)
    _, M, I, L, O, A = data.decode().splitlines()[0].split()
    assert int(I) == len(tn.transitions)
    assert int(L) == len(tn.places) + 2
    assert int(O) == len(tn.places) + len(tn.transitions) + 1
    assert int(M) == int(I) + int(L) + int(A)
    assert to_aiger(parse_aiger(data)) == data


def test_symbol_table_and_comments():
    net = Net.build(["p", "q"], ["t"], [("p", "t"), ("t", "q")], ["p"], name="tiny")
    text = to_aiger(encode_net(transform_net(net, 1))).decode()
    assert "i0 t" in text and f"l{len(transform_net(net, 1).places) + 1} {ERROR_LATCH}" in text
    assert "o0 " in text and text.split("\nc\n")[1].startswith("net tiny")


def test_constant_false_next_state_is_literal_zero():
    b = AigBuilder()
    x = b.latch("x")
    b.set_next(x, FALSE)
    b.output("x:o", x)
    lines = to_aiger(b.build()).decode().splitlines()
    assert lines[1] == "2 0 0"


@pytest.mark.parametrize("text", ["aig 1 0 0 0 0\n", "aag 3 1 1 0 0\n2\n4 2 0\n", "aag 1 1 0 0 0\n4\n"])
def test_parse_aiger_rejects_malformed(text):
    with pytest.raises(AigerError):
        parse_aiger(text)


def test_gate_count_quadratic_in_net_size():
    ratios = []
    for inst in [gen_sf(n) for n in range(3, 7)] + [gen_rp(a, b, v) for a, b in ((1, 1), (2, 2), (3, 2)) for v in "BUM"]:
        tn = transform_net(inst.net, 1)
        c = encode_net(tn)
        ratios.append(len(c.ands) / (len(tn.places) + len(tn.transitions)) ** 2)
    assert max(ratios) <= 4


def coincide(net, seq, outputs):
    """Step j of the sequence coincides with circuit output j+1."""
    for j, (m, t) in enumerate(seq.steps):
        o = outputs[j + 1]
        if ERROR_OUTPUT in o or o & {output_name(x) for x in net.places} != {output_name(p) for p in m}:
            return False
        if o & {output_name(x) for x in net.transitions} != {output_name(t)}:
            return False
    final = outputs[len(seq.steps) + 1]
    return final & {output_name(x) for x in net.places} == {output_name(p) for p in seq.final}


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**9))
def test_replayed_sequences_coincide(seed):
    rng = random.Random(seed)
    net = random_pnwt(rng, inhibitors=True)
    c = encode_net(net)
    for seq in firing_sequences(net, 6):
        if seq.is_lasso:
            continue
        outputs = simulate(c, [[]] + [[t] for t in seq.transitions] + [[]])
        assert coincide(net, seq, outputs)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**9))
def test_valid_circuit_paths_are_firing_sequences(seed):
    rng = random.Random(seed)
    net = random_pnwt(rng, inhibitors=True)
    c = encode_net(net)
    inputs = [[]] + [[t for t in net.transitions if rng.random() < 0.4] for _ in range(6)]
    outputs = simulate(c, inputs)
    marking = net.initial
    for j in range(1, len(outputs) - 1):
        o = outputs[j]
        assert o & {output_name(p) for p in net.places} == {output_name(p) for p in marking}
        fired = [t for t in net.transitions if output_name(t) in o]
        assert len(fired) <= 1
        if fired:
            marking = fire(net, marking, fired[0])
        else:
            assert ERROR_OUTPUT in outputs[j + 1]
