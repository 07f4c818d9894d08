"""One test per acceptance criterion; each prints a PASS/FAIL line.

Lines are collected by ``conftest.py`` and shown in the terminal summary,
and printed immediately so ``pytest -s`` shows them inline.
"""
import random
import time

import pytest

from conftest import ACCEPTANCE_LINES
from flowcheck.bench import RP_VERSIONS, gen_rp, gen_ru, gen_sf
from flowcheck.circuit import encode_net, parse_aiger, to_aiger
from flowcheck.logic import eval_flow_ltl_oracle, eval_ltl_lasso, eval_ltl_naive, flow_subformulas
from flowcheck.mc import (
    COUNTEREXAMPLE,
    VERIFIED,
    Product,
    TraceKripke,
    check_circuit_equivalence,
    check_flow_ltl,
    find_accepting_lasso,
    ltl_to_buchi,
)
from flowcheck.pnwt import track_chains
from flowcheck.sdn import encode_network, spec_connectivity, spec_loop_freedom, under_assumptions
from flowcheck.sdn.fixtures import UPDATE_CORRECT, UPDATE_WRONG_ORDER, scenario
from flowcheck.transform import (
    MappingError,
    audit_constraints,
    expected_sizes,
    lift_counterexample,
    map_counterexample_back,
    transform_net,
)
from support import firing_sequences, random_firing_sequence, random_flow_formula, random_ltl, random_pnwt, random_trace

# runtime limits in seconds, per criterion
LIMIT_SIZES = 5
LIMIT_VERDICT = 120
LIMIT_MOTIVATING = 60
LIMIT_FLOW_EQUIVALENCE = 600
LIMIT_CIRCUIT_EQUIVALENCE = 300
LIMIT_ROUND_TRIP = 60
LIMIT_SEMANTICS = 120
STATE_CAP = 2_000_000


def record(criterion: str, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {criterion}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def size_instances():
    insts = [gen_sf(n, seed) for n in range(3, 7) for seed in range(3)]
    insts += [gen_rp(n1, n2, v) for n1 in range(1, 4) for n2 in range(1, 4) for v in RP_VERSIONS]
    insts += [gen_ru(k, seed, v) for k in range(3, 7) for seed in range(3) for v in "TF"]
    return insts


@pytest.fixture(scope="module")
def transformed():
    start = time.perf_counter()
    out = []
    for inst in size_instances():
        n = len(flow_subformulas(inst.formula))
        out.append((inst, n, transform_net(inst.net, n)))
    return out, time.perf_counter() - start


def test_criterion_1_transformed_sizes_and_audit(transformed):
    pairs, elapsed = transformed
    start = time.perf_counter()
    size_misses, audit_misses = [], []
    for inst, n, tn in pairs:
        if (len(tn.places), len(tn.transitions)) != expected_sizes(inst.net, n):
            size_misses.append(inst.name)
        if any(audit_constraints(inst.net, tn).values()):
            audit_misses.append(inst.name)
    elapsed += time.perf_counter() - start
    ok = not size_misses and not audit_misses and elapsed < LIMIT_SIZES
    record(
        "1",
        ok,
        f"{len(pairs)} instances, size mismatches {size_misses or 0}, audit failures {audit_misses or 0}, "
        f"{elapsed:.2f}s (limit {LIMIT_SIZES}s)",
    )


def test_criterion_1_literal_place_formula(transformed):
    # the place count exactly as printed in the criterion, n*(|P|+|T|+2)+|P|+1
    pairs, _ = transformed
    misses = []
    for inst, n, tn in pairs:
        P, T = len(inst.net.places), len(inst.net.transitions)
        if len(tn.places) != n * (P + T + 2) + P + 1:
            misses.append(f"{inst.name} got {len(tn.places)} want {n * (P + T + 2) + P + 1}")
    record("1 (printed place formula)", not misses, f"{len(pairs) - len(misses)}/{len(pairs)} match; first: {misses[:1]}")


TABLE_SIZES = [
    ("SF/3", gen_sf, (3,), (4, 5)),
    ("SF/9", gen_sf, (9,), (10, 11)),
    ("RP 1/1/B", gen_rp, (1, 1, "B"), (4, 5)),
    ("RP 4/4/B", gen_rp, (4, 4, "B"), (10, 11)),
    ("RP 1/1/U", gen_rp, (1, 1, "U"), (6, 9)),
    ("RP 5/4/U", gen_rp, (5, 4, "U"), (13, 16)),
    ("RP 1/1/M", gen_rp, (1, 1, "M"), (9, 11)),
    ("RP 4/3/M", gen_rp, (4, 3, "M"), (14, 16)),
]


def test_criterion_2_generator_sizes():
    wrong = []
    for label, gen, args, want in TABLE_SIZES:
        inst = gen(*args)
        got = (len(inst.net.places), len(inst.net.transitions))
        if got != want:
            wrong.append(f"{label} got {got} want {want}")
    record("2", not wrong, f"{len(TABLE_SIZES)} table rows, mismatches: {wrong or 'none'}")


def test_criterion_3_circuit_structure(transformed):
    pairs, _ = transformed
    latch_bad, header_bad, trip_bad = [], [], []
    for inst, _, tn in pairs:
        circuit = encode_net(tn)
        if len(circuit.latches) != len(tn.places) + 2:
            latch_bad.append(inst.name)
        data = to_aiger(circuit)
        M, I, L, O, A = map(int, data.split(b"\n", 1)[0].split()[1:])
        if (M, I, L, O) != (I + L + A, len(tn.transitions), len(tn.places) + 2, len(tn.places) + len(tn.transitions) + 1):
            header_bad.append(inst.name)
        if to_aiger(parse_aiger(data)) != data:
            trip_bad.append(inst.name)
    ok = not (latch_bad or header_bad or trip_bad)
    record(
        "3",
        ok,
        f"{len(pairs)} circuits, latch mismatches {latch_bad or 0}, header mismatches {header_bad or 0}, "
        f"round-trip mismatches {trip_bad or 0}",
    )


VERDICT_CASES = [gen_sf(3), gen_sf(4)] + [gen_rp(1, 1, v) for v in RP_VERSIONS]
VERDICT_CASES += [gen_ru(k, seed, "F") for k in (3, 4, 5) for seed in range(3)]


def test_criterion_4_verdicts():
    wrong, slowest = [], 0.0
    for inst in VERDICT_CASES:
        res = check_flow_ltl(inst.net, inst.formula, cap=STATE_CAP)
        want = VERIFIED if inst.expected_verdict else COUNTEREXAMPLE
        slowest = max(slowest, res.seconds)
        if res.verdict != want or res.seconds >= LIMIT_VERDICT:
            wrong.append(f"{inst.name}: {res.verdict}")
    record("4", not wrong, f"{len(VERDICT_CASES)} instances, wrong: {wrong or 'none'}, slowest {slowest:.2f}s")


def test_criterion_5_motivating_example():
    switches = ["d", "u", "v", "x", "y"]
    wrong_net = encode_network(*scenario(UPDATE_WRONG_ORDER))
    loop_free = under_assumptions(wrong_net, spec_loop_freedom(switches, ["d"]))
    bad = check_flow_ltl(wrong_net, loop_free)
    alternations = 0
    if bad.counterexample is not None and bad.counterexample.mapped_chains[0] is not None:
        visits = [s for s in bad.counterexample.mapped_chains[0].places if s in ("x", "y")]
        alternations = sum(1 for a, b in zip(visits, visits[1:]) if a != b)
    good_net = encode_network(*scenario(UPDATE_CORRECT))
    good = check_flow_ltl(good_net, under_assumptions(good_net, spec_connectivity(["d"])))
    ok = (
        bad.verdict == COUNTEREXAMPLE
        and bad.counterexample.oracle_confirmed
        and alternations >= 2
        and good.verdict == VERIFIED
        and max(bad.seconds, good.seconds) < LIMIT_MOTIVATING
    )
    record(
        "5",
        ok,
        f"wrong order {bad.verdict} (x/y alternations {alternations}, {bad.seconds:.2f}s); "
        f"correct order {good.verdict} ({good.seconds:.2f}s)",
    )


def test_criterion_6_flow_ltl_equivalence():
    rng = random.Random(2024)
    start = time.perf_counter()
    disagreements, stats = [], {}
    for k in range(200):
        net = random_pnwt(rng)
        phi = random_flow_formula(rng, net)
        res = check_flow_ltl(net, phi)
        violated = any(not eval_flow_ltl_oracle(net, seq, phi, validate=False) for seq in firing_sequences(net, 6))
        stats[(res.verdict, violated)] = stats.get((res.verdict, violated), 0) + 1
        if violated and res.verdict != COUNTEREXAMPLE:
            disagreements.append(k)
    elapsed = time.perf_counter() - start
    summary = ", ".join(f"{v}/{'violation' if b else 'none'} {c}" for (v, b), c in sorted(stats.items()))
    ok = not disagreements and elapsed < LIMIT_FLOW_EQUIVALENCE
    record("6", ok, f"200 instances, disagreements {len(disagreements)} at {disagreements}; {summary}; {elapsed:.2f}s")


def test_criterion_7_circuit_equivalence():
    rng = random.Random(7)
    start = time.perf_counter()
    total, agreed = 0, 0
    for _ in range(20):
        net = random_pnwt(rng, inhibitors=True)
        for _ in range(5):
            phi = random_ltl(rng, list(net.places) + list(net.transitions), 3)
            total += 1
            agreed += check_circuit_equivalence(net, phi).agree is True
    elapsed = time.perf_counter() - start
    ok = agreed == total and elapsed < LIMIT_CIRCUIT_EQUIVALENCE
    record("7", ok, f"{agreed}/{total} agree over 20 inhibitor nets, {elapsed:.2f}s")


def _chain_key(seq, chain):
    if chain is None:
        return None
    c = chain.normalized()
    fold = seq.normalize_index
    return c.places, c.transitions, c.loop, fold(c.start_step), tuple(fold(k) for k in c.steps)


def test_criterion_8_round_trip():
    rng = random.Random(8)
    start = time.perf_counter()
    identical, redrawn, unconfirmed, engine_cex = 0, 0, 0, 0
    done = 0
    while done < 100:
        net = random_pnwt(rng)
        n = rng.randint(1, 2)
        tn = transform_net(net, n)
        seq = random_firing_sequence(rng, net)
        chains = track_chains(net, seq)
        picks = [rng.choice(chains + [None]) if chains else None for _ in range(n)]
        try:
            lifted = lift_counterexample(tn, seq, picks)
        except MappingError:
            # the lift is partial: chains ending on a consumed place cannot be followed
            redrawn += 1
            continue
        done += 1
        back = map_counterexample_back(tn, lifted)
        same_seq = back.sequence.normalized() == seq.normalized()
        same_chains = [_chain_key(seq, c) for c in back.chains] == [_chain_key(seq, c) for c in picks]
        identical += same_seq and same_chains
        res = check_flow_ltl(net, random_flow_formula(rng, net))
        if res.counterexample is not None:
            engine_cex += 1
            unconfirmed += not res.counterexample.oracle_confirmed
    elapsed = time.perf_counter() - start
    ok = identical == 100 and unconfirmed == 0 and elapsed < LIMIT_ROUND_TRIP
    record(
        "8",
        ok,
        f"{identical}/100 round trips identical ({redrawn} draws outside the lift's domain redrawn); "
        f"{engine_cex - unconfirmed}/{engine_cex} engine counterexamples confirmed; {elapsed:.2f}s",
    )


def test_criterion_9_semantics():
    rng = random.Random(9)
    start = time.perf_counter()
    names = ["a", "b", "c"]
    naive_ok = 0
    for _ in range(1000):
        phi, tr = random_ltl(rng, names, 4), random_trace(rng, names)
        naive_ok += eval_ltl_lasso(phi, tr) == eval_ltl_naive(phi, tr)
    buchi_ok = 0
    for _ in range(500):
        phi, tr = random_ltl(rng, names, 3), random_trace(rng, names, max_prefix=3, max_period=3)
        accepted = find_accepting_lasso(Product(TraceKripke(tr), ltl_to_buchi(phi))) is not None
        buchi_ok += accepted == eval_ltl_lasso(phi, tr)
    elapsed = time.perf_counter() - start
    ok = naive_ok == 1000 and buchi_ok == 500 and elapsed < LIMIT_SEMANTICS
    record("9", ok, f"lasso vs unrolled {naive_ok}/1000, automaton vs lasso {buchi_ok}/500, {elapsed:.2f}s")
