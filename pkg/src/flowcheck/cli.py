"""Command-line interface.

Exit codes of ``check``: 0 verified, 1 counterexample, 2 inconclusive,
3 for any error (diagnostics go to standard error).
"""
from __future__ import annotations

import argparse
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from typing import Optional, Sequence

from .bench import RP_VERSIONS, RU_VARIANTS, BenchmarkInstance, gen_rp, gen_ru, gen_sf, rows_to_tsv, run_instance
from .bundle import join_bundle, split_bundle
from .circuit import encode_net, to_aiger, wrap_formula_for_circuit
from .logic import RunLtl, format_formula, parse_flow_ltl
from .mc import (
    COUNTEREXAMPLE,
    DEFAULT_STATE_CAP,
    INCONCLUSIVE,
    VERIFIED,
    LtlResult,
    bmc_search,
    check_flow_ltl,
    check_ltl,
    format_ltl_report,
    format_report,
    reduce_flow_ltl,
)
from .pnwt import FiringError, Net, SafetyError, parse_net, print_net
from .sdn import (
    ASSUMPTIONS,
    encode_network,
    parse_config,
    parse_topology,
    parse_update,
    spec_connectivity,
    spec_drop_freedom,
    spec_loop_freedom,
    spec_packet_coherence,
    under_assumptions,
)

log = logging.getLogger("flowcheck")

EXIT_CODES = {VERIFIED: 0, COUNTEREXAMPLE: 1, INCONCLUSIVE: 2}
EXIT_ERROR = 3


class CliError(Exception):
    pass


# input and output --------------------------------------------------------------------


def _read_text(path: Optional[str], what: str) -> str:
    if path is None or path == "-":
        if path is None and sys.stdin.isatty():
            raise CliError(f"no {what} given: pass a file or pipe one on standard input")
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _emit(data: str | bytes, out: Optional[str]) -> None:
    if out is None or out == "-":
        if isinstance(data, bytes):
            sys.stdout.buffer.write(data)
            sys.stdout.buffer.flush()
        else:
            sys.stdout.write(data)
        return
    mode = "wb" if isinstance(data, bytes) else "w"
    with open(out, mode) as fh:
        fh.write(data)


def _load_net(args) -> tuple[Net, Optional[str]]:
    net_text, embedded = split_bundle(_read_text(args.net, "net"))
    net = parse_net(net_text)
    return net, args.formula if args.formula is not None else embedded


def _has_inhibitors(net: Net) -> bool:
    return any(net.inhibitor_places(t) for t in net.transitions)


# commands ---------------------------------------------------------------------------


def cmd_check(args) -> int:
    net, text = _load_net(args)
    if not text:
        raise CliError("no formula: pass --formula or add a '.formula' line to the net file")
    phi = parse_flow_ltl(text)
    direct = args.ltl or _has_inhibitors(net)
    if direct:
        if not isinstance(phi, RunLtl):
            raise CliError("nets with inhibitor arcs are checked against plain LTL formulas only")
        if args.engine == "explicit":
            result = check_ltl(net, phi.formula, args.state_cap)
        else:
            seq = bmc_search(net, phi.formula, args.bound, cap=args.state_cap)
            result = LtlResult(COUNTEREXAMPLE, seq) if seq else LtlResult(INCONCLUSIVE, reason=f"no counterexample within bound {args.bound}")
        verdict, report = result.verdict, format_ltl_report(phi.formula, result)
    else:
        result = check_flow_ltl(net, phi, engine=args.engine, bound=args.bound, cap=args.state_cap)
        verdict, report = result.verdict, format_report(net, phi, result)
        log.info("checked in %.3f s", result.seconds)
    _emit(report, args.out)
    if args.out not in (None, "-"):
        print(f"verdict: {verdict}")
    return EXIT_CODES[verdict]


def cmd_transform(args) -> int:
    net, text = _load_net(args)
    phi = parse_flow_ltl(text or "true")
    tn, ltl = reduce_flow_ltl(net, phi)
    comments = [f"transformed from {net.name} with {tn.n} subnet(s)"]
    _emit(join_bundle(print_net(tn.net), format_formula(ltl), comments), args.out)
    return 0


def cmd_aiger(args) -> int:
    net, text = _load_net(args)
    if text is None:
        circuit = encode_net(net)
    else:
        phi = parse_flow_ltl(text)
        if _has_inhibitors(net):
            if not isinstance(phi, RunLtl):
                raise CliError("nets with inhibitor arcs take plain LTL formulas only")
            target, ltl = net, phi.formula
        else:
            target, ltl = reduce_flow_ltl(net, phi)
        circuit = encode_net(target)
        wrapped = format_formula(wrap_formula_for_circuit(ltl))
        circuit = replace(circuit, comments=circuit.comments + (f"formula {wrapped}",))
    _emit(to_aiger(circuit), args.out)
    return 0


SDN_SPECS = ("connectivity", "loop-freedom", "drop-freedom", "coherence", "none")


def cmd_sdn_encode(args) -> int:
    top = parse_topology(_read_text(args.topology, "topology"))
    cfg = parse_config(_read_text(args.config, "configuration"))
    update = parse_update(_read_text(args.update, "update")) if args.update else None
    net = encode_network(top, cfg, update, name=args.name)
    if args.spec == "connectivity":
        spec = spec_connectivity(cfg.egress)
    elif args.spec == "loop-freedom":
        spec = spec_loop_freedom(top.switches, cfg.egress)
    elif args.spec == "drop-freedom":
        spec = spec_drop_freedom(cfg.egress, [t for t in net.transitions if t.startswith("fwd(")])
    elif args.spec == "coherence":
        if not args.path1 or not args.path2:
            raise CliError("coherence needs --path1 and --path2")
        spec = spec_packet_coherence(args.path1.split(","), args.path2.split(","))
    else:
        spec = None
    formula = None
    if spec is not None:
        formula = spec if args.assumption == "none" else under_assumptions(net, spec, args.assumption)
    _emit(join_bundle(print_net(net), format_formula(formula) if formula else None), args.out)
    return 0


def _instance_from_args(args) -> BenchmarkInstance:
    if args.family == "sf":
        return gen_sf(args.n, seed=args.seed)
    if args.family == "rp":
        return gen_rp(args.n1, args.n2, args.version)
    return gen_ru(args.switches, seed=args.seed, variant=args.variant)


def _bundle_of(inst: BenchmarkInstance) -> str:
    expected = {True: "holds", False: "fails", None: "unknown"}[inst.expected_verdict]
    comments = [f"benchmark {inst.name}", f"expected: {expected}"]
    return join_bundle(print_net(inst.net), format_formula(inst.formula), comments)


def cmd_bench(args) -> int:
    _emit(_bundle_of(_instance_from_args(args)), args.out)
    return 0


DEFAULT_CAMPAIGN = ("sf:3", "sf:4", "rp:1:1:B", "rp:1:1:U", "rp:1:1:M", "rp:1:1:C", "ru:4:F", "ru:4:T", "ru:5:F")


def parse_instance_spec(text: str, seed: int = 0) -> BenchmarkInstance:
    """``sf:N``, ``rp:N1:N2:V`` or ``ru:SWITCHES:VARIANT[:SEED]``."""
    parts = text.split(":")
    try:
        if parts[0] == "sf" and len(parts) == 2:
            return gen_sf(int(parts[1]), seed=seed)
        if parts[0] == "rp" and len(parts) == 4:
            return gen_rp(int(parts[1]), int(parts[2]), parts[3])
        if parts[0] == "ru" and len(parts) in (3, 4):
            return gen_ru(int(parts[1]), seed=int(parts[3]) if len(parts) == 4 else seed, variant=parts[2])
    except ValueError as exc:
        raise CliError(f"bad instance {text!r}: {exc}") from exc
    raise CliError(f"bad instance {text!r}; expected sf:N, rp:N1:N2:V or ru:SWITCHES:VARIANT[:SEED]")


def _run_one(job):
    inst, engine, bound, cap = job
    return run_instance(inst, engine=engine, bound=bound, cap=cap)


def cmd_report(args) -> int:
    instances = [parse_instance_spec(s, args.seed) for s in (args.instances or DEFAULT_CAMPAIGN)]
    jobs = [(inst, args.engine, args.bound, args.state_cap) for inst in instances]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_run_one, jobs))
    else:
        rows = [_run_one(job) for job in jobs]
    _emit(rows_to_tsv(rows), args.out)
    return 0


def cmd_serve(args) -> int:
    try:
        import uvicorn
    except ImportError as exc:
        raise CliError("serving needs uvicorn: pip install 'artifact[serve]'") from exc
    uvicorn.run("flowcheck.service:app", host=args.host, port=args.port, log_level="info")
    return 0


# argument parsing --------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    # usage errors must not look like an inconclusive verdict
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _engine_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--engine", choices=("explicit", "bmc"), default="explicit")
    p.add_argument("--bound", type=int, default=20, help="lasso length bound for the bmc engine")
    p.add_argument("--state-cap", type=int, default=DEFAULT_STATE_CAP, help="product states explored before giving up")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="flowcheck", description="Model checking of Flow-LTL on Petri nets with transits.")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    def net_input(p):
        p.add_argument("--net", help="net file ('-' or omitted: standard input)")
        p.add_argument("--formula", help="formula text (overrides a '.formula' line)")
        p.add_argument("--out", help="output file (default: standard output)")

    p = sub.add_parser("check", help="check a formula on a net")
    net_input(p)
    _engine_options(p)
    p.add_argument("--ltl", action="store_true", help="check a plain LTL formula directly on the net")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("transform", help="reduce a Flow-LTL check to an LTL check on an inhibitor net")
    net_input(p)
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("aiger", help="emit the circuit of a net as ASCII AIGER")
    net_input(p)
    p.set_defaults(func=cmd_aiger)

    p = sub.add_parser("sdn", help="software-defined network front end")
    sdn_sub = p.add_subparsers(dest="sdn_command", required=True)
    e = sdn_sub.add_parser("encode", help="encode topology, configuration and update as a net")
    e.add_argument("--topology", required=True)
    e.add_argument("--config", required=True)
    e.add_argument("--update")
    e.add_argument("--spec", choices=SDN_SPECS, default="connectivity")
    e.add_argument("--assumption", choices=ASSUMPTIONS + ("none",), default="weak_fair")
    e.add_argument("--path1", help="comma-separated switches of the first path (coherence)")
    e.add_argument("--path2", help="comma-separated switches of the second path (coherence)")
    e.add_argument("--name", default="sdn")
    e.add_argument("--out")
    e.set_defaults(func=cmd_sdn_encode)

    p = sub.add_parser("bench", help="generate a benchmark instance")
    fam = p.add_subparsers(dest="family", required=True)
    sf = fam.add_parser("sf", help="switch failure")
    sf.add_argument("--n", type=int, required=True)
    rp = fam.add_parser("rp", help="redundant pipeline")
    rp.add_argument("--n1", type=int, required=True)
    rp.add_argument("--n2", type=int, required=True)
    rp.add_argument("--version", choices=RP_VERSIONS, default="B", type=str.upper)
    ru = fam.add_parser("ru", help="routing update")
    ru.add_argument("--switches", type=int, required=True)
    ru.add_argument("--variant", choices=RU_VARIANTS, default="T", type=str.upper)
    for q in (sf, rp, ru):
        q.add_argument("--seed", type=int, default=0)
        q.add_argument("--out")
        q.set_defaults(func=cmd_bench)

    p = sub.add_parser("report", help="run benchmark instances and print a TSV report")
    p.add_argument("instances", nargs="*", help="sf:N, rp:N1:N2:V or ru:SWITCHES:VARIANT[:SEED]")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out")
    _engine_options(p)
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except (CliError, ValueError, OSError, SafetyError, FiringError) as exc:
        print(f"flowcheck: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
