"""HTTP interface over the checker (start with ``flowcheck serve``)."""
from __future__ import annotations

from dataclasses import replace
from typing import Literal, Optional

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import __version__
from .bench import gen_rp, gen_ru, gen_sf
from .circuit import encode_net, to_aiger, wrap_formula_for_circuit
from .logic import RunLtl, format_formula, parse_flow_ltl
from .mc import DEFAULT_STATE_CAP, check_flow_ltl, check_ltl, format_ltl_report, format_report, reduce_flow_ltl
from .pnwt import FiringError, SafetyError, parse_net, print_net
from .sdn import (
    encode_network,
    parse_config,
    parse_topology,
    parse_update,
    spec_connectivity,
    spec_loop_freedom,
    under_assumptions,
)

app = FastAPI(title="flowcheck", version=__version__)


class CheckRequest(BaseModel):
    net: str = Field(description="net file text")
    formula: str
    engine: Literal["explicit", "bmc"] = "explicit"
    bound: int = Field(20, ge=1)
    state_cap: int = Field(DEFAULT_STATE_CAP, ge=1)


class CheckResponse(BaseModel):
    verdict: str
    oracle_confirmed: Optional[bool] = None
    seconds: float = 0.0
    report: str


class TransformRequest(BaseModel):
    net: str
    formula: str = "true"


class TransformResponse(BaseModel):
    net: str
    formula: str
    places: int
    transitions: int


class AigerRequest(BaseModel):
    net: str
    formula: Optional[str] = None


class AigerResponse(BaseModel):
    aiger: str
    latches: int
    gates: int


class SdnRequest(BaseModel):
    topology: str
    config: str
    update: Optional[str] = None
    spec: Literal["connectivity", "loop-freedom"] = "connectivity"


class BundleResponse(BaseModel):
    net: str
    formula: str
    expected: Optional[bool] = None


class BenchRequest(BaseModel):
    family: Literal["sf", "rp", "ru"]
    n: int = 3
    n1: int = 1
    n2: int = 1
    version: Literal["B", "U", "M", "C"] = "B"
    switches: int = 4
    variant: Literal["T", "F"] = "T"
    seed: int = 0


def _bad_input(exc: Exception) -> HTTPException:
    return HTTPException(status_code=422, detail=str(exc))


@app.get("/health")
def health() -> dict:
    return {"status": "ok", "version": __version__}


@app.post("/check", response_model=CheckResponse)
def check(req: CheckRequest) -> CheckResponse:
    try:
        net = parse_net(req.net)
        phi = parse_flow_ltl(req.formula)
        if any(net.inhibitor_places(t) for t in net.transitions):
            if not isinstance(phi, RunLtl):
                raise ValueError("nets with inhibitor arcs are checked against plain LTL formulas only")
            res = check_ltl(net, phi.formula, req.state_cap)
            return CheckResponse(verdict=res.verdict, report=format_ltl_report(phi.formula, res))
        result = check_flow_ltl(net, phi, engine=req.engine, bound=req.bound, cap=req.state_cap)
    except (ValueError, SafetyError, FiringError) as exc:
        raise _bad_input(exc) from exc
    cex = result.counterexample
    return CheckResponse(
        verdict=result.verdict,
        oracle_confirmed=None if cex is None else cex.oracle_confirmed,
        seconds=result.seconds,
        report=format_report(net, phi, result),
    )


@app.post("/transform", response_model=TransformResponse)
def transform(req: TransformRequest) -> TransformResponse:
    try:
        tn, ltl = reduce_flow_ltl(parse_net(req.net), parse_flow_ltl(req.formula))
    except (ValueError, SafetyError) as exc:
        raise _bad_input(exc) from exc
    return TransformResponse(
        net=print_net(tn.net), formula=format_formula(ltl), places=len(tn.net.places), transitions=len(tn.net.transitions)
    )


@app.post("/aiger", response_model=AigerResponse)
def aiger(req: AigerRequest) -> AigerResponse:
    try:
        net = parse_net(req.net)
        if req.formula is None:
            circuit = encode_net(net)
        else:
            tn, ltl = reduce_flow_ltl(net, parse_flow_ltl(req.formula))
            circuit = encode_net(tn)
            circuit = replace(circuit, comments=circuit.comments + (f"formula {format_formula(wrap_formula_for_circuit(ltl))}",))
    except (ValueError, SafetyError) as exc:
        raise _bad_input(exc) from exc
    return AigerResponse(aiger=to_aiger(circuit).decode(), latches=len(circuit.latches), gates=len(circuit.ands))


@app.post("/sdn/encode", response_model=BundleResponse)
def sdn_encode(req: SdnRequest) -> BundleResponse:
    try:
        top, cfg = parse_topology(req.topology), parse_config(req.config)
        update = parse_update(req.update) if req.update else None
        net = encode_network(top, cfg, update)
    except ValueError as exc:
        raise _bad_input(exc) from exc
    spec = spec_connectivity(cfg.egress) if req.spec == "connectivity" else spec_loop_freedom(top.switches, cfg.egress)
    return BundleResponse(net=print_net(net), formula=format_formula(under_assumptions(net, spec)))


@app.post("/bench", response_model=BundleResponse)
def bench(req: BenchRequest) -> BundleResponse:
    try:
        if req.family == "sf":
            inst = gen_sf(req.n, seed=req.seed)
        elif req.family == "rp":
            inst = gen_rp(req.n1, req.n2, req.version)
        else:
            inst = gen_ru(req.switches, seed=req.seed, variant=req.variant)
    except ValueError as exc:
        raise _bad_input(exc) from exc
    return BundleResponse(net=print_net(inst.net), formula=format_formula(inst.formula), expected=inst.expected_verdict)
