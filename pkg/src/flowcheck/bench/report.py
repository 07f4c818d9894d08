"""Running benchmark instances and emitting result rows as TSV."""
from __future__ import annotations

import csv
import io
from dataclasses import astuple, dataclass, fields
from typing import Iterable

from ..circuit.encode import encode_net, wrap_formula_for_circuit
from ..logic.ast import size
from ..mc.check import check_flow_ltl
from ..mc.product import DEFAULT_STATE_CAP
from .families import BenchmarkInstance

COLUMNS = ("Ben.", "Par.", "|P|", "|T|", "|phi|", "|P>|", "|T>|", "|phi'|", "Lat.", "Gat.", "Sec.", "Algo.", "verdict")


@dataclass(frozen=True)
class ReportRow:
    benchmark: str
    params: str
    places: int
    transitions: int
    formula_size: int
    transformed_places: int
    transformed_transitions: int
    transformed_formula_size: int
    latches: int
    gates: int
    seconds: float
    engine: str
    verdict: str

    def stable(self) -> tuple:
        """Every column except the timing one."""
        return astuple(self)[:10] + astuple(self)[11:]


def _format_params(params: dict) -> str:
    keep = ("n", "n1", "n2", "version", "switch_count", "seed", "variant")
    return ",".join(f"{k}={params[k]}" for k in keep if k in params)


def run_instance(inst: BenchmarkInstance, engine: str = "explicit", bound: int = 20, cap: int = DEFAULT_STATE_CAP) -> ReportRow:
    result = check_flow_ltl(inst.net, inst.formula, engine=engine, bound=bound, cap=cap)
    circuit = encode_net(result.tnet)
    family = inst.name.split("/", 1)[0]
    return ReportRow(
        benchmark=family,
        params=_format_params(inst.params),
        places=len(inst.net.places),
        transitions=len(inst.net.transitions),
        formula_size=inst.formula.size(),
        transformed_places=len(result.tnet.net.places),
        transformed_transitions=len(result.tnet.net.transitions),
        transformed_formula_size=size(wrap_formula_for_circuit(result.ltl)),
        latches=len(circuit.latches),
        gates=len(circuit.ands),
        seconds=round(result.seconds, 3),
        engine=engine,
        verdict=result.verdict,
    )


def rows_to_tsv(rows: Iterable[ReportRow]) -> str:
    buf = io.StringIO()
    out = csv.writer(buf, delimiter="\t", lineterminator="\n")
    out.writerow(COLUMNS)
    for row in sorted(rows, key=lambda r: (r.benchmark, r.params, r.engine)):
        out.writerow(astuple(row))
    return buf.getvalue()


def parse_tsv(text: str) -> list[ReportRow]:
    reader = csv.reader(io.StringIO(text), delimiter="\t")
    header = next(reader)
    if tuple(header) != COLUMNS:
        raise ValueError("unexpected report header")
    rows = []
    for rec in reader:
        values = []
        for f, v in zip(fields(ReportRow), rec):
            values.append(float(v) if f.type == "float" else int(v) if f.type == "int" else v)
        rows.append(ReportRow(*values))
    return rows


__all__ = ["COLUMNS", "ReportRow", "parse_tsv", "rows_to_tsv", "run_instance"]
