"""Benchmark generators and result reports."""
from .families import FAMILIES, RP_VERSIONS, RU_VARIANTS, BenchmarkInstance, gen_rp, gen_ru, gen_sf
from .report import COLUMNS, ReportRow, parse_tsv, rows_to_tsv, run_instance

__all__ = [name for name in dir() if not name.startswith("_")]
