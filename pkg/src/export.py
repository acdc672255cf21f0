from __future__ import annotations

import re
from typing import Any, Dict, List, Sequence

import pandas as pd

from .models import AnalysisOutput
from .utils import shorten_id

REPORT_COLUMNS = [
    "Source",
    "Graph ID",
    "Vertices",
    "Black",
    "White",
    "Parity",
    "dim C",
    "dim C_B",
    "dim C_W",
    "Guaranteed 2-exponent",
    "Guarantee status",
    "Exact count",
    "Exact valuation",
    "Billiard paths",
    "Fully reduced",
    "Seconds",
    "Notes",
]

VERIFY_COLUMNS = ["Check", "Size", "Cases", "Passed", "Failed", "Reproducer", "Notes"]


def _clean_cell(val: Any) -> Any:
    if val is None:
        return ""
    if isinstance(val, (bool, int, float)):
        return val
    s = str(val)
    s = re.sub(r"[\t\r\n]+", " ", s)
    s = re.sub(r"\s{2,}", " ", s).strip()
    return s


def _big(value: Any) -> Any:
    # counts beyond float precision go out as text
    if isinstance(value, int) and not isinstance(value, bool) and abs(value) >= 2 ** 53:
        return str(value)
    if isinstance(value, float) and value == float("inf"):
        return "inf"
    return value


def reports_to_dataframe(outputs: Sequence[AnalysisOutput]) -> pd.DataFrame:
    """One row per analysed input, columns in REPORT_COLUMNS order."""
    rows: List[Dict[str, Any]] = []
    for out in outputs:
        row: Dict[str, Any] = {c: "" for c in REPORT_COLUMNS}
        row["Source"] = out.source
        row["Vertices"] = out.region.get("vertices", "")
        row["Black"] = out.region.get("black", "")
        row["White"] = out.region.get("white", "")
        rep = out.report
        if rep is not None:
            row["Graph ID"] = shorten_id(rep.graph_id)
            row["Parity"] = rep.parity.value if rep.parity else ""
            row["dim C"] = rep.dim_C
            row["dim C_B"] = rep.dim_C_B
            row["dim C_W"] = rep.dim_C_W
            row["Guaranteed 2-exponent"] = rep.guaranteed_exponent
            row["Guarantee status"] = rep.guarantee_status.value
            row["Exact count"] = _big(rep.exact_count)
            row["Exact valuation"] = _big(rep.exact_valuation)
        if out.billiards:
            row["Billiard paths"] = out.billiards.get("d", "")
        if out.reduction:
            row["Fully reduced"] = out.reduction.get("fully_reduced", "")
        row["Seconds"] = round(out.seconds, 6)
        row["Notes"] = out.notes
        rows.append({k: _clean_cell(v) for k, v in row.items()})
    return pd.DataFrame(rows, columns=REPORT_COLUMNS)


def verify_to_dataframe(results: Sequence[Any]) -> pd.DataFrame:
    """Pass/fail matrix of a verify run (CheckResult records or their dicts)."""
    rows = []
    for r in results:
        d = r if isinstance(r, dict) else r.to_dict()
        rows.append({
            "Check": d.get("check", ""),
            "Size": d.get("size", ""),
            "Cases": d.get("cases", 0),
            "Passed": d.get("passed", 0),
            "Failed": d.get("failed", 0),
            "Reproducer": _clean_cell(d.get("reproducer", "")),
            "Notes": _clean_cell(d.get("notes", "")),
        })
    return pd.DataFrame(rows, columns=VERIFY_COLUMNS)


def save_tsv(df: pd.DataFrame, path: str) -> None:
    df.to_csv(path, sep="\t", index=False, encoding="utf-8")


def save_xlsx(df: pd.DataFrame, path: str) -> None:
    # a .tsv target writes TSV instead
    if str(path).lower().endswith(".tsv"):
        return save_tsv(df, path)
    df.to_excel(path, index=False, engine="openpyxl")


def save_table(df: pd.DataFrame, path: str) -> None:
    if str(path).lower().endswith((".xlsx", ".xlsm")):
        save_xlsx(df, path)
    else:
        save_tsv(df, path)
