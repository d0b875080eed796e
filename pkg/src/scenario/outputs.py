"""Result tables written as CSV plus a run_meta.json for exact reproduction."""

import json
import os
from pathlib import Path
from typing import Dict, List, Union

import pandas as pd

from src import __version__
from src.core.exceptions import OutputError
from src.core.logger import get_component_logger
from src.engine.runner import ScenarioResults


MODE_SPLIT_COLUMNS = ["variant", "replication", "day", "category", "path_type", "count", "share"]
LEARNING_COLUMNS = ["variant", "replication", "day", "category", "path_type", "mode", "quantity",
                    "anticipated", "experienced", "n"]
KPI_COLUMNS = ["variant", "replication", "day", "service", "pkt_km", "vkt_km", "pkt_per_vkt", "load_factor",
               "revenue_km", "deadhead_km", "rebalancing_km", "boardings", "denied_boardings", "stranded",
               "vkt_zero"]
LINE_KPI_COLUMNS = ["variant", "replication", "day", "line", "pkt_km", "vkt_km", "pkt_per_vkt", "load_factor",
                    "boardings", "denied_boardings"]
LEDGER_COLUMNS = ["variant", "replication", "day", "group", "component", "quantity", "prior", "experience",
                  "n_exp"]

logger = get_component_logger("scenario")


def preflight_output_dir(path: Union[str, Path]) -> Path:
    """Create the output directory and check it is writable, before any simulation runs.

    Raises:
        OutputError: if the directory cannot be created or written
    """
    out = Path(path)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise OutputError(f"cannot create output directory {out}: {e.strerror or e}") from None
    if not out.is_dir() or not os.access(out, os.W_OK):
        raise OutputError(f"output directory {out} is not writable")
    return out


def _frame(rows: List[Dict], columns: List[str]) -> pd.DataFrame:
    return pd.DataFrame(rows, columns=columns)


def mean_tables(results: ScenarioResults) -> Dict[str, pd.DataFrame]:
    """Cross-replication means per variant and day."""
    split = _frame(results.rows("mode_split"), MODE_SPLIT_COLUMNS)
    split_mean = (split.groupby(["variant", "day", "category", "path_type"], sort=True)[["count", "share"]]
                  .mean().reset_index())

    kpis = _frame(results.rows("kpis"), KPI_COLUMNS)
    numeric = [c for c in KPI_COLUMNS[4:] if c != "vkt_zero"]
    kpis[numeric] = kpis[numeric].astype(float)
    kpi_mean = kpis.groupby(["variant", "day", "service"], sort=True)[numeric].mean().reset_index()

    lines = _frame(results.rows("line_kpis"), LINE_KPI_COLUMNS)
    line_numeric = LINE_KPI_COLUMNS[4:]
    lines[line_numeric] = lines[line_numeric].astype(float)
    line_mean = lines.groupby(["variant", "day", "line"], sort=True)[line_numeric].mean().reset_index()
    return {"mode_split_mean.csv": split_mean, "kpis_mean.csv": kpi_mean, "line_kpis_mean.csv": line_mean}


def write_outputs(results: ScenarioResults, out_dir: Union[str, Path]) -> List[Path]:
    """Write all result tables.

    Args:
        results: Finished scenario run
        out_dir: Output directory (created if missing)

    Returns:
        Paths of the written files
    """
    out = preflight_output_dir(out_dir)
    tables = {
        "mode_split.csv": _frame(results.rows("mode_split"), MODE_SPLIT_COLUMNS),
        "learning_curves.csv": _frame(results.rows("learning"), LEARNING_COLUMNS),
        "kpis.csv": _frame(results.rows("kpis"), KPI_COLUMNS),
        "line_kpis.csv": _frame(results.rows("line_kpis"), LINE_KPI_COLUMNS),
    }
    tables.update(mean_tables(results))
    ledger_rows = results.rows("ledger")
    if ledger_rows:
        tables["ledger.csv"] = _frame(ledger_rows, LEDGER_COLUMNS)

    written: List[Path] = []
    for name in sorted(tables):
        path = out / name
        tables[name].to_csv(path, index=False)
        written.append(path)

    meta = {
        "scenario": results.name,
        "variants": results.variants,
        "seed": results.seed,
        "days": results.days,
        "replications": results.replications,
        "config_hash": results.config_hash,
        "version": __version__,
        "files": [p.name for p in written],
    }
    meta_path = out / "run_meta.json"
    with open(meta_path, "w", encoding="utf-8") as f:
        json.dump(meta, f, indent=2, sort_keys=True)
    written.append(meta_path)

    logger.info("write_outputs", "Outputs written", {"directory": str(out), "files": len(written)})
    return written
