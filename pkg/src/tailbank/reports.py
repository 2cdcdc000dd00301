"""Per-bin scan, network-stats and bootstrap reports.

All report builders are pure functions returning plain dicts (JSON-ready);
CSV/JSON writers serialize them deterministically. Bins and measures are
independent jobs, optionally spread over a process pool sized by the
TAILBANK_WORKERS environment variable; rows are reassembled in bin order
so the worker count never changes the output bytes.
"""

from __future__ import annotations

import csv
import json
import os
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import network, selection, synthgen, tail
from .distributions import DistributionKind
from .errors import DegenerateDataError, InconclusiveDataError, MissingDataError
from .ingestion import BalanceSheetRecord, LoanRecord, bin_records
from .network import Measure

__all__ = [
    "scan_report",
    "network_stats_rows",
    "bootstrap_report",
    "write_csv",
    "write_json",
    "worker_count",
]

WORKERS_ENV = "TAILBANK_WORKERS"

_PARAM_COLUMNS = [
    (kind, name) for kind in DistributionKind for name in kind.param_names
]


def worker_count() -> int:
    value = os.environ.get(WORKERS_ENV)
    if value:
        n = int(value)
        if n < 1:
            raise ValueError(f"{WORKERS_ENV} must be >= 1")
        return n
    return os.cpu_count() or 1


def _fit_columns(report: selection.RankingReport | None) -> dict:
    cols: dict = {}
    for kind, name in _PARAM_COLUMNS:
        key = f"{kind.short.lower()}_{name}"
        fr = report.fits.get(kind) if report else None
        cols[key] = fr.spec.params[name] if fr else None
    for kind in DistributionKind:
        fr = report.fits.get(kind) if report else None
        cols[f"{kind.short.lower()}_loglik"] = fr.loglik if fr else None
    return cols


def _rank_row(
    values: np.ndarray, bin_start: str, bin_end: str, regime: str,
    level: float, min_tail: int,
) -> dict:
    row = {
        "bin_start": bin_start,
        "bin_end": bin_end,
        "regime": regime,
        "n": int(len(values)),
        "inconclusive": False,
        "x_min": None,
        "ks_z": None,
        "n_tail": None,
        "tail_fraction": None,
        "best": None,
        "alternates": None,
        "excluded": None,
    }
    try:
        if regime == "tail":
            sel = tail.select_xmin(values, min_tail=min_tail)
            report = selection.rank_candidates(
                values, sel.x_min_hat, level=level, min_tail=min_tail
            )
            row.update(
                x_min=sel.x_min_hat,
                ks_z=sel.ks_z,
                n_tail=sel.n_tail,
                tail_fraction=sel.tail_fraction,
            )
        else:
            report = selection.fit_full_range(values, level=level, min_tail=min_tail)
            row.update(
                x_min=float(np.min(values)),
                n_tail=int(len(values)),
                tail_fraction=1.0,
            )
    except (InconclusiveDataError, DegenerateDataError):
        row["inconclusive"] = True
        row.update(_fit_columns(None))
        return row
    row["best"] = report.best.value
    row["alternates"] = ";".join(k.value for k in report.alternates)
    row["excluded"] = ";".join(k.value for k in report.excluded)
    row.update(_fit_columns(report))
    return row


def _scan_job(args) -> tuple:
    measure_value, regime, bin_start, bin_end, values, level, min_tail = args
    row = _rank_row(np.asarray(values), bin_start, bin_end, regime, level, min_tail)
    return measure_value, regime, bin_start, row


def _mean_sd(values: list[float]) -> dict:
    if not values:
        return {"mean": None, "sd": None}
    arr = np.asarray(values, dtype=float)
    # near-degenerate fits can report astronomically large scales whose
    # moments overflow; report those aggregates as missing rather than inf
    with np.errstate(over="ignore"):
        mean, sd = float(arr.mean()), float(arr.std())
    return {
        "mean": mean if np.isfinite(mean) else None,
        "sd": sd if np.isfinite(sd) else None,
    }


def _summarize(rows: list[dict]) -> dict:
    conclusive = [r for r in rows if not r["inconclusive"]]
    summary: dict = {
        "n_bins": len(rows),
        "n_conclusive": len(conclusive),
        "n_inconclusive": len(rows) - len(conclusive),
        "best_percent": {},
        "tail_fraction": _mean_sd(
            [r["tail_fraction"] for r in conclusive if r["tail_fraction"] is not None]
        ),
        "params": {},
    }
    for kind in DistributionKind:
        wins = sum(1 for r in conclusive if r["best"] == kind.value)
        summary["best_percent"][kind.value] = (
            100.0 * wins / len(conclusive) if conclusive else None
        )
        for name in kind.param_names:
            key = f"{kind.short.lower()}_{name}"
            summary["params"][key] = _mean_sd(
                [r[key] for r in conclusive if r[key] is not None]
            )
    return summary


def scan_report(
    loans: list[LoanRecord],
    granularity: str,
    measures: list[Measure],
    regimes: list[str],
    balances: list[BalanceSheetRecord] | None = None,
    level: float = selection.DEFAULT_LEVEL,
    min_tail: int = tail.DEFAULT_MIN_TAIL,
    workers: int | None = None,
) -> dict[Measure, dict]:
    """One report per measure: per-bin ranking rows plus a summary."""
    binned = bin_records(loans, granularity)
    if not binned:
        raise InconclusiveDataError("no loans to scan")
    jobs = []
    for bin_, bin_loans in binned.items():
        views = network.build_networks(bin_loans, bin_)
        for measure in measures:
            try:
                series = network.measure_series(views, measure, balances)
            except MissingDataError:
                raise
            except ValueError:
                continue
            for regime in regimes:
                jobs.append(
                    (
                        measure.value,
                        regime,
                        bin_.start.isoformat(),
                        bin_.end.isoformat(),
                        series.values,
                        level,
                        min_tail,
                    )
                )
    workers = workers if workers is not None else worker_count()
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_scan_job, jobs, chunksize=4))
    else:
        results = [_scan_job(j) for j in jobs]

    reports: dict[Measure, dict] = {}
    for measure in measures:
        rows = [
            row
            for (mv, regime, _, row) in results
            if mv == measure.value
        ]
        if not rows:
            continue
        rows.sort(key=lambda r: (r["bin_start"], r["regime"]))
        reports[measure] = {
            "measure": measure.value,
            "granularity": granularity,
            "note": "continuous maximum likelihood applied to all measures, "
            "including discrete degree counts",
            "rows": rows,
            "summary": {
                regime: _summarize([r for r in rows if r["regime"] == regime])
                for regime in regimes
            },
        }
    if all(
        r["inconclusive"] for rep in reports.values() for r in rep["rows"]
    ):
        raise InconclusiveDataError("no conclusive bins in any report")
    return reports


def network_stats_rows(loans: list[LoanRecord], granularity: str) -> list[dict]:
    """Per-bin activity and topology series (plot-ready)."""
    binned = bin_records(loans, granularity)
    if not binned:
        raise InconclusiveDataError("no loans to analyse")
    rows = []
    for bin_, bin_loans in binned.items():
        views = network.build_networks(bin_loans, bin_)
        lcc = network.largest_connected_component(views)
        try:
            d = network.avg_shortest_path(views)
        except DegenerateDataError:
            d = None
        rows.append(
            {
                "bin_start": bin_.start.isoformat(),
                "bin_end": bin_.end.isoformat(),
                "n_banks": len(views.nodes),
                "n_loans": len(views.multi_edges),
                "avg_clustering": network.avg_clustering(views),
                "avg_shortest_path": d,
                "lcc_size": len(lcc.nodes),
            }
        )
    return rows


def _bootstrap_job(args) -> dict | None:
    values, level, min_tail = args
    try:
        sel = tail.select_xmin(values, min_tail=min_tail)
        report = selection.rank_candidates(
            values, sel.x_min_hat, level=level, min_tail=min_tail
        )
    except (InconclusiveDataError, DegenerateDataError):
        return None
    out = {"best": report.best.value, "x_min": sel.x_min_hat}
    for kind, fr in report.fits.items():
        for name, value in fr.spec.params.items():
            out[f"{kind.short.lower()}_{name}"] = value
    return out


def bootstrap_report(
    values: np.ndarray,
    n_reps: int = synthgen.DEFAULT_BOOTSTRAP_REPS,
    seed: int = 0,
    level: float = selection.DEFAULT_LEVEL,
    min_tail: int = tail.DEFAULT_MIN_TAIL,
    workers: int | None = None,
) -> dict:
    """Re-run the tail analysis on bootstrap replicates of one series."""
    original = _bootstrap_job((np.asarray(values, dtype=float), level, min_tail))
    if original is None:
        raise InconclusiveDataError("original series is inconclusive")
    replicates = synthgen.bootstrap_resample(values, n_reps=n_reps, seed=seed)
    jobs = [(rep, level, min_tail) for rep in replicates]
    workers = workers if workers is not None else worker_count()
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_bootstrap_job, jobs, chunksize=8))
    else:
        results = [_bootstrap_job(j) for j in jobs]
    fitted = [r for r in results if r is not None]
    tallies = {
        kind.value: sum(1 for r in fitted if r["best"] == kind.value)
        for kind in DistributionKind
    }
    modal = max(tallies, key=lambda k: tallies[k]) if fitted else None
    params: dict = {}
    for kind in DistributionKind:
        for name in kind.param_names:
            key = f"{kind.short.lower()}_{name}"
            params[key] = _mean_sd([r[key] for r in fitted if key in r])
    return {
        "n_reps": n_reps,
        "seed": seed,
        "n_fitted": len(fitted),
        "n_inconclusive": n_reps - len(fitted),
        "original": original,
        "best_counts": tallies,
        "modal_best": modal,
        "params": params,
        "x_min": _mean_sd([r["x_min"] for r in fitted]),
    }


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def write_csv(rows: list[dict], path: str | Path) -> None:
    """Deterministic CSV dump of homogeneous row dicts."""
    if not rows:
        raise ValueError("no rows to write")
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        header = list(rows[0])
        writer.writerow(header)
        for row in rows:
            writer.writerow([_format_cell(row[k]) for k in header])


def write_json(payload: dict, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
