"""Command-line front end: scan, network-stats, bootstrap, synth.

Exit codes: 0 success, 2 input parse failure, 3 invalid configuration or
parameters, 4 inconclusive data (no usable tail / no conclusive bins).
"""

from __future__ import annotations

import re
import sys
from datetime import date
from pathlib import Path

import click
import numpy as np

from . import network, reports, synthgen
from .distributions import DistributionKind, DistributionSpec
from .errors import (
    InconclusiveDataError,
    MissingDataError,
    ParameterError,
    ParseError,
    TailbankError,
)
from .ingestion import GRANULARITIES, bin_records, open_text, parse_balance_sheets, parse_loans, write_loans_csv
from .network import Measure

EXIT_PARSE = 2
EXIT_INVALID = 3
EXIT_INCONCLUSIVE = 4

_KIND_ALIASES = {k.value: k for k in DistributionKind}
_KIND_ALIASES.update({k.short.lower(): k for k in DistributionKind})


@click.group()
def cli():
    """Heavy-tailed distribution fitting and interbank network measures."""


def _load_loans(path: str):
    try:
        with open_text(path) as fh:
            parsed = parse_loans(fh)
    except FileNotFoundError:
        raise ParseError(f"cannot read loan file {path}")
    if parsed.dropped_long_maturity:
        click.echo(
            f"warning: dropped {parsed.dropped_long_maturity} loans with "
            f"maturity span over 7 days",
            err=True,
        )
    if not parsed.records:
        raise ParseError(f"loan file {path} holds no usable records")
    return parsed.records


def _parse_measures(spec: str, with_balances: bool) -> list[Measure]:
    if spec == "all":
        selected = list(Measure)
        if not with_balances:
            selected = [m for m in selected if m not in network.BALANCE_MEASURES]
        return selected
    out = []
    for token in spec.split(","):
        token = token.strip()
        try:
            out.append(Measure(token))
        except ValueError:
            valid = ", ".join(m.value for m in Measure)
            raise ParameterError(f"unknown measure {token!r}; valid: {valid}")
    return out


@cli.command()
@click.option("--loans", "loans_path", required=True, type=click.Path())
@click.option("--balances", "balances_path", type=click.Path(), default=None)
@click.option("--granularity", type=click.Choice(GRANULARITIES), default="month")
@click.option("--measures", default="all", help="comma list of measures, or 'all'")
@click.option("--regime", type=click.Choice(["tail", "full", "both"]), default="both")
@click.option("--level", type=float, default=0.01, show_default=True)
@click.option("--min-tail", type=int, default=10, show_default=True)
@click.option("--out-dir", type=click.Path(), default="reports", show_default=True)
def scan(loans_path, balances_path, granularity, measures, regime, level, min_tail, out_dir):
    """Per-bin tail/full-range fits and model-selection verdicts."""
    loans = _load_loans(loans_path)
    balances = None
    if balances_path:
        with open_text(balances_path) as fh:
            balances = parse_balance_sheets(fh)
    measure_list = _parse_measures(measures, balances is not None)
    regimes = ["tail", "full_range"] if regime == "both" else (
        ["full_range"] if regime == "full" else ["tail"]
    )
    result = reports.scan_report(
        loans,
        granularity,
        measure_list,
        regimes,
        balances=balances,
        level=level,
        min_tail=min_tail,
    )
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for measure, payload in result.items():
        stem = f"{measure.value}_{granularity}"
        reports.write_csv(payload["rows"], out / f"{stem}.csv")
        reports.write_json(payload, out / f"{stem}.json")
    click.echo(f"wrote {len(result)} report(s) to {out}")


@cli.command("network-stats")
@click.option("--loans", "loans_path", required=True, type=click.Path())
@click.option("--granularity", type=click.Choice(GRANULARITIES), default="month")
@click.option("--out", "out_path", type=click.Path(), default="network_stats.csv",
              show_default=True)
def network_stats(loans_path, granularity, out_path):
    """Per-bin bank/loan counts, clustering and shortest-path series."""
    loans = _load_loans(loans_path)
    rows = reports.network_stats_rows(loans, granularity)
    reports.write_csv(rows, out_path)
    click.echo(f"wrote {len(rows)} rows to {out_path}")


@cli.command()
@click.option("--loans", "loans_path", required=True, type=click.Path())
@click.option("--measure", required=True)
@click.option("--bin", "bin_label", required=True, help="bin start date (ISO)")
@click.option("--granularity", type=click.Choice(GRANULARITIES), default="month")
@click.option("--reps", type=int, default=synthgen.DEFAULT_BOOTSTRAP_REPS,
              show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--level", type=float, default=0.01, show_default=True)
@click.option("--min-tail", type=int, default=10, show_default=True)
@click.option("--out", "out_path", type=click.Path(), default="bootstrap.json",
              show_default=True)
def bootstrap(loans_path, measure, bin_label, granularity, reps, seed, level,
              min_tail, out_path):
    """Bootstrap the tail analysis of one measure in one bin."""
    loans = _load_loans(loans_path)
    measure_list = _parse_measures(measure, False)
    if len(measure_list) != 1 or measure_list[0] in network.BALANCE_MEASURES:
        raise ParameterError("bootstrap takes exactly one loan-based measure")
    binned = bin_records(loans, granularity)
    target = next((b for b in binned if b.start.isoformat() == bin_label), None)
    if target is None:
        raise ParameterError(
            f"no {granularity} bin starting {bin_label}; "
            f"have {', '.join(b.start.isoformat() for b in binned)}"
        )
    views = network.build_networks(binned[target], target)
    series = network.measure_series(views, measure_list[0])
    payload = reports.bootstrap_report(
        series.values, n_reps=reps, seed=seed, level=level, min_tail=min_tail
    )
    payload["measure"] = measure_list[0].value
    payload["bin_start"] = bin_label
    reports.write_json(payload, out_path)
    click.echo(f"modal best fit: {payload['modal_best']} -> {out_path}")


@cli.command()
@click.option("--config", "config_path", required=True, type=click.Path())
@click.option("--out", "out_path", required=True, type=click.Path())
def synth(config_path, out_path):
    """Generate a synthetic loan CSV from a flat key=value config."""
    config = _load_market_config(config_path)
    records = synthgen.generate_market(config)
    write_loans_csv(records, out_path)
    click.echo(f"wrote {len(records)} loans to {out_path}")


_DIST_RE = re.compile(r"^(\w+)\s*\((.*)\)$")


def _parse_dist(text: str, field: str) -> DistributionSpec:
    m = _DIST_RE.match(text.strip())
    if not m:
        raise ParameterError(
            f"config field {field!r}: want kind(name=value, ...), got {text!r}"
        )
    kind = _KIND_ALIASES.get(m.group(1).strip().lower())
    if kind is None:
        raise ParameterError(f"config field {field!r}: unknown kind {m.group(1)!r}")
    kwargs = {}
    for part in m.group(2).split(","):
        if not part.strip():
            continue
        if "=" not in part:
            raise ParameterError(f"config field {field!r}: bad term {part!r}")
        name, value = part.split("=", 1)
        try:
            kwargs[name.strip()] = float(value)
        except ValueError:
            raise ParameterError(f"config field {field!r}: bad number {value!r}")
    try:
        return DistributionSpec(kind, **kwargs)
    except (ParameterError, TypeError) as exc:
        raise ParameterError(f"config field {field!r}: {exc}")


def _load_market_config(path: str) -> synthgen.MarketConfig:
    pairs: dict[str, str] = {}
    try:
        with open(path, encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, start=1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise ParameterError(f"{path}:{line_no}: expected key = value")
                key, value = line.split("=", 1)
                pairs[key.strip()] = value.strip()
    except FileNotFoundError:
        raise ParseError(f"cannot read config file {path}")

    def need(key):
        if key not in pairs:
            raise ParameterError(f"config is missing required field {key!r}")
        return pairs[key]

    def as_int(key, value):
        try:
            return int(value)
        except ValueError:
            raise ParameterError(f"config field {key!r}: bad integer {value!r}")

    phases = []
    if "regime" in pairs:
        for chunk in pairs["regime"].split(","):
            bits = chunk.strip().split(":")
            if len(bits) != 4:
                raise ParameterError(
                    "config field 'regime': want start:end:bank_scale:loan_scale"
                )
            phases.append(
                synthgen.RegimePhase(
                    start_bin=as_int("regime", bits[0]),
                    end_bin=as_int("regime", bits[1]),
                    bank_scale=float(bits[2]),
                    loan_scale=float(bits[3]),
                )
            )
    known = {
        "n_banks", "n_bins", "granularity", "start", "seed", "loan_size_law",
        "activity_law", "fixed_loans_per_bank", "regime",
    }
    for key in pairs:
        if key not in known:
            raise ParameterError(f"unknown config field {key!r}")
    try:
        return synthgen.MarketConfig(
            n_banks=as_int("n_banks", need("n_banks")),
            n_bins=as_int("n_bins", need("n_bins")),
            loan_size_law=_parse_dist(need("loan_size_law"), "loan_size_law"),
            seed=as_int("seed", need("seed")),
            granularity=pairs.get("granularity", "month"),
            start=date.fromisoformat(pairs["start"]) if "start" in pairs
            else date(2001, 1, 1),
            activity_law=_parse_dist(pairs["activity_law"], "activity_law")
            if "activity_law" in pairs
            else None,
            fixed_loans_per_bank=as_int(
                "fixed_loans_per_bank", pairs["fixed_loans_per_bank"]
            )
            if "fixed_loans_per_bank" in pairs
            else None,
            regime_schedule=tuple(phases),
        )
    except ValueError as exc:
        raise ParameterError(str(exc))


def main(argv=None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.ClickException as exc:
        exc.show()
        return EXIT_INVALID
    except click.exceptions.Abort:
        return 1
    except ParseError as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_PARSE
    except (ParameterError, MissingDataError, ValueError) as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_INVALID
    except (InconclusiveDataError, TailbankError) as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_INCONCLUSIVE
    return 0


if __name__ == "__main__":
    sys.exit(main())
