"""Interbank network views and the twelve per-bin measures.

One time bin of loans yields three graphs over the same banks: an
undirected unweighted graph (any lending relation), a directed weighted
graph (edge weight = total lent issuer->receiver) and a multidirected
graph (one edge per individual loan). Clustering, shortest paths and
component extraction run on the undirected view via networkx.
"""

from __future__ import annotations

import enum
from collections import Counter, defaultdict
from dataclasses import dataclass

import networkx as nx
import numpy as np

from .errors import DegenerateDataError, MissingDataError
from .ingestion import BalanceSheetRecord, LoanRecord, TimeBin

__all__ = [
    "Measure",
    "NetworkViews",
    "MeasureSeries",
    "build_networks",
    "degree_series",
    "exposure_series",
    "edge_weight_series",
    "nodal_attribute_series",
    "avg_clustering",
    "avg_shortest_path",
    "largest_connected_component",
]


class Measure(enum.Enum):
    ASSET_SIZE = "asset_size"
    CAPITAL_SIZE = "capital_size"
    LEVERAGE = "leverage"
    LOAN_SIZE = "loan_size"
    COUNTERPARTY_EXPOSURE = "counterparty_exposure"
    UNDIRECTED_DEGREE = "undirected_degree"
    DIRECTED_IN_DEGREE = "directed_in_degree"
    DIRECTED_OUT_DEGREE = "directed_out_degree"
    MULTI_IN_DEGREE = "multi_in_degree"
    MULTI_OUT_DEGREE = "multi_out_degree"
    IN_EXPOSURE = "in_exposure"
    OUT_EXPOSURE = "out_exposure"


DEGREE_MEASURES = (
    Measure.UNDIRECTED_DEGREE,
    Measure.DIRECTED_IN_DEGREE,
    Measure.DIRECTED_OUT_DEGREE,
    Measure.MULTI_IN_DEGREE,
    Measure.MULTI_OUT_DEGREE,
)
BALANCE_MEASURES = (Measure.ASSET_SIZE, Measure.CAPITAL_SIZE, Measure.LEVERAGE)


@dataclass(frozen=True)
class MeasureSeries:
    """Strictly positive values of one measure in one bin, fit-ready."""

    measure: Measure
    values: np.ndarray
    bin: TimeBin

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))
        if np.any(self.values <= 0):
            raise ValueError("measure series values must be strictly positive")


@dataclass(frozen=True)
class NetworkViews:
    """The three graph variants built from one bin of loans."""

    nodes: frozenset[str]
    undirected_edges: frozenset[frozenset[str]]
    directed_edges: dict[tuple[str, str], float]
    multi_edges: tuple[tuple[str, str, float], ...]
    bin: TimeBin


def build_networks(loans: list[LoanRecord], bin: TimeBin) -> NetworkViews:
    """Construct the three views; rejects self-loans, non-positive sizes
    and loans reported outside the bin."""
    nodes: set[str] = set()
    undirected: set[frozenset[str]] = set()
    directed: dict[tuple[str, str], float] = defaultdict(float)
    multi: list[tuple[str, str, float]] = []
    for ln in loans:
        if ln.issuer == ln.receiver:
            raise ValueError(f"self-loan for bank {ln.issuer!r}")
        if ln.size <= 0:
            raise ValueError(f"non-positive loan size {ln.size}")
        if not (bin.start <= ln.reporting_date < bin.end):
            raise ValueError(f"loan dated {ln.reporting_date} outside bin {bin}")
        nodes.update((ln.issuer, ln.receiver))
        undirected.add(frozenset((ln.issuer, ln.receiver)))
        directed[(ln.issuer, ln.receiver)] += ln.size
        multi.append((ln.issuer, ln.receiver, ln.size))
    return NetworkViews(
        nodes=frozenset(nodes),
        undirected_edges=frozenset(undirected),
        directed_edges=dict(directed),
        multi_edges=tuple(multi),
        bin=bin,
    )


def _positive_series(measure, per_node: dict[str, float], bin) -> MeasureSeries:
    values = [per_node[b] for b in sorted(per_node) if per_node[b] > 0]
    return MeasureSeries(measure=measure, values=np.array(values, dtype=float), bin=bin)


def degree_series(views: NetworkViews, measure: Measure) -> MeasureSeries:
    """Per-node degree in the requested view; zero degrees are dropped."""
    if measure not in DEGREE_MEASURES:
        raise ValueError(f"{measure} is not a degree measure")
    counts: Counter[str] = Counter()
    if measure is Measure.UNDIRECTED_DEGREE:
        for pair in views.undirected_edges:
            for b in pair:
                counts[b] += 1
    elif measure is Measure.DIRECTED_IN_DEGREE:
        for (_, r) in views.directed_edges:
            counts[r] += 1
    elif measure is Measure.DIRECTED_OUT_DEGREE:
        for (i, _) in views.directed_edges:
            counts[i] += 1
    elif measure is Measure.MULTI_IN_DEGREE:
        for (_, r, _) in views.multi_edges:
            counts[r] += 1
    else:
        for (i, _, _) in views.multi_edges:
            counts[i] += 1
    return _positive_series(measure, counts, views.bin)


def exposure_series(views: NetworkViews, direction: str) -> MeasureSeries:
    """Per-node total borrowed ('in') or lent ('out'); zeros dropped."""
    if direction not in ("in", "out"):
        raise ValueError("direction must be 'in' or 'out'")
    totals: dict[str, float] = defaultdict(float)
    for (i, r, size) in views.multi_edges:
        totals[r if direction == "in" else i] += size
    measure = Measure.IN_EXPOSURE if direction == "in" else Measure.OUT_EXPOSURE
    return _positive_series(measure, totals, views.bin)


def edge_weight_series(views: NetworkViews, variant: str) -> MeasureSeries:
    """Loan variant: each individual loan size; counterparty variant: each
    aggregated directed-edge weight."""
    if variant == "loan":
        values = [size for (_, _, size) in views.multi_edges]
        measure = Measure.LOAN_SIZE
    elif variant == "counterparty":
        values = [views.directed_edges[k] for k in sorted(views.directed_edges)]
        measure = Measure.COUNTERPARTY_EXPOSURE
    else:
        raise ValueError("variant must be 'loan' or 'counterparty'")
    return MeasureSeries(
        measure=measure, values=np.array(values, dtype=float), bin=views.bin
    )


def nodal_attribute_series(
    balances: list[BalanceSheetRecord], bin: TimeBin, measure: Measure
) -> MeasureSeries:
    """Assets, capital or capital/assets per bank in the bin's reporting
    month. Banks with negative assets (data errors) or negative capital
    (effective default) are excluded; zero-asset banks additionally
    excluded from leverage."""
    if measure not in BALANCE_MEASURES:
        raise ValueError(f"{measure} is not a balance-sheet measure")
    month = f"{bin.start.year:04d}-{bin.start.month:02d}"
    monthly = [b for b in balances if b.month == month]
    if not monthly:
        raise MissingDataError(f"no balance-sheet records for month {month}")
    per_bank: dict[str, float] = {}
    for rec in monthly:
        if rec.total_assets < 0 or rec.capital < 0:
            continue
        if measure is Measure.ASSET_SIZE:
            per_bank[rec.bank] = rec.total_assets
        elif measure is Measure.CAPITAL_SIZE:
            per_bank[rec.bank] = rec.capital
        else:
            if rec.total_assets == 0:
                continue
            per_bank[rec.bank] = rec.capital / rec.total_assets
    return _positive_series(measure, per_bank, bin)


def measure_series(
    views: NetworkViews,
    measure: Measure,
    balances: list[BalanceSheetRecord] | None = None,
) -> MeasureSeries:
    """Compute any of the twelve measures for one bin."""
    if measure in BALANCE_MEASURES:
        if balances is None:
            raise MissingDataError(f"{measure.value} needs balance-sheet records")
        return nodal_attribute_series(balances, views.bin, measure)
    if measure in DEGREE_MEASURES:
        return degree_series(views, measure)
    if measure is Measure.LOAN_SIZE:
        return edge_weight_series(views, "loan")
    if measure is Measure.COUNTERPARTY_EXPOSURE:
        return edge_weight_series(views, "counterparty")
    if measure is Measure.IN_EXPOSURE:
        return exposure_series(views, "in")
    return exposure_series(views, "out")


def _undirected_graph(views: NetworkViews) -> nx.Graph:
    g = nx.Graph()
    g.add_nodes_from(views.nodes)
    g.add_edges_from(tuple(sorted(pair)) for pair in views.undirected_edges)
    return g


def avg_clustering(views: NetworkViews) -> float:
    """Mean local clustering coefficient; nodes of degree < 2 count as 0."""
    if not views.nodes:
        raise DegenerateDataError("empty network")
    return float(nx.average_clustering(_undirected_graph(views)))


def largest_connected_component(views: NetworkViews) -> NetworkViews:
    """Induced subgraph of the largest undirected component; ties broken
    by smallest contained node id."""
    if not views.nodes:
        raise DegenerateDataError("empty network")
    g = _undirected_graph(views)
    components = sorted(
        (frozenset(c) for c in nx.connected_components(g)),
        key=lambda c: (-len(c), min(c)),
    )
    keep = components[0]
    return NetworkViews(
        nodes=keep,
        undirected_edges=frozenset(
            pair for pair in views.undirected_edges if pair <= keep
        ),
        directed_edges={
            k: v for k, v in views.directed_edges.items() if set(k) <= keep
        },
        multi_edges=tuple(
            e for e in views.multi_edges if {e[0], e[1]} <= keep
        ),
        bin=views.bin,
    )


def avg_shortest_path(views: NetworkViews) -> float:
    """Unweighted average shortest path over ordered node pairs of the
    largest connected component."""
    lcc = largest_connected_component(views)
    if len(lcc.nodes) < 2:
        raise DegenerateDataError("largest component has a single node")
    return float(nx.average_shortest_path_length(_undirected_graph(lcc)))
