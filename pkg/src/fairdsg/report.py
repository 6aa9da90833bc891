"""Pareto fronts, normalized density, per-algorithm summaries, CSV plumbing.

Failed runs (status other than Found) receive normalized density 0 and are
the ones counted as unfair in summaries. Floats in CSV output use 9
significant digits, which re-parses well within 1e-9.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from typing import IO, Iterable, Mapping

import numpy as np

from .flow import exact_densest_subgraph
from .graph import LabeledGraph
from .sweep import SolutionRecord, SolveStatus

RESULT_FIELDS = [
    "algorithm", "instance", "n", "n_red", "n_blue", "edges",
    "sol_size", "sol_red", "sol_blue", "density", "balance",
    "normalized_density", "fair", "status", "runtime_ms", "seed",
]


def format_float(x: float) -> str:
    return f"{x:.9g}"


@dataclass(frozen=True)
class ParetoPoint:
    density: float
    balance: float
    size: int
    algorithm: str = ""

    def __post_init__(self):
        if self.density < 0:
            raise ValueError("density must be non-negative")
        if not 0.0 <= self.balance <= 1.0:
            raise ValueError("balance must lie in [0, 1]")


def pareto_front(points: Iterable[ParetoPoint]) -> list[ParetoPoint]:
    """Maximal points under (density, balance) dominance, density-descending.

    p dominates q when p is at least as good in both coordinates and
    strictly better in one. Duplicate (density, balance) pairs keep the
    smallest size.
    """
    ranked = sorted(points, key=lambda p: (-p.density, -p.balance, p.size))
    front: list[ParetoPoint] = []
    best_balance = -1.0
    for p in ranked:
        if front and p.density == front[-1].density and p.balance == front[-1].balance:
            continue
        if p.balance > best_balance:
            front.append(p)
            best_balance = p.balance
    return front


def normalized_density(record: SolutionRecord, g: LabeledGraph | None = None,
                       *, optimum: float | None = None) -> float:
    """record density / unconstrained optimum; 0 for failed runs.

    Pass ``optimum`` to reuse an already-computed unconstrained density.
    """
    if optimum is None:
        if g is None:
            raise ValueError("need either the graph or a precomputed optimum")
        optimum = exact_densest_subgraph(g).density
    if optimum <= 0.0:
        raise ValueError("zero unconstrained optimum; normalization undefined")
    if record.status is not SolveStatus.FOUND:
        return 0.0
    return record.density / optimum


@dataclass(frozen=True)
class SummaryRow:
    algorithm: str
    runs: int
    pct_unfair: float
    nd_median: float
    nd_q1: float
    nd_q3: float


def summarize(entries: Iterable[tuple[str, float, bool]]) -> list[SummaryRow]:
    """Aggregate (algorithm, normalized density, unfair?) triples.

    Unfair runs contribute their (zero) normalized density to the
    distribution and to the unfair percentage.
    """
    grouped: dict[str, list[tuple[float, bool]]] = {}
    for algorithm, nd, unfair in entries:
        grouped.setdefault(algorithm, []).append((nd, unfair))
    out = []
    for algorithm in sorted(grouped):
        values = grouped[algorithm]
        nds = np.array([nd for nd, _ in values], dtype=np.float64)
        unfair_count = sum(1 for _, unfair in values if unfair)
        q1, med, q3 = np.percentile(nds, [25.0, 50.0, 75.0])
        out.append(SummaryRow(
            algorithm=algorithm, runs=len(values),
            pct_unfair=100.0 * unfair_count / len(values),
            nd_median=float(med), nd_q1=float(q1), nd_q3=float(q3)))
    return out


@dataclass(frozen=True)
class RunManifest:
    """Provenance header embedded in every CLI output file."""

    command: str
    argv: tuple[str, ...]
    inputs: tuple[str, ...]
    algorithm: str | None
    delta: float | None
    tol: float
    max_iters: int
    seed: int
    version: str

    def to_comment(self) -> str:
        payload = {
            "command": self.command, "argv": list(self.argv),
            "inputs": list(self.inputs), "algorithm": self.algorithm,
            "delta": self.delta, "tol": self.tol,
            "max_iters": self.max_iters, "seed": self.seed,
            "version": self.version,
        }
        return "manifest: " + json.dumps(payload, sort_keys=True)

    @classmethod
    def from_comment(cls, comment: str) -> "RunManifest":
        prefix = "manifest: "
        if not comment.startswith(prefix):
            raise ValueError(f"not a manifest comment: {comment!r}")
        payload = json.loads(comment[len(prefix):])
        return cls(command=payload["command"], argv=tuple(payload["argv"]),
                   inputs=tuple(payload["inputs"]), algorithm=payload["algorithm"],
                   delta=payload["delta"], tol=payload["tol"],
                   max_iters=payload["max_iters"], seed=payload["seed"],
                   version=payload["version"])


def result_row(record: SolutionRecord, *, instance: str, g: LabeledGraph,
               n_red: int, n_blue: int, normalized: float, seed: int,
               include_runtime: bool) -> dict[str, str]:
    return {
        "algorithm": record.algorithm,
        "instance": instance,
        "n": str(g.n),
        "n_red": str(n_red),
        "n_blue": str(n_blue),
        "edges": str(g.num_edges),
        "sol_size": str(record.size),
        "sol_red": str(record.n_red_in_s),
        "sol_blue": str(record.n_blue_in_s),
        "density": format_float(record.density),
        "balance": format_float(record.balance),
        "normalized_density": format_float(normalized),
        "fair": "true" if record.fair else "false",
        "status": record.status.value,
        "runtime_ms": format_float(record.runtime_s * 1000.0) if include_runtime else "",
        "seed": str(seed),
    }


def write_csv(out: IO[str], fieldnames: list[str],
              rows: Iterable[Mapping[str, str]],
              manifest: RunManifest | None = None) -> None:
    if manifest is not None:
        out.write(f"# {manifest.to_comment()}\n")
    writer = csv.DictWriter(out, fieldnames=fieldnames, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)


def read_csv(source: IO[str]) -> tuple[RunManifest | None, list[dict[str, str]]]:
    manifest = None
    lines = []
    for line in source:
        if line.startswith("#"):
            comment = line[1:].strip()
            if comment.startswith("manifest: "):
                manifest = RunManifest.from_comment(comment)
            continue
        lines.append(line)
    rows = list(csv.DictReader(lines))
    return manifest, rows
