"""Machine-vs-expert extended confusion matrix and the derived quality
metrics.

Each source record lands in one cell (i, k): i is how many destinations the
expert confirmed, k how many the machine proposed (0 = none). Beyond the
classic four outcomes this grid keeps the suggestion-list cases: row i=1
with k >= 2 is Block C (expert picked one of the machine's k suggestions),
row i=0 with k >= 2 is Block D, column k=1 with i >= 2 is Block A, and
column k=0 with i >= 2 is Block B. The secondary measures weigh those
blocks by how useful (or wasteful) the suggestion lists were.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .engine import MatchDecision
from .errors import EmptyMatrix, KeyMismatch, ZeroDenominator

RECALL_FOOTNOTE = (
    "proposed_recall is computed from the same published formula as "
    "proposed_precision; the source prints them identically"
)
MISMATCH_FOOTNOTE = (
    "a 1..1 decision whose destination disagrees with the expert's counts "
    "as a false positive"
)


@dataclass(frozen=True)
class ExtendedConfusionMatrix:
    """Sparse multiplicity grid plus the (1,1) agreement split.

    cells maps (expert multiplicity, machine multiplicity) to a count;
    agree_11 is how many of the (1,1) records name the same destination on
    both sides. total normally equals the cell sum, but may be given
    explicitly when reproducing a published table whose cells do not add up.
    """

    cells: Mapping[tuple[int, int], int]
    total: int
    agree_11: int

    @classmethod
    def from_cells(
        cls,
        cells: Mapping[tuple[int, int], int],
        total: "int | None" = None,
        agree_11: "int | None" = None,
    ) -> "ExtendedConfusionMatrix":
        cells = {k: v for k, v in cells.items() if v}
        if any(v < 0 for v in cells.values()):
            raise ValueError("negative cell count")
        cell_sum = sum(cells.values())
        if total is None:
            total = cell_sum
        elif total < cell_sum:
            raise ValueError(f"total {total} < cell sum {cell_sum}")
        if agree_11 is None:
            agree_11 = cells.get((1, 1), 0)
        if agree_11 > cells.get((1, 1), 0):
            raise ValueError("agree_11 exceeds the (1,1) cell")
        return cls(cells=dict(cells), total=total, agree_11=agree_11)

    # Classic-style counts -------------------------------------------------

    @property
    def tpp_count(self) -> int:
        return self.agree_11

    @property
    def vtnp_count(self) -> int:
        return self.cells.get((0, 0), 0)

    @property
    def fpp_count(self) -> int:
        # Wrong-destination 1..1 decisions count as false positives.
        return self.cells.get((0, 1), 0) + (self.cells.get((1, 1), 0) - self.agree_11)

    @property
    def fnp_count(self) -> int:
        return self.cells.get((1, 0), 0)

    # Regions ---------------------------------------------------------------

    def region_c(self) -> dict[int, int]:
        """Machine multiplicity -> count for expert=1, machine>=2."""
        return {k: n for (i, k), n in self.cells.items() if i == 1 and k >= 2}

    def region_d(self) -> dict[int, int]:
        return {k: n for (i, k), n in self.cells.items() if i == 0 and k >= 2}

    def region_a(self) -> dict[int, int]:
        """Expert multiplicity -> count for machine=1, expert>=2."""
        return {i: n for (i, k), n in self.cells.items() if k == 1 and i >= 2}

    def region_b(self) -> dict[int, int]:
        return {i: n for (i, k), n in self.cells.items() if k == 0 and i >= 2}

    @property
    def n_smax(self) -> int:
        return max((i for i, _ in self.cells), default=0)

    @property
    def n_mmax(self) -> int:
        return max((k for _, k in self.cells), default=0)

    def to_json(self) -> str:
        triples = sorted([i, k, n] for (i, k), n in self.cells.items())
        return json.dumps(
            {"total": self.total, "agree_11": self.agree_11, "cells": triples},
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text: str) -> "ExtendedConfusionMatrix":
        raw = json.loads(text)
        cells = {(i, k): n for i, k, n in raw["cells"]}
        return cls.from_cells(cells, total=raw["total"], agree_11=raw["agree_11"])


def build_matrix(
    machine: Iterable[MatchDecision],
    expert: Mapping[str, Sequence[str]],
) -> ExtendedConfusionMatrix:
    """Ingest machine decisions against expert labels (destination id lists,
    possibly empty). Both must cover exactly the same source ids; every
    record contributes one count."""
    machine = list(machine)
    machine_ids = {d.source_id for d in machine}
    expert_ids = set(expert)
    if machine_ids != expert_ids:
        missing = sorted(expert_ids ^ machine_ids)[:5]
        raise KeyMismatch(f"machine/expert id sets differ (e.g. {missing})")
    if len(machine) != len(machine_ids):
        raise KeyMismatch("duplicate source ids in machine decisions")

    cells: dict[tuple[int, int], int] = {}
    agree = 0
    for decision in machine:
        expert_set = set(expert[decision.source_id])
        i, k = len(expert_set), decision.multiplicity
        cells[(i, k)] = cells.get((i, k), 0) + 1
        if i == 1 and k == 1 and decision.dest_ids[0] in expert_set:
            agree += 1
    return ExtendedConfusionMatrix.from_cells(cells, agree_11=agree)


# ---------------------------------------------------------------------------
# Primary metrics


def _require_nonempty(m: ExtendedConfusionMatrix) -> None:
    if m.total == 0:
        raise EmptyMatrix("confusion matrix has no records")


def effectiveness(m: ExtendedConfusionMatrix) -> float:
    """Diagonal mass over diagonal plus distance-weighted off-diagonal mass."""
    _require_nonempty(m)
    diag = sum(n for (i, k), n in m.cells.items() if i == k)
    off = sum(abs(k - i) * n for (i, k), n in m.cells.items())
    if diag + off == 0:
        raise EmptyMatrix("confusion matrix has no counted cells")
    return diag / (diag + off)


def etpap(m: ExtendedConfusionMatrix) -> float:
    """Credit for expert-confirmed matches delivered inside a k-suggestion
    list, each discounted by 1/k."""
    _require_nonempty(m)
    return sum(n / k for k, n in m.region_c().items()) / m.total


def otpa(m: ExtendedConfusionMatrix) -> float:
    """Exact matches plus the discounted suggestion-list credit."""
    _require_nonempty(m)
    return m.tpp_count / m.total + etpap(m)


def emfi(m: ExtendedConfusionMatrix) -> float:
    """The complementary (k-1)/k mass of Block C: the machine's failure to
    pick the one right suggestion by itself."""
    _require_nonempty(m)
    return sum((k - 1) * n / k for k, n in m.region_c().items()) / m.total


def emfp(m: ExtendedConfusionMatrix) -> float:
    """Average suggestion count of expert-rejected lists (Block D); zero
    when the region is empty, otherwise necessarily > 1."""
    region = m.region_d()
    count = sum(region.values())
    if count == 0:
        return 0.0
    return sum(k * n for k, n in region.items()) / count


def emttp(m: ExtendedConfusionMatrix) -> float:
    """Share of expert-found matches the machine's single answer missed
    (Block A), averaged over the region."""
    region = m.region_a()
    count = sum(region.values())
    if count == 0:
        return 0.0
    return sum((i - 1) * n / i for i, n in region.items()) / count


def emfn(m: ExtendedConfusionMatrix) -> float:
    """Average expert-match count of machine non-matches (Block B); zero on
    an empty region, otherwise > 1."""
    region = m.region_b()
    count = sum(region.values())
    if count == 0:
        return 0.0
    return sum(i * n for i, n in region.items()) / count


def proposed_metrics(m: ExtendedConfusionMatrix) -> tuple[float, float, float]:
    """(accuracy, precision, recall) with verified-negative and
    suggestion-list terms in place of the raw classic denominators."""
    _require_nonempty(m)
    tpp = m.tpp_count / m.total
    vtnp = m.vtnp_count / m.total
    fpp = m.fpp_count / m.total
    fnp = m.fnp_count / m.total
    e, f = etpap(m), emfi(m)
    acc_den = tpp + vtnp + e + fpp + f + fnp
    pr_den = tpp + e + fpp + f + fnp
    if acc_den == 0 or pr_den == 0:
        raise ZeroDenominator("proposed metrics denominator is zero")
    accuracy = (tpp + vtnp + e) / acc_den
    precision = (tpp + e) / pr_den
    recall = (tpp + e) / pr_den  # printed identically to precision; see report note
    return accuracy, precision, recall


def classic_metrics(tp: int, tn: int, fp: int, fn: int) -> tuple[float, float, float]:
    """Textbook accuracy, precision, recall from the four counts."""
    if tp + tn + fp + fn == 0 or tp + fp == 0 or tp + fn == 0:
        raise ZeroDenominator("classic metrics denominator is zero")
    accuracy = (tp + tn) / (tp + tn + fp + fn)
    precision = tp / (tp + fp)
    recall = tp / (tp + fn)
    return accuracy, precision, recall


# ---------------------------------------------------------------------------
# Report


@dataclass(frozen=True)
class MetricsReport:
    tpp: float
    fpp: float
    vtnp: float
    fnp: float
    effectiveness: float
    etpap: float
    otpa: float
    emfi: float
    emfp: float
    emttp: float
    emfn: float
    # None when a denominator is zero (a slice with no machine positives, say).
    proposed_accuracy: "float | None"
    proposed_precision: "float | None"
    proposed_recall: "float | None"
    classic_accuracy: "float | None"
    classic_precision: "float | None"
    classic_recall: "float | None"
    total: int
    notes: tuple[str, ...] = (RECALL_FOOTNOTE, MISMATCH_FOOTNOTE)

    @classmethod
    def from_matrix(cls, m: ExtendedConfusionMatrix) -> "MetricsReport":
        _require_nonempty(m)
        try:
            acc, prec, rec = proposed_metrics(m)
        except ZeroDenominator:
            acc = prec = rec = None
        try:
            c_acc, c_prec, c_rec = classic_metrics(
                m.tpp_count, m.vtnp_count, m.fpp_count, m.fnp_count
            )
        except ZeroDenominator:
            c_acc = c_prec = c_rec = None
        return cls(
            tpp=m.tpp_count / m.total,
            fpp=m.fpp_count / m.total,
            vtnp=m.vtnp_count / m.total,
            fnp=m.fnp_count / m.total,
            effectiveness=effectiveness(m),
            etpap=etpap(m),
            otpa=otpa(m),
            emfi=emfi(m),
            emfp=emfp(m),
            emttp=emttp(m),
            emfn=emfn(m),
            proposed_accuracy=acc,
            proposed_precision=prec,
            proposed_recall=rec,
            classic_accuracy=c_acc,
            classic_precision=c_prec,
            classic_recall=c_rec,
            total=m.total,
        )

    def proportions(self) -> dict[str, float]:
        keys = (
            "tpp", "fpp", "vtnp", "fnp", "effectiveness", "etpap", "otpa",
            "emfi", "emfp", "emttp", "emfn", "proposed_accuracy",
            "proposed_precision", "proposed_recall", "classic_accuracy",
            "classic_precision", "classic_recall",
        )
        return {k: getattr(self, k) for k in keys}

    def percentages(self) -> dict[str, float]:
        """Proportion metrics as percentages rounded to 2 decimals (the
        multiplicity averages emfp/emfn stay plain numbers)."""
        out = {}
        for k, v in self.proportions().items():
            if v is None:
                out[k] = None
            elif k in ("emfp", "emfn"):
                out[k] = round(v, 2)
            else:
                out[k] = round(v * 100.0, 2)
        return out

    def to_json(self, matrix: "ExtendedConfusionMatrix | None" = None) -> str:
        payload = {
            "total": self.total,
            "proportions": self.proportions(),
            "percent": self.percentages(),
            "notes": list(self.notes),
        }
        if matrix is not None:
            payload["matrix"] = json.loads(matrix.to_json())
        return json.dumps(payload, sort_keys=True, ensure_ascii=False, indent=2)


def evaluate(
    machine: Iterable[MatchDecision], expert: Mapping[str, Sequence[str]]
) -> tuple[ExtendedConfusionMatrix, MetricsReport]:
    matrix = build_matrix(machine, expert)
    return matrix, MetricsReport.from_matrix(matrix)


def write_report(
    path: "Path | str",
    report: MetricsReport,
    matrix: "ExtendedConfusionMatrix | None" = None,
) -> None:
    Path(path).write_text(report.to_json(matrix) + "\n", encoding="utf-8")
