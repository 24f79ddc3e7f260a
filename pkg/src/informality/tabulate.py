"""Informality share tables and two-way cross-tabulations.

All shares are computed on survey weights. Within-shares split each
category row into formal/informal percentages; across-shares distribute
each class over the rows, so the formal and informal across columns each
sum to 100. Indeterminate workers are excluded from denominators and their
weighted share is disclosed on the table.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from typing import Iterable

from .records import ObservationRecord, category_value
from .summation import NeumaierAccumulator
from .taxonomy import EmploymentClass


class ZeroWeightCategoryError(ValueError):
    """The category carries no formal/informal weight at all."""


@dataclass(frozen=True)
class ShareRow:
    label: str
    weight_formal: float
    weight_informal: float
    pct_formal_within: float
    pct_informal_within: float
    pct_of_all_formal_across: float
    pct_of_all_informal_across: float

    @property
    def weighted_count(self) -> float:
        return self.weight_formal + self.weight_informal

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "pct_formal_within": self.pct_formal_within,
            "pct_informal_within": self.pct_informal_within,
            "pct_of_all_formal_across": self.pct_of_all_formal_across,
            "pct_of_all_informal_across": self.pct_of_all_informal_across,
            "weighted_count": self.weighted_count,
        }


@dataclass(frozen=True)
class ShareTable:
    category: str
    rows: tuple[ShareRow, ...]
    excluded_weight_share: float  # weighted share of Indeterminate records

    def row(self, label: str) -> ShareRow:
        for r in self.rows:
            if r.label == label:
                return r
        raise KeyError(label)

    def to_dict(self) -> dict:
        return {
            "category": self.category,
            "excluded_weight_share": self.excluded_weight_share,
            "rows": [r.to_dict() for r in self.rows],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(
            [
                self.category,
                "within_formal_pct",
                "within_informal_pct",
                "across_formal_pct",
                "across_informal_pct",
                "weighted_count",
            ]
        )
        for r in self.rows:
            writer.writerow(
                [
                    r.label,
                    repr(r.pct_formal_within),
                    repr(r.pct_informal_within),
                    repr(r.pct_of_all_formal_across),
                    repr(r.pct_of_all_informal_across),
                    repr(r.weighted_count),
                ]
            )
        return buf.getvalue()


def _accumulate(
    classified: Iterable[tuple[ObservationRecord, EmploymentClass]],
    key_fn,
) -> tuple[dict, float, float]:
    """Weighted formal/informal mass per key; returns (cells, kept_w, excluded_w)."""
    cells: dict = {}
    excluded = NeumaierAccumulator()
    kept = NeumaierAccumulator()
    for record, cls in classified:
        if cls is EmploymentClass.INDETERMINATE:
            excluded.add(record.weight)
            continue
        kept.add(record.weight)
        key = key_fn(record)
        cell = cells.get(key)
        if cell is None:
            cell = (NeumaierAccumulator(), NeumaierAccumulator())
            cells[key] = cell
        cell[0 if cls is EmploymentClass.FORMAL else 1].add(record.weight)
    return cells, kept.total, excluded.total


def share_table(
    classified: Iterable[tuple[ObservationRecord, EmploymentClass]],
    category: str,
) -> ShareTable:
    """Formal/informal shares within and across the values of a category.

    Rows are sorted by label; labels whose formal+informal weight is zero
    are omitted (they carry no admitted mass).
    """
    cells, kept_w, excluded_w = _accumulate(classified, lambda r: category_value(r, category))
    total_formal = math.fsum(c[0].total for c in cells.values())
    total_informal = math.fsum(c[1].total for c in cells.values())
    if kept_w <= 0.0 or total_formal + total_informal <= 0.0:
        raise ZeroWeightCategoryError(f"category {category!r} has zero formal/informal weight")

    rows = []
    for label in sorted(cells):
        wf, wi = cells[label][0].total, cells[label][1].total
        row_w = wf + wi
        if row_w <= 0.0:
            continue
        rows.append(
            ShareRow(
                label=label,
                weight_formal=wf,
                weight_informal=wi,
                pct_formal_within=100.0 * wf / row_w,
                pct_informal_within=100.0 * wi / row_w,
                pct_of_all_formal_across=100.0 * wf / total_formal if total_formal > 0.0 else 0.0,
                pct_of_all_informal_across=100.0 * wi / total_informal if total_informal > 0.0 else 0.0,
            )
        )
    denom = kept_w + excluded_w
    return ShareTable(
        category=category,
        rows=tuple(rows),
        excluded_weight_share=excluded_w / denom if denom > 0.0 else 0.0,
    )


@dataclass(frozen=True)
class CrossCell:
    weight_formal: float
    weight_informal: float

    @property
    def weighted_count(self) -> float:
        return self.weight_formal + self.weight_informal

    @property
    def pct_informal_within(self) -> float:
        w = self.weighted_count
        return 100.0 * self.weight_informal / w if w > 0.0 else 0.0


@dataclass(frozen=True)
class CrossTab:
    primary_category: str
    secondary_category: str
    primary_labels: tuple[str, ...]
    secondary_labels: tuple[str, ...]
    cells: dict[tuple[str, str], CrossCell]
    excluded_weight_share: float

    def cell(self, primary: str, secondary: str) -> CrossCell:
        return self.cells.get((primary, secondary), CrossCell(0.0, 0.0))

    def primary_marginal(self, primary: str) -> CrossCell:
        wf = math.fsum(self.cell(primary, s).weight_formal for s in self.secondary_labels)
        wi = math.fsum(self.cell(primary, s).weight_informal for s in self.secondary_labels)
        return CrossCell(wf, wi)

    def to_dict(self) -> dict:
        return {
            "primary_category": self.primary_category,
            "secondary_category": self.secondary_category,
            "excluded_weight_share": self.excluded_weight_share,
            "cells": [
                {
                    "primary": p,
                    "secondary": s,
                    "weight_formal": self.cell(p, s).weight_formal,
                    "weight_informal": self.cell(p, s).weight_informal,
                    "pct_informal_within": self.cell(p, s).pct_informal_within,
                }
                for p in self.primary_labels
                for s in self.secondary_labels
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(
            [
                self.primary_category,
                self.secondary_category,
                "weight_formal",
                "weight_informal",
                "pct_informal_within",
            ]
        )
        for p in self.primary_labels:
            for s in self.secondary_labels:
                c = self.cell(p, s)
                writer.writerow(
                    [p, s, repr(c.weight_formal), repr(c.weight_informal), repr(c.pct_informal_within)]
                )
        return buf.getvalue()


def cross_tab(
    classified: Iterable[tuple[ObservationRecord, EmploymentClass]],
    secondary: str,
    primary: str = "occupation",
) -> CrossTab:
    """Two-way weighted counts of formal/informal by primary x secondary."""
    cells_acc, kept_w, excluded_w = _accumulate(
        classified,
        lambda r: (category_value(r, primary), category_value(r, secondary)),
    )
    if kept_w <= 0.0:
        raise ZeroWeightCategoryError(
            f"cross-tab {primary!r} x {secondary!r} has zero formal/informal weight"
        )
    cells = {
        key: CrossCell(acc[0].total, acc[1].total)
        for key, acc in cells_acc.items()
        if acc[0].total + acc[1].total > 0.0
    }
    denom = kept_w + excluded_w
    return CrossTab(
        primary_category=primary,
        secondary_category=secondary,
        primary_labels=tuple(sorted({p for p, _ in cells})),
        secondary_labels=tuple(sorted({s for _, s in cells})),
        cells=cells,
        excluded_weight_share=excluded_w / denom if denom > 0.0 else 0.0,
    )
