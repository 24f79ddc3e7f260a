"""Subgroup decomposition of weighted GE inequality indices.

For a partition of the sample into groups j with population shares
P_j = (group weight)/(total weight) and income shares
R_j = P_j * mu_j / mu, the within-group term is

    I_w = sum_j W_j I(Y_j),   W_j = R_j^alpha * P_j^(1-alpha)
                                  = P_j * (mu_j/mu)^alpha

and the between-group term is the residual I_b = I - I_w. A group's
absolute contribution to the within term is C_w(j) = W_j I(Y_j); its
percentage contribution to total inequality is C_t(j) = 100 C_w(j)/I.

A nested (two-level) decomposition re-decomposes each outer group by an
inner key and rescales leaf contributions by the outer group's W so that
all leaves plus all between-terms account for 100% of the grand total:

    C_t(g, j) = 100 * W_g * W_{g,j} * I(Y_{g,j}) / I.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field as dc_field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .records import ObservationRecord, category_value
from .stats import EmptySampleError, GEIndex, WeightedSample, ge_index
from .summation import det_dot, det_sum, exact_residual
from .taxonomy import EmploymentClass


@dataclass(frozen=True)
class LabeledSample:
    """A weighted sample with one categorical key per item.

    ``codes`` index into ``labels``; use :meth:`from_labels` to factorize a
    sequence of label values, or pass integer codes directly for large
    array pipelines.
    """

    values: np.ndarray
    weights: np.ndarray
    codes: np.ndarray
    labels: tuple[str, ...]
    key: str = "group"

    def __post_init__(self) -> None:
        values = np.ascontiguousarray(self.values, dtype=np.float64)
        weights = np.ascontiguousarray(self.weights, dtype=np.float64)
        codes = np.ascontiguousarray(self.codes, dtype=np.intp)
        if not (len(values) == len(weights) == len(codes)):
            raise ValueError("values, weights and codes must have equal length")
        if len(values) == 0:
            raise EmptySampleError("labeled sample is empty")
        if not np.all(np.isfinite(values)) or np.any(values <= 0.0):
            raise ValueError("values must be finite and strictly positive")
        if not np.all(np.isfinite(weights)) or np.any(weights < 0.0):
            raise ValueError("weights must be finite and non-negative")
        if len(self.labels) == 0:
            raise ValueError("labels must be non-empty")
        if codes.min() < 0 or codes.max() >= len(self.labels):
            raise ValueError("codes out of range for labels")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "codes", codes)
        object.__setattr__(self, "labels", tuple(str(l) for l in self.labels))

    @classmethod
    def from_labels(
        cls,
        values: Sequence[float] | np.ndarray,
        weights: Sequence[float] | np.ndarray,
        labels: Sequence[str],
        key: str = "group",
        expected_labels: Sequence[str] | None = None,
    ) -> "LabeledSample":
        """Factorize string labels; groups keep ``expected_labels`` order
        when given, else sorted label order."""
        arr = np.asarray(labels, dtype=object)
        if expected_labels is not None:
            uniq = [str(l) for l in expected_labels]
            index = {l: i for i, l in enumerate(uniq)}
            unknown = {str(l) for l in arr} - set(uniq)
            if unknown:
                raise ValueError(f"labels {sorted(unknown)} not in expected label set")
        else:
            uniq = sorted({str(l) for l in arr})
            index = {l: i for i, l in enumerate(uniq)}
        codes = np.fromiter((index[str(l)] for l in arr), dtype=np.intp, count=len(arr))
        return cls(np.asarray(values), np.asarray(weights), codes, tuple(uniq), key=key)

    def __len__(self) -> int:
        return len(self.values)


def labeled_sample_from_records(
    classified: Iterable[tuple[ObservationRecord, EmploymentClass]],
    key: str,
    include_indeterminate: bool = False,
) -> tuple[LabeledSample, float]:
    """Build a LabeledSample from classified records grouped by ``key``.

    ``key`` is "employment_class" or any record category field. Records
    without a positive mpce are skipped, as are Indeterminate workers
    unless ``include_indeterminate``. Returns the sample and the weighted
    share of classified records that was excluded.
    """
    values: list[float] = []
    weights: list[float] = []
    labels: list[str] = []
    excluded_w = 0.0
    total_w = 0.0
    for record, cls in classified:
        total_w += record.weight
        admissible = record.mpce is not None and record.mpce > 0.0
        if cls is EmploymentClass.INDETERMINATE and not include_indeterminate:
            admissible = False
        if not admissible:
            excluded_w += record.weight
            continue
        values.append(record.mpce)
        weights.append(record.weight)
        labels.append(cls.value if key == "employment_class" else category_value(record, key))
    if not values:
        raise EmptySampleError("no admissible records for decomposition")
    sample = LabeledSample.from_labels(values, weights, labels, key=key)
    share = excluded_w / total_w if total_w > 0.0 else 0.0
    return sample, share


@dataclass(frozen=True)
class Group:
    """One cell of a partition with its shares and mean."""

    label: str
    sample: WeightedSample | None  # None for zero-weight groups
    population_share: float
    income_share: float
    mean: float
    zero_weight: bool = False


@dataclass(frozen=True)
class GroupPartition:
    key: str
    groups: tuple[Group, ...]
    total_weight: float
    grand_mean: float


def partition(sample: LabeledSample, threads: int = 1) -> GroupPartition:
    """Split a labeled sample into per-group weighted samples and shares.

    P_j is the group's share of total weight; R_j = P_j mu_j / mu is its
    share of total weighted income. Groups with zero weight are kept,
    flagged, with P = R = 0.
    """
    order = np.argsort(sample.codes, kind="stable")
    v_sorted = sample.values[order]
    w_sorted = sample.weights[order]
    counts = np.bincount(sample.codes, minlength=len(sample.labels))
    bounds = np.concatenate(([0], np.cumsum(counts)))

    sw_total = det_sum(sample.weights, threads)
    if sw_total <= 0.0:
        raise EmptySampleError("total weight is zero")
    swy_total = det_dot(sample.weights, sample.values, threads)
    grand_mean = swy_total / sw_total

    groups: list[Group] = []
    for j, label in enumerate(sample.labels):
        lo, hi = int(bounds[j]), int(bounds[j + 1])
        v_j, w_j = v_sorted[lo:hi], w_sorted[lo:hi]
        sw_j = det_sum(w_j, threads)
        if sw_j <= 0.0:
            groups.append(Group(label, None, 0.0, 0.0, 0.0, zero_weight=True))
            continue
        swy_j = det_dot(w_j, v_j, threads)
        groups.append(
            Group(
                label=label,
                sample=WeightedSample(v_j, w_j),
                population_share=sw_j / sw_total,
                income_share=swy_j / swy_total,
                mean=swy_j / sw_j,
            )
        )
    return GroupPartition(sample.key, tuple(groups), sw_total, grand_mean)


def subgroup_weights(part: GroupPartition, alpha: float) -> list[float]:
    """W_j = R_j^alpha * P_j^(1-alpha); zero-weight groups get W_j = 0.

    The equivalent form P_j (mu_j/mu)^alpha agrees to rounding; the power
    form in shares is used because it needs no mean ratio.
    """
    alpha = float(alpha)
    out = []
    for g in part.groups:
        if g.zero_weight:
            out.append(0.0)
        else:
            out.append(g.income_share**alpha * g.population_share ** (1.0 - alpha))
    return out


@dataclass(frozen=True)
class GroupContribution:
    """Per-group row of a decomposition result."""

    label: str
    population_share: float
    income_share: float
    subgroup_weight: float
    group_index: float
    contribution_within: float
    contribution_total_pct: float
    zero_weight: bool = False

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "population_share": self.population_share,
            "income_share": self.income_share,
            "subgroup_weight": self.subgroup_weight,
            "group_index": self.group_index,
            "contribution_within": self.contribution_within,
            "contribution_total_pct": self.contribution_total_pct,
            "zero_weight": self.zero_weight,
        }


@dataclass(frozen=True)
class DecompositionResult:
    """Single-level within/between decomposition.

    ``between_index`` is the residual total - within, stored so that
    ``within_index + between_index == total_index.value`` holds exactly
    in float64. Negative residuals are reported verbatim with a warning.
    """

    key: str
    alpha: float
    total_index: GEIndex
    within_index: float
    between_index: float
    rows: tuple[GroupContribution, ...]
    share_within_pct: float
    share_between_pct: float
    warnings: tuple[str, ...] = ()

    @property
    def degenerate(self) -> bool:
        return "degenerate-total" in self.warnings

    def to_dict(self) -> dict:
        return {
            "key": self.key,
            "alpha": self.alpha,
            "total_index": self.total_index.value,
            "within_index": self.within_index,
            "between_index": self.between_index,
            "share_within_pct": self.share_within_pct,
            "share_between_pct": self.share_between_pct,
            "rows": [r.to_dict() for r in self.rows],
            "warnings": list(self.warnings),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def to_csv(self) -> str:
        """Flat rows with the published-table column layout."""
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(_CSV_COLUMNS)
        _write_block_rows(writer, self, block="All", ct_scale=None)
        return out.getvalue()


def decompose(sample: LabeledSample, alpha: float, threads: int = 1) -> DecompositionResult:
    """Decompose total inequality over the sample's groups at ``alpha``."""
    alpha = float(alpha)
    part = partition(sample, threads)
    pooled = WeightedSample(sample.values, sample.weights)
    total = ge_index(pooled, alpha, threads)

    weights_w = subgroup_weights(part, alpha)
    warnings: list[str] = []
    rows: list[GroupContribution] = []
    contribs: list[float] = []
    for g, w_j in zip(part.groups, weights_w):
        if g.zero_weight:
            rows.append(GroupContribution(g.label, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, zero_weight=True))
            contribs.append(0.0)
            continue
        i_j = ge_index(g.sample, alpha, threads).value
        c_w = w_j * i_j
        rows.append(
            GroupContribution(
                label=g.label,
                population_share=g.population_share,
                income_share=g.income_share,
                subgroup_weight=w_j,
                group_index=i_j,
                contribution_within=c_w,
                contribution_total_pct=0.0,  # filled below
            )
        )
        contribs.append(c_w)

    within = math.fsum(contribs)
    try:
        between = exact_residual(total.value, within)
    except ArithmeticError:
        # only reachable when within dwarfs total; keep the rounded residual
        between = total.value - within
        warnings.append("inexact-identity")
    if between < 0.0:
        warnings.append("negative-between")

    if total.value == 0.0 and any(not g.zero_weight for g in part.groups):
        warnings.append("degenerate-total")
        share_within = share_between = 0.0
        cts = [0.0] * len(rows)
    else:
        share_within = 100.0 * (within / total.value)
        share_between = 100.0 * (between / total.value)
        cts = [100.0 * (c / total.value) for c in contribs]

    rows = [
        GroupContribution(
            label=r.label,
            population_share=r.population_share,
            income_share=r.income_share,
            subgroup_weight=r.subgroup_weight,
            group_index=r.group_index,
            contribution_within=r.contribution_within,
            contribution_total_pct=ct,
            zero_weight=r.zero_weight,
        )
        for r, ct in zip(rows, cts)
    ]
    return DecompositionResult(
        key=sample.key,
        alpha=alpha,
        total_index=total,
        within_index=within,
        between_index=between,
        rows=tuple(rows),
        share_within_pct=share_within,
        share_between_pct=share_between,
        warnings=tuple(warnings),
    )


@dataclass(frozen=True)
class NestedInnerBlock:
    """Inner decomposition of one outer group, rescaled to the grand total.

    ``local`` is the group's own decomposition by the inner key (its
    contributions are against the group total). ``leaf_ct_grand_pct``
    aligns with ``local.rows`` and expresses each leaf against the grand
    index, as do the within/between shares.
    """

    outer_label: str
    outer_weight: float
    local: DecompositionResult
    leaf_ct_grand_pct: tuple[float, ...]
    share_within_grand_pct: float
    share_between_grand_pct: float

    def to_dict(self) -> dict:
        d = self.local.to_dict()
        for row, ct in zip(d["rows"], self.leaf_ct_grand_pct):
            row["contribution_total_pct_grand"] = ct
        return {
            "outer_label": self.outer_label,
            "outer_weight": self.outer_weight,
            "share_within_grand_pct": self.share_within_grand_pct,
            "share_between_grand_pct": self.share_between_grand_pct,
            "local": d,
        }


@dataclass(frozen=True)
class NestedDecompositionResult:
    alpha: float
    outer: DecompositionResult
    inner: tuple[NestedInnerBlock, ...]

    def grand_closure_pct(self) -> float:
        """Sum of leaf and between contributions against the grand total.

        Equals 100 up to rounding whenever the grand index is nonzero.
        """
        terms = [self.outer.share_between_pct]
        for block in self.inner:
            terms.extend(block.leaf_ct_grand_pct)
            terms.append(block.share_between_grand_pct)
        return math.fsum(terms)

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "outer": self.outer.to_dict(),
            "inner": [b.to_dict() for b in self.inner],
            "grand_closure_pct": self.grand_closure_pct(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def to_csv(self) -> str:
        """Outer block followed by each inner block, grand-rescaled C_t."""
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(_CSV_COLUMNS)
        _write_block_rows(writer, self.outer, block="All", ct_scale=None)
        for b in self.inner:
            _write_block_rows(
                writer,
                b.local,
                block=b.outer_label,
                ct_scale=(b.leaf_ct_grand_pct, b.share_within_grand_pct, b.share_between_grand_pct),
            )
        return out.getvalue()


_CSV_COLUMNS = ("level", "label", "C_w", "GEI", "P", "R", "W_B", "Index", "C_t_pct")


def _fmt(x: float | None, places: int) -> str:
    # CSV is the display surface: 3 decimals for indices and shares, 2 for
    # percentages; the JSON output keeps full precision.
    return "" if x is None else f"{float(x):.{places}f}"


def _write_block_rows(writer, result: DecompositionResult, block: str, ct_scale) -> None:
    """Emit total/within/between/group rows for one decomposition block.

    ``ct_scale`` carries grand-rescaled inner percentages for nested
    blocks; None means the block IS the grand total.
    """
    if ct_scale is None:
        leaf_ct = [r.contribution_total_pct for r in result.rows]
        within_ct: float | None = result.share_within_pct
        between_ct: float | None = result.share_between_pct
        total_ct: float | None = 100.0 if not result.degenerate else None
    else:
        leaf_ct, within_ct, between_ct = ct_scale
        total_ct = None
    writer.writerow(["total", block, "", "", "", "", "", _fmt(result.total_index.value, 3), _fmt(total_ct, 2)])
    writer.writerow(["within", block, "", "", "", "", _fmt(result.within_index, 3), "", _fmt(within_ct, 2)])
    writer.writerow(["between", block, "", "", "", "", _fmt(result.between_index, 3), "", _fmt(between_ct, 2)])
    prefix = "" if block == "All" else block + "/"
    for r, ct in zip(result.rows, leaf_ct):
        writer.writerow(
            [
                "group",
                prefix + r.label,
                _fmt(r.contribution_within, 3),
                _fmt(r.group_index, 3),
                _fmt(r.population_share, 3),
                _fmt(r.income_share, 3),
                "",
                "",
                _fmt(ct, 2),
            ]
        )


def nested_decompose(
    values: Sequence[float] | np.ndarray,
    weights: Sequence[float] | np.ndarray,
    outer_labels: Sequence[str],
    inner_labels: Sequence[str],
    alpha: float,
    outer_key: str = "group",
    inner_key: str = "subgroup",
    threads: int = 1,
) -> NestedDecompositionResult:
    """Two-level decomposition: outer key, then inner key within each group.

    Leaf contributions are expressed against the grand total by rescaling
    with the outer group's subgroup weight, so leaves plus all between
    terms close to 100%.
    """
    outer = LabeledSample.from_labels(values, weights, outer_labels, key=outer_key)
    result_outer = decompose(outer, alpha, threads)
    inner_arr = np.asarray(inner_labels, dtype=object)

    grand = result_outer.total_index.value
    blocks: list[NestedInnerBlock] = []
    for code, row in enumerate(result_outer.rows):
        if row.zero_weight:
            continue
        mask = outer.codes == code
        local_sample = LabeledSample.from_labels(
            outer.values[mask], outer.weights[mask], list(inner_arr[mask]), key=inner_key
        )
        local = decompose(local_sample, alpha, threads)
        if grand == 0.0:
            leaf = tuple(0.0 for _ in local.rows)
            sw = sb = 0.0
        else:
            leaf = tuple(
                100.0 * row.subgroup_weight * r.contribution_within / grand for r in local.rows
            )
            sw = 100.0 * row.subgroup_weight * local.within_index / grand
            sb = 100.0 * row.subgroup_weight * local.between_index / grand
        blocks.append(
            NestedInnerBlock(
                outer_label=row.label,
                outer_weight=row.subgroup_weight,
                local=local,
                leaf_ct_grand_pct=leaf,
                share_within_grand_pct=sw,
                share_between_grand_pct=sb,
            )
        )
    return NestedDecompositionResult(alpha=alpha, outer=result_outer, inner=tuple(blocks))


# ---------------------------------------------------------------------------
# validation against a published decomposition table

@dataclass(frozen=True)
class PublishedRow:
    level: str  # total | within | between | group
    block: str  # "All" for the top level, else the outer group label
    label: str  # row label within the block
    population_share: float | None
    income_share: float | None
    gei: float | None
    cw_published: float | None
    ct_published: float | None


@dataclass(frozen=True)
class CellCheck:
    block: str
    row: str
    quantity: str  # "C_w" | "C_t" | "index"
    recomputed: float
    published: float
    deviation: float

    def to_dict(self) -> dict:
        return {
            "block": self.block,
            "row": self.row,
            "quantity": self.quantity,
            "recomputed": self.recomputed,
            "published": self.published,
            "deviation": self.deviation,
        }


@dataclass(frozen=True)
class IdentityCheck:
    name: str
    observed: float
    expected: float

    @property
    def deviation(self) -> float:
        return abs(self.observed - self.expected)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "observed": self.observed,
            "expected": self.expected,
            "deviation": self.deviation,
        }


@dataclass
class ValidationReport:
    alpha: float
    grand_index: float
    cells: list[CellCheck] = dc_field(default_factory=list)
    identities: list[IdentityCheck] = dc_field(default_factory=list)
    discrepancies: list[str] = dc_field(default_factory=list)

    def _max_dev(self, quantity: str) -> float:
        devs = [c.deviation for c in self.cells if c.quantity == quantity]
        return max(devs) if devs else 0.0

    @property
    def max_cw_deviation(self) -> float:
        return self._max_dev("C_w")

    @property
    def max_ct_deviation(self) -> float:
        return self._max_dev("C_t")

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "grand_index": self.grand_index,
            "max_cw_deviation": self.max_cw_deviation,
            "max_ct_deviation": self.max_ct_deviation,
            "cells": [c.to_dict() for c in self.cells],
            "identities": [c.to_dict() for c in self.identities],
            "discrepancies": list(self.discrepancies),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"


def load_published_table(path: str | Path) -> list[PublishedRow]:
    """Read a published-table fixture CSV.

    Columns: level, label, P, R, GEI, C_w_published, C_t_published. Labels
    of inner rows are "Block/Row"; block header rows use level total/
    within/between with the block name as label ("All" for the top level).
    """
    rows: list[PublishedRow] = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        required = {"level", "label", "P", "R", "GEI", "C_w_published", "C_t_published"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            raise ValueError(f"fixture {path}: expected columns {sorted(required)}")
        for i, raw in enumerate(reader, start=2):
            level = raw["level"].strip()
            if level not in ("total", "within", "between", "group"):
                raise ValueError(f"fixture {path} line {i}: bad level {level!r}")
            label = raw["label"].strip()
            if level == "group":
                block, _, row_label = label.rpartition("/")
                block = block or "All"
            else:
                block, row_label = label, level
            rows.append(
                PublishedRow(
                    level=level,
                    block=block,
                    label=row_label,
                    population_share=_opt_float(raw["P"]),
                    income_share=_opt_float(raw["R"]),
                    gei=_opt_float(raw["GEI"]),
                    cw_published=_opt_float(raw["C_w_published"]),
                    ct_published=_opt_float(raw["C_t_published"]),
                )
            )
    if not rows:
        raise ValueError(f"fixture {path}: no rows")
    return rows


def _opt_float(text: str | None) -> float | None:
    text = (text or "").strip()
    return float(text) if text else None


def _w_from_shares(p: float, r: float, alpha: float) -> float:
    if p <= 0.0 or r <= 0.0:
        return 0.0
    return r**alpha * p ** (1.0 - alpha)


def validate_published_table(
    fixture: Sequence[PublishedRow] | str | Path,
    alpha: float = 1.3,
) -> ValidationReport:
    """Recompute W, C_w and C_t from published (P, R, GEI) and compare.

    Per block, within/between values are rebuilt from the recomputed group
    contributions; a named block's between residual uses the group index
    published for it in the PARENT block (the value the grand accounting
    actually used), and any disagreement with the block's own header index
    is reported as a discrepancy rather than resolved.
    """
    rows = list(load_published_table(fixture)) if isinstance(fixture, (str, Path)) else list(fixture)
    alpha = float(alpha)

    by_block: dict[str, dict[str, list[PublishedRow] | PublishedRow | None]] = {}
    order: list[str] = []
    for r in rows:
        blk = by_block.setdefault(r.block, {"total": None, "within": None, "between": None, "groups": []})
        if r.block not in order:
            order.append(r.block)
        if r.level == "group":
            blk["groups"].append(r)  # type: ignore[union-attr]
        else:
            if blk[r.level] is not None:
                raise ValueError(f"fixture: duplicate {r.level} row in block {r.block!r}")
            blk[r.level] = r

    top = by_block.get("All")
    if top is None or top["total"] is None or top["total"].gei is None:
        raise ValueError("fixture: missing top-level total row with a grand index")
    grand = float(top["total"].gei)

    report = ValidationReport(alpha=alpha, grand_index=grand)

    # Outer weights and the group index that the grand accounting used.
    parent_w: dict[str, float] = {"All": 1.0}
    parent_gei: dict[str, float] = {"All": grand}
    for g in top["groups"]:
        if g.population_share is None or g.income_share is None or g.gei is None:
            raise ValueError(f"fixture: top group row {g.label!r} needs P, R and GEI")
        parent_w[g.label] = _w_from_shares(g.population_share, g.income_share, alpha)
        parent_gei[g.label] = g.gei

    closure_terms: list[float] = []
    for block_name in order:
        blk = by_block[block_name]
        groups: list[PublishedRow] = blk["groups"]  # type: ignore[assignment]
        if not groups:
            continue
        if block_name not in parent_w:
            raise ValueError(f"fixture: block {block_name!r} lacks a matching top-level group row")
        w_outer = parent_w[block_name]

        sum_p = math.fsum(g.population_share or 0.0 for g in groups)
        sum_r = math.fsum(g.income_share or 0.0 for g in groups)
        report.identities.append(IdentityCheck(f"sum_P[{block_name}]", sum_p, 1.0))
        report.identities.append(IdentityCheck(f"sum_R[{block_name}]", sum_r, 1.0))

        cw_re: list[float] = []
        for g in groups:
            w_j = _w_from_shares(g.population_share or 0.0, g.income_share or 0.0, alpha)
            c_w = w_j * (g.gei or 0.0)
            cw_re.append(c_w)
            if g.cw_published is not None:
                report.cells.append(
                    CellCheck(block_name, g.label, "C_w", c_w, g.cw_published, abs(c_w - g.cw_published))
                )
            c_t = 100.0 * w_outer * c_w / grand
            if g.ct_published is not None:
                report.cells.append(
                    CellCheck(block_name, g.label, "C_t", c_t, g.ct_published, abs(c_t - g.ct_published))
                )

        iw = math.fsum(cw_re)
        block_total_row = blk["total"]
        block_header_gei = block_total_row.gei if block_total_row is not None else None
        effective_total = parent_gei[block_name]
        ib = effective_total - iw

        within_row: PublishedRow | None = blk["within"]  # type: ignore[assignment]
        if within_row is not None:
            if within_row.gei is not None:
                report.cells.append(
                    CellCheck(block_name, "within", "index", iw, within_row.gei, abs(iw - within_row.gei))
                )
            if within_row.ct_published is not None:
                share = 100.0 * w_outer * iw / grand
                report.cells.append(
                    CellCheck(
                        block_name, "within", "C_t", share, within_row.ct_published,
                        abs(share - within_row.ct_published),
                    )
                )
        between_row: PublishedRow | None = blk["between"]  # type: ignore[assignment]
        if between_row is not None:
            if between_row.gei is not None:
                report.cells.append(
                    CellCheck(block_name, "between", "index", ib, between_row.gei, abs(ib - between_row.gei))
                )
            if between_row.ct_published is not None:
                share = 100.0 * w_outer * ib / grand
                report.cells.append(
                    CellCheck(
                        block_name, "between", "C_t", share, between_row.ct_published,
                        abs(share - between_row.ct_published),
                    )
                )
                if between_row.gei is not None:
                    alt = 100.0 * w_outer * between_row.gei / grand
                    if abs(alt - between_row.ct_published) > 0.1:
                        report.discrepancies.append(
                            f"block {block_name!r}: between share from published residual "
                            f"{between_row.gei} gives {alt:.4f} vs published {between_row.ct_published}"
                        )

        # Identity on published numbers alone: within + between = block total.
        if (
            within_row is not None
            and within_row.gei is not None
            and between_row is not None
            and between_row.gei is not None
            and block_header_gei is not None
        ):
            report.identities.append(
                IdentityCheck(
                    f"within+between[{block_name}]",
                    within_row.gei + between_row.gei,
                    block_header_gei,
                )
            )

        # Header-vs-parent disagreement (reported, never resolved).
        if block_header_gei is not None and abs(block_header_gei - effective_total) > 5e-4:
            report.discrepancies.append(
                f"block {block_name!r}: header index {block_header_gei} disagrees with the "
                f"value {effective_total} used for it in the parent block"
            )

        # Closure bookkeeping against the grand total.
        if block_name == "All":
            closure_terms.append(100.0 * ib / grand)
        else:
            closure_terms.extend(100.0 * w_outer * c / grand for c in cw_re)
            closure_terms.append(100.0 * w_outer * ib / grand)
    # Blocks other than "All" replace their parent leaf C_t, so only add the
    # top-level leaves for outer groups without a nested block.
    nested_blocks = {b for b in order if b != "All" and by_block[b]["groups"]}
    for g in top["groups"]:
        if g.label not in nested_blocks:
            w_j = _w_from_shares(g.population_share or 0.0, g.income_share or 0.0, alpha)
            closure_terms.append(100.0 * w_j * (g.gei or 0.0) / grand)
    report.identities.append(
        IdentityCheck("grand_closure_pct", math.fsum(closure_terms), 100.0)
    )
    return report
