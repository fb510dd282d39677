"""Entropy-based success metrics for a reconstruction audit.

Under the uniform-worlds assumption each example captured by a path with w
possible vectors contributes log2(w) bits of residual uncertainty, against a
baseline of log2(product of full domain sizes) bits for an uninformed guess.
The dataset-level score is the ratio of the two totals:

    0 = the model pins the training set down completely,
    1 = the model reveals nothing.

The legacy per-cell metric additionally assumes every cell varies
independently, which holds for tree branches but not for rule lists, where
"did not match an earlier rule" ties attributes together.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Iterable, Optional

from . import counting
from .domain import DatasetSchema, Model
from .modelio import dumps_canonical, schema_to_doc
from .reconstruction import (
    ReconstructionKnowledge,
    TreeExampleKnowledge,
    describe_group,
    reconstruct,
)

_FLOAT_EXACT_LIMIT = 1 << 53


class UndefinedForRuleLists(Exception):
    """The per-cell metric needs independent cells; rule lists break that."""


def exact_log2(count: int) -> float:
    """log2 of an exact positive integer, accurate to ~1 ulp even when the
    integer exceeds float precision (top 53 bits plus the bit-length shift)."""
    if count <= 0:
        raise ValueError("count must be positive")
    if count < _FLOAT_EXACT_LIMIT:
        return math.log2(count)
    shift = count.bit_length() - 53
    return math.log2(count >> shift) + shift


def uninformed_bits(schema: DatasetSchema, n: int) -> float:
    """Joint entropy of n uninformed examples: n * log2(product of |V_k|)."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return n * exact_log2(schema.full_world_count())


def per_example_ratio(world_count: int, schema: DatasetSchema) -> float:
    """Residual-entropy ratio for one example: log2(count) over the full
    per-example baseline. Exactly 0 for a pinned-down example, exactly 1 for
    no knowledge."""
    full = schema.full_world_count()
    if world_count < 1:
        raise ValueError("world count must be at least 1")
    if full == 1:
        return 0.0  # nothing to know; 0/0 resolves to "fully determined"
    if world_count == full:
        return 1.0
    return min(max(exact_log2(world_count) / exact_log2(full), 0.0), 1.0)


def leak_cdf(ratios: Iterable[float]) -> tuple[tuple[float, float], ...]:
    """Sorted (ratio, cumulative proportion) pairs: at each distinct ratio,
    the share of examples at or below it. Last proportion is 1."""
    values = sorted(ratios)
    if not values:
        return ()
    n = len(values)
    points = []
    for i, v in enumerate(values):
        if i + 1 < n and values[i + 1] == v:
            continue
        points.append((v, (i + 1) / n))
    return tuple(points)


# ---------------------------------------------------------------------------
# Legacy per-cell metric (trees only)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LegacyDistResult:
    """Average per-cell entropy-reduction ratio and its per-group breakdown.

    per_group_ratios[j][k] is the ratio for attribute k of every example in
    group j; columns with a single-valued domain contribute 0 by convention.
    """

    value: float
    per_group_ratios: tuple[tuple[float, ...], ...]


def dist_legacy(knowledge: ReconstructionKnowledge) -> LegacyDistResult:
    if knowledge.model_kind != "tree":
        raise UndefinedForRuleLists(
            "the per-cell metric requires independent cells; rule-list knowledge "
            "correlates attributes, use the generalized metric instead"
        )
    schema = knowledge.schema
    d = schema.n_attributes
    n = knowledge.n
    per_group = []
    weighted_sum = 0.0
    for group in knowledge.groups:
        know = group.knowledge
        assert isinstance(know, TreeExampleKnowledge)
        ratios = []
        for attr, dom in zip(schema.attributes, know.reduced_domains):
            if attr.cardinality == 1:
                ratios.append(0.0)
            else:
                ratios.append(exact_log2(len(dom)) / exact_log2(attr.cardinality))
        per_group.append(tuple(ratios))
        weighted_sum += group.multiplicity * sum(ratios)
    return LegacyDistResult(value=weighted_sum / (n * d), per_group_ratios=tuple(per_group))


# ---------------------------------------------------------------------------
# Generalized metric
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GroupAudit:
    path_id: int
    multiplicity: int
    world_count: int
    bits_per_example: float
    entropy_ratio: float
    description: str


@dataclass(frozen=True)
class AuditReport:
    """Everything the audit measured, per decision path and overall."""

    model_kind: str
    n_examples: int
    dist_g: float
    numerator_bits: float
    denominator_bits: float
    dist_legacy: Optional[float]
    per_group: tuple[GroupAudit, ...]
    leak_distribution: tuple[tuple[float, float], ...]


def dist_g(
    knowledge: ReconstructionKnowledge,
    memo: Optional[counting.CaptMemo] = None,
) -> AuditReport:
    """Generalized entropy-ratio audit of a reconstruction.

    The numerator sums, over decision paths, support times log2(world count);
    the denominator is the uninformed baseline. Extremes are exact: every
    group pinned to one vector gives 0, every group spanning the full space
    gives 1.
    """
    schema = knowledge.schema
    n = knowledge.n
    counts = counting.worlds_per_example(knowledge, memo)
    full = schema.full_world_count()

    numerator = 0.0
    groups = []
    ratios_expanded = []
    for group, count in zip(knowledge.groups, counts):
        bits = exact_log2(count) if count >= 1 else 0.0
        ratio = per_example_ratio(count, schema) if count >= 1 else 0.0
        numerator += group.multiplicity * bits
        groups.append(
            GroupAudit(
                path_id=group.path_id,
                multiplicity=group.multiplicity,
                world_count=count,
                bits_per_example=bits,
                entropy_ratio=ratio,
                description=describe_group(group, schema),
            )
        )
        ratios_expanded.extend([ratio] * group.multiplicity)

    denominator = uninformed_bits(schema, n)
    occupied = [(g, c) for g, c in zip(knowledge.groups, counts) if g.multiplicity > 0]
    if full == 1 or all(c == 1 for _, c in occupied):
        value = 0.0
    elif all(c == full for _, c in occupied):
        value = 1.0
    else:
        value = min(max(numerator / denominator, 0.0), 1.0)

    legacy = dist_legacy(knowledge).value if knowledge.model_kind == "tree" else None
    return AuditReport(
        model_kind=knowledge.model_kind,
        n_examples=n,
        dist_g=value,
        numerator_bits=numerator,
        denominator_bits=denominator,
        dist_legacy=legacy,
        per_group=tuple(groups),
        leak_distribution=leak_cdf(ratios_expanded),
    )


def audit_model(model: Model, memo: Optional[counting.CaptMemo] = None) -> AuditReport:
    """Reconstruct and score a model in one step."""
    return dist_g(reconstruct(model), memo)


# ---------------------------------------------------------------------------
# Report documents
# ---------------------------------------------------------------------------

REPORT_CSV_FIELDS = (
    "path_id",
    "multiplicity",
    "world_count",
    "bits_per_example",
    "entropy_ratio",
    "description",
)


def report_to_doc(report: AuditReport, schema: Optional[DatasetSchema] = None) -> dict:
    doc = {
        "model_kind": report.model_kind,
        "n_examples": report.n_examples,
        "dist_g": report.dist_g,
        "numerator_bits": report.numerator_bits,
        "denominator_bits": report.denominator_bits,
        "dist_legacy": report.dist_legacy,
        "per_group": [
            {
                "path_id": g.path_id,
                "multiplicity": g.multiplicity,
                "world_count": g.world_count,
                "bits_per_example": g.bits_per_example,
                "entropy_ratio": g.entropy_ratio,
                "description": g.description,
            }
            for g in report.per_group
        ],
        "leak_cdf": [[ratio, proportion] for ratio, proportion in report.leak_distribution],
    }
    if schema is not None:
        doc["schema"] = schema_to_doc(schema)
    return doc


def report_to_text(report: AuditReport, schema: Optional[DatasetSchema] = None) -> str:
    return dumps_canonical(report_to_doc(report, schema))


def report_groups_csv(report: AuditReport) -> str:
    """One row per decision path, ready for plotting tools."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(REPORT_CSV_FIELDS)
    for g in report.per_group:
        writer.writerow(
            [g.path_id, g.multiplicity, g.world_count, g.bits_per_example, g.entropy_ratio, g.description]
        )
    return buf.getvalue()
