"""Match reconstructed example slots to original rows by minimum-cost
assignment.

The pairwise cost is a per-attribute 0/1 compatibility count: an attribute
contributes 1 when the original row's value is impossible for that attribute
under the slot's knowledge, and a label mismatch adds 1. A model audited
against its own training data therefore always admits a zero-cost matching.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .counting import CaptMemo, count_excluding
from .domain import Condition, Conjunction, DatasetSchema, DeterministicDataset, Value, conjoin
from .reconstruction import (
    KnowledgeGroup,
    ReconstructionKnowledge,
    RuleExampleKnowledge,
    TreeExampleKnowledge,
)


class SizeMismatch(Exception):
    """Reconstruction and original dataset have different example counts."""


@dataclass(frozen=True)
class AssignmentResult:
    """permutation[slot] = index of the original row matched to that slot."""

    permutation: tuple[int, ...]
    total_cost: float


def pair_cost(
    group: KnowledgeGroup,
    schema: DatasetSchema,
    row: Sequence[Value],
    label: Value,
    memo: Optional[CaptMemo] = None,
) -> int:
    """Number of attributes of ``row`` incompatible with the group's
    knowledge, plus 1 on label mismatch.

    For rule knowledge, compatibility of one attribute value means some
    admitted vector carries it, which accounts for the excluded antecedents,
    not just the matched conjunction.
    """
    know = group.knowledge
    cost = 0
    if isinstance(know, TreeExampleKnowledge):
        for v, dom in zip(row, know.reduced_domains):
            if v not in dom:
                cost += 1
    else:
        assert isinstance(know, RuleExampleKnowledge)
        for k, v in enumerate(row):
            pinned = conjoin(know.matched, Conjunction((Condition(k, "eq", v),)))
            if count_excluding(pinned, know.excluded, schema, memo) == 0:
                cost += 1
    if label != know.label:
        cost += 1
    return cost


def min_cost_assignment(cost_matrix: Sequence[Sequence[float]]) -> tuple[tuple[int, ...], float]:
    """Optimal assignment on a square cost matrix (Hungarian method)."""
    matrix = np.asarray(cost_matrix, dtype=float)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValueError("cost matrix must be square")
    rows, cols = linear_sum_assignment(matrix)
    permutation = [0] * matrix.shape[0]
    for r, c in zip(rows, cols):
        permutation[r] = int(c)
    return tuple(permutation), float(matrix[rows, cols].sum())


def assign(
    knowledge: ReconstructionKnowledge,
    original: DeterministicDataset,
    memo: Optional[CaptMemo] = None,
) -> AssignmentResult:
    """Minimum-cost matching between reconstructed slots and original rows.

    Groups are expanded to one slot per captured example; slots of the same
    group share a cost row, so costs are computed once per (group, row) pair.
    """
    if knowledge.n != original.n:
        raise SizeMismatch(
            f"reconstruction describes {knowledge.n} examples, original has {original.n}"
        )
    model_names = [a.name for a in knowledge.schema.attributes]
    data_names = [a.name for a in original.schema.attributes]
    if model_names != data_names or (
        knowledge.schema.label_domain.name != original.schema.label_domain.name
    ):
        raise ValueError("reconstruction and original dataset name different columns")

    if memo is None:
        memo = CaptMemo()
    matrix = []
    for group in knowledge.groups:
        if group.multiplicity == 0:
            continue
        costs = [
            pair_cost(group, knowledge.schema, row, label, memo)
            for row, label in zip(original.rows, original.labels)
        ]
        matrix.extend([costs] * group.multiplicity)
    permutation, total = min_cost_assignment(matrix)
    return AssignmentResult(permutation=permutation, total_cost=total)
